//! Weibull fitting and seeded synthetic sampling of wind-speed series.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{synthetic_start, WeibullParams, WindModelError, WindSeries, SYNTHETIC_HEIGHT_M};

/// Minimum number of input samples accepted by [`fit_weibull`].
pub const MIN_FIT_SAMPLES: usize = 30;

/// Result of a Weibull maximum-likelihood fit, with calm-exclusion
/// diagnostics: exact zero speeds (calms / stowed instrument readings) are
/// excluded from the likelihood and reported here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeibullFit {
    pub params: WeibullParams,
    /// Positive samples the likelihood was maximised over.
    pub used: usize,
    /// Exact-zero samples excluded from the fit.
    pub excluded_zeros: usize,
}

impl WeibullFit {
    /// Fraction of the input that was excluded as exact zeros.
    pub fn zero_fraction(&self) -> f64 {
        let total = self.used + self.excluded_zeros;
        if total == 0 {
            0.0
        } else {
            self.excluded_zeros as f64 / total as f64
        }
    }
}

/// Maximum-likelihood Weibull fit of wind speeds in m/s.
///
/// Exact zeros are excluded from the likelihood (the two-parameter Weibull
/// has no mass at zero) and reported in the result. The profile-likelihood
/// equation for the shape parameter is solved by bisection — it is strictly
/// increasing in `k` — and the scale then follows in closed form. Constant
/// or empty-after-exclusion samples are rejected as degenerate.
pub fn fit_weibull(speeds: &[f64]) -> Result<WeibullFit, WindModelError> {
    if speeds.len() < MIN_FIT_SAMPLES {
        return Err(WindModelError::TooFewSamples {
            got: speeds.len(),
            min: MIN_FIT_SAMPLES,
        });
    }
    let mut positive = Vec::with_capacity(speeds.len());
    let mut zeros = 0usize;
    for (i, &u) in speeds.iter().enumerate() {
        if !u.is_finite() || u < 0.0 {
            return Err(WindModelError::InvalidSample { index: i, value: u });
        }
        if u == 0.0 {
            zeros += 1;
        } else {
            positive.push(u);
        }
    }
    if positive.is_empty() {
        return Err(WindModelError::DegenerateSamples(
            "all samples are zero".into(),
        ));
    }
    if positive.len() < 2 {
        return Err(WindModelError::DegenerateSamples(format!(
            "only {} positive sample(s) after excluding zeros",
            positive.len()
        )));
    }

    // Work with speeds scaled by their maximum so u^k cannot overflow.
    let u_max = positive.iter().cloned().fold(f64::MIN, f64::max);
    let scaled: Vec<f64> = positive.iter().map(|u| u / u_max).collect();
    let log_u: Vec<f64> = positive.iter().map(|u| u.ln()).collect();
    let mean_log = log_u.iter().sum::<f64>() / log_u.len() as f64;

    // Profile-likelihood score in k; strictly increasing, root is the MLE.
    let score = |k: f64| -> f64 {
        let mut s0 = 0.0;
        let mut s1 = 0.0;
        for (s, lu) in scaled.iter().zip(log_u.iter()) {
            let w = s.powf(k);
            s0 += w;
            s1 += w * lu;
        }
        s1 / s0 - 1.0 / k - mean_log
    };

    let mut lo = 1e-3;
    let mut hi = 100.0;
    if score(hi) <= 0.0 {
        // Happens only for (near-)constant samples: the score stays negative
        // for every finite shape, so the MLE runs away to infinity.
        return Err(WindModelError::DegenerateSamples(
            "samples have no spread; shape estimate diverges".into(),
        ));
    }
    if score(lo) >= 0.0 {
        return Err(WindModelError::DegenerateSamples(
            "shape estimate collapses to zero".into(),
        ));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if score(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi.max(1.0) {
            break;
        }
    }
    let k = 0.5 * (lo + hi);
    let s0: f64 = scaled.iter().map(|s| s.powf(k)).sum();
    let c = u_max * (s0 / scaled.len() as f64).powf(1.0 / k);

    Ok(WeibullFit {
        params: WeibullParams::new(c, k)?,
        used: positive.len(),
        excluded_zeros: zeros,
    })
}

/// Draw `n` hourly synthetic speeds by inverse-CDF sampling of the Weibull
/// distribution with a ChaCha8 generator seeded from `seed`.
///
/// The series starts at the fixed synthetic epoch, is labelled
/// `synthetic` and carries the standard anemometer height. Identical seeds
/// produce identical series.
pub fn sample_wind(
    params: &WeibullParams,
    n: usize,
    seed: u64,
) -> Result<WindSeries, WindModelError> {
    if n == 0 {
        return Err(WindModelError::EmptySeries);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = synthetic_start();
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let u: f64 = rng.random();
        samples.push((
            start + chrono::Duration::hours(i as i64),
            params.quantile(u),
        ));
    }
    WindSeries::new("synthetic", SYNTHETIC_HEIGHT_M, samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_known_parameters() {
        let params = WeibullParams::new(9.0, 1.8).unwrap();
        let series = sample_wind(&params, 10_000, 7).unwrap();
        let fit = fit_weibull(&series.speeds_vec()).unwrap();
        assert!(
            (fit.params.scale_c - 9.0).abs() <= 0.2,
            "scale {} too far from 9",
            fit.params.scale_c
        );
        assert!(
            (fit.params.shape_k - 1.8).abs() <= 0.1,
            "shape {} too far from 1.8",
            fit.params.shape_k
        );
        assert_eq!(fit.excluded_zeros, 0);
        assert_eq!(fit.used, 10_000);
    }

    #[test]
    fn fit_excludes_zeros_and_reports_fraction() {
        let params = WeibullParams::new(9.0, 1.8).unwrap();
        let mut speeds = sample_wind(&params, 2_000, 13).unwrap().speeds_vec();
        let clean_fit = fit_weibull(&speeds).unwrap();
        speeds.extend(std::iter::repeat_n(0.0, 500));
        let fit = fit_weibull(&speeds).unwrap();
        // Zeros change the diagnostics, not the fitted parameters.
        assert_eq!(fit.params, clean_fit.params);
        assert_eq!(fit.excluded_zeros, 500);
        assert!((fit.zero_fraction() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn fit_rejects_small_and_degenerate_input() {
        assert!(matches!(
            fit_weibull(&[5.0; 10]),
            Err(WindModelError::TooFewSamples { got: 10, min: 30 })
        ));
        assert!(matches!(
            fit_weibull(&[5.0; 50]),
            Err(WindModelError::DegenerateSamples(_))
        ));
        assert!(matches!(
            fit_weibull(&[0.0; 50]),
            Err(WindModelError::DegenerateSamples(_))
        ));
        let mut with_nan = vec![4.0; 40];
        with_nan[7] = f64::NAN;
        assert!(matches!(
            fit_weibull(&with_nan),
            Err(WindModelError::InvalidSample { index: 7, .. })
        ));
    }

    #[test]
    fn sample_mean_matches_distribution_mean() {
        let params = WeibullParams::new(9.0, 1.8).unwrap();
        let series = sample_wind(&params, 8760, 11).unwrap();
        let mean = series.speeds().sum::<f64>() / series.len() as f64;
        // Distribution mean is c * Gamma(1 + 1/k) = 8.00358 for these values.
        assert!((params.mean() - 8.00358).abs() < 1e-4);
        assert!(
            (mean - params.mean()).abs() <= 0.15,
            "sample mean {mean} too far from {}",
            params.mean()
        );
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let params = WeibullParams::new(9.0, 1.8).unwrap();
        let a = sample_wind(&params, 500, 42).unwrap();
        let b = sample_wind(&params, 500, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_wind(&params, 500, 43).unwrap();
        assert_ne!(a.speeds_vec(), c.speeds_vec());
    }

    #[test]
    fn sample_rejects_empty_request() {
        let params = WeibullParams::new(9.0, 1.8).unwrap();
        assert!(matches!(
            sample_wind(&params, 0, 1),
            Err(WindModelError::EmptySeries)
        ));
    }
}
