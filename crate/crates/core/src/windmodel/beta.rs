//! Beta-distribution fitting of normalised power values.

use statrs::function::gamma::{digamma, ln_gamma};

use crate::numerics::{integrate_power_weighted, trigamma};

use super::WindModelError;

/// Values are clamped into `[CLAMP, 1 - CLAMP]` before fitting so that
/// boundary mass (becalmed or rated operation) stays inside the open support
/// of the Beta distribution.
pub const CLAMP: f64 = 1e-6;

/// Minimum number of samples accepted by [`fit_beta`].
pub const MIN_FIT_SAMPLES: usize = 30;

/// Beta distribution of normalised power on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParams {
    pub alpha: f64,
    pub beta: f64,
}

impl BetaParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, WindModelError> {
        if !(alpha.is_finite() && alpha > 0.0 && beta.is_finite() && beta > 0.0) {
            return Err(WindModelError::InvalidParameter(format!(
                "Beta shapes must be positive and finite, got alpha={alpha}, beta={beta}"
            )));
        }
        Ok(Self { alpha, beta })
    }

    /// Distribution mean `alpha / (alpha + beta)`.
    pub fn mean(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }

    /// Natural log of the normalising Beta function `B(alpha, beta)`.
    pub fn ln_norm(&self) -> f64 {
        ln_gamma(self.alpha) + ln_gamma(self.beta) - ln_gamma(self.alpha + self.beta)
    }

    /// Density at `x` in `(0, 1)`; zero outside.
    pub fn pdf(&self, x: f64) -> f64 {
        if !(0.0..=1.0).contains(&x) {
            return 0.0;
        }
        ((self.alpha - 1.0) * x.ln() + (self.beta - 1.0) * (1.0 - x).ln() - self.ln_norm()).exp()
    }

    /// Numerical mass of the density over `[0, 1]`.
    ///
    /// Uses singularity-absorbing quadrature, so it is meaningful even for
    /// shapes below one; serves as a self-check that fitted densities
    /// integrate to one.
    pub fn total_mass(&self) -> f64 {
        integrate_power_weighted(|_| 1.0, self.alpha, self.beta, 0.0, 1.0) * (-self.ln_norm()).exp()
    }
}

/// Maximum-likelihood Beta fit of normalised power samples.
///
/// Input values are clamped into `[1e-6, 1 - 1e-6]`; the digamma likelihood
/// equations are then solved by damped Newton iteration from a
/// method-of-moments start. Samples with (numerically) no spread are
/// rejected as degenerate, with the boundary-mass shares included in the
/// error message since heavy clamping is the usual cause.
pub fn fit_beta(values: &[f64]) -> Result<BetaParams, WindModelError> {
    if values.len() < MIN_FIT_SAMPLES {
        return Err(WindModelError::TooFewSamples {
            got: values.len(),
            min: MIN_FIT_SAMPLES,
        });
    }
    let mut lower_clamped = 0usize;
    let mut upper_clamped = 0usize;
    let mut clamped = Vec::with_capacity(values.len());
    for (i, &x) in values.iter().enumerate() {
        if !x.is_finite() {
            return Err(WindModelError::InvalidSample { index: i, value: x });
        }
        if x <= CLAMP {
            lower_clamped += 1;
            clamped.push(CLAMP);
        } else if x >= 1.0 - CLAMP {
            upper_clamped += 1;
            clamped.push(1.0 - CLAMP);
        } else {
            clamped.push(x);
        }
    }

    let n = clamped.len() as f64;
    let mean = clamped.iter().sum::<f64>() / n;
    let var = clamped.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    if var < 1e-12 {
        return Err(WindModelError::DegenerateSamples(format!(
            "no spread after clamping (variance {var:.3e}; {:.1}% at lower bound, {:.1}% at upper bound)",
            100.0 * lower_clamped as f64 / n,
            100.0 * upper_clamped as f64 / n,
        )));
    }
    let mean_ln_x = clamped.iter().map(|x| x.ln()).sum::<f64>() / n;
    let mean_ln_1mx = clamped.iter().map(|x| (1.0 - x).ln()).sum::<f64>() / n;

    // Method-of-moments start.
    let scale = (mean * (1.0 - mean) / var - 1.0).max(1e-3);
    let mut alpha = (mean * scale).max(1e-4);
    let mut beta = ((1.0 - mean) * scale).max(1e-4);

    // Damped Newton on the two digamma score equations.
    let tol = 1e-8;
    for _ in 0..200 {
        let s = alpha + beta;
        let f1 = digamma(alpha) - digamma(s) - mean_ln_x;
        let f2 = digamma(beta) - digamma(s) - mean_ln_1mx;
        let tri_s = trigamma(s);
        let j11 = trigamma(alpha) - tri_s;
        let j22 = trigamma(beta) - tri_s;
        let det = j11 * j22 - tri_s * tri_s;
        if det.abs() < 1e-300 {
            return Err(WindModelError::FitNotConverged(
                "singular Jacobian in Beta likelihood equations".into(),
            ));
        }
        // Solve J * d = f (J has off-diagonal entries -tri_s).
        let d_alpha = (f1 * j22 + f2 * tri_s) / det;
        let d_beta = (f2 * j11 + f1 * tri_s) / det;
        let mut step = 1.0;
        while alpha - step * d_alpha <= 0.0 || beta - step * d_beta <= 0.0 {
            step *= 0.5;
            if step < 1e-12 {
                return Err(WindModelError::FitNotConverged(
                    "step collapsed while keeping shapes positive".into(),
                ));
            }
        }
        alpha -= step * d_alpha;
        beta -= step * d_beta;
        if (step * d_alpha).abs() <= tol * (1.0 + alpha)
            && (step * d_beta).abs() <= tol * (1.0 + beta)
        {
            return BetaParams::new(alpha, beta);
        }
    }
    Err(WindModelError::FitNotConverged(format!(
        "no convergence after 200 iterations (alpha={alpha:.6}, beta={beta:.6})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use statrs::distribution::ContinuousCDF;

    /// Inverse-CDF Beta sampler used as a test oracle (independent of the
    /// fitting code under test).
    fn sample_beta(alpha: f64, beta: f64, n: usize, seed: u64) -> Vec<f64> {
        let dist = statrs::distribution::Beta::new(alpha, beta).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| dist.inverse_cdf(rng.random::<f64>())).collect()
    }

    #[test]
    fn fit_recovers_known_parameters() {
        let samples = sample_beta(2.0, 5.0, 10_000, 5);
        let fit = fit_beta(&samples).unwrap();
        assert!(
            (fit.alpha - 2.0).abs() <= 0.15,
            "alpha {} too far from 2",
            fit.alpha
        );
        assert!(
            (fit.beta - 5.0).abs() <= 0.35,
            "beta {} too far from 5",
            fit.beta
        );
    }

    #[test]
    fn fitted_density_integrates_to_one() {
        let samples = sample_beta(2.0, 5.0, 5_000, 17);
        let fit = fit_beta(&samples).unwrap();
        assert_relative_eq!(fit.total_mass(), 1.0, epsilon = 1e-6);

        // Boundary-heavy data pushes the fitted shapes below one; the
        // quadrature must still see unit mass.
        let mut heavy: Vec<f64> = sample_beta(0.5, 0.6, 2_000, 23);
        heavy.extend(std::iter::repeat_n(0.0, 1_000));
        heavy.extend(std::iter::repeat_n(1.0, 500));
        let fit = fit_beta(&heavy).unwrap();
        assert!(fit.alpha < 1.0, "expected a left-singular fit, got {fit:?}");
        assert_relative_eq!(fit.total_mass(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn fit_clamps_out_of_range_values() {
        // Exact zeros and ones are admissible input; they are clamped, not
        // rejected.
        let mut samples = sample_beta(2.0, 2.0, 1_000, 3);
        samples.extend([0.0, 0.0, 1.0]);
        let fit = fit_beta(&samples).unwrap();
        assert!(fit.alpha > 0.0 && fit.beta > 0.0);
    }

    #[test]
    fn fit_rejects_degenerate_and_short_input() {
        assert!(matches!(
            fit_beta(&[0.5; 10]),
            Err(WindModelError::TooFewSamples { .. })
        ));
        let err = fit_beta(&[0.5; 100]).unwrap_err();
        assert!(matches!(err, WindModelError::DegenerateSamples(_)));
        // All-boundary data is degenerate too, and the message says where
        // the mass sat.
        let err = fit_beta(&[0.0; 100]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("100.0% at lower bound"), "message was: {msg}");
    }

    #[test]
    fn mean_is_alpha_over_sum() {
        let p = BetaParams::new(2.0, 6.0).unwrap();
        assert_relative_eq!(p.mean(), 0.25, epsilon = 1e-15);
    }
}
