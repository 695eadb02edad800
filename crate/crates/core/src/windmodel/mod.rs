//! Statistical wind and power modelling.
//!
//! Converts hourly wind-speed series into the probabilistic inputs the
//! curtailment and investment analyses need: Weibull speed distributions,
//! seeded synthetic series with controllable cross-site correlation,
//! hub-height extrapolation, normalised turbine power, Beta fits of power
//! and hour-by-season joint power histograms.

mod beta;
mod histogram;
mod weibull;

pub use beta::{fit_beta, BetaParams};
pub use histogram::{joint_histogram, JointPowerDistribution};
pub use weibull::{fit_weibull, sample_wind, WeibullFit};

use chrono::{DateTime, Datelike, TimeZone, Timelike, Utc};
use thiserror::Error;

/// Errors produced by the wind-modelling operations.
#[derive(Debug, Error)]
pub enum WindModelError {
    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { got: usize, min: usize },
    #[error("invalid sample at index {index}: {value}")]
    InvalidSample { index: usize, value: f64 },
    #[error("degenerate sample set: {0}")]
    DegenerateSamples(String),
    #[error("fit did not converge: {0}")]
    FitNotConverged(String),
    #[error("series length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("series timestamps differ at index {index}")]
    MisalignedSeries { index: usize },
    #[error("timestamps not strictly increasing at index {index}")]
    NonMonotonicTimestamps { index: usize },
    #[error("timestamp at index {index} is not on a whole hour")]
    OffHourTimestamp { index: usize },
    #[error("correlation weight must lie in [0, 1], got {0}")]
    InvalidCorrelation(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("empty series")]
    EmptySeries,
}

/// Two-parameter Weibull distribution of wind speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeibullParams {
    /// Scale parameter `c` in m/s.
    pub scale_c: f64,
    /// Dimensionless shape parameter `k`.
    pub shape_k: f64,
}

impl WeibullParams {
    pub fn new(scale_c: f64, shape_k: f64) -> Result<Self, WindModelError> {
        if !(scale_c.is_finite() && scale_c > 0.0) {
            return Err(WindModelError::InvalidParameter(format!(
                "Weibull scale must be positive and finite, got {scale_c}"
            )));
        }
        if !(shape_k.is_finite() && shape_k > 0.0) {
            return Err(WindModelError::InvalidParameter(format!(
                "Weibull shape must be positive and finite, got {shape_k}"
            )));
        }
        Ok(Self { scale_c, shape_k })
    }

    /// Distribution mean `c * Gamma(1 + 1/k)` in m/s.
    pub fn mean(&self) -> f64 {
        self.scale_c * statrs::function::gamma::gamma(1.0 + 1.0 / self.shape_k)
    }

    /// Inverse CDF: maps a uniform draw `u` in `[0, 1)` to a speed.
    pub fn quantile(&self, u: f64) -> f64 {
        self.scale_c * (-(1.0 - u).ln()).powf(1.0 / self.shape_k)
    }
}

/// Hourly wind-speed series at one location and measurement height.
///
/// Timestamps are UTC, on the whole hour and strictly increasing; gaps are
/// permitted (cleaning may leave long outages unfilled). Speeds are in m/s
/// and non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct WindSeries {
    pub location_id: String,
    pub height_m: f64,
    samples: Vec<(DateTime<Utc>, f64)>,
}

impl WindSeries {
    pub fn new(
        location_id: impl Into<String>,
        height_m: f64,
        samples: Vec<(DateTime<Utc>, f64)>,
    ) -> Result<Self, WindModelError> {
        if !(height_m.is_finite() && height_m > 0.0) {
            return Err(WindModelError::InvalidParameter(format!(
                "measurement height must be positive, got {height_m}"
            )));
        }
        for (i, (ts, speed)) in samples.iter().enumerate() {
            if ts.minute() != 0 || ts.second() != 0 || ts.nanosecond() != 0 {
                return Err(WindModelError::OffHourTimestamp { index: i });
            }
            if i > 0 && samples[i - 1].0 >= *ts {
                return Err(WindModelError::NonMonotonicTimestamps { index: i });
            }
            if !(speed.is_finite() && *speed >= 0.0) {
                return Err(WindModelError::InvalidSample {
                    index: i,
                    value: *speed,
                });
            }
        }
        Ok(Self {
            location_id: location_id.into(),
            height_m,
            samples,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[(DateTime<Utc>, f64)] {
        &self.samples
    }

    pub fn timestamps(&self) -> impl Iterator<Item = DateTime<Utc>> + '_ {
        self.samples.iter().map(|(t, _)| *t)
    }

    pub fn speeds(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|(_, s)| *s)
    }

    pub fn speeds_vec(&self) -> Vec<f64> {
        self.speeds().collect()
    }
}

/// First timestamp used for synthetic series.
pub fn synthetic_start() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2000, 1, 1, 0, 0, 0).unwrap()
}

/// Measurement height attributed to synthetic series (anemometer standard).
pub const SYNTHETIC_HEIGHT_M: f64 = 10.0;

/// Shape of the normalised power curve between cut-in and rated speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveModel {
    /// Logistic curve `1 / (1 + exp(-steepness (u - midpoint)))`, suitable
    /// for fitting manufacturer data.
    Sigmoid { steepness: f64, midpoint: f64 },
    /// Cubic ramp `(u^3 - cut_in^3) / (rated_speed^3 - cut_in^3)`, capped at
    /// 1 from the rated speed onwards. A generic stand-in curve that tracks
    /// the cubic dependence of wind power on speed.
    CubicRamp,
}

/// Turbine power curve mapping speed (m/s) to normalised output in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerCurve {
    pub rated_mw: f64,
    pub cut_in: f64,
    pub rated_speed: f64,
    pub cut_out: f64,
    pub model: CurveModel,
}

impl PowerCurve {
    pub fn new(
        rated_mw: f64,
        cut_in: f64,
        rated_speed: f64,
        cut_out: f64,
        model: CurveModel,
    ) -> Result<Self, WindModelError> {
        if !(rated_mw.is_finite() && rated_mw > 0.0) {
            return Err(WindModelError::InvalidParameter(format!(
                "rated power must be positive, got {rated_mw}"
            )));
        }
        if !(cut_in >= 0.0 && cut_in < rated_speed && rated_speed < cut_out) {
            return Err(WindModelError::InvalidParameter(format!(
                "speeds must satisfy 0 <= cut_in < rated_speed < cut_out, \
                 got {cut_in} / {rated_speed} / {cut_out}"
            )));
        }
        if let CurveModel::Sigmoid { steepness, .. } = model {
            if !(steepness.is_finite() && steepness > 0.0) {
                return Err(WindModelError::InvalidParameter(format!(
                    "sigmoid steepness must be positive, got {steepness}"
                )));
            }
        }
        Ok(Self {
            rated_mw,
            cut_in,
            rated_speed,
            cut_out,
            model,
        })
    }

    /// 2.05 MW turbine with a logistic curve calibrated against a commercial
    /// 2 MW-class machine (cut-in 3, rated 13, cut-out 28 m/s).
    pub fn default_sigmoid() -> Self {
        Self::new(
            2.05,
            3.0,
            13.0,
            28.0,
            CurveModel::Sigmoid {
                steepness: 0.3921,
                midpoint: 16.4287,
            },
        )
        .expect("reference curve parameters are valid")
    }

    /// Generic turbine of the given rating with a cubic ramp between cut-in
    /// 3 m/s and rated 13 m/s, cut-out 28 m/s. Used for synthetic studies
    /// where no specific machine is being modelled.
    pub fn generic_ramp(rated_mw: f64) -> Result<Self, WindModelError> {
        Self::new(rated_mw, 3.0, 13.0, 28.0, CurveModel::CubicRamp)
    }

    /// Normalised output in `[0, 1]` for a speed in m/s: zero below cut-in
    /// and at or above cut-out, monotone non-decreasing in between.
    pub fn normalized(&self, speed: f64) -> f64 {
        // The negated comparison deliberately routes NaN speeds to zero.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(speed >= self.cut_in) || speed >= self.cut_out {
            return 0.0;
        }
        match self.model {
            CurveModel::Sigmoid {
                steepness,
                midpoint,
            } => (1.0 / (1.0 + (-steepness * (speed - midpoint)).exp())).clamp(0.0, 1.0),
            CurveModel::CubicRamp => {
                if speed >= self.rated_speed {
                    1.0
                } else {
                    let ci3 = self.cut_in.powi(3);
                    ((speed.powi(3) - ci3) / (self.rated_speed.powi(3) - ci3)).clamp(0.0, 1.0)
                }
            }
        }
    }

    /// Output in MW for a speed in m/s.
    pub fn output_mw(&self, speed: f64) -> f64 {
        self.rated_mw * self.normalized(speed)
    }
}

/// Hour-of-day and season cell used to bin series.
///
/// `hour` runs 1..=24 where 1 covers 00:00–01:00 UTC. `season` is
/// 1 = spring (MAM), 2 = summer (JJA), 3 = autumn (SON), 4 = winter (DJF).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HourSeasonKey {
    pub hour: u8,
    pub season: u8,
}

/// Number of distinct hour-season cells.
pub const HOUR_SEASON_BINS: usize = 96;

impl HourSeasonKey {
    pub fn new(hour: u8, season: u8) -> Result<Self, WindModelError> {
        if !(1..=24).contains(&hour) {
            return Err(WindModelError::InvalidParameter(format!(
                "hour must lie in 1..=24, got {hour}"
            )));
        }
        if !(1..=4).contains(&season) {
            return Err(WindModelError::InvalidParameter(format!(
                "season must lie in 1..=4, got {season}"
            )));
        }
        Ok(Self { hour, season })
    }

    pub fn from_timestamp(ts: DateTime<Utc>) -> Self {
        let hour = ts.hour() as u8 + 1;
        let season = match ts.month() {
            3..=5 => 1,
            6..=8 => 2,
            9..=11 => 3,
            _ => 4,
        };
        Self { hour, season }
    }

    /// Dense index in `0..96`: seasons are blocks of 24 hours.
    pub fn index(&self) -> usize {
        (self.season as usize - 1) * 24 + (self.hour as usize - 1)
    }

    pub fn from_index(index: usize) -> Result<Self, WindModelError> {
        if index >= HOUR_SEASON_BINS {
            return Err(WindModelError::InvalidParameter(format!(
                "hour-season index must lie in 0..96, got {index}"
            )));
        }
        Ok(Self {
            hour: (index % 24 + 1) as u8,
            season: (index / 24 + 1) as u8,
        })
    }

    /// All 96 keys in index order.
    pub fn all() -> impl Iterator<Item = Self> {
        (0..HOUR_SEASON_BINS).map(|i| Self::from_index(i).expect("index in range"))
    }
}

/// Blend an independent series against a reference so the pair has the
/// requested rank correlation `r` in `[0, 1]`.
///
/// The blend weight is `arccos(1 - 2r) / pi`: `r = 0` returns the
/// independent series unchanged, `r = 1` reproduces the reference exactly
/// and `r = 0.5` is the pointwise arithmetic mean. Both series must share
/// identical timestamps.
pub fn correlate(
    reference: &WindSeries,
    independent: &WindSeries,
    r: f64,
) -> Result<WindSeries, WindModelError> {
    if !(0.0..=1.0).contains(&r) {
        return Err(WindModelError::InvalidCorrelation(r));
    }
    if reference.len() != independent.len() {
        return Err(WindModelError::LengthMismatch {
            left: reference.len(),
            right: independent.len(),
        });
    }
    let weight = (1.0 - 2.0 * r).acos() / std::f64::consts::PI;
    let mut samples = Vec::with_capacity(reference.len());
    for (i, ((t_ref, u_ref), (t_ind, u_ind))) in reference
        .samples
        .iter()
        .zip(independent.samples.iter())
        .enumerate()
    {
        if t_ref != t_ind {
            return Err(WindModelError::MisalignedSeries { index: i });
        }
        samples.push((*t_ref, weight * u_ref + (1.0 - weight) * u_ind));
    }
    WindSeries::new(
        independent.location_id.clone(),
        independent.height_m,
        samples,
    )
}

/// Extrapolate speeds from anemometer height `z_a` to hub height `z_h`
/// with the logarithmic wind profile for surface roughness length `z_o`
/// (all in metres). The returned series carries `z_h` as its height.
pub fn extrapolate_hub(
    series: &WindSeries,
    z_a: f64,
    z_h: f64,
    z_o: f64,
) -> Result<WindSeries, WindModelError> {
    for (name, v) in [("anemometer height", z_a), ("hub height", z_h), ("roughness length", z_o)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(WindModelError::InvalidParameter(format!(
                "{name} must be positive and finite, got {v}"
            )));
        }
    }
    if z_a <= z_o || z_h <= z_o {
        return Err(WindModelError::InvalidParameter(format!(
            "heights must exceed the roughness length {z_o} (got {z_a} and {z_h})"
        )));
    }
    let factor = (z_h / z_o).ln() / (z_a / z_o).ln();
    let samples = series
        .samples
        .iter()
        .map(|(t, u)| (*t, u * factor))
        .collect();
    WindSeries::new(series.location_id.clone(), z_h, samples)
}

/// Map a speed series through a power curve to normalised output in `[0, 1]`.
pub fn wind_to_power(series: &WindSeries, curve: &PowerCurve) -> Vec<f64> {
    series.speeds().map(|u| curve.normalized(u)).collect()
}

/// Generate `count` synthetic series of length `n`: the first is the
/// reference draw for `seed`, each subsequent one is an independent draw
/// (from a seed derived deterministically from `seed` and the series index)
/// blended against the reference at correlation `r`.
///
/// Locations are labelled `loc1`, `loc2`, ... in order.
pub fn synthesize_correlated(
    params: &WeibullParams,
    count: usize,
    n: usize,
    r: f64,
    seed: u64,
) -> Result<Vec<WindSeries>, WindModelError> {
    if count == 0 {
        return Err(WindModelError::InvalidParameter(
            "need at least one series".into(),
        ));
    }
    let mut reference = sample_wind(params, n, seed)?;
    reference.location_id = "loc1".into();
    let mut out = Vec::with_capacity(count);
    for i in 1..count {
        let derived = seed.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut independent = sample_wind(params, n, derived)?;
        independent.location_id = format!("loc{}", i + 1);
        out.push(correlate(&reference, &independent, r)?);
    }
    out.insert(0, reference);
    Ok(out)
}
