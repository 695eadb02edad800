//! Joint histograms of two normalised power series within an hour-season
//! cell.

use super::{HourSeasonKey, WindModelError};

/// Discrete joint distribution of a pair of normalised power values on a
/// `bins x bins` grid over the unit square, attached to one hour-season
/// cell. Cell probabilities sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPowerDistribution {
    pub key: HourSeasonKey,
    bins: usize,
    /// Row-major probabilities: entry `i * bins + j` is the mass with the
    /// first series in bin `i` and the second in bin `j`.
    probs: Vec<f64>,
}

impl JointPowerDistribution {
    pub fn new(
        key: HourSeasonKey,
        bins: usize,
        probs: Vec<f64>,
    ) -> Result<Self, WindModelError> {
        if bins < 2 {
            return Err(WindModelError::InvalidParameter(format!(
                "need at least 2 bins per axis, got {bins}"
            )));
        }
        if probs.len() != bins * bins {
            return Err(WindModelError::LengthMismatch {
                left: probs.len(),
                right: bins * bins,
            });
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(WindModelError::InvalidParameter(
                "cell probabilities must be finite and non-negative".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(WindModelError::InvalidParameter(format!(
                "cell probabilities sum to {total}, expected 1"
            )));
        }
        Ok(Self { key, bins, probs })
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn prob(&self, i: usize, j: usize) -> f64 {
        self.probs[i * self.bins + j]
    }

    /// Iterate over non-empty cells as `(i, j, probability)`.
    pub fn nonzero_cells(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.probs.iter().enumerate().filter_map(move |(idx, &p)| {
            if p > 0.0 {
                Some((idx / self.bins, idx % self.bins, p))
            } else {
                None
            }
        })
    }

    /// Normalised bounds `[lo, hi)` of bin `i` on either axis.
    pub fn bin_bounds(&self, i: usize) -> (f64, f64) {
        let w = 1.0 / self.bins as f64;
        (i as f64 * w, (i + 1) as f64 * w)
    }

    /// Mean of the first coordinate under the cell-midpoint approximation.
    pub fn mean_x1(&self) -> f64 {
        self.axis_mean(|i, _| i)
    }

    /// Mean of the second coordinate under the cell-midpoint approximation.
    pub fn mean_x2(&self) -> f64 {
        self.axis_mean(|_, j| j)
    }

    fn axis_mean(&self, pick: impl Fn(usize, usize) -> usize) -> f64 {
        let w = 1.0 / self.bins as f64;
        let mut acc = 0.0;
        for (i, j, p) in self.nonzero_cells() {
            let mid = (pick(i, j) as f64 + 0.5) * w;
            acc += p * mid;
        }
        acc
    }
}

/// Build the joint histogram of two equally long normalised power series.
///
/// Values are clamped into `[0, 1]` (tiny floating-point excursions only;
/// power values are normalised upstream) and binned with the top edge
/// inclusive in the last bin. Probabilities are exact sample fractions.
pub fn joint_histogram(
    x1: &[f64],
    x2: &[f64],
    key: HourSeasonKey,
    bins: usize,
) -> Result<JointPowerDistribution, WindModelError> {
    if x1.len() != x2.len() {
        return Err(WindModelError::LengthMismatch {
            left: x1.len(),
            right: x2.len(),
        });
    }
    if x1.is_empty() {
        return Err(WindModelError::EmptySeries);
    }
    if bins < 2 {
        return Err(WindModelError::InvalidParameter(format!(
            "need at least 2 bins per axis, got {bins}"
        )));
    }
    let bin_of = |x: f64, idx: usize| -> Result<usize, WindModelError> {
        if !x.is_finite() || !(-1e-9..=1.0 + 1e-9).contains(&x) {
            return Err(WindModelError::InvalidSample {
                index: idx,
                value: x,
            });
        }
        let clamped = x.clamp(0.0, 1.0);
        Ok(((clamped * bins as f64) as usize).min(bins - 1))
    };
    let mut counts = vec![0u64; bins * bins];
    for (idx, (&a, &b)) in x1.iter().zip(x2.iter()).enumerate() {
        let i = bin_of(a, idx)?;
        let j = bin_of(b, idx)?;
        counts[i * bins + j] += 1;
    }
    let n = x1.len() as f64;
    let probs = counts.iter().map(|&c| c as f64 / n).collect();
    JointPowerDistribution::new(key, bins, probs)
}
