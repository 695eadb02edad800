//! Energy evaluation backends for the capacity game.
//!
//! [`ReplayContext`] walks the full interval series for every capacity pair
//! (exact, slower); [`BinnedContext`] aggregates the series into 96
//! hour-by-season joint histograms once and then evaluates any pair from
//! closed-form per-cell integrals (fast, histogram-resolution accurate).
//! [`EnergyTable`] caches a whole capacity grid worth of energies so
//! parameter sweeps can re-score profits without touching the data again.

use chrono::{DateTime, Utc};

use crate::windmodel::{joint_histogram, HourSeasonKey, JointPowerDistribution, HOUR_SEASON_BINS};

use super::analytic::expected_curtailment_joint;
use super::{
    empirical_energies, fair_share_energy, DemandProfile, EnergyQuadruple, StackelbergError,
    StrategyGrid,
};

/// Exact per-interval backend: normalised outputs for both players plus the
/// interval demand (export limit) series.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplayContext {
    x1: Vec<f64>,
    x2: Vec<f64>,
    demand_mw: Vec<f64>,
}

impl ReplayContext {
    pub fn new(x1: Vec<f64>, x2: Vec<f64>, demand_mw: Vec<f64>) -> Result<Self, StackelbergError> {
        if x1.len() != x2.len() {
            return Err(StackelbergError::LengthMismatch {
                left: x1.len(),
                right: x2.len(),
            });
        }
        if x1.len() != demand_mw.len() {
            return Err(StackelbergError::LengthMismatch {
                left: x1.len(),
                right: demand_mw.len(),
            });
        }
        if x1.is_empty() {
            return Err(StackelbergError::InvalidParameter(
                "replay context needs at least one interval".into(),
            ));
        }
        for (t, &x) in x1.iter().chain(x2.iter()).enumerate() {
            if !x.is_finite() || !(-1e-9..=1.0 + 1e-9).contains(&x) {
                return Err(StackelbergError::InvalidSeriesValue {
                    index: t % x1.len(),
                    value: x,
                });
            }
        }
        for (t, &d) in demand_mw.iter().enumerate() {
            if !d.is_finite() || d < 0.0 {
                return Err(StackelbergError::InvalidSeriesValue { index: t, value: d });
            }
        }
        Ok(Self { x1, x2, demand_mw })
    }

    /// Convenience constructor mapping a demand profile onto the series
    /// timestamps.
    pub fn from_profile(
        timestamps: &[DateTime<Utc>],
        x1: Vec<f64>,
        x2: Vec<f64>,
        profile: &DemandProfile,
    ) -> Result<Self, StackelbergError> {
        if timestamps.len() != x1.len() {
            return Err(StackelbergError::LengthMismatch {
                left: timestamps.len(),
                right: x1.len(),
            });
        }
        let demand = profile.series_for(timestamps);
        Self::new(x1, x2, demand)
    }

    pub fn intervals(&self) -> usize {
        self.x1.len()
    }

    pub fn energies(&self, p1: f64, p2: f64) -> Result<EnergyQuadruple, StackelbergError> {
        empirical_energies(p1, p2, &self.x1, &self.x2, &self.demand_mw)
    }
}

/// One occupied hour-season cell of the binned backend.
#[derive(Debug, Clone, PartialEq)]
pub struct BinEntry {
    pub key: HourSeasonKey,
    /// Number of intervals aggregated into this cell.
    pub hours: f64,
    pub dist: JointPowerDistribution,
    pub demand_mw: f64,
    /// Exact within-cell sample mean of the first series (the histogram
    /// keeps the joint shape; the mean is kept exactly since generation is
    /// linear in it).
    pub mean_x1: f64,
    /// Exact within-cell sample mean of the second series.
    pub mean_x2: f64,
}

/// Histogram-aggregated backend: per-pair energies come from closed-form
/// integrals over each bin's joint histogram, weighted by bin hours.
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedContext {
    bins: Vec<BinEntry>,
    /// Sum over bins of `hours * mean(x1)` — generated energy per MW of
    /// leader capacity.
    marginal1: f64,
    /// Same for the follower.
    marginal2: f64,
}

impl BinnedContext {
    /// Aggregate aligned series into per-cell joint histograms with
    /// `bins x bins` resolution, attaching each cell's demand level.
    pub fn from_series(
        timestamps: &[DateTime<Utc>],
        x1: &[f64],
        x2: &[f64],
        profile: &DemandProfile,
        bins: usize,
    ) -> Result<Self, StackelbergError> {
        if timestamps.len() != x1.len() || x1.len() != x2.len() {
            return Err(StackelbergError::LengthMismatch {
                left: timestamps.len(),
                right: x1.len(),
            });
        }
        if timestamps.is_empty() {
            return Err(StackelbergError::InvalidParameter(
                "binned context needs at least one interval".into(),
            ));
        }
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); HOUR_SEASON_BINS];
        for (t, ts) in timestamps.iter().enumerate() {
            groups[HourSeasonKey::from_timestamp(*ts).index()].push(t);
        }
        let mut entries = Vec::new();
        for (idx, group) in groups.iter().enumerate() {
            if group.is_empty() {
                continue;
            }
            let key = HourSeasonKey::from_index(idx).expect("index in range");
            let g1: Vec<f64> = group.iter().map(|&t| x1[t]).collect();
            let g2: Vec<f64> = group.iter().map(|&t| x2[t]).collect();
            let dist = joint_histogram(&g1, &g2, key, bins)?;
            let mean_x1 = g1.iter().sum::<f64>() / g1.len() as f64;
            let mean_x2 = g2.iter().sum::<f64>() / g2.len() as f64;
            entries.push(BinEntry {
                key,
                hours: group.len() as f64,
                dist,
                demand_mw: profile.value(key),
                mean_x1,
                mean_x2,
            });
        }
        Self::from_entries(entries)
    }

    /// Build directly from per-cell histograms (used by tests and custom
    /// aggregation pipelines).
    pub fn from_entries(bins: Vec<BinEntry>) -> Result<Self, StackelbergError> {
        if bins.is_empty() {
            return Err(StackelbergError::InvalidParameter(
                "binned context needs at least one occupied cell".into(),
            ));
        }
        for entry in &bins {
            if !(entry.hours.is_finite() && entry.hours > 0.0) {
                return Err(StackelbergError::InvalidParameter(format!(
                    "bin hours must be positive, got {}",
                    entry.hours
                )));
            }
            if !entry.demand_mw.is_finite() || entry.demand_mw < 0.0 {
                return Err(StackelbergError::InvalidParameter(format!(
                    "bin demand must be non-negative, got {}",
                    entry.demand_mw
                )));
            }
            for mean in [entry.mean_x1, entry.mean_x2] {
                if !mean.is_finite() || !(0.0..=1.0).contains(&mean) {
                    return Err(StackelbergError::InvalidParameter(format!(
                        "bin means must lie in [0, 1], got {mean}"
                    )));
                }
            }
        }
        let marginal1 = bins.iter().map(|b| b.hours * b.mean_x1).sum();
        let marginal2 = bins.iter().map(|b| b.hours * b.mean_x2).sum();
        Ok(Self {
            bins,
            marginal1,
            marginal2,
        })
    }

    pub fn bins(&self) -> &[BinEntry] {
        &self.bins
    }

    pub fn total_hours(&self) -> f64 {
        self.bins.iter().map(|b| b.hours).sum()
    }

    /// Expected total curtailed energy for one cell at a capacity pair.
    pub fn bin_curtailment(
        entry: &BinEntry,
        p1: f64,
        p2: f64,
    ) -> Result<f64, StackelbergError> {
        Ok(entry.hours * expected_curtailment_joint(&entry.dist, p1, p2, entry.demand_mw)?)
    }

    pub fn energies(&self, p1: f64, p2: f64) -> Result<EnergyQuadruple, StackelbergError> {
        let e_g1 = p1 * self.marginal1;
        let e_g2 = p2 * self.marginal2;
        let mut e_c = 0.0;
        for entry in &self.bins {
            e_c += Self::bin_curtailment(entry, p1, p2)?;
        }
        // Numerical safety: total curtailment can exceed total generation
        // only through cell-midpoint error; clamp to keep the quadruple
        // admissible.
        let e_c = e_c.min(e_g1 + e_g2);
        let (e_c1, e_c2) = fair_share_energy(e_g1, e_g2, e_c)?;
        EnergyQuadruple::new(e_g1, e_g2, e_c1.min(e_g1), e_c2.min(e_g2))
    }
}

/// Backend selector handed to the solver.
#[derive(Debug, Clone, PartialEq)]
pub enum EnergyContext {
    Replay(ReplayContext),
    Binned(BinnedContext),
}

impl EnergyContext {
    pub fn energies(&self, p1: f64, p2: f64) -> Result<EnergyQuadruple, StackelbergError> {
        match self {
            EnergyContext::Replay(ctx) => ctx.energies(p1, p2),
            EnergyContext::Binned(ctx) => ctx.energies(p1, p2),
        }
    }
}

/// Energies precomputed for every pair on a capacity grid.
///
/// Building the table evaluates the context once per pair (in parallel when
/// the `parallel` feature is on; the result is identical either way since
/// each pair is independent). Sweeps and repeated solves then cost only a
/// profit re-scoring pass.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyTable {
    values: Vec<f64>,
    quadruples: Vec<EnergyQuadruple>,
}

impl EnergyTable {
    pub fn build(ctx: &EnergyContext, grid: &StrategyGrid) -> Result<Self, StackelbergError> {
        let values = grid.values();
        if values.is_empty() {
            return Err(StackelbergError::EmptyGrid);
        }
        let n = values.len();

        let compute_row = |i1: usize| -> Result<Vec<EnergyQuadruple>, StackelbergError> {
            let p1 = values[i1];
            values.iter().map(|&p2| ctx.energies(p1, p2)).collect()
        };

        #[cfg(feature = "parallel")]
        let rows: Result<Vec<Vec<EnergyQuadruple>>, StackelbergError> = {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(compute_row).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let rows: Result<Vec<Vec<EnergyQuadruple>>, StackelbergError> =
            (0..n).map(compute_row).collect();

        let quadruples = rows?.into_iter().flatten().collect();
        Ok(Self { values, quadruples })
    }

    pub fn grid_values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn energies(&self, i1: usize, i2: usize) -> &EnergyQuadruple {
        &self.quadruples[i1 * self.values.len() + i2]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::windmodel::{synthesize_correlated, wind_to_power, PowerCurve, WeibullParams};
    use approx::assert_relative_eq;

    fn test_series(hours: usize) -> (Vec<DateTime<Utc>>, Vec<f64>, Vec<f64>) {
        let params = WeibullParams::new(9.0, 1.8).unwrap();
        let series = synthesize_correlated(&params, 2, hours, 0.7, 4242).unwrap();
        let curve = PowerCurve::generic_ramp(1.0).unwrap();
        let timestamps: Vec<DateTime<Utc>> = series[0].timestamps().collect();
        let x1 = wind_to_power(&series[0], &curve);
        let x2 = wind_to_power(&series[1], &curve);
        (timestamps, x1, x2)
    }

    #[test]
    fn replay_context_round_trips_empirical_energies() {
        let (_, x1, x2) = test_series(200);
        let demand = vec![5.0; 200];
        let ctx = ReplayContext::new(x1.clone(), x2.clone(), demand.clone()).unwrap();
        let direct = empirical_energies(8.0, 6.0, &x1, &x2, &demand).unwrap();
        assert_eq!(ctx.energies(8.0, 6.0).unwrap(), direct);
    }

    #[test]
    fn binned_tracks_replay_on_shared_data() {
        let (timestamps, x1, x2) = test_series(3 * 8760);
        let profile = DemandProfile::synthetic_diurnal(50.0).unwrap();
        let replay =
            ReplayContext::from_profile(&timestamps, x1.clone(), x2.clone(), &profile).unwrap();
        let binned = BinnedContext::from_series(&timestamps, &x1, &x2, &profile, 40).unwrap();

        let (p1, p2) = (60.0, 45.0);
        let exact = replay.energies(p1, p2).unwrap();
        let approx = binned.energies(p1, p2).unwrap();
        // Generated energy is linear in the exact per-cell means, so the
        // routes agree to rounding.
        assert_relative_eq!(approx.e_g1, exact.e_g1, max_relative = 1e-9);
        assert_relative_eq!(approx.e_g2, exact.e_g2, max_relative = 1e-9);
        // Curtailment totals agree within the histogram resolution.
        assert_relative_eq!(
            approx.total_curtailed(),
            exact.total_curtailed(),
            max_relative = 0.02
        );
    }

    #[test]
    fn energy_table_matches_direct_evaluation() {
        let (_, x1, x2) = test_series(500);
        let demand = vec![4.0; 500];
        let ctx = EnergyContext::Replay(ReplayContext::new(x1, x2, demand).unwrap());
        let grid = StrategyGrid::new(10.0, 2.5).unwrap();
        let table = EnergyTable::build(&ctx, &grid).unwrap();
        assert_eq!(table.len(), 5);
        for (i1, &p1) in table.grid_values().iter().enumerate() {
            for (i2, &p2) in table.grid_values().iter().enumerate() {
                let direct = ctx.energies(p1, p2).unwrap();
                assert_eq!(*table.energies(i1, i2), direct);
            }
        }
    }

    #[test]
    fn binned_context_requires_cells() {
        assert!(BinnedContext::from_entries(vec![]).is_err());
    }
}
