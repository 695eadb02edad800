//! Leader–follower capacity game on a constrained export line.
//!
//! A network investor (the leader) sizes a new line-backed generation
//! capacity `P_N1`; local generators (the follower) respond with their own
//! capacity `P_N2`. Both earn the energy price on delivered energy; the
//! follower additionally pays the leader a transmission fee per delivered
//! MWh, and the leader carries the line cost. Curtailment losses come from
//! the joint wind statistics, so each player's payoff depends on both
//! capacities.
//!
//! The game is solved by backward induction over a discrete capacity grid:
//! for every leader choice the follower's best response is found, then the
//! leader optimises against that response curve. Energies are evaluated
//! either by exact replay of an interval series or from hour-by-season
//! joint histograms with closed-form per-cell integrals; see
//! [`context::EnergyContext`].

pub mod analytic;
pub mod context;
pub mod solver;
pub mod sweep;

pub use context::{BinnedContext, EnergyContext, EnergyTable, ReplayContext};
pub use solver::{follower_best_response, solve_equilibrium, solve_equilibrium_with, BestResponse, EquilibriumResult, ResponsePoint};
pub use sweep::{
    scenario_defaults, scenario_sweep, sweep_with_table, write_sweep_csv, SweepParam, SweepRow,
    DEFAULT_SWEEP_STEP_FRACTION,
};

use thiserror::Error;

use crate::windmodel::{HourSeasonKey, WindModelError, HOUR_SEASON_BINS};

/// Errors produced by the game-solving layer.
#[derive(Debug, Error)]
pub enum StackelbergError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid energies: {0}")]
    InvalidEnergy(String),
    #[error("strategy grid is empty")]
    EmptyGrid,
    #[error("series value {value} at interval {index} is invalid")]
    InvalidSeriesValue { index: usize, value: f64 },
    #[error(transparent)]
    Wind(#[from] WindModelError),
}

/// Price and cost parameters of the game, all in £/MWh except the line
/// cost, which is a lump sum in £ over the evaluation horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostParams {
    /// Energy price `p_G` earned per delivered MWh.
    pub energy_price: f64,
    /// Transmission fee `p_T` the follower pays the leader per delivered MWh.
    pub transmission_fee: f64,
    /// Leader's generation cost per produced MWh.
    pub leader_gen_cost: f64,
    /// Follower's generation cost per produced MWh.
    pub follower_gen_cost: f64,
    /// Leader's lump-sum line investment cost.
    pub line_cost: f64,
}

impl CostParams {
    pub fn new(
        energy_price: f64,
        transmission_fee: f64,
        leader_gen_cost: f64,
        follower_gen_cost: f64,
        line_cost: f64,
    ) -> Result<Self, StackelbergError> {
        for (name, v) in [
            ("energy price", energy_price),
            ("transmission fee", transmission_fee),
            ("leader generation cost", leader_gen_cost),
            ("follower generation cost", follower_gen_cost),
            ("line cost", line_cost),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(StackelbergError::InvalidParameter(format!(
                    "{name} must be non-negative and finite, got {v}"
                )));
            }
        }
        if energy_price == 0.0 {
            return Err(StackelbergError::InvalidParameter(
                "energy price must be positive".into(),
            ));
        }
        Ok(Self {
            energy_price,
            transmission_fee,
            leader_gen_cost,
            follower_gen_cost,
            line_cost,
        })
    }
}

/// Generated and curtailed energy for both players over the horizon, MWh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyQuadruple {
    pub e_g1: f64,
    pub e_g2: f64,
    pub e_c1: f64,
    pub e_c2: f64,
}

impl EnergyQuadruple {
    pub fn new(e_g1: f64, e_g2: f64, e_c1: f64, e_c2: f64) -> Result<Self, StackelbergError> {
        for (name, v) in [
            ("e_g1", e_g1),
            ("e_g2", e_g2),
            ("e_c1", e_c1),
            ("e_c2", e_c2),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(StackelbergError::InvalidEnergy(format!(
                    "{name} must be non-negative and finite, got {v}"
                )));
            }
        }
        if e_c1 > e_g1 * (1.0 + 1e-9) + 1e-9 || e_c2 > e_g2 * (1.0 + 1e-9) + 1e-9 {
            return Err(StackelbergError::InvalidEnergy(format!(
                "curtailed energy exceeds generated energy: ({e_c1}, {e_c2}) vs ({e_g1}, {e_g2})"
            )));
        }
        Ok(Self {
            e_g1,
            e_g2,
            e_c1,
            e_c2,
        })
    }

    pub fn zero() -> Self {
        Self {
            e_g1: 0.0,
            e_g2: 0.0,
            e_c1: 0.0,
            e_c2: 0.0,
        }
    }

    /// Total curtailed energy across both players.
    pub fn total_curtailed(&self) -> f64 {
        self.e_c1 + self.e_c2
    }

    /// Total delivered energy across both players.
    pub fn total_delivered(&self) -> f64 {
        (self.e_g1 - self.e_c1) + (self.e_g2 - self.e_c2)
    }
}

/// Leader profit: delivered energy at the energy price, minus generation
/// cost on everything produced, plus transmission fees collected on the
/// follower's deliveries, minus the line cost.
pub fn profit_leader(e: &EnergyQuadruple, c: &CostParams) -> f64 {
    (e.e_g1 - e.e_c1) * c.energy_price - e.e_g1 * c.leader_gen_cost
        + (e.e_g2 - e.e_c2) * c.transmission_fee
        - c.line_cost
}

/// Follower profit: delivered energy at the energy price net of the
/// transmission fee, minus generation cost on everything produced.
pub fn profit_follower(e: &EnergyQuadruple, c: &CostParams) -> f64 {
    (e.e_g2 - e.e_c2) * (c.energy_price - c.transmission_fee) - e.e_g2 * c.follower_gen_cost
}

/// Split total curtailed energy between the players in proportion to their
/// generated energy over the horizon.
pub fn fair_share_energy(
    e_g1: f64,
    e_g2: f64,
    e_c_total: f64,
) -> Result<(f64, f64), StackelbergError> {
    for (name, v) in [("e_g1", e_g1), ("e_g2", e_g2), ("e_c_total", e_c_total)] {
        if !v.is_finite() || v < 0.0 {
            return Err(StackelbergError::InvalidEnergy(format!(
                "{name} must be non-negative and finite, got {v}"
            )));
        }
    }
    let total = e_g1 + e_g2;
    if total <= 0.0 {
        if e_c_total <= 1e-9 {
            return Ok((0.0, 0.0));
        }
        return Err(StackelbergError::InvalidEnergy(format!(
            "cannot attribute {e_c_total} MWh of curtailment with zero generation"
        )));
    }
    if e_c_total > total * (1.0 + 1e-9) {
        return Err(StackelbergError::InvalidEnergy(format!(
            "curtailed energy {e_c_total} exceeds generated energy {total}"
        )));
    }
    Ok((e_c_total * e_g1 / total, e_c_total * e_g2 / total))
}

/// Per-interval empirical energies for capacities `p1`, `p2` given
/// normalised outputs and a demand (export-limit) series; curtailment
/// within an interval is split in proportion to instantaneous output.
pub fn empirical_energies(
    p1: f64,
    p2: f64,
    x1: &[f64],
    x2: &[f64],
    demand_mw: &[f64],
) -> Result<EnergyQuadruple, StackelbergError> {
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
    for (name, p) in [("p1", p1), ("p2", p2)] {
        if !p.is_finite() || p < 0.0 {
            return Err(StackelbergError::InvalidParameter(format!(
                "capacity {name} must be non-negative and finite, got {p}"
            )));
        }
    }
    let mut e = EnergyQuadruple::zero();
    for t in 0..x1.len() {
        for (idx, x) in [(t, x1[t]), (t, x2[t])] {
            if !x.is_finite() || !(-1e-9..=1.0 + 1e-9).contains(&x) {
                return Err(StackelbergError::InvalidSeriesValue {
                    index: idx,
                    value: x,
                });
            }
        }
        let d = demand_mw[t];
        if !d.is_finite() || d < 0.0 {
            return Err(StackelbergError::InvalidSeriesValue { index: t, value: d });
        }
        let out1 = p1 * x1[t].clamp(0.0, 1.0);
        let out2 = p2 * x2[t].clamp(0.0, 1.0);
        let total = out1 + out2;
        let excess = (total - d).max(0.0);
        e.e_g1 += out1;
        e.e_g2 += out2;
        if excess > 0.0 && total > 0.0 {
            e.e_c1 += excess * out1 / total;
            e.e_c2 += excess * out2 / total;
        }
    }
    Ok(e)
}

/// Demand (export-limit) level for each of the 96 hour-by-season cells, MW.
#[derive(Debug, Clone, PartialEq)]
pub struct DemandProfile {
    values: Vec<f64>,
}

impl DemandProfile {
    /// Build from 96 values indexed like [`HourSeasonKey::index`].
    pub fn new(values: Vec<f64>) -> Result<Self, StackelbergError> {
        if values.len() != HOUR_SEASON_BINS {
            return Err(StackelbergError::LengthMismatch {
                left: values.len(),
                right: HOUR_SEASON_BINS,
            });
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(StackelbergError::InvalidParameter(format!(
                "demand values must be non-negative and finite, got {v}"
            )));
        }
        Ok(Self { values })
    }

    /// Flat profile at a single level.
    pub fn constant(mw: f64) -> Result<Self, StackelbergError> {
        Self::new(vec![mw; HOUR_SEASON_BINS])
    }

    /// Deterministic synthetic profile peaking at `peak_mw` on winter
    /// evenings: seasonal weights (spring 0.85, summer 0.75, autumn 0.9,
    /// winter 1.0) times a diurnal curve `0.75 + 0.25 cos(2 pi (h-18)/24)`.
    /// The winter 18:00–19:00 cell equals `peak_mw` exactly.
    pub fn synthetic_diurnal(peak_mw: f64) -> Result<Self, StackelbergError> {
        if !(peak_mw.is_finite() && peak_mw > 0.0) {
            return Err(StackelbergError::InvalidParameter(format!(
                "peak demand must be positive, got {peak_mw}"
            )));
        }
        let season_weight = [0.85, 0.75, 0.9, 1.0];
        let mut values = vec![0.0; HOUR_SEASON_BINS];
        for key in HourSeasonKey::all() {
            let diurnal = 0.75
                + 0.25
                    * (2.0 * std::f64::consts::PI * (key.hour as f64 - 18.0) / 24.0).cos();
            values[key.index()] = peak_mw * season_weight[key.season as usize - 1] * diurnal;
        }
        Self::new(values)
    }

    pub fn value(&self, key: HourSeasonKey) -> f64 {
        self.values[key.index()]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(f64::MIN, f64::max)
    }

    /// Demand level for each timestamp's hour-season cell.
    pub fn series_for(&self, timestamps: &[chrono::DateTime<chrono::Utc>]) -> Vec<f64> {
        timestamps
            .iter()
            .map(|t| self.value(HourSeasonKey::from_timestamp(*t)))
            .collect()
    }
}

/// Discrete capacity grid `0, step, 2 step, ... <= max` shared by both
/// players.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyGrid {
    pub max_mw: f64,
    pub step_mw: f64,
}

impl Default for StrategyGrid {
    /// The default study grid: 0 to 415 MW in 0.5 MW steps.
    fn default() -> Self {
        Self {
            max_mw: 415.0,
            step_mw: 0.5,
        }
    }
}

impl StrategyGrid {
    pub fn new(max_mw: f64, step_mw: f64) -> Result<Self, StackelbergError> {
        if !(max_mw.is_finite() && max_mw >= 0.0) {
            return Err(StackelbergError::InvalidParameter(format!(
                "grid maximum must be non-negative and finite, got {max_mw}"
            )));
        }
        if !(step_mw.is_finite() && step_mw > 0.0) {
            return Err(StackelbergError::InvalidParameter(format!(
                "grid step must be positive and finite, got {step_mw}"
            )));
        }
        if max_mw / step_mw > 1e7 {
            return Err(StackelbergError::InvalidParameter(format!(
                "grid of {max_mw} by {step_mw} has too many points"
            )));
        }
        Ok(Self { max_mw, step_mw })
    }

    /// All capacity values on the grid, ascending, starting at zero.
    pub fn values(&self) -> Vec<f64> {
        let count = (self.max_mw / self.step_mw + 1e-9).floor() as usize + 1;
        (0..count).map(|i| i as f64 * self.step_mw).collect()
    }

    pub fn len(&self) -> usize {
        (self.max_mw / self.step_mw + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn leader_profit_worked_example() {
        // 100 MWh generated, nothing curtailed, no follower, no line cost:
        // 100 * 74.3 - 100 * 22.29 = 5201.
        let e = EnergyQuadruple::new(100.0, 0.0, 0.0, 0.0).unwrap();
        let c = CostParams::new(74.3, 0.0, 0.3 * 74.3, 0.0, 0.0).unwrap();
        assert_relative_eq!(profit_leader(&e, &c), 5201.0, epsilon = 1e-9);
    }

    #[test]
    fn follower_profit_worked_example() {
        // 100 MWh generated, 10 curtailed, fee 26% and cost 30% of the
        // energy price: 90 * (74.3 - 19.318) - 100 * 22.29 = 2719.38.
        let e = EnergyQuadruple::new(0.0, 100.0, 0.0, 10.0).unwrap();
        let c = CostParams::new(74.3, 0.26 * 74.3, 0.0, 0.30 * 74.3, 0.0).unwrap();
        assert_relative_eq!(profit_follower(&e, &c), 2719.38, epsilon = 1e-9);
    }

    #[test]
    fn line_cost_reduces_leader_profit_only() {
        let e = EnergyQuadruple::new(100.0, 50.0, 5.0, 2.0).unwrap();
        let c0 = CostParams::new(74.3, 10.0, 20.0, 20.0, 0.0).unwrap();
        let c1 = CostParams::new(74.3, 10.0, 20.0, 20.0, 1000.0).unwrap();
        assert_relative_eq!(
            profit_leader(&e, &c0) - profit_leader(&e, &c1),
            1000.0,
            epsilon = 1e-9
        );
        assert_relative_eq!(
            profit_follower(&e, &c0),
            profit_follower(&e, &c1),
            epsilon = 1e-12
        );
    }

    #[test]
    fn fair_share_splits_proportionally() {
        let (c1, c2) = fair_share_energy(300.0, 100.0, 40.0).unwrap();
        assert_relative_eq!(c1, 30.0, epsilon = 1e-12);
        assert_relative_eq!(c2, 10.0, epsilon = 1e-12);
        // Zero generation with zero curtailment is fine.
        assert_eq!(fair_share_energy(0.0, 0.0, 0.0).unwrap(), (0.0, 0.0));
        // Curtailment without generation is not.
        assert!(fair_share_energy(0.0, 0.0, 1.0).is_err());
        assert!(fair_share_energy(10.0, 10.0, 30.0).is_err());
    }

    #[test]
    fn empirical_energies_single_interval_split() {
        // Full output at capacities (7, 3) against a 6 MW limit: 4 MW of
        // excess split 2.8 / 1.2 by output share.
        let e = empirical_energies(7.0, 3.0, &[1.0], &[1.0], &[6.0]).unwrap();
        assert_relative_eq!(e.e_g1, 7.0, epsilon = 1e-12);
        assert_relative_eq!(e.e_g2, 3.0, epsilon = 1e-12);
        assert_relative_eq!(e.e_c1, 2.8, epsilon = 1e-12);
        assert_relative_eq!(e.e_c2, 1.2, epsilon = 1e-12);
    }

    #[test]
    fn empirical_energies_respects_bounds_invariants() {
        let x1 = [0.2, 0.9, 1.0, 0.0];
        let x2 = [0.5, 0.1, 1.0, 0.3];
        let d = [5.0, 2.0, 0.0, 10.0];
        let e = empirical_energies(10.0, 8.0, &x1, &x2, &d).unwrap();
        assert!(e.e_c1 >= 0.0 && e.e_c1 <= e.e_g1);
        assert!(e.e_c2 >= 0.0 && e.e_c2 <= e.e_g2);
        // Delivered energy never exceeds the demand cap.
        assert!(e.total_delivered() <= d.iter().sum::<f64>() + 1e-9);
    }

    #[test]
    fn strategy_grid_values_cover_range() {
        let grid = StrategyGrid::default();
        let values = grid.values();
        assert_eq!(values.len(), 831);
        assert_eq!(values[0], 0.0);
        assert_relative_eq!(values[830], 415.0, epsilon = 1e-12);
        assert_eq!(grid.len(), values.len());

        let tiny = StrategyGrid::new(1.0, 0.4).unwrap();
        assert_eq!(tiny.values(), vec![0.0, 0.4, 0.8]);
    }

    #[test]
    fn demand_profile_synthetic_peak_is_exact() {
        let profile = DemandProfile::synthetic_diurnal(150.0).unwrap();
        assert_eq!(profile.max(), 150.0);
        let peak_key = HourSeasonKey::new(18, 4).unwrap();
        assert_eq!(profile.value(peak_key), 150.0);
        // Summer early morning is the trough.
        let trough_key = HourSeasonKey::new(6, 2).unwrap();
        assert_relative_eq!(profile.value(trough_key), 150.0 * 0.75 * 0.5, epsilon = 1e-9);
    }

    #[test]
    fn energy_quadruple_rejects_curtailment_above_generation() {
        assert!(EnergyQuadruple::new(10.0, 10.0, 11.0, 0.0).is_err());
        assert!(EnergyQuadruple::new(10.0, 10.0, 1.0, -0.1).is_err());
        assert!(EnergyQuadruple::new(10.0, 10.0, 10.0, 10.0).is_ok());
    }
}
