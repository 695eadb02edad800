//! Equilibrium sweeps over one cost parameter at a time.
//!
//! Each sweep fixes all but one of the cost parameters, re-solves the
//! capacity game for every value of the varied one, and reports the
//! equilibrium row by row. Because the energy quadruples depend only on
//! the capacity pair — never on prices — the expensive grid table is
//! built once and re-scored per value.

use super::context::{EnergyContext, EnergyTable};
use super::solver::solve_equilibrium_with;
use super::{CostParams, EnergyQuadruple, StackelbergError, StrategyGrid};

/// Sweep step expressed as a fraction of the energy price.
pub const DEFAULT_SWEEP_STEP_FRACTION: f64 = 0.02;

/// Which cost parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParam {
    /// Follower generation cost `c_G2` (scenario 1).
    FollowerCost,
    /// Leader generation cost `c_G1` (scenario 2).
    LeaderCost,
    /// Transmission fee `p_T` (scenario 3).
    TransmissionFee,
}

impl SweepParam {
    /// Column label used in sweep CSV output.
    pub fn label(self) -> &'static str {
        match self {
            SweepParam::FollowerCost => "c_g2",
            SweepParam::LeaderCost => "c_g1",
            SweepParam::TransmissionFee => "p_t",
        }
    }

    /// Default sweep bounds as fractions of the energy price.
    pub fn fraction_range(self) -> (f64, f64) {
        match self {
            SweepParam::FollowerCost => (0.06, 0.52),
            SweepParam::LeaderCost => (0.14, 0.50),
            SweepParam::TransmissionFee => (0.0, 0.76),
        }
    }

    /// Default absolute sweep values: the fraction range scaled by the
    /// energy price, stepped by [`DEFAULT_SWEEP_STEP_FRACTION`].
    pub fn default_values(self, energy_price: f64) -> Vec<f64> {
        let (lo, hi) = self.fraction_range();
        let count = ((hi - lo) / DEFAULT_SWEEP_STEP_FRACTION + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| (lo + i as f64 * DEFAULT_SWEEP_STEP_FRACTION) * energy_price)
            .collect()
    }

    /// Copy of `base` with this parameter replaced by `value`.
    pub fn apply(self, base: &CostParams, value: f64) -> Result<CostParams, StackelbergError> {
        let mut c = *base;
        match self {
            SweepParam::FollowerCost => c.follower_gen_cost = value,
            SweepParam::LeaderCost => c.leader_gen_cost = value,
            SweepParam::TransmissionFee => c.transmission_fee = value,
        }
        CostParams::new(
            c.energy_price,
            c.transmission_fee,
            c.leader_gen_cost,
            c.follower_gen_cost,
            c.line_cost,
        )
    }
}

impl std::fmt::Display for SweepParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Fixed cost parameters and varied parameter for one of the three stock
/// scenarios (1: follower cost, 2: leader cost, 3: transmission fee).
/// The varied parameter starts at the low end of its default range.
pub fn scenario_defaults(
    scenario_id: u8,
    energy_price: f64,
    line_cost: f64,
) -> Result<(CostParams, SweepParam), StackelbergError> {
    let p = energy_price;
    let (costs, param) = match scenario_id {
        1 => (
            CostParams::new(p, 0.26 * p, 0.30 * p, 0.06 * p, line_cost)?,
            SweepParam::FollowerCost,
        ),
        2 => (
            CostParams::new(p, 0.26 * p, 0.14 * p, 0.30 * p, line_cost)?,
            SweepParam::LeaderCost,
        ),
        3 => (
            CostParams::new(p, 0.0, 0.26 * p, 0.20 * p, line_cost)?,
            SweepParam::TransmissionFee,
        ),
        other => {
            return Err(StackelbergError::InvalidParameter(format!(
                "unknown scenario id {other}; expected 1, 2 or 3"
            )))
        }
    };
    Ok((costs, param))
}

/// One solved equilibrium within a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scenario_id: u8,
    pub varied_param: SweepParam,
    pub value: f64,
    pub p_n1_star: f64,
    pub p_n2_star: f64,
    pub profit1: f64,
    pub profit2: f64,
    pub energies: EnergyQuadruple,
    pub viable1: bool,
    pub viable2: bool,
}

/// Write sweep rows as CSV with a fixed column order.
pub fn write_sweep_csv<W: std::io::Write>(rows: &[SweepRow], mut w: W) -> std::io::Result<()> {
    writeln!(
        w,
        "scenario_id,varied_param,value,p_n1_star,p_n2_star,profit1,profit2,e_g1,e_g2,e_c1,e_c2,viable1,viable2"
    )?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.scenario_id,
            r.varied_param.label(),
            r.value,
            r.p_n1_star,
            r.p_n2_star,
            r.profit1,
            r.profit2,
            r.energies.e_g1,
            r.energies.e_g2,
            r.energies.e_c1,
            r.energies.e_c2,
            r.viable1,
            r.viable2,
        )?;
    }
    Ok(())
}

/// Solve the game once per parameter value. The grid energy table is
/// shared across all values; an empty value list yields an empty table.
pub fn scenario_sweep(
    scenario_id: u8,
    base: &CostParams,
    param: SweepParam,
    values: &[f64],
    grid: &StrategyGrid,
    ctx: &EnergyContext,
) -> Result<Vec<SweepRow>, StackelbergError> {
    if values.is_empty() {
        return Ok(Vec::new());
    }
    let table = EnergyTable::build(ctx, grid)?;
    sweep_with_table(scenario_id, base, param, values, &table)
}

/// Sweep over a prebuilt table (lets callers reuse one table across
/// several scenarios on the same grid and data).
pub fn sweep_with_table(
    scenario_id: u8,
    base: &CostParams,
    param: SweepParam,
    values: &[f64],
    table: &EnergyTable,
) -> Result<Vec<SweepRow>, StackelbergError> {
    let mut rows = Vec::with_capacity(values.len());
    for &value in values {
        let costs = param.apply(base, value)?;
        let eq = solve_equilibrium_with(table, &costs)?;
        rows.push(SweepRow {
            scenario_id,
            varied_param: param,
            value,
            p_n1_star: eq.p_n1_star,
            p_n2_star: eq.p_n2_star,
            profit1: eq.profit1,
            profit2: eq.profit2,
            energies: eq.energies,
            viable1: eq.viable1,
            viable2: eq.viable2,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stackelberg::context::ReplayContext;
    use crate::stackelberg::solver::solve_equilibrium;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(seed: u64, intervals: usize) -> EnergyContext {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x1: Vec<f64> = (0..intervals).map(|_| rng.random()).collect();
        let x2: Vec<f64> = (0..intervals).map(|_| rng.random()).collect();
        let demand: Vec<f64> = (0..intervals).map(|_| rng.random::<f64>() * 9.0).collect();
        EnergyContext::Replay(ReplayContext::new(x1, x2, demand).unwrap())
    }

    #[test]
    fn default_value_lists_cover_the_stated_ranges() {
        let p = 100.0;
        let v1 = SweepParam::FollowerCost.default_values(p);
        assert_eq!(v1.len(), 24);
        assert!((v1[0] - 6.0).abs() < 1e-9);
        assert!((v1[23] - 52.0).abs() < 1e-9);

        let v2 = SweepParam::LeaderCost.default_values(p);
        assert_eq!(v2.len(), 19);
        assert!((v2[0] - 14.0).abs() < 1e-9);
        assert!((v2[18] - 50.0).abs() < 1e-9);

        let v3 = SweepParam::TransmissionFee.default_values(p);
        assert_eq!(v3.len(), 39);
        assert!(v3[0].abs() < 1e-9);
        assert!((v3[38] - 76.0).abs() < 1e-9);
    }

    #[test]
    fn scenario_defaults_fix_the_other_parameters() {
        let (c1, p1) = scenario_defaults(1, 74.3, 0.0).unwrap();
        assert_eq!(p1, SweepParam::FollowerCost);
        assert!((c1.leader_gen_cost - 0.30 * 74.3).abs() < 1e-12);
        assert!((c1.transmission_fee - 0.26 * 74.3).abs() < 1e-12);

        let (c2, p2) = scenario_defaults(2, 74.3, 0.0).unwrap();
        assert_eq!(p2, SweepParam::LeaderCost);
        assert!((c2.follower_gen_cost - 0.30 * 74.3).abs() < 1e-12);
        assert!((c2.transmission_fee - 0.26 * 74.3).abs() < 1e-12);

        let (c3, p3) = scenario_defaults(3, 74.3, 0.0).unwrap();
        assert_eq!(p3, SweepParam::TransmissionFee);
        assert!((c3.leader_gen_cost - 0.26 * 74.3).abs() < 1e-12);
        assert!((c3.follower_gen_cost - 0.20 * 74.3).abs() < 1e-12);

        assert!(scenario_defaults(4, 74.3, 0.0).is_err());
    }

    #[test]
    fn sweep_rows_match_independent_solves() {
        let data = ctx(21, 40);
        let grid = StrategyGrid::new(6.0, 1.0).unwrap();
        let (base, param) = scenario_defaults(3, 50.0, 100.0).unwrap();
        let values = [0.0, 10.0, 25.0, 40.0];
        let rows = scenario_sweep(3, &base, param, &values, &grid, &data).unwrap();
        assert_eq!(rows.len(), values.len());
        for (row, &v) in rows.iter().zip(&values) {
            let costs = param.apply(&base, v).unwrap();
            let eq = solve_equilibrium(&costs, &grid, &data).unwrap();
            assert_eq!(row.value, v);
            assert_eq!(row.p_n1_star, eq.p_n1_star);
            assert_eq!(row.p_n2_star, eq.p_n2_star);
            assert_eq!(row.profit1, eq.profit1);
            assert_eq!(row.profit2, eq.profit2);
            assert_eq!(row.energies, eq.energies);
        }
    }

    #[test]
    fn empty_value_list_gives_empty_table() {
        let data = ctx(2, 10);
        let grid = StrategyGrid::new(6.0, 1.0).unwrap();
        let (base, param) = scenario_defaults(1, 50.0, 0.0).unwrap();
        let rows = scenario_sweep(1, &base, param, &[], &grid, &data).unwrap();
        assert!(rows.is_empty());
    }

    #[test]
    fn csv_layout_is_stable() {
        let row = SweepRow {
            scenario_id: 3,
            varied_param: SweepParam::TransmissionFee,
            value: 12.5,
            p_n1_star: 4.0,
            p_n2_star: 2.0,
            profit1: 1000.5,
            profit2: -3.25,
            energies: EnergyQuadruple::new(10.0, 5.0, 1.0, 0.5).unwrap(),
            viable1: true,
            viable2: false,
        };
        let mut buf = Vec::new();
        write_sweep_csv(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "scenario_id,varied_param,value,p_n1_star,p_n2_star,profit1,profit2,e_g1,e_g2,e_c1,e_c2,viable1,viable2"
        );
        assert_eq!(
            lines.next().unwrap(),
            "3,p_t,12.5,4,2,1000.5,-3.25,10,5,1,0.5,true,false"
        );
    }

    #[test]
    fn apply_rejects_values_that_break_validation() {
        let (base, param) = scenario_defaults(1, 50.0, 0.0).unwrap();
        assert!(param.apply(&base, -1.0).is_err());
        assert!(param.apply(&base, f64::NAN).is_err());
    }
}
