//! Backward-induction solution of the capacity game.

use super::context::{EnergyContext, EnergyTable};
use super::{profit_follower, profit_leader, CostParams, EnergyQuadruple, StackelbergError, StrategyGrid};

/// Follower's optimal capacity for one leader choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestResponse {
    pub p_n2_star: f64,
    pub profit2: f64,
    pub energies: EnergyQuadruple,
}

/// One point of the follower response curve, annotated with the leader's
/// profit at that point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponsePoint {
    pub p_n1: f64,
    pub p_n2_star: f64,
    pub profit1: f64,
    pub profit2: f64,
    pub energies: EnergyQuadruple,
}

/// Subgame-perfect equilibrium of the discrete capacity game.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumResult {
    pub p_n1_star: f64,
    pub p_n2_star: f64,
    pub profit1: f64,
    pub profit2: f64,
    pub energies: EnergyQuadruple,
    /// True when the player's best achievable profit is non-negative;
    /// a false flag marks an investment that never pays for itself.
    pub viable1: bool,
    pub viable2: bool,
    /// The follower's best response for every leader grid value.
    pub follower_response_curve: Vec<ResponsePoint>,
}

impl EquilibriumResult {
    /// Export the response curve as `p_n1,p_n2_star,profit2` CSV rows.
    pub fn write_response_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "p_n1,p_n2_star,profit2")?;
        for point in &self.follower_response_curve {
            writeln!(w, "{},{},{}", point.p_n1, point.p_n2_star, point.profit2)?;
        }
        Ok(())
    }
}

/// Follower's best response to `p_n1`: scan the grid for the capacity
/// maximising follower profit. Ties resolve to the smallest capacity.
pub fn follower_best_response(
    p_n1: f64,
    costs: &CostParams,
    grid: &StrategyGrid,
    ctx: &EnergyContext,
) -> Result<BestResponse, StackelbergError> {
    let values = grid.values();
    if values.is_empty() {
        return Err(StackelbergError::EmptyGrid);
    }
    let mut best: Option<BestResponse> = None;
    for &p2 in &values {
        let energies = ctx.energies(p_n1, p2)?;
        let profit2 = profit_follower(&energies, costs);
        let better = match &best {
            None => true,
            Some(b) => profit2 > b.profit2,
        };
        if better {
            best = Some(BestResponse {
                p_n2_star: p2,
                profit2,
                energies,
            });
        }
    }
    Ok(best.expect("grid is non-empty"))
}

/// Solve the game on a prebuilt energy table: compute the follower's best
/// response for every leader value, then pick the leader value maximising
/// leader profit along the response curve. Ties resolve to the smallest
/// capacity for both players.
pub fn solve_equilibrium_with(
    table: &EnergyTable,
    costs: &CostParams,
) -> Result<EquilibriumResult, StackelbergError> {
    let values = table.grid_values();
    if values.is_empty() {
        return Err(StackelbergError::EmptyGrid);
    }
    let mut curve = Vec::with_capacity(values.len());
    for (i1, &p1) in values.iter().enumerate() {
        let mut best_i2 = 0usize;
        let mut best_profit2 = f64::NEG_INFINITY;
        for i2 in 0..values.len() {
            let profit2 = profit_follower(table.energies(i1, i2), costs);
            if profit2 > best_profit2 {
                best_profit2 = profit2;
                best_i2 = i2;
            }
        }
        let energies = *table.energies(i1, best_i2);
        curve.push(ResponsePoint {
            p_n1: p1,
            p_n2_star: values[best_i2],
            profit1: profit_leader(&energies, costs),
            profit2: best_profit2,
            energies,
        });
    }
    let mut best = &curve[0];
    for point in &curve[1..] {
        if point.profit1 > best.profit1 {
            best = point;
        }
    }
    Ok(EquilibriumResult {
        p_n1_star: best.p_n1,
        p_n2_star: best.p_n2_star,
        profit1: best.profit1,
        profit2: best.profit2,
        energies: best.energies,
        viable1: best.profit1 >= 0.0,
        viable2: best.profit2 >= 0.0,
        follower_response_curve: curve,
    })
}

/// Build the energy table for `grid` and solve the game.
pub fn solve_equilibrium(
    costs: &CostParams,
    grid: &StrategyGrid,
    ctx: &EnergyContext,
) -> Result<EquilibriumResult, StackelbergError> {
    let table = EnergyTable::build(ctx, grid)?;
    solve_equilibrium_with(&table, costs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stackelberg::context::ReplayContext;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn small_ctx(seed: u64, intervals: usize) -> EnergyContext {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x1: Vec<f64> = (0..intervals).map(|_| rng.random()).collect();
        let x2: Vec<f64> = (0..intervals).map(|_| rng.random()).collect();
        let demand: Vec<f64> = (0..intervals).map(|_| rng.random::<f64>() * 8.0).collect();
        EnergyContext::Replay(ReplayContext::new(x1, x2, demand).unwrap())
    }

    /// Independent check: enumerate the whole payoff matrix and apply the
    /// backward-induction definition literally.
    fn brute_force(
        costs: &CostParams,
        grid: &StrategyGrid,
        ctx: &EnergyContext,
    ) -> (f64, f64, f64, f64) {
        let values = grid.values();
        let mut best_leader: Option<(f64, f64, f64, f64)> = None;
        for &p1 in &values {
            let mut follower_best: Option<(f64, f64)> = None;
            for &p2 in &values {
                let e = ctx.energies(p1, p2).unwrap();
                let pf = profit_follower(&e, costs);
                if follower_best.is_none_or(|(_, best_pf)| pf > best_pf) {
                    follower_best = Some((p2, pf));
                }
            }
            let (p2_star, pf) = follower_best.unwrap();
            let e = ctx.energies(p1, p2_star).unwrap();
            let pl = profit_leader(&e, costs);
            if best_leader.is_none_or(|(_, _, best_pl, _)| pl > best_pl) {
                best_leader = Some((p1, p2_star, pl, pf));
            }
        }
        best_leader.unwrap()
    }

    #[test]
    fn solver_agrees_with_brute_force_enumeration() {
        let grid = StrategyGrid::new(10.0, 1.0).unwrap();
        for seed in 0..5u64 {
            let ctx = small_ctx(seed, 12);
            let costs = CostParams::new(
                50.0 + seed as f64,
                10.0,
                12.0,
                14.0,
                (seed as f64) * 100.0,
            )
            .unwrap();
            let got = solve_equilibrium(&costs, &grid, &ctx).unwrap();
            let (p1, p2, pl, pf) = brute_force(&costs, &grid, &ctx);
            assert_eq!(got.p_n1_star, p1);
            assert_eq!(got.p_n2_star, p2);
            assert_relative_eq!(got.profit1, pl, max_relative = 1e-12);
            assert_relative_eq!(got.profit2, pf, max_relative = 1e-12);
        }
    }

    #[test]
    fn ties_resolve_to_smallest_capacity() {
        // A dead-calm wind record zeroes every energy term, so all
        // capacities tie at zero profit; both players must land on 0.
        let calm = EnergyContext::Replay(
            ReplayContext::new(vec![0.0; 6], vec![0.0; 6], vec![5.0; 6]).unwrap(),
        );
        let costs = CostParams::new(60.0, 15.0, 10.0, 18.0, 0.0).unwrap();
        let grid = StrategyGrid::new(5.0, 1.0).unwrap();
        let result = solve_equilibrium(&costs, &grid, &calm).unwrap();
        assert_eq!(result.p_n1_star, 0.0);
        assert_eq!(result.p_n2_star, 0.0);
        assert_eq!(result.profit1, 0.0);
        assert_eq!(result.profit2, 0.0);
    }

    #[test]
    fn follower_best_response_matches_curve() {
        let ctx = small_ctx(3, 20);
        let costs = CostParams::new(60.0, 15.0, 10.0, 18.0, 0.0).unwrap();
        let grid = StrategyGrid::new(8.0, 2.0).unwrap();
        let eq = solve_equilibrium(&costs, &grid, &ctx).unwrap();
        for point in &eq.follower_response_curve {
            let br = follower_best_response(point.p_n1, &costs, &grid, &ctx).unwrap();
            assert_eq!(br.p_n2_star, point.p_n2_star);
            assert_relative_eq!(br.profit2, point.profit2, max_relative = 1e-12);
        }
    }

    #[test]
    fn heavy_line_cost_flags_leader_nonviable() {
        let ctx = small_ctx(5, 30);
        // An absurd line cost cannot be recovered: flag must drop.
        let costs = CostParams::new(60.0, 15.0, 10.0, 18.0, 1e12).unwrap();
        let grid = StrategyGrid::new(8.0, 2.0).unwrap();
        let eq = solve_equilibrium(&costs, &grid, &ctx).unwrap();
        assert!(!eq.viable1);
        assert!(eq.profit1 < 0.0);
        // The follower can always retreat to zero capacity, so it stays
        // weakly viable.
        assert!(eq.viable2);
    }

    #[test]
    fn response_csv_has_header_and_rows() {
        let ctx = small_ctx(1, 10);
        let costs = CostParams::new(60.0, 15.0, 10.0, 18.0, 0.0).unwrap();
        let grid = StrategyGrid::new(4.0, 1.0).unwrap();
        let eq = solve_equilibrium(&costs, &grid, &ctx).unwrap();
        let mut buf = Vec::new();
        eq.write_response_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("p_n1,p_n2_star,profit2\n"));
        assert_eq!(text.lines().count(), 1 + 5);
    }
}
