//! Expected generation and curtailment from fitted distributions.
//!
//! Two routes are provided: Beta marginals for a single capacity (quadrature
//! with singularity-absorbing substitutions) and joint histograms for a
//! capacity pair (closed-form hinge integrals per cell, no quadrature).

use crate::numerics::{integrate_power_weighted, rect_mean_excess};
use crate::windmodel::{BetaParams, JointPowerDistribution};

use super::StackelbergError;

fn validate_capacity(name: &str, p: f64) -> Result<(), StackelbergError> {
    if !p.is_finite() || p < 0.0 {
        return Err(StackelbergError::InvalidParameter(format!(
            "capacity {name} must be non-negative and finite, got {p}"
        )));
    }
    Ok(())
}

fn validate_demand(d: f64) -> Result<(), StackelbergError> {
    if !d.is_finite() || d < 0.0 {
        return Err(StackelbergError::InvalidParameter(format!(
            "demand must be non-negative and finite, got {d}"
        )));
    }
    Ok(())
}

/// Expected generation per hour, `p_n * E[x]`, with the mean evaluated by
/// quadrature over the fitted Beta density.
pub fn expected_generation_beta(
    params: &BetaParams,
    p_n: f64,
) -> Result<f64, StackelbergError> {
    validate_capacity("p_n", p_n)?;
    let norm = (-params.ln_norm()).exp();
    let mean = integrate_power_weighted(|x| x, params.alpha, params.beta, 0.0, 1.0) * norm;
    Ok(p_n * mean)
}

/// Expected curtailment per hour for one capacity against a demand limit:
/// mean of `(p_n x - demand)+` under the fitted Beta density.
pub fn expected_curtailment_beta(
    params: &BetaParams,
    p_n: f64,
    demand_mw: f64,
) -> Result<f64, StackelbergError> {
    validate_capacity("p_n", p_n)?;
    validate_demand(demand_mw)?;
    if p_n <= 0.0 || demand_mw >= p_n {
        return Ok(0.0);
    }
    let threshold = (demand_mw / p_n).clamp(0.0, 1.0);
    let norm = (-params.ln_norm()).exp();
    let value = integrate_power_weighted(
        |x| p_n * x - demand_mw,
        params.alpha,
        params.beta,
        threshold,
        1.0,
    ) * norm;
    Ok(value.max(0.0))
}

/// Expected generation per hour for both capacities under a joint power
/// histogram (cell-midpoint means).
pub fn expected_generation_joint(
    dist: &JointPowerDistribution,
    p1: f64,
    p2: f64,
) -> Result<(f64, f64), StackelbergError> {
    validate_capacity("p1", p1)?;
    validate_capacity("p2", p2)?;
    Ok((p1 * dist.mean_x1(), p2 * dist.mean_x2()))
}

/// Expected total curtailment per hour for a capacity pair against a demand
/// limit under a joint power histogram.
///
/// Each occupied cell contributes its probability times the exact mean of
/// the hinge `(p1 x1 + p2 x2 - demand)+` over the cell rectangle, so the
/// only approximation is the histogram itself.
pub fn expected_curtailment_joint(
    dist: &JointPowerDistribution,
    p1: f64,
    p2: f64,
    demand_mw: f64,
) -> Result<f64, StackelbergError> {
    validate_capacity("p1", p1)?;
    validate_capacity("p2", p2)?;
    validate_demand(demand_mw)?;
    let mut total = 0.0;
    for (i, j, prob) in dist.nonzero_cells() {
        let (lo1, hi1) = dist.bin_bounds(i);
        let (lo2, hi2) = dist.bin_bounds(j);
        total += prob
            * rect_mean_excess(p1 * lo1, p1 * hi1, p2 * lo2, p2 * hi2, demand_mw);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::windmodel::{joint_histogram, HourSeasonKey};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn uniform_joint(bins: usize) -> JointPowerDistribution {
        let probs = vec![1.0 / (bins * bins) as f64; bins * bins];
        JointPowerDistribution::new(HourSeasonKey::new(1, 1).unwrap(), bins, probs).unwrap()
    }

    #[test]
    fn generation_matches_beta_mean_identity() {
        for &(a, b) in &[(2.0, 5.0), (0.7, 0.9), (3.5, 1.2), (1.0, 1.0)] {
            let params = BetaParams::new(a, b).unwrap();
            for &p in &[1.0, 7.0, 150.0] {
                let got = expected_generation_beta(&params, p).unwrap();
                let want = p * a / (a + b);
                assert_relative_eq!(got, want, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn curtailment_beta_zero_when_demand_covers_capacity() {
        let params = BetaParams::new(2.0, 5.0).unwrap();
        assert_eq!(expected_curtailment_beta(&params, 10.0, 10.0).unwrap(), 0.0);
        assert_eq!(expected_curtailment_beta(&params, 10.0, 15.0).unwrap(), 0.0);
        assert_eq!(expected_curtailment_beta(&params, 0.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn curtailment_beta_uniform_closed_form() {
        // Beta(1,1) is uniform: E[(P x - d)+] = (P - d)^2 / (2 P).
        let params = BetaParams::new(1.0, 1.0).unwrap();
        for &(p, d) in &[(10.0, 6.0), (7.0, 2.0), (1.0, 0.25)] {
            let got = expected_curtailment_beta(&params, p, d).unwrap();
            let want = (p - d) * (p - d) / (2.0 * p);
            assert_relative_eq!(got, want, max_relative = 1e-9);
        }
        // Zero demand: everything above zero is excess, so the mean output.
        let got = expected_curtailment_beta(&params, 10.0, 0.0).unwrap();
        assert_relative_eq!(got, 5.0, max_relative = 1e-9);
    }

    #[test]
    fn curtailment_beta_matches_monte_carlo() {
        use statrs::distribution::ContinuousCDF;
        let params = BetaParams::new(2.0, 5.0).unwrap();
        let dist = statrs::distribution::Beta::new(2.0, 5.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let (p, d) = (10.0, 2.0);
        let n = 1_000_000;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            let x = dist.inverse_cdf(rng.random::<f64>());
            let e = (p * x - d).max(0.0);
            sum += e;
            sum_sq += e * e;
        }
        let mc = sum / n as f64;
        let var = (sum_sq / n as f64 - mc * mc).max(0.0);
        let se = (var / n as f64).sqrt();
        let got = expected_curtailment_beta(&params, p, d).unwrap();
        assert!(
            (got - mc).abs() <= 3.0 * se,
            "quadrature {got} vs MC {mc} (se {se})"
        );
    }

    #[test]
    fn joint_uniform_unit_demand_is_one_sixth() {
        // Independent uniforms at unit capacity against unit demand:
        // E[(x1 + x2 - 1)+] = 1/6, and the per-cell closed forms make the
        // histogram route exact for any bin count.
        for bins in [2, 4, 16] {
            let dist = uniform_joint(bins);
            let got = expected_curtailment_joint(&dist, 1.0, 1.0, 1.0).unwrap();
            assert_relative_eq!(got, 1.0 / 6.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn joint_route_matches_empirical_histogram_monte_carlo() {
        // Build a histogram from correlated samples, then check the joint
        // expectation against the sample mean of the same data (the
        // histogram is exact on its own samples up to within-cell spread).
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let n = 200_000;
        let mut x1 = Vec::with_capacity(n);
        let mut x2 = Vec::with_capacity(n);
        for _ in 0..n {
            let a: f64 = rng.random();
            let b: f64 = rng.random();
            x1.push(a);
            x2.push((0.6 * a + 0.4 * b).clamp(0.0, 1.0));
        }
        let dist = joint_histogram(&x1, &x2, HourSeasonKey::new(1, 1).unwrap(), 50).unwrap();
        let (p1, p2, d) = (8.0, 5.0, 6.0);
        let got = expected_curtailment_joint(&dist, p1, p2, d).unwrap();
        let sample_mean = x1
            .iter()
            .zip(&x2)
            .map(|(a, b)| (p1 * a + p2 * b - d).max(0.0))
            .sum::<f64>()
            / n as f64;
        assert_relative_eq!(got, sample_mean, max_relative = 5e-3);
    }

    #[test]
    fn joint_generation_uses_midpoint_means() {
        let dist = uniform_joint(4);
        let (g1, g2) = expected_generation_joint(&dist, 10.0, 6.0).unwrap();
        assert_relative_eq!(g1, 5.0, epsilon = 1e-12);
        assert_relative_eq!(g2, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_capacity_contributes_nothing() {
        let dist = uniform_joint(4);
        let c = expected_curtailment_joint(&dist, 0.0, 10.0, 4.0).unwrap();
        // Only the second player can exceed demand: E[(10 x2 - 4)+] = 1.8.
        assert_relative_eq!(c, 1.8, epsilon = 1e-12);
        let c = expected_curtailment_joint(&dist, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(c, 0.0);
    }
}
