//! Shared numerical building blocks: double-exponential quadrature,
//! polygamma helpers and closed-form integrals of hinge functions over
//! rectangles.
//!
//! Nothing here knows about wind or markets; the statistical and economic
//! modules build on these primitives.

/// Positive part `max(t, 0)`.
#[inline]
pub fn pos(t: f64) -> f64 {
    if t > 0.0 {
        t
    } else {
        0.0
    }
}

#[inline]
fn pos2(t: f64) -> f64 {
    let p = pos(t);
    0.5 * p * p
}

#[inline]
fn pos3(t: f64) -> f64 {
    let p = pos(t);
    p * p * p / 6.0
}

/// Width below which an interval is treated as a point mass (MW scale).
const DEGENERATE_WIDTH: f64 = 1e-12;

/// Mean of the hinge `(U + V - d)+` for independent `U ~ Uniform[a1, b1]`
/// and `V ~ Uniform[a2, b2]`.
///
/// Uses the closed-form double antiderivative of the hinge (corner
/// inclusion–exclusion), so the result is exact up to rounding — no
/// quadrature involved. Zero-width intervals degrade gracefully to the
/// one-dimensional and point-mass cases.
pub fn rect_mean_excess(a1: f64, b1: f64, a2: f64, b2: f64, d: f64) -> f64 {
    debug_assert!(b1 >= a1 && b2 >= a2);
    let w1 = b1 - a1;
    let w2 = b2 - a2;
    match (w1 > DEGENERATE_WIDTH, w2 > DEGENERATE_WIDTH) {
        (false, false) => pos(0.5 * (a1 + b1) + 0.5 * (a2 + b2) - d),
        (false, true) => {
            let m1 = 0.5 * (a1 + b1);
            (pos2(b2 + m1 - d) - pos2(a2 + m1 - d)) / w2
        }
        (true, false) => {
            let m2 = 0.5 * (a2 + b2);
            (pos2(b1 + m2 - d) - pos2(a1 + m2 - d)) / w1
        }
        (true, true) => {
            let num =
                pos3(b1 + b2 - d) - pos3(a1 + b2 - d) - pos3(b1 + a2 - d) + pos3(a1 + a2 - d);
            num / (w1 * w2)
        }
    }
}

/// Probability that `U + V > d` for the same independent uniforms as
/// [`rect_mean_excess`]. Exact closed form; kept for diagnostics and tests.
pub fn rect_exceed_prob(a1: f64, b1: f64, a2: f64, b2: f64, d: f64) -> f64 {
    debug_assert!(b1 >= a1 && b2 >= a2);
    let w1 = b1 - a1;
    let w2 = b2 - a2;
    let p = match (w1 > DEGENERATE_WIDTH, w2 > DEGENERATE_WIDTH) {
        (false, false) => {
            if 0.5 * (a1 + b1) + 0.5 * (a2 + b2) > d {
                1.0
            } else {
                0.0
            }
        }
        (false, true) => {
            let m1 = 0.5 * (a1 + b1);
            (pos(b2 + m1 - d) - pos(a2 + m1 - d)) / w2
        }
        (true, false) => {
            let m2 = 0.5 * (a2 + b2);
            (pos(b1 + m2 - d) - pos(a1 + m2 - d)) / w1
        }
        (true, true) => {
            let num =
                pos2(b1 + b2 - d) - pos2(a1 + b2 - d) - pos2(b1 + a2 - d) + pos2(a1 + a2 - d);
            num / (w1 * w2)
        }
    };
    p.clamp(0.0, 1.0)
}

/// Tanh-sinh (double-exponential) quadrature of `f` over the finite interval
/// `[a, b]`.
///
/// Converges at machine precision for smooth integrands and tolerates mild
/// endpoint singularities because abscissae crowd the endpoints
/// double-exponentially. Integrands with strong power-law endpoint
/// singularities should be regularised first (see
/// [`integrate_power_weighted`]). Non-finite integrand values at the very
/// edge of the interval are skipped.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if b < a {
        return -integrate(f, b, a);
    }
    let halfw = 0.5 * (b - a);
    const T_MAX: f64 = 3.6;
    const MAX_LEVEL: u32 = 12;
    const REL_TOL: f64 = 1e-12;

    // Evaluate the transformed integrand at parameter t; returns weight * f(x).
    let eval = |t: f64| -> f64 {
        let s = std::f64::consts::FRAC_PI_2 * t.sinh();
        // Offset of the abscissa from the nearer endpoint, computed via
        // 1 - tanh(|s|) = 2 / (exp(2|s|) + 1) to avoid the cancellation
        // that would otherwise collapse deep abscissae onto the endpoint.
        let q = 2.0 / ((2.0 * s.abs()).exp() + 1.0);
        let x = if t >= 0.0 {
            b - halfw * q
        } else {
            a + halfw * q
        };
        if x <= a || x >= b {
            return 0.0;
        }
        let c = s.cosh();
        let w = std::f64::consts::FRAC_PI_2 * t.cosh() / (c * c);
        if !w.is_finite() || w == 0.0 {
            return 0.0;
        }
        let fx = f(x);
        if fx.is_finite() {
            w * fx
        } else {
            0.0
        }
    };

    let mut h = 1.0_f64;
    let mut sum = eval(0.0);
    let mut j = 1;
    while (j as f64) * h <= T_MAX {
        let t = (j as f64) * h;
        sum += eval(t) + eval(-t);
        j += 1;
    }
    let mut estimate = sum * h * halfw;

    for _level in 1..=MAX_LEVEL {
        h *= 0.5;
        // Add contributions at odd multiples of the new step.
        let mut k = 1;
        while (k as f64) * h <= T_MAX {
            let t = (k as f64) * h;
            sum += eval(t) + eval(-t);
            k += 2;
        }
        let new_estimate = sum * h * halfw;
        let delta = (new_estimate - estimate).abs();
        estimate = new_estimate;
        if delta <= REL_TOL * estimate.abs().max(1e-300) {
            break;
        }
    }
    estimate
}

/// Integral of `g(x) * x^(alpha-1) * (1-x)^(beta-1)` over `[lo, hi]`,
/// a subinterval of `[0, 1]`.
///
/// Endpoints that touch 0 or 1 are handled by the substitutions
/// `y = x^alpha` and `z = (1-x)^beta`, which absorb the power-law
/// singularities exactly, so the quadrature only ever sees a bounded
/// integrand — reliable even for shape parameters well below one.
/// `g` must be bounded on `[0, 1]`.
pub fn integrate_power_weighted<F: Fn(f64) -> f64>(
    g: F,
    alpha: f64,
    beta: f64,
    lo: f64,
    hi: f64,
) -> f64 {
    assert!(alpha > 0.0 && beta > 0.0, "shape parameters must be positive");
    assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi) && lo <= hi);
    if lo == hi {
        return 0.0;
    }

    let touches_zero = lo == 0.0;
    let touches_one = hi == 1.0;

    // Integral over a piece keeping away from x = 1; left endpoint may be 0.
    let left_piece = |from: f64, to: f64| -> f64 {
        if from == 0.0 {
            // y = x^alpha  =>  integrand becomes g(y^(1/alpha)) (1-x)^(beta-1) / alpha
            integrate(
                |y: f64| {
                    let x = y.powf(1.0 / alpha);
                    g(x) * (1.0 - x).powf(beta - 1.0) / alpha
                },
                0.0,
                to.powf(alpha),
            )
        } else {
            integrate(
                |x: f64| g(x) * x.powf(alpha - 1.0) * (1.0 - x).powf(beta - 1.0),
                from,
                to,
            )
        }
    };
    // Integral over a piece whose right endpoint is 1.
    let right_piece = |from: f64| -> f64 {
        // z = (1-x)^beta  =>  integrand becomes g(1 - z^(1/beta)) x^(alpha-1) / beta
        integrate(
            |z: f64| {
                let x = 1.0 - z.powf(1.0 / beta);
                g(x) * x.powf(alpha - 1.0) / beta
            },
            0.0,
            (1.0 - from).powf(beta),
        )
    };

    match (touches_zero, touches_one) {
        (_, false) => left_piece(lo, hi),
        (false, true) => right_piece(lo),
        (true, true) => {
            let split = 0.5;
            left_piece(0.0, split) + right_piece(split)
        }
    }
}

/// Derivative of the digamma function (trigamma), `psi'(x)` for `x > 0`.
///
/// Computed by the recurrence `psi'(x) = psi'(x+1) + 1/x^2` until the
/// argument is large enough for the standard asymptotic series. Accurate to
/// roughly 1e-12 over the parameter ranges used by the fitting code.
pub fn trigamma(x: f64) -> f64 {
    assert!(x > 0.0, "trigamma requires a positive argument");
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // Asymptotic expansion:
    // 1/x + 1/(2x^2) + 1/(6x^3) - 1/(30x^5) + 1/(42x^7) - 1/(30x^9) + 5/(66x^11)
    let series = inv
        + 0.5 * inv2
        + inv2
            * inv
            * (1.0 / 6.0
                - inv2
                    * (1.0 / 30.0
                        - inv2 * (1.0 / 42.0 - inv2 * (1.0 / 30.0 - inv2 * (5.0 / 66.0)))));
    acc + series
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn quadrature_matches_elementary_integrals() {
        assert_relative_eq!(integrate(|x| x * x * x, 0.0, 1.0), 0.25, max_relative = 1e-10);
        assert_relative_eq!(
            integrate(|x| x.sin(), 0.0, std::f64::consts::PI),
            2.0,
            max_relative = 1e-10
        );
        assert_relative_eq!(integrate(|x| x.exp(), -1.0, 2.0), 2f64.exp() - (-1f64).exp(), max_relative = 1e-10);
    }

    #[test]
    fn quadrature_handles_mild_endpoint_singularity() {
        // d/dx sqrt(x) = 1/(2 sqrt(x)) integrates to 1 on [0, 1].
        assert_relative_eq!(integrate(|x| 0.5 / x.sqrt(), 0.0, 1.0), 1.0, max_relative = 1e-9);
    }

    #[test]
    fn power_weighted_matches_beta_function() {
        // Integral of x^(a-1)(1-x)^(b-1) over [0,1] is B(a,b).
        let beta_fn = |a: f64, b: f64| {
            (statrs::function::gamma::ln_gamma(a) + statrs::function::gamma::ln_gamma(b)
                - statrs::function::gamma::ln_gamma(a + b))
            .exp()
        };
        for &(a, b) in &[(2.0, 5.0), (0.4, 0.7), (0.05, 3.0), (1.0, 1.0), (6.5, 0.3)] {
            let q = integrate_power_weighted(|_| 1.0, a, b, 0.0, 1.0);
            assert_relative_eq!(q, beta_fn(a, b), max_relative = 1e-8);
        }
    }

    #[test]
    fn power_weighted_partial_interval() {
        // With alpha = beta = 1 the weight is flat: integral of g over [lo, hi].
        let q = integrate_power_weighted(|x| x, 1.0, 1.0, 0.2, 0.9);
        assert_relative_eq!(q, (0.9f64.powi(2) - 0.2f64.powi(2)) / 2.0, max_relative = 1e-10);
        // Right endpoint at 1 with beta < 1.
        let q = integrate_power_weighted(|_| 1.0, 1.0, 0.5, 0.5, 1.0);
        // Integral of (1-x)^(-1/2) from 0.5 to 1 = 2 sqrt(0.5).
        assert_relative_eq!(q, 2.0 * 0.5f64.sqrt(), max_relative = 1e-9);
    }

    #[test]
    fn trigamma_reference_values() {
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        assert_relative_eq!(trigamma(1.0), pi2 / 6.0, max_relative = 1e-11);
        assert_relative_eq!(trigamma(0.5), pi2 / 2.0, max_relative = 1e-11);
        assert_relative_eq!(trigamma(2.0), pi2 / 6.0 - 1.0, max_relative = 1e-11);
        // Recurrence consistency at a small argument.
        assert_relative_eq!(
            trigamma(0.1),
            trigamma(1.1) + 1.0 / 0.01,
            max_relative = 1e-11
        );
    }

    #[test]
    fn rect_mean_excess_unit_square() {
        // E[(U + V - 1)+] over the unit square is 1/6.
        assert_relative_eq!(rect_mean_excess(0.0, 1.0, 0.0, 1.0, 1.0), 1.0 / 6.0, epsilon = 1e-14);
        // d = 0 gives the plain mean of U + V.
        assert_relative_eq!(rect_mean_excess(0.0, 1.0, 0.0, 1.0, 0.0), 1.0, epsilon = 1e-14);
        // Threshold above the rectangle: zero excess.
        assert_eq!(rect_mean_excess(0.0, 1.0, 0.0, 1.0, 2.5), 0.0);
    }

    #[test]
    fn rect_exceed_prob_unit_square() {
        assert_relative_eq!(rect_exceed_prob(0.0, 1.0, 0.0, 1.0, 1.0), 0.5, epsilon = 1e-14);
        assert_eq!(rect_exceed_prob(0.0, 1.0, 0.0, 1.0, 2.0), 0.0);
        assert_eq!(rect_exceed_prob(0.0, 1.0, 0.0, 1.0, -0.5), 1.0);
    }

    #[test]
    fn rect_formulas_degenerate_cases() {
        // Point mass at (2, 3) against d = 4: excess 1.
        assert_eq!(rect_mean_excess(2.0, 2.0, 3.0, 3.0, 4.0), 1.0);
        assert_eq!(rect_exceed_prob(2.0, 2.0, 3.0, 3.0, 4.0), 1.0);
        // One degenerate axis: V ~ U[0,2] shifted by 1, d = 2 => E[(V-1)+] = 1/4.
        assert_relative_eq!(rect_mean_excess(1.0, 1.0, 0.0, 2.0, 2.0), 0.25, epsilon = 1e-14);
        assert_relative_eq!(rect_exceed_prob(1.0, 1.0, 0.0, 2.0, 2.0), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn rect_formulas_match_monte_carlo() {
        let mut rng = ChaCha8Rng::seed_from_u64(901);
        let cases = [
            (0.0, 3.5, 1.0, 4.0, 5.0),
            (0.0, 7.0, 0.0, 3.0, 6.0),
            (2.0, 2.5, 0.5, 0.75, 2.9),
            (0.0, 1.0, 0.0, 1.0, 1.3),
        ];
        let n = 400_000;
        for &(a1, b1, a2, b2, d) in &cases {
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            let mut hits = 0u64;
            for _ in 0..n {
                let u = a1 + (b1 - a1) * rng.random::<f64>();
                let v = a2 + (b2 - a2) * rng.random::<f64>();
                let e = pos(u + v - d);
                sum += e;
                sum_sq += e * e;
                if u + v > d {
                    hits += 1;
                }
            }
            let mc_mean = sum / n as f64;
            let var = (sum_sq / n as f64 - mc_mean * mc_mean).max(0.0);
            let se = (var / n as f64).sqrt();
            let exact = rect_mean_excess(a1, b1, a2, b2, d);
            assert!(
                (exact - mc_mean).abs() <= 4.0 * se + 1e-12,
                "mean excess mismatch: exact {exact}, mc {mc_mean}, se {se}"
            );
            let p_exact = rect_exceed_prob(a1, b1, a2, b2, d);
            let p_mc = hits as f64 / n as f64;
            let p_se = (p_exact * (1.0 - p_exact) / n as f64).sqrt();
            assert!(
                (p_exact - p_mc).abs() <= 4.0 * p_se + 1e-6,
                "exceed prob mismatch: exact {p_exact}, mc {p_mc}"
            );
        }
    }
}
