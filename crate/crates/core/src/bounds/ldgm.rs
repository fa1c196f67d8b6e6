use serde::{Deserialize, Serialize};

use super::entropy::{entropy_deficit, induced_weight_unchecked};
use super::exponent::{big_f, big_f_detail};
use super::optimize::{grid_then_golden, Maximum};
use super::BoundResult;
use crate::error::{check_closed, Error, Result};

/// Nodes of the coarse grid over the weight fraction `w`.
pub(crate) const OUTER_GRID: usize = 2000;
/// Absolute tolerance on `w` for the refinement.
pub(crate) const OUTER_TOL: f64 = 1e-9;

/// Known exact random XORSAT satisfiability thresholds, for display next
/// to the second-moment lower bound. Never used in computation.
pub const EXACT_XORSAT_THRESHOLDS: &[(u32, f64)] = &[(3, 0.91794), (6, 0.99738)];

pub fn exact_xorsat_threshold(c: u32) -> Option<f64> {
    EXACT_XORSAT_THRESHOLDS
        .iter()
        .find(|(deg, _)| *deg == c)
        .map(|(_, v)| *v)
}

/// `U(w; D, c) = (1 - h(D) + F[D, delta(w; c)]) / (1 - h(w))`.
///
/// At `w = 1/2` both numerator and denominator vanish. For `c >= 3` the
/// numerator vanishes like `|w - 1/2|^c` against `|w - 1/2|^2` below, so
/// the value there is 0. For `c = 2` the finite limit is extrapolated from
/// symmetric one-sided evaluations; for `c = 1` the left limit is `+inf`.
pub fn u_func(w: f64, distortion: f64, c: u32) -> Result<f64> {
    check_closed("w", w, 0.0, 1.0, "[0, 1]")?;
    check_closed("D", distortion, 0.0, 0.5, "[0, 1/2]")?;
    if c < 1 {
        return Err(Error::InvalidParameter("check degree c must be >= 1".into()));
    }
    if w == 0.0 {
        return Ok(entropy_deficit(distortion));
    }
    if w == 0.5 {
        return half_weight_limit(c, |w| u_unchecked(w, distortion, c));
    }
    u_unchecked(w, distortion, c)
}

fn u_unchecked(w: f64, d: f64, c: u32) -> Result<f64> {
    let delta = induced_weight_unchecked(w, c);
    let f = big_f(d, delta)?;
    Ok((entropy_deficit(d) + f) / entropy_deficit(w))
}

/// Value at the `w = 1/2` removable singularity shared by `U` and `V`.
pub(crate) fn half_weight_limit<F>(c: u32, f: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    match c {
        1 => Ok(f64::INFINITY),
        2 => {
            // The expansion around 1/2 is even in the offset, so one
            // Richardson step removes the quadratic term.
            let avg = |s: f64| -> Result<f64> { Ok(0.5 * (f(0.5 - s)? + f(0.5 + s)?)) };
            let (coarse, fine) = (avg(0.02)?, avg(0.01)?);
            Ok((4.0 * fine - coarse) / 3.0)
        }
        _ => Ok(0.0),
    }
}

/// Maximizes `objective` over `[0, hi]` with the shared outer strategy.
pub(crate) fn maximize_over_weight<F>(objective: F, hi: f64) -> Result<Maximum>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let m = grid_then_golden(objective, 0.0, hi, OUTER_GRID, OUTER_TOL)?;
    if !m.value.is_finite() {
        return Err(Error::NonConvergence {
            context: "outer maximization over w",
            detail: format!("non-finite maximum {} at w = {}", m.value, m.x),
        });
    }
    Ok(m)
}

pub(crate) fn bound_result(m: Maximum, distortion: f64, c: u32) -> Result<BoundResult> {
    let delta = induced_weight_unchecked(m.x, c);
    let argmax_u = big_f_detail(distortion, delta)?.u_star;
    let shannon = entropy_deficit(distortion);
    Ok(BoundResult {
        value: m.value,
        argmax_w: m.x,
        argmax_u,
        shannon,
        gap: m.value - shannon,
        evaluations: m.evaluations,
        bracket: m.bracket,
    })
}

/// Upper bound on the effective rate-distortion function of the
/// check-regular LDGM ensemble: the maximum of `U(w; D, c)` over `w`.
///
/// For even `c`, `U` is symmetric about 1/2 and only `[0, 1/2]` is
/// searched; for odd `c` the whole of `[0, 1]` is.
pub fn rate_upper_bound(distortion: f64, c: u32) -> Result<BoundResult> {
    check_closed("D", distortion, 0.0, 0.5, "[0, 1/2]")?;
    if c < 2 {
        return Err(Error::InvalidParameter(format!(
            "rate bound needs check degree c >= 2, got {c}"
        )));
    }
    let hi = if c.is_multiple_of(2) { 0.5 } else { 1.0 };
    let m = maximize_over_weight(|w| u_func(w, distortion, c), hi)?;
    bound_result(m, distortion, c)
}

/// Second-moment lower bound on the random `c`-XORSAT threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XorsatThreshold {
    pub c: u32,
    /// Rate bound at zero distortion, `R_eff(0, c)`.
    pub r_eff0: f64,
    /// Clause-density lower bound `1 / R_eff(0, c)`.
    pub alpha_star: f64,
    pub argmax_w: f64,
    /// Known exact threshold, when tabulated.
    pub exact: Option<f64>,
    pub evaluations: usize,
}

/// `R_eff(0, c) = max_{w in [0, 1/2]} (1 + log2(1 - delta(w; c))) / (1 - h(w))`
/// and `alpha*(c) = 1 / R_eff(0, c)`.
pub fn xorsat_threshold(c: u32) -> Result<XorsatThreshold> {
    if c < 2 {
        return Err(Error::InvalidParameter(format!(
            "threshold needs check degree c >= 2, got {c}"
        )));
    }
    let m = maximize_over_weight(|w| u_func(w, 0.0, c), 0.5)?;
    Ok(XorsatThreshold {
        c,
        r_eff0: m.value,
        alpha_star: 1.0 / m.value,
        argmax_w: m.x,
        exact: exact_xorsat_threshold(c),
        evaluations: m.evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::entropy::h_bits;

    #[test]
    fn u_at_zero_weight_is_shannon() {
        for &d in &[0.0, 0.01, 0.11, 0.3, 0.5] {
            assert_eq!(u_func(0.0, d, 4).unwrap(), entropy_deficit(d));
        }
        assert!((u_func(0.0, 0.11, 4).unwrap() - 0.50008).abs() < 1e-5);
    }

    #[test]
    fn u_symmetric_for_even_degree() {
        for &c in &[2, 4, 6] {
            for i in 1..20 {
                let w = f64::from(i) * 0.0237;
                let (a, b) = (u_func(w, 0.11, c).unwrap(), u_func(1.0 - w, 0.11, c).unwrap());
                assert!((a - b).abs() < 1e-12, "c={c} w={w}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn u_vanishes_at_half_weight() {
        assert_eq!(u_func(0.5, 0.11, 4).unwrap(), 0.0);
        let mut previous = f64::INFINITY;
        for k in 3..=6 {
            let s = 10f64.powi(-k);
            let left = u_func(0.5 - s, 0.11, 4).unwrap();
            let right = u_func(0.5 + s, 0.11, 4).unwrap();
            let size = left.abs().max(right.abs());
            assert!(size < 1e-3, "k={k}: {left}, {right}");
            assert!(size <= previous + 1e-4);
            previous = size;
        }
    }

    #[test]
    fn degree_two_limit_is_finite_and_continuous() {
        let at_half = u_func(0.5, 0.11, 2).unwrap();
        let near = u_func(0.5 - 1e-3, 0.11, 2).unwrap();
        assert!(at_half.is_finite());
        assert!((at_half - near).abs() < 1e-4, "{at_half} vs {near}");
    }

    #[test]
    fn zero_distortion_bound_for_degree_three() {
        let r = rate_upper_bound(0.0, 3).unwrap();
        assert!((r.value - 1.0 / 0.88949).abs() < 5e-5);
        assert!(r.argmax_w > 0.0 && r.argmax_w < 0.5);
    }

    #[test]
    fn bound_overshoots_shannon_at_typical_point() {
        let r = rate_upper_bound(0.11, 4).unwrap();
        assert!(r.value > 0.5);
        assert!(r.argmax_w > 0.0);
        assert!(r.gap > 0.0);
        assert!(r.argmax_u >= 0.0 && r.argmax_u <= 0.11);
        assert!((r.shannon - (1.0 - h_bits(0.11))).abs() < 1e-15);
    }

    #[test]
    fn thresholds_match_published_values() {
        let t3 = xorsat_threshold(3).unwrap();
        let t6 = xorsat_threshold(6).unwrap();
        assert!((t3.alpha_star - 0.88949).abs() < 5e-5, "{}", t3.alpha_star);
        assert!((t6.alpha_star - 0.99623).abs() < 5e-5, "{}", t6.alpha_star);
        assert!(t3.alpha_star < t3.exact.unwrap());
        assert!(t6.alpha_star < t6.exact.unwrap());
        assert_eq!(xorsat_threshold(4).unwrap().exact, None);
    }

    #[test]
    fn rejects_bad_degree() {
        assert!(rate_upper_bound(0.1, 1).is_err());
        assert!(xorsat_threshold(1).is_err());
        assert!(u_func(0.2, 0.1, 0).is_err());
    }
}
