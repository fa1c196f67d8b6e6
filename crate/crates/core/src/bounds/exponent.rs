//! Chernoff exponent of the conditional overlap probability.
//!
//! For a source drawn uniformly from the Hamming ball of radius `Dn` and a
//! codeword whose bits are i.i.d. Bernoulli(`delta`), `G(u; lambda)` is the
//! tilted exponent of the event that the codeword also lands within `Dn`
//! of the source when the source has `un` ones. `F[D, delta]` is the
//! maximum over `u` of `G` at the optimal tilt.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use super::entropy::h_nats;
use crate::error::{check_closed, Error, Result};

/// Absolute tolerance on `u` for the inner golden-section search.
const INNER_TOL: f64 = 1e-10;
/// Nodes of the grid cross-check on `[0, D]`.
const INNER_GRID: usize = 256;
/// Allowed excess of the grid maximum over the golden-section maximum.
const INNER_AGREEMENT: f64 = 1e-6;

/// The tilt machinery at one `(delta, D, u)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentParams {
    pub distortion: f64,
    pub delta: f64,
    pub overlap: f64,
    pub coeff_a: f64,
    pub coeff_b: f64,
    pub coeff_c: f64,
    /// Positive root of `A x^2 + B x + C`; `None` when the quadratic
    /// degenerates (`delta` is 0 or 1).
    pub rho_star: Option<f64>,
    /// `min(0, ln rho_star)`; 0 when `delta = 0`.
    pub lambda_star: f64,
}

/// Coefficients, root and capped log-root for `(delta, D, u)`.
///
/// `delta` may range over `[0, 1]`: odd check degrees produce induced
/// weights above 1/2 for information words heavier than 1/2.
pub fn exponent_params(delta: f64, distortion: f64, overlap: f64) -> Result<ExponentParams> {
    check_closed("delta", delta, 0.0, 1.0, "[0, 1]")?;
    if !(distortion > 0.0 && distortion <= 0.5) {
        return Err(Error::domain("D", distortion, "(0, 1/2]"));
    }
    check_closed("u", overlap, 0.0, distortion, "[0, D]")?;
    tilt(delta, distortion, overlap)
}

fn tilt(delta: f64, d: f64, u: f64) -> Result<ExponentParams> {
    let q = 1.0 - delta;
    let coeff_a = delta * q * (1.0 - d);
    let coeff_b = u * q * q + (1.0 - u) * delta * delta - d * (delta * delta + q * q);
    let coeff_c = -d * delta * q;
    let mut params = ExponentParams {
        distortion: d,
        delta,
        overlap: u,
        coeff_a,
        coeff_b,
        coeff_c,
        rho_star: None,
        lambda_star: 0.0,
    };
    if delta == 0.0 {
        return Ok(params);
    }
    if delta == 1.0 {
        // Quadratic collapses to B x = 0 with B = 1 - u - D >= 0.
        params.lambda_star = if coeff_b > 0.0 { f64::NEG_INFINITY } else { 0.0 };
        return Ok(params);
    }

    let disc = coeff_b * coeff_b - 4.0 * coeff_a * coeff_c;
    let scale = coeff_b * coeff_b + (4.0 * coeff_a * coeff_c).abs();
    if disc < -1e-12 * scale {
        return Err(Error::Numeric {
            context: "tilt quadratic",
            detail: format!("negative discriminant {disc:e} at delta={delta}, D={d}, u={u}"),
        });
    }
    let sqrt_disc = disc.max(0.0).sqrt();
    // Pick the cancellation-free form of the positive root.
    let rho = if coeff_b > 0.0 {
        -2.0 * coeff_c / (coeff_b + sqrt_disc)
    } else {
        (sqrt_disc - coeff_b) / (2.0 * coeff_a)
    };
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::Numeric {
            context: "tilt quadratic",
            detail: format!("root {rho:e} is not positive at delta={delta}, D={d}, u={u}"),
        });
    }
    params.rho_star = Some(rho);
    params.lambda_star = rho.ln().min(0.0);
    Ok(params)
}

/// Optimal tilt `(lambda*, rho*)`. For `delta = 0` the tilt is 0 and
/// `rho*` is reported as `+inf`.
pub fn lambda_star(delta: f64, distortion: f64, overlap: f64) -> Result<(f64, f64)> {
    let p = exponent_params(delta, distortion, overlap)?;
    let rho = p.rho_star.unwrap_or(if delta == 0.0 { f64::INFINITY } else { 0.0 });
    Ok((p.lambda_star, rho))
}

/// `G(u; lambda)` in nats.
pub fn exponent_g(overlap: f64, lambda: f64, distortion: f64, delta: f64) -> Result<f64> {
    check_closed("D", distortion, 0.0, 0.5, "[0, 1/2]")?;
    check_closed("u", overlap, 0.0, distortion, "[0, D]")?;
    check_closed("delta", delta, 0.0, 1.0, "[0, 1]")?;
    if !(lambda <= 0.0 && lambda.is_finite()) {
        return Err(Error::domain("lambda", lambda, "(-inf, 0]"));
    }
    Ok(g_nats(overlap, lambda, distortion, delta))
}

pub(crate) fn g_nats(u: f64, lambda: f64, d: f64, delta: f64) -> f64 {
    let em1 = lambda.exp_m1();
    // ln[(1-delta) e^lambda + delta] and ln[(1-delta) + delta e^lambda].
    let log_my = ((1.0 - delta) * em1).ln_1p();
    let log_mw = (delta * em1).ln_1p();
    h_nats(u) - h_nats(d) + u * log_my + (1.0 - u) * log_mw - lambda * d
}

fn g_at_optimal_tilt(u: f64, d: f64, delta: f64) -> Result<f64> {
    let lambda = tilt(delta, d, u)?.lambda_star;
    Ok(g_nats(u, lambda, d, delta))
}

/// `F[D, delta]` with its inner maximizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FValue {
    /// Exponent in bits, always `<= 0`.
    pub bits: f64,
    /// Maximizing overlap `u*` in `[0, D]`.
    pub u_star: f64,
    pub evaluations: usize,
}

/// `F[D, delta]` in bits.
pub fn big_f(distortion: f64, delta: f64) -> Result<f64> {
    big_f_detail(distortion, delta).map(|v| v.bits)
}

/// `F[D, delta]` together with `u*` and the evaluation count.
pub fn big_f_detail(distortion: f64, delta: f64) -> Result<FValue> {
    check_closed("D", distortion, 0.0, 0.5, "[0, 1/2]")?;
    check_closed("delta", delta, 0.0, 1.0, "[0, 1]")?;
    let d = distortion;

    if d == 0.0 {
        // The only admissible overlap is u = 0 and the event is "all
        // codeword bits zero": exponent ln(1 - delta).
        return Ok(FValue {
            bits: (1.0 - delta).log2(),
            u_star: 0.0,
            evaluations: 0,
        });
    }
    if delta == 0.0 {
        return Ok(FValue {
            bits: 0.0,
            u_star: d,
            evaluations: 0,
        });
    }
    if delta == 1.0 {
        // G = h(u) - h(D) + lambda (1 - u - D): unbounded below unless
        // u = D = 1/2.
        let bits = if d == 0.5 { 0.0 } else { f64::NEG_INFINITY };
        return Ok(FValue {
            bits,
            u_star: d,
            evaluations: 0,
        });
    }

    let g = |u: f64| g_at_optimal_tilt(u, d, delta);
    let golden = super::optimize::golden_section_max(g, 0.0, d, INNER_TOL)?;
    let mut best = (golden.x, golden.value);
    let mut evaluations = golden.evaluations;
    for u in [0.0, d] {
        let v = g(u)?;
        evaluations += 1;
        if v > best.1 {
            best = (u, v);
        }
    }

    let mut grid_best = (0.0, f64::NEG_INFINITY);
    for i in 0..INNER_GRID {
        let u = if i + 1 == INNER_GRID {
            d
        } else {
            d * i as f64 / (INNER_GRID - 1) as f64
        };
        let v = g(u)?;
        if v > grid_best.1 {
            grid_best = (u, v);
        }
    }
    evaluations += INNER_GRID;
    if grid_best.1 > best.1 + INNER_AGREEMENT {
        return Err(Error::NonConvergence {
            context: "inner maximization over u",
            detail: format!(
                "grid max {:.12} at u={} beats golden max {:.12} at u={} (D={d}, delta={delta})",
                grid_best.1, grid_best.0, best.1, best.0
            ),
        });
    }
    if grid_best.1 > best.1 {
        best = grid_best;
    }

    Ok(FValue {
        bits: (best.1 / LN_2).min(0.0),
        u_star: best.0,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::entropy::h_bits;

    fn stationarity_residual(delta: f64, d: f64, u: f64, lambda: f64) -> f64 {
        let x = lambda.exp();
        let q = 1.0 - delta;
        u * q * x / (q * x + delta) + (1.0 - u) * delta * x / (q + delta * x) - d
    }

    #[test]
    fn zero_delta_has_zero_tilt() {
        let (lambda, rho) = lambda_star(0.0, 0.11, 0.05).unwrap();
        assert_eq!(lambda, 0.0);
        assert!(rho.is_infinite());
    }

    #[test]
    fn capped_tilt_when_root_exceeds_one() {
        // Untilted mean u(1-delta) + (1-u)delta = 0.06 < D, so rho* >= 1.
        let p = exponent_params(0.05, 0.11, 0.01).unwrap();
        assert!(p.rho_star.unwrap() >= 1.0);
        assert_eq!(p.lambda_star, 0.0);
    }

    #[test]
    fn negative_tilt_solves_stationarity() {
        let p = exponent_params(0.3, 0.11, 0.05).unwrap();
        assert!(p.lambda_star < 0.0);
        assert!(stationarity_residual(0.3, 0.11, 0.05, p.lambda_star).abs() < 1e-12);
        // Independent check: bisection on the tilted mean.
        let root = crate::bounds::optimize::bisect(
            |l| Ok(stationarity_residual(0.3, 0.11, 0.05, l)),
            -50.0,
            0.0,
            1e-15,
            "test",
        )
        .unwrap();
        assert!((root - p.lambda_star).abs() < 1e-10);
    }

    #[test]
    fn coefficient_signs() {
        for &delta in &[0.01, 0.2, 0.5, 0.8] {
            for &d in &[0.01, 0.2, 0.5] {
                let p = exponent_params(delta, d, d / 3.0).unwrap();
                assert!(p.coeff_a >= 0.0 && p.coeff_c <= 0.0);
                assert!(p.rho_star.unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn g_examples() {
        assert!(exponent_g(0.11, 0.0, 0.11, 0.3).unwrap().abs() < 1e-15);
        let g = exponent_g(0.05, 0.0, 0.11, 0.5).unwrap();
        assert!((g - (h_nats(0.05) - h_nats(0.11))).abs() < 1e-15);
        assert!(exponent_g(0.2, 0.0, 0.11, 0.3).is_err());
        assert!(exponent_g(0.05, 0.5, 0.11, 0.3).is_err());
    }

    #[test]
    fn f_special_cases() {
        assert_eq!(big_f(0.11, 0.0).unwrap(), 0.0);
        assert_eq!(big_f(0.0, 0.3).unwrap(), 0.7f64.log2());
        assert!(big_f(0.6, 0.3).is_err());
        assert_eq!(big_f(0.11, 1.0).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn f_at_half_is_binomial_tail_exponent() {
        // P[Bin(n, 1/2) <= Dn] has exponent h(D) - 1 bits.
        let f = big_f(0.11, 0.5).unwrap();
        assert!((f - (h_bits(0.11) - 1.0)).abs() < 1e-12);
        assert!((f + 0.50008).abs() < 1e-5);
    }
}
