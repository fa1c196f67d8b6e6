use super::entropy::{entropy_deficit, induced_weight_unchecked};
use super::enumerator::ldpc_enumerator;
use super::exponent::big_f;
use super::ldgm::{bound_result, half_weight_limit, maximize_over_weight, rate_upper_bound, u_func};
use super::{BoundResult, DegreeParams};
use crate::error::{check_closed, Error, Result};

/// `V(w; D, c) = (1 - h(D) + F[D, delta(w; c)]) / (1 - A(w) / R(H))` for
/// the compound ensemble described by `params`.
///
/// Without a precode this is exactly [`u_func`]. The limit at `w -> 0` is
/// `1 - h(D)`, and the pole at `w = 1/2` (where `A = R(H)`) is resolved as
/// for `U`.
pub fn v_func(w: f64, distortion: f64, params: &DegreeParams) -> Result<f64> {
    match params.ldpc {
        None => u_func(w, distortion, params.c),
        Some(ldpc) => v_func_with(
            w,
            distortion,
            params.c,
            |w| ldpc_enumerator(w, ldpc.dv, ldpc.dc),
            ldpc.rate(),
        ),
    }
}

/// `V` with an arbitrary weight enumerator and precode rate.
pub fn v_func_with<A>(w: f64, distortion: f64, c: u32, enumerator: A, rate_h: f64) -> Result<f64>
where
    A: Fn(f64) -> Result<f64>,
{
    check_closed("w", w, 0.0, 1.0, "[0, 1]")?;
    check_closed("D", distortion, 0.0, 0.5, "[0, 1/2]")?;
    if !(rate_h > 0.0 && rate_h <= 1.0) {
        return Err(Error::domain("R(H)", rate_h, "(0, 1]"));
    }
    if c < 1 {
        return Err(Error::InvalidParameter("check degree c must be >= 1".into()));
    }
    if w == 0.0 {
        return Ok(entropy_deficit(distortion));
    }
    let eval = |w: f64| -> Result<f64> {
        let delta = induced_weight_unchecked(w, c);
        let numerator = entropy_deficit(distortion) + big_f(distortion, delta)?;
        let denominator = 1.0 - enumerator(w)? / rate_h;
        if denominator <= 0.0 {
            return Err(Error::Numeric {
                context: "compound bound",
                detail: format!("enumerator reaches the precode rate at w = {w}"),
            });
        }
        Ok(numerator / denominator)
    };
    if w == 0.5 {
        return half_weight_limit(c, eval);
    }
    eval(w)
}

/// Maximum of `V(w; D, c)` over `w`: the compound-ensemble rate bound.
///
/// The search covers `[0, 1/2]` when both `U` and `A` are symmetric about
/// 1/2 (even `c`, even `dc`) and `[0, 1]` otherwise.
pub fn rate_upper_bound_compound(distortion: f64, params: &DegreeParams) -> Result<BoundResult> {
    let Some(ldpc) = params.ldpc else {
        return rate_upper_bound(distortion, params.c);
    };
    check_closed("D", distortion, 0.0, 0.5, "[0, 1/2]")?;
    if params.c < 2 {
        return Err(Error::InvalidParameter(format!(
            "rate bound needs check degree c >= 2, got {}",
            params.c
        )));
    }
    let hi = if params.c.is_multiple_of(2) && ldpc.dc % 2 == 0 {
        0.5
    } else {
        1.0
    };
    let m = maximize_over_weight(|w| v_func(w, distortion, params), hi)?;
    bound_result(m, distortion, params.c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::entropy::h_bits;

    #[test]
    fn reduces_to_u_with_full_rate_and_entropy_enumerator() {
        for &c in &[2, 3, 4, 6] {
            for &d in &[0.0, 0.05, 0.11, 0.3] {
                for i in 1..40 {
                    let w = f64::from(i) / 41.0;
                    let v = v_func_with(w, d, c, |w| Ok(h_bits(w)), 1.0).unwrap();
                    let u = u_func(w, d, c).unwrap();
                    assert!((v - u).abs() < 1e-10, "c={c} D={d} w={w}: {v} vs {u}");
                }
            }
        }
    }

    #[test]
    fn small_weight_limit_is_shannon() {
        let p = DegreeParams::compound(4, 4, 8).unwrap();
        let shannon = 1.0 - h_bits(0.11);
        assert_eq!(v_func(0.0, 0.11, &p).unwrap(), entropy_deficit(0.11));
        let near = v_func(1e-9, 0.11, &p).unwrap();
        assert!((near - shannon).abs() < 1e-3);
        assert!(near <= shannon);
    }

    #[test]
    fn precode_removes_overshoot() {
        let p = DegreeParams::compound(4, 4, 8).unwrap();
        let compound = rate_upper_bound_compound(0.11, &p).unwrap();
        let plain = rate_upper_bound_compound(0.11, &DegreeParams::ldgm(4).unwrap()).unwrap();
        assert!(plain.value > 0.5);
        // The maximum is the w -> 0 endpoint, i.e. the Shannon rate.
        assert!(compound.gap.abs() < 1e-12, "gap {}", compound.gap);
        assert_eq!(compound.argmax_w, 0.0);
        for i in 1..50 {
            let w = f64::from(i) / 100.0;
            assert!(v_func(w, 0.11, &p).unwrap() < 0.5, "w = {w}");
        }
    }

    #[test]
    fn full_rate_compound_equals_plain() {
        let plain = rate_upper_bound(0.11, 3).unwrap();
        let compound = rate_upper_bound_compound(0.11, &DegreeParams::ldgm(3).unwrap()).unwrap();
        assert!((plain.value - compound.value).abs() < 1e-10);
    }
}
