use std::f64::consts::LN_2;

use crate::error::{check_closed, Error, Result};

/// Binary entropy `h(t)` in bits, with `0 log 0 = 0`.
pub fn binary_entropy(t: f64) -> Result<f64> {
    check_closed("t", t, 0.0, 1.0, "[0, 1]")?;
    Ok(h_bits(t))
}

pub(crate) fn h_bits(t: f64) -> f64 {
    h_nats(t) / LN_2
}

pub(crate) fn h_nats(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        0.0
    } else {
        -t * t.ln() - (1.0 - t) * (-t).ln_1p()
    }
}

/// `1 - h(t)` in bits, accurate near `t = 1/2` where it vanishes
/// quadratically.
pub fn entropy_deficit(t: f64) -> f64 {
    // With x = 1 - 2t: 1 - h(t) = [(1+x) ln(1+x) + (1-x) ln(1-x)] / (2 ln 2).
    let x = 1.0 - 2.0 * t;
    let term = |s: f64| if s <= -1.0 { 0.0 } else { (1.0 + s) * s.ln_1p() };
    (term(x) + term(-x)) / (2.0 * LN_2)
}

/// Shannon rate-distortion function `R(D) = 1 - h(D)` of the
/// Bernoulli(1/2) source.
pub fn shannon_rate(distortion: f64) -> Result<f64> {
    check_closed("D", distortion, 0.0, 0.5, "[0, 1/2]")?;
    Ok(entropy_deficit(distortion))
}

/// Inverse of `h` on `[0, 1/2]`.
pub fn inverse_binary_entropy(bits: f64) -> Result<f64> {
    check_closed("h", bits, 0.0, 1.0, "[0, 1]")?;
    if bits == 0.0 {
        return Ok(0.0);
    }
    if bits == 1.0 {
        return Ok(0.5);
    }
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h_bits(mid) < bits {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Probability that a codeword bit is one when the information word has
/// weight fraction `w` and every check XORs `c` uniformly drawn bits:
/// `(1 - (1 - 2w)^c) / 2`.
pub fn induced_weight(w: f64, c: u32) -> Result<f64> {
    check_closed("w", w, 0.0, 1.0, "[0, 1]")?;
    if c < 1 {
        return Err(Error::InvalidParameter("check degree c must be >= 1".into()));
    }
    Ok(induced_weight_unchecked(w, c))
}

pub(crate) fn induced_weight_unchecked(w: f64, c: u32) -> f64 {
    0.5 * (1.0 - (1.0 - 2.0 * w).powi(c as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_examples() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!((binary_entropy(0.11).unwrap() - 0.49992).abs() < 1e-5);
    }

    #[test]
    fn entropy_rejects_out_of_domain() {
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.5).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn deficit_matches_direct_form() {
        for i in 0..=100 {
            let t = f64::from(i) / 100.0;
            let direct = 1.0 - h_bits(t);
            assert!((entropy_deficit(t) - direct).abs() < 1e-14, "t = {t}");
        }
        // Near 1/2 the deficit is ~ 2 s^2 / ln 2 for t = 1/2 - s.
        let s = 1e-6;
        let expected = 2.0 * s * s / LN_2;
        assert!((entropy_deficit(0.5 - s) / expected - 1.0).abs() < 1e-6);
    }

    #[test]
    fn inverse_entropy_round_trips() {
        for &d in &[0.01, 0.11, 0.25, 0.4] {
            let back = inverse_binary_entropy(h_bits(d)).unwrap();
            assert!((back - d).abs() < 1e-12);
        }
        // h^{-1}(1/2) is just above 0.11.
        let d_half = inverse_binary_entropy(0.5).unwrap();
        assert!((d_half - 0.110_028).abs() < 1e-6);
    }

    #[test]
    fn induced_weight_examples() {
        assert_eq!(induced_weight(0.0, 4).unwrap(), 0.0);
        assert_eq!(induced_weight(0.5, 4).unwrap(), 0.5);
        assert_eq!(induced_weight(0.25, 4).unwrap(), 0.46875);
        assert_eq!(induced_weight(0.3, 1).unwrap(), 0.3);
        assert!(induced_weight(0.3, 0).is_err());
        assert!(induced_weight(1.2, 3).is_err());
    }
}
