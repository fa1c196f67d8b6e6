//! Asymptotic weight enumerator of the regular `(dv, dc)` LDPC ensemble.
//!
//! Socket counting gives, for weight fraction `w`,
//!
//! ```text
//! A(w) = inf_{x > 0} [ (dv/dc) log2 q(x) - dv w log2 x ] - (dv - 1) h(w),
//! q(x) = ((1 + x)^dc + (1 - x)^dc) / 2,
//! ```
//!
//! where `q` generates the even-weight local patterns of one check. The
//! infimum sits at the root of `x q'(x) / q(x) = w dc`.

use super::entropy::h_bits;
use super::optimize::bisect;
use crate::error::{check_closed, Error, Result};

const X_LO: f64 = 1e-12;
const X_HI: f64 = 1e6;

/// `A(w)` in bits per variable node.
pub fn ldpc_enumerator(w: f64, dv: u32, dc: u32) -> Result<f64> {
    check_closed("w", w, 0.0, 1.0, "[0, 1]")?;
    if dv < 2 || dc <= dv {
        return Err(Error::InvalidParameter(format!(
            "enumerator needs 2 <= dv < dc, got ({dv}, {dc})"
        )));
    }
    if w == 0.0 {
        return Ok(0.0);
    }
    if dc.is_multiple_of(2) {
        // Even checks admit the all-ones word; x -> 1/x maps w to 1 - w.
        if w > 0.5 {
            return ldpc_enumerator(1.0 - w, dv, dc);
        }
    } else {
        // Odd checks hold at most dc - 1 ones.
        let w_max = f64::from(dc - 1) / f64::from(dc);
        if w > w_max {
            return Ok(f64::NEG_INFINITY);
        }
        if w == w_max {
            let (dv, dcf) = (f64::from(dv), f64::from(dc));
            return Ok(dv / dcf * dcf.log2() - (dv - 1.0) * h_bits(w));
        }
    }

    let t = bisect(
        |t| Ok(socket_mean(t.exp(), dc) - w),
        X_LO.ln(),
        X_HI.ln(),
        1e-13,
        "LDPC enumerator saddle point",
    )?;
    let x = t.exp();
    let (dvf, dcf) = (f64::from(dv), f64::from(dc));
    Ok(dvf / dcf * log2_q(x, dc) - dvf * w * t / std::f64::consts::LN_2 - (dvf - 1.0) * h_bits(w))
}

/// `x q'(x) / (dc q(x))`: mean fraction of ones per check socket under
/// the tilt `x`. Increasing in `x`, equal to 1/2 at `x = 1`.
fn socket_mean(x: f64, dc: u32) -> f64 {
    let r = (1.0 - x) / (1.0 + x);
    x / (1.0 + x) * (1.0 - r.powi(dc as i32 - 1)) / (1.0 + r.powi(dc as i32))
}

fn log2_q(x: f64, dc: u32) -> f64 {
    let r = (1.0 - x) / (1.0 + x);
    f64::from(dc) * x.ln_1p() / std::f64::consts::LN_2 + ((1.0 + r.powi(dc as i32)) / 2.0).log2()
}
