use super::entropy::{entropy_deficit, inverse_binary_entropy};
use super::ldgm::rate_upper_bound;
use super::optimize::bisect;
use super::{CurvePoint, CurveVariant};
use crate::error::{check_closed, Error, Result};

const MONOTONE_PROBES: usize = 11;
const INVERSION_TOL: f64 = 1e-7;

/// Distortion achievable at each target rate according to the LDGM bound,
/// found by inverting `D -> rate_upper_bound(D, c)`, followed by the
/// Shannon curve at the same rates.
pub fn distortion_curve(c: u32, rates: &[f64]) -> Result<Vec<CurvePoint>> {
    if c < 2 {
        return Err(Error::InvalidParameter(format!(
            "curve needs check degree c >= 2, got {c}"
        )));
    }
    for &r in rates {
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::domain("R", r, "(0, 1]"));
        }
    }

    let mut previous = f64::INFINITY;
    for i in 0..MONOTONE_PROBES {
        let d = 0.5 * i as f64 / (MONOTONE_PROBES - 1) as f64;
        let value = rate_upper_bound(d, c)?.value;
        if value > previous + 1e-9 {
            return Err(Error::Numeric {
                context: "distortion curve",
                detail: format!("bound increases in D near D = {d} for c = {c}"),
            });
        }
        previous = value;
    }

    let mut points = Vec::with_capacity(2 * rates.len());
    for &rate in rates {
        let distortion = bisect(
            |d| Ok(rate_upper_bound(d, c)?.value - rate),
            0.0,
            0.5,
            INVERSION_TOL,
            "distortion curve inversion",
        )?;
        points.push(CurvePoint {
            distortion,
            rate,
            c,
            variant: CurveVariant::Ldgm,
        });
    }
    for &rate in rates {
        points.push(CurvePoint {
            distortion: inverse_binary_entropy(1.0 - rate)?,
            rate,
            c: 0,
            variant: CurveVariant::Shannon,
        });
    }
    Ok(points)
}

/// Shannon curve `R = 1 - h(D)` at the given distortions.
pub fn shannon_curve(distortions: &[f64]) -> Result<Vec<CurvePoint>> {
    distortions
        .iter()
        .map(|&d| {
            check_closed("D", d, 0.0, 0.5, "[0, 1/2]")?;
            Ok(CurvePoint {
                distortion: d,
                rate: entropy_deficit(d),
                c: 0,
                variant: CurveVariant::Shannon,
            })
        })
        .collect()
}
