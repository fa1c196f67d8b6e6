//! One-dimensional search routines used by the bound computations.

use rayon::prelude::*;

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Location and value of a maximum found by a search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
    /// Final bracket the search ended in.
    pub bracket: (f64, f64),
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`,
/// stopping once the bracket is narrower than `tol`. Endpoints are not
/// evaluated.
pub fn golden_section_max<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<Maximum>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    let mut evaluations = 2;

    while b - a > tol {
        if evaluations > 500 {
            return Err(Error::NonConvergence {
                context: "golden-section search",
                detail: format!("bracket [{a:e}, {b:e}] after {evaluations} evaluations"),
            });
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
        }
        evaluations += 1;
    }

    let (x, value) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    Ok(Maximum {
        x,
        value,
        evaluations,
        bracket: (a, b),
    })
}

/// Evaluates `f` on `points` equispaced nodes of `[a, b]` (endpoints
/// included) and returns the best node. Ties keep the smallest `x`.
pub fn grid_max<F>(f: &F, a: f64, b: f64, points: usize) -> Result<(usize, Vec<f64>, Vec<f64>)>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    assert!(points >= 2);
    let step = (b - a) / (points - 1) as f64;
    let xs: Vec<f64> = (0..points)
        .map(|i| if i + 1 == points { b } else { a + step * i as f64 })
        .collect();
    let values = xs.par_iter().map(|&x| f(x)).collect::<Result<Vec<f64>>>()?;
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    Ok((best, xs, values))
}

/// Coarse grid followed by golden-section refinement in the bracket around
/// the best node. Suitable for objectives that may be multimodal on
/// `[a, b]` but are unimodal at grid resolution.
pub fn grid_then_golden<F>(f: F, a: f64, b: f64, points: usize, tol: f64) -> Result<Maximum>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let (best, xs, values) = grid_max(&f, a, b, points)?;
    let lo = xs[best.saturating_sub(1)];
    let hi = xs[(best + 1).min(points - 1)];
    let refined = golden_section_max(&f, lo, hi, tol)?;
    let evaluations = points + refined.evaluations;
    if refined.value > values[best] {
        Ok(Maximum {
            evaluations,
            bracket: (lo, hi),
            ..refined
        })
    } else {
        Ok(Maximum {
            x: xs[best],
            value: values[best],
            evaluations,
            bracket: (lo, hi),
        })
    }
}

/// Bisection for a sign change of `f` on `[lo, hi]`.
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, tol: f64, context: &'static str) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::RootNotBracketed { context, lo, hi });
    }
    let lo_negative = f_lo < 0.0;
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence {
        context,
        detail: format!("bisection stalled in [{lo:e}, {hi:e}]"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_peak() {
        let m = golden_section_max(|x| Ok(-(x - 0.3) * (x - 0.3)), 0.0, 1.0, 1e-10).unwrap();
        assert!((m.x - 0.3).abs() < 1e-9);
        assert!(m.bracket.1 - m.bracket.0 <= 1e-10);
    }

    #[test]
    fn grid_then_golden_handles_two_humps() {
        let f = |x: f64| Ok((-(x - 0.2).powi(2) * 400.0).exp() + 1.5 * (-(x - 0.8).powi(2) * 400.0).exp());
        let m = grid_then_golden(f, 0.0, 1.0, 200, 1e-10).unwrap();
        assert!((m.x - 0.8).abs() < 1e-6);
        assert!((m.value - 1.5).abs() < 1e-9);
    }

    #[test]
    fn boundary_maximum_is_kept() {
        let m = grid_then_golden(|x| Ok(-x), 0.0, 1.0, 50, 1e-10).unwrap();
        assert_eq!(m.x, 0.0);
        assert_eq!(m.value, 0.0);
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| Ok(x * x - 2.0), 0.0, 2.0, 1e-14, "test").unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        assert!(matches!(
            bisect(|x| Ok(x * x + 1.0), 0.0, 2.0, 1e-14, "test"),
            Err(Error::RootNotBracketed { .. })
        ));
    }
}
