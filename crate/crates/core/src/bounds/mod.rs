//! Numerical evaluation of the LDGM and compound LDGM/LDPC rate bounds.
//!
//! Unit convention: all moment-generating-function and tilt algebra is
//! done in nats; the large-deviation exponent `F` is converted to bits at
//! its boundary, where it is combined with binary entropies. Everything
//! returned by this module is in bits unless the name says otherwise.

mod compound;
mod curve;
mod enumerator;
mod entropy;
mod exponent;
mod ldgm;
pub mod optimize;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use compound::{rate_upper_bound_compound, v_func, v_func_with};
pub use curve::{distortion_curve, shannon_curve};
pub use enumerator::ldpc_enumerator;
pub use entropy::{
    binary_entropy, entropy_deficit, induced_weight, inverse_binary_entropy, shannon_rate,
};
pub use exponent::{big_f, big_f_detail, exponent_g, exponent_params, lambda_star, ExponentParams, FValue};
pub use ldgm::{
    exact_xorsat_threshold, rate_upper_bound, u_func, xorsat_threshold, XorsatThreshold,
    EXACT_XORSAT_THRESHOLDS,
};

/// Degrees of a regular LDPC precode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LdpcDegrees {
    /// Variable-node degree `d_v`.
    pub dv: u32,
    /// Check-node degree `d_c`.
    pub dc: u32,
}

impl LdpcDegrees {
    pub fn new(dv: u32, dc: u32) -> Result<Self> {
        if dv < 2 || dc < 2 {
            return Err(Error::InvalidParameter(format!(
                "LDPC degrees must be at least 2, got ({dv}, {dc})"
            )));
        }
        if dv >= dc {
            return Err(Error::InvalidParameter(format!(
                "LDPC degrees need dv < dc for positive rate, got ({dv}, {dc})"
            )));
        }
        Ok(LdpcDegrees { dv, dc })
    }

    /// Design rate `1 - dv/dc`.
    pub fn rate(&self) -> f64 {
        1.0 - f64::from(self.dv) / f64::from(self.dc)
    }
}

/// Ensemble degrees: LDGM check degree `c` and an optional LDPC precode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeParams {
    pub c: u32,
    pub ldpc: Option<LdpcDegrees>,
}

impl DegreeParams {
    /// Plain LDGM ensemble with check degree `c`.
    pub fn ldgm(c: u32) -> Result<Self> {
        if c < 1 {
            return Err(Error::InvalidParameter("check degree c must be >= 1".into()));
        }
        Ok(DegreeParams { c, ldpc: None })
    }

    /// Compound LDGM/LDPC ensemble.
    pub fn compound(c: u32, dv: u32, dc: u32) -> Result<Self> {
        let mut params = Self::ldgm(c)?;
        params.ldpc = Some(LdpcDegrees::new(dv, dc)?);
        Ok(params)
    }

    /// Precode rate `R(H)`; 1 when there is no precode.
    pub fn rate_h(&self) -> f64 {
        self.ldpc.map_or(1.0, |l| l.rate())
    }
}

/// A maximized rate bound together with where the maximum was found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    /// Bound on the effective rate, bits per source bit.
    pub value: f64,
    /// Maximizing codeword-weight fraction `w*`.
    pub argmax_w: f64,
    /// Inner maximizer `u*` of the exponent at `w*`.
    pub argmax_u: f64,
    /// Shannon rate `1 - h(D)`.
    pub shannon: f64,
    /// `value - shannon`.
    pub gap: f64,
    /// Number of objective evaluations spent by the outer search.
    pub evaluations: usize,
    /// Final refinement bracket of the outer search.
    pub bracket: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveVariant {
    Shannon,
    Ldgm,
    Compound,
}

impl CurveVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            CurveVariant::Shannon => "shannon",
            CurveVariant::Ldgm => "ldgm",
            CurveVariant::Compound => "compound",
        }
    }
}

impl std::fmt::Display for CurveVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One (distortion, rate) point of a plotted curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub distortion: f64,
    pub rate: f64,
    /// LDGM check degree; 0 for the Shannon curve.
    pub c: u32,
    pub variant: CurveVariant,
}
