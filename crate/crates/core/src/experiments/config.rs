//! Experiment configuration: a flat `key = value` text format.
//!
//! ```text
//! # distortion run on the (4, 8)-precoded ensemble
//! kind = distortion
//! n = 24
//! c = 4
//! rates = 0.5
//! dv = 4
//! dc = 8
//! trials = 500
//! seed = 7
//! ```
//!
//! List-valued keys take comma-separated values or a `min:max:count`
//! range. Degree lists also accept an inclusive integer range `lo:hi`.

use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bounds::LdpcDegrees;
use crate::error::{Error, Result};
use crate::gf2::SEARCH_BUDGET;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Distortion,
    Xorsat,
    BoundSweep,
    OracleCheck,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::Distortion => "distortion",
            ExperimentKind::Xorsat => "xorsat",
            ExperimentKind::BoundSweep => "bound-sweep",
            ExperimentKind::OracleCheck => "oracle-check",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "distortion" => Ok(ExperimentKind::Distortion),
            "xorsat" => Ok(ExperimentKind::Xorsat),
            "bound-sweep" => Ok(ExperimentKind::BoundSweep),
            "oracle-check" => Ok(ExperimentKind::OracleCheck),
            other => Err(Error::Config(format!(
                "unknown kind `{other}` (expected distortion, xorsat, bound-sweep or oracle-check)"
            ))),
        }
    }
}

/// Description of one Monte Carlo campaign or bound sweep.
///
/// Which grids matter depends on `kind`:
///
/// | kind | grids |
/// |---|---|
/// | distortion | `n`, `degrees`, `rates`, optional `ldpc` |
/// | xorsat | `n`, `degrees`, `alpha` (= n/m) |
/// | bound-sweep | `degrees`, `distortion`, optional `ldpc`, `profile` |
/// | oracle-check | `trials` (Monte Carlo samples per check) |
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    /// Source lengths (checks per code).
    pub n: Vec<usize>,
    /// LDGM check degrees.
    pub degrees: Vec<u32>,
    pub ldpc: Option<LdpcDegrees>,
    /// Target rates `m / n`.
    pub rates: Vec<f64>,
    /// Clause densities `n / m`.
    pub alpha: Vec<f64>,
    /// Distortion grid of a bound sweep.
    pub distortion: Vec<f64>,
    /// Distortions at which a bound sweep also emits the full `U` / `V`
    /// profile over `w`.
    pub profile: Vec<f64>,
    /// Number of `w` points in each profile.
    pub profile_points: usize,
    pub trials: usize,
    pub seed: u64,
    /// Shift applied to the hypothesized `delta` in the induced
    /// distribution check; nonzero only for negative-control runs.
    pub delta_offset: f64,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    /// The standard configuration of each kind.
    pub fn default_for(kind: ExperimentKind, seed: u64) -> Self {
        let base = ExperimentConfig {
            kind,
            n: Vec::new(),
            degrees: Vec::new(),
            ldpc: None,
            rates: Vec::new(),
            alpha: Vec::new(),
            distortion: Vec::new(),
            profile: Vec::new(),
            profile_points: 101,
            trials: 1,
            seed,
            delta_offset: 0.0,
            output: None,
        };
        match kind {
            ExperimentKind::Distortion => ExperimentConfig {
                n: vec![24],
                degrees: vec![4],
                rates: vec![0.5],
                trials: 500,
                ..base
            },
            ExperimentKind::Xorsat => ExperimentConfig {
                n: vec![1000],
                degrees: vec![3],
                alpha: linspace(0.8, 1.0, 21),
                trials: 200,
                ..base
            },
            ExperimentKind::BoundSweep => ExperimentConfig {
                degrees: vec![3, 4, 6],
                distortion: linspace(0.0, 0.5, 51),
                ..base
            },
            ExperimentKind::OracleCheck => ExperimentConfig {
                trials: 10_000,
                ..base
            },
        }
    }

    /// Parses the key-value format. `kind` and `seed` are required; other
    /// keys default to [`ExperimentConfig::default_for`].
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                message: format!("expected `key = value`, found `{line}`"),
            })?;
            pairs.push((i + 1, key.trim().to_string(), value.trim().to_string()));
        }
        let lookup = |name: &str| pairs.iter().find(|(_, k, _)| k == name);
        let (_, _, kind) = lookup("kind").ok_or_else(|| Error::Config("missing key `kind`".into()))?;
        let (_, _, seed) = lookup("seed").ok_or_else(|| Error::Config("missing key `seed`".into()))?;
        let kind: ExperimentKind = kind.parse()?;
        let seed = seed
            .parse()
            .map_err(|_| Error::Config(format!("seed `{seed}` is not an unsigned integer")))?;

        let mut config = ExperimentConfig::default_for(kind, seed);
        let (mut dv, mut dc) = (None, None);
        let mut seen = Vec::new();
        for (line, key, value) in &pairs {
            if seen.contains(key) {
                return Err(Error::Parse {
                    line: *line,
                    message: format!("duplicate key `{key}`"),
                });
            }
            seen.push(key.clone());
            let at_line = |e: Error| Error::Parse {
                line: *line,
                message: e.to_string(),
            };
            match key.as_str() {
                "kind" | "seed" => {}
                "n" => config.n = parse_size_list(value).map_err(at_line)?,
                "c" => config.degrees = parse_degree_list(value).map_err(at_line)?,
                "dv" => dv = Some(parse_integer::<u32>(value, "dv").map_err(at_line)?),
                "dc" => dc = Some(parse_integer::<u32>(value, "dc").map_err(at_line)?),
                "rates" => config.rates = parse_float_list(value).map_err(at_line)?,
                "alpha" => config.alpha = parse_float_list(value).map_err(at_line)?,
                "distortion" => config.distortion = parse_float_list(value).map_err(at_line)?,
                "profile" => config.profile = parse_float_list(value).map_err(at_line)?,
                "profile_points" => {
                    config.profile_points = parse_integer(value, "profile_points").map_err(at_line)?
                }
                "trials" => config.trials = parse_integer(value, "trials").map_err(at_line)?,
                "delta_offset" => config.delta_offset = parse_float(value).map_err(at_line)?,
                "output" => config.output = Some(PathBuf::from(value)),
                other => {
                    return Err(Error::Parse {
                        line: *line,
                        message: format!("unknown key `{other}`"),
                    })
                }
            }
        }
        config.ldpc = match (dv, dc) {
            (None, None) => None,
            (Some(dv), Some(dc)) => Some(LdpcDegrees::new(dv, dc)?),
            _ => return Err(Error::Config("`dv` and `dc` must be given together".into())),
        };
        config.validate()?;
        Ok(config)
    }

    /// Checks every invariant and budget before any sampling happens.
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        let need = |name: &str, len: usize| -> Result<()> {
            if len == 0 {
                Err(Error::Config(format!("grid `{name}` must be nonempty")))
            } else {
                Ok(())
            }
        };
        check_sorted("n", &self.n)?;
        check_sorted("c", &self.degrees)?;
        for (name, grid) in [
            ("rates", &self.rates),
            ("alpha", &self.alpha),
            ("distortion", &self.distortion),
            ("profile", &self.profile),
        ] {
            check_sorted(name, grid)?;
        }
        if self.degrees.contains(&0) {
            return Err(Error::Config("check degrees must be >= 1".into()));
        }

        match self.kind {
            ExperimentKind::Distortion => {
                need("n", self.n.len())?;
                need("c", self.degrees.len())?;
                need("rates", self.rates.len())?;
                for &n in &self.n {
                    for &rate in &self.rates {
                        if !(rate > 0.0 && rate <= 1.0) {
                            return Err(Error::Config(format!("rate {rate} outside (0, 1]")));
                        }
                        let m = information_bits(n, rate);
                        if m == 0 {
                            return Err(Error::Config(format!("rate {rate} at n = {n} gives m = 0")));
                        }
                        if m > SEARCH_BUDGET {
                            return Err(Error::BudgetExceeded {
                                context: "distortion experiment",
                                requested: m,
                                limit: SEARCH_BUDGET,
                            });
                        }
                        if let Some(ldpc) = self.ldpc {
                            if !(ldpc.dv as usize * m).is_multiple_of(ldpc.dc as usize) {
                                return Err(Error::Config(format!(
                                    "dv * m = {} is not divisible by dc = {} (n = {n}, rate = {rate})",
                                    ldpc.dv as usize * m,
                                    ldpc.dc
                                )));
                            }
                        }
                    }
                }
            }
            ExperimentKind::Xorsat => {
                need("n", self.n.len())?;
                need("c", self.degrees.len())?;
                need("alpha", self.alpha.len())?;
                if let Some(&a) = self.alpha.iter().find(|&&a| a <= 0.0 || !a.is_finite()) {
                    return Err(Error::Config(format!("clause density {a} must be positive")));
                }
            }
            ExperimentKind::BoundSweep => {
                need("c", self.degrees.len())?;
                need("distortion", self.distortion.len())?;
                if self.degrees.contains(&1) {
                    return Err(Error::Config("bound sweeps need check degrees >= 2".into()));
                }
                for &d in self.distortion.iter().chain(&self.profile) {
                    if !(0.0..=0.5).contains(&d) {
                        return Err(Error::Config(format!("distortion {d} outside [0, 1/2]")));
                    }
                }
                if !self.profile.is_empty() && self.profile_points < 2 {
                    return Err(Error::Config("profile_points must be >= 2".into()));
                }
            }
            ExperimentKind::OracleCheck => {
                if self.trials < 2 {
                    return Err(Error::Config("oracle checks need trials >= 2".into()));
                }
            }
        }
        Ok(())
    }

    /// Every field except `output`, one `key=value` per line in a fixed
    /// order. Floats use the shortest exact representation.
    pub fn canonical_text(&self) -> String {
        let list = |xs: &[f64]| xs.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",");
        let ints = |xs: &[usize]| xs.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        let (dv, dc) = self.ldpc.map_or((0, 0), |l| (l.dv, l.dc));
        let mut s = String::new();
        let _ = writeln!(s, "kind={}", self.kind);
        let _ = writeln!(s, "n={}", ints(&self.n));
        let _ = writeln!(
            s,
            "c={}",
            self.degrees.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
        );
        let _ = writeln!(s, "dv={dv}\ndc={dc}");
        let _ = writeln!(s, "rates={}", list(&self.rates));
        let _ = writeln!(s, "alpha={}", list(&self.alpha));
        let _ = writeln!(s, "distortion={}", list(&self.distortion));
        let _ = writeln!(s, "profile={}", list(&self.profile));
        let _ = writeln!(s, "profile_points={}", self.profile_points);
        let _ = writeln!(s, "trials={}", self.trials);
        let _ = writeln!(s, "seed={}", self.seed);
        let _ = writeln!(s, "delta_offset={:?}", self.delta_offset);
        s
    }

    /// First 16 hex digits of the SHA-256 of [`Self::canonical_text`].
    pub fn hash(&self) -> String {
        short_hash(&self.canonical_text())
    }
}

/// First 16 hex digits of the SHA-256 of `text`.
pub fn short_hash(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// `m = round(R n)`.
pub fn information_bits(n: usize, rate: f64) -> usize {
    (rate * n as f64).round() as usize
}

/// `m = round(n / alpha)`, at least 1.
pub fn variables_for_density(n: usize, alpha: f64) -> usize {
    ((n as f64 / alpha).round() as usize).max(1)
}

fn check_sorted<T: PartialOrd + fmt::Display>(name: &str, xs: &[T]) -> Result<()> {
    // Negated so that NaN entries are rejected too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if let Some(w) = xs.windows(2).find(|w| !(w[0] < w[1])) {
        return Err(Error::Config(format!(
            "grid `{name}` must be strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| {
                if i == count - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

fn parse_float(s: &str) -> Result<f64> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("`{s}` is not a number")))?;
    if !x.is_finite() {
        return Err(Error::Config(format!("`{s}` is not finite")));
    }
    Ok(x)
}

fn parse_integer<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Config(format!("{what} `{s}` is not a non-negative integer")))
}

/// `a,b,c` or `min:max:count`.
pub fn parse_float_list(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.len() {
        1 => s.split(',').map(parse_float).collect(),
        3 => {
            let (lo, hi) = (parse_float(parts[0])?, parse_float(parts[1])?);
            let count: usize = parse_integer(parts[2], "range count")?;
            if count == 0 {
                return Err(Error::Config(format!("range `{s}` has zero points")));
            }
            if hi < lo || (count > 1 && hi == lo) {
                return Err(Error::Config(format!("range `{s}` needs min < max")));
            }
            Ok(linspace(lo, hi, count))
        }
        _ => Err(Error::Config(format!("`{s}` is neither a list nor min:max:count"))),
    }
}

/// `a,b,c` or an inclusive integer range `lo:hi`. Decimal values are
/// rejected.
pub fn parse_degree_list(s: &str) -> Result<Vec<u32>> {
    let degree = |p: &str| parse_integer::<u32>(p, "degree");
    match s.split_once(':') {
        None => s.split(',').map(degree).collect(),
        Some((lo, hi)) => {
            let (lo, hi) = (degree(lo)?, degree(hi)?);
            if hi < lo {
                return Err(Error::Config(format!("degree range `{s}` is empty")));
            }
            Ok((lo..=hi).collect())
        }
    }
}

pub fn parse_size_list(s: &str) -> Result<Vec<usize>> {
    s.split(',').map(|p| parse_integer(p, "size")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# compound distortion run
kind = distortion
n = 24
c = 4
rates = 0.5
dv = 4
dc = 8   # precode
trials = 500
seed = 7
output = out.csv
";

    #[test]
    fn parses_sample() {
        let c = ExperimentConfig::parse(SAMPLE).unwrap();
        assert_eq!(c.kind, ExperimentKind::Distortion);
        assert_eq!(c.n, vec![24]);
        assert_eq!(c.ldpc, Some(LdpcDegrees { dv: 4, dc: 8 }));
        assert_eq!(c.trials, 500);
        assert_eq!(c.output, Some(PathBuf::from("out.csv")));
    }

    #[test]
    fn hash_ignores_output_but_not_seed() {
        let a = ExperimentConfig::parse(SAMPLE).unwrap();
        let b = ExperimentConfig::parse(&SAMPLE.replace("out.csv", "elsewhere.csv")).unwrap();
        let c = ExperimentConfig::parse(&SAMPLE.replace("seed = 7", "seed = 8")).unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 16);
    }

    #[test]
    fn rejects_invalid_configs() {
        assert!(ExperimentConfig::parse(&SAMPLE.replace("seed = 7\n", "")).is_err());
        assert!(ExperimentConfig::parse(&SAMPLE.replace("trials = 500", "trials = 0")).is_err());
        assert!(ExperimentConfig::parse(&SAMPLE.replace("n = 24", "n = 80")).is_err());
        assert!(ExperimentConfig::parse(&SAMPLE.replace("dc = 8", "dc = 7")).is_err());
        assert!(ExperimentConfig::parse(&SAMPLE.replace("rates = 0.5", "rates = 0.5,0.25")).is_err());
        assert!(ExperimentConfig::parse(&format!("{SAMPLE}bogus = 1\n")).is_err());
        assert!(ExperimentConfig::parse(&SAMPLE.replace("dv = 4\n", "")).is_err());
        assert!(ExperimentConfig::parse(&SAMPLE.replace("c = 4", "c = 4.5")).is_err());
    }

    #[test]
    fn grids_and_ranges() {
        let alpha = parse_float_list("0.8:1.0:21").unwrap();
        assert_eq!(alpha.len(), 21);
        assert_eq!(alpha[0], 0.8);
        assert_eq!(alpha[20], 1.0);
        assert!((alpha[10] - 0.9).abs() < 1e-15);
        assert_eq!(parse_float_list("0.1,0.2").unwrap(), vec![0.1, 0.2]);
        assert_eq!(parse_degree_list("3:6").unwrap(), vec![3, 4, 5, 6]);
        assert_eq!(parse_degree_list("3,4,6").unwrap(), vec![3, 4, 6]);
        assert!(parse_degree_list("3.5").is_err());
        assert!(parse_float_list("1:0:3").is_err());
        assert!(parse_float_list("0:1").is_err());
    }

    #[test]
    fn defaults_are_valid() {
        for kind in [
            ExperimentKind::Distortion,
            ExperimentKind::Xorsat,
            ExperimentKind::BoundSweep,
            ExperimentKind::OracleCheck,
        ] {
            ExperimentConfig::default_for(kind, 1).validate().unwrap();
            assert_eq!(kind.as_str().parse::<ExperimentKind>().unwrap(), kind);
        }
    }
}
