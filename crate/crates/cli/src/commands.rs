use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use ldgm_core::bounds::{
    distortion_curve, rate_upper_bound, rate_upper_bound_compound, xorsat_threshold, DegreeParams,
    LdpcDegrees,
};
use ldgm_core::experiments::{
    linspace, parse_degree_list, parse_float_list, parse_size_list, run, run_bound_sweep,
    run_oracle_checks, short_hash, Cell, ExperimentConfig, ExperimentKind, Table,
};

use crate::{Failure, Format};

/// Text a command produced, before it reaches the terminal.
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub check_failed: bool,
}

type Outcome = Result<Output, Failure>;

const RATE_DIGITS: usize = 6;
const THRESHOLD_DIGITS: usize = 5;

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// Normalized Hamming distortion D in [0, 1/2].
    #[arg(long, value_name = "D")]
    distortion: f64,
    /// LDGM check degree c (ones per generator column).
    #[arg(long, value_name = "C")]
    degree: u32,
    /// LDPC precode variable degree; needs --dc.
    #[arg(long, requires = "dc")]
    dv: Option<u32>,
    /// LDPC precode check degree; needs --dv.
    #[arg(long, requires = "dv")]
    dc: Option<u32>,
    /// Precode rate R(H) = 1 - dv/dc, checked against the degrees. Without
    /// a precode only 1 is accepted.
    #[arg(long, value_name = "R")]
    rate_h: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// LDGM check degrees: a list `3,4,6` or an inclusive range `3:10`.
    #[arg(long, default_value = "3,4,6")]
    degrees: String,
    /// Number of evenly spaced distortions D in [0, 1/2].
    #[arg(long, default_value_t = 51)]
    points: usize,
    /// LDPC precode variable degree; adds compound curves. Needs --dc.
    #[arg(long, requires = "dc")]
    dv: Option<u32>,
    /// LDPC precode check degree; needs --dv.
    #[arg(long, requires = "dv")]
    dc: Option<u32>,
    /// Distortions at which to also print the full profile over codeword
    /// weight fraction w.
    #[arg(long, value_name = "LIST")]
    profile: Option<String>,
    /// Number of w points in each profile.
    #[arg(long, default_value_t = 101)]
    profile_points: usize,
    /// Invert the LDGM bound instead: distortion reached at each rate in
    /// bits (list or min:max:count).
    #[arg(long, value_name = "LIST", conflicts_with_all = ["dv", "profile"])]
    rates: Option<String>,
    /// Write the table to this file; `-` means standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    /// Check degrees: a single degree, a list, or an inclusive range `3:10`.
    #[arg(long, default_value = "3,6")]
    degree: String,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Key-value config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed. Required unless the config file sets one.
    #[arg(long)]
    seed: Option<u64>,
    /// Source lengths n (list).
    #[arg(long)]
    n: Option<String>,
    /// LDGM check degrees (list or `lo:hi`).
    #[arg(long)]
    degree: Option<String>,
    /// Code rates m/n in bits (list or min:max:count); m = round(R n).
    #[arg(long)]
    rates: Option<String>,
    /// LDPC precode variable degree; needs --dc.
    #[arg(long, requires = "dc")]
    dv: Option<u32>,
    /// LDPC precode check degree; needs --dv.
    #[arg(long, requires = "dv")]
    dc: Option<u32>,
    /// Trials per point; each samples a fresh code and source.
    #[arg(long)]
    trials: Option<usize>,
    /// Write the table to this file; `-` means standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct XorsatArgs {
    /// Key-value config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed. Required unless the config file sets one.
    #[arg(long)]
    seed: Option<u64>,
    /// Numbers of equations n (list).
    #[arg(long)]
    n: Option<String>,
    /// Variables per equation c (list or `lo:hi`).
    #[arg(long)]
    degree: Option<String>,
    /// Clause densities alpha = n/m (list or min:max:count).
    #[arg(long)]
    alpha: Option<String>,
    /// Random systems per point.
    #[arg(long)]
    trials: Option<usize>,
    /// Write the table to this file; `-` means standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Key-value config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed. Required unless the config file sets one.
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo samples for the moment checks; the frequency test
    /// draws ten times as many.
    #[arg(long)]
    trials: Option<usize>,
    /// Shift of the hypothesized codeword-bit probability, for
    /// negative-control runs.
    #[arg(long, hide = true, allow_negative_numbers = true)]
    delta_offset: Option<f64>,
    /// Write the table to this file; `-` means standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn ldpc(dv: Option<u32>, dc: Option<u32>) -> Result<Option<LdpcDegrees>, Failure> {
    match (dv, dc) {
        (Some(dv), Some(dc)) => Ok(Some(LdpcDegrees::new(dv, dc)?)),
        _ => Ok(None),
    }
}

fn emit(table: &Table, format: Format, out: Option<&Path>) -> Outcome {
    let text = match format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(table)
                .map_err(|e| Failure::Runtime(format!("cannot serialize table: {e}")))?;
            s.push('\n');
            s
        }
    };
    match out.filter(|p| *p != Path::new("-")) {
        Some(path) => {
            fs::write(path, text)
                .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display())))?;
            Ok(Output::default())
        }
        None => Ok(Output {
            stdout: text,
            ..Output::default()
        }),
    }
}

pub fn bound(args: &BoundArgs, format: Format) -> Outcome {
    let ldpc = ldpc(args.dv, args.dc)?;
    let params = match ldpc {
        Some(l) => DegreeParams::compound(args.degree, l.dv, l.dc)?,
        None => DegreeParams::ldgm(args.degree)?,
    };
    if let Some(r) = args.rate_h {
        if (r - params.rate_h()).abs() > 1e-9 {
            return Err(Failure::Usage(format!(
                "--rate-h {r} does not match the precode rate {}",
                params.rate_h()
            )));
        }
    }
    if !(0.0..=0.5).contains(&args.distortion) {
        return Err(Failure::Usage(format!(
            "--distortion {} outside [0, 1/2]",
            args.distortion
        )));
    }
    let result = match ldpc {
        Some(_) => rate_upper_bound_compound(args.distortion, &params)?,
        None => rate_upper_bound(args.distortion, args.degree)?,
    };

    let (dv, dc) = ldpc.map_or((0, 0), |l| (l.dv, l.dc));
    let query = format!("bound D={:?} c={} dv={dv} dc={dc}", args.distortion, args.degree);
    let mut table = Table::new(
        "bound",
        short_hash(&query),
        None,
        &["variant", "c", "dv", "dc", "D", "R", "argmax_w", "shannon", "gap", "alpha_star"],
    );
    let alpha_star = if ldpc.is_none() && args.distortion == 0.0 {
        Cell::Float(1.0 / result.value, THRESHOLD_DIGITS)
    } else {
        Cell::Empty
    };
    table.push(vec![
        if ldpc.is_some() { "compound" } else { "ldgm" }.into(),
        args.degree.into(),
        dv.into(),
        dc.into(),
        args.distortion.into(),
        Cell::Float(result.value, RATE_DIGITS),
        result.argmax_w.into(),
        Cell::Float(result.shannon, RATE_DIGITS),
        Cell::Float(result.gap, RATE_DIGITS),
        alpha_star,
    ]);
    emit(&table, format, None)
}

pub fn curve(args: &CurveArgs, format: Format) -> Outcome {
    let degrees = parse_degree_list(&args.degrees)?;
    if let Some(rates) = &args.rates {
        let rates = parse_float_list(rates)?;
        let query = format!("curve degrees={degrees:?} rates={rates:?}");
        let mut table = Table::new("distortion-curve", short_hash(&query), None, &["variant", "c", "R", "D"]);
        for &c in &degrees {
            for p in distortion_curve(c, &rates)? {
                if c != degrees[0] && p.c == 0 {
                    continue;
                }
                table.push(vec![
                    p.variant.as_str().into(),
                    p.c.into(),
                    Cell::Float(p.rate, RATE_DIGITS),
                    p.distortion.into(),
                ]);
            }
        }
        return emit(&table, format, args.out.as_deref());
    }

    if args.points < 2 {
        return Err(Failure::Usage(format!("--points must be >= 2, got {}", args.points)));
    }
    let mut config = ExperimentConfig::default_for(ExperimentKind::BoundSweep, 0);
    config.degrees = degrees;
    config.distortion = linspace(0.0, 0.5, args.points);
    config.ldpc = ldpc(args.dv, args.dc)?;
    if let Some(profile) = &args.profile {
        config.profile = parse_float_list(profile)?;
    }
    config.profile_points = args.profile_points;
    config.validate()?;
    let mut table = run_bound_sweep(&config)?;
    table.seed = None;
    emit(&table, format, args.out.as_deref())
}

pub fn threshold(args: &ThresholdArgs, format: Format) -> Outcome {
    let degrees = parse_degree_list(&args.degree)?;
    if let Some(&c) = degrees.iter().find(|&&c| c < 2) {
        return Err(Failure::Usage(format!("threshold needs degrees >= 2, got {c}")));
    }
    let query = format!("threshold degrees={degrees:?}");
    let mut table = Table::new(
        "threshold",
        short_hash(&query),
        None,
        &["c", "alpha_star", "exact", "r_eff0", "argmax_w"],
    );
    for &c in &degrees {
        let t = xorsat_threshold(c)?;
        table.push(vec![
            c.into(),
            Cell::Float(t.alpha_star, THRESHOLD_DIGITS),
            t.exact.map_or(Cell::Empty, |x| Cell::Float(x, THRESHOLD_DIGITS)),
            Cell::Float(t.r_eff0, RATE_DIGITS),
            t.argmax_w.into(),
        ]);
    }
    emit(&table, format, None)
}

/// Config file contents (or defaults), after checking the kind and that a
/// seed is known.
fn base_config(kind: ExperimentKind, path: Option<&Path>, seed: Option<u64>) -> Result<ExperimentConfig, Failure> {
    let mut config = match path {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
            let config = ExperimentConfig::parse(&text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            if config.kind != kind {
                return Err(Failure::Usage(format!(
                    "{} describes a {} run, expected {kind}",
                    path.display(),
                    config.kind
                )));
            }
            config
        }
        None => {
            let seed = seed.ok_or_else(|| Failure::Usage("--seed is required".into()))?;
            ExperimentConfig::default_for(kind, seed)
        }
    };
    if let Some(seed) = seed {
        config.seed = seed;
    }
    Ok(config)
}

fn finish(config: &ExperimentConfig, out: Option<&PathBuf>, format: Format) -> Outcome {
    config.validate()?;
    let table = run(config)?;
    emit(&table, format, out.or(config.output.as_ref()).map(PathBuf::as_path))
}

pub fn simulate(args: &SimulateArgs, format: Format) -> Outcome {
    let mut config = base_config(ExperimentKind::Distortion, args.config.as_deref(), args.seed)?;
    if let Some(n) = &args.n {
        config.n = parse_size_list(n)?;
    }
    if let Some(d) = &args.degree {
        config.degrees = parse_degree_list(d)?;
    }
    if let Some(r) = &args.rates {
        config.rates = parse_float_list(r)?;
    }
    if args.dv.is_some() {
        config.ldpc = ldpc(args.dv, args.dc)?;
    }
    if let Some(t) = args.trials {
        config.trials = t;
    }
    finish(&config, args.out.as_ref(), format)
}

pub fn xorsat(args: &XorsatArgs, format: Format) -> Outcome {
    let mut config = base_config(ExperimentKind::Xorsat, args.config.as_deref(), args.seed)?;
    if let Some(n) = &args.n {
        config.n = parse_size_list(n)?;
    }
    if let Some(d) = &args.degree {
        config.degrees = parse_degree_list(d)?;
    }
    if let Some(a) = &args.alpha {
        config.alpha = parse_float_list(a)?;
    }
    if let Some(t) = args.trials {
        config.trials = t;
    }
    finish(&config, args.out.as_ref(), format)
}

pub fn check(args: &CheckArgs, format: Format) -> Outcome {
    let mut config = base_config(ExperimentKind::OracleCheck, args.config.as_deref(), args.seed)?;
    if let Some(t) = args.trials {
        config.trials = t;
    }
    if let Some(offset) = args.delta_offset {
        config.delta_offset = offset;
    }
    config.validate()?;
    let report = run_oracle_checks(&config)?;
    let out = args.out.as_ref().or(config.output.as_ref());
    let mut output = emit(&report.to_table(), format, out.map(PathBuf::as_path))?;
    let passed = report.rows.iter().filter(|r| r.passed).count();
    output.stderr = format!("{passed}/{} checks passed\n", report.rows.len());
    for row in report.rows.iter().filter(|r| !r.passed) {
        output.stderr.push_str(&format!("FAILED {}: {}\n", row.check, row.detail));
    }
    output.check_failed = !report.all_passed();
    Ok(output)
}
