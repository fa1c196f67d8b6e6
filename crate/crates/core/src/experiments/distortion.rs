use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{information_bits, ExperimentConfig, ExperimentKind};
use super::table::Table;
use crate::error::{Error, Result};
use crate::gf2::oracles::mean_stderr;
use crate::gf2::{ml_encode, ml_encode_compound, sample_ldgm, sample_ldpc, SourceSequence};
use crate::seeds::{derive_seed, trial_rng};

pub const DISTORTION_COLUMNS: [&str; 10] =
    ["n", "m", "c", "dv", "dc", "rate", "trial", "distortion", "mean", "stderr"];

/// Parameters of one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointParams {
    pub n: usize,
    pub m: usize,
    pub c: u32,
    pub rate: f64,
}

/// Outcome of one trial: a fresh code (and precode) and a fresh source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub config_hash: String,
    pub point_index: usize,
    pub point: PointParams,
    pub trial: usize,
    pub seed: u64,
    /// ML distortion of the plain LDGM code.
    pub distortion: f64,
    /// ML distortion when information sequences are restricted to the
    /// precode, if one is configured.
    pub compound_distortion: Option<f64>,
    pub wall_time: Duration,
}

fn points(config: &ExperimentConfig) -> Vec<PointParams> {
    let mut out = Vec::new();
    for &n in &config.n {
        for &c in &config.degrees {
            for &rate in &config.rates {
                out.push(PointParams {
                    n,
                    m: information_bits(n, rate),
                    c,
                    rate,
                });
            }
        }
    }
    out
}

/// Runs every trial of a distortion experiment, ordered by
/// `(point, trial)`. Each trial samples `G`, the source and (if
/// configured) the precode `H` from its own derived seed.
pub fn run_distortion_trials(config: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    if config.kind != ExperimentKind::Distortion {
        return Err(Error::Config(format!("expected a distortion config, got {}", config.kind)));
    }
    config.validate()?;
    let hash = config.hash();
    let tasks: Vec<(usize, PointParams, usize)> = points(config)
        .into_iter()
        .enumerate()
        .flat_map(|(p, point)| (0..config.trials).map(move |t| (p, point, t)))
        .collect();

    tasks
        .into_par_iter()
        .map(|(p, point, trial)| {
            let start = Instant::now();
            let seed = derive_seed(config.seed, p as u64, trial as u64);
            let mut rng = trial_rng(config.seed, p as u64, trial as u64);
            let g = sample_ldgm(point.m, point.n, point.c as usize, rng.random())?;
            let y = SourceSequence::sample(point.n, &mut rng);
            let plain = ml_encode(&g, &y)?;
            let compound_distortion = match config.ldpc {
                Some(ldpc) => {
                    let h = sample_ldpc(point.m, ldpc.dv as usize, ldpc.dc as usize, rng.random())?;
                    Some(ml_encode_compound(&g, &h, &y)?.normalized_distortion)
                }
                None => None,
            };
            Ok(TrialRecord {
                config_hash: hash.clone(),
                point_index: p,
                point,
                trial,
                seed,
                distortion: plain.normalized_distortion,
                compound_distortion,
                wall_time: start.elapsed(),
            })
        })
        .collect()
}

/// Distortion table: for each point the plain-code rows (`dv = dc = 0`),
/// then, with a precode, the compound rows on the same instances. Every
/// row repeats the mean and standard error of its (point, code) group.
pub fn run_distortion_experiment(config: &ExperimentConfig) -> Result<Table> {
    let records = run_distortion_trials(config)?;
    Ok(distortion_table(config, &records))
}

pub fn distortion_table(config: &ExperimentConfig, records: &[TrialRecord]) -> Table {
    let mut table = Table::new(
        config.kind.as_str(),
        config.hash(),
        Some(config.seed),
        &DISTORTION_COLUMNS,
    );
    table.notes.push(("resample".into(), "code+source-per-trial".into()));
    type Pick = fn(&TrialRecord) -> Option<f64>;
    let mut variants: Vec<(u32, u32, Pick)> = vec![(0, 0, |r| Some(r.distortion))];
    if let Some(ldpc) = config.ldpc {
        variants.push((ldpc.dv, ldpc.dc, |r| r.compound_distortion));
    }

    for group in records.chunk_by(|a, b| a.point_index == b.point_index) {
        let point = group[0].point;
        for &(dv, dc, value) in &variants {
            let values: Vec<f64> = group.iter().filter_map(value).collect();
            let (mean, stderr) = mean_stderr(&values);
            for (record, &d) in group.iter().zip(&values) {
                table.push(vec![
                    point.n.into(),
                    point.m.into(),
                    point.c.into(),
                    dv.into(),
                    dc.into(),
                    point.rate.into(),
                    record.trial.into(),
                    d.into(),
                    mean.into(),
                    stderr.into(),
                ]);
            }
        }
    }
    table
}
