use rand::Rng;
use rayon::prelude::*;

use super::config::{variables_for_density, ExperimentConfig, ExperimentKind};
use super::table::Table;
use crate::error::{Error, Result};
use crate::gf2::oracles::mean_stderr;
use crate::gf2::{sample_ldgm, xorsat_solvable, SourceSequence};
use crate::seeds::trial_rng;

pub const XORSAT_COLUMNS: [&str; 6] = ["n", "c", "alpha", "trials", "sat_fraction", "stderr"];

/// Empirical solvability of random `c`-XORSAT: for each `(n, c, alpha)`
/// point, `trials` systems `z' G = y'` with `n` equations on
/// `m = round(n / alpha)` variables and uniform right-hand side.
pub fn run_xorsat_experiment(config: &ExperimentConfig) -> Result<Table> {
    if config.kind != ExperimentKind::Xorsat {
        return Err(Error::Config(format!("expected an xorsat config, got {}", config.kind)));
    }
    config.validate()?;
    let mut points = Vec::new();
    for &n in &config.n {
        for &c in &config.degrees {
            for &alpha in &config.alpha {
                points.push((n, c, alpha));
            }
        }
    }

    let outcomes: Vec<Vec<bool>> = points
        .par_iter()
        .enumerate()
        .map(|(p, &(n, c, alpha))| {
            let m = variables_for_density(n, alpha);
            (0..config.trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = trial_rng(config.seed, p as u64, t as u64);
                    let g = sample_ldgm(m, n, c as usize, rng.random())?;
                    let y = SourceSequence::sample(n, &mut rng);
                    xorsat_solvable(&g, &y)
                })
                .collect::<Result<Vec<bool>>>()
        })
        .collect::<Result<_>>()?;

    let mut table = Table::new(config.kind.as_str(), config.hash(), Some(config.seed), &XORSAT_COLUMNS);
    table.notes.push(("density".into(), "alpha=n/m".into()));
    for (&(n, c, alpha), sat) in points.iter().zip(&outcomes) {
        let values: Vec<f64> = sat.iter().map(|&s| f64::from(u8::from(s))).collect();
        let (fraction, stderr) = mean_stderr(&values);
        table.push(vec![
            n.into(),
            c.into(),
            alpha.into(),
            config.trials.into(),
            fraction.into(),
            stderr.into(),
        ]);
    }
    Ok(table)
}

/// Clause density where the satisfiable fraction first falls through 1/2,
/// by linear interpolation between adjacent grid points.
pub fn transition_midpoint(alpha: &[f64], sat_fraction: &[f64]) -> Option<f64> {
    alpha
        .windows(2)
        .zip(sat_fraction.windows(2))
        .find(|(_, s)| s[0] >= 0.5 && s[1] < 0.5)
        .map(|(a, s)| a[0] + (a[1] - a[0]) * (s[0] - 0.5) / (s[0] - s[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_interpolates() {
        let a = [0.8, 0.9, 1.0];
        assert_eq!(transition_midpoint(&a, &[1.0, 0.75, 0.25]), Some(0.95));
        assert_eq!(transition_midpoint(&a, &[1.0, 0.9, 0.8]), None);
    }

    #[test]
    fn easy_phase_is_satisfiable() {
        let mut config = ExperimentConfig::default_for(ExperimentKind::Xorsat, 3);
        config.n = vec![300];
        config.alpha = vec![0.5, 1.2];
        config.trials = 20;
        let table = run_xorsat_experiment(&config).unwrap();
        let frac = table.column("sat_fraction").unwrap();
        assert_eq!(table.rows[0][frac].as_f64(), Some(1.0));
        assert!(table.rows[1][frac].as_f64().unwrap() < 0.2);
    }
}
