use rayon::prelude::*;

use super::config::{linspace, ExperimentConfig, ExperimentKind};
use super::table::{Cell, Table};
use crate::bounds::{
    entropy_deficit, rate_upper_bound, rate_upper_bound_compound, u_func, v_func, BoundResult,
    DegreeParams,
};
use crate::error::{Error, Result};

pub const SWEEP_COLUMNS: [&str; 9] = ["variant", "c", "dv", "dc", "D", "R", "argmax_w", "w", "error"];

#[derive(Debug, Clone, Copy)]
enum Row {
    Shannon { d: f64 },
    Bound { d: f64, params: DegreeParams },
    Profile { d: f64, params: DegreeParams, w: f64 },
}

fn degrees(params: &DegreeParams) -> (u32, u32) {
    params.ldpc.map_or((0, 0), |l| (l.dv, l.dc))
}

fn variant(params: &DegreeParams, profile: bool) -> &'static str {
    match (params.ldpc.is_some(), profile) {
        (false, false) => "ldgm",
        (true, false) => "compound",
        (false, true) => "ldgm-profile",
        (true, true) => "compound-profile",
    }
}

fn bound(d: f64, params: &DegreeParams) -> Result<BoundResult> {
    if params.ldpc.is_some() {
        rate_upper_bound_compound(d, params)
    } else {
        rate_upper_bound(d, params.c)
    }
}

/// Upper end of the `w` range the bound searches.
fn weight_range(params: &DegreeParams) -> f64 {
    let even_dc = params.ldpc.is_none_or(|l| l.dc % 2 == 0);
    if params.c.is_multiple_of(2) && even_dc {
        0.5
    } else {
        1.0
    }
}

/// Shannon, LDGM and (with a precode) compound bounds over the distortion
/// grid, followed by full `U` / `V` profiles over `w` at each `profile`
/// distortion. An optimizer failure fills `R` with NaN and the message in
/// `error`; the sweep continues.
pub fn run_bound_sweep(config: &ExperimentConfig) -> Result<Table> {
    if config.kind != ExperimentKind::BoundSweep {
        return Err(Error::Config(format!("expected a bound-sweep config, got {}", config.kind)));
    }
    config.validate()?;
    let mut families = Vec::new();
    for &c in &config.degrees {
        families.push(DegreeParams::ldgm(c)?);
    }
    if let Some(ldpc) = config.ldpc {
        for &c in &config.degrees {
            families.push(DegreeParams::compound(c, ldpc.dv, ldpc.dc)?);
        }
    }

    let mut rows: Vec<Row> = config.distortion.iter().map(|&d| Row::Shannon { d }).collect();
    for params in &families {
        rows.extend(config.distortion.iter().map(|&d| Row::Bound { d, params: *params }));
    }
    for &d in &config.profile {
        for params in &families {
            let grid = linspace(0.0, weight_range(params), config.profile_points);
            rows.extend(grid.into_iter().map(|w| Row::Profile { d, params: *params, w }));
        }
    }

    let cells: Vec<Vec<Cell>> = rows.par_iter().map(render).collect();
    let mut table = Table::new(config.kind.as_str(), config.hash(), Some(config.seed), &SWEEP_COLUMNS);
    for row in cells {
        table.push(row);
    }
    Ok(table)
}

fn render(row: &Row) -> Vec<Cell> {
    let outcome = |r: Result<(f64, Option<f64>)>| match r {
        Ok((rate, argmax)) => (rate.into(), argmax.map_or(Cell::Empty, Cell::from), Cell::Empty),
        Err(e) => (Cell::float(f64::NAN), Cell::Empty, Cell::text(e.to_string())),
    };
    match *row {
        Row::Shannon { d } => vec![
            "shannon".into(),
            0u32.into(),
            0u32.into(),
            0u32.into(),
            d.into(),
            entropy_deficit(d).into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
        ],
        Row::Bound { d, params } => {
            let (dv, dc) = degrees(&params);
            let (rate, argmax, error) = outcome(bound(d, &params).map(|b| (b.value, Some(b.argmax_w))));
            vec![
                variant(&params, false).into(),
                params.c.into(),
                dv.into(),
                dc.into(),
                d.into(),
                rate,
                argmax,
                Cell::Empty,
                error,
            ]
        }
        Row::Profile { d, params, w } => {
            let (dv, dc) = degrees(&params);
            let value = if params.ldpc.is_some() {
                v_func(w, d, &params)
            } else {
                u_func(w, d, params.c)
            };
            let (rate, _, error) = outcome(value.map(|v| (v, None)));
            vec![
                variant(&params, true).into(),
                params.c.into(),
                dv.into(),
                dc.into(),
                d.into(),
                rate,
                Cell::Empty,
                w.into(),
                error,
            ]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::LdpcDegrees;

    fn small_sweep() -> ExperimentConfig {
        let mut config = ExperimentConfig::default_for(ExperimentKind::BoundSweep, 0);
        config.degrees = vec![3, 4];
        config.distortion = vec![0.05, 0.11, 0.3];
        config.ldpc = Some(LdpcDegrees::new(4, 8).unwrap());
        config.profile = vec![0.11];
        config.profile_points = 11;
        config
    }

    #[test]
    fn sweep_rows_sit_above_shannon() {
        let table = run_bound_sweep(&small_sweep()).unwrap();
        let (v, d, r) = (0, table.column("D").unwrap(), table.column("R").unwrap());
        let shannon: Vec<(f64, f64)> = table
            .rows
            .iter()
            .filter(|row| row[v] == Cell::text("shannon"))
            .map(|row| (row[d].as_f64().unwrap(), row[r].as_f64().unwrap()))
            .collect();
        assert_eq!(shannon.len(), 3);
        for row in table.rows.iter().filter(|row| matches!(&row[v], Cell::Text(t) if t == "ldgm" || t == "compound")) {
            let (dd, rr) = (row[d].as_f64().unwrap(), row[r].as_f64().unwrap());
            let s = shannon.iter().find(|(x, _)| *x == dd).unwrap().1;
            assert!(rr >= s - 1e-12, "{row:?}");
        }
        let profiles = table.rows.iter().filter(|row| matches!(&row[v], Cell::Text(t) if t.ends_with("-profile"))).count();
        assert_eq!(profiles, 4 * 11);
        assert_eq!(table.rows.len(), 3 + 4 * 3 + 44);
    }

    #[test]
    fn failures_are_recorded_per_row() {
        let row = render(&Row::Bound {
            d: 0.11,
            params: DegreeParams { c: 1, ldpc: None },
        });
        assert!(row[5].as_f64().unwrap().is_nan());
        assert!(matches!(&row[8], Cell::Text(msg) if !msg.is_empty()));
    }
}
