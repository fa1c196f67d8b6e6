use ldgm_core::bounds::{inverse_binary_entropy, LdpcDegrees};
use ldgm_core::experiments::{
    run, run_distortion_experiment, run_xorsat_experiment, Cell, ExperimentConfig, ExperimentKind,
    Table,
};

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

fn column(table: &Table, name: &str) -> Vec<f64> {
    let i = table.column(name).unwrap();
    table.rows.iter().map(|r| r[i].as_f64().unwrap()).collect()
}

#[test]
fn output_is_independent_of_thread_count() {
    let mut distortion = ExperimentConfig::default_for(ExperimentKind::Distortion, 5);
    distortion.n = vec![16, 20];
    distortion.ldpc = Some(LdpcDegrees::new(2, 4).unwrap());
    distortion.trials = 40;
    let mut xorsat = ExperimentConfig::default_for(ExperimentKind::Xorsat, 5);
    xorsat.n = vec![200];
    xorsat.alpha = vec![0.8, 0.9, 1.0];
    xorsat.trials = 30;
    let mut oracle = ExperimentConfig::default_for(ExperimentKind::OracleCheck, 5);
    oracle.trials = 300;

    for config in [distortion, xorsat, oracle] {
        let one = in_pool(1, || run(&config).unwrap().to_csv());
        let three = in_pool(3, || run(&config).unwrap().to_csv());
        assert_eq!(one, three, "{}", config.kind);
    }
}

fn mean_and_stderr(n: usize, degree: u32, rate: f64) -> (f64, f64) {
    let mut config = ExperimentConfig::default_for(ExperimentKind::Distortion, 17);
    config.n = vec![n];
    config.degrees = vec![degree];
    config.rates = vec![rate];
    let table = run_distortion_experiment(&config).unwrap();
    (column(&table, "mean")[0], column(&table, "stderr")[0])
}

fn not_worse(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 <= b.0 + 2.0 * a.1.hypot(b.1)
}

#[test]
fn distortion_mean_respects_shannon_and_degree_order() {
    let floor = inverse_binary_entropy(0.5).unwrap() - 0.01;
    let c2 = mean_and_stderr(24, 2, 0.5);
    let c3 = mean_and_stderr(24, 3, 0.5);
    let c4 = mean_and_stderr(24, 4, 0.5);
    for (mean, _) in [c2, c3, c4] {
        assert!(mean >= floor, "mean {mean} below {floor}");
    }
    assert!(not_worse(c3, c2) && not_worse(c4, c2), "{c2:?} {c3:?} {c4:?}");
    // With even c the all-ones information word encodes to zero, so only
    // 2^{m-1} codewords are distinct. One extra information bit restores
    // the ordering against the odd degree below it.
    let c4_matched = mean_and_stderr(24, 4, 13.0 / 24.0);
    assert!(not_worse(c4_matched, c3), "{c3:?} {c4_matched:?}");
}

#[test]
fn xorsat_fraction_nonincreasing_in_density() {
    let mut config = ExperimentConfig::default_for(ExperimentKind::Xorsat, 9);
    config.n = vec![400];
    config.alpha = vec![0.5, 0.8, 0.9, 0.95, 1.0, 1.1];
    config.trials = 100;
    let table = run_xorsat_experiment(&config).unwrap();
    let (sat, stderr) = (column(&table, "sat_fraction"), column(&table, "stderr"));
    assert_eq!(sat[0], 1.0);
    for i in 1..sat.len() {
        assert!(sat[i] <= sat[i - 1] + 2.0 * stderr[i].hypot(stderr[i - 1]).max(0.01), "{sat:?}");
    }
}

#[test]
fn sweep_reproduces_degree_ordering() {
    let mut config = ExperimentConfig::default_for(ExperimentKind::BoundSweep, 0);
    config.distortion = vec![0.11];
    let table = run(&config).unwrap();
    let rates = column(&table, "R");
    let (shannon, c3, c4, c6) = (rates[0], rates[1], rates[2], rates[3]);
    assert!(c6 - shannon < c4 - shannon && c4 - shannon < c3 - shannon, "{rates:?}");
    assert_eq!(table.rows[1][0], Cell::text("ldgm"));
}

#[test]
fn config_file_drives_a_run() {
    let text = "kind = xorsat\nn = 100\nc = 3\nalpha = 0.5:1.5:3\ntrials = 5\nseed = 1\n";
    let config = ExperimentConfig::parse(text).unwrap();
    let table = run(&config).unwrap();
    assert_eq!(table.rows.len(), 3);
    assert_eq!(column(&table, "alpha"), vec![0.5, 1.0, 1.5]);
}
