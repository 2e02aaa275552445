use recon_afem::driver::{run, AdaptiveParams, IterationRecord};
use recon_afem::model::{benchmark1, benchmark2, optimal_damping, ScalarProductSpec};
use recon_afem::report::{cli_main, emit_csv, fit_rate, level_rate, read_csv, sweep, weighted_cost, Abscissa, Quantity, CSV_HEADER};

fn final_rows(records: &[IterationRecord]) -> Vec<&IterationRecord> {
    records.iter().enumerate().filter(|(i, r)| records.get(i + 1).is_none_or(|n| n.ell != r.ell)).map(|(_, r)| r).collect()
}

#[test]
fn csv_file_round_trip_and_recomputable_rates() {
    let mut params = AdaptiveParams::new(0.5, 0.1, 1.5, ScalarProductSpec::WeightedExact);
    params.max_dofs = 3000;
    let log = run(&benchmark2(), &params).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.csv");
    emit_csv(&log, &path).unwrap();

    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    assert_eq!(text.lines().count(), log.records.len() + 1);
    let back = read_csv(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(back, log.records);

    let finals = final_rows(&back);
    assert_eq!(finals.len(), log.levels.len());
    let xs: Vec<f64> = finals.iter().map(|r| r.ndofs as f64).collect();
    let ys: Vec<f64> = finals.iter().map(|r| r.h1_error.unwrap()).collect();
    let from_csv = fit_rate(&xs, &ys, 8).unwrap();
    let from_log = level_rate(&log, Quantity::H1Error, Abscissa::Dofs, 8).unwrap();
    assert_eq!(from_csv, from_log);

    let last = back.last().unwrap();
    assert_eq!(weighted_cost(&log).unwrap(), last.h1_error.unwrap() * (last.cum_cost as f64).sqrt());
}

#[test]
fn weighted_cost_needs_an_exact_solution() {
    let mut params = AdaptiveParams::new(0.5, 0.1, optimal_damping(&benchmark1().nonlinearity), ScalarProductSpec::H1);
    params.max_dofs = 200;
    let log = run(&benchmark1(), &params).unwrap();
    assert!(weighted_cost(&log).is_err());
    assert!(log.records.iter().all(|r| r.h1_error.is_none()));
}

#[test]
fn h1_cost_decreases_with_damping_for_small_lambda() {
    let mut base = AdaptiveParams::new(0.5, 0.05, 1.0, ScalarProductSpec::H1);
    base.max_dofs = 1_000_000;
    base.error_tol = Some(1e-2);
    let deltas = [0.1, 0.5, 1.0, 1.5];
    let cells = sweep(&benchmark2(), &base, &[0.05], &deltas, &[ScalarProductSpec::H1]);
    let costs: Vec<f64> = deltas
        .iter()
        .map(|d| cells.iter().find(|c| c.delta == *d).unwrap().outcome.as_ref().unwrap().weighted_cost)
        .collect();
    assert!(costs.windows(2).all(|w| w[1] < w[0]), "{costs:?}");
}

#[test]
fn cli_writes_csv_and_reports_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("z.csv");
    let code = cli_main(["recon-afem", "--benchmark", "zshape", "--theta", "1.0", "--max-dofs", "800", "--output", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    let rows = read_csv(std::fs::File::open(&out).unwrap()).unwrap();
    assert!(rows.last().unwrap().ndofs > 800);

    let out = dir.path().join("l.csv");
    let args = [
        "recon-afem", "--benchmark", "lshape", "--theta", "0.5", "--lambda", "0.1", "--delta", "1.5",
        "--scalar-product", "mu", "--error-tol", "5e-2", "--output", out.to_str().unwrap(),
    ];
    assert_eq!(cli_main(args), 0);
    let rows = read_csv(std::fs::File::open(&out).unwrap()).unwrap();
    assert!(rows.last().unwrap().h1_error.unwrap() <= 5e-2);

    assert_eq!(cli_main(["recon-afem"]), 2);
    assert_eq!(cli_main(["recon-afem", "--benchmark", "lshape", "--lambda", "-1"]), 2);
    assert_eq!(cli_main(["recon-afem", "--benchmark", "lshape", "--max-dofs", "many"]), 2);
    let missing = dir.path().join("no/such/dir/out.csv");
    assert_eq!(cli_main(["recon-afem", "--benchmark", "lshape", "--max-dofs", "50", "--output", missing.to_str().unwrap()]), 3);
}
