//! CSV output, log-log rate fits, weighted cost and the command line
//! interface.

use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use rayon::prelude::*;

use crate::driver::{run, AdaptiveParams, IterationRecord, RunLog};
use crate::model::{benchmark1, benchmark2, optimal_damping, Problem, ScalarProductSpec};
use crate::{Error, Result};

pub const CSV_HEADER: [&str; 11] =
    ["ell", "k", "abs_index", "ndofs", "zeta", "eta", "z_norm", "tildeZ", "h1_error", "cum_cost", "wall_time_s"];

/// Least-squares line through `(log10 x, log10 y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub window: usize,
    /// Root mean square of the residuals in log10 units.
    pub residual: f64,
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    (slope, intercept, (rss / n).sqrt())
}

/// Fits `y ~ C x^slope` over the last `window` points.
pub fn fit_rate(xs: &[f64], ys: &[f64], window: usize) -> Result<RateFit> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch { expected: xs.len(), found: ys.len() });
    }
    if window < 3 || xs.len() < 3 {
        return Err(Error::TooFewPoints(window.min(xs.len())));
    }
    if window > xs.len() {
        return Err(Error::InvalidParameter(format!("window {window} exceeds the {} available points", xs.len())));
    }
    let start = xs.len() - window;
    let (xs, ys) = (&xs[start..], &ys[start..]);
    if let Some(v) = xs.iter().chain(ys).find(|v| !(**v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("rate fits need positive finite values, got {v}")));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.log10()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.log10()).collect();
    let (slope, intercept, residual) = least_squares(&lx, &ly);
    Ok(RateFit { slope, intercept, window, residual })
}

/// Geometric envelope `y_i <= C q^i` of a positive sequence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnvelopeFit {
    pub q: f64,
    pub constant: f64,
    /// Root mean square of the residuals of `log10 y` about the fitted line.
    pub residual: f64,
}

/// `q` from the least-squares slope of `log10 y_i` against `i`; `C` is the
/// smallest constant with `y_i <= C q^i` for all `i`.
pub fn fit_envelope(ys: &[f64]) -> Result<EnvelopeFit> {
    if ys.len() < 3 {
        return Err(Error::TooFewPoints(ys.len()));
    }
    if let Some(v) = ys.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("envelope fits need positive finite values, got {v}")));
    }
    let xs: Vec<f64> = (0..ys.len()).map(|i| i as f64).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.log10()).collect();
    let (slope, _, residual) = least_squares(&xs, &ly);
    let q = 10f64.powf(slope);
    let constant = ys.iter().enumerate().map(|(i, y)| y / q.powi(i as i32)).fold(0.0, f64::max);
    Ok(EnvelopeFit { q, constant, residual })
}

/// `||grad(u* - u)|| cost^{1/2}` at the last record.
pub fn weighted_cost(log: &RunLog) -> Result<f64> {
    weighted_cost_of(log.last())
}

pub fn weighted_cost_of(record: &IterationRecord) -> Result<f64> {
    let err = record.h1_error.ok_or(Error::MissingExactSolution)?;
    Ok(err * (record.cum_cost as f64).sqrt())
}

/// Which quantity of the level-final records to fit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Zeta,
    Eta,
    H1Error,
    TildeZ,
}

/// Against which abscissa.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Abscissa {
    Dofs,
    CumulativeCost,
}

/// Rate over the final iterates of the trailing `window` levels.
pub fn level_rate(log: &RunLog, quantity: Quantity, abscissa: Abscissa, window: usize) -> Result<RateFit> {
    let finals = log.final_records();
    let xs: Vec<f64> = finals
        .iter()
        .map(|r| match abscissa {
            Abscissa::Dofs => r.ndofs as f64,
            Abscissa::CumulativeCost => r.cum_cost as f64,
        })
        .collect();
    let ys = finals
        .iter()
        .map(|r| match quantity {
            Quantity::Zeta => Ok(r.zeta),
            Quantity::Eta => Ok(r.eta),
            Quantity::TildeZ => Ok(r.tilde_z),
            Quantity::H1Error => r.h1_error.ok_or(Error::MissingExactSolution),
        })
        .collect::<Result<Vec<f64>>>()?;
    fit_rate(&xs, &ys, window.min(xs.len()))
}

/// Envelope fit of the computable quasi-error over all steps.
pub fn quasi_error_envelope(log: &RunLog) -> Result<EnvelopeFit> {
    let ys: Vec<f64> = log.records.iter().map(|r| r.tilde_z).collect();
    fit_envelope(&ys)
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes one row per step with 17 significant digits.
pub fn write_csv<W: io::Write>(records: &[IterationRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.ell.to_string(),
            r.k.to_string(),
            r.abs_index.to_string(),
            r.ndofs.to_string(),
            float(r.zeta),
            float(r.eta),
            float(r.z_norm),
            float(r.tilde_z),
            r.h1_error.map(float).unwrap_or_default(),
            r.cum_cost.to_string(),
            float(r.wall_time_s),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(log: &RunLog, path: &Path) -> Result<()> {
    write_csv(&log.records, std::fs::File::create(path)?)
}

fn parse_field<T: std::str::FromStr>(row: &csv::StringRecord, i: usize, line: usize) -> Result<T> {
    let raw = row.get(i).ok_or_else(|| Error::Parse { line, msg: format!("missing column {}", CSV_HEADER[i]) })?;
    raw.trim().parse().map_err(|_| Error::Parse { line, msg: format!("bad value {raw:?} in column {}", CSV_HEADER[i]) })
}

/// Parses CSV written by [`write_csv`].
pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<IterationRecord>> {
    let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = rd.headers()?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Error::Parse { line: 1, msg: format!("unexpected header {:?}", header.iter().collect::<Vec<_>>()) });
    }
    let mut out = Vec::new();
    for (i, row) in rd.records().enumerate() {
        let row = row?;
        let line = i + 2;
        if row.len() != CSV_HEADER.len() {
            return Err(Error::Parse { line, msg: format!("expected {} columns, found {}", CSV_HEADER.len(), row.len()) });
        }
        let h1 = row.get(8).unwrap_or("").trim();
        out.push(IterationRecord {
            ell: parse_field(&row, 0, line)?,
            k: parse_field(&row, 1, line)?,
            abs_index: parse_field(&row, 2, line)?,
            ndofs: parse_field(&row, 3, line)?,
            zeta: parse_field(&row, 4, line)?,
            eta: parse_field(&row, 5, line)?,
            z_norm: parse_field(&row, 6, line)?,
            tilde_z: parse_field(&row, 7, line)?,
            h1_error: if h1.is_empty() { None } else { Some(parse_field(&row, 8, line)?) },
            cum_cost: parse_field(&row, 9, line)?,
            wall_time_s: parse_field(&row, 10, line)?,
        });
    }
    Ok(out)
}

/// Human-readable summary: final size, rates, weighted cost and `k_bar`.
pub fn summary(log: &RunLog) -> String {
    let mut s = String::new();
    let last = log.last();
    let _ = writeln!(s, "problem        {}", log.problem);
    let _ = writeln!(
        s,
        "parameters     theta={} lambda={} delta={} scalar-product={}",
        log.params.theta,
        log.params.lambda,
        log.params.delta,
        log.params.scalar_product.name()
    );
    let _ = writeln!(s, "termination    {}", log.termination);
    let _ = writeln!(s, "levels         {}", log.levels.len());
    let _ = writeln!(s, "steps          {}", log.records.len());
    let _ = writeln!(s, "final ndofs    {}", last.ndofs);
    let _ = writeln!(s, "final zeta     {:.6e}", last.zeta);
    let _ = writeln!(s, "final eta      {:.6e}", last.eta);
    if let Some(e) = last.h1_error {
        let _ = writeln!(s, "final error    {e:.6e}");
    }
    let window = 8.min(log.levels.len());
    let mut rates = vec![("zeta vs ndofs", Quantity::Zeta, Abscissa::Dofs), ("eta vs ndofs", Quantity::Eta, Abscissa::Dofs)];
    if last.h1_error.is_some() {
        rates.push(("error vs ndofs", Quantity::H1Error, Abscissa::Dofs));
        rates.push(("error vs cost", Quantity::H1Error, Abscissa::CumulativeCost));
    }
    for (name, q, a) in rates {
        if let Ok(fit) = level_rate(log, q, a, window) {
            let _ = writeln!(s, "rate           {name}: {:.4} (last {} levels)", fit.slope, fit.window);
        }
    }
    if let Ok(env) = quasi_error_envelope(log) {
        let _ = writeln!(s, "envelope q     {:.5} (residual {:.3e})", env.q, env.residual);
    }
    if let Ok(wc) = weighted_cost(log) {
        let _ = writeln!(s, "weighted cost  {wc:.4}");
    }
    let _ = writeln!(s, "k_bar          {:?}", log.k_bar());
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BenchmarkArg {
    Zshape,
    Lshape,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScalarProductArg {
    H1,
    Mu,
    Iterate,
}

impl From<ScalarProductArg> for ScalarProductSpec {
    fn from(a: ScalarProductArg) -> Self {
        match a {
            ScalarProductArg::H1 => ScalarProductSpec::H1,
            ScalarProductArg::Mu => ScalarProductSpec::WeightedExact,
            ScalarProductArg::Iterate => ScalarProductSpec::WeightedIterate,
        }
    }
}

/// Adaptive FEM for -div(mu(|grad u|^2) grad u) = f - div fvec with damped
/// Zarantonello linearization.
#[derive(Debug, Parser)]
#[command(name = "recon-afem", version, allow_negative_numbers = true)]
pub struct Cli {
    #[arg(long, value_enum)]
    pub benchmark: BenchmarkArg,
    /// Dörfler bulk parameter in (0, 1]; 1 refines uniformly.
    #[arg(long, default_value_t = 0.5)]
    pub theta: f64,
    /// Stopping parameter of the linearization loop.
    #[arg(long, default_value_t = 0.1)]
    pub lambda: f64,
    /// Damping; defaults to alpha/L^2 for zshape and 1.5 for lshape.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, value_enum, default_value_t = ScalarProductArg::H1)]
    pub scalar_product: ScalarProductArg,
    /// Stop after the first level with more free dofs than this.
    #[arg(long, default_value_t = 100_000)]
    pub max_dofs: usize,
    /// Stop once the H1 error drops below this (lshape only).
    #[arg(long)]
    pub error_tol: Option<f64>,
    #[arg(long, default_value_t = 1e-10)]
    pub solver_rtol: f64,
    /// Cap on linearization steps per mesh.
    #[arg(long, default_value_t = 500)]
    pub max_inner: usize,
    /// CSV destination: per-step records, or the result table with --sweep.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Run the grid lambda x delta x scalar product and report weighted costs.
    #[arg(long)]
    pub sweep: bool,
}

impl Cli {
    /// Parses arguments (including the program name) without exiting on
    /// errors or help requests.
    pub fn parse_args<I, T>(args: I) -> Result<Cli>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        Cli::try_parse_from(args).map_err(|e| Error::InvalidParameter(e.to_string()))
    }

    /// Benchmark problem and validated parameters, without running anything.
    pub fn resolve(&self) -> Result<(Problem, AdaptiveParams)> {
        let problem = match self.benchmark {
            BenchmarkArg::Zshape => benchmark1(),
            BenchmarkArg::Lshape => benchmark2(),
        };
        let delta = self.delta.unwrap_or(match self.benchmark {
            BenchmarkArg::Zshape => optimal_damping(&problem.nonlinearity),
            BenchmarkArg::Lshape => 1.5,
        });
        let mut params = AdaptiveParams::new(self.theta, self.lambda, delta, self.scalar_product.into());
        params.max_dofs = self.max_dofs;
        params.error_tol = self.error_tol;
        params.solver_rtol = self.solver_rtol;
        params.max_inner = self.max_inner;
        params.validate()?;
        let needs_exact = self.sweep || self.error_tol.is_some() || params.scalar_product == ScalarProductSpec::WeightedExact;
        if needs_exact && problem.exact.is_none() {
            return Err(Error::InvalidParameter(
                "--sweep, --error-tol and --scalar-product mu need a benchmark with known solution (lshape)".into(),
            ));
        }
        Ok((problem, params))
    }
}

pub const SWEEP_LAMBDAS: [f64; 5] = [0.01, 0.05, 0.1, 0.5, 1.0];
pub const SWEEP_DELTAS: [f64; 4] = [0.1, 0.5, 1.0, 1.5];
pub const SWEEP_PRODUCTS: [ScalarProductSpec; 3] =
    [ScalarProductSpec::H1, ScalarProductSpec::WeightedExact, ScalarProductSpec::WeightedIterate];

/// One cell of a weighted-cost sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepCell {
    pub lambda: f64,
    pub delta: f64,
    pub scalar_product: ScalarProductSpec,
    pub outcome: std::result::Result<SweepResult, String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub weighted_cost: f64,
    pub ndofs: usize,
    pub steps: usize,
    pub termination: String,
}

/// Runs every `(lambda, delta, scalar product)` combination in parallel.
pub fn sweep(problem: &Problem, base: &AdaptiveParams, lambdas: &[f64], deltas: &[f64], products: &[ScalarProductSpec]) -> Vec<SweepCell> {
    let mut grid = Vec::new();
    for &lambda in lambdas {
        for &delta in deltas {
            for &sp in products {
                grid.push((lambda, delta, sp));
            }
        }
    }
    grid.into_par_iter()
        .map(|(lambda, delta, scalar_product)| {
            let params = AdaptiveParams { lambda, delta, scalar_product, ..base.clone() };
            let outcome = run(problem, &params)
                .and_then(|log| {
                    Ok(SweepResult {
                        weighted_cost: weighted_cost(&log)?,
                        ndofs: log.last().ndofs,
                        steps: log.records.len(),
                        termination: log.termination.to_string(),
                    })
                })
                .map_err(|e| e.to_string());
            SweepCell { lambda, delta, scalar_product, outcome }
        })
        .collect()
}

fn write_sweep_csv(cells: &[SweepCell], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["lambda", "delta", "scalar_product", "weighted_cost", "ndofs", "steps", "termination"])?;
    for c in cells {
        let (wc, n, s, t) = match &c.outcome {
            Ok(r) => (float(r.weighted_cost), r.ndofs.to_string(), r.steps.to_string(), r.termination.clone()),
            Err(e) => (String::new(), String::new(), String::new(), format!("error: {e}")),
        };
        w.write_record([c.lambda.to_string(), c.delta.to_string(), c.scalar_product.name().to_string(), wc, n, s, t])?;
    }
    w.flush()?;
    Ok(())
}

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 2;
const EXIT_FAILURE: i32 = 3;

/// Parses the arguments (including the program name), runs and returns the
/// process exit code.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (problem, mut params) = match cli.resolve() {
        Ok(resolved) => resolved,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };

    if cli.sweep {
        if params.error_tol.is_none() {
            params.error_tol = Some(1e-2);
        }
        let cells = sweep(&problem, &params, &SWEEP_LAMBDAS, &SWEEP_DELTAS, &SWEEP_PRODUCTS);
        println!("{:>7} {:>6} {:>8} {:>14} {:>9} {:>6}  termination", "lambda", "delta", "product", "weighted_cost", "ndofs", "steps");
        for c in &cells {
            match &c.outcome {
                Ok(r) => println!(
                    "{:>7} {:>6} {:>8} {:>14.4} {:>9} {:>6}  {}",
                    c.lambda,
                    c.delta,
                    c.scalar_product.name(),
                    r.weighted_cost,
                    r.ndofs,
                    r.steps,
                    r.termination
                ),
                Err(e) => println!("{:>7} {:>6} {:>8}  failed: {e}", c.lambda, c.delta, c.scalar_product.name()),
            }
        }
        if let Some(path) = &cli.output {
            if let Err(e) = write_sweep_csv(&cells, path) {
                eprintln!("error: {e}");
                return EXIT_FAILURE;
            }
        }
        return if cells.iter().all(|c| c.outcome.is_ok()) { EXIT_OK } else { EXIT_FAILURE };
    }

    let log = match run(&problem, &params) {
        Ok(log) => log,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAILURE;
        }
    };
    if let Some(path) = &cli.output {
        if let Err(e) = emit_csv(&log, path) {
            eprintln!("error: {e}");
            return EXIT_FAILURE;
        }
    }
    print!("{}", summary(&log));
    EXIT_OK
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_power_law() {
        let xs: Vec<f64> = (1..20).map(|i| 10f64.powf(i as f64 * 0.3)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x.powf(-0.5)).collect();
        let fit = fit_rate(&xs, &ys, 8).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-12);
        assert_eq!(fit.window, 8);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn constant_data_has_zero_slope() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let fit = fit_rate(&xs, &[3.0; 4], 4).unwrap();
        assert!(fit.slope.abs() < 1e-15);
    }

    #[test]
    fn noisy_synthetic_data() {
        // geometric dofs with 5% multiplicative noise on a known rate
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for truth in [-0.5, -0.35, -1.0] {
            let xs: Vec<f64> = (0..30).map(|i| 10.0 * 1.4f64.powi(i)).collect();
            let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x.powf(truth) * (1.0 + rng.gen_range(-0.05..0.05))).collect();
            let fit = fit_rate(&xs, &ys, 30).unwrap();
            assert!((fit.slope - truth).abs() < 0.03, "{} vs {truth}", fit.slope);
        }
    }

    #[test]
    fn fit_errors() {
        assert!(matches!(fit_rate(&[1.0, 2.0], &[1.0, 2.0], 2), Err(Error::TooFewPoints(2))));
        assert!(fit_rate(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], 4).is_err());
        assert!(fit_rate(&[1.0, 2.0, 3.0], &[1.0, 0.0, 3.0], 3).is_err());
        assert!(fit_rate(&[1.0, 2.0, 3.0], &[1.0, 2.0], 3).is_err());
    }

    #[test]
    fn envelope_of_geometric_sequence() {
        let ys: Vec<f64> = (0..50).map(|i| 3.0 * 0.9f64.powi(i)).collect();
        let env = fit_envelope(&ys).unwrap();
        assert!((env.q - 0.9).abs() < 1e-12);
        assert!((env.constant - 3.0).abs() < 1e-10);
        let bumpy: Vec<f64> = (0..50).map(|i| 0.8f64.powi(i) * if i % 2 == 0 { 2.0 } else { 1.0 }).collect();
        let env = fit_envelope(&bumpy).unwrap();
        for (i, y) in bumpy.iter().enumerate() {
            assert!(*y <= env.constant * env.q.powi(i as i32) * (1.0 + 1e-12));
        }
        assert!(fit_envelope(&[1.0, 0.5]).is_err());
    }

    fn record(i: usize, h1: Option<f64>) -> IterationRecord {
        IterationRecord {
            ell: i / 2,
            k: i % 2 + 1,
            abs_index: i,
            ndofs: 10 + i,
            zeta: 0.1 / (i + 1) as f64,
            eta: std::f64::consts::PI / (i + 3) as f64,
            z_norm: 1.0 / 3.0,
            tilde_z: 0.1 / (i + 1) as f64 + 1.0 / 3.0,
            h1_error: h1,
            cum_cost: 100 * i as u64,
            wall_time_s: 0.25 * i as f64,
        }
    }

    #[test]
    fn csv_round_trip() {
        let records: Vec<IterationRecord> = (0..6).map(|i| record(i, if i % 3 == 0 { None } else { Some(1.0 / 7.0 + i as f64) })).collect();
        let mut buf = Vec::new();
        write_csv(&records, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
        assert_eq!(text.lines().count(), records.len() + 1);
        let back = read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, records);
    }

    #[test]
    fn csv_rejects_bad_input() {
        assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
        let bad = format!("{}\n0,1,0,5,x,1,1,1,,5,0\n", CSV_HEADER.join(","));
        assert!(matches!(read_csv(bad.as_bytes()), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn weighted_cost_of_single_record() {
        let r = IterationRecord { cum_cost: 400, h1_error: Some(0.5), ..record(0, None) };
        assert!((weighted_cost_of(&r).unwrap() - 10.0).abs() < 1e-15);
        assert!(matches!(weighted_cost_of(&record(0, None)), Err(Error::MissingExactSolution)));
    }

    #[test]
    fn cli_defaults() {
        let (p, params) = Cli::parse_args(["recon-afem", "--benchmark", "zshape"]).unwrap().resolve().unwrap();
        assert_eq!(params.delta, optimal_damping(&p.nonlinearity));
        assert_eq!((params.theta, params.lambda, params.max_dofs), (0.5, 0.1, 100_000));
        assert_eq!(params.scalar_product, ScalarProductSpec::H1);
        let cli = Cli::parse_args(["recon-afem", "--benchmark", "lshape", "--scalar-product", "iterate", "--delta", "0.5"]).unwrap();
        let (p, params) = cli.resolve().unwrap();
        assert!(p.exact.is_some());
        assert_eq!((params.delta, params.scalar_product), (0.5, ScalarProductSpec::WeightedIterate));
        assert!(Cli::parse_args(["recon-afem", "--benchmark", "lshape", "--sweep", "--theta", "2"]).unwrap().resolve().is_err());
    }

    #[test]
    fn cli_usage_errors() {
        assert_eq!(cli_main(["recon-afem"]), 2);
        assert_eq!(cli_main(["recon-afem", "--benchmark", "square"]), 2);
        assert_eq!(cli_main(["recon-afem", "--benchmark", "zshape", "--theta", "0"]), 2);
        assert_eq!(cli_main(["recon-afem", "--benchmark", "zshape", "--error-tol", "1e-2"]), 2);
        assert_eq!(cli_main(["recon-afem", "--benchmark", "zshape", "--scalar-product", "mu"]), 2);
        assert_eq!(cli_main(["recon-afem", "--help"]), 0);
    }
}
