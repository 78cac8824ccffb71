mod args;

use std::fs::{self, File};
use std::io::{self, BufWriter};
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use polybesov::csv::{float, write_csv, CsvTable};
use polybesov::experiments::{
    dilatation_convergence, fixture_matrix, limsup_check, poly_approx, run_matrix_suite,
};
use polybesov::function_file::parse_function;
use polybesov::norms::{monte_carlo_seminorm, norm};
use polybesov::polyfun::PolyFunction;
use polybesov::weights::{check_condition, find_min_k, ConditionCheck};
use polybesov::Domain;

use args::{experiment_options, Cli, Command, OutputArgs};

/// Process outcome: 0 pass, 2 an experiment did not pass, 1 invalid input.
enum Failure {
    Invalid(String),
    NotPassed(String),
}

impl From<polybesov::Error> for Failure {
    fn from(e: polybesov::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn load_function(path: &Path) -> Result<PolyFunction<f64>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", path.display())))?;
    parse_function(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn emit(table: &dyn CsvTable, out: &OutputArgs) -> Outcome {
    let written = match &out.output {
        Some(path) => File::create(path)
            .and_then(|f| write_csv(table, &mut BufWriter::new(f)))
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => write_csv(table, &mut io::stdout().lock())
            .map_err(|e| format!("cannot write to standard output: {e}")),
    };
    written.map_err(Failure::Invalid)
}

/// Ad hoc table for outputs that extend a core report.
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl CsvTable for Table {
    fn header(&self) -> Vec<&'static str> {
        self.header.clone()
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.rows.clone()
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Norm(a) => {
            let spec = a.space.to_spec().map_err(Failure::Invalid)?;
            let f = load_function(&a.function)?;
            let result = norm(&f, &spec, &a.space.quad.to_options())?;
            match a.mc_samples {
                None => emit(&result, &a.out),
                Some(samples) => {
                    let mc = monte_carlo_seminorm(&f, &spec, samples, a.seed)?;
                    let mut header = result.header();
                    header.extend(["mc_seminorm_pow", "mc_std_error"]);
                    let mut rows = result.rows();
                    rows[0].extend([float(mc.value), float(mc.std_error)]);
                    emit(&Table { header, rows }, &a.out)
                }
            }
        }
        Command::Converge(a) => {
            let spec = a.space.to_spec().map_err(Failure::Invalid)?;
            let f = load_function(&a.function)?;
            let mut opts = experiment_options(&a.space.quad);
            opts.threshold = a.threshold;
            let report = dilatation_convergence(&f, &spec, &a.r_grid, &opts)?;
            emit(&report, &a.out)?;
            if report.verdict.is_converged() {
                Ok(())
            } else {
                Err(Failure::NotPassed(format!(
                    "not converged: last error {} vs threshold {} x norm {}",
                    report.rows.last().map_or(f64::NAN, |r| r.err_fullnorm),
                    report.threshold,
                    report.reference.full_norm
                )))
            }
        }
        Command::LimsupCheck(a) => {
            let spec = a.space.to_spec().map_err(Failure::Invalid)?;
            let f = load_function(&a.function)?;
            let mut opts = experiment_options(&a.space.quad);
            opts.limsup_tol = a.tolerance;
            let report = limsup_check(&f, &spec, &a.r_grid, &opts)?;
            emit(&report, &a.out)?;
            if report.certified {
                Ok(())
            } else {
                Err(Failure::NotPassed(format!(
                    "not certified: margins dz {} dzbar {}",
                    report.margin_dz, report.margin_dzbar
                )))
            }
        }
        Command::Approx(a) => {
            let spec = a.space.to_spec().map_err(Failure::Invalid)?;
            let f = load_function(&a.function)?;
            let opts = experiment_options(&a.space.quad);
            let report = poly_approx(&f, &spec, a.r, &a.m_grid, &opts)?;
            emit(&report, &a.out)?;
            if report.verdict.is_converged() {
                Ok(())
            } else {
                Err(Failure::NotPassed(format!(
                    "truncation not exhausted: ||f - f_r|| = {}",
                    report.dilation_error
                )))
            }
        }
        Command::CheckWeight(a) => {
            let domain = Domain::from(a.domain);
            let w = a.weight.to_weight(domain);
            let grid = a.grid();
            match a.k {
                Some(k) => match check_condition(&w, domain, k, a.r0, &grid)? {
                    ConditionCheck::Holds(witness) => emit(&witness, &a.out),
                    ConditionCheck::Diverges { k, ratio, at } => Err(Failure::NotPassed(format!(
                        "condition fails for k = {k}: ratio {ratio} at z = {}, r = {}",
                        at.0, at.1
                    ))),
                },
                None => match find_min_k(&w, domain, a.k_max, a.r0, &grid)? {
                    Some(witness) => emit(&witness, &a.out),
                    None => Err(Failure::NotPassed(format!(
                        "no k <= {} satisfies the condition for {w}",
                        a.k_max
                    ))),
                },
            }
        }
        Command::Suite(a) => {
            let mut opts = experiment_options(&a.quad);
            opts.threshold = a.threshold;
            let cells = fixture_matrix::<f64>()?;
            let summary = run_matrix_suite(&cells, &a.r_grid, &opts)?;
            emit(&summary, &a.out)?;
            let failed = summary.failures().count();
            if failed == 0 {
                Ok(())
            } else {
                Err(Failure::NotPassed(format!(
                    "{failed} of {} cells did not converge",
                    summary.rows.len()
                )))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let line = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("polybesov: {}", line.trim_start_matches("error: "));
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("polybesov: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::NotPassed(msg)) => {
            eprintln!("polybesov: {msg}");
            ExitCode::from(2)
        }
    }
}
