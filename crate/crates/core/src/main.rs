use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use extcalc::registry::GEOMETRIES;
use extcalc::verify::{self, convergence, ConfigLayer, KeyValues, Study, Suite, SuiteConfig};
use extcalc::Error;

#[derive(Parser)]
#[command(name = "extcalc", version, about = "Verify tensor calculus identities on level-set submanifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write a JSON report.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Spatial finite-difference step.
        #[arg(long)]
        hx: Option<f64>,
    },
    /// Tabulate residuals under quadrature or step refinement as CSV.
    Convergence {
        #[command(flatten)]
        common: Common,
        /// quadrature or fd; inferred from --orders / --hx when omitted.
        #[arg(long)]
        study: Option<String>,
        /// Quadrature orders, e.g. 4,8,16.
        #[arg(long, value_delimiter = ',')]
        orders: Option<Vec<usize>>,
        /// Spatial steps, e.g. 1e-4,1e-5,1e-6.
        #[arg(long, value_delimiter = ',')]
        hx: Option<Vec<f64>>,
    },
    /// Print the registry.
    List {
        what: Listing,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Listing {
    Suites,
    Geometries,
    Checks,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    geometry: Option<String>,
    /// Geometry parameters as k=v,...
    #[arg(long)]
    geom_params: Option<String>,
    /// Gauss–Legendre points per panel.
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    panels: Option<usize>,
    /// fd2, fd4 or analytic.
    #[arg(long)]
    fd: Option<String>,
    /// Temporal finite-difference step.
    #[arg(long)]
    ht: Option<f64>,
    /// Tolerance overrides as id=value,... (ids may be dotted prefixes).
    #[arg(long)]
    tol: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// TOML file with the same keys as the flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Common {
    fn layer(self, hx: Option<f64>) -> Result<ConfigLayer, Error> {
        let flags = ConfigLayer {
            suite: self.suite,
            geometry: self.geometry,
            geom_params: self.geom_params.map(KeyValues::Text),
            order: self.order,
            panels: self.panels,
            fd: self.fd,
            hx,
            ht: self.ht,
            tol: self.tol.map(KeyValues::Text),
            seed: self.seed,
            out: self.out,
            ..Default::default()
        };
        match &self.config {
            Some(path) => flags.over(ConfigLayer::from_file(path)?),
            None => Ok(flags),
        }
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::Config(_) => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

/// Writes to stdout, treating a closed pipe as success.
fn emit(text: &str) -> Result<(), Error> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => Ok(std::fs::write(path, text)?),
        None => emit(text),
    }
}

fn run_verify(common: Common, hx: Option<f64>) -> ExitCode {
    let config = match common.layer(hx).and_then(SuiteConfig::from_layer) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let report = match verify::run_suite(&config) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let json = match report.to_json() {
        Ok(j) => j,
        Err(e) => return fail(&e),
    };
    if config.out.is_some() {
        let _ = emit(&report.text_summary());
    } else {
        eprint!("{}", report.text_summary());
    }
    if let Err(e) = write_output(&config.out, &json) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run_convergence(common: Common, study: Option<String>, orders: Option<Vec<usize>>, hx: Option<Vec<f64>>) -> ExitCode {
    let result = (|| {
        let mut layer = ConfigLayer { study, orders, hx_steps: hx, ..Default::default() }.over(common.layer(None)?)?;
        let study = match layer.study.take() {
            Some(s) => s.parse()?,
            None => match (&layer.orders, &layer.hx_steps) {
                (Some(_), None) => Study::Quadrature,
                (None, Some(_)) => Study::Fd,
                _ => return Err(Error::Config("give --study, or exactly one of --orders and --hx".into())),
            },
        };
        let values: Vec<f64> = match study {
            Study::Quadrature => layer.orders.take().unwrap_or_default().into_iter().map(|o| o as f64).collect(),
            Study::Fd => layer.hx_steps.take().unwrap_or_default(),
        };
        let config = SuiteConfig::from_layer(layer)?;
        let rows = verify::convergence_table(&config, study, &values)?;
        Ok((config, rows))
    })();
    let (config, rows) = match result {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let csv = match convergence::to_csv(&rows) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    if let Err(e) = write_output(&config.out, &csv) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if rows.iter().all(|r| r.monotone) {
        ExitCode::SUCCESS
    } else {
        eprintln!("residuals do not decrease monotonically");
        ExitCode::from(1)
    }
}

fn run_list(what: Listing, common: Common) -> ExitCode {
    let mut text = String::new();
    match what {
        Listing::Suites => {
            for s in Suite::ALL {
                let _ = writeln!(text, "{:<24} {}", s.name(), s.description());
            }
        }
        Listing::Geometries => {
            for g in GEOMETRIES {
                let _ = writeln!(
                    text,
                    "{:<18} {} (dim {} in R^{}, {})",
                    g.name,
                    g.description,
                    g.manifold_dim,
                    g.ambient_dim,
                    if g.closed { "closed" } else { "with boundary" }
                );
                for (key, default, meaning) in g.params {
                    let _ = writeln!(text, "    {key:<6} = {default:<6} {meaning}");
                }
            }
        }
        Listing::Checks => {
            let checks = match common.layer(None).and_then(SuiteConfig::from_layer).and_then(|c| verify::select_checks(&c)) {
                Ok(c) => c,
                Err(e) => return fail(&e),
            };
            for c in checks {
                let _ = writeln!(text, "{:<58} {}", c.id, c.anchor);
            }
        }
    }
    match emit(&text) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Verify { common, hx } => run_verify(common, hx),
        Command::Convergence { common, study, orders, hx } => run_convergence(common, study, orders, hx),
        Command::List { what, common } => run_list(what, common),
    }
}
