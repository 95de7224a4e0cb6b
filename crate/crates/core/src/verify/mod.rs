//! Batch verification of the calculus on built-in geometries.
//!
//! A suite is a list of named checks. Each check compares two sides of an
//! identity (or a computed value against a closed form) and passes when the
//! selected residual is within its tolerance.

pub mod config;
pub mod convergence;
pub mod report;
mod suites;

use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::differential::{EngineConfig, FdMode};
use crate::error::{Error, Result};
use crate::integration::QuadratureSpec;
use crate::registry::{self, Setup};

pub use config::{parse_kv, ConfigLayer, KeyValues, Suite, SuiteConfig};
pub use convergence::{convergence_table, ConvergenceRow, Study};
pub use report::{Bound, CheckRecord, Metric, Outcome, VerificationReport, Worst};

type Runner = Box<dyn Fn(&Ctx) -> Result<Outcome> + Send + Sync>;

pub struct Check {
    pub id: String,
    pub anchor: &'static str,
    pub geometry: Option<&'static str>,
    pub metric: Metric,
    pub bound: Bound,
    pub tolerance: f64,
    run: Runner,
}

impl Check {
    pub(crate) fn new(
        id: impl Into<String>,
        anchor: &'static str,
        geometry: Option<&'static str>,
        tolerance: f64,
        run: impl Fn(&Ctx) -> Result<Outcome> + Send + Sync + 'static,
    ) -> Self {
        Self {
            id: id.into(),
            anchor,
            geometry,
            metric: Metric::Abs,
            bound: Bound::AtMost,
            tolerance,
            run: Box::new(run),
        }
    }

    pub(crate) fn rel(mut self) -> Self {
        self.metric = Metric::Rel;
        self
    }

    pub(crate) fn at_least(mut self) -> Self {
        self.bound = Bound::AtLeast;
        self
    }
}

impl std::fmt::Debug for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Check")
            .field("id", &self.id)
            .field("geometry", &self.geometry)
            .field("tolerance", &self.tolerance)
            .finish()
    }
}

/// What a check sees while it runs.
pub struct Ctx<'a> {
    config: &'a SuiteConfig,
    seed: u64,
}

impl Ctx<'_> {
    pub fn engine(&self) -> EngineConfig {
        self.config.engine()
    }

    pub fn mode(&self) -> FdMode {
        self.config.fd
    }

    pub fn quadrature(&self) -> QuadratureSpec {
        self.config.quadrature
    }

    /// Generator seeded from the run seed and the check id.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// Parameters of `name`, with overrides when it is the selected geometry.
    pub fn params(&self, name: &str) -> Result<BTreeMap<String, f64>> {
        registry::resolve_params(name, self.overrides(name))
    }

    pub fn setup(&self, name: &str) -> Result<Setup> {
        self.setup_with(name, self.quadrature())
    }

    pub fn setup_with(&self, name: &str, quadrature: QuadratureSpec) -> Result<Setup> {
        registry::build(name, self.overrides(name), self.engine(), quadrature)
    }

    fn overrides(&self, name: &str) -> &BTreeMap<String, f64> {
        static EMPTY: BTreeMap<String, f64> = BTreeMap::new();
        if self.config.geometry.as_deref() == Some(name) {
            &self.config.geom_params
        } else {
            &EMPTY
        }
    }
}

fn id_hash(id: &str) -> u64 {
    id.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Checks selected by the configuration, in report order.
pub fn select_checks(config: &SuiteConfig) -> Result<Vec<Check>> {
    let selected = config.geometry.as_deref();
    if let Some(g) = selected {
        registry::info(g)?;
    }
    let mut checks = Vec::new();
    for suite in config.suite.members() {
        checks.extend(suites::build(suite, selected, config.fd));
    }
    checks.retain(|c| match (selected, c.geometry) {
        (Some(g), Some(cg)) => g == cg,
        _ => true,
    });
    if checks.is_empty() {
        return Err(Error::Config(format!(
            "suite {} has no checks on geometry {}",
            config.suite,
            selected.unwrap_or("-")
        )));
    }
    Ok(checks)
}

/// Most specific tolerance override for `id`: exact match or dotted prefix.
fn override_for<'a>(tolerances: &'a BTreeMap<String, f64>, id: &str) -> Option<&'a f64> {
    tolerances
        .iter()
        .filter(|(k, _)| id == k.as_str() || (id.starts_with(k.as_str()) && id[k.len()..].starts_with('.')))
        .max_by_key(|(k, _)| k.len())
        .map(|(_, v)| v)
}

fn run_check(check: &Check, config: &SuiteConfig) -> CheckRecord {
    let ctx = Ctx { config, seed: config.seed ^ id_hash(&check.id) };
    let tolerance = override_for(&config.tolerances, &check.id).copied().unwrap_or(check.tolerance);
    let (outcome, error) = match (check.run)(&ctx) {
        Ok(o) => (o, None),
        Err(e) => (Outcome { lhs: Vec::new(), rhs: Vec::new(), abs: f64::NAN, rel: f64::NAN }, Some(e.to_string())),
    };
    let mut record = CheckRecord {
        id: check.id.clone(),
        anchor: check.anchor.to_string(),
        geometry: check.geometry.map(str::to_string),
        lhs: outcome.lhs,
        rhs: outcome.rhs,
        abs: outcome.abs,
        rel: outcome.rel,
        metric: check.metric,
        bound: check.bound,
        tolerance,
        pass: false,
        error,
    };
    let v = record.measured();
    record.pass = record.error.is_none()
        && v.is_finite()
        && match check.bound {
            Bound::AtMost => v <= tolerance,
            Bound::AtLeast => v >= tolerance,
        };
    record
}

/// Runs the configured suite. Configuration problems are errors; failing checks are recorded.
pub fn run_suite(config: &SuiteConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let checks = select_checks(config)?;
    for key in config.tolerances.keys() {
        if !checks.iter().any(|c| override_for(&BTreeMap::from([(key.clone(), 1.0)]), &c.id).is_some()) {
            return Err(Error::Config(format!("tolerance key '{key}' matches no selected check")));
        }
    }
    let records: Vec<CheckRecord> = checks.par_iter().map(|c| run_check(c, config)).collect();
    Ok(VerificationReport::new(config.clone(), records, start.elapsed().as_secs_f64()))
}
