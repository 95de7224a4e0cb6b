//! Check records and the JSON verification report.

use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::integration::Residual;

use super::config::SuiteConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Abs,
    Rel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// Passes when the metric is at most the tolerance.
    AtMost,
    /// Passes when the metric is at least the tolerance (a quantity that must not vanish).
    AtLeast,
}

/// Values produced by one check.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub abs: f64,
    pub rel: f64,
}

impl Outcome {
    pub fn vectors(lhs: Vec<f64>, rhs: Vec<f64>) -> Self {
        let abs = lhs.iter().zip(&rhs).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
        let rel = abs / 1f64.max(norm(&lhs).max(norm(&rhs)));
        Self { lhs, rhs, abs, rel }
    }

    pub fn scalars(lhs: f64, rhs: f64) -> Self {
        Self::vectors(vec![lhs], vec![rhs])
    }

    pub fn residual(r: &Residual) -> Self {
        Self { lhs: r.lhs.as_slice().to_vec(), rhs: r.rhs.as_slice().to_vec(), abs: r.abs, rel: r.rel }
    }

    /// A worst-case residual reported against zero.
    pub fn max_error(worst: f64) -> Self {
        Self { lhs: vec![worst], rhs: vec![0.0], abs: worst, rel: worst }
    }

    /// A measured quantity with no reference value.
    pub fn value(v: f64) -> Self {
        Self { lhs: vec![v], rhs: Vec::new(), abs: v, rel: v }
    }
}

/// Keeps the comparison with the largest error over many sample points.
#[derive(Clone, Debug, Default)]
pub struct Worst {
    best: Option<Outcome>,
    max_abs: f64,
    max_rel: f64,
    nan: bool,
}

impl Worst {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `lhs` against `rhs`; the relative error divides by `max(scale, tiny)`.
    pub fn push(&mut self, lhs: &[f64], rhs: &[f64], scale: f64) {
        let abs = lhs.iter().zip(rhs).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let rel = abs / scale.max(f64::MIN_POSITIVE);
        let worse = !(rel <= self.max_rel) || self.best.is_none();
        self.nan |= abs.is_nan() || rel.is_nan();
        self.max_abs = self.max_abs.max(abs);
        self.max_rel = self.max_rel.max(rel);
        if worse {
            self.best = Some(Outcome { lhs: lhs.to_vec(), rhs: rhs.to_vec(), abs, rel });
        }
    }

    pub fn finish(self) -> Outcome {
        match self.best {
            Some(o) if self.nan => Outcome { abs: f64::NAN, rel: f64::NAN, ..o },
            Some(mut o) => {
                o.abs = self.max_abs;
                o.rel = self.max_rel;
                o
            }
            None => Outcome::max_error(0.0),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub id: String,
    /// The identity or example being checked.
    pub anchor: String,
    pub geometry: Option<String>,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub abs: f64,
    pub rel: f64,
    pub metric: Metric,
    pub bound: Bound,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckRecord {
    pub fn measured(&self) -> f64 {
        match self.metric {
            Metric::Abs => self.abs,
            Metric::Rel => self.rel,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub config: SuiteConfig,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
    pub pass: bool,
    pub wall_time_s: f64,
}

impl VerificationReport {
    pub fn new(config: SuiteConfig, checks: Vec<CheckRecord>, wall_time_s: f64) -> Self {
        let passed = checks.iter().filter(|c| c.pass).count();
        let summary = Summary { total: checks.len(), passed, failed: checks.len() - passed };
        let pass = summary.failed == 0;
        Self { schema: SCHEMA_VERSION, config, checks, summary, pass, wall_time_s }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| crate::Error::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    /// One line per check.
    pub fn text_summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let cmp = match c.bound {
                Bound::AtMost => "<=",
                Bound::AtLeast => ">=",
            };
            out.push_str(&format!(
                "{} {:<58} {}={:.3e} {} {:.1e}",
                if c.pass { "PASS" } else { "FAIL" },
                c.id,
                match c.metric {
                    Metric::Abs => "abs",
                    Metric::Rel => "rel",
                },
                c.measured(),
                cmp,
                c.tolerance
            ));
            if let Some(e) = &c.error {
                out.push_str(&format!("  ({e})"));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "{} of {} checks passed in {:.2} s\n",
            self.summary.passed, self.summary.total, self.wall_time_s
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_keeps_largest_relative_error() {
        let mut w = Worst::new();
        w.push(&[1.0], &[1.1], 1.0);
        w.push(&[5.0], &[5.2], 10.0);
        w.push(&[0.0], &[0.05], 0.1);
        let o = w.finish();
        assert_eq!(o.lhs, vec![0.0]);
        assert!((o.rel - 0.5).abs() < 1e-12);
        assert!((o.abs - 0.2).abs() < 1e-12);

        let mut w = Worst::new();
        w.push(&[f64::NAN], &[0.0], 1.0);
        w.push(&[0.0], &[0.0], 1.0);
        assert!(w.finish().abs.is_nan());
    }

    #[test]
    fn outcome_relative_uses_unit_floor() {
        let o = Outcome::scalars(1e-3, 2e-3);
        assert_eq!(o.rel, o.abs);
        let o = Outcome::scalars(100.0, 101.0);
        assert!((o.rel - 1.0 / 101.0).abs() < 1e-15);
    }
}
