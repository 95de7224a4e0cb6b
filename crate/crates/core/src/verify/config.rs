//! Suite configuration: defaults, config files and flag overrides.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::differential::{EngineConfig, FdMode};
use crate::error::{Error, Result};
use crate::integration::QuadratureSpec;
use crate::registry;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    TensorAlgebra,
    Projection,
    DifferentialIdentities,
    Stokes,
    Curl,
    Laplacian,
    Euler,
    Stress,
    Evolving,
    All,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::TensorAlgebra,
        Suite::Projection,
        Suite::DifferentialIdentities,
        Suite::Stokes,
        Suite::Curl,
        Suite::Laplacian,
        Suite::Euler,
        Suite::Stress,
        Suite::Evolving,
        Suite::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::TensorAlgebra => "tensor-algebra",
            Suite::Projection => "projection",
            Suite::DifferentialIdentities => "differential-identities",
            Suite::Stokes => "stokes",
            Suite::Curl => "curl",
            Suite::Laplacian => "laplacian",
            Suite::Euler => "euler",
            Suite::Stress => "stress",
            Suite::Evolving => "evolving",
            Suite::All => "all",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Suite::TensorAlgebra => "insertion, contraction and bigcirc identities on random tensors",
            Suite::Projection => "recursive tangential projection against brute force",
            Suite::DifferentialIdentities => "submanifold gradient, divergence, curvature and product rules",
            Suite::Stokes => "Stokes theorem, path integrals, circulation and integration by parts",
            Suite::Curl => "surface curl examples, curl-grad and div-curl identities, circulation",
            Suite::Laplacian => "extrinsic and covariant Laplacians and the weak form",
            Suite::Euler => "steady Euler flows, momentum and force balance",
            Suite::Stress => "stress force and torque, generator identities, equilibrium constraints",
            Suite::Evolving => "material derivatives, transport and the Dirichlet energy rate",
            Suite::All => "every suite above",
        }
    }

    /// Suites run by this selection.
    pub fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => Suite::ALL[..9].to_vec(),
            s => vec![s],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite '{s}' (try `list suites`)")))
    }
}

/// Parses `k=v,k=v` into a map of reals.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value, got '{item}'")))?;
        let value: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("value of '{}' is not a number: '{}'", k.trim(), v.trim())))?;
        out.insert(k.trim().to_string(), value);
    }
    Ok(out)
}

/// Key/value pairs given either as `"k=v,..."` or as a table.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum KeyValues {
    Text(String),
    Table(BTreeMap<String, f64>),
}

impl KeyValues {
    pub fn into_map(self) -> Result<BTreeMap<String, f64>> {
        match self {
            KeyValues::Text(s) => parse_kv(&s),
            KeyValues::Table(m) => Ok(m),
        }
    }
}

/// One layer of settings; unset fields fall through to the layer below.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ConfigLayer {
    pub suite: Option<String>,
    pub geometry: Option<String>,
    pub geom_params: Option<KeyValues>,
    pub order: Option<usize>,
    pub panels: Option<usize>,
    pub fd: Option<String>,
    pub hx: Option<f64>,
    pub ht: Option<f64>,
    pub tol: Option<KeyValues>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    /// Quadrature orders of a convergence study.
    pub orders: Option<Vec<usize>>,
    /// Spatial steps of a convergence study.
    pub hx_steps: Option<Vec<f64>>,
    pub study: Option<String>,
}

impl ConfigLayer {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// `self` over `below`; maps merge key by key.
    pub fn over(self, below: ConfigLayer) -> Result<ConfigLayer> {
        fn merge(top: Option<KeyValues>, below: Option<KeyValues>) -> Result<Option<KeyValues>> {
            Ok(match (top, below) {
                (None, b) => b,
                (t, None) => t,
                (Some(t), Some(b)) => {
                    let mut m = b.into_map()?;
                    m.extend(t.into_map()?);
                    Some(KeyValues::Table(m))
                }
            })
        }
        Ok(ConfigLayer {
            suite: self.suite.or(below.suite),
            geometry: self.geometry.or(below.geometry),
            geom_params: merge(self.geom_params, below.geom_params)?,
            order: self.order.or(below.order),
            panels: self.panels.or(below.panels),
            fd: self.fd.or(below.fd),
            hx: self.hx.or(below.hx),
            ht: self.ht.or(below.ht),
            tol: merge(self.tol, below.tol)?,
            seed: self.seed.or(below.seed),
            out: self.out.or(below.out),
            orders: self.orders.or(below.orders),
            hx_steps: self.hx_steps.or(below.hx_steps),
            study: self.study.or(below.study),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub geometry: Option<String>,
    pub geom_params: BTreeMap<String, f64>,
    pub quadrature: QuadratureSpec,
    pub fd: FdMode,
    pub hx: Option<f64>,
    pub ht: Option<f64>,
    /// Tolerance overrides keyed by check id or id prefix.
    pub tolerances: BTreeMap<String, f64>,
    pub seed: u64,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            suite: Suite::All,
            geometry: None,
            geom_params: BTreeMap::new(),
            quadrature: QuadratureSpec::default(),
            fd: FdMode::Fd2,
            hx: None,
            ht: None,
            tolerances: BTreeMap::new(),
            seed: 1,
            out: None,
        }
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Config(format!("{name} must be positive and finite, got {v}")))
    }
}

impl SuiteConfig {
    /// Defaults overridden by `layer`, validated.
    pub fn from_layer(layer: ConfigLayer) -> Result<Self> {
        let d = SuiteConfig::default();
        let suite = match layer.suite {
            Some(s) => s.parse()?,
            None => d.suite,
        };
        let fd = match layer.fd {
            Some(s) => s.parse()?,
            None => d.fd,
        };
        let quadrature = QuadratureSpec {
            order: layer.order.unwrap_or(d.quadrature.order),
            panels: layer.panels.unwrap_or(d.quadrature.panels),
        };
        if !(1..=256).contains(&quadrature.order) {
            return Err(Error::Config(format!("order must be in 1..=256, got {}", quadrature.order)));
        }
        if quadrature.panels == 0 {
            return Err(Error::Config("panels must be positive".into()));
        }
        let hx = layer.hx.map(|v| positive("hx", v)).transpose()?;
        let ht = layer.ht.map(|v| positive("ht", v)).transpose()?;
        let tolerances = layer.tol.map(KeyValues::into_map).transpose()?.unwrap_or_default();
        for (k, v) in &tolerances {
            positive(&format!("tolerance {k}"), *v)?;
        }
        let geom_params = layer.geom_params.map(KeyValues::into_map).transpose()?.unwrap_or_default();
        match &layer.geometry {
            Some(g) => {
                registry::resolve_params(g, &geom_params)?;
            }
            None if !geom_params.is_empty() => {
                return Err(Error::Config("geometry parameters given without a geometry".into()));
            }
            None => {}
        }
        Ok(Self {
            suite,
            geometry: layer.geometry,
            geom_params,
            quadrature,
            fd,
            hx,
            ht,
            tolerances,
            seed: layer.seed.unwrap_or(d.seed),
            out: layer.out,
        })
    }

    pub fn engine(&self) -> EngineConfig {
        EngineConfig { mode: self.fd, hx: self.hx, ht: self.ht, ..EngineConfig::default() }
    }
}
