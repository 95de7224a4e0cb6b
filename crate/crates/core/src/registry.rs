//! Named geometries with default parameters and matching atlases.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::differential::EngineConfig;
use crate::error::{Error, Result};
use crate::geometry::{self, Geometry};
use crate::integration::{self, Atlas, QuadratureSpec};

pub struct GeometryInfo {
    pub name: &'static str,
    pub description: &'static str,
    pub ambient_dim: usize,
    pub manifold_dim: usize,
    pub closed: bool,
    /// `(key, default, meaning)`.
    pub params: &'static [(&'static str, f64, &'static str)],
}

pub const GEOMETRIES: &[GeometryInfo] = &[
    GeometryInfo {
        name: "circle2d",
        description: "circle |x| = R in the plane",
        ambient_dim: 2,
        manifold_dim: 1,
        closed: true,
        params: &[("R", 1.0, "radius")],
    },
    GeometryInfo {
        name: "circle3d",
        description: "circle of radius R in the plane z = 0 of R^3 (codimension 2)",
        ambient_dim: 3,
        manifold_dim: 1,
        closed: true,
        params: &[("R", 1.0, "radius")],
    },
    GeometryInfo {
        name: "sphere",
        description: "closed sphere |x| = R in R^3",
        ambient_dim: 3,
        manifold_dim: 2,
        closed: true,
        params: &[("R", 1.0, "radius")],
    },
    GeometryInfo {
        name: "hemisphere",
        description: "upper half z >= 0 of the sphere |x| = R, bounded by the equator",
        ambient_dim: 3,
        manifold_dim: 2,
        closed: false,
        params: &[("R", 1.0, "radius")],
    },
    GeometryInfo {
        name: "plane_disk",
        description: "disk of radius R in the plane z = 0",
        ambient_dim: 3,
        manifold_dim: 2,
        closed: false,
        params: &[("R", 1.0, "disk radius")],
    },
    GeometryInfo {
        name: "torus",
        description: "closed torus with major radius R and tube radius r",
        ambient_dim: 3,
        manifold_dim: 2,
        closed: true,
        params: &[("R", 2.0, "major radius"), ("r", 0.5, "tube radius")],
    },
    GeometryInfo {
        name: "torus_patch",
        description: "angle rectangle [a0,a1] x [b0,b1] on the torus, four boundary edges",
        ambient_dim: 3,
        manifold_dim: 2,
        closed: false,
        params: &[
            ("R", 2.0, "major radius"),
            ("r", 0.5, "tube radius"),
            ("a0", 0.2, "first toroidal angle"),
            ("a1", 1.5, "last toroidal angle"),
            ("b0", 0.3, "first poloidal angle"),
            ("b1", 2.0, "last poloidal angle"),
        ],
    },
    GeometryInfo {
        name: "helix_segment",
        description: "helix (a cos s, a sin s, b s) for s in [0, 2 pi turns]",
        ambient_dim: 3,
        manifold_dim: 1,
        closed: false,
        params: &[("a", 1.0, "radius"), ("b", 0.25, "pitch per radian"), ("turns", 1.25, "number of turns")],
    },
    GeometryInfo {
        name: "expanding_sphere",
        description: "sphere of radius R0 + c t sampled at time t",
        ambient_dim: 3,
        manifold_dim: 2,
        closed: true,
        params: &[("R0", 1.0, "initial radius"), ("c", 0.1, "expansion speed"), ("t", 0.0, "sampling time")],
    },
    GeometryInfo {
        name: "rotating_plane",
        description: "disk of radius R in the plane with normal (sin wt, 0, cos wt), sampled at time t",
        ambient_dim: 3,
        manifold_dim: 2,
        closed: false,
        params: &[("omega", 0.8, "angular speed"), ("R", 1.0, "disk radius"), ("t", 0.3, "sampling time")],
    },
];

pub fn info(name: &str) -> Result<&'static GeometryInfo> {
    GEOMETRIES
        .iter()
        .find(|g| g.name == name)
        .ok_or_else(|| Error::Config(format!("unknown geometry '{name}' (try `list geometries`)")))
}

/// A geometry with resolved parameters and an atlas at its sampling time.
#[derive(Clone, Debug)]
pub struct Setup {
    pub name: &'static str,
    pub params: BTreeMap<String, f64>,
    pub geometry: Geometry,
    pub atlas: Atlas,
}

impl Setup {
    pub fn param(&self, key: &str) -> f64 {
        self.params[key]
    }

    pub fn time(&self) -> f64 {
        self.atlas.time()
    }
}

/// Defaults merged with `overrides`; unknown keys are rejected.
pub fn resolve_params(name: &str, overrides: &BTreeMap<String, f64>) -> Result<BTreeMap<String, f64>> {
    let info = info(name)?;
    let mut params: BTreeMap<String, f64> = info.params.iter().map(|(k, v, _)| (k.to_string(), *v)).collect();
    for (k, v) in overrides {
        if !params.contains_key(k) {
            let known: Vec<&str> = info.params.iter().map(|p| p.0).collect();
            return Err(Error::Config(format!("geometry {name} has no parameter '{k}' (known: {})", known.join(", "))));
        }
        if !v.is_finite() {
            return Err(Error::Config(format!("parameter {k} must be finite")));
        }
        params.insert(k.clone(), *v);
    }
    for key in POSITIVE {
        if let Some(&v) = params.get(*key) {
            if v <= 0.0 {
                return Err(Error::Config(format!("parameter {key} of {name} must be positive, got {v}")));
            }
        }
    }
    let p = |k: &str| params[k];
    match name {
        "expanding_sphere" if p("R0") + p("c") * p("t") <= 0.0 => {
            return Err(Error::Config("expanding_sphere has collapsed: R0 + c t must be positive".into()));
        }
        "torus" | "torus_patch" if p("r") >= p("R") => {
            return Err(Error::Config(format!("{name} requires r < R")));
        }
        "torus_patch" => {
            let (a0, a1, b0, b1) = (p("a0"), p("a1"), p("b0"), p("b1"));
            if !(0.0 <= a0 && a0 < a1 && a1 <= 2.0 * PI && 0.0 <= b0 && b0 < b1 && b1 <= 2.0 * PI) {
                return Err(Error::Config("torus_patch angles must satisfy 0 <= a0 < a1 <= 2pi, 0 <= b0 < b1 <= 2pi".into()));
            }
        }
        _ => {}
    }
    Ok(params)
}

/// Lengths and counts; speeds, rates, angles and times may take any sign.
const POSITIVE: &[&str] = &["R", "r", "R0", "a", "turns"];

pub fn build(name: &str, overrides: &BTreeMap<String, f64>, engine: EngineConfig, quadrature: QuadratureSpec) -> Result<Setup> {
    let info = info(name)?;
    let params = resolve_params(name, overrides)?;
    let p = |k: &str| params[k];
    let (geometry, atlas) = match name {
        "circle2d" => {
            let g = geometry::circle2d(p("R"), engine)?;
            let a = integration::circle_atlas(&g, p("R"), quadrature)?;
            (g, a)
        }
        "circle3d" => {
            let g = geometry::circle3d(p("R"), engine)?;
            let a = integration::circle_atlas(&g, p("R"), quadrature)?;
            (g, a)
        }
        "sphere" => {
            let g = geometry::sphere(p("R"), engine)?;
            let a = integration::sphere_atlas(&g, p("R"), quadrature)?;
            (g, a)
        }
        "hemisphere" => {
            let g = geometry::hemisphere(p("R"), engine)?;
            let a = integration::hemisphere_atlas(&g, p("R"), quadrature)?;
            (g, a)
        }
        "plane_disk" => {
            let g = geometry::plane_disk(p("R"), engine)?;
            let a = integration::disk_atlas(&g, p("R"), quadrature)?;
            (g, a)
        }
        "torus" => {
            let g = geometry::torus(p("R"), p("r"), engine)?;
            let a = integration::torus_atlas(&g, p("R"), p("r"), None, quadrature)?;
            (g, a)
        }
        "torus_patch" => {
            let (a0, a1, b0, b1) = (p("a0"), p("a1"), p("b0"), p("b1"));
            let g = geometry::torus(p("R"), p("r"), engine)?;
            let a = integration::torus_atlas(&g, p("R"), p("r"), Some(([a0, b0], [a1, b1])), quadrature)?;
            (g, a)
        }
        "helix_segment" => {
            let g = geometry::helix_segment(p("a"), p("b"), p("turns"), engine)?;
            let a = integration::helix_atlas(&g, p("a"), p("b"), p("turns"), quadrature)?;
            (g, a)
        }
        "expanding_sphere" => {
            let g = geometry::expanding_sphere(p("R0"), p("c"), engine)?;
            let a = integration::expanding_sphere_atlas(&g, p("R0"), p("c"), p("t"), quadrature)?;
            (g, a)
        }
        "rotating_plane" => {
            let g = geometry::rotating_plane(p("omega"), engine)?;
            let a = integration::rotating_disk_atlas(&g, p("omega"), p("R"), p("t"), quadrature)?;
            (g, a)
        }
        _ => unreachable!("registry entry without builder"),
    };
    Ok(Setup { name: info.name, params, geometry, atlas })
}

/// Closed-form area (or length) of the geometry at its sampling time.
pub fn exact_measure(name: &str, params: &BTreeMap<String, f64>) -> Result<f64> {
    let p = |k: &str| params[k];
    info(name)?;
    Ok(match name {
        "circle2d" | "circle3d" => 2.0 * PI * p("R"),
        "sphere" => 4.0 * PI * p("R").powi(2),
        "hemisphere" => 2.0 * PI * p("R").powi(2),
        "plane_disk" | "rotating_plane" => PI * p("R").powi(2),
        "torus" => 4.0 * PI * PI * p("R") * p("r"),
        "torus_patch" => p("r") * (p("a1") - p("a0")) * (p("R") * (p("b1") - p("b0")) + p("r") * (p("b1").sin() - p("b0").sin())),
        "helix_segment" => 2.0 * PI * p("turns") * p("a").hypot(p("b")),
        "expanding_sphere" => 4.0 * PI * (p("R0") + p("c") * p("t")).powi(2),
        _ => unreachable!("registry entry without measure"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::differential::FdMode;

    #[test]
    fn every_entry_builds() {
        let quad = QuadratureSpec { order: 4, panels: 1 };
        for g in GEOMETRIES {
            let s = build(g.name, &BTreeMap::new(), EngineConfig::new(FdMode::Fd2), quad).unwrap();
            let fine = s.atlas.with_quadrature(QuadratureSpec { order: 24, panels: 2 }).unwrap();
            let exact = exact_measure(g.name, &s.params).unwrap();
            assert!((fine.area() - exact).abs() < 1e-10 * exact, "{}", g.name);
            assert_eq!(s.geometry.dim(), g.ambient_dim);
            assert_eq!(s.geometry.manifold_dim(), g.manifold_dim);
            assert_eq!(s.atlas.has_boundary(), !g.closed, "{}", g.name);
        }
    }

    #[test]
    fn rejects_bad_names_and_keys() {
        for (g, k, v) in [("sphere", "R", -1.0), ("torus", "r", 0.0), ("helix_segment", "turns", -2.0), ("expanding_sphere", "t", -20.0)] {
            assert!(matches!(resolve_params(g, &BTreeMap::from([(k.to_string(), v)])), Err(Error::Config(_))), "{g} {k}={v}");
        }
        assert!(resolve_params("rotating_plane", &BTreeMap::from([("omega".to_string(), -0.5)])).is_ok());
        let quad = QuadratureSpec::default();
        assert!(matches!(build("klein_bottle", &BTreeMap::new(), EngineConfig::default(), quad), Err(Error::Config(_))));
        let mut o = BTreeMap::new();
        o.insert("radius".to_string(), 2.0);
        assert!(matches!(build("sphere", &o, EngineConfig::default(), quad), Err(Error::Config(_))));
        o.clear();
        o.insert("r".to_string(), 3.0);
        assert!(matches!(resolve_params("torus", &o), Err(Error::Config(_))));
        o.insert("R".to_string(), 4.0);
        assert!(resolve_params("torus", &o).is_ok());
        assert!(matches!(resolve_params("torus_patch", &BTreeMap::from([("a1".to_string(), 7.0)])), Err(Error::Config(_))));
    }
}
