//! Built-in geometries with signed-distance level functions where possible.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::differential::engine::EngineConfig;
use crate::error::{Error, Result};
use crate::field::TensorField;

use super::{Geometry, LevelSetGeometry};

type ScalarFn = Arc<dyn Fn(&[f64], f64) -> f64 + Send + Sync>;
type VectorFn = Arc<dyn Fn(&[f64], f64) -> Vec<f64> + Send + Sync>;

/// A level function with its gradient, Hessian and optional time derivatives.
pub struct LevelSpec {
    pub dim: usize,
    pub label: String,
    pub value: ScalarFn,
    pub gradient: VectorFn,
    pub hessian: VectorFn,
    /// `(∂_t d, ∂_t ∇d)`; `None` means the level function is static.
    pub time: Option<(ScalarFn, Option<VectorFn>)>,
}

impl LevelSpec {
    pub fn stationary(
        dim: usize,
        label: &str,
        value: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        hessian: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            label: label.into(),
            value: Arc::new(move |x, _| value(x)),
            gradient: Arc::new(move |x, _| gradient(x)),
            hessian: Arc::new(move |x, _| hessian(x)),
            time: None,
        }
    }

    pub fn into_field(self) -> Result<TensorField> {
        let dim = self.dim;
        let (dt, grad_dt) = match self.time {
            Some((dt, g)) => (Some(dt), g),
            None => (None, None),
        };
        let grad_static = grad_dt.is_none();
        let hess = {
            let h = self.hessian.clone();
            let b = TensorField::builder(dim, 2, move |x, t| h(x, t)).label(format!("hess {}", self.label));
            if grad_static { b.stationary() } else { b }.build()?
        };
        let grad = {
            let g = self.gradient.clone();
            let mut b = TensorField::builder(dim, 1, move |x, t| g(x, t))
                .gradient(hess)
                .label(format!("grad {}", self.label));
            if let Some(gt) = grad_dt {
                let gt = gt.clone();
                b = b.time_derivative(TensorField::from_fn(dim, 1, move |x, t| gt(x, t))?);
            } else {
                b = b.stationary();
            }
            b.build()?
        };
        let v = self.value.clone();
        let mut b = TensorField::builder(dim, 0, move |x, t| vec![v(x, t)])
            .gradient(grad)
            .label(self.label.clone());
        match dt {
            Some(dt) => {
                b = b.time_derivative(TensorField::scalar_fn(dim, move |x, t| dt(x, t))?);
            }
            None => b = b.stationary(),
        }
        b.build()
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|c| c * c).sum::<f64>().sqrt()
}

fn positive(name: &str, value: f64) -> Result<()> {
    if !(value > 0.0 && value.is_finite()) {
        return Err(Error::Config(format!("parameter {name} must be positive, got {value}")));
    }
    Ok(())
}

/// `|x| − R` in any dimension.
fn radial_level(dim: usize, radius: ScalarFn, dr: Option<ScalarFn>, label: &str) -> LevelSpec {
    let r = radius.clone();
    LevelSpec {
        dim,
        label: label.into(),
        value: Arc::new(move |x, t| norm(x) - r(x, t)),
        gradient: Arc::new(|x, _| {
            let s = norm(x);
            x.iter().map(|c| c / s).collect()
        }),
        hessian: Arc::new(move |x, _| {
            let s = norm(x);
            let mut h = vec![0.0; dim * dim];
            for i in 0..dim {
                for j in 0..dim {
                    let delta = if i == j { 1.0 } else { 0.0 };
                    h[i * dim + j] = (delta - x[i] * x[j] / (s * s)) / s;
                }
            }
            h
        }),
        time: dr.map(|dr| -> (ScalarFn, Option<VectorFn>) { (Arc::new(move |x, t| -dr(x, t)), None) }),
    }
}

/// `sqrt(x² + y²) − R` in R³ (cylinder about the z-axis).
fn cylinder_level(radius: f64) -> LevelSpec {
    LevelSpec::stationary(
        3,
        "rho - a",
        move |x| x[0].hypot(x[1]) - radius,
        |x| {
            let rho = x[0].hypot(x[1]);
            vec![x[0] / rho, x[1] / rho, 0.0]
        },
        |x| {
            let rho = x[0].hypot(x[1]);
            let r3 = rho * rho * rho;
            vec![
                x[1] * x[1] / r3,
                -x[0] * x[1] / r3,
                0.0,
                -x[0] * x[1] / r3,
                x[0] * x[0] / r3,
                0.0,
                0.0,
                0.0,
                0.0,
            ]
        },
    )
}

fn plane_level(dim: usize, axis: usize) -> LevelSpec {
    LevelSpec::stationary(
        dim,
        "x_axis",
        move |x| x[axis],
        move |_| {
            let mut g = vec![0.0; dim];
            g[axis] = 1.0;
            g
        },
        move |_| vec![0.0; dim * dim],
    )
}

fn build(name: &str, specs: Vec<LevelSpec>, halfwidth: f64, time_dependent: bool, config: EngineConfig) -> Result<Geometry> {
    let levels = specs.into_iter().map(LevelSpec::into_field).collect::<Result<Vec<_>>>()?;
    LevelSetGeometry::new(name, levels, halfwidth, time_dependent, config)
}

fn constant_radius(r: f64) -> ScalarFn {
    Arc::new(move |_, _| r)
}

/// Circle of radius `R` in the plane.
pub fn circle2d(radius: f64, config: EngineConfig) -> Result<Geometry> {
    positive("R", radius)?;
    build("circle2d", vec![radial_level(2, constant_radius(radius), None, "|x| - R")], 0.5 * radius, false, config)
}

/// Circle of radius `R` in the plane z = 0 of R³ (codimension two).
pub fn circle3d(radius: f64, config: EngineConfig) -> Result<Geometry> {
    positive("R", radius)?;
    let mut z = plane_level(3, 2);
    z.label = "z".into();
    build("circle3d", vec![z, cylinder_level(radius)], 0.5 * radius, false, config)
}

pub fn sphere(radius: f64, config: EngineConfig) -> Result<Geometry> {
    positive("R", radius)?;
    build("sphere", vec![radial_level(3, constant_radius(radius), None, "|x| - R")], 0.5 * radius, false, config)
}

/// Same level set as [`sphere`]; the atlas restricts to the upper half.
pub fn hemisphere(radius: f64, config: EngineConfig) -> Result<Geometry> {
    positive("R", radius)?;
    build(
        "hemisphere",
        vec![radial_level(3, constant_radius(radius), None, "|x| - R")],
        0.5 * radius,
        false,
        config,
    )
}

pub fn torus(major: f64, minor: f64, config: EngineConfig) -> Result<Geometry> {
    positive("R", major)?;
    positive("r", minor)?;
    if minor >= major {
        return Err(Error::Config("torus requires r < R".into()));
    }
    let spec = LevelSpec::stationary(
        3,
        "torus distance",
        move |x| (x[0].hypot(x[1]) - major).hypot(x[2]) - minor,
        move |x| {
            let rho = x[0].hypot(x[1]);
            let q1 = rho - major;
            let s = q1.hypot(x[2]);
            vec![q1 / s * x[0] / rho, q1 / s * x[1] / rho, x[2] / s]
        },
        move |x| {
            let rho = x[0].hypot(x[1]);
            let q1 = rho - major;
            let q2 = x[2];
            let s = q1.hypot(q2);
            let rh = [x[0] / rho, x[1] / rho, 0.0];
            let v = [-q2 * rh[0], -q2 * rh[1], q1];
            let mut h = vec![0.0; 9];
            for i in 0..3 {
                for j in 0..3 {
                    h[i * 3 + j] = v[i] * v[j] / (s * s * s);
                }
            }
            let c = q1 / (s * rho);
            for i in 0..2 {
                for j in 0..2 {
                    let delta = if i == j { 1.0 } else { 0.0 };
                    h[i * 3 + j] += c * (delta - rh[i] * rh[j]);
                }
            }
            h
        },
    );
    build("torus", vec![spec], 0.5 * minor, false, config)
}

/// Helix `(a cos s, a sin s, b s)` given by the cylinder and a branch-tracking pitch function.
pub fn helix_segment(a: f64, b: f64, turns: f64, config: EngineConfig) -> Result<Geometry> {
    positive("a", a)?;
    positive("b", b)?;
    positive("turns", turns)?;
    let phase = move |x: &[f64]| {
        let th = x[1].atan2(x[0]);
        let k = ((x[2] / b - th) / (2.0 * PI)).round();
        th + 2.0 * PI * k
    };
    let pitch = LevelSpec::stationary(
        3,
        "z - b phi",
        move |x| x[2] - b * phase(x),
        move |x| {
            let r2 = x[0] * x[0] + x[1] * x[1];
            vec![b * x[1] / r2, -b * x[0] / r2, 1.0]
        },
        move |x| {
            let r2 = x[0] * x[0] + x[1] * x[1];
            let r4 = r2 * r2;
            let (px, py) = (x[0], x[1]);
            let hxx = -2.0 * b * px * py / r4;
            let hxy = b * (px * px - py * py) / r4;
            vec![hxx, hxy, 0.0, hxy, -hxx, 0.0, 0.0, 0.0, 0.0]
        },
    );
    let halfwidth = 0.5 * a.min(PI * b);
    build("helix_segment", vec![cylinder_level(a), pitch], halfwidth, false, config)
}

/// The plane z = 0; the atlas restricts to the disk of radius `R`.
pub fn plane_disk(radius: f64, config: EngineConfig) -> Result<Geometry> {
    positive("R", radius)?;
    let mut z = plane_level(3, 2);
    z.label = "z".into();
    build("plane_disk", vec![z], 1.0, false, config)
}

/// Sphere of radius `R0 + c t`.
pub fn expanding_sphere(r0: f64, speed: f64, config: EngineConfig) -> Result<Geometry> {
    positive("R0", r0)?;
    let radius: ScalarFn = Arc::new(move |_, t| r0 + speed * t);
    let rate: ScalarFn = Arc::new(move |_, _| speed);
    build(
        "expanding_sphere",
        vec![radial_level(3, radius, Some(rate), "|x| - R(t)")],
        0.5 * r0,
        true,
        config,
    )
}

/// Plane through the origin with normal `(sin ωt, 0, cos ωt)`.
pub fn rotating_plane(omega: f64, config: EngineConfig) -> Result<Geometry> {
    let normal = move |t: f64| [(omega * t).sin(), 0.0, (omega * t).cos()];
    let normal_rate = move |t: f64| [omega * (omega * t).cos(), 0.0, -omega * (omega * t).sin()];
    let spec = LevelSpec {
        dim: 3,
        label: "n(t) . x".into(),
        value: Arc::new(move |x, t| {
            let n = normal(t);
            n[0] * x[0] + n[1] * x[1] + n[2] * x[2]
        }),
        gradient: Arc::new(move |_, t| normal(t).to_vec()),
        hessian: Arc::new(|_, _| vec![0.0; 9]),
        time: Some((
            Arc::new(move |x, t| {
                let d = normal_rate(t);
                d[0] * x[0] + d[1] * x[1] + d[2] * x[2]
            }),
            Some(Arc::new(move |_, t| normal_rate(t).to_vec())),
        )),
    };
    build("rotating_plane", vec![spec], 1.0, true, config)
}
