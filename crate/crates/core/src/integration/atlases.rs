//! Parametrizations of the built-in geometries.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::Geometry;

use super::atlas::{Atlas, Chart, QuadratureSpec, Side};

fn lat_long(label: &str, radius: f64, theta_max: f64) -> Result<Chart> {
    Ok(Chart::new(label, vec![0.0, 0.0], vec![theta_max, 2.0 * PI], move |u| {
        let (st, ct, sp, cp) = (u[0].sin(), u[0].cos(), u[1].sin(), u[1].cos());
        vec![radius * st * cp, radius * st * sp, radius * ct]
    })?
    .periodic(1)
    .with_jacobian(move |u| {
        let (st, ct, sp, cp) = (u[0].sin(), u[0].cos(), u[1].sin(), u[1].cos());
        vec![
            vec![radius * ct * cp, radius * ct * sp, -radius * st],
            vec![-radius * st * sp, radius * st * cp, 0.0],
        ]
    }))
}

fn expect(geometry: &Geometry, name: &str) -> Result<()> {
    if geometry.name() != name {
        return Err(Error::Config(format!("atlas for {name} used with geometry {}", geometry.name())));
    }
    Ok(())
}

/// Latitude–longitude chart with periodic longitude.
pub fn sphere_atlas(geometry: &Geometry, radius: f64, quadrature: QuadratureSpec) -> Result<Atlas> {
    expect(geometry, "sphere")?;
    Atlas::new(geometry.clone(), vec![lat_long("lat-long", radius, PI)?], 0.0, quadrature)
}

/// Upper half `z ≥ 0`; the equator is the boundary.
pub fn hemisphere_atlas(geometry: &Geometry, radius: f64, quadrature: QuadratureSpec) -> Result<Atlas> {
    expect(geometry, "hemisphere")?;
    let chart = lat_long("upper lat-long", radius, 0.5 * PI)?.with_side(Side::upper(0));
    Atlas::new(geometry.clone(), vec![chart], 0.0, quadrature)
}

/// Polar chart of the disk of radius `R` in the plane `z = 0`.
pub fn disk_atlas(geometry: &Geometry, radius: f64, quadrature: QuadratureSpec) -> Result<Atlas> {
    expect(geometry, "plane_disk")?;
    let chart = Chart::new("polar", vec![0.0, 0.0], vec![radius, 2.0 * PI], |u| {
        vec![u[0] * u[1].cos(), u[0] * u[1].sin(), 0.0]
    })?
    .periodic(1)
    .with_side(Side::upper(0))
    .with_jacobian(|u| {
        let (s, c) = u[1].sin_cos();
        vec![vec![c, s, 0.0], vec![-u[0] * s, u[0] * c, 0.0]]
    });
    Atlas::new(geometry.clone(), vec![chart], 0.0, quadrature)
}

/// Angles `(a, b)` with `x = ((R + r cos b) cos a, (R + r cos b) sin a, r sin b)`.
/// `patch = None` gives the closed torus; otherwise the sub-rectangle with four boundary edges.
pub fn torus_atlas(
    geometry: &Geometry,
    major: f64,
    minor: f64,
    patch: Option<([f64; 2], [f64; 2])>,
    quadrature: QuadratureSpec,
) -> Result<Atlas> {
    expect(geometry, "torus")?;
    let chart = Chart::new("angles", vec![0.0, 0.0], vec![2.0 * PI, 2.0 * PI], move |u| {
        let rho = major + minor * u[1].cos();
        vec![rho * u[0].cos(), rho * u[0].sin(), minor * u[1].sin()]
    })?
    .periodic(0)
    .periodic(1)
    .with_jacobian(move |u| {
        let rho = major + minor * u[1].cos();
        let (sa, ca) = u[0].sin_cos();
        let (sb, cb) = u[1].sin_cos();
        vec![vec![-rho * sa, rho * ca, 0.0], vec![-minor * sb * ca, -minor * sb * sa, minor * cb]]
    });
    let chart = match patch {
        Some((lo, hi)) => chart.restricted(lo.to_vec(), hi.to_vec())?,
        None => chart,
    };
    Atlas::new(geometry.clone(), vec![chart], 0.0, quadrature)
}

/// `s ↦ (a cos s, a sin s, b s)` for `s ∈ [0, 2π·turns]`; both endpoints are boundary.
pub fn helix_atlas(geometry: &Geometry, a: f64, b: f64, turns: f64, quadrature: QuadratureSpec) -> Result<Atlas> {
    expect(geometry, "helix_segment")?;
    let chart = Chart::new("arc", vec![0.0], vec![2.0 * PI * turns], move |u| {
        vec![a * u[0].cos(), a * u[0].sin(), b * u[0]]
    })?
    .with_side(Side::lower(0))
    .with_side(Side::upper(0))
    .with_jacobian(move |u| vec![vec![-a * u[0].sin(), a * u[0].cos(), b]]);
    Atlas::new(geometry.clone(), vec![chart], 0.0, quadrature)
}

/// Angle chart for `circle2d` (in R²) and `circle3d` (in the plane z = 0 of R³).
pub fn circle_atlas(geometry: &Geometry, radius: f64, quadrature: QuadratureSpec) -> Result<Atlas> {
    let dim = geometry.dim();
    if !matches!(geometry.name(), "circle2d" | "circle3d") {
        return Err(Error::Config(format!("circle atlas used with geometry {}", geometry.name())));
    }
    let chart = Chart::new("angle", vec![0.0], vec![2.0 * PI], move |u| {
        let mut x = vec![radius * u[0].cos(), radius * u[0].sin()];
        x.resize(dim, 0.0);
        x
    })?
    .periodic(0)
    .with_jacobian(move |u| {
        let mut j = vec![-radius * u[0].sin(), radius * u[0].cos()];
        j.resize(dim, 0.0);
        vec![j]
    });
    Atlas::new(geometry.clone(), vec![chart], 0.0, quadrature)
}

/// Sphere of radius `R0 + c t` at time `t`.
pub fn expanding_sphere_atlas(geometry: &Geometry, r0: f64, speed: f64, time: f64, quadrature: QuadratureSpec) -> Result<Atlas> {
    expect(geometry, "expanding_sphere")?;
    let radius = r0 + speed * time;
    if radius <= 0.0 {
        return Err(Error::Config(format!("expanding sphere has collapsed at t = {time}")));
    }
    Atlas::new(geometry.clone(), vec![lat_long("lat-long", radius, PI)?], time, quadrature)
}

/// Disk of radius `R` in the rotating plane at time `t`.
pub fn rotating_disk_atlas(geometry: &Geometry, omega: f64, radius: f64, time: f64, quadrature: QuadratureSpec) -> Result<Atlas> {
    expect(geometry, "rotating_plane")?;
    let e1 = [(omega * time).cos(), 0.0, -(omega * time).sin()];
    let chart = Chart::new("polar", vec![0.0, 0.0], vec![radius, 2.0 * PI], move |u| {
        let (s, c) = u[1].sin_cos();
        vec![u[0] * c * e1[0], u[0] * s, u[0] * c * e1[2]]
    })?
    .periodic(1)
    .with_side(Side::upper(0));
    Atlas::new(geometry.clone(), vec![chart], time, quadrature)
}
