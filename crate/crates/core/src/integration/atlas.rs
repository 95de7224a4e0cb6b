//! Charts, atlases and precomputed quadrature nodes on `M` and `∂M`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::TensorField;
use crate::geometry::Geometry;
use crate::tensor::{dot, norm2, Tensor};

use super::quadrature::{pairwise_sum_tensors, GaussLegendre};

pub type ChartMap = Arc<dyn Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync>;
/// Returns the `p` Jacobian columns `∂x/∂u_a`.
pub type ChartJacobian = Arc<dyn Fn(&[f64]) -> Result<Vec<Vec<f64>>> + Send + Sync>;

const GRAM_FLOOR: f64 = 1e-14;
const CONORMAL_FLOOR: f64 = 1e-10;

/// A face `u_axis = lo` or `u_axis = hi` of a chart's parameter box that lies on `∂M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Side {
    pub axis: usize,
    pub upper: bool,
}

impl Side {
    pub fn lower(axis: usize) -> Self {
        Self { axis, upper: false }
    }

    pub fn upper(axis: usize) -> Self {
        Self { axis, upper: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct QuadratureSpec {
    pub order: usize,
    pub panels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { order: 16, panels: 2 }
    }
}

#[derive(Clone)]
pub struct Chart {
    pub label: String,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub periodic: Vec<bool>,
    pub sides: Vec<Side>,
    map: ChartMap,
    jacobian: Option<ChartJacobian>,
}

impl std::fmt::Debug for Chart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Chart")
            .field("label", &self.label)
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .field("periodic", &self.periodic)
            .field("sides", &self.sides)
            .finish()
    }
}

impl Chart {
    pub fn new(
        label: impl Into<String>,
        lo: Vec<f64>,
        hi: Vec<f64>,
        map: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() || lo.iter().zip(&hi).any(|(a, b)| !(a < b)) {
            return Err(Error::Config(format!("invalid chart box {lo:?} .. {hi:?}")));
        }
        let p = lo.len();
        Ok(Self {
            label: label.into(),
            lo,
            hi,
            periodic: vec![false; p],
            sides: Vec::new(),
            map: Arc::new(move |u| Ok(map(u))),
            jacobian: None,
        })
    }

    pub fn periodic(mut self, axis: usize) -> Self {
        self.periodic[axis] = true;
        self
    }

    pub fn with_side(mut self, side: Side) -> Self {
        self.sides.push(side);
        self
    }

    pub fn with_jacobian(mut self, jac: impl Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync + 'static) -> Self {
        self.jacobian = Some(Arc::new(move |u| Ok(jac(u))));
        self
    }

    pub fn param_dim(&self) -> usize {
        self.lo.len()
    }

    pub fn point(&self, u: &[f64]) -> Result<Vec<f64>> {
        (self.map)(u)
    }

    /// Jacobian columns; fourth-order differences when no analytic Jacobian is set.
    pub fn jacobian(&self, u: &[f64]) -> Result<Vec<Vec<f64>>> {
        if let Some(j) = &self.jacobian {
            return j(u);
        }
        let mut cols = Vec::with_capacity(u.len());
        for a in 0..u.len() {
            let h = 1e-3 * (self.hi[a] - self.lo[a]).abs().clamp(1e-3, 1.0);
            let at = |s: f64| {
                let mut v = u.to_vec();
                v[a] += s * h;
                (self.map)(&v)
            };
            let (p1, m1, p2, m2) = (at(1.0)?, at(-1.0)?, at(2.0)?, at(-2.0)?);
            cols.push(
                (0..p1.len())
                    .map(|i| (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12.0 * h))
                    .collect(),
            );
        }
        Ok(cols)
    }

    /// Same chart on a smaller box; faces that moved inward become boundary sides.
    pub fn restricted(&self, lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        let p = self.param_dim();
        if lo.len() != p || hi.len() != p {
            return Err(Error::Config("restriction box has the wrong dimension".into()));
        }
        let mut sides = Vec::new();
        for a in 0..p {
            if lo[a] < self.lo[a] - 1e-14 || hi[a] > self.hi[a] + 1e-14 || !(lo[a] < hi[a]) {
                return Err(Error::Config(format!("restriction box {lo:?} .. {hi:?} leaves the chart")));
            }
            for upper in [false, true] {
                let kept = if upper { (hi[a] - self.hi[a]).abs() < 1e-14 } else { (lo[a] - self.lo[a]).abs() < 1e-14 };
                if !kept || self.sides.contains(&Side { axis: a, upper }) {
                    sides.push(Side { axis: a, upper });
                }
            }
        }
        let mut periodic = self.periodic.clone();
        for a in 0..p {
            if (lo[a] - self.lo[a]).abs() > 1e-14 || (hi[a] - self.hi[a]).abs() > 1e-14 {
                periodic[a] = false;
            }
        }
        Ok(Self {
            label: format!("{} (patch)", self.label),
            lo,
            hi,
            periodic,
            sides,
            map: self.map.clone(),
            jacobian: self.jacobian.clone(),
        })
    }

    fn composed(&self, flow: Arc<dyn Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync>) -> Self {
        let map = self.map.clone();
        Self {
            label: self.label.clone(),
            lo: self.lo.clone(),
            hi: self.hi.clone(),
            periodic: self.periodic.clone(),
            sides: self.sides.clone(),
            map: Arc::new(move |u| flow(&map(u)?)),
            jacobian: None,
        }
    }
}

/// `sqrt(det(JᵀJ))` for Jacobian columns `J`.
pub fn gram_factor(cols: &[Vec<f64>]) -> f64 {
    let p = cols.len();
    let g = nalgebra::DMatrix::from_fn(p, p, |a, b| dot(&cols[a], &cols[b]));
    g.determinant().max(0.0).sqrt()
}

#[derive(Clone, Debug)]
pub struct QuadNode {
    pub x: Vec<f64>,
    /// Jacobian columns at the node.
    pub tangents: Vec<Vec<f64>>,
    pub weight: f64,
}

/// A quadrature point on `∂M` with its co-normal and, on surfaces, the boundary orientation.
#[derive(Clone, Debug)]
pub struct BoundaryPoint {
    pub x: Vec<f64>,
    pub tangents: Vec<Vec<f64>>,
    /// Outward unit co-normal: tangent to `M`, orthogonal to `∂M`.
    pub t: Vec<f64>,
    /// `τ` with `det(t, τ, n_1, .., n_m) > 0` (two-dimensional `M` only).
    pub tau: Option<Vec<f64>>,
}

#[derive(Clone, Debug)]
pub struct BoundaryNode {
    pub point: BoundaryPoint,
    pub weight: f64,
}

#[derive(Clone)]
pub struct Atlas {
    geometry: Geometry,
    time: f64,
    quadrature: QuadratureSpec,
    charts: Vec<Chart>,
    nodes: Vec<QuadNode>,
    boundary: Vec<BoundaryNode>,
}

impl std::fmt::Debug for Atlas {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Atlas")
            .field("geometry", &self.geometry.name())
            .field("time", &self.time)
            .field("quadrature", &self.quadrature)
            .field("charts", &self.charts)
            .field("nodes", &self.nodes.len())
            .field("boundary_nodes", &self.boundary.len())
            .finish()
    }
}

impl Atlas {
    /// Builds the quadrature and checks every node against the level sets (`|d_i| ≤ 1e-8`).
    pub fn new(geometry: Geometry, charts: Vec<Chart>, time: f64, quadrature: QuadratureSpec) -> Result<Self> {
        Self::build(geometry, charts, time, quadrature, 1e-8)
    }

    fn build(geometry: Geometry, charts: Vec<Chart>, time: f64, quadrature: QuadratureSpec, level_tol: f64) -> Result<Self> {
        if quadrature.panels == 0 {
            return Err(Error::Config("quadrature panels must be positive".into()));
        }
        let rule = GaussLegendre::new(quadrature.order)?;
        let p = geometry.manifold_dim();
        let mut nodes = Vec::new();
        let mut boundary = Vec::new();
        for chart in &charts {
            if chart.param_dim() != p {
                return Err(Error::Config(format!(
                    "chart {} has parameter dimension {} but M has dimension {p}",
                    chart.label,
                    chart.param_dim()
                )));
            }
            let params = tensor_grid(&rule, &chart.lo, &chart.hi, quadrature.panels);
            let built: Vec<Result<QuadNode>> = params
                .par_iter()
                .map(|(u, w)| {
                    let x = chart.point(u)?;
                    let tangents = chart.jacobian(u)?;
                    let g = gram_factor(&tangents);
                    if g * g < GRAM_FLOOR {
                        return Err(Error::Degenerate(format!("chart {} is singular at {u:?}", chart.label)));
                    }
                    check_levels(&geometry, &x, time, level_tol)?;
                    Ok(QuadNode { x, tangents, weight: w * g })
                })
                .collect();
            for n in built {
                nodes.push(n?);
            }
            for side in &chart.sides {
                for (s, w) in face_grid(&rule, chart, *side, quadrature.panels) {
                    let point = boundary_point_on(&geometry, chart, *side, &s, time, level_tol)?;
                    let weight = if p == 1 {
                        1.0
                    } else {
                        let along: Vec<Vec<f64>> = point.tangents.clone();
                        w * gram_factor(&along)
                    };
                    boundary.push(BoundaryNode { point, weight });
                }
            }
        }
        Ok(Self { geometry, time, quadrature, charts, nodes, boundary })
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn quadrature(&self) -> QuadratureSpec {
        self.quadrature
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn nodes(&self) -> &[QuadNode] {
        &self.nodes
    }

    pub fn boundary_nodes(&self) -> &[BoundaryNode] {
        &self.boundary
    }

    pub fn has_boundary(&self) -> bool {
        !self.boundary.is_empty()
    }

    pub fn with_quadrature(&self, quadrature: QuadratureSpec) -> Result<Self> {
        Self::new(self.geometry.clone(), self.charts.clone(), self.time, quadrature)
    }

    /// Same charts on a geometry with a different derivative configuration.
    pub fn with_geometry(&self, geometry: Geometry) -> Result<Self> {
        Self::new(geometry, self.charts.clone(), self.time, self.quadrature)
    }

    /// Restriction of a single-chart atlas to a parameter sub-box (a material patch).
    pub fn sub_patch(&self, lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if self.charts.len() != 1 {
            return Err(Error::Config("sub_patch needs a single-chart atlas".into()));
        }
        let chart = self.charts[0].restricted(lo, hi)?;
        Self::new(self.geometry.clone(), vec![chart], self.time, self.quadrature)
    }

    /// Charts pushed forward by one RK4 step of the flow of `w` from `time` to `time + dt`.
    pub fn advected(&self, w: &TensorField, dt: f64) -> Result<Self> {
        if w.rank() != 1 || w.dim() != self.geometry.dim() {
            return Err(Error::ArgumentMismatch {
                op: "advected",
                expected: format!("velocity field in R^{}", self.geometry.dim()),
                got: format!("{}", w.shape()),
            });
        }
        let (w, t0) = (w.clone(), self.time);
        let flow: Arc<dyn Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync> = Arc::new(move |x| rk4_step(&w, x, t0, dt));
        let charts = self.charts.iter().map(|c| c.composed(flow.clone())).collect();
        Self::build(self.geometry.clone(), charts, t0 + dt, self.quadrature, 1e-6)
    }

    /// Co-normal data at parameter `s` along a boundary face of chart `chart`.
    pub fn boundary_point(&self, chart: usize, side: Side, s: &[f64]) -> Result<BoundaryPoint> {
        let c = self.charts.get(chart).ok_or(Error::IndexOutOfRange { index: chart, dim: self.charts.len() })?;
        if !c.sides.contains(&side) {
            return Err(Error::Config(format!("chart {} has no boundary side {side:?}", c.label)));
        }
        boundary_point_on(&self.geometry, c, side, s, self.time, 1e-8)
    }

    /// `∫_M f` where `f` is evaluated per node; order-fixed pairwise accumulation.
    pub fn integrate_with<F>(&self, f: F) -> Result<Tensor>
    where
        F: Fn(&QuadNode) -> Result<Tensor> + Sync,
    {
        accumulate(&self.nodes, |n| Ok((f(n)?, n.weight)))
    }

    /// `∫_{∂M} f`; for curves the endpoint values with unit weights.
    pub fn integrate_boundary_with<F>(&self, f: F) -> Result<Option<Tensor>>
    where
        F: Fn(&BoundaryPoint) -> Result<Tensor> + Sync,
    {
        if self.boundary.is_empty() {
            return Ok(None);
        }
        accumulate(&self.boundary, |n| Ok((f(&n.point)?, n.weight))).map(Some)
    }

    pub fn integrate_tensor(&self, f: &TensorField) -> Result<Tensor> {
        self.check_field(f)?;
        let t = self.time;
        self.integrate_with(|n| f.eval(&n.x, t))
    }

    /// Boundary integral of `f`; zero of the right shape on closed `M`.
    pub fn integrate_boundary(&self, f: &TensorField) -> Result<Tensor> {
        self.check_field(f)?;
        let t = self.time;
        match self.integrate_boundary_with(|b| f.eval(&b.x, t))? {
            Some(v) => Ok(v),
            None => Tensor::zeros(f.dim(), f.rank()),
        }
    }

    pub fn area(&self) -> f64 {
        crate::integration::quadrature::pairwise_sum(&self.nodes.iter().map(|n| n.weight).collect::<Vec<_>>())
    }

    fn check_field(&self, f: &TensorField) -> Result<()> {
        if f.dim() != self.geometry.dim() {
            return Err(Error::ArgumentMismatch {
                op: "integrate",
                expected: format!("field on R^{}", self.geometry.dim()),
                got: format!("{}", f.shape()),
            });
        }
        Ok(())
    }
}

fn accumulate<N: Sync>(items: &[N], f: impl Fn(&N) -> Result<(Tensor, f64)> + Sync) -> Result<Tensor> {
    let values: Vec<Result<Tensor>> = items
        .par_iter()
        .map(|n| {
            let (v, w) = f(n)?;
            Ok(v.scale(w))
        })
        .collect();
    let values = values.into_iter().collect::<Result<Vec<_>>>()?;
    pairwise_sum_tensors(&values)?.ok_or_else(|| Error::Degenerate("empty quadrature".into()))
}

fn check_levels(geometry: &Geometry, x: &[f64], t: f64, tol: f64) -> Result<()> {
    for (i, d) in geometry.level_values(x, t)?.into_iter().enumerate() {
        if d.abs() > tol {
            return Err(Error::Degenerate(format!(
                "chart point {x:?} is off the level set: d_{} = {d:e}",
                i + 1
            )));
        }
    }
    Ok(())
}

fn tensor_grid(rule: &GaussLegendre, lo: &[f64], hi: &[f64], panels: usize) -> Vec<(Vec<f64>, f64)> {
    let mut grid = vec![(Vec::new(), 1.0)];
    for a in 0..lo.len() {
        let axis = rule.composite(lo[a], hi[a], panels);
        let mut next = Vec::with_capacity(grid.len() * axis.len());
        for (u, w) in &grid {
            for (s, ws) in &axis {
                let mut v: Vec<f64> = u.clone();
                v.push(*s);
                next.push((v, w * ws));
            }
        }
        grid = next;
    }
    grid
}

/// Nodes on a face, returned as full parameter vectors.
fn face_grid(rule: &GaussLegendre, chart: &Chart, side: Side, panels: usize) -> Vec<(Vec<f64>, f64)> {
    let p = chart.param_dim();
    let fixed = if side.upper { chart.hi[side.axis] } else { chart.lo[side.axis] };
    if p == 1 {
        return vec![(vec![fixed], 1.0)];
    }
    let lo: Vec<f64> = (0..p).filter(|&a| a != side.axis).map(|a| chart.lo[a]).collect();
    let hi: Vec<f64> = (0..p).filter(|&a| a != side.axis).map(|a| chart.hi[a]).collect();
    tensor_grid(rule, &lo, &hi, panels)
        .into_iter()
        .map(|(s, w)| {
            let mut u = s;
            u.insert(side.axis, fixed);
            (u, w)
        })
        .collect()
}

fn boundary_point_on(geometry: &Geometry, chart: &Chart, side: Side, u: &[f64], time: f64, level_tol: f64) -> Result<BoundaryPoint> {
    let p = chart.param_dim();
    let mut u = u.to_vec();
    if u.len() == p - 1 {
        u.insert(side.axis, if side.upper { chart.hi[side.axis] } else { chart.lo[side.axis] });
    }
    if u.len() != p {
        return Err(Error::ArgumentMismatch {
            op: "boundary_point",
            expected: format!("{} face parameters", p - 1),
            got: format!("{}", u.len()),
        });
    }
    let x = chart.point(&u)?;
    check_levels(geometry, &x, time, level_tol)?;
    let frame = geometry.frame_at(&x, time)?;
    let jac = chart.jacobian(&u)?;
    let sign = if side.upper { 1.0 } else { -1.0 };
    let mut t = frame.project_vector(&jac[side.axis].iter().map(|c| sign * c).collect::<Vec<_>>());
    let tangents: Vec<Vec<f64>> = (0..p).filter(|&a| a != side.axis).map(|a| jac[a].clone()).collect();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in &tangents {
        let mut e = frame.project_vector(v);
        for b in &basis {
            let c = dot(&e, b);
            e.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let s = norm2(&e);
        if s > CONORMAL_FLOOR {
            basis.push(e.iter().map(|c| c / s).collect());
        }
    }
    for b in &basis {
        let c = dot(&t, b);
        t.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
    }
    let s = norm2(&t);
    if s < CONORMAL_FLOOR {
        return Err(Error::Degenerate(format!("co-normal vanishes at {x:?}")));
    }
    let t: Vec<f64> = t.iter().map(|c| c / s).collect();
    let tau = if p == 2 { Some(frame.dagger(&t)?) } else { None };
    Ok(BoundaryPoint { x, tangents, t, tau })
}

fn rk4_step(w: &TensorField, x: &[f64], t: f64, dt: f64) -> Result<Vec<f64>> {
    let shift = |base: &[f64], k: &[f64], a: f64| -> Vec<f64> { base.iter().zip(k).map(|(p, q)| p + a * q).collect() };
    let k1 = w.eval_vector(x, t)?;
    let k2 = w.eval_vector(&shift(x, &k1, 0.5 * dt), t + 0.5 * dt)?;
    let k3 = w.eval_vector(&shift(x, &k2, 0.5 * dt), t + 0.5 * dt)?;
    let k4 = w.eval_vector(&shift(x, &k3, dt), t + dt)?;
    Ok((0..x.len())
        .map(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}
