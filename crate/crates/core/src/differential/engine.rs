//! Gradient and time-derivative providers for [`TensorField`]s.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldNode, TensorField};
use crate::tensor::{Tensor, TensorShape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FdMode {
    /// Second-order central differences of every composite field.
    Fd2,
    /// Fourth-order central differences of every composite field.
    Fd4,
    /// Propagate supplied gradients; fourth-order differences where none exist.
    Analytic,
}

impl fmt::Display for FdMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FdMode::Fd2 => "fd2",
            FdMode::Fd4 => "fd4",
            FdMode::Analytic => "analytic",
        })
    }
}

impl FromStr for FdMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fd2" => Ok(FdMode::Fd2),
            "fd4" => Ok(FdMode::Fd4),
            "analytic" => Ok(FdMode::Analytic),
            other => Err(Error::Config(format!(
                "unknown derivative mode '{other}' (expected fd2, fd4 or analytic)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Scheme {
    Central2,
    Central4,
}

/// Finite-difference settings. Steps for nested differences grow with the
/// number of difference layers already inside the differentiated field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub mode: FdMode,
    /// Innermost spatial step, relative to `max(1, |x|)`.
    pub hx: Option<f64>,
    /// Innermost time step.
    pub ht: Option<f64>,
    pub max_depth: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            mode: FdMode::Fd2,
            hx: None,
            ht: None,
            max_depth: 3,
        }
    }
}

impl EngineConfig {
    pub fn new(mode: FdMode) -> Self {
        Self {
            mode,
            ..Self::default()
        }
    }

    fn scheme(&self) -> Scheme {
        match self.mode {
            FdMode::Fd2 => Scheme::Central2,
            FdMode::Fd4 | FdMode::Analytic => Scheme::Central4,
        }
    }

    fn level_ratio(scheme: Scheme, level: usize) -> f64 {
        match (scheme, level) {
            (_, 0) => 1.0,
            (Scheme::Central2, 1) => 10.0,
            (Scheme::Central2, _) => 2000.0,
            (Scheme::Central4, 1) => 3.0,
            (Scheme::Central4, _) => 10.0,
        }
    }

    fn base_hx(&self, scheme: Scheme) -> f64 {
        match (self.hx, scheme) {
            (Some(h), _) => h,
            (None, Scheme::Central2) => 5e-6,
            (None, Scheme::Central4) => 1e-3,
        }
    }

    fn base_ht(&self, scheme: Scheme) -> f64 {
        match (self.ht, scheme) {
            (Some(h), _) => h,
            (None, Scheme::Central2) => 1e-5,
            (None, Scheme::Central4) => 1e-3,
        }
    }

    fn spatial_step(&self, scheme: Scheme, level: usize, x: &[f64]) -> f64 {
        let scale = x.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
        self.base_hx(scheme) * Self::level_ratio(scheme, level) * scale
    }

    fn time_step(&self, scheme: Scheme, level: usize) -> f64 {
        self.base_ht(scheme) * Self::level_ratio(scheme, level)
    }
}

/// Tubular neighbourhood `sum_i |d_i(x, t)| < halfwidth` that stencils must respect.
pub struct Tube {
    pub levels: Vec<TensorField>,
    pub halfwidth: f64,
}

impl Tube {
    pub fn measure(&self, x: &[f64], t: f64) -> Result<f64> {
        let mut sum = 0.0;
        for d in &self.levels {
            sum += d.eval_scalar(x, t)?.abs();
        }
        Ok(sum)
    }

    pub fn check(&self, x: &[f64], t: f64) -> Result<()> {
        let sum = self.measure(x, t)?;
        if !(sum < self.halfwidth) {
            return Err(Error::OutsideTube {
                point: x.to_vec(),
                sum,
                halfwidth: self.halfwidth,
            });
        }
        Ok(())
    }
}

#[derive(Clone)]
pub struct DerivativeEngine {
    config: Arc<EngineConfig>,
    tube: Option<Arc<Tube>>,
}

impl fmt::Debug for DerivativeEngine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DerivativeEngine")
            .field("config", &self.config)
            .field("tube", &self.tube.as_ref().map(|t| t.halfwidth))
            .finish()
    }
}

impl Default for DerivativeEngine {
    fn default() -> Self {
        Self::new(EngineConfig::default())
    }
}

impl DerivativeEngine {
    pub fn new(config: EngineConfig) -> Self {
        Self {
            config: Arc::new(config),
            tube: None,
        }
    }

    pub fn with_mode(mode: FdMode) -> Self {
        Self::new(EngineConfig::new(mode))
    }

    pub fn with_tube(mut self, tube: Tube) -> Self {
        self.tube = Some(Arc::new(tube));
        self
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn mode(&self) -> FdMode {
        self.config.mode
    }

    pub fn tube(&self) -> Option<&Tube> {
        self.tube.as_deref()
    }

    /// `∇F`, with the derivative index in the deepest slot.
    pub fn gradient(&self, f: &TensorField) -> Result<TensorField> {
        if f.is_constant() {
            return TensorField::zeros(f.dim(), f.rank() + 1);
        }
        if self.config.mode == FdMode::Analytic {
            if let Some(g) = f.node().analytic_gradient(self)? {
                return Ok(g);
            }
        }
        self.fd_node(f, Direction::Space)
    }

    /// `∂_t F`.
    pub fn time_derivative(&self, f: &TensorField) -> Result<TensorField> {
        if f.is_static() {
            return TensorField::zeros(f.dim(), f.rank());
        }
        if self.config.mode == FdMode::Analytic {
            if let Some(d) = f.node().analytic_time_derivative(self)? {
                return Ok(d);
            }
        }
        self.fd_node(f, Direction::Time)
    }

    /// Finite-difference gradient regardless of the configured mode.
    pub fn fd_gradient(&self, f: &TensorField) -> Result<TensorField> {
        self.fd_node(f, Direction::Space)
    }

    fn fd_node(&self, f: &TensorField, direction: Direction) -> Result<TensorField> {
        let depth = f.fd_depth() + 1;
        if depth > self.config.max_depth {
            return Err(Error::NestingExceeded {
                depth,
                max: self.config.max_depth,
            });
        }
        let rank = match direction {
            Direction::Space => f.rank() + 1,
            Direction::Time => f.rank(),
        };
        Ok(TensorField::from_node(FdNode {
            inner: f.clone(),
            shape: TensorShape::new(f.dim(), rank)?,
            direction,
            scheme: self.config.scheme(),
            engine: self.clone(),
        }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    Space,
    Time,
}

struct FdNode {
    inner: TensorField,
    shape: TensorShape,
    direction: Direction,
    scheme: Scheme,
    engine: DerivativeEngine,
}

impl FdNode {
    fn sample(&self, x: &[f64], t: f64) -> Result<Tensor> {
        if let Some(tube) = self.engine.tube() {
            tube.check(x, t)?;
        }
        self.inner.eval(x, t)
    }

    fn difference(&self, plus: &dyn Fn(f64) -> Result<Tensor>, h: f64) -> Result<Tensor> {
        match self.scheme {
            Scheme::Central2 => {
                let a = plus(h)?;
                let b = plus(-h)?;
                Ok(Tensor::linear_combine(0.5 / h, &a, -0.5 / h, &b)?)
            }
            Scheme::Central4 => {
                let a1 = plus(h)?;
                let b1 = plus(-h)?;
                let a2 = plus(2.0 * h)?;
                let b2 = plus(-2.0 * h)?;
                let near = Tensor::linear_combine(8.0, &a1, -8.0, &b1)?;
                let far = Tensor::linear_combine(-1.0, &a2, 1.0, &b2)?;
                Ok(near.add(&far)?.scale(1.0 / (12.0 * h)))
            }
        }
    }
}

impl FieldNode for FdNode {
    fn shape(&self) -> TensorShape {
        self.shape
    }

    fn eval(&self, x: &[f64], t: f64) -> Result<Tensor> {
        let level = self.inner.fd_depth();
        let cfg = self.engine.config();
        match self.direction {
            Direction::Space => {
                let h = cfg.spatial_step(self.scheme, level, x);
                let parts = (0..x.len())
                    .map(|l| {
                        let shifted = |s: f64| {
                            let mut y = x.to_vec();
                            y[l] += s;
                            self.sample(&y, t)
                        };
                        self.difference(&shifted, h)
                    })
                    .collect::<Result<Vec<_>>>()?;
                if self.inner.rank() == 0 {
                    let comps: Vec<f64> = parts.iter().map(|p| p.value()).collect();
                    Tensor::from_flat(x.len(), 1, comps)
                } else {
                    Tensor::stack_deepest(&parts)
                }
            }
            Direction::Time => {
                let h = cfg.time_step(self.scheme, level);
                let shifted = |s: f64| self.sample(x, t + s);
                self.difference(&shifted, h)
            }
        }
    }

    fn label(&self) -> String {
        match self.direction {
            Direction::Space => format!("fd_grad({})", self.inner.label()),
            Direction::Time => format!("fd_dt({})", self.inner.label()),
        }
    }

    fn fd_depth(&self) -> usize {
        self.inner.fd_depth() + 1
    }

    fn is_static(&self) -> bool {
        self.inner.is_static()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly() -> TensorField {
        TensorField::static_scalar(2, |x| x[0] * x[0] + x[1] * x[1]).unwrap()
    }

    #[test]
    fn fd2_gradient_of_quadratic() {
        let eng = DerivativeEngine::with_mode(FdMode::Fd2);
        let g = eng.gradient(&poly()).unwrap();
        let v = g.eval(&[1.0, 2.0], 0.0).unwrap();
        assert!((v.as_slice()[0] - 2.0).abs() < 1e-9);
        assert!((v.as_slice()[1] - 4.0).abs() < 1e-9);
    }

    #[test]
    fn fd_is_exact_on_affine_fields() {
        let a = [[1.0, -2.0, 0.5], [0.3, 0.0, 4.0], [-1.0, 2.0, 2.0]];
        let f = TensorField::from_static_fn(3, 1, move |x| {
            (0..3).map(|i| (0..3).map(|j| a[i][j] * x[j]).sum()).collect()
        })
        .unwrap();
        for mode in [FdMode::Fd2, FdMode::Fd4] {
            let g = DerivativeEngine::with_mode(mode).gradient(&f).unwrap();
            let v = g.eval(&[0.3, -0.7, 1.1], 0.0).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    assert!((v.get(&[i, j]).unwrap() - a[i][j]).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn position_gradient_is_identity() {
        let r = TensorField::position(3).unwrap();
        for mode in [FdMode::Fd2, FdMode::Analytic] {
            let g = DerivativeEngine::with_mode(mode).gradient(&r).unwrap();
            let v = g.eval(&[0.2, 0.4, -0.1], 0.0).unwrap();
            assert!(v.distance(&Tensor::identity(3).unwrap()).unwrap() < 1e-10);
        }
    }

    #[test]
    fn analytic_propagation_through_products() {
        // ∇(r ⊗ r)·e_l = e_l ⊗ r + r ⊗ e_l
        let eng = DerivativeEngine::with_mode(FdMode::Analytic);
        let r = TensorField::position(3).unwrap();
        let g = eng.gradient(&r.outer(&r).unwrap()).unwrap();
        let x = [0.5, -1.0, 2.0];
        let v = g.eval(&x, 0.0).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for l in 0..3 {
                    let expect = if i == l { x[j] } else { 0.0 } + if j == l { x[i] } else { 0.0 };
                    assert!((v.get(&[i, j, l]).unwrap() - expect).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn nesting_budget_is_enforced() {
        let eng = DerivativeEngine::with_mode(FdMode::Fd2);
        let mut f = poly();
        for _ in 0..3 {
            f = eng.gradient(&f).unwrap();
        }
        assert!(matches!(eng.gradient(&f), Err(Error::NestingExceeded { depth: 4, max: 3 })));
    }

    #[test]
    fn time_derivative_modes() {
        let f = TensorField::scalar_fn(2, |x, t| t * t * x[0]).unwrap();
        for mode in [FdMode::Fd2, FdMode::Fd4] {
            let d = DerivativeEngine::with_mode(mode).time_derivative(&f).unwrap();
            assert!((d.eval_scalar(&[3.0, 0.0], 0.5).unwrap() - 3.0).abs() < 1e-8);
        }
        let s = poly();
        let d = DerivativeEngine::default().time_derivative(&s).unwrap();
        assert!(d.is_constant());
    }

    #[test]
    fn stencil_outside_tube_is_rejected() {
        let d = TensorField::static_scalar(2, |x| x[1]).unwrap();
        let eng = DerivativeEngine::with_mode(FdMode::Fd2).with_tube(Tube {
            levels: vec![d.clone()],
            halfwidth: 1e-6,
        });
        let g = eng.gradient(&d).unwrap();
        assert!(matches!(g.eval(&[0.0, 0.0], 0.0), Err(Error::OutsideTube { .. })));
    }

    #[test]
    fn parse_modes() {
        assert_eq!("fd4".parse::<FdMode>().unwrap(), FdMode::Fd4);
        assert!(matches!("fd3".parse::<FdMode>(), Err(Error::Config(_))));
    }
}
