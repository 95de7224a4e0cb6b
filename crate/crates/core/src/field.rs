//! Composable ambient tensor fields `(x, t) -> Tensor`.
//!
//! Fields form an expression graph. Every node can be evaluated pointwise and
//! differentiated again through a [`DerivativeEngine`], either by finite
//! differences of the whole node or, in analytic mode, by propagating supplied
//! gradients through sums and multilinear combinations.

use std::fmt;
use std::sync::Arc;

use crate::differential::engine::DerivativeEngine;
use crate::error::{Error, Result};
use crate::tensor::{unit_vector, Tensor, TensorShape};

/// Kernel of a multilinear node; must be linear in every input separately.
pub type Kernel = Arc<dyn Fn(&[Tensor]) -> Result<Tensor> + Send + Sync>;

type PointFn = Arc<dyn Fn(&[f64], f64) -> Vec<f64> + Send + Sync>;

pub trait FieldNode: Send + Sync {
    fn shape(&self) -> TensorShape;

    fn eval(&self, x: &[f64], t: f64) -> Result<Tensor>;

    fn label(&self) -> String;

    /// Number of finite-difference layers nested inside this node.
    fn fd_depth(&self) -> usize {
        0
    }

    fn is_static(&self) -> bool {
        false
    }

    fn is_constant(&self) -> bool {
        false
    }

    fn analytic_gradient(&self, _eng: &DerivativeEngine) -> Result<Option<TensorField>> {
        Ok(None)
    }

    fn analytic_time_derivative(&self, _eng: &DerivativeEngine) -> Result<Option<TensorField>> {
        Ok(None)
    }
}

#[derive(Clone)]
pub struct TensorField(Arc<dyn FieldNode>);

impl fmt::Debug for TensorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorField({}: {})", self.label(), self.shape())
    }
}

impl TensorField {
    pub fn from_node(node: impl FieldNode + 'static) -> Self {
        Self(Arc::new(node))
    }

    pub fn builder(
        dim: usize,
        rank: usize,
        f: impl Fn(&[f64], f64) -> Vec<f64> + Send + Sync + 'static,
    ) -> FieldBuilder {
        FieldBuilder {
            dim,
            rank,
            f: Arc::new(f),
            gradient: None,
            time_derivative: None,
            is_static: false,
            label: "field".into(),
        }
    }

    /// Time-dependent field given by its flat leaves.
    pub fn from_fn(
        dim: usize,
        rank: usize,
        f: impl Fn(&[f64], f64) -> Vec<f64> + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::builder(dim, rank, f).build()
    }

    /// Time-independent field given by its flat leaves.
    pub fn from_static_fn(
        dim: usize,
        rank: usize,
        f: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::builder(dim, rank, move |x, _| f(x)).stationary().build()
    }

    pub fn scalar_fn(dim: usize, f: impl Fn(&[f64], f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        Self::from_fn(dim, 0, move |x, t| vec![f(x, t)])
    }

    pub fn static_scalar(dim: usize, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Result<Self> {
        Self::from_static_fn(dim, 0, move |x| vec![f(x)])
    }

    pub fn constant(value: Tensor) -> Self {
        Self::from_node(ConstNode { value })
    }

    pub fn zeros(dim: usize, rank: usize) -> Result<Self> {
        Ok(Self::constant(Tensor::zeros(dim, rank)?))
    }

    /// The position field `r(x) = x` (as a covector field), with `∇r = I`.
    pub fn position(dim: usize) -> Result<Self> {
        Self::builder(dim, 1, |x, _| x.to_vec())
            .stationary()
            .gradient(Self::constant(Tensor::identity(dim)?))
            .label("position")
            .build()
    }

    pub fn coordinate(dim: usize, j: usize) -> Result<Self> {
        if j >= dim {
            return Err(Error::IndexOutOfRange { index: j, dim });
        }
        Self::builder(dim, 0, move |x, _| vec![x[j]])
            .stationary()
            .gradient(Self::constant(Tensor::basis_covector(dim, j)?))
            .label(format!("x_{j}"))
            .build()
    }

    pub fn shape(&self) -> TensorShape {
        self.0.shape()
    }

    pub fn dim(&self) -> usize {
        self.shape().dim
    }

    pub fn rank(&self) -> usize {
        self.shape().rank
    }

    pub fn label(&self) -> String {
        self.0.label()
    }

    pub fn fd_depth(&self) -> usize {
        self.0.fd_depth()
    }

    pub fn is_static(&self) -> bool {
        self.0.is_static()
    }

    pub fn is_constant(&self) -> bool {
        self.0.is_constant()
    }

    pub fn node(&self) -> &dyn FieldNode {
        self.0.as_ref()
    }

    pub fn eval(&self, x: &[f64], t: f64) -> Result<Tensor> {
        if x.len() != self.dim() {
            return Err(Error::ArgumentMismatch {
                op: "eval",
                expected: format!("point in R^{}", self.dim()),
                got: format!("R^{}", x.len()),
            });
        }
        let v = self.0.eval(x, t)?;
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("{} at {:?}, t = {}", self.label(), x, t)));
        }
        Ok(v)
    }

    pub fn eval_scalar(&self, x: &[f64], t: f64) -> Result<f64> {
        Ok(self.eval(x, t)?.value())
    }

    pub fn eval_vector(&self, x: &[f64], t: f64) -> Result<Vec<f64>> {
        Ok(self.eval(x, t)?.into_vec())
    }

    /// Builds a node `kernel(inputs)` that is linear in each input.
    pub fn multilinear(
        inputs: Vec<TensorField>,
        shape: TensorShape,
        label: impl Into<String>,
        kernel: impl Fn(&[Tensor]) -> Result<Tensor> + Send + Sync + 'static,
    ) -> Result<Self> {
        let dim = shape.dim;
        if inputs.iter().any(|f| f.dim() != dim) {
            return Err(Error::InvalidShape(
                "multilinear inputs must share the ambient dimension".into(),
            ));
        }
        Ok(Self::from_node(MultilinearNode {
            inputs,
            shape,
            label: label.into(),
            kernel: Arc::new(kernel),
        }))
    }

    pub fn linear_combination(terms: Vec<(f64, TensorField)>) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidShape("empty linear combination".into()))?;
        let shape = first.1.shape();
        for (_, f) in &terms {
            if f.shape() != shape {
                return Err(Error::ShapeMismatch {
                    op: "linear_combination",
                    left: shape,
                    right: f.shape(),
                });
            }
        }
        Ok(Self::from_node(SumNode { terms, shape }))
    }

    pub fn add(&self, other: &TensorField) -> Result<Self> {
        Self::linear_combination(vec![(1.0, self.clone()), (1.0, other.clone())])
    }

    pub fn sub(&self, other: &TensorField) -> Result<Self> {
        Self::linear_combination(vec![(1.0, self.clone()), (-1.0, other.clone())])
    }

    pub fn scale(&self, a: f64) -> Result<Self> {
        Self::linear_combination(vec![(a, self.clone())])
    }

    /// Pointwise product with a scalar field.
    pub fn times(&self, f: &TensorField) -> Result<Self> {
        if f.rank() != 0 {
            return Err(Error::Rank {
                op: "times",
                rank: f.rank(),
                requirement: "scalar multiplier",
            });
        }
        Self::multilinear(vec![f.clone(), self.clone()], self.shape(), "times", |a| {
            Ok(a[1].scale(a[0].value()))
        })
    }

    pub fn outer(&self, other: &TensorField) -> Result<Self> {
        let shape = TensorShape::new(self.dim(), self.rank() + other.rank())?;
        Self::multilinear(vec![self.clone(), other.clone()], shape, "outer", |a| a[0].outer(&a[1]))
    }

    pub fn frobenius(&self, other: &TensorField) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                op: "frobenius",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let shape = TensorShape::new(self.dim(), 0)?;
        let dim = self.dim();
        Self::multilinear(vec![self.clone(), other.clone()], shape, "frobenius", move |a| {
            Tensor::scalar(dim, a[0].frobenius(&a[1])?)
        })
    }

    /// `self : other` (left contraction).
    pub fn contract_left(&self, other: &TensorField) -> Result<Self> {
        let rank = other
            .rank()
            .checked_sub(self.rank())
            .ok_or(Error::Rank {
                op: "contract_left",
                rank: self.rank(),
                requirement: "left operand rank must not exceed right operand rank",
            })?;
        let shape = TensorShape::new(self.dim(), rank)?;
        Self::multilinear(vec![self.clone(), other.clone()], shape, "contract_left", |a| {
            a[0].contract_left(&a[1])
        })
    }

    /// `self : other` (right contraction).
    pub fn contract_right(&self, other: &TensorField) -> Result<Self> {
        let rank = self
            .rank()
            .checked_sub(other.rank())
            .ok_or(Error::Rank {
                op: "contract_right",
                rank: other.rank(),
                requirement: "right operand rank must not exceed left operand rank",
            })?;
        let shape = TensorShape::new(self.dim(), rank)?;
        Self::multilinear(vec![self.clone(), other.clone()], shape, "contract_right", |a| {
            a[0].contract_right(&a[1])
        })
    }

    /// `self(v)` with a vector field `v` (given as a rank-1 field).
    pub fn insert_left(&self, v: &TensorField) -> Result<Self> {
        self.require_vector_arg("insert_left", v)?;
        let shape = TensorShape::new(self.dim(), self.rank() - 1)?;
        Self::multilinear(vec![self.clone(), v.clone()], shape, "insert_left", |a| {
            a[0].insert_left(a[1].as_slice())
        })
    }

    /// `self · v` with a vector field `v`.
    pub fn insert_right(&self, v: &TensorField) -> Result<Self> {
        self.require_vector_arg("insert_right", v)?;
        let shape = TensorShape::new(self.dim(), self.rank() - 1)?;
        Self::multilinear(vec![self.clone(), v.clone()], shape, "insert_right", |a| {
            a[0].insert_right(a[1].as_slice())
        })
    }

    pub fn bigcirc(&self, other: &TensorField) -> Result<Self> {
        if self.rank() == 0 || other.rank() == 0 {
            return Err(Error::Rank {
                op: "bigcirc",
                rank: 0,
                requirement: "rank >= 1",
            });
        }
        let shape = TensorShape::new(self.dim(), self.rank() + other.rank() - 2)?;
        Self::multilinear(vec![self.clone(), other.clone()], shape, "bigcirc", |a| a[0].bigcirc(&a[1]))
    }

    pub fn transpose2(&self) -> Result<Self> {
        if self.rank() != 2 {
            return Err(Error::Rank {
                op: "transpose2",
                rank: self.rank(),
                requirement: "rank == 2",
            });
        }
        Self::multilinear(vec![self.clone()], self.shape(), "transpose", |a| a[0].transpose2())
    }

    pub fn trace_last_two(&self) -> Result<Self> {
        if self.rank() < 2 {
            return Err(Error::Rank {
                op: "trace_last_two",
                rank: self.rank(),
                requirement: "rank >= 2",
            });
        }
        let shape = TensorShape::new(self.dim(), self.rank() - 2)?;
        Self::multilinear(vec![self.clone()], shape, "trace", |a| a[0].trace_last_two())
    }

    pub fn row_component(&self, k: usize) -> Result<Self> {
        if self.rank() == 0 {
            return Err(Error::Rank {
                op: "row_component",
                rank: 0,
                requirement: "rank >= 1",
            });
        }
        if k >= self.dim() {
            return Err(Error::IndexOutOfRange { index: k, dim: self.dim() });
        }
        let shape = TensorShape::new(self.dim(), self.rank() - 1)?;
        Self::multilinear(vec![self.clone()], shape, format!("row {k}"), move |a| a[0].row_component(k))
    }

    fn require_vector_arg(&self, op: &'static str, v: &TensorField) -> Result<()> {
        if self.rank() == 0 {
            return Err(Error::Rank {
                op,
                rank: 0,
                requirement: "rank >= 1",
            });
        }
        if v.rank() != 1 || v.dim() != self.dim() {
            return Err(Error::ShapeMismatch {
                op,
                left: self.shape(),
                right: v.shape(),
            });
        }
        Ok(())
    }
}

pub struct FieldBuilder {
    dim: usize,
    rank: usize,
    f: PointFn,
    gradient: Option<TensorField>,
    time_derivative: Option<TensorField>,
    is_static: bool,
    label: String,
}

impl FieldBuilder {
    pub fn gradient(mut self, g: TensorField) -> Self {
        self.gradient = Some(g);
        self
    }

    pub fn time_derivative(mut self, d: TensorField) -> Self {
        self.time_derivative = Some(d);
        self
    }

    /// Marks the field as independent of time.
    pub fn stationary(mut self) -> Self {
        self.is_static = true;
        self
    }

    pub fn label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn build(self) -> Result<TensorField> {
        let shape = TensorShape::new(self.dim, self.rank)?;
        if let Some(g) = &self.gradient {
            if g.dim() != self.dim || g.rank() != self.rank + 1 {
                return Err(Error::InvalidShape(format!(
                    "gradient of a {shape} field must be rank {}, got {}",
                    self.rank + 1,
                    g.shape()
                )));
            }
        }
        if let Some(d) = &self.time_derivative {
            if d.shape() != shape {
                return Err(Error::ShapeMismatch {
                    op: "time_derivative",
                    left: shape,
                    right: d.shape(),
                });
            }
        }
        Ok(TensorField::from_node(FnNode {
            shape,
            f: self.f,
            gradient: self.gradient,
            time_derivative: self.time_derivative,
            is_static: self.is_static,
            label: self.label,
        }))
    }
}

struct FnNode {
    shape: TensorShape,
    f: PointFn,
    gradient: Option<TensorField>,
    time_derivative: Option<TensorField>,
    is_static: bool,
    label: String,
}

impl FieldNode for FnNode {
    fn shape(&self) -> TensorShape {
        self.shape
    }

    fn eval(&self, x: &[f64], t: f64) -> Result<Tensor> {
        Tensor::from_flat(self.shape.dim, self.shape.rank, (self.f)(x, t))
    }

    fn label(&self) -> String {
        self.label.clone()
    }

    fn is_static(&self) -> bool {
        self.is_static
    }

    fn analytic_gradient(&self, _eng: &DerivativeEngine) -> Result<Option<TensorField>> {
        Ok(self.gradient.clone())
    }

    fn analytic_time_derivative(&self, _eng: &DerivativeEngine) -> Result<Option<TensorField>> {
        Ok(self.time_derivative.clone())
    }
}

struct ConstNode {
    value: Tensor,
}

impl FieldNode for ConstNode {
    fn shape(&self) -> TensorShape {
        self.value.shape()
    }

    fn eval(&self, _x: &[f64], _t: f64) -> Result<Tensor> {
        Ok(self.value.clone())
    }

    fn label(&self) -> String {
        "const".into()
    }

    fn is_static(&self) -> bool {
        true
    }

    fn is_constant(&self) -> bool {
        true
    }
}

struct SumNode {
    terms: Vec<(f64, TensorField)>,
    shape: TensorShape,
}

impl FieldNode for SumNode {
    fn shape(&self) -> TensorShape {
        self.shape
    }

    fn eval(&self, x: &[f64], t: f64) -> Result<Tensor> {
        let mut acc = Tensor::zeros(self.shape.dim, self.shape.rank)?;
        for (a, f) in &self.terms {
            if *a != 0.0 {
                acc.add_assign_scaled(*a, &f.eval(x, t)?)?;
            }
        }
        Ok(acc)
    }

    fn label(&self) -> String {
        let parts: Vec<String> = self.terms.iter().map(|(a, f)| format!("{a}*{}", f.label())).collect();
        format!("({})", parts.join(" + "))
    }

    fn fd_depth(&self) -> usize {
        self.terms.iter().map(|(_, f)| f.fd_depth()).max().unwrap_or(0)
    }

    fn is_static(&self) -> bool {
        self.terms.iter().all(|(_, f)| f.is_static())
    }

    fn is_constant(&self) -> bool {
        self.terms.iter().all(|(_, f)| f.is_constant())
    }

    fn analytic_gradient(&self, eng: &DerivativeEngine) -> Result<Option<TensorField>> {
        let mut terms = Vec::new();
        for (a, f) in &self.terms {
            terms.push((*a, eng.gradient(f)?));
        }
        Ok(Some(TensorField::linear_combination(terms)?))
    }

    fn analytic_time_derivative(&self, eng: &DerivativeEngine) -> Result<Option<TensorField>> {
        let mut terms = Vec::new();
        for (a, f) in &self.terms {
            terms.push((*a, eng.time_derivative(f)?));
        }
        Ok(Some(TensorField::linear_combination(terms)?))
    }
}

struct MultilinearNode {
    inputs: Vec<TensorField>,
    shape: TensorShape,
    label: String,
    kernel: Kernel,
}

impl FieldNode for MultilinearNode {
    fn shape(&self) -> TensorShape {
        self.shape
    }

    fn eval(&self, x: &[f64], t: f64) -> Result<Tensor> {
        let args = self
            .inputs
            .iter()
            .map(|f| f.eval(x, t))
            .collect::<Result<Vec<_>>>()?;
        let out = (self.kernel)(&args)?;
        if out.shape() != self.shape {
            return Err(Error::ShapeMismatch {
                op: "multilinear kernel",
                left: self.shape,
                right: out.shape(),
            });
        }
        Ok(out)
    }

    fn label(&self) -> String {
        let parts: Vec<String> = self.inputs.iter().map(|f| f.label()).collect();
        format!("{}[{}]", self.label, parts.join(", "))
    }

    fn fd_depth(&self) -> usize {
        self.inputs.iter().map(|f| f.fd_depth()).max().unwrap_or(0)
    }

    fn is_static(&self) -> bool {
        self.inputs.iter().all(|f| f.is_static())
    }

    fn is_constant(&self) -> bool {
        self.inputs.iter().all(|f| f.is_constant())
    }

    fn analytic_gradient(&self, eng: &DerivativeEngine) -> Result<Option<TensorField>> {
        let dim = self.shape.dim;
        let shape = TensorShape::new(dim, self.shape.rank + 1)?;
        let mut terms = Vec::new();
        for i in 0..self.inputs.len() {
            if self.inputs[i].is_constant() {
                continue;
            }
            let mut inputs = self.inputs.clone();
            inputs[i] = eng.gradient(&self.inputs[i])?;
            let kernel = self.kernel.clone();
            let basis: Vec<Vec<f64>> = (0..dim).map(|l| unit_vector(dim, l)).collect();
            let node = TensorField::multilinear(inputs, shape, format!("d{}", self.label), move |a| {
                let parts = basis
                    .iter()
                    .map(|e| {
                        let mut args = a.to_vec();
                        args[i] = a[i].insert_right(e)?;
                        kernel(&args)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Tensor::stack_deepest(&parts)
            })?;
            terms.push((1.0, node));
        }
        if terms.is_empty() {
            return Ok(Some(TensorField::zeros(dim, shape.rank)?));
        }
        Ok(Some(TensorField::linear_combination(terms)?))
    }

    fn analytic_time_derivative(&self, eng: &DerivativeEngine) -> Result<Option<TensorField>> {
        let mut terms = Vec::new();
        for i in 0..self.inputs.len() {
            if self.inputs[i].is_static() {
                continue;
            }
            let mut inputs = self.inputs.clone();
            inputs[i] = eng.time_derivative(&self.inputs[i])?;
            let kernel = self.kernel.clone();
            let node = TensorField::multilinear(inputs, self.shape, format!("dt {}", self.label), move |a| kernel(a))?;
            terms.push((1.0, node));
        }
        if terms.is_empty() {
            return Ok(Some(TensorField::zeros(self.shape.dim, self.shape.rank)?));
        }
        Ok(Some(TensorField::linear_combination(terms)?))
    }
}
