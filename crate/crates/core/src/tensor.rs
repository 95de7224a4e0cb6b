//! Row-represented tensors.
//!
//! A rank-`q` tensor over `R^n` is a complete `n`-ary tree of depth `q` whose
//! leaves hold the values of the multilinear map on basis tuples. The tree is
//! stored flat in lexicographic leaf order, so the `k`-th child of the root
//! (the row component `T^k`) is the contiguous block `[k n^(q-1), (k+1) n^(q-1))`.
//!
//! All binary operations check shapes before touching any data.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible ambient dimension.
pub const MAX_DIM: usize = 8;
/// Largest admissible rank.
pub const MAX_RANK: usize = 8;
/// Largest admissible number of leaves.
pub const MAX_LEAVES: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TensorShape {
    pub dim: usize,
    pub rank: usize,
}

impl TensorShape {
    pub fn new(dim: usize, rank: usize) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidShape("ambient dimension must be at least 1".into()));
        }
        if dim > MAX_DIM {
            return Err(Error::InvalidShape(format!(
                "ambient dimension {dim} exceeds the limit {MAX_DIM}"
            )));
        }
        if rank > MAX_RANK {
            return Err(Error::InvalidShape(format!("rank {rank} exceeds the limit {MAX_RANK}")));
        }
        let shape = Self { dim, rank };
        if shape.leaf_count() > MAX_LEAVES {
            return Err(Error::InvalidShape(format!(
                "{dim}^{rank} leaves exceed the limit {MAX_LEAVES}"
            )));
        }
        Ok(shape)
    }

    pub fn leaf_count(&self) -> usize {
        self.dim.pow(self.rank as u32)
    }
}

impl fmt::Display for TensorShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T_{}(R^{})", self.rank, self.dim)
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Tensor {
    shape: TensorShape,
    data: Vec<f64>,
}

impl Tensor {
    pub fn zeros(dim: usize, rank: usize) -> Result<Self> {
        let shape = TensorShape::new(dim, rank)?;
        Ok(Self {
            shape,
            data: vec![0.0; shape.leaf_count()],
        })
    }

    /// Rank-0 tensor. The ambient dimension is carried along for shape checks.
    pub fn scalar(dim: usize, value: f64) -> Result<Self> {
        let shape = TensorShape::new(dim, 0)?;
        Ok(Self {
            shape,
            data: vec![value],
        })
    }

    /// The covector `u^T` with the given components; `n = components.len()`.
    pub fn covector(components: &[f64]) -> Result<Self> {
        let shape = TensorShape::new(components.len(), 1)?;
        Ok(Self {
            shape,
            data: components.to_vec(),
        })
    }

    pub fn basis_covector(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::IndexOutOfRange { index: k, dim });
        }
        let mut t = Self::zeros(dim, 1)?;
        t.data[k] = 1.0;
        Ok(t)
    }

    /// `I = {e^*}`.
    pub fn identity(dim: usize) -> Result<Self> {
        let mut t = Self::zeros(dim, 2)?;
        for k in 0..dim {
            t.data[k * dim + k] = 1.0;
        }
        Ok(t)
    }

    /// Builds `{T^*}` from its `n` row components.
    pub fn from_rows(rows: &[Tensor]) -> Result<Self> {
        let first = rows
            .first()
            .ok_or_else(|| Error::InvalidShape("a tensor needs at least one row component".into()))?;
        let dim = first.dim();
        if rows.len() != dim {
            return Err(Error::ArgumentMismatch {
                op: "from_rows",
                expected: format!("{dim} row components"),
                got: format!("{}", rows.len()),
            });
        }
        for row in rows {
            if row.shape != first.shape {
                return Err(Error::ShapeMismatch {
                    op: "from_rows",
                    left: first.shape,
                    right: row.shape,
                });
            }
        }
        let shape = TensorShape::new(dim, first.rank() + 1)?;
        let mut data = Vec::with_capacity(shape.leaf_count());
        for row in rows {
            data.extend_from_slice(&row.data);
        }
        Ok(Self { shape, data })
    }

    pub fn from_flat(dim: usize, rank: usize, data: Vec<f64>) -> Result<Self> {
        let shape = TensorShape::new(dim, rank)?;
        if data.len() != shape.leaf_count() {
            return Err(Error::ArgumentMismatch {
                op: "from_flat",
                expected: format!("{} leaves", shape.leaf_count()),
                got: format!("{}", data.len()),
            });
        }
        Ok(Self { shape, data })
    }

    /// Fills the leaves from a function of the multi-index.
    pub fn from_fn(dim: usize, rank: usize, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let shape = TensorShape::new(dim, rank)?;
        let mut idx = vec![0usize; rank];
        let mut data = Vec::with_capacity(shape.leaf_count());
        for flat in 0..shape.leaf_count() {
            unflatten(flat, dim, &mut idx);
            data.push(f(&idx));
        }
        Ok(Self { shape, data })
    }

    /// Rank-2 tensor from a row-major square matrix.
    pub fn from_matrix(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::ArgumentMismatch {
                    op: "from_matrix",
                    expected: format!("{dim} columns"),
                    got: format!("{}", row.len()),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_flat(dim, 2, data)
    }

    pub fn shape(&self) -> TensorShape {
        self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.dim
    }

    pub fn rank(&self) -> usize {
        self.shape.rank
    }

    /// Leaves in lexicographic order.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    /// Value of a rank-0 tensor (the single leaf otherwise).
    pub fn value(&self) -> f64 {
        self.data[0]
    }

    pub fn get(&self, index: &[usize]) -> Result<f64> {
        if index.len() != self.rank() {
            return Err(Error::ArgumentMismatch {
                op: "get",
                expected: format!("{} indices", self.rank()),
                got: format!("{}", index.len()),
            });
        }
        let mut flat = 0;
        for &i in index {
            if i >= self.dim() {
                return Err(Error::IndexOutOfRange { index: i, dim: self.dim() });
            }
            flat = flat * self.dim() + i;
        }
        Ok(self.data[flat])
    }

    fn child_len(&self) -> usize {
        self.data.len() / self.dim()
    }

    /// Row component `T^k = T(e_k, ...)`.
    pub fn row_component(&self, k: usize) -> Result<Tensor> {
        self.require_rank("row_component", 1, "rank >= 1")?;
        if k >= self.dim() {
            return Err(Error::IndexOutOfRange { index: k, dim: self.dim() });
        }
        let len = self.child_len();
        Ok(Tensor {
            shape: TensorShape {
                dim: self.dim(),
                rank: self.rank() - 1,
            },
            data: self.data[k * len..(k + 1) * len].to_vec(),
        })
    }

    pub fn rows(&self) -> Result<Vec<Tensor>> {
        (0..self.dim()).map(|k| self.row_component(k)).collect()
    }

    /// `T(v_1, ..., v_q) = {T^*(v_2, ..., v_q)}(v_1)`.
    pub fn evaluate(&self, args: &[&[f64]]) -> Result<f64> {
        if args.len() != self.rank() {
            return Err(Error::ArgumentMismatch {
                op: "evaluate",
                expected: format!("{} arguments", self.rank()),
                got: format!("{}", args.len()),
            });
        }
        for a in args {
            self.check_vector("evaluate", a)?;
        }
        Ok(eval_block(&self.data, self.dim(), args))
    }

    pub fn linear_combine(a: f64, t: &Tensor, b: f64, s: &Tensor) -> Result<Tensor> {
        t.same_shape("linear_combine", s)?;
        Ok(Tensor {
            shape: t.shape,
            data: t.data.iter().zip(&s.data).map(|(x, y)| a * x + b * y).collect(),
        })
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        Self::linear_combine(1.0, self, 1.0, other)
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor> {
        Self::linear_combine(1.0, self, -1.0, other)
    }

    pub fn scale(&self, a: f64) -> Tensor {
        Tensor {
            shape: self.shape,
            data: self.data.iter().map(|x| a * x).collect(),
        }
    }

    pub fn add_assign_scaled(&mut self, a: f64, other: &Tensor) -> Result<()> {
        self.same_shape("add_assign_scaled", other)?;
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += a * y;
        }
        Ok(())
    }

    /// Frobenius inner product `S ⊙ T`.
    pub fn frobenius(&self, other: &Tensor) -> Result<f64> {
        self.same_shape("frobenius", other)?;
        Ok(self.data.iter().zip(&other.data).map(|(x, y)| x * y).sum())
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// `‖self − other‖_F`.
    pub fn distance(&self, other: &Tensor) -> Result<f64> {
        self.same_shape("distance", other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt())
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// `S ⊗ T = {S^* ⊗ T}`.
    pub fn outer(&self, other: &Tensor) -> Result<Tensor> {
        self.same_dim("outer", other)?;
        let shape = TensorShape::new(self.dim(), self.rank() + other.rank())?;
        let mut data = Vec::with_capacity(shape.leaf_count());
        for &s in &self.data {
            data.extend(other.data.iter().map(|t| s * t));
        }
        Ok(Tensor { shape, data })
    }

    /// Left insertion `T(v) = Σ_* v^* T^*`.
    pub fn insert_left(&self, v: &[f64]) -> Result<Tensor> {
        self.require_rank("insert_left", 1, "rank >= 1")?;
        self.check_vector("insert_left", v)?;
        let len = self.child_len();
        let mut data = vec![0.0; len];
        for (k, &vk) in v.iter().enumerate() {
            if vk != 0.0 {
                for (d, s) in data.iter_mut().zip(&self.data[k * len..(k + 1) * len]) {
                    *d += vk * s;
                }
            }
        }
        Ok(Tensor {
            shape: TensorShape {
                dim: self.dim(),
                rank: self.rank() - 1,
            },
            data,
        })
    }

    /// Right insertion `T · v = {T^* · v}`: every bottom covector is paired with `v`.
    pub fn insert_right(&self, v: &[f64]) -> Result<Tensor> {
        self.require_rank("insert_right", 1, "rank >= 1")?;
        self.check_vector("insert_right", v)?;
        let data = self
            .data
            .chunks_exact(self.dim())
            .map(|leaf| leaf.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect();
        Ok(Tensor {
            shape: TensorShape {
                dim: self.dim(),
                rank: self.rank() - 1,
            },
            data,
        })
    }

    /// Left contraction `S : T = Σ_* S^* : T^*` with `rank(S) <= rank(T)`.
    pub fn contract_left(&self, t: &Tensor) -> Result<Tensor> {
        let s = self;
        s.same_dim("contract_left", t)?;
        if s.rank() > t.rank() {
            return Err(Error::Rank {
                op: "contract_left",
                rank: s.rank(),
                requirement: "left operand rank must not exceed right operand rank",
            });
        }
        let inner = t.data.len() / s.data.len();
        let mut data = vec![0.0; inner];
        for (k, &sk) in s.data.iter().enumerate() {
            if sk != 0.0 {
                for (d, v) in data.iter_mut().zip(&t.data[k * inner..(k + 1) * inner]) {
                    *d += sk * v;
                }
            }
        }
        Ok(Tensor {
            shape: TensorShape {
                dim: t.dim(),
                rank: t.rank() - s.rank(),
            },
            data,
        })
    }

    /// Right contraction `T : S = {T^* : S}` with `rank(S) <= rank(T)`.
    pub fn contract_right(&self, s: &Tensor) -> Result<Tensor> {
        let t = self;
        t.same_dim("contract_right", s)?;
        if s.rank() > t.rank() {
            return Err(Error::Rank {
                op: "contract_right",
                rank: s.rank(),
                requirement: "right operand rank must not exceed left operand rank",
            });
        }
        let block = s.data.len();
        let data = t
            .data
            .chunks_exact(block)
            .map(|c| c.iter().zip(&s.data).map(|(a, b)| a * b).sum())
            .collect();
        Ok(Tensor {
            shape: TensorShape {
                dim: t.dim(),
                rank: t.rank() - s.rank(),
            },
            data,
        })
    }

    /// `T ⊚ S`: every bottom covector `u^T` of `T` is replaced by `u^T : S`.
    pub fn bigcirc(&self, s: &Tensor) -> Result<Tensor> {
        let t = self;
        t.same_dim("bigcirc", s)?;
        t.require_rank("bigcirc", 1, "rank >= 1")?;
        s.require_rank("bigcirc", 1, "rank >= 1")?;
        let n = t.dim();
        let shape = TensorShape::new(n, t.rank() + s.rank() - 2)?;
        let tail = s.data.len() / n;
        let mut data = vec![0.0; shape.leaf_count()];
        for (leaf, out) in t.data.chunks_exact(n).zip(data.chunks_exact_mut(tail)) {
            for (k, &uk) in leaf.iter().enumerate() {
                if uk != 0.0 {
                    for (o, v) in out.iter_mut().zip(&s.data[k * tail..(k + 1) * tail]) {
                        *o += uk * v;
                    }
                }
            }
        }
        Ok(Tensor { shape, data })
    }

    /// Transpose of a rank-2 tensor, `T̄ = {T : e^*}`.
    pub fn transpose2(&self) -> Result<Tensor> {
        if self.rank() != 2 {
            return Err(Error::Rank {
                op: "transpose2",
                rank: self.rank(),
                requirement: "rank == 2",
            });
        }
        let n = self.dim();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j];
            }
        }
        Ok(Tensor {
            shape: self.shape,
            data,
        })
    }

    /// Stacks `n` equally shaped tensors along a new deepest axis:
    /// `result · e_l = parts[l]`.
    pub fn stack_deepest(parts: &[Tensor]) -> Result<Tensor> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidShape("nothing to stack".into()))?;
        let n = first.dim();
        if parts.len() != n {
            return Err(Error::ArgumentMismatch {
                op: "stack_deepest",
                expected: format!("{n} parts"),
                got: format!("{}", parts.len()),
            });
        }
        for p in parts {
            first.same_shape("stack_deepest", p)?;
        }
        let shape = TensorShape::new(n, first.rank() + 1)?;
        let len = first.data.len();
        let mut data = vec![0.0; len * n];
        for (l, p) in parts.iter().enumerate() {
            for (i, v) in p.data.iter().enumerate() {
                data[i * n + l] = *v;
            }
        }
        Ok(Tensor { shape, data })
    }

    /// Trace over the two deepest axes.
    pub fn trace_last_two(&self) -> Result<Tensor> {
        self.require_rank("trace_last_two", 2, "rank >= 2")?;
        let n = self.dim();
        let data = self
            .data
            .chunks_exact(n * n)
            .map(|b| (0..n).map(|k| b[k * n + k]).sum())
            .collect();
        Ok(Tensor {
            shape: TensorShape {
                dim: n,
                rank: self.rank() - 2,
            },
            data,
        })
    }

    /// Swaps the two deepest axes.
    pub fn swap_last_two(&self) -> Result<Tensor> {
        self.require_rank("swap_last_two", 2, "rank >= 2")?;
        let n = self.dim();
        let mut data = self.data.clone();
        for (dst, src) in data.chunks_exact_mut(n * n).zip(self.data.chunks_exact(n * n)) {
            for i in 0..n {
                for j in 0..n {
                    dst[j * n + i] = src[i * n + j];
                }
            }
        }
        Ok(Tensor {
            shape: self.shape,
            data,
        })
    }

    /// `(T ∘ A)(v_1, ..., v_q) = T(A_1 v_1, ..., A_q v_q)` for rank-2 tensors `A_k`
    /// read as matrices. With every `A_k = P` this is the tangential projection.
    pub fn apply_per_slot(&self, mats: &[&Tensor]) -> Result<Tensor> {
        if mats.len() != self.rank() {
            return Err(Error::ArgumentMismatch {
                op: "apply_per_slot",
                expected: format!("{} matrices", self.rank()),
                got: format!("{}", mats.len()),
            });
        }
        let n = self.dim();
        for m in mats {
            if m.rank() != 2 || m.dim() != n {
                return Err(Error::ShapeMismatch {
                    op: "apply_per_slot",
                    left: self.shape,
                    right: m.shape,
                });
            }
        }
        let mut cur = self.data.clone();
        let total = cur.len();
        let mut stride = total;
        for m in mats {
            // contract the slot whose stride is stride/n: new[.., j, ..] = Σ_i cur[.., i, ..] A[i][j]
            let inner = stride / n;
            let mut next = vec![0.0; total];
            for outer in (0..total).step_by(stride) {
                for i in 0..n {
                    for j in 0..n {
                        let a = m.data[i * n + j];
                        if a == 0.0 {
                            continue;
                        }
                        let src = outer + i * inner;
                        let dst = outer + j * inner;
                        for r in 0..inner {
                            next[dst + r] += a * cur[src + r];
                        }
                    }
                }
            }
            cur = next;
            stride = inner;
        }
        Ok(Tensor {
            shape: self.shape,
            data: cur,
        })
    }

    fn same_shape(&self, op: &'static str, other: &Tensor) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch {
                op,
                left: self.shape,
                right: other.shape,
            });
        }
        Ok(())
    }

    fn same_dim(&self, op: &'static str, other: &Tensor) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::ShapeMismatch {
                op,
                left: self.shape,
                right: other.shape,
            });
        }
        Ok(())
    }

    fn require_rank(&self, op: &'static str, min: usize, requirement: &'static str) -> Result<()> {
        if self.rank() < min {
            return Err(Error::Rank {
                op,
                rank: self.rank(),
                requirement,
            });
        }
        Ok(())
    }

    fn check_vector(&self, op: &'static str, v: &[f64]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::ArgumentMismatch {
                op,
                expected: format!("vector of dimension {}", self.dim()),
                got: format!("dimension {}", v.len()),
            });
        }
        Ok(())
    }
}

fn eval_block(block: &[f64], n: usize, args: &[&[f64]]) -> f64 {
    match args.split_first() {
        None => block[0],
        Some((v, rest)) => {
            let len = block.len() / n;
            v.iter()
                .enumerate()
                .filter(|(_, vk)| **vk != 0.0)
                .map(|(k, vk)| vk * eval_block(&block[k * len..(k + 1) * len], n, rest))
                .sum()
        }
    }
}

pub(crate) fn unflatten(mut flat: usize, dim: usize, idx: &mut [usize]) {
    for slot in idx.iter_mut().rev() {
        *slot = flat % dim;
        flat /= dim;
    }
}

/// Euclidean dot product.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn unit_vector(dim: usize, k: usize) -> Vec<f64> {
    let mut e = vec![0.0; dim];
    e[k] = 1.0;
    e
}
