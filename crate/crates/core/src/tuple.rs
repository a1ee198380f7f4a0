//! Commuting operator tuples over one backend.

use serde::{Deserialize, Serialize};

use crate::backend::Operator;
use crate::error::{Error, Result};
use crate::operator::{scaled_tol, DenseOperator};
use crate::serde_util::{matrix_from_json, matrix_to_json, MatrixJson};
use crate::shift::{BlockJson, BlockShiftOperator};

/// `(S₁, …, Sₙ)` with `n ≥ 2`, square, equal dimensions, pairwise commuting.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorTuple<O: Operator> {
    ops: Vec<O>,
}

impl<O: Operator> OperatorTuple<O> {
    /// Validates shape and pairwise commutation (exactly for symbolic operators).
    pub fn new(ops: Vec<O>, tol: f64) -> Result<Self> {
        let t = Self::unchecked(ops)?;
        let norms: Vec<f64> = t.ops.iter().map(Operator::magnitude).collect();
        let bound = scaled_tol(tol, norms.iter().map(|x| x * x));
        for i in 0..t.n() {
            for j in i + 1..t.n() {
                let r = t.ops[i].times(&t.ops[j]).minus(&t.ops[j].times(&t.ops[i])).magnitude();
                if !O::within(r, bound) {
                    return Err(Error::Precondition(format!(
                        "S{} and S{} do not commute: residual {r:.3e}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(t)
    }

    /// Shape checks only; used for tuples that commute by construction.
    pub fn unchecked(ops: Vec<O>) -> Result<Self> {
        if ops.len() < 2 {
            return Err(Error::Parameter(format!("need n ≥ 2 operators, got {}", ops.len())));
        }
        let h = ops[0].dim();
        if ops.iter().any(|s| s.dim() != h) {
            return Err(Error::Parameter("operators must share one dimension".into()));
        }
        Ok(Self { ops })
    }

    pub fn n(&self) -> usize {
        self.ops.len()
    }

    pub fn dim(&self) -> usize {
        self.ops[0].dim()
    }

    /// `Sᵢ` with 1-based `i`.
    pub fn s(&self, i: usize) -> &O {
        &self.ops[i - 1]
    }

    pub fn last(&self) -> &O {
        &self.ops[self.ops.len() - 1]
    }

    pub fn ops(&self) -> &[O] {
        &self.ops
    }

    pub fn into_ops(self) -> Vec<O> {
        self.ops
    }

    /// `(S₁*, …, Sₙ*)`.
    pub fn adjoint(&self) -> Self {
        Self { ops: self.ops.iter().map(Operator::dagger).collect() }
    }

    pub fn map(&self, f: impl Fn(usize, &O) -> O) -> Self {
        Self { ops: self.ops.iter().enumerate().map(|(k, s)| f(k + 1, s)).collect() }
    }
}

impl OperatorTuple<DenseOperator> {
    pub fn is_square(&self) -> bool {
        self.ops.iter().all(DenseOperator::is_square)
    }

    /// Tuple of `1 × 1` operators.
    pub fn scalars(s: &[num_complex::Complex64]) -> Result<Self> {
        Self::unchecked(s.iter().map(|z| DenseOperator::scalar(*z)).collect())
    }

    /// Tuple of diagonal operators; `points[k]` is the k-th joint diagonal entry.
    pub fn diagonal(points: &[Vec<num_complex::Complex64>]) -> Result<Self> {
        let n = points.first().map_or(0, Vec::len);
        if points.iter().any(|p| p.len() != n) {
            return Err(Error::Parameter("ragged diagonal points".into()));
        }
        let ops = (0..n)
            .map(|i| DenseOperator::diag(&points.iter().map(|p| p[i]).collect::<Vec<_>>()))
            .collect();
        Self::unchecked(ops)
    }
}

/// A tuple on either backend, as read from a tuple file.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyTuple {
    Dense(OperatorTuple<DenseOperator>),
    Shift(OperatorTuple<BlockShiftOperator>),
}

impl AnyTuple {
    pub fn n(&self) -> usize {
        match self {
            AnyTuple::Dense(t) => t.n(),
            AnyTuple::Shift(t) => t.n(),
        }
    }

    pub fn to_file(&self) -> Result<TupleFile> {
        Ok(match self {
            AnyTuple::Dense(t) => TupleFile {
                n: t.n(),
                backend: BackendTag::Dense,
                ops: t.ops().iter().map(|s| serde_json::to_value(matrix_to_json(s))).collect::<Result<_, _>>()?,
            },
            AnyTuple::Shift(t) => TupleFile {
                n: t.n(),
                backend: BackendTag::Shift,
                ops: t
                    .ops()
                    .iter()
                    .map(|s| Ok(serde_json::to_value(s.to_json()?)?))
                    .collect::<Result<_>>()?,
            },
        })
    }

    pub fn from_file(f: &TupleFile, tol: f64) -> Result<Self> {
        if f.ops.len() != f.n {
            return Err(Error::Parse(format!("n = {} but {} operators given", f.n, f.ops.len())));
        }
        let at = |k: usize, e: Error| Error::Parse(format!("ops[{k}]: {e}"));
        Ok(match f.backend {
            BackendTag::Dense => {
                let mut ops = Vec::with_capacity(f.n);
                for (k, v) in f.ops.iter().enumerate() {
                    let grid: MatrixJson = serde_json::from_value(v.clone()).map_err(|e| at(k, e.into()))?;
                    let m = matrix_from_json(&grid).map_err(|e| at(k, e))?;
                    if !m.is_square() {
                        return Err(at(k, Error::Parameter("operator is not square".into())));
                    }
                    ops.push(m);
                }
                AnyTuple::Dense(OperatorTuple::new(ops, tol)?)
            }
            BackendTag::Shift => {
                let mut ops = Vec::with_capacity(f.n);
                for (k, v) in f.ops.iter().enumerate() {
                    let j: BlockJson = serde_json::from_value(v.clone()).map_err(|e| at(k, e.into()))?;
                    ops.push(BlockShiftOperator::from_json(&j).map_err(|e| at(k, e))?);
                }
                AnyTuple::Shift(OperatorTuple::new(ops, tol)?)
            }
        })
    }

    pub fn parse(text: &str, tol: f64) -> Result<Self> {
        let f: TupleFile = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        Self::from_file(&f, tol)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file()?)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendTag {
    Dense,
    Shift,
}

/// `{"n", "backend", "ops"}`; dense ops are `[[re, im], …]` grids, shift ops block encodings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TupleFile {
    pub n: usize,
    pub backend: BackendTag,
    pub ops: Vec<serde_json::Value>,
}
