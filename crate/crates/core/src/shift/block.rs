use std::fmt;

use num_complex::Complex64;

use super::element::ShiftElement;
use super::rational::CRational;
use crate::error::{Error, Result};
use crate::operator::DenseOperator;

/// `m × m` block matrix over [`ShiftElement`], stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockShiftOperator {
    m: usize,
    blocks: Vec<ShiftElement>,
}

impl BlockShiftOperator {
    pub fn new(m: usize, blocks: Vec<ShiftElement>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Parameter("block dimension must be at least 1".into()));
        }
        if blocks.len() != m * m {
            return Err(Error::Parameter(format!(
                "expected {} blocks for m = {m}, got {}",
                m * m,
                blocks.len()
            )));
        }
        Ok(Self { m, blocks })
    }

    pub fn from_rows(rows: Vec<Vec<ShiftElement>>) -> Result<Self> {
        let m = rows.len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Parameter("block rows must form a square array".into()));
        }
        Self::new(m, rows.into_iter().flatten().collect())
    }

    pub fn zero(m: usize) -> Self {
        assert!(m >= 1, "block dimension must be at least 1");
        Self { m, blocks: vec![ShiftElement::zero(); m * m] }
    }

    pub fn identity(m: usize) -> Self {
        Self::diag(vec![ShiftElement::one(); m])
    }

    pub fn diag(entries: Vec<ShiftElement>) -> Self {
        let m = entries.len();
        let mut out = Self::zero(m);
        for (i, e) in entries.into_iter().enumerate() {
            out.blocks[i * m + i] = e;
        }
        out
    }

    /// `1 × 1` operator wrapping one element.
    pub fn single(x: ShiftElement) -> Self {
        Self::diag(vec![x])
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &ShiftElement {
        &self.blocks[i * self.m + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: ShiftElement) {
        self.blocks[i * self.m + j] = x;
    }

    pub fn blocks(&self) -> &[ShiftElement] {
        &self.blocks
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(ShiftElement::is_zero)
    }

    pub fn degree(&self) -> u32 {
        self.blocks.iter().map(ShiftElement::degree).max().unwrap_or(0)
    }

    fn conformable(&self, o: &Self, op: &str) -> Result<()> {
        if self.m != o.m {
            return Err(Error::Parameter(format!(
                "block dimension mismatch in {op}: {} vs {}",
                self.m, o.m
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.conformable(o, "add")?;
        Ok(self.zip(o, ShiftElement::add))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.conformable(o, "sub")?;
        Ok(self.zip(o, ShiftElement::sub))
    }

    fn zip(&self, o: &Self, f: impl Fn(&ShiftElement, &ShiftElement) -> ShiftElement) -> Self {
        let blocks = self.blocks.iter().zip(&o.blocks).map(|(x, y)| f(x, y)).collect();
        Self { m: self.m, blocks }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.conformable(o, "mul")?;
        let m = self.m;
        let mut out = Self::zero(m);
        for i in 0..m {
            for j in 0..m {
                let mut acc = ShiftElement::zero();
                for k in 0..m {
                    let (x, y) = (self.get(i, k), o.get(k, j));
                    if !x.is_zero() && !y.is_zero() {
                        acc = acc.add(&x.mul(y));
                    }
                }
                out.blocks[i * m + j] = acc;
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> Self {
        let m = self.m;
        let mut out = Self::zero(m);
        for i in 0..m {
            for j in 0..m {
                out.blocks[j * m + i] = self.get(i, j).adjoint_sym();
            }
        }
        out
    }

    pub fn scale(&self, c: &CRational) -> Self {
        Self { m: self.m, blocks: self.blocks.iter().map(|x| x.scale(c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.m);
        for _ in 0..k {
            out = out.mul(self).expect("same block dimension");
        }
        out
    }

    /// Exact test for `x* = x` and `x² = x`.
    pub fn is_projection_sym(&self) -> bool {
        self.adjoint() == *self && self.mul(self).expect("square") == *self
    }

    /// Principal submatrix on the given block indices.
    pub fn compress(&self, idx: &[usize]) -> Self {
        let k = idx.len();
        let mut out = Self::zero(k.max(1));
        if k == 0 {
            return out;
        }
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out.blocks[a * k + b] = self.get(i, j).clone();
            }
        }
        out
    }

    /// Inverse of [`compress`](Self::compress): embeds `self` at `idx` inside an `m × m` zero operator.
    pub fn extend(&self, idx: &[usize], m: usize) -> Result<Self> {
        if idx.len() != self.m || idx.iter().any(|&i| i >= m) {
            return Err(Error::Parameter("extension indices do not match block dimension".into()));
        }
        let mut out = Self::zero(m);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out.blocks[i * m + j] = self.get(a, b).clone();
            }
        }
        Ok(out)
    }

    /// Replaces `T` by the `n × n` lower shift; the result is `(m·n) × (m·n)`.
    pub fn truncate_to_dense(&self, n: usize) -> Result<DenseOperator> {
        let d = self.degree() as usize;
        if n <= d {
            return Err(Error::Parameter(format!(
                "truncation size {n} must exceed the maximal word degree {d}"
            )));
        }
        let m = self.m;
        let mut out = DenseOperator::zeros(m * n, m * n);
        for bi in 0..m {
            for bj in 0..m {
                let block = truncate_element(self.get(bi, bj), n);
                out.set_block(bi * n, bj * n, &block);
            }
        }
        Ok(out)
    }
}

/// `n × n` truncation of one element.
pub fn truncate_element(x: &ShiftElement, n: usize) -> DenseOperator {
    let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
    for (w, c) in x.terms() {
        let (a, b) = (w.a as usize, w.b as usize);
        let z = c.to_complex();
        // T^a T*^b e_j = e_{j-b+a} for j ≥ b, when the target index stays below n
        for j in b..n {
            let i = j - b + a;
            if i < n {
                entries[i * n + j] += z;
            }
        }
    }
    DenseOperator::new(n, n, entries).expect("finite coefficients")
}

/// Column indices of the safe window: the first `n − d` coordinates of each of the `m` blocks.
pub fn safe_window(m: usize, n: usize, d: u32) -> Vec<usize> {
    let keep = n.saturating_sub(d as usize);
    (0..m).flat_map(|blk| (0..keep).map(move |k| blk * n + k)).collect()
}

/// Largest entry of `x − y` restricted to the safe-window columns.
pub fn safe_window_gap(x: &DenseOperator, y: &DenseOperator, cols: &[usize]) -> f64 {
    let mut gap: f64 = 0.0;
    for &j in cols {
        for i in 0..x.rows() {
            gap = gap.max((x.get(i, j) - y.get(i, j)).norm());
        }
    }
    gap
}

/// `Q = I − S*S`, returned as its own square root when it is a projection.
pub fn defect_sym(s: &BlockShiftOperator) -> Result<BlockShiftOperator> {
    let q = BlockShiftOperator::identity(s.m()).sub(&s.adjoint().mul(s)?)?;
    if q.is_projection_sym() {
        Ok(q)
    } else {
        Err(Error::SymbolicSqrtUnsupported(format!("I − S*S is not a projection: {q}")))
    }
}

pub fn is_projection_sym(x: &BlockShiftOperator) -> bool {
    x.is_projection_sym()
}

impl fmt::Display for BlockShiftOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.m {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.m {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}
