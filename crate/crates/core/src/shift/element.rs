use std::collections::BTreeMap;
use std::fmt;

use super::rational::CRational;

/// Normal-form word `Tᵃ T*ᵇ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ShiftWord {
    pub a: u32,
    pub b: u32,
}

impl ShiftWord {
    pub const IDENTITY: ShiftWord = ShiftWord { a: 0, b: 0 };

    pub fn new(a: u32, b: u32) -> Self {
        Self { a, b }
    }

    pub fn adjoint(self) -> ShiftWord {
        ShiftWord::new(self.b, self.a)
    }

    pub fn degree(self) -> u32 {
        self.a + self.b
    }
}

/// Product of normal forms, rewritten with `T*T = I`.
impl std::ops::Mul for ShiftWord {
    type Output = ShiftWord;

    fn mul(self, o: ShiftWord) -> ShiftWord {
        if self.b <= o.a {
            ShiftWord::new(self.a + o.a - self.b, o.b)
        } else {
            ShiftWord::new(self.a, self.b - o.a + o.b)
        }
    }
}

impl fmt::Display for ShiftWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pow = |f: &mut fmt::Formatter<'_>, sym: &str, k: u32| match k {
            0 => Ok(()),
            1 => write!(f, "{sym}"),
            _ => write!(f, "{sym}^{k}"),
        };
        if self.a == 0 && self.b == 0 {
            return write!(f, "I");
        }
        pow(f, "T", self.a)?;
        pow(f, "T*", self.b)
    }
}

/// Finite linear combination of normal-form words. Zero coefficients are never stored,
/// so `terms.is_empty()` is an exact zero test.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ShiftElement {
    terms: BTreeMap<ShiftWord, CRational>,
}

impl ShiftElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(CRational::one())
    }

    pub fn scalar(c: CRational) -> Self {
        Self::term(ShiftWord::IDENTITY, c)
    }

    /// `T`.
    pub fn t() -> Self {
        Self::word(1, 0)
    }

    /// `T*`.
    pub fn t_star() -> Self {
        Self::word(0, 1)
    }

    pub fn word(a: u32, b: u32) -> Self {
        Self::term(ShiftWord::new(a, b), CRational::one())
    }

    pub fn term(w: ShiftWord, c: CRational) -> Self {
        let mut out = Self::zero();
        out.accumulate(w, c);
        out
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (ShiftWord, CRational)>) -> Self {
        let mut out = Self::zero();
        for (w, c) in terms {
            out.accumulate(w, c);
        }
        out
    }

    fn accumulate(&mut self, w: ShiftWord, c: CRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(old) => {
                let sum = &*old + &c;
                if sum.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *old = sum;
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ShiftWord, &CRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: ShiftWord) -> CRational {
        self.terms.get(&w).cloned().unwrap_or_else(CRational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Largest `a + b` over stored words; 0 for the zero element.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|w| w.degree()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.accumulate(*w, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.accumulate(*w, -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&CRational::from_int(-1))
    }

    pub fn scale(&self, c: &CRational) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, x)| (*w, x * c)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                out.accumulate(*w1 * *w2, c1 * c2);
            }
        }
        out
    }

    pub fn adjoint_sym(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, c)| (w.adjoint(), c.conj())))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }
}

impl fmt::Display for ShiftElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if *c == CRational::one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{c}·{w}")?;
            }
        }
        Ok(())
    }
}

pub fn mul(x: &ShiftElement, y: &ShiftElement) -> ShiftElement {
    x.mul(y)
}

pub fn adjoint_sym(x: &ShiftElement) -> ShiftElement {
    x.adjoint_sym()
}
