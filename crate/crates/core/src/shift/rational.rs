use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact complex rational `re + i·im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl CRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    /// `num/den`, real. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::new(BigRational::new(num.into(), den.into()), BigRational::zero())
    }

    /// `(nr/dr) + i·(ni/di)`.
    pub fn from_parts(nr: i64, dr: i64, ni: i64, di: i64) -> Option<Self> {
        if dr == 0 || di == 0 {
            return None;
        }
        Some(Self::new(
            BigRational::new(nr.into(), dr.into()),
            BigRational::new(ni.into(), di.into()),
        ))
    }

    /// `[num_re, den_re, num_im, den_im]` when every part fits in `i64`.
    pub fn to_parts(&self) -> Option<[i64; 4]> {
        Some([
            self.re.numer().to_i64()?,
            self.re.denom().to_i64()?,
            self.im.numer().to_i64()?,
            self.im.denom().to_i64()?,
        ])
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // enormous parts: fall back to a scaled division
        let n: &BigInt = r.numer();
        let d: &BigInt = r.denom();
        let shift = n.bits().max(d.bits()).saturating_sub(1000);
        let n = (n >> shift).to_f64().unwrap_or(f64::MAX);
        let d = (d >> shift).to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

impl Add for &CRational {
    type Output = CRational;
    fn add(self, o: &CRational) -> CRational {
        CRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &CRational {
    type Output = CRational;
    fn sub(self, o: &CRational) -> CRational {
        CRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &CRational {
    type Output = CRational;
    fn mul(self, o: &CRational) -> CRational {
        CRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &CRational {
    type Output = CRational;
    fn neg(self) -> CRational {
        CRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl fmt::Display for CRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "({}{}{}i)", self.re, sign, self.im.abs())
            }
        }
    }
}
