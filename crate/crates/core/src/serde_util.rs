//! Serde helpers for complex numbers encoded as `[re, im]` pairs.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::operator::DenseOperator;

pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn unpair(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

pub mod complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|z| pair(*z)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let raw = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(raw.into_iter().map(unpair).collect())
    }
}

/// Row-major `[[re, im], …]` grid.
pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(a: &DenseOperator) -> MatrixJson {
    (0..a.rows()).map(|i| (0..a.cols()).map(|j| pair(a.get(i, j))).collect()).collect()
}

pub fn matrix_from_json(rows: &MatrixJson) -> Result<DenseOperator> {
    let data: Vec<Vec<Complex64>> =
        rows.iter().map(|r| r.iter().map(|p| unpair(*p)).collect()).collect();
    DenseOperator::from_rows(&data).map_err(|e| Error::Parse(e.to_string()))
}
