use serde::{Deserialize, Serialize};

use super::block::BlockShiftOperator;
use super::element::{ShiftElement, ShiftWord};
use super::rational::CRational;
use crate::error::{Error, Result};

/// `{"a", "b", "coeff": [num_re, den_re, num_im, den_im]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub a: u32,
    pub b: u32,
    pub coeff: [i64; 4],
}

/// `{"m", "blocks": [[[term, ...], ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockJson {
    pub m: usize,
    pub blocks: Vec<Vec<Vec<TermJson>>>,
}

pub fn element_to_json(x: &ShiftElement) -> Result<Vec<TermJson>> {
    x.terms()
        .map(|(w, c)| {
            let coeff = c.to_parts().ok_or_else(|| {
                Error::Parameter(format!("coefficient {c} does not fit the i64 term encoding"))
            })?;
            Ok(TermJson { a: w.a, b: w.b, coeff })
        })
        .collect()
}

pub fn element_from_json(terms: &[TermJson]) -> Result<ShiftElement> {
    let mut out = ShiftElement::zero();
    for t in terms {
        let [nr, dr, ni, di] = t.coeff;
        let c = CRational::from_parts(nr, dr, ni, di)
            .ok_or_else(|| Error::Parse(format!("zero denominator in term {t:?}")))?;
        out = out.add(&ShiftElement::term(ShiftWord::new(t.a, t.b), c));
    }
    Ok(out)
}

impl BlockShiftOperator {
    pub fn to_json(&self) -> Result<BlockJson> {
        let m = self.m();
        let blocks = (0..m)
            .map(|i| (0..m).map(|j| element_to_json(self.get(i, j))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(BlockJson { m, blocks })
    }

    pub fn from_json(j: &BlockJson) -> Result<Self> {
        if j.blocks.len() != j.m || j.blocks.iter().any(|r| r.len() != j.m) {
            return Err(Error::Parse(format!("block array is not {0}×{0}", j.m)));
        }
        let rows = j
            .blocks
            .iter()
            .map(|r| r.iter().map(|t| element_from_json(t)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        BlockShiftOperator::from_rows(rows).map_err(|e| Error::Parse(e.to_string()))
    }
}
