//! Pencils and classifier batteries: Γₙ-unitary, Γₙ-isometry, the Γ₂ battery, the sampled
//! von Neumann test, the Möbius isometry test and the Wold decomposition.

mod battery;
mod mobius;
mod pencil;
mod polynomial;
mod vonneumann;
mod wold;

use serde::{Deserialize, Serialize};

pub use battery::{contraction_battery, gamma2_battery, is_gamma_isometry, is_gamma_isometry_sym, is_gamma_unitary, IsometryConfig};
pub use mobius::{mobius_battery, mobius_isometry_check};
pub use pencil::{pencil, pencil_battery, PencilValue, PencilWhich};
pub use polynomial::{monomial, multi_indices, Polynomial, Term};
pub use vonneumann::{sampled_sup, von_neumann_entry, von_neumann_sampled, VnConfig, ViolationWitness};
pub use wold::{wold_decompose, wold_rank_growth, WoldReport};

use crate::report::CheckReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    GammaUnitary,
    GammaIsometry,
    PureGammaIsometry,
    /// Every necessary check passed; never a proof of membership.
    NecessaryBatteryPassed,
    ViolationCertificate,
}

/// Verdict plus the evidence it rests on. A `ViolationCertificate` always carries at least
/// one failing entry with a witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifierVerdict {
    pub kind: VerdictKind,
    pub evidence: CheckReport,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub caveats: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<ViolationWitness>,
}

impl ClassifierVerdict {
    pub fn new(kind: VerdictKind, evidence: CheckReport) -> Self {
        Self { kind, evidence, caveats: Vec::new(), witness: None }
    }

    /// `pass_kind` if no entry failed, else `ViolationCertificate`.
    pub fn from_evidence(pass_kind: VerdictKind, evidence: CheckReport) -> Self {
        let kind = if evidence.any_fail() { VerdictKind::ViolationCertificate } else { pass_kind };
        Self::new(kind, evidence)
    }

    pub fn with_witness(mut self, w: ViolationWitness) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn with_caveat(mut self, c: impl Into<String>) -> Self {
        self.caveats.push(c.into());
        self
    }

    pub fn is_violation(&self) -> bool {
        self.kind == VerdictKind::ViolationCertificate
    }
}
