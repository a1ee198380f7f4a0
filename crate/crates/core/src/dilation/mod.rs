//! Truncated Schäffer-type dilations, their verification, minimal spaces, the Γ₃ builders and
//! the necessary-conditions battery.

mod gamma3;
mod minimal;
mod necessary;
mod schaffer;

pub use gamma3::{gamma3_from_isometries, gamma3_symmetrized_triple, sos_identity_check, verify_lifts};
pub use minimal::{check_coisometric_extension, minimal_space, MinimalDilation};
pub use necessary::{PARTIAL_NOTE, necessary_conditions, necessary_conditions_dense, scaled_fundamental_check};
pub use schaffer::{compatibility_check, interior_checks, schaffer_dilation, verify_dilation, TruncatedDilation};
