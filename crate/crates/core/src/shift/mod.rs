//! Exact *-algebra generated by the unilateral shift `T` with `T*T = I`.

mod block;
mod element;
mod json;
mod rational;

pub use block::{defect_sym, is_projection_sym, safe_window, safe_window_gap, truncate_element, BlockShiftOperator};
pub use element::{adjoint_sym, mul, ShiftElement, ShiftWord};
pub use json::{element_from_json, element_to_json, BlockJson, TermJson};
pub use rational::CRational;
