pub mod backend;
pub mod classify;
pub mod cli;
pub mod dilation;
pub mod error;
pub mod fundamental;
pub mod geometry;
pub mod lab;
pub mod operator;
pub mod report;
pub mod serde_util;
pub mod shift;
pub mod tuple;

pub use error::{Error, Result};
pub use operator::DenseOperator;
