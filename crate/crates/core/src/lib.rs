pub mod arith;
pub mod cyclotomy;
pub mod diffset;
pub mod error;
pub mod field;
pub mod ledger;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod schur;

pub use error::{Error, Result};
