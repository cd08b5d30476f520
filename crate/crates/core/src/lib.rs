pub mod algebra;
pub mod coeff;
pub mod error;
pub mod linalg;
pub mod modules;
pub mod num;
pub mod rational;
pub mod ordering;
pub mod projector;
pub mod qcoeff;
pub mod qpoly;
pub mod quantum;
pub mod rootsys;
pub mod taylor;

pub use error::{Error, Result};
