//! Cohomology jump loci, resonance varieties and tangent cones of finite
//! CDGA models, groups and hyperplane arrangements.

pub mod arrangements;
pub mod cdga;
pub mod elliptic;
pub mod error;
pub mod exterior;
pub mod fixtures;
pub mod fox;
pub mod jump_loci;
pub mod tcone;

pub use cdga::{CdgaSpec, FiniteCdga, QComplex, UniversalComplex, Violation};
pub use error::{CoreError, Result};
