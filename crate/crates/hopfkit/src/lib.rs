//! Exact-arithmetic workbench for Hopf algebras given by presentations:
//! bicrossed products, cocycle and pairing deformations, twisted tensor
//! products and Hopf-Galois objects.

pub mod algebra;
pub mod bicrossed;
pub mod catalog;
pub mod deform;
pub mod error;
pub mod hopf;
pub mod form;
pub mod galois;
pub mod classify;
pub mod lin;
pub mod linalg;
pub mod pres;
pub mod report;
pub mod scalar;
pub mod tensor;

pub use error::{Error, Result};
pub use hopf::{verify_hopf, HopfData};
pub use lin::Lin;
pub use pres::{Builder, Element, Letter, Monomial, Presentation, Window};
pub use report::{Report, Status};
pub use scalar::Scalar;
