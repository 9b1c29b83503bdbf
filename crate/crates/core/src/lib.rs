//! Exact computations in the morphism category of modules over a computable base ring.

pub mod abelian;
pub mod cli;
pub mod endo;
pub mod error;
pub mod invariants;
pub mod linalg;
pub mod matrix;
pub mod module;
pub mod morph;
pub mod oracle;
pub mod poly;
pub mod ring;
pub mod triangular;

pub use error::{Error, Result};
pub use matrix::ExactMatrix;
pub use ring::{Ring, Scalar};
pub use module::{FPModule, ModuleHom};
