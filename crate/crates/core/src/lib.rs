//! Exact computation of the Weil representation of Sp(2n, q), q odd.

pub mod cyc_matrix;
pub mod config;
pub mod constructions;
pub mod cyclotomic;
pub mod error;
pub mod factorize;
pub mod field;
pub mod linalg;
pub mod matrix_rep;
pub mod par;
pub mod symplectic;
pub mod table;
pub mod twisted_algebra;
pub mod verify;

pub use cyclotomic::CycNumber;
pub use error::{Error, Result};
pub use field::{FieldElement, GaloisField};
pub use linalg::FqMatrix;
pub use par::Exec;
