//! Exact algorithms for free-abelian times free groups `Fn × Zm`, their
//! endomorphisms, and ascending HNN extensions.

pub mod cli;
pub mod decide;
pub mod decision;
pub mod endo;
pub mod error;
pub mod fatf;
pub mod hnn;
pub mod linalg;
pub mod oracle;
pub mod orbit;
pub mod parse;
pub mod verify;
pub mod words;

pub use decide::Solver;
pub use decision::{Certificate, Config, Decision, LogSet, Taint};
pub use endo::{Endomorphism, TypeI, TypeII, TypeIIMatrices};
pub use error::{Error, Result};
pub use fatf::{FatfElement, Signature};
pub use hnn::{HnnElement, HnnGroup};
pub use oracle::{Backend, DeskOracle, FreeOracle, OracleConfig};
pub use words::{CyclicDecomposition, Letter, SubgroupGraph, Word};

pub type Int = num_bigint::BigInt;
pub type IntMatrix = linalg::Matrix<Int>;
pub type IntVector = Vec<Int>;
