//! Exact computations for cluster algebras, their GSV Poisson brackets and
//! root-of-unity quantizations.

pub mod acyclic;
pub mod azumaya;
pub mod compat;
pub mod conics;
pub mod cyclo;
pub mod error;
pub mod exchange;
pub mod intlin;
pub mod kronecker;
pub mod poisson;
pub mod porder;
pub mod qparam;
pub mod scalar;
pub mod seedio;
pub mod seeds;
pub mod tlaurent;

pub use error::{Error, Result};
