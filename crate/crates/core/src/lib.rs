//! Numerical entanglement toolkit: tensor-product linear algebra, named
//! states, separability criteria, entanglement measures, Bell tests and exact
//! simulation of LOCC protocols.

pub mod error;
pub mod format;
pub mod linalg;
pub mod locc;
pub mod measures;
pub mod nonlocality;
pub mod rng;
pub mod separability;
pub mod states;
pub mod tol;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, DensityMatrix, Partition, PureState, C64};
pub use tol::Tolerances;
