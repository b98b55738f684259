//! Differential central simple algebras over Q(x): symbolic construction,
//! splitting and triviality checks, hyperexponential solving, Galois group
//! classification and differential ideals.

pub mod algebra;
pub mod dcsa;
pub mod diffmod;
pub mod error;
pub mod galois;
pub mod hypersolve;
pub mod ideals;
pub mod lattice;
pub mod linalg;
pub mod matrix;
pub mod ratfield;

pub use algebra::{Differential, Field, Ring, Q};
pub use dcsa::Dcsa;
pub use error::{Error, Result};
pub use hypersolve::{HyperClass, Hyperexp, SplittingTower, TowerElem};
pub use matrix::Matrix;
pub use ratfield::{PartialFraction, Poly, RatFunc};
