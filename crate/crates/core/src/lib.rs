//! Coxeter word engine, Tits cone charts, W-metric buildings and
//! displacement of building automorphisms.

pub mod buildings;
pub mod coxeter;
pub mod displacement;
pub mod par;
pub mod tits_cone;
pub mod verify;
pub mod witness;

pub use coxeter::{CoxeterError, CoxeterMatrix, CoxeterSystem, Element, Order, Word};
pub use par::Execution;
