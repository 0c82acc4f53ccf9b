//! Exact q-Euler numbers and polynomials, Dirichlet-twisted q-l-values at
//! negative integers, the p-adic q-l-function as a guarded truncated series,
//! and a harness that checks the congruences and power-sum expansion these
//! objects satisfy.

pub mod characters;
pub mod error;
pub mod lfun;
pub mod numerics;
pub mod qeuler;
pub mod verify;

pub use error::{Error, Result};
