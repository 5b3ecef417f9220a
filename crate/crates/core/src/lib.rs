//! Rank-one p-adic differential equations over Lubin-Tate towers.
//!
//! The crate provides truncated arithmetic in the torsion tower rings of a
//! Lubin-Tate series, Witt vectors over those rings and over Laurent series,
//! Artin-Hasse and π-exponentials, and the solvability, irregularity and
//! classification pipeline for operators `∂ - g(T)` with `∂ = T d/dT`.

pub mod coeff;
pub mod error;
pub mod lubin_tate;
pub mod padic_core;
pub mod rational;
pub mod series;
pub mod solvability;
pub mod witt;

pub use coeff::{Coeff, PRational};
pub use error::{Error, Result};
