//! Exact and Monte-Carlo computation of character fluctuations for sequences of
//! representations of symmetric groups.
//!
//! The crate is organised bottom-up:
//!
//! - [`algebra`]: permutations, partial permutations and their group algebra;
//! - [`partition`]: set partitions and their lattice;
//! - [`conjugacy`]: normalized class indicators `Σ_k`, `Σ_π`, fat partitions and genus;
//! - [`cumulants`]: classical, disjoint and conditional cumulants;
//! - [`diagrams`]: Young diagrams, transition measures and free cumulants;
//! - [`characters`]: irreducible characters and measures on diagrams;
//! - [`models`]: sequences of reducible representations with their predicted limits;
//! - [`diagnostics`]: exact cumulants and the scaled factorization conditions;
//! - [`montecarlo`]: samplers and fluctuation statistics;
//! - [`verify`]: self-verification suites shared by the CLI and the test-suite.

pub mod algebra;
pub mod characters;
pub mod conjugacy;
pub mod cumulants;
pub mod diagnostics;
pub mod diagrams;
pub mod models;
pub mod montecarlo;
pub mod error;
pub mod num;
pub mod partition;
pub mod verify;

pub use error::{Error, Result};
pub use num::Rational;
