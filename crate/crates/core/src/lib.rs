//! Finite-section laboratory for Foguel-type block operators
//! `[[Y, X], [0, Z]]` on `H² ⊕ H²`, where `Y`, `Z` are the forward or backward
//! shift and `X` is a Toeplitz or Hankel operator with a scalar symbol.
//!
//! The crate decides (with graded verdicts), certifies (by constructing
//! intertwiners and checking their defining identities on exact finite
//! sections), and stress-tests the symbol-side characterizations of when such
//! block operators are similar to contractions.
//!
//! Layout:
//! - [`symbol`]: Fourier-side algebra of `L∞(T)` symbols.
//! - [`opmat`]: exact finite sections in the monomial basis.
//! - [`analysis`]: norms, growth profiles and function-class testers.
//! - [`characterize`]: the per-case decision procedures.
//! - [`intertwine`]: intertwiner certificates, the Sylvester oracle and
//!   identity verifiers.
//! - [`corpus`]: the built-in regression table.

pub mod analysis;
pub mod characterize;
pub mod config;
pub mod corpus;
pub mod error;
pub mod intertwine;
pub mod opmat;
pub mod symbol;
pub mod verdict;

pub use num_complex::Complex64 as C64;

pub use config::LabConfig;
pub use error::{LabError, Result};
pub use opmat::{DiagPair, FoguelCase, OffKind, OperatorSection};
pub use symbol::FourierSymbol;
pub use verdict::{Status, Verdict};
