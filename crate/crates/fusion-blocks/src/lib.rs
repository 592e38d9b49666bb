//! Exact computation of fusion-ring structure, conformal-block bundle ranks
//! on stable pointed curves, and genus-one trace-function identities over a
//! concrete graded-module backend (the rank-1 free-boson Fock module).
//!
//! The crate is organized around three strands:
//!
//! * [`fusion`] / [`catalog`] / [`graph`] / [`rank`] — integer fusion tensors,
//!   their axioms, a catalog of concrete rings with a numeric S-matrix
//!   cross-check, and rank formulas for conformal-block bundles evaluated both
//!   in closed form and by dual-graph factorization.
//! * [`scalar`] / [`qseries`] / [`laurent`] / [`elliptic`] — exact series
//!   arithmetic over Q[u, u^-1] (u marks 2πi) and the elliptic-function
//!   corpus: Eisenstein q-expansions, Weierstrass-type Laurent expansions,
//!   and the P-series in both expansion regions.
//! * [`fock`] / [`torus`] — a free-boson mode-algebra backend and order-by-order
//!   verification of the torus trace-function recursion identities.
//!
//! Each major capability has a runnable example under `examples/`; the
//! `fusion-blocks` binary exposes the same operations as subcommands.

pub mod catalog;
pub mod cli;
pub mod elliptic;
pub mod fock;
pub mod fusion;
pub mod graph;
pub mod laurent;
pub mod qseries;
pub mod rank;
pub mod ratseries;
pub mod scalar;
pub mod torus;

pub use fusion::{FusionData, IntMatrix};
pub use graph::DualGraph;
pub use laurent::ZLaurent;
pub use qseries::QSeries;
pub use scalar::ExactScalar;
