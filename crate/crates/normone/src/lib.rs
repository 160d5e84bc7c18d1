//! Exact local-global obstruction computations for norm-one tori over
//! semiglobal fields.
//!
//! The library combines three layers:
//!
//! * local arithmetic: prime residue fields, precision-tracked Laurent
//!   series, cyclic Kummer extensions with Hensel lifting, tame symbols
//!   and constructive R-equivalence decompositions;
//! * two-dimensional local algebra: monomial classes over a complete
//!   regular local ring with maximal ideal (pi1, pi2), Kummer tower
//!   decomposition, monomial normal forms and norm descent;
//! * the combinatorial obstruction: bipartite patching graphs, the
//!   tree factorization lemma, and Smith-normal-form cokernel and image
//!   computations with constructive witnesses and certificates, including
//!   the scripted triangle and multi-norm counterexample scenarios.
//!
//! Heavy sweeps (norm-group enumeration, graph families, batch checks)
//! run data-parallel on rayon under the default `parallel` feature and
//! fall back to sequential execution without it.

pub mod bilocal;
pub mod error;
pub mod family;
pub mod finite_field;
pub mod kummer;
pub mod laurent;
pub mod obstruction;
pub mod par;
pub mod patch_graph;
pub mod poly;
pub mod scenarios;
pub mod snf;
pub mod tower;
pub mod two_local;

pub use error::{Error, Result};
