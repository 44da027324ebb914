//! Divide-and-conquer reduction of QUBO instances.
//!
//! A QUBO over spins is split along the communities of its interaction graph.
//! Every community's core spins are minimized out for each assignment of its
//! boundary spins, and the resulting tables are folded back into a polynomial
//! over boundary spins only. The reduced instance can then be solved by the
//! exhaustive oracle, an external weighted MaxSAT solver, or a simulated QAOA.
//!
//! Module map:
//! - [`pubo`], [`graph`], [`generators`]: instances, evaluation, MaxCut, random graphs.
//! - [`community`]: multilevel modularity detection and boundary refinement.
//! - [`reducer`]: energy split, quenching, Walsh–Hadamard assembly, lifting.
//! - [`solvers`]: exhaustive oracle and the timed four-step pipeline.
//! - [`qaoa`]: statevector simulation and multistart parameter optimization.
//! - [`sat`]: PUBO to weighted MaxSAT (DIMACS WCNF) and external solver adapter.

pub mod community;
pub mod error;
pub mod exec;
pub mod generators;
pub mod graph;
pub mod pubo;
pub mod qaoa;
pub mod reducer;
pub mod sat;
pub mod solvers;

pub use error::{Error, Result};
pub use exec::Exec;
pub use graph::Graph;
pub use pubo::{PuboPolynomial, SpinAssignment};
