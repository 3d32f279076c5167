//! Inversion, spectral decomposition and conditioning of the univariate
//! Bernstein mass matrix.

pub mod bernstein;
pub mod cli;
pub mod conditioning;
pub mod dense;
pub mod error;
pub mod exactnum;
pub mod experiments;
pub mod inverse_exact;
pub mod parallel;
pub mod quadrature;
pub mod rng;
pub mod solvers;
pub mod spectral;
pub mod structured;

pub use bernstein::{mass_matrix, BernsteinPoly, MassMatrix};
pub use error::{Error, Result};
pub use parallel::Execution;
pub use solvers::{Method, SolverRegistry};
