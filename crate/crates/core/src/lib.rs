//! One-dimensional Lagrangian hydrodynamics with a staggered-grid and a
//! cell-centered scheme sharing one pressure-velocity closure.
//!
//! The closure is the quadratic Taylor expansion of the shock Hugoniot
//! around the current cell state, evaluated over the sound-crossing time
//! of the cell. In the staggered scheme it becomes a Kuropatenko-type
//! compression pressure; in the cell-centered scheme it gives the
//! force-balance nodal solver.
//!
//! ```
//! use lagrangian1d::driver::{run, Method, RunConfig};
//! use lagrangian1d::problems::ProblemSpec;
//!
//! let result = run(&RunConfig::new(ProblemSpec::sod(), Method::Cch, 50)).unwrap();
//! assert_eq!(result.final_time, 0.2);
//! assert_eq!(result.ledger.mass_drift(), 0.0);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN takes the error branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary;
pub mod cch;
pub mod closure;
pub mod config;
pub mod diagnostics;
pub mod driver;
pub mod eos;
pub mod error;
pub mod mesh;
pub mod output;
pub mod problems;
pub mod riemann;
pub mod sgh;

pub use boundary::{BoundaryCondition, Boundaries};
pub use closure::{NodalSolution, SolverOrder};
pub use driver::{run, run_convergence, Method, RunConfig, RunResult, Simulation};
pub use eos::IdealGas;
pub use error::{HydroError, Result};
pub use mesh::{CchState, Mesh1D, SghState};
pub use problems::ProblemSpec;
pub use sgh::SghMode;
