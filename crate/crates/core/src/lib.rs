//! Branch-and-Benders-cut solver for the probabilistic set covering problem
//! (PSCP) with finite discrete scenario distributions.
//!
//! Given costs `c` and, for every row `i`, a finite set of 0-1 scenario rows
//! `A_i^w` with probabilities `p_i^w`, the solver finds the cheapest
//! `x in {0,1}^n` such that every row is covered with probability at least
//! `1 - eps_i`.
//!
//! The crate is organised as:
//!
//! * [`instance`]: instance types, validation, ORLIB parsing and the
//!   versioned PSCP text format.
//! * [`scenario_gen`]: reproducible scenario synthesis from deterministic SCP
//!   matrices (independent Bernoulli and Bernoulli mixture dropout).
//! * [`cuts`]: Benders feasibility-cut separation, the infeasibility screen,
//!   coefficient strengthening and MIR enhancement.
//! * [`lp`]: a bounded-variable dual simplex for the master relaxations.
//! * [`solver`]: the branch-and-Benders-cut tree search and the RENS heuristic.
//! * [`oracle`] and [`export`]: brute-force ground truth and the big-M model
//!   writer.

pub mod cuts;
pub mod error;
pub mod export;
pub mod instance;
pub mod lp;
pub mod oracle;
pub mod scenario_gen;
pub mod solver;

pub use error::{Error, Result};
pub use instance::{DeterministicScp, Instance, ScenarioBlock};
pub use solver::{solve, Mode, SolveReport, SolveStatus, SolverConfig};
