//! Stochastic packing of independent normally distributed service demands
//! into capacity-constrained bins.
//!
//! Given services with known demand mean and variance and a fixed set of
//! bins, the crate finds partitions minimizing one of three objectives:
//! total expected overflow deviation (`SPMED`), worst per-bin overflow
//! probability (`SPMWOP`) or the probability that any bin overflows
//! (`SPMOP`). The solvers exploit the risk-unbalancing structure of these
//! objectives: sort services by variance-to-mean ratio, sort bins by
//! capacity, and cut the sorted list into consecutive segments.
//!
//! See the `examples/` directory for runnable entry points per capability,
//! and the `stochpack` binary for the `solve` / `verify` / `simulate` /
//! `grid` commands.

pub mod baselines;
pub mod costs;
pub mod gauss;
pub mod geometry;
pub mod model;
pub mod sim;
pub mod solver;
pub mod verify;

pub use costs::{CostModel, TwoBinContext};
pub use model::{Instance, NormalizedPoint, Partition, ServiceDemand};
pub use solver::{FractionalSolution, KSolution, SolutionRecord, TwoBinSolution};
