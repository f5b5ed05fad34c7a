//! Exact minimum-discrepancy two-way rounding.
//!
//! Given fractions `0 <= x_k < 1` with an integer sum `m` and a permutation
//! of the index set, a *two-way rounding* picks `x̄_k ∈ {0, 1}` so that every
//! prefix sum in both the given order and the permuted order stays within
//! strictly less than 1 of its true value.  Such a rounding always exists;
//! this crate computes one with the smallest possible maximum deviation,
//! exactly, via incremental max flow over a network whose side arcs enter in
//! decreasing order of a combinatorial desirability measure.
//!
//! The crate deals in integers throughout: instances are normalized to
//! numerators over a common denominator `d`, and every reported discrepancy
//! is an exact fraction.
//!
//! Quick tour:
//!
//! * [`problem`] — instance representation, normalization, discrepancy.
//! * [`flow`] — the residual network and the incremental search.
//! * [`solver`] — optimal / feasible / constrained solves, bottleneck
//!   assignment.
//! * [`oracle`] — exhaustive cross-checks for small instances.
//! * [`generators`] — worst-case families, random instances, and the
//!   bipartite-matching reduction.
//! * [`io`] — JSON forms used by the command-line tool.
//! * [`stats`], [`bench`] — seeded experiments.

pub mod bench;
pub mod error;
pub mod flow;
pub mod generators;
pub mod io;
pub mod oracle;
pub mod problem;
pub mod solver;
pub mod stats;

pub use error::{Error, Result};
pub use flow::{Batch, Counters, FlowNetwork};
pub use generators::{
    derive_seed, from_bipartite, random_instance, theorem2_instance, theorem3_instance,
    worked_example7, BipartiteGraph, RandomSpec,
};
pub use oracle::{
    count_perfect_matchings, oracle_optimal, oracle_optimal_limited, valid_roundings, OracleResult,
};
pub use problem::{
    complement_rounding, normalize, normalize_strings, DiscrepancyReport, Fraction, PrefixSums,
    Rational, Rounding, ScaledProblem, Side, Violation,
};
pub use solver::{
    bottleneck_assignment, solve_feasible, solve_feasible_full, solve_fixed, solve_fixed_full,
    solve_optimal, solve_optimal_with, BottleneckResult, SolveOptions, SolveResult,
};
