//! Exact solver, bounds, and strategy generators for the Cookie Monster
//! jar-emptying problem.
//!
//! The game: a set of jars holds distinct positive cookie counts, and one
//! move removes the same positive amount from any chosen subset of jars. The
//! minimum number of moves to empty everything depends only on the set of
//! distinct values, and this crate computes it three ways that check each
//! other:
//!
//! - [`solver::solve`] finds the exact minimum by iterative-deepening search
//!   with a transposition table, and returns a deterministic witness.
//! - [`bounds`] has the closed forms: a bit-length lower bound, the
//!   one-move-per-jar answer for superincreasing sets, and the formulas for
//!   Fibonacci, Tribonacci, and general n-step Fibonacci jar sets.
//! - [`strategies`] generates verified emptying sequences whose lengths are
//!   honest upper bounds, including the paired-move strategy that achieves
//!   the closed forms on n-step Fibonacci sets.
//!
//! [`state`] is the ground truth everything replays through, and
//! [`sequences`] generates the n-step Fibonacci families themselves.
//!
//! ```
//! use cookie_monster::{solve, JarState, SolverConfig};
//!
//! let jars = JarState::canonicalize([1, 2, 3, 4, 5, 6, 7]);
//! let result = solve(&jars, &SolverConfig::default()).unwrap();
//! assert_eq!(result.cm, 3);
//! assert!(result.optimal.verify().unwrap().empties);
//! ```

pub mod bounds;
pub mod sequences;
pub mod solver;
pub mod state;
pub mod strategies;

pub use bounds::{
    bound_report, fibonacci_cm_formula, log2_lower_bound, nacci_cm_formula, superincreasing_cm,
    tribonacci_cm_formula, BoundReport,
};
pub use sequences::{
    fibonacci_identity_holds, is_superincreasing, tribonacci_inequalities_hold, NacciError,
    NacciFamily,
};
pub use solver::{
    family_table_csv, restricted_equals_full, solve, solve_family_table, AmountMode, FamilyRow,
    SearchStats, SolveError, SolveResult, SolverConfig,
};
pub use state::{
    jar_schedule, parse_state, verify_sequence, JarSchedule, JarState, Move, MoveError,
    MoveSequence, ParseStateError, ReplayError, ReplayVerdict,
};
pub use strategies::{
    best_strategy, binary_decomposition, nacci_strategy, one_by_one, recognize_nacci, StrategyTrace,
};
