//! Exact minimum-move search for arbitrary jar states.
//!
//! The solver runs iterative deepening from the best closed-form lower bound
//! up to the best generated strategy's length, so every deepening pass that
//! fails is a proof and the first pass that succeeds is the answer. Witnesses
//! are deterministic: moves are enumerated amounts-descending, then target
//! subsets in descending lexicographic order of their value lists, and the
//! first witness found at the optimal depth is returned. All pruning is by
//! proven lower bounds (bit-length of the jar count, superincreasing jar
//! count, memoized exhaustion depths), which can never skip over that first
//! witness.
//!
//! A transposition table keyed by canonical value lists carries proven
//! lower bounds within a single `solve` call. Entries are facts about states
//! ("cannot be emptied in fewer than `lower` moves"), so they stay valid
//! across deepening passes and across worker threads.

use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::iter::{IntoParallelRefIterator, ParallelIterator};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::log2_lower_bound;
use crate::sequences::NacciError;
use crate::state::{JarState, Move, MoveSequence};
use crate::strategies::{
    self, best_strategy, nacci_strategy, one_by_one, recognize_nacci, StrategyTrace,
};

/// Hard ceiling on searchable jar counts: target subsets are `u32` masks and
/// per-node scratch is stack-allocated. Configured caps above this are
/// silently clamped — search cost explodes long before the ceiling matters.
pub const MAX_SEARCHABLE_JARS: usize = 16;

/// Which amounts the search may subtract at each node.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AmountMode {
    /// Every amount from 1 to the current maximum value. Complete: the result
    /// is the true minimum.
    #[default]
    Full,
    /// Only current values and pairwise differences of current values. Much
    /// smaller branching, but unproven to preserve optimality — results are
    /// upper bounds unless they meet the lower bound.
    Restricted,
}

/// Search limits and knobs for [`solve`].
#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Reject states whose largest value exceeds this.
    pub max_value: u64,
    /// Reject states with more jars than this (clamped to
    /// [`MAX_SEARCHABLE_JARS`]).
    pub max_jars: usize,
    pub amount_mode: AmountMode,
    /// Wall-clock cap; exceeding it aborts with the bounds proven so far.
    pub time_budget: Option<Duration>,
    /// Worker threads for exploring root branches (minimum 1). The reported
    /// cm and witness are identical for every thread count; node and memo-hit
    /// counts vary with scheduling when above 1.
    pub threads: usize,
}

impl Default for SolverConfig {
    fn default() -> SolverConfig {
        SolverConfig {
            max_value: 50,
            max_jars: 7,
            amount_mode: AmountMode::Full,
            time_budget: None,
            threads: 1,
        }
    }
}

/// Error from [`solve`].
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SolveError {
    /// The input is outside the configured caps; nothing was searched.
    #[error(
        "state (jar count {jar_count}, largest value {max_seen}) exceeds solver caps \
         ({max_jars} jars, values <= {max_value})"
    )]
    LimitExceeded {
        jar_count: usize,
        max_seen: u64,
        max_jars: usize,
        max_value: u64,
    },
    /// The time budget ran out. The bracket is what the search had proven:
    /// every depth below `lower_bound` is exhausted, and a verified strategy
    /// achieves `upper_bound`.
    #[error("time budget exhausted; minimum moves is in [{lower_bound}, {upper_bound}]")]
    BudgetExceeded { lower_bound: u64, upper_bound: u64 },
}

/// Search counters for one [`solve`] call.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub memo_hits: u64,
    /// The deepening pass that produced the answer (equals `cm`).
    pub depth_limit_used: u64,
    pub amount_mode: AmountMode,
    /// Whether `cm` is certified as the true minimum: always in full mode,
    /// and in restricted mode only when the result meets the closed-form
    /// lower bound.
    pub exact: bool,
}

/// The minimum move count and one optimal witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    /// Minimum number of moves to empty the state (in restricted mode, the
    /// restricted minimum — see [`SearchStats::exact`]).
    pub cm: u64,
    /// A witness with exactly `cm` moves, fixed by the enumeration order.
    pub optimal: MoveSequence,
    pub stats: SearchStats,
}

/// One row of a family cross-check table: the closed-form value, the
/// generated strategy length, and (when the solve finished) the exact answer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyRow {
    pub jar_count: u64,
    pub formula: u64,
    pub strategy_len: u64,
    /// `None` when the exact solve failed (caps or budget): row incomplete.
    pub exact_cm: Option<u64>,
    /// `formula == strategy_len == exact_cm`; `None` while incomplete.
    pub agree: Option<bool>,
}

/// Computes the exact minimum number of moves to empty `state`.
///
/// Runs iterative deepening between the certified bounds. Fails fast with
/// [`SolveError::LimitExceeded`] if the state is outside the caps, and with
/// [`SolveError::BudgetExceeded`] if the time budget expires mid-search.
pub fn solve(state: &JarState, config: &SolverConfig) -> Result<SolveResult, SolveError> {
    let effective_max_jars = config.max_jars.min(MAX_SEARCHABLE_JARS);
    if state.len() > effective_max_jars || state.largest().unwrap_or(0) > config.max_value {
        return Err(SolveError::LimitExceeded {
            jar_count: state.len(),
            max_seen: state.largest().unwrap_or(0),
            max_jars: effective_max_jars,
            max_value: config.max_value,
        });
    }

    let lower = initial_lower_bound(state);
    let upper_trace = upper_bound_trace(state, config.amount_mode);
    debug_assert!(lower <= upper_trace.length);

    if state.is_empty() {
        return Ok(SolveResult {
            cm: 0,
            optimal: MoveSequence::new(state.clone(), Vec::new()),
            stats: SearchStats {
                nodes_expanded: 0,
                memo_hits: 0,
                depth_limit_used: 0,
                amount_mode: config.amount_mode,
                exact: true,
            },
        });
    }

    let search = Search::new(state.len(), config);
    let pool = (config.threads > 1).then(|| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .expect("failed to build solver thread pool")
    });

    for depth in lower..=upper_trace.length {
        match search.run_pass(state.values(), depth, pool.as_ref()) {
            Ok(Some(moves)) => {
                let exact = config.amount_mode == AmountMode::Full || depth == lower;
                return Ok(SolveResult {
                    cm: depth,
                    optimal: MoveSequence::new(state.clone(), moves),
                    stats: SearchStats {
                        nodes_expanded: search.nodes.load(Ordering::Relaxed),
                        memo_hits: search.memo_hits.load(Ordering::Relaxed),
                        depth_limit_used: depth,
                        amount_mode: config.amount_mode,
                        exact,
                    },
                });
            }
            Ok(None) => continue,
            Err(OutOfTime) => {
                return Err(SolveError::BudgetExceeded {
                    lower_bound: depth,
                    upper_bound: upper_trace.length,
                })
            }
        }
    }
    unreachable!(
        "a verified strategy of length {} bounds the search",
        upper_trace.length
    )
}

/// Cross-checks the closed-form formula, the generated strategy, and the
/// exact solver on the order-`order` jar sets for `k = 1..=k_max`. Rows whose
/// exact solve fails (caps or budget) are left incomplete rather than
/// guessed.
pub fn solve_family_table(
    order: u32,
    k_max: u64,
    config: &SolverConfig,
) -> Result<Vec<FamilyRow>, NacciError> {
    let family = crate::sequences::NacciFamily::new(order)?;
    let mut rows = Vec::new();
    for k in 1..=k_max {
        let formula = crate::bounds::nacci_cm_formula(order, k);
        let trace = nacci_strategy(order, k)?;
        let exact_cm = solve(&family.jar_set(k)?, config).ok().map(|r| r.cm);
        let agree = exact_cm.map(|cm| cm == formula && trace.length == formula);
        rows.push(FamilyRow {
            jar_count: k,
            formula,
            strategy_len: trace.length,
            exact_cm,
            agree,
        });
    }
    Ok(rows)
}

/// Renders family table rows as CSV under the fixed header
/// `k,formula,strategy_len,exact_cm,agree`.
///
/// LF line endings, no quoting; rows whose exact solve did not complete
/// keep their last two cells empty. The output is byte-stable for a given
/// table, so downstream diffs mean the numbers changed, not the formatting.
pub fn family_table_csv(rows: &[FamilyRow]) -> String {
    use std::fmt::Write;
    let mut out = String::from("k,formula,strategy_len,exact_cm,agree\n");
    for row in rows {
        let _ = write!(
            out,
            "{},{},{}",
            row.jar_count, row.formula, row.strategy_len
        );
        match (row.exact_cm, row.agree) {
            (Some(cm), Some(agree)) => {
                let _ = write!(out, ",{cm},{agree}");
            }
            _ => out.push_str(",,"),
        }
        out.push('\n');
    }
    out
}

/// Solves `state` in both amount modes and reports whether the restricted
/// search (amounts limited to current values and their pairwise differences)
/// reaches the true minimum. Evidence-gathering only — no theorem says it
/// must.
pub fn restricted_equals_full(state: &JarState, config: &SolverConfig) -> Result<bool, SolveError> {
    let full = solve(
        state,
        &SolverConfig {
            amount_mode: AmountMode::Full,
            ..config.clone()
        },
    )?;
    let restricted = solve(
        state,
        &SolverConfig {
            amount_mode: AmountMode::Restricted,
            ..config.clone()
        },
    )?;
    debug_assert!(
        restricted.cm >= full.cm,
        "restricted mode searches a subset"
    );
    Ok(full.cm == restricted.cm)
}

/// Strongest closed-form lower bound: bit length of the jar count, raised to
/// the jar count itself when the state is superincreasing.
fn initial_lower_bound(state: &JarState) -> u64 {
    let k = state.len() as u64;
    let mut lower = log2_lower_bound(k);
    if crate::sequences::is_superincreasing(state) {
        lower = lower.max(k);
    }
    lower
}

/// Shortest strategy whose moves the given mode is allowed to make. In
/// restricted mode the binary decomposition is off the table (its power-of-two
/// amounts need not be values or differences), but one-by-one and the paired
/// strategy only ever subtract current values, so they remain valid ceilings.
fn upper_bound_trace(state: &JarState, mode: AmountMode) -> StrategyTrace {
    match mode {
        AmountMode::Full => best_strategy(state),
        AmountMode::Restricted => {
            let mut best = one_by_one(state);
            if let Some((order, k)) =
                recognize_nacci(state, strategies::DEFAULT_MAX_RECOGNIZED_ORDER)
            {
                let trace = nacci_strategy(order, k).expect("recognized sets regenerate");
                if trace.length < best.length {
                    best = trace;
                }
            }
            best
        }
    }
}

struct OutOfTime;

#[derive(Clone, Copy)]
struct MemoEntry {
    /// Proven: this state cannot be emptied in fewer than `lower` moves (in
    /// the active amount mode).
    lower: u64,
    /// Proven that `lower` is also achievable, i.e. it is the exact minimum.
    exact: bool,
}

const MEMO_SHARDS: usize = 32;

struct Search {
    mode: AmountMode,
    deadline: Option<Instant>,
    /// Subset enumeration orders by eligible-value count: `orders[m]` lists
    /// every nonempty mask over m values, in descending lexicographic order
    /// of the ascending value lists they select (bit i = i-th smallest).
    orders: Vec<Vec<u32>>,
    memo: Vec<Mutex<HashMap<Vec<u64>, MemoEntry>>>,
    nodes: AtomicU64,
    memo_hits: AtomicU64,
}

impl Search {
    fn new(max_width: usize, config: &SolverConfig) -> Search {
        Search {
            mode: config.amount_mode,
            deadline: config.time_budget.map(|budget| Instant::now() + budget),
            orders: (0..=max_width).map(subset_order).collect(),
            memo: (0..MEMO_SHARDS)
                .map(|_| Mutex::new(HashMap::new()))
                .collect(),
            nodes: AtomicU64::new(0),
            memo_hits: AtomicU64::new(0),
        }
    }

    /// One deepening pass: is there an emptying sequence of exactly `depth`
    /// moves from `root`? Root branches are scanned in enumeration order —
    /// in parallel when a pool is given, with the first-in-order success
    /// winning either way, so the witness is identical for any thread count.
    fn run_pass(
        &self,
        root: &[u64],
        depth: u64,
        pool: Option<&rayon::ThreadPool>,
    ) -> Result<Option<Vec<Move>>, OutOfTime> {
        let root_moves = self.ordered_moves(root);
        let try_branch = |&(amount, suffix_start, mask): &(u64, usize, u32)| {
            let mut buf = [0u64; MAX_SEARCHABLE_JARS];
            let len = successor_into(root, amount, suffix_start, mask, &mut buf);
            let mut path = Vec::new();
            match self.dfs(&buf[..len], depth - 1, &mut path) {
                Ok(true) => {
                    path.push(move_for(root, amount, suffix_start, mask));
                    path.reverse();
                    Some(Ok(path))
                }
                Ok(false) => None,
                Err(out) => Some(Err(out)),
            }
        };
        let outcome = match pool {
            Some(pool) => pool.install(|| root_moves.par_iter().find_map_first(try_branch)),
            None => root_moves.iter().find_map(try_branch),
        };
        outcome.transpose()
    }

    /// Depth-first search for an emptying sequence of at most `remaining`
    /// moves. On success the path is appended deepest-move-first (the caller
    /// reverses once). Failure means proven exhaustion, recorded in the memo.
    fn dfs(&self, values: &[u64], remaining: u64, path: &mut Vec<Move>) -> Result<bool, OutOfTime> {
        if values.is_empty() {
            return Ok(true);
        }
        let visited = self.nodes.fetch_add(1, Ordering::Relaxed);
        if visited & 0xFFF == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    return Err(OutOfTime);
                }
            }
        }

        let k = values.len() as u64;
        let mut lower = log2_lower_bound(k);
        if lower < k && superincreasing_values(values) {
            lower = k;
        }
        if let Some(memoized) = self.memo_lower(values) {
            lower = lower.max(memoized);
        }
        if lower > remaining {
            return Ok(false);
        }

        let path_base = path.len();
        for amount in amounts_descending(values, self.mode) {
            let suffix_start = values.partition_point(|&v| v < amount);
            for &mask in &self.orders[values.len() - suffix_start] {
                let mut buf = [0u64; MAX_SEARCHABLE_JARS];
                let len = successor_into(values, amount, suffix_start, mask, &mut buf);
                if self.dfs(&buf[..len], remaining - 1, path)? {
                    // The witness meeting the proven lower bound pins the
                    // state's exact answer.
                    let used = (path.len() - path_base + 1) as u64;
                    if used == lower {
                        self.memo_settle(values, used);
                    }
                    path.push(move_for(values, amount, suffix_start, mask));
                    return Ok(true);
                }
            }
        }

        // Every sequence of `remaining` moves is exhausted: a proper proof
        // that the state needs strictly more.
        self.memo_raise(values, remaining + 1);
        Ok(false)
    }

    fn shard(&self, values: &[u64]) -> &Mutex<HashMap<Vec<u64>, MemoEntry>> {
        let mut hasher = std::collections::hash_map::DefaultHasher::new();
        values.hash(&mut hasher);
        &self.memo[hasher.finish() as usize % MEMO_SHARDS]
    }

    fn memo_lower(&self, values: &[u64]) -> Option<u64> {
        let guard = self.shard(values).lock().expect("memo shard poisoned");
        let entry = guard.get(values)?;
        self.memo_hits.fetch_add(1, Ordering::Relaxed);
        Some(entry.lower)
    }

    fn memo_raise(&self, values: &[u64], lower: u64) {
        let mut guard = self.shard(values).lock().expect("memo shard poisoned");
        match guard.get_mut(values) {
            Some(entry) => {
                debug_assert!(
                    !entry.exact || lower <= entry.lower,
                    "exhaustion proof contradicts a settled exact value"
                );
                if lower > entry.lower {
                    entry.lower = lower;
                }
            }
            None => {
                guard.insert(
                    values.to_vec(),
                    MemoEntry {
                        lower,
                        exact: false,
                    },
                );
            }
        }
    }

    /// Records that `exact` is this state's true minimum (a witness of that
    /// length exists and the same value is a proven lower bound).
    fn memo_settle(&self, values: &[u64], exact: u64) {
        let mut guard = self.shard(values).lock().expect("memo shard poisoned");
        match guard.get_mut(values) {
            Some(entry) => {
                debug_assert!(entry.lower <= exact);
                entry.lower = exact;
                entry.exact = true;
            }
            None => {
                guard.insert(
                    values.to_vec(),
                    MemoEntry {
                        lower: exact,
                        exact: true,
                    },
                );
            }
        }
    }

    /// All (amount, eligible-suffix, mask) moves from `values` in the pinned
    /// order, materialized for the root pass.
    fn ordered_moves(&self, values: &[u64]) -> Vec<(u64, usize, u32)> {
        let mut moves = Vec::new();
        for amount in amounts_descending(values, self.mode) {
            let suffix_start = values.partition_point(|&v| v < amount);
            for &mask in &self.orders[values.len() - suffix_start] {
                moves.push((amount, suffix_start, mask));
            }
        }
        moves
    }
}

/// Amounts to try from `values`, largest first: everything up to the maximum
/// in full mode; current values and their pairwise differences in restricted
/// mode.
fn amounts_descending(values: &[u64], mode: AmountMode) -> Vec<u64> {
    match mode {
        AmountMode::Full => {
            let max = *values.last().expect("nonempty state");
            (1..=max).rev().collect()
        }
        AmountMode::Restricted => {
            let mut amounts = Vec::with_capacity(values.len() * (values.len() + 1) / 2);
            for (i, &v) in values.iter().enumerate() {
                amounts.push(v);
                for &w in &values[i + 1..] {
                    amounts.push(w - v);
                }
            }
            amounts.sort_unstable_by(|a, b| b.cmp(a));
            amounts.dedup();
            amounts
        }
    }
}

/// Applies (amount, mask over the suffix of eligible values) to `values`,
/// writing the canonical successor into `out`; returns its length.
fn successor_into(
    values: &[u64],
    amount: u64,
    suffix_start: usize,
    mask: u32,
    out: &mut [u64; MAX_SEARCHABLE_JARS],
) -> usize {
    let mut n = 0;
    for (i, &v) in values.iter().enumerate() {
        let selected = i >= suffix_start && (mask >> (i - suffix_start)) & 1 == 1;
        let next = if selected { v - amount } else { v };
        if next > 0 {
            out[n] = next;
            n += 1;
        }
    }
    out[..n].sort_unstable();
    let mut write = 0;
    for read in 0..n {
        if write == 0 || out[read] != out[write - 1] {
            out[write] = out[read];
            write += 1;
        }
    }
    write
}

fn move_for(values: &[u64], amount: u64, suffix_start: usize, mask: u32) -> Move {
    let targets = values[suffix_start..]
        .iter()
        .enumerate()
        .filter(|(i, _)| (mask >> i) & 1 == 1)
        .map(|(_, &v)| v);
    Move::new(amount, targets)
}

/// Superincreasing check on a raw ascending slice (no [`JarState`] detour).
fn superincreasing_values(values: &[u64]) -> bool {
    let mut prefix: u128 = 0;
    for &v in values {
        if u128::from(v) <= prefix {
            return false;
        }
        prefix += u128::from(v);
    }
    true
}

/// Every nonempty subset mask over `m` values, in descending lexicographic
/// order of the ascending value lists they select. Built back to front: the
/// subsets over values `j..m` are those over `j+1..m`, then each of those
/// with value `j` added, then `{j}` alone.
fn subset_order(m: usize) -> Vec<u32> {
    assert!(m <= MAX_SEARCHABLE_JARS);
    let mut order: Vec<u32> = Vec::with_capacity((1usize << m) - 1);
    for j in (0..m).rev() {
        let with_j: Vec<u32> = order.iter().map(|&mask| mask | (1 << j)).collect();
        order.extend(with_j);
        order.push(1 << j);
    }
    order
}
