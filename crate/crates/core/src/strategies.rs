//! Move-sequence generators: certified upper bounds by construction.
//!
//! Each generator simulates its moves as it emits them, so a returned trace
//! has already been applied start to finish and is guaranteed to empty its
//! source state. Lengths are therefore honest upper bounds on the minimum
//! move count; [`best_strategy`] picks the shortest.

use serde::Serialize;

use crate::bounds::nacci_cm_formula;
use crate::sequences::{NacciError, NacciFamily};
use crate::state::{JarState, Move, MoveSequence};

/// Highest recurrence order [`best_strategy`] tries when matching a state
/// against n-step Fibonacci jar sets. Orders above the jar count never match
/// anything a lower order does not, so this only matters for large states.
pub const DEFAULT_MAX_RECOGNIZED_ORDER: u32 = 8;

/// A generated emptying sequence together with its closed-form length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrategyTrace {
    /// Generator label: `one_by_one`, `binary`, or `nacci(n)`.
    pub name: String,
    pub sequence: MoveSequence,
    /// Number of moves in `sequence`.
    pub length: u64,
    /// Closed-form move count the generator is expected to achieve, when the
    /// generator has one.
    pub predicted_length: Option<u64>,
}

impl StrategyTrace {
    fn new(name: String, sequence: MoveSequence, predicted_length: Option<u64>) -> StrategyTrace {
        let length = sequence.len() as u64;
        StrategyTrace {
            name,
            sequence,
            length,
            predicted_length,
        }
    }
}

/// Empties each jar with its own move, largest value first. Always exactly
/// `|state|` moves — the baseline every other strategy tries to beat, and
/// unbeatable on superincreasing states.
pub fn one_by_one(state: &JarState) -> StrategyTrace {
    let moves: Vec<Move> = state
        .values()
        .iter()
        .rev()
        .map(|&v| Move::new(v, [v]))
        .collect();
    let predicted = state.len() as u64;
    let sequence = MoveSequence::new(state.clone(), moves);
    debug_assert!(sequence.verify().is_ok_and(|v| v.empties));
    StrategyTrace::new("one_by_one".to_string(), sequence, Some(predicted))
}

/// Peels one bit position per move, highest first: each move removes `2^b`
/// from every value whose current count has bit `b` set. Subtracting a
/// value's top bit never disturbs its lower bits, so the moves are exactly
/// the distinct bit positions used by the original values.
pub fn binary_decomposition(state: &JarState) -> StrategyTrace {
    let bit_union = state.values().iter().fold(0u64, |acc, &v| acc | v);
    let mut current = state.clone();
    let mut moves = Vec::new();
    while let Some(max) = current.largest() {
        let amount = 1u64 << (63 - max.leading_zeros());
        let targets: Vec<u64> = current
            .values()
            .iter()
            .copied()
            .filter(|v| v & amount != 0)
            .collect();
        let mv = Move::new(amount, targets);
        current = current
            .apply(&mv)
            .expect("targets all carry the subtracted bit");
        moves.push(mv);
    }
    let sequence = MoveSequence::new(state.clone(), moves);
    StrategyTrace::new(
        "binary".to_string(),
        sequence,
        Some(u64::from(bit_union.count_ones())),
    )
}

/// The paired-move strategy for the order-`order` jar set with `jar_count`
/// jars.
///
/// While at least `order` values remain, a round of `order - 1` moves each
/// takes the current second-largest value from itself and the largest. On
/// more than `order` values the round retires the top `order` of them and
/// lands exactly on the jar set `order` jars smaller; on exactly `order`
/// values (which are powers of two) it leaves a single 1. The leftover
/// powers-of-two prefix is emptied one jar at a time. Total length is
/// `nacci_cm_formula(order, jar_count)`.
pub fn nacci_strategy(order: u32, jar_count: u64) -> Result<StrategyTrace, NacciError> {
    let family = NacciFamily::new(order)?;
    let source = family.jar_set(jar_count)?;
    let mut current = source.clone();
    let mut moves = Vec::new();
    while current.len() >= order as usize {
        let before = current.len();
        for _ in 0..order - 1 {
            let values = current.values();
            let top = values[values.len() - 1];
            let second = values[values.len() - 2];
            let mv = Move::new(second, [second, top]);
            current = current
                .apply(&mv)
                .expect("the top value always exceeds the second-largest");
            moves.push(mv);
        }
        debug_assert!(current.len() < before, "rounds must make progress");
    }
    // The remaining values are 1, 2, 4, ..., one jar per move.
    let tail: Vec<u64> = current.values().iter().rev().copied().collect();
    for v in tail {
        let mv = Move::new(v, [v]);
        current = current.apply(&mv).expect("single-jar moves never overdraw");
        moves.push(mv);
    }
    debug_assert!(current.is_empty());
    let predicted = nacci_cm_formula(order, jar_count);
    let sequence = MoveSequence::new(source, moves);
    Ok(StrategyTrace::new(
        format!("nacci({order})"),
        sequence,
        Some(predicted),
    ))
}

/// Matches `state` against generated jar sets of order 2 through `max_order`,
/// returning the lowest matching order and the jar count. Matching is exact
/// value equality — inferring a recurrence from a short prefix is ambiguous
/// (every order 3 and up starts 1, 2, 4), and when several orders match, all
/// of them give the same strategy length.
pub fn recognize_nacci(state: &JarState, max_order: u32) -> Option<(u32, u64)> {
    let k = state.len() as u64;
    // Orders above max(2, k) generate the same short prefixes as order k.
    let cap = u64::from(max_order).min(k.max(2)) as u32;
    for order in 2..=cap {
        let family = NacciFamily::new(order).expect("order starts at 2");
        // Generation overflowing u64 means no representable state matches.
        if let Ok(set) = family.jar_set(k) {
            if set == *state {
                return Some((order, k));
            }
        }
    }
    None
}

/// Shortest generated emptying sequence for `state`, trying the paired
/// strategy (when the state is a recognized jar set), the binary
/// decomposition, and one-by-one. Ties keep the earlier of those three.
pub fn best_strategy(state: &JarState) -> StrategyTrace {
    best_strategy_with_max_order(state, DEFAULT_MAX_RECOGNIZED_ORDER)
}

/// [`best_strategy`] with an explicit recognition cap.
pub fn best_strategy_with_max_order(state: &JarState, max_order: u32) -> StrategyTrace {
    let mut best: Option<StrategyTrace> = recognize_nacci(state, max_order)
        .map(|(order, k)| nacci_strategy(order, k).expect("recognized sets regenerate"));
    for candidate in [binary_decomposition(state), one_by_one(state)] {
        if best.as_ref().is_none_or(|b| candidate.length < b.length) {
            best = Some(candidate);
        }
    }
    best.expect("binary and one_by_one always apply")
}
