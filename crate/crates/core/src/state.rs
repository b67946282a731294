//! Canonical jar states, moves, and move-sequence replay.
//!
//! A state is the set of distinct positive jar values: duplicates and empty
//! jars carry no information for counting moves, so they are dropped on
//! construction and after every move. A move removes one common amount from a
//! chosen subset of the values present; the result is canonicalized again.
//!
//! Replay of a recorded sequence is the ground truth for every bound and
//! strategy in this crate: a sequence that verifiably empties a state is a
//! certificate that the state can be emptied in that many moves.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Error applying a single [`Move`] to a [`JarState`].
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MoveError {
    /// The move's amount is zero.
    #[error("move amount must be positive")]
    ZeroAmount,
    /// The move's target set is empty.
    #[error("move targets must be nonempty")]
    EmptyTargets,
    /// A target value is not present in the state.
    #[error("target value {0} is not present in the state")]
    AbsentTarget(u64),
    /// The amount exceeds some target value.
    #[error("amount {amount} exceeds target value {target}")]
    Overdraw { amount: u64, target: u64 },
}

/// Error replaying a move sequence.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReplayError {
    /// A move failed to apply; `index` is the offending move's position.
    #[error("move {index} failed: {source}")]
    Move {
        index: usize,
        #[source]
        source: MoveError,
    },
    /// The running cookie total exceeded the integer width.
    #[error("cookie total overflowed at move {index}")]
    EatenOverflow { index: usize },
}

/// Error parsing a jar state from text.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("invalid jar count {token:?} at column {column}")]
pub struct ParseStateError {
    /// 1-based character column of the offending token.
    pub column: usize,
    /// The token that failed to parse as an unsigned integer.
    pub token: String,
}

/// A canonical jar configuration: strictly increasing distinct positive values.
///
/// The empty state is the unique terminal configuration. All arithmetic on
/// values is checked; counts are `u64` and never wrap.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct JarState {
    values: Vec<u64>,
}

impl JarState {
    /// Builds the canonical state for any list of raw jar counts: zeros are
    /// dropped, duplicates merged, and the rest sorted ascending. Idempotent.
    pub fn canonicalize(raw: impl IntoIterator<Item = u64>) -> JarState {
        let mut values: Vec<u64> = raw.into_iter().filter(|&v| v > 0).collect();
        values.sort_unstable();
        values.dedup();
        JarState { values }
    }

    /// The distinct values, sorted ascending.
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Number of distinct values (the `k` of the state).
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True for the terminal (all-empty) state.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest value, if any.
    pub fn largest(&self) -> Option<u64> {
        self.values.last().copied()
    }

    /// Total cookies across the distinct values. Widened so it cannot overflow.
    pub fn total(&self) -> u128 {
        self.values.iter().map(|&v| u128::from(v)).sum()
    }

    pub fn contains(&self, value: u64) -> bool {
        self.values.binary_search(&value).is_ok()
    }

    /// Applies a move, returning the canonicalized successor state.
    pub fn apply(&self, mv: &Move) -> Result<JarState, MoveError> {
        Ok(JarState::canonicalize(self.apply_raw(mv)?))
    }

    /// Applies a move without canonicalizing: returns every per-jar result,
    /// including zeros and duplicates. One raw entry per value of `self`, so
    /// `total(self) - sum(raw) = amount * targets.len()` exactly.
    pub fn apply_raw(&self, mv: &Move) -> Result<Vec<u64>, MoveError> {
        mv.validate_against(self)?;
        let result = self
            .values
            .iter()
            .map(|&v| {
                if mv.targets_value(v) {
                    v - mv.amount
                } else {
                    v
                }
            })
            .collect();
        Ok(result)
    }

    /// How many distinct values the move removes from the canonical set:
    /// jars emptied plus jars reduced to a value that already exists.
    pub fn count_discarded(&self, mv: &Move) -> Result<usize, MoveError> {
        Ok(self.len() - self.apply(mv)?.len())
    }
}

impl FromIterator<u64> for JarState {
    fn from_iter<T: IntoIterator<Item = u64>>(iter: T) -> Self {
        JarState::canonicalize(iter)
    }
}

impl fmt::Display for JarState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.values {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for JarState {
    type Err = ParseStateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_state(s)
    }
}

impl<'de> Deserialize<'de> for JarState {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let raw = Vec::<u64>::deserialize(deserializer)?;
        Ok(JarState::canonicalize(raw))
    }
}

/// Parses a single line of space- or comma-separated jar counts.
///
/// Zeros and duplicates are accepted and canonicalized away. On failure the
/// error carries the 1-based column of the bad token.
pub fn parse_state(line: &str) -> Result<JarState, ParseStateError> {
    let mut values = Vec::new();
    let mut token_start = None;
    // Track char columns by hand so the error can point at the token.
    for (i, ch) in line
        .char_indices()
        .chain(std::iter::once((line.len(), ' ')))
    {
        if ch.is_whitespace() || ch == ',' {
            if let Some(start) = token_start.take() {
                let token = &line[start..i];
                let value = token.parse::<u64>().map_err(|_| ParseStateError {
                    column: line[..start].chars().count() + 1,
                    token: token.to_string(),
                })?;
                values.push(value);
            }
        } else if token_start.is_none() {
            token_start = Some(i);
        }
    }
    Ok(JarState::canonicalize(values))
}

/// One action: take `amount` cookies from each value in `targets`.
///
/// Targets reference values present in the state the move is applied to.
/// Construction normalizes target order; validity (positive amount, nonempty
/// targets, targets present and large enough) is checked at application time
/// so that moves parsed from untrusted input surface precise errors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "RawMove")]
pub struct Move {
    amount: u64,
    targets: Vec<u64>,
}

#[derive(Deserialize)]
struct RawMove {
    amount: u64,
    targets: Vec<u64>,
}

impl From<RawMove> for Move {
    fn from(raw: RawMove) -> Move {
        Move::new(raw.amount, raw.targets)
    }
}

impl Move {
    /// Creates a move; targets are sorted and deduplicated.
    pub fn new(amount: u64, targets: impl IntoIterator<Item = u64>) -> Move {
        let mut targets: Vec<u64> = targets.into_iter().collect();
        targets.sort_unstable();
        targets.dedup();
        Move { amount, targets }
    }

    pub fn amount(&self) -> u64 {
        self.amount
    }

    /// Target values, sorted ascending.
    pub fn targets(&self) -> &[u64] {
        &self.targets
    }

    fn targets_value(&self, value: u64) -> bool {
        self.targets.binary_search(&value).is_ok()
    }

    fn validate_against(&self, state: &JarState) -> Result<(), MoveError> {
        if self.amount == 0 {
            return Err(MoveError::ZeroAmount);
        }
        if self.targets.is_empty() {
            return Err(MoveError::EmptyTargets);
        }
        for &t in &self.targets {
            if !state.contains(t) {
                return Err(MoveError::AbsentTarget(t));
            }
            if t < self.amount {
                return Err(MoveError::Overdraw {
                    amount: self.amount,
                    target: t,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "take {} from {{", self.amount)?;
        for (i, t) in self.targets.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "}}")
    }
}

/// An ordered list of moves claimed to start from `source`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveSequence {
    /// The state the sequence claims to start from.
    pub source: JarState,
    pub moves: Vec<Move>,
}

impl MoveSequence {
    pub fn new(source: JarState, moves: Vec<Move>) -> MoveSequence {
        MoveSequence { source, moves }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Replays the sequence from its claimed source.
    pub fn verify(&self) -> Result<ReplayVerdict, ReplayError> {
        verify_sequence(&self.source, &self.moves)
    }
}

/// Outcome of replaying a move sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayVerdict {
    /// True iff the final state is empty.
    pub empties: bool,
    pub final_state: JarState,
    /// Total cookies removed: sum over moves of amount x targets. Duplicate
    /// jars are counted once, consistent with the canonical model.
    pub cookies_eaten: u64,
}

/// Replays `moves` from `state` via [`JarState::apply`], reporting whether the
/// sequence empties the state and how many cookies it removes. Errors carry
/// the index of the offending move.
pub fn verify_sequence(state: &JarState, moves: &[Move]) -> Result<ReplayVerdict, ReplayError> {
    let mut current = state.clone();
    let mut eaten: u64 = 0;
    for (index, mv) in moves.iter().enumerate() {
        current = current
            .apply(mv)
            .map_err(|source| ReplayError::Move { index, source })?;
        let removed = mv
            .amount()
            .checked_mul(mv.targets().len() as u64)
            .ok_or(ReplayError::EatenOverflow { index })?;
        eaten = eaten
            .checked_add(removed)
            .ok_or(ReplayError::EatenOverflow { index })?;
    }
    Ok(ReplayVerdict {
        empties: current.is_empty(),
        final_state: current,
        cookies_eaten: eaten,
    })
}

/// A move sequence lowered to per-jar subtractions.
///
/// Moves name values in the state they are applied to, so the literal move
/// list cannot be replayed in a different order: an early move changes the
/// values later moves refer to. What survives reordering is the effect on
/// individual jars. Lowering a valid sequence records, per move, the amount
/// taken from each source jar; those rows can then be applied in any order,
/// and for an emptying sequence every order stays non-negative and empties
/// every jar (each jar's rows are non-negative and sum to its initial count).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JarSchedule {
    initial: Vec<u64>,
    rows: Vec<Vec<u64>>,
}

impl JarSchedule {
    /// Initial per-jar counts (the source values).
    pub fn initial(&self) -> &[u64] {
        &self.initial
    }

    /// One row per move: the amount removed from each jar.
    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    /// Applies the rows in the given order. Returns true iff no jar ever goes
    /// negative and every jar ends at zero.
    pub fn replays_and_empties(&self, order: &[usize]) -> bool {
        if order.len() != self.rows.len() {
            return false;
        }
        let mut counts = self.initial.clone();
        for &row_index in order {
            let Some(row) = self.rows.get(row_index) else {
                return false;
            };
            for (count, &sub) in counts.iter_mut().zip(row) {
                match count.checked_sub(sub) {
                    Some(next) => *count = next,
                    None => return false,
                }
            }
        }
        counts.iter().all(|&c| c == 0)
    }
}

/// Lowers a sequence to its per-jar subtraction schedule.
///
/// Each source value is one jar. Replaying canonically, a move hits every jar
/// whose current count is in its target set (jars sharing a count are the same
/// canonical value and are treated alike).
pub fn jar_schedule(state: &JarState, moves: &[Move]) -> Result<JarSchedule, ReplayError> {
    let initial = state.values().to_vec();
    let mut counts = initial.clone();
    let mut rows = Vec::with_capacity(moves.len());
    let mut canonical = state.clone();
    for (index, mv) in moves.iter().enumerate() {
        // Validate against the canonical view so errors match verify_sequence.
        canonical = canonical
            .apply(mv)
            .map_err(|source| ReplayError::Move { index, source })?;
        let mut row = vec![0u64; counts.len()];
        for (jar, count) in counts.iter_mut().enumerate() {
            if *count > 0 && mv.targets_value(*count) {
                row[jar] = mv.amount();
                *count -= mv.amount();
            }
        }
        rows.push(row);
    }
    Ok(JarSchedule { initial, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(values: &[u64]) -> JarState {
        JarState::canonicalize(values.iter().copied())
    }

    #[test]
    fn canonicalize_drops_zeros_and_duplicates() {
        assert_eq!(
            state(&[1, 2, 3, 0, 1, 2, 3]).values(),
            &[1, 2, 3],
            "post-move multiset from the seven-jar example"
        );
        assert!(state(&[]).is_empty());
        assert_eq!(state(&[5, 5, 5]).values(), &[5]);
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let once = state(&[7, 0, 7, 3, 0, 9]);
        let twice = JarState::canonicalize(once.values().iter().copied());
        assert_eq!(once, twice);
    }

    #[test]
    fn apply_matches_seven_jar_walkthrough() {
        let start = state(&[1, 2, 3, 4, 5, 6, 7]);
        let after_first = start.apply(&Move::new(4, [4, 5, 6, 7])).unwrap();
        assert_eq!(after_first.values(), &[1, 2, 3]);
        let after_second = after_first.apply(&Move::new(2, [2, 3])).unwrap();
        assert_eq!(after_second.values(), &[1]);
        assert_eq!(state(&[5]).apply(&Move::new(5, [5])).unwrap(), state(&[]));
    }

    #[test]
    fn apply_rejects_bad_moves() {
        let s = state(&[1, 2, 3]);
        assert_eq!(s.apply(&Move::new(0, [1])), Err(MoveError::ZeroAmount));
        assert_eq!(
            s.apply(&Move::new(1, std::iter::empty())),
            Err(MoveError::EmptyTargets)
        );
        assert_eq!(s.apply(&Move::new(1, [4])), Err(MoveError::AbsentTarget(4)));
        assert_eq!(
            s.apply(&Move::new(3, [2, 3])),
            Err(MoveError::Overdraw {
                amount: 3,
                target: 2
            })
        );
    }

    #[test]
    fn verify_sequence_counts_cookies() {
        let start = state(&[1, 2, 3, 4, 5, 6, 7]);
        let moves = vec![
            Move::new(4, [4, 5, 6, 7]),
            Move::new(2, [2, 3]),
            Move::new(1, [1]),
        ];
        let verdict = verify_sequence(&start, &moves).unwrap();
        assert!(verdict.empties);
        assert_eq!(verdict.cookies_eaten, 16 + 4 + 1);
        assert!(verdict.final_state.is_empty());
    }

    #[test]
    fn verify_sequence_trivial_cases() {
        let verdict = verify_sequence(&state(&[]), &[]).unwrap();
        assert!(verdict.empties);
        assert_eq!(verdict.cookies_eaten, 0);

        let err = verify_sequence(&state(&[3]), &[Move::new(4, [3])]).unwrap_err();
        assert_eq!(
            err,
            ReplayError::Move {
                index: 0,
                source: MoveError::Overdraw {
                    amount: 4,
                    target: 3
                },
            }
        );
    }

    #[test]
    fn count_discarded_examples() {
        let start = state(&[1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(
            start.count_discarded(&Move::new(4, [4, 5, 6, 7])).unwrap(),
            4
        );
        assert_eq!(
            state(&[1, 2, 3])
                .count_discarded(&Move::new(2, [2, 3]))
                .unwrap(),
            2
        );
        // 5 -> 4 keeps one distinct value around.
        assert_eq!(state(&[5]).count_discarded(&Move::new(1, [5])).unwrap(), 0);
    }

    #[test]
    fn raw_application_conserves_cookies() {
        let start = state(&[1, 2, 3, 4, 5, 6, 7]);
        let mv = Move::new(4, [4, 5, 6, 7]);
        let raw = start.apply_raw(&mv).unwrap();
        let raw_total: u128 = raw.iter().map(|&v| u128::from(v)).sum();
        assert_eq!(
            start.total() - raw_total,
            u128::from(mv.amount()) * mv.targets().len() as u128
        );
        // Canonicalization then merges duplicates: {1,2,3,0,1,2,3} -> {1,2,3}.
        assert_eq!(JarState::canonicalize(raw).values(), &[1, 2, 3]);
    }

    #[test]
    fn jar_schedule_rows_apply_in_any_order() {
        let start = state(&[1, 2, 3, 4, 5, 6, 7]);
        let moves = vec![
            Move::new(4, [4, 5, 6, 7]),
            Move::new(2, [2, 3]),
            Move::new(1, [1]),
        ];
        let schedule = jar_schedule(&start, &moves).unwrap();
        // The second move hits the jars reduced to 2 and 3 as well.
        assert_eq!(schedule.rows()[1], vec![0, 2, 2, 0, 0, 2, 2]);
        assert!(schedule.replays_and_empties(&[0, 1, 2]));
        assert!(schedule.replays_and_empties(&[2, 1, 0]));
        assert!(schedule.replays_and_empties(&[1, 0, 2]));
    }

    #[test]
    fn value_level_replay_is_order_sensitive() {
        // Swapping the first two moves replays without error but no longer
        // empties: the literal move list names values, not jars. The per-jar
        // schedule above is the order-independent object.
        let start = state(&[1, 2, 3, 4, 5, 6, 7]);
        let swapped = vec![
            Move::new(2, [2, 3]),
            Move::new(4, [4, 5, 6, 7]),
            Move::new(1, [1]),
        ];
        let verdict = verify_sequence(&start, &swapped).unwrap();
        assert!(!verdict.empties);
    }

    #[test]
    fn parse_state_accepts_spaces_and_commas() {
        assert_eq!(parse_state("1 2 3").unwrap().values(), &[1, 2, 3]);
        assert_eq!(parse_state("3,1,2").unwrap().values(), &[1, 2, 3]);
        assert_eq!(parse_state(" 5 , 5 0 ").unwrap().values(), &[5]);
        assert!(parse_state("").unwrap().is_empty());

        let err = parse_state("1 2 x3").unwrap_err();
        assert_eq!(err.column, 5);
        assert_eq!(err.token, "x3");
    }

    #[test]
    fn move_json_round_trips() {
        let mv = Move::new(4, [7, 4, 5, 6, 4]);
        let json = serde_json::to_string(&mv).unwrap();
        assert_eq!(json, r#"{"amount":4,"targets":[4,5,6,7]}"#);
        let back: Move = serde_json::from_str(&json).unwrap();
        assert_eq!(back, mv);

        let seq: MoveSequence =
            serde_json::from_str(r#"{"source":[3,1,2,0,1],"moves":[{"amount":1,"targets":[1]}]}"#)
                .unwrap();
        assert_eq!(seq.source.values(), &[1, 2, 3]);
    }
}
