//! n-step Fibonacci sequences and the structural facts the bounds rely on.
//!
//! The order-`n` sequence is 0-indexed and seeded lexicographically smallest:
//! terms 0 through n-2 are 0, term n-1 is 1, and every later term is the sum
//! of the previous `n`. Order 2 is Fibonacci (0, 1, 1, 2, 3, 5, ...), order 3
//! Tribonacci (0, 0, 1, 1, 2, 4, 7, ...). The jar set with `k` jars takes the
//! `k` terms starting at index `n` — the second 1 — which are strictly
//! increasing, so the jars are distinct by construction.
//!
//! Everything here uses checked arithmetic; terms grow geometrically and
//! overflow `u64` within a couple hundred indices.

use thiserror::Error;

use crate::state::JarState;

/// Error constructing or evaluating an n-step Fibonacci family.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NacciError {
    /// Order must be at least 2 (order 1 would be the all-ones sequence and
    /// degenerates every identity below).
    #[error("sequence order must be at least 2, got {0}")]
    InvalidOrder(u32),
    /// A requested term exceeds `u64`.
    #[error("term {index} of the order-{order} sequence overflows u64")]
    Overflow { order: u32, index: u64 },
}

/// An n-step Fibonacci family, fixed by its order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NacciFamily {
    order: u32,
}

impl NacciFamily {
    pub fn new(order: u32) -> Result<NacciFamily, NacciError> {
        if order < 2 {
            return Err(NacciError::InvalidOrder(order));
        }
        Ok(NacciFamily { order })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Term at 0-based `index`: indices below `order - 1` are 0, index
    /// `order - 1` is 1, and each later term sums the `order` before it.
    pub fn term(&self, index: u64) -> Result<u64, NacciError> {
        let seed = u64::from(self.order) - 1;
        if index < seed {
            return Ok(0);
        }
        if index == seed {
            return Ok(1);
        }
        // Slide a window and its running sum upward from the seed. The sum
        // for the step after the requested term is computed lazily so a term
        // that fits is never rejected for its successor's overflow.
        let overflow = || NacciError::Overflow {
            order: self.order,
            index,
        };
        let mut window = std::collections::VecDeque::from(vec![0u64; self.order as usize]);
        *window.back_mut().expect("order >= 2") = 1;
        let mut sum: Option<u64> = Some(1);
        let mut last = 1u64;
        for _ in seed..index {
            let next = sum.ok_or_else(overflow)?;
            let leaving = window.pop_front().expect("window is never empty");
            window.push_back(next);
            // leaving was part of the old sum (= next), so this cannot wrap.
            sum = (next - leaving).checked_add(next);
            last = next;
        }
        Ok(last)
    }

    /// The jar set with `jar_count` jars: terms `order` through
    /// `order + jar_count - 1`. Starting at the second 1 makes the values
    /// strictly increasing, so the set has exactly `jar_count` distinct jars.
    pub fn jar_set(&self, jar_count: u64) -> Result<JarState, NacciError> {
        let order = u64::from(self.order);
        let mut values = Vec::new();
        for index in order..order + jar_count {
            values.push(self.term(index)?);
        }
        let state = JarState::canonicalize(values);
        debug_assert_eq!(state.len() as u64, jar_count, "jar values must be distinct");
        Ok(state)
    }
}

/// True iff every value strictly exceeds the sum of all smaller values.
///
/// Input must be canonical (ascending, distinct, positive); the empty state
/// and singletons are vacuously superincreasing.
pub fn is_superincreasing(state: &JarState) -> bool {
    let mut prefix: u128 = 0;
    for &v in state.values() {
        if u128::from(v) <= prefix {
            return false;
        }
        prefix += u128::from(v);
    }
    true
}

/// Evaluates the Fibonacci telescoping identity at `k`: the term after F_k,
/// minus one, equals the sum of F_1 through F_{k-1}. This is what lets one
/// move collapse the top two Fibonacci jars onto the smaller ones. Expected
/// true for every `k >= 1` (k = 1 compares F_2 - 1 = 0 with an empty sum).
pub fn fibonacci_identity_holds(k: u64) -> Result<bool, NacciError> {
    let fib = NacciFamily { order: 2 };
    let mut sum: u64 = 0;
    for i in 1..k {
        sum = sum.checked_add(fib.term(i)?).ok_or(NacciError::Overflow {
            order: 2,
            index: k.saturating_add(1),
        })?;
    }
    Ok(fib.term(k.saturating_add(1))?.checked_sub(1) == Some(sum))
}

/// Evaluates the two Tribonacci gap inequalities at `k`: whether T_{k+1}
/// exceeds the sum of T_1 through T_{k-1}, and whether T_{k+2} - T_{k+1}
/// does too. These gaps are what let a round retire three Tribonacci jars in
/// two moves. Both hold for every `k >= 2`; at `k = 1` the second inequality
/// degenerates to 0 > 0 and fails, which is why callers start at 2.
pub fn tribonacci_inequalities_hold(k: u64) -> Result<(bool, bool), NacciError> {
    let trib = NacciFamily { order: 3 };
    let mut sum: u64 = 0;
    for i in 1..k {
        sum = sum.checked_add(trib.term(i)?).ok_or(NacciError::Overflow {
            order: 3,
            index: k.saturating_add(2),
        })?;
    }
    let next_exceeds = trib.term(k + 1)? > sum;
    let gap_exceeds = trib.term(k + 2)? - trib.term(k + 1)? > sum;
    Ok((next_exceeds, gap_exceeds))
}
