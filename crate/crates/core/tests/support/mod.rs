//! Shared helpers for the integration suites.
//!
//! The centrepiece is [`bfs_cm`], a brute-force breadth-first solver kept
//! deliberately independent of the library's search machinery: no lower
//! bounds, no memoized prunes, no move ordering — just plain graph distance
//! from a state to the empty state. Its only job is to give the clever
//! solver something honest to disagree with.

// Each test binary compiles this module afresh and uses its own subset.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

/// Exact minimum number of moves to empty `values`, found by breadth-first
/// search over canonical states.
///
/// `values` must be sorted, distinct, and positive (the canonical form).
/// Every valid move is generated the dumb way: each amount from 1 to the
/// largest value, each non-empty subset of the values that can afford it.
/// Intended for small states only — the explored graph is bounded by the
/// number of canonical states with values below the starting maximum.
pub fn bfs_cm(values: &[u64]) -> u64 {
    if values.is_empty() {
        return 0;
    }
    let start = values.to_vec();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut queue: VecDeque<(Vec<u64>, u64)> = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back((start, 0));
    while let Some((state, dist)) = queue.pop_front() {
        for next in successors(&state) {
            if next.is_empty() {
                return dist + 1;
            }
            if seen.insert(next.clone()) {
                queue.push_back((next, dist + 1));
            }
        }
    }
    unreachable!("emptying one jar at a time always terminates");
}

/// All canonical states reachable from `state` in one move.
///
/// May contain duplicates; callers dedupe via their visited set.
pub fn successors(state: &[u64]) -> Vec<Vec<u64>> {
    let mut result = Vec::new();
    let largest = *state.last().expect("non-empty state");
    for amount in 1..=largest {
        let eligible: Vec<u64> = state.iter().copied().filter(|&v| v >= amount).collect();
        for mask in 1u32..(1 << eligible.len()) {
            let mut next: Vec<u64> = Vec::with_capacity(state.len());
            let mut bit = 0;
            for &value in state {
                let chosen = value >= amount
                    && eligible
                        .iter()
                        .position(|&e| e == value)
                        .is_some_and(|i| mask >> i & 1 == 1);
                // Track nothing per-jar beyond membership: values are
                // distinct, so position lookup is unambiguous.
                let left = if chosen { value - amount } else { value };
                if left > 0 {
                    next.push(left);
                }
                bit += u32::from(chosen);
            }
            debug_assert!(bit >= 1);
            next.sort_unstable();
            next.dedup();
            result.push(next);
        }
    }
    result
}

/// Every non-empty subset of `pool`, as sorted value vectors.
pub fn subsets(pool: &[u64]) -> Vec<Vec<u64>> {
    let mut out = Vec::with_capacity((1usize << pool.len()) - 1);
    for mask in 1u32..(1 << pool.len()) {
        let subset: Vec<u64> = pool
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        out.push(subset);
    }
    out
}
