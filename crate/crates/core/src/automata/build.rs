//! Base relations: addition, comparisons, constants.

use num_bigint::BigUint;

use super::{Dfa, StateId, Symbol};

fn names(ns: &[&str]) -> Vec<String> {
    ns.iter().map(|s| s.to_string()).collect()
}

/// Builds a DFA from a transition function over `states` states.
fn tabulate(
    tracks: Vec<String>,
    states: usize,
    accepting: Vec<bool>,
    step: impl Fn(StateId, Symbol) -> StateId,
) -> Dfa {
    let alphabet = 1u32 << tracks.len();
    let delta = (0..states as StateId)
        .flat_map(|q| (0..alphabet).map(move |s| (q, Symbol(s))))
        .map(|(q, s)| step(q, s))
        .collect();
    Dfa::from_parts(tracks, 0, delta, accepting)
}

/// Tracks `(x, y, z)`, accepts `x + y = z`. State 0 is carry 0, state 1 carry 1,
/// state 2 the sink.
pub fn make_add() -> Dfa {
    tabulate(
        names(&["x", "y", "z"]),
        3,
        vec![true, false, false],
        |q, s| {
            if q == 2 {
                return 2;
            }
            let sum = s.bit(0) + s.bit(1) + q;
            if sum & 1 == s.bit(2) {
                sum >> 1
            } else {
                2
            }
        },
    )
}

/// Tracks `(x, y)`, accepts `x <= y`. Reading LSD-first, the most recently
/// seen differing bit decides.
pub fn make_less_equal() -> Dfa {
    tabulate(names(&["x", "y"]), 2, vec![true, false], |q, s| {
        match (s.bit(0), s.bit(1)) {
            (0, 1) => 0,
            (1, 0) => 1,
            _ => q,
        }
    })
}

/// Tracks `(x, y)`, accepts `x < y`. States: equal so far, less, greater.
pub fn make_less_than() -> Dfa {
    tabulate(
        names(&["x", "y"]),
        3,
        vec![false, true, false],
        |q, s| match (s.bit(0), s.bit(1)) {
            (0, 1) => 1,
            (1, 0) => 2,
            _ => q,
        },
    )
}

/// Tracks `(x, y)`, accepts `x = y`.
pub fn make_eq() -> Dfa {
    tabulate(names(&["x", "y"]), 2, vec![true, false], |q, s| {
        if q == 0 && s.bit(0) == s.bit(1) {
            0
        } else {
            1
        }
    })
}

/// One track `n`, accepts exactly `c`.
pub fn make_const(c: &BigUint) -> Dfa {
    let len = c.bits() as usize;
    let sink = len as StateId + 1;
    let mut accepting = vec![false; len + 2];
    accepting[len] = true;
    tabulate(names(&["n"]), len + 2, accepting, |q, s| {
        let q_us = q as usize;
        if q == sink {
            sink
        } else if q_us < len {
            if c.bit(q_us as u64) as u32 == s.0 {
                q + 1
            } else {
                sink
            }
        } else if s.0 == 0 {
            q
        } else {
            sink
        }
    })
}

/// Accepts every tuple over `tracks`.
pub fn universal(tracks: Vec<String>) -> Dfa {
    let alphabet = 1usize << tracks.len();
    Dfa::from_parts(tracks, 0, vec![0; alphabet], vec![true])
}
