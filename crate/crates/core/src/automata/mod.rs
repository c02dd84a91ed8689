//! Multi-track automata over LSD-first binary encodings.
//!
//! A tuple of naturals `(x_0, .., x_{w-1})` is read as a word over the
//! alphabet `{0,1}^w`: the i-th symbol carries bit i of every component,
//! track 0 in the least significant bit of the symbol. Shorter components
//! are padded with zeros at the most significant end, and zero itself is
//! the empty string. Every automaton built here is *padding invariant*:
//! appending all-zero symbols never changes acceptance, so automata
//! recognize sets of numbers rather than sets of strings.

mod build;
mod io;
mod ops;

pub use build::{make_add, make_const, make_eq, make_less_equal, make_less_than, universal};
pub use io::{read_automaton, write_dfa, write_nfa, AutomatonFile};
pub use ops::{
    align_tracks, complement, determinize, enumerate_accepted, is_language_equal, minimize,
    product, project, project_weighted, BoolOp, DEFAULT_STATE_CAP,
};

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};

pub type StateId = u32;

/// One letter of the multi-track alphabet; bit `i` is the digit on track `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u32);

impl Symbol {
    pub const ZERO: Symbol = Symbol(0);

    pub fn bit(self, track: usize) -> u32 {
        (self.0 >> track) & 1
    }

    /// Bits as characters, track 0 first.
    pub fn to_bitstring(self, arity: usize) -> String {
        (0..arity)
            .map(|t| if self.bit(t) == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn from_bitstring(s: &str) -> Option<Symbol> {
        let mut v = 0u32;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v |= 1 << i,
                _ => return None,
            }
        }
        Some(Symbol(v))
    }
}

/// A tuple of naturals, one per track.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumberTuple(pub Vec<BigUint>);

impl NumberTuple {
    pub fn from_u64s(values: &[u64]) -> Self {
        NumberTuple(values.iter().map(|&v| BigUint::from(v)).collect())
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// Longest binary length over all components; zero has length 0.
    pub fn canonical_len(&self) -> usize {
        self.0.iter().map(|v| v.bits() as usize).max().unwrap_or(0)
    }
}

/// Zips LSD-first digit strings of every component into symbols, zero padded
/// to `length`.
pub fn encode(tuple: &NumberTuple, length: usize) -> Result<Vec<Symbol>> {
    let canonical = tuple.canonical_len();
    if length < canonical {
        return Err(Error::EncodingTooShort { length, canonical });
    }
    Ok((0..length as u64)
        .map(|pos| {
            let mut s = 0u32;
            for (t, v) in tuple.0.iter().enumerate() {
                if v.bit(pos) {
                    s |= 1 << t;
                }
            }
            Symbol(s)
        })
        .collect())
}

/// Complete deterministic automaton over `{0,1}^w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    tracks: Vec<String>,
    initial: StateId,
    /// `delta[q * alphabet + s]`
    delta: Vec<StateId>,
    accepting: Vec<bool>,
}

impl Dfa {
    pub fn new(
        tracks: Vec<String>,
        initial: StateId,
        delta: Vec<StateId>,
        accepting: Vec<bool>,
    ) -> Result<Self> {
        check_tracks(&tracks)?;
        let alphabet = 1usize << tracks.len();
        let states = accepting.len();
        if states == 0 || delta.len() != states * alphabet {
            return Err(Error::Dimension(format!(
                "{} transitions for {} states over {} symbols",
                delta.len(),
                states,
                alphabet
            )));
        }
        if initial as usize >= states || delta.iter().any(|&q| q as usize >= states) {
            return Err(Error::Dimension("state id out of range".into()));
        }
        Ok(Dfa {
            tracks,
            initial,
            delta,
            accepting,
        })
    }

    pub(crate) fn from_parts(
        tracks: Vec<String>,
        initial: StateId,
        delta: Vec<StateId>,
        accepting: Vec<bool>,
    ) -> Self {
        debug_assert_eq!(delta.len(), accepting.len() << tracks.len());
        Dfa {
            tracks,
            initial,
            delta,
            accepting,
        }
    }

    pub fn tracks(&self) -> &[String] {
        &self.tracks
    }

    pub fn arity(&self) -> usize {
        self.tracks.len()
    }

    pub fn alphabet_size(&self) -> usize {
        1 << self.tracks.len()
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q as usize]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.state_count() as StateId).filter(|&q| self.accepting[q as usize])
    }

    #[inline]
    pub fn next(&self, q: StateId, s: Symbol) -> StateId {
        self.delta[q as usize * self.alphabet_size() + s.0 as usize]
    }

    pub fn run<I: IntoIterator<Item = Symbol>>(&self, word: I) -> StateId {
        word.into_iter().fold(self.initial, |q, s| self.next(q, s))
    }

    pub fn accepts(&self, tuple: &NumberTuple) -> Result<bool> {
        self.check_arity(tuple.arity())?;
        let word = encode(tuple, tuple.canonical_len())?;
        Ok(self.is_accepting(self.run(word)))
    }

    /// Fast path for machine-word inputs.
    pub fn accepts_u64(&self, values: &[u64]) -> Result<bool> {
        self.check_arity(values.len())?;
        Ok(self.accepts_u64_unchecked(values))
    }

    pub(crate) fn accepts_u64_unchecked(&self, values: &[u64]) -> bool {
        let len = values
            .iter()
            .map(|v| 64 - v.leading_zeros())
            .max()
            .unwrap_or(0);
        let mut q = self.initial;
        for pos in 0..len {
            let mut s = 0u32;
            for (t, v) in values.iter().enumerate() {
                s |= (((v >> pos) & 1) as u32) << t;
            }
            q = self.next(q, Symbol(s));
        }
        self.is_accepting(q)
    }

    fn check_arity(&self, got: usize) -> Result<()> {
        if got != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                got,
            });
        }
        Ok(())
    }

    /// States reachable from the initial state, as a mask.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial as usize] = true;
        while let Some(q) = queue.pop_front() {
            for s in 0..self.alphabet_size() as u32 {
                let p = self.next(q, Symbol(s));
                if !seen[p as usize] {
                    seen[p as usize] = true;
                    queue.push_back(p);
                }
            }
        }
        seen
    }

    /// States from which no accepting state can be reached.
    pub fn dead_states(&self) -> Vec<StateId> {
        let n = self.state_count();
        let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for q in 0..n {
            for s in 0..self.alphabet_size() {
                preds[self.delta[q * self.alphabet_size() + s] as usize].push(q as StateId);
            }
        }
        let mut live = self.accepting.clone();
        let mut stack: Vec<StateId> = self.accepting_states().collect();
        while let Some(q) = stack.pop() {
            for &p in &preds[q as usize] {
                if !live[p as usize] {
                    live[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        (0..n as StateId).filter(|&q| !live[q as usize]).collect()
    }

    /// State count once dead states are dropped (partial-automaton convention).
    pub fn trimmed_state_count(&self) -> usize {
        self.state_count() - self.dead_states().len()
    }

    /// For every reachable q: accept(q) iff accept(delta(q, 0)).
    pub fn is_padding_invariant(&self) -> bool {
        self.reachable()
            .iter()
            .enumerate()
            .filter(|(_, &r)| r)
            .all(|(q, _)| {
                let q = q as StateId;
                self.is_accepting(q) == self.is_accepting(self.next(q, Symbol::ZERO))
            })
    }

    /// Same automaton with its tracks renamed positionally.
    pub fn with_tracks(mut self, tracks: Vec<String>) -> Result<Self> {
        self.check_arity(tracks.len())?;
        check_tracks(&tracks)?;
        self.tracks = tracks;
        Ok(self)
    }

    pub(crate) fn delta(&self) -> &[StateId] {
        &self.delta
    }

    pub(crate) fn accepting_mask(&self) -> &[bool] {
        &self.accepting
    }
}

pub(crate) fn check_tracks(tracks: &[String]) -> Result<()> {
    for (i, t) in tracks.iter().enumerate() {
        if tracks[..i].contains(t) {
            return Err(Error::DuplicateTrack(t.clone()));
        }
    }
    if tracks.len() > 16 {
        return Err(Error::Dimension(format!("{} tracks", tracks.len())));
    }
    Ok(())
}

/// Nondeterministic automaton with non-negative integer transition
/// multiplicities. Acceptance is "some weighted accepting path exists";
/// [`Nfa::path_count`] gives the weighted number of such paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    tracks: Vec<String>,
    initial: Vec<u64>,
    /// `delta[q * alphabet + s]` lists `(target, multiplicity)`, targets ascending.
    delta: Vec<Vec<(StateId, u64)>>,
    accepting: Vec<bool>,
}

impl Nfa {
    pub fn new(
        tracks: Vec<String>,
        initial: Vec<u64>,
        delta: Vec<Vec<(StateId, u64)>>,
        accepting: Vec<bool>,
    ) -> Result<Self> {
        check_tracks(&tracks)?;
        let states = accepting.len();
        if states == 0
            || initial.len() != states
            || delta.len() != states << tracks.len()
            || delta.iter().flatten().any(|&(p, _)| p as usize >= states)
        {
            return Err(Error::Dimension("inconsistent NFA tables".into()));
        }
        let mut nfa = Nfa {
            tracks,
            initial,
            delta,
            accepting,
        };
        nfa.normalize_edges();
        Ok(nfa)
    }

    fn normalize_edges(&mut self) {
        for edges in &mut self.delta {
            edges.sort_unstable_by_key(|&(p, _)| p);
            let mut merged: Vec<(StateId, u64)> = Vec::with_capacity(edges.len());
            for &(p, w) in edges.iter() {
                match merged.last_mut() {
                    Some((last, acc)) if *last == p => *acc += w,
                    _ => merged.push((p, w)),
                }
            }
            merged.retain(|&(_, w)| w > 0);
            *edges = merged;
        }
    }

    pub fn tracks(&self) -> &[String] {
        &self.tracks
    }

    pub fn arity(&self) -> usize {
        self.tracks.len()
    }

    pub fn alphabet_size(&self) -> usize {
        1 << self.tracks.len()
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial_weights(&self) -> &[u64] {
        &self.initial
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q as usize]
    }

    pub fn edges(&self, q: StateId, s: Symbol) -> &[(StateId, u64)] {
        &self.delta[q as usize * self.alphabet_size() + s.0 as usize]
    }

    /// Weighted number of accepting paths on the canonical encoding.
    pub fn path_count(&self, tuple: &NumberTuple) -> Result<BigUint> {
        if tuple.arity() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                got: tuple.arity(),
            });
        }
        let word = encode(tuple, tuple.canonical_len())?;
        let mut weights: Vec<BigUint> = self.initial.iter().map(|&w| BigUint::from(w)).collect();
        for s in word {
            let mut next = vec![BigUint::zero(); self.state_count()];
            for (q, wq) in weights.iter().enumerate() {
                if wq.is_zero() {
                    continue;
                }
                for &(p, m) in self.edges(q as StateId, s) {
                    next[p as usize] += wq * m;
                }
            }
            weights = next;
        }
        Ok(weights
            .into_iter()
            .enumerate()
            .filter(|(q, _)| self.accepting[*q])
            .map(|(_, w)| w)
            .sum())
    }

    pub fn accepts(&self, tuple: &NumberTuple) -> Result<bool> {
        Ok(!self.path_count(tuple)?.is_zero())
    }

    /// Marks a state accepting when an accepting state is reachable from it
    /// along all-zero symbols.
    pub fn saturate_zero_tail(&mut self) {
        let n = self.state_count();
        let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for q in 0..n {
            for &(p, _) in &self.delta[q * self.alphabet_size()] {
                preds[p as usize].push(q as StateId);
            }
        }
        let mut stack: Vec<StateId> = (0..n as StateId)
            .filter(|&q| self.accepting[q as usize])
            .collect();
        while let Some(q) = stack.pop() {
            for &p in &preds[q as usize] {
                if !self.accepting[p as usize] {
                    self.accepting[p as usize] = true;
                    stack.push(p);
                }
            }
        }
    }
}

impl From<&Dfa> for Nfa {
    fn from(d: &Dfa) -> Self {
        let mut initial = vec![0; d.state_count()];
        initial[d.initial as usize] = 1;
        Nfa {
            tracks: d.tracks.clone(),
            initial,
            delta: d.delta.iter().map(|&p| vec![(p, 1)]).collect(),
            accepting: d.accepting.clone(),
        }
    }
}
