//! Boolean algebra, cylindrification, projection, subset construction and
//! minimization.

use std::collections::{HashMap, VecDeque};

use super::{check_tracks, Dfa, Nfa, StateId, Symbol};
use crate::error::{Error, Result};

/// Default cap on subset states created by [`determinize`].
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolOp {
    And,
    Or,
    Xor,
    Implies,
    Iff,
}

impl BoolOp {
    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            BoolOp::And => a && b,
            BoolOp::Or => a || b,
            BoolOp::Xor => a != b,
            BoolOp::Implies => !a || b,
            BoolOp::Iff => a == b,
        }
    }
}

pub fn complement(d: &Dfa) -> Dfa {
    let mut out = d.clone();
    for a in &mut out.accepting {
        *a = !*a;
    }
    out
}

/// Re-expresses `d` over `full`, ignoring the tracks it does not mention.
pub fn align_tracks(d: &Dfa, full: &[String]) -> Result<Dfa> {
    check_tracks(full)?;
    let pos: Vec<usize> = d
        .tracks()
        .iter()
        .map(|t| {
            full.iter()
                .position(|f| f == t)
                .ok_or_else(|| Error::UnknownTrack(t.clone()))
        })
        .collect::<Result<_>>()?;
    let new_alpha = 1usize << full.len();
    let old_alpha = d.alphabet_size();
    let project_symbol = |s: usize| -> usize {
        pos.iter()
            .enumerate()
            .map(|(i, &p)| ((s >> p) & 1) << i)
            .sum()
    };
    let map: Vec<usize> = (0..new_alpha).map(project_symbol).collect();
    let mut delta = Vec::with_capacity(d.state_count() * new_alpha);
    for q in 0..d.state_count() {
        let row = &d.delta()[q * old_alpha..(q + 1) * old_alpha];
        delta.extend(map.iter().map(|&s| row[s]));
    }
    Ok(Dfa::from_parts(
        full.to_vec(),
        d.initial(),
        delta,
        d.accepting_mask().to_vec(),
    ))
}

fn union_tracks(a: &[String], b: &[String]) -> Vec<String> {
    let mut out = a.to_vec();
    out.extend(b.iter().filter(|t| !a.contains(t)).cloned());
    out
}

/// Synchronous product over the union of both track lists (first operand's
/// order, then the new tracks of the second). Only reachable pairs are kept.
pub fn product(d1: &Dfa, d2: &Dfa, op: BoolOp) -> Result<Dfa> {
    let tracks = union_tracks(d1.tracks(), d2.tracks());
    let a = align_tracks(d1, &tracks)?;
    let b = align_tracks(d2, &tracks)?;
    let alphabet = a.alphabet_size();

    let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut pairs = vec![(a.initial(), b.initial())];
    index.insert(pairs[0], 0);
    let mut delta = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        for s in 0..alphabet as u32 {
            let next = (a.next(p, Symbol(s)), b.next(q, Symbol(s)));
            let id = *index.entry(next).or_insert_with(|| {
                pairs.push(next);
                (pairs.len() - 1) as StateId
            });
            delta.push(id);
        }
        i += 1;
    }
    let accepting = pairs
        .iter()
        .map(|&(p, q)| op.apply(a.is_accepting(p), b.is_accepting(q)))
        .collect();
    Ok(Dfa::from_parts(tracks, 0, delta, accepting))
}

/// Drops `track`, summing multiplicities of merged transitions. The accepting
/// set is left as is, so path counts are exact for inputs whose witnesses fit
/// in the input length.
pub fn project_weighted(d: &Dfa, track: &str) -> Result<Nfa> {
    let p = d
        .tracks()
        .iter()
        .position(|t| t == track)
        .ok_or_else(|| Error::UnknownTrack(track.to_string()))?;
    let tracks: Vec<String> = d.tracks().iter().filter(|t| *t != track).cloned().collect();
    let alpha = 1u32 << tracks.len();
    let low_mask = (1u32 << p) - 1;
    let mut delta = Vec::with_capacity(d.state_count() * alpha as usize);
    for q in 0..d.state_count() as StateId {
        for s in 0..alpha {
            let spread = (s & low_mask) | ((s & !low_mask) << 1);
            let mut edges = vec![
                (d.next(q, Symbol(spread)), 1),
                (d.next(q, Symbol(spread | (1 << p))), 1),
            ];
            if edges[0].0 == edges[1].0 {
                edges = vec![(edges[0].0, 2)];
            }
            delta.push(edges);
        }
    }
    let mut initial = vec![0; d.state_count()];
    initial[d.initial() as usize] = 1;
    Nfa::new(tracks, initial, delta, d.accepting_mask().to_vec())
}

/// Existential projection: accepts `t` iff some value `v` on the dropped
/// track makes `(t, v)` accepted. The witness may be longer than `t`, which
/// zero-tail saturation accounts for.
pub fn project(d: &Dfa, track: &str) -> Result<Nfa> {
    let mut nfa = project_weighted(d, track)?;
    nfa.saturate_zero_tail();
    Ok(nfa)
}

/// Subset construction; multiplicities collapse to reachability.
pub fn determinize(nfa: &Nfa, cap: usize) -> Result<Dfa> {
    let mut nfa = nfa.clone();
    nfa.saturate_zero_tail();
    let alphabet = nfa.alphabet_size();

    let start: Vec<StateId> = nfa
        .initial_weights()
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0)
        .map(|(q, _)| q as StateId)
        .collect();
    let mut index: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let mut subsets = vec![start.clone()];
    index.insert(start, 0);
    let mut delta = Vec::new();
    let mut mark = vec![false; nfa.state_count()];
    let mut i = 0;
    while i < subsets.len() {
        for s in 0..alphabet as u32 {
            let mut next = Vec::new();
            for &q in &subsets[i] {
                for &(p, _) in nfa.edges(q, Symbol(s)) {
                    if !mark[p as usize] {
                        mark[p as usize] = true;
                        next.push(p);
                    }
                }
            }
            for &p in &next {
                mark[p as usize] = false;
            }
            next.sort_unstable();
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    if subsets.len() >= cap {
                        return Err(Error::StateCapExceeded { cap });
                    }
                    let id = subsets.len() as StateId;
                    index.insert(next.clone(), id);
                    subsets.push(next);
                    id
                }
            };
            delta.push(id);
        }
        i += 1;
    }
    let accepting = subsets
        .iter()
        .map(|set| set.iter().any(|&q| nfa.is_accepting(q)))
        .collect();
    Ok(Dfa::from_parts(nfa.tracks().to_vec(), 0, delta, accepting))
}

/// Renumbers reachable states breadth-first from the initial state, visiting
/// symbols in increasing order. Unreachable states are dropped.
fn canonicalize(d: &Dfa) -> Dfa {
    let alphabet = d.alphabet_size();
    let mut id = vec![StateId::MAX; d.state_count()];
    let mut order = vec![d.initial()];
    id[d.initial() as usize] = 0;
    let mut queue = VecDeque::from([d.initial()]);
    while let Some(q) = queue.pop_front() {
        for s in 0..alphabet as u32 {
            let p = d.next(q, Symbol(s));
            if id[p as usize] == StateId::MAX {
                id[p as usize] = order.len() as StateId;
                order.push(p);
                queue.push_back(p);
            }
        }
    }
    let delta = order
        .iter()
        .flat_map(|&q| (0..alphabet as u32).map(move |s| (q, s)))
        .map(|(q, s)| id[d.next(q, Symbol(s)) as usize])
        .collect();
    let accepting = order.iter().map(|&q| d.is_accepting(q)).collect();
    Dfa::from_parts(d.tracks().to_vec(), 0, delta, accepting)
}

/// Minimal complete DFA in canonical numbering: equal languages over equal
/// track lists give identical values.
pub fn minimize(d: &Dfa) -> Dfa {
    let d = canonicalize(d);
    let n = d.state_count();
    let alphabet = d.alphabet_size();

    // Moore refinement: split by acceptance, then by successor classes.
    let mut class: Vec<u32> = d.accepting_mask().iter().map(|&a| a as u32).collect();
    let mut count = {
        let mut seen = [false; 2];
        class.iter().for_each(|&c| seen[c as usize] = true);
        seen.iter().filter(|&&b| b).count()
    };
    loop {
        let mut sigs: HashMap<Vec<u32>, u32> = HashMap::with_capacity(count * 2);
        let mut next = Vec::with_capacity(n);
        let mut sig = Vec::with_capacity(alphabet + 1);
        for q in 0..n {
            sig.clear();
            sig.push(class[q]);
            sig.extend(
                d.delta()[q * alphabet..(q + 1) * alphabet]
                    .iter()
                    .map(|&p| class[p as usize]),
            );
            let fresh = sigs.len() as u32;
            next.push(*sigs.entry(sig.clone()).or_insert(fresh));
        }
        let new_count = sigs.len();
        class = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }

    let mut rep = vec![usize::MAX; count];
    for (q, &c) in class.iter().enumerate() {
        if rep[c as usize] == usize::MAX {
            rep[c as usize] = q;
        }
    }
    let delta = rep
        .iter()
        .flat_map(|&q| d.delta()[q * alphabet..(q + 1) * alphabet].iter())
        .map(|&p| class[p as usize])
        .collect();
    let accepting = rep.iter().map(|&q| d.is_accepting(q as StateId)).collect();
    let quotient = Dfa::from_parts(d.tracks().to_vec(), class[0], delta, accepting);
    canonicalize(&quotient)
}

/// Language equality by comparing canonical minimal forms. When both
/// automata name the same set of tracks, the second is first reordered to
/// match the first; otherwise tracks are compared positionally.
pub fn is_language_equal(d1: &Dfa, d2: &Dfa) -> Result<bool> {
    if d1.arity() != d2.arity() {
        return Err(Error::ArityMismatch {
            expected: d1.arity(),
            got: d2.arity(),
        });
    }
    let same_names = d2.tracks().iter().all(|t| d1.tracks().contains(t));
    let d2 = if same_names {
        align_tracks(d2, d1.tracks())?
    } else {
        d2.clone().with_tracks(d1.tracks().to_vec())?
    };
    let (m1, m2) = (minimize(d1), minimize(&d2));
    Ok(m1.delta() == m2.delta() && m1.accepting_mask() == m2.accepting_mask())
}

/// Every accepted tuple with all components `<= bound`, in lexicographic order.
pub fn enumerate_accepted(d: &Dfa, bound: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut tuple = vec![0u64; d.arity()];
    loop {
        if d.accepts_u64_unchecked(&tuple) {
            out.push(tuple.clone());
        }
        // odometer, last component fastest
        let mut i = tuple.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if tuple[i] < bound {
                tuple[i] += 1;
                tuple[i + 1..].iter_mut().for_each(|v| *v = 0);
                break;
            }
        }
    }
}
