//! The `automaton/1` text format.
//!
//! ```text
//! automaton/1
//! tracks: x y z
//! states: 3
//! initial: 0
//! accepting: 0
//! 0 000 0
//! 0 100 2
//! ...
//! ```
//!
//! One transition per line, `<from> <bits> <to> [multiplicity]`, where
//! `<bits>` lists the digit of each track, track 0 first (`-` when there are
//! no tracks). DFA files omit multiplicities and list every transition in
//! state-then-symbol order. NFA files carry a multiplicity on every line and
//! may give initial weights as `id:weight`.

use std::fmt::Write as _;

use super::{Dfa, Nfa, StateId, Symbol};
use crate::error::{Error, Result};

const HEADER: &str = "automaton/1";

#[derive(Clone, Debug)]
pub enum AutomatonFile {
    Dfa(Dfa),
    Nfa(Nfa),
}

fn bits(s: Symbol, arity: usize) -> String {
    if arity == 0 {
        "-".to_string()
    } else {
        s.to_bitstring(arity)
    }
}

fn ids(it: impl Iterator<Item = String>) -> String {
    it.collect::<Vec<_>>().join(" ")
}

pub fn write_dfa(d: &Dfa) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    let _ = writeln!(out, "tracks: {}", d.tracks().join(" "));
    let _ = writeln!(out, "states: {}", d.state_count());
    let _ = writeln!(out, "initial: {}", d.initial());
    let _ = writeln!(
        out,
        "accepting: {}",
        ids(d.accepting_states().map(|q| q.to_string()))
    );
    for q in 0..d.state_count() as StateId {
        for s in 0..d.alphabet_size() as u32 {
            let p = d.next(q, Symbol(s));
            let _ = writeln!(out, "{q} {} {p}", bits(Symbol(s), d.arity()));
        }
    }
    out
}

pub fn write_nfa(a: &Nfa) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    let _ = writeln!(out, "tracks: {}", a.tracks().join(" "));
    let _ = writeln!(out, "states: {}", a.state_count());
    let _ = writeln!(
        out,
        "initial: {}",
        ids(a
            .initial_weights()
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0)
            .map(|(q, w)| format!("{q}:{w}")))
    );
    let _ = writeln!(
        out,
        "accepting: {}",
        ids((0..a.state_count())
            .filter(|&q| a.is_accepting(q as StateId))
            .map(|q| q.to_string()))
    );
    for q in 0..a.state_count() as StateId {
        for s in 0..a.alphabet_size() as u32 {
            for &(p, m) in a.edges(q, Symbol(s)) {
                let _ = writeln!(out, "{q} {} {p} {m}", bits(Symbol(s), a.arity()));
            }
        }
    }
    out
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Format {
        format: HEADER,
        line,
        msg: msg.into(),
    }
}

fn field<'a>(line: Option<(usize, &'a str)>, key: &str) -> Result<(usize, &'a str)> {
    let (no, text) = line.ok_or_else(|| err(0, format!("missing `{key}:` line")))?;
    let rest = text
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix(':'))
        .ok_or_else(|| err(no, format!("expected `{key}:`")))?;
    Ok((no, rest.trim()))
}

fn parse_num<T: std::str::FromStr>(no: usize, s: &str) -> Result<T> {
    s.parse().map_err(|_| err(no, format!("bad number `{s}`")))
}

pub fn read_automaton(text: &str) -> Result<AutomatonFile> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    match lines.next() {
        Some((_, HEADER)) => {}
        Some((no, other)) => return Err(err(no, format!("expected `{HEADER}`, found `{other}`"))),
        None => return Err(err(0, "empty file")),
    }
    let (_, tracks) = field(lines.next(), "tracks")?;
    let tracks: Vec<String> = tracks.split_whitespace().map(String::from).collect();
    let (no, states) = field(lines.next(), "states")?;
    let states: usize = parse_num(no, states)?;
    let (no, initial) = field(lines.next(), "initial")?;
    let mut init_weights = vec![0u64; states];
    let mut weighted_init = false;
    let mut init_count = 0;
    for tok in initial.split_whitespace() {
        let (q, w) = match tok.split_once(':') {
            Some((q, w)) => {
                weighted_init = true;
                (parse_num::<usize>(no, q)?, parse_num::<u64>(no, w)?)
            }
            None => (parse_num::<usize>(no, tok)?, 1),
        };
        if q >= states {
            return Err(err(no, format!("initial state {q} out of range")));
        }
        init_weights[q] += w;
        init_count += 1;
    }
    let (no, acc) = field(lines.next(), "accepting")?;
    let mut accepting = vec![false; states];
    for tok in acc.split_whitespace() {
        let q: usize = parse_num(no, tok)?;
        if q >= states {
            return Err(err(no, format!("accepting state {q} out of range")));
        }
        accepting[q] = true;
    }

    let arity = tracks.len();
    let alphabet = 1usize << arity;
    let mut edges: Vec<Vec<(StateId, u64)>> = vec![Vec::new(); states * alphabet];
    let mut any_multiplicity = false;
    for (no, line) in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 && parts.len() != 4 {
            return Err(err(no, "expected `<from> <bits> <to> [multiplicity]`"));
        }
        let from: usize = parse_num(no, parts[0])?;
        let sym = if arity == 0 && parts[1] == "-" {
            Symbol(0)
        } else if parts[1].len() == arity {
            Symbol::from_bitstring(parts[1]).ok_or_else(|| err(no, "bad symbol"))?
        } else {
            return Err(err(no, format!("symbol must have {arity} bits")));
        };
        let to: usize = parse_num(no, parts[2])?;
        if from >= states || to >= states {
            return Err(err(no, "state out of range"));
        }
        let m = match parts.get(3) {
            Some(m) => {
                any_multiplicity = true;
                parse_num(no, m)?
            }
            None => 1,
        };
        edges[from * alphabet + sym.0 as usize].push((to as StateId, m));
    }

    let deterministic = !any_multiplicity
        && !weighted_init
        && init_count == 1
        && edges.iter().all(|e| e.len() == 1);
    if deterministic {
        let initial = init_weights.iter().position(|&w| w > 0).unwrap() as StateId;
        let delta = edges.iter().map(|e| e[0].0).collect();
        Ok(AutomatonFile::Dfa(Dfa::new(
            tracks, initial, delta, accepting,
        )?))
    } else {
        Ok(AutomatonFile::Nfa(Nfa::new(
            tracks,
            init_weights,
            edges,
            accepting,
        )?))
    }
}
