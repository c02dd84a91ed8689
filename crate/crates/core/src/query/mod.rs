//! First-order queries over naturals with named automaton predicates.
//!
//! The accepted syntax is a strict subset of Walnut's: `E`/`A` quantifiers
//! (the body extends as far right as the enclosing parentheses allow),
//! `~ & | => <=>`, comparisons `= != < <= > >=`, terms built from variables,
//! constants, `+`, `-` and `c*term`, and predicate atoms `$name(t, ..)`. A
//! leading `?lsd_2` is accepted and ignored.

mod compile;
pub mod interp;
mod parse;

use std::collections::BTreeSet;

pub use compile::{Compiler, PredicateRegistry};
pub use parse::{parse, Formula, FormulaKind, ParseError, RelOp, Term};

use crate::automata::{determinize, enumerate_accepted, minimize, project, Dfa};
use crate::error::{Error, Result};
use crate::seed::{
    factauto, gamma_parity_dfa, theta_dfa, window_parity_dfa, ThetaTriple, WindowSpec,
};

/// `n` and `n + r` are consecutive members of S̄.
pub const GAPS_QUERY: &str =
    "?lsd_2 $factauto(n) & $factauto(n+r) & (Aj (j < r-1) => ~$factauto(n+j+1))";

/// `n` and `n + r` are consecutive members of S.
pub const SGAPS_QUERY: &str =
    "?lsd_2 ~$factauto(n) & ~$factauto(n+r) & (Aj (j < r-1) => $factauto(n+j+1))";

/// Pairs `(n, j)` with `1 <= j <= n` and j in S̄.
pub const SUMFACT_QUERY: &str = "?lsd_2 (j>=1) & (j<=n) & $factauto(j)";

/// `gamma`, `a3`, `a5`, `factauto` and `theta_xyz` for each triple.
pub fn seed_registry() -> PredicateRegistry {
    let mut reg = PredicateRegistry::new();
    reg.insert("gamma", gamma_parity_dfa());
    reg.insert("a3", window_parity_dfa(&WindowSpec::alpha3()));
    reg.insert("a5", window_parity_dfa(&WindowSpec::alpha5()));
    reg.insert("factauto", factauto());
    for t in ThetaTriple::all() {
        reg.insert(format!("theta_{}", t.code()), theta_dfa(t));
    }
    reg
}

fn compile_query(text: &str, reg: &PredicateRegistry, order: &[&str]) -> Result<Dfa> {
    Compiler::new(reg).compile_with_order(&parse(text)?, order)
}

/// Automaton over `(n, r)` for [`GAPS_QUERY`].
pub fn gaps_dfa(reg: &PredicateRegistry) -> Result<Dfa> {
    compile_query(GAPS_QUERY, reg, &["n", "r"])
}

/// Automaton over `(n, r)` for [`SGAPS_QUERY`].
pub fn sgaps_dfa(reg: &PredicateRegistry) -> Result<Dfa> {
    compile_query(SGAPS_QUERY, reg, &["n", "r"])
}

/// Automaton over `(n, j)` for [`SUMFACT_QUERY`].
pub fn sumfact_dfa(reg: &PredicateRegistry) -> Result<Dfa> {
    compile_query(SUMFACT_QUERY, reg, &["n", "j"])
}

/// The `r`-automaton of `E n gaps(n, r)`.
pub fn gap_length_dfa(d: &Dfa) -> Result<Dfa> {
    if d.tracks() != ["n", "r"] {
        return Err(Error::BadRelation(format!(
            "expected tracks (n, r), found ({})",
            d.tracks().join(", ")
        )));
    }
    Ok(minimize(&determinize(
        &project(d, "n")?,
        crate::automata::DEFAULT_STATE_CAP,
    )?))
}

/// Gap lengths `1 <= r <= bound` accepted by `E n d(n, r)`.
///
/// The gap formulas hold vacuously at `r = 0` (no `j < r - 1` exists), which
/// is not a gap between two distinct members, so 0 is left out.
pub fn gap_length_set(d: &Dfa, bound: u64) -> Result<BTreeSet<u64>> {
    Ok(enumerate_accepted(&gap_length_dfa(d)?, bound)
        .into_iter()
        .map(|t| t[0])
        .filter(|&r| r >= 1)
        .collect())
}

/// Automaton over `(n, j)` for pairs with `1 <= j <= n` and `Θ(j) = t`.
pub fn triple_count_dfa(reg: &PredicateRegistry, t: ThetaTriple) -> Result<Dfa> {
    let text = format!("?lsd_2 (j>=1) & (j<=n) & $theta_{}(j)", t.code());
    compile_query(&text, reg, &["n", "j"])
}
