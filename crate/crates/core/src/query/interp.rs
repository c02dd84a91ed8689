//! Direct evaluation of formulas over bounded quantifier ranges, used as a
//! brute-force check on the compiler.

use std::collections::HashMap;

use super::parse::{Formula, FormulaKind, RelOp, Term};
use crate::error::{Error, Result};

/// Natural-number value of a term; `None` when a subtraction goes negative.
fn term_value(t: &Term, env: &HashMap<String, u64>) -> Result<Option<u64>> {
    Ok(match t {
        Term::Var(v) => Some(
            *env.get(v)
                .ok_or_else(|| Error::UnboundVariable(v.clone()))?,
        ),
        Term::Const(c) => Some(*c),
        Term::Add(a, b) => match (term_value(a, env)?, term_value(b, env)?) {
            (Some(x), Some(y)) => Some(x + y),
            _ => None,
        },
        Term::Sub(a, b) => match (term_value(a, env)?, term_value(b, env)?) {
            (Some(x), Some(y)) => x.checked_sub(y),
            _ => None,
        },
        Term::Scale(c, a) => term_value(a, env)?.map(|x| c * x),
    })
}

/// Evaluates `f` under `env`. Quantified variables range over
/// `0..quant_bound`; an atom with an undefined term is false.
pub fn evaluate(
    f: &Formula,
    env: &mut HashMap<String, u64>,
    preds: &dyn Fn(&str, &[u64]) -> Option<bool>,
    quant_bound: u64,
) -> Result<bool> {
    use FormulaKind::*;
    Ok(match &f.kind {
        And(a, b) => evaluate(a, env, preds, quant_bound)? && evaluate(b, env, preds, quant_bound)?,
        Or(a, b) => evaluate(a, env, preds, quant_bound)? || evaluate(b, env, preds, quant_bound)?,
        Implies(a, b) => {
            !evaluate(a, env, preds, quant_bound)? || evaluate(b, env, preds, quant_bound)?
        }
        Iff(a, b) => evaluate(a, env, preds, quant_bound)? == evaluate(b, env, preds, quant_bound)?,
        Not(a) => !evaluate(a, env, preds, quant_bound)?,
        Exists(vars, body) => quantify(vars, body, env, preds, quant_bound, true)?,
        Forall(vars, body) => quantify(vars, body, env, preds, quant_bound, false)?,
        Pred { name, args } => {
            let mut values = Vec::with_capacity(args.len());
            for a in args {
                match term_value(a, env)? {
                    Some(v) => values.push(v),
                    None => return Ok(false),
                }
            }
            preds(name, &values).ok_or_else(|| Error::UnknownPredicate(name.clone()))?
        }
        Cmp { lhs, op, rhs } => match (term_value(lhs, env)?, term_value(rhs, env)?) {
            (Some(x), Some(y)) => match op {
                RelOp::Eq => x == y,
                RelOp::Ne => x != y,
                RelOp::Lt => x < y,
                RelOp::Le => x <= y,
                RelOp::Gt => x > y,
                RelOp::Ge => x >= y,
            },
            _ => false,
        },
    })
}

fn quantify(
    vars: &[String],
    body: &Formula,
    env: &mut HashMap<String, u64>,
    preds: &dyn Fn(&str, &[u64]) -> Option<bool>,
    quant_bound: u64,
    exists: bool,
) -> Result<bool> {
    let Some((first, rest)) = vars.split_first() else {
        return evaluate(body, env, preds, quant_bound);
    };
    let saved = env.get(first).copied();
    let mut result = !exists;
    for v in 0..quant_bound {
        env.insert(first.clone(), v);
        if quantify(rest, body, env, preds, quant_bound, exists)? == exists {
            result = exists;
            break;
        }
    }
    match saved {
        Some(s) => env.insert(first.clone(), s),
        None => env.remove(first),
    };
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::parse;

    #[test]
    fn bounded_quantifiers() {
        let f = parse("E y (x = y + y)").unwrap();
        let none = |_: &str, _: &[u64]| None;
        for x in 0..20 {
            let mut env = HashMap::from([("x".to_string(), x)]);
            assert_eq!(evaluate(&f, &mut env, &none, 32).unwrap(), x % 2 == 0);
            assert_eq!(env.len(), 1);
        }
    }

    #[test]
    fn undefined_terms_make_atoms_false() {
        let f = parse("x - 1 != 5").unwrap();
        let none = |_: &str, _: &[u64]| None;
        let mut env = HashMap::from([("x".to_string(), 0)]);
        assert!(!evaluate(&f, &mut env, &none, 1).unwrap());
    }
}
