use std::collections::BTreeMap;

use num_bigint::BigUint;

use super::parse::{Formula, FormulaKind, RelOp, Term};
use crate::automata::{
    align_tracks, complement, determinize, make_add, make_const, make_eq, make_less_equal,
    make_less_than, minimize, product, project, BoolOp, Dfa, DEFAULT_STATE_CAP,
};
use crate::error::{Error, Result};

/// Named automata usable as `$name(...)` atoms; argument `i` binds track `i`.
#[derive(Clone, Debug, Default)]
pub struct PredicateRegistry {
    preds: BTreeMap<String, Dfa>,
}

impl PredicateRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, dfa: Dfa) -> Option<Dfa> {
        self.preds.insert(name.into(), dfa)
    }

    pub fn get(&self, name: &str) -> Option<&Dfa> {
        self.preds.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.preds.keys().map(String::as_str)
    }
}

/// Compiles formulas to minimal DFAs over their free variables.
pub struct Compiler<'a> {
    registry: &'a PredicateRegistry,
    cap: usize,
    fresh: usize,
}

impl<'a> Compiler<'a> {
    pub fn new(registry: &'a PredicateRegistry) -> Self {
        Compiler {
            registry,
            cap: DEFAULT_STATE_CAP,
            fresh: 0,
        }
    }

    /// Subset-state cap for every determinization step.
    pub fn with_state_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    /// Tracks follow the first appearance of each free variable.
    pub fn compile(&mut self, f: &Formula) -> Result<Dfa> {
        let order = f.free_vars();
        if order.is_empty() {
            return Err(Error::NoFreeVariables);
        }
        self.compile_with_order(f, &order)
    }

    /// Tracks follow `order`, which must list every free variable.
    pub fn compile_with_order<S: AsRef<str>>(&mut self, f: &Formula, order: &[S]) -> Result<Dfa> {
        let order: Vec<String> = order.iter().map(|s| s.as_ref().to_string()).collect();
        if order.is_empty() {
            return Err(Error::NoFreeVariables);
        }
        if let Some(v) = f.free_vars().into_iter().find(|v| !order.contains(v)) {
            return Err(Error::UnboundVariable(v));
        }
        let d = self.formula(f)?;
        Ok(minimize(&align_tracks(&d, &order)?))
    }

    fn fresh_var(&mut self) -> String {
        self.fresh += 1;
        format!("#{}", self.fresh)
    }

    fn formula(&mut self, f: &Formula) -> Result<Dfa> {
        use FormulaKind::*;
        let binary = |c: &mut Self, a: &Formula, b: &Formula, op| -> Result<Dfa> {
            let da = c.formula(a)?;
            let db = c.formula(b)?;
            Ok(minimize(&product(&da, &db, op)?))
        };
        match &f.kind {
            And(a, b) => binary(self, a, b, BoolOp::And),
            Or(a, b) => binary(self, a, b, BoolOp::Or),
            Implies(a, b) => binary(self, a, b, BoolOp::Implies),
            Iff(a, b) => binary(self, a, b, BoolOp::Iff),
            Not(a) => Ok(complement(&self.formula(a)?)),
            Exists(vars, body) => {
                let mut d = self.formula(body)?;
                for v in vars.iter().rev() {
                    d = self.exists(&d, v)?;
                }
                Ok(d)
            }
            Forall(vars, body) => {
                // A x φ  ==  ~E x ~φ
                let mut d = complement(&self.formula(body)?);
                for v in vars.iter().rev() {
                    d = self.exists(&d, v)?;
                }
                Ok(complement(&d))
            }
            Pred { name, args } => {
                let rel = self
                    .registry
                    .get(name)
                    .ok_or_else(|| Error::UnknownPredicate(name.clone()))?
                    .clone();
                if rel.arity() != args.len() {
                    return Err(Error::PredicateArity {
                        name: name.clone(),
                        expected: rel.arity(),
                        got: args.len(),
                    });
                }
                self.bind(rel, args)
            }
            Cmp { lhs, op, rhs } => {
                let (rel, args) = match op {
                    RelOp::Eq => (make_eq(), [lhs, rhs]),
                    RelOp::Ne => (complement(&make_eq()), [lhs, rhs]),
                    RelOp::Lt => (make_less_than(), [lhs, rhs]),
                    RelOp::Le => (make_less_equal(), [lhs, rhs]),
                    RelOp::Gt => (make_less_than(), [rhs, lhs]),
                    RelOp::Ge => (make_less_equal(), [rhs, lhs]),
                };
                let args: Vec<Term> = args.into_iter().cloned().collect();
                self.bind(rel, &args)
            }
        }
    }

    fn exists(&self, d: &Dfa, var: &str) -> Result<Dfa> {
        if !d.tracks().iter().any(|t| t == var) {
            return Ok(d.clone());
        }
        Ok(minimize(&determinize(&project(d, var)?, self.cap)?))
    }

    /// `rel(args...)`: every argument is flattened to a variable, compound
    /// terms through fresh variables constrained by addition and constants,
    /// which are then projected away.
    fn bind(&mut self, rel: Dfa, args: &[Term]) -> Result<Dfa> {
        let mut constraints = Vec::new();
        let mut fresh = Vec::new();
        let vars: Vec<String> = args
            .iter()
            .map(|t| self.flatten(t, &mut constraints, &mut fresh))
            .collect::<Result<_>>()?;
        let mut d = self.relation(rel, &vars, &mut constraints, &mut fresh)?;
        for c in constraints.iter().rev() {
            d = minimize(&product(&d, c, BoolOp::And)?);
        }
        for v in fresh.iter().rev() {
            d = self.exists(&d, v)?;
        }
        Ok(d)
    }

    /// Renames `rel`'s tracks to `vars`; a repeated variable gets a fresh
    /// stand-in tied to it by equality.
    fn relation(
        &mut self,
        rel: Dfa,
        vars: &[String],
        constraints: &mut Vec<Dfa>,
        fresh: &mut Vec<String>,
    ) -> Result<Dfa> {
        let mut names: Vec<String> = Vec::with_capacity(vars.len());
        for v in vars {
            if names.contains(v) {
                let f = self.fresh_var();
                constraints.push(make_eq().with_tracks(vec![f.clone(), v.clone()])?);
                fresh.push(f.clone());
                names.push(f);
            } else {
                names.push(v.clone());
            }
        }
        rel.with_tracks(names)
    }

    fn flatten(
        &mut self,
        t: &Term,
        constraints: &mut Vec<Dfa>,
        fresh: &mut Vec<String>,
    ) -> Result<String> {
        match t {
            Term::Var(v) => Ok(v.clone()),
            Term::Const(c) => {
                let f = self.fresh_var();
                constraints.push(make_const(&BigUint::from(*c)).with_tracks(vec![f.clone()])?);
                fresh.push(f.clone());
                Ok(f)
            }
            Term::Add(a, b) | Term::Sub(a, b) => {
                let va = self.flatten(a, constraints, fresh)?;
                let vb = self.flatten(b, constraints, fresh)?;
                let f = self.fresh_var();
                fresh.push(f.clone());
                // a - b = f is encoded as f + b = a
                let vars = if matches!(t, Term::Add(..)) {
                    [va, vb, f.clone()]
                } else {
                    [f.clone(), vb, va]
                };
                let add = self.relation(make_add(), &vars, constraints, fresh)?;
                constraints.push(add);
                Ok(f)
            }
            Term::Scale(c, a) => match c {
                0 => self.flatten(&Term::Const(0), constraints, fresh),
                1 => self.flatten(a, constraints, fresh),
                _ => {
                    let rest = Term::Scale(c - 1, a.clone());
                    self.flatten(&Term::Add(a.clone(), Box::new(rest)), constraints, fresh)
                }
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{enumerate_accepted, is_language_equal};
    use crate::query::parse;

    fn compile(text: &str, reg: &PredicateRegistry) -> Result<Dfa> {
        Compiler::new(reg).compile(&parse(text).unwrap())
    }

    #[test]
    fn evenness() {
        let reg = PredicateRegistry::new();
        let d = compile("E y (x = y + y)", &reg).unwrap();
        assert_eq!(d.tracks(), ["x"]);
        for x in 0..(1u64 << 10) {
            assert_eq!(d.accepts_u64(&[x]).unwrap(), x % 2 == 0);
        }
    }

    #[test]
    fn subtraction_has_no_negative_witness() {
        let reg = PredicateRegistry::new();
        let d = compile("x = y - 3", &reg).unwrap();
        assert_eq!(d.tracks(), ["x", "y"]);
        for x in 0..40u64 {
            for y in 0..40u64 {
                assert_eq!(d.accepts_u64(&[x, y]).unwrap(), y >= 3 && x == y - 3);
            }
        }
    }

    #[test]
    fn scaling_and_repeated_arguments() {
        let reg = PredicateRegistry::new();
        let d = compile("3*x = y + x", &reg).unwrap();
        for x in 0..40u64 {
            for y in 0..130u64 {
                assert_eq!(d.accepts_u64(&[x, y]).unwrap(), 3 * x == y + x);
            }
        }
        let same = compile("x <= x", &reg).unwrap();
        assert!(enumerate_accepted(&same, 20).len() == 21);
    }

    #[test]
    fn quantifier_duality() {
        let reg = PredicateRegistry::new();
        let a = compile("A y (y < x => y + y != x)", &reg).unwrap();
        let b = compile("~E y ~(y < x => y + y != x)", &reg).unwrap();
        assert!(is_language_equal(&a, &b).unwrap());
        // no y < x with 2y = x, i.e. x = 0 or x odd
        for x in 0..64u64 {
            assert_eq!(a.accepts_u64(&[x]).unwrap(), x == 0 || x % 2 == 1);
        }
    }

    #[test]
    fn errors() {
        let reg = PredicateRegistry::new();
        assert!(matches!(
            compile("$nope(x)", &reg),
            Err(Error::UnknownPredicate(_))
        ));
        assert!(matches!(
            compile("E x x = x", &reg),
            Err(Error::NoFreeVariables)
        ));
        let mut reg = PredicateRegistry::new();
        reg.insert("le", make_less_equal());
        assert!(matches!(
            compile("$le(x)", &reg),
            Err(Error::PredicateArity {
                expected: 2,
                got: 1,
                ..
            })
        ));
        let f = parse("x = y").unwrap();
        assert!(matches!(
            Compiler::new(&reg).compile_with_order(&f, &["x"]),
            Err(Error::UnboundVariable(v)) if v == "y"
        ));
    }

    #[test]
    fn state_cap_propagates() {
        let reg = PredicateRegistry::new();
        let f = parse("E y (x = y + y)").unwrap();
        assert!(matches!(
            Compiler::new(&reg).with_state_cap(1).compile(&f),
            Err(Error::StateCapExceeded { .. })
        ));
    }
}
