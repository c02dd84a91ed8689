use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at {pos}: {msg}")]
pub struct ParseError {
    /// Byte offset into the query text.
    pub pos: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Const(u64),
    Add(Box<Term>, Box<Term>),
    /// Natural subtraction; undefined (no witness) when the result would be negative.
    Sub(Box<Term>, Box<Term>),
    Scale(u64, Box<Term>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    pub kind: FormulaKind,
    pub pos: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormulaKind {
    Exists(Vec<String>, Box<Formula>),
    Forall(Vec<String>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Pred { name: String, args: Vec<Term> },
    Cmp { lhs: Term, op: RelOp, rhs: Term },
}

impl Formula {
    /// Free variables in order of first appearance.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        use FormulaKind::*;
        match &self.kind {
            Exists(vs, body) | Forall(vs, body) => {
                let depth = bound.len();
                bound.extend(vs.iter().cloned());
                body.collect_free(bound, out);
                bound.truncate(depth);
            }
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Not(a) => a.collect_free(bound, out),
            Pred { args, .. } => args.iter().for_each(|t| t.collect_vars(bound, out)),
            Cmp { lhs, rhs, .. } => {
                lhs.collect_vars(bound, out);
                rhs.collect_vars(bound, out);
            }
        }
    }
}

impl Term {
    fn collect_vars(&self, bound: &[String], out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !bound.contains(v) && !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Const(_) => {}
            Term::Add(a, b) | Term::Sub(a, b) => {
                a.collect_vars(bound, out);
                b.collect_vars(bound, out);
            }
            Term::Scale(_, a) => a.collect_vars(bound, out),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => write!(f, "{c}"),
            Term::Add(a, b) => write!(f, "({a}+{b})"),
            Term::Sub(a, b) => write!(f, "({a}-{b})"),
            Term::Scale(c, a) => write!(f, "{c}*{a}"),
        }
    }
}

impl fmt::Display for RelOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelOp::Eq => "=",
            RelOp::Ne => "!=",
            RelOp::Lt => "<",
            RelOp::Le => "<=",
            RelOp::Gt => ">",
            RelOp::Ge => ">=",
        })
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FormulaKind::*;
        match &self.kind {
            Exists(vs, b) => write!(f, "(E {} {b})", vs.join(",")),
            Forall(vs, b) => write!(f, "(A {} {b})", vs.join(",")),
            And(a, b) => write!(f, "({a} & {b})"),
            Or(a, b) => write!(f, "({a} | {b})"),
            Not(a) => write!(f, "~{a}"),
            Implies(a, b) => write!(f, "({a} => {b})"),
            Iff(a, b) => write!(f, "({a} <=> {b})"),
            Pred { name, args } => {
                let args: Vec<String> = args.iter().map(|t| t.to_string()).collect();
                write!(f, "${name}({})", args.join(","))
            }
            Cmp { lhs, op, rhs } => write!(f, "({lhs} {op} {rhs})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    Pred(String),
    Exists,
    Forall,
    LParen,
    RParen,
    Comma,
    And,
    Or,
    Not,
    Implies,
    Iff,
    Rel(RelOp),
    Plus,
    Minus,
    Star,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::Pred(s) => write!(f, "`${s}`"),
            Tok::Exists => f.write_str("`E`"),
            Tok::Forall => f.write_str("`A`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::And => f.write_str("`&`"),
            Tok::Or => f.write_str("`|`"),
            Tok::Not => f.write_str("`~`"),
            Tok::Implies => f.write_str("`=>`"),
            Tok::Iff => f.write_str("`<=>`"),
            Tok::Rel(op) => write!(f, "`{op}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn error(pos: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        pos,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    let word_end = |mut j: usize| {
        while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
            j += 1;
        }
        j
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'?' => {
                let end = word_end(i + 1);
                let mode = &text[i + 1..end];
                if mode != "lsd_2" {
                    return Err(error(i, format!("unsupported number system `?{mode}`")));
                }
                i = end;
                continue;
            }
            b'$' => {
                let end = word_end(i + 1);
                if end == i + 1 {
                    return Err(error(i, "expected a predicate name after `$`"));
                }
                toks.push((Tok::Pred(text[i + 1..end].to_string()), start));
                i = end;
                continue;
            }
            b'0'..=b'9' => {
                let mut end = i;
                while end < bytes.len() && bytes[end].is_ascii_digit() {
                    end += 1;
                }
                let n = text[i..end]
                    .parse()
                    .map_err(|_| error(i, "constant out of range"))?;
                toks.push((Tok::Num(n), start));
                i = end;
                continue;
            }
            b'A' | b'E' => {
                // a quantifier letter may be glued to its first variable: `Aj`
                toks.push((if c == b'A' { Tok::Forall } else { Tok::Exists }, start));
                i += 1;
                continue;
            }
            b'a'..=b'z' | b'_' => {
                let end = word_end(i);
                toks.push((Tok::Ident(text[i..end].to_string()), start));
                i = end;
                continue;
            }
            _ => {}
        }
        let rest = &text[i..];
        let (tok, len) = if rest.starts_with("<=>") {
            (Tok::Iff, 3)
        } else if rest.starts_with("=>") {
            (Tok::Implies, 2)
        } else if rest.starts_with("<=") {
            (Tok::Rel(RelOp::Le), 2)
        } else if rest.starts_with(">=") {
            (Tok::Rel(RelOp::Ge), 2)
        } else if rest.starts_with("!=") {
            (Tok::Rel(RelOp::Ne), 2)
        } else {
            let t = match c {
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b',' => Tok::Comma,
                b'&' => Tok::And,
                b'|' => Tok::Or,
                b'~' => Tok::Not,
                b'=' => Tok::Rel(RelOp::Eq),
                b'<' => Tok::Rel(RelOp::Lt),
                b'>' => Tok::Rel(RelOp::Gt),
                b'+' => Tok::Plus,
                b'-' => Tok::Minus,
                b'*' => Tok::Star,
                _ => {
                    let ch = rest.chars().next().unwrap();
                    return Err(error(i, format!("unexpected character `{ch}`")));
                }
            };
            (t, 1)
        };
        toks.push((tok, start));
        i += len;
    }
    toks.push((Tok::Eof, text.len()));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> PResult<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(error(
                self.pos(),
                format!("expected {want}, found {}", self.peek()),
            ))
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        let lhs = self.implication()?;
        if *self.peek() == Tok::Iff {
            let pos = self.pos();
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula {
                kind: FormulaKind::Iff(Box::new(lhs), Box::new(rhs)),
                pos,
            });
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            let pos = self.pos();
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula {
                kind: FormulaKind::Implies(Box::new(lhs), Box::new(rhs)),
                pos,
            });
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            let pos = self.pos();
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula {
                kind: FormulaKind::Or(Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            let pos = self.pos();
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula {
                kind: FormulaKind::And(Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Formula> {
        let pos = self.pos();
        match self.peek() {
            Tok::Not => {
                self.bump();
                let inner = self.unary()?;
                Ok(Formula {
                    kind: FormulaKind::Not(Box::new(inner)),
                    pos,
                })
            }
            Tok::Exists | Tok::Forall => {
                let exists = self.bump() == Tok::Exists;
                let mut vars = vec![self.ident()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    vars.push(self.ident()?);
                }
                // the body extends as far right as the enclosing group allows
                let body = Box::new(self.formula()?);
                let kind = if exists {
                    FormulaKind::Exists(vars, body)
                } else {
                    FormulaKind::Forall(vars, body)
                };
                Ok(Formula { kind, pos })
            }
            Tok::Pred(_) => {
                let Tok::Pred(name) = self.bump() else {
                    unreachable!()
                };
                self.expect(Tok::LParen)?;
                let mut args = vec![self.term()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.term()?);
                }
                self.expect(Tok::RParen)?;
                Ok(Formula {
                    kind: FormulaKind::Pred { name, args },
                    pos,
                })
            }
            Tok::LParen => {
                // `(x+1) < y` is a comparison, `(x < y)` a group
                let save = self.at;
                match self.comparison() {
                    Ok(f) => Ok(f),
                    Err(cmp_err) => {
                        self.at = save;
                        self.bump();
                        let inner = self.formula().map_err(|e| {
                            if e.pos >= cmp_err.pos {
                                e
                            } else {
                                cmp_err.clone()
                            }
                        })?;
                        self.expect(Tok::RParen)?;
                        Ok(inner)
                    }
                }
            }
            _ => self.comparison(),
        }
    }

    fn comparison(&mut self) -> PResult<Formula> {
        let pos = self.pos();
        let lhs = self.term()?;
        let op = match self.peek() {
            Tok::Rel(op) => *op,
            other => {
                return Err(error(
                    self.pos(),
                    format!("expected a comparison operator, found {other}"),
                ))
            }
        };
        self.bump();
        let rhs = self.term()?;
        Ok(Formula {
            kind: FormulaKind::Cmp { lhs, op, rhs },
            pos,
        })
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(error(
                self.pos(),
                format!("expected a variable, found {other}"),
            )),
        }
    }

    fn term(&mut self) -> PResult<Term> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Term::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Term::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                if *self.peek() == Tok::Star {
                    self.bump();
                    Ok(Term::Scale(n, Box::new(self.primary()?)))
                } else {
                    Ok(Term::Const(n))
                }
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(Term::Var(s))
            }
            Tok::Num(n) => {
                self.bump();
                Ok(Term::Const(n))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            other => Err(error(self.pos(), format!("expected a term, found {other}"))),
        }
    }
}

/// Parses a query in the supported subset of Walnut syntax.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(error(p.pos(), format!("unexpected {}", p.peek())));
    }
    Ok(f)
}
