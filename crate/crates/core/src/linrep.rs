//! Counting linear representations `(v, M0, M1, w)` with
//! `value(n) = v · M_{n_0} · M_{n_1} ··· M_{n_{L-1}} · w` over the LSD-first
//! digits of n, and the closed forms for S̄(2^k) and S̄(3·2^k).

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::{dot, BigRat, RatMatrix, RatVector};
use crate::automata::{project_weighted, Dfa, StateId, Symbol};
use crate::error::{Error, Result};
use crate::query::{sumfact_dfa, triple_count_dfa, PredicateRegistry};
use crate::seed::ThetaTriple;

/// Scalars a representation can be evaluated over.
pub trait Scalar: Clone + PartialEq + Zero + One + std::fmt::Display {
    fn parse_entry(s: &str) -> Option<Self>;
}

impl Scalar for BigInt {
    fn parse_entry(s: &str) -> Option<Self> {
        s.parse().ok()
    }
}

impl Scalar for BigRational {
    fn parse_entry(s: &str) -> Option<Self> {
        match s.split_once('/') {
            Some((n, d)) => {
                let d: BigInt = d.parse().ok()?;
                if d.is_zero() {
                    return None;
                }
                Some(BigRational::new(n.parse().ok()?, d))
            }
            None => Some(BigRational::from_integer(s.parse().ok()?)),
        }
    }
}

type Matrix<T> = Vec<Vec<T>>;

fn mat_mul<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![T::zero(); m]; n];
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[k][j].is_zero() {
                    out[i][j] = out[i][j].clone() + aik.clone() * b[k][j].clone();
                }
            }
        }
    }
    out
}

fn row_mul<T: Scalar>(v: &[T], m: &Matrix<T>) -> Vec<T> {
    let cols = m.first().map_or(0, Vec::len);
    let mut out = vec![T::zero(); cols];
    for (vi, row) in v.iter().zip(m) {
        if vi.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            if !x.is_zero() {
                *o = o.clone() + vi.clone() * x.clone();
            }
        }
    }
    out
}

fn mat_col<T: Scalar>(m: &Matrix<T>, w: &[T]) -> Vec<T> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(w)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
        })
        .collect()
}

fn vdot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

fn identity<T: Scalar>(n: usize) -> Matrix<T> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { T::one() } else { T::zero() })
                .collect()
        })
        .collect()
}

fn mat_pow<T: Scalar>(m: &Matrix<T>, mut k: u64) -> Matrix<T> {
    let mut result = identity(m.len());
    let mut base = m.clone();
    while k > 0 {
        if k & 1 == 1 {
            result = mat_mul(&result, &base);
        }
        k >>= 1;
        if k > 0 {
            base = mat_mul(&base, &base);
        }
    }
    result
}

/// `(v, M0, M1, w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRepresentation<T = BigInt> {
    pub v: Vec<T>,
    pub m: [Matrix<T>; 2],
    pub w: Vec<T>,
}

impl<T: Scalar> LinearRepresentation<T> {
    pub fn new(v: Vec<T>, m0: Matrix<T>, m1: Matrix<T>, w: Vec<T>) -> Result<Self> {
        let d = v.len();
        let square = |m: &Matrix<T>| m.len() == d && m.iter().all(|r| r.len() == d);
        if d == 0 || w.len() != d || !square(&m0) || !square(&m1) {
            return Err(Error::Dimension("linear representation".into()));
        }
        Ok(LinearRepresentation { v, m: [m0, m1], w })
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub fn m0(&self) -> &Matrix<T> {
        &self.m[0]
    }

    pub fn m1(&self) -> &Matrix<T> {
        &self.m[1]
    }

    /// Product along the given digits, least significant first.
    pub fn eval_digits(&self, digits: impl IntoIterator<Item = usize>) -> T {
        let row = digits
            .into_iter()
            .fold(self.v.clone(), |row, d| row_mul(&row, &self.m[d]));
        vdot(&row, &self.w)
    }

    pub fn eval(&self, n: &BigUint) -> T {
        self.eval_digits((0..n.bits()).map(|i| n.bit(i) as usize))
    }

    pub fn eval_u64(&self, n: u64) -> T {
        self.eval_digits((0..64 - n.leading_zeros()).map(|i| ((n >> i) & 1) as usize))
    }

    /// `v · M0^k · X · w` where `X` is the product of `M_d` over `suffix`,
    /// with `M0^k` computed by repeated squaring.
    pub fn value_pow2_times(&self, k: u64, suffix: &[usize]) -> T {
        let row = row_mul(&self.v, &mat_pow(&self.m[0], k));
        let row = suffix.iter().fold(row, |r, &d| row_mul(&r, &self.m[d]));
        vdot(&row, &self.w)
    }

    /// `v · M0^k · M1 · w`, the value at 2^k.
    pub fn value_pow2(&self, k: u64) -> T {
        self.value_pow2_times(k, &[1])
    }

    /// `v · M0^k · M1 · M1 · w`, the value at 3·2^k.
    pub fn value_3pow2(&self, k: u64) -> T {
        self.value_pow2_times(k, &[1, 1])
    }

    /// `[v · M0^k · X · w for k in 0..=k_max]` by repeated row-vector steps.
    pub fn pow2_sequence(&self, k_max: usize, suffix: &[usize]) -> Vec<T> {
        let tail = suffix
            .iter()
            .rev()
            .fold(self.w.clone(), |col, &d| mat_col(&self.m[d], &col));
        let mut row = self.v.clone();
        let mut out = Vec::with_capacity(k_max + 1);
        for _ in 0..=k_max {
            out.push(vdot(&row, &tail));
            row = row_mul(&row, &self.m[0]);
        }
        out
    }

    /// The `linrep/1` text form.
    pub fn to_text(&self) -> String {
        let line = |xs: &[T]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut out = String::new();
        let _ = writeln!(out, "linrep/1");
        let _ = writeln!(out, "dim: {}", self.dim());
        let _ = writeln!(out, "v: {}", line(&self.v));
        for (b, m) in self.m.iter().enumerate() {
            let _ = writeln!(out, "m{b}:");
            for row in m {
                let _ = writeln!(out, "{}", line(row));
            }
        }
        let _ = writeln!(out, "w: {}", line(&self.w));
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let err = |line: usize, msg: &str| Error::Format {
            format: "linrep/1",
            line,
            msg: msg.to_string(),
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| err(0, &format!("missing {what}")))
        };
        let (no, header) = next("header")?;
        if header != "linrep/1" {
            return Err(err(no, "expected `linrep/1`"));
        }
        let parse_row = |no: usize, s: &str, d: usize| -> Result<Vec<T>> {
            let row: Vec<T> = s
                .split_whitespace()
                .map(|x| T::parse_entry(x).ok_or_else(|| err(no, &format!("bad entry `{x}`"))))
                .collect::<Result<_>>()?;
            if row.len() != d {
                return Err(err(no, &format!("expected {d} entries")));
            }
            Ok(row)
        };
        let (no, dim) = next("dim")?;
        let d: usize = dim
            .strip_prefix("dim:")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| err(no, "expected `dim: <d>`"))?;
        let (no, v) = next("v")?;
        let v = parse_row(
            no,
            v.strip_prefix("v:")
                .ok_or_else(|| err(no, "expected `v:`"))?,
            d,
        )?;
        let mut ms = Vec::new();
        for b in 0..2 {
            let (no, tag) = next("matrix")?;
            if tag != format!("m{b}:") {
                return Err(err(no, &format!("expected `m{b}:`")));
            }
            let mut m = Vec::with_capacity(d);
            for _ in 0..d {
                let (no, row) = next("matrix row")?;
                m.push(parse_row(no, row, d)?);
            }
            ms.push(m);
        }
        let (no, w) = next("w")?;
        let w = parse_row(
            no,
            w.strip_prefix("w:")
                .ok_or_else(|| err(no, "expected `w:`"))?,
            d,
        )?;
        let m1 = ms.pop().unwrap();
        let m0 = ms.pop().unwrap();
        Self::new(v, m0, m1, w)
    }
}

/// Projects `counted` out of a two-track relation keeping multiplicities, so
/// that `value(n)` is the number of `j` with `(n, j)` accepted.
///
/// Exact as long as every witness `j` for `n` is no longer than `n` itself,
/// as with `j <= n`.
pub fn counting_linrep(relation: &Dfa, counted: &str) -> Result<LinearRepresentation> {
    if relation.arity() != 2 {
        return Err(Error::BadRelation(format!(
            "expected two tracks, found {}",
            relation.arity()
        )));
    }
    let nfa = project_weighted(relation, counted)?;
    let d = nfa.state_count();
    let mut m = [
        vec![vec![BigInt::zero(); d]; d],
        vec![vec![BigInt::zero(); d]; d],
    ];
    for (b, mb) in m.iter_mut().enumerate() {
        for (q, row) in mb.iter_mut().enumerate() {
            for &(p, mult) in nfa.edges(q as StateId, Symbol(b as u32)) {
                row[p as usize] += mult;
            }
        }
    }
    let v = nfa
        .initial_weights()
        .iter()
        .map(|&x| BigInt::from(x))
        .collect();
    let w = (0..d)
        .map(|q| BigInt::from(nfa.is_accepting(q as StateId) as u8))
        .collect();
    let [m0, m1] = m;
    LinearRepresentation::new(v, m0, m1, w)
}

/// The representation of n ↦ S̄(n).
pub fn sbar_representation(reg: &PredicateRegistry) -> Result<LinearRepresentation> {
    counting_linrep(&sumfact_dfa(reg)?, "j")
}

/// The representation of n ↦ #{1 <= j <= n : Θ(j) = t}.
pub fn triple_representation(
    reg: &PredicateRegistry,
    t: ThetaTriple,
) -> Result<LinearRepresentation> {
    counting_linrep(&triple_count_dfa(reg, t)?, "j")
}

fn to_rat(rep: &LinearRepresentation) -> LinearRepresentation<BigRat> {
    let conv = |xs: &[BigInt]| xs.iter().map(|x| BigRat::from_integer(x.clone())).collect();
    LinearRepresentation {
        v: conv(&rep.v),
        m: [
            rep.m[0].iter().map(|r| conv(r)).collect(),
            rep.m[1].iter().map(|r| conv(r)).collect(),
        ],
        w: conv(&rep.w),
    }
}

fn transpose_rep(rep: &LinearRepresentation<BigRat>) -> LinearRepresentation<BigRat> {
    let t = |m: &Matrix<BigRat>| -> Matrix<BigRat> {
        let d = m.len();
        (0..d)
            .map(|i| (0..d).map(|j| m[j][i].clone()).collect())
            .collect()
    };
    LinearRepresentation {
        v: rep.w.clone(),
        m: [t(&rep.m[0]), t(&rep.m[1])],
        w: rep.v.clone(),
    }
}

/// Reduced row echelon basis with unit pivots, so the coordinates of a
/// vector in the span are its entries at the pivot columns.
struct Echelon {
    rows: Vec<RatVector>,
    pivots: Vec<usize>,
}

impl Echelon {
    /// Adds `x` if it is independent; returns whether it was.
    fn insert(&mut self, x: &[BigRat]) -> bool {
        let mut x = x.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !x[p].is_zero() {
                let f = x[p].clone();
                for (xi, ri) in x.iter_mut().zip(row) {
                    if !ri.is_zero() {
                        *xi -= &f * ri;
                    }
                }
            }
        }
        let Some(p) = x.iter().position(|v| !v.is_zero()) else {
            return false;
        };
        let lead = x[p].clone();
        x.iter_mut().for_each(|v| *v /= &lead);
        for row in &mut self.rows {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (ri, xi) in row.iter_mut().zip(&x) {
                    if !xi.is_zero() {
                        *ri -= &f * xi;
                    }
                }
            }
        }
        self.rows.push(x);
        self.pivots.push(p);
        true
    }

    fn coords(&self, x: &[BigRat]) -> RatVector {
        self.pivots.iter().map(|&p| x[p].clone()).collect()
    }
}

/// Restricts to the span of the reachable row vectors `v · M_word`.
fn forward_reduce(rep: &LinearRepresentation<BigRat>) -> LinearRepresentation<BigRat> {
    let mut basis = Echelon {
        rows: Vec::new(),
        pivots: Vec::new(),
    };
    let mut queue = vec![rep.v.clone()];
    basis.insert(&rep.v);
    while let Some(x) = queue.pop() {
        for m in &rep.m {
            let y = row_mul(&x, m);
            if basis.insert(&y) {
                queue.push(y);
            }
        }
    }
    let dim = basis.rows.len();
    let project = |m: &Matrix<BigRat>| -> Matrix<BigRat> {
        basis
            .rows
            .iter()
            .map(|e| basis.coords(&row_mul(e, m)))
            .collect()
    };
    let m = [project(&rep.m[0]), project(&rep.m[1])];
    let v = basis.coords(&rep.v);
    let w = basis.rows.iter().map(|e| dot(e, &rep.w)).collect();
    debug_assert_eq!(m[0].len(), dim);
    LinearRepresentation { v, m, w }
}

/// Value-equivalent representation of minimal dimension: reachable span,
/// then the same on the transpose (observability).
pub fn reduce<T>(rep: &LinearRepresentation<T>) -> LinearRepresentation<BigRat>
where
    T: Scalar + Into<BigRat>,
{
    let conv = |xs: &[T]| -> RatVector { xs.iter().cloned().map(Into::into).collect() };
    let rat = LinearRepresentation {
        v: conv(&rep.v),
        m: [
            rep.m[0].iter().map(|r| conv(r)).collect(),
            rep.m[1].iter().map(|r| conv(r)).collect(),
        ],
        w: conv(&rep.w),
    };
    let fwd = forward_reduce(&rat);
    transpose_rep(&forward_reduce(&transpose_rep(&fwd)))
}

impl LinearRepresentation<BigInt> {
    pub fn to_rational(&self) -> LinearRepresentation<BigRat> {
        to_rat(self)
    }
}

impl LinearRepresentation<BigRat> {
    pub fn m0_matrix(&self) -> RatMatrix {
        RatMatrix::from_rows(self.m[0].clone()).expect("square")
    }
}

/// `2^e` for any integer exponent.
fn pow2(e: i64) -> BigRat {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        BigRat::from_integer(p)
    } else {
        BigRat::new(BigInt::one(), p)
    }
}

/// One row of a closed-form table: `coeff · 2^((k - offset)/2)` on the
/// listed residues of k mod 24.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseTerm {
    pub residues: Vec<u32>,
    pub coeff: i64,
    pub offset: i64,
}

/// `main_coeff · 2^(k-3) + constant + correction(k mod 24)` for `k >= lower_bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseFormula {
    pub name: &'static str,
    pub lower_bound: u64,
    pub main_coeff: i64,
    pub constant: i64,
    pub cases: Vec<CaseTerm>,
    /// Digits following the `k` zeros: `[1]` for 2^k, `[1, 1]` for 3·2^k.
    pub suffix: Vec<usize>,
}

fn term(residues: &[u32], coeff: i64, offset: i64) -> CaseTerm {
    CaseTerm {
        residues: residues.to_vec(),
        coeff,
        offset,
    }
}

impl CaseFormula {
    /// S̄(2^k) for k >= 2.
    pub fn pow2() -> Self {
        CaseFormula {
            name: "S(2^k)",
            lower_bound: 2,
            main_coeff: 1,
            constant: 0,
            cases: vec![
                term(&[0, 2, 22], -1, 4),
                term(&[1, 3], -1, 3),
                term(&[11], -1, 5),
                term(&[14, 16, 18], 1, 4),
                term(&[17], 1, 3),
                term(&[23], -3, 5),
            ],
            suffix: vec![1],
        }
    }

    /// S̄(3·2^k) for k >= 5.
    pub fn three_pow2() -> Self {
        CaseFormula {
            name: "S(3*2^k)",
            lower_bound: 5,
            main_coeff: 3,
            constant: 1,
            cases: vec![
                term(&[7, 9, 13, 18, 19], 0, 0),
                term(&[1, 3, 5], -1, 3),
                term(&[0, 4, 10], -1, 2),
                term(&[2, 6, 8, 12], -1, 4),
                term(&[11, 23], -1, 5),
                term(&[14], 1, 4),
                term(&[15], 1, 1),
                term(&[16], 3, 4),
                term(&[17], 1, 3),
                term(&[20, 22], -3, 4),
                term(&[21], -1, 1),
            ],
            suffix: vec![1, 1],
        }
    }

    pub fn case_for(&self, k: u64) -> Option<&CaseTerm> {
        let r = (k % 24) as u32;
        self.cases.iter().find(|c| c.residues.contains(&r))
    }

    /// Human-readable branch label, e.g. `k≡{1,3} mod 24`.
    pub fn label(&self, k: u64) -> String {
        match self.case_for(k) {
            Some(c) => format!(
                "k≡{{{}}}",
                c.residues
                    .iter()
                    .map(|r| r.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            None => "otherwise".to_string(),
        }
    }

    /// Exact value; intermediate powers may be fractional.
    pub fn eval(&self, k: u64) -> BigRat {
        let k = k as i64;
        let mut v = pow2(k - 3) * BigRat::from_integer(BigInt::from(self.main_coeff))
            + BigRat::from_integer(BigInt::from(self.constant));
        if let Some(c) = self.case_for(k as u64) {
            if c.coeff != 0 {
                let e = k - c.offset;
                assert!(e % 2 == 0, "{}: odd exponent at k = {k}", self.name);
                v += pow2(e / 2) * BigRat::from_integer(BigInt::from(c.coeff));
            }
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseRow {
    pub k: u64,
    pub expected: BigRat,
    pub got: BigInt,
    pub label: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClosedFormReport {
    pub rows: Vec<CaseRow>,
}

impl ClosedFormReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &CaseRow> {
        self.rows
            .iter()
            .filter(|r| r.expected != BigRat::from_integer(r.got.clone()))
    }

    pub fn holds(&self) -> bool {
        !self.rows.is_empty() && self.mismatches().next().is_none()
    }

    /// TSV: k, expected, got, case label.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("k\texpected\tgot\tcase\n");
        for r in &self.rows {
            let _ = writeln!(out, "{}\t{}\t{}\t{}", r.k, r.expected, r.got, r.label);
        }
        out
    }
}

/// Compares the closed form with matrix-power values for every
/// `lower_bound <= k <= k_max`.
pub fn check_closed_form(
    rep: &LinearRepresentation,
    form: &CaseFormula,
    k_max: u64,
) -> ClosedFormReport {
    let values = rep.pow2_sequence(k_max as usize, &form.suffix);
    ClosedFormReport {
        rows: (form.lower_bound..=k_max)
            .map(|k| CaseRow {
                k,
                expected: form.eval(k),
                got: values[k as usize].clone(),
                label: form.label(k),
            })
            .collect(),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScalingReport {
    pub checked: usize,
    /// `(k, s)` pairs where the identity fails.
    pub failures: Vec<(u64, u64)>,
}

impl ScalingReport {
    pub fn holds(&self) -> bool {
        self.checked > 0 && self.failures.is_empty()
    }
}

/// `8·u(24k+s) − 2^(24k+s) = 2^(12k)·(8·u(s) − 2^s)` where `u(e) = S̄(2^e)`,
/// for `k <= k_max`, `s < 24`, `24k + s >= 2`.
pub fn scaling_identity_check(rep: &LinearRepresentation, k_max: u64) -> ScalingReport {
    let top = 24 * k_max as usize + 23;
    let u = rep.pow2_sequence(top, &[1]);
    let dev = |e: u64| BigInt::from(8) * &u[e as usize] - (BigInt::one() << e);
    let mut report = ScalingReport::default();
    for k in 0..=k_max {
        for s in 0..24u64 {
            let e = 24 * k + s;
            if e < 2 {
                continue;
            }
            report.checked += 1;
            if dev(e) != (BigInt::one() << (12 * k)) * dev(s) {
                report.failures.push((k, s));
            }
        }
    }
    report
}

/// The signed deviation `8·S̄(n) − n`.
pub fn deviation(value: &BigInt, n: &BigUint) -> BigInt {
    BigInt::from(8) * value - BigInt::from(n.clone())
}

/// True when every entry of both matrices and vectors is a non-negative integer.
pub fn is_nonnegative(rep: &LinearRepresentation) -> bool {
    rep.v
        .iter()
        .chain(rep.w.iter())
        .chain(rep.m.iter().flatten().flatten())
        .all(|x| !x.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::make_less_equal;

    #[test]
    fn counting_less_equal() {
        // #{j : j <= n} = n + 1
        let le = make_less_equal()
            .with_tracks(vec!["j".into(), "n".into()])
            .unwrap();
        let rep = counting_linrep(&le, "j").unwrap();
        for n in 0..300u64 {
            assert_eq!(rep.eval_u64(n), BigInt::from(n + 1));
        }
        assert!(is_nonnegative(&rep));
    }

    #[test]
    fn squaring_matches_iteration() {
        let le = make_less_equal()
            .with_tracks(vec!["j".into(), "n".into()])
            .unwrap();
        let rep = counting_linrep(&le, "j").unwrap();
        let seq = rep.pow2_sequence(70, &[1]);
        for k in 0..=70u64 {
            assert_eq!(rep.value_pow2(k), seq[k as usize]);
            assert_eq!(rep.value_pow2(k), (BigInt::one() << k) + 1);
            assert_eq!(
                rep.value_3pow2(k),
                BigInt::from(3) * (BigInt::one() << k) + 1
            );
        }
    }

    #[test]
    fn reduction_preserves_values() {
        let le = make_less_equal()
            .with_tracks(vec!["j".into(), "n".into()])
            .unwrap();
        let rep = counting_linrep(&le, "j").unwrap();
        let red = reduce(&rep);
        assert!(red.dim() <= rep.dim());
        assert_eq!(reduce(&red).dim(), red.dim());
        for n in 0..200u64 {
            assert_eq!(red.eval_u64(n), BigRat::from_integer(rep.eval_u64(n)));
        }
    }

    #[test]
    fn text_round_trip() {
        let le = make_less_equal()
            .with_tracks(vec!["j".into(), "n".into()])
            .unwrap();
        let rep = counting_linrep(&le, "j").unwrap();
        let text = rep.to_text();
        assert!(text.starts_with("linrep/1\ndim: "));
        assert_eq!(
            LinearRepresentation::<BigInt>::from_text(&text).unwrap(),
            rep
        );
        let red = reduce(&rep);
        assert_eq!(
            LinearRepresentation::<BigRat>::from_text(&red.to_text()).unwrap(),
            red
        );
        assert!(LinearRepresentation::<BigInt>::from_text("linrep/1\ndim: 1\nv: x\n").is_err());
    }

    #[test]
    fn closed_form_small_k() {
        let f = CaseFormula::pow2();
        // k = 2 falls in the {0, 2, 22} branch: 2^-1 - 2^-1
        assert_eq!(f.eval(2), BigRat::zero());
        assert_eq!(f.label(2), "k≡{0,2,22}");
        assert_eq!(f.eval(27), BigRat::from_integer(BigInt::from(16773120)));
        let g = CaseFormula::three_pow2();
        let expected = 3 * (1i64 << 13) + 1 + 3 * (1 << 6);
        assert_eq!(g.eval(16), BigRat::from_integer(BigInt::from(expected)));
        // every residue has at most one branch
        for form in [f, g] {
            for r in 0..24 {
                assert!(
                    form.cases
                        .iter()
                        .filter(|c| c.residues.contains(&r))
                        .count()
                        <= 1
                );
            }
        }
    }

    #[test]
    fn three_pow2_table_covers_every_residue() {
        let g = CaseFormula::three_pow2();
        assert!((0..24).all(|r| g.case_for(r).is_some()));
    }
}
