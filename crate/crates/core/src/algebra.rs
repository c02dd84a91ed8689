//! Exact linear algebra over the rationals and integer polynomials.
//!
//! No floating point: every quantity is a `BigInt` or a `BigRational`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type BigRat = BigRational;
pub type RatVector = Vec<BigRat>;

pub fn rat(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![BigRat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRat>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged or empty matrix".into()));
        }
        Ok(RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rat(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigRat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[BigRat] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigRat]) -> Result<RatVector> {
        if v.len() != self.cols {
            return Err(Error::Dimension("matrix-vector length".into()));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[BigRat]) -> Result<RatVector> {
        if v.len() != self.rows {
            return Err(Error::Dimension("vector-matrix length".into()));
        }
        let mut out = vec![BigRat::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let m = &self[(i, j)];
                if !m.is_zero() {
                    *o += vi * m;
                }
            }
        }
        Ok(out)
    }

    fn add_scaled(&mut self, other: &RatMatrix, c: &BigRat) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += b * c;
            }
        }
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = BigRat;
    fn index(&self, (i, j): (usize, usize)) -> &BigRat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRat {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[BigRat], b: &[BigRat]) -> BigRat {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

/// Fraction-free Gaussian elimination in place. Every intermediate entry is
/// a minor of the input, so integer input stays integral. Returns the rank
/// and the pivot columns; after elimination the last nonzero pivot of a
/// square nonsingular matrix is its determinant up to the sign of the row
/// swaps, which is returned as well.
pub fn bareiss(m: &mut [Vec<BigInt>]) -> (usize, Vec<usize>, bool) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut pivots = Vec::new();
    let mut negated = false;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        if p != rank {
            m.swap(p, rank);
            negated = !negated;
        }
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                // exact by Sylvester's identity
                m[r][c] = v / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        pivots.push(col);
        rank += 1;
    }
    (rank, pivots, negated)
}

/// Determinant of a square integer matrix via [`bareiss`].
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut work = m.to_vec();
    let (rank, _, negated) = bareiss(&mut work);
    if rank < n {
        return BigInt::zero();
    }
    let det = work[n - 1][n - 1].clone();
    if negated {
        -det
    } else {
        det
    }
}

/// Solves `a · x = b` exactly. Rows are scaled to integers, eliminated
/// fraction-free, then back-substituted over the rationals.
pub fn solve_exact(a: &RatMatrix, b: &[BigRat]) -> Result<RatVector> {
    if !a.is_square() || b.len() != a.rows() {
        return Err(Error::Dimension("solve needs a square system".into()));
    }
    let n = a.rows();
    let mut aug: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let row: Vec<&BigRat> = a.row(i).iter().chain(std::iter::once(&b[i])).collect();
            let lcm = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            row.iter()
                .map(|r| (*r * BigRat::from_integer(lcm.clone())).to_integer())
                .collect()
        })
        .collect();
    let (rank, pivots, _) = bareiss(&mut aug);
    if rank < n || pivots.iter().any(|&p| p >= n) {
        return Err(Error::Singular);
    }
    let mut x = vec![BigRat::zero(); n];
    for i in (0..n).rev() {
        let mut acc = BigRat::from_integer(aug[i][n].clone());
        for j in i + 1..n {
            acc -= BigRat::from_integer(aug[i][j].clone()) * &x[j];
        }
        x[i] = acc / BigRat::from_integer(aug[i][i].clone());
    }
    Ok(x)
}

/// Integer polynomial, constant term first, no trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `c · x^k`
    pub fn monomial(c: i64, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::from(c);
        Self::new(coeffs)
    }

    /// Clears denominators and removes the content, leading coefficient positive.
    pub fn from_rationals(coeffs: &[BigRat]) -> Self {
        let lcm = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = coeffs
            .iter()
            .map(|c| (c * BigRat::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut p = Self::new(ints);
        let content = p.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if !content.is_zero() {
            let sign = if p.leading().is_some_and(Signed::is_negative) {
                -BigInt::one()
            } else {
                BigInt::one()
            };
            for c in &mut p.coeffs {
                *c = &*c / &content * &sign;
            }
        }
        p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Self, i: usize| p.coeffs.get(i).cloned().unwrap_or_default();
        Self::new((0..n).map(|i| get(self, i) + get(other, i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Self, i: usize| p.coeffs.get(i).cloned().unwrap_or_default();
        Self::new((0..n).map(|i| get(self, i) - get(other, i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Quotient and remainder over the rationals.
    pub fn div_rem(&self, divisor: &Self) -> Result<(RatVector, RatVector)> {
        let d = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let lead = BigRat::from_integer(divisor.coeffs[d].clone());
        let mut rem: RatVector = self
            .coeffs
            .iter()
            .map(|c| BigRat::from_integer(c.clone()))
            .collect();
        if rem.len() <= d {
            return Ok((Vec::new(), rem));
        }
        let mut quot = vec![BigRat::zero(); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + d] / &lead;
            if q.is_zero() {
                continue;
            }
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &q * BigRat::from_integer(c.clone());
            }
            quot[k] = q;
        }
        rem.truncate(d);
        while rem.last().is_some_and(Zero::is_zero) {
            rem.pop();
        }
        Ok((quot, rem))
    }

    /// True iff `self` divides `other` over the rationals.
    pub fn divides(&self, other: &Self) -> Result<bool> {
        Ok(other.div_rem(self)?.1.is_empty())
    }

    /// Multiplicity of 0 as a root.
    pub fn x_valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// `p(M)` by Horner's rule.
    pub fn eval_matrix(&self, m: &RatMatrix) -> Result<RatMatrix> {
        if !m.is_square() {
            return Err(Error::Dimension("polynomial of a non-square matrix".into()));
        }
        let n = m.rows();
        let mut acc = RatMatrix::zeros(n, n);
        let id = RatMatrix::identity(n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m)?;
            acc.add_scaled(&id, &BigRat::from_integer(c.clone()));
        }
        Ok(acc)
    }

    /// Coefficients in decimal, constant term first.
    pub fn to_coefficient_line(&self) -> String {
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("x")?,
                (1, false) => write!(f, "{mag}*x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{mag}*x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Least-degree annihilating polynomial of a square matrix, found as the
/// first linear dependency among the vectorized powers I, M, M², ...
pub fn minimal_polynomial(m: &RatMatrix) -> Result<IntPolynomial> {
    if !m.is_square() {
        return Err(Error::Dimension(
            "minimal polynomial of a non-square matrix".into(),
        ));
    }
    let n = m.rows();
    // each basis row: (reduced vector, pivot index, coefficients over powers)
    let mut basis: Vec<(RatVector, usize, RatVector)> = Vec::new();
    let mut power = RatMatrix::identity(n);
    for k in 0..=n {
        let mut v: RatVector = power.entries().to_vec();
        let mut combo = vec![BigRat::zero(); k + 1];
        combo[k] = BigRat::one();
        for (r, piv, c) in &basis {
            if v[*piv].is_zero() {
                continue;
            }
            let f = &v[*piv] / &r[*piv];
            for (vi, ri) in v.iter_mut().zip(r) {
                if !ri.is_zero() {
                    *vi -= &f * ri;
                }
            }
            for (ci, bi) in combo.iter_mut().zip(c) {
                *ci -= &f * bi;
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            None => return Ok(IntPolynomial::from_rationals(&combo)),
            Some(piv) => basis.push((v, piv, combo)),
        }
        power = power.mul(m)?;
    }
    unreachable!("Cayley-Hamilton bounds the degree by the dimension")
}

/// Outcome of checking `Σ p_i u_{k+i} = 0` along a sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RecurrenceReport {
    pub checked: usize,
    /// Starting indices `k` where the relation fails.
    pub failures: Vec<usize>,
}

impl RecurrenceReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }
}

/// Checks the recurrence with characteristic polynomial `p` on `u[0..=k_max]`.
pub fn recurrence_check(u: &[BigInt], p: &IntPolynomial, k_max: usize) -> Result<RecurrenceReport> {
    let d = p.degree().ok_or(Error::ZeroPolynomial)?;
    if u.len() <= k_max {
        return Err(Error::Dimension(format!(
            "sequence has {} terms, need {}",
            u.len(),
            k_max + 1
        )));
    }
    let mut report = RecurrenceReport::default();
    for k in 0..=k_max.saturating_sub(d) {
        if k + d > k_max {
            break;
        }
        report.checked += 1;
        let s: BigInt = p
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c * &u[k + i])
            .sum();
        if !s.is_zero() {
            report.failures.push(k);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratv(xs: &[i64]) -> RatVector {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn identity_system() {
        let a = RatMatrix::identity(3);
        let b = ratv(&[4, -2, 9]);
        assert_eq!(solve_exact(&a, &b).unwrap(), b);
    }

    #[test]
    fn singular_system() {
        let a = RatMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]).unwrap();
        assert!(matches!(
            solve_exact(&a, &ratv(&[1, 2])),
            Err(Error::Singular)
        ));
    }

    #[test]
    fn rational_system() {
        let half = BigRat::new(BigInt::from(1), BigInt::from(2));
        let a = RatMatrix::from_rows(vec![vec![half.clone(), rat(1)], vec![rat(3), half.clone()]])
            .unwrap();
        let x = vec![rat(2), BigRat::new(BigInt::from(-1), BigInt::from(3))];
        let b = a.mul_vec(&x).unwrap();
        assert_eq!(solve_exact(&a, &b).unwrap(), x);
    }

    #[test]
    fn bareiss_determinant() {
        let m: Vec<Vec<BigInt>> = [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        assert_eq!(determinant(&m), BigInt::from(4));
        let swapped = vec![m[1].clone(), m[0].clone(), m[2].clone()];
        assert_eq!(determinant(&swapped), BigInt::from(-4));
    }

    #[test]
    fn minimal_polynomials() {
        let id = RatMatrix::identity(3);
        assert_eq!(
            minimal_polynomial(&id).unwrap(),
            IntPolynomial::from_i64s(&[-1, 1])
        );
        let nil = RatMatrix::from_i64_rows(&[&[0, 1], &[0, 0]]).unwrap();
        assert_eq!(
            minimal_polynomial(&nil).unwrap(),
            IntPolynomial::from_i64s(&[0, 0, 1])
        );
        // companion matrix of x^2 - x - 1
        let fib = RatMatrix::from_i64_rows(&[&[0, 1], &[1, 1]]).unwrap();
        let p = minimal_polynomial(&fib).unwrap();
        assert_eq!(p, IntPolynomial::from_i64s(&[-1, -1, 1]));
        assert!(p.eval_matrix(&fib).unwrap().is_zero());
        for c in -3..=3 {
            let linear = IntPolynomial::from_i64s(&[c, 1]);
            assert!(!linear.eval_matrix(&fib).unwrap().is_zero());
        }
    }

    #[test]
    fn divisibility() {
        let x_minus_1 = IntPolynomial::from_i64s(&[-1, 1]);
        let x2_minus_1 = IntPolynomial::from_i64s(&[-1, 0, 1]);
        assert!(x_minus_1.divides(&x2_minus_1).unwrap());
        let x2_plus_1 = IntPolynomial::from_i64s(&[1, 0, 1]);
        let x4_minus_1 = IntPolynomial::from_i64s(&[-1, 0, 0, 0, 1]);
        assert!(x2_plus_1.divides(&x4_minus_1).unwrap());
        assert!(!x2_plus_1.divides(&x2_minus_1).unwrap());
        assert!(IntPolynomial::new(vec![]).divides(&x_minus_1).is_err());
        assert_eq!(
            x_minus_1.mul(&x_minus_1).sub(&x2_minus_1),
            IntPolynomial::from_i64s(&[2, -2])
        );
    }

    #[test]
    fn display() {
        let p = IntPolynomial::from_i64s(&[-256, 0, 3, -1, 1]);
        assert_eq!(p.to_string(), "x^4 - x^3 + 3*x^2 - 256");
        assert_eq!(p.to_coefficient_line(), "-256 0 3 -1 1");
        assert_eq!(p.x_valuation(), 0);
        assert_eq!(IntPolynomial::monomial(1, 3).x_valuation(), 3);
    }

    #[test]
    fn recurrences() {
        let ones: Vec<BigInt> = vec![BigInt::one(); 10];
        assert!(
            recurrence_check(&ones, &IntPolynomial::from_i64s(&[-1, 1]), 9)
                .unwrap()
                .holds()
        );
        let pow2: Vec<BigInt> = (0..40).map(|k| BigInt::one() << k).collect();
        assert!(
            recurrence_check(&pow2, &IntPolynomial::from_i64s(&[-2, 1]), 39)
                .unwrap()
                .holds()
        );
        let r = recurrence_check(&pow2, &IntPolynomial::from_i64s(&[-1, 1]), 39).unwrap();
        assert_eq!(r.failures.len(), r.checked);
    }
}
