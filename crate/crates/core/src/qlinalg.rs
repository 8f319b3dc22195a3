//! Exact rational scalars and dense exact linear algebra: determinants,
//! kernels, characteristic polynomials, rational eigenvalues, and
//! generalized eigenspaces. Everything here is over `Rat` (arbitrary
//! precision, always in lowest terms with positive denominator) and pure.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use std::fmt;
use thiserror::Error;

/// Arbitrary-precision rational scalar, canonical lowest-terms form.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Renders `p/q`, omitting the denominator when it is 1.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("singular linear system")]
    Singular,
}

/// Dense matrix over `Rat`, row major.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Rat>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| rat_to_string(self.at(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, entries: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rat) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        QMatrix { rows, cols, entries }
    }

    /// Column vector from a slice.
    pub fn column(v: &[Rat]) -> Self {
        QMatrix { rows: v.len(), cols: 1, entries: v.to_vec() }
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rat {
        &mut self.entries[i * self.cols + j]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn row(&self, i: usize) -> Vec<Rat> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        QMatrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j) + other.at(i, j))
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j) - other.at(i, j))
    }

    pub fn scale(&self, c: &Rat) -> QMatrix {
        QMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j) * c)
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        QMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut s = Rat::zero();
            for k in 0..self.cols {
                if !self.at(i, k).is_zero() && !other.at(k, j).is_zero() {
                    s += self.at(i, k) * other.at(k, j);
                }
            }
            s
        })
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = Rat::zero();
                for k in 0..self.cols {
                    if !self.at(i, k).is_zero() {
                        s += self.at(i, k) * &v[k];
                    }
                }
                s
            })
            .collect()
    }

    pub fn pow(&self, mut e: usize) -> QMatrix {
        assert!(self.is_square());
        let mut acc = QMatrix::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn trace(&self) -> Rat {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.at(i, i).clone()).sum()
    }

    /// Exact determinant by fraction-free Bareiss elimination with full
    /// pivoting, after clearing denominators row by row.
    pub fn det(&self) -> Result<Rat, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rat::one());
        }
        // Clear denominators: row i scaled by d_i, det = bareiss / prod d_i.
        let mut scale = Rat::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut l = BigInt::one();
            for j in 0..n {
                l = l.lcm(self.at(i, j).denom());
            }
            scale *= Rat::from_integer(l.clone());
            a.push(
                (0..n)
                    .map(|j| {
                        let e = self.at(i, j);
                        e.numer() * (&l / e.denom())
                    })
                    .collect(),
            );
        }
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n {
            // full pivot
            let mut pivot = None;
            'search: for i in k..n {
                for j in k..n {
                    if !a[i][j].is_zero() {
                        pivot = Some((i, j));
                        break 'search;
                    }
                }
            }
            let (pi, pj) = match pivot {
                Some(p) => p,
                None => return Ok(Rat::zero()),
            };
            if pi != k {
                a.swap(pi, k);
                sign = -sign;
            }
            if pj != k {
                for row in a.iter_mut() {
                    row.swap(pj, k);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss exact division failed");
                    a[i][j] = q;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        let d = Rat::from_integer(a[n - 1][n - 1].clone() * BigInt::from(sign));
        Ok(d / scale)
    }

    /// Row-reduces in place to reduced echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.at(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    let tmp = self.at(p, j).clone();
                    *self.at_mut(p, j) = self.at(r, j).clone();
                    *self.at_mut(r, j) = tmp;
                }
            }
            let inv = self.at(r, c).recip();
            for j in 0..self.cols {
                let v = self.at(r, j) * &inv;
                *self.at_mut(r, j) = v;
            }
            for i in 0..self.rows {
                if i != r && !self.at(i, c).is_zero() {
                    let f = self.at(i, c).clone();
                    for j in 0..self.cols {
                        let v = self.at(i, j) - &f * self.at(r, j);
                        *self.at_mut(i, j) = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right null space, reduced echelon convention: for each
    /// free column the vector with 1 there and the negated pivot-row entries
    /// elsewhere. Empty when the kernel is trivial.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.at(row, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Any solution of `self * x = b`, or None when inconsistent.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(self.rows, b.len());
        let mut aug = QMatrix::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.at(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = QMatrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.at(i, j).clone()
            } else if j - n == i {
                Rat::one()
            } else {
                Rat::zero()
            }
        });
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(QMatrix::from_fn(n, n, |i, j| aug.at(i, j + n).clone()))
    }

    /// Coefficients of det(tI - M), index = power of t, by exact
    /// Faddeev-LeVerrier.
    pub fn char_poly(&self) -> Result<Vec<Rat>, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut coeffs = vec![Rat::zero(); n + 1];
        coeffs[n] = Rat::one();
        let mut m = QMatrix::identity(n);
        for k in 1..=n {
            m = self.mul(&m);
            let c = -m.trace() / rat(k as i64);
            for i in 0..n {
                *m.at_mut(i, i) += &c;
            }
            coeffs[n - k] = c;
        }
        Ok(coeffs)
    }
}

/// Positive divisors of |n| by trial division.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    assert!(!n.is_zero());
    let mut divs = vec![BigInt::one()];
    let mut rem = n;
    let mut p = BigInt::from(2);
    while &p * &p <= rem {
        if (&rem % &p).is_zero() {
            let mut count = 0;
            while (&rem % &p).is_zero() {
                rem /= &p;
                count += 1;
            }
            let mut new = Vec::new();
            for d in &divs {
                let mut pe = BigInt::one();
                for _ in 0..count {
                    pe *= &p;
                    new.push(d * &pe);
                }
            }
            divs.extend(new);
        }
        p += 1;
    }
    if rem > BigInt::one() {
        let more: Vec<BigInt> = divs.iter().map(|d| d * &rem).collect();
        divs.extend(more);
    }
    divs.sort();
    divs.dedup();
    divs
}

/// Evaluates a univariate polynomial (index = power) at `x`.
pub fn poly_eval(coeffs: &[Rat], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Rational roots with multiplicities of a univariate polynomial over `Rat`,
/// complete by the rational root theorem after clearing denominators.
pub fn rational_roots(coeffs: &[Rat]) -> Vec<(Rat, usize)> {
    let deg = match coeffs.iter().rposition(|c| !c.is_zero()) {
        Some(d) => d,
        None => return Vec::new(),
    };
    // integer coefficients
    let mut l = BigInt::one();
    for c in &coeffs[..=deg] {
        l = l.lcm(c.denom());
    }
    let mut ic: Vec<BigInt> =
        coeffs[..=deg].iter().map(|c| c.numer() * (&l / c.denom())).collect();
    let mut roots = Vec::new();
    // factor out t^k
    let zero_mult = ic.iter().position(|c| !c.is_zero()).unwrap();
    if zero_mult > 0 {
        roots.push((Rat::zero(), zero_mult));
        ic.drain(..zero_mult);
    }
    if ic.len() <= 1 {
        return roots;
    }
    let p_divs = divisors(&ic[0]);
    let q_divs = divisors(ic.last().unwrap());
    let mut candidates = Vec::new();
    for p in &p_divs {
        for q in &q_divs {
            let c = Rat::new(p.clone(), q.clone());
            if !candidates.contains(&c) {
                candidates.push(c.clone());
                candidates.push(-c);
            }
        }
    }
    let as_rat: Vec<Rat> = ic.iter().map(|c| Rat::from_integer(c.clone())).collect();
    let mut current = as_rat;
    for cand in candidates {
        if current.len() <= 1 {
            break;
        }
        let mut mult = 0;
        while current.len() > 1 && poly_eval(&current, &cand).is_zero() {
            // synthetic division by (t - cand)
            let mut next = vec![Rat::zero(); current.len() - 1];
            let mut carry = Rat::zero();
            for i in (1..current.len()).rev() {
                carry = &current[i] + &carry * &cand;
                next[i - 1] = carry.clone();
            }
            current = next;
            mult += 1;
        }
        if mult > 0 {
            roots.push((cand, mult));
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    roots
}

/// Rational eigen-structure of a square matrix.
#[derive(Debug, Clone)]
pub struct EigenData {
    /// det(tI - M), index = power of t.
    pub char_poly: Vec<Rat>,
    pub rational_roots: Vec<(Rat, usize)>,
    pub splits_over_q: bool,
    /// root -> basis of ker (M - root I)^dim, parallel to `rational_roots`.
    pub gen_eigenspaces: Vec<(Rat, Vec<Vec<Rat>>)>,
    pub nilpotent: bool,
}

pub fn rational_eigendata(m: &QMatrix) -> Result<EigenData, LinalgError> {
    let cp = m.char_poly()?;
    let n = m.rows;
    let roots = rational_roots(&cp);
    let total: usize = roots.iter().map(|(_, k)| k).sum();
    let splits = total == n;
    let mut spaces = Vec::new();
    for (root, _) in &roots {
        let mut shifted = m.clone();
        for i in 0..n {
            *shifted.at_mut(i, i) -= root;
        }
        spaces.push((root.clone(), shifted.pow(n).kernel_basis()));
    }
    let nilpotent = roots.len() == 1 && roots[0].0.is_zero() && roots[0].1 == n;
    Ok(EigenData {
        char_poly: cp,
        rational_roots: roots,
        splits_over_q: splits,
        gen_eigenspaces: spaces,
        nilpotent,
    })
}

/// A subspace of Q^n held as a reduced-echelon row basis; canonical, so two
/// subspaces are equal iff their representations are equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    pub ambient: usize,
    /// rows = basis vectors, in RREF with zero rows dropped
    pub basis: Vec<Vec<Rat>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, (0..ambient).map(|i| {
            let mut v = vec![Rat::zero(); ambient];
            v[i] = Rat::one();
            v
        }))
    }

    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = Vec<Rat>>) -> Self {
        let rows: Vec<Vec<Rat>> = vectors.into_iter().collect();
        if rows.is_empty() {
            return Self::zero(ambient);
        }
        let mut m = QMatrix::from_rows(rows);
        let pivots = m.rref();
        let basis = (0..pivots.len()).map(|i| m.row(i)).collect();
        Subspace { ambient, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        let mut v = v.to_vec();
        for b in &self.basis {
            let lead = b.iter().position(|x| !x.is_zero()).unwrap();
            if !v[lead].is_zero() {
                let f = v[lead].clone();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= &f * bi;
                }
            }
        }
        v.iter().all(Zero::is_zero)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        Subspace::span(self.ambient, self.basis.iter().chain(&other.basis).cloned())
    }

    /// Intersection via the kernel of the stacked column matrix.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ambient);
        }
        let a = self.dim();
        let b = other.dim();
        // columns: coordinates x (dim a), y (dim b); rows: ambient equations
        let m = QMatrix::from_fn(self.ambient, a + b, |i, j| {
            if j < a {
                self.basis[j][i].clone()
            } else {
                -other.basis[j - a][i].clone()
            }
        });
        let kern = m.kernel_basis();
        let vectors = kern.into_iter().map(|k| {
            let mut v = vec![Rat::zero(); self.ambient];
            for (ci, coeff) in k[..a].iter().enumerate() {
                for (vi, bi) in v.iter_mut().zip(&self.basis[ci]) {
                    *vi += coeff * bi;
                }
            }
            v
        });
        Subspace::span(self.ambient, vectors)
    }
}
