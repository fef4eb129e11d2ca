//! Exact integer linear algebra on arbitrary-precision matrices.
//!
//! Everything here works over `BigInt`; nothing rounds and nothing overflows.
//! Normal forms are computed with unimodular row/column operations so that
//! transforms can be returned alongside the reduced matrix.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from machine-integer rows. Panics on ragged input;
    /// intended for fixtures and tests.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.as_ref().len(), c, "ragged matrix literal");
            entries.extend(row.as_ref().iter().map(|&v| BigInt::from(v)));
        }
        IntMatrix {
            rows: r,
            cols: c,
            entries,
        }
    }

    /// Fallible variant of [`IntMatrix::from_rows`] for parsed input.
    pub fn try_from_rows(rows: &[Vec<BigInt>], cols: usize) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            entries.extend(row.iter().cloned());
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            entries,
        })
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

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Entry as `i64`; panics when it does not fit.
    pub fn get_i64(&self, i: usize, j: usize) -> i64 {
        to_i64(&self[(i, j)])
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

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
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

    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self[(i, i)].is_zero()
                    && (i + 1..self.cols).all(|j| self[(i, j)] == -&self[(j, i)])
            })
    }

    /// Representatives in `[0, ell)`.
    pub fn reduce_mod(&self, ell: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.mod_floor(ell)).collect(),
        }
    }

    /// Removes row `r` and column `c`.
    pub fn delete_row_col(&self, r: usize, c: usize) -> IntMatrix {
        let mut entries = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != r) {
            for j in (0..self.cols).filter(|&j| j != c) {
                entries.push(self[(i, j)].clone());
            }
        }
        IntMatrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            entries,
        }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vstack column count".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Bilinear form `fᵀ M g`.
    pub fn form(&self, f: &[BigInt], g: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, fi) in f.iter().enumerate() {
            if fi.is_zero() {
                continue;
            }
            for (j, gj) in g.iter().enumerate() {
                if !gj.is_zero() {
                    acc += fi * &self[(i, j)] * gj;
                }
            }
        }
        acc
    }

    pub fn form_i64(&self, f: &[i64], g: &[i64]) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, &fi) in f.iter().enumerate() {
            if fi == 0 {
                continue;
            }
            for (j, &gj) in g.iter().enumerate() {
                if gj != 0 {
                    acc += &self[(i, j)] * (fi * gj);
                }
            }
        }
        acc
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.entries[src * self.cols + j] * factor;
            self.entries[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.entries[i * self.cols + src] * factor;
            self.entries[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            self.entries[idx] = -&self.entries[idx];
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub(crate) fn to_i64(v: &BigInt) -> i64 {
    i64::try_from(v).expect("integer entry exceeds i64 range")
}

/// Row Hermite normal form by unimodular row operations, applied in place.
///
/// Pivots are positive, entries above a pivot lie in `[0, pivot)`. When
/// `transform` is given the same row operations are applied to it. Returns
/// the rank.
fn hermite_in_place(m: &mut IntMatrix, mut transform: Option<&mut IntMatrix>) -> usize {
    let mut pivot_row = 0;
    for c in 0..m.cols {
        if pivot_row == m.rows {
            break;
        }
        loop {
            // smallest nonzero |entry| in column c at or below pivot_row
            let best = (pivot_row..m.rows)
                .filter(|&i| !m[(i, c)].is_zero())
                .min_by(|&a, &b| m[(a, c)].abs().cmp(&m[(b, c)].abs()));
            let Some(best) = best else { break };
            m.swap_rows(pivot_row, best);
            if let Some(t) = transform.as_deref_mut() {
                t.swap_rows(pivot_row, best);
            }
            let mut clean = true;
            for i in pivot_row + 1..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let q = -m[(i, c)].div_floor(&m[(pivot_row, c)]);
                m.add_row(i, pivot_row, &q);
                if let Some(t) = transform.as_deref_mut() {
                    t.add_row(i, pivot_row, &q);
                }
                if !m[(i, c)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if m[(pivot_row, c)].is_zero() {
            continue;
        }
        if m[(pivot_row, c)].is_negative() {
            m.negate_row(pivot_row);
            if let Some(t) = transform.as_deref_mut() {
                t.negate_row(pivot_row);
            }
        }
        for i in 0..pivot_row {
            let q = -m[(i, c)].div_floor(&m[(pivot_row, c)]);
            m.add_row(i, pivot_row, &q);
            if let Some(t) = transform.as_deref_mut() {
                t.add_row(i, pivot_row, &q);
            }
        }
        pivot_row += 1;
    }
    pivot_row
}

/// Row-style Hermite normal form of `a`, with zero rows dropped.
pub fn hermite_normal_form(a: &IntMatrix) -> IntMatrix {
    let mut h = a.clone();
    let rank = hermite_in_place(&mut h, None);
    IntMatrix {
        rows: rank,
        cols: h.cols,
        entries: h.entries[..rank * h.cols].to_vec(),
    }
}

/// Basis of the integer null space `{v : A v = 0}`.
///
/// The basis is returned in Hermite normal form (as rows), so it depends only
/// on the lattice, not on the elimination path.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let n = a.cols;
    let mut work = a.transpose();
    let mut t = IntMatrix::identity(n);
    let rank = hermite_in_place(&mut work, Some(&mut t));
    if rank == n {
        return Vec::new();
    }
    let raw = IntMatrix {
        rows: n - rank,
        cols: n,
        entries: t.entries[rank * n..].to_vec(),
    };
    hermite_normal_form(&raw).to_rows()
}

/// Smith normal form `U·A·V = S` with unimodular `U`, `V`.
///
/// The diagonal of `S` is nonnegative and each entry divides the next.
pub fn smith_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (m, n) = (a.rows, a.cols);
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if s[(i, j)].is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return (u, s, v);
            };
            s.swap_rows(t, bi);
            u.swap_rows(t, bi);
            s.swap_cols(t, bj);
            v.swap_cols(t, bj);

            let mut dirty = false;
            for i in t + 1..m {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = -s[(i, t)].div_floor(&s[(t, t)]);
                s.add_row(i, t, &q);
                u.add_row(i, t, &q);
                dirty |= !s[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = -s[(t, j)].div_floor(&s[(t, t)]);
                s.add_col(j, t, &q);
                v.add_col(j, t, &q);
                dirty |= !s[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // divisibility: pull any offending row into row t
            let offender = (t + 1..m)
                .find(|&i| (t + 1..n).any(|j| !s[(i, j)].is_multiple_of(&s[(t, t)])));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    s.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    (u, s, v)
}

/// Diagonal of the Smith normal form (length `min(rows, cols)`).
pub fn elementary_divisors(a: &IntMatrix) -> Vec<BigInt> {
    let (_, s, _) = smith_normal_form(a);
    (0..a.rows.min(a.cols)).map(|i| s[(i, i)].clone()).collect()
}

/// Index `[ℤᴺ : Ker(Ā)]` where `Ā` is `A` reduced mod `ell`.
///
/// Equivalently `ellᴺ / |{f ∈ (ℤ/ell)ᴺ : Āf = 0}|`. Computed from the
/// elementary divisors of `A mod ell` stacked over `ell·I`.
pub fn lattice_index_mod(a: &IntMatrix, ell: i64) -> Result<BigInt> {
    if ell < 1 {
        return Err(Error::InvalidModulus(ell));
    }
    if !a.is_square() {
        return Err(Error::DimensionMismatch("lattice index needs a square matrix".into()));
    }
    let n = a.rows;
    let l = BigInt::from(ell);
    let mut scaled = IntMatrix::identity(n);
    for i in 0..n {
        scaled[(i, i)] = l.clone();
    }
    let stacked = a.reduce_mod(&l).vstack(&scaled)?;
    let divisors = elementary_divisors(&stacked);
    Ok(divisors.iter().map(|t| &l / t.gcd(&l)).product())
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &IntMatrix) -> Result<BigInt> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
    }
    let n = a.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                Some(i) => {
                    m.swap_rows(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                m[(i, j)] = v;
            }
        }
        prev = m[(k, k)].clone();
    }
    Ok(sign * &m[(n - 1, n - 1)])
}

/// Rank over ℚ by fraction-free elimination.
pub fn rank(a: &IntMatrix) -> usize {
    let mut m = a.clone();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        m.swap_rows(r, p);
        for i in r + 1..m.rows {
            for j in c + 1..m.cols {
                let v = (&m[(i, j)] * &m[(r, c)] - &m[(i, c)] * &m[(r, j)]) / &prev;
                m[(i, j)] = v;
            }
            m[(i, c)] = BigInt::zero();
        }
        prev = m[(r, c)].clone();
        r += 1;
    }
    r
}

/// Exact Pfaffian of a skew-symmetric matrix of even size.
pub fn pfaffian(s: &IntMatrix) -> Result<BigInt> {
    if !s.is_skew_symmetric() {
        return Err(Error::NotSkewSymmetric);
    }
    let n = s.rows;
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from_integer(s[(i, j)].clone()))
                .collect()
        })
        .collect();
    let mut pf = BigRational::one();
    for k in (0..n).step_by(2) {
        let Some(p) = (k + 1..n).find(|&j| !a[k][j].is_zero()) else {
            return Ok(BigInt::zero());
        };
        if p != k + 1 {
            a.swap(k + 1, p);
            for row in a.iter_mut() {
                row.swap(k + 1, p);
            }
            pf = -pf;
        }
        let pivot = a[k][k + 1].clone();
        pf *= &pivot;
        for i in k + 2..n {
            // congruence ops keep the matrix skew and the Pfaffian fixed
            let c1 = &a[k][i] / &pivot;
            if !c1.is_zero() {
                for j in 0..n {
                    let v = &a[k + 1][j] * &c1;
                    a[i][j] -= v;
                }
                for row in a.iter_mut() {
                    let v = &row[k + 1] * &c1;
                    row[i] -= v;
                }
            }
            let c2 = &a[k + 1][i] / &a[k + 1][k];
            if !c2.is_zero() {
                for j in 0..n {
                    let v = &a[k][j] * &c2;
                    a[i][j] -= v;
                }
                for row in a.iter_mut() {
                    let v = &row[k] * &c2;
                    row[i] -= v;
                }
            }
        }
    }
    debug_assert!(pf.is_integer());
    Ok(pf.to_integer())
}

/// Rank of a skew-symmetric matrix; always even.
pub fn skew_rank(s: &IntMatrix) -> Result<usize> {
    if !s.is_skew_symmetric() {
        return Err(Error::NotSkewSymmetric);
    }
    Ok(rank(s))
}
