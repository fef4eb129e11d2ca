//! Independent oracles and generators shared by the integration tests.
//!
//! Nothing here calls library arithmetic: mutation, twisted products,
//! kernels, Pfaffians and determinants are recomputed on plain integers.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

use qcluster::cyclo::CycloNumber;
use qcluster::exchange::ExchangeData;
use qcluster::intlin::IntMatrix;
use qcluster::tlaurent::TwistedLaurentPoly;

pub type Rows = Vec<Vec<i64>>;

pub fn rows(m: &IntMatrix) -> Rows {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect())
        .collect()
}

pub fn mat(r: &Rows) -> IntMatrix {
    if r.is_empty() {
        return IntMatrix::zeros(0, 0);
    }
    IntMatrix::from_rows(r)
}

pub fn matmul(a: &Rows, b: &Rows, inner: usize, cols: usize) -> Rows {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|t| row[t] * b[t][j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose(a: &Rows, rows: usize, cols: usize) -> Rows {
    (0..cols).map(|j| (0..rows).map(|i| a[i][j]).collect()).collect()
}

/// Matrix mutation written directly from
/// `b'_ij = −b_ij` on row/column `k`, else `b_ij + [b_ik]₊[b_kj]₊ − [−b_ik]₊[−b_kj]₊`.
pub fn oracle_mutate(b: &Rows, ex: &[usize], k: usize) -> Rows {
    let kc = ex.iter().position(|&e| e == k).expect("k mutable");
    let pos = |x: i64| x.max(0);
    b.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(jc, &v)| {
                    if i == k || jc == kc {
                        -v
                    } else {
                        let bik = b[i][kc];
                        let bkj = b[k][jc];
                        v + pos(bik) * pos(bkj) - pos(-bik) * pos(-bkj)
                    }
                })
                .collect()
        })
        .collect()
}

/// `E₊` with columns indexed by all `N` indices.
pub fn oracle_e_plus(b: &Rows, ex: &[usize], k: usize) -> Rows {
    let n = b.len();
    let kc = ex.iter().position(|&e| e == k).unwrap();
    let mut e: Rows = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for (i, row) in e.iter_mut().enumerate() {
        row[k] = if i == k { -1 } else { (-b[i][kc]).max(0) };
    }
    e
}

/// `E₊ᵀ Λ E₊`.
pub fn oracle_mutate_lambda(lambda: &Rows, b: &Rows, ex: &[usize], k: usize) -> Rows {
    let n = lambda.len();
    let e = oracle_e_plus(b, ex, k);
    let et = transpose(&e, n, n);
    matmul(&matmul(&et, lambda, n, n), &e, n, n)
}

/// `B̃ᵀΛ`, rows indexed by `ex`.
pub fn bt_lambda(b: &Rows, lambda: &Rows) -> Rows {
    let n = b.len();
    let m = b.first().map_or(0, |r| r.len());
    matmul(&transpose(b, n, m), lambda, n, n)
}

/// Skew-symmetrizable `N × |ex|` data with `ex = 0..n` and `frozen` extra rows.
/// `b_ij = c_ij d_j`, `b_ji = −c_ij d_i` so that `diag(d)·B` is skew.
pub fn exchange_strategy(max_n: usize, max_frozen: usize, bound: i64) -> impl Strategy<Value = (Rows, ExchangeData)> {
    (1..=max_n, 0..=max_frozen)
        .prop_flat_map(move |(n, m)| {
            (
                Just((n, m)),
                proptest::collection::vec(1..=2i64, n),
                proptest::collection::vec(-bound..=bound, n * (n - 1) / 2),
                proptest::collection::vec(-bound..=bound, m * n),
            )
        })
        .prop_map(|((n, m), d, c, frozen)| {
            let mut b = vec![vec![0i64; n]; n + m];
            let mut t = 0;
            for i in 0..n {
                for j in i + 1..n {
                    b[i][j] = c[t] * d[j];
                    b[j][i] = -c[t] * d[i];
                    t += 1;
                }
            }
            for r in 0..m {
                b[n + r].copy_from_slice(&frozen[r * n..(r + 1) * n]);
            }
            let data = ExchangeData::new(
                n + m,
                (0..n).collect(),
                (n..n + m).collect(),
                Vec::new(),
                mat(&b),
            )
            .expect("valid exchange data");
            (b, data)
        })
}

/// Principal-coefficient pair `B̃ = [B; I]`, `Λ = [[0, −D], [D, −DB]]`,
/// strictly compatible with `B̃ᵀΛ = [D 0]`.
#[derive(Debug, Clone)]
pub struct PrincipalPair {
    pub n: usize,
    pub d: Vec<i64>,
    pub b: Rows,
    pub lambda: Rows,
    pub data: ExchangeData,
}

pub fn principal_pair_strategy(max_n: usize, bound: i64) -> impl Strategy<Value = PrincipalPair> {
    (1..=max_n)
        .prop_flat_map(move |n| {
            (
                Just(n),
                proptest::collection::vec(1..=2i64, n),
                proptest::collection::vec(-bound..=bound, n * (n - 1) / 2),
            )
        })
        .prop_map(|(n, d, c)| principal_pair(n, &d, &c))
}

pub fn principal_pair(n: usize, d: &[i64], c: &[i64]) -> PrincipalPair {
    let mut sq = vec![vec![0i64; n]; n];
    let mut t = 0;
    for i in 0..n {
        for j in i + 1..n {
            sq[i][j] = c[t] * d[j];
            sq[j][i] = -c[t] * d[i];
            t += 1;
        }
    }
    let mut b = sq.clone();
    for i in 0..n {
        let mut row = vec![0; n];
        row[i] = 1;
        b.push(row);
    }
    let nn = 2 * n;
    let mut lambda = vec![vec![0i64; nn]; nn];
    for i in 0..n {
        lambda[i][n + i] = -d[i];
        lambda[n + i][i] = d[i];
        for j in 0..n {
            lambda[n + i][n + j] = -d[i] * sq[i][j];
        }
    }
    let data = ExchangeData::new(nn, (0..n).collect(), (n..nn).collect(), Vec::new(), mat(&b))
        .expect("valid principal data");
    PrincipalPair {
        n,
        d: d.to_vec(),
        b,
        lambda,
        data,
    }
}

pub fn skew_strategy(max_n: usize, bound: i64) -> impl Strategy<Value = Rows> {
    (1..=max_n)
        .prop_flat_map(move |n| (Just(n), proptest::collection::vec(-bound..=bound, n * (n - 1) / 2)))
        .prop_map(|(n, c)| skew_from_upper(n, &c))
}

pub fn skew_from_upper(n: usize, c: &[i64]) -> Rows {
    let mut s = vec![vec![0i64; n]; n];
    let mut t = 0;
    for i in 0..n {
        for j in i + 1..n {
            s[i][j] = c[t];
            s[j][i] = -c[t];
            t += 1;
        }
    }
    s
}

/// Terms `(exponent, coefficient)` with nonzero coefficients.
pub fn terms_strategy(n: usize, max_terms: usize) -> impl Strategy<Value = Vec<(Vec<i64>, i64)>> {
    proptest::collection::vec(
        (
            proptest::collection::vec(-2..=2i64, n),
            prop_oneof![-3..=-1i64, 1..=3i64],
        ),
        1..=max_terms,
    )
}

pub fn skew_form(lambda: &Rows, f: &[i64], g: &[i64]) -> i64 {
    let n = f.len();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| f[i] * lambda[i][j] * g[j])
        .sum()
}

/// Elements of `ℤ[C_ℓ]`-coefficient twisted tori, `x^f x^g = ζ^{Λ(f,g)} x^{f+g}`.
/// For prime `ℓ`, `ℤ[C_ℓ] → ℤ[ζ]` has kernel spanned by `1 + ζ + ⋯ + ζ^{ℓ−1}`,
/// so coefficients are normalized by making the last slot zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OraclePoly {
    pub ell: usize,
    pub lambda: Rows,
    pub terms: BTreeMap<Vec<i64>, Vec<i64>>,
}

impl OraclePoly {
    pub fn zero(ell: usize, lambda: &Rows) -> Self {
        OraclePoly {
            ell,
            lambda: lambda.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(ell: usize, lambda: &Rows, f: &[i64], zeta_power: i64, c: i64) -> Self {
        let mut p = Self::zero(ell, lambda);
        p.add_term(f.to_vec(), zeta_power, c);
        p
    }

    fn add_term(&mut self, f: Vec<i64>, zeta_power: i64, c: i64) {
        let ell = self.ell;
        let slot = zeta_power.rem_euclid(ell as i64) as usize;
        let entry = self.terms.entry(f).or_insert_with(|| vec![0; ell]);
        entry[slot] += c;
    }

    fn normalize(mut self) -> Self {
        let ell = self.ell;
        for v in self.terms.values_mut() {
            let last = v[ell - 1];
            for x in v.iter_mut() {
                *x -= last;
            }
        }
        self.terms.retain(|_, v| v.iter().any(|&x| x != 0));
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (f, v) in &other.terms {
            for (s, &c) in v.iter().enumerate() {
                if c != 0 {
                    out.add_term(f.clone(), s as i64, c);
                }
            }
        }
        out.normalize()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.ell, &self.lambda);
        for (f, a) in &self.terms {
            for (g, b) in &other.terms {
                let twist = skew_form(&self.lambda, f, g);
                let h: Vec<i64> = f.iter().zip(g).map(|(x, y)| x + y).collect();
                for (s, &ca) in a.iter().enumerate() {
                    for (t, &cb) in b.iter().enumerate() {
                        if ca != 0 && cb != 0 {
                            out.add_term(h.clone(), s as i64 + t as i64 + twist, ca * cb);
                        }
                    }
                }
            }
        }
        out.normalize()
    }

    pub fn pow(&self, k: u32) -> Self {
        let n = self.lambda.len();
        let mut out = Self::monomial(self.ell, &self.lambda, &vec![0; n], 0, 1);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Multiplies by `ζ^k`.
    pub fn shift(&self, k: i64) -> Self {
        let mut out = Self::zero(self.ell, &self.lambda);
        for (f, v) in &self.terms {
            for (s, &c) in v.iter().enumerate() {
                out.add_term(f.clone(), s as i64 + k, c);
            }
        }
        out.normalize()
    }

    /// Reads a library element whose coefficients are integral in the
    /// power basis of `ζ`.
    pub fn from_library(p: &TwistedLaurentPoly<CycloNumber>, lambda: &Rows) -> Self {
        let ell = p.ring().ctx().ell() as usize;
        let mut out = Self::zero(ell, lambda);
        for (f, c) in p.terms() {
            for (s, q) in c.coeffs().iter().enumerate() {
                assert!(q.is_integer(), "non-integral coefficient {q}");
                let v = q.to_integer().to_i64().unwrap();
                if v != 0 {
                    out.add_term(f.to_vec(), s as i64, v);
                }
            }
        }
        out.normalize()
    }
}

/// Number of `v ∈ (ℤ/ℓ)^N` with `Ωv ≡ 0`.
pub fn brute_kernel_size(omega: &Rows, ell: i64) -> u64 {
    let n = omega.len();
    let total = (ell as u64).pow(n as u32);
    let mut count = 0;
    let mut v = vec![0i64; n];
    for mut idx in 0..total {
        for x in v.iter_mut() {
            *x = (idx % ell as u64) as i64;
            idx /= ell as u64;
        }
        if omega
            .iter()
            .all(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum::<i64>().rem_euclid(ell) == 0)
        {
            count += 1;
        }
    }
    count
}

pub fn pfaffian(a: &Rows, idx: &[usize]) -> BigInt {
    if idx.is_empty() {
        return BigInt::one();
    }
    if idx.len() % 2 == 1 {
        return BigInt::zero();
    }
    let first = idx[0];
    let mut total = BigInt::zero();
    for (pos, &j) in idx.iter().enumerate().skip(1) {
        let rest: Vec<usize> = idx.iter().copied().filter(|&x| x != first && x != j).collect();
        let sign = if pos % 2 == 1 { 1 } else { -1 };
        total += BigInt::from(sign * a[first][j]) * pfaffian(a, &rest);
    }
    total
}

/// Laplace expansion along the first row.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][j] * determinant(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Top coefficient of `θ₁∧⋯∧θ_m∧β^r`, via
/// `r!·Σ_S sign(S, Sᶜ)·det(Θ_S)·Pf(Λ_{Sᶜ})`.
pub fn anticanonical_oracle(lambda: &Rows, theta: &[Vec<i64>]) -> BigRational {
    let n = lambda.len();
    let m = theta.len();
    if (n - m) % 2 == 1 {
        return BigRational::zero();
    }
    let r = (n - m) / 2;
    let mut total = BigInt::zero();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != m {
            continue;
        }
        let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let sc: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 0).collect();
        let inversions = s.iter().map(|&a| sc.iter().filter(|&&b| b < a).count()).sum::<usize>();
        let block: Vec<Vec<BigInt>> = s
            .iter()
            .map(|&i| theta.iter().map(|v| BigInt::from(v[i])).collect())
            .collect();
        let term = determinant(&block) * pfaffian(lambda, &sc);
        if inversions % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    let fact: BigInt = (1..=r as u64).map(BigInt::from).product();
    BigRational::from_integer(total * fact)
}

/// Evaluates a Laurent polynomial over ℚ at a rational point.
pub fn eval_rational(p: &qcluster::tlaurent::ClassicalPoly, point: &[BigRational]) -> BigRational {
    let mut total = BigRational::zero();
    for (f, c) in p.terms() {
        let mut t = c.clone();
        for (x, &e) in point.iter().zip(f) {
            t *= num_traits::pow::Pow::pow(x, e as i32);
        }
        total += t;
    }
    total
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
