//! Log-canonical (GSV) brackets, torus weights and anticanonical
//! coefficients on the classical side.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::compat::CompatiblePair;
use crate::error::{Error, Result};
use crate::exchange::ExchangeData;
use crate::intlin::{kernel_basis, skew_rank, IntMatrix};
use crate::seeds::Seed;
use crate::scalar::Scalar;
use crate::tlaurent::{ClassicalPoly, TwistedLaurentPoly};

/// The skew form `Λ` of a seed together with its rank `2r`.
#[derive(Debug, Clone, PartialEq)]
pub struct GsvContext {
    lambda: IntMatrix,
    rank: usize,
}

impl GsvContext {
    pub fn from_pair(pair: &CompatiblePair) -> Self {
        Self::from_skew(pair.lambda()).expect("compatible pairs carry a skew form")
    }

    /// Bracket for an arbitrary skew `Λ` (no compatibility required).
    pub fn from_skew(lambda: &IntMatrix) -> Result<Self> {
        let rank = skew_rank(lambda)?;
        Ok(GsvContext {
            lambda: lambda.clone(),
            rank,
        })
    }

    pub fn lambda(&self) -> &IntMatrix {
        &self.lambda
    }

    /// `2r`.
    pub fn rank(&self) -> usize {
        self.rank
    }
}

/// `{x^f, x^g} = Λ(f, g) x^{f+g}`, extended bilinearly.
pub fn gsv_bracket(a: &ClassicalPoly, b: &ClassicalPoly, ctx: &GsvContext) -> Result<ClassicalPoly> {
    if a.ring() != b.ring() && **a.ring() != **b.ring() {
        return Err(Error::TwistMismatch);
    }
    if !a.ring().twist().is_zero() {
        return Err(Error::TwistMismatch);
    }
    if ctx.lambda.rows() != a.ring().n() {
        return Err(Error::DimensionMismatch("Lambda size differs from ring rank".into()));
    }
    let mut terms = Vec::new();
    for (f, c) in a.terms() {
        for (g, d) in b.terms() {
            let w = ctx.lambda.form_i64(f, g);
            if w.is_zero() {
                continue;
            }
            let h: Vec<i64> = f.iter().zip(g).map(|(x, y)| x + y).collect();
            terms.push((h, c * d * BigRational::from_integer(w)));
        }
    }
    ClassicalPoly::from_terms(a.ring(), terms)
}

/// Integer vector `ν ∈ Ker(B̃ᵀ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    pub nu: Vec<BigInt>,
}

impl WeightVector {
    pub fn new(nu: Vec<BigInt>) -> Self {
        WeightVector { nu }
    }

    pub fn from_i64(nu: &[i64]) -> Self {
        WeightVector {
            nu: nu.iter().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn is_kernel_of(&self, b: &ExchangeData) -> bool {
        self.nu.len() == b.n()
            && b
                .b()
                .transpose()
                .apply(&self.nu)
                .is_ok_and(|v| v.iter().all(Zero::is_zero))
    }

    /// `ν · f`.
    pub fn degree(&self, f: &[i64]) -> BigInt {
        self.nu.iter().zip(f).map(|(a, &b)| a * b).sum()
    }
}

/// Canonical basis of `Ker(B̃ᵀ)`; its length is the nullity `n(B̃)`.
pub fn torus_weights(b: &ExchangeData) -> Vec<WeightVector> {
    kernel_basis(&b.b().transpose())
        .into_iter()
        .map(WeightVector::new)
        .collect()
}

/// `ν'_k = ν·[bᵏ]₊ − ν_k`, other coordinates unchanged. The result is
/// checked against `Ker(μ_k(B̃)ᵀ)`.
pub fn mutate_weight(nu: &WeightVector, b: &ExchangeData, k: usize) -> Result<WeightVector> {
    if !nu.is_kernel_of(b) {
        return Err(Error::InvalidExchangeData(
            "weight is not in the kernel of B^T".into(),
        ));
    }
    let kc = b.col_of(k)?;
    let mut out = nu.nu.clone();
    let positive: BigInt = (0..b.n())
        .map(|i| &nu.nu[i] * b.b()[(i, kc)].clone().max(BigInt::zero()))
        .sum();
    out[k] = positive - &nu.nu[k];
    let w = WeightVector::new(out);
    let mutated = b.mutate(k)?;
    if !w.is_kernel_of(&mutated) {
        return Err(Error::Internal(format!(
            "mutated weight left the kernel (k = {})",
            k + 1
        )));
    }
    Ok(w)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneityReport {
    pub index: usize,
    /// Common `ν`-degree of all terms, when homogeneous.
    pub degree: Option<BigInt>,
    pub homogeneous: bool,
}

/// For each variable of `seed`, whether all its exponent vectors share one
/// `ν`-degree (`ν` given for the initial seed).
pub fn weight_homogeneity_check<S: Scalar>(
    seed: &Seed<S>,
    nu: &WeightVector,
) -> Vec<HomogeneityReport> {
    seed.vars()
        .iter()
        .enumerate()
        .map(|(index, v)| {
            let degrees: std::collections::BTreeSet<BigInt> =
                v.terms().map(|(f, _)| nu.degree(f)).collect();
            let homogeneous = degrees.len() <= 1;
            HomogeneityReport {
                index,
                degree: if homogeneous {
                    degrees.into_iter().next()
                } else {
                    None
                },
                homogeneous,
            }
        })
        .collect()
}

/// Multivector in the exterior algebra of ℚᴺ, keyed by basis bitmask.
type Multivector = BTreeMap<u64, BigRational>;

fn wedge(a: &Multivector, b: &Multivector) -> Multivector {
    let mut out = Multivector::new();
    for (&ma, ca) in a {
        for (&mb, cb) in b {
            if ma & mb != 0 {
                continue;
            }
            // sign of merging: count pairs (i in a, j in b) with i > j
            let mut inversions = 0u32;
            let mut rest = mb;
            while rest != 0 {
                let j = rest.trailing_zeros();
                inversions += (ma >> (j + 1)).count_ones();
                rest &= rest - 1;
            }
            let mut c = ca * cb;
            if inversions % 2 == 1 {
                c = -c;
            }
            let e = out.entry(ma | mb).or_insert_with(BigRational::zero);
            *e += c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Coefficient of `e₁∧⋯∧e_N` in `v₁∧⋯∧v_{N−2r}∧β^{∧r}` with
/// `β = Σ_{i<k} Λ_ik e_i∧e_k`.
pub fn anticanonical_coefficient(lambda: &IntMatrix, theta: &[WeightVector]) -> Result<BigRational> {
    let n = lambda.rows();
    if n > 63 {
        return Err(Error::DimensionMismatch("at most 63 indices".into()));
    }
    let two_r = skew_rank(lambda)?;
    if theta.len() != n - two_r {
        return Err(Error::WrongThetaCardinality {
            expected: n - two_r,
            got: theta.len(),
        });
    }
    let mut acc: Multivector = BTreeMap::from([(0u64, BigRational::one())]);
    for v in theta {
        if v.nu.len() != n {
            return Err(Error::DimensionMismatch("weight length".into()));
        }
        let vec: Multivector = v
            .nu
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (1u64 << i, BigRational::from_integer(c.clone())))
            .collect();
        acc = wedge(&acc, &vec);
    }
    let mut beta = Multivector::new();
    for i in 0..n {
        for k in i + 1..n {
            if !lambda[(i, k)].is_zero() {
                beta.insert((1u64 << i) | (1u64 << k), BigRational::from_integer(lambda[(i, k)].clone()));
            }
        }
    }
    for _ in 0..two_r / 2 {
        acc = wedge(&acc, &beta);
    }
    let full = if n == 0 { 0 } else { u64::MAX >> (64 - n) };
    Ok(acc.get(&full).cloned().unwrap_or_else(BigRational::zero))
}

/// `{x_i, b} · x_i^{-1}` for a non-inverted frozen `i`, together with whether
/// its exponents stay nonnegative at every `ninv` index (checked whenever
/// `b` itself has that property).
pub fn frozen_poisson_divisibility(
    i: usize,
    b: &ClassicalPoly,
    ctx: &GsvContext,
    exchange: &ExchangeData,
) -> Result<(ClassicalPoly, bool)> {
    if !exchange.ninv().contains(&i) {
        return Err(Error::InvalidExchangeData(format!(
            "index {} is not a non-inverted frozen index",
            i + 1
        )));
    }
    let xi = TwistedLaurentPoly::var(b.ring(), i);
    let bracket = gsv_bracket(&xi, b, ctx)?;
    let q = bracket.exact_divide_right(&xi)?;
    let nonneg = |p: &ClassicalPoly| {
        p.terms()
            .all(|(f, _)| exchange.ninv().iter().all(|&j| f[j] >= 0))
    };
    let ok = !nonneg(b) || nonneg(&q);
    Ok((q, ok))
}
