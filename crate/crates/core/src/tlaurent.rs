//! Twisted Laurent polynomial rings.
//!
//! `x^f · x^g = ζ^{Ω(f,g)} x^{f+g}` where Ω is a skew form and ζ the twist
//! root of the scalar ring. With rational scalars and Ω = 0 this is the
//! ordinary Laurent polynomial ring; with cyclotomic scalars it is a quantum
//! torus at a root of unity; with `QLaurent` scalars it is the generic
//! quantum torus.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intlin::IntMatrix;
use crate::scalar::{Scalar, SpecializeOne};

/// Skew form defining the twist, either over ℤ or reduced mod ℓ.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TwistMatrix {
    modulus: Option<u64>,
    matrix: IntMatrix,
}

impl fmt::Debug for TwistMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.modulus {
            Some(m) => write!(f, "{:?} mod {m}", self.matrix),
            None => write!(f, "{:?}", self.matrix),
        }
    }
}

impl TwistMatrix {
    pub fn zero(n: usize) -> Self {
        TwistMatrix {
            modulus: None,
            matrix: IntMatrix::zeros(n, n),
        }
    }

    /// Integral skew form (generic twist).
    pub fn integral(m: IntMatrix) -> Result<Self> {
        if !m.is_skew_symmetric() {
            return Err(Error::NotSkewSymmetric);
        }
        Ok(TwistMatrix {
            modulus: None,
            matrix: m,
        })
    }

    /// Reduction of `m` mod `ell`; `m` must be skew mod `ell`.
    pub fn modular(m: &IntMatrix, ell: u64) -> Result<Self> {
        if ell == 0 {
            return Err(Error::InvalidModulus(0));
        }
        if !m.is_square() {
            return Err(Error::DimensionMismatch("twist matrix must be square".into()));
        }
        let l = BigInt::from(ell);
        let r = m.reduce_mod(&l);
        let n = r.rows();
        for i in 0..n {
            for j in 0..n {
                if !(&r[(i, j)] + &r[(j, i)]).mod_floor(&l).is_zero() {
                    return Err(Error::NotSkewSymmetric);
                }
            }
        }
        Ok(TwistMatrix {
            modulus: Some(ell),
            matrix: r,
        })
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    /// Stored representatives (in `[0, ℓ)` for modular twists).
    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Ω(f, g), reduced into `[0, ℓ)` for modular twists.
    pub fn value(&self, f: &[i64], g: &[i64]) -> i64 {
        let v = self.matrix.form_i64(f, g);
        let v = match self.modulus {
            Some(m) => v.mod_floor(&BigInt::from(m)),
            None => v,
        };
        v.to_i64().expect("twist exponent exceeds i64 range")
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.value(&unit(self.n(), i), &unit(self.n(), j))
    }

    /// `Eᵀ Ω E`, re-reduced.
    pub fn congruence(&self, e: &IntMatrix) -> Result<TwistMatrix> {
        let m = e.transpose().mul(&self.matrix)?.mul(e)?;
        match self.modulus {
            Some(l) => TwistMatrix::modular(&m, l),
            None => TwistMatrix::integral(m),
        }
    }
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// The ring: rank, twist and scalar context.
#[derive(Debug, PartialEq)]
pub struct LaurentRing<S: Scalar> {
    n: usize,
    twist: TwistMatrix,
    ctx: S::Ctx,
}

impl<S: Scalar> LaurentRing<S> {
    pub fn new(twist: TwistMatrix, ctx: S::Ctx) -> Result<Arc<Self>> {
        let ok = match S::root_order(&ctx) {
            Some(1) => twist.is_zero(),
            Some(l) => twist.modulus == Some(l),
            None => twist.modulus.is_none(),
        };
        if !ok {
            return Err(Error::TwistMismatch);
        }
        Ok(Arc::new(LaurentRing {
            n: twist.n(),
            twist,
            ctx,
        }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn twist(&self) -> &TwistMatrix {
        &self.twist
    }

    pub fn ctx(&self) -> &S::Ctx {
        &self.ctx
    }

    /// ζ^{Ω(f,g)}.
    pub fn twist_scalar(&self, f: &[i64], g: &[i64]) -> S {
        if self.twist.is_zero() {
            return S::one_of(&self.ctx);
        }
        S::root_power(&self.ctx, self.twist.value(f, g))
    }
}

impl LaurentRing<BigRational> {
    /// Commutative Laurent ring in `n` variables over ℚ.
    pub fn classical(n: usize) -> Arc<Self> {
        Arc::new(LaurentRing {
            n,
            twist: TwistMatrix::zero(n),
            ctx: (),
        })
    }
}

/// Exponent vector ordered lexicographically with the last coordinate most
/// significant.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Exp(Vec<i64>);

impl Ord for Exp {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl PartialOrd for Exp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone)]
pub struct TwistedLaurentPoly<S: Scalar> {
    ring: Arc<LaurentRing<S>>,
    terms: BTreeMap<Exp, S>,
}

pub type ClassicalPoly = TwistedLaurentPoly<BigRational>;

impl<S: Scalar> PartialEq for TwistedLaurentPoly<S> {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl<S: Scalar> fmt::Debug for TwistedLaurentPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

fn same_ring<S: Scalar>(a: &Arc<LaurentRing<S>>, b: &Arc<LaurentRing<S>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn add_exp(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl<S: Scalar> TwistedLaurentPoly<S> {
    pub fn zero(ring: &Arc<LaurentRing<S>>) -> Self {
        TwistedLaurentPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<LaurentRing<S>>) -> Self {
        Self::constant(ring, S::one_of(&ring.ctx))
    }

    pub fn constant(ring: &Arc<LaurentRing<S>>, c: S) -> Self {
        let mut p = Self::zero(ring);
        p.add_term(vec![0; ring.n], c);
        p
    }

    /// `c·x^f`.
    pub fn monomial(ring: &Arc<LaurentRing<S>>, f: &[i64], c: S) -> Result<Self> {
        if f.len() != ring.n {
            return Err(Error::DimensionMismatch(format!(
                "exponent of length {} in a rank-{} ring",
                f.len(),
                ring.n
            )));
        }
        let mut p = Self::zero(ring);
        p.add_term(f.to_vec(), c);
        Ok(p)
    }

    /// The generator `x_i` (0-based).
    pub fn var(ring: &Arc<LaurentRing<S>>, i: usize) -> Self {
        let mut p = Self::zero(ring);
        p.add_term(unit(ring.n, i), S::one_of(&ring.ctx));
        p
    }

    pub fn from_terms(
        ring: &Arc<LaurentRing<S>>,
        terms: impl IntoIterator<Item = (Vec<i64>, S)>,
    ) -> Result<Self> {
        let mut p = Self::zero(ring);
        for (f, c) in terms {
            if f.len() != ring.n {
                return Err(Error::DimensionMismatch("exponent length".into()));
            }
            p.add_term(f, c);
        }
        Ok(p)
    }

    pub fn ring(&self) -> &Arc<LaurentRing<S>> {
        &self.ring
    }

    /// Terms in increasing term order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[i64], &S)> {
        self.terms.iter().map(|(e, c)| (e.0.as_slice(), c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, f: &[i64]) -> S {
        self.terms
            .get(&Exp(f.to_vec()))
            .cloned()
            .unwrap_or_else(|| S::zero_of(&self.ring.ctx))
    }

    pub fn leading_term(&self) -> Option<(&[i64], &S)> {
        self.terms.last_key_value().map(|(e, c)| (e.0.as_slice(), c))
    }

    /// Some((f, c)) when the element is a single term `c·x^f`.
    pub fn as_monomial(&self) -> Option<(&[i64], &S)> {
        if self.terms.len() == 1 {
            self.leading_term()
        } else {
            None
        }
    }

    fn add_term(&mut self, f: Vec<i64>, c: S) {
        if c.is_zero_elt() {
            return;
        }
        let key = Exp(f);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v = v.plus(&c);
                if v.is_zero_elt() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::TwistMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.0.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TwistedLaurentPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.negated())).collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero(&self.ring);
        for (e, c) in &self.terms {
            out.add_term(e.0.clone(), c.times(s));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = Self::zero(&self.ring);
        for (f, a) in &self.terms {
            for (g, b) in &other.terms {
                let c = a.times(b).times(&self.ring.twist_scalar(&f.0, &g.0));
                out.add_term(add_exp(&f.0, &g.0), c);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        let mut k = k;
        // same ring throughout, so mul cannot fail
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        acc
    }

    /// `a^ℓ`.
    pub fn ell_power(&self, ell: u32) -> Self {
        self.pow(ell)
    }

    /// `[a, b] = ab − ba`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Per-coordinate minimum and maximum exponent over the support.
    pub fn exponent_bounds(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let (mut lo, mut hi) = (first.0.clone(), first.0.clone());
        for e in it {
            for (i, &v) in e.0.iter().enumerate() {
                lo[i] = lo[i].min(v);
                hi[i] = hi[i].max(v);
            }
        }
        Some((lo, hi))
    }

    /// The unique `q` with `q·b = self`, when it exists.
    ///
    /// Leading terms multiply to leading terms, so the quotient is built by
    /// repeatedly cancelling the leading term of the remainder. Every
    /// quotient exponent must lie in the box allowed by the exponent ranges
    /// of `self` and `b`; leaving it proves no quotient exists.
    pub fn exact_divide_right(&self, b: &Self) -> Result<Self> {
        self.check_ring(b)?;
        let Some((gb, db)) = b.leading_term() else {
            return Err(Error::DivisionByZero);
        };
        let (gb, db) = (gb.to_vec(), db.clone());
        let mut q = Self::zero(&self.ring);
        let Some((alo, ahi)) = self.exponent_bounds() else {
            return Ok(q);
        };
        let (blo, bhi) = b.exponent_bounds().expect("nonzero divisor");
        let mut rem = self.clone();
        while let Some((f, c)) = rem.leading_term() {
            let h: Vec<i64> = f.iter().zip(&gb).map(|(x, y)| x - y).collect();
            let inside = (0..h.len()).all(|i| alo[i] - blo[i] <= h[i] && h[i] <= ahi[i] - bhi[i]);
            if !inside {
                return Err(Error::NoExactQuotient);
            }
            let denom = db.times(&self.ring.twist_scalar(&h, &gb));
            let coeff = c.try_div(&denom).map_err(|e| match e {
                Error::DivisionByZero => Error::DivisionByZero,
                _ => Error::NoExactQuotient,
            })?;
            let term = Self::monomial(&self.ring, &h, coeff.clone())?;
            rem = rem.sub(&term.mul(b)?)?;
            q.add_term(h, coeff);
        }
        Ok(q)
    }

    /// Applies `f` to every coefficient, landing in `ring` (same rank).
    pub fn map_scalars<T: Scalar>(
        &self,
        ring: &Arc<LaurentRing<T>>,
        f: impl Fn(&S) -> T,
    ) -> Result<TwistedLaurentPoly<T>> {
        if ring.n != self.ring.n {
            return Err(Error::DimensionMismatch("rank differs".into()));
        }
        let mut out = TwistedLaurentPoly::zero(ring);
        for (e, c) in &self.terms {
            out.add_term(e.0.clone(), f(c));
        }
        Ok(out)
    }

    /// Canonical rendering: `c*x^(f1,...,fn)` terms, leading term first.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let exps: Vec<String> = e.0.iter().map(|v| v.to_string()).collect();
                format!("{}*x^({})", c.render(), exps.join(","))
            })
            .collect();
        parts.join(" + ")
    }

    /// Human-oriented rendering such as `x1^-1*x2^2 + x1^-1`.
    pub fn pretty(&self) -> String {
        self.pretty_with(|i| format!("x{}", i + 1))
    }

    pub fn pretty_with(&self, name: impl Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let factors: Vec<String> = e
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(i, &v)| {
                        if v == 1 {
                            name(i)
                        } else {
                            format!("{}^{v}", name(i))
                        }
                    })
                    .collect();
                match (factors.is_empty(), c.is_one_elt()) {
                    (true, _) => c.render(),
                    (false, true) => factors.join("*"),
                    (false, false) => format!("{}*{}", c.render(), factors.join("*")),
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// ζ → 1 degeneration into the commutative ring over ℚ.
///
/// For generic (`QLaurent`) scalars this is a ring homomorphism. For
/// cyclotomic scalars it sums reduced coefficients and is only additive.
pub fn specialize_commutative<S: SpecializeOne>(a: &TwistedLaurentPoly<S>) -> ClassicalPoly {
    let ring = LaurentRing::classical(a.ring.n);
    a.map_scalars(&ring, |c| c.specialize_to_one())
        .expect("same rank")
}
