//! The cyclotomic field ℚ(ζ) with ζ a primitive ℓ-th root of unity.
//!
//! Elements are residues modulo the ℓ-th cyclotomic polynomial Φ_ℓ, stored
//! as rational coefficient vectors of length below `deg Φ_ℓ`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, SpecializeOne};

#[derive(Debug, PartialEq, Eq)]
pub struct CycloContext {
    ell: u64,
    /// Coefficients of Φ_ℓ, constant term first. Monic.
    phi: Vec<BigInt>,
}

impl CycloContext {
    pub fn new(ell: u64) -> Result<Arc<CycloContext>> {
        if ell == 0 {
            return Err(Error::InvalidModulus(0));
        }
        let phi = cyclotomic_polynomial(ell);
        if phi.len() as u64 - 1 != euler_phi(ell) {
            return Err(Error::Internal(format!("Φ_{ell} has the wrong degree")));
        }
        Ok(Arc::new(CycloContext { ell, phi }))
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn cyclotomic_polynomial(&self) -> &[BigInt] {
        &self.phi
    }
}

fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Φ_n by dividing xⁿ − 1 by Φ_d for every proper divisor d of n.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in (1..n).filter(|d| n % d == 0) {
        num = int_poly_div_exact(&num, &cyclotomic_polynomial(d));
    }
    num
}

/// Exact quotient of integer polynomials with monic divisor.
fn int_poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = rem[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    q
}

fn trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// (quotient, remainder) of rational polynomials; `b` nonzero and trimmed.
fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead = b[db].clone();
    let mut q = vec![BigRational::zero(); rem.len() - db];
    for i in (0..q.len()).rev() {
        let c = &rem[i + db] / &lead;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            let t = &c * bj;
            rem[i + j] -= t;
        }
        q[i] = c;
    }
    trim(&mut rem);
    trim(&mut q);
    (q, rem)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(&mut out);
    out
}

/// Element of ℚ(ζ_ℓ).
#[derive(Clone)]
pub struct CycloNumber {
    ctx: Arc<CycloContext>,
    coeffs: Vec<BigRational>,
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.ell == other.ctx.ell && self.coeffs == other.coeffs
    }
}

impl Eq for CycloNumber {}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl CycloNumber {
    /// Builds `Σ cᵢ ζⁱ` and reduces it modulo Φ_ℓ.
    pub fn from_coeffs(ctx: &Arc<CycloContext>, coeffs: Vec<BigRational>) -> Self {
        let phi: Vec<BigRational> = ctx
            .phi
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let (_, rem) = poly_divmod(&coeffs, &phi);
        CycloNumber {
            ctx: ctx.clone(),
            coeffs: rem,
        }
    }

    pub fn from_ints(ctx: &Arc<CycloContext>, coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            ctx,
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn context(&self) -> &Arc<CycloContext> {
        &self.ctx
    }

    /// Reduced coefficients, constant term first, trailing zeros removed.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.len() <= 1
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx.ell != other.ctx.ell {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    fn modulus(&self) -> Vec<BigRational> {
        self.ctx
            .phi
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut out = vec![BigRational::zero(); self.coeffs.len().max(other.coeffs.len())];
        for (i, x) in self.coeffs.iter().enumerate() {
            out[i] += x;
        }
        for (i, x) in other.coeffs.iter().enumerate() {
            out[i] += x;
        }
        trim(&mut out);
        Ok(CycloNumber {
            ctx: self.ctx.clone(),
            coeffs: out,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(CycloNumber {
            ctx: self.ctx.clone(),
            coeffs: poly_sub(&self.coeffs, &other.coeffs),
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(Self::from_coeffs(&self.ctx, poly_mul(&self.coeffs, &other.coeffs)))
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.coeffs.is_empty() {
            return Err(Error::DivisionByZero);
        }
        // extended Euclid: track s with s·self ≡ r (mod Φ)
        let (mut r0, mut r1) = (self.modulus(), self.coeffs.clone());
        let (mut s0, mut s1): (Vec<BigRational>, Vec<BigRational>) =
            (Vec::new(), vec![BigRational::one()]);
        while r1.len() > 1 {
            let (q, r) = poly_divmod(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r1 is a nonzero constant because Φ is irreducible
        let c = r1[0].clone();
        let scaled = s1.into_iter().map(|x| x / &c).collect();
        Ok(Self::from_coeffs(&self.ctx, scaled))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        self.checked_mul(&other.inverse()?)
    }

    /// Sum of the reduced coefficients, i.e. ζ ↦ 1 applied to the canonical
    /// representative. This is additive but not multiplicative on ℚ(ζ):
    /// Φ_ℓ(1) ≠ 0, so the assignment does not factor through the quotient.
    pub fn specialize_to_one(&self) -> BigRational {
        self.coeffs.iter().sum()
    }

    /// Floating-point approximation, for diagnostics only.
    pub fn approx(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        let theta = 2.0 * std::f64::consts::PI / self.ctx.ell as f64;
        self.coeffs.iter().enumerate().fold((0.0, 0.0), |(re, im), (k, c)| {
            let c = c.to_f64().unwrap_or(f64::NAN);
            let a = theta * k as f64;
            (re + c * a.cos(), im + c * a.sin())
        })
    }
}

/// Canonical representative of ζ^k.
pub fn root_power(ctx: &Arc<CycloContext>, k: i64) -> CycloNumber {
    let e = k.rem_euclid(ctx.ell as i64) as usize;
    let mut coeffs = vec![BigRational::zero(); e + 1];
    coeffs[e] = BigRational::one();
    CycloNumber::from_coeffs(ctx, coeffs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycloOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn cyclo_arith(a: &CycloNumber, b: &CycloNumber, op: CycloOp) -> Result<CycloNumber> {
    match op {
        CycloOp::Add => a.checked_add(b),
        CycloOp::Sub => a.checked_sub(b),
        CycloOp::Mul => a.checked_mul(b),
        CycloOp::Div => a.checked_div(b),
    }
}

impl Scalar for CycloNumber {
    type Ctx = Arc<CycloContext>;

    fn zero_of(ctx: &Self::Ctx) -> Self {
        CycloNumber {
            ctx: ctx.clone(),
            coeffs: Vec::new(),
        }
    }

    fn one_of(ctx: &Self::Ctx) -> Self {
        Self::from_rational(ctx, &BigRational::one())
    }

    fn from_rational(ctx: &Self::Ctx, q: &BigRational) -> Self {
        Self::from_coeffs(ctx, vec![q.clone()])
    }

    fn root_power(ctx: &Self::Ctx, k: i64) -> Self {
        root_power(ctx, k)
    }

    fn root_order(ctx: &Self::Ctx) -> Option<u64> {
        Some(ctx.ell)
    }

    fn plus(&self, other: &Self) -> Self {
        self.checked_add(other).expect("cyclotomic context mismatch")
    }

    fn minus(&self, other: &Self) -> Self {
        self.checked_sub(other).expect("cyclotomic context mismatch")
    }

    fn times(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("cyclotomic context mismatch")
    }

    fn negated(&self) -> Self {
        CycloNumber {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    fn try_div(&self, other: &Self) -> Result<Self> {
        self.checked_div(other)
    }

    fn is_zero_elt(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn is_one_elt(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// A rational value prints as itself; anything else as the coefficient
    /// tuple `[c0,c1,...]` in powers of ζ.
    fn render(&self) -> String {
        match self.coeffs.len() {
            0 => "0".to_string(),
            1 => self.coeffs[0].to_string(),
            _ => {
                let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
                format!("[{}]", parts.join(","))
            }
        }
    }
}

impl SpecializeOne for CycloNumber {
    fn specialize_to_one(&self) -> BigRational {
        CycloNumber::specialize_to_one(self)
    }
}
