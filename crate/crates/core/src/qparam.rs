//! Laurent polynomials in one formal parameter `u` (standing for q^{1/2}).
//!
//! Used as scalars they give the generic quantum torus, where the twist is
//! `u^{Λ(f,g)}` with integral Λ. Evaluating `u` at a root of unity or at 1
//! recovers the root-of-unity and classical rings.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, SpecializeOne};

#[derive(Clone, PartialEq)]
pub struct QLaurent<C: Scalar> {
    ctx: C::Ctx,
    terms: BTreeMap<i64, C>,
}

impl<C: Scalar> fmt::Debug for QLaurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl<C: Scalar> QLaurent<C> {
    pub fn from_terms(ctx: &C::Ctx, terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut out = QLaurent {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        };
        for (k, c) in terms {
            out.add_term(k, &c);
        }
        out
    }

    /// `c·u^k`.
    pub fn monomial(ctx: &C::Ctx, k: i64, c: C) -> Self {
        Self::from_terms(ctx, [(k, c)])
    }

    /// `u - a`.
    pub fn u_minus(ctx: &C::Ctx, a: &C) -> Self {
        Self::from_terms(ctx, [(1, C::one_of(ctx)), (0, a.negated())])
    }

    pub fn terms(&self) -> &BTreeMap<i64, C> {
        &self.terms
    }

    pub fn context(&self) -> &C::Ctx {
        &self.ctx
    }

    fn add_term(&mut self, k: i64, c: &C) {
        if c.is_zero_elt() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(v) => {
                *v = v.plus(c);
                if v.is_zero_elt() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c.clone());
            }
        }
    }

    /// Substitutes `u = point`. `point` must be invertible when negative
    /// powers occur.
    pub fn evaluate(&self, point: &C) -> Result<C> {
        let mut acc = C::zero_of(&self.ctx);
        for (&k, c) in &self.terms {
            let p = pow_signed(&self.ctx, point, k)?;
            acc = acc.plus(&c.times(&p));
        }
        Ok(acc)
    }

    /// Exact quotient in `C[u^{±1}]`, `C` a field.
    pub fn exact_div(&self, other: &Self) -> Result<Self> {
        let (Some((&lo_b, _)), Some((&hi_b, lead_b))) =
            (other.terms.first_key_value(), other.terms.last_key_value())
        else {
            return Err(Error::DivisionByZero);
        };
        let mut rem = self.clone();
        let mut q = QLaurent {
            ctx: self.ctx.clone(),
            terms: BTreeMap::new(),
        };
        let lo_a = match self.terms.first_key_value() {
            Some((&k, _)) => k,
            None => return Ok(q),
        };
        // units are c·u^k, so the quotient's lowest power is lo_a - lo_b
        let floor = lo_a - lo_b;
        while let Some((&k, c)) = rem.terms.last_key_value() {
            let shift = k - hi_b;
            if shift < floor {
                return Err(Error::NoExactQuotient);
            }
            let coeff = c.try_div(lead_b)?;
            for (&kb, cb) in &other.terms {
                rem.add_term(kb + shift, &coeff.times(cb).negated());
            }
            q.add_term(shift, &coeff);
        }
        Ok(q)
    }
}

fn pow_signed<C: Scalar>(ctx: &C::Ctx, x: &C, k: i64) -> Result<C> {
    let base = if k < 0 { C::one_of(ctx).try_div(x)? } else { x.clone() };
    let mut acc = C::one_of(ctx);
    for _ in 0..k.unsigned_abs() {
        acc = acc.times(&base);
    }
    Ok(acc)
}

impl<C: Scalar> Scalar for QLaurent<C> {
    type Ctx = C::Ctx;

    fn zero_of(ctx: &Self::Ctx) -> Self {
        QLaurent {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    fn one_of(ctx: &Self::Ctx) -> Self {
        Self::monomial(ctx, 0, C::one_of(ctx))
    }

    fn from_rational(ctx: &Self::Ctx, q: &BigRational) -> Self {
        Self::monomial(ctx, 0, C::from_rational(ctx, q))
    }

    /// The twist parameter is `u` itself.
    fn root_power(ctx: &Self::Ctx, k: i64) -> Self {
        Self::monomial(ctx, k, C::one_of(ctx))
    }

    fn root_order(_: &Self::Ctx) -> Option<u64> {
        None
    }

    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.add_term(k, c);
        }
        out
    }

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    fn times(&self, other: &Self) -> Self {
        let mut out = Self::zero_of(&self.ctx);
        for (&a, ca) in &self.terms {
            for (&b, cb) in &other.terms {
                out.add_term(a + b, &ca.times(cb));
            }
        }
        out
    }

    fn negated(&self) -> Self {
        QLaurent {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(&k, c)| (k, c.negated())).collect(),
        }
    }

    fn try_div(&self, other: &Self) -> Result<Self> {
        self.exact_div(other)
    }

    fn is_zero_elt(&self) -> bool {
        self.terms.is_empty()
    }

    fn is_one_elt(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one_elt())
    }

    /// `{k:c;...}` listing `c·u^k` by increasing `k`.
    fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&0) {
                return c.render();
            }
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| format!("{k}:{}", c.render()))
            .collect();
        format!("{{{}}}", parts.join(";"))
    }
}

/// `u ↦ 1` composed with the coefficient specialization.
impl<C: SpecializeOne> SpecializeOne for QLaurent<C> {
    fn specialize_to_one(&self) -> BigRational {
        self.terms.values().map(|c| c.specialize_to_one()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::{root_power, CycloContext, CycloNumber};
    use crate::scalar::rat;

    type Q = QLaurent<BigRational>;

    fn q(terms: &[(i64, i64)]) -> Q {
        Q::from_terms(&(), terms.iter().map(|&(k, c)| (k, rat(c))))
    }

    #[test]
    fn exact_division() {
        // (u^2 - 1) / (u - 1) = u + 1
        let a = q(&[(2, 1), (0, -1)]);
        let b = q(&[(1, 1), (0, -1)]);
        assert_eq!(a.exact_div(&b).unwrap(), q(&[(1, 1), (0, 1)]));
        // u^3 - u^-3 = u^-3 (u^6 - 1) is divisible by u - 1
        let c = q(&[(3, 1), (-3, -1)]);
        let quot = c.exact_div(&b).unwrap();
        assert_eq!(quot.times(&b), c);
        assert_eq!(q(&[(1, 1), (0, 1)]).exact_div(&b), Err(Error::NoExactQuotient));
        assert_eq!(a.exact_div(&Q::zero_of(&())), Err(Error::DivisionByZero));
    }

    #[test]
    fn evaluation_at_root_of_unity() {
        let ctx = CycloContext::new(3).unwrap();
        let z = root_power(&ctx, 1);
        let p = QLaurent::<CycloNumber>::from_terms(
            &ctx,
            [(3, CycloNumber::one_of(&ctx)), (-3, CycloNumber::one_of(&ctx).negated())],
        );
        assert!(p.evaluate(&z).unwrap().is_zero_elt());
        let quot = p.exact_div(&QLaurent::u_minus(&ctx, &z)).unwrap();
        // derivative of u^3 - u^-3 at ζ is 3ζ^2 + 3ζ^-4 = 6ζ^-1
        let expected = root_power(&ctx, -1).times(&CycloNumber::from_ints(&ctx, &[6]));
        assert_eq!(quot.evaluate(&z).unwrap(), expected);
    }

    #[test]
    fn specialization_is_multiplicative_here() {
        let a = q(&[(2, 3), (-1, 1)]);
        let b = q(&[(1, -2), (0, 5)]);
        assert_eq!(
            a.times(&b).specialize_to_one(),
            a.specialize_to_one() * b.specialize_to_one()
        );
    }
}
