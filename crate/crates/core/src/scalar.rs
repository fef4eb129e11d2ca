//! Coefficient rings for twisted Laurent polynomials.
//!
//! A scalar ring carries a distinguished element ζ used for the twist
//! `x^f x^g = ζ^{Ω(f,g)} x^{f+g}`. For the rationals ζ = 1, which is the
//! classical (commutative) case.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub trait Scalar: Clone + PartialEq + Debug + Send + Sync + 'static {
    /// Shared data needed to build constants (e.g. the cyclotomic modulus).
    type Ctx: Clone + PartialEq + Debug + Send + Sync + 'static;

    fn zero_of(ctx: &Self::Ctx) -> Self;
    fn one_of(ctx: &Self::Ctx) -> Self;
    fn from_rational(ctx: &Self::Ctx, q: &BigRational) -> Self;

    fn from_int(ctx: &Self::Ctx, v: i64) -> Self {
        Self::from_rational(ctx, &BigRational::from_integer(BigInt::from(v)))
    }

    /// ζ^k.
    fn root_power(ctx: &Self::Ctx, k: i64) -> Self;

    /// Multiplicative order of ζ, or `None` when ζ has infinite order.
    fn root_order(ctx: &Self::Ctx) -> Option<u64>;

    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;

    /// Exact quotient; fails on division by zero or when the ring has no
    /// quotient for this pair.
    fn try_div(&self, other: &Self) -> Result<Self>;

    fn is_zero_elt(&self) -> bool;

    fn is_one_elt(&self) -> bool;

    /// Canonical text form, stable across runs.
    fn render(&self) -> String;
}

/// Classical coefficients: ζ = 1.
impl Scalar for BigRational {
    type Ctx = ();

    fn zero_of(_: &()) -> Self {
        Zero::zero()
    }

    fn one_of(_: &()) -> Self {
        One::one()
    }

    fn from_rational(_: &(), q: &BigRational) -> Self {
        q.clone()
    }

    fn root_power(_: &(), _k: i64) -> Self {
        One::one()
    }

    fn root_order(_: &()) -> Option<u64> {
        Some(1)
    }

    fn plus(&self, other: &Self) -> Self {
        self + other
    }

    fn minus(&self, other: &Self) -> Self {
        self - other
    }

    fn times(&self, other: &Self) -> Self {
        self * other
    }

    fn negated(&self) -> Self {
        -self
    }

    fn try_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self / other)
    }

    fn is_zero_elt(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_one_elt(&self) -> bool {
        One::is_one(self)
    }

    fn render(&self) -> String {
        self.to_string()
    }
}

/// Scalars with a ζ → 1 degeneration to the rationals.
pub trait SpecializeOne: Scalar {
    fn specialize_to_one(&self) -> BigRational;
}

impl SpecializeOne for BigRational {
    fn specialize_to_one(&self) -> BigRational {
        self.clone()
    }
}

pub(crate) fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}
