//! Poisson-order derivations on root-of-unity quantum tori.
//!
//! For a strict lift `Λ'` of the twist, `M(ℓf)` is central and acts on the
//! torus by `∂_{M(ℓf)}(M(g)) = (1/ℓ)Λ'(f,g)·M(ℓf+g)`. The same derivation is
//! recovered from the generic torus over `ℚ(ζ)[u^{±1}]` as the difference
//! quotient of a commutator by `u − ζ`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::compat::{track_strict_lift, CompatiblePair};
use crate::cyclo::{root_power, CycloContext, CycloNumber};
use crate::error::{Error, Result};
use crate::intlin::IntMatrix;
use crate::qparam::QLaurent;
use crate::scalar::Scalar;
use crate::seeds::QuantumSeed;
use crate::tlaurent::{unit, LaurentRing, TwistMatrix, TwistedLaurentPoly};

pub type QuantumPoly = TwistedLaurentPoly<CycloNumber>;

/// Strict lift `Λ'` at the current frame together with `ℓ`.
#[derive(Debug, Clone)]
pub struct DerivationSpec {
    lambda_prime: IntMatrix,
    ell: u64,
    ring: Arc<LaurentRing<CycloNumber>>,
}

impl DerivationSpec {
    pub fn new(lambda_prime: IntMatrix, ell: u64) -> Result<Self> {
        if !lambda_prime.is_square() || !lambda_prime.is_skew_symmetric() {
            return Err(Error::NotSkewSymmetric);
        }
        let omega = TwistMatrix::modular(&lambda_prime, ell)?;
        let ring = LaurentRing::new(omega, CycloContext::new(ell)?)?;
        Ok(DerivationSpec {
            lambda_prime,
            ell,
            ring,
        })
    }

    pub fn lambda_prime(&self) -> &IntMatrix {
        &self.lambda_prime
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    /// The torus with twist `Λ' mod ℓ`.
    pub fn ring(&self) -> &Arc<LaurentRing<CycloNumber>> {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.lambda_prime.rows()
    }

    fn ctx(&self) -> &Arc<CycloContext> {
        self.ring.ctx()
    }

    fn form(&self, f: &[i64], g: &[i64]) -> BigInt {
        let fb: Vec<BigInt> = f.iter().map(|&v| BigInt::from(v)).collect();
        let gb: Vec<BigInt> = g.iter().map(|&v| BigInt::from(v)).collect();
        self.lambda_prime.form(&fb, &gb)
    }

    fn check_len(&self, f: &[i64]) -> Result<()> {
        if f.len() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "exponent of length {} in rank {}",
                f.len(),
                self.n()
            )));
        }
        Ok(())
    }

    /// `M(f)` in the torus.
    pub fn monomial(&self, f: &[i64]) -> Result<QuantumPoly> {
        TwistedLaurentPoly::monomial(&self.ring, f, CycloNumber::one_of(self.ctx()))
    }
}

fn scaled(v: &[i64], s: i64) -> Vec<i64> {
    v.iter().map(|x| x * s).collect()
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `∂_{M(ℓf)}(a)`, extended linearly over the terms of `a`.
pub fn derivation_partial(spec: &DerivationSpec, f: &[i64], a: &QuantumPoly) -> Result<QuantumPoly> {
    spec.check_len(f)?;
    if a.ring().twist() != spec.ring().twist() {
        return Err(Error::TwistMismatch);
    }
    let ell = spec.ell as i64;
    let shift = scaled(f, ell);
    let mut out = TwistedLaurentPoly::zero(spec.ring());
    for (g, c) in a.terms() {
        let lam = spec.form(f, g);
        if lam == BigInt::from(0) {
            continue;
        }
        let factor = BigRational::new(lam, BigInt::from(ell));
        let coeff = c.times(&CycloNumber::from_rational(spec.ctx(), &factor));
        let term = TwistedLaurentPoly::monomial(spec.ring(), &add(&shift, g), coeff)?;
        out = out.add(&term)?;
    }
    Ok(out)
}

/// `{y_k, y_i}` for `y_j = M(ℓe_j)`: computes `∂_{M(ℓe_k)}(M(ℓe_i))` and
/// checks it equals `Λ'(e_k,e_i)·M(ℓe_k)·M(ℓe_i)`.
pub fn central_bracket(spec: &DerivationSpec, k: usize, i: usize) -> Result<QuantumPoly> {
    let n = spec.n();
    if k >= n || i >= n {
        return Err(Error::DimensionMismatch(format!("index out of range for rank {n}")));
    }
    let ell = spec.ell as i64;
    let (ek, ei) = (unit(n, k), unit(n, i));
    let yk = spec.monomial(&scaled(&ek, ell))?;
    let yi = spec.monomial(&scaled(&ei, ell))?;
    let lhs = derivation_partial(spec, &ek, &yi)?;
    let lam = spec.lambda_prime.get_i64(k, i);
    let rhs = yk.mul(&yi)?.scale(&CycloNumber::from_int(spec.ctx(), lam));
    if lhs != rhs {
        return Err(Error::VerificationFailed(format!(
            "central bracket ({}, {}): {} vs {}",
            k + 1,
            i + 1,
            lhs.render(),
            rhs.render()
        )));
    }
    Ok(lhs)
}

#[derive(Debug, Clone)]
pub struct DifferenceQuotientReport {
    /// `Λ'(f, g)`.
    pub pairing: BigInt,
    /// `([M(ℓf), M(g)] / (u − ζ))|_{u=ζ}`.
    pub quotient: QuantumPoly,
    /// `∂_{M(ℓf)}(M(g))`.
    pub derivation: QuantumPoly,
    /// `2ℓ²ζ^{−1}`.
    pub expected_constant: CycloNumber,
    /// `quotient / derivation` when the derivation is nonzero.
    pub observed_constant: Option<CycloNumber>,
    pub holds: bool,
}

/// Lifts `M(ℓf)` and `M(g)` to the generic torus over `ℚ(ζ)[u^{±1}]`
/// (twist `u^{Λ'}`), divides their commutator by `u − ζ`, evaluates at
/// `u = ζ` and compares with `2ℓ²ζ^{−1}·∂_{M(ℓf)}(M(g))`.
pub fn difference_quotient_check(
    spec: &DerivationSpec,
    f: &[i64],
    g: &[i64],
) -> Result<DifferenceQuotientReport> {
    spec.check_len(f)?;
    spec.check_len(g)?;
    let ctx = spec.ctx().clone();
    let generic: Arc<LaurentRing<QLaurent<CycloNumber>>> =
        LaurentRing::new(TwistMatrix::integral(spec.lambda_prime.clone())?, ctx.clone())?;
    let one = QLaurent::<CycloNumber>::one_of(&ctx);
    let ell = spec.ell as i64;
    let a = TwistedLaurentPoly::monomial(&generic, &scaled(f, ell), one.clone())?;
    let b = TwistedLaurentPoly::monomial(&generic, g, one)?;
    let comm = a.commutator(&b)?;
    let zeta = root_power(&ctx, 1);
    let h = QLaurent::u_minus(&ctx, &zeta);
    let mut quotient = TwistedLaurentPoly::zero(spec.ring());
    for (e, c) in comm.terms() {
        let q = c.exact_div(&h).map_err(|_| {
            Error::Internal("commutator coefficient not divisible by u - zeta".into())
        })?;
        let term = TwistedLaurentPoly::monomial(spec.ring(), e, q.evaluate(&zeta)?)?;
        quotient = quotient.add(&term)?;
    }
    let derivation = derivation_partial(spec, f, &spec.monomial(g)?)?;
    let two_ell_sq = CycloNumber::from_int(&ctx, 2 * ell * ell);
    let expected_constant = two_ell_sq.times(&root_power(&ctx, -1));
    let holds = quotient == derivation.scale(&expected_constant);
    let observed_constant = match (derivation.as_monomial(), quotient.as_monomial()) {
        (Some((ed, cd)), Some((eq, cq))) if ed == eq => Some(cq.try_div(cd)?),
        _ => None,
    };
    Ok(DifferenceQuotientReport {
        pairing: spec.form(f, g),
        quotient,
        derivation,
        expected_constant,
        observed_constant,
        holds,
    })
}

#[derive(Debug, Clone)]
pub struct CentralMutationReport {
    pub k: usize,
    pub lhs: QuantumPoly,
    pub rhs: QuantumPoly,
    pub holds: bool,
}

/// Checks `X_k^ℓ (μ_k X_k)^ℓ = Π_{b'_ik>0} (X_i^ℓ)^{b'_ik} + Π_{b'_ik<0} (X_i^ℓ)^{−b'_ik}`
/// for the cluster variables `X_i` of `seed`, expanded in the initial torus.
/// `strict` is a strict lift of the initial seed.
pub fn central_ell_power_mutation_check(
    seed: &QuantumSeed,
    k: usize,
    strict: &CompatiblePair,
) -> Result<CentralMutationReport> {
    let ell = seed.ring().ctx().ell();
    if ell % 2 == 0 {
        return Err(Error::HypothesisViolated(format!("ell = {ell} is even")));
    }
    let l = BigInt::from(ell);
    if let Some(d) = strict.d().iter().find(|d| d.gcd(&l) != BigInt::from(1)) {
        return Err(Error::HypothesisViolated(format!(
            "gcd(ell, d) != 1 for ell = {ell}, d = {d}"
        )));
    }
    if *seed.ring().twist() != TwistMatrix::modular(strict.lambda(), ell)? {
        return Err(Error::HypothesisViolated(
            "strict lift does not reduce to the initial twist".into(),
        ));
    }
    let tracked = track_strict_lift(strict, seed.history())?;
    if TwistMatrix::modular(&tracked, ell)? != *seed.form() {
        return Err(Error::HypothesisViolated(
            "strict lift does not track the seed's form".into(),
        ));
    }
    let col = seed.exchange().column_i64(k)?;
    let e = ell.to_u32().ok_or_else(|| Error::InvalidModulus(ell as i64))?;
    let powers: Vec<QuantumPoly> = seed.vars().iter().map(|x| x.ell_power(e)).collect();
    let mutated = seed.mutate(k)?;
    let lhs = powers[k].mul(&mutated.vars()[k].ell_power(e))?;
    let mut pos = TwistedLaurentPoly::one(seed.ring());
    let mut neg = TwistedLaurentPoly::one(seed.ring());
    for (i, &b) in col.iter().enumerate() {
        if b > 0 {
            pos = pos.mul(&powers[i].pow(b as u32))?;
        } else if b < 0 {
            neg = neg.mul(&powers[i].pow((-b) as u32))?;
        }
    }
    let rhs = pos.add(&neg)?;
    Ok(CentralMutationReport {
        k,
        holds: lhs == rhs,
        lhs,
        rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compat::check_compatible;
    use crate::exchange::ExchangeData;
    use crate::poisson::{gsv_bracket, GsvContext};
    use crate::tlaurent::{specialize_commutative, ClassicalPoly};

    fn lam_c() -> IntMatrix {
        IntMatrix::from_rows(&[[0, -1], [1, 0]])
    }

    fn kron() -> ExchangeData {
        ExchangeData::unfrozen(IntMatrix::from_rows(&[[0, -2], [2, 0]])).unwrap()
    }

    #[test]
    fn partial_on_monomials() {
        let spec = DerivationSpec::new(lam_c(), 3).unwrap();
        let ctx = spec.ring().ctx().clone();
        let a = spec.monomial(&[0, 1]).unwrap();
        let got = derivation_partial(&spec, &[1, 0], &a).unwrap();
        let want = TwistedLaurentPoly::monomial(
            spec.ring(),
            &[3, 1],
            CycloNumber::from_rational(&ctx, &BigRational::new((-1).into(), 3.into())),
        )
        .unwrap();
        assert_eq!(got, want);
        let same = derivation_partial(&spec, &[1, 0], &spec.monomial(&[1, 0]).unwrap()).unwrap();
        assert!(same.is_zero());
        let unit = derivation_partial(&spec, &[2, -1], &TwistedLaurentPoly::one(spec.ring())).unwrap();
        assert!(unit.is_zero());
    }

    #[test]
    fn central_brackets() {
        let spec = DerivationSpec::new(lam_c(), 3).unwrap();
        assert!(central_bracket(&spec, 0, 0).unwrap().is_zero());
        let a = central_bracket(&spec, 0, 1).unwrap();
        let b = central_bracket(&spec, 1, 0).unwrap();
        assert_eq!(a, b.neg());
        assert_eq!(a.as_monomial().unwrap().0, &[3, 3]);
    }

    #[test]
    fn central_bracket_matches_gsv_under_substitution() {
        let lam = IntMatrix::from_rows(&[[0, 2, -1], [-2, 0, 3], [1, -3, 0]]);
        let spec = DerivationSpec::new(lam.clone(), 5).unwrap();
        let ctx = GsvContext::from_skew(&lam).unwrap();
        let ring = LaurentRing::classical(3);
        for k in 0..3 {
            for i in 0..3 {
                let q = specialize_commutative(&central_bracket(&spec, k, i).unwrap());
                // y_j = x_j^ℓ ↦ x_j
                let terms: Vec<(Vec<i64>, BigRational)> = q
                    .terms()
                    .map(|(e, c)| (e.iter().map(|v| v / 5).collect(), c.clone()))
                    .collect();
                let sub = ClassicalPoly::from_terms(&ring, terms).unwrap();
                let xk = ClassicalPoly::var(&ring, k);
                let xi = ClassicalPoly::var(&ring, i);
                assert_eq!(sub, gsv_bracket(&xk, &xi, &ctx).unwrap());
            }
        }
    }

    #[test]
    fn difference_quotient_constant() {
        let spec = DerivationSpec::new(lam_c(), 3).unwrap();
        let r = difference_quotient_check(&spec, &[1, 0], &[0, 1]).unwrap();
        assert!(r.holds);
        assert_eq!(r.observed_constant.unwrap(), r.expected_constant);
        let z = difference_quotient_check(&spec, &[1, 1], &[2, 2]).unwrap();
        assert!(z.holds && z.quotient.is_zero() && z.derivation.is_zero());
    }

    #[test]
    fn kronecker_central_mutation() {
        let strict = check_compatible(&lam_c(), &kron()).unwrap();
        for (ell, k) in [(3u64, 0usize), (5, 1), (7, 0)] {
            let s = QuantumSeed::quantum(kron(), &lam_c(), ell).unwrap();
            assert!(central_ell_power_mutation_check(&s, k, &strict).unwrap().holds);
            let s2 = s.mutate_sequence(&[0, 1, 0]).unwrap();
            let r = central_ell_power_mutation_check(&s2, 1, &strict).unwrap();
            assert!(r.holds, "ell {ell}: {} vs {}", r.lhs.render(), r.rhs.render());
        }
    }

    #[test]
    fn central_mutation_hypotheses() {
        let s = QuantumSeed::quantum(kron(), &lam_c(), 2);
        // the Kronecker pair is not 2-compatible at all (d = 2)
        assert!(s.is_err());
        let b = ExchangeData::unfrozen(IntMatrix::from_rows(&[[0, -1], [1, 0]])).unwrap();
        let p = check_compatible(&lam_c(), &b).unwrap();
        let s = QuantumSeed::quantum(b, &lam_c(), 2).unwrap();
        assert!(matches!(
            central_ell_power_mutation_check(&s, 0, &p),
            Err(Error::HypothesisViolated(_))
        ));
        let s3 = QuantumSeed::quantum(kron(), &lam_c(), 3).unwrap();
        let wrong = check_compatible(&IntMatrix::from_rows(&[[0, -2], [2, 0]]), &kron()).unwrap();
        assert!(central_ell_power_mutation_check(&s3, 0, &wrong).is_err());
    }
}
