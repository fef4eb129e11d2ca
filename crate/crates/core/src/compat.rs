//! Compatible pairs `(Λ, B̃)` with `B̃ᵀΛ = [D 0]`, their mod-ℓ analogues,
//! and mutation of pairs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, IncompatibleReason, Result};
use crate::exchange::{build_es_fs, ExchangeData, Sign};
use crate::intlin::IntMatrix;
use crate::tlaurent::TwistMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatiblePair {
    lambda: IntMatrix,
    exchange: ExchangeData,
    d: Vec<BigInt>,
}

impl CompatiblePair {
    pub fn lambda(&self) -> &IntMatrix {
        &self.lambda
    }

    pub fn exchange(&self) -> &ExchangeData {
        &self.exchange
    }

    /// `d_j` indexed like `exchange.ex()`.
    pub fn d(&self) -> &[BigInt] {
        &self.d
    }

    pub fn reduce(&self, ell: u64) -> Result<EllCompatiblePair> {
        let omega = TwistMatrix::modular(&self.lambda, ell)?;
        check_ell_compatible(&omega, &self.exchange, Some(&self.d))
    }
}

/// Entrywise test of `B̃ᵀΛ = [D 0]` (blocks indexed by ex / frozen).
fn extract_d(lambda: &IntMatrix, b: &ExchangeData) -> Result<Vec<BigInt>> {
    let p = b.b().transpose().mul(lambda)?;
    let mut d = Vec::with_capacity(b.ex().len());
    for (r, &k) in b.ex().iter().enumerate() {
        for &j in b.ex() {
            if j != k && !p[(r, j)].is_zero() {
                return Err(Error::NotCompatible {
                    reason: IncompatibleReason::OffDiagonal,
                    hint: None,
                });
            }
        }
        for j in (0..b.n()).filter(|&j| b.is_frozen(j)) {
            if !p[(r, j)].is_zero() {
                return Err(Error::NotCompatible {
                    reason: IncompatibleReason::FrozenBlockNonzero,
                    hint: None,
                });
            }
        }
        d.push(p[(r, k)].clone());
    }
    Ok(d)
}

pub fn check_compatible(lambda: &IntMatrix, b: &ExchangeData) -> Result<CompatiblePair> {
    if lambda.rows() != b.n() || !lambda.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "Lambda must be {0}x{0}",
            b.n()
        )));
    }
    if !lambda.is_skew_symmetric() {
        return Err(Error::NotSkewSymmetric);
    }
    let d = extract_d(lambda, b)?;
    if d.iter().any(|x| !x.is_positive()) {
        let hint = if d.iter().all(|x| x.is_negative()) {
            Some("B^T(-Lambda) has positive diagonal; try -Lambda".to_string())
        } else {
            None
        };
        return Err(Error::NotCompatible {
            reason: IncompatibleReason::NonpositiveD,
            hint,
        });
    }
    // B̃ᵀΛ = [D 0] with D invertible forces full column rank
    debug_assert_eq!(crate::intlin::rank(b.b()), b.ex().len());
    Ok(CompatiblePair {
        lambda: lambda.clone(),
        exchange: b.clone(),
        d,
    })
}

/// `(E_sᵀΛE_s, E_sB̃F_s)`, re-checked against the same `D`.
pub fn mutate_pair(p: &CompatiblePair, k: usize, s: Sign) -> Result<CompatiblePair> {
    let (e, f) = build_es_fs(&p.exchange, k, s)?;
    let lambda = e.transpose().mul(&p.lambda)?.mul(&e)?;
    let b = p.exchange.with_matrix(e.mul(p.exchange.b())?.mul(&f)?)?;
    let q = check_compatible(&lambda, &b)
        .map_err(|err| Error::Internal(format!("mutated pair not compatible: {err}")))?;
    if q.d != p.d {
        return Err(Error::Internal("mutation changed D".into()));
    }
    Ok(q)
}

/// Terminal `Λ` after mutating along `history` (0-based directions).
pub fn track_strict_lift(p: &CompatiblePair, history: &[usize]) -> Result<IntMatrix> {
    let mut cur = p.clone();
    for &k in history {
        cur = mutate_pair(&cur, k, Sign::Plus)?;
    }
    Ok(cur.lambda)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllCompatiblePair {
    omega: TwistMatrix,
    exchange: ExchangeData,
    d: Vec<u64>,
    ell: u64,
}

impl EllCompatiblePair {
    pub fn omega(&self) -> &TwistMatrix {
        &self.omega
    }

    pub fn exchange(&self) -> &ExchangeData {
        &self.exchange
    }

    /// Residues `d̄_j` in `[1, ℓ)`.
    pub fn d(&self) -> &[u64] {
        &self.d
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }
}

/// Tests `B̄̃ᵀΩ ≡ [D̄ 0] (mod ℓ)`. With `d_lift` the diagonal must match it
/// mod ℓ; otherwise the diagonal residues are taken as found and must be
/// nonzero.
pub fn check_ell_compatible(
    omega: &TwistMatrix,
    b: &ExchangeData,
    d_lift: Option<&[BigInt]>,
) -> Result<EllCompatiblePair> {
    let ell = omega.modulus().ok_or_else(|| {
        Error::InvalidExchangeData("ell-compatibility needs a modular twist".into())
    })?;
    if omega.n() != b.n() {
        return Err(Error::DimensionMismatch("Omega and B differ in size".into()));
    }
    let l = BigInt::from(ell);
    let p = b.b().transpose().mul(omega.matrix())?.reduce_mod(&l);
    let fail = |detail: String| Error::NotEllCompatible { ell, detail };
    let mut d = Vec::with_capacity(b.ex().len());
    for (r, &k) in b.ex().iter().enumerate() {
        for j in 0..b.n() {
            if j != k && !p[(r, j)].is_zero() {
                return Err(fail(format!(
                    "entry ({}, {}) of B^T Omega is nonzero mod {ell}",
                    k + 1,
                    j + 1
                )));
            }
        }
        let dk = p[(r, k)].to_u64().expect("reduced residue");
        if dk == 0 {
            return Err(fail(format!("diagonal entry for {} vanishes mod {ell}", k + 1)));
        }
        if let Some(lift) = d_lift {
            if BigInt::from(dk) != lift[r].mod_floor(&l) {
                return Err(fail(format!(
                    "diagonal entry for {} differs from the lift mod {ell}",
                    k + 1
                )));
            }
        }
        d.push(dk);
    }
    Ok(EllCompatiblePair {
        omega: omega.clone(),
        exchange: b.clone(),
        d,
        ell,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kron() -> ExchangeData {
        ExchangeData::unfrozen(IntMatrix::from_rows(&[[0, -2], [2, 0]])).unwrap()
    }

    #[test]
    fn column_example() {
        let b = ExchangeData::new(2, vec![0], vec![1], vec![], IntMatrix::from_rows(&[[0], [1]]))
            .unwrap();
        let p = check_compatible(&IntMatrix::from_rows(&[[0, -1], [1, 0]]), &b).unwrap();
        assert_eq!(p.d(), &[BigInt::from(1)]);
    }

    #[test]
    fn kronecker_sign_conventions() {
        let printed = IntMatrix::from_rows(&[[0, 1], [-1, 0]]);
        match check_compatible(&printed, &kron()) {
            Err(Error::NotCompatible { reason, hint }) => {
                assert_eq!(reason, IncompatibleReason::NonpositiveD);
                assert!(hint.unwrap().contains("-Lambda"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let p = check_compatible(&printed.neg(), &kron()).unwrap();
        assert_eq!(p.d(), &[BigInt::from(2), BigInt::from(2)]);
        let q = mutate_pair(&p, 0, Sign::Plus).unwrap();
        assert_eq!(q.d(), p.d());
        assert_eq!(mutate_pair(&q, 0, Sign::Minus).unwrap(), p);
    }

    #[test]
    fn off_diagonal_and_frozen_failures() {
        let b = ExchangeData::unfrozen(IntMatrix::from_rows(&[[0, 1], [-1, 0]])).unwrap();
        // BᵀΛ for Λ = 0 is zero: diagonal fails positivity
        assert!(matches!(
            check_compatible(&IntMatrix::zeros(2, 2), &b),
            Err(Error::NotCompatible { reason: IncompatibleReason::NonpositiveD, .. })
        ));
        let b3 = ExchangeData::new(
            3,
            vec![0],
            vec![],
            vec![1, 2],
            IntMatrix::from_rows(&[[0], [1], [0]]),
        )
        .unwrap();
        let lam = IntMatrix::from_rows(&[[0, -1, 0], [1, 0, 1], [0, -1, 0]]);
        assert!(matches!(
            check_compatible(&lam, &b3),
            Err(Error::NotCompatible { reason: IncompatibleReason::FrozenBlockNonzero, .. })
        ));
        let a3 = ExchangeData::unfrozen(IntMatrix::from_rows(&[
            [0, 1, 0],
            [-1, 0, 1],
            [0, -1, 0],
        ]))
        .unwrap();
        let lam = IntMatrix::from_rows(&[[0, 1, 0], [-1, 0, 0], [0, 0, 0]]);
        assert!(matches!(
            check_compatible(&lam, &a3),
            Err(Error::NotCompatible { reason: IncompatibleReason::OffDiagonal, .. })
        ));
    }

    #[test]
    fn ell_compatibility() {
        let p = check_compatible(&IntMatrix::from_rows(&[[0, -1], [1, 0]]), &kron()).unwrap();
        let r = p.reduce(5).unwrap();
        assert_eq!(r.d(), &[2, 2]);
        let zero = TwistMatrix::modular(&IntMatrix::zeros(2, 2), 5).unwrap();
        assert!(matches!(
            check_ell_compatible(&zero, &kron(), None),
            Err(Error::NotEllCompatible { .. })
        ));
    }

    #[test]
    fn strict_lift_tracking() {
        let p = check_compatible(&IntMatrix::from_rows(&[[0, -1], [1, 0]]), &kron()).unwrap();
        assert_eq!(track_strict_lift(&p, &[]).unwrap(), *p.lambda());
        assert_eq!(track_strict_lift(&p, &[1, 1]).unwrap(), *p.lambda());
        let lam1 = track_strict_lift(&p, &[0]).unwrap();
        let (e, _) = build_es_fs(p.exchange(), 0, Sign::Plus).unwrap();
        let omega = TwistMatrix::modular(p.lambda(), 5).unwrap();
        assert_eq!(
            TwistMatrix::modular(&lam1, 5).unwrap(),
            omega.congruence(&e).unwrap()
        );
    }
}
