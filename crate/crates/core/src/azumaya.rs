//! PI degrees of root-of-unity quantum tori and the frozen-stratum data
//! bounding the fully Azumaya locus.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::intlin::lattice_index_mod;
use crate::scalar::Scalar;
use crate::seeds::Seed;
use crate::tlaurent::{unit, TwistMatrix};

fn modulus_of(omega: &TwistMatrix) -> Result<u64> {
    omega
        .modulus()
        .ok_or_else(|| Error::HypothesisViolated("PI degree needs a form reduced mod ell".into()))
}

fn sqrt_index(index: BigInt) -> Result<BigInt> {
    let r = index.sqrt();
    if &r * &r != index {
        return Err(Error::NotPerfectSquare(index.to_string()));
    }
    Ok(r)
}

/// `√[ℤᴺ : Ker(Ω̄)]`.
pub fn pi_degree(omega: &TwistMatrix) -> Result<BigInt> {
    let ell = modulus_of(omega)?;
    let ell = ell.to_i64().ok_or(Error::InvalidModulus(i64::MAX))?;
    sqrt_index(lattice_index_mod(omega.matrix(), ell)?)
}

/// Indices `i ∈ ninv` with `Ω̄e_i ≠ 0`.
pub fn noncentral_frozen(omega: &TwistMatrix, ninv: &[usize]) -> Vec<usize> {
    let n = omega.n();
    ninv.iter()
        .copied()
        .filter(|&i| i < n && (0..n).any(|j| omega.value(&unit(n, j), &unit(n, i)) != 0))
        .collect()
}

/// PI degree of the form with row and column `j` removed.
pub fn frozen_stratum_pi_degree(omega: &TwistMatrix, j: usize) -> Result<BigInt> {
    let ell = modulus_of(omega)?;
    if j >= omega.n() {
        return Err(Error::DimensionMismatch(format!(
            "index {} out of range for rank {}",
            j + 1,
            omega.n()
        )));
    }
    let sub = TwistMatrix::modular(&omega.matrix().delete_row_col(j, j), ell)?;
    pi_degree(&sub)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StratumRelation {
    Less,
    Equal,
}

impl StratumRelation {
    pub fn symbol(self) -> &'static str {
        match self {
            StratumRelation::Less => "<",
            StratumRelation::Equal => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumEntry {
    /// 0-based frozen index.
    pub j: usize,
    pub degree: BigInt,
    pub relation: StratumRelation,
    pub central: bool,
}

impl StratumEntry {
    pub fn verdict(&self) -> String {
        match (self.central, self.relation) {
            (true, _) => "does not cut the Azumaya locus".to_string(),
            (false, StratumRelation::Less) => "excluded from A".to_string(),
            (false, StratumRelation::Equal) => {
                "non-central, but the stratum keeps the full PI degree".to_string()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AzumayaReport {
    pub pi_degree: BigInt,
    pub ninv: Vec<usize>,
    pub nc: Vec<usize>,
    pub strata: Vec<StratumEntry>,
    pub lower_bound: String,
    pub upper_bound: String,
}

fn big_json(v: &BigInt) -> Value {
    match v.to_u64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

fn locus_names(idx: &[usize]) -> String {
    idx.iter()
        .map(|i| format!("V(x{})", i + 1))
        .collect::<Vec<_>>()
        .join(" u ")
}

impl AzumayaReport {
    /// JSON with 1-based indices.
    pub fn to_json(&self) -> Value {
        let strata: Vec<Value> = self
            .strata
            .iter()
            .map(|s| {
                let mut obj = json!({
                    "j": s.j + 1,
                    "degree": big_json(&s.degree),
                    "relation": s.relation.symbol(),
                    "central": s.central,
                    "verdict": s.verdict(),
                });
                if s.relation == StratumRelation::Less {
                    obj["degree_drop"] = big_json(&(&self.pi_degree - &s.degree));
                }
                obj
            })
            .collect();
        json!({
            "pi_degree": big_json(&self.pi_degree),
            "nc": self.nc.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "strata": strata,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
        })
    }
}

/// Bounds for the fully Azumaya locus `A` from the form `omega` and the
/// non-inverted frozen indices.
pub fn azumaya_bound_report_for(omega: &TwistMatrix, ninv: &[usize]) -> Result<AzumayaReport> {
    let pi = pi_degree(omega)?;
    let nc = noncentral_frozen(omega, ninv);
    let mut strata = Vec::with_capacity(ninv.len());
    for &j in ninv {
        let degree = frozen_stratum_pi_degree(omega, j)?;
        let relation = if degree < pi {
            StratumRelation::Less
        } else if degree == pi {
            StratumRelation::Equal
        } else {
            return Err(Error::Internal(format!(
                "stratum degree {degree} exceeds PI degree {pi}"
            )));
        };
        strata.push(StratumEntry {
            j,
            degree,
            relation,
            central: !nc.contains(&j),
        });
    }
    let lower_bound = if ninv.is_empty() {
        "Y(B)^reg is contained in A".to_string()
    } else {
        format!("Y(B)^reg minus ({}) is contained in A", locus_names(ninv))
    };
    let upper_bound = if nc.is_empty() {
        "A is contained in Y(B)".to_string()
    } else {
        format!("A is contained in Y(B) minus ({})", locus_names(&nc))
    };
    Ok(AzumayaReport {
        pi_degree: pi,
        ninv: ninv.to_vec(),
        nc,
        strata,
        lower_bound,
        upper_bound,
    })
}

/// Report for a root-of-unity seed, using its current form.
pub fn azumaya_bound_report<S: Scalar>(seed: &Seed<S>) -> Result<AzumayaReport> {
    azumaya_bound_report_for(seed.form(), seed.exchange().ninv())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::IntMatrix;

    fn modular(rows: &[[i64; 3]], ell: u64) -> TwistMatrix {
        TwistMatrix::modular(&IntMatrix::from_rows(rows), ell).unwrap()
    }

    #[test]
    fn kronecker_degree_is_ell() {
        for ell in [3u64, 5, 7, 9] {
            for sign in [1, -1] {
                let m = IntMatrix::from_rows(&[[0, sign], [-sign, 0]]);
                let om = TwistMatrix::modular(&m, ell).unwrap();
                assert_eq!(pi_degree(&om).unwrap(), BigInt::from(ell));
            }
        }
        let zero = TwistMatrix::modular(&IntMatrix::zeros(3, 3), 5).unwrap();
        assert_eq!(pi_degree(&zero).unwrap(), BigInt::from(1));
        let blocks = IntMatrix::from_rows(&[
            [0, 1, 0, 0],
            [-1, 0, 0, 0],
            [0, 0, 0, 1],
            [0, 0, -1, 0],
        ]);
        let om = TwistMatrix::modular(&blocks, 3).unwrap();
        assert_eq!(pi_degree(&om).unwrap(), BigInt::from(9));
        assert!(pi_degree(&TwistMatrix::zero(2)).is_err());
    }

    #[test]
    fn noncentral_sets() {
        let om = modular(&[[0, 0, -1], [0, 0, 0], [1, 0, 0]], 5);
        assert_eq!(noncentral_frozen(&om, &[2]), vec![2]);
        assert_eq!(noncentral_frozen(&om, &[1]), Vec::<usize>::new());
        assert!(noncentral_frozen(&om, &[]).is_empty());
    }

    #[test]
    fn dichotomy_fixture() {
        // index 2 central, index 3 not
        let om = modular(&[[0, 0, 1], [0, 0, 0], [-1, 0, 0]], 5);
        let r = azumaya_bound_report_for(&om, &[1, 2]).unwrap();
        assert_eq!(r.pi_degree, BigInt::from(5));
        assert_eq!(r.nc, vec![2]);
        assert_eq!(r.strata[0].relation, StratumRelation::Equal);
        assert_eq!(r.strata[0].verdict(), "does not cut the Azumaya locus");
        assert_eq!(r.strata[1].relation, StratumRelation::Less);
        assert_eq!(r.strata[1].verdict(), "excluded from A");
        let j = r.to_json();
        assert_eq!(j["strata"][1]["degree_drop"], json!(4));
        assert_eq!(j["nc"], json!([3]));
        assert!(r.upper_bound.contains("V(x3)"));
    }

    #[test]
    fn noncentral_without_drop() {
        let om = modular(&[[0, -1, 1], [1, 0, 0], [-1, 0, 0]], 3);
        let r = azumaya_bound_report_for(&om, &[2]).unwrap();
        assert_eq!(r.nc, vec![2]);
        assert_eq!(r.strata[0].relation, StratumRelation::Equal);
        assert!(!r.strata[0].central);
    }
}
