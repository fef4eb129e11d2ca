//! Extended exchange matrices and matrix mutation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::intlin::IntMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// `B̃` together with the partition of `[0, N)` into mutable, inverted
/// frozen and non-inverted frozen indices. Indices are 0-based; column `c`
/// of `B̃` belongs to the mutable index `ex[c]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExchangeData {
    n: usize,
    ex: Vec<usize>,
    inv: Vec<usize>,
    ninv: Vec<usize>,
    b: IntMatrix,
}

impl ExchangeData {
    pub fn new(
        n: usize,
        mut ex: Vec<usize>,
        mut inv: Vec<usize>,
        mut ninv: Vec<usize>,
        b: IntMatrix,
    ) -> Result<Self> {
        ex.sort_unstable();
        inv.sort_unstable();
        ninv.sort_unstable();
        let mut seen = vec![false; n];
        for &i in ex.iter().chain(&inv).chain(&ninv) {
            if i >= n {
                return Err(Error::InvalidExchangeData(format!("index {} out of range", i + 1)));
            }
            if seen[i] {
                return Err(Error::InvalidExchangeData(format!("index {} listed twice", i + 1)));
            }
            seen[i] = true;
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidExchangeData(format!(
                "index {} belongs to no part",
                i + 1
            )));
        }
        if b.rows() != n || b.cols() != ex.len() {
            return Err(Error::InvalidExchangeData(format!(
                "B has shape {}x{}, expected {}x{}",
                b.rows(),
                b.cols(),
                n,
                ex.len()
            )));
        }
        let data = ExchangeData { n, ex, inv, ninv, b };
        data.skew_symmetrizer()?;
        Ok(data)
    }

    /// All indices mutable, square `B`.
    pub fn unfrozen(b: IntMatrix) -> Result<Self> {
        let n = b.rows();
        Self::new(n, (0..n).collect(), Vec::new(), Vec::new(), b)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ex(&self) -> &[usize] {
        &self.ex
    }

    pub fn inv(&self) -> &[usize] {
        &self.inv
    }

    pub fn ninv(&self) -> &[usize] {
        &self.ninv
    }

    pub fn b(&self) -> &IntMatrix {
        &self.b
    }

    pub fn is_mutable(&self, k: usize) -> bool {
        self.ex.binary_search(&k).is_ok()
    }

    pub fn is_frozen(&self, k: usize) -> bool {
        !self.is_mutable(k)
    }

    /// Column of `B̃` holding direction `k`.
    pub fn col_of(&self, k: usize) -> Result<usize> {
        self.ex.binary_search(&k).map_err(|_| Error::NotMutable(k + 1))
    }

    /// `b_ik` for mutable `k`.
    pub fn entry(&self, i: usize, k: usize) -> Result<&BigInt> {
        Ok(&self.b[(i, self.col_of(k)?)])
    }

    /// Column `bᵏ` as machine integers.
    pub fn column_i64(&self, k: usize) -> Result<Vec<i64>> {
        let c = self.col_of(k)?;
        Ok((0..self.n).map(|i| self.b.get_i64(i, c)).collect())
    }

    /// The `ex × ex` principal part.
    pub fn principal(&self) -> IntMatrix {
        let m = self.ex.len();
        let mut p = IntMatrix::zeros(m, m);
        for (r, &i) in self.ex.iter().enumerate() {
            for c in 0..m {
                p[(r, c)] = self.b[(i, c)].clone();
            }
        }
        p
    }

    /// Smallest positive integers `d` (indexed like `ex`) with `d_i b_ij = −d_j b_ji`.
    pub fn skew_symmetrizer(&self) -> Result<Vec<BigInt>> {
        let p = self.principal();
        let m = p.rows();
        for i in 0..m {
            if !p[(i, i)].is_zero() {
                return Err(Error::InvalidExchangeData(format!(
                    "nonzero diagonal entry at {}",
                    self.ex[i] + 1
                )));
            }
            for j in i + 1..m {
                let (a, b) = (&p[(i, j)], &p[(j, i)]);
                if a.is_zero() != b.is_zero() || (!a.is_zero() && a.signum() == b.signum()) {
                    return Err(Error::InvalidExchangeData(
                        "principal part is not sign-skew-symmetric".into(),
                    ));
                }
            }
        }
        let mut d: Vec<Option<BigRational>> = vec![None; m];
        for start in 0..m {
            if d[start].is_some() {
                continue;
            }
            d[start] = Some(BigRational::one());
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                let di = d[i].clone().expect("assigned");
                for j in 0..m {
                    if p[(i, j)].is_zero() {
                        continue;
                    }
                    // d_j = -d_i b_ij / b_ji
                    let want = -&di * BigRational::from_integer(p[(i, j)].clone())
                        / BigRational::from_integer(p[(j, i)].clone());
                    match &d[j] {
                        None => {
                            d[j] = Some(want);
                            stack.push(j);
                        }
                        Some(existing) if *existing != want => {
                            return Err(Error::InvalidExchangeData(
                                "principal part is not skew-symmetrizable".into(),
                            ));
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        let d: Vec<BigRational> = d.into_iter().map(|x| x.expect("assigned")).collect();
        let lcm = d.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let scaled: Vec<BigInt> = d.iter().map(|x| (x * &lcm).to_integer()).collect();
        let g = scaled.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        Ok(if g.is_zero() {
            scaled
        } else {
            scaled.into_iter().map(|x| x / &g).collect()
        })
    }

    /// Same partition, new matrix.
    pub fn with_matrix(&self, b: IntMatrix) -> Result<Self> {
        Self::new(self.n, self.ex.clone(), self.inv.clone(), self.ninv.clone(), b)
    }

    /// `μ_k(B̃)` as exchange data.
    pub fn mutate(&self, k: usize) -> Result<Self> {
        let b = mutate_matrix(self, k)?;
        Ok(ExchangeData {
            n: self.n,
            ex: self.ex.clone(),
            inv: self.inv.clone(),
            ninv: self.ninv.clone(),
            b,
        })
    }
}

/// Direct entrywise mutation of `B̃` in direction `k`.
fn mutate_entries(data: &ExchangeData, k: usize) -> Result<IntMatrix> {
    let kc = data.col_of(k)?;
    let b = &data.b;
    let mut out = b.clone();
    let two = BigInt::from(2);
    for i in 0..data.n {
        for (jc, &j) in data.ex.iter().enumerate() {
            out[(i, jc)] = if i == k || j == k {
                -&b[(i, jc)]
            } else {
                let (bik, bkj) = (&b[(i, kc)], &b[(k, jc)]);
                &b[(i, jc)] + (bik.abs() * bkj + bik * bkj.abs()) / &two
            };
        }
    }
    Ok(out)
}

/// `μ_k(B̃)`, cross-checked against `E_s B̃ F_s` for both signs.
pub fn mutate_matrix(data: &ExchangeData, k: usize) -> Result<IntMatrix> {
    let direct = mutate_entries(data, k)?;
    for s in [Sign::Plus, Sign::Minus] {
        let (e, f) = build_es_fs(data, k, s)?;
        if e.mul(&data.b)?.mul(&f)? != direct {
            return Err(Error::Internal(format!(
                "E_s B F_s disagrees with mutation formula (k = {})",
                k + 1
            )));
        }
    }
    Ok(direct)
}

/// The matrices `E_s` (`N × N`) and `F_s` (`ex × ex`).
pub fn build_es_fs(data: &ExchangeData, k: usize, s: Sign) -> Result<(IntMatrix, IntMatrix)> {
    let kc = data.col_of(k)?;
    let sv = BigInt::from(s.value());
    let n = data.n;
    let m = data.ex.len();
    let mut e = IntMatrix::identity(n);
    for i in 0..n {
        e[(i, k)] = if i == k {
            BigInt::from(-1)
        } else {
            (-&sv * &data.b[(i, kc)]).max(BigInt::zero())
        };
    }
    let mut f = IntMatrix::identity(m);
    for jc in 0..m {
        f[(kc, jc)] = if jc == kc {
            BigInt::from(-1)
        } else {
            (&sv * &data.b[(k, jc)]).max(BigInt::zero())
        };
    }
    Ok((e, f))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kron() -> ExchangeData {
        ExchangeData::unfrozen(IntMatrix::from_rows(&[[0, -2], [2, 0]])).unwrap()
    }

    #[test]
    fn kronecker_mutation() {
        let b = kron();
        assert_eq!(
            mutate_matrix(&b, 0).unwrap(),
            IntMatrix::from_rows(&[[0, 2], [-2, 0]])
        );
        let (e, f) = build_es_fs(&b, 0, Sign::Plus).unwrap();
        assert_eq!(e, IntMatrix::from_rows(&[[-1, 0], [0, 1]]));
        assert_eq!(f, IntMatrix::from_rows(&[[-1, 0], [0, 1]]));
        let (e, _) = build_es_fs(&b, 0, Sign::Minus).unwrap();
        assert_eq!(e, IntMatrix::from_rows(&[[-1, 0], [2, 1]]));
    }

    #[test]
    fn zero_column_only_flips_sign() {
        let b = ExchangeData::new(
            3,
            vec![0, 1],
            vec![2],
            vec![],
            IntMatrix::from_rows(&[[0, 0], [0, 0], [0, 3]]),
        )
        .unwrap();
        let m = mutate_matrix(&b, 0).unwrap();
        assert_eq!(m, IntMatrix::from_rows(&[[0, 0], [0, 0], [0, 3]]));
        let (e, f) = build_es_fs(&b, 0, Sign::Plus).unwrap();
        let mut expected = IntMatrix::identity(3);
        expected[(0, 0)] = BigInt::from(-1);
        assert_eq!(e, expected);
        assert_eq!(f, IntMatrix::from_rows(&[[-1, 0], [0, 1]]));
    }

    #[test]
    fn rejects_bad_partitions_and_directions() {
        let b = IntMatrix::from_rows(&[[0], [1]]);
        assert!(ExchangeData::new(2, vec![0], vec![], vec![], b.clone()).is_err());
        assert!(ExchangeData::new(2, vec![0], vec![0], vec![1], b.clone()).is_err());
        let ok = ExchangeData::new(2, vec![0], vec![1], vec![], b).unwrap();
        assert_eq!(mutate_matrix(&ok, 1), Err(Error::NotMutable(2)));
        let not_skew = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
        assert!(ExchangeData::unfrozen(not_skew).is_err());
    }

    #[test]
    fn symmetrizer_of_b2() {
        let b = ExchangeData::unfrozen(IntMatrix::from_rows(&[[0, 1], [-2, 0]])).unwrap();
        assert_eq!(b.skew_symmetrizer().unwrap(), vec![BigInt::from(2), BigInt::from(1)]);
        assert_eq!(
            kron().skew_symmetrizer().unwrap(),
            vec![BigInt::from(1), BigInt::from(1)]
        );
    }
}
