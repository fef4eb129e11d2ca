//! Acyclic exchange matrices and their explicit presentations by
//! generators `x_k, x'_k` (classical) or `y_k, y'_k` (root of unity).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use petgraph::algo::is_cyclic_directed;
use petgraph::graph::DiGraph;
use serde_json::{json, Value};

use crate::compat::check_ell_compatible;
use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};
use crate::exchange::ExchangeData;
use crate::intlin::IntMatrix;
use crate::scalar::Scalar;
use crate::seeds::{ClassicalSeed, QuantumSeed, Seed};
use crate::tlaurent::{TwistMatrix, TwistedLaurentPoly};

/// No oriented cycle in the graph on `ex` with an edge `i → j` whenever `b_ij > 0`.
pub fn is_acyclic(b: &ExchangeData) -> bool {
    let m = b.ex().len();
    let mut g = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..m).map(|_| g.add_node(())).collect();
    for (r, &i) in b.ex().iter().enumerate() {
        for c in 0..m {
            if b.b()[(i, c)] > BigInt::zero() {
                g.add_edge(nodes[r], nodes[c], ());
            }
        }
    }
    !is_cyclic_directed(&g)
}

fn require_acyclic_unfrozen(b: &ExchangeData) -> Result<()> {
    if b.ex().len() != b.n() {
        return Err(Error::HasFrozen);
    }
    if !is_acyclic(b) {
        return Err(Error::NotAcyclic);
    }
    Ok(())
}

/// `(i, b_ik)` for `b_ik > 0` and `(i, −b_ik)` for `b_ik < 0`.
fn split_column(b: &ExchangeData, k: usize) -> Result<(Vec<(usize, i64)>, Vec<(usize, i64)>)> {
    let col = b.column_i64(k)?;
    let pos = col.iter().enumerate().filter(|(_, &v)| v > 0).map(|(i, &v)| (i, v)).collect();
    let neg = col.iter().enumerate().filter(|(_, &v)| v < 0).map(|(i, &v)| (i, -v)).collect();
    Ok((pos, neg))
}

fn render_product(name: &str, factors: &[(usize, i64)]) -> String {
    if factors.is_empty() {
        return "1".to_string();
    }
    factors
        .iter()
        .map(|&(i, p)| match p {
            1 => format!("{name}{}", i + 1),
            _ => format!("{name}{}^{p}", i + 1),
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// `x'_k x_k = Π_{b_ik>0} x_i^{b_ik} + Π_{b_ik<0} x_i^{−b_ik}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeRelation {
    pub k: usize,
    pub pos: Vec<(usize, i64)>,
    pub neg: Vec<(usize, i64)>,
}

impl ExchangeRelation {
    pub fn lhs(&self) -> String {
        format!("x{0}*x{0}'", self.k + 1)
    }

    pub fn rhs(&self) -> String {
        match (self.pos.is_empty(), self.neg.is_empty()) {
            (true, true) => "2".to_string(),
            (false, true) => format!("{} + 1", render_product("x", &self.pos)),
            (true, false) => format!("{} + 1", render_product("x", &self.neg)),
            (false, false) => format!(
                "{} + {}",
                render_product("x", &self.pos),
                render_product("x", &self.neg)
            ),
        }
    }

    pub fn render(&self) -> String {
        format!("{} = {}", self.lhs(), self.rhs())
    }

    pub fn to_json(&self) -> Value {
        json!([self.lhs(), self.rhs()])
    }
}

fn product_poly<S: Scalar>(
    seed: &Seed<S>,
    factors: &[(usize, i64)],
    order: ProductOrder,
) -> Result<TwistedLaurentPoly<S>> {
    let mut acc = TwistedLaurentPoly::one(seed.ring());
    let mut it: Vec<&(usize, i64)> = factors.iter().collect();
    if order == ProductOrder::Decreasing {
        it.reverse();
    }
    for &&(i, p) in &it {
        acc = acc.mul(&seed.vars()[i].pow(p as u32))?;
    }
    Ok(acc)
}

/// Relations of the acyclic cluster algebra, each checked against the
/// Laurent realization `x'_k = (binomial)/x_k`.
pub fn classical_presentation(b: &ExchangeData) -> Result<Vec<ExchangeRelation>> {
    require_acyclic_unfrozen(b)?;
    let seed = ClassicalSeed::classical(b.clone());
    let mut out = Vec::with_capacity(b.n());
    for k in 0..b.n() {
        let (pos, neg) = split_column(b, k)?;
        let xk = &seed.vars()[k];
        let xk_prime = seed.mutate(k)?.vars()[k].clone();
        let rhs = product_poly(&seed, &pos, ProductOrder::Increasing)?
            .add(&product_poly(&seed, &neg, ProductOrder::Increasing)?)?;
        if xk.mul(&xk_prime)? != rhs {
            return Err(Error::VerificationFailed(format!(
                "classical exchange relation for {}",
                k + 1
            )));
        }
        out.push(ExchangeRelation { k, pos, neg });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExchangeSide {
    /// `y'_k · y_k`
    PrimeFirst,
    /// `y_k · y'_k`
    PrimeLast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductOrder {
    Increasing,
    Decreasing,
}

/// How the generator side of an exchange relation is read: which product
/// of `y_k` and `y'_k`, and in which index order the monomials are multiplied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reading {
    pub side: ExchangeSide,
    pub order: ProductOrder,
}

impl Reading {
    pub const ALL: [Reading; 4] = [
        Reading { side: ExchangeSide::PrimeFirst, order: ProductOrder::Increasing },
        Reading { side: ExchangeSide::PrimeFirst, order: ProductOrder::Decreasing },
        Reading { side: ExchangeSide::PrimeLast, order: ProductOrder::Increasing },
        Reading { side: ExchangeSide::PrimeLast, order: ProductOrder::Decreasing },
    ];

    pub fn describe(&self) -> String {
        let side = match self.side {
            ExchangeSide::PrimeFirst => "y'_k*y_k",
            ExchangeSide::PrimeLast => "y_k*y'_k",
        };
        let order = match self.order {
            ProductOrder::Increasing => "increasing",
            ProductOrder::Decreasing => "decreasing",
        };
        format!("{side}, monomials multiplied in {order} index order")
    }
}

/// `y_j y_k = ε^{λ_jk} y_k y_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutationRelation {
    pub j: usize,
    pub k: usize,
    pub lambda: BigInt,
}

/// `ε^{m/2}` with `ε^{1/2} = ζ`.
fn render_eps(m: &BigInt) -> Option<String> {
    if m.is_zero() {
        return None;
    }
    let two = BigInt::from(2);
    Some(if m.is_even() {
        let h = m / &two;
        if h.is_one() {
            "eps".to_string()
        } else {
            format!("eps^{h}")
        }
    } else {
        format!("eps^({m}/2)")
    })
}

fn with_eps(m: &BigInt, body: &str) -> String {
    match render_eps(m) {
        None => body.to_string(),
        Some(e) if body == "1" => e,
        Some(e) => format!("{e}*{body}"),
    }
}

impl CommutationRelation {
    pub fn lhs(&self) -> String {
        format!("y{}*y{}", self.j + 1, self.k + 1)
    }

    pub fn rhs(&self) -> String {
        with_eps(&(&self.lambda * 2), &format!("y{}*y{}", self.k + 1, self.j + 1))
    }

    pub fn render(&self) -> String {
        format!("{} = {}", self.lhs(), self.rhs())
    }

    pub fn to_json(&self) -> Value {
        json!([self.lhs(), self.rhs()])
    }
}

/// `y'_k y_k = ε^{μ/2} Π y_i^{b_ik} + ε^{ν/2} Π y_i^{−b_ik}`, with the
/// generator side given by the presentation's [`Reading`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumExchangeRelation {
    pub k: usize,
    pub pos: Vec<(usize, i64)>,
    pub neg: Vec<(usize, i64)>,
    pub mu: BigInt,
    pub nu: BigInt,
    pub reading: Reading,
}

impl QuantumExchangeRelation {
    fn ordered(&self, f: &[(usize, i64)]) -> Vec<(usize, i64)> {
        let mut v = f.to_vec();
        if self.reading.order == ProductOrder::Decreasing {
            v.reverse();
        }
        v
    }

    pub fn lhs(&self) -> String {
        match self.reading.side {
            ExchangeSide::PrimeFirst => format!("y{0}'*y{0}", self.k + 1),
            ExchangeSide::PrimeLast => format!("y{0}*y{0}'", self.k + 1),
        }
    }

    pub fn rhs(&self) -> String {
        let a = with_eps(&self.mu, &render_product("y", &self.ordered(&self.pos)));
        let b = with_eps(&self.nu, &render_product("y", &self.ordered(&self.neg)));
        if self.pos.is_empty() && !self.neg.is_empty() {
            format!("{b} + {a}")
        } else {
            format!("{a} + {b}")
        }
    }

    pub fn render(&self) -> String {
        format!("{} = {}", self.lhs(), self.rhs())
    }

    pub fn to_json(&self) -> Value {
        json!([self.lhs(), self.rhs()])
    }

    /// `ε → 1`.
    pub fn specialize(&self) -> ExchangeRelation {
        ExchangeRelation {
            k: self.k,
            pos: self.pos.clone(),
            neg: self.neg.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct QuantumPresentation {
    pub ell: u64,
    pub reading: Reading,
    pub commutations: Vec<CommutationRelation>,
    pub exchanges: Vec<QuantumExchangeRelation>,
}

impl QuantumPresentation {
    pub fn to_json(&self) -> Value {
        json!({
            "ell": self.ell,
            "convention": self.reading.describe(),
            "commutation": self.commutations.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            "exchange": self.exchanges.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// `μ_k` and `ν_k` from the double sums over `φ = Λ` (any integer lift).
pub fn exchange_exponents(b: &ExchangeData, lambda: &IntMatrix, k: usize) -> Result<(BigInt, BigInt)> {
    let col = b.column_i64(k)?;
    let n = col.len();
    let phi = |i: usize, j: usize| lambda[(i, j)].clone();
    let mut mu = BigInt::zero();
    let mut nu = BigInt::zero();
    for i in 0..n {
        for j in i + 1..n {
            let (bi, bj) = (col[i], col[j]);
            if bi > 0 && bj > 0 {
                mu += BigInt::from(bi * bj) * phi(i, j);
            }
            if bi < 0 && bj < 0 {
                nu += BigInt::from(bi * bj) * phi(i, j);
            }
        }
        if col[i] > 0 {
            mu -= BigInt::from(col[i]) * phi(i, k);
        }
        if col[i] < 0 {
            nu += BigInt::from(col[i]) * phi(i, k);
        }
    }
    Ok((mu, nu))
}

fn zeta(seed: &QuantumSeed, m: &BigInt) -> CycloNumber {
    let ell = BigInt::from(seed.ring().ctx().ell());
    let r = m.mod_floor(&ell).to_i64().expect("reduced exponent");
    CycloNumber::root_power(seed.ring().ctx(), r)
}

fn holds_under(
    seed: &QuantumSeed,
    primes: &[TwistedLaurentPoly<CycloNumber>],
    rel: &QuantumExchangeRelation,
    reading: Reading,
) -> Result<bool> {
    let k = rel.k;
    let (yk, ykp) = (&seed.vars()[k], &primes[k]);
    let lhs = match reading.side {
        ExchangeSide::PrimeFirst => ykp.mul(yk)?,
        ExchangeSide::PrimeLast => yk.mul(ykp)?,
    };
    let a = product_poly(seed, &rel.pos, reading.order)?.scale(&zeta(seed, &rel.mu));
    let b = product_poly(seed, &rel.neg, reading.order)?.scale(&zeta(seed, &rel.nu));
    Ok(lhs == a.add(&b)?)
}

/// Presentation of the root-of-unity acyclic algebra. The exponents are
/// computed from the double sums; the reading of the generator side is the
/// first of [`Reading::ALL`] under which every relation holds in the
/// realization `y_k = x^{e_k}`, `y'_k = μ_k(x_k)`.
pub fn quantum_presentation(b: &ExchangeData, lambda: &IntMatrix, ell: u64) -> Result<QuantumPresentation> {
    require_acyclic_unfrozen(b)?;
    if ell % 2 == 0 {
        return Err(Error::HypothesisViolated(format!("ell = {ell} is even")));
    }
    let l = BigInt::from(ell);
    let omega = TwistMatrix::modular(lambda, ell)?;
    let pair = check_ell_compatible(&omega, b, None)?;
    let sym = b.skew_symmetrizer()?;
    let bad = pair
        .d()
        .iter()
        .map(|&d| BigInt::from(d))
        .chain(sym)
        .find(|d| d.gcd(&l) != BigInt::one());
    if let Some(d) = bad {
        return Err(Error::HypothesisViolated(format!(
            "gcd(ell, {d}) != 1 for ell = {ell}"
        )));
    }
    let seed = QuantumSeed::quantum(b.clone(), lambda, ell)?;
    let n = b.n();

    let mut commutations = Vec::new();
    for j in 0..n {
        for k in j + 1..n {
            let rel = CommutationRelation {
                j,
                k,
                lambda: lambda[(j, k)].clone(),
            };
            let (yj, yk) = (&seed.vars()[j], &seed.vars()[k]);
            let rhs = yk.mul(yj)?.scale(&zeta(&seed, &(&rel.lambda * 2)));
            if yj.mul(yk)? != rhs {
                return Err(Error::VerificationFailed(format!(
                    "commutation relation {} fails",
                    rel.render()
                )));
            }
            commutations.push(rel);
        }
    }

    let primes: Vec<_> = (0..n)
        .map(|k| seed.mutate(k).map(|s| s.vars()[k].clone()))
        .collect::<Result<_>>()?;
    let mut exchanges = Vec::with_capacity(n);
    for k in 0..n {
        let (pos, neg) = split_column(b, k)?;
        let (mu, nu) = exchange_exponents(b, lambda, k)?;
        exchanges.push(QuantumExchangeRelation {
            k,
            pos,
            neg,
            mu,
            nu,
            reading: Reading::ALL[0],
        });
    }
    for reading in Reading::ALL {
        let mut ok = true;
        for rel in &exchanges {
            if !holds_under(&seed, &primes, rel, reading)? {
                ok = false;
                break;
            }
        }
        if ok {
            for rel in &mut exchanges {
                rel.reading = reading;
            }
            return Ok(QuantumPresentation {
                ell,
                reading,
                commutations,
                exchanges,
            });
        }
    }
    Err(Error::VerificationFailed(
        "no reading of the exchange relations holds in the realization".into(),
    ))
}
