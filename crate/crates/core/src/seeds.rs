//! Seeds, seed mutation and exchange-graph exploration.
//!
//! Cluster variables are always stored as elements of the initial (twisted)
//! Laurent ring. A mutation forms the two exchange monomials from the
//! current variables and divides on the right by the old variable.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_rational::BigRational;
use serde::Serialize;

use crate::compat::check_ell_compatible;
use crate::cyclo::{CycloContext, CycloNumber};
use crate::error::{Error, Result};
use crate::exchange::{build_es_fs, ExchangeData, Sign};
use crate::intlin::IntMatrix;
use crate::qparam::QLaurent;
use crate::scalar::Scalar;
use crate::tlaurent::{unit, LaurentRing, TwistMatrix, TwistedLaurentPoly};

#[derive(Clone, Debug)]
pub struct Seed<S: Scalar> {
    exchange: ExchangeData,
    form: TwistMatrix,
    ring: Arc<LaurentRing<S>>,
    vars: Vec<TwistedLaurentPoly<S>>,
    history: Vec<usize>,
}

pub type ClassicalSeed = Seed<BigRational>;
pub type QuantumSeed = Seed<CycloNumber>;
pub type GenericSeed = Seed<QLaurent<BigRational>>;

impl<S: Scalar> PartialEq for Seed<S> {
    /// Seeds are equal when matrix, form and variables agree; the path that
    /// produced them is irrelevant.
    fn eq(&self, other: &Self) -> bool {
        self.exchange == other.exchange && self.form == other.form && self.vars == other.vars
    }
}

impl<S: Scalar> Seed<S> {
    /// The initial seed `vars[k] = x_k` in `ring`, whose twist is the form.
    pub fn initial(exchange: ExchangeData, ring: Arc<LaurentRing<S>>) -> Result<Self> {
        if ring.n() != exchange.n() {
            return Err(Error::DimensionMismatch(format!(
                "ring of rank {} for {} indices",
                ring.n(),
                exchange.n()
            )));
        }
        let vars = (0..exchange.n())
            .map(|i| TwistedLaurentPoly::var(&ring, i))
            .collect();
        Ok(Seed {
            form: ring.twist().clone(),
            exchange,
            ring,
            vars,
            history: Vec::new(),
        })
    }

    pub fn exchange(&self) -> &ExchangeData {
        &self.exchange
    }

    pub fn form(&self) -> &TwistMatrix {
        &self.form
    }

    pub fn ring(&self) -> &Arc<LaurentRing<S>> {
        &self.ring
    }

    pub fn vars(&self) -> &[TwistedLaurentPoly<S>] {
        &self.vars
    }

    /// Mutation directions applied since the initial seed (0-based).
    pub fn history(&self) -> &[usize] {
        &self.history
    }

    fn zeta_power(&self, k: i64) -> S {
        S::root_power(self.ring.ctx(), k)
    }

    /// `M(p)` for `p ≥ 0` in this seed's frame:
    /// `ζ^{−Σ_{i<j} p_i p_j Ω_ij} · Π_i vars[i]^{p_i}` in increasing index order.
    pub fn frame_monomial(&self, p: &[i64]) -> Result<TwistedLaurentPoly<S>> {
        if p.len() != self.vars.len() || p.iter().any(|&v| v < 0) {
            return Err(Error::DimensionMismatch(
                "frame monomials need a nonnegative exponent of full length".into(),
            ));
        }
        let mut acc = TwistedLaurentPoly::one(&self.ring);
        let mut shift = 0i64;
        for i in 0..p.len() {
            if p[i] == 0 {
                continue;
            }
            acc = acc.mul(&self.vars[i].pow(p[i] as u32))?;
            for j in i + 1..p.len() {
                shift += p[i] * p[j] * self.form.entry(i, j);
            }
        }
        Ok(acc.scale(&self.zeta_power(-shift)))
    }

    /// Right-hand side `ζ^{Ω(P,e_k)} M(P) + ζ^{Ω(Q,e_k)} M(Q)` of the exchange
    /// relation `x'_k · x_k = …`, with `P = [bᵏ]₊`, `Q = [−bᵏ]₊`.
    pub fn exchange_binomial(&self, k: usize) -> Result<TwistedLaurentPoly<S>> {
        let col = self.exchange.column_i64(k)?;
        let p: Vec<i64> = col.iter().map(|&v| v.max(0)).collect();
        let q: Vec<i64> = col.iter().map(|&v| (-v).max(0)).collect();
        let ek = unit(self.vars.len(), k);
        let first = self
            .frame_monomial(&p)?
            .scale(&self.zeta_power(self.form.value(&p, &ek)));
        let second = self
            .frame_monomial(&q)?
            .scale(&self.zeta_power(self.form.value(&q, &ek)));
        first.add(&second)
    }

    pub fn mutate(&self, k: usize) -> Result<Self> {
        let y = self.exchange_binomial(k)?;
        let x = y.exact_divide_right(&self.vars[k])?;
        let (e, _) = build_es_fs(&self.exchange, k, Sign::Plus)?;
        let mut vars = self.vars.clone();
        vars[k] = x;
        let mut history = self.history.clone();
        history.push(k);
        Ok(Seed {
            exchange: self.exchange.mutate(k)?,
            form: self.form.congruence(&e)?,
            ring: self.ring.clone(),
            vars,
            history,
        })
    }

    pub fn mutate_sequence(&self, ks: &[usize]) -> Result<Self> {
        let mut cur = self.clone();
        for &k in ks {
            cur = cur.mutate(k)?;
        }
        Ok(cur)
    }

    /// Canonical key used to identify seeds during exploration.
    pub fn key(&self) -> String {
        let vars: Vec<String> = self.vars.iter().map(|v| v.render()).collect();
        format!(
            "{:?}|{:?}|{}",
            self.exchange.b(),
            self.form.matrix(),
            vars.join("|")
        )
    }
}

impl ClassicalSeed {
    pub fn classical(exchange: ExchangeData) -> Self {
        let ring = LaurentRing::classical(exchange.n());
        Seed::initial(exchange, ring).expect("rank matches")
    }
}

impl QuantumSeed {
    /// Root-of-unity seed with form `Λ mod ℓ`; the pair must be ℓ-compatible.
    pub fn quantum(exchange: ExchangeData, lambda: &IntMatrix, ell: u64) -> Result<Self> {
        let omega = TwistMatrix::modular(lambda, ell)?;
        check_ell_compatible(&omega, &exchange, None)?;
        let ring = LaurentRing::new(omega, CycloContext::new(ell)?)?;
        Seed::initial(exchange, ring)
    }
}

impl GenericSeed {
    /// Seed over `ℚ[u^{±1}]` with integral twist `Λ` (u = q^{1/2}).
    pub fn generic(exchange: ExchangeData, lambda: &IntMatrix) -> Result<Self> {
        let ring = LaurentRing::new(TwistMatrix::integral(lambda.clone())?, ())?;
        Seed::initial(exchange, ring)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphNode {
    pub id: usize,
    pub depth: usize,
    /// 0-based mutation directions from the root.
    pub history: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct GraphEdge {
    pub a: usize,
    pub b: usize,
    /// 0-based mutation direction.
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExchangeGraph {
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
    pub truncated: bool,
}

pub const DEFAULT_EXPLORE_DEPTH: usize = 6;

fn history_label(h: &[usize]) -> String {
    if h.is_empty() {
        "initial".to_string()
    } else {
        h.iter()
            .map(|k| (k + 1).to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl ExchangeGraph {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph exchange {\n");
        for n in &self.nodes {
            out.push_str(&format!(
                "  n{} [label=\"{}\"];\n",
                n.id,
                history_label(&n.history)
            ));
        }
        for e in &self.edges {
            out.push_str(&format!("  n{} -- n{} [label=\"{}\"];\n", e.a, e.b, e.k + 1));
        }
        out.push_str("}\n");
        out
    }

    /// JSON with 1-based mutation indices.
    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<_> = self
            .nodes
            .iter()
            .map(|n| {
                serde_json::json!({
                    "id": n.id,
                    "depth": n.depth,
                    "history": n.history.iter().map(|k| k + 1).collect::<Vec<_>>(),
                })
            })
            .collect();
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|e| serde_json::json!([e.a, e.b, e.k + 1]))
            .collect();
        serde_json::json!({"nodes": nodes, "edges": edges, "truncated": self.truncated})
    }
}

/// Breadth-first exploration up to `depth` mutations, deduplicating seeds by
/// exact equality. Returns the graph and the seed at each node.
pub fn explore<S: Scalar>(seed: &Seed<S>, depth: usize) -> Result<(ExchangeGraph, Vec<Seed<S>>)> {
    let mut seeds = vec![seed.clone()];
    let mut nodes = vec![GraphNode {
        id: 0,
        depth: 0,
        history: Vec::new(),
    }];
    let mut index: HashMap<String, usize> = HashMap::from([(seed.key(), 0)]);
    let mut edges = BTreeSet::new();
    let mut truncated = false;
    let mut layer = vec![0usize];
    for d in 0..=depth {
        let mut next = Vec::new();
        for &id in &layer {
            for &k in seed.exchange().ex() {
                let child = seeds[id].mutate(k)?;
                let key = child.key();
                let target = match index.get(&key) {
                    Some(&t) => t,
                    None if d < depth => {
                        let t = seeds.len();
                        index.insert(key, t);
                        let mut history = nodes[id].history.clone();
                        history.push(k);
                        nodes.push(GraphNode {
                            id: t,
                            depth: d + 1,
                            history,
                        });
                        seeds.push(child);
                        next.push(t);
                        t
                    }
                    None => {
                        truncated = true;
                        continue;
                    }
                };
                edges.insert(GraphEdge {
                    a: id.min(target),
                    b: id.max(target),
                    k,
                });
            }
        }
        layer = next;
    }
    Ok((
        ExchangeGraph {
            nodes,
            edges: edges.into_iter().collect(),
            truncated,
        },
        seeds,
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MixedLaurentCheck {
    pub index: usize,
    pub ok: bool,
    /// Exponent vectors with a negative entry at a non-inverted frozen index.
    pub witnesses: Vec<Vec<i64>>,
}

/// Checks that every variable has nonnegative exponents at all `ninv`
/// indices, i.e. lies in the mixed polynomial/Laurent ring.
pub fn check_mixed_laurent<S: Scalar>(seed: &Seed<S>) -> Vec<MixedLaurentCheck> {
    let ninv = seed.exchange().ninv();
    seed.vars()
        .iter()
        .enumerate()
        .map(|(index, v)| {
            let witnesses: Vec<Vec<i64>> = v
                .terms()
                .filter(|(f, _)| ninv.iter().any(|&i| f[i] < 0))
                .map(|(f, _)| f.to_vec())
                .collect();
            MixedLaurentCheck {
                index,
                ok: witnesses.is_empty(),
                witnesses,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::tlaurent::ClassicalPoly;

    fn kron() -> ExchangeData {
        ExchangeData::unfrozen(IntMatrix::from_rows(&[[0, -2], [2, 0]])).unwrap()
    }

    #[test]
    fn kronecker_classical_first_mutations() {
        let s = ClassicalSeed::classical(kron());
        let ring = s.ring().clone();
        let s1 = s.mutate(0).unwrap();
        let expected = ClassicalPoly::from_terms(
            &ring,
            [(vec![-1, 2], rat(1)), (vec![-1, 0], rat(1))],
        )
        .unwrap();
        assert_eq!(s1.vars()[0], expected);
        let s2 = s.mutate(1).unwrap();
        let expected = ClassicalPoly::from_terms(
            &ring,
            [(vec![2, -1], rat(1)), (vec![0, -1], rat(1))],
        )
        .unwrap();
        assert_eq!(s2.vars()[1], expected);
        assert_eq!(s1.mutate(0).unwrap(), s);
    }

    #[test]
    fn quantum_mutation_is_an_involution() {
        let lam = IntMatrix::from_rows(&[[0, -1], [1, 0]]);
        let s = QuantumSeed::quantum(kron(), &lam, 5).unwrap();
        let t = s.mutate_sequence(&[0, 1, 0]).unwrap();
        assert_eq!(t.mutate(0).unwrap().mutate_sequence(&[1, 0]).unwrap(), s);
    }

    #[test]
    fn explore_small_cases() {
        let empty = ExchangeData::new(2, vec![], vec![0, 1], vec![], IntMatrix::zeros(2, 0)).unwrap();
        let (g, _) = explore(&ClassicalSeed::classical(empty), 4).unwrap();
        assert_eq!((g.nodes.len(), g.edges.len(), g.truncated), (1, 0, false));

        let (g, _) = explore(&ClassicalSeed::classical(kron()), 4).unwrap();
        assert_eq!(g.nodes.len(), 9);
        assert_eq!(g.edges.len(), 8);
        assert!(g.truncated);

        let (g, _) = explore(&ClassicalSeed::classical(kron()), 0).unwrap();
        assert_eq!(g.nodes.len(), 1);
        assert!(g.truncated);
    }

    #[test]
    fn a2_closes_as_ten_cycle() {
        let a2 = ExchangeData::unfrozen(IntMatrix::from_rows(&[[0, 1], [-1, 0]])).unwrap();
        let (g, seeds) = explore(&ClassicalSeed::classical(a2), 12).unwrap();
        assert_eq!(g.nodes.len(), 10);
        assert_eq!(g.edges.len(), 10);
        assert!(!g.truncated);
        let mut clusters = BTreeSet::new();
        let mut variables = BTreeSet::new();
        for s in &seeds {
            let mut c: Vec<String> = s.vars().iter().map(|v| v.render()).collect();
            variables.extend(c.iter().cloned());
            c.sort();
            clusters.insert(c);
        }
        assert_eq!(clusters.len(), 5);
        assert_eq!(variables.len(), 5);
    }

    #[test]
    fn mixed_laurent_with_non_inverted_frozen() {
        let b = ExchangeData::new(
            3,
            vec![0],
            vec![2],
            vec![1],
            IntMatrix::from_rows(&[[0], [1], [-1]]),
        )
        .unwrap();
        let s = ClassicalSeed::classical(b).mutate(0).unwrap();
        assert!(check_mixed_laurent(&s).iter().all(|c| c.ok));
        // x1' = (x2 + x3) / x1
        let ring = s.ring().clone();
        let expected = ClassicalPoly::from_terms(
            &ring,
            [(vec![-1, 1, 0], rat(1)), (vec![-1, 0, 1], rat(1))],
        )
        .unwrap();
        assert_eq!(s.vars()[0], expected);
    }

    #[test]
    fn dot_output() {
        let (g, _) = explore(&ClassicalSeed::classical(kron()), 1).unwrap();
        let dot = g.to_dot();
        assert!(dot.contains("n0 [label=\"initial\"]"));
        assert!(dot.contains("n0 -- n1 [label=\"1\"]"));
    }
}
