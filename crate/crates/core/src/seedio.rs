//! JSON seed files.
//!
//! A file describes the current seed by `n`, `ex`, `inv`, `ninv`, `B` and
//! optionally `Lambda` and `ell`; all indices are 1-based. Files written
//! after mutation also carry the initial matrices, the mutation history and
//! the rendered cluster variables, so that reading them back replays the
//! same seed.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exchange::{build_es_fs, ExchangeData, Sign};
use crate::intlin::IntMatrix;
use crate::scalar::Scalar;
use crate::seeds::{ClassicalSeed, QuantumSeed, Seed};
use crate::tlaurent::TwistMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialFrame {
    #[serde(rename = "B")]
    pub b: Vec<Vec<i64>>,
    #[serde(rename = "Lambda", default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<Vec<i64>>>,
}

/// Raw file contents, before validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedFile {
    pub n: usize,
    pub ex: Vec<usize>,
    #[serde(default)]
    pub inv: Vec<usize>,
    #[serde(default)]
    pub ninv: Vec<usize>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<i64>>,
    #[serde(rename = "Lambda", default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialFrame>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub history: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vars: Vec<String>,
}

/// A validated seed description: initial data plus a mutation path.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedDoc {
    initial: ExchangeData,
    initial_lambda: Option<IntMatrix>,
    ell: Option<u64>,
    /// 0-based mutation indices.
    history: Vec<usize>,
}

fn zero_based(v: &[usize], what: &str) -> Result<Vec<usize>> {
    v.iter()
        .map(|&i| {
            i.checked_sub(1)
                .ok_or_else(|| Error::Parse(format!("{what}: indices are 1-based, got 0")))
        })
        .collect()
}

fn matrix_from(rows: &[Vec<i64>], n: usize, cols: usize, what: &str) -> Result<IntMatrix> {
    if rows.len() != n {
        return Err(Error::Parse(format!(
            "{what} has {} rows, expected {n}",
            rows.len()
        )));
    }
    let big: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    IntMatrix::try_from_rows(&big, cols).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn rows_of(m: &IntMatrix, what: &str) -> Result<Vec<Vec<i64>>> {
    m.to_rows()
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    i64::try_from(x).map_err(|_| {
                        Error::Internal(format!("{what} entry {x} does not fit in 64 bits"))
                    })
                })
                .collect()
        })
        .collect()
}

fn layout(v: &Value) -> String {
    match v {
        Value::Array(rows) if !rows.is_empty() && rows.iter().all(Value::is_array) => {
            let rows: Vec<String> = rows.iter().map(|r| format!("    {r}")).collect();
            format!("[\n{}\n  ]", rows.join(",\n"))
        }
        _ => v.to_string(),
    }
}

fn mutate_lambda(lambda: &IntMatrix, data: &ExchangeData, k: usize) -> Result<IntMatrix> {
    let (e, _) = build_es_fs(data, k, Sign::Plus)?;
    Ok(TwistMatrix::integral(lambda.clone())?
        .congruence(&e)?
        .matrix()
        .clone())
}

impl SeedDoc {
    pub fn new(initial: ExchangeData, lambda: Option<IntMatrix>, ell: Option<u64>) -> Result<Self> {
        if let Some(l) = &lambda {
            if l.rows() != initial.n() || l.cols() != initial.n() {
                return Err(Error::DimensionMismatch(format!(
                    "Lambda is {}x{}, expected {}x{}",
                    l.rows(),
                    l.cols(),
                    initial.n(),
                    initial.n()
                )));
            }
            TwistMatrix::integral(l.clone())?;
        }
        if ell == Some(0) {
            return Err(Error::InvalidModulus(0));
        }
        Ok(SeedDoc {
            initial,
            initial_lambda: lambda,
            ell,
            history: Vec::new(),
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: SeedFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn from_file(file: &SeedFile) -> Result<Self> {
        let n = file.n;
        let ex = zero_based(&file.ex, "ex")?;
        let inv = zero_based(&file.inv, "inv")?;
        let ninv = zero_based(&file.ninv, "ninv")?;
        let history = zero_based(&file.history, "history")?;
        let current_b = matrix_from(&file.b, n, ex.len(), "B")?;
        let current_lambda = file
            .lambda
            .as_ref()
            .map(|l| matrix_from(l, n, n, "Lambda"))
            .transpose()?;
        let (b0, lambda0) = match &file.initial {
            None if !history.is_empty() => {
                return Err(Error::Parse("history given without initial data".into()))
            }
            None => (current_b.clone(), current_lambda.clone()),
            Some(init) => {
                let b0 = matrix_from(&init.b, n, ex.len(), "initial.B")?;
                let l0 = init
                    .lambda
                    .as_ref()
                    .map(|l| matrix_from(l, n, n, "initial.Lambda"))
                    .transpose()?;
                if l0.is_some() != current_lambda.is_some() {
                    return Err(Error::Parse(
                        "Lambda must be given for both the initial and the current seed".into(),
                    ));
                }
                (b0, l0)
            }
        };
        let initial = ExchangeData::new(n, ex, inv, ninv, b0)?;
        let mut doc = SeedDoc::new(initial, lambda0, file.ell)?;
        for &k in &history {
            if !doc.initial.is_mutable(k) {
                return Err(Error::NotMutable(k + 1));
            }
        }
        doc.history = history;
        let (data, lambda) = doc.current()?;
        if data.b() != &current_b {
            return Err(Error::Parse("B does not match the replayed history".into()));
        }
        if lambda != current_lambda {
            return Err(Error::Parse("Lambda does not match the replayed history".into()));
        }
        if !file.vars.is_empty() && file.vars != doc.rendered_vars()? {
            return Err(Error::Parse("vars do not match the replayed history".into()));
        }
        Ok(doc)
    }

    pub fn n(&self) -> usize {
        self.initial.n()
    }

    pub fn initial(&self) -> &ExchangeData {
        &self.initial
    }

    pub fn initial_lambda(&self) -> Option<&IntMatrix> {
        self.initial_lambda.as_ref()
    }

    pub fn ell(&self) -> Option<u64> {
        self.ell
    }

    pub fn history(&self) -> &[usize] {
        &self.history
    }

    /// Current exchange data and (integral) Λ after replaying the history.
    pub fn current(&self) -> Result<(ExchangeData, Option<IntMatrix>)> {
        let mut data = self.initial.clone();
        let mut lambda = self.initial_lambda.clone();
        for &k in &self.history {
            if let Some(l) = &lambda {
                lambda = Some(mutate_lambda(l, &data, k)?);
            }
            data = data.mutate(k)?;
        }
        Ok((data, lambda))
    }

    /// Appends 0-based mutations to the history.
    pub fn mutated(&self, ks: &[usize]) -> Result<Self> {
        for &k in ks {
            if !self.initial.is_mutable(k) {
                return Err(Error::NotMutable(k + 1));
            }
        }
        let mut doc = self.clone();
        doc.history.extend_from_slice(ks);
        Ok(doc)
    }

    pub fn with_ell(&self, ell: Option<u64>) -> Result<Self> {
        if ell == Some(0) {
            return Err(Error::InvalidModulus(0));
        }
        let mut doc = self.clone();
        doc.ell = ell;
        Ok(doc)
    }

    fn replay<S: Scalar>(&self, seed: Seed<S>) -> Result<Seed<S>> {
        seed.mutate_sequence(&self.history)
    }

    pub fn classical_seed(&self) -> Result<ClassicalSeed> {
        self.replay(ClassicalSeed::classical(self.initial.clone()))
    }

    /// Root-of-unity seed at the stored `ell`.
    pub fn quantum_seed(&self) -> Result<QuantumSeed> {
        let ell = self
            .ell
            .ok_or_else(|| Error::HypothesisViolated("quantum seed needs ell".into()))?;
        let lambda = self
            .initial_lambda
            .as_ref()
            .ok_or_else(|| Error::HypothesisViolated("quantum seed needs Lambda".into()))?;
        self.replay(QuantumSeed::quantum(self.initial.clone(), lambda, ell)?)
    }

    /// Whether the seed is read as quantum (both `Lambda` and `ell` given).
    pub fn is_quantum(&self) -> bool {
        self.ell.is_some() && self.initial_lambda.is_some()
    }

    fn rendered_vars(&self) -> Result<Vec<String>> {
        if self.history.is_empty() {
            return Ok(Vec::new());
        }
        Ok(if self.is_quantum() {
            self.quantum_seed()?.vars().iter().map(|v| v.pretty()).collect()
        } else {
            self.classical_seed()?.vars().iter().map(|v| v.pretty()).collect()
        })
    }

    pub fn to_file(&self) -> Result<SeedFile> {
        let (data, lambda) = self.current()?;
        let one_based = |v: &[usize]| v.iter().map(|i| i + 1).collect::<Vec<_>>();
        let initial = if self.history.is_empty() {
            None
        } else {
            Some(InitialFrame {
                b: rows_of(self.initial.b(), "B")?,
                lambda: self
                    .initial_lambda
                    .as_ref()
                    .map(|l| rows_of(l, "Lambda"))
                    .transpose()?,
            })
        };
        Ok(SeedFile {
            n: data.n(),
            ex: one_based(data.ex()),
            inv: one_based(data.inv()),
            ninv: one_based(data.ninv()),
            b: rows_of(data.b(), "B")?,
            lambda: lambda.as_ref().map(|l| rows_of(l, "Lambda")).transpose()?,
            ell: self.ell,
            initial,
            history: one_based(&self.history),
            vars: self.rendered_vars()?,
        })
    }

    /// Canonical JSON: one key per line, matrices one row per line,
    /// newline terminated.
    pub fn to_json(&self) -> Result<String> {
        let value = serde_json::to_value(self.to_file()?).map_err(|e| Error::Internal(e.to_string()))?;
        let Value::Object(map) = value else {
            return Err(Error::Internal("seed file is not an object".into()));
        };
        let lines: Vec<String> = map
            .iter()
            .map(|(k, v)| format!("  {}: {}", Value::from(k.as_str()), layout(v)))
            .collect();
        Ok(format!("{{\n{}\n}}\n", lines.join(",\n")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const KRONECKER: &str = r#"{"n":2,"ex":[1,2],"inv":[],"ninv":[],"B":[[0,2],[-2,0]],"Lambda":[[0,1],[-1,0]]}"#;

    #[test]
    fn parse_and_echo() {
        let doc = SeedDoc::parse(KRONECKER).unwrap();
        assert_eq!(doc.n(), 2);
        assert!(doc.history().is_empty());
        let out = doc.to_json().unwrap();
        let again = SeedDoc::parse(&out).unwrap();
        assert_eq!(doc, again);
        assert_eq!(out, again.to_json().unwrap());
    }

    #[test]
    fn mutated_file_replays() {
        let doc = SeedDoc::parse(KRONECKER).unwrap().mutated(&[0]).unwrap();
        let out = doc.to_json().unwrap();
        let file: SeedFile = serde_json::from_str(&out).unwrap();
        assert_eq!(file.history, vec![1]);
        assert_eq!(file.b, vec![vec![0, -2], vec![2, 0]]);
        assert_eq!(file.vars[0], "x1^-1*x2^2 + x1^-1");
        let back = SeedDoc::parse(&out).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json().unwrap(), out);
        let twice = doc.mutated(&[0]).unwrap();
        assert_eq!(
            twice.classical_seed().unwrap(),
            SeedDoc::parse(KRONECKER).unwrap().classical_seed().unwrap()
        );
    }

    #[test]
    fn tampered_files_are_rejected() {
        let doc = SeedDoc::parse(KRONECKER).unwrap().mutated(&[0, 1]).unwrap();
        let mut file = doc.to_file().unwrap();
        file.vars[1] = "x2".into();
        assert!(matches!(SeedDoc::from_file(&file), Err(Error::Parse(_))));
        let mut file = doc.to_file().unwrap();
        file.b[0][1] = 5;
        assert!(matches!(SeedDoc::from_file(&file), Err(Error::Parse(_))));
        let mut file = doc.to_file().unwrap();
        file.initial = None;
        assert!(matches!(SeedDoc::from_file(&file), Err(Error::Parse(_))));
    }

    #[test]
    fn malformed_input() {
        for text in [
            "",
            "[]",
            r#"{"n":2}"#,
            r#"{"n":2,"ex":[0,1],"B":[[0,2],[-2,0]]}"#,
            r#"{"n":2,"ex":[1,2],"B":[[0,2]]}"#,
            r#"{"n":2,"ex":[1,2],"B":[[0,2],[-2,0]],"extra":1}"#,
            r#"{"n":2,"ex":[1,2],"B":[[0,2],[-2,0]],"Lambda":[[0,1],[1,0]]}"#,
            r#"{"n":2,"ex":[1,2],"B":[[0,2],[-2,0]],"ell":0}"#,
            r#"{"n":2,"ex":[1,2],"B":[[0,2],[-2,0]],"history":[1]}"#,
        ] {
            assert!(SeedDoc::parse(text).is_err(), "{text}");
        }
        let bad_b = r#"{"n":2,"ex":[1,2],"B":[[0,2],[2,0]]}"#;
        assert!(matches!(
            SeedDoc::parse(bad_b),
            Err(Error::InvalidExchangeData(_))
        ));
    }

    #[test]
    fn frozen_indices_survive() {
        let text = r#"{"n":3,"ex":[1,2],"inv":[3],"ninv":[],"B":[[0,2],[-2,0],[1,-1]],"Lambda":[[0,1,0],[-1,0,0],[0,0,0]],"ell":3}"#;
        let doc = SeedDoc::parse(text).unwrap();
        assert!(doc.is_quantum());
        assert!(matches!(doc.mutated(&[2]), Err(Error::NotMutable(3))));
        let m = doc.mutated(&[1, 0]).unwrap();
        let out = m.to_json().unwrap();
        assert_eq!(SeedDoc::parse(&out).unwrap(), m);
        let file = m.to_file().unwrap();
        assert_eq!(file.inv, vec![3]);
        assert_eq!(file.ell, Some(3));
    }
}
