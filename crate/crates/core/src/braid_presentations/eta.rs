use std::collections::BTreeMap;

use serde::Serialize;

use super::{BraidLetter, BraidWord};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EtaTerm {
    pub coeff: i64,
    #[serde(rename = "element", serialize_with = "as_text")]
    pub word: BraidWord,
}

fn as_text<S: serde::Serializer>(w: &BraidWord, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&w.to_string())
}

/// An uncollected signed sum of braid words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EtaSum {
    pub terms: Vec<EtaTerm>,
}

impl EtaSum {
    fn unit(word: BraidWord) -> Self {
        EtaSum { terms: vec![EtaTerm { coeff: 1, word }] }
    }

    /// Term-by-term product; terms of `self` vary slowest.
    pub fn mul(&self, other: &EtaSum) -> EtaSum {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let word = a.word.concat(&b.word).expect("factors share a shape");
                terms.push(EtaTerm { coeff: a.coeff * b.coeff, word });
            }
        }
        EtaSum { terms }
    }

    /// Coefficients summed over literally equal words, zeros dropped.
    pub fn collect_literal(&self) -> BTreeMap<BraidWord, i64> {
        let mut out: BTreeMap<BraidWord, i64> = BTreeMap::new();
        for t in &self.terms {
            *out.entry(t.word.clone()).or_default() += t.coeff;
        }
        out.retain(|_, c| *c != 0);
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }
}

/// Expands `η` multiplicatively: `τ_i ↦ σ_i − σ_i⁻¹`, `δ_i ↦ σ_i² − 1`.
pub fn eta_expand(w: &BraidWord) -> EtaSum {
    let empty = w.with_letters(Vec::new());
    let mut acc = EtaSum::unit(empty.clone());
    for &l in w.letters() {
        let factor = match l {
            BraidLetter::Tau(i) => EtaSum {
                terms: vec![
                    EtaTerm { coeff: 1, word: w.with_letters(vec![BraidLetter::sigma(i)]) },
                    EtaTerm { coeff: -1, word: w.with_letters(vec![BraidLetter::sigma_inv(i)]) },
                ],
            },
            BraidLetter::Delta(i) => EtaSum {
                terms: vec![
                    EtaTerm { coeff: 1, word: w.with_letters(vec![BraidLetter::sigma(i), BraidLetter::sigma(i)]) },
                    EtaTerm { coeff: -1, word: empty.clone() },
                ],
            },
            other => EtaSum::unit(w.with_letters(vec![other])),
        };
        acc = acc.mul(&factor);
    }
    acc
}
