use serde_json::json;

use super::relations::{apply_relation, Direction, Relation, RelationInstance};
use super::{BraidError, BraidLetter, BraidWord};

/// The symbol `α δ_i α⁻¹` of the graph monoid on conjugates of the `δ_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HatSymbol {
    pub conj: BraidWord,
    pub index: usize,
}

impl HatSymbol {
    pub fn expand(&self) -> BraidWord {
        let mut letters = self.conj.letters().to_vec();
        letters.push(BraidLetter::Delta(self.index));
        letters.extend(self.conj.inverse().expect("conjugators are nonsingular").letters().iter().copied());
        self.conj.with_letters(letters)
    }
}

/// A singular word written as (product of `δ`-conjugates) · (braid).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub trace: Vec<HatSymbol>,
    pub braid: BraidWord,
    /// The R0 insertions that turn the input into `expansion()`.
    pub steps: Vec<RelationInstance>,
}

impl Split {
    /// `α_1 δ α_1⁻¹ ⋯ α_p δ α_p⁻¹ β` as a literal word.
    pub fn expansion(&self) -> BraidWord {
        let mut letters = Vec::new();
        for h in &self.trace {
            letters.extend_from_slice(h.expand().letters());
        }
        letters.extend_from_slice(self.braid.letters());
        self.braid.with_letters(letters)
    }

    /// Replays the logged steps on `original` and checks that they land on
    /// `expansion()` exactly.
    pub fn certify(&self, original: &BraidWord) -> Result<(), BraidError> {
        let mut w = original.clone();
        for inst in &self.steps {
            w = apply_relation(&w, inst)?;
        }
        let expected = self.expansion();
        if w != expected || w.free_cancel() != original.free_cancel() || self.trace.len() != original.order() {
            return Err(BraidError::NoMatch { relation: "split replay".into(), position: 0 });
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let trace: Vec<_> = self.trace.iter().map(|h| json!({"conj": h.conj.to_string(), "i": h.index})).collect();
        json!({"trace": trace, "braid": self.braid.to_string()})
    }
}

fn r0_for(g: BraidLetter) -> Relation {
    // the inserted pair is g⁻¹ g
    match g {
        BraidLetter::Sigma { i, inverse } => Relation::R0Sigma { i, inverse_first: !inverse },
        BraidLetter::A { k, inverse } => Relation::R0A { k, inverse_first: !inverse },
        _ => unreachable!("only nonsingular letters are moved"),
    }
}

/// Moves every `δ` to the left by the steps `g·δ = (g δ g⁻¹)·g`.
pub fn split_singular(w: &BraidWord) -> Result<Split, BraidError> {
    if w.letters().iter().any(|l| matches!(l, BraidLetter::Tau(_))) {
        return Err(BraidError::UnsubstitutedTau);
    }
    let mut cur = w.clone();
    let mut steps = Vec::new();
    let mut trace = Vec::new();
    let mut boundary = 0;
    while let Some(p) = (boundary..cur.len()).find(|&q| cur.letters()[q].is_singular()) {
        let BraidLetter::Delta(index) = cur.letters()[p] else { unreachable!() };
        let alpha = cur.with_letters(cur.letters()[boundary..p].to_vec());
        let mut end = p;
        for q in (boundary..p).rev() {
            let g = cur.letters()[q];
            let inst = RelationInstance { relation: r0_for(g), position: end + 1, direction: Direction::RightToLeft };
            cur = apply_relation(&cur, &inst)?;
            steps.push(inst);
            end += 1;
        }
        trace.push(HatSymbol { conj: alpha, index });
        boundary = end + 1;
    }
    let braid = w.with_letters(w.letters().iter().copied().filter(|l| !l.is_singular()).collect());
    Ok(Split { trace, braid, steps })
}

#[cfg(test)]
mod tests {
    use super::super::tests::arb_word;
    use super::*;
    use proptest::prelude::*;

    fn summary(s: &Split) -> (Vec<(String, usize)>, String) {
        (s.trace.iter().map(|h| (h.conj.to_string(), h.index)).collect(), s.braid.to_string())
    }

    #[test]
    fn split_examples() {
        let w = BraidWord::parse("d1 s2", 3, 1).unwrap();
        assert_eq!(summary(&split_singular(&w).unwrap()), (vec![("".into(), 1)], "s2".into()));
        let w = BraidWord::parse("s2 d1", 3, 1).unwrap();
        let s = split_singular(&w).unwrap();
        assert_eq!(summary(&s), (vec![("s2".into(), 1)], "s2".into()));
        assert_eq!(s.steps.len(), 1);
        let w = BraidWord::parse("s1 d1 a1 d2", 3, 1).unwrap();
        let s = split_singular(&w).unwrap();
        assert_eq!(
            summary(&s),
            (vec![("s1".into(), 1), ("s1 a1".into(), 2)], "s1 a1".into())
        );
        s.certify(&w).unwrap();
        assert_eq!(s.expansion().to_string(), "s1 d1 s1^-1 s1 a1 d2 a1^-1 s1^-1 s1 a1");
        assert_eq!(s.to_json(), json!({"trace":[{"conj":"s1","i":1},{"conj":"s1 a1","i":2}],"braid":"s1 a1"}));
    }

    #[test]
    fn tau_is_rejected() {
        let w = BraidWord::parse("t1", 2, 1).unwrap();
        assert_eq!(split_singular(&w).unwrap_err(), BraidError::UnsubstitutedTau);
        assert!(split_singular(&w.delta_substitute()).is_ok());
    }

    proptest! {
        #[test]
        fn split_certifies(w in arb_word(4, 2, 10, true)) {
            let w = w.delta_substitute();
            let s = split_singular(&w).unwrap();
            s.certify(&w).unwrap();
            prop_assert_eq!(s.trace.len(), w.order());
            prop_assert!(!s.braid.is_singular());
        }
    }
}
