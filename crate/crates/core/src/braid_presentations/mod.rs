//! Token-level words over the generators of `B_n(M)` and `SB_n(M)`:
//! `σ_i^{±1}` (`s<i>`, `s<i>^-1`), `a_k^{±1}` (`a<k>`, `a<k>^-1`), and the
//! singular letters `τ_i` (`t<i>`) and `δ_i = σ_i τ_i` (`d<i>`).
//!
//! Nothing here decides equality in the braid group. Words are rewritten
//! only by explicit relation instances, and every rewrite can be replayed.

mod eta;
mod relations;
mod split;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use eta::{eta_expand, EtaSum, EtaTerm};
pub use relations::{applicable_instances, apply_relation, Direction, Relation, RelationInstance, Rewriter};
pub use split::{split_singular, HatSymbol, Split};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("malformed braid token `{0}`")]
    MalformedToken(String),
    #[error("index in `{token}` out of range 1..={max}")]
    IndexOutOfRange { token: String, max: usize },
    #[error("need n >= 2 strands and genus >= 1, got n={n}, g={genus}")]
    InvalidShape { n: usize, genus: usize },
    #[error("words have different shapes: (n={n1}, g={g1}) vs (n={n2}, g={g2})")]
    ShapeMismatch { n1: usize, g1: usize, n2: usize, g2: usize },
    #[error("relation {relation}: side does not match at position {position}")]
    NoMatch { relation: String, position: usize },
    #[error("relation {relation}: {detail}")]
    SideCondition { relation: String, detail: String },
    #[error("singular letter {0} has no inverse")]
    SingularInverse(String),
    #[error("word still contains τ letters; run delta_substitute first")]
    UnsubstitutedTau,
}

impl BraidError {
    pub fn code(&self) -> &'static str {
        match self {
            BraidError::MalformedToken(_) => "braid_presentations::malformed_token",
            BraidError::IndexOutOfRange { .. } => "braid_presentations::index_out_of_range",
            BraidError::InvalidShape { .. } => "braid_presentations::invalid_shape",
            BraidError::ShapeMismatch { .. } => "braid_presentations::shape_mismatch",
            BraidError::NoMatch { .. } => "braid_presentations::no_match",
            BraidError::SideCondition { .. } => "braid_presentations::side_condition",
            BraidError::SingularInverse(_) => "braid_presentations::singular_inverse",
            BraidError::UnsubstitutedTau => "braid_presentations::unsubstituted_tau",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BraidLetter {
    Sigma { i: usize, inverse: bool },
    A { k: usize, inverse: bool },
    Tau(usize),
    Delta(usize),
}

impl BraidLetter {
    pub fn sigma(i: usize) -> Self {
        BraidLetter::Sigma { i, inverse: false }
    }

    pub fn sigma_inv(i: usize) -> Self {
        BraidLetter::Sigma { i, inverse: true }
    }

    pub fn a(k: usize) -> Self {
        BraidLetter::A { k, inverse: false }
    }

    pub fn a_inv(k: usize) -> Self {
        BraidLetter::A { k, inverse: true }
    }

    pub fn is_singular(self) -> bool {
        matches!(self, BraidLetter::Tau(_) | BraidLetter::Delta(_))
    }

    pub fn inv(self) -> Option<Self> {
        match self {
            BraidLetter::Sigma { i, inverse } => Some(BraidLetter::Sigma { i, inverse: !inverse }),
            BraidLetter::A { k, inverse } => Some(BraidLetter::A { k, inverse: !inverse }),
            BraidLetter::Tau(_) | BraidLetter::Delta(_) => None,
        }
    }

    fn cancels(self, other: BraidLetter) -> bool {
        self.inv() == Some(other)
    }

    fn check(self, n: usize, genus: usize) -> Result<(), BraidError> {
        let (idx, max) = match self {
            BraidLetter::Sigma { i, .. } | BraidLetter::Tau(i) | BraidLetter::Delta(i) => (i, n - 1),
            BraidLetter::A { k, .. } => (k, 2 * genus),
        };
        if idx == 0 || idx > max {
            return Err(BraidError::IndexOutOfRange { token: self.to_string(), max });
        }
        Ok(())
    }

    pub fn parse(token: &str) -> Result<Self, BraidError> {
        let malformed = || BraidError::MalformedToken(token.to_string());
        let mut chars = token.chars();
        let head = chars.next().ok_or_else(malformed)?;
        let rest = chars.as_str();
        let (digits, inverse) = match rest.strip_suffix("^-1") {
            Some(d) => (d, true),
            None => (rest, false),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        let idx: usize = digits.parse().map_err(|_| malformed())?;
        match (head, inverse) {
            ('s', _) => Ok(BraidLetter::Sigma { i: idx, inverse }),
            ('a', _) => Ok(BraidLetter::A { k: idx, inverse }),
            ('t', false) => Ok(BraidLetter::Tau(idx)),
            ('d', false) => Ok(BraidLetter::Delta(idx)),
            _ => Err(malformed()),
        }
    }
}

impl fmt::Display for BraidLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BraidLetter::Sigma { i, inverse: false } => write!(f, "s{i}"),
            BraidLetter::Sigma { i, inverse: true } => write!(f, "s{i}^-1"),
            BraidLetter::A { k, inverse: false } => write!(f, "a{k}"),
            BraidLetter::A { k, inverse: true } => write!(f, "a{k}^-1"),
            BraidLetter::Tau(i) => write!(f, "t{i}"),
            BraidLetter::Delta(i) => write!(f, "d{i}"),
        }
    }
}

/// A word in the generators of `SB_n(M)`; a braid word when it has no
/// singular letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BraidWord {
    n: usize,
    genus: usize,
    letters: Vec<BraidLetter>,
}

impl BraidWord {
    pub fn new(n: usize, genus: usize, letters: Vec<BraidLetter>) -> Result<Self, BraidError> {
        if n < 2 || genus < 1 {
            return Err(BraidError::InvalidShape { n, genus });
        }
        for l in &letters {
            l.check(n, genus)?;
        }
        Ok(BraidWord { n, genus, letters })
    }

    pub fn empty(n: usize, genus: usize) -> Result<Self, BraidError> {
        BraidWord::new(n, genus, Vec::new())
    }

    /// Whitespace-separated tokens; the letter sequence is kept verbatim.
    pub fn parse(text: &str, n: usize, genus: usize) -> Result<Self, BraidError> {
        let letters = text.split_whitespace().map(BraidLetter::parse).collect::<Result<Vec<_>, _>>()?;
        BraidWord::new(n, genus, letters)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn letters(&self) -> &[BraidLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of singular letters.
    pub fn order(&self) -> usize {
        self.letters.iter().filter(|l| l.is_singular()).count()
    }

    pub fn is_singular(&self) -> bool {
        self.order() > 0
    }

    pub(crate) fn with_letters(&self, letters: Vec<BraidLetter>) -> BraidWord {
        BraidWord { n: self.n, genus: self.genus, letters }
    }

    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord, BraidError> {
        self.same_shape(other)?;
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(self.with_letters(letters))
    }

    fn same_shape(&self, other: &BraidWord) -> Result<(), BraidError> {
        if self.n != other.n || self.genus != other.genus {
            return Err(BraidError::ShapeMismatch {
                n1: self.n,
                g1: self.genus,
                n2: other.n,
                g2: other.genus,
            });
        }
        Ok(())
    }

    pub fn inverse(&self) -> Result<BraidWord, BraidError> {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| l.inv().ok_or_else(|| BraidError::SingularInverse(l.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.with_letters(letters))
    }

    /// Cancels adjacent `σσ⁻¹` and `aa⁻¹` pairs (relation R0); singular
    /// letters never cancel.
    pub fn free_cancel(&self) -> BraidWord {
        let mut out: Vec<BraidLetter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last().is_some_and(|&last| last.cancels(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        self.with_letters(out)
    }

    /// Image under `θ: SB_n(M) → Sym_n`; singular letters map like `σ_i`.
    pub fn permutation(&self) -> Permutation {
        let mut p = Permutation::identity(self.n);
        for l in &self.letters {
            match *l {
                BraidLetter::Sigma { i, .. } | BraidLetter::Tau(i) | BraidLetter::Delta(i) => {
                    p = p.compose(&Permutation::transposition(self.n, i, i + 1));
                }
                BraidLetter::A { .. } => {}
            }
        }
        p
    }

    /// Replaces every `τ_i` by `σ_i⁻¹ δ_i`.
    pub fn delta_substitute(&self) -> BraidWord {
        let mut out = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            match l {
                BraidLetter::Tau(i) => {
                    out.push(BraidLetter::sigma_inv(i));
                    out.push(BraidLetter::Delta(i));
                }
                other => out.push(other),
            }
        }
        self.with_letters(out)
    }

    /// Replaces every `δ_i` by `σ_i τ_i`.
    pub fn delta_unsubstitute(&self) -> BraidWord {
        let mut out = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            match l {
                BraidLetter::Delta(i) => {
                    out.push(BraidLetter::sigma(i));
                    out.push(BraidLetter::Tau(i));
                }
                other => out.push(other),
            }
        }
        self.with_letters(out)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tokens: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        f.write_str(&tokens.join(" "))
    }
}

/// A permutation of `{1, …, n}`, stored as images of `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Permutation::identity(n);
        p.0.swap(a - 1, b - 1);
        p
    }

    pub fn from_images(images: Vec<usize>) -> Self {
        Permutation(images)
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x - 1]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&x| self.apply(x)).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| x == i + 1)
    }
}

/// Named elements of `B_n(M)` and `SB_n(M)` with printed defining words.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// `T_{i,j} = σ_i ⋯ σ_{j-2} σ_{j-1}² σ_{j-2}⁻¹ ⋯ σ_i⁻¹`, `1 ≤ i < j ≤ n`.
    T { i: usize, j: usize },
    /// `a_{i,k}`, `1 ≤ i ≤ n`, `1 ≤ k ≤ 2g`.
    A { i: usize, k: usize },
    /// `A_{2,r} = σ_1⁻¹ (a_1 ⋯ a_{r-1} a_{r+1}⁻¹ ⋯ a_{2g}⁻¹) σ_1⁻¹`.
    A2 { r: usize },
    /// `δ_i = σ_i τ_i`.
    Delta { i: usize },
}

pub fn expand_generator(g: Generator, n: usize, genus: usize) -> Result<BraidWord, BraidError> {
    let out_of_range = |what: &str| BraidError::SideCondition {
        relation: "expand".into(),
        detail: format!("{what} out of range for n={n}, g={genus}"),
    };
    let letters = match g {
        Generator::T { i, j } => {
            if !(1 <= i && i < j && j <= n) {
                return Err(out_of_range("T_{i,j}"));
            }
            t_letters(i, j)
        }
        Generator::A { i, k } => {
            if !(1 <= i && i <= n && 1 <= k && k <= 2 * genus) {
                return Err(out_of_range("a_{i,k}"));
            }
            a_letters(i, k)
        }
        Generator::A2 { r } => {
            if !(1 <= r && r <= 2 * genus) {
                return Err(out_of_range("A_{2,r}"));
            }
            a2_letters(r, genus)
        }
        Generator::Delta { i } => {
            if !(1 <= i && i < n) {
                return Err(out_of_range("delta_i"));
            }
            vec![BraidLetter::sigma(i), BraidLetter::Tau(i)]
        }
    };
    BraidWord::new(n, genus, letters)
}

pub(crate) fn t_letters(i: usize, j: usize) -> Vec<BraidLetter> {
    let mut out: Vec<BraidLetter> = (i..j - 1).map(BraidLetter::sigma).collect();
    out.push(BraidLetter::sigma(j - 1));
    out.push(BraidLetter::sigma(j - 1));
    out.extend((i..j - 1).rev().map(BraidLetter::sigma_inv));
    out
}

pub(crate) fn a_letters(i: usize, k: usize) -> Vec<BraidLetter> {
    let odd = k % 2 == 1;
    let mut out: Vec<BraidLetter> =
        (1..i).rev().map(|s| BraidLetter::Sigma { i: s, inverse: odd }).collect();
    out.push(BraidLetter::a(k));
    out.extend((1..i).map(|s| BraidLetter::Sigma { i: s, inverse: odd }));
    out
}

pub(crate) fn a2_letters(r: usize, genus: usize) -> Vec<BraidLetter> {
    let mut out = vec![BraidLetter::sigma_inv(1)];
    out.extend((1..r).map(BraidLetter::a));
    out.extend((r + 1..=2 * genus).map(BraidLetter::a_inv));
    out.push(BraidLetter::sigma_inv(1));
    out
}

pub(crate) fn invert_letters(letters: &[BraidLetter]) -> Vec<BraidLetter> {
    letters.iter().rev().map(|l| l.inv().expect("nonsingular")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bw(text: &str, n: usize, g: usize) -> BraidWord {
        BraidWord::parse(text, n, g).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            bw("s1 s1^-1", 2, 1).letters(),
            &[BraidLetter::sigma(1), BraidLetter::sigma_inv(1)]
        );
        assert_eq!(bw("d1 a2", 2, 1).letters(), &[BraidLetter::Delta(1), BraidLetter::a(2)]);
        assert!(matches!(
            BraidWord::parse("s3", 3, 1),
            Err(BraidError::IndexOutOfRange { max: 2, .. })
        ));
        assert!(matches!(BraidWord::parse("t1^-1", 3, 1), Err(BraidError::MalformedToken(_))));
        assert!(matches!(BraidWord::parse("q1", 3, 1), Err(BraidError::MalformedToken(_))));
        assert!(matches!(BraidWord::parse("a3", 3, 1), Err(BraidError::IndexOutOfRange { max: 2, .. })));
        assert_eq!(bw("s1 a2^-1 t2 d1", 3, 1).to_string(), "s1 a2^-1 t2 d1");
    }

    #[test]
    fn permutation_examples() {
        assert_eq!(bw("s1", 3, 1).permutation(), Permutation::from_images(vec![2, 1, 3]));
        assert!(bw("a1", 3, 1).permutation().is_identity());
        // 1 -> 2 -> 3 -> 1
        assert_eq!(bw("s1 s2", 3, 1).permutation(), Permutation::from_images(vec![2, 3, 1]));
        assert_eq!(bw("t1 d2", 3, 1).permutation(), bw("s1 s2", 3, 1).permutation());
    }

    #[test]
    fn expand_examples() {
        let n = 4;
        assert_eq!(expand_generator(Generator::T { i: 1, j: 2 }, n, 1).unwrap().to_string(), "s1 s1");
        assert_eq!(
            expand_generator(Generator::T { i: 1, j: 3 }, n, 1).unwrap().to_string(),
            "s1 s2 s2 s1^-1"
        );
        assert_eq!(expand_generator(Generator::A { i: 1, k: 1 }, n, 1).unwrap().to_string(), "a1");
        assert_eq!(expand_generator(Generator::A { i: 1, k: 2 }, n, 1).unwrap().to_string(), "a2");
        assert_eq!(
            expand_generator(Generator::A { i: 3, k: 1 }, n, 1).unwrap().to_string(),
            "s2^-1 s1^-1 a1 s1^-1 s2^-1"
        );
        assert_eq!(
            expand_generator(Generator::A { i: 3, k: 2 }, n, 1).unwrap().to_string(),
            "s2 s1 a2 s1 s2"
        );
        assert_eq!(
            expand_generator(Generator::A2 { r: 1 }, n, 1).unwrap().to_string(),
            "s1^-1 a2^-1 s1^-1"
        );
        assert_eq!(
            expand_generator(Generator::A2 { r: 2 }, n, 2).unwrap().to_string(),
            "s1^-1 a1 a3^-1 a4^-1 s1^-1"
        );
        assert_eq!(expand_generator(Generator::Delta { i: 1 }, n, 1).unwrap().to_string(), "s1 t1");
        assert!(expand_generator(Generator::T { i: 2, j: 2 }, n, 1).is_err());
        assert!(expand_generator(Generator::A { i: 1, k: 3 }, n, 1).is_err());
    }

    #[test]
    fn delta_substitution_examples() {
        assert_eq!(bw("t1", 2, 1).delta_substitute().to_string(), "s1^-1 d1");
        assert_eq!(bw("d1", 2, 1).delta_unsubstitute().to_string(), "s1 t1");
        assert_eq!(bw("a1", 2, 1).delta_substitute().to_string(), "a1");
    }

    #[test]
    fn pure_generators_have_trivial_permutation() {
        for n in 2..=5 {
            for i in 1..=n {
                for j in i + 1..=n {
                    assert!(expand_generator(Generator::T { i, j }, n, 2).unwrap().permutation().is_identity());
                }
                for k in 1..=4 {
                    assert!(expand_generator(Generator::A { i, k }, n, 2).unwrap().permutation().is_identity());
                }
            }
        }
    }

    pub(crate) fn arb_letter(n: usize, genus: usize, singular: bool) -> impl Strategy<Value = BraidLetter> {
        let kinds = if singular { 6 } else { 4 };
        (0..kinds, 1..n, 1..=2 * genus).prop_map(|(kind, i, k)| match kind {
            0 => BraidLetter::sigma(i),
            1 => BraidLetter::sigma_inv(i),
            2 => BraidLetter::a(k),
            3 => BraidLetter::a_inv(k),
            4 => BraidLetter::Tau(i),
            _ => BraidLetter::Delta(i),
        })
    }

    pub(crate) fn arb_word(n: usize, genus: usize, max_len: usize, singular: bool) -> impl Strategy<Value = BraidWord> {
        prop::collection::vec(arb_letter(n, genus, singular), 0..=max_len)
            .prop_map(move |letters| BraidWord::new(n, genus, letters).unwrap())
    }

    proptest! {
        #[test]
        fn permutation_is_a_homomorphism(u in arb_word(4, 1, 8, true), v in arb_word(4, 1, 8, true)) {
            let uv = u.concat(&v).unwrap();
            prop_assert_eq!(uv.permutation(), u.permutation().compose(&v.permutation()));
        }

        #[test]
        fn delta_round_trip(u in arb_word(4, 2, 10, true)) {
            let tau_only = u.delta_unsubstitute();
            prop_assert_eq!(tau_only.delta_substitute().delta_unsubstitute().free_cancel(), tau_only.free_cancel());
            let delta_only = u.delta_substitute();
            prop_assert_eq!(delta_only.delta_unsubstitute().delta_substitute().free_cancel(), delta_only.free_cancel());
        }
    }
}
