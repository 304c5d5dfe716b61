//! The free groups `F_m(M)` with basis `b(γ, j) = γ̃₍₁₎ T_{1,j} γ̃₍₁₎⁻¹`, one for each
//! canonical surface word `γ` and strand `2 ≤ j ≤ m`.
//!
//! The generators `a_{1,k}` are never letters here: conjugation by them is
//! carried inside the `gamma` field of the basis symbol.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::surface_group::{SurfaceError, SurfaceWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeError {
    #[error("mixed levels: expected {expected}, found {found}")]
    MixedLevels { expected: usize, found: usize },
    #[error("strand {strand} out of range 2..={level}")]
    StrandOutOfRange { strand: usize, level: usize },
    #[error("operation requires a nonempty word")]
    EmptyWord,
    #[error("action undefined on symbol {symbol}")]
    ActionUndefined { symbol: String },
    #[error("malformed basis symbol `{0}`")]
    MalformedSymbol(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

impl FreeError {
    pub fn code(&self) -> &'static str {
        match self {
            FreeError::MixedLevels { .. } => "free_tower::mixed_levels",
            FreeError::StrandOutOfRange { .. } => "free_tower::strand_out_of_range",
            FreeError::EmptyWord => "free_tower::empty_word",
            FreeError::ActionUndefined { .. } => "free_tower::action_undefined",
            FreeError::MalformedSymbol(_) => "free_tower::malformed_symbol",
            FreeError::Surface(e) => e.code(),
        }
    }
}

/// A basis element `b(γ, j)` of the free group at level `m`.
///
/// Ordered by `(level, strand, ShortLex of gamma)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisSymbol {
    level: usize,
    strand: usize,
    gamma: SurfaceWord,
}

impl BasisSymbol {
    /// `gamma` is replaced by its canonical form.
    pub fn new(gamma: &SurfaceWord, strand: usize, level: usize) -> Result<Self, FreeError> {
        if strand < 2 || strand > level {
            return Err(FreeError::StrandOutOfRange { strand, level });
        }
        Ok(BasisSymbol { level, strand, gamma: gamma.canonical_form() })
    }

    /// `T_{1,j}` itself, i.e. `b(1, j)`.
    pub fn core(genus: u32, strand: usize, level: usize) -> Result<Self, FreeError> {
        BasisSymbol::new(&SurfaceWord::identity(genus), strand, level)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn strand(&self) -> usize {
        self.strand
    }

    pub fn gamma(&self) -> &SurfaceWord {
        &self.gamma
    }

    pub fn genus(&self) -> u32 {
        self.gamma.genus()
    }

    pub fn letter(&self) -> FreeLetter {
        FreeLetter { symbol: self.clone(), inverse: false }
    }

    /// Parses `b[<gamma>;<j>]` with an optional `@<m>` level suffix.
    /// The identity gamma may be written `1` or left empty.
    pub fn parse(text: &str, genus: u32, default_level: usize) -> Result<Self, FreeError> {
        let malformed = || FreeError::MalformedSymbol(text.to_string());
        let body = text.trim();
        let (head, level) = match body.rsplit_once('@') {
            Some((h, lvl)) => (h, lvl.parse::<usize>().map_err(|_| malformed())?),
            None => (body, default_level),
        };
        let inner = head
            .strip_prefix("b[")
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(malformed)?;
        let (gamma_text, strand_text) = inner.split_once(';').ok_or_else(malformed)?;
        let strand: usize = strand_text.trim().parse().map_err(|_| malformed())?;
        let gamma_text = gamma_text.trim();
        let gamma = if gamma_text == "1" || gamma_text.is_empty() {
            SurfaceWord::identity(genus)
        } else {
            SurfaceWord::parse(genus, gamma_text)?
        };
        BasisSymbol::new(&gamma, strand, level)
    }
}

impl fmt::Display for BasisSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gamma.is_empty() {
            write!(f, "b[1;{}]", self.strand)
        } else {
            write!(f, "b[{};{}]", self.gamma, self.strand)
        }
    }
}

/// A basis symbol or its inverse. Positive letters sort before negative ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeLetter {
    pub symbol: BasisSymbol,
    pub inverse: bool,
}

impl FreeLetter {
    pub fn inv(&self) -> FreeLetter {
        FreeLetter { symbol: self.symbol.clone(), inverse: !self.inverse }
    }

    fn cancels(&self, other: &FreeLetter) -> bool {
        self.inverse != other.inverse && self.symbol == other.symbol
    }

    pub fn exponent(&self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for FreeLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol)?;
        if self.inverse {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

/// A word in the free group at a fixed level.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeWord {
    level: usize,
    letters: Vec<FreeLetter>,
}

impl Ord for FreeWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.level
            .cmp(&other.level)
            .then(self.letters.len().cmp(&other.letters.len()))
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for FreeWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FreeWord {
    pub fn new(level: usize, letters: Vec<FreeLetter>) -> Result<Self, FreeError> {
        if let Some(bad) = letters.iter().find(|l| l.symbol.level != level) {
            return Err(FreeError::MixedLevels { expected: level, found: bad.symbol.level });
        }
        Ok(FreeWord { level, letters })
    }

    pub fn empty(level: usize) -> Self {
        FreeWord { level, letters: Vec::new() }
    }

    pub fn from_symbol(symbol: &BasisSymbol) -> Self {
        FreeWord { level: symbol.level, letters: vec![symbol.letter()] }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn letters(&self) -> &[FreeLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(&w[1]))
    }

    pub fn free_reduce(&self) -> FreeWord {
        FreeWord { level: self.level, letters: reduce_letters(self.letters.iter().cloned()) }
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord { level: self.level, letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    /// Reduced product.
    pub fn mul(&self, other: &FreeWord) -> Result<FreeWord, FreeError> {
        if self.level != other.level {
            return Err(FreeError::MixedLevels { expected: self.level, found: other.level });
        }
        Ok(FreeWord {
            level: self.level,
            letters: reduce_letters(self.letters.iter().chain(&other.letters).cloned()),
        })
    }

    /// `c · self · c⁻¹`, reduced.
    pub fn conjugate_by(&self, c: &FreeWord) -> Result<FreeWord, FreeError> {
        c.mul(self)?.mul(&c.inverse())
    }

    /// Cyclically reduced, lexicographically least rotation.
    pub fn conj_class_rep(&self) -> Result<FreeWord, FreeError> {
        let reduced = self.free_reduce();
        if reduced.is_empty() {
            return Err(FreeError::EmptyWord);
        }
        let mut letters = reduced.letters.as_slice();
        while letters.len() >= 2 && letters[0].cancels(&letters[letters.len() - 1]) {
            letters = &letters[1..letters.len() - 1];
        }
        let len = letters.len();
        let best = (0..len)
            .min_by(|&a, &b| {
                let ra = letters[a..].iter().chain(&letters[..a]);
                let rb = letters[b..].iter().chain(&letters[..b]);
                ra.cmp(rb)
            })
            .unwrap_or(0);
        let rotated = letters[best..].iter().chain(&letters[..best]).cloned().collect();
        Ok(FreeWord { level: self.level, letters: rotated })
    }

    /// Exponent-sum vector in the abelianization; zero entries omitted.
    pub fn abelianize(&self) -> BTreeMap<BasisSymbol, i64> {
        let mut sums: BTreeMap<BasisSymbol, i64> = BTreeMap::new();
        for l in &self.letters {
            *sums.entry(l.symbol.clone()).or_insert(0) += l.exponent();
        }
        sums.retain(|_, v| *v != 0);
        sums
    }

    /// Letter-wise substitution followed by free reduction.
    pub fn apply_endomorphism(
        &self,
        rule: &BTreeMap<BasisSymbol, FreeWord>,
    ) -> Result<FreeWord, FreeError> {
        self.try_map_letters(|symbol| {
            rule.get(symbol)
                .cloned()
                .ok_or_else(|| FreeError::ActionUndefined { symbol: symbol.to_string() })
        })
    }

    /// Generic letter-wise substitution: `image` gives the image of a
    /// positive letter; inverse letters map to inverse images.
    pub fn try_map_letters<E, F>(&self, mut image: F) -> Result<FreeWord, E>
    where
        F: FnMut(&BasisSymbol) -> Result<FreeWord, E>,
        E: From<FreeError>,
    {
        let mut out: Vec<FreeLetter> = Vec::new();
        let mut level = None;
        for l in &self.letters {
            let img = image(&l.symbol)?;
            match level {
                None => level = Some(img.level),
                Some(m) if m != img.level => {
                    return Err(FreeError::MixedLevels { expected: m, found: img.level }.into())
                }
                _ => {}
            }
            if l.inverse {
                push_reduced(&mut out, img.letters.iter().rev().map(|x| x.inv()));
            } else {
                push_reduced(&mut out, img.letters.iter().cloned());
            }
        }
        Ok(FreeWord { level: level.unwrap_or(self.level), letters: out })
    }

    /// Space-separated letters, each with an `@<level>` suffix when
    /// `with_level` is set. Empty words print as `1`.
    pub fn render(&self, with_level: bool) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        self.letters
            .iter()
            .map(|l| render_letter(l, with_level))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses space-separated letters `b[γ;j]`, `b[γ;j]^-1`, optionally with
    /// `@m` suffixes; `1` denotes the empty word.
    pub fn parse(text: &str, genus: u32, level: usize) -> Result<FreeWord, FreeError> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            if token == "1" {
                continue;
            }
            letters.push(parse_letter(token, genus, level)?);
        }
        FreeWord::new(level, letters)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

pub(crate) fn render_letter(l: &FreeLetter, with_level: bool) -> String {
    let mut s = l.symbol.to_string();
    if with_level {
        s.push_str(&format!("@{}", l.symbol.level));
    }
    if l.inverse {
        s.push_str("^-1");
    }
    s
}

/// Accepts `b[γ;j]`, `b[γ;j]^-1`, `b[γ;j]@m`, `b[γ;j]@m^-1` and `b[γ;j]^-1@m`.
pub(crate) fn parse_letter(token: &str, genus: u32, default_level: usize) -> Result<FreeLetter, FreeError> {
    let mut body = token.to_string();
    let mut inverse = false;
    if let Some(stripped) = body.strip_suffix("^-1") {
        body = stripped.to_string();
        inverse = true;
    } else if let Some(pos) = body.find("^-1@") {
        body.replace_range(pos..pos + 3, "");
        inverse = true;
    }
    let symbol = BasisSymbol::parse(&body, genus, default_level)?;
    Ok(FreeLetter { symbol, inverse })
}

fn push_reduced<I: IntoIterator<Item = FreeLetter>>(out: &mut Vec<FreeLetter>, letters: I) {
    for l in letters {
        if out.last().is_some_and(|last| last.cancels(&l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
}

fn reduce_letters<I: IntoIterator<Item = FreeLetter>>(letters: I) -> Vec<FreeLetter> {
    let mut out = Vec::new();
    push_reduced(&mut out, letters);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sym(gamma: &str, j: usize, level: usize) -> BasisSymbol {
        let g = if gamma == "1" { SurfaceWord::identity(1) } else { SurfaceWord::parse(1, gamma).unwrap() };
        BasisSymbol::new(&g, j, level).unwrap()
    }

    fn word(level: usize, letters: &[(&BasisSymbol, bool)]) -> FreeWord {
        FreeWord::new(
            level,
            letters.iter().map(|(s, i)| FreeLetter { symbol: (*s).clone(), inverse: *i }).collect(),
        )
        .unwrap()
    }

    #[test]
    fn free_reduce_examples() {
        let b12 = sym("1", 2, 3);
        let bx12 = sym("x1", 2, 3);
        let b13 = sym("1", 3, 3);
        assert!(word(3, &[(&b12, false), (&b12, true)]).free_reduce().is_empty());
        let w = word(3, &[(&b12, false), (&bx12, false)]);
        assert_eq!(w.free_reduce(), w);
        let w = word(3, &[(&b13, false), (&b12, true), (&b12, false), (&b13, false)]);
        assert_eq!(w.free_reduce(), word(3, &[(&b13, false), (&b13, false)]));
    }

    #[test]
    fn mixed_levels_rejected() {
        let a = sym("1", 2, 2);
        let b = sym("1", 2, 3);
        let letters = vec![a.letter(), b.letter()];
        assert_eq!(FreeWord::new(2, letters), Err(FreeError::MixedLevels { expected: 2, found: 3 }));
    }

    #[test]
    fn conj_class_rep_examples() {
        let b12 = sym("1", 2, 3);
        let b13 = sym("1", 3, 3);
        let single = FreeWord::from_symbol(&sym("x1", 2, 3));
        assert_eq!(single.conj_class_rep().unwrap(), single);
        let w = word(3, &[(&b12, true), (&b13, false), (&b12, false)]);
        assert_eq!(w.conj_class_rep().unwrap(), FreeWord::from_symbol(&b13));
        assert_eq!(FreeWord::empty(3).conj_class_rep(), Err(FreeError::EmptyWord));
        // rotation picks the least cyclic shift
        let w = word(3, &[(&b13, false), (&b12, false)]);
        assert_eq!(w.conj_class_rep().unwrap(), word(3, &[(&b12, false), (&b13, false)]));
    }

    #[test]
    fn abelianize_examples() {
        let b12 = sym("1", 2, 2);
        let bx12 = sym("x1", 2, 2);
        let w = word(2, &[(&b12, false), (&bx12, false), (&b12, true)]);
        assert_eq!(w.abelianize(), BTreeMap::from([(bx12.clone(), 1)]));
        assert!(FreeWord::empty(2).abelianize().is_empty());
        let w = word(2, &[(&b12, false), (&b12, false)]);
        assert_eq!(w.abelianize(), BTreeMap::from([(b12, 2)]));
    }

    #[test]
    fn endomorphism_examples() {
        let b12 = sym("1", 2, 3);
        let b13 = sym("1", 3, 3);
        let rule = BTreeMap::from([
            (b12.clone(), FreeWord::from_symbol(&b12)),
            (b13.clone(), word(3, &[(&b12, true), (&b13, false), (&b12, false)])),
        ]);
        let out = FreeWord::from_symbol(&b13).apply_endomorphism(&rule).unwrap();
        assert_eq!(out, word(3, &[(&b12, true), (&b13, false), (&b12, false)]));

        // relation (1) with (r,s) = (2,3) on T_{1,2}
        let rel1 = BTreeMap::from([
            (b12.clone(), word(3, &[(&b12, true), (&b13, true), (&b12, false), (&b13, false), (&b12, false)])),
            (b13.clone(), word(3, &[(&b12, true), (&b13, false), (&b12, false)])),
        ]);
        let out = FreeWord::from_symbol(&b12).apply_endomorphism(&rel1).unwrap();
        assert_eq!(out.render(false), "b[1;2]^-1 b[1;3]^-1 b[1;2] b[1;3] b[1;2]");

        let missing = FreeWord::from_symbol(&sym("x1", 2, 3)).apply_endomorphism(&rule);
        assert_eq!(missing, Err(FreeError::ActionUndefined { symbol: "b[x1;2]".into() }));
    }

    #[test]
    fn parse_and_render() {
        let w = FreeWord::parse("b[x1;2]^-1 b[1;3] b[x1.x2;2]", 1, 3).unwrap();
        assert_eq!(w.render(false), "b[x1;2]^-1 b[1;3] b[x1.x2;2]");
        assert_eq!(w.render(true), "b[x1;2]@3^-1 b[1;3]@3 b[x1.x2;2]@3");
        let again = FreeWord::parse(&w.render(true), 1, 3).unwrap();
        assert!(FreeWord::parse(&w.render(true), 1, 7).is_err());
        assert_eq!(again, w);
        // gamma is canonicalized on construction
        let s = BasisSymbol::parse("b[x2.x1;2]", 1, 2).unwrap();
        assert_eq!(s.to_string(), "b[x1.x2;2]");
        assert!(BasisSymbol::parse("b[x1;5]", 1, 3).is_err());
        assert!(BasisSymbol::parse("c[x1;2]", 1, 3).is_err());
    }

    fn pool() -> Vec<BasisSymbol> {
        vec![sym("1", 2, 3), sym("x1", 2, 3), sym("1", 3, 3), sym("x2^-1", 3, 3)]
    }

    fn arb_word() -> impl Strategy<Value = FreeWord> {
        prop::collection::vec((0usize..4, any::<bool>()), 0..12).prop_map(|v| {
            let p = pool();
            FreeWord::new(3, v.into_iter().map(|(i, inv)| FreeLetter { symbol: p[i].clone(), inverse: inv }).collect())
                .unwrap()
        })
    }

    /// Cancels adjacent pairs in a random order until none remain.
    fn random_order_reduce(w: &FreeWord, rng: &mut ChaCha8Rng) -> FreeWord {
        let mut letters = w.letters.clone();
        loop {
            let spots: Vec<usize> =
                (0..letters.len().saturating_sub(1)).filter(|&i| letters[i].cancels(&letters[i + 1])).collect();
            let Some(&i) = spots.choose(rng) else { break };
            letters.drain(i..i + 2);
        }
        FreeWord { level: w.level, letters }
    }

    proptest! {
        #[test]
        fn free_reduce_is_confluent(w in arb_word(), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let canonical = w.free_reduce();
            prop_assert_eq!(canonical.free_reduce(), canonical.clone());
            for _ in 0..4 {
                prop_assert_eq!(random_order_reduce(&w, &mut rng), canonical.clone());
            }
        }

        #[test]
        fn abelianize_is_additive(u in arb_word(), v in arb_word()) {
            let mut sum = u.abelianize();
            for (k, c) in v.abelianize() {
                *sum.entry(k).or_insert(0) += c;
            }
            sum.retain(|_, c| *c != 0);
            prop_assert_eq!(u.mul(&v).unwrap().abelianize(), sum);
        }

        #[test]
        fn conj_class_rep_is_conjugacy_invariant(u in arb_word(), c in arb_word()) {
            let u = u.free_reduce();
            prop_assume!(!u.is_empty());
            let v = u.conjugate_by(&c).unwrap();
            prop_assert_eq!(v.conj_class_rep().unwrap(), u.conj_class_rep().unwrap());
        }
    }

    #[test]
    fn random_reduction_orders_small_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = pool();
        for _ in 0..200 {
            let len = rng.gen_range(0..10);
            let letters = (0..len)
                .map(|_| FreeLetter { symbol: p[rng.gen_range(0..2)].clone(), inverse: rng.gen() })
                .collect();
            let w = FreeWord::new(3, letters).unwrap();
            assert_eq!(random_order_reduce(&w, &mut rng), w.free_reduce());
        }
    }
}
