//! The tower `K_n = F_n ⋊ K_{n-1}` on the implemented fragment.
//!
//! An element is stored as its level words `(w_n, …, w_2)` and stands for
//! the product `w_n · w_{n-1} ⋯ w_2`. Level `m` covers strands
//! `n-m+1, …, n`, so a level-`m` letter `b(γ, j)` sits in `Υ_{n-m+1, n-m+j}`.
//!
//! Lower-level letters act on higher levels through the conjugation formulas
//! for `T_{r,s}` and `a_{i,k}`. `T_{r,s}` is taken to commute with every
//! `a_{1,k}`; conjugating `a_{1,k'}` by `a_{i,k}` needs a [`PeripheralTable`]
//! entry and fails with `ActionUndefined` otherwise.

mod action;
mod table;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::free_tower::{BasisSymbol, FreeError, FreeLetter, FreeWord};
use crate::surface_group::SurfaceError;

pub use action::{ActionGenerator, ActionKind};
pub use table::PeripheralTable;

use action::{ambient_gens, apply_map, forward_map, invert_map, GeneratorMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KError {
    #[error("action undefined: {detail}")]
    ActionUndefined { detail: String },
    #[error("level mismatch: expected {expected}, found {found}")]
    LevelMismatch { expected: usize, found: usize },
    #[error("element has n={found}, group has n={expected}")]
    StrandMismatch { expected: usize, found: usize },
    #[error("not an Υ-element in the fragment: {0}")]
    NotUpsilon(String),
    #[error("peripheral table line {line}: {detail}")]
    MalformedTable { line: usize, detail: String },
    #[error("malformed element `{0}`")]
    MalformedElement(String),
    #[error("need n >= 2 and genus >= 1, got n={n}, g={genus}")]
    InvalidShape { n: usize, genus: u32 },
    #[error(transparent)]
    Free(#[from] FreeError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

impl KError {
    pub fn code(&self) -> &'static str {
        match self {
            KError::ActionUndefined { .. } => "k_group::action_undefined",
            KError::LevelMismatch { .. } => "k_group::level_mismatch",
            KError::StrandMismatch { .. } => "k_group::strand_mismatch",
            KError::NotUpsilon(_) => "k_group::not_upsilon",
            KError::MalformedTable { .. } => "k_group::malformed_table",
            KError::MalformedElement(_) => "k_group::malformed_element",
            KError::InvalidShape { .. } => "k_group::invalid_shape",
            KError::Free(e) => e.code(),
            KError::Surface(e) => e.code(),
        }
    }
}

/// An element `w_n · w_{n-1} ⋯ w_2` of `K_n(M)`; `levels[0]` is level `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KElement {
    n: usize,
    levels: Vec<FreeWord>,
}

impl KElement {
    pub fn identity(n: usize) -> Self {
        KElement { n, levels: (2..=n).rev().map(FreeWord::empty).collect() }
    }

    /// The element of `K_n` whose only nontrivial level is `w`.
    pub fn from_level_word(n: usize, w: &FreeWord) -> Result<Self, KError> {
        let m = w.level();
        if !(2..=n).contains(&m) {
            return Err(KError::LevelMismatch { expected: n, found: m });
        }
        let mut e = KElement::identity(n);
        e.levels[n - m] = w.free_reduce();
        Ok(e)
    }

    pub fn from_symbol(n: usize, symbol: &BasisSymbol) -> Result<Self, KError> {
        KElement::from_level_word(n, &FreeWord::from_symbol(symbol))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self, m: usize) -> &FreeWord {
        &self.levels[self.n - m]
    }

    pub fn is_identity(&self) -> bool {
        self.levels.iter().all(FreeWord::is_empty)
    }

    /// Number of letters over all levels.
    pub fn len(&self) -> usize {
        self.levels.iter().map(FreeWord::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    /// Coefficients of `κ(x)` on the pairs `e_{i,j}`, zeros omitted.
    pub fn kappa(&self) -> BTreeMap<(usize, usize), i64> {
        let mut out: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for w in &self.levels {
            let offset = self.n - w.level();
            for l in w.letters() {
                *out.entry((offset + 1, offset + l.symbol.strand())).or_default() += l.exponent();
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    pub fn deg(&self) -> i64 {
        self.levels.iter().flat_map(|w| w.letters()).map(FreeLetter::exponent).sum()
    }

    /// The pair `(i, j)` with `κ(x) = e_{i,j}`.
    pub fn upsilon_classify(&self) -> Result<(usize, usize), KError> {
        let k = self.kappa();
        match k.iter().next() {
            Some((&pair, &1)) if k.len() == 1 => Ok(pair),
            _ => Err(KError::NotUpsilon(self.to_string())),
        }
    }
}

impl fmt::Display for KElement {
    /// Nonempty levels from the top down, letters carrying `@m`; `1` for the
    /// identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.levels.iter().filter(|w| !w.is_empty()).map(|w| w.render(true)).collect();
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// `c · b · c⁻¹` for a basis symbol `b` and a conjugator `c` at the same level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UpsilonElement {
    conjugator: FreeWord,
    core: BasisSymbol,
}

impl UpsilonElement {
    pub fn new(conjugator: FreeWord, core: BasisSymbol) -> Result<Self, KError> {
        if conjugator.level() != core.level() {
            return Err(KError::LevelMismatch { expected: core.level(), found: conjugator.level() });
        }
        Ok(UpsilonElement { conjugator: conjugator.free_reduce(), core })
    }

    pub fn basis(core: BasisSymbol) -> Self {
        UpsilonElement { conjugator: FreeWord::empty(core.level()), core }
    }

    pub fn level(&self) -> usize {
        self.core.level()
    }

    pub fn conjugator(&self) -> &FreeWord {
        &self.conjugator
    }

    pub fn core(&self) -> &BasisSymbol {
        &self.core
    }

    pub fn word(&self) -> FreeWord {
        FreeWord::from_symbol(&self.core).conjugate_by(&self.conjugator).expect("same level")
    }

    pub fn strand_pair(&self, n: usize) -> (usize, usize) {
        let offset = n - self.level();
        (offset + 1, offset + self.core.strand())
    }

    /// `(conj_class_rep, reduced word)`; equal keys mean equal elements.
    pub fn key(&self) -> (FreeWord, FreeWord) {
        let w = self.word();
        (w.conj_class_rep().expect("nonempty"), w)
    }

    pub fn to_element(&self, n: usize) -> Result<KElement, KError> {
        KElement::from_level_word(n, &self.word())
    }
}

impl fmt::Display for UpsilonElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word().render(true))
    }
}

type MapCache = RwLock<HashMap<(ActionGenerator, usize), Arc<Option<GeneratorMap>>>>;
type SymbolCache = RwLock<HashMap<(ActionGenerator, BasisSymbol), FreeWord>>;

/// `K_n(M)` for fixed `n` and genus, with its action caches.
#[derive(Debug)]
pub struct KGroup {
    n: usize,
    genus: u32,
    table: PeripheralTable,
    maps: MapCache,
    images: SymbolCache,
}

impl KGroup {
    pub fn new(n: usize, genus: u32, table: PeripheralTable) -> Result<Self, KError> {
        if n < 2 || genus < 1 {
            return Err(KError::InvalidShape { n, genus });
        }
        Ok(KGroup { n, genus, table, maps: RwLock::default(), images: RwLock::default() })
    }

    pub fn with_default_table(n: usize, genus: u32) -> Result<Self, KError> {
        KGroup::new(n, genus, PeripheralTable::empty())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn identity(&self) -> KElement {
        KElement::identity(self.n)
    }

    fn generator_map(&self, z: ActionGenerator, level: usize) -> Arc<Option<GeneratorMap>> {
        if let Some(m) = self.maps.read().expect("lock").get(&(z, level)) {
            return m.clone();
        }
        let forward = forward_map(z.kind, level, self.genus, &self.table);
        let map = if z.inverse { invert_map(&forward, &ambient_gens(level, self.genus)) } else { Some(forward) };
        self.maps.write().expect("lock").entry((z, level)).or_insert_with(|| Arc::new(map)).clone()
    }

    /// `z · b · z⁻¹`, reduced, at the level of `b`.
    pub fn act_generator(&self, z: ActionGenerator, b: &BasisSymbol) -> Result<FreeWord, KError> {
        z.check(b.level(), self.genus)?;
        if let Some(w) = self.images.read().expect("lock").get(&(z, b.clone())) {
            return Ok(w.clone());
        }
        let map = self.generator_map(z, b.level());
        let map = map.as_ref().as_ref().ok_or_else(|| KError::ActionUndefined {
            detail: format!("{z} at level {}: inverse needs the full peripheral table", b.level()),
        })?;
        let image = apply_map(map, b, self.genus, &z)?;
        self.images.write().expect("lock").entry((z, b.clone())).or_insert_with(|| image.clone());
        Ok(image)
    }

    /// The actor sequence `z_1 ⋯ z_t` equal to a lower-level letter, in
    /// the coordinates of level `m`.
    fn letter_actors(&self, letter: &FreeLetter, m: usize) -> Vec<ActionGenerator> {
        let i = m - letter.symbol.level() + 1;
        let s = i + letter.symbol.strand() - 1;
        let gamma: Vec<ActionGenerator> = letter
            .symbol
            .gamma()
            .letters()
            .iter()
            .map(|x| ActionGenerator { kind: ActionKind::A { i, k: x.generator }, inverse: x.inverse })
            .collect();
        let mut out = gamma.clone();
        out.push(ActionGenerator { kind: ActionKind::T { r: i, s }, inverse: letter.inverse });
        out.extend(gamma.iter().rev().map(|z| z.inv()));
        out
    }

    fn act_word_by(&self, z: ActionGenerator, w: &FreeWord) -> Result<FreeWord, KError> {
        w.try_map_letters(|b| self.act_generator(z, b))
    }

    /// `k · w · k⁻¹` where `k` is the part of `x` strictly below the level of `w`.
    fn act_below(&self, x: &KElement, w: &FreeWord) -> Result<FreeWord, KError> {
        let m = w.level();
        let mut out = w.clone();
        for lower in (2..m).map(|lm| x.level(lm)) {
            for letter in lower.letters().iter().rev() {
                for z in self.letter_actors(letter, m).into_iter().rev() {
                    out = self.act_word_by(z, &out)?;
                }
            }
        }
        Ok(out)
    }

    fn check(&self, x: &KElement) -> Result<(), KError> {
        if x.n != self.n {
            return Err(KError::StrandMismatch { expected: self.n, found: x.n });
        }
        Ok(())
    }

    /// `(f_1, k_1)(f_2, k_2) = (f_1 · k_1 f_2 k_1⁻¹, k_1 k_2)`, level by level.
    pub fn multiply(&self, a: &KElement, b: &KElement) -> Result<KElement, KError> {
        self.check(a)?;
        self.check(b)?;
        let mut levels = Vec::with_capacity(a.levels.len());
        for m in (2..=self.n).rev() {
            let moved = self.act_below(a, b.level(m))?;
            levels.push(a.level(m).mul(&moved)?);
        }
        Ok(KElement { n: self.n, levels })
    }

    pub fn product<'a, I: IntoIterator<Item = &'a KElement>>(&self, items: I) -> Result<KElement, KError> {
        let mut acc = self.identity();
        for x in items {
            acc = self.multiply(&acc, x)?;
        }
        Ok(acc)
    }

    pub fn inverse(&self, x: &KElement) -> Result<KElement, KError> {
        self.check(x)?;
        // (w_n ⋯ w_2)⁻¹ = w_2⁻¹ ⋯ w_n⁻¹
        let mut acc = self.identity();
        for m in 2..=self.n {
            let inv = KElement::from_level_word(self.n, &x.level(m).inverse())?;
            acc = self.multiply(&acc, &inv)?;
        }
        Ok(acc)
    }

    pub fn commutes(&self, u: &KElement, v: &KElement) -> Result<bool, KError> {
        Ok(self.multiply(u, v)? == self.multiply(v, u)?)
    }

    /// Whitespace-separated letters `b[γ;j]@m` (or `^-1`), multiplied in
    /// order; `1` is the identity.
    pub fn parse_element(&self, text: &str) -> Result<KElement, KError> {
        let mut acc = self.identity();
        for token in text.split_whitespace() {
            if token == "1" {
                continue;
            }
            let level = level_of(token).ok_or_else(|| KError::MalformedElement(token.to_string()))?;
            let w = FreeWord::parse(token, self.genus, level)?;
            acc = self.multiply(&acc, &KElement::from_level_word(self.n, &w)?)?;
        }
        Ok(acc)
    }
}

fn level_of(token: &str) -> Option<usize> {
    let (_, tail) = token.rsplit_once('@')?;
    tail.trim_end_matches("^-1").parse().ok()
}

#[cfg(test)]
mod tests;
