//! Conjugation of level-`m` basis symbols by `T_{r,s}` and `a_{i,k}`.
//!
//! Symbols are embedded in the free group on `T_{1,2}, …, T_{1,m}` and
//! `a_{1,1}, …, a_{1,2g}` (the fundamental group of the surface punctured at
//! the other strands, based at strand 1). Generators act there by the
//! printed conjugation formulas; results are read back as words in the
//! `b(γ, j)` basis.

use std::collections::BTreeMap;
use std::fmt;

use crate::free_tower::{BasisSymbol, FreeLetter, FreeWord};
use crate::surface_group::{SurfaceLetter, SurfaceWord};

use super::table::PeripheralTable;
use super::KError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum AmbGen {
    /// `T_{1,j}`
    T(usize),
    /// `a_{1,k}`
    A(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct AmbLetter {
    pub gen: AmbGen,
    pub inverse: bool,
}

impl AmbLetter {
    fn inv(self) -> Self {
        AmbLetter { gen: self.gen, inverse: !self.inverse }
    }
}

pub(crate) type AmbWord = Vec<AmbLetter>;

fn push(out: &mut AmbWord, l: AmbLetter) {
    if out.last() == Some(&l.inv()) {
        out.pop();
    } else {
        out.push(l);
    }
}

fn reduce(w: &[AmbLetter]) -> AmbWord {
    let mut out = Vec::with_capacity(w.len());
    for &l in w {
        push(&mut out, l);
    }
    out
}

fn invert(w: &[AmbLetter]) -> AmbWord {
    w.iter().rev().map(|l| l.inv()).collect()
}

fn mul(a: &[AmbLetter], b: &[AmbLetter]) -> AmbWord {
    let mut out = a.to_vec();
    for &l in b {
        push(&mut out, l);
    }
    out
}

/// The actor kinds of relations (1) and (2), in the coordinates of the
/// level they act on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ActionKind {
    /// `T_{r,s}`, `2 ≤ r < s ≤ m`.
    T { r: usize, s: usize },
    /// `a_{i,k}`, `2 ≤ i ≤ m`, `1 ≤ k ≤ 2g`.
    A { i: usize, k: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionGenerator {
    pub kind: ActionKind,
    pub inverse: bool,
}

impl ActionGenerator {
    pub fn t(r: usize, s: usize) -> Self {
        ActionGenerator { kind: ActionKind::T { r, s }, inverse: false }
    }

    pub fn a(i: usize, k: u32) -> Self {
        ActionGenerator { kind: ActionKind::A { i, k }, inverse: false }
    }

    pub fn inv(self) -> Self {
        ActionGenerator { kind: self.kind, inverse: !self.inverse }
    }

    pub(crate) fn check(&self, level: usize, genus: u32) -> Result<(), KError> {
        let ok = match self.kind {
            ActionKind::T { r, s } => 2 <= r && r < s && s <= level,
            ActionKind::A { i, k } => (2..=level).contains(&i) && (1..=2 * genus).contains(&k),
        };
        if ok {
            Ok(())
        } else {
            Err(KError::ActionUndefined { detail: format!("{self} does not act at level {level}") })
        }
    }
}

impl fmt::Display for ActionGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ActionKind::T { r, s } => write!(f, "T({r},{s})")?,
            ActionKind::A { i, k } => write!(f, "A({i},{k})")?,
        }
        if self.inverse {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

fn t(j: usize, inverse: bool) -> AmbLetter {
    AmbLetter { gen: AmbGen::T(j), inverse }
}

fn a(k: u32, inverse: bool) -> AmbLetter {
    AmbLetter { gen: AmbGen::A(k), inverse }
}

/// `T_{r,s} T_{1,j} T_{r,s}⁻¹`.
fn relation_one(r: usize, s: usize, j: usize) -> AmbWord {
    if j < r || j > s {
        vec![t(j, false)]
    } else if j == r {
        vec![t(j, true), t(s, true), t(j, false), t(s, false), t(j, false)]
    } else if j < s {
        vec![
            t(r, true),
            t(s, true),
            t(r, false),
            t(s, false),
            t(j, false),
            t(s, true),
            t(r, true),
            t(s, false),
            t(r, false),
        ]
    } else {
        vec![t(r, true), t(j, false), t(r, false)]
    }
}

/// `a_{i,k} T_{1,j} a_{i,k}⁻¹`.
fn relation_two(i: usize, k: u32, j: usize) -> AmbWord {
    // T_{1,hi} ⋯ T_{1,2}
    let down = |hi: usize| -> AmbWord { (2..=hi).rev().map(|x| t(x, false)).collect() };
    let conj_tj = [a(k, true), t(j, false), a(k, false)];
    let odd = k % 2 == 1;
    let w: AmbWord = if i > j {
        vec![t(j, false)]
    } else if i == j && odd {
        [down(j - 1), conj_tj.to_vec(), invert(&down(j - 1))].concat()
    } else if i == j {
        [vec![a(k, true)], invert(&down(j - 1)), vec![a(k, false)], conj_tj.to_vec(), vec![a(k, true)], down(j - 1), vec![a(k, false)]]
            .concat()
    } else if odd {
        vec![t(i, true), t(j, false), t(i, false)]
    } else {
        let mid = |inverse: bool| -> AmbWord {
            [vec![a(k, true)], invert(&down(i - 1)), vec![t(i, inverse)], down(i - 1), vec![a(k, false)]].concat()
        };
        [mid(false), vec![t(j, false)], mid(true)].concat()
    };
    reduce(&w)
}

/// Images of every ambient generator under one actor at one level; entries
/// are missing where the formula is not available.
#[derive(Debug, Clone)]
pub(crate) struct GeneratorMap {
    images: BTreeMap<AmbGen, AmbWord>,
}

impl GeneratorMap {
    fn apply(&self, w: &[AmbLetter]) -> Result<AmbWord, AmbGen> {
        let mut out = Vec::new();
        for &l in w {
            let img = self.images.get(&l.gen).ok_or(l.gen)?;
            if l.inverse {
                for &x in img.iter().rev() {
                    push(&mut out, x.inv());
                }
            } else {
                for &x in img {
                    push(&mut out, x);
                }
            }
        }
        Ok(out)
    }
}

pub(crate) fn ambient_gens(level: usize, genus: u32) -> Vec<AmbGen> {
    (2..=level).map(AmbGen::T).chain((1..=2 * genus).map(AmbGen::A)).collect()
}

pub(crate) fn forward_map(kind: ActionKind, level: usize, genus: u32, table: &PeripheralTable) -> GeneratorMap {
    let mut images = BTreeMap::new();
    for g in ambient_gens(level, genus) {
        let img = match (kind, g) {
            (ActionKind::T { r, s }, AmbGen::T(j)) => Some(relation_one(r, s, j)),
            (ActionKind::T { .. }, AmbGen::A(k)) => Some(vec![a(k, false)]),
            (ActionKind::A { i, k }, AmbGen::T(j)) => Some(relation_two(i, k, j)),
            (ActionKind::A { i, k }, AmbGen::A(target)) => table
                .get(i, k, target)
                .filter(|w| w.iter().all(|l| !matches!(l.gen, AmbGen::T(j) if j > level)))
                .cloned(),
        };
        if let Some(img) = img {
            images.insert(g, img);
        }
    }
    GeneratorMap { images }
}

/// Inverts an automorphism of the ambient free group by Nielsen reduction
/// of the image tuple, tracking preimages.
pub(crate) fn invert_map(map: &GeneratorMap, gens: &[AmbGen]) -> Option<GeneratorMap> {
    if gens.iter().any(|g| !map.images.contains_key(g)) {
        return None;
    }
    let mut images: Vec<AmbWord> = gens.iter().map(|g| map.images[g].clone()).collect();
    let mut preimages: Vec<AmbWord> = gens.iter().map(|&g| vec![AmbLetter { gen: g, inverse: false }]).collect();
    let total = |v: &[AmbWord]| v.iter().map(Vec::len).sum::<usize>();
    loop {
        if images.iter().all(|w| w.len() == 1) {
            break;
        }
        let current = total(&images);
        let mut best: Option<(usize, usize, AmbWord, AmbWord)> = None;
        for i in 0..images.len() {
            for l in 0..images.len() {
                if i == l {
                    continue;
                }
                for flip in [false, true] {
                    let (yl, pl) = if flip {
                        (invert(&images[l]), invert(&preimages[l]))
                    } else {
                        (images[l].clone(), preimages[l].clone())
                    };
                    let candidates = [
                        (mul(&images[i], &yl), mul(&preimages[i], &pl)),
                        (mul(&yl, &images[i]), mul(&pl, &preimages[i])),
                        (mul(&mul(&yl, &images[i]), &invert(&yl)), mul(&mul(&pl, &preimages[i]), &invert(&pl))),
                    ];
                    for (img, pre) in candidates {
                        let new_total = current - images[i].len() + img.len();
                        if new_total < current && best.as_ref().is_none_or(|b| new_total < b.0) {
                            best = Some((new_total, i, img, pre));
                        }
                    }
                }
            }
        }
        let (_, i, img, pre) = best?;
        images[i] = img;
        preimages[i] = pre;
    }
    let mut inverse = BTreeMap::new();
    for (img, pre) in images.iter().zip(&preimages) {
        let l = img[0];
        let value = if l.inverse { invert(pre) } else { pre.clone() };
        if inverse.insert(l.gen, value).is_some() {
            return None;
        }
    }
    let inv = GeneratorMap { images: inverse };
    for &g in gens {
        let x = vec![AmbLetter { gen: g, inverse: false }];
        if map.apply(&inv.apply(&x).ok()?).ok()? != x {
            return None;
        }
    }
    Some(inv)
}

/// `γ̃ T_{1,j} γ̃⁻¹` for the symbol `b(γ, j)`.
pub(crate) fn embed(symbol: &BasisSymbol) -> AmbWord {
    let gamma: AmbWord = symbol.gamma().letters().iter().map(|x| a(x.generator, x.inverse)).collect();
    let mut w = gamma.clone();
    w.push(t(symbol.strand(), false));
    w.extend(invert(&gamma));
    w
}

/// Reads an ambient word back as a word in the `b(γ, j)` basis. Every
/// `T_{1,j}` letter must be preceded by an `a`-prefix that is literally a
/// canonical surface word.
pub(crate) fn to_basis(w: &[AmbLetter], level: usize, genus: u32) -> Result<FreeWord, KError> {
    let w = reduce(w);
    let mut prefix: Vec<SurfaceLetter> = Vec::new();
    let mut letters = Vec::new();
    for l in &w {
        match l.gen {
            AmbGen::A(k) => {
                let x = SurfaceLetter::new(k, l.inverse);
                if prefix.last() == Some(&x.inv()) {
                    prefix.pop();
                } else {
                    prefix.push(x);
                }
            }
            AmbGen::T(j) => {
                let gamma = SurfaceWord::new(genus, prefix.clone())?;
                if !gamma.is_canonical() {
                    return Err(KError::ActionUndefined {
                        detail: format!("conjugator {gamma} is not a canonical surface word"),
                    });
                }
                let symbol = BasisSymbol::new(&gamma, j, level)?;
                letters.push(FreeLetter { symbol, inverse: l.inverse });
            }
        }
    }
    if !prefix.is_empty() {
        return Err(KError::ActionUndefined { detail: "image leaves the free factor".into() });
    }
    Ok(FreeWord::new(level, letters)?.free_reduce())
}

pub(crate) fn apply_map(map: &GeneratorMap, symbol: &BasisSymbol, genus: u32, actor: &ActionGenerator) -> Result<FreeWord, KError> {
    let image = map.apply(&embed(symbol)).map_err(|g| KError::ActionUndefined {
        detail: format!("{actor} on {symbol}: no peripheral rule for {}", match g {
            AmbGen::A(k) => format!("a(1,{k})"),
            AmbGen::T(j) => format!("T(1,{j})"),
        }),
    })?;
    to_basis(&image, symbol.level(), genus)
}
