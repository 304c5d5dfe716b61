use std::fmt;

use serde::Serialize;

use super::{a2_letters, a_letters, invert_letters, t_letters, BraidError, BraidLetter, BraidWord};

/// One defining relation of `B_n(M)` or `SB_n(M)` with its parameters fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Relation {
    /// `σ_i σ_i⁻¹ = 1`, or `σ_i⁻¹ σ_i = 1` when `inverse_first`.
    R0Sigma { i: usize, inverse_first: bool },
    /// `a_k a_k⁻¹ = 1`, or `a_k⁻¹ a_k = 1` when `inverse_first`.
    R0A { k: usize, inverse_first: bool },
    R1 { i: usize, j: usize },
    R2 { i: usize },
    R3,
    R4 { r: usize, s: usize },
    R5 { r: usize },
    R6 { r: usize, i: usize },
    R7 { i: usize, j: usize },
    R8 { i: usize, j: usize },
    R9 { i: usize },
    R10 { i: usize, j: usize },
    R11 { i: usize, r: usize },
    R12 { i: usize, j: usize, r: usize },
    R7p { i: usize, j: usize },
    R8p { i: usize, j: usize },
    R9p { i: usize },
    R10p { i: usize, j: usize },
    R11p { i: usize, r: usize },
    R12p { i: usize, j: usize, r: usize },
    /// `T_{r,s} T_{1,j} T_{r,s}⁻¹ = …` (conjugation of `T_{1,j}` by `T_{r,s}`).
    Conj1 { r: usize, s: usize, j: usize },
    /// `a_{i,k} T_{1,j} a_{i,k}⁻¹ = …` (conjugation of `T_{1,j}` by `a_{i,k}`).
    Conj2 { i: usize, k: usize, j: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    LeftToRight,
    RightToLeft,
}

/// A relation applied at a letter position; left-to-right replaces an
/// occurrence of the left side by the right side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RelationInstance {
    pub relation: Relation,
    pub position: usize,
    pub direction: Direction,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Relation::*;
        match *self {
            R0Sigma { i, inverse_first } => write!(f, "R0(s{i}{})", if inverse_first { ",inv" } else { "" }),
            R0A { k, inverse_first } => write!(f, "R0(a{k}{})", if inverse_first { ",inv" } else { "" }),
            R1 { i, j } => write!(f, "R1(i={i},j={j})"),
            R2 { i } => write!(f, "R2(i={i})"),
            R3 => write!(f, "R3"),
            R4 { r, s } => write!(f, "R4(r={r},s={s})"),
            R5 { r } => write!(f, "R5(r={r})"),
            R6 { r, i } => write!(f, "R6(r={r},i={i})"),
            R7 { i, j } => write!(f, "R7(i={i},j={j})"),
            R8 { i, j } => write!(f, "R8(i={i},j={j})"),
            R9 { i } => write!(f, "R9(i={i})"),
            R10 { i, j } => write!(f, "R10(i={i},j={j})"),
            R11 { i, r } => write!(f, "R11(i={i},r={r})"),
            R12 { i, j, r } => write!(f, "R12(i={i},j={j},r={r})"),
            R7p { i, j } => write!(f, "R7'(i={i},j={j})"),
            R8p { i, j } => write!(f, "R8'(i={i},j={j})"),
            R9p { i } => write!(f, "R9'(i={i})"),
            R10p { i, j } => write!(f, "R10'(i={i},j={j})"),
            R11p { i, r } => write!(f, "R11'(i={i},r={r})"),
            R12p { i, j, r } => write!(f, "R12'(i={i},j={j},r={r})"),
            Conj1 { r, s, j } => write!(f, "conj-T(r={r},s={s},j={j})"),
            Conj2 { i, k, j } => write!(f, "conj-a(i={i},k={k},j={j})"),
        }
    }
}

fn s(i: usize) -> BraidLetter {
    BraidLetter::sigma(i)
}

fn t_pow(i: usize, j: usize, inverse: bool) -> Vec<BraidLetter> {
    let w = t_letters(i, j);
    if inverse {
        invert_letters(&w)
    } else {
        w
    }
}

fn a_pow(i: usize, k: usize, inverse: bool) -> Vec<BraidLetter> {
    let w = a_letters(i, k);
    if inverse {
        invert_letters(&w)
    } else {
        w
    }
}

fn cat(parts: &[&[BraidLetter]]) -> Vec<BraidLetter> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

impl Relation {
    /// All parameter choices valid for the given shape.
    pub fn catalog(n: usize, genus: usize) -> Vec<Relation> {
        use Relation::*;
        let mut out = Vec::new();
        let idx: Vec<usize> = (1..n).collect();
        let ks: Vec<usize> = (1..=2 * genus).collect();
        for &i in &idx {
            for inverse_first in [false, true] {
                out.push(R0Sigma { i, inverse_first });
            }
        }
        for &k in &ks {
            for inverse_first in [false, true] {
                out.push(R0A { k, inverse_first });
            }
        }
        for &i in &idx {
            out.push(R9 { i });
            out.push(R9p { i });
            if i + 1 < n {
                out.push(R2 { i });
            }
            for &j in &idx {
                if i.abs_diff(j) >= 2 {
                    out.extend([R1 { i, j }, R7 { i, j }, R8 { i, j }, R7p { i, j }, R8p { i, j }]);
                }
                if i.abs_diff(j) == 1 {
                    out.extend([R10 { i, j }, R10p { i, j }]);
                }
            }
            for &r in &ks {
                out.extend([R11 { i, r }, R11p { i, r }]);
                for j in 1..=n {
                    if j != i && j != i + 1 {
                        out.extend([R12 { i, j, r }, R12p { i, j, r }]);
                    }
                }
            }
        }
        out.push(R3);
        for &r in &ks {
            out.push(R5 { r });
            for &s2 in &ks {
                if r != s2 {
                    out.push(R4 { r, s: s2 });
                }
            }
            for i in 2..n {
                out.push(R6 { r, i });
            }
        }
        for r in 2..=n {
            for s2 in r + 1..=n {
                for j in 2..=n {
                    out.push(Conj1 { r, s: s2, j });
                }
            }
        }
        for i in 2..=n {
            for &k in &ks {
                for j in 2..=n {
                    out.push(Conj2 { i, k, j });
                }
            }
        }
        out
    }

    /// The (left, right) sides as letter sequences, after checking the
    /// printed side conditions.
    pub fn sides(&self, n: usize, genus: usize) -> Result<(Vec<BraidLetter>, Vec<BraidLetter>), BraidError> {
        use Relation::*;
        let fail = |detail: &str| {
            Err(BraidError::SideCondition { relation: self.to_string(), detail: detail.to_string() })
        };
        let sig = |i: usize| (1..n).contains(&i);
        let gen_k = |k: usize| (1..=2 * genus).contains(&k);
        let strand = |i: usize| (1..=n).contains(&i);
        match *self {
            R0Sigma { i, inverse_first } => {
                if !sig(i) {
                    return fail("need 1 <= i <= n-1");
                }
                let pair = if inverse_first { vec![BraidLetter::sigma_inv(i), s(i)] } else { vec![s(i), BraidLetter::sigma_inv(i)] };
                Ok((pair, vec![]))
            }
            R0A { k, inverse_first } => {
                if !gen_k(k) {
                    return fail("need 1 <= k <= 2g");
                }
                let pair = if inverse_first {
                    vec![BraidLetter::a_inv(k), BraidLetter::a(k)]
                } else {
                    vec![BraidLetter::a(k), BraidLetter::a_inv(k)]
                };
                Ok((pair, vec![]))
            }
            R1 { i, j } | R7 { i, j } | R8 { i, j } | R7p { i, j } | R8p { i, j } => {
                if !(sig(i) && sig(j) && i.abs_diff(j) >= 2) {
                    return fail("need |i-j| >= 2");
                }
                let (x, y) = match *self {
                    R1 { .. } => (s(i), s(j)),
                    R7 { .. } => (s(i), BraidLetter::Tau(j)),
                    R8 { .. } => (BraidLetter::Tau(i), BraidLetter::Tau(j)),
                    R7p { .. } => (s(i), BraidLetter::Delta(j)),
                    _ => (BraidLetter::Delta(i), BraidLetter::Delta(j)),
                };
                Ok((vec![x, y], vec![y, x]))
            }
            R2 { i } => {
                if !(i >= 1 && i + 1 < n) {
                    return fail("need 1 <= i <= n-2");
                }
                Ok((vec![s(i), s(i + 1), s(i)], vec![s(i + 1), s(i), s(i + 1)]))
            }
            R3 => {
                let mut lhs: Vec<BraidLetter> = (1..=2 * genus).map(BraidLetter::a).collect();
                lhs.extend((1..=2 * genus).map(BraidLetter::a_inv));
                let mut rhs: Vec<BraidLetter> = (1..n - 1).map(s).collect();
                rhs.push(s(n - 1));
                rhs.push(s(n - 1));
                rhs.extend((1..n - 1).rev().map(s));
                Ok((lhs, rhs))
            }
            R4 { r, s: s2 } => {
                if !(gen_k(r) && gen_k(s2) && r != s2) {
                    return fail("need 1 <= r,s <= 2g and r != s");
                }
                let a2 = a2_letters(s2, genus);
                Ok((cat(&[&[BraidLetter::a(r)], &a2]), cat(&[&a2, &[BraidLetter::a(r)]])))
            }
            R5 { r } => {
                if !gen_k(r) {
                    return fail("need 1 <= r <= 2g");
                }
                let prefix: Vec<BraidLetter> = (1..=r).map(BraidLetter::a).collect();
                let a2 = a2_letters(r, genus);
                Ok((cat(&[&prefix, &a2]), cat(&[&[s(1), s(1)], &a2, &prefix])))
            }
            R6 { r, i } => {
                if !(gen_k(r) && i >= 2 && i < n) {
                    return fail("need 1 <= r <= 2g and 2 <= i <= n-1");
                }
                Ok((vec![BraidLetter::a(r), s(i)], vec![s(i), BraidLetter::a(r)]))
            }
            R9 { i } | R9p { i } => {
                if !sig(i) {
                    return fail("need 1 <= i <= n-1");
                }
                let x = if matches!(self, R9 { .. }) { BraidLetter::Tau(i) } else { BraidLetter::Delta(i) };
                Ok((vec![s(i), x], vec![x, s(i)]))
            }
            R10 { i, j } | R10p { i, j } => {
                if !(sig(i) && sig(j) && i.abs_diff(j) == 1) {
                    return fail("need |i-j| = 1");
                }
                let (xi, xj) = if matches!(self, R10 { .. }) {
                    (BraidLetter::Tau(i), BraidLetter::Tau(j))
                } else {
                    (BraidLetter::Delta(i), BraidLetter::Delta(j))
                };
                Ok((vec![s(i), s(j), xi], vec![xj, s(i), s(j)]))
            }
            R11 { i, r } | R11p { i, r } => {
                if !(sig(i) && gen_k(r)) {
                    return fail("need 1 <= i <= n-1 and 1 <= r <= 2g");
                }
                let x = if matches!(self, R11 { .. }) { BraidLetter::Tau(i) } else { BraidLetter::Delta(i) };
                let lhs = cat(&[
                    &a_pow(i, r, false),
                    &a_pow(i + 1, r, false),
                    &[x],
                    &a_pow(i + 1, r, true),
                    &a_pow(i, r, true),
                ]);
                Ok((lhs, vec![x]))
            }
            R12 { i, j, r } | R12p { i, j, r } => {
                if !(sig(i) && strand(j) && j != i && j != i + 1 && gen_k(r)) {
                    return fail("need j != i, i+1 and 1 <= r <= 2g");
                }
                let x = if matches!(self, R12 { .. }) { BraidLetter::Tau(i) } else { BraidLetter::Delta(i) };
                let a = a_pow(j, r, false);
                Ok((cat(&[&[x], &a]), cat(&[&a, &[x]])))
            }
            Conj1 { r, s: s2, j } => {
                if !(1 < r && r < s2 && s2 <= n && (2..=n).contains(&j)) {
                    return fail("need 1 < r < s <= n and 2 <= j <= n");
                }
                let lhs = cat(&[&t_pow(r, s2, false), &t_pow(1, j, false), &t_pow(r, s2, true)]);
                let t = |x: usize, inv: bool| t_pow(1, x, inv);
                let rhs = if j < r || j > s2 {
                    t(j, false)
                } else if j == r {
                    cat(&[&t(j, true), &t(s2, true), &t(j, false), &t(s2, false), &t(j, false)])
                } else if j < s2 {
                    cat(&[
                        &t(r, true),
                        &t(s2, true),
                        &t(r, false),
                        &t(s2, false),
                        &t(j, false),
                        &t(s2, true),
                        &t(r, true),
                        &t(s2, false),
                        &t(r, false),
                    ])
                } else {
                    cat(&[&t(r, true), &t(j, false), &t(r, false)])
                };
                Ok((lhs, rhs))
            }
            Conj2 { i, k, j } => {
                if !((2..=n).contains(&i) && gen_k(k) && (2..=n).contains(&j)) {
                    return fail("need 2 <= i <= n, 1 <= k <= 2g, 2 <= j <= n");
                }
                let lhs = cat(&[&a_pow(i, k, false), &t_pow(1, j, false), &a_pow(i, k, true)]);
                let t = |x: usize, inv: bool| t_pow(1, x, inv);
                let a = BraidLetter::a(k);
                let ai = BraidLetter::a_inv(k);
                let odd = k % 2 == 1;
                // T_{1,hi} ⋯ T_{1,2} and T_{1,2}⁻¹ ⋯ T_{1,hi}⁻¹
                let down = |hi: usize| -> Vec<BraidLetter> { (2..=hi).rev().flat_map(|x| t(x, false)).collect() };
                let up_inv = |hi: usize| -> Vec<BraidLetter> { (2..=hi).flat_map(|x| t(x, true)).collect() };
                let conj_tj = cat(&[&[ai], &t(j, false), &[a]]);
                let rhs = if i > j {
                    t(j, false)
                } else if i == j && odd {
                    cat(&[&down(j - 1), &conj_tj, &invert_letters(&down(j - 1))])
                } else if i == j {
                    cat(&[&[ai], &up_inv(j - 1), &[a], &conj_tj, &[ai], &down(j - 1), &[a]])
                } else if odd {
                    cat(&[&t(i, true), &t(j, false), &t(i, false)])
                } else {
                    let left = cat(&[&[ai], &up_inv(i - 1), &t(i, false), &down(i - 1), &[a]]);
                    let right = cat(&[&[ai], &up_inv(i - 1), &t(i, true), &down(i - 1), &[a]]);
                    cat(&[&left, &t(j, false), &right])
                };
                Ok((lhs, rhs))
            }
        }
    }
}

/// Replaces the matched side of `inst` in `w` by the other side.
pub fn apply_relation(w: &BraidWord, inst: &RelationInstance) -> Result<BraidWord, BraidError> {
    let (lhs, rhs) = inst.relation.sides(w.n(), w.genus())?;
    let (from, to) = match inst.direction {
        Direction::LeftToRight => (lhs, rhs),
        Direction::RightToLeft => (rhs, lhs),
    };
    let letters = w.letters();
    let p = inst.position;
    let end = p.checked_add(from.len()).filter(|&e| e <= letters.len());
    match end {
        Some(e) if letters[p..e] == from[..] => {
            let mut out = letters[..p].to_vec();
            out.extend_from_slice(&to);
            out.extend_from_slice(&letters[e..]);
            Ok(w.with_letters(out))
        }
        _ => Err(BraidError::NoMatch { relation: inst.relation.to_string(), position: p }),
    }
}

/// A word together with the log of every relation applied to it.
#[derive(Debug, Clone)]
pub struct Rewriter {
    word: BraidWord,
    log: Vec<RelationInstance>,
}

impl Rewriter {
    pub fn new(word: BraidWord) -> Self {
        Rewriter { word, log: Vec::new() }
    }

    pub fn apply(&mut self, inst: RelationInstance) -> Result<(), BraidError> {
        self.word = apply_relation(&self.word, &inst)?;
        self.log.push(inst);
        Ok(())
    }

    pub fn word(&self) -> &BraidWord {
        &self.word
    }

    pub fn log(&self) -> &[RelationInstance] {
        &self.log
    }

    pub fn into_parts(self) -> (BraidWord, Vec<RelationInstance>) {
        (self.word, self.log)
    }
}

/// Every instance (relation, position, direction) that applies to `w`.
pub fn applicable_instances(w: &BraidWord) -> Vec<RelationInstance> {
    let mut out = Vec::new();
    for relation in Relation::catalog(w.n(), w.genus()) {
        for direction in [Direction::LeftToRight, Direction::RightToLeft] {
            for position in 0..=w.len() {
                let inst = RelationInstance { relation, position, direction };
                if apply_relation(w, &inst).is_ok() {
                    out.push(inst);
                }
            }
        }
    }
    out
}
