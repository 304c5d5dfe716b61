//! Words in the fundamental group of a closed orientable surface of genus `g >= 1`,
//!
//! ```text
//! π₁(M) = ⟨ x_1, …, x_2g | x_1 x_2 ⋯ x_2g = x_2g ⋯ x_2 x_1 ⟩
//! ```
//!
//! Genus 1 is the free abelian group of rank 2 and is handled through exponent
//! sums. For `g >= 2` the relator `x_1 ⋯ x_2g x_1⁻¹ ⋯ x_2g⁻¹` has pieces of
//! length one, so Dehn's algorithm decides the word problem, and canonical
//! representatives are the ShortLex-least words in the closure of the
//! Dehn-reduced forms under half-relator swaps.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("malformed surface token `{0}`")]
    MalformedToken(String),
    #[error("generator index x{index} out of range 1..={max}")]
    IndexOutOfRange { index: u32, max: u32 },
    #[error("genus mismatch: {left} vs {right}")]
    GenusMismatch { left: u32, right: u32 },
    #[error("genus must be at least 1")]
    ZeroGenus,
}

impl SurfaceError {
    pub fn code(&self) -> &'static str {
        match self {
            SurfaceError::MalformedToken(_) => "surface_group::malformed_token",
            SurfaceError::IndexOutOfRange { .. } => "surface_group::index_out_of_range",
            SurfaceError::GenusMismatch { .. } => "surface_group::genus_mismatch",
            SurfaceError::ZeroGenus => "surface_group::zero_genus",
        }
    }
}

/// `x_k` or `x_k⁻¹`. Ordered `x1 < x1^-1 < x2 < x2^-1 < …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SurfaceLetter {
    pub generator: u32,
    pub inverse: bool,
}

impl SurfaceLetter {
    pub fn new(generator: u32, inverse: bool) -> Self {
        SurfaceLetter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        SurfaceLetter { generator: self.generator, inverse: !self.inverse }
    }

    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for SurfaceLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "x{}^-1", self.generator)
        } else {
            write!(f, "x{}", self.generator)
        }
    }
}

/// A word over `x_1^{±1}, …, x_{2g}^{±1}`.
///
/// Ordering is ShortLex (genus first, then length, then letters), which is
/// the order used to pick canonical representatives.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SurfaceWord {
    genus: u32,
    letters: Vec<SurfaceLetter>,
}

impl Ord for SurfaceWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.genus
            .cmp(&other.genus)
            .then(self.letters.len().cmp(&other.letters.len()))
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for SurfaceWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl SurfaceWord {
    pub fn new(genus: u32, letters: Vec<SurfaceLetter>) -> Result<Self, SurfaceError> {
        if genus == 0 {
            return Err(SurfaceError::ZeroGenus);
        }
        for l in &letters {
            if l.generator == 0 || l.generator > 2 * genus {
                return Err(SurfaceError::IndexOutOfRange { index: l.generator, max: 2 * genus });
            }
        }
        Ok(SurfaceWord { genus, letters })
    }

    pub fn identity(genus: u32) -> Self {
        assert!(genus >= 1, "genus must be at least 1");
        SurfaceWord { genus, letters: Vec::new() }
    }

    pub fn generator(genus: u32, k: u32, inverse: bool) -> Result<Self, SurfaceError> {
        SurfaceWord::new(genus, vec![SurfaceLetter::new(k, inverse)])
    }

    /// Parses `x1.x2^-1 x3`: tokens `x<k>` or `x<k>^-1` separated by dots
    /// or whitespace. The letters are kept verbatim.
    pub fn parse(genus: u32, text: &str) -> Result<Self, SurfaceError> {
        if genus == 0 {
            return Err(SurfaceError::ZeroGenus);
        }
        let mut letters = Vec::new();
        for token in text.split(|c: char| c == '.' || c.is_whitespace()) {
            if token.is_empty() {
                continue;
            }
            letters.push(parse_letter(token)?);
        }
        SurfaceWord::new(genus, letters)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn letters(&self) -> &[SurfaceLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        SurfaceWord {
            genus: self.genus,
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn free_reduce(&self) -> Self {
        SurfaceWord { genus: self.genus, letters: free_reduce(&self.letters) }
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != w[1].inv())
    }

    /// Concatenation followed by free reduction.
    pub fn product(&self, other: &SurfaceWord) -> Result<SurfaceWord, SurfaceError> {
        if self.genus != other.genus {
            return Err(SurfaceError::GenusMismatch { left: self.genus, right: other.genus });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(SurfaceWord { genus: self.genus, letters: free_reduce(&letters) })
    }

    /// Exponent sum of each generator, indexed `0..2g`.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0i64; 2 * self.genus as usize];
        for l in &self.letters {
            sums[l.generator as usize - 1] += l.exponent();
        }
        sums
    }

    pub fn is_identity(&self) -> bool {
        if self.genus == 1 {
            self.exponent_sums().iter().all(|&e| e == 0)
        } else {
            dehn_reduce(self.genus, &free_reduce(&self.letters)).is_empty()
        }
    }

    /// The designated representative of the class of `self`.
    pub fn canonical_form(&self) -> SurfaceWord {
        let letters = if self.genus == 1 {
            let sums = self.exponent_sums();
            let mut out = Vec::with_capacity((sums[0].abs() + sums[1].abs()) as usize);
            for (k, &e) in sums.iter().enumerate() {
                let l = SurfaceLetter::new(k as u32 + 1, e < 0);
                out.extend(std::iter::repeat_n(l, e.unsigned_abs() as usize));
            }
            out
        } else {
            canonical_hyperbolic(self.genus, &self.letters)
        };
        SurfaceWord { genus: self.genus, letters }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical_form() == *self
    }

    /// Equality in π₁(M).
    pub fn same_element(&self, other: &SurfaceWord) -> bool {
        self.genus == other.genus && self.canonical_form() == other.canonical_form()
    }

    /// Diagnostic for prefix-closure of the canonical language: returns the
    /// shortest prefix of a canonical word which is not itself canonical.
    /// Always `None` in genus 1.
    pub fn first_noncanonical_prefix(&self) -> Option<SurfaceWord> {
        (0..self.letters.len())
            .map(|k| SurfaceWord { genus: self.genus, letters: self.letters[..k].to_vec() })
            .find(|p| !p.is_canonical())
    }
}

impl fmt::Display for SurfaceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, l) in self.letters.iter().enumerate() {
            if idx > 0 {
                f.write_str(".")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

fn parse_letter(token: &str) -> Result<SurfaceLetter, SurfaceError> {
    let malformed = || SurfaceError::MalformedToken(token.to_string());
    let body = token.strip_prefix('x').ok_or_else(malformed)?;
    let (digits, inverse) = match body.strip_suffix("^-1") {
        Some(d) => (d, true),
        None => (body, false),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    let generator: u32 = digits.parse().map_err(|_| malformed())?;
    Ok(SurfaceLetter::new(generator, inverse))
}

pub(crate) fn free_reduce(letters: &[SurfaceLetter]) -> Vec<SurfaceLetter> {
    let mut out: Vec<SurfaceLetter> = Vec::with_capacity(letters.len());
    for &l in letters {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// `x_1 ⋯ x_2g x_1⁻¹ ⋯ x_2g⁻¹`.
pub fn relator(genus: u32) -> Vec<SurfaceLetter> {
    let forward = (1..=2 * genus).map(|k| SurfaceLetter::new(k, false));
    let backward = (1..=2 * genus).map(|k| SurfaceLetter::new(k, true));
    forward.chain(backward).collect()
}

/// All cyclic rotations of the relator and of its inverse.
fn relator_rotations(genus: u32) -> Vec<Vec<SurfaceLetter>> {
    let r = relator(genus);
    let r_inv: Vec<SurfaceLetter> = r.iter().rev().map(|l| l.inv()).collect();
    let len = r.len();
    let mut rots = Vec::with_capacity(2 * len);
    for base in [&r, &r_inv] {
        for shift in 0..len {
            rots.push((0..len).map(|t| base[(shift + t) % len]).collect());
        }
    }
    rots
}

fn invert(letters: &[SurfaceLetter]) -> Vec<SurfaceLetter> {
    letters.iter().rev().map(|l| l.inv()).collect()
}

fn common_prefix(a: &[SurfaceLetter], b: &[SurfaceLetter]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// One leftmost-longest Dehn replacement, or `None` if the word contains no
/// relator fragment longer than half the relator.
fn dehn_step(
    word: &[SurfaceLetter],
    rots: &[Vec<SurfaceLetter>],
    half: usize,
) -> Option<Vec<SurfaceLetter>> {
    for p in 0..word.len() {
        let mut best: Option<(usize, usize)> = None;
        for (ri, rot) in rots.iter().enumerate() {
            let l = common_prefix(&word[p..], rot);
            if l > half && best.is_none_or(|(bl, _)| l > bl) {
                best = Some((l, ri));
            }
        }
        if let Some((l, ri)) = best {
            let mut out = word[..p].to_vec();
            out.extend(invert(&rots[ri][l..]));
            out.extend_from_slice(&word[p + l..]);
            return Some(free_reduce(&out));
        }
    }
    None
}

fn dehn_reduce(genus: u32, word: &[SurfaceLetter]) -> Vec<SurfaceLetter> {
    let rots = relator_rotations(genus);
    let half = 2 * genus as usize;
    let mut cur = free_reduce(word);
    while let Some(next) = dehn_step(&cur, &rots, half) {
        cur = next;
    }
    cur
}

/// Words obtained by replacing one exact half of a relator rotation by the
/// inverse of the other half.
fn half_swaps(
    word: &[SurfaceLetter],
    rots: &[Vec<SurfaceLetter>],
    half: usize,
) -> Vec<Vec<SurfaceLetter>> {
    let mut out = Vec::new();
    if word.len() < half {
        return out;
    }
    for p in 0..=word.len() - half {
        for rot in rots {
            if word[p..p + half] == rot[..half] {
                let mut next = word[..p].to_vec();
                next.extend(invert(&rot[half..]));
                next.extend_from_slice(&word[p + half..]);
                out.push(next);
            }
        }
    }
    out
}

fn canonical_hyperbolic(genus: u32, word: &[SurfaceLetter]) -> Vec<SurfaceLetter> {
    let rots = relator_rotations(genus);
    let half = 2 * genus as usize;
    let reduce = |w: &[SurfaceLetter]| -> Vec<SurfaceLetter> {
        let mut cur = free_reduce(w);
        while let Some(next) = dehn_step(&cur, &rots, half) {
            cur = next;
        }
        cur
    };
    let mut start = reduce(word);
    'restart: loop {
        let mut seen: BTreeSet<ShortLex> = BTreeSet::new();
        seen.insert(ShortLex(start.clone()));
        let mut queue = VecDeque::from([start.clone()]);
        while let Some(cur) = queue.pop_front() {
            for next in half_swaps(&cur, &rots, half) {
                let next = reduce(&next);
                if next.len() < cur.len() {
                    start = next;
                    continue 'restart;
                }
                if seen.insert(ShortLex(next.clone())) {
                    queue.push_back(next);
                }
            }
        }
        return seen.into_iter().next().map(|s| s.0).unwrap_or_default();
    }
}

#[derive(PartialEq, Eq)]
struct ShortLex(Vec<SurfaceLetter>);

impl Ord for ShortLex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ShortLex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
