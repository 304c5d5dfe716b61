//! Integer formal sums over the fragment of `K_n(M)`, the map
//! `ν(u_1⋯u_l) = ∏(u_i − 1)`, and its inverse on the image.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::k_group::{KElement, KError, KGroup};
use crate::trace_monoid::{omega_graph, TraceError, TraceWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesingError {
    #[error("not in the image of ν: {0}")]
    NotInImage(String),
    #[error("malformed formal sum: {0}")]
    MalformedSum(String),
    #[error(transparent)]
    K(#[from] KError),
    #[error(transparent)]
    Trace(#[from] TraceError),
}

impl DesingError {
    pub fn code(&self) -> &'static str {
        match self {
            DesingError::NotInImage(_) => "desing::not_in_image",
            DesingError::MalformedSum(_) => "desing::malformed_sum",
            DesingError::K(e) => e.code(),
            DesingError::Trace(e) => e.code(),
        }
    }
}

/// A finite `ℤ`-combination of fragment elements; zero coefficients are
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormalSum {
    n: usize,
    terms: BTreeMap<KElement, i64>,
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    coeff: i64,
    element: String,
}

#[derive(Serialize, Deserialize)]
struct JsonSum {
    terms: Vec<JsonTerm>,
}

impl FormalSum {
    pub fn zero(n: usize) -> Self {
        FormalSum { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        FormalSum::monomial(KElement::identity(n), 1)
    }

    pub fn monomial(x: KElement, coeff: i64) -> Self {
        let mut s = FormalSum::zero(x.n());
        s.add_term(x, coeff);
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<KElement, i64> {
        &self.terms
    }

    pub fn coeff(&self, x: &KElement) -> i64 {
        self.terms.get(x).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, x: KElement, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let c = self.terms.entry(x).or_default();
        *c += coeff;
        if *c == 0 {
            self.terms.retain(|_, c| *c != 0);
        }
    }

    pub fn add(&self, other: &FormalSum) -> FormalSum {
        let mut out = self.clone();
        for (x, c) in &other.terms {
            out.add_term(x.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &FormalSum) -> FormalSum {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, factor: i64) -> FormalSum {
        let mut out = FormalSum::zero(self.n);
        for (x, c) in &self.terms {
            out.add_term(x.clone(), c * factor);
        }
        out
    }

    pub fn mul(&self, k: &KGroup, other: &FormalSum) -> Result<FormalSum, DesingError> {
        let mut out = FormalSum::zero(self.n);
        for (x, a) in &self.terms {
            for (y, b) in &other.terms {
                out.add_term(k.multiply(x, y)?, a * b);
            }
        }
        Ok(out)
    }

    /// Hash of the sorted `(key, coefficient)` pairs.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        for (x, c) in &self.terms {
            x.to_string().hash(&mut h);
            c.hash(&mut h);
        }
        h.finish()
    }

    /// Terms of degree exactly `q`.
    pub fn graded_component(&self, q: i64) -> FormalSum {
        self.filter(|x| x.deg() == q)
    }

    /// Terms whose `κ` vector is supported on `pairs`.
    pub fn kappa_filter(&self, pairs: &BTreeSet<(usize, usize)>) -> FormalSum {
        self.filter(|x| x.kappa().keys().all(|p| pairs.contains(p)))
    }

    fn filter<F: Fn(&KElement) -> bool>(&self, keep: F) -> FormalSum {
        let terms = self.terms.iter().filter(|(x, _)| keep(x)).map(|(x, c)| (x.clone(), *c)).collect();
        FormalSum { n: self.n, terms }
    }

    /// Degrees with a nonzero component, ascending.
    pub fn degrees(&self) -> BTreeSet<i64> {
        self.terms.keys().map(KElement::deg).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms = self.terms.iter().map(|(x, c)| JsonTerm { coeff: *c, element: x.to_string() }).collect();
        serde_json::to_value(JsonSum { terms }).expect("plain data")
    }

    pub fn from_json(text: &str, k: &KGroup) -> Result<FormalSum, DesingError> {
        let parsed: JsonSum = serde_json::from_str(text).map_err(|e| DesingError::MalformedSum(e.to_string()))?;
        let mut out = FormalSum::zero(k.n());
        for t in parsed.terms {
            out.add_term(k.parse_element(&t.element)?, t.coeff);
        }
        Ok(out)
    }
}

/// `∏ (u_i − 1)` in the order given.
pub fn nu(k: &KGroup, letters: &[KElement]) -> Result<FormalSum, DesingError> {
    let mut acc = FormalSum::one(k.n());
    for u in letters {
        let factor = FormalSum::monomial(u.clone(), 1).add(&FormalSum::one(k.n()).scale(-1));
        acc = acc.mul(k, &factor)?;
    }
    Ok(acc)
}

pub fn nu_word(k: &KGroup, w: &TraceWord<KElement>) -> Result<FormalSum, DesingError> {
    nu(k, w.letters())
}

/// `Σ_q (−1)^{l−q} Σ_{|I|=q} ᾱ(I)` where `ᾱ(I)` is the ordered product of
/// the letters indexed by `I`.
pub fn nu_by_subindex(k: &KGroup, letters: &[KElement]) -> Result<FormalSum, DesingError> {
    let l = letters.len();
    let mut out = FormalSum::zero(k.n());
    for mask in 0u64..(1u64 << l) {
        let picked: Vec<&KElement> = (0..l).filter(|i| mask & (1 << i) != 0).map(|i| &letters[i]).collect();
        let sign = if (l - picked.len()).is_multiple_of(2) { 1 } else { -1 };
        out.add_term(k.product(picked)?, sign);
    }
    Ok(out)
}

/// `Σ_{|I|=q} ᾱ(I)` for `q = 0..=l`, read off the graded components of `P`.
fn subindex_sums(p: &FormalSum, l: usize) -> Vec<FormalSum> {
    (0..=l)
        .map(|q| {
            let sign = if (l - q).is_multiple_of(2) { 1 } else { -1 };
            p.graded_component(q as i64).scale(sign)
        })
        .collect()
}

fn is_multiset(s: &FormalSum) -> bool {
    s.terms.values().all(|&c| c > 0)
}

/// Given the subindex sums of `u·β`, returns those of `β`, or `None` when
/// `u` cannot be the first letter.
fn peel(k: &KGroup, sums: &[FormalSum], u: &KElement) -> Result<Option<Vec<FormalSum>>, DesingError> {
    let l = sums.len() - 1;
    let left = FormalSum::monomial(u.clone(), 1);
    let mut out = vec![FormalSum::one(k.n())];
    for q in 1..l {
        let next = sums[q].sub(&left.mul(k, &out[q - 1])?);
        if !is_multiset(&next) || next.terms.values().sum::<i64>() != binomial(l - 1, q) {
            return Ok(None);
        }
        out.push(next);
    }
    if sums[l] != left.mul(k, &out[l - 1])? {
        return Ok(None);
    }
    Ok(Some(out))
}

fn binomial(n: usize, q: usize) -> i64 {
    (0..q).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

type Memo = HashMap<u64, Vec<(Vec<FormalSum>, Option<Vec<KElement>>)>>;

struct Decoder<'a> {
    k: &'a KGroup,
    memo: Memo,
}

impl Decoder<'_> {
    fn run(&mut self, sums: &[FormalSum]) -> Result<Option<Vec<KElement>>, DesingError> {
        let l = sums.len() - 1;
        if l == 0 {
            return Ok((sums[0] == FormalSum::one(self.k.n())).then(Vec::new));
        }
        let fp = {
            let mut h = DefaultHasher::new();
            for s in sums {
                s.fingerprint().hash(&mut h);
            }
            h.finish()
        };
        if let Some(hit) = self.memo.get(&fp).and_then(|v| v.iter().find(|(key, _)| key == sums)) {
            return Ok(hit.1.clone());
        }
        let result = self.search(sums)?;
        self.memo.entry(fp).or_default().push((sums.to_vec(), result.clone()));
        Ok(result)
    }

    fn search(&mut self, sums: &[FormalSum]) -> Result<Option<Vec<KElement>>, DesingError> {
        let l = sums.len() - 1;
        let letters = &sums[1];
        if !is_multiset(letters) || letters.terms.values().sum::<i64>() != l as i64 {
            return Ok(None);
        }
        for u in letters.terms.keys() {
            if !self.block_allows(sums, u)? {
                continue;
            }
            let Some(rest) = peel(self.k, sums, u)? else { continue };
            if let Some(mut tail) = self.run(&rest)? {
                tail.insert(0, u.clone());
                return Ok(Some(tail));
            }
        }
        Ok(None)
    }

    /// `u` must also lead the subword of letters sharing its strand pair,
    /// whose subindex sums are the `κ`-filtered part of the input.
    fn block_allows(&self, sums: &[FormalSum], u: &KElement) -> Result<bool, DesingError> {
        let pair = u.upsilon_classify()?;
        let only = BTreeSet::from([pair]);
        let block: Vec<FormalSum> = sums.iter().map(|s| s.kappa_filter(&only)).collect();
        let p = block[1].terms.values().sum::<i64>() as usize;
        if p == sums.len() - 1 {
            return Ok(true);
        }
        Ok(peel(self.k, &block[..=p], u)?.is_some())
    }
}

/// Recovers `α` from `P = ν(α)` and returns it in Foata normal form.
pub fn decode(k: &KGroup, p: &FormalSum) -> Result<TraceWord<KElement>, DesingError> {
    let not_in_image = |why: &str| DesingError::NotInImage(why.to_string());
    let degrees = p.degrees();
    let l = *degrees.iter().next_back().ok_or_else(|| not_in_image("zero sum"))?;
    if degrees.iter().any(|&d| d < 0) {
        return Err(not_in_image("negative degree"));
    }
    let l = l as usize;
    let sums = subindex_sums(p, l);
    if sums.iter().map(|s| s.terms.len()).sum::<usize>() != p.terms.len() {
        return Err(not_in_image("terms outside degrees 0..=l"));
    }
    let mut decoder = Decoder { k, memo: HashMap::new() };
    let letters = decoder.run(&sums)?.ok_or_else(|| not_in_image("no first letter survives"))?;
    if nu(k, &letters)? != *p {
        return Err(not_in_image("decoded word does not reproduce the input"));
    }
    let graph = Arc::new(omega_graph(k, letters.iter().cloned())?);
    Ok(TraceWord::new(graph, letters)?.canonical())
}

/// Every word over `gens` of length at most `lmax` with `ν(word) = P`, one
/// per trace class, in Foata normal form and sorted.
pub fn brute_force_preimage(
    k: &KGroup,
    p: &FormalSum,
    gens: &[KElement],
    lmax: usize,
) -> Result<Vec<TraceWord<KElement>>, DesingError> {
    let alphabet: Vec<KElement> = gens.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let graph = Arc::new(omega_graph(k, alphabet.iter().cloned())?);
    let mut found: BTreeSet<Vec<KElement>> = BTreeSet::new();
    let mut stack: Vec<(Vec<KElement>, FormalSum)> = vec![(Vec::new(), FormalSum::one(k.n()))];
    while let Some((word, value)) = stack.pop() {
        if value == *p {
            let w = TraceWord::new(graph.clone(), word.clone())?;
            found.insert(w.canonical().letters().to_vec());
        }
        if word.len() == lmax {
            continue;
        }
        for u in &alphabet {
            let factor = FormalSum::monomial(u.clone(), 1).add(&FormalSum::one(k.n()).scale(-1));
            let mut next = word.clone();
            next.push(u.clone());
            stack.push((next, value.mul(k, &factor)?));
        }
    }
    found.into_iter().map(|letters| Ok(TraceWord::new(graph.clone(), letters)?)).collect()
}
