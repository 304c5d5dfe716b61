//! Graph monoids `M(Γ) = ⟨X | xy = yx for {x, y} ∈ E(Γ)⟩` over an arbitrary
//! ordered alphabet, with Foata normal forms.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde_json::json;
use thiserror::Error;

use crate::braid_presentations::{BraidLetter, HatSymbol};
use crate::free_tower::{BasisSymbol, FreeLetter, FreeWord};
use crate::k_group::{KElement, KError, KGroup, UpsilonElement};
use crate::surface_group::{SurfaceLetter, SurfaceWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("`{0}` is not a vertex of the graph")]
    UnknownVertex(String),
    #[error("loop at `{0}`")]
    Loop(String),
    #[error("words live over different graphs")]
    GraphMismatch,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("{first} and {second} are not adjacent")]
    NotAdjacent { first: String, second: String },
    #[error("conjugator `{0}` is outside the representable fragment")]
    Unrepresentable(String),
    #[error(transparent)]
    K(#[from] KError),
}

impl TraceError {
    pub fn code(&self) -> &'static str {
        match self {
            TraceError::UnknownVertex(_) => "trace_monoid::unknown_vertex",
            TraceError::Loop(_) => "trace_monoid::loop",
            TraceError::GraphMismatch => "trace_monoid::graph_mismatch",
            TraceError::Precondition(_) => "trace_monoid::precondition",
            TraceError::NotAdjacent { .. } => "trace_monoid::not_adjacent",
            TraceError::Unrepresentable(_) => "trace_monoid::unrepresentable",
            TraceError::K(e) => e.code(),
        }
    }
}

/// A simple graph on an ordered vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutationGraph<V> {
    vertices: BTreeSet<V>,
    edges: BTreeSet<(V, V)>,
}

impl<V: Ord + Clone + fmt::Debug> CommutationGraph<V> {
    pub fn new<I, E>(vertices: I, edges: E) -> Result<Self, TraceError>
    where
        I: IntoIterator<Item = V>,
        E: IntoIterator<Item = (V, V)>,
    {
        let vertices: BTreeSet<V> = vertices.into_iter().collect();
        let mut stored = BTreeSet::new();
        for (a, b) in edges {
            for v in [&a, &b] {
                if !vertices.contains(v) {
                    return Err(TraceError::UnknownVertex(format!("{v:?}")));
                }
            }
            if a == b {
                return Err(TraceError::Loop(format!("{a:?}")));
            }
            stored.insert(if a < b { (a, b) } else { (b, a) });
        }
        Ok(CommutationGraph { vertices, edges: stored })
    }

    pub fn vertices(&self) -> impl Iterator<Item = &V> {
        self.vertices.iter()
    }

    pub fn edges(&self) -> impl Iterator<Item = &(V, V)> {
        self.edges.iter()
    }

    pub fn contains(&self, v: &V) -> bool {
        self.vertices.contains(v)
    }

    pub fn adjacent(&self, a: &V, b: &V) -> bool {
        let key = if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        self.edges.contains(&key)
    }
}

impl<V: Ord + Clone + fmt::Debug + fmt::Display> CommutationGraph<V> {
    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        let edges: Vec<[String; 2]> = self.edges.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect();
        json!({"vertices": vertices, "edges": edges})
    }
}

/// A word in `M(Γ)`.
#[derive(Debug, Clone)]
pub struct TraceWord<V> {
    graph: Arc<CommutationGraph<V>>,
    letters: Vec<V>,
}

impl<V: Ord + Clone + fmt::Debug> TraceWord<V> {
    pub fn new(graph: Arc<CommutationGraph<V>>, letters: Vec<V>) -> Result<Self, TraceError> {
        if let Some(bad) = letters.iter().find(|l| !graph.contains(l)) {
            return Err(TraceError::UnknownVertex(format!("{bad:?}")));
        }
        Ok(TraceWord { graph, letters })
    }

    pub fn graph(&self) -> &Arc<CommutationGraph<V>> {
        &self.graph
    }

    pub fn letters(&self) -> &[V] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Blocks of pairwise-adjacent letters, each sorted; every letter sits in
    /// the earliest block after all earlier letters it does not commute with.
    pub fn foata_normal_form(&self) -> Vec<Vec<V>> {
        let mut depth = Vec::with_capacity(self.letters.len());
        let mut blocks: Vec<Vec<V>> = Vec::new();
        for (i, x) in self.letters.iter().enumerate() {
            let d = (0..i)
                .filter(|&j| !self.graph.adjacent(&self.letters[j], x))
                .map(|j| depth[j] + 1)
                .max()
                .unwrap_or(0);
            depth.push(d);
            if blocks.len() <= d {
                blocks.resize_with(d + 1, Vec::new);
            }
            blocks[d].push(x.clone());
        }
        for b in &mut blocks {
            b.sort();
        }
        blocks
    }

    /// The letters of the Foata normal form read block by block.
    pub fn canonical(&self) -> TraceWord<V> {
        let letters = self.foata_normal_form().into_iter().flatten().collect();
        TraceWord { graph: self.graph.clone(), letters }
    }

    fn same_graph(&self, other: &TraceWord<V>) -> Result<(), TraceError> {
        if Arc::ptr_eq(&self.graph, &other.graph) || *self.graph == *other.graph {
            Ok(())
        } else {
            Err(TraceError::GraphMismatch)
        }
    }

    pub fn trace_equal(&self, other: &TraceWord<V>) -> Result<bool, TraceError> {
        self.same_graph(other)?;
        Ok(self.len() == other.len() && self.foata_normal_form() == other.foata_normal_form())
    }

    pub fn concat(&self, other: &TraceWord<V>) -> Result<TraceWord<V>, TraceError> {
        self.same_graph(other)?;
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Ok(TraceWord { graph: self.graph.clone(), letters })
    }
}

impl<V: fmt::Display> fmt::Display for TraceWord<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(", "))
    }
}

/// Witness that every `y_i` with `i < k` commutes with `x_1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommuterCertificate<V> {
    pub pairs: Vec<(V, V)>,
}

/// For `x_1⋯x_l = y_1⋯y_l` with `y_k = x_1` the first occurrence of `x_1`
/// in `y` (`k` is 1-based), checks `{y_i, x_1} ∈ E` for all `i < k`.
pub fn leading_commuters<V: Ord + Clone + fmt::Debug>(
    x: &TraceWord<V>,
    y: &TraceWord<V>,
    k: usize,
) -> Result<CommuterCertificate<V>, TraceError> {
    if !x.trace_equal(y)? {
        return Err(TraceError::Precondition("words are not trace-equal".into()));
    }
    let x1 = x.letters.first().ok_or_else(|| TraceError::Precondition("empty word".into()))?;
    if k == 0 || k > y.len() || &y.letters[k - 1] != x1 {
        return Err(TraceError::Precondition(format!("y_{k} is not x_1")));
    }
    if y.letters[..k - 1].contains(x1) {
        return Err(TraceError::Precondition("x_1 occurs in y before position k".into()));
    }
    let mut pairs = Vec::with_capacity(k - 1);
    for yi in &y.letters[..k - 1] {
        if !x.graph.adjacent(yi, x1) {
            return Err(TraceError::NotAdjacent { first: format!("{yi:?}"), second: format!("{x1:?}") });
        }
        pairs.push((yi.clone(), x1.clone()));
    }
    Ok(CommuterCertificate { pairs })
}

/// The graph `Ω` restricted to the given generators: vertices are the
/// distinct elements, edges join commuting pairs.
pub fn build_omega_fragment(k: &KGroup, gens: &[UpsilonElement]) -> Result<CommutationGraph<KElement>, TraceError> {
    let vertices: BTreeSet<KElement> = gens.iter().map(|u| u.to_element(k.n())).collect::<Result<_, _>>()?;
    omega_graph(k, vertices)
}

/// Commutation graph of `Ω` on an arbitrary set of fragment elements.
pub fn omega_graph<I: IntoIterator<Item = KElement>>(k: &KGroup, vertices: I) -> Result<CommutationGraph<KElement>, TraceError> {
    let vertices: BTreeSet<KElement> = vertices.into_iter().collect();
    let list: Vec<&KElement> = vertices.iter().collect();
    let mut edges = Vec::new();
    for (i, a) in list.iter().enumerate() {
        for b in &list[i + 1..] {
            if k.commutes(a, b)? {
                edges.push(((*a).clone(), (*b).clone()));
            }
        }
    }
    CommutationGraph::new(vertices.iter().cloned(), edges)
}

/// Image of `α δ_i α⁻¹` under `φ`, namely `α σ_i² α⁻¹` as an element of the
/// fragment. Trailing letters of `α` commuting with `σ_i²` are dropped
/// first; what remains must be empty, or for `i = 1` a canonical word in
/// the `a_k`.
pub fn phi_symbol(k: &KGroup, h: &HatSymbol) -> Result<KElement, TraceError> {
    let i = h.index;
    let mut alpha: Vec<BraidLetter> = h.conj.free_cancel().letters().to_vec();
    while let Some(&last) = alpha.last() {
        let commutes = match last {
            BraidLetter::Sigma { i: j, .. } => j == i || j.abs_diff(i) >= 2,
            BraidLetter::A { .. } => i >= 2,
            _ => false,
        };
        if !commutes {
            break;
        }
        alpha.pop();
    }
    let unrepresentable = || TraceError::Unrepresentable(h.conj.to_string());
    let n = k.n();
    if i >= 2 {
        if !alpha.is_empty() {
            return Err(unrepresentable());
        }
        let level = n - i + 1;
        let symbol = BasisSymbol::core(k.genus(), 2, level).map_err(KError::from)?;
        return Ok(KElement::from_symbol(n, &symbol)?);
    }
    let mut gamma = Vec::with_capacity(alpha.len());
    for l in alpha {
        match l {
            BraidLetter::A { k: idx, inverse } => gamma.push(SurfaceLetter::new(idx as u32, inverse)),
            _ => return Err(unrepresentable()),
        }
    }
    let gamma = SurfaceWord::new(k.genus(), gamma).map_err(KError::from)?;
    if !gamma.is_canonical() {
        return Err(unrepresentable());
    }
    let symbol = BasisSymbol::new(&gamma, 2, n).map_err(KError::from)?;
    let w = FreeWord::new(n, vec![FreeLetter { symbol, inverse: false }]).map_err(KError::from)?;
    Ok(KElement::from_level_word(n, &w)?)
}

/// The graphs `Ω̂` and `Ω` on the given `δ`-conjugates and their images;
/// `Ω̂` is the pull-back of `Ω` along `φ`.
pub fn hat_graphs(
    k: &KGroup,
    symbols: &[HatSymbol],
) -> Result<(CommutationGraph<HatSymbol>, CommutationGraph<KElement>), TraceError> {
    let images: Vec<KElement> = symbols.iter().map(|h| phi_symbol(k, h)).collect::<Result<_, _>>()?;
    let omega = omega_graph(k, images.iter().cloned())?;
    let mut edges = Vec::new();
    for (a, ia) in symbols.iter().zip(&images) {
        for (b, ib) in symbols.iter().zip(&images) {
            if a < b && ia != ib && omega.adjacent(ia, ib) {
                edges.push((a.clone(), b.clone()));
            }
        }
    }
    Ok((CommutationGraph::new(symbols.iter().cloned(), edges)?, omega))
}

/// Applies `φ` letter by letter.
pub fn phi_iso(
    k: &KGroup,
    w: &TraceWord<HatSymbol>,
    omega: &Arc<CommutationGraph<KElement>>,
) -> Result<TraceWord<KElement>, TraceError> {
    let letters = w.letters().iter().map(|h| phi_symbol(k, h)).collect::<Result<Vec<_>, _>>()?;
    TraceWord::new(omega.clone(), letters)
}

impl fmt::Display for HatSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; d{})", self.conj, self.index)
    }
}
