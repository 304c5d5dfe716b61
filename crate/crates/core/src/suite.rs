//! Seeded invariant checks over every module. Each randomized check draws
//! from its own ChaCha stream of the session seed, so a report is
//! reproducible byte for byte and any case can be replayed from
//! `(seed, stream, case index)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::braid_presentations::{eta_expand, split_singular, BraidLetter, BraidWord};
use crate::desing::{decode, nu, nu_by_subindex, FormalSum};
use crate::error::Error;
use crate::free_tower::{BasisSymbol, FreeLetter, FreeWord};
use crate::k_group::{ActionGenerator, KElement, KGroup, UpsilonElement};
use crate::oracles::surface_identity_bfs;
use crate::surface_group::{relator, SurfaceLetter, SurfaceWord};
use crate::trace_monoid::{leading_commuters, omega_graph, CommutationGraph, TraceWord};

const MAX_WITNESSES: usize = 5;

type StrandPair = (usize, usize);

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    /// ChaCha stream of the session seed; 0 for deterministic checks.
    pub stream: u64,
    pub cases: usize,
    /// Cases outside the implemented fragment, excluded from the verdict.
    pub skipped: usize,
    pub failed: usize,
    pub witnesses: Vec<String>,
    pub detail: String,
}

impl CheckReport {
    fn new(name: &str, stream: u64) -> Self {
        CheckReport {
            name: name.to_string(),
            stream,
            cases: 0,
            skipped: 0,
            failed: 0,
            witnesses: Vec::new(),
            detail: String::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0 && self.cases > 0
    }

    fn tally(&mut self, case: usize, outcome: Result<(), String>) {
        self.cases += 1;
        if let Err(msg) = outcome {
            self.failed += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(format!("case {case}: {msg}"));
            }
        }
    }

    /// Records a setup failure that prevented the check from running.
    fn abort(&mut self, msg: String) {
        self.failed += 1;
        self.witnesses.push(format!("setup: {msg}"));
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("seed {}\n", self.seed);
        for c in &self.checks {
            let verdict = if c.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{verdict} {} stream={} cases={} skipped={} failed={}{}",
                c.name,
                c.stream,
                c.cases,
                c.skipped,
                c.failed,
                if c.detail.is_empty() { String::new() } else { format!(" ({})", c.detail) }
            );
            for w in &c.witnesses {
                let _ = writeln!(out, "    {w}");
            }
        }
        let _ = writeln!(out, "{}", if self.passed { "all checks passed" } else { "some checks failed" });
        out
    }
}

trait Witness<T> {
    fn w(self) -> Result<T, String>;
}

impl<T, E: Into<Error>> Witness<T> for Result<T, E> {
    fn w(self) -> Result<T, String> {
        self.map_err(|e| {
            let e: Error = e.into();
            format!("{}: {}", e.code(), e)
        })
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn random_gamma(rng: &mut ChaCha8Rng, genus: u32, max_len: usize) -> Result<SurfaceWord, String> {
    let len = rng.gen_range(0..=max_len);
    let letters = (0..len).map(|_| SurfaceLetter::new(rng.gen_range(1..=2 * genus), rng.gen_bool(0.5))).collect();
    SurfaceWord::new(genus, letters).w()
}

fn random_symbol(
    rng: &mut ChaCha8Rng,
    genus: u32,
    level: usize,
    strands: (usize, usize),
    gamma_len: usize,
) -> Result<BasisSymbol, String> {
    let gamma = random_gamma(rng, genus, gamma_len)?;
    BasisSymbol::new(&gamma, rng.gen_range(strands.0..=strands.1), level).w()
}

fn random_level_word(
    rng: &mut ChaCha8Rng,
    genus: u32,
    level: usize,
    max_len: usize,
    strands: (usize, usize),
    gamma_len: usize,
) -> Result<FreeWord, String> {
    let len = rng.gen_range(0..=max_len);
    let mut letters = Vec::with_capacity(len);
    for _ in 0..len {
        let symbol = random_symbol(rng, genus, level, strands, gamma_len)?;
        letters.push(FreeLetter { symbol, inverse: rng.gen_bool(0.5) });
    }
    Ok(FreeWord::new(level, letters).w()?.free_reduce())
}

/// `ω b(γ, j) ω⁻¹` at the top level, `j` drawn from `strands`.
fn random_top_upsilon(
    rng: &mut ChaCha8Rng,
    n: usize,
    genus: u32,
    strands: (usize, usize),
) -> Result<KElement, String> {
    let core = random_symbol(rng, genus, n, strands, 2)?;
    let conj = random_level_word(rng, genus, n, 2, (2, n), 2)?;
    UpsilonElement::new(conj, core).w()?.to_element(n).w()
}

/// Arbitrary top level followed by `γ`-trivial lower-level letters.
fn random_element(rng: &mut ChaCha8Rng, k: &KGroup) -> Result<KElement, String> {
    let (n, genus) = (k.n(), k.genus());
    let mut acc = k.identity();
    for _ in 0..rng.gen_range(0..4) {
        let s = random_symbol(rng, genus, n, (2, n), 2)?;
        let w = FreeWord::new(n, vec![FreeLetter { symbol: s, inverse: rng.gen_bool(0.5) }]).w()?;
        acc = k.multiply(&acc, &KElement::from_level_word(n, &w).w()?).w()?;
    }
    for _ in 0..rng.gen_range(0..3) {
        let m = rng.gen_range(2..n);
        let s = BasisSymbol::core(genus, rng.gen_range(2..=m), m).w()?;
        let w = FreeWord::new(m, vec![FreeLetter { symbol: s, inverse: rng.gen_bool(0.5) }]).w()?;
        acc = k.multiply(&acc, &KElement::from_level_word(n, &w).w()?).w()?;
    }
    Ok(acc)
}

fn parse_elements(k: &KGroup, texts: &[&str]) -> Result<Vec<KElement>, String> {
    texts.iter().map(|t| k.parse_element(t).w()).collect()
}

fn all_gammas(genus: u32, max_len: usize) -> Vec<SurfaceWord> {
    let mut out = vec![SurfaceWord::identity(genus)];
    let mut frontier = vec![Vec::<SurfaceLetter>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for g in 1..=2 * genus {
                for inverse in [false, true] {
                    let mut v = w.clone();
                    v.push(SurfaceLetter::new(g, inverse));
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().map(|v| SurfaceWord::new(genus, v.clone()).expect("valid generators")));
        frontier = next;
    }
    out
}

fn words_up_to(alphabet: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for a in 0..alphabet {
                let mut v: Vec<usize> = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// `ν` is injective on trace classes of all words of length ≤ 4 over four
/// top-level symbols at `n = 2`, `g = 1`.
pub fn injectivity_exhaustive() -> CheckReport {
    let mut report = CheckReport::new("injectivity_exhaustive", 0);
    let setup = || -> Result<_, String> {
        let k = KGroup::with_default_table(2, 1).w()?;
        let gens = parse_elements(&k, &["b[1;2]@2", "b[x1;2]@2", "b[x2;2]@2", "b[x1.x2;2]@2"])?;
        let graph = Arc::new(omega_graph(&k, gens.iter().cloned()).w()?);
        Ok((k, gens, graph))
    };
    let (k, gens, graph) = match setup() {
        Ok(s) => s,
        Err(e) => {
            report.abort(e);
            return report;
        }
    };
    let mut by_image: HashMap<FormalSum, BTreeSet<Vec<KElement>>> = HashMap::new();
    let mut classes = BTreeSet::new();
    for (case, idx) in words_up_to(gens.len(), 4).into_iter().enumerate() {
        let letters: Vec<KElement> = idx.iter().map(|&i| gens[i].clone()).collect();
        let outcome = (|| {
            let w = TraceWord::new(graph.clone(), letters.clone()).w()?;
            let canon = w.canonical().letters().to_vec();
            classes.insert(canon.clone());
            by_image.entry(nu(&k, &letters).w()?).or_default().insert(canon);
            Ok(())
        })();
        report.tally(case, outcome);
    }
    for (image, class_set) in &by_image {
        if class_set.len() > 1 {
            report.failed += 1;
            if report.witnesses.len() < MAX_WITNESSES {
                let shown: Vec<String> =
                    class_set.iter().map(|c| c.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")).collect();
                report.witnesses.push(format!("{} classes share ν = {:?}: {}", class_set.len(), image.to_json().to_string(), shown.join(" | ")));
            }
        }
    }
    report.detail = format!("{} trace classes, {} distinct images", classes.len(), by_image.len());
    report
}

/// Random pairs at `n = 3`: `ν(u) = ν(v)` exactly when `u`, `v` are trace-equal.
pub fn injectivity_random(seed: u64, pairs: usize) -> CheckReport {
    let stream = 2;
    let mut report = CheckReport::new("injectivity_random", stream);
    let mut rng = rng_for(seed, stream);
    let setup = || -> Result<_, String> {
        let k = KGroup::with_default_table(3, 1).w()?;
        let gens = parse_elements(&k, &["b[1;2]@3", "b[x1;2]@3", "b[1;3]@3", "b[x2;3]@3", "b[1;2]@2"])?;
        let graph = Arc::new(omega_graph(&k, gens.iter().cloned()).w()?);
        Ok((k, gens, graph))
    };
    let (k, gens, graph) = match setup() {
        Ok(s) => s,
        Err(e) => {
            report.abort(e);
            return report;
        }
    };
    let mut equal_images = 0;
    for case in 0..pairs {
        let u: Vec<KElement> = (0..rng.gen_range(0..=4)).map(|_| gens.choose(&mut rng).expect("nonempty").clone()).collect();
        let v: Vec<KElement> = if rng.gen_bool(0.5) {
            let mut v = u.clone();
            v.shuffle(&mut rng);
            v
        } else {
            (0..rng.gen_range(0..=4)).map(|_| gens.choose(&mut rng).expect("nonempty").clone()).collect()
        };
        let outcome = (|| {
            let same_image = nu(&k, &u).w()? == nu(&k, &v).w()?;
            let tu = TraceWord::new(graph.clone(), u.clone()).w()?;
            let tv = TraceWord::new(graph.clone(), v.clone()).w()?;
            let same_trace = tu.trace_equal(&tv).w()?;
            if same_image {
                equal_images += 1;
            }
            if same_image != same_trace {
                return Err(format!("[{tu}] vs [{tv}]: ν equal {same_image}, trace equal {same_trace}"));
            }
            Ok(())
        })();
        report.tally(case, outcome);
    }
    report.detail = format!("{equal_images} pairs with equal images");
    report
}

/// `decode(ν(α))` is trace-equal to `α` for random words over top-level
/// `Υ`-conjugates with strand pairs `(1, j)`.
pub fn decode_round_trip(seed: u64, n: usize, count: usize) -> CheckReport {
    let stream = 10 + n as u64;
    let mut report = CheckReport::new(&format!("decode_round_trip_n{n}"), stream);
    let mut rng = rng_for(seed, stream);
    let k = match KGroup::with_default_table(n, 1).w() {
        Ok(k) => k,
        Err(e) => {
            report.abort(e);
            return report;
        }
    };
    for case in 0..count {
        let outcome = (|| {
            let pool_size = rng.gen_range(1..=3);
            let pool = (0..pool_size).map(|_| random_top_upsilon(&mut rng, n, 1, (2, n))).collect::<Result<Vec<_>, _>>()?;
            let letters: Vec<KElement> =
                (0..rng.gen_range(0..=5)).map(|_| pool.choose(&mut rng).expect("nonempty").clone()).collect();
            let image = nu(&k, &letters).w()?;
            let decoded = decode(&k, &image).w()?;
            let original = TraceWord::new(decoded.graph().clone(), letters.clone())
                .map_err(|e| format!("decoded alphabet misses a letter of [{}]: {e}", display_letters(&letters)))?;
            if !original.trace_equal(&decoded).w()? {
                return Err(format!("[{original}] decoded as [{decoded}]"));
            }
            Ok(())
        })();
        report.tally(case, outcome);
    }
    report
}

fn display_letters(letters: &[KElement]) -> String {
    letters.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")
}

/// The `(u − 1)`-product expansion of `ν` equals the subindex expansion term
/// for term, and its grade-`q` part is exactly the `|I| = q` summands.
pub fn graded_expansion(seed: u64, count: usize) -> CheckReport {
    let stream = 3;
    let mut report = CheckReport::new("graded_expansion", stream);
    let mut rng = rng_for(seed, stream);
    let n = 3;
    let setup = || -> Result<_, String> {
        let k = KGroup::with_default_table(n, 1).w()?;
        let lower = k.parse_element("b[1;2]@2").w()?;
        Ok((k, lower))
    };
    let (k, lower) = match setup() {
        Ok(s) => s,
        Err(e) => {
            report.abort(e);
            return report;
        }
    };
    for case in 0..count {
        let outcome = (|| {
            let mut letters = Vec::new();
            for _ in 0..rng.gen_range(0..=5) {
                let letter = if rng.gen_bool(0.3) {
                    let conj = KElement::from_level_word(n, &random_level_word(&mut rng, 1, n, 2, (2, n), 1)?).w()?;
                    let conj_inv = k.inverse(&conj).w()?;
                    k.product([&conj, &lower, &conj_inv]).w()?
                } else {
                    random_top_upsilon(&mut rng, n, 1, (2, n))?
                };
                letters.push(letter);
            }
            let direct = nu(&k, &letters).w()?;
            let expanded = nu_by_subindex(&k, &letters).w()?;
            if direct != expanded {
                return Err(format!("expansions differ on [{}]", display_letters(&letters)));
            }
            let l = letters.len();
            for q in 0..=l {
                let mut part = FormalSum::zero(n);
                for mask in 0u32..(1 << l) {
                    if mask.count_ones() as usize != q {
                        continue;
                    }
                    let picked: Vec<&KElement> = (0..l).filter(|i| mask & (1 << i) != 0).map(|i| &letters[i]).collect();
                    part.add_term(k.product(picked).w()?, if (l - q) % 2 == 0 { 1 } else { -1 });
                }
                if direct.graded_component(q as i64) != part {
                    return Err(format!("grade {q} mismatch on [{}]", display_letters(&letters)));
                }
            }
            Ok(())
        })();
        report.tally(case, outcome);
    }
    report
}

/// Every defined action of a `T_{r,s}` or `a_{i,k}` on a top-level symbol
/// at `n = 4`, `g = 1`, `|γ| ≤ 2` is conjugate to a single positive symbol
/// with the same strand and the same `κ`. Undefined actions are skipped.
pub fn action_invariance() -> CheckReport {
    let mut report = CheckReport::new("action_invariance", 0);
    let (n, genus) = (4, 1);
    let k = match KGroup::with_default_table(n, genus).w() {
        Ok(k) => k,
        Err(e) => {
            report.abort(e);
            return report;
        }
    };
    let mut actors = Vec::new();
    for r in 2..=n {
        for s in r + 1..=n {
            actors.push(ActionGenerator::t(r, s));
        }
    }
    for i in 2..=n {
        for kk in 1..=2 * genus {
            actors.push(ActionGenerator::a(i, kk));
        }
    }
    let gammas = all_gammas(genus, 2);
    let mut case = 0;
    for z in actors {
        for inverse in [false, true] {
            let z = if inverse { z.inv() } else { z };
            for gamma in &gammas {
                for j in 2..=n {
                    let b = match BasisSymbol::new(gamma, j, n) {
                        Ok(b) => b,
                        Err(e) => {
                            report.abort(e.to_string());
                            return report;
                        }
                    };
                    let img = match k.act_generator(z, &b) {
                        Ok(img) => img,
                        Err(_) => {
                            report.skipped += 1;
                            continue;
                        }
                    };
                    let outcome = (|| {
                        let rep = img.conj_class_rep().w()?;
                        let single = rep.len() == 1 && !rep.letters()[0].inverse && rep.letters()[0].symbol.strand() == j;
                        if !single {
                            return Err(format!("{z} · {b} = {} with class {}", img.render(false), rep.render(false)));
                        }
                        let before = KElement::from_symbol(n, &b).w()?.kappa();
                        let after = KElement::from_level_word(n, &img).w()?.kappa();
                        if before != after {
                            return Err(format!("{z} · {b}: κ changed"));
                        }
                        Ok(())
                    })();
                    report.tally(case, outcome);
                    case += 1;
                }
            }
        }
    }
    report.detail = "undefined actions need peripheral table entries".to_string();
    report
}

/// `κ` and `deg` are additive on random products; fragment generators have
/// degree 1 and unit `κ`, and distinct strand pairs give distinct `κ`.
pub fn kappa_deg_homomorphism(seed: u64, pairs: usize) -> CheckReport {
    let stream = 5;
    let mut report = CheckReport::new("kappa_deg_homomorphism", stream);
    let mut rng = rng_for(seed, stream);
    let (n, genus) = (4, 1);
    let k = match KGroup::with_default_table(n, genus).w() {
        Ok(k) => k,
        Err(e) => {
            report.abort(e);
            return report;
        }
    };
    let mut case = 0;
    for _ in 0..pairs {
        let outcome = (|| {
            let a = random_element(&mut rng, &k)?;
            let b = random_element(&mut rng, &k)?;
            let ab = k.multiply(&a, &b).w()?;
            let mut sum = a.kappa();
            for (pair, c) in b.kappa() {
                *sum.entry(pair).or_default() += c;
            }
            sum.retain(|_, c| *c != 0);
            if ab.kappa() != sum || ab.deg() != a.deg() + b.deg() {
                return Err(format!("({a}) · ({b}) = {ab}"));
            }
            Ok(())
        })();
        report.tally(case, outcome);
        case += 1;
    }

    let mut generators: Vec<UpsilonElement> = Vec::new();
    for m in 2..=n {
        for j in 2..=m {
            let gammas = if m == n { all_gammas(genus, 2) } else { vec![SurfaceWord::identity(genus)] };
            for gamma in gammas {
                match BasisSymbol::new(&gamma, j, m) {
                    Ok(s) => generators.push(UpsilonElement::basis(s)),
                    Err(e) => report.abort(e.to_string()),
                }
            }
        }
    }
    for _ in 0..50 {
        let made = (|| {
            let core = random_symbol(&mut rng, genus, n, (2, n), 2)?;
            let conj = random_level_word(&mut rng, genus, n, 3, (2, n), 2)?;
            UpsilonElement::new(conj, core).w()
        })();
        match made {
            Ok(u) => generators.push(u),
            Err(e) => report.abort(e),
        }
    }
    let mut kappa_to_pairs: BTreeMap<Vec<(StrandPair, i64)>, BTreeSet<StrandPair>> = BTreeMap::new();
    for u in &generators {
        let outcome = (|| {
            let x = u.to_element(n).w()?;
            let pair = u.strand_pair(n);
            let kappa = x.kappa();
            kappa_to_pairs.entry(kappa.clone().into_iter().collect()).or_default().insert(pair);
            if x.deg() != 1 || kappa != BTreeMap::from([(pair, 1)]) || x.upsilon_classify().w()? != pair {
                return Err(format!("generator {u}: deg {}, κ {kappa:?}", x.deg()));
            }
            Ok(())
        })();
        report.tally(case, outcome);
        case += 1;
    }
    for (kappa, pairs) in &kappa_to_pairs {
        if pairs.len() != 1 {
            report.failed += 1;
            report.witnesses.push(format!("κ {kappa:?} shared by {pairs:?}"));
        }
    }
    report.detail = format!("{} generators in {} classes", generators.len(), kappa_to_pairs.len());
    report
}

/// For scrambled copies `y` of a word `x`, every letter of `y` before the
/// first occurrence of `x_1` commutes with `x_1`, and the certificate says so.
pub fn leading_commuters_check(seed: u64, count: usize) -> CheckReport {
    let stream = 6;
    let mut report = CheckReport::new("leading_commuters", stream);
    let mut rng = rng_for(seed, stream);
    for case in 0..count {
        let outcome = (|| {
            let vertices = rng.gen_range(1..=8u32);
            let mut edges = Vec::new();
            for a in 0..vertices {
                for b in a + 1..vertices {
                    if rng.gen_bool(0.4) {
                        edges.push((a, b));
                    }
                }
            }
            let graph = Arc::new(CommutationGraph::new(0..vertices, edges).w()?);
            let x: Vec<u32> = (0..rng.gen_range(1..=10)).map(|_| rng.gen_range(0..vertices)).collect();
            let mut y = x.clone();
            for _ in 0..30 {
                let i = rng.gen_range(0..y.len());
                if i + 1 < y.len() && graph.adjacent(&y[i], &y[i + 1]) {
                    y.swap(i, i + 1);
                }
            }
            let k = 1 + y.iter().position(|v| *v == x[0]).expect("x_1 occurs in y");
            let tx = TraceWord::new(graph.clone(), x.clone()).w()?;
            let ty = TraceWord::new(graph.clone(), y.clone()).w()?;
            let cert = leading_commuters(&tx, &ty, k).w()?;
            let sound = cert.pairs.len() == k - 1
                && cert.pairs.iter().zip(&y).all(|((a, b), yi)| a == yi && *b == x[0] && graph.adjacent(a, b));
            if !sound {
                return Err(format!("x = {x:?}, y = {y:?}, k = {k}: certificate {:?}", cert.pairs));
            }
            Ok(())
        })();
        report.tally(case, outcome);
    }
    report
}

/// An automorphism of `F(X)` fixing `X_0` pointwise and preserving
/// `F(X \ X_0)` that fixes a product of conjugates of `X_0`-letters fixes
/// every factor.
pub fn automorphism_fixes_factors(seed: u64, count: usize) -> CheckReport {
    let stream = 7;
    let mut report = CheckReport::new("automorphism_fixes_factors", stream);
    let mut rng = rng_for(seed, stream);
    let mut hypothesis_held = 0;
    for case in 0..count {
        let outcome = (|| {
            let rank = rng.gen_range(2..=6usize);
            let basis = (0..rank)
                .map(|i| {
                    let gamma = SurfaceWord::new(1, vec![SurfaceLetter::new(1, false); i]).w()?;
                    BasisSymbol::new(&gamma, 2, 2).w()
                })
                .collect::<Result<Vec<_>, _>>()?;
            let mut shuffled = basis.clone();
            shuffled.shuffle(&mut rng);
            let (fixed, moved) = shuffled.split_at(rng.gen_range(1..rank));
            let letter = |s: &BasisSymbol, inverse: bool| FreeWord::new(2, vec![FreeLetter { symbol: s.clone(), inverse }]);
            let mut rule: BTreeMap<BasisSymbol, FreeWord> = BTreeMap::new();
            for s in &basis {
                rule.insert(s.clone(), letter(s, false).w()?);
            }
            for _ in 0..rng.gen_range(1..=6) {
                let target = moved.choose(&mut rng).expect("nonempty").clone();
                let image = rule[&target].clone();
                let others: Vec<&BasisSymbol> = moved.iter().filter(|s| **s != target).collect();
                let new_image = match (rng.gen_range(0..3), others.choose(&mut rng)) {
                    (0, Some(o)) => image.mul(&power(&rule[*o], rng.gen_bool(0.5))).w()?,
                    (1, Some(o)) => power(&rule[*o], rng.gen_bool(0.5)).mul(&image).w()?,
                    _ => image.inverse(),
                };
                rule.insert(target, new_image);
            }
            let factors = (0..rng.gen_range(1..=4))
                .map(|_| {
                    let core = fixed.choose(&mut rng).expect("nonempty");
                    let pool = if rng.gen_bool(0.5) { fixed } else { &basis[..] };
                    let conj_letters = (0..rng.gen_range(0..=3))
                        .map(|_| FreeLetter { symbol: pool.choose(&mut rng).expect("nonempty").clone(), inverse: rng.gen_bool(0.5) })
                        .collect();
                    let conj = FreeWord::new(2, conj_letters).w()?;
                    letter(core, false).w()?.conjugate_by(&conj).w()
                })
                .collect::<Result<Vec<_>, _>>()?;
            let mut product = FreeWord::empty(2);
            for y in &factors {
                product = product.mul(y).w()?;
            }
            if product.apply_endomorphism(&rule).w()? == product {
                hypothesis_held += 1;
                for y in &factors {
                    if y.apply_endomorphism(&rule).w()? != *y {
                        return Err(format!("product fixed but factor {} moved", y.render(false)));
                    }
                }
            }
            Ok(())
        })();
        report.tally(case, outcome);
    }
    report.detail = format!("product fixed in {hypothesis_held} instances");
    report
}

fn power(w: &FreeWord, inverse: bool) -> FreeWord {
    if inverse {
        w.inverse()
    } else {
        w.clone()
    }
}

/// At `n = 4`, `g = 1`: if `v = T_{3,4}` commutes with a product of
/// top-level conjugates of `b(γ, 2)`, it commutes with each factor.
pub fn commutation_is_factorwise(seed: u64, count: usize) -> CheckReport {
    let stream = 8;
    let mut report = CheckReport::new("commutation_is_factorwise", stream);
    let mut rng = rng_for(seed, stream);
    let n = 4;
    let setup = || -> Result<_, String> {
        let k = KGroup::with_default_table(n, 1).w()?;
        let v = k.parse_element("b[1;2]@2").w()?;
        Ok((k, v))
    };
    let (k, v) = match setup() {
        Ok(s) => s,
        Err(e) => {
            report.abort(e);
            return report;
        }
    };
    let mut hypothesis_held = 0;
    for case in 0..count {
        let outcome = (|| {
            let mut factors = Vec::new();
            for _ in 0..rng.gen_range(1..=3) {
                let core = random_symbol(&mut rng, 1, n, (2, 2), 2)?;
                let strands = if rng.gen_bool(0.5) { (2, 2) } else { (2, n) };
                let conj = random_level_word(&mut rng, 1, n, 2, strands, 1)?;
                factors.push(UpsilonElement::new(conj, core).w()?.to_element(n).w()?);
            }
            let product = k.product(&factors).w()?;
            if k.commutes(&v, &product).w()? {
                hypothesis_held += 1;
                for u in &factors {
                    if !k.commutes(&v, u).w()? {
                        return Err(format!("v commutes with the product but not with {u}"));
                    }
                }
            }
            Ok(())
        })();
        report.tally(case, outcome);
    }
    report.detail = format!("v commuted with the product in {hypothesis_held} instances");
    report
}

/// Genus-one canonical forms are `x1^p x2^q` with `(p, q)` the exponent
/// sums, for every word of length ≤ 8.
pub fn surface_genus_one() -> CheckReport {
    let mut report = CheckReport::new("surface_genus_one", 0);
    let alphabet = [
        SurfaceLetter::new(1, false),
        SurfaceLetter::new(1, true),
        SurfaceLetter::new(2, false),
        SurfaceLetter::new(2, true),
    ];
    let mut vectors = BTreeSet::new();
    for (case, idx) in words_up_to(alphabet.len(), 8).into_iter().enumerate() {
        let letters: Vec<SurfaceLetter> = idx.iter().map(|&i| alphabet[i]).collect();
        let p: i64 = letters.iter().filter(|l| l.generator == 1).map(|l| l.exponent()).sum();
        let q: i64 = letters.iter().filter(|l| l.generator == 2).map(|l| l.exponent()).sum();
        vectors.insert((p, q));
        let outcome = (|| {
            let w = SurfaceWord::new(1, letters.clone()).w()?;
            let mut expected = vec![SurfaceLetter::new(1, p < 0); p.unsigned_abs() as usize];
            expected.extend(vec![SurfaceLetter::new(2, q < 0); q.unsigned_abs() as usize]);
            let canon = w.canonical_form();
            if canon.letters() != expected || w.is_identity() != (p == 0 && q == 0) {
                return Err(format!("{w} canonicalized to {canon}, expected exponents ({p}, {q})"));
            }
            Ok(())
        })();
        report.tally(case, outcome);
    }
    let covered = (-4..=4).flat_map(|p| (-4..=4).map(move |q| (p, q))).all(|v| vectors.contains(&v));
    if !covered {
        report.abort("some exponent vector with |p|, |q| ≤ 4 was not reached".to_string());
    }
    report.detail = format!("{} exponent vectors", vectors.len());
    report
}

/// Genus-two `is_identity` agrees with the substitution-search oracle on
/// random words of length ≤ 8, relator rotations and their one-letter
/// corruptions.
pub fn surface_genus_two(seed: u64, count: usize) -> CheckReport {
    let stream = 9;
    let mut report = CheckReport::new("surface_genus_two", stream);
    let mut rng = rng_for(seed, stream);
    let genus = 2;
    let r = relator(genus);
    let mut trivial = 0;
    for case in 0..count {
        let letters: Vec<SurfaceLetter> = match case % 5 {
            0 | 1 => (0..rng.gen_range(0..=8))
                .map(|_| SurfaceLetter::new(rng.gen_range(1..=2 * genus), rng.gen_bool(0.5)))
                .collect(),
            kind => {
                let base: Vec<SurfaceLetter> =
                    if rng.gen_bool(0.5) { r.clone() } else { r.iter().rev().map(|l| l.inv()).collect() };
                let shift = rng.gen_range(0..base.len());
                let mut rot: Vec<SurfaceLetter> = base[shift..].iter().chain(&base[..shift]).copied().collect();
                if kind == 4 {
                    let at = rng.gen_range(0..rot.len());
                    rot[at] = SurfaceLetter::new(rng.gen_range(1..=2 * genus), rng.gen_bool(0.5));
                }
                rot
            }
        };
        let outcome = (|| {
            let w = SurfaceWord::new(genus, letters.clone()).w()?;
            let oracle = surface_identity_bfs(genus, &letters, 8);
            if oracle {
                trivial += 1;
            }
            if w.is_identity() != oracle {
                return Err(format!("{w}: is_identity {} but oracle {oracle}", w.is_identity()));
            }
            Ok(())
        })();
        report.tally(case, outcome);
    }
    report.detail = format!("{trivial} trivial words");
    report
}

fn random_singular_word(rng: &mut ChaCha8Rng) -> Result<BraidWord, String> {
    let n = rng.gen_range(2..=4);
    let genus = rng.gen_range(1..=2);
    let len = rng.gen_range(1..=10);
    let mut letters: Vec<BraidLetter> = (0..len)
        .map(|_| {
            let i = rng.gen_range(1..n);
            match rng.gen_range(0..6) {
                0 => BraidLetter::sigma(i),
                1 => BraidLetter::sigma_inv(i),
                2 => BraidLetter::Tau(i),
                3 => BraidLetter::Delta(i),
                4 => BraidLetter::a(rng.gen_range(1..=2 * genus)),
                _ => BraidLetter::a_inv(rng.gen_range(1..=2 * genus)),
            }
        })
        .collect();
    if !letters.iter().any(|l| l.is_singular()) {
        let at = rng.gen_range(0..len);
        letters[at] = BraidLetter::Delta(rng.gen_range(1..n));
    }
    BraidWord::new(n, genus, letters).w()
}

/// The split of a random singular word replays from its logged steps, and
/// the number of `δ`-conjugates equals the singular order.
pub fn split_soundness(seed: u64, count: usize) -> CheckReport {
    let stream = 4;
    let mut report = CheckReport::new("split_soundness", stream);
    let mut rng = rng_for(seed, stream);
    for case in 0..count {
        let outcome = (|| {
            let w = random_singular_word(&mut rng)?;
            let delta_form = w.delta_substitute();
            let split = split_singular(&delta_form).w()?;
            split.certify(&delta_form).map_err(|e| format!("{w}: {e}"))?;
            if split.trace.len() != w.order() || split.braid.is_singular() {
                return Err(format!("{w}: {} conjugates for order {}", split.trace.len(), w.order()));
            }
            Ok(())
        })();
        report.tally(case, outcome);
    }
    report
}

/// `η(τ_i) = σ_i − σ_i⁻¹` and `η(δ_i) = σ_i² − 1` as exact JSON text.
pub fn eta_generators() -> CheckReport {
    let mut report = CheckReport::new("eta_generators", 0);
    let n = 4;
    for i in 1..n {
        let cases = [
            (format!("t{i}"), format!(r#"{{"terms":[{{"coeff":1,"element":"s{i}"}},{{"coeff":-1,"element":"s{i}^-1"}}]}}"#)),
            (format!("d{i}"), format!(r#"{{"terms":[{{"coeff":1,"element":"s{i} s{i}"}},{{"coeff":-1,"element":""}}]}}"#)),
        ];
        for (word, expected) in cases {
            let outcome = (|| {
                let w = BraidWord::parse(&word, n, 1).w()?;
                let got = eta_expand(&w).to_json().to_string();
                if got != expected {
                    return Err(format!("η({word}) = {got}"));
                }
                Ok(())
            })();
            report.tally(report.cases, outcome);
        }
    }
    report
}

/// Every check at full size, in a fixed order.
pub fn run_all(seed: u64) -> SuiteReport {
    let checks = vec![
        injectivity_exhaustive(),
        injectivity_random(seed, 10_000),
        decode_round_trip(seed, 2, 1000),
        decode_round_trip(seed, 3, 300),
        graded_expansion(seed, 200),
        action_invariance(),
        kappa_deg_homomorphism(seed, 10_000),
        leading_commuters_check(seed, 1000),
        automorphism_fixes_factors(seed, 500),
        commutation_is_factorwise(seed, 200),
        surface_genus_one(),
        surface_genus_two(seed, 500),
        split_soundness(seed, 500),
        eta_generators(),
    ];
    let passed = checks.iter().all(CheckReport::passed);
    SuiteReport { seed, passed, checks }
}
