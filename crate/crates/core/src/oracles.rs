//! Slow reference procedures that the fast paths are checked against.
//! None of them share code with the routines they verify.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::surface_group::{relator, SurfaceLetter};
use crate::trace_monoid::CommutationGraph;

fn free_reduce(letters: &[SurfaceLetter]) -> Vec<SurfaceLetter> {
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

/// Every `(u, v)` with `u v⁻¹` a cyclic rotation of the relator or its
/// inverse and `|v| ≤ |u|`, `u` nonempty.
fn substitutions(genus: u32) -> Vec<(Vec<SurfaceLetter>, Vec<SurfaceLetter>)> {
    let r = relator(genus);
    let r_inv: Vec<SurfaceLetter> = r.iter().rev().map(|l| l.inv()).collect();
    let len = r.len();
    let mut out = BTreeSet::new();
    for base in [&r, &r_inv] {
        for shift in 0..len {
            let rot: Vec<SurfaceLetter> = (0..len).map(|t| base[(shift + t) % len]).collect();
            for cut in len.div_ceil(2)..=len {
                let u = rot[..cut].to_vec();
                let v: Vec<SurfaceLetter> = rot[cut..].iter().rev().map(|l| l.inv()).collect();
                out.insert((u, v));
            }
        }
    }
    out.into_iter().collect()
}

/// Decides `w = 1` in `π₁` of the genus-`genus` surface by breadth-first
/// search over relator substitutions that never lengthen the word, up to
/// `radius` substitutions deep, with cyclic rotations of the current word
/// allowed for free.
pub fn surface_identity_bfs(genus: u32, letters: &[SurfaceLetter], radius: usize) -> bool {
    let subs = substitutions(genus);
    let start = free_reduce(letters);
    let mut seen: HashSet<Vec<SurfaceLetter>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back((start, 0usize));
    while let Some((w, depth)) = queue.pop_front() {
        if w.is_empty() {
            return true;
        }
        if depth == radius {
            continue;
        }
        let mut next_words = Vec::new();
        for rot in 0..w.len() {
            let rotated: Vec<SurfaceLetter> = w[rot..].iter().chain(&w[..rot]).copied().collect();
            for (u, v) in &subs {
                if u.len() > rotated.len() {
                    continue;
                }
                for pos in 0..=rotated.len() - u.len() {
                    if rotated[pos..pos + u.len()] == u[..] {
                        let mut next = rotated[..pos].to_vec();
                        next.extend_from_slice(v);
                        next.extend_from_slice(&rotated[pos + u.len()..]);
                        next_words.push(free_reduce(&next));
                    }
                }
            }
        }
        for next in next_words {
            if seen.insert(next.clone()) {
                queue.push_back((next, depth + 1));
            }
        }
    }
    false
}

/// Every word reachable from `letters` by swapping adjacent commuting letters.
pub fn swap_closure<V: Ord + Clone + std::fmt::Debug>(graph: &CommutationGraph<V>, letters: &[V]) -> BTreeSet<Vec<V>> {
    let mut seen = BTreeSet::from([letters.to_vec()]);
    let mut stack = vec![letters.to_vec()];
    while let Some(cur) = stack.pop() {
        for i in 0..cur.len().saturating_sub(1) {
            if graph.adjacent(&cur[i], &cur[i + 1]) {
                let mut next = cur.clone();
                next.swap(i, i + 1);
                if seen.insert(next.clone()) {
                    stack.push(next);
                }
            }
        }
    }
    seen
}
