//! Reference implementations used as oracles by the integration tests.
//! They share nothing with the library beyond element arithmetic.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use coarse_lab::{Element, GroupSpec};

/// Generators together with their negatives.
pub fn alphabet(spec: &GroupSpec, gens: &[Element]) -> Vec<Element> {
    let mut out: BTreeSet<Element> = gens.iter().cloned().collect();
    out.extend(gens.iter().map(|g| spec.neg(g)));
    out.remove(&Element::identity());
    out.into_iter().collect()
}

/// Breadth-first search in the Cayley graph, returning every vertex within
/// `n` steps of `x`.
pub fn bfs_ball(spec: &GroupSpec, gens: &[Element], x: &Element, n: u32) -> BTreeSet<Element> {
    bfs_layers(spec, gens, x, n).into_keys().collect()
}

/// Cayley-graph distances from `x` for every vertex within `n` steps.
pub fn bfs_layers(spec: &GroupSpec, gens: &[Element], x: &Element, n: u32) -> HashMap<Element, u32> {
    let letters = alphabet(spec, gens);
    let mut dist = HashMap::new();
    dist.insert(x.clone(), 0);
    let mut queue = VecDeque::from([x.clone()]);
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        if d == n {
            continue;
        }
        for a in &letters {
            let w = spec.add(&v, a).unwrap();
            if !dist.contains_key(&w) {
                dist.insert(w.clone(), d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Cayley-graph distance between `x` and `y` if it is at most `limit`.
pub fn bfs_distance(spec: &GroupSpec, gens: &[Element], x: &Element, y: &Element, limit: u32) -> Option<u32> {
    bfs_layers(spec, gens, x, limit).get(y).copied()
}

/// Hamming distance of two ⊕Z_2 elements, read off coordinates.
pub fn hamming(x: &Element, y: &Element) -> usize {
    let a: BTreeSet<usize> = x.support().collect();
    let b: BTreeSet<usize> = y.support().collect();
    a.symmetric_difference(&b).count()
}

/// Element of ⊕Z_2 whose support is the set bits of `mask`.
pub fn from_mask(spec: &GroupSpec, mask: u64) -> Element {
    spec.element((0..64).filter(|i| mask >> i & 1 == 1).map(|i| (i, 1))).unwrap()
}
