//! Independent oracles and random generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use poslab::structures::Hypergraph;
use poslab::tournaments::Tournament;
use rand::seq::SliceRandom;
use rand::Rng;

/// All `k`-subsets of `[0, n)` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Each `r`-subset of `[0, v)` becomes an edge with probability `p`.
pub fn random_hypergraph<R: Rng>(rng: &mut R, r: usize, v: usize, p: f64) -> Hypergraph {
    let edges = subsets(v, r).into_iter().filter(|_| rng.gen_bool(p)).collect();
    Hypergraph::new(r, v, edges).unwrap()
}

/// A random spanning tree plus independent extra edges.
pub fn random_connected_graph<R: Rng>(rng: &mut R, v: usize, p: f64) -> Hypergraph {
    let mut order: Vec<usize> = (0..v).collect();
    order.shuffle(rng);
    let mut edges: Vec<Vec<usize>> = Vec::new();
    for i in 1..v {
        let j = rng.gen_range(0..i);
        let mut e = vec![order[i], order[j]];
        e.sort_unstable();
        edges.push(e);
    }
    for e in subsets(v, 2) {
        if !edges.contains(&e) && rng.gen_bool(p) {
            edges.push(e);
        }
    }
    Hypergraph::new(2, v, edges).unwrap()
}

/// Homomorphisms by scanning all `v(G)^v(H)` maps.
pub fn naive_hom(h: &Hypergraph, g: &Hypergraph) -> u64 {
    let (vh, vg) = (h.vertex_count(), g.vertex_count());
    let edges = g.edge_set();
    let total = (vg as u64).pow(vh as u32);
    let mut count = 0;
    let mut map = vec![0; vh];
    for code in 0..total {
        let mut c = code;
        for slot in map.iter_mut() {
            *slot = (c % vg as u64) as usize;
            c /= vg as u64;
        }
        let ok = h.edges().iter().all(|e| {
            let mut img: Vec<usize> = e.iter().map(|&x| map[x]).collect();
            img.sort_unstable();
            img.windows(2).all(|w| w[0] < w[1]) && edges.contains(&img)
        });
        count += ok as u64;
    }
    count
}

/// Number of independent sets of each size by scanning all vertex subsets.
pub fn naive_independent_counts(g: &Hypergraph) -> Vec<i64> {
    let v = g.vertex_count();
    let mut counts = vec![0i64; v + 1];
    for mask in 0u32..1 << v {
        let independent = g
            .edges()
            .iter()
            .all(|e| !(mask >> e[0] & 1 == 1 && mask >> e[1] & 1 == 1));
        if independent {
            counts[mask.count_ones() as usize] += 1;
        }
    }
    counts
}

/// The `(r-1)`-sets inside the edges of `h`, in first-seen order.
pub fn relevant_sets(h: &Hypergraph) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for e in h.edges() {
        for skip in 0..e.len() {
            let t: Vec<usize> = e.iter().enumerate().filter(|&(p, _)| p != skip).map(|(_, &x)| x).collect();
            if !out.contains(&t) {
                out.push(t);
            }
        }
    }
    out
}

/// Orientations of the relevant sets under which every edge of `h` is an
/// edge of `G(T)`, and the number of relevant sets.
pub fn exhaustive_copy_count(h: &Hypergraph) -> (u64, usize) {
    let sets = relevant_sets(h);
    let s = h.uniformity() - 1;
    let mut good = 0;
    for bits in 0u64..1 << sets.len() {
        let signs: HashMap<Vec<usize>, i8> = sets
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), if bits >> i & 1 == 1 { -1 } else { 1 }))
            .collect();
        let t = Tournament::with_signs(s, h.vertex_count(), signs).unwrap();
        if h.edges().iter().all(|e| t.is_edge(e).unwrap()) {
            good += 1;
        }
    }
    (good, sets.len())
}

/// Smallest edge bitmask over all relabelings; equal for isomorphic graphs.
pub fn canonical_graph(g: &Hypergraph) -> u64 {
    let v = g.vertex_count();
    let mut perm: Vec<usize> = (0..v).collect();
    let mut best = u64::MAX;
    let pairs = subsets(v, 2);
    loop {
        let mut mask = 0u64;
        for e in g.edges() {
            let mut img = vec![perm[e[0]], perm[e[1]]];
            img.sort_unstable();
            mask |= 1 << pairs.iter().position(|p| *p == img).unwrap();
        }
        best = best.min(mask);
        let Some(i) = (0..v.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            return best;
        };
        let j = (i + 1..v).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}

/// Connected graphs on `v` vertices with every degree odd, one per
/// isomorphism class.
pub fn odd_connected_graphs(v: usize) -> Vec<Hypergraph> {
    let pairs = subsets(v, 2);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for mask in 1u64..1 << pairs.len() {
        let edges: Vec<Vec<usize>> = (0..pairs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i].clone()).collect();
        let g = Hypergraph::new(2, v, edges).unwrap();
        if g.degree_sequence().all_odd && g.is_connected() && seen.insert(canonical_graph(&g)) {
            out.push(g);
        }
    }
    out
}
