use std::collections::HashSet;

use crate::error::{Error, Result};

use super::Hypergraph;

/// Number of maps `V(h) -> V(g)` that send every edge of `h` onto an edge of `g`.
pub fn hom_count(h: &Hypergraph, g: &Hypergraph) -> Result<u128> {
    if h.uniformity() != g.uniformity() {
        return Err(Error::UniformityMismatch {
            left: h.uniformity(),
            right: g.uniformity(),
        });
    }
    let target: HashSet<Vec<usize>> = g.edges().iter().cloned().collect();
    // Edges of h grouped by the last vertex they need.
    let mut closing: Vec<Vec<&[usize]>> = vec![vec![]; h.vertex_count()];
    for e in h.edges() {
        closing[e[e.len() - 1]].push(e);
    }
    let mut image = vec![0usize; h.vertex_count()];
    Ok(extend(0, &mut image, &closing, &target, g.vertex_count()))
}

fn extend(
    depth: usize,
    image: &mut [usize],
    closing: &[Vec<&[usize]>],
    target: &HashSet<Vec<usize>>,
    n: usize,
) -> u128 {
    if depth == image.len() {
        return 1;
    }
    let mut total = 0;
    let mut scratch = Vec::new();
    for x in 0..n {
        image[depth] = x;
        let ok = closing[depth].iter().all(|e| {
            scratch.clear();
            scratch.extend(e.iter().map(|&u| image[u]));
            scratch.sort_unstable();
            target.contains(&scratch)
        });
        if ok {
            total += extend(depth + 1, image, closing, target, n);
        }
    }
    total
}
