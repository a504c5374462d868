use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::Hypergraph;

pub const MAX_INVOLUTION_VERTICES: usize = 10;

/// An involutive automorphism `phi` with an edge-free fixed cut `F` separating
/// `L` from `R = phi(L)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableInvolutionCertificate {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub fixed: Vec<usize>,
    pub involution: Vec<usize>,
}

impl StableInvolutionCertificate {
    /// Re-check every defining property against `g`.
    pub fn validate(&self, g: &Hypergraph) -> bool {
        let n = g.vertex_count();
        let phi = &self.involution;
        if phi.len() != n || (0..n).any(|x| phi[x] >= n || phi[phi[x]] != x) {
            return false;
        }
        let mut side = vec![0u8; n];
        for (set, tag) in [(&self.left, 1u8), (&self.right, 2), (&self.fixed, 3)] {
            for &x in set {
                if x >= n || side[x] != 0 {
                    return false;
                }
                side[x] = tag;
            }
        }
        if side.contains(&0) {
            return false;
        }
        let maps_sides = (0..n).all(|x| match side[x] {
            1 => side[phi[x]] == 2,
            2 => side[phi[x]] == 1,
            _ => phi[x] == x,
        });
        let edges_ok = g.edges().iter().all(|e| {
            let l = e.iter().any(|&x| side[x] == 1);
            let r = e.iter().any(|&x| side[x] == 2);
            let inside_fixed = e.iter().all(|&x| side[x] == 3);
            !(l && r) && !inside_fixed
        });
        maps_sides && edges_ok && g.relabel(phi) == *g
    }

    /// Vertices of `L ∪ F`, sorted.
    pub fn half(&self) -> Vec<usize> {
        let mut h: Vec<usize> = self.left.iter().chain(&self.fixed).copied().collect();
        h.sort_unstable();
        h
    }
}

/// Exhaustive search for a stable involution of a graph on at most
/// [`MAX_INVOLUTION_VERTICES`] vertices.
///
/// Involutive automorphisms are enumerated by backtracking with degree-class
/// pruning. For a fixed involution the fixed set must be exactly `F`, and a
/// valid `L/R` split exists iff `F` is independent and no component of
/// `G - F` is mapped onto itself.
pub fn detect_stable_involution(g: &Hypergraph) -> Result<Option<StableInvolutionCertificate>> {
    if g.uniformity() != 2 {
        return Err(Error::pre("stable involutions are defined for graphs"));
    }
    let n = g.vertex_count();
    if n > MAX_INVOLUTION_VERTICES {
        return Err(Error::budget(
            "stable involution search (vertices)",
            n as f64,
            MAX_INVOLUTION_VERTICES as f64,
        ));
    }
    let adj = g.adjacency_masks()?;
    let deg: Vec<u32> = adj.iter().map(|a| a.count_ones()).collect();
    let mut phi = vec![usize::MAX; n];
    let mut found = None;
    search(0, &mut phi, &adj, &deg, &mut |phi| {
        if let Some(cert) = certificate_for(phi, g, &adj) {
            found = Some(cert);
            true
        } else {
            false
        }
    });
    Ok(found)
}

/// Assign `phi` vertex by vertex; `visit` returns true to stop.
fn search(
    x: usize,
    phi: &mut [usize],
    adj: &[u64],
    deg: &[u32],
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let n = phi.len();
    if x == n {
        return visit(phi);
    }
    if phi[x] != usize::MAX {
        return search(x + 1, phi, adj, deg, visit);
    }
    for y in x..n {
        if phi[y] != usize::MAX || deg[y] != deg[x] {
            continue;
        }
        phi[x] = y;
        phi[y] = x;
        if consistent(x, y, phi, adj) && search(x + 1, phi, adj, deg, visit) {
            return true;
        }
        phi[x] = usize::MAX;
        phi[y] = usize::MAX;
    }
    false
}

/// Adjacency is preserved between the newly mapped pair and every assigned vertex.
fn consistent(x: usize, y: usize, phi: &[usize], adj: &[u64]) -> bool {
    [x, y].iter().all(|&a| {
        (0..phi.len()).all(|b| {
            let pb = phi[b];
            pb == usize::MAX || ((adj[a] >> b) & 1) == ((adj[phi[a]] >> pb) & 1)
        })
    })
}

fn certificate_for(
    phi: &[usize],
    g: &Hypergraph,
    adj: &[u64],
) -> Option<StableInvolutionCertificate> {
    let n = phi.len();
    let fixed: Vec<usize> = (0..n).filter(|&x| phi[x] == x).collect();
    let fixed_mask: u64 = fixed.iter().map(|&x| 1u64 << x).sum();
    if fixed.iter().any(|&x| adj[x] & fixed_mask != 0) {
        return None;
    }
    let rest: Vec<usize> = (0..n).filter(|&x| phi[x] != x).collect();
    let comps = g.induced(&rest).components();
    let mut comp_of = vec![usize::MAX; n];
    for (c, comp) in comps.iter().enumerate() {
        for &i in comp {
            comp_of[rest[i]] = c;
        }
    }
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut placed = vec![false; comps.len()];
    for (c, comp) in comps.iter().enumerate() {
        if placed[c] {
            continue;
        }
        let image = comp_of[phi[rest[comp[0]]]];
        if image == c {
            return None;
        }
        placed[c] = true;
        placed[image] = true;
        for &i in comp {
            left.push(rest[i]);
            right.push(phi[rest[i]]);
        }
    }
    left.sort_unstable();
    right.sort_unstable();
    Some(StableInvolutionCertificate {
        left,
        right,
        fixed,
        involution: phi.to_vec(),
    })
}
