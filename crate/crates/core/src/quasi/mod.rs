//! Subset families on `[r]`, their closures, the Q-vanishing decision
//! procedure and the H_Q gadget hypergraph.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structures::Hypergraph;

/// Largest uniformity accepted by the subset-family operations.
pub const MAX_R: usize = 7;
/// Edge budget for the Q-vanishing search.
pub const MAX_VANISHING_EDGES: usize = 20;
/// Largest family size accepted by [`build_hq`].
pub const MAX_HQ_MEMBERS: usize = 12;

/// A family of distinct, non-empty, proper subsets of `{1..r}`, stored as
/// bitmasks (bit `i` stands for element `i+1`) in a fixed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetFamily {
    r: usize,
    members: Vec<u32>,
}

fn mask_to_set(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

fn size_lex(a: &u32, b: &u32) -> std::cmp::Ordering {
    a.count_ones()
        .cmp(&b.count_ones())
        .then_with(|| mask_to_set(*a).cmp(&mask_to_set(*b)))
}

impl SubsetFamily {
    pub fn from_masks(r: usize, members: Vec<u32>) -> Result<Self> {
        if r == 0 || r > MAX_R {
            return Err(Error::pre(format!("uniformity must lie in 1..={MAX_R}, got {r}")));
        }
        let full = (1u32 << r) - 1;
        for (i, &m) in members.iter().enumerate() {
            if m == 0 || m & !full != 0 || m == full {
                return Err(Error::pre(format!(
                    "member {:?} is not a non-empty proper subset of [{r}]",
                    mask_to_set(m)
                )));
            }
            if members[..i].contains(&m) {
                return Err(Error::pre(format!("member {:?} repeated", mask_to_set(m))));
            }
        }
        Ok(SubsetFamily { r, members })
    }

    /// Members given as lists of 1-based elements.
    pub fn new(r: usize, members: &[Vec<usize>]) -> Result<Self> {
        let mut masks = Vec::with_capacity(members.len());
        for m in members {
            let mut mask = 0u32;
            for &x in m {
                if x == 0 || x > r {
                    return Err(Error::pre(format!("element {x} outside [1, {r}]")));
                }
                if mask >> (x - 1) & 1 == 1 {
                    return Err(Error::pre(format!("element {x} repeated in a member")));
                }
                mask |= 1 << (x - 1);
            }
            masks.push(mask);
        }
        Self::from_masks(r, masks)
    }

    /// `{[r-1]} ∪ C([r], r-2)`, the family used for tight cycles.
    pub fn cycle_family(r: usize) -> Result<Self> {
        if r < 3 {
            return Err(Error::pre("the cycle family needs r ≥ 3"));
        }
        let mut members = vec![(1u32 << (r - 1)) - 1];
        let mut small: Vec<u32> = (0u32..1 << r).filter(|m| m.count_ones() as usize == r - 2).collect();
        small.sort_by(size_lex);
        members.extend(small);
        Self::from_masks(r, members)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn masks(&self) -> &[u32] {
        &self.members
    }

    pub fn sets(&self) -> Vec<Vec<usize>> {
        self.members.iter().map(|&m| mask_to_set(m)).collect()
    }

    /// Number of members containing element `i` (1-based).
    pub fn degree(&self, i: usize) -> usize {
        self.members.iter().filter(|&&m| m >> (i - 1) & 1 == 1).count()
    }

    pub fn contains(&self, set: &[usize]) -> bool {
        let mask = set.iter().fold(0u32, |m, &x| m | 1 << (x - 1));
        self.members.contains(&mask)
    }

    /// Index of the first member containing `mask`.
    pub fn covering_member(&self, mask: u32) -> Option<usize> {
        self.members.iter().position(|&m| mask & !m == 0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.sets()).expect("plain data")
    }

    pub fn from_json(r: usize, text: &str) -> Result<Self> {
        let sets: Vec<Vec<usize>> = serde_json::from_str(text)?;
        Self::new(r, &sets)
    }
}

/// All non-empty subsets of members, ordered by size then lexicographically.
pub fn closure(q: &SubsetFamily) -> SubsetFamily {
    let mut out: Vec<u32> = (1u32..1 << q.r)
        .filter(|&s| q.members.iter().any(|&m| s & !m == 0))
        .collect();
    out.sort_by(size_lex);
    SubsetFamily { r: q.r, members: out }
}

/// How one intersection `e* ∩ e` lands inside `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub edge: usize,
    pub intersection: Vec<usize>,
    /// `φ(e* ∩ e)`, 1-based.
    pub image: Vec<usize>,
    /// Index into the family of a member containing the image.
    pub member: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingCertificate {
    pub edge_index: usize,
    pub edge: Vec<usize>,
    /// `phi[p]` is the 1-based image of `edge[p]`.
    pub phi: Vec<usize>,
    pub assignments: Vec<Assignment>,
}

impl VanishingCertificate {
    /// Re-check the certificate against `h` and `q` edge by edge.
    pub fn validate(&self, h: &Hypergraph, q: &SubsetFamily) -> bool {
        let r = h.uniformity();
        if r != q.r || h.edges().get(self.edge_index) != Some(&self.edge) || self.phi.len() != r {
            return false;
        }
        let mut seen = vec![false; r + 1];
        for &x in &self.phi {
            if x == 0 || x > r || seen[x] {
                return false;
            }
            seen[x] = true;
        }
        let image_of = |v: usize| {
            self.edge
                .iter()
                .position(|&u| u == v)
                .map(|p| self.phi[p])
        };
        let mut covered = vec![false; h.edge_count()];
        for a in &self.assignments {
            let Some(e) = h.edges().get(a.edge) else { return false };
            if a.edge == self.edge_index || covered[a.edge] {
                return false;
            }
            let inter: Vec<usize> = e.iter().copied().filter(|v| self.edge.contains(v)).collect();
            if inter != a.intersection || inter.is_empty() {
                return false;
            }
            let mut image: Vec<usize> = inter.iter().map(|&v| image_of(v).unwrap()).collect();
            image.sort_unstable();
            if image != a.image {
                return false;
            }
            let Some(&member) = q.members.get(a.member) else { return false };
            if image.iter().any(|&x| member >> (x - 1) & 1 == 0) {
                return false;
            }
            covered[a.edge] = true;
        }
        // Every other edge meeting e* must be accounted for.
        h.edges().iter().enumerate().all(|(j, e)| {
            j == self.edge_index || covered[j] || !e.iter().any(|v| self.edge.contains(v))
        })
    }
}

fn check_vanishing_input(h: &Hypergraph, q: &SubsetFamily) -> Result<()> {
    if h.uniformity() != q.r {
        return Err(Error::UniformityMismatch {
            left: h.uniformity(),
            right: q.r,
        });
    }
    if h.edge_count() > MAX_VANISHING_EDGES {
        return Err(Error::budget(
            "q-vanishing search (edges)",
            h.edge_count() as f64,
            MAX_VANISHING_EDGES as f64,
        ));
    }
    Ok(())
}

/// Search every distinguished edge `e*` and every bijection `e* → [r]` for
/// one sending each non-empty `e* ∩ e` (`e ≠ e*`) into the closure of `Q`.
/// `None` is a proof that `h` is not Q-vanishing.
pub fn q_vanishing(h: &Hypergraph, q: &SubsetFamily) -> Result<Option<VanishingCertificate>> {
    check_vanishing_input(h, q)?;
    for i in 0..h.edge_count() {
        if let Some(c) = vanishing_at(h, q, i) {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// The search with `e*` fixed to edge `index`.
pub fn q_vanishing_at(h: &Hypergraph, q: &SubsetFamily, index: usize) -> Result<Option<VanishingCertificate>> {
    check_vanishing_input(h, q)?;
    if index >= h.edge_count() {
        return Err(Error::pre(format!("edge index {index} out of range")));
    }
    Ok(vanishing_at(h, q, index))
}

fn vanishing_at(h: &Hypergraph, q: &SubsetFamily, index: usize) -> Option<VanishingCertificate> {
    let r = h.uniformity();
    let star = &h.edges()[index];
    // Intersections as masks over positions in e*.
    let inters: Vec<(usize, u32)> = h
        .edges()
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != index)
        .map(|(j, e)| {
            let m = (0..r).filter(|&p| e.contains(&star[p])).fold(0u32, |m, p| m | 1 << p);
            (j, m)
        })
        .filter(|&(_, m)| m != 0)
        .collect();
    let mut distinct: Vec<u32> = inters.iter().map(|&(_, m)| m).collect();
    distinct.sort_unstable();
    distinct.dedup();
    let apply = |perm: &[usize], m: u32| {
        (0..r).filter(|&p| m >> p & 1 == 1).fold(0u32, |acc, p| acc | 1 << perm[p])
    };
    let mut perm: Vec<usize> = (0..r).collect();
    let found = loop {
        if distinct
            .iter()
            .all(|&m| q.covering_member(apply(&perm, m)).is_some())
        {
            break true;
        }
        if !next_permutation(&mut perm) {
            break false;
        }
    };
    if !found {
        return None;
    }
    let assignments = inters
        .iter()
        .map(|&(j, m)| {
            let image_mask = apply(&perm, m);
            Assignment {
                edge: j,
                intersection: (0..r).filter(|&p| m >> p & 1 == 1).map(|p| star[p]).collect(),
                image: mask_to_set(image_mask),
                member: q.covering_member(image_mask).unwrap(),
            }
        })
        .collect();
    Some(VanishingCertificate {
        edge_index: index,
        edge: star.clone(),
        phi: perm.iter().map(|&x| x + 1).collect(),
        assignments,
    })
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Vertex ranges of the classes `V_1..V_r` of [`build_hq`].
pub fn hq_class_ranges(q: &SubsetFamily) -> Vec<std::ops::Range<usize>> {
    let mut start = 0;
    (1..=q.r)
        .map(|i| {
            let size = 1usize << (q.len() - q.degree(i));
            let range = start..start + size;
            start += size;
            range
        })
        .collect()
}

/// The r-partite gadget: class `i` holds the sign vectors on the coordinates
/// `j` with `i ∉ Q_j`, and each `v ∈ {±1}^q` gives the edge formed by its
/// restrictions. Within a class, vertices are numbered by the minus-sign
/// pattern of the free coordinates read as a binary number.
pub fn build_hq(r: usize, q: &SubsetFamily) -> Result<Hypergraph> {
    if r != q.r {
        return Err(Error::UniformityMismatch { left: r, right: q.r });
    }
    if q.len() > MAX_HQ_MEMBERS {
        return Err(Error::budget("H_Q construction (family size)", q.len() as f64, MAX_HQ_MEMBERS as f64));
    }
    let ranges = hq_class_ranges(q);
    let free: Vec<Vec<usize>> = (0..r)
        .map(|i| (0..q.len()).filter(|&j| q.members[j] >> i & 1 == 0).collect())
        .collect();
    let edges = (0u32..1 << q.len())
        .map(|signs| {
            (0..r)
                .map(|i| {
                    let local = free[i]
                        .iter()
                        .enumerate()
                        .fold(0usize, |acc, (t, &j)| acc | ((signs >> j & 1) as usize) << t);
                    ranges[i].start + local
                })
                .collect()
        })
        .collect();
    Hypergraph::new(r, ranges.last().map_or(0, |x| x.end), edges)
}

/// Whether the edges admit an order in which each edge meets the earlier
/// ones in at most one distinct `(r-1)`-set.
///
/// Decided by peeling: an edge sharing at most one `(r-1)`-set with all
/// remaining edges can always go last, and removing edges never breaks the
/// condition for the others, so the peeling succeeds iff an order exists.
pub fn hq_pair_intersection_check(h: &Hypergraph) -> bool {
    pair_intersection_order(h).is_some()
}

/// An order witnessing [`hq_pair_intersection_check`], if one exists.
pub fn pair_intersection_order(h: &Hypergraph) -> Option<Vec<usize>> {
    let r = h.uniformity();
    let m = h.edge_count();
    let faces: Vec<Vec<Vec<usize>>> = h
        .edges()
        .iter()
        .map(|e| {
            (0..r)
                .map(|skip| e.iter().enumerate().filter(|&(p, _)| p != skip).map(|(_, &v)| v).collect())
                .collect()
        })
        .collect();
    let mut count: HashMap<&[usize], usize> = HashMap::new();
    for fs in &faces {
        for f in fs {
            *count.entry(f.as_slice()).or_default() += 1;
        }
    }
    let shared = |i: usize, count: &HashMap<&[usize], usize>| {
        faces[i].iter().filter(|f| count[f.as_slice()] >= 2).count()
    };
    let mut alive = vec![true; m];
    let mut reversed = Vec::with_capacity(m);
    let mut progress = true;
    while progress && reversed.len() < m {
        progress = false;
        for i in 0..m {
            if alive[i] && shared(i, &count) <= 1 {
                alive[i] = false;
                for f in &faces[i] {
                    *count.get_mut(f.as_slice()).unwrap() -= 1;
                }
                reversed.push(i);
                progress = true;
            }
        }
    }
    if reversed.len() < m {
        return None;
    }
    reversed.reverse();
    Some(reversed)
}
