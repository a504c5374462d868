use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest edge count for which [`Hypergraph::edge_subgraphs`] will enumerate.
pub const MAX_SUBSET_EDGES: usize = 25;

/// An `r`-uniform hypergraph on vertices `0..v`. `r = 2` is a simple graph.
///
/// Edges are stored with their vertices sorted, in insertion order. Equality
/// ignores edge order.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawHypergraph", into = "RawHypergraph")]
pub struct Hypergraph {
    r: usize,
    v: usize,
    edges: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawHypergraph {
    r: usize,
    v: usize,
    edges: Vec<Vec<usize>>,
}

impl TryFrom<RawHypergraph> for Hypergraph {
    type Error = Error;
    fn try_from(raw: RawHypergraph) -> Result<Self> {
        Hypergraph::new(raw.r, raw.v, raw.edges)
    }
}

impl From<Hypergraph> for RawHypergraph {
    fn from(h: Hypergraph) -> Self {
        RawHypergraph {
            r: h.r,
            v: h.v,
            edges: h.edges,
        }
    }
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.r == other.r && self.v == other.v && self.edge_set() == other.edge_set()
    }
}

impl Eq for Hypergraph {}

impl Hypergraph {
    pub fn new(r: usize, v: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if r < 2 {
            return Err(Error::pre(format!("uniformity must be at least 2, got {r}")));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut sorted = Vec::with_capacity(edges.len());
        for edge in edges {
            let mut e = edge.clone();
            e.sort_unstable();
            if e.len() != r {
                return Err(Error::pre(format!("edge {edge:?} does not have {r} vertices")));
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::pre(format!("edge {edge:?} repeats a vertex")));
            }
            if e[r - 1] >= v {
                return Err(Error::pre(format!("edge {edge:?} uses a vertex >= {v}")));
            }
            if !seen.insert(e.clone()) {
                return Err(Error::pre(format!("duplicate edge {edge:?}")));
            }
            sorted.push(e);
        }
        Ok(Hypergraph {
            r,
            v,
            edges: sorted,
        })
    }

    pub fn empty(r: usize, v: usize) -> Self {
        Hypergraph { r, v, edges: vec![] }
    }

    pub fn uniformity(&self) -> usize {
        self.r
    }

    pub fn vertex_count(&self) -> usize {
        self.v
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge_set(&self) -> BTreeSet<Vec<usize>> {
        self.edges.iter().cloned().collect()
    }

    pub fn has_edge(&self, e: &[usize]) -> bool {
        let mut e = e.to_vec();
        e.sort_unstable();
        self.edges.contains(&e)
    }

    pub fn degree(&self, x: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(&x)).count()
    }

    pub fn degree_sequence(&self) -> DegreeSequence {
        let mut degrees = vec![0; self.v];
        for e in &self.edges {
            for &x in e {
                degrees[x] += 1;
            }
        }
        let all_odd = degrees.iter().all(|d| d % 2 == 1);
        DegreeSequence { degrees, all_odd }
    }

    /// Whether the whole vertex set is connected (isolated vertices count as
    /// separate components; zero or one vertex is connected).
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Vertex sets of the connected components, each sorted, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.v).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut root = x;
            while p[root] != root {
                root = p[root];
            }
            let mut y = x;
            while p[y] != root {
                let next = p[y];
                p[y] = root;
                y = next;
            }
            root
        }
        for e in &self.edges {
            let a = find(&mut parent, e[0]);
            for &x in &e[1..] {
                let b = find(&mut parent, x);
                if a != b {
                    parent[b] = a;
                }
            }
        }
        let mut by_root: Vec<Vec<usize>> = vec![vec![]; self.v];
        for x in 0..self.v {
            let root = find(&mut parent, x);
            by_root[root].push(x);
        }
        let mut comps: Vec<Vec<usize>> = by_root.into_iter().filter(|c| !c.is_empty()).collect();
        comps.sort_by_key(|c| c[0]);
        comps
    }

    /// Linearity and common degree, if regular.
    pub fn linearity(&self) -> Linearity {
        let linear = self.edges.iter().enumerate().all(|(i, e)| {
            self.edges[i + 1..]
                .iter()
                .all(|f| e.iter().filter(|x| f.contains(x)).count() <= 1)
        });
        let deg = self.degree_sequence().degrees;
        let regular_degree = match deg.first() {
            Some(&d) if deg.iter().all(|&x| x == d) => Some(d),
            _ => None,
        };
        Linearity {
            linear,
            regular_degree,
        }
    }

    /// Sub-hypergraph on all `v` vertices keeping the edges whose indices are set in `mask`.
    pub fn edge_subgraph(&self, mask: u64) -> Hypergraph {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| e.clone())
            .collect();
        Hypergraph {
            r: self.r,
            v: self.v,
            edges,
        }
    }

    pub fn edge_subgraph_by_indices(&self, indices: &[usize]) -> Hypergraph {
        let edges = indices.iter().map(|&i| self.edges[i].clone()).collect();
        Hypergraph {
            r: self.r,
            v: self.v,
            edges,
        }
    }

    /// All non-empty edge subsets, each on the full vertex set, in increasing mask order.
    pub fn edge_subgraphs(&self) -> Result<EdgeSubsets<'_>> {
        let m = self.edges.len();
        if m > MAX_SUBSET_EDGES {
            return Err(Error::budget(
                "edge subset enumeration",
                2f64.powi(m as i32),
                2f64.powi(MAX_SUBSET_EDGES as i32),
            ));
        }
        Ok(EdgeSubsets {
            host: self,
            next: 1,
            end: 1u64 << m,
        })
    }

    /// Induced sub-hypergraph on `vertices`, relabelled to `0..len` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Hypergraph {
        let mut index = vec![usize::MAX; self.v];
        for (i, &x) in vertices.iter().enumerate() {
            index[x] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| e.iter().all(|&x| index[x] != usize::MAX))
            .map(|e| {
                let mut f: Vec<usize> = e.iter().map(|&x| index[x]).collect();
                f.sort_unstable();
                f
            })
            .collect();
        Hypergraph {
            r: self.r,
            v: vertices.len(),
            edges,
        }
    }

    /// Image under the vertex map `perm` (a permutation of `0..v`).
    pub fn relabel(&self, perm: &[usize]) -> Hypergraph {
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let mut f: Vec<usize> = e.iter().map(|&x| perm[x]).collect();
                f.sort_unstable();
                f
            })
            .collect();
        Hypergraph {
            r: self.r,
            v: self.v,
            edges,
        }
    }

    pub fn disjoint_union(&self, other: &Hypergraph) -> Result<Hypergraph> {
        if self.r != other.r {
            return Err(Error::UniformityMismatch {
                left: self.r,
                right: other.r,
            });
        }
        let mut edges = self.edges.clone();
        edges.extend(
            other
                .edges
                .iter()
                .map(|e| e.iter().map(|&x| x + self.v).collect()),
        );
        Ok(Hypergraph {
            r: self.r,
            v: self.v + other.v,
            edges,
        })
    }

    pub fn without_edge(&self, index: usize) -> Hypergraph {
        let mut edges = self.edges.clone();
        edges.remove(index);
        Hypergraph {
            r: self.r,
            v: self.v,
            edges,
        }
    }

    /// Adjacency bitmasks of a graph on at most 64 vertices.
    pub fn adjacency_masks(&self) -> Result<Vec<u64>> {
        if self.r != 2 {
            return Err(Error::pre("adjacency masks need a graph (r = 2)"));
        }
        if self.v > 64 {
            return Err(Error::budget("adjacency bitmask", self.v as f64, 64.0));
        }
        let mut adj = vec![0u64; self.v];
        for e in &self.edges {
            adj[e[0]] |= 1 << e[1];
            adj[e[1]] |= 1 << e[0];
        }
        Ok(adj)
    }

    /// Text form: `r v m`, then one edge per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.r, self.v, self.edges.len());
        for e in &self.edges {
            let line: Vec<String> = e.iter().map(|x| x.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Hypergraph> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::parse("empty hypergraph file"))?;
        let nums = parse_usizes(header)?;
        let [r, v, m] = nums[..] else {
            return Err(Error::parse(format!("header must be `r v m`, got {header:?}")));
        };
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let line = lines
                .next()
                .ok_or_else(|| Error::parse(format!("expected {m} edge lines")))?;
            edges.push(parse_usizes(line)?);
        }
        if lines.next().is_some() {
            return Err(Error::parse("trailing lines after the last edge"));
        }
        Hypergraph::new(r, v, edges).map_err(|e| match e {
            Error::Precondition(msg) => Error::Parse(msg),
            other => other,
        })
    }
}

fn parse_usizes(line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::parse(format!("not a vertex index: {t:?}")))
        })
        .collect()
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeSequence {
    pub degrees: Vec<usize>,
    pub all_odd: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Linearity {
    pub linear: bool,
    pub regular_degree: Option<usize>,
}

/// Iterator over non-empty edge subsets; yields `(mask, subgraph)`.
pub struct EdgeSubsets<'a> {
    host: &'a Hypergraph,
    next: u64,
    end: u64,
}

impl Iterator for EdgeSubsets<'_> {
    type Item = (u64, Hypergraph);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.end {
            return None;
        }
        let mask = self.next;
        self.next += 1;
        Some((mask, self.host.edge_subgraph(mask)))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for EdgeSubsets<'_> {}
