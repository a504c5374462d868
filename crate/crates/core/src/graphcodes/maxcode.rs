use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::structures::Hypergraph;

use super::{enumerate_copies, pair_count, GraphVector};

/// Largest number of pairs for the exact search (`2^10` graphs).
pub const MAX_CODE_PAIRS: usize = 10;
/// Default search-node budget.
pub const DEFAULT_CODE_NODES: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaxCode {
    pub n: usize,
    pub size: usize,
    #[serde(with = "rational::serde_str")]
    pub density: Rational,
    #[serde(serialize_with = "hex_list")]
    pub code: Vec<GraphVector>,
}

fn hex_list<S: serde::Serializer>(code: &[GraphVector], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(code.iter().map(|g| g.to_hex()))
}

impl MaxCode {
    /// No two members differ by a copy.
    pub fn verify(&self, copies: &[GraphVector]) -> bool {
        let forbidden: std::collections::HashSet<&GraphVector> = copies.iter().collect();
        self.code.iter().enumerate().all(|(i, a)| {
            self.code[i + 1..].iter().all(|b| !forbidden.contains(&a.xor(b)))
        })
    }
}

type Bits = Vec<u64>;

fn count(b: &Bits) -> usize {
    b.iter().map(|w| w.count_ones() as usize).sum()
}

fn lowest(b: &Bits) -> Option<usize> {
    b.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn and_not(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & !y).collect()
}

fn and(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn clear(b: &mut Bits, i: usize) {
    b[i / 64] &= !(1 << (i % 64));
}

fn ones(b: &Bits) -> impl Iterator<Item = usize> + '_ {
    b.iter().enumerate().flat_map(|(i, &w)| {
        (0..64).filter(move |k| w >> k & 1 == 1).map(move |k| i * 64 + k)
    })
}

struct Search {
    /// Closed neighbourhoods.
    closed: Vec<Bits>,
    best: Vec<usize>,
    nodes: u64,
    limit: u64,
}

impl Search {
    /// Greedy clique cover of `cand`: an upper bound on its independence number.
    fn bound(&self, cand: &Bits) -> usize {
        let mut rest = cand.clone();
        let mut cliques = 0;
        while let Some(v) = lowest(&rest) {
            let mut grow = and(&rest, &self.closed[v]);
            clear(&mut grow, v);
            clear(&mut rest, v);
            while let Some(w) = lowest(&grow) {
                clear(&mut rest, w);
                grow = and(&grow, &self.closed[w]);
                clear(&mut grow, w);
            }
            cliques += 1;
        }
        cliques
    }

    fn go(&mut self, cand: Bits, chosen: &mut Vec<usize>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::budget("maximum code search (nodes)", self.nodes as f64, self.limit as f64));
        }
        if count(&cand) == 0 {
            if chosen.len() > self.best.len() {
                self.best = chosen.clone();
            }
            return Ok(());
        }
        if chosen.len() + self.bound(&cand) <= self.best.len() {
            return Ok(());
        }
        let degree = |v: usize| count(&and(&cand, &self.closed[v])) - 1;
        let (mut lo, mut hi) = ((usize::MAX, 0), (0, 0));
        for v in ones(&cand) {
            let d = degree(v);
            if d < lo.0 {
                lo = (d, v);
            }
            if d >= hi.0 {
                hi = (d, v);
            }
        }
        if lo.0 <= 1 {
            // Some maximum independent set contains a vertex of degree ≤ 1.
            chosen.push(lo.1);
            let next = and_not(&cand, &self.closed[lo.1]);
            self.go(next, chosen)?;
            chosen.pop();
            return Ok(());
        }
        let u = hi.1;
        chosen.push(u);
        self.go(and_not(&cand, &self.closed[u]), chosen)?;
        chosen.pop();
        let mut without = cand;
        clear(&mut without, u);
        self.go(without, chosen)
    }
}

/// Largest family of graphs on `[n]` with no two members differing by a copy
/// of `H`, by branch and bound on the Cayley conflict graph.
pub fn bruteforce_max_code(h: &Hypergraph, n: usize) -> Result<MaxCode> {
    bruteforce_max_code_with(h, n, DEFAULT_CODE_NODES)
}

pub fn bruteforce_max_code_with(h: &Hypergraph, n: usize, node_limit: u64) -> Result<MaxCode> {
    let pairs = pair_count(n);
    if pairs > MAX_CODE_PAIRS {
        return Err(Error::budget("maximum code search (pairs)", pairs as f64, MAX_CODE_PAIRS as f64));
    }
    let copies = enumerate_copies(h, n)?;
    let size = 1usize << pairs;
    let words = size.div_ceil(64);
    let diffs: Vec<usize> = copies.iter().map(|c| c.index() as usize).filter(|&d| d != 0).collect();
    let closed: Vec<Bits> = (0..size)
        .map(|x| {
            let mut b = vec![0u64; words];
            b[x / 64] |= 1 << (x % 64);
            for &d in &diffs {
                let y = x ^ d;
                b[y / 64] |= 1 << (y % 64);
            }
            b
        })
        .collect();
    let mut search = Search {
        closed,
        best: Vec::new(),
        nodes: 0,
        limit: node_limit,
    };
    // The conflict graph is vertex-transitive, so some optimum contains 0.
    let mut all = vec![0u64; words];
    for x in 0..size {
        all[x / 64] |= 1 << (x % 64);
    }
    let mut chosen = vec![0];
    let start = and_not(&all, &search.closed[0]);
    search.go(start, &mut chosen)?;
    let mut code: Vec<GraphVector> = search
        .best
        .iter()
        .map(|&x| GraphVector::from_index(n, x as u64))
        .collect();
    code.sort();
    Ok(MaxCode {
        n,
        size: code.len(),
        density: rational::ratio(code.len() as i64, size as i64),
        code,
    })
}
