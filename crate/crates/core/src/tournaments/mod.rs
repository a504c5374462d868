//! Higher-order tournaments: `(r-1)`-sets carry a sign, an `r`-set is an edge
//! of `G(T)` when every `(r-2)`-subset has zero weight, and the probability
//! that a labelled hypergraph appears in `G(T)` for a uniform random `T` is
//! computed exactly by linear algebra over F_2.

mod gf2;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::rng;
use crate::structures::Hypergraph;

pub use gf2::{Gf2Basis, Gf2System};

/// Largest `n` for which [`build_g`] materializes `G(T)`.
pub const MAX_BUILD_N: usize = 60;
/// Edge-candidate budget for [`build_g`].
pub const MAX_BUILD_CANDIDATES: f64 = 5e6;
/// Variable budget for [`copy_probability_exact`].
pub const MAX_VARIABLES: usize = 10_000;

#[derive(Clone, Debug)]
enum Source {
    /// Sign bits from a counter-based hash of the set, keyed by a seed.
    Hashed(u64),
    /// Explicit signs; absent sets are `+1`.
    Table(HashMap<Vec<usize>, i8>),
}

/// An `s`-uniform tournament on `[0, n)`: a sign `σ(T)` for the increasing
/// arrangement of every `s`-set `T`. Signs of other arrangements follow by
/// permutation parity.
#[derive(Clone, Debug)]
pub struct Tournament {
    n: usize,
    s: usize,
    source: Source,
    flipped: bool,
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl Tournament {
    /// Uniform random signs, derived lazily from `seed`.
    pub fn random(s: usize, n: usize, seed: u64) -> Result<Self> {
        if s == 0 {
            return Err(Error::pre("tournament sets must be non-empty"));
        }
        Ok(Tournament {
            n,
            s,
            source: Source::Hashed(rng::derive_seed(seed, "tournament")),
            flipped: false,
        })
    }

    /// Explicit signs for some sets (sorted), `+1` elsewhere.
    pub fn with_signs(s: usize, n: usize, signs: HashMap<Vec<usize>, i8>) -> Result<Self> {
        if s == 0 {
            return Err(Error::pre("tournament sets must be non-empty"));
        }
        for (t, &sign) in &signs {
            if t.len() != s || t.windows(2).any(|w| w[0] >= w[1]) || t.iter().any(|&x| x >= n) {
                return Err(Error::pre(format!("{t:?} is not a sorted {s}-subset of [0, {n})")));
            }
            if sign != 1 && sign != -1 {
                return Err(Error::pre("signs must be +1 or -1"));
            }
        }
        Ok(Tournament {
            n,
            s,
            source: Source::Table(signs),
            flipped: false,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Size of the oriented sets, `r - 1`.
    pub fn s(&self) -> usize {
        self.s
    }

    /// The tournament with every sign negated.
    pub fn flipped(&self) -> Tournament {
        Tournament {
            flipped: !self.flipped,
            ..self.clone()
        }
    }

    fn check_set(&self, t: &[usize], size: usize) -> Result<()> {
        if t.len() != size || t.windows(2).any(|w| w[0] >= w[1]) || t.iter().any(|&x| x >= self.n) {
            return Err(Error::pre(format!(
                "{t:?} is not a sorted {size}-subset of [0, {})",
                self.n
            )));
        }
        Ok(())
    }

    fn raw_sigma(&self, t: &[usize]) -> i8 {
        let sign = match &self.source {
            Source::Hashed(key) => {
                let h = t.iter().fold(*key, |h, &x| rng::splitmix64(h ^ x as u64));
                if h >> 63 == 1 {
                    -1
                } else {
                    1
                }
            }
            Source::Table(map) => map.get(t).copied().unwrap_or(1),
        };
        if self.flipped {
            -sign
        } else {
            sign
        }
    }

    /// `σ(T)` for a sorted `s`-set.
    pub fn sigma(&self, t: &[usize]) -> Result<i8> {
        self.check_set(t, self.s)?;
        Ok(self.raw_sigma(t))
    }

    /// Sign of the arrangement "S ascending, then the vertex of `T \ S`".
    pub fn t_sign(&self, t: &[usize], s: &[usize]) -> Result<i8> {
        self.check_set(t, self.s)?;
        if s.len() + 1 != t.len() || s.iter().any(|x| !t.contains(x)) {
            return Err(Error::pre(format!("{s:?} is not a co-singleton subset of {t:?}")));
        }
        let a = *t.iter().find(|x| !s.contains(x)).unwrap();
        Ok(self.raw_sigma(t) * parity_sign(s, a))
    }

    /// Sum of the T-signs of `S` over the two `(r-1)`-sets between `S` and `R`.
    pub fn r_weight(&self, r: &[usize], s: &[usize]) -> Result<i32> {
        self.check_set(r, self.s + 1)?;
        if s.len() + 2 != r.len() || s.iter().any(|x| !r.contains(x)) {
            return Err(Error::pre(format!("{s:?} is not an (r-2)-subset of {r:?}")));
        }
        Ok(r.iter()
            .filter(|x| !s.contains(x))
            .map(|&skip| {
                let t: Vec<usize> = r.iter().copied().filter(|&x| x != skip).collect();
                let a = *t.iter().find(|x| !s.contains(x)).unwrap();
                (self.raw_sigma(&t) * parity_sign(s, a)) as i32
            })
            .sum())
    }

    /// Whether the `r`-set (any order) is an edge of `G(T)`.
    pub fn is_edge(&self, r: &[usize]) -> Result<bool> {
        let mut sorted = r.to_vec();
        sorted.sort_unstable();
        self.check_set(&sorted, self.s + 1)?;
        Ok(self.is_edge_sorted(&sorted))
    }

    fn is_edge_sorted(&self, r: &[usize]) -> bool {
        let k = r.len();
        let mut t = Vec::with_capacity(k - 1);
        let mut signs = Vec::with_capacity(k);
        // σ of R minus its p-th element.
        for p in 0..k {
            t.clear();
            t.extend(r.iter().enumerate().filter(|&(i, _)| i != p).map(|(_, &x)| x));
            signs.push(self.raw_sigma(&t));
        }
        for i in 0..k {
            for j in i + 1..k {
                // S = R \ {r_i, r_j}; T = R \ {r_j} leaves r_i, T' = R \ {r_i} leaves r_j.
                // Elements of S above r_i: those at positions > i other than j.
                let above_i = (k - 1 - i) - 1;
                let above_j = k - 1 - j;
                let a = signs[j] as i32 * if above_i.is_multiple_of(2) { 1 } else { -1 };
                let b = signs[i] as i32 * if above_j.is_multiple_of(2) { 1 } else { -1 };
                if a + b != 0 {
                    return false;
                }
            }
        }
        true
    }
}

/// `(-1)^{#{x ∈ S : x > a}}`.
fn parity_sign(s: &[usize], a: usize) -> i8 {
    if s.iter().filter(|&&x| x > a).count() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn sample_tournament(s: usize, n: usize, seed: u64) -> Result<Tournament> {
    Tournament::random(s, n, seed)
}

fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        f(&c);
        let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
            return;
        };
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// The `(s+1)`-graph `G(T)` on `[0, n)`.
pub fn build_g(t: &Tournament) -> Result<Hypergraph> {
    let r = t.s + 1;
    if t.n > MAX_BUILD_N {
        return Err(Error::budget("G(T) materialization (vertices)", t.n as f64, MAX_BUILD_N as f64));
    }
    let candidates = binomial(t.n, r);
    if candidates > MAX_BUILD_CANDIDATES {
        return Err(Error::budget("G(T) materialization (r-sets)", candidates, MAX_BUILD_CANDIDATES));
    }
    let mut edges = Vec::new();
    for_each_subset(t.n, r, |c| {
        if t.is_edge_sorted(c) {
            edges.push(c.to_vec());
        }
    });
    Hypergraph::new(r, t.n, edges)
}

/// Exact probability that a fixed labelled copy of `H` lies in `G(T)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CopyProbability {
    #[serde(with = "rational::serde_str")]
    pub probability: Rational,
    pub consistent: bool,
    pub rank: usize,
    pub variables: usize,
    pub equations: usize,
}

/// Each edge `R` and pair `x < y` in it give the equation
/// `b(R∖y) ⊕ b(R∖x) = 1 ⊕ par(R∖y, S) ⊕ par(R∖x, S)` with `S = R ∖ {x, y}`,
/// where `σ = (-1)^b`. The probability is `2^-rank`, or 0 if inconsistent.
pub fn copy_probability_exact(h: &Hypergraph) -> Result<CopyProbability> {
    let system = Gf2System::for_hypergraph(h)?;
    let basis = system.eliminate();
    let probability = if basis.consistent {
        rational::pow2(-(basis.rank as i64))
    } else {
        Rational::from_integer(0.into())
    };
    Ok(CopyProbability {
        probability,
        consistent: basis.consistent,
        rank: basis.rank,
        variables: system.variables.len(),
        equations: system.rows.len(),
    })
}

/// A Monte Carlo estimate with a 95% normal-approximation interval.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub r: usize,
    pub n: usize,
    pub samples: u64,
    pub hits: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

const MC_CHUNK: u64 = 8192;

/// Labelled-copy density of `H` in `G(T_n)` for one tournament drawn from
/// `seed`, estimated from uniformly random injective vertex maps.
pub fn mc_density(h: &Hypergraph, n: usize, samples: u64, seed: u64) -> Result<McEstimate> {
    let r = h.uniformity();
    if r < 2 {
        return Err(Error::pre("uniformity must be at least 2"));
    }
    if n < h.vertex_count() {
        return Err(Error::pre(format!(
            "n = {n} is smaller than v(H) = {}",
            h.vertex_count()
        )));
    }
    if samples == 0 {
        return Err(Error::pre("at least one sample is required"));
    }
    let t = sample_tournament(r - 1, n, seed)?;
    let v = h.vertex_count();
    let chunks = samples.div_ceil(MC_CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = rng::stream(seed, "mc-maps", c);
            let count = MC_CHUNK.min(samples - c * MC_CHUNK);
            let mut image = Vec::with_capacity(r);
            let mut hits = 0u64;
            for _ in 0..count {
                let map = rand::seq::index::sample(&mut rng, n, v).into_vec();
                let ok = h.edges().iter().all(|e| {
                    image.clear();
                    image.extend(e.iter().map(|&x| map[x]));
                    image.sort_unstable();
                    t.is_edge_sorted(&image)
                });
                hits += ok as u64;
            }
            hits
        })
        .sum();
    let p = hits as f64 / samples as f64;
    let stderr = (p * (1.0 - p) / samples as f64).sqrt();
    Ok(McEstimate {
        r,
        n,
        samples,
        hits,
        estimate: p,
        stderr,
        ci_low: p - 1.96 * stderr,
        ci_high: p + 1.96 * stderr,
        seed,
    })
}
