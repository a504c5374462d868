//! Fourier analysis over the space of graphs on `[n]`: copy indicators,
//! their spectra, the code-density bound, signed-graph refutations of
//! positivity and exact maximum codes for tiny `n`.

mod maxcode;
mod vector;
mod wht;

use std::collections::HashSet;

use num::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::engine::{Route, DEFAULT_BUDGET};
use crate::kernels::{density_generic, StepKernel};
use crate::rational::{self, Rational};
use crate::structures::Hypergraph;

pub use maxcode::{bruteforce_max_code, bruteforce_max_code_with, MaxCode, DEFAULT_CODE_NODES, MAX_CODE_PAIRS};
pub use vector::{pair_count, pair_index, GraphVector};
pub use wht::{wht, wht_unnormalized, FourierTable, MAX_DENSE_PAIRS};

/// Injection budget for copy enumeration.
pub const MAX_INJECTIONS: f64 = 5e7;
/// Largest pattern for brute-force automorphism counting.
pub const MAX_AUT_VERTICES: usize = 8;

fn require_graph(h: &Hypergraph) -> Result<()> {
    if h.uniformity() != 2 {
        return Err(Error::pre("graph codes are defined for graphs"));
    }
    Ok(())
}

/// Every edge set of `K_n` isomorphic to `H`, each once, sorted.
pub fn enumerate_copies(h: &Hypergraph, n: usize) -> Result<Vec<GraphVector>> {
    require_graph(h)?;
    let v = h.vertex_count();
    if v > n {
        return Err(Error::pre(format!("H has {v} vertices but n = {n}")));
    }
    let injections: f64 = (0..v).map(|i| (n - i) as f64).product();
    if injections > MAX_INJECTIONS {
        return Err(Error::budget("copy enumeration (injections)", injections, MAX_INJECTIONS));
    }
    let mut seen = HashSet::new();
    let mut map = Vec::with_capacity(v);
    let mut used = vec![false; n];
    extend(h, n, &mut map, &mut used, &mut seen);
    let mut out: Vec<GraphVector> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

fn extend(h: &Hypergraph, n: usize, map: &mut Vec<usize>, used: &mut [bool], seen: &mut HashSet<GraphVector>) {
    if map.len() == h.vertex_count() {
        let mut g = GraphVector::empty(n);
        for e in h.edges() {
            g.toggle(map[e[0]], map[e[1]]);
        }
        seen.insert(g);
        return;
    }
    for x in 0..n {
        if !used[x] {
            used[x] = true;
            map.push(x);
            extend(h, n, map, used, seen);
            map.pop();
            used[x] = false;
        }
    }
}

/// `|Aut(H)|` by trying every permutation.
pub fn automorphism_count(h: &Hypergraph) -> Result<u64> {
    let v = h.vertex_count();
    if v > MAX_AUT_VERTICES {
        return Err(Error::budget("automorphism count (vertices)", v as f64, MAX_AUT_VERTICES as f64));
    }
    let edges = h.edge_set();
    let mut perm: Vec<usize> = (0..v).collect();
    let mut count = 0;
    loop {
        if h.relabel(&perm).edge_set() == edges {
            count += 1;
        }
        // Next permutation in lexicographic order.
        let Some(i) = (0..v.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            return Ok(count);
        };
        let j = (i + 1..v).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}

fn dense_len(n: usize) -> Result<usize> {
    let pairs = pair_count(n);
    if pairs > MAX_DENSE_PAIRS {
        return Err(Error::budget("dense spectrum (pairs)", pairs as f64, MAX_DENSE_PAIRS as f64));
    }
    Ok(1 << pairs)
}

/// The indicator of the copies, as a dense table.
pub fn indicator_table(copies: &[GraphVector], n: usize) -> Result<Vec<f64>> {
    let mut f = vec![0.0; dense_len(n)?];
    for c in copies {
        f[c.index() as usize] = 1.0;
    }
    Ok(f)
}

/// Spectrum of the copy indicator `1_B`.
pub fn indicator_spectrum(h: &Hypergraph, n: usize) -> Result<FourierTable> {
    dense_len(n)?;
    let copies = enumerate_copies(h, n)?;
    Ok(FourierTable {
        n,
        values: wht(&indicator_table(&copies, n)?)?,
    })
}

/// `1̂_B(x)` by direct summation over the copies.
pub fn fourier_coefficient(copies: &[GraphVector], x: &GraphVector) -> Rational {
    let signed: i64 = copies.iter().map(|y| if x.dot(y) { -1 } else { 1 }).sum();
    Rational::from_integer(signed.into()) * rational::pow2(-(pair_count(x.n()) as i64))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CodeBound {
    pub n: usize,
    pub copies: usize,
    #[serde(with = "rational::serde_str")]
    pub beta: Rational,
    #[serde(with = "rational::serde_str")]
    pub gamma: Rational,
    #[serde(serialize_with = "as_hex")]
    pub argmin: GraphVector,
    /// `-γ/β`; above 1 the bound says nothing.
    #[serde(with = "rational::serde_str")]
    pub bound: Rational,
    /// `-γ · 2^{C(n,2)} / n^{v(H)-1}`.
    pub scaled_gamma: f64,
}

pub(crate) fn as_hex<S: serde::Serializer>(g: &GraphVector, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&g.to_hex())
}

/// Minimum of the spectrum of `1_B` and the resulting upper bound on the
/// density of a code avoiding differences in `B`. The float scan only picks
/// the argmin; γ and β are recomputed exactly.
pub fn code_density_bound(h: &Hypergraph, n: usize) -> Result<CodeBound> {
    let copies = enumerate_copies(h, n)?;
    if copies.is_empty() {
        return Err(Error::pre("no copies of H on n vertices"));
    }
    let spectrum = wht(&indicator_table(&copies, n)?)?;
    let (arg, _) = spectrum
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, &x)| if x < best.1 { (i, x) } else { best });
    let argmin = GraphVector::from_index(n, arg as u64);
    let gamma = fourier_coefficient(&copies, &argmin);
    let beta = Rational::from_integer(copies.len().into()) * rational::pow2(-(pair_count(n) as i64));
    let bound = -&gamma / &beta;
    let scaled_gamma = -rational::to_f64(&gamma) * 2f64.powi(pair_count(n) as i32)
        / (n as f64).powi(h.vertex_count() as i32 - 1);
    Ok(CodeBound {
        n,
        copies: copies.len(),
        beta,
        gamma,
        argmin,
        bound,
        scaled_gamma,
    })
}

/// `n` equal parts; `-1` between parts adjacent in `x`, `+1` between other
/// distinct parts, `0` inside a part.
pub fn signed_kernel_from_graph(x: &GraphVector) -> Result<StepKernel> {
    let n = x.n();
    if n == 0 {
        return Err(Error::pre("graph vector has no vertices"));
    }
    StepKernel::from_fn(2, StepKernel::equal_measures(n), |t| {
        if t[0] == t[1] {
            Rational::zero()
        } else if x.has_edge(t[0], t[1]) {
            -Rational::one()
        } else {
            Rational::one()
        }
    })
}

/// `t_H` of [`signed_kernel_from_graph`] in integer arithmetic: the table
/// has entries in `{-1, 0, 1}` and all parts weigh `1/n`.
pub fn signed_density(h: &Hypergraph, x: &GraphVector) -> Result<Rational> {
    require_graph(h)?;
    let n = x.n();
    let mut table = vec![0i128; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                table[i * n + j] = if x.has_edge(i, j) { -1 } else { 1 };
            }
        }
    }
    let sum = density_generic(h, 2, &vec![1i128; n], &table, Route::Auto, DEFAULT_BUDGET)?;
    let denom = num::BigInt::from(n).pow(h.vertex_count() as u32);
    Ok(Rational::new(sum.into(), denom))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Refutation {
    #[serde(with = "rational::serde_str")]
    pub coefficient: Rational,
    #[serde(with = "rational::serde_str")]
    pub threshold: Rational,
    pub kernel: StepKernel,
    #[serde(with = "rational::serde_str")]
    pub density: Rational,
}

/// If `1̂_B(x) < -2 v^v β / n`, the signed kernel of `x` together with its
/// exact density; `None` when the threshold is not met.
pub fn positivity_refutation_from_fourier(h: &Hypergraph, n: usize, x: &GraphVector) -> Result<Option<Refutation>> {
    if x.n() != n {
        return Err(Error::pre(format!("graph vector has n = {}, expected {n}", x.n())));
    }
    let copies = enumerate_copies(h, n)?;
    let coefficient = fourier_coefficient(&copies, x);
    let v = h.vertex_count();
    let beta = Rational::from_integer(copies.len().into()) * rational::pow2(-(pair_count(n) as i64));
    let vv = Rational::from_integer(num::BigInt::from(v).pow(v as u32));
    let threshold = rational::int(2) * vv * beta / rational::int(n as i64);
    if coefficient >= -threshold.clone() {
        return Ok(None);
    }
    let kernel = signed_kernel_from_graph(x)?;
    let density = signed_density(h, x)?;
    Ok(Some(Refutation {
        coefficient,
        threshold,
        kernel,
        density,
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpectedFourier {
    pub n: usize,
    pub copies: usize,
    #[serde(with = "rational::serde_str")]
    pub beta: Rational,
    /// `E[1̂_B(x)]` for the random graph `x` drawn from the weights.
    #[serde(with = "rational::serde_str")]
    pub expectation: Rational,
    /// `expectation / β`, which tends to `t_H(W)` as `k` grows.
    #[serde(with = "rational::serde_str")]
    pub ratio: Rational,
}

/// Blow each of the `m` weight classes up into `k` vertices and let pair
/// `ij` be an edge of `x` with probability `(1 - w)/2`; then
/// `E[1̂_B(x)] = (β/|B|) Σ_{y ∈ B} Π_{ij ∈ y} w_{π(i)π(j)}`.
pub fn expected_fourier_from_kernel(h: &Hypergraph, w: &[Vec<Rational>], k: usize) -> Result<ExpectedFourier> {
    let m = w.len();
    if m == 0 || k == 0 {
        return Err(Error::pre("need at least one class and k ≥ 1"));
    }
    for (i, row) in w.iter().enumerate() {
        if row.len() != m {
            return Err(Error::pre("weight matrix must be square"));
        }
        if !row[i].is_zero() {
            return Err(Error::pre("weight matrix must have a zero diagonal"));
        }
        for (j, x) in row.iter().enumerate() {
            if *x != w[j][i] {
                return Err(Error::pre("weight matrix must be symmetric"));
            }
            if *x > Rational::one() || *x < -Rational::one() {
                return Err(Error::pre("weights must lie in [-1, 1]"));
            }
        }
    }
    let n = m * k;
    let copies = enumerate_copies(h, n)?;
    if copies.is_empty() {
        return Err(Error::pre("no copies of H on the blow-up"));
    }
    let class = |u: usize| u / k;
    let mut total = Rational::zero();
    for y in &copies {
        let mut prod = Rational::one();
        for (a, b) in y.edges() {
            prod *= &w[class(a)][class(b)];
            if prod.is_zero() {
                break;
            }
        }
        total += prod;
    }
    let b = Rational::from_integer(copies.len().into());
    let beta = &b * rational::pow2(-(pair_count(n) as i64));
    let ratio = &total / &b;
    Ok(ExpectedFourier {
        n,
        copies: copies.len(),
        expectation: &beta * &ratio,
        beta,
        ratio,
    })
}
