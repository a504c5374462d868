//! Independence polynomials, smallest-root isolation, and exact witnesses
//! that connected graphs with only odd degrees are not positive.

mod polynomial;

use std::collections::HashMap;

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{density, StepKernel};
use crate::rational::{self, Rational};
use crate::structures::{levi, Hypergraph};

pub use polynomial::Polynomial;

/// Largest graph handled by subset enumeration.
pub const MAX_ENUMERATION_VERTICES: usize = 24;
/// Largest graph handled at all (deletion recursion on 64-bit masks).
pub const MAX_RECURSION_VERTICES: usize = 40;
/// Default bracket width, `2^-20`.
pub fn default_tolerance() -> Rational {
    rational::pow2(-20)
}

fn require_graph(g: &Hypergraph) -> Result<()> {
    if g.uniformity() != 2 {
        return Err(Error::pre("independence polynomials are defined for graphs"));
    }
    Ok(())
}

fn from_counts(counts: &[u128]) -> Polynomial {
    Polynomial::new(
        counts
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                let c = Rational::from_integer(c.into());
                if k % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect(),
    )
}

/// `I_G(x) = Σ_k i_k(G) (-x)^k` by scanning all `2^v` vertex subsets.
pub fn independence_polynomial_enumerate(g: &Hypergraph) -> Result<Polynomial> {
    require_graph(g)?;
    let v = g.vertex_count();
    if v > MAX_ENUMERATION_VERTICES {
        return Err(Error::budget(
            "independence polynomial enumeration (vertices)",
            v as f64,
            MAX_ENUMERATION_VERTICES as f64,
        ));
    }
    let adj = g.adjacency_masks()?;
    let mut counts = vec![0u128; v + 1];
    for mask in 0u64..(1u64 << v) {
        let mut rest = mask;
        let mut independent = true;
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if adj[x] & mask != 0 {
                independent = false;
                break;
            }
        }
        if independent {
            counts[mask.count_ones() as usize] += 1;
        }
    }
    Ok(from_counts(&counts))
}

/// `I_G` through `I_G = I_{G-v} - x I_{G-N[v]}`, splitting off connected
/// components and memoizing on induced vertex sets.
pub fn independence_polynomial_recursive(g: &Hypergraph) -> Result<Polynomial> {
    require_graph(g)?;
    let v = g.vertex_count();
    if v > MAX_RECURSION_VERTICES {
        return Err(Error::budget(
            "independence polynomial recursion (vertices)",
            v as f64,
            MAX_RECURSION_VERTICES as f64,
        ));
    }
    let adj = g.adjacency_masks()?;
    let full = if v == 64 { u64::MAX } else { (1u64 << v) - 1 };
    let mut memo = HashMap::new();
    Ok(from_counts(&counts_rec(full, &adj, &mut memo)))
}

/// Subset enumeration for small graphs, deletion recursion otherwise.
pub fn independence_polynomial(g: &Hypergraph) -> Result<Polynomial> {
    if g.vertex_count() <= 12 {
        independence_polynomial_enumerate(g)
    } else {
        independence_polynomial_recursive(g)
    }
}

fn counts_rec(mask: u64, adj: &[u64], memo: &mut HashMap<u64, Vec<u128>>) -> Vec<u128> {
    if mask == 0 {
        return vec![1];
    }
    if let Some(c) = memo.get(&mask) {
        return c.clone();
    }
    let comp = component_of(mask.trailing_zeros() as usize, mask, adj);
    let result = if comp != mask {
        let a = counts_rec(comp, adj, memo);
        let b = counts_rec(mask & !comp, adj, memo);
        convolve(&a, &b)
    } else {
        // Branch on a vertex of maximum degree inside the mask.
        let mut best = mask.trailing_zeros() as usize;
        let mut best_deg = 0;
        let mut rest = mask;
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let d = (adj[x] & mask).count_ones();
            if d > best_deg {
                best = x;
                best_deg = d;
            }
        }
        let without = counts_rec(mask & !(1 << best), adj, memo);
        let with = counts_rec(mask & !(1 << best) & !adj[best], adj, memo);
        let mut out = without;
        if out.len() < with.len() + 1 {
            out.resize(with.len() + 1, 0);
        }
        for (k, c) in with.iter().enumerate() {
            out[k + 1] += c;
        }
        out
    };
    memo.insert(mask, result.clone());
    result
}

fn component_of(start: usize, mask: u64, adj: &[u64]) -> u64 {
    let mut seen = 1u64 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let x = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = adj[x] & mask & !seen;
        seen |= new;
        frontier |= new;
    }
    seen
}

fn convolve(a: &[u128], b: &[u128]) -> Vec<u128> {
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Rational interval `(lo, hi)` with `P(lo) > 0 > P(hi)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootBracket {
    #[serde(with = "rational::serde_str")]
    pub lo: Rational,
    #[serde(with = "rational::serde_str")]
    pub hi: Rational,
}

impl RootBracket {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / rational::int(2)
    }
}

const SCAN_POINTS: i64 = 4096;

/// Bracket the first sign change of `P` in `(0, 1)` to width `tol` by exact
/// bisection. For an independence polynomial of a connected graph with an
/// edge, this is the smallest root.
pub fn smallest_root_bracket(p: &Polynomial, tol: &Rational) -> Result<RootBracket> {
    if !tol.is_positive() {
        return Err(Error::pre("bracket tolerance must be positive"));
    }
    if p.sign_at(&Rational::zero()) <= 0 {
        return Err(Error::pre("polynomial must be positive at 0"));
    }
    let grid = |j: i64| rational::ratio(j, SCAN_POINTS);
    // Cheap float scan for the first negative grid value, then exact repair.
    let mut j = (1..SCAN_POINTS)
        .find(|&j| p.eval_f64(j as f64 / SCAN_POINTS as f64) <= 0.0)
        .ok_or_else(|| Error::pre("no sign change of the polynomial in (0, 1)"))?;
    while j > 1 && p.sign_at(&grid(j - 1)) <= 0 {
        j -= 1;
    }
    while p.sign_at(&grid(j)) > 0 {
        j += 1;
        if j >= SCAN_POINTS {
            return Err(Error::pre("no sign change of the polynomial in (0, 1)"));
        }
    }
    let mut lo = grid(j - 1);
    let mut hi = grid(j);
    loop {
        if p.sign_at(&hi) == 0 {
            return straddle(p, &hi, tol, &lo);
        }
        if &hi - &lo <= *tol {
            return Ok(RootBracket { lo, hi });
        }
        let mid = (&lo + &hi) / rational::int(2);
        match p.sign_at(&mid) {
            1 => lo = mid,
            -1 => hi = mid,
            _ => return straddle(p, &mid, tol, &lo),
        }
    }
}

/// Bracket an exact rational root `x` by stepping `δ` to either side.
fn straddle(p: &Polynomial, x: &Rational, tol: &Rational, floor: &Rational) -> Result<RootBracket> {
    let mut delta = tol.min(&(x - floor)).clone() / rational::int(2);
    for _ in 0..200 {
        let lo = x - &delta;
        let hi = x + &delta;
        if p.sign_at(&lo) > 0 && p.sign_at(&hi) < 0 && lo.is_positive() && hi < Rational::one() {
            return Ok(RootBracket { lo, hi });
        }
        delta /= rational::int(2);
    }
    Err(Error::pre("root is not a simple sign change"))
}

/// The two-part kernel: measures `(α, 1-α)`, value 0 inside the first part,
/// -1 across, +1 inside the second.
pub fn odd_witness_kernel(alpha: &Rational) -> Result<StepKernel> {
    if !alpha.is_positive() || *alpha >= Rational::one() {
        return Err(Error::pre(format!(
            "alpha must lie in (0, 1), got {}",
            rational::to_string(alpha)
        )));
    }
    let measures = vec![alpha.clone(), Rational::one() - alpha];
    StepKernel::from_fn(2, measures, |t| match (t[0], t[1]) {
        (0, 0) => Rational::zero(),
        (1, 1) => Rational::one(),
        _ => -Rational::one(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessIdentity {
    #[serde(with = "rational::serde_str")]
    pub lhs: Rational,
    #[serde(with = "rational::serde_str")]
    pub rhs: Rational,
    pub equal: bool,
}

fn require_all_odd(g: &Hypergraph) -> Result<()> {
    let deg = g.degree_sequence();
    if !deg.all_odd {
        let v = deg.degrees.iter().position(|d| d % 2 == 0).unwrap_or(0);
        return Err(Error::pre(format!(
            "every degree must be odd; vertex {v} has degree {}",
            deg.degrees.get(v).copied().unwrap_or(0)
        )));
    }
    Ok(())
}

/// Compare `t_G(W_α)` with `(1-α)^v I_G(α/(1-α))`.
pub fn verify_witness_identity(g: &Hypergraph, alpha: &Rational) -> Result<WitnessIdentity> {
    require_graph(g)?;
    require_all_odd(g)?;
    let w = odd_witness_kernel(alpha)?;
    let lhs = density(g, &w)?;
    let rhs = identity_rhs(&independence_polynomial(g)?, g.vertex_count(), alpha);
    let equal = lhs == rhs;
    Ok(WitnessIdentity { lhs, rhs, equal })
}

fn identity_rhs(poly: &Polynomial, v: usize, alpha: &Rational) -> Rational {
    let beta = Rational::one() - alpha;
    rational::pow(&beta, v) * poly.eval(&(alpha / &beta))
}

/// Exact evidence that a graph is not positive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OddCertificate {
    #[serde(with = "rational::serde_str")]
    pub alpha: Rational,
    #[serde(with = "rational::serde_str")]
    pub density: Rational,
    pub polynomial: Polynomial,
    pub bracket: RootBracket,
}

impl OddCertificate {
    pub fn kernel(&self) -> StepKernel {
        odd_witness_kernel(&self.alpha).expect("alpha was validated")
    }

    /// Recompute the density from scratch.
    pub fn verify(&self, g: &Hypergraph) -> Result<bool> {
        let value = density(g, &self.kernel())?;
        Ok(value == self.density && value.is_negative())
    }
}

/// Find `α` with `t_G(W_α) < 0` for a connected graph with an edge and only
/// odd degrees.
///
/// The smallest root β of `I_G` is bracketed, then dyadic `α` are tried from
/// coarse to fine just past `hi/(1+hi)`, where `I_G(α/(1-α)) < 0`. The
/// returned density is recomputed by the density engine.
pub fn certify_nonpositive_odd(g: &Hypergraph) -> Result<OddCertificate> {
    require_graph(g)?;
    if g.edge_count() == 0 {
        return Err(Error::pre("graph has no edges"));
    }
    if !g.is_connected() {
        return Err(Error::pre("graph is not connected"));
    }
    require_all_odd(g)?;
    let polynomial = independence_polynomial(g)?;
    let bracket = smallest_root_bracket(&polynomial, &default_tolerance())?;
    let target = &bracket.hi / (Rational::one() + &bracket.hi);
    let v = g.vertex_count();
    let candidates = (1..=64u32)
        .map(|d| {
            let scale = rational::pow2(d as i64);
            (&target * &scale).ceil() / scale
        })
        .chain(std::iter::once(target.clone()));
    for alpha in candidates {
        if !alpha.is_positive() || alpha >= Rational::one() {
            continue;
        }
        if !identity_rhs(&polynomial, v, &alpha).is_negative() {
            continue;
        }
        let value = density(g, &odd_witness_kernel(&alpha)?)?;
        if value.is_negative() {
            return Ok(OddCertificate {
                alpha,
                density: value,
                polynomial,
                bracket,
            });
        }
    }
    Err(Error::pre("no negative witness found past the smallest root"))
}

/// Non-positivity of the Levi graph of an odd-uniformity hypergraph whose
/// degrees are all odd.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeviCertificate {
    pub levi: Hypergraph,
    pub witness: OddCertificate,
}

impl LeviCertificate {
    pub fn verify(&self, h: &Hypergraph) -> Result<bool> {
        Ok(levi(h) == self.levi && self.witness.verify(&self.levi)?)
    }
}

pub fn levi_nonpositivity(h: &Hypergraph) -> Result<LeviCertificate> {
    let r = h.uniformity();
    if r.is_multiple_of(2) {
        return Err(Error::pre(format!("uniformity must be odd, got {r}")));
    }
    if h.edge_count() == 0 || !h.is_connected() {
        return Err(Error::pre("hypergraph must be connected with at least one edge"));
    }
    require_all_odd(h)?;
    let l = levi(h);
    let witness = certify_nonpositive_odd(&l)?;
    Ok(LeviCertificate { levi: l, witness })
}
