use std::fmt::Write as _;

use num::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{Route, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::indpoly::{levi_nonpositivity, LeviCertificate};
use crate::kernels::{density, density_generic, parity_kernel, symmetry_classes};
use crate::quasi::{q_vanishing, SubsetFamily};
use crate::rational::{self, Rational};
use crate::structures::{grid, tight_cycle, Hypergraph};
use crate::tournaments::{copy_probability_exact, sample_tournament, CopyProbability};

use super::{minimize_density, MinimizeOptions, MinimizeResult};

#[derive(Clone, Debug, Serialize)]
pub struct VanishingSummary {
    pub subsets: usize,
    pub certified: usize,
    /// Edge masks of proper subgraphs without a certificate.
    pub failures: Vec<u64>,
}

/// `t_F(U_n)` for `U_n = 1_{G(T_n)} - 2^{1-r}` on `n` equal parts.
#[derive(Clone, Debug, Serialize)]
pub struct DecayRow {
    pub subgraph: String,
    pub n: usize,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
    pub abs: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleReport {
    pub r: usize,
    pub length: usize,
    pub n: usize,
    pub seed: u64,
    pub levi: LeviCertificate,
    pub family: Vec<Vec<usize>>,
    pub proper_subgraphs: VanishingSummary,
    pub full_cycle_vanishing: bool,
    pub copy_probability: CopyProbability,
    #[serde(with = "rational::serde_str")]
    pub random_bound: Rational,
    pub decay: Vec<DecayRow>,
    /// Whether `|t_F(U_n)|` is smaller at the largest `n` than at the
    /// smallest, for every vanishing `F` measured.
    pub decay_trend: bool,
}

impl CycleReport {
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "tight cycle C_{}^({})", self.length, self.r);
        let _ = writeln!(
            s,
            "levi graph: {} vertices, witness alpha {} with density {}",
            self.levi.levi.vertex_count(),
            rational::to_string(&self.levi.witness.alpha),
            rational::to_string(&self.levi.witness.density)
        );
        let _ = writeln!(
            s,
            "vanishing proper subgraphs: {}/{}",
            self.proper_subgraphs.certified, self.proper_subgraphs.subsets
        );
        let _ = writeln!(s, "full cycle vanishing: {}", self.full_cycle_vanishing);
        let _ = writeln!(
            s,
            "labelled copy probability {} vs random bound {}",
            rational::to_string(&self.copy_probability.probability),
            rational::to_string(&self.random_bound)
        );
        for row in &self.decay {
            let _ = writeln!(s, "n = {:>3}  {:<10} |t| = {:.6e}", row.n, row.subgraph, row.abs);
        }
        let _ = writeln!(s, "decay trend: {}", self.decay_trend);
        s
    }
}

/// Exact `t_F(1_{G(T)} - p)` with integer arithmetic: the table is scaled
/// by `2^{r-1}` and all parts weigh 1.
pub fn centered_tournament_density(f: &Hypergraph, n: usize, seed: u64) -> Result<Rational> {
    let r = f.uniformity();
    let t = sample_tournament(r - 1, n, seed)?;
    let scale = 1i128 << (r - 1);
    let len = n.checked_pow(r as u32).filter(|&l| l <= 1 << 24).ok_or_else(|| {
        Error::budget("centered kernel table", (n as f64).powi(r as i32), (1u64 << 24) as f64)
    })?;
    let (classes, class_of) = symmetry_classes(n, r);
    let class_values: Vec<i128> = classes
        .par_iter()
        .map(|c| {
            let distinct = c.windows(2).all(|w| w[0] < w[1]);
            if distinct && t.is_edge(c).unwrap_or(false) {
                scale - 1
            } else {
                -1
            }
        })
        .collect();
    let table: Vec<i128> = class_of.iter().map(|&c| class_values[c]).collect();
    debug_assert_eq!(table.len(), len);
    let weights = vec![1i128; n];
    let sum = density_generic(f, r, &weights, &table, Route::Auto, DEFAULT_BUDGET)?;
    let denom = num::BigInt::from(n).pow(f.vertex_count() as u32)
        * num::BigInt::from(scale).pow(f.edge_count() as u32);
    Ok(Rational::new(sum.into(), denom))
}

fn vanishing_masks(c: &Hypergraph, q: &SubsetFamily) -> Result<VanishingSummary> {
    let m = c.edge_count();
    let full = (1u64 << m) - 1;
    let results: Vec<Result<(u64, bool)>> = (1..full)
        .into_par_iter()
        .map(|mask| Ok((mask, q_vanishing(&c.edge_subgraph(mask), q)?.is_some())))
        .collect();
    let mut failures = Vec::new();
    let mut certified = 0;
    for res in results {
        let (mask, ok) = res?;
        if ok {
            certified += 1;
        } else {
            failures.push(mask);
        }
    }
    Ok(VanishingSummary {
        subsets: (full - 1) as usize,
        certified,
        failures,
    })
}

/// Evidence bundle for an odd-uniformity tight cycle `C_l^(r)` with `r | l`.
pub fn cycle_demo(r: usize, length: usize, n: usize, seed: u64) -> Result<CycleReport> {
    if r != 3 && r != 5 {
        return Err(Error::pre(format!("r must be 3 or 5, got {r}")));
    }
    if length <= r || !length.is_multiple_of(r) || length > 15 {
        return Err(Error::pre(format!(
            "length must be a multiple of r above r and at most 15, got {length}"
        )));
    }
    if n < r + 1 || n > 16 {
        return Err(Error::pre(format!("n must lie in {}..=16, got {n}", r + 1)));
    }
    let c = tight_cycle(r, length)?;
    let levi = levi_nonpositivity(&c)?;
    let q = SubsetFamily::cycle_family(r)?;
    let proper_subgraphs = vanishing_masks(&c, &q)?;
    let full_cycle_vanishing = q_vanishing(&c, &q)?.is_some();
    let copy_probability = copy_probability_exact(&c)?;
    let random_bound = rational::pow2((1 - r as i64) * length as i64);

    let edge = c.edge_subgraph_by_indices(&[0]).induced(&(0..r).collect::<Vec<_>>());
    let path = c
        .edge_subgraph_by_indices(&[0, 1])
        .induced(&(0..=r).collect::<Vec<_>>());
    let mut sizes: Vec<usize> = [n / 4, n / 2, (3 * n) / 4, n]
        .into_iter()
        .filter(|&m| m > r)
        .collect();
    sizes.dedup();
    let mut decay = Vec::new();
    for (name, f) in [("edge", &edge), ("two-edges", &path)] {
        for &m in &sizes {
            let value = centered_tournament_density(f, m, crate::rng::derive_seed(seed, &format!("cycle-demo-{m}")))?;
            decay.push(DecayRow {
                subgraph: name.to_string(),
                n: m,
                abs: rational::to_f64(&value).abs(),
                value,
            });
        }
    }
    let decay_trend = ["edge", "two-edges"].iter().all(|name| {
        let rows: Vec<&DecayRow> = decay.iter().filter(|d| d.subgraph == *name).collect();
        rows.len() < 2 || rows.last().unwrap().value.abs() < rows[0].value.abs()
    });
    Ok(CycleReport {
        r,
        length,
        n,
        seed,
        levi,
        family: q.sets(),
        proper_subgraphs,
        full_cycle_vanishing,
        copy_probability,
        random_bound,
        decay,
        decay_trend,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ParityRow {
    pub mask: u64,
    #[serde(with = "rational::serde_str")]
    pub density: Rational,
    pub all_even: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GridReport {
    pub r: usize,
    pub rows: Vec<ParityRow>,
    /// Every edge subset has density equal to its all-even indicator.
    pub parity_matches: bool,
    /// The whole grid is the only edge subset with density 1.
    pub only_full_attains_one: bool,
    pub search: Option<MinimizeResult>,
}

/// Parity-kernel table over all edge subsets of the grid, optionally with a
/// witness search for the grid itself.
pub fn grid_demo(r: usize, search: Option<&MinimizeOptions>) -> Result<GridReport> {
    let g = grid(r)?;
    let u = parity_kernel(r)?;
    let full = (1u64 << g.edge_count()) - 1;
    let rows = g
        .edge_subgraphs()?
        .map(|(mask, f)| {
            Ok(ParityRow {
                mask,
                density: density(&f, &u)?,
                all_even: f.degree_sequence().degrees.iter().all(|d| d % 2 == 0),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let one = Rational::from_integer(1.into());
    let parity_matches = rows.iter().all(|row| {
        (row.all_even && row.density == one) || (!row.all_even && row.density.is_zero())
    });
    let only_full_attains_one = rows.iter().all(|row| (row.density == one) == (row.mask == full));
    let search = search.map(|opts| minimize_density(&g, opts)).transpose()?;
    Ok(GridReport {
        r,
        rows,
        parity_matches,
        only_full_attains_one,
        search,
    })
}
