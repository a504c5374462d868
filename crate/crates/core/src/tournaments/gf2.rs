use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::structures::Hypergraph;

use super::MAX_VARIABLES;

/// Affine equations `b_u ⊕ b_v = rhs` over the sign bits of `(r-1)`-sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2System {
    /// Sorted `(r-1)`-sets, indexed by variable.
    pub variables: Vec<Vec<usize>>,
    pub rows: Vec<(usize, usize, bool)>,
}

/// Result of elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Basis {
    pub rank: usize,
    pub consistent: bool,
}

impl Gf2System {
    pub fn for_hypergraph(h: &Hypergraph) -> Result<Self> {
        let r = h.uniformity();
        if r < 2 {
            return Err(Error::pre("uniformity must be at least 2"));
        }
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut variables = Vec::new();
        let mut rows = Vec::new();
        for e in h.edges() {
            let var = |skip: usize, index: &mut HashMap<Vec<usize>, usize>, variables: &mut Vec<Vec<usize>>| {
                let t: Vec<usize> = e.iter().enumerate().filter(|&(p, _)| p != skip).map(|(_, &x)| x).collect();
                *index.entry(t.clone()).or_insert_with(|| {
                    variables.push(t);
                    variables.len() - 1
                })
            };
            for i in 0..r {
                for j in i + 1..r {
                    // T = R minus e[j] (removed vertex e[i]); T' = R minus e[i].
                    let t = var(j, &mut index, &mut variables);
                    let t2 = var(i, &mut index, &mut variables);
                    let par_t = (r - 2 - i) % 2 == 1;
                    let par_t2 = (r - 1 - j) % 2 == 1;
                    rows.push((t, t2, !(par_t ^ par_t2)));
                }
            }
            if variables.len() > MAX_VARIABLES {
                return Err(Error::budget(
                    "F_2 system (variables)",
                    variables.len() as f64,
                    MAX_VARIABLES as f64,
                ));
            }
        }
        Ok(Gf2System { variables, rows })
    }

    /// Gaussian elimination on packed bit rows.
    pub fn eliminate(&self) -> Gf2Basis {
        let words = self.variables.len().div_ceil(64).max(1);
        let mut pivots: HashMap<usize, (Vec<u64>, bool)> = HashMap::new();
        let mut consistent = true;
        for &(a, b, rhs) in &self.rows {
            let mut row = vec![0u64; words];
            row[a / 64] ^= 1 << (a % 64);
            row[b / 64] ^= 1 << (b % 64);
            let mut rhs = rhs;
            loop {
                let Some(p) = lowest_bit(&row) else {
                    if rhs {
                        consistent = false;
                    }
                    break;
                };
                match pivots.get(&p) {
                    Some((prow, prhs)) => {
                        for (x, y) in row.iter_mut().zip(prow) {
                            *x ^= y;
                        }
                        rhs ^= prhs;
                    }
                    None => {
                        pivots.insert(p, (row, rhs));
                        break;
                    }
                }
            }
        }
        Gf2Basis {
            rank: pivots.len(),
            consistent,
        }
    }
}

fn lowest_bit(row: &[u64]) -> Option<usize> {
    row.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}
