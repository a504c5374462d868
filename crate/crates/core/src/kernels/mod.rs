//! Step kernels and their exact homomorphism densities.

use std::collections::HashSet;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::engine::{Problem, Route, Scalar, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::structures::Hypergraph;

/// A symmetric `r`-dimensional step function on `k` parts.
///
/// `values` is indexed by ordered tuples in row-major order; the table is
/// symmetric under permutation of the `r` coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepKernel {
    r: usize,
    measures: Vec<Rational>,
    values: Vec<Rational>,
}

impl StepKernel {
    /// Validating constructor; rejects asymmetric tables.
    pub fn new(r: usize, measures: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        check_measures(r, &measures)?;
        let k = measures.len();
        if values.len() != table_len(k, r)? {
            return Err(Error::pre(format!(
                "value table has {} entries, expected {k}^{r}",
                values.len()
            )));
        }
        let mut tuple = vec![0; r];
        for idx in 0..values.len() {
            decode(idx, k, &mut tuple);
            let mut sorted = tuple.clone();
            sorted.sort_unstable();
            if values[idx] != values[encode(&sorted, k)] {
                return Err(Error::pre(format!("value table is not symmetric at {tuple:?}")));
            }
        }
        Ok(StepKernel {
            r,
            measures,
            values,
        })
    }

    /// Build from a function on sorted index tuples; every ordered tuple takes
    /// the value of its sorted form.
    pub fn from_fn(
        r: usize,
        measures: Vec<Rational>,
        mut f: impl FnMut(&[usize]) -> Rational,
    ) -> Result<Self> {
        check_measures(r, &measures)?;
        let k = measures.len();
        let len = table_len(k, r)?;
        let mut values = vec![Rational::zero(); len];
        let mut tuple = vec![0; r];
        let mut sorted = vec![0; r];
        for idx in 0..len {
            decode(idx, k, &mut tuple);
            sorted.copy_from_slice(&tuple);
            sorted.sort_unstable();
            let canonical = encode(&sorted, k);
            values[idx] = if canonical == idx {
                f(&sorted)
            } else {
                values[canonical].clone()
            };
        }
        Ok(StepKernel {
            r,
            measures,
            values,
        })
    }

    /// One-part kernel with the given value.
    pub fn constant(r: usize, c: Rational) -> Self {
        StepKernel {
            r,
            measures: vec![Rational::one()],
            values: vec![c],
        }
    }

    /// `k` parts of measure `1/k` each.
    pub fn equal_measures(k: usize) -> Vec<Rational> {
        (0..k).map(|_| rational::ratio(1, k as i64)).collect()
    }

    pub fn uniformity(&self) -> usize {
        self.r
    }

    pub fn parts(&self) -> usize {
        self.measures.len()
    }

    pub fn measures(&self) -> &[Rational] {
        &self.measures
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, tuple: &[usize]) -> &Rational {
        &self.values[encode(tuple, self.parts())]
    }

    /// Graphon (r-graphon) iff every value lies in `[0, 1]`.
    pub fn is_graphon(&self) -> bool {
        self.values
            .iter()
            .all(|x| !x.is_negative() && *x <= Rational::one())
    }

    /// Same parts, values mapped pointwise.
    pub fn map_values(&self, f: impl Fn(&Rational) -> Rational) -> StepKernel {
        StepKernel {
            r: self.r,
            measures: self.measures.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    /// `1 + eps * W`.
    pub fn perturb(&self, eps: &Rational) -> StepKernel {
        self.map_values(|w| Rational::one() + eps * w)
    }

    /// `W - p`.
    pub fn center(&self, p: &Rational) -> StepKernel {
        self.map_values(|w| w - p)
    }

    /// Tensor product: part `(i, j)` has index `i * k_other + j`, measure
    /// `m_i m'_j` and value `W(i..) U(j..)`.
    pub fn tensor(&self, other: &StepKernel) -> Result<StepKernel> {
        if self.r != other.r {
            return Err(Error::UniformityMismatch {
                left: self.r,
                right: other.r,
            });
        }
        let kb = other.parts();
        let measures = self
            .measures
            .iter()
            .flat_map(|a| other.measures.iter().map(move |b| a * b))
            .collect();
        let mut left = vec![0; self.r];
        let mut right = vec![0; self.r];
        StepKernel::from_fn(self.r, measures, |tuple| {
            for (j, &c) in tuple.iter().enumerate() {
                left[j] = c / kb;
                right[j] = c % kb;
            }
            self.value(&left) * other.value(&right)
        })
    }

    /// Measures and values as `f64`.
    pub fn to_f64(&self) -> (Vec<f64>, Vec<f64>) {
        (
            self.measures.iter().map(rational::to_f64).collect(),
            self.values.iter().map(rational::to_f64).collect(),
        )
    }

    pub fn to_json(&self) -> KernelFile {
        KernelFile {
            r: self.r,
            parts: self.measures.iter().map(rational::to_string).collect(),
            values: self.values.iter().map(rational::to_string).collect(),
        }
    }

    pub fn from_json(file: &KernelFile) -> Result<Self> {
        let measures = file
            .parts
            .iter()
            .map(|s| rational::parse(s))
            .collect::<Result<Vec<_>>>()?;
        let values = file
            .values
            .iter()
            .map(|s| rational::parse(s))
            .collect::<Result<Vec<_>>>()?;
        StepKernel::new(file.r, measures, values)
    }
}

/// On-disk kernel: `{"r", "parts", "values"}` with `p/q` strings, values in
/// row-major ordered-tuple order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelFile {
    pub r: usize,
    pub parts: Vec<String>,
    pub values: Vec<String>,
}

impl Serialize for StepKernel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for StepKernel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = KernelFile::deserialize(d)?;
        StepKernel::from_json(&file).map_err(serde::de::Error::custom)
    }
}

fn check_measures(r: usize, measures: &[Rational]) -> Result<()> {
    if r < 2 {
        return Err(Error::pre(format!("kernel uniformity must be >= 2, got {r}")));
    }
    if measures.is_empty() {
        return Err(Error::pre("kernel needs at least one part"));
    }
    if measures.iter().any(|m| !m.is_positive()) {
        return Err(Error::pre("part measures must be positive"));
    }
    let total: Rational = measures.iter().sum();
    if !total.is_one() {
        return Err(Error::pre(format!(
            "part measures sum to {}, not 1",
            rational::to_string(&total)
        )));
    }
    Ok(())
}

fn table_len(k: usize, r: usize) -> Result<usize> {
    k.checked_pow(r as u32)
        .filter(|&n| n <= 1 << 26)
        .ok_or_else(|| Error::budget("kernel table size", (k as f64).powi(r as i32), (1u64 << 26) as f64))
}

pub(crate) fn encode(tuple: &[usize], k: usize) -> usize {
    tuple.iter().fold(0, |acc, &c| acc * k + c)
}

pub(crate) fn decode(mut idx: usize, k: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = idx % k;
        idx /= k;
    }
}

fn check_uniformity(h: &Hypergraph, r: usize) -> Result<()> {
    if h.uniformity() != r {
        return Err(Error::UniformityMismatch {
            left: h.uniformity(),
            right: r,
        });
    }
    Ok(())
}

/// Generic evaluation of `t_H` over a table with arbitrary scalars.
pub fn density_generic<T: Scalar>(
    h: &Hypergraph,
    r: usize,
    measures: &[T],
    values: &[T],
    route: Route,
    budget: f64,
) -> Result<T> {
    check_uniformity(h, r)?;
    Problem {
        vertices: h.vertex_count(),
        uniformity: r,
        edges: h.edges(),
        weights: measures,
        table: values,
    }
    .evaluate(route, budget)
}

/// Exact `t_H(W)`.
pub fn density(h: &Hypergraph, w: &StepKernel) -> Result<Rational> {
    density_with(h, w, Route::Auto, DEFAULT_BUDGET)
}

pub fn density_with(h: &Hypergraph, w: &StepKernel, route: Route, budget: f64) -> Result<Rational> {
    density_generic(h, w.r, &w.measures, &w.values, route, budget)
}

/// Floating-point `t_H(W)`.
pub fn density_f64(h: &Hypergraph, w: &StepKernel) -> Result<f64> {
    let (m, v) = w.to_f64();
    density_generic(h, w.r, &m, &v, Route::Auto, DEFAULT_BUDGET)
}

/// `t_H(1 + εW)` through the edge-subset expansion.
pub fn expansion_density(h: &Hypergraph, w: &StepKernel, eps: &Rational) -> Result<Rational> {
    check_uniformity(h, w.r)?;
    let mut total = Rational::one();
    for (_, f) in h.edge_subgraphs()? {
        let t = density(&f, w)?;
        if !t.is_zero() {
            total += t * rational::pow(eps, f.edge_count());
        }
    }
    Ok(total)
}

/// `v(G)` equal parts; value 1 exactly on tuples of distinct parts forming an edge.
pub fn kernel_of(g: &Hypergraph) -> Result<StepKernel> {
    if g.vertex_count() == 0 {
        return Err(Error::pre("kernel of a hypergraph with no vertices"));
    }
    let edges: HashSet<&[usize]> = g.edges().iter().map(|e| e.as_slice()).collect();
    StepKernel::from_fn(
        g.uniformity(),
        StepKernel::equal_measures(g.vertex_count()),
        |t| {
            if edges.contains(t) {
                Rational::one()
            } else {
                Rational::zero()
            }
        },
    )
}

/// Two parts of measure 1/2 labelled `+1` and `-1`; value is the product of labels.
pub fn parity_kernel(r: usize) -> Result<StepKernel> {
    StepKernel::from_fn(r, StepKernel::equal_measures(2), |t| {
        let minus = t.iter().filter(|&&c| c == 1).count();
        rational::int(if minus % 2 == 0 { 1 } else { -1 })
    })
}

/// Symmetry classes of index tuples: the sorted tuples, and for every ordered
/// tuple the index of its class.
pub fn symmetry_classes(k: usize, r: usize) -> (Vec<Vec<usize>>, Vec<usize>) {
    let len = k.pow(r as u32);
    let mut class_of = vec![usize::MAX; len];
    let mut classes = Vec::new();
    let mut tuple = vec![0; r];
    for (idx, slot) in class_of.iter_mut().enumerate() {
        decode(idx, k, &mut tuple);
        if tuple.windows(2).all(|w| w[0] <= w[1]) {
            *slot = classes.len();
            classes.push(tuple.clone());
        }
    }
    for idx in 0..len {
        decode(idx, k, &mut tuple);
        tuple.sort_unstable();
        class_of[idx] = class_of[encode(&tuple, k)];
    }
    (classes, class_of)
}
