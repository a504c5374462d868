use num::Signed;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{density, symmetry_classes, StepKernel};
use crate::rational::{self, Rational};
use crate::rng;
use crate::structures::Hypergraph;

use super::gradient::value_and_gradient;

#[derive(Clone, Debug)]
pub struct MinimizeOptions {
    pub parts: usize,
    pub restarts: usize,
    pub iterations: usize,
    pub step: f64,
    /// Term budget for one density evaluation.
    pub budget: f64,
    pub seed: u64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions {
            parts: 2,
            restarts: 8,
            iterations: 200,
            step: 0.1,
            budget: 1e7,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinimizeResult {
    pub kernel: StepKernel,
    /// Exact density of the returned kernel.
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
    /// Best floating-point value seen during the search.
    pub search_value: f64,
    /// Whether the exact value is negative.
    pub negative: bool,
    pub restarts: usize,
    pub iterations: usize,
}

impl MinimizeResult {
    pub fn verify(&self, h: &Hypergraph) -> Result<bool> {
        let v = density(h, &self.kernel)?;
        Ok(v == self.value && v.is_negative() == self.negative)
    }
}

const ROUNDING: i64 = 1024;

/// Best value, class values and measures seen by one restart.
type Run = (f64, Vec<f64>, Vec<f64>);

fn softmax(z: &[f64]) -> Vec<f64> {
    let m = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = z.iter().map(|x| (x - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.iter().map(|x| x / s).collect()
}

/// Multi-start projected gradient descent over symmetric value tables in
/// `[-1, 1]` and measures on the simplex (through a softmax). The best point
/// is rounded to rationals and evaluated exactly; only that exact value is
/// reported as a claim.
pub fn minimize_density(h: &Hypergraph, opts: &MinimizeOptions) -> Result<MinimizeResult> {
    let r = h.uniformity();
    let k = opts.parts;
    if k == 0 || opts.restarts == 0 {
        return Err(Error::pre("need at least one part and one restart"));
    }
    let cost = (k as f64).powi(h.vertex_count() as i32);
    if cost > opts.budget {
        return Err(Error::budget("optimizer density evaluation", cost, opts.budget));
    }
    if (k as f64).powi(r as i32) > (1u64 << 22) as f64 {
        return Err(Error::budget("optimizer table size", (k as f64).powi(r as i32), (1u64 << 22) as f64));
    }
    let (classes, class_of) = symmetry_classes(k, r);
    let runs: Vec<Result<Run>> = (0..opts.restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::stream(opts.seed, "minimize", i as u64);
            let mut theta: Vec<f64> = match i {
                0 => vec![-1.0; classes.len()],
                _ => (0..classes.len()).map(|_| rng.gen_range(-1.0..=1.0)).collect(),
            };
            let mut z: Vec<f64> = match i {
                0 => vec![0.0; k],
                _ => (0..k).map(|_| rng.gen_range(-1.0..=1.0)).collect(),
            };
            let mut best = (f64::INFINITY, theta.clone(), softmax(&z));
            for _ in 0..=opts.iterations {
                let m = softmax(&z);
                let (val, g_theta, g_m) = value_and_gradient(h, r, &m, &theta, &class_of)?;
                if val < best.0 {
                    best = (val, theta.clone(), m.clone());
                }
                let inner: f64 = g_m.iter().zip(&m).map(|(g, p)| g * p).sum();
                let g_z: Vec<f64> = m.iter().zip(&g_m).map(|(p, g)| p * (g - inner)).collect();
                let scale = g_theta
                    .iter()
                    .chain(&g_z)
                    .fold(1.0f64, |acc, g| acc.max(g.abs()));
                let step = opts.step / scale;
                for (t, g) in theta.iter_mut().zip(&g_theta) {
                    *t = (*t - step * g).clamp(-1.0, 1.0);
                }
                for (x, g) in z.iter_mut().zip(&g_z) {
                    *x -= step * g;
                }
            }
            Ok(best)
        })
        .collect();
    let mut best: Option<Run> = None;
    for run in runs {
        let run = run?;
        if best.as_ref().is_none_or(|b| run.0 < b.0) {
            best = Some(run);
        }
    }
    let (search_value, theta, m) = best.expect("at least one restart");
    let kernel = round_kernel(r, &classes, &theta, &m)?;
    let value = density(h, &kernel)?;
    Ok(MinimizeResult {
        negative: value.is_negative(),
        kernel,
        value,
        search_value,
        restarts: opts.restarts,
        iterations: opts.iterations,
    })
}

/// Rationals with denominator 1024 for values; measures as positive integer
/// weights over their total.
fn round_kernel(r: usize, classes: &[Vec<usize>], theta: &[f64], m: &[f64]) -> Result<StepKernel> {
    let weights: Vec<i64> = m
        .iter()
        .map(|p| ((p * ROUNDING as f64).round() as i64).max(1))
        .collect();
    let total: i64 = weights.iter().sum();
    let measures = weights.iter().map(|&w| rational::ratio(w, total)).collect();
    let values: Vec<Rational> = theta
        .iter()
        .map(|&t| rational::round_to_denominator(t.clamp(-1.0, 1.0), ROUNDING))
        .collect();
    StepKernel::from_fn(r, measures, |t| {
        let c = classes.iter().position(|c| c == t).expect("sorted tuple");
        values[c].clone()
    })
}
