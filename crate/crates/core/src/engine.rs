//! Sum-product evaluation behind every density.
//!
//! A problem is a hypergraph whose vertices each range over `k` parts with
//! weights `w[0..k]`, and a single symmetric value table on `[k]^r`. The
//! quantity is
//!
//! ```text
//! Σ_{φ: V → [k]}  Π_v w[φ(v)] · Π_{e ∈ E} table[φ(e)]
//! ```
//!
//! Two routes compute it: a mixed-radix enumeration of all assignments with
//! incremental partial products, and variable elimination along a greedy
//! min-degree order. `Route::Auto` picks the cheaper one; both refuse to run
//! past the term budget.

use num::{BigRational, One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default term budget.
pub const DEFAULT_BUDGET: f64 = 1e9;

/// Commutative ring operations the engine needs.
pub trait Scalar: Clone + Send + Sync + Zero + One {
    fn mul_ref(&self, other: &Self) -> Self;
    fn add_assign_ref(&mut self, other: &Self);
}

impl Scalar for BigRational {
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
}

impl Scalar for f64 {
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
}

impl Scalar for i128 {
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    BruteForce,
    Elimination,
    Auto,
}

/// Borrowed view of one evaluation.
pub struct Problem<'a, T> {
    pub vertices: usize,
    pub uniformity: usize,
    pub edges: &'a [Vec<usize>],
    pub weights: &'a [T],
    pub table: &'a [T],
}

impl<T: Scalar> Problem<'_, T> {
    fn parts(&self) -> usize {
        self.weights.len()
    }

    pub fn brute_force_cost(&self) -> f64 {
        (self.parts() as f64).powi(self.vertices as i32)
    }

    pub fn elimination_cost(&self) -> f64 {
        plan(self.vertices, self.edges, self.parts()).1
    }

    pub fn evaluate(&self, route: Route, budget: f64) -> Result<T> {
        let k = self.parts();
        assert_eq!(self.table.len(), k.pow(self.uniformity as u32));
        let brute = self.brute_force_cost();
        match route {
            Route::BruteForce => {
                check(brute, budget)?;
                Ok(self.brute_force())
            }
            Route::Elimination => {
                let (order, cost) = plan(self.vertices, self.edges, k);
                check(cost, budget)?;
                Ok(self.eliminate(&order))
            }
            Route::Auto => {
                let (order, cost) = plan(self.vertices, self.edges, k);
                // Enumeration has no table overhead, so prefer it unless
                // elimination is clearly cheaper.
                if brute <= 4.0 * cost {
                    check(brute, budget)?;
                    Ok(self.brute_force())
                } else {
                    check(cost, budget)?;
                    Ok(self.eliminate(&order))
                }
            }
        }
    }

    fn brute_force(&self) -> T {
        let v = self.vertices;
        let k = self.parts();
        let r = self.uniformity;
        // Edges closed at each depth, with per-position strides.
        let mut closing: Vec<Vec<&[usize]>> = vec![vec![]; v];
        for e in self.edges {
            closing[e[r - 1]].push(e);
        }
        let strides: Vec<usize> = (0..r).map(|j| k.pow((r - 1 - j) as u32)).collect();
        let walker = Walker {
            k,
            weights: self.weights,
            table: self.table,
            closing: &closing,
            strides: &strides,
        };
        if v == 0 {
            return T::one();
        }
        // Fan out over a prefix of the assignment when there is enough work.
        let mut depth = 0;
        let mut tasks = 1usize;
        while depth < v && tasks < 256 && (k as f64).powi((v - depth) as i32) > 4096.0 {
            depth += 1;
            tasks *= k;
        }
        if depth == 0 {
            let mut assign = vec![0; v];
            return walker.dfs(0, T::one(), &mut assign);
        }
        let partials: Vec<T> = (0..tasks)
            .into_par_iter()
            .map(|t| {
                let mut assign = vec![0; v];
                let mut rest = t;
                for slot in assign[..depth].iter_mut().rev() {
                    *slot = rest % k;
                    rest /= k;
                }
                let mut partial = T::one();
                for d in 0..depth {
                    partial = walker.step(d, &partial, &assign);
                    if partial.is_zero() {
                        return T::zero();
                    }
                }
                walker.dfs(depth, partial, &mut assign)
            })
            .collect();
        let mut total = T::zero();
        for p in &partials {
            total.add_assign_ref(p);
        }
        total
    }

    fn eliminate(&self, order: &[usize]) -> T {
        let k = self.parts();
        let mut factors: Vec<Factor<T>> = self
            .edges
            .iter()
            .map(|e| Factor {
                scope: e.clone(),
                table: self.table.to_vec(),
            })
            .collect();
        let mut constant = T::one();
        for &x in order {
            let (touching, rest): (Vec<_>, Vec<_>) =
                factors.into_iter().partition(|f| f.scope.contains(&x));
            factors = rest;
            if touching.is_empty() {
                let mut s = T::zero();
                for w in self.weights {
                    s.add_assign_ref(w);
                }
                constant = constant.mul_ref(&s);
                continue;
            }
            factors.push(sum_out(x, &touching, self.weights, k));
        }
        for f in &factors {
            debug_assert!(f.scope.is_empty());
            constant = constant.mul_ref(&f.table[0]);
        }
        constant
    }
}

fn check(cost: f64, budget: f64) -> Result<()> {
    if cost > budget {
        Err(Error::budget("density evaluation (terms)", cost, budget))
    } else {
        Ok(())
    }
}

struct Walker<'a, T> {
    k: usize,
    weights: &'a [T],
    table: &'a [T],
    closing: &'a [Vec<&'a [usize]>],
    strides: &'a [usize],
}

impl<T: Scalar> Walker<'_, T> {
    /// Partial product after fixing vertex `d` to `assign[d]`.
    fn step(&self, d: usize, partial: &T, assign: &[usize]) -> T {
        let mut term = partial.mul_ref(&self.weights[assign[d]]);
        for e in &self.closing[d] {
            if term.is_zero() {
                break;
            }
            let idx: usize = e
                .iter()
                .zip(self.strides)
                .map(|(&u, &s)| assign[u] * s)
                .sum();
            term = term.mul_ref(&self.table[idx]);
        }
        term
    }

    fn dfs(&self, depth: usize, partial: T, assign: &mut [usize]) -> T {
        if depth == assign.len() {
            return partial;
        }
        let mut total = T::zero();
        for a in 0..self.k {
            assign[depth] = a;
            let term = self.step(depth, &partial, assign);
            if term.is_zero() {
                continue;
            }
            let sub = self.dfs(depth + 1, term, assign);
            total.add_assign_ref(&sub);
        }
        total
    }
}

struct Factor<T> {
    scope: Vec<usize>,
    table: Vec<T>,
}

/// Multiply the factors touching `x` and sum `x` out against its weights.
fn sum_out<T: Scalar>(x: usize, touching: &[Factor<T>], weights: &[T], k: usize) -> Factor<T> {
    let mut scope: Vec<usize> = touching
        .iter()
        .flat_map(|f| f.scope.iter().copied())
        .filter(|&u| u != x)
        .collect();
    scope.sort_unstable();
    scope.dedup();
    let width = scope.len();
    // For each factor: stride contributed by each position of `scope`, and by x.
    let layouts: Vec<(Vec<usize>, usize)> = touching
        .iter()
        .map(|f| {
            let m = f.scope.len();
            let stride_of = |u: usize| {
                f.scope
                    .iter()
                    .position(|&s| s == u)
                    .map_or(0, |p| k.pow((m - 1 - p) as u32))
            };
            (scope.iter().map(|&u| stride_of(u)).collect(), stride_of(x))
        })
        .collect();
    let size = k.pow(width as u32);
    let cell = |t: usize| -> T {
        let mut digits = vec![0usize; width];
        let mut rest = t;
        for d in digits.iter_mut().rev() {
            *d = rest % k;
            rest /= k;
        }
        let bases: Vec<usize> = layouts
            .iter()
            .map(|(strides, _)| digits.iter().zip(strides).map(|(d, s)| d * s).sum())
            .collect();
        let mut total = T::zero();
        for (a, w) in weights.iter().enumerate() {
            let mut term = w.clone();
            for (f, ((_, xs), base)) in touching.iter().zip(layouts.iter().zip(&bases)) {
                if term.is_zero() {
                    break;
                }
                term = term.mul_ref(&f.table[base + a * xs]);
            }
            total.add_assign_ref(&term);
        }
        total
    };
    let table: Vec<T> = if size * k >= 1 << 12 {
        (0..size).into_par_iter().map(cell).collect()
    } else {
        (0..size).map(cell).collect()
    };
    Factor { scope, table }
}

/// Greedy min-degree elimination order and its term cost.
fn plan(vertices: usize, edges: &[Vec<usize>], k: usize) -> (Vec<usize>, f64) {
    let mut scopes: Vec<Vec<usize>> = edges.to_vec();
    let mut alive = vec![true; vertices];
    let mut order = Vec::with_capacity(vertices);
    let mut cost = 0.0;
    for _ in 0..vertices {
        let mut best: Option<(usize, usize)> = None;
        for x in (0..vertices).filter(|&x| alive[x]) {
            let mut nb: Vec<usize> = scopes
                .iter()
                .filter(|s| s.contains(&x))
                .flatten()
                .copied()
                .filter(|&u| u != x)
                .collect();
            nb.sort_unstable();
            nb.dedup();
            if best.is_none_or(|(_, d)| nb.len() < d) {
                best = Some((x, nb.len()));
            }
        }
        let (x, _) = best.expect("a live vertex remains");
        alive[x] = false;
        order.push(x);
        let (touching, rest): (Vec<_>, Vec<_>) = scopes.into_iter().partition(|s| s.contains(&x));
        scopes = rest;
        if touching.is_empty() {
            cost += k as f64;
            continue;
        }
        let mut merged: Vec<usize> = touching.into_iter().flatten().filter(|&u| u != x).collect();
        merged.sort_unstable();
        merged.dedup();
        cost += (k as f64).powi(merged.len() as i32 + 1) * 1.0;
        scopes.push(merged);
    }
    (order, cost)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn problem<'a, T>(
        v: usize,
        r: usize,
        edges: &'a [Vec<usize>],
        weights: &'a [T],
        table: &'a [T],
    ) -> Problem<'a, T> {
        Problem {
            vertices: v,
            uniformity: r,
            edges,
            weights,
            table,
        }
    }

    #[test]
    fn single_edge_is_the_mean() {
        let edges = vec![vec![0, 1]];
        let w = vec![ratio(1, 3), ratio(2, 3)];
        let t = vec![int(1), int(-1), int(-1), int(2)];
        let p = problem(2, 2, &edges, &w, &t);
        // 1/9 - 2*2/9 + 2*4/9 = 5/9
        for route in [Route::BruteForce, Route::Elimination, Route::Auto] {
            assert_eq!(p.evaluate(route, 1e6).unwrap(), ratio(5, 9));
        }
    }

    #[test]
    fn empty_hypergraph_sums_weights() {
        let w = vec![ratio(1, 2), ratio(1, 2)];
        let t = vec![int(0); 4];
        let p = problem(3, 2, &[], &w, &t);
        assert_eq!(p.evaluate(Route::BruteForce, 1e6).unwrap(), int(1));
        assert_eq!(p.evaluate(Route::Elimination, 1e6).unwrap(), int(1));
        let p0 = problem(0, 2, &[], &w, &t);
        assert_eq!(p0.evaluate(Route::Auto, 1e6).unwrap(), int(1));
    }

    #[test]
    fn routes_agree_on_a_cycle_with_integers() {
        let edges: Vec<Vec<usize>> = (0..7)
            .map(|i| {
                let mut e = vec![i, (i + 1) % 7];
                e.sort_unstable();
                e
            })
            .collect();
        let w = vec![1i128, 2, 3];
        let t = vec![1i128, -2, 0, -2, 5, 1, 0, 1, -1];
        let p = problem(7, 2, &edges, &w, &t);
        let a = p.evaluate(Route::BruteForce, 1e9).unwrap();
        let b = p.evaluate(Route::Elimination, 1e9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn budget_guard_fires_before_work() {
        let edges = vec![vec![0, 1]];
        let w = vec![1.0; 10];
        let t = vec![1.0; 100];
        let p = problem(12, 2, &edges, &w, &t);
        assert!(matches!(
            p.evaluate(Route::BruteForce, 1e9),
            Err(Error::Budget { .. })
        ));
        // Elimination handles isolated vertices cheaply.
        assert!((p.evaluate(Route::Auto, 1e9).unwrap() - 1e12).abs() < 1.0);
    }
}
