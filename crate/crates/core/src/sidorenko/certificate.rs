use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{density, StepKernel};
use crate::rational::{self, Rational};
use crate::structures::Hypergraph;

/// Exact comparison `t_H(1 + εK) < t_{edge}(1 + εK)^{e(H)}` for
/// `K = W ⊗ U` (or `K = U` when no `W` is given).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonSidorenkoCertificate {
    pub target: Hypergraph,
    /// Edge indices of the subgraph `G` inside `target`.
    pub subgraph: Vec<usize>,
    pub witness: Option<StepKernel>,
    pub quasirandom: StepKernel,
    #[serde(with = "rational::serde_str")]
    pub eps: Rational,
    #[serde(with = "rational::serde_str")]
    pub lhs: Rational,
    #[serde(with = "rational::serde_str")]
    pub rhs: Rational,
    pub valid: bool,
}

/// Densities of every edge subset of `H` under `W` and `U`, reused across
/// values of `ε`.
struct Expansion {
    /// `(e(F), t_F(W) t_F(U))` for every non-empty `F ⊆ H`.
    terms: Vec<(usize, Rational)>,
    edge_term: Rational,
    edges: usize,
}

impl Expansion {
    fn new(h: &Hypergraph, w: Option<&StepKernel>, u: &StepKernel) -> Result<Self> {
        let edge = crate::structures::single_edge(h.uniformity())?;
        let factor = |f: &Hypergraph| -> Result<Rational> {
            let tu = density(f, u)?;
            match w {
                Some(w) if !tu.is_zero() => Ok(tu * density(f, w)?),
                _ => Ok(tu),
            }
        };
        let mut terms = Vec::new();
        for (_, f) in h.edge_subgraphs()? {
            let t = factor(&f)?;
            if !t.is_zero() {
                terms.push((f.edge_count(), t));
            }
        }
        Ok(Expansion {
            terms,
            edge_term: factor(&edge)?,
            edges: h.edge_count(),
        })
    }

    fn sides(&self, eps: &Rational) -> (Rational, Rational) {
        let mut lhs = Rational::one();
        for (e, t) in &self.terms {
            lhs += t * rational::pow(eps, *e);
        }
        let rhs = rational::pow(&(Rational::one() + eps * &self.edge_term), self.edges);
        (lhs, rhs)
    }
}

fn check_inputs(h: &Hypergraph, subgraph: &[usize], w: Option<&StepKernel>, u: &StepKernel) -> Result<Rational> {
    for k in w.into_iter().chain(std::iter::once(u)) {
        if k.uniformity() != h.uniformity() {
            return Err(Error::UniformityMismatch {
                left: h.uniformity(),
                right: k.uniformity(),
            });
        }
    }
    if subgraph.is_empty() || subgraph.iter().any(|&i| i >= h.edge_count()) {
        return Err(Error::pre("subgraph must be a non-empty set of edge indices"));
    }
    let g = h.edge_subgraph_by_indices(subgraph);
    let t = density(&g, w.unwrap_or(u))?;
    if !t.is_negative() {
        return Err(Error::pre(format!(
            "the subgraph density under the {} kernel is {}, not negative",
            if w.is_some() { "witness" } else { "quasirandom" },
            rational::to_string(&t)
        )));
    }
    Ok(t)
}

/// Compare both sides at the given `ε`, or at the first of `2^-1, …, 2^-20`
/// that separates them (the last one tried if none does).
pub fn nonsidorenko_certificate(
    h: &Hypergraph,
    subgraph: &[usize],
    w: Option<&StepKernel>,
    u: &StepKernel,
    eps: Option<&Rational>,
) -> Result<NonSidorenkoCertificate> {
    check_inputs(h, subgraph, w, u)?;
    let expansion = Expansion::new(h, w, u)?;
    let candidates: Vec<Rational> = match eps {
        Some(e) => vec![e.clone()],
        None => (1..=20).map(|d| rational::pow2(-d)).collect(),
    };
    let mut last = None;
    for e in candidates {
        let (lhs, rhs) = expansion.sides(&e);
        let valid = lhs < rhs;
        last = Some((e, lhs, rhs, valid));
        if valid {
            break;
        }
    }
    let (eps, lhs, rhs, valid) = last.expect("non-empty candidate list");
    Ok(NonSidorenkoCertificate {
        target: h.clone(),
        subgraph: subgraph.to_vec(),
        witness: w.cloned(),
        quasirandom: u.clone(),
        eps,
        lhs,
        rhs,
        valid,
    })
}

impl NonSidorenkoCertificate {
    /// The perturbed kernel `1 + εK`.
    pub fn perturbed_kernel(&self) -> Result<StepKernel> {
        let k = match &self.witness {
            Some(w) => w.tensor(&self.quasirandom)?,
            None => self.quasirandom.clone(),
        };
        Ok(k.perturb(&self.eps))
    }

    /// Recompute both sides through the expansion.
    pub fn verify(&self) -> Result<bool> {
        check_inputs(&self.target, &self.subgraph, self.witness.as_ref(), &self.quasirandom)?;
        let expansion = Expansion::new(&self.target, self.witness.as_ref(), &self.quasirandom)?;
        let (lhs, rhs) = expansion.sides(&self.eps);
        Ok(lhs == self.lhs && rhs == self.rhs && (lhs < rhs) == self.valid)
    }

    /// Recompute both sides by evaluating `1 + εK` directly.
    pub fn verify_direct(&self) -> Result<bool> {
        let k = self.perturbed_kernel()?;
        let lhs = density(&self.target, &k)?;
        let edge = crate::structures::single_edge(self.target.uniformity())?;
        let rhs = rational::pow(&density(&edge, &k)?, self.target.edge_count());
        Ok(lhs == self.lhs && rhs == self.rhs)
    }
}
