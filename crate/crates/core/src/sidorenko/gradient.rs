use std::ops::{Add, Mul};

use num::{One, Zero};
use serde::Serialize;

use crate::engine::{Route, Scalar, DEFAULT_BUDGET};
use crate::error::Result;
use crate::kernels::{density_generic, symmetry_classes, StepKernel};
use crate::rational::{self, Rational};
use crate::structures::Hypergraph;

/// `a + bδ` with `δ² = 0`; evaluating `t_H` over duals yields a directional
/// derivative alongside the value.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Dual<T> {
    pub a: T,
    pub b: T,
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Dual {
            a: self.a + o.a,
            b: self.b + o.b,
        }
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.mul_ref(&o)
    }
}

impl<T: Scalar> Zero for Dual<T> {
    fn zero() -> Self {
        Dual {
            a: T::zero(),
            b: T::zero(),
        }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl<T: Scalar> One for Dual<T> {
    fn one() -> Self {
        Dual {
            a: T::one(),
            b: T::zero(),
        }
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    fn mul_ref(&self, o: &Self) -> Self {
        let mut b = self.a.mul_ref(&o.b);
        b.add_assign_ref(&self.b.mul_ref(&o.a));
        Dual {
            a: self.a.mul_ref(&o.a),
            b,
        }
    }
    fn add_assign_ref(&mut self, o: &Self) {
        self.a.add_assign_ref(&o.a);
        self.b.add_assign_ref(&o.b);
    }
}

/// Partial derivatives of `t_H` in the symmetric parameterization: one
/// entry per sorted index tuple (all its orderings move together) and one
/// per part measure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Gradient<T> {
    pub classes: Vec<Vec<usize>>,
    pub values: Vec<T>,
    pub measures: Vec<T>,
}

/// Value and gradient of `t_H` at a table given per symmetry class.
pub(crate) fn value_and_gradient<T: Scalar>(
    h: &Hypergraph,
    r: usize,
    measures: &[T],
    class_values: &[T],
    class_of: &[usize],
) -> Result<(T, Vec<T>, Vec<T>)> {
    let lift = |x: &T, tangent: bool| Dual {
        a: x.clone(),
        b: if tangent { T::one() } else { T::zero() },
    };
    let eval = |m: &[Dual<T>], t: &[Dual<T>]| {
        density_generic(h, r, m, t, Route::Auto, DEFAULT_BUDGET)
    };
    let plain_m: Vec<Dual<T>> = measures.iter().map(|x| lift(x, false)).collect();
    let plain_t: Vec<Dual<T>> = class_of.iter().map(|&c| lift(&class_values[c], false)).collect();
    let mut value = None;
    let mut grad_values = Vec::with_capacity(class_values.len());
    for c in 0..class_values.len() {
        let table: Vec<Dual<T>> = class_of
            .iter()
            .map(|&d| lift(&class_values[d], d == c))
            .collect();
        let out = eval(&plain_m, &table)?;
        value.get_or_insert(out.a);
        grad_values.push(out.b);
    }
    let mut grad_measures = Vec::with_capacity(measures.len());
    for a in 0..measures.len() {
        let m: Vec<Dual<T>> = measures.iter().enumerate().map(|(i, x)| lift(x, i == a)).collect();
        let out = eval(&m, &plain_t)?;
        value.get_or_insert(out.a);
        grad_measures.push(out.b);
    }
    let value = match value {
        Some(v) => v,
        None => eval(&plain_m, &plain_t)?.a,
    };
    Ok((value, grad_values, grad_measures))
}

/// Exact gradient of `t_H(W)`.
pub fn gradient(h: &Hypergraph, w: &StepKernel) -> Result<Gradient<Rational>> {
    let r = w.uniformity();
    let (classes, class_of) = symmetry_classes(w.parts(), r);
    let class_values: Vec<Rational> = classes.iter().map(|t| w.value(t).clone()).collect();
    let (_, values, measures) = value_and_gradient(h, r, w.measures(), &class_values, &class_of)?;
    Ok(Gradient {
        classes,
        values,
        measures,
    })
}

/// Replace the value of one symmetry class.
pub fn with_class_value(w: &StepKernel, class: &[usize], value: Rational) -> Result<StepKernel> {
    let mut sorted = class.to_vec();
    sorted.sort_unstable();
    StepKernel::from_fn(w.uniformity(), w.measures().to_vec(), |t| {
        if t == sorted.as_slice() {
            value.clone()
        } else {
            w.value(t).clone()
        }
    })
}

/// Central difference `(t(θ+h) - t(θ-h)) / 2h` for one class, exactly.
pub fn finite_difference(h: &Hypergraph, w: &StepKernel, class: &[usize], step: &Rational) -> Result<Rational> {
    let base = w.value(class).clone();
    let up = crate::kernels::density(h, &with_class_value(w, class, &base + step)?)?;
    let down = crate::kernels::density(h, &with_class_value(w, class, &base - step)?)?;
    Ok((up - down) / (step * rational::int(2)))
}
