use num::{One, Signed, Zero};

use super::*;
use crate::kernels::{density, parity_kernel, StepKernel};
use crate::rational::{int, pow2, ratio, to_f64, Rational};
use crate::structures::{complete_graph, cycle_graph, grid, path_graph, single_edge, tight_cycle};

fn sample_kernel() -> StepKernel {
    StepKernel::from_fn(2, vec![ratio(1, 3), ratio(2, 3)], |t| match (t[0], t[1]) {
        (0, 0) => ratio(1, 2),
        (0, 1) => ratio(-3, 4),
        _ => ratio(1, 5),
    })
    .unwrap()
}

#[test]
fn linear_gradient_of_the_mean() {
    let w = sample_kernel();
    let g = gradient(&complete_graph(2), &w).unwrap();
    // ∂/∂w_ab = m_a m_b times the number of orderings of (a, b).
    assert_eq!(g.classes, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
    assert_eq!(g.values, vec![ratio(1, 9), ratio(4, 9), ratio(4, 9)]);
}

#[test]
fn gradient_matches_finite_differences() {
    let w = sample_kernel();
    let step = ratio(1, 1_000_000);
    for h in [complete_graph(3), path_graph(4), cycle_graph(4).unwrap()] {
        let g = gradient(&h, &w).unwrap();
        let scale = g.values.iter().map(|x| to_f64(x).abs()).fold(0.0, f64::max);
        for (c, exact) in g.classes.iter().zip(&g.values) {
            let fd = finite_difference(&h, &w, c, &step).unwrap();
            let err = (to_f64(&fd) - to_f64(exact)).abs() / to_f64(exact).abs().max(scale);
            assert!(err < 1e-6, "{h:?} {c:?}");
        }
    }
}

#[test]
fn product_rule_on_disjoint_unions() {
    let w = sample_kernel();
    let a = complete_graph(3);
    let b = path_graph(3);
    let u = a.disjoint_union(&b).unwrap();
    let (ga, gb, gu) = (gradient(&a, &w).unwrap(), gradient(&b, &w).unwrap(), gradient(&u, &w).unwrap());
    let (ta, tb) = (density(&a, &w).unwrap(), density(&b, &w).unwrap());
    for i in 0..gu.values.len() {
        assert_eq!(gu.values[i], &ga.values[i] * &tb + &ta * &gb.values[i]);
    }
    for i in 0..gu.measures.len() {
        assert_eq!(gu.measures[i], &ga.measures[i] * &tb + &ta * &gb.measures[i]);
    }
}

#[test]
fn optimizer_recovers_constant_minus_one() {
    for h in [complete_graph(2), complete_graph(3)] {
        let res = minimize_density(&h, &MinimizeOptions { parts: 2, restarts: 3, iterations: 30, ..Default::default() }).unwrap();
        assert_eq!(res.value, int(-1));
        assert!(res.negative && res.verify(&h).unwrap());
    }
}

#[test]
fn optimizer_finds_nothing_for_c4() {
    let h = cycle_graph(4).unwrap();
    let res = minimize_density(&h, &MinimizeOptions { parts: 2, restarts: 4, iterations: 50, ..Default::default() }).unwrap();
    assert!(!res.negative);
    assert!(!res.value.is_negative());
    assert!(res.verify(&h).unwrap());
}

#[test]
fn optimizer_budget() {
    let opts = MinimizeOptions { parts: 4, budget: 100.0, ..Default::default() };
    assert!(matches!(minimize_density(&grid(3).unwrap(), &opts), Err(crate::Error::Budget { .. })));
}

#[test]
fn triangle_certificate_sanity() {
    let k3 = complete_graph(3);
    let w = StepKernel::constant(2, int(-1));
    let u = parity_kernel(2).unwrap();
    let cert = nonsidorenko_certificate(&k3, &[0, 1, 2], Some(&w), &u, None).unwrap();
    // Only subsets with all degrees even survive the parity kernel: K3 itself.
    let eps = cert.eps.clone();
    assert_eq!(cert.lhs, Rational::one() - rational_cube(&eps));
    assert_eq!(cert.rhs, Rational::one());
    assert!(cert.valid);
    assert!(cert.verify().unwrap());
    assert!(cert.verify_direct().unwrap());

    let zero = nonsidorenko_certificate(&k3, &[0, 1, 2], Some(&w), &u, Some(&Rational::zero())).unwrap();
    assert_eq!((zero.lhs.clone(), zero.rhs.clone(), zero.valid), (int(1), int(1), false));
}

fn rational_cube(x: &Rational) -> Rational {
    x * x * x
}

#[test]
fn certificate_roundtrips_through_json() {
    let k3 = complete_graph(3);
    let w = StepKernel::constant(2, int(-1));
    let u = parity_kernel(2).unwrap();
    let cert = nonsidorenko_certificate(&k3, &[0, 1, 2], Some(&w), &u, Some(&ratio(1, 2))).unwrap();
    let text = serde_json::to_string(&cert).unwrap();
    let back: NonSidorenkoCertificate = serde_json::from_str(&text).unwrap();
    assert_eq!(back, cert);
    assert!(back.verify().unwrap());
}

#[test]
fn certificate_branches_and_errors() {
    let k3 = complete_graph(3);
    // -1 on the diagonal blocks, +1 across: zero edge density, t_K3 = -1.
    let u = StepKernel::from_fn(2, StepKernel::equal_measures(2), |t| int(if t[0] == t[1] { -1 } else { 1 })).unwrap();
    assert_eq!(density(&k3, &u).unwrap(), int(-1));
    // Second branch: no witness, the quasirandom kernel itself is negative on G.
    let cert = nonsidorenko_certificate(&k3, &[0, 1, 2], None, &u, None).unwrap();
    assert!(cert.valid && cert.verify().unwrap() && cert.verify_direct().unwrap());
    let pos = StepKernel::constant(2, int(1));
    assert!(nonsidorenko_certificate(&k3, &[0, 1, 2], Some(&pos), &u, None).is_err());
    assert!(nonsidorenko_certificate(&k3, &[0, 1, 2], None, &parity_kernel(3).unwrap(), None).is_err());
}

#[test]
fn grid_parity_chain() {
    let report = grid_demo(3, None).unwrap();
    assert_eq!(report.rows.len(), 63);
    assert!(report.parity_matches && report.only_full_attains_one);
}

#[test]
fn centered_density_matches_rational_kernel() {
    let f = single_edge(3).unwrap();
    let n = 7;
    let seed = 11;
    let exact = centered_tournament_density(&f, n, seed).unwrap();
    let t = crate::tournaments::sample_tournament(2, n, seed).unwrap();
    let g = crate::tournaments::build_g(&t).unwrap();
    let expected = Rational::from_integer((6 * g.edge_count() as i64).into()) / Rational::from_integer(343.into()) - ratio(1, 4);
    assert_eq!(exact, expected);
}

#[test]
fn cycle_demo_3_6() {
    let rep = cycle_demo(3, 6, 12, 5).unwrap();
    assert!(rep.levi.witness.density.is_negative());
    assert_eq!(rep.proper_subgraphs.certified, 62);
    assert!(!rep.full_cycle_vanishing);
    assert_eq!(rep.copy_probability.probability, pow2(-11));
    assert_eq!(rep.random_bound, pow2(-12));
    assert!(!rep.decay.is_empty());
    assert!(cycle_demo(4, 8, 12, 5).is_err());
    assert!(cycle_demo(3, 7, 12, 5).is_err());
    let _ = tight_cycle(3, 6);
}

#[test]
fn two_part_witness_for_tight_six_cycle() {
    let c6 = tight_cycle(3, 6).unwrap();
    let measures = vec![ratio(241, 512), ratio(271, 512)];
    let w = StepKernel::from_fn(3, measures, |t| match t.iter().filter(|&&c| c == 1).count() {
        0 => ratio(143, 256),
        1 => int(1),
        2 => int(-1),
        _ => ratio(-325, 1024),
    })
    .unwrap();
    let brute = crate::kernels::density_with(&c6, &w, crate::engine::Route::BruteForce, 1e9).unwrap();
    let elim = crate::kernels::density_with(&c6, &w, crate::engine::Route::Elimination, 1e9).unwrap();
    assert_eq!(brute, elim);
    assert!(brute.is_negative());
    assert!(to_f64(&brute) < -0.16);

    let opts = MinimizeOptions { parts: 2, restarts: 2, iterations: 30, seed: 1, ..Default::default() };
    let res = minimize_density(&c6, &opts).unwrap();
    assert!(res.negative && res.verify(&c6).unwrap());
}
