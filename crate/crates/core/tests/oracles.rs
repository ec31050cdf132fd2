//! Closed forms against independent brute-force oracles.

use approx::assert_relative_eq;
use nalgebra::DMatrix;
use rand::Rng;
use ucfw_core::geometry::{lmo_lp, lmo_schatten, FeasibleSet, L1Ball, LpBall, SchattenBall, SetVariant};
use ucfw_core::norms::{dot, dual_exponent, lp_norm, singular_values};
use ucfw_core::objectives::{grad_floor_quadratic, QuadraticObjective, SmoothObjective};
use ucfw_core::online::{run_ftl, LossStream, OnlineConfig, X1Policy};
use ucfw_core::sampling::{self, boundary_point, feasible_point};
use ucfw_core::solver::{exact_line_search, golden_section};
use ucfw_core::verify::lmo_dominance;

#[test]
fn l3_oracle_beats_a_million_boundary_samples() {
    let ball = LpBall::new(3.0, 5.0, 2).unwrap();
    let phi = [1.0, 1.0];
    let (oracle, best) = lmo_dominance(&ball, &phi, 1_000_000, 42).unwrap();
    assert!(best <= oracle + 1e-12, "sample {best} beats oracle {oracle}");
    assert_relative_eq!(oracle, 5.0 * 2f64.powf(2.0 / 3.0), max_relative = 1e-12);
    assert!(oracle - best < 1e-6);
}

#[test]
fn schatten_random_matrix_hits_dual_norm() {
    let mut rng = sampling::rng(7);
    let g: Vec<f64> = sampling::gaussian(&mut rng, 12);
    let v = lmo_schatten(2.5, 1.0, &g, 4, 3).unwrap();
    let sigma = singular_values(&g, 4, 3);
    assert_relative_eq!(dot(&g, &v), lp_norm(&sigma, dual_exponent(2.5)), max_relative = 1e-8);
    assert_relative_eq!(lp_norm(&singular_values(&v, 4, 3), 2.5), 1.0, max_relative = 1e-10);
}

#[test]
fn oracle_dominates_feasible_samples_on_every_family() {
    let sets = vec![
        SetVariant::Lp(LpBall::new(1.5, 1.0, 4).unwrap()),
        SetVariant::Lp(LpBall::new(3.0, 2.0, 4).unwrap()),
        SetVariant::Lp(LpBall::new(7.0, 1.0, 3).unwrap()),
        SetVariant::L1(L1Ball::new(1.0, 4).unwrap()),
        SetVariant::Schatten(SchattenBall::new(2.5, 2, 2, 1.0).unwrap()),
    ];
    for set in &sets {
        let mut rng = sampling::rng(5);
        let pts: Vec<Vec<f64>> = (0..10_000).map(|_| feasible_point(&mut rng, set, 0.7)).collect();
        for _ in 0..1000 {
            let phi = sampling::gaussian(&mut rng, set.dim());
            let v = set.lmo(&phi).unwrap();
            assert!(set.contains(&v, 1e-9), "{}", set.label());
            let top = dot(&phi, &v);
            for x in &pts {
                assert!(dot(&phi, x) <= top + 1e-9, "{}", set.label());
            }
        }
    }
}

#[test]
fn anisotropic_gradient_floor_is_below_sampled_minimum() {
    let ball = LpBall::new(2.0, 5.0, 2).unwrap();
    let f = QuadraticObjective::diagonal(vec![1.0, 100.0], vec![10.0, 0.0]).unwrap();
    let c = grad_floor_quadratic(&f, &ball);
    assert_relative_eq!(c, 5.0, max_relative = 1e-14);
    let mut rng = sampling::rng(1);
    let mut lowest = f64::INFINITY;
    for _ in 0..100_000 {
        let x = feasible_point(&mut rng, &ball, 0.5);
        lowest = lowest.min(lp_norm(&f.gradient(&x), 2.0));
    }
    assert!(lowest >= c, "sampled {lowest} < floor {c}");
}

#[test]
fn analytic_line_search_matches_golden_section() {
    let mut rng = sampling::rng(3);
    let a: Vec<f64> = (0..5).map(|_| rng.random_range(0.5..20.0)).collect();
    let f = QuadraticObjective::diagonal(a, sampling::gaussian(&mut rng, 5)).unwrap();
    for _ in 0..50 {
        let x = sampling::gaussian(&mut rng, 5);
        let d = sampling::gaussian(&mut rng, 5);
        let exact = exact_line_search(&f, &x, &d);
        let at = |g: f64| f.value(&x.iter().zip(&d).map(|(a, b)| a + g * b).collect::<Vec<_>>());
        let gs = golden_section(at, 0.0, 1.0, 1e-10);
        // value comparisons locate a flat minimum only to about √ε
        assert!((exact - gs).abs() < 1e-6, "{exact} vs {gs}");
        assert!(at(exact) <= at(gs) + 1e-12 * at(gs).abs().max(1.0));
    }
}

/// An objective without an analytic step, to exercise the golden-section
/// fall-back.
#[derive(Debug)]
struct SoftPlusSum;

impl SmoothObjective for SoftPlusSum {
    fn dim(&self) -> usize {
        2
    }
    fn value(&self, x: &[f64]) -> f64 {
        x.iter().map(|v| (1.0 + (3.0 * v - 1.0).exp()).ln()).sum::<f64>() + 0.5 * dot(x, x)
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|v| 3.0 / (1.0 + (1.0 - 3.0 * v).exp()) + v).collect()
    }
    fn smoothness(&self) -> f64 {
        1.0 + 9.0 / 4.0
    }
}

#[test]
fn golden_fallback_is_never_worse_than_candidates() {
    let f = SoftPlusSum;
    let mut rng = sampling::rng(8);
    for _ in 0..100 {
        let x = sampling::gaussian(&mut rng, 2);
        let d = sampling::gaussian(&mut rng, 2);
        let g = exact_line_search(&f, &x, &d);
        assert!((0.0..=1.0).contains(&g));
        let at = |s: f64| f.value(&[x[0] + s * d[0], x[1] + s * d[1]]);
        let gap = -dot(&f.gradient(&x), &d);
        let ss = ucfw_core::solver::short_step(gap.max(0.0), f.smoothness(), dot(&d, &d));
        for cand in [0.0, ss, 1.0] {
            assert!(at(g) <= at(cand) + 1e-12);
        }
    }
}

#[test]
fn hindsight_term_matches_sampled_minimum() {
    let ball = LpBall::new(3.0, 1.0, 2).unwrap();
    let stream = LossStream::DriftingMean { base: vec![0.6, -0.3], noise_scale: 0.5, seed: 12 };
    let tr = run_ftl(&ball, &stream, &OnlineConfig::new(20)).unwrap();
    let cum: Vec<f64> = (0..2).map(|k| tr.rounds.iter().map(|r| r.loss_vector[k]).sum()).collect();
    let played: f64 = tr.rounds.iter().map(|r| r.loss).sum();
    let mut rng = sampling::rng(99);
    let mut best = f64::INFINITY;
    for _ in 0..100_000 {
        best = best.min(dot(&cum, &boundary_point(&mut rng, &ball)));
    }
    let sampled_regret = played - best;
    let r20 = tr.rounds[19].regret;
    assert!(r20 >= sampled_regret - 1e-12);
    assert!((r20 - sampled_regret).abs() < 1e-6, "{r20} vs {sampled_regret}");
}

#[test]
fn leader_replays_the_hindsight_oracle() {
    let ball = LpBall::new(2.0, 1.0, 2).unwrap();
    let stream = LossStream::Fixed { losses: vec![vec![1.0, 0.0], vec![0.0, 1.0]] };
    let cfg = OnlineConfig { x1: X1Policy::Point { x: vec![0.0, 0.0] }, ..OnlineConfig::new(3) };
    let tr = run_ftl(&ball, &stream, &cfg).unwrap();
    let s = -1.0 / 2f64.sqrt();
    assert_relative_eq!(tr.rounds[2].action[0], s, max_relative = 1e-15);
    assert_relative_eq!(tr.rounds[2].action[1], s, max_relative = 1e-15);
}

#[test]
fn lp_oracle_formula_matches_gradient_of_dual_norm() {
    // v = r ∇‖φ‖_{p*}; compare with central differences.
    let (p, r) = (2.7, 1.3);
    let phi = [0.4, -1.1, 0.05];
    let v = lmo_lp(p, r, &phi).unwrap();
    let ps = dual_exponent(p);
    for i in 0..3 {
        let h = 1e-6;
        let mut a = phi;
        let mut b = phi;
        a[i] += h;
        b[i] -= h;
        let fd = r * (lp_norm(&a, ps) - lp_norm(&b, ps)) / (2.0 * h);
        assert!((fd - v[i]).abs() < 1e-7, "{fd} vs {}", v[i]);
    }
}

#[test]
fn schatten_oracle_is_orthogonally_equivariant() {
    // LMO(UGVᵀ) = U·LMO(G)·Vᵀ for orthogonal U, V.
    let mut rng = sampling::rng(21);
    let g = DMatrix::from_fn(3, 3, |_, _| rng.random_range(-1.0..1.0));
    let q = DMatrix::from_fn(3, 3, |_, _| rng.random_range(-1.0..1.0)).qr().q();
    let rotated = &q * &g;
    let v = DMatrix::from_column_slice(3, 3, &lmo_schatten(3.0, 2.0, g.as_slice(), 3, 3).unwrap());
    let vr = DMatrix::from_column_slice(3, 3, &lmo_schatten(3.0, 2.0, rotated.as_slice(), 3, 3).unwrap());
    assert!((&q * v - vr).amax() < 1e-10);
}
