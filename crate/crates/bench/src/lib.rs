//! Shared fixtures for the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ucfw_core::solver::seeded_start;
use ucfw_core::{LpBall, QuadraticObjective};

pub fn random_vec(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// Unit `ℓp` ball with `½‖x − x0‖²`, `x0` outside along `e₁`, plus a vertex start.
pub fn flat_problem(p: f64, dim: usize) -> (LpBall, QuadraticObjective, Vec<f64>) {
    let ball = LpBall::new(p, 1.0, dim).expect("valid ball");
    let mut x0 = vec![0.0; dim];
    x0[0] = 3.0;
    let x_init = seeded_start(&ball, 0).expect("start");
    (ball, QuadraticObjective::isotropic(x0), x_init)
}
