//! Seeded samplers for directions and feasible points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::geometry::FeasibleSet;
use crate::norms::Norm;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A standard Gaussian vector (spherically symmetric direction source).
pub fn gaussian(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.sample(StandardNormal)).collect()
}

/// A Gaussian direction rescaled to unit length in `norm`.
pub fn unit_vector(rng: &mut impl Rng, norm: &Norm, d: usize) -> Vec<f64> {
    loop {
        let g = gaussian(rng, d);
        let n = norm.eval(&g);
        if n > 0.0 {
            return g.iter().map(|v| v / n).collect();
        }
    }
}

/// A point on the boundary of `set` along a Gaussian direction.
pub fn boundary_point(rng: &mut impl Rng, set: &dyn FeasibleSet) -> Vec<f64> {
    let dir = gaussian(rng, set.dim());
    set.boundary_along(&dir)
}

/// A feasible point: on the boundary with probability `boundary_bias`,
/// otherwise a uniform radial shrink of a boundary point towards the center.
pub fn feasible_point(rng: &mut impl Rng, set: &dyn FeasibleSet, boundary_bias: f64) -> Vec<f64> {
    let b = boundary_point(rng, set);
    if rng.random::<f64>() < boundary_bias {
        return b;
    }
    let s: f64 = rng.random();
    let c = set.center();
    c.iter().zip(&b).map(|(ci, bi)| ci + s * (bi - ci)).collect()
}
