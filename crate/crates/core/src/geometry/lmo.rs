//! Closed-form linear maximization oracles: `argmax_{v ∈ C} ⟨φ, v⟩`.

use nalgebra::{DMatrix, DVector, SVD};
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::norms::{dual_exponent, lp_norm};

/// How to pick a maximizer when several coordinates attain `max |φ_i|`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TiePolicy {
    #[default]
    LowestIndex,
    HighestIndex,
}

/// `sign` with `sign(0) = +1`.
#[inline]
pub(crate) fn sign(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

fn max_abs(phi: &[f64]) -> f64 {
    phi.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Maximizer of `⟨φ, ·⟩` over the `ℓp` ball of radius `r`, `p > 1`.
///
/// `v_i = r·sign(φ_i)·(|φ_i| / ‖φ‖_{p*})^{p*−1}`. The ratio is formed on
/// `φ / max|φ_i|`, so entries far below the largest one underflow to zero
/// instead of poisoning the normalization.
pub fn lmo_lp(p: f64, radius: f64, phi: &[f64]) -> Result<Vec<f64>> {
    ensure(p > 1.0 && p.is_finite(), || format!("lp oracle needs 1 < p < inf, got {p}"))?;
    ensure(radius > 0.0, || format!("radius must be positive, got {radius}"))?;
    let m = max_abs(phi);
    if m == 0.0 {
        return Err(Error::ZeroDirection);
    }
    let ps = dual_exponent(p);
    let scaled: Vec<f64> = phi.iter().map(|v| v.abs() / m).collect();
    let dual = lp_norm(&scaled, ps);
    let e = ps - 1.0;
    Ok(phi
        .iter()
        .zip(&scaled)
        .map(|(&f, &u)| {
            let ratio = u / dual;
            let mag = if ratio == 0.0 {
                0.0
            } else if ratio < 1e-300 {
                (e * ratio.ln()).exp()
            } else {
                ratio.powf(e)
            };
            radius * sign(f) * mag
        })
        .collect())
}

/// Maximizer of `⟨φ, ·⟩` over the `ℓ1` ball: a signed, scaled basis vector.
pub fn lmo_l1(radius: f64, phi: &[f64], tie: TiePolicy) -> Result<Vec<f64>> {
    ensure(radius > 0.0, || format!("radius must be positive, got {radius}"))?;
    let m = max_abs(phi);
    if m == 0.0 {
        return Err(Error::ZeroDirection);
    }
    let idx = match tie {
        TiePolicy::LowestIndex => phi.iter().position(|v| v.abs() == m),
        TiePolicy::HighestIndex => phi.iter().rposition(|v| v.abs() == m),
    }
    .expect("max attained");
    let mut v = vec![0.0; phi.len()];
    v[idx] = radius * sign(phi[idx]);
    Ok(v)
}

/// Maximizer of `⟨G, ·⟩_F` over the Schatten-p ball of radius `r`.
///
/// `g` is a column-major `rows × cols` matrix. With `G = U diag(σ) Vᵀ` the
/// maximizer is `U diag(lmo_lp(p, r, σ)) Vᵀ`.
pub fn lmo_schatten(p: f64, radius: f64, g: &[f64], rows: usize, cols: usize) -> Result<Vec<f64>> {
    ensure(g.len() == rows * cols, || format!("matrix data of length {} does not match {rows}x{cols}", g.len()))?;
    if max_abs(g) == 0.0 {
        return Err(Error::ZeroDirection);
    }
    let mat = DMatrix::from_column_slice(rows, cols, g);
    let svd = SVD::try_new(mat, true, true, f64::EPSILON, 10_000).ok_or(Error::SvdFailure)?;
    let u = svd.u.as_ref().ok_or(Error::SvdFailure)?;
    let vt = svd.v_t.as_ref().ok_or(Error::SvdFailure)?;
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    let s = lmo_lp(p, radius, &sigma)?;
    let out = u * DMatrix::from_diagonal(&DVector::from_vec(s)) * vt;
    Ok(out.as_slice().to_vec())
}
