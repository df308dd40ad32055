//! Walk distributions from the dual process and Fourier inversion.
//!
//! The dual process evolves the identity under the adjoint-side symbol
//!
//! ```text
//! Y_n(k) = (e^{ik} L_{B*} R_B + e^{-ik} L_{C*} R_C)^n (I)
//! ```
//!
//! and the site probabilities are recovered as
//! `p_x = (1/2π) ∫ e^{ikx} Tr(ρ₀ Y_n(k)) dk`. The initial state only enters
//! through the final trace, so everything up to [`DualTrajectory`] is
//! independent of `ρ₀`.
//!
//! `k ↦ Tr(ρ₀ Y_n(k))` is a trigonometric polynomial of degree at most `n`,
//! hence the `N`-point rectangle rule with `N ≥ 2n + 1` nodes is exact.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::qop::{devectorize, left_mult, right_mult, vectorize, DensityMat, KrausPair, Mat2, Superoperator};

/// Imaginary parts above this abort the inversion with [`Error::Residue`].
pub const RESIDUE_TOL: f64 = 1e-9;

/// The one-step dual symbol at frequency `k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualSymbol {
    pub k: f64,
    pub op: Superoperator,
}

/// `e^{ik} L_{B*} R_B + e^{-ik} L_{C*} R_C`.
pub fn dual_symbol(kp: &KrausPair, k: f64) -> DualSymbol {
    let left = left_mult(&kp.b().adjoint()) * right_mult(kp.b());
    let right = left_mult(&kp.c().adjoint()) * right_mult(kp.c());
    DualSymbol {
        k,
        op: left.scale(C64::from_polar(1.0, k)) + right.scale(C64::from_polar(1.0, -k)),
    }
}

/// `Y_n(k)` by `n` successive applications of the symbol to `vec(I)`.
pub fn dual_power(kp: &KrausPair, k: f64, n: u64) -> Mat2 {
    let op = dual_symbol(kp, k).op;
    let mut v = vectorize(&Mat2::identity());
    for _ in 0..n {
        v = op.apply_vec(&v);
    }
    devectorize(&v)
}

/// `Y_n(k)` by binary powering of the symbol; `O(log n)` for single-frequency queries.
pub fn dual_power_binary(kp: &KrausPair, k: f64, n: u64) -> Mat2 {
    dual_symbol(kp, k).op.pow(n).apply(&Mat2::identity())
}

/// `Y_n` sampled on the nodes `k_j = 2πj/N`, `j = 0..N`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualTrajectory {
    pub n: u64,
    pub values: Vec<Mat2>,
}

impl DualTrajectory {
    pub fn node_count(&self) -> usize {
        self.values.len()
    }

    pub fn node(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.values.len() as f64
    }
}

/// Default node count `2n + 2`.
pub fn node_count(n: u64) -> usize {
    2 * n as usize + 2
}

/// Evaluates `Y_n` on `nodes` equispaced frequencies. Each node is an
/// independent task writing its own slot.
pub fn dual_trajectory(kp: &KrausPair, n: u64, nodes: usize) -> DualTrajectory {
    assert!(nodes > 0, "at least one quadrature node required");
    let values = (0..nodes)
        .into_par_iter()
        .map(|j| dual_power(kp, 2.0 * PI * j as f64 / nodes as f64, n))
        .collect();
    DualTrajectory { n, values }
}

/// Inverts `k ↦ Tr(ρ₀ Y_n(k))` on `traj`'s grid for the sites `-n..=n`.
pub fn invert(traj: &DualTrajectory, rho0: &DensityMat) -> Result<Distribution> {
    let big_n = traj.node_count();
    if big_n < 2 * traj.n as usize + 1 {
        return Err(Error::Consistency(format!(
            "{big_n} nodes cannot resolve a degree-{} trigonometric polynomial",
            traj.n
        )));
    }
    let symbol: Vec<C64> = traj.values.iter().map(|y| (*rho0.matrix() * *y).trace()).collect();
    // e^{2πi m / N}, evaluated directly for each m.
    let twiddle: Vec<C64> = (0..big_n)
        .map(|m| C64::from_polar(1.0, 2.0 * PI * m as f64 / big_n as f64))
        .collect();
    let n = traj.n as i64;
    let raw: Vec<(i64, C64)> = (-n..=n)
        .into_par_iter()
        .map(|x| {
            let x_mod = x.rem_euclid(big_n as i64) as usize;
            let mut acc = C64::new(0.0, 0.0);
            let mut idx = 0usize;
            for f in &symbol {
                acc += twiddle[idx] * f;
                idx += x_mod;
                if idx >= big_n {
                    idx -= big_n;
                }
            }
            (x, acc / big_n as f64)
        })
        .collect();
    if let Some(&(site, z)) = raw.iter().find(|(_, z)| z.im.abs() > RESIDUE_TOL) {
        return Err(Error::Residue { site, imag: z.im });
    }
    Distribution::from_raw(raw.into_iter().map(|(x, z)| (x, z.re)))
}

/// `p⁽ⁿ⁾` by Fourier inversion of the dual process on `2n + 2` nodes.
pub fn distribution_via_dual(kp: &KrausPair, rho0: &DensityMat, n: u64) -> Result<Distribution> {
    distribution_via_dual_nodes(kp, rho0, n, node_count(n))
}

/// As [`distribution_via_dual`] with an explicit node count (`≥ 2n + 1`).
pub fn distribution_via_dual_nodes(kp: &KrausPair, rho0: &DensityMat, n: u64, nodes: usize) -> Result<Distribution> {
    invert(&dual_trajectory(kp, n, nodes), rho0)
}

/// `E[exp(i t X_n / scale)]` from the dual-computed distribution.
pub fn characteristic_function(kp: &KrausPair, rho0: &DensityMat, n: u64, t: f64, scale: f64) -> Result<C64> {
    if scale.is_nan() || scale <= 0.0 {
        return Err(Error::Parse(format!("scale must be positive, got {scale}")));
    }
    Ok(distribution_via_dual(kp, rho0, n)?.characteristic(t, 0.0, scale))
}
