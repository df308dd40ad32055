//! Invariant states, central limit parameters and asymptotic ratio checks.
//!
//! With a unique invariant state `ρ∞` the walk obeys a central limit theorem
//! `(X_n - nm)/√n → N(0, σ²)` where
//!
//! ```text
//! m  = Tr(Cρ∞C*) - Tr(Bρ∞B*)
//! σ² = Tr(Bρ∞B* + Cρ∞C*) - m² + 2 Tr[(Cρ∞C* - Bρ∞B*) L] - 2m Tr(ρ∞ L)
//! ```
//!
//! and `L` solves `L - 𝓛*(L) = C*C - B*B - mI`.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::catalog::ex5_lambda1;
use crate::distribution::Distribution;
use crate::dual::distribution_via_dual;
use crate::error::{Error, Result};
use crate::qop::{channel_superoperator, devectorize, vectorize, DensityMat, KrausPair, Mat2};

/// Singular values of `𝓛 - Id` at or below this count towards the fixed space.
pub const FIXED_SPACE_TOL: f64 = 1e-9;
/// Largest accepted `‖𝓛(ρ∞) - ρ∞‖`.
pub const INVARIANT_TOL: f64 = 1e-10;
pub const SOLVABILITY_TOL: f64 = 1e-10;
pub const POISSON_RESIDUAL_TOL: f64 = 1e-9;
/// Panels of the composite Simpson rule in [`laplace_ratio`].
pub const LAPLACE_PANELS: usize = 1 << 14;
/// Relative accuracy of [`ex5_alpha`].
pub const ALPHA_REL_TOL: f64 = 1e-8;
/// Half-width factor of the window in [`drift_concentration_check`].
pub const CONCENTRATION_EPS: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub fixed_space_dim: usize,
    pub rho_inf: Option<DensityMat>,
    /// `‖𝓛(ρ∞) - ρ∞‖_max`, or the smallest singular value of `𝓛 - Id` when `rho_inf` is absent.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CltParams {
    pub rho_inf: DensityMat,
    pub m: f64,
    pub l: Mat2,
    pub sigma2: f64,
    /// `|Tr(ρ∞ (C*C - B*B - mI))|`
    pub solvability: f64,
    /// `‖L - 𝓛*(L) - (C*C - B*B - mI)‖_max`
    pub residual: f64,
}

fn shifted_channel(kp: &KrausPair) -> Matrix4<C64> {
    channel_superoperator(kp).to_nalgebra() - Matrix4::identity()
}

fn to_array(v: &Vector4<C64>) -> [C64; 4] {
    [v[0], v[1], v[2], v[3]]
}

pub fn invariant_residual(kp: &KrausPair, rho: &DensityMat) -> f64 {
    (kp.channel(rho.matrix()) - *rho.matrix()).max_abs()
}

/// Dimension of the fixed space of `𝓛` and, when it is one-dimensional, the invariant state.
pub fn invariant_states(kp: &KrausPair) -> Result<InvariantReport> {
    let svd = shifted_channel(kp).svd(false, true);
    let v_t = svd.v_t.expect("requested V*");
    let null: Vec<usize> = (0..4).filter(|&i| svd.singular_values[i] <= FIXED_SPACE_TOL).collect();
    let smallest = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
    match null.len() {
        0 => Err(Error::NoInvariantState),
        1 => {
            // rows of V* are conjugated right singular vectors
            let row = v_t.row(null[0]);
            let v = [row[0].conj(), row[1].conj(), row[2].conj(), row[3].conj()];
            let m = devectorize(&v);
            let tr = m.trace();
            if tr.norm() < FIXED_SPACE_TOL {
                return Err(Error::NoInvariantState);
            }
            let rho = DensityMat::new(m.scale(tr.inv()).hermitian_part())?;
            let residual = invariant_residual(kp, &rho);
            if residual > INVARIANT_TOL {
                return Err(Error::NotInvariant { residual });
            }
            Ok(InvariantReport {
                fixed_space_dim: 1,
                rho_inf: Some(rho),
                residual,
            })
        }
        dim => Ok(InvariantReport {
            fixed_space_dim: dim,
            rho_inf: None,
            residual: smallest,
        }),
    }
}

/// `m = Tr(Cρ∞C*) - Tr(Bρ∞B*)`.
pub fn drift(kp: &KrausPair, rho_inf: &DensityMat) -> f64 {
    kp.c().sandwich(rho_inf.matrix()).trace().re - kp.b().sandwich(rho_inf.matrix()).trace().re
}

/// The variance formula for a given solution `L` (any solution, any gauge).
pub fn clt_variance(kp: &KrausPair, rho_inf: &DensityMat, m: f64, l: &Mat2) -> f64 {
    let rho = rho_inf.matrix();
    let b = kp.b().sandwich(rho);
    let c = kp.c().sandwich(rho);
    let l_term = ((c - b) * *l).trace().re;
    let drift_term = (*rho * *l).trace().re;
    (b + c).trace().re - m * m + 2.0 * l_term - 2.0 * m * drift_term
}

fn poisson_rhs(kp: &KrausPair, m: f64) -> Mat2 {
    kp.c().adjoint() * *kp.c() - kp.b().adjoint() * *kp.b() - Mat2::identity().scale_re(m)
}

/// Minimum-norm solution of `(Id - 𝓛*) L = rhs`, Hermitized.
fn solve_poisson(kp: &KrausPair, rhs: &Mat2) -> Result<Mat2> {
    let system = Matrix4::identity() - channel_superoperator(kp).adjoint().to_nalgebra();
    let svd = system.svd(true, true);
    let b = Vector4::from(vectorize(rhs));
    let x = svd
        .solve(&b, FIXED_SPACE_TOL)
        .map_err(|e| Error::Solvability(e.to_string()))?;
    Ok(devectorize(&to_array(&x)).hermitian_part())
}

fn full_rank_params(kp: &KrausPair, rho_inf: DensityMat) -> Result<CltParams> {
    let m = drift(kp, &rho_inf);
    let rhs = poisson_rhs(kp, m);
    let solvability = (*rho_inf.matrix() * rhs).trace().norm();
    if solvability > SOLVABILITY_TOL {
        return Err(Error::Solvability(format!("Tr(rho_inf * rhs) = {solvability:e}")));
    }
    let l = solve_poisson(kp, &rhs)?;
    let residual = (l - kp.adjoint_channel(&l) - rhs).max_abs();
    if residual > POISSON_RESIDUAL_TOL {
        return Err(Error::Solvability(format!("residual {residual:e}")));
    }
    Ok(CltParams {
        rho_inf,
        m,
        sigma2: clt_variance(kp, &rho_inf, m, &l),
        l,
        solvability,
        residual,
    })
}

/// `m`, `L` and `σ²` for a pair with a unique invariant state.
pub fn clt_params(kp: &KrausPair) -> Result<CltParams> {
    let report = invariant_states(kp)?;
    match report.rho_inf {
        Some(rho) => full_rank_params(kp, rho),
        None => Err(Error::NonUniqueInvariant { dim: report.fixed_space_dim }),
    }
}

/// CLT parameters for the walk started in the invariant state `rho_inf`
/// when the fixed space is larger than one dimension.
///
/// A rank-one `rho_inf = |v><v|` must span a common eigenline of `B` and `C`;
/// the walk is then classical with `Bv = βv`, `Cv = γv`, and `L = 0` solves the
/// compressed equation. A full-rank `rho_inf` uses the general solver.
pub fn clt_params_for_state(kp: &KrausPair, rho_inf: &DensityMat) -> Result<CltParams> {
    let residual = invariant_residual(kp, rho_inf);
    if residual > INVARIANT_TOL {
        return Err(Error::NotInvariant { residual });
    }
    let [low, _] = rho_inf.matrix().hermitian_eigenvalues();
    if low > FIXED_SPACE_TOL {
        return full_rank_params(kp, *rho_inf);
    }
    let v = rho_inf.matrix().hermitian_top_eigenvector();
    let p = Mat2::outer(v);
    let leak = |op: &Mat2| ((Mat2::identity() - p) * *op * p).max_abs();
    if leak(kp.b()) > FIXED_SPACE_TOL || leak(kp.c()) > FIXED_SPACE_TOL {
        return Err(Error::SupportNotInvariant);
    }
    let m = drift(kp, rho_inf);
    let l = Mat2::zero();
    Ok(CltParams {
        rho_inf: *rho_inf,
        m,
        sigma2: clt_variance(kp, rho_inf, m, &l),
        l,
        solvability: 0.0,
        residual: 0.0,
    })
}

fn simpson_weight(i: usize, panels: usize) -> f64 {
    if i == 0 || i == panels {
        1.0
    } else if i % 2 == 1 {
        4.0
    } else {
        2.0
    }
}

/// `(∫ fⁿ g) / (∫ fⁿ)` over `[a, b]` by composite Simpson on [`LAPLACE_PANELS`] panels.
///
/// `f` is rescaled by its grid maximum in absolute value before powering.
/// Fails with [`Error::DegenerateMax`] unless the grid points within `1e-9`
/// (relative) of the maximum form one contiguous run covering at most 1% of the grid.
pub fn laplace_ratio<F, G>(f: F, g: G, interval: (f64, f64), n: u32) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let (a, b) = interval;
    if !a.is_finite() || !b.is_finite() || a >= b {
        return Err(Error::Parse(format!("invalid interval [{a}, {b}]")));
    }
    let panels = LAPLACE_PANELS;
    let h = (b - a) / panels as f64;
    let xs: Vec<f64> = (0..=panels).map(|i| a + h * i as f64).collect();
    let fs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let top = fs.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if top <= 0.0 || !top.is_finite() {
        return Err(Error::DegenerateMax);
    }
    let near: Vec<usize> = (0..=panels).filter(|&i| fs[i].abs() >= top * (1.0 - 1e-9)).collect();
    let contiguous = near.windows(2).all(|w| w[1] == w[0] + 1);
    if !contiguous || near.len() > (panels + 1) / 100 {
        return Err(Error::DegenerateMax);
    }
    let (mut num, mut den) = (0.0, 0.0);
    for (i, (&x, &fx)) in xs.iter().zip(&fs).enumerate() {
        let w = simpson_weight(i, panels) * (fx / top).powi(n as i32);
        num += w * g(x);
        den += w;
    }
    Ok(num / den)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// `α_n = ∫_{-π/2}^{π/2} λ₁(k)ⁿ dk` for Example 5, to relative accuracy [`ALPHA_REL_TOL`].
pub fn ex5_alpha(n: u32) -> f64 {
    let f = |k: f64| ex5_lambda1(k).max(0.0).powi(n as i32);
    // λ₁ is even: integrate over [0, π/2] on pieces, each refined adaptively.
    let pieces = 64;
    let h = FRAC_PI_2 / pieces as f64;
    let coarse: f64 = (0..pieces)
        .map(|i| {
            let (a, b) = (h * i as f64, h * (i + 1) as f64);
            (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
        })
        .sum();
    let tol = 0.01 * ALPHA_REL_TOL * coarse.abs() / pieces as f64;
    let half: f64 = (0..pieces)
        .map(|i| {
            let (a, b) = (h * i as f64, h * (i + 1) as f64);
            let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
            let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
            adaptive_simpson(&f, a, b, fa, fm, fb, whole, tol, 40)
        })
        .sum();
    2.0 * half
}

/// `p_x⁽ⁿ⁾ / α_n` for every `x` in the support, the quantity tending to `1/π` on the parity class of `n`.
pub fn ex5_local_ratios(dist: &Distribution, n: u32) -> Vec<(i64, f64, f64)> {
    let alpha = ex5_alpha(n);
    dist.iter().map(|(x, p)| (x, p, p / alpha)).collect()
}

/// Mass outside the window `|x + n| ≤ ε n^α` (with `ε` = [`CONCENTRATION_EPS`])
/// for the exact law at step `n`.
pub fn drift_concentration_check(kp: &KrausPair, rho0: &DensityMat, alpha: f64, n: u64) -> Result<f64> {
    let dist = distribution_via_dual(kp, rho0, n)?;
    Ok(concentration_outside(&dist, alpha, n))
}

/// The window mass of [`drift_concentration_check`] for a given distribution.
pub fn concentration_outside(dist: &Distribution, alpha: f64, n: u64) -> f64 {
    let width = CONCENTRATION_EPS * (n as f64).powf(alpha);
    let centre = -(n as i64);
    dist.mass_where(|x| ((x - centre) as f64).abs() > width)
}
