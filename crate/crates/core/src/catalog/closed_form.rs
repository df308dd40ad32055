use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::qop::DensityMat;

use super::{ex4_lambdas, ex4_rotation, ExampleSpec};

/// `C(n, l) w_l^l w_r^(n-l)` for `l = 0..=n`, for nonnegative weights.
/// Evaluated in log space so that large `n` neither overflows nor underflows early.
pub fn binomial_row(n: u64, w_l: f64, w_r: f64) -> Vec<f64> {
    let n_us = n as usize;
    if w_l == 0.0 || w_r == 0.0 {
        let mut row = vec![0.0; n_us + 1];
        if w_l == 0.0 && w_r == 0.0 {
            if n == 0 {
                row[0] = 1.0;
            }
        } else if w_l == 0.0 {
            row[0] = w_r.powi(n as i32);
        } else {
            row[n_us] = w_l.powi(n as i32);
        }
        return row;
    }
    let (ln_l, ln_r) = (w_l.ln(), w_r.ln());
    let mut ln_choose = 0.0f64;
    let mut row = Vec::with_capacity(n_us + 1);
    for l in 0..=n {
        row.push((ln_choose + l as f64 * ln_l + (n - l) as f64 * ln_r).exp());
        if l < n {
            ln_choose += ((n - l) as f64).ln() - ((l + 1) as f64).ln();
        }
    }
    row
}

/// `(a₁, a₂) = ((Uρ₀U*)₁₁, (Uρ₀U*)₂₂)` for Example 4's rotation `U`.
pub fn ex4_sector_weights(rho0: &DensityMat) -> (f64, f64) {
    let u = ex4_rotation();
    let rotated = u * *rho0.matrix() * u.adjoint();
    (rotated.get(0, 0).re, rotated.get(1, 1).re)
}

/// Exact finite-sum laws for Examples 1, 3 and 4.
///
/// For Examples 1 and 3 the dual process is diagonal, so only the diagonal
/// `(a, b)` of `rho0` enters.
pub fn closed_form(spec: &ExampleSpec, rho0: &DensityMat, n: u64) -> Result<Distribution> {
    spec.validate()?;
    let (a, b) = rho0.diagonal();
    let ni = n as i64;
    let mut raw: Vec<(i64, f64)> = Vec::new();
    match *spec {
        ExampleSpec::Ex1 { p } => {
            // a δ_{-n} + b Σ_l C(n,l) p^l q^{n-l} δ_{n-2l}
            raw.push((-ni, a));
            for (l, w) in binomial_row(n, p, 1.0 - p).into_iter().enumerate() {
                raw.push((ni - 2 * l as i64, b * w));
            }
        }
        ExampleSpec::Ex3 { p, gamma } => {
            let g2 = gamma * gamma;
            let pt = (p - g2 / 2.0).max(0.0);
            let qt = (1.0 - p - g2 / 2.0).max(0.0);
            raw.push((-ni, a));
            // leakage into the first sector after j steps in the second
            for j in 0..n {
                for (l, w) in binomial_row(j, pt, qt).into_iter().enumerate() {
                    raw.push((2 * (j as i64 - l as i64 + 1) - ni, b * g2 * w));
                }
            }
            for (j, w) in binomial_row(n, pt, qt).into_iter().enumerate() {
                raw.push((ni - 2 * j as i64, b * w));
            }
        }
        ExampleSpec::Ex4 { eps, theta } => {
            let (lp, lm) = ex4_lambdas(eps, theta);
            let (a1, a2) = ex4_sector_weights(rho0);
            let first = binomial_row(n, lp, lm);
            let second = binomial_row(n, lm, lp);
            for l in 0..=n as usize {
                raw.push((ni - 2 * l as i64, a1 * first[l] + a2 * second[l]));
            }
        }
        ExampleSpec::Ex2 { .. } | ExampleSpec::Ex5 => {
            return Err(Error::UnsupportedExample(spec.name().to_string()));
        }
    }
    Distribution::from_raw(raw)
}
