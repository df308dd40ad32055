use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

use super::{build, ExampleSpec};

/// Closed-form spectrum of Example 5's one-step dual symbol at frequency `k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ex5Spectrum {
    pub k: f64,
    /// `cos k`
    pub u: f64,
    /// `(2u + sqrt(4u² + 1))^(1/3)`
    pub xi: f64,
    /// `ξ - 1/ξ`, increasing from -1 to 1 as `u` runs over `[-1, 1]`
    pub s: f64,
    /// `λ₀..λ₃`
    pub lambda: [C64; 4],
    /// `λ_j - λ₀` for `j = 1, 2, 3`
    pub gaps: [C64; 3],
}

fn xi_and_s(k: f64) -> (f64, f64, f64) {
    let u = k.cos();
    // 4u² + 1 ≥ 1 and 2u + sqrt(4u² + 1) > 0 for every real k: no branch cut.
    let xi = (2.0 * u + (4.0 * u * u + 1.0).sqrt()).cbrt();
    (u, xi, xi - 1.0 / xi)
}

pub fn ex5_spectrum(k: f64) -> Ex5Spectrum {
    let (u, xi, s) = xi_and_s(k);
    let s2 = s * s;
    let l0 = s * (s2 + 3.0) / 6.0;
    let l1 = s * (s2 + 5.0) / 6.0;
    let l2 = C64::new(s * (s2 + 2.0) / 6.0, 3f64.sqrt() / 6.0 * (s2 + 4.0).sqrt());
    let lambda = [C64::new(l0, 0.0), C64::new(l1, 0.0), l2, l2.conj()];
    Ex5Spectrum {
        k,
        u,
        xi,
        s,
        lambda,
        gaps: [lambda[1] - lambda[0], lambda[2] - lambda[0], lambda[3] - lambda[0]],
    }
}

/// The dominant eigenvalue `λ₁(k) = s(s² + 5)/6`.
pub fn ex5_lambda1(k: f64) -> f64 {
    let (_, _, s) = xi_and_s(k);
    s * (s * s + 5.0) / 6.0
}

/// The explicit 4x4 recursion matrix for `(a11, a12, a21, a22)` of `Y_n(k)` (row-major order).
pub fn ex5_transfer_matrix(k: f64) -> [[C64; 4]; 4] {
    let e = C64::from_polar(1.0, k);
    let em = e.conj();
    let c = C64::new(2.0 * k.cos(), 0.0);
    let z = C64::new(0.0, 0.0);
    [
        [c, -em, -em, em],
        [e, c, z, -em],
        [e, z, c, -em],
        [e, e, e, c],
    ]
    .map(|row| row.map(|x| x / 3.0))
}

/// `(l² + 2)/3^l`, checked against `Tr(B*ˡBˡ)` and `Tr(C*ˡCˡ)` from matrix powers.
pub fn ex5_power_traces(l: u32) -> Result<f64> {
    let closed = (l as f64 * l as f64 + 2.0) / 3f64.powi(l as i32);
    let kp = build(&ExampleSpec::Ex5)?;
    for (name, m) in [("B", kp.b()), ("C", kp.c())] {
        let power = m.pow(l);
        let trace = (power.adjoint() * power).trace().re;
        if (trace - closed).abs() > 1e-12 * closed.max(1.0) {
            return Err(Error::Consistency(format!(
                "Tr({name}*^{l} {name}^{l}) = {trace} but (l^2+2)/3^l = {closed}"
            )));
        }
    }
    Ok(closed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::dual_symbol;
    use crate::qop::Mat2;
    use std::f64::consts::PI;

    fn det_shifted(m: &[[C64; 4]; 4], lambda: C64) -> C64 {
        let mat = nalgebra::Matrix4::from_fn(|i, j| m[i][j] - if i == j { lambda } else { C64::new(0.0, 0.0) });
        mat.determinant()
    }

    fn grid() -> Vec<f64> {
        (0..=40).map(|i| -PI + 2.0 * PI * i as f64 / 40.0 + 0.013).collect()
    }

    #[test]
    fn endpoints() {
        let sp = ex5_spectrum(0.0);
        assert!((sp.xi - (5f64.sqrt() + 1.0) / 2.0).abs() < 1e-15);
        assert!((sp.xi - (2.0 + 5f64.sqrt()).cbrt()).abs() < 1e-15);
        assert!((sp.lambda[1].re - 1.0).abs() < 1e-15);
        assert!((sp.s - 1.0).abs() < 1e-15);
        let sp = ex5_spectrum(PI);
        assert!((sp.xi - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
        assert!((sp.lambda[1].re + 1.0).abs() < 1e-15);
        assert!(ex5_lambda1(PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn bounds_and_conjugacy() {
        for k in grid() {
            let sp = ex5_spectrum(k);
            assert_eq!(sp.lambda[3], sp.lambda[2].conj());
            assert!(sp.lambda[0].norm() <= 2.0 / 3.0 + 1e-15);
            assert!(sp.lambda[2].norm() <= (2.0f64 / 3.0).sqrt() + 1e-15);
            assert!((-1.0..=1.0).contains(&sp.s));
            assert!((sp.lambda[0].re - 2.0 * sp.u / 3.0).abs() < 1e-14);
            assert!((sp.xi.powi(3) - sp.xi.powi(-3) - 4.0 * sp.u).abs() < 1e-13);
        }
    }

    #[test]
    fn roots_of_the_quartic() {
        for k in grid() {
            let sp = ex5_spectrum(k);
            let u = sp.u;
            for l in sp.lambda {
                let cubic = l * l * l - l * l * (2.0 * u) + l * ((4.0 * u * u + 1.0) / 3.0)
                    - C64::new(2.0 * u * (4.0 * u * u + 5.0) / 27.0, 0.0);
                let quartic = (l - 2.0 * u / 3.0) * cubic;
                assert!(quartic.norm() < 1e-10, "k={k}");
            }
        }
    }

    #[test]
    fn eigenvalues_of_both_symbol_forms() {
        let kp = build(&ExampleSpec::Ex5).unwrap();
        for k in grid() {
            let sp = ex5_spectrum(k);
            let explicit = ex5_transfer_matrix(k);
            let generic = *dual_symbol(&kp, k).op.entries();
            for l in sp.lambda {
                assert!(det_shifted(&explicit, l).norm() < 1e-10, "k={k}");
                assert!(det_shifted(&generic, l).norm() < 1e-10, "k={k}");
            }
        }
    }

    #[test]
    fn explicit_matrix_is_row_major_symbol() {
        // permutation between (a11, a21, a12, a22) and (a11, a12, a21, a22)
        let kp = build(&ExampleSpec::Ex5).unwrap();
        let perm = [0usize, 2, 1, 3];
        for k in grid() {
            let explicit = ex5_transfer_matrix(k);
            let generic = dual_symbol(&kp, k).op;
            for i in 0..4 {
                for j in 0..4 {
                    assert!((explicit[i][j] - generic.entries()[perm[i]][perm[j]]).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn lambda1_antisymmetry_and_curvature() {
        for k in grid() {
            assert!((ex5_lambda1(k + PI) + ex5_lambda1(k)).abs() < 1e-10);
        }
        let h = 1e-4;
        let second = (ex5_lambda1(h) - 2.0 * ex5_lambda1(0.0) + ex5_lambda1(-h)) / (h * h);
        assert!((second + 8.0 / 9.0).abs() < 1e-5, "{second}");
        for i in 0..=20 {
            let k = -PI / 2.0 + PI * i as f64 / 20.0;
            let v = ex5_lambda1(k);
            assert!((-1e-15..=1.0).contains(&v));
        }
    }

    #[test]
    fn power_traces() {
        assert_eq!(ex5_power_traces(0).unwrap(), 2.0);
        assert!((ex5_power_traces(4).unwrap() - 18.0 / 81.0).abs() < 1e-16);
        for l in 0..=20 {
            assert!(ex5_power_traces(l).is_ok());
        }
        let kp = build(&ExampleSpec::Ex5).unwrap();
        for l in 0..=12u32 {
            let bl = kp.b().pow(l);
            let cl = kp.c().pow(l);
            let sum = bl.adjoint() * bl + cl.adjoint() * cl;
            let w = (l as f64 * l as f64 + 2.0) / 3f64.powi(l as i32);
            assert!((sum - Mat2::identity().scale_re(w)).max_abs() < 1e-14);
        }
    }
}
