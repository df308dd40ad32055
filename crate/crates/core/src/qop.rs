//! Complex 2x2 operator algebra, Kraus pairs and superoperators.
//!
//! Superoperators act on column-stacked matrices:
//! `vec(A) = (a11, a21, a12, a22)`, so that `vec(B A C) = (C^T ⊗ B) vec(A)`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `|B*B + C*C - I|_max`.
pub const NORMALIZATION_TOL: f64 = 1e-12;
/// Tolerance for Hermiticity, trace and positivity of density matrices.
pub const DENSITY_TOL: f64 = 1e-12;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// A complex 2x2 matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[[C64; 2]; 2]", into = "[[C64; 2]; 2]")]
pub struct Mat2(pub(crate) [[C64; 2]; 2]);

impl TryFrom<[[C64; 2]; 2]> for Mat2 {
    type Error = Error;

    fn try_from(entries: [[C64; 2]; 2]) -> Result<Self> {
        Mat2::new(entries)
    }
}

impl From<Mat2> for [[C64; 2]; 2] {
    fn from(m: Mat2) -> Self {
        m.0
    }
}

impl Mat2 {
    pub fn new(entries: [[C64; 2]; 2]) -> Result<Self> {
        let m = Mat2(entries);
        if m.is_finite() {
            Ok(m)
        } else {
            Err(Error::NotFinite)
        }
    }

    pub fn from_real(entries: [[f64; 2]; 2]) -> Result<Self> {
        Mat2::new(entries.map(|row| row.map(|x| C64::new(x, 0.0))))
    }

    pub const fn zero() -> Self {
        Mat2([[ZERO, ZERO], [ZERO, ZERO]])
    }

    pub const fn identity() -> Self {
        Mat2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn diag(a: C64, d: C64) -> Self {
        Mat2([[a, ZERO], [ZERO, d]])
    }

    pub fn real_diag(a: f64, d: f64) -> Self {
        Mat2::diag(C64::new(a, 0.0), C64::new(d, 0.0))
    }

    /// The projection `|e_i><e_i|`, `i ∈ {0, 1}`.
    pub fn projection(i: usize) -> Self {
        let mut m = Mat2::zero();
        m.0[i][i] = ONE;
        m
    }

    /// Rank-one projection `|v><v| / <v|v>`.
    pub fn outer(v: [C64; 2]) -> Self {
        let norm2 = v[0].norm_sqr() + v[1].norm_sqr();
        let mut m = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] = v[i] * v[j].conj() / norm2;
            }
        }
        m
    }

    pub fn entries(&self) -> &[[C64; 2]; 2] {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[i][j]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn scale(&self, s: C64) -> Self {
        Mat2(self.0.map(|row| row.map(|z| z * s)))
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Mat2(self.0.map(|row| row.map(|z| z * s)))
    }

    /// Entrywise max-norm.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `(A + A*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale_re(0.5)
    }

    /// `A X A*`.
    pub fn sandwich(&self, x: &Mat2) -> Self {
        *self * *x * self.adjoint()
    }

    /// Hilbert–Schmidt inner product `Tr(A* B)`.
    pub fn hs_inner(&self, other: &Mat2) -> C64 {
        (self.adjoint() * *other).trace()
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> [f64; 2] {
        let h = self.hermitian_part();
        let a = h.0[0][0].re;
        let d = h.0[1][1].re;
        let b = h.0[0][1].norm();
        let mean = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        [mean - radius, mean + radius]
    }

    /// Unit eigenvector of the Hermitian part for its larger eigenvalue.
    pub fn hermitian_top_eigenvector(&self) -> [C64; 2] {
        let h = self.hermitian_part();
        let [_, top] = self.hermitian_eigenvalues();
        let a = h.0[0][0].re;
        let d = h.0[1][1].re;
        let b = h.0[0][1];
        // (H - top) v = 0; pick the better conditioned row.
        let v = if (a - top).abs() >= (d - top).abs() {
            [b, C64::new(top - a, 0.0)]
        } else {
            [C64::new(top - d, 0.0), b.conj()]
        };
        let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        if norm == 0.0 {
            return [ONE, ZERO];
        }
        [v[0] / norm, v[1] / norm]
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = *self;
        let mut acc = Mat2::identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }

    pub fn commutator(&self, other: &Mat2) -> Self {
        *self * *other - *other * *self
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + (-rhs)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        Mat2(self.0.map(|row| row.map(|z| -z)))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

/// A validated pair of Kraus operators: `B` moves the walker left, `C` right.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawKrausPair", into = "RawKrausPair")]
pub struct KrausPair {
    b: Mat2,
    c: Mat2,
}

#[derive(Serialize, Deserialize)]
struct RawKrausPair {
    b: Mat2,
    c: Mat2,
}

impl TryFrom<RawKrausPair> for KrausPair {
    type Error = Error;
    fn try_from(raw: RawKrausPair) -> Result<Self> {
        validate_kraus_pair(raw.b, raw.c)
    }
}

impl From<KrausPair> for RawKrausPair {
    fn from(kp: KrausPair) -> Self {
        RawKrausPair { b: kp.b, c: kp.c }
    }
}

/// Checks `B*B + C*C = I` to within [`NORMALIZATION_TOL`].
pub fn validate_kraus_pair(b: Mat2, c: Mat2) -> Result<KrausPair> {
    if !b.is_finite() || !c.is_finite() {
        return Err(Error::NotFinite);
    }
    let deviation = normalization_defect(&b, &c);
    if deviation > NORMALIZATION_TOL {
        return Err(Error::Normalization { deviation });
    }
    Ok(KrausPair { b, c })
}

/// `|B*B + C*C - I|_max`.
pub fn normalization_defect(b: &Mat2, c: &Mat2) -> f64 {
    (b.adjoint() * *b + c.adjoint() * *c - Mat2::identity()).max_abs()
}

impl KrausPair {
    pub fn new(b: Mat2, c: Mat2) -> Result<Self> {
        validate_kraus_pair(b, c)
    }

    pub fn b(&self) -> &Mat2 {
        &self.b
    }

    pub fn c(&self) -> &Mat2 {
        &self.c
    }

    /// A Haar-like random pair: the columns of a random complex 4x2 matrix
    /// are orthonormalized, and the isometry `[B; C]` is split into blocks.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let mut cols = [[ZERO; 4]; 2];
            for col in cols.iter_mut() {
                for z in col.iter_mut() {
                    *z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                }
            }
            // Gram–Schmidt, applied twice for orthogonality at machine precision.
            let mut ok = true;
            for _ in 0..2 {
                for k in 0..2 {
                    for prev in 0..k {
                        let proj: C64 = (0..4).map(|i| cols[prev][i].conj() * cols[k][i]).sum();
                        for i in 0..4 {
                            let p = cols[prev][i];
                            cols[k][i] -= proj * p;
                        }
                    }
                    let norm = cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                    if norm < 1e-6 {
                        ok = false;
                    }
                    for z in cols[k].iter_mut() {
                        *z /= norm;
                    }
                }
            }
            if !ok {
                continue;
            }
            let b = Mat2([[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]]);
            let c = Mat2([[cols[0][2], cols[1][2]], [cols[0][3], cols[1][3]]]);
            if let Ok(kp) = validate_kraus_pair(b, c) {
                return kp;
            }
        }
    }

    /// `𝓛(X) = B X B* + C X C*` on an arbitrary matrix.
    pub fn channel(&self, x: &Mat2) -> Mat2 {
        self.b.sandwich(x) + self.c.sandwich(x)
    }

    /// `𝓛*(X) = B* X B + C* X C`.
    pub fn adjoint_channel(&self, x: &Mat2) -> Mat2 {
        self.b.adjoint().sandwich(x) + self.c.adjoint().sandwich(x)
    }
}

/// A validated density matrix: Hermitian, positive semidefinite, unit trace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Mat2", into = "Mat2")]
pub struct DensityMat(Mat2);

impl TryFrom<Mat2> for DensityMat {
    type Error = Error;
    fn try_from(m: Mat2) -> Result<Self> {
        DensityMat::new(m)
    }
}

impl From<DensityMat> for Mat2 {
    fn from(d: DensityMat) -> Self {
        d.0
    }
}

impl DensityMat {
    pub fn new(rho: Mat2) -> Result<Self> {
        if !rho.is_finite() {
            return Err(Error::NotFinite);
        }
        let deviation = (rho - rho.adjoint()).max_abs();
        if deviation > DENSITY_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = rho.trace();
        if (trace - ONE).norm() > DENSITY_TOL {
            return Err(Error::TraceNotOne { trace: trace.re });
        }
        let min_eigenvalue = rho.hermitian_eigenvalues()[0];
        if min_eigenvalue < -DENSITY_TOL {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(DensityMat(rho.hermitian_part()))
    }

    /// `diag(a, b)`; requires `a, b ≥ 0` and `a + b = 1`.
    pub fn diag(a: f64, b: f64) -> Result<Self> {
        DensityMat::new(Mat2::real_diag(a, b))
    }

    pub fn maximally_mixed() -> Self {
        DensityMat(Mat2::real_diag(0.5, 0.5))
    }

    /// Pure state `|v><v|` for a nonzero vector.
    pub fn pure(v: [C64; 2]) -> Result<Self> {
        DensityMat::new(Mat2::outer(v))
    }

    /// Hermitizes and trusts the caller for positivity and trace.
    pub(crate) fn from_trusted(m: Mat2) -> Self {
        DensityMat(m.hermitian_part())
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn diagonal(&self) -> (f64, f64) {
        (self.0 .0[0][0].re, self.0 .0[1][1].re)
    }
}

/// `BρB* + CρC*`.
pub fn apply_channel(kp: &KrausPair, rho: &DensityMat) -> DensityMat {
    DensityMat::from_trusted(kp.channel(rho.matrix()))
}

/// Column-stacking vectorization.
pub fn vectorize(a: &Mat2) -> [C64; 4] {
    let m = &a.0;
    [m[0][0], m[1][0], m[0][1], m[1][1]]
}

pub fn devectorize(v: &[C64; 4]) -> Mat2 {
    Mat2([[v[0], v[2]], [v[1], v[3]]])
}

/// A linear map on 2x2 matrices as a 4x4 matrix on [`vectorize`]d input.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Superoperator(pub(crate) [[C64; 4]; 4]);

impl Superoperator {
    pub fn zero() -> Self {
        Superoperator([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = [[ZERO; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = ONE;
        }
        Superoperator(m)
    }

    pub fn from_entries(m: [[C64; 4]; 4]) -> Self {
        Superoperator(m)
    }

    pub fn entries(&self) -> &[[C64; 4]; 4] {
        &self.0
    }

    /// `A ⊗ B` with `A`, `B` 2x2.
    fn kron(a: &Mat2, b: &Mat2) -> Self {
        let mut m = [[ZERO; 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        m[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                    }
                }
            }
        }
        Superoperator(m)
    }

    pub fn apply_vec(&self, v: &[C64; 4]) -> [C64; 4] {
        let mut out = [ZERO; 4];
        for (o, row) in out.iter_mut().zip(self.0.iter()) {
            *o = row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
        }
        out
    }

    pub fn apply(&self, a: &Mat2) -> Mat2 {
        devectorize(&self.apply_vec(&vectorize(a)))
    }

    pub fn adjoint(&self) -> Self {
        let mut m = [[ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = self.0[j][i].conj();
            }
        }
        Superoperator(m)
    }

    pub fn scale(&self, s: C64) -> Self {
        Superoperator(self.0.map(|row| row.map(|z| z * s)))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = *self;
        let mut acc = Superoperator::identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }

    pub fn to_nalgebra(&self) -> nalgebra::Matrix4<C64> {
        nalgebra::Matrix4::from_fn(|i, j| self.0[i][j])
    }
}

impl Add for Superoperator {
    type Output = Superoperator;
    fn add(self, rhs: Superoperator) -> Superoperator {
        let mut out = self;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }
}

impl Sub for Superoperator {
    type Output = Superoperator;
    fn sub(self, rhs: Superoperator) -> Superoperator {
        self + rhs.scale(-ONE)
    }
}

impl Mul for Superoperator {
    type Output = Superoperator;
    fn mul(self, rhs: Superoperator) -> Superoperator {
        let mut m = [[ZERO; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, out) in row.iter_mut().enumerate() {
                *out = (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        Superoperator(m)
    }
}

/// `L_B : A ↦ BA`.
pub fn left_mult(b: &Mat2) -> Superoperator {
    Superoperator::kron(&Mat2::identity(), b)
}

/// `R_B : A ↦ AB`.
pub fn right_mult(b: &Mat2) -> Superoperator {
    Superoperator::kron(&b.transpose(), &Mat2::identity())
}

/// The channel `𝓛 = L_B R_{B*} + L_C R_{C*}` in vectorized form.
pub fn channel_superoperator(kp: &KrausPair) -> Superoperator {
    left_mult(kp.b()) * right_mult(&kp.b().adjoint()) + left_mult(kp.c()) * right_mult(&kp.c().adjoint())
}
