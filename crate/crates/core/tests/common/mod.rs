//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use oqrw_core::{DensityMat, KrausPair};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type M = [[C64; 2]; 2];

fn mul(a: &M, b: &M) -> M {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn adj(a: &M) -> M {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

/// `p_x = Σ_w Tr(K_w ρ₀ K_w*)` over all `2ⁿ` Kraus words, by depth-first search on prefixes.
pub fn brute_force(kp: &KrausPair, rho0: &DensityMat, n: u32) -> BTreeMap<i64, f64> {
    fn walk(ops: &[(M, i64); 2], rho: M, x: i64, left: u32, out: &mut BTreeMap<i64, f64>) {
        if left == 0 {
            *out.entry(x).or_insert(0.0) += (rho[0][0] + rho[1][1]).re;
            return;
        }
        for (op, dx) in ops {
            let next = mul(&mul(op, &rho), &adj(op));
            walk(ops, next, x + dx, left - 1, out);
        }
    }
    let ops = [(*kp.b().entries(), -1), (*kp.c().entries(), 1)];
    let mut out = BTreeMap::new();
    walk(&ops, *rho0.matrix().entries(), 0, n, &mut out);
    out
}

/// Seeded random pairs, one ChaCha8 stream per batch.
pub fn random_pairs(seed: u64, count: usize) -> Vec<KrausPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| KrausPair::random(&mut rng)).collect()
}

/// A random density matrix `AA*/Tr(AA*)`.
pub fn random_state(seed: u64) -> DensityMat {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = [[C64::new(0.0, 0.0); 2]; 2];
    for row in a.iter_mut() {
        for z in row.iter_mut() {
            *z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    let mut rho = mul(&a, &adj(&a));
    let tr = (rho[0][0] + rho[1][1]).re;
    for row in rho.iter_mut() {
        for z in row.iter_mut() {
            *z /= tr;
        }
    }
    DensityMat::new(oqrw_core::Mat2::new(rho).unwrap()).unwrap()
}

pub fn max_abs_diff(a: &BTreeMap<i64, f64>, b: &oqrw_core::Distribution) -> f64 {
    let mut worst: f64 = 0.0;
    for (&x, &p) in a {
        worst = worst.max((p - b.get(x)).abs());
    }
    for (x, p) in b.iter() {
        worst = worst.max((p - a.get(&x).copied().unwrap_or(0.0)).abs());
    }
    worst
}
