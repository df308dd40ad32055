//! Direct iteration of the block-diagonal walk state on ℤ.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::qop::{DensityMat, KrausPair, Mat2};

/// Blocks whose trace falls below this are dropped after each step.
pub const PRUNE_TRACE: f64 = 1e-16;
/// Default cap on the number of stored sites in [`evolve`].
pub const DEFAULT_SITE_LIMIT: usize = 1 << 22;

/// `ρ⁽ⁿ⁾ = Σ_x ρ_x ⊗ |x⟩⟨x|` as a sparse map from site to unnormalized block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeState {
    blocks: BTreeMap<i64, Mat2>,
    step_count: u64,
}

impl LatticeState {
    pub fn blocks(&self) -> &BTreeMap<i64, Mat2> {
        &self.blocks
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    pub fn block(&self, site: i64) -> Mat2 {
        self.blocks.get(&site).copied().unwrap_or_else(Mat2::zero)
    }

    /// `Σ_x Tr ρ_x`.
    pub fn total_trace(&self) -> f64 {
        self.blocks.values().map(|m| m.trace().re).sum()
    }

    pub fn min_block_eigenvalue(&self) -> f64 {
        self.blocks
            .values()
            .map(|m| m.hermitian_eigenvalues()[0])
            .fold(f64::INFINITY, f64::min)
    }
}

/// `ρ₀ ⊗ |site⟩⟨site|`.
pub fn initial_state(rho0: &DensityMat, site: i64) -> LatticeState {
    LatticeState {
        blocks: BTreeMap::from([(site, *rho0.matrix())]),
        step_count: 0,
    }
}

/// One application of `ρ_x ← B ρ_{x+1} B* + C ρ_{x-1} C*`.
pub fn step(kp: &KrausPair, s: &LatticeState) -> LatticeState {
    let mut next: BTreeMap<i64, Mat2> = BTreeMap::new();
    for (&x, rho) in &s.blocks {
        let left = kp.b().sandwich(rho);
        let right = kp.c().sandwich(rho);
        let slot = next.entry(x - 1).or_insert_with(Mat2::zero);
        *slot = *slot + left;
        let slot = next.entry(x + 1).or_insert_with(Mat2::zero);
        *slot = *slot + right;
    }
    next.retain(|_, m| m.trace().re >= PRUNE_TRACE);
    LatticeState {
        blocks: next,
        step_count: s.step_count + 1,
    }
}

pub fn evolve(kp: &KrausPair, s0: &LatticeState, n: u64) -> Result<LatticeState> {
    evolve_with_limit(kp, s0, n, DEFAULT_SITE_LIMIT)
}

/// `n`-fold [`step`]; fails if the support would exceed `site_limit` sites.
pub fn evolve_with_limit(kp: &KrausPair, s0: &LatticeState, n: u64, site_limit: usize) -> Result<LatticeState> {
    let projected = s0.blocks.len() as u128 + 2 * n as u128;
    if projected > site_limit as u128 {
        return Err(Error::SiteLimit {
            sites: projected.min(usize::MAX as u128) as usize,
            limit: site_limit,
        });
    }
    let mut s = s0.clone();
    for _ in 0..n {
        s = step(kp, &s);
    }
    Ok(s)
}

/// `p_x = Tr ρ_x`.
pub fn distribution(s: &LatticeState) -> Result<Distribution> {
    Distribution::from_raw(s.blocks.iter().map(|(&x, m)| (x, m.trace().re)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;

    fn ex1(p: f64) -> KrausPair {
        KrausPair::new(Mat2::real_diag(1.0, p.sqrt()), Mat2::real_diag(0.0, (1.0 - p).sqrt())).unwrap()
    }

    fn ex5() -> KrausPair {
        let s = 1.0 / 3f64.sqrt();
        KrausPair::new(
            Mat2::from_real([[s, s], [0.0, s]]).unwrap(),
            Mat2::from_real([[s, 0.0], [-s, s]]).unwrap(),
        )
        .unwrap()
    }

    fn binomial(n: u64, k: u64) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    }

    #[test]
    fn initial_states() {
        let s = initial_state(&DensityMat::diag(0.5, 0.5).unwrap(), 0);
        assert_eq!(s.blocks().len(), 1);
        assert_eq!(s.step_count(), 0);
        let d = distribution(&s).unwrap();
        assert_eq!(d, Distribution::delta(0));
        let s = initial_state(&DensityMat::diag(1.0, 0.0).unwrap(), 3);
        assert_eq!(distribution(&s).unwrap(), Distribution::delta(3));
    }

    #[test]
    fn first_step_blocks() {
        let kp = ex5();
        let rho0 = DensityMat::pure([C64::new(0.6, 0.0), C64::new(0.0, 0.8)]).unwrap();
        let s = step(&kp, &initial_state(&rho0, 0));
        assert_eq!(s.blocks().len(), 2);
        assert!((s.block(-1) - kp.b().sandwich(rho0.matrix())).max_abs() < 1e-16);
        assert!((s.block(1) - kp.c().sandwich(rho0.matrix())).max_abs() < 1e-16);
    }

    #[test]
    fn deterministic_left_shift() {
        let kp = KrausPair::new(Mat2::identity(), Mat2::zero()).unwrap();
        let s = evolve(&kp, &initial_state(&DensityMat::maximally_mixed(), 0), 7).unwrap();
        assert_eq!(s.blocks().keys().copied().collect::<Vec<_>>(), vec![-7]);
        assert_eq!(s.step_count(), 7);
    }

    #[test]
    fn ex5_four_steps() {
        let s = evolve(&ex5(), &initial_state(&DensityMat::maximally_mixed(), 0), 4).unwrap();
        let d = distribution(&s).unwrap();
        for (x, p) in [(-4, 1.0), (-2, 2.0), (0, 3.0), (2, 2.0), (4, 1.0)] {
            assert!((d.get(x) - p / 9.0).abs() < 1e-12, "x={x}");
        }
        assert_eq!(d.len(), 5);
    }

    #[test]
    fn ex1_binomial() {
        let s = evolve(&ex1(0.5), &initial_state(&DensityMat::diag(0.0, 1.0).unwrap(), 0), 10).unwrap();
        let d = distribution(&s).unwrap();
        for l in 0..=10u64 {
            let x = 10 - 2 * l as i64;
            assert!((d.get(x) - binomial(10, l) / 1024.0).abs() < 1e-14);
        }
        assert!(d.mean().abs() < 1e-13);
        assert!((d.variance() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn zero_steps_and_semigroup() {
        let kp = ex5();
        let s0 = initial_state(&DensityMat::diag(0.3, 0.7).unwrap(), 0);
        assert_eq!(evolve(&kp, &s0, 0).unwrap(), s0);
        let direct = evolve(&kp, &s0, 9).unwrap();
        let split = evolve(&kp, &evolve(&kp, &s0, 4).unwrap(), 5).unwrap();
        assert_eq!(direct.step_count(), split.step_count());
        for (x, m) in direct.blocks() {
            assert!((*m - split.block(*x)).max_abs() < 1e-15);
        }
    }

    #[test]
    fn site_limit_guard() {
        let s0 = initial_state(&DensityMat::maximally_mixed(), 0);
        assert!(matches!(
            evolve_with_limit(&ex5(), &s0, 100, 50),
            Err(Error::SiteLimit { limit: 50, .. })
        ));
    }

    #[test]
    fn conservation_support_parity() {
        let kp = ex5();
        let mut s = initial_state(&DensityMat::diag(0.9, 0.1).unwrap(), 0);
        for n in 1..=200i64 {
            s = step(&kp, &s);
            assert!((s.total_trace() - 1.0).abs() <= n as f64 * 1e-14 + 1e-15);
            assert!(s.min_block_eigenvalue() >= -1e-10);
            for &x in s.blocks().keys() {
                assert!(x.abs() <= n && (x + n).rem_euclid(2) == 0);
            }
        }
    }

    #[test]
    fn sum_guard() {
        let mut s = initial_state(&DensityMat::maximally_mixed(), 0);
        s.blocks.insert(5, Mat2::real_diag(0.1, 0.0));
        assert!(matches!(distribution(&s), Err(Error::Sum { .. })));
    }
}
