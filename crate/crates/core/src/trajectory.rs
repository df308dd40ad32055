//! Monte Carlo sampling of the quantum trajectory chain `(ρ_n, X_n)`.
//!
//! From `(ρ, x)` the chain jumps to `(BρB*/p_B, x - 1)` with probability
//! `p_B = Tr(BρB*)` and otherwise to `(CρC*/p_C, x + 1)`. The law of `X_n`
//! coincides with the walk distribution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::qop::{DensityMat, KrausPair};

/// Branch probabilities below this are treated as exactly zero.
pub const DEGENERATE_BRANCH: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryState {
    pub rho: DensityMat,
    pub x: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub n_steps: u64,
    pub n_traj: u64,
    pub seed: u64,
    pub mean: f64,
    pub variance: f64,
    pub empirical: Distribution,
}

/// `(p_B, p_C)` for the internal state `rho`.
pub fn branch_probabilities(kp: &KrausPair, rho: &DensityMat) -> (f64, f64) {
    let p_b = kp.b().sandwich(rho.matrix()).trace().re;
    let p_c = kp.c().sandwich(rho.matrix()).trace().re;
    (p_b, p_c)
}

/// One jump driven by the uniform variate `u ∈ [0, 1)`.
pub fn trajectory_step(kp: &KrausPair, s: &TrajectoryState, u: f64) -> Result<TrajectoryState> {
    let (p_b, p_c) = branch_probabilities(kp, &s.rho);
    let b_open = p_b >= DEGENERATE_BRANCH;
    let c_open = p_c >= DEGENERATE_BRANCH;
    let take_b = match (b_open, c_open) {
        (false, false) => return Err(Error::DegenerateJump { p_b, p_c }),
        (true, false) => true,
        (false, true) => false,
        (true, true) => u < p_b,
    };
    let (op, p, dx) = if take_b { (kp.b(), p_b, -1) } else { (kp.c(), p_c, 1) };
    let rho = op.sandwich(s.rho.matrix()).scale_re(1.0 / p);
    Ok(TrajectoryState {
        rho: DensityMat::from_trusted(rho),
        x: s.x + dx,
    })
}

/// The generator for trajectory `index`: ChaCha8 keyed by `seed`, stream `index`.
pub fn trajectory_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Final position of one trajectory of `n_steps` jumps.
pub fn run_trajectory(kp: &KrausPair, rho0: &DensityMat, n_steps: u64, rng: &mut ChaCha8Rng) -> Result<i64> {
    let mut s = TrajectoryState { rho: *rho0, x: 0 };
    for _ in 0..n_steps {
        let u: f64 = rng.gen();
        s = trajectory_step(kp, &s, u)?;
    }
    Ok(s.x)
}

/// Samples `n_traj` independent trajectories. The report depends only on the
/// arguments, not on the number of worker threads.
pub fn sample(kp: &KrausPair, rho0: &DensityMat, n_steps: u64, n_traj: u64, seed: u64) -> Result<SampleReport> {
    if n_traj == 0 {
        return Err(Error::Parse("n_traj must be at least 1".into()));
    }
    let endpoints: Vec<i64> = (0..n_traj)
        .into_par_iter()
        .map(|i| run_trajectory(kp, rho0, n_steps, &mut trajectory_rng(seed, i)))
        .collect::<Result<_>>()?;

    let offset = n_steps as i64;
    let mut counts = vec![0u64; 2 * n_steps as usize + 1];
    for x in endpoints {
        counts[(x + offset) as usize] += 1;
    }
    let total = n_traj as f64;
    let raw = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| (i as i64 - offset, c as f64 / total));
    let empirical = Distribution::from_raw(raw)?;
    Ok(SampleReport {
        n_steps,
        n_traj,
        seed,
        mean: empirical.mean(),
        variance: empirical.variance(),
        empirical,
    })
}
