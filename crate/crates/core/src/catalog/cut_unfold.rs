//! Example 5 distribution by cutting and unfolding Kraus words.
//!
//! Expanding `Y_n(k)` gives one term per word in `{B, C}ⁿ`, of the form
//! `…C*^{l₁} B*^{r₁} B^{r₁} C^{l₁}…`. The innermost factor is rewritten with
//! `X*ʳXʳ = ((r²+2)/3ʳ) I - X̄*ʳX̄ʳ` (`X̄` the other operator): the first
//! term *cuts* the run with weight `(r²+2)/3ʳ`, the second *unfolds* it into
//! the next run with weight `-1`. Repeating until one run remains leaves
//! weighted traces `Tr(ρ₀ X*ˡ Xˡ)`, which are explicit.

use std::collections::BTreeMap;

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::qop::DensityMat;

/// Exponential enumeration is capped at this many steps.
pub const MAX_CUT_UNFOLD_STEPS: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    /// A `B` factor; one site down.
    Left,
    /// A `C` factor; one site up.
    Right,
}

impl Move {
    fn other(self) -> Move {
        match self {
            Move::Left => Move::Right,
            Move::Right => Move::Left,
        }
    }
}

/// Alternating run lengths of one Kraus word, innermost run first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutUnfoldSeq {
    /// Kind of the innermost run.
    pub first: Move,
    /// Nonzero run lengths; kinds alternate starting from `first`.
    pub runs: Vec<u32>,
}

/// `(l² + 2) / 3ˡ`.
fn cut_weight(len: u32) -> f64 {
    (len as f64 * len as f64 + 2.0) / 3f64.powi(len as i32)
}

/// `Tr(ρ₀ X*ˡ Xˡ)` for diagonal `ρ₀ = diag(a, b)`.
fn terminal_trace(kind: Move, len: u32, a: f64, b: f64) -> f64 {
    let big = len as f64 * len as f64 + 1.0;
    let scale = 3f64.powi(len as i32);
    match kind {
        Move::Left => (a + b * big) / scale,
        Move::Right => (a * big + b) / scale,
    }
}

impl CutUnfoldSeq {
    /// Run decomposition of the word whose `i`-th innermost letter is `C` iff bit `i` of `mask` is set.
    pub fn from_word(mask: u64, n: usize) -> Option<Self> {
        if n == 0 {
            return None;
        }
        let letter = |i: usize| if mask >> i & 1 == 1 { Move::Right } else { Move::Left };
        let first = letter(0);
        let mut runs = vec![1u32];
        for i in 1..n {
            if letter(i) == letter(i - 1) {
                *runs.last_mut().expect("nonempty") += 1;
            } else {
                runs.push(1);
            }
        }
        Some(CutUnfoldSeq { first, runs })
    }

    /// Every word of length `n ≥ 1`, in run form.
    pub fn enumerate(n: usize) -> Vec<Self> {
        (0..1u64 << n).filter_map(|mask| CutUnfoldSeq::from_word(mask, n)).collect()
    }

    pub fn kind(&self, index: usize) -> Move {
        if index.is_multiple_of(2) {
            self.first
        } else {
            self.first.other()
        }
    }

    /// `#C - #B`.
    pub fn displacement(&self) -> i64 {
        self.runs
            .iter()
            .enumerate()
            .map(|(i, &len)| match self.kind(i) {
                Move::Right => len as i64,
                Move::Left => -(len as i64),
            })
            .sum()
    }

    /// Terminal single runs `(kind, length) → accumulated weight` after all
    /// cutting/unfolding choices. Choices reaching the same pending length are merged.
    pub fn reduce(&self) -> (Move, BTreeMap<u32, f64>) {
        let mut pending = BTreeMap::from([(self.runs[0], 1.0)]);
        for &next in &self.runs[1..] {
            let mut merged = BTreeMap::new();
            for (&len, &w) in &pending {
                *merged.entry(next).or_insert(0.0) += w * cut_weight(len);
                *merged.entry(next + len).or_insert(0.0) -= w;
            }
            pending = merged;
        }
        (self.kind(self.runs.len() - 1), pending)
    }

    /// This word's contribution `Tr(ρ₀ K_w* K_w)`, via [`CutUnfoldSeq::reduce`].
    pub fn contribution(&self, a: f64, b: f64) -> f64 {
        let (kind, terminal) = self.reduce();
        terminal.iter().map(|(&len, &w)| w * terminal_trace(kind, len, a, b)).sum()
    }
}

/// Example 5 law at step `n ≤ 14` with `ρ₀ = diag(a, b)`, by cutting and unfolding.
pub fn cut_unfold_distribution(rho0_diag: (f64, f64), n: usize) -> Result<Distribution> {
    if n > MAX_CUT_UNFOLD_STEPS {
        return Err(Error::Size { n, max: MAX_CUT_UNFOLD_STEPS });
    }
    let (a, b) = rho0_diag;
    DensityMat::diag(a, b)?;
    if n == 0 {
        return Ok(Distribution::delta(0));
    }
    let mut probs: BTreeMap<i64, f64> = BTreeMap::new();
    for seq in CutUnfoldSeq::enumerate(n) {
        *probs.entry(seq.displacement()).or_insert(0.0) += seq.contribution(a, b);
    }
    Distribution::from_raw(probs)
}
