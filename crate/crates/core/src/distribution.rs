//! Finite probability distributions on the integer lattice.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Allowed deviation of the total mass from 1 before [`Error::Sum`] is raised.
pub const SUM_TOL: f64 = 1e-8;
/// Raw values below `-NEGATIVE_TOL` are rejected; values in `[-NEGATIVE_TOL, 0)` are clipped.
pub const NEGATIVE_TOL: f64 = 1e-10;

/// Site probabilities `p_x`, ordered by site.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Distribution {
    probs: BTreeMap<i64, f64>,
}

impl Distribution {
    /// Validates raw site masses: clips small negative values and checks the total.
    /// No renormalization is applied.
    pub fn from_raw<I: IntoIterator<Item = (i64, f64)>>(raw: I) -> Result<Self> {
        let mut probs = BTreeMap::new();
        for (site, value) in raw {
            if !value.is_finite() {
                return Err(Error::NotFinite);
            }
            if value < -NEGATIVE_TOL {
                return Err(Error::NegativeMass { site, value });
            }
            *probs.entry(site).or_insert(0.0) += value.max(0.0);
        }
        let d = Distribution { probs };
        let total = d.total();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::Sum { total });
        }
        Ok(d)
    }

    /// Point mass at `site`.
    pub fn delta(site: i64) -> Self {
        Distribution { probs: BTreeMap::from([(site, 1.0)]) }
    }

    pub fn get(&self, site: i64) -> f64 {
        self.probs.get(&site).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.probs.iter().map(|(&x, &p)| (x, p))
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    /// `Σ x^order p_x`.
    pub fn moment(&self, order: u32) -> f64 {
        self.iter().map(|(x, p)| (x as f64).powi(order as i32) * p).sum()
    }

    pub fn mean(&self) -> f64 {
        self.moment(1)
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.iter().map(|(x, p)| (x as f64 - mean).powi(2) * p).sum()
    }

    /// `E[exp(i t (X - center) / scale)]`.
    pub fn characteristic(&self, t: f64, center: f64, scale: f64) -> C64 {
        self.iter()
            .map(|(x, p)| C64::from_polar(p, t * (x as f64 - center) / scale))
            .sum()
    }

    /// Total mass on sites with `pred(x)`.
    pub fn mass_where<F: Fn(i64) -> bool>(&self, pred: F) -> f64 {
        self.iter().filter(|&(x, _)| pred(x)).map(|(_, p)| p).sum()
    }

    /// CSV with header `x,p`, sorted by site, shortest round-trip floats.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,p\n");
        for (x, p) in self.iter() {
            writeln!(out, "{x},{p:?}").expect("writing to a String cannot fail");
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        match lines.next() {
            Some(h) if h.trim() == "x,p" => {}
            other => return Err(Error::Parse(format!("expected header `x,p`, found {other:?}"))),
        }
        let mut raw = Vec::new();
        for line in lines {
            let (x, p) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("malformed row `{line}`")))?;
            let x: i64 = x.trim().parse().map_err(|e| Error::Parse(format!("site `{x}`: {e}")))?;
            let p: f64 = p.trim().parse().map_err(|e| Error::Parse(format!("probability `{p}`: {e}")))?;
            raw.push((x, p));
        }
        Distribution::from_raw(raw)
    }
}

/// Discrepancy between two distributions over the union of their supports.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub max_abs: f64,
    pub tv_distance: f64,
}

pub fn compare(a: &Distribution, b: &Distribution) -> Comparison {
    let mut sites: Vec<i64> = a.probs.keys().chain(b.probs.keys()).copied().collect();
    sites.sort_unstable();
    sites.dedup();
    let mut max_abs = 0.0f64;
    let mut l1 = 0.0;
    for x in sites {
        let d = (a.get(x) - b.get(x)).abs();
        max_abs = max_abs.max(d);
        l1 += d;
    }
    Comparison { max_abs, tv_distance: 0.5 * l1 }
}
