use std::collections::BTreeMap;
use std::f64::consts::LN_2;

use serde::Serialize;

use crate::error::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-12;
const PINSKER_SLACK: f64 = 1e-12;

/// A probability distribution with finite support.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteDistribution<T: Ord> {
    support: BTreeMap<T, f64>,
}

impl<T: Ord + Clone> FiniteDistribution<T> {
    /// Rejects negative or non-finite masses, repeated outcomes and totals
    /// off from 1 by more than 1e-12.
    pub fn new(pairs: impl IntoIterator<Item = (T, f64)>) -> Result<Self> {
        let mut support = BTreeMap::new();
        let mut total = 0.0;
        for (x, p) in pairs {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidDistribution(format!("probability {p}")));
            }
            total += p;
            if support.insert(x, p).is_some() {
                return Err(Error::InvalidDistribution("repeated outcome".into()));
            }
        }
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("total mass {total}")));
        }
        Ok(FiniteDistribution { support })
    }

    /// Normalises non-negative weights.
    pub fn from_weights(pairs: impl IntoIterator<Item = (T, f64)>) -> Result<Self> {
        let pairs: Vec<(T, f64)> = pairs.into_iter().collect();
        let total: f64 = pairs.iter().map(|(_, w)| w).sum();
        if !total.is_finite() || total <= 0.0 {
            return Err(Error::InvalidDistribution(format!("total weight {total}")));
        }
        if pairs.iter().any(|&(_, w)| w < 0.0) {
            return Err(Error::InvalidDistribution("negative weight".into()));
        }
        FiniteDistribution::new(pairs.into_iter().map(|(x, w)| (x, w / total)))
    }

    pub fn prob(&self, x: &T) -> f64 {
        self.support.get(x).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, f64)> {
        self.support.iter().map(|(x, &p)| (x, p))
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }
}

impl FiniteDistribution<usize> {
    /// Distribution over indices `0..probs.len()`.
    pub fn from_probs(probs: &[f64]) -> Result<Self> {
        FiniteDistribution::new(probs.iter().copied().enumerate())
    }
}

/// Shannon entropy in bits.
pub fn entropy<T: Ord + Clone>(p: &FiniteDistribution<T>) -> f64 {
    entropy_of(p.iter().map(|(_, q)| q))
}

/// Entropy in bits of the normalised weights.
pub(crate) fn entropy_of(weights: impl IntoIterator<Item = f64>) -> f64 {
    let w: Vec<f64> = weights.into_iter().filter(|&x| x > 0.0).collect();
    let total: f64 = w.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    w.iter()
        .map(|&x| {
            let p = x / total;
            -p * p.log2()
        })
        .sum()
}

fn union_support<'a, T: Ord + Clone>(
    p: &'a FiniteDistribution<T>,
    q: &'a FiniteDistribution<T>,
) -> impl Iterator<Item = (f64, f64)> + 'a {
    let mut keys: Vec<&T> = p.support.keys().chain(q.support.keys()).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter().map(move |x| (p.prob(x), q.prob(x)))
}

/// ½ Σ |p(x) − q(x)|.
pub fn tv_distance<T: Ord + Clone>(p: &FiniteDistribution<T>, q: &FiniteDistribution<T>) -> f64 {
    0.5 * union_support(p, q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Σ p(x) log₂(p(x)/q(x)); `+∞` when p puts mass where q has none.
pub fn kl_divergence<T: Ord + Clone>(p: &FiniteDistribution<T>, q: &FiniteDistribution<T>) -> f64 {
    let mut total = 0.0;
    for (a, b) in union_support(p, q) {
        if a == 0.0 {
            continue;
        }
        if b == 0.0 {
            return f64::INFINITY;
        }
        total += a * (a / b).log2();
    }
    total.max(0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PinskerCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// TV against `sqrt((ln 2 / 2) · KL)`, KL in bits.
pub fn pinsker_check<T: Ord + Clone>(p: &FiniteDistribution<T>, q: &FiniteDistribution<T>) -> PinskerCheck {
    let lhs = tv_distance(p, q);
    let rhs = (LN_2 / 2.0 * kl_divergence(p, q)).sqrt();
    PinskerCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + PINSKER_SLACK,
    }
}
