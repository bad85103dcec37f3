use std::collections::BTreeMap;

use crate::{Error, Result};

/// Observed counts of a discrete sample: a map from symbol id to a positive
/// count, plus the total sample size `n`.
///
/// Every estimator in this crate is a function of the multiset of counts
/// alone; symbol ids exist only so callers can build histograms incrementally
/// and reconcile them with external data. Iteration order is the sorted id
/// order, which keeps downstream routines deterministic.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Histogram {
    counts: BTreeMap<u64, u64>,
    n: u64,
}

impl Histogram {
    /// Builds a histogram from `(symbol, count)` pairs. Counts for a repeated
    /// symbol are summed; zero counts are dropped. Fails only if the total
    /// count overflows `u64`.
    pub fn from_counts<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        let mut n: u64 = 0;
        for (symbol, count) in pairs {
            if count == 0 {
                continue;
            }
            n = n
                .checked_add(count)
                .ok_or_else(|| Error::InvalidInput("total count overflows u64".into()))?;
            *counts.entry(symbol).or_insert(0) += count;
        }
        Ok(Histogram { counts, n })
    }

    /// Tallies a slice of observed symbols.
    pub fn from_samples(samples: &[u64]) -> Self {
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        for &s in samples {
            *counts.entry(s).or_insert(0) += 1;
        }
        Histogram {
            counts,
            n: samples.len() as u64,
        }
    }

    /// Total number of observations.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Number of distinct observed symbols.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    /// Iterates `(symbol, count)` in increasing symbol order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&s, &c)| (s, c))
    }

    /// Iterates the counts in increasing symbol order.
    pub fn counts(&self) -> impl Iterator<Item = u64> + '_ {
        self.counts.values().copied()
    }

    /// Count of one symbol (zero if unobserved).
    pub fn count_of(&self, symbol: u64) -> u64 {
        self.counts.get(&symbol).copied().unwrap_or(0)
    }

    /// Number of symbols observed exactly once.
    pub fn singletons(&self) -> u64 {
        self.counts.values().filter(|&&c| c == 1).count() as u64
    }

    /// The count multiset in decreasing order. This is the canonical form the
    /// estimators actually depend on.
    pub fn sorted_counts_desc(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.counts.values().copied().collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}
