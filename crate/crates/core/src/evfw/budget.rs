use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::Result;
use crate::model::EdgeId;
use crate::steiner::{SteinerHeuristic, StpInstance};

/// Wraps a heuristic and counts its invocations across threads.
#[derive(Debug, Default)]
pub struct CountingHeuristic<H> {
    inner: H,
    calls: AtomicU64,
}

impl<H> CountingHeuristic<H> {
    pub fn new(inner: H) -> Self {
        Self {
            inner,
            calls: AtomicU64::new(0),
        }
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }
}

impl<H: SteinerHeuristic> SteinerHeuristic for CountingHeuristic<H> {
    fn solve(&self, instance: &StpInstance<'_>) -> Result<Vec<EdgeId>> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.solve(instance)
    }
}

/// Heuristic calls spent per phase of a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CallCounts {
    pub buy_none: u64,
    pub local_search: u64,
    pub second_stage: u64,
    pub tail: u64,
}

impl CallCounts {
    pub fn total(&self) -> u64 {
        self.buy_none + self.local_search + self.second_stage + self.tail
    }

    /// Upper bounds on the phase counts after `iterations` iterations:
    /// `n|S|(1 + 2|E|)` for the local search, `n|S|pg` for the second stage
    /// and `|S|ptg` for the tail.
    pub fn bounds(
        iterations: u64,
        scenarios: u64,
        edges: u64,
        population: u64,
        generations: u64,
        tail_factor: u64,
    ) -> (u64, u64, u64) {
        (
            iterations * scenarios * (1 + 2 * edges),
            iterations * scenarios * population * generations,
            scenarios * population * tail_factor * generations,
        )
    }
}
