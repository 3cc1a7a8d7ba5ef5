//! Counter sinks for search instrumentation.
//!
//! Search loops count locally and flush into a [`CounterSink`] in batches,
//! so a sink shared across worker threads sees one atomic add per batch.

use std::sync::atomic::{AtomicU64, Ordering};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tick {
    /// One candidate divisor tested by trial division.
    TrialDivision,
    /// One innermost candidate `u` visited.
    InnerIteration,
    /// A candidate rejected by the residue filter.
    FilterReject,
    /// One evaluation of a candidate polynomial during root isolation.
    PolyEval,
    /// One block value produced by multipoint evaluation.
    BlockEval,
}

pub trait CounterSink: Sync {
    fn add(&self, tick: Tick, count: u64);

    /// Reports a high-water mark of working memory in bytes.
    fn peak_bytes(&self, _bytes: u64) {}
}

/// Atomic counters for every [`Tick`] kind plus a peak-memory gauge.
#[derive(Debug, Default)]
pub struct Counters {
    pub trial_divisions: AtomicU64,
    pub inner_iterations: AtomicU64,
    pub filter_rejects: AtomicU64,
    pub poly_evals: AtomicU64,
    pub block_evals: AtomicU64,
    pub peak_bytes: AtomicU64,
}

impl Counters {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, tick: Tick) -> u64 {
        self.slot(tick).load(Ordering::Relaxed)
    }

    pub fn peak(&self) -> u64 {
        self.peak_bytes.load(Ordering::Relaxed)
    }

    fn slot(&self, tick: Tick) -> &AtomicU64 {
        match tick {
            Tick::TrialDivision => &self.trial_divisions,
            Tick::InnerIteration => &self.inner_iterations,
            Tick::FilterReject => &self.filter_rejects,
            Tick::PolyEval => &self.poly_evals,
            Tick::BlockEval => &self.block_evals,
        }
    }
}

impl CounterSink for Counters {
    fn add(&self, tick: Tick, count: u64) {
        if count > 0 {
            self.slot(tick).fetch_add(count, Ordering::Relaxed);
        }
    }

    fn peak_bytes(&self, bytes: u64) {
        self.peak_bytes.fetch_max(bytes, Ordering::Relaxed);
    }
}

/// Per-worker tallies, flushed into a sink once a unit of work completes.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct LocalTally {
    pub trial: u64,
    pub inner: u64,
    pub rejects: u64,
    pub evals: u64,
}

impl LocalTally {
    pub fn flush(&mut self, sink: Option<&dyn CounterSink>) {
        if let Some(s) = sink {
            s.add(Tick::TrialDivision, self.trial);
            s.add(Tick::InnerIteration, self.inner);
            s.add(Tick::FilterReject, self.rejects);
            s.add(Tick::PolyEval, self.evals);
        }
        *self = LocalTally::default();
    }
}
