//! Parallel execution of Monte Carlo runs on a rayon pool.
//!
//! Every run owns its random streams, so results are collected in run order
//! and are identical for any thread count.

use rayon::prelude::*;
use threatfuse_core::sim::{sweep_with, Experiment, SweepKind, SweepTable, TrialConfig, TrialRecord};
use threatfuse_core::SimError;

use crate::error::{Error, Result};

pub struct Runner {
    pool: rayon::ThreadPool,
}

impl Runner {
    /// A pool with `threads` workers, or one per available core.
    pub fn new(threads: Option<usize>) -> Result<Self> {
        if threads == Some(0) {
            return Err(Error::Usage("--threads must be at least 1".into()));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.unwrap_or(0))
            .build()
            .map_err(|e| Error::Usage(format!("cannot start thread pool: {e}")))?;
        Ok(Self { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    pub fn run(&self, config: &TrialConfig) -> Result<Vec<TrialRecord>> {
        Ok(self.run_sim(config)?)
    }

    /// On failure the error of the lowest failing run is reported.
    fn run_sim(&self, config: &TrialConfig) -> Result<Vec<TrialRecord>, SimError> {
        let experiment = Experiment::new(config.clone())?;
        let results: Vec<_> = self
            .pool
            .install(|| (0..experiment.runs()).into_par_iter().map(|i| experiment.run(i)).collect());
        results.into_iter().collect()
    }

    pub fn sweep(&self, kind: SweepKind, base: &TrialConfig, grid: &[f64]) -> Result<SweepTable> {
        Ok(sweep_with(kind, base, grid, |cfg| self.run_sim(cfg))?)
    }
}
