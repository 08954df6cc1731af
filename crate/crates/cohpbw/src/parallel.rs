//! Rayon execution of the noise ensemble.
//!
//! Batches run in parallel but are collected in batch order before the
//! reduction, so results match [`cohpbw_core::noise::run_noise_ensemble`]
//! bit for bit whatever the thread count.

use rayon::prelude::*;

use cohpbw_core::noise::{AnticorrelationProbe, Ensemble, BATCH_TRIALS};
use cohpbw_core::{ChainConfig, NoiseConfig, NoisyTrace, Result};

/// Parallel counterpart of [`cohpbw_core::noise::run_noise_ensemble`].
pub fn run_noise_ensemble(
    chain: &ChainConfig,
    noise: &NoiseConfig,
    samples: usize,
    window: f64,
) -> Result<NoisyTrace> {
    let ensemble = Ensemble::new(*chain, *noise, samples, window)?;
    let batches: Vec<_> = (0..ensemble.batch_count())
        .into_par_iter()
        .map(|b| ensemble.run_batch(b))
        .collect();
    Ok(ensemble.finish(batches))
}

/// Parallel counterpart of [`AnticorrelationProbe::error_rate`].
pub fn error_rate(probe: &AnticorrelationProbe, trials: u64) -> f64 {
    let errors: u64 = (0..trials.div_ceil(BATCH_TRIALS))
        .into_par_iter()
        .map(|b| {
            let start = b * BATCH_TRIALS;
            probe.count_errors(start..(start + BATCH_TRIALS).min(trials))
        })
        .sum();
    errors as f64 / trials as f64
}

/// Runs `f` on a dedicated pool with `threads` workers, or on the global pool for `None`.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cohpbw_core::noise::{self, JitterMode, DEFAULT_DARK_THRESHOLD};
    use std::f64::consts::TAU;

    #[test]
    fn matches_sequential_for_any_thread_count() {
        let chain = ChainConfig::lossless(2).unwrap();
        let cfg = NoiseConfig::new(0.3, 500, 11, JitterMode::IndependentPerShifter).unwrap();
        let reference = noise::run_noise_ensemble(&chain, &cfg, 128, TAU).unwrap();
        for threads in [1, 2, 3, 8] {
            let par = with_threads(Some(threads), || run_noise_ensemble(&chain, &cfg, 128, TAU).unwrap());
            assert_eq!(par, reference, "{threads} threads");
        }
    }

    #[test]
    fn error_rate_matches_sequential() {
        let chain = ChainConfig::lossless(1).unwrap();
        let cfg = NoiseConfig::new(0.2, 1000, 3, JitterMode::CorrelatedPerBlock).unwrap();
        let probe = AnticorrelationProbe::new(chain, cfg, 0.0, DEFAULT_DARK_THRESHOLD).unwrap();
        assert_eq!(error_rate(&probe, 1000), probe.error_rate());
    }
}
