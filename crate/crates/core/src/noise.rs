//! Seeded Monte Carlo ensembles of phase jitter on the chain's shifters.
//!
//! Each trial draws one static Gaussian offset per shifter (or one per block
//! when both shifters of a block are driven together), sweeps the whole phase
//! window with those offsets, and contributes its intensities and normalized
//! correlation to running means.
//!
//! Trial `t` draws from ChaCha8 seeded with `seed` on stream `t`, so every
//! trial is reproducible on its own. Trials are grouped into fixed batches of
//! [`BATCH_TRIALS`]; batches are reduced with Welford/Chan updates and merged
//! in batch order. Any executor that runs [`Ensemble::run_batch`] for every
//! batch and hands the results to [`Ensemble::finish`] in order gets
//! bit-identical output.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::Range;

// Unused whenever another crate in the build links std.
#[allow(unused_imports)]
use num_traits::Float;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::analysis::{
    chain_intensities, check_trace_request, correlate, phase_grid, visibility, CorrelationTrace,
    TraceSource, GRID_TOLERANCE,
};
use crate::elements::{propagate_chain, ChainConfig};
use crate::error::{Error, Result};

/// Trials per reduction batch.
pub const BATCH_TRIALS: u64 = 64;

/// Default dark-port fraction above which a trial counts as "both lines active".
pub const DEFAULT_DARK_THRESHOLD: f64 = 0.01;

const Z95: f64 = 1.959_963_984_540_054;

/// How jitter is shared among phase shifters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum JitterMode {
    /// One offset per block, applied to both its `D` and `D'` shifters.
    #[default]
    CorrelatedPerBlock,
    /// An independent offset for every shifter.
    IndependentPerShifter,
}

/// Monte Carlo parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseConfig {
    /// Standard deviation of the phase offsets, radians.
    pub sigma: f64,
    /// Number of trials.
    pub trials: u64,
    /// Base seed.
    pub seed: u64,
    /// Sharing of offsets among shifters.
    pub mode: JitterMode,
}

impl NoiseConfig {
    /// Validated constructor.
    pub fn new(sigma: f64, trials: u64, seed: u64, mode: JitterMode) -> Result<Self> {
        let cfg = NoiseConfig {
            sigma,
            trials,
            seed,
            mode,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks the parameter domains.
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::validation("sigma", "must be finite and non-negative"));
        }
        if self.trials < 1 {
            return Err(Error::validation("trials", "need at least one trial"));
        }
        Ok(())
    }
}

/// Trial-averaged sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyTrace {
    /// Sample phases.
    pub phi: Vec<f64>,
    /// Mean upper-port intensity.
    pub mean_i_a: Vec<f64>,
    /// Mean lower-port intensity.
    pub mean_i_b: Vec<f64>,
    /// Mean normalized correlation.
    pub mean_g2: Vec<f64>,
    /// 95% normal-approximation half-width of `mean_g2`.
    pub ci95_g2: Vec<f64>,
    /// Fringe visibility of `mean_g2`.
    pub visibility: f64,
    /// Window length, radians.
    pub window: f64,
    /// Chain that was simulated.
    pub chain: ChainConfig,
    /// Noise model used.
    pub noise: NoiseConfig,
}

impl NoisyTrace {
    /// Delta-method 95% half-width of [`NoisyTrace::visibility`], from the
    /// confidence intervals at the maximum and minimum of `mean_g2`.
    pub fn visibility_ci95(&self) -> f64 {
        let (mut imax, mut imin) = (0, 0);
        for (k, &g) in self.mean_g2.iter().enumerate() {
            if g > self.mean_g2[imax] {
                imax = k;
            }
            if g < self.mean_g2[imin] {
                imin = k;
            }
        }
        let (hi, lo) = (self.mean_g2[imax], self.mean_g2[imin]);
        let sum = hi + lo;
        if sum <= 0.0 {
            return 0.0;
        }
        let d_hi = 2.0 * lo / (sum * sum) * self.ci95_g2[imax];
        let d_lo = 2.0 * hi / (sum * sum) * self.ci95_g2[imin];
        (d_hi * d_hi + d_lo * d_lo).sqrt()
    }

    /// The mean intensities and correlation as a plain trace.
    pub fn mean_trace(&self) -> Result<CorrelationTrace> {
        CorrelationTrace::from_columns(
            self.phi.clone(),
            self.mean_i_a.clone(),
            self.mean_i_b.clone(),
            self.mean_g2.clone(),
            TraceSource::Chain(self.chain),
        )
    }
}

/// Running moments of a group of trials.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    count: u64,
    mean_i_a: Vec<f64>,
    mean_i_b: Vec<f64>,
    mean_g2: Vec<f64>,
    m2_g2: Vec<f64>,
}

impl Moments {
    fn empty(samples: usize) -> Self {
        Moments {
            count: 0,
            mean_i_a: vec![0.0; samples],
            mean_i_b: vec![0.0; samples],
            mean_g2: vec![0.0; samples],
            m2_g2: vec![0.0; samples],
        }
    }

    /// Number of trials folded in.
    pub fn count(&self) -> u64 {
        self.count
    }

    fn push(&mut self, trial: &TrialTrace) {
        self.count += 1;
        let n = self.count as f64;
        for k in 0..self.mean_g2.len() {
            self.mean_i_a[k] += (trial.i_a[k] - self.mean_i_a[k]) / n;
            self.mean_i_b[k] += (trial.i_b[k] - self.mean_i_b[k]) / n;
            let delta = trial.g2[k] - self.mean_g2[k];
            self.mean_g2[k] += delta / n;
            self.m2_g2[k] += delta * (trial.g2[k] - self.mean_g2[k]);
        }
    }

    fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = other.clone();
            return;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        let weight = nb / n;
        for k in 0..self.mean_g2.len() {
            self.mean_i_a[k] += (other.mean_i_a[k] - self.mean_i_a[k]) * weight;
            self.mean_i_b[k] += (other.mean_i_b[k] - self.mean_i_b[k]) * weight;
            let delta = other.mean_g2[k] - self.mean_g2[k];
            self.mean_g2[k] += delta * weight;
            self.m2_g2[k] += other.m2_g2[k] + delta * delta * na * weight;
        }
        self.count += other.count;
    }
}

/// Intensities and correlation of a single trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialTrace {
    /// Upper-port intensity.
    pub i_a: Vec<f64>,
    /// Lower-port intensity.
    pub i_b: Vec<f64>,
    /// Normalized correlation over this trial's own window means.
    pub g2: Vec<f64>,
}

/// A configured ensemble, ready to run batch by batch.
#[derive(Debug, Clone)]
pub struct Ensemble {
    chain: ChainConfig,
    noise: NoiseConfig,
    phi: Vec<f64>,
    window: f64,
}

impl Ensemble {
    /// Validates the request; same sampling rules as [`crate::analysis::g2_trace`].
    pub fn new(chain: ChainConfig, noise: NoiseConfig, samples: usize, window: f64) -> Result<Self> {
        chain.validate()?;
        noise.validate()?;
        check_trace_request(&chain, samples, window)?;
        Ok(Ensemble {
            chain,
            noise,
            phi: phase_grid(samples, window),
            window,
        })
    }

    /// Number of batches covering all trials.
    pub fn batch_count(&self) -> u64 {
        self.noise.trials.div_ceil(BATCH_TRIALS)
    }

    /// Trial indices belonging to batch `batch`.
    pub fn batch_trials(&self, batch: u64) -> Range<u64> {
        let start = batch * BATCH_TRIALS;
        start..(start + BATCH_TRIALS).min(self.noise.trials)
    }

    /// Phase offsets of trial `trial`, one per shifter in path order.
    pub fn offsets(&self, trial: u64) -> Vec<f64> {
        jitter_offsets(&self.chain, &self.noise, trial)
    }

    /// Sweeps the window with trial `trial`'s offsets.
    pub fn run_trial(&self, trial: u64) -> TrialTrace {
        let offsets = self.offsets(trial);
        let (i_a, i_b) = chain_intensities(&self.chain, &self.phi, &offsets);
        // Phase offsets shift the fringes but never empty a port over a whole window.
        let g2 = correlate(&i_a, &i_b).expect("chain output has nonzero mean intensity");
        TrialTrace { i_a, i_b, g2 }
    }

    /// Moments of every trial in batch `batch`, folded in trial order.
    pub fn run_batch(&self, batch: u64) -> Moments {
        let mut m = Moments::empty(self.phi.len());
        for trial in self.batch_trials(batch) {
            m.push(&self.run_trial(trial));
        }
        m
    }

    /// Merges per-batch moments, which must arrive in batch order.
    pub fn finish(&self, batches: impl IntoIterator<Item = Moments>) -> NoisyTrace {
        let mut total = Moments::empty(self.phi.len());
        for b in batches {
            total.merge(&b);
        }
        debug_assert_eq!(total.count, self.noise.trials);
        let t = total.count as f64;
        let ci95_g2 = total
            .m2_g2
            .iter()
            .map(|&m2| {
                if total.count < 2 {
                    0.0
                } else {
                    Z95 * (m2.max(0.0) / (t - 1.0)).sqrt() / t.sqrt()
                }
            })
            .collect();
        NoisyTrace {
            phi: self.phi.clone(),
            visibility: visibility(&total.mean_g2),
            mean_i_a: total.mean_i_a,
            mean_i_b: total.mean_i_b,
            mean_g2: total.mean_g2,
            ci95_g2,
            window: self.window,
            chain: self.chain,
            noise: self.noise,
        }
    }
}

fn jitter_offsets(chain: &ChainConfig, noise: &NoiseConfig, trial: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
    rng.set_stream(trial);
    let normal = Normal::new(0.0, noise.sigma).expect("sigma validated");
    let blocks = chain.n as usize;
    let mut offsets = Vec::with_capacity(2 * blocks);
    match noise.mode {
        JitterMode::CorrelatedPerBlock => {
            for _ in 0..blocks {
                let d = normal.sample(&mut rng);
                offsets.push(d);
                offsets.push(d);
            }
        }
        JitterMode::IndependentPerShifter => {
            for _ in 0..2 * blocks {
                offsets.push(normal.sample(&mut rng));
            }
        }
    }
    offsets
}

/// Runs every batch sequentially.
pub fn run_noise_ensemble(
    chain: &ChainConfig,
    noise: &NoiseConfig,
    samples: usize,
    window: f64,
) -> Result<NoisyTrace> {
    let ensemble = Ensemble::new(*chain, *noise, samples, window)?;
    let batches = (0..ensemble.batch_count()).map(|b| ensemble.run_batch(b));
    Ok(ensemble.finish(batches))
}

/// Which output port a basis phase leaves dark.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DarkPort {
    /// Upper output `A`.
    Upper,
    /// Lower output `B`.
    Lower,
}

/// A checked anticorrelation probe at a zero of the chain's correlation.
#[derive(Debug, Clone)]
pub struct AnticorrelationProbe {
    chain: ChainConfig,
    noise: NoiseConfig,
    basis_phi: f64,
    threshold: f64,
    dark: DarkPort,
}

impl AnticorrelationProbe {
    /// `basis_phi` must be a multiple of `pi / 2n`; `threshold` is the dark-port
    /// fraction of total output above which a trial is an error.
    pub fn new(chain: ChainConfig, noise: NoiseConfig, basis_phi: f64, threshold: f64) -> Result<Self> {
        chain.validate()?;
        noise.validate()?;
        if !(threshold > 0.0 && threshold < 1.0) {
            return Err(Error::validation("threshold", "must lie in (0, 1)"));
        }
        let step = PI / (2.0 * chain.n as f64);
        let nearest = (basis_phi / step).round() * step;
        if !basis_phi.is_finite() || (basis_phi - nearest).abs() > GRID_TOLERANCE * basis_phi.abs().max(1.0) {
            return Err(Error::validation(
                "basis_phi",
                "must be a multiple of pi / 2n, where the correlation vanishes",
            ));
        }
        let (a, b) = propagate_chain(&chain, basis_phi, &[]).intensities();
        let dark = if a < b { DarkPort::Upper } else { DarkPort::Lower };
        Ok(AnticorrelationProbe {
            chain,
            noise,
            basis_phi,
            threshold,
            dark,
        })
    }

    /// The nominally dark port.
    pub fn dark_port(&self) -> DarkPort {
        self.dark
    }

    /// Whether trial `trial` lights up the dark port.
    pub fn is_error(&self, trial: u64) -> bool {
        let offsets = jitter_offsets(&self.chain, &self.noise, trial);
        let out = propagate_chain(&self.chain, self.basis_phi, &offsets);
        let dark = match self.dark {
            DarkPort::Upper => out.upper_intensity(),
            DarkPort::Lower => out.lower_intensity(),
        };
        dark > self.threshold * out.total_intensity()
    }

    /// Number of erroneous trials among `trials`.
    pub fn count_errors(&self, trials: Range<u64>) -> u64 {
        trials.filter(|&t| self.is_error(t)).count() as u64
    }

    /// Fraction of all configured trials that are errors.
    pub fn error_rate(&self) -> f64 {
        self.count_errors(0..self.noise.trials) as f64 / self.noise.trials as f64
    }
}

/// Fraction of trials whose nominally dark port carries more than 1% of the output.
pub fn anticorrelation_error_rate(chain: &ChainConfig, noise: &NoiseConfig, basis_phi: f64) -> Result<f64> {
    Ok(AnticorrelationProbe::new(*chain, *noise, basis_phi, DEFAULT_DARK_THRESHOLD)?.error_rate())
}

/// 95% normal-approximation half-width of a binomial rate.
pub fn rate_ci95(rate: f64, trials: u64) -> f64 {
    Z95 * (rate * (1.0 - rate) / trials as f64).sqrt()
}
