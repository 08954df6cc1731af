//! Phase sweeps, intensity correlations and fringe analysis.
//!
//! The correlation of the two output ports is the instantaneous intensity
//! product normalized by the window-averaged intensities,
//!
//! ```text
//! g2(phi) = I_A(phi) I_B(phi) / (<I_A> <I_B>)
//! ```
//!
//! which for an `n`-block lossless chain is `(1 - cos 4 n phi) / 2`. The fringe
//! period is recovered from the dominant bin of a DFT and converted into the
//! effective wavelength `lambda0 * period / 2pi`.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
// Unused whenever another crate in the build links std.
#[allow(unused_imports)]
use num_traits::Float;

use crate::circuit::Circuit;
use crate::elements::{d_block, propagate_chain, ChainConfig};
use crate::error::{Error, Result};
use crate::linalg::{apply, FieldPair};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Relative tolerance for calling two DFT magnitudes equal.
const TIE_TOLERANCE: f64 = 1e-9;
/// A spectral peak below this fraction of the DC term means a flat trace.
const FLAT_THRESHOLD: f64 = 1e-12;
/// Allowed deviation of the sample spacing from uniform, radians.
pub const GRID_TOLERANCE: f64 = 1e-12;

/// Where a trace came from.
#[derive(Debug, Clone, PartialEq)]
pub enum TraceSource {
    /// A serial chain of cross-coupled double blocks.
    Chain(ChainConfig),
    /// A single `D` block.
    BareMzi,
    /// A compiled circuit, stored as canonical text.
    Circuit(String),
    /// Read back from a file.
    Imported,
}

/// Sampled output intensities and their normalized correlation over a phase window.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTrace {
    /// Uniform, ascending sample phases covering `[start, start + window)`.
    pub phi: Vec<f64>,
    /// Upper-port intensity at each sample.
    pub i_a: Vec<f64>,
    /// Lower-port intensity at each sample.
    pub i_b: Vec<f64>,
    /// Normalized intensity correlation at each sample.
    pub g2: Vec<f64>,
    /// Window length in radians.
    pub window: f64,
    /// Provenance.
    pub source: TraceSource,
}

impl CorrelationTrace {
    /// Builds a trace from sampled intensities, computing `g2` over the trace's own grid.
    pub fn from_intensities(
        phi: Vec<f64>,
        i_a: Vec<f64>,
        i_b: Vec<f64>,
        window: f64,
        source: TraceSource,
    ) -> Result<Self> {
        check_grid(&phi, window)?;
        if i_a.len() != phi.len() || i_b.len() != phi.len() {
            return Err(Error::validation("trace", "column lengths differ"));
        }
        let g2 = correlate(&i_a, &i_b)?;
        Ok(CorrelationTrace {
            phi,
            i_a,
            i_b,
            g2,
            window,
            source,
        })
    }

    /// Builds a trace from already computed columns, checking only their shape.
    pub fn from_columns(
        phi: Vec<f64>,
        i_a: Vec<f64>,
        i_b: Vec<f64>,
        g2: Vec<f64>,
        source: TraceSource,
    ) -> Result<Self> {
        if phi.len() < 2 {
            return Err(Error::validation("trace", "needs at least 2 samples"));
        }
        let s = phi.len();
        if i_a.len() != s || i_b.len() != s || g2.len() != s {
            return Err(Error::validation("trace", "column lengths differ"));
        }
        let window = (phi[s - 1] - phi[0]) / (s - 1) as f64 * s as f64;
        check_grid(&phi, window)?;
        if phi.iter().chain(&i_a).chain(&i_b).chain(&g2).any(|v| !v.is_finite()) {
            return Err(Error::validation("trace", "non-finite value"));
        }
        Ok(CorrelationTrace {
            phi,
            i_a,
            i_b,
            g2,
            window,
            source,
        })
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.phi.len()
    }

    /// Always false for a validated trace.
    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    /// Fringe visibility of `g2`.
    pub fn visibility(&self) -> f64 {
        visibility(&self.g2)
    }
}

/// `samples` phases `start + window * k / samples`, `k = 0 .. samples`.
pub fn phase_grid(samples: usize, window: f64) -> Vec<f64> {
    (0..samples)
        .map(|k| window * k as f64 / samples as f64)
        .collect()
}

fn check_grid(phi: &[f64], window: f64) -> Result<()> {
    if phi.len() < 2 {
        return Err(Error::validation("trace", "needs at least 2 samples"));
    }
    if !(window > 0.0 && window.is_finite()) {
        return Err(Error::validation("window", "must be positive"));
    }
    let step = window / phi.len() as f64;
    for pair in phi.windows(2) {
        let d = pair[1] - pair[0];
        if !((d - step).abs() <= GRID_TOLERANCE) {
            return Err(Error::validation("trace", "phase grid is not uniform"));
        }
    }
    Ok(())
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// `I_A I_B / (<I_A> <I_B>)` sample by sample.
pub fn correlate(i_a: &[f64], i_b: &[f64]) -> Result<Vec<f64>> {
    let norm = mean(i_a) * mean(i_b);
    if !(norm > 0.0) {
        return Err(Error::validation(
            "trace",
            "an output port is dark over the whole window",
        ));
    }
    Ok(i_a.iter().zip(i_b).map(|(a, b)| a * b / norm).collect())
}

/// `(max - min) / (max + min)`; zero for an empty or all-zero sequence.
pub fn visibility(values: &[f64]) -> f64 {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if values.is_empty() || hi + lo <= 0.0 {
        return 0.0;
    }
    (hi - lo) / (hi + lo)
}

/// Closed-form port intensities of the chain,
/// `eta^(4(n-1)) I0 (1 +- cos 2 n phi) / 2`.
pub fn intensities_n(cfg: &ChainConfig, phi: f64) -> (f64, f64) {
    let scale = 0.5 * cfg.output_intensity();
    let c = (2.0 * cfg.n as f64 * phi).cos();
    (scale * (1.0 + c), scale * (1.0 - c))
}

/// Correlation of a single MZI, `(1 - cos 2 phi) / 2`.
pub fn g2_first_order(phi: f64) -> f64 {
    0.5 * (1.0 - (2.0 * phi).cos())
}

/// Correlation of an `n`-block chain, `(1 - cos 4 n phi) / 2`.
pub fn g2_closed_form(n: u32, phi: f64) -> f64 {
    0.5 * (1.0 - (4.0 * n as f64 * phi).cos())
}

/// Checks that `window` holds a whole number of periods of length `period`.
pub fn check_whole_periods(window: f64, period: f64) -> Result<u64> {
    if !(window > 0.0 && window.is_finite()) {
        return Err(Error::validation("window", "must be positive"));
    }
    let periods = window / period;
    let whole = periods.round();
    if whole < 1.0 || (periods - whole).abs() > 1e-9 * whole.max(1.0) {
        return Err(Error::validation(
            "window",
            "must span a whole number of correlation periods",
        ));
    }
    Ok(whole as u64)
}

/// Samples the `n`-block chain over `[0, window)`.
///
/// Requires `samples >= 16 n` and `window` a whole multiple of the
/// correlation period `pi / 2n`. Intensities come from element-by-element
/// propagation, the same path the noise ensemble uses.
pub fn g2_trace(cfg: &ChainConfig, samples: usize, window: f64) -> Result<CorrelationTrace> {
    cfg.validate()?;
    check_trace_request(cfg, samples, window)?;
    let phi = phase_grid(samples, window);
    let (i_a, i_b) = chain_intensities(cfg, &phi, &[]);
    CorrelationTrace::from_intensities(phi, i_a, i_b, window, TraceSource::Chain(*cfg))
}

pub(crate) fn check_trace_request(cfg: &ChainConfig, samples: usize, window: f64) -> Result<()> {
    let min = 16 * cfg.n as usize;
    if samples < min {
        return Err(Error::validation(
            "samples",
            alloc::format!("need at least {min} samples for n = {}", cfg.n),
        ));
    }
    check_whole_periods(window, PI / (2.0 * cfg.n as f64))?;
    Ok(())
}

pub(crate) fn chain_intensities(cfg: &ChainConfig, phi: &[f64], offsets: &[f64]) -> (Vec<f64>, Vec<f64>) {
    phi.iter()
        .map(|&p| propagate_chain(cfg, p, offsets).intensities())
        .unzip()
}

/// Samples a single `D` block fed with `[E0; 0]`, `E0 = 1`.
pub fn mzi_trace(samples: usize, window: f64) -> Result<CorrelationTrace> {
    check_whole_periods(window, PI)?;
    let phi = phase_grid(samples, window);
    let input = FieldPair::upper_only(Complex64::new(1.0, 0.0));
    let (i_a, i_b) = phi
        .iter()
        .map(|&p| apply(&d_block(p), &input).intensities())
        .unzip();
    CorrelationTrace::from_intensities(phi, i_a, i_b, window, TraceSource::BareMzi)
}

/// Samples a compiled circuit fed with `[e0; 0]`.
pub fn circuit_trace(
    circuit: &Circuit,
    e0: Complex64,
    samples: usize,
    window: f64,
) -> Result<CorrelationTrace> {
    if samples < 2 {
        return Err(Error::validation("samples", "need at least 2"));
    }
    let phi = phase_grid(samples, window);
    let elements = circuit.elements();
    let input = FieldPair::upper_only(e0);
    let (i_a, i_b) = phi
        .iter()
        .map(|&p| {
            elements
                .iter()
                .fold(input, |v, e| apply(&e.matrix(p), &v))
                .intensities()
        })
        .unzip();
    let source = TraceSource::Circuit(circuit.pretty_print());
    CorrelationTrace::from_intensities(phi, i_a, i_b, window, source)
}

/// Index of the dominant nonzero-frequency DFT bin of `values - mean(values)`.
///
/// Bins `1 ..= len/2` are searched; magnitudes within a relative `1e-9` of
/// the maximum count as ties and the lowest such bin wins.
pub fn dominant_bin(values: &[f64]) -> Result<usize> {
    let s = values.len();
    if s < 2 {
        return Err(Error::validation("trace", "needs at least 2 samples"));
    }
    let dc: f64 = values.iter().sum();
    let centre = dc / s as f64;
    let centred: Vec<f64> = values.iter().map(|v| v - centre).collect();
    let twiddles: Vec<Complex64> = (0..s)
        .map(|m| Complex64::from_polar(1.0, -TAU * m as f64 / s as f64))
        .collect();
    let magnitudes: Vec<f64> = (1..=s / 2)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut idx = 0;
            for &x in &centred {
                acc += twiddles[idx] * x;
                idx += k;
                if idx >= s {
                    idx -= s;
                }
            }
            acc.norm()
        })
        .collect();
    let peak = magnitudes.iter().copied().fold(0.0, f64::max);
    if peak <= FLAT_THRESHOLD * dc.abs() || peak == 0.0 {
        return Err(Error::NoModulation);
    }
    let floor = peak * (1.0 - TIE_TOLERANCE);
    let k = magnitudes
        .iter()
        .position(|&m| m >= floor)
        .expect("peak is attained")
        + 1;
    Ok(k)
}

/// Fringe period of `g2` in radians: `window / k` for the dominant bin `k`.
pub fn detect_period(trace: &CorrelationTrace) -> Result<f64> {
    let k = dominant_bin(&trace.g2)?;
    if k < 2 {
        return Err(Error::validation(
            "trace",
            "window covers fewer than two fringe periods",
        ));
    }
    Ok(trace.window / k as f64)
}

/// Effective wavelength and equivalent photon number derived from a fringe period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisResult {
    /// Correlation fringe period, radians.
    pub period_phase: f64,
    /// Fringe visibility of the trace the period came from.
    pub visibility: f64,
    /// `lambda_CB / lambda0 = period / 2pi`.
    pub lambda_ratio: f64,
    /// `lambda_CB` in the unit of `lambda0`.
    pub lambda_cb: f64,
    /// Number of cross-coupled double blocks, `round(pi / (2 period))`.
    pub inferred_n: u32,
    /// `4 * inferred_n`.
    pub equivalent_photon_number: u32,
}

/// Converts a fringe period into the effective de Broglie wavelength.
pub fn de_broglie_wavelength(period_phase: f64, lambda0: f64, visibility: f64) -> Result<AnalysisResult> {
    if !(period_phase > 0.0 && period_phase <= TAU) {
        return Err(Error::validation("period", "must lie in (0, 2pi]"));
    }
    if !(lambda0 > 0.0 && lambda0.is_finite()) {
        return Err(Error::validation("lambda0", "must be positive"));
    }
    if !(0.0..=1.0).contains(&visibility) {
        return Err(Error::validation("visibility", "must lie in [0, 1]"));
    }
    let inferred = (PI / (2.0 * period_phase)).round();
    if inferred < 1.0 {
        return Err(Error::validation(
            "period",
            "too long to correspond to any number of blocks",
        ));
    }
    let inferred_n = inferred as u32;
    let lambda_ratio = period_phase / TAU;
    Ok(AnalysisResult {
        period_phase,
        visibility,
        lambda_ratio,
        lambda_cb: lambda_ratio * lambda0,
        inferred_n,
        equivalent_photon_number: 4 * inferred_n,
    })
}

/// Period detection plus wavelength conversion for a whole trace.
pub fn analyze(trace: &CorrelationTrace, lambda0: f64) -> Result<AnalysisResult> {
    let period = detect_period(trace)?;
    de_broglie_wavelength(period, lambda0, trace.visibility().clamp(0.0, 1.0))
}

/// Coherence length of a source with a given linewidth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceBudget {
    /// Linewidth, Hz.
    pub linewidth_hz: f64,
    /// `c / linewidth`, metres.
    pub coherence_length_m: f64,
}

impl CoherenceBudget {
    /// Coherence length in kilometres.
    pub fn coherence_length_km(&self) -> f64 {
        self.coherence_length_m / 1e3
    }

    /// Coherence time `1 / linewidth`, seconds.
    pub fn coherence_time_s(&self) -> f64 {
        1.0 / self.linewidth_hz
    }
}

/// `l_c = c / linewidth`.
pub fn coherence_budget(linewidth_hz: f64) -> Result<CoherenceBudget> {
    if !(linewidth_hz > 0.0 && linewidth_hz.is_finite()) {
        return Err(Error::validation("linewidth", "must be positive"));
    }
    Ok(CoherenceBudget {
        linewidth_hz,
        coherence_length_m: SPEED_OF_LIGHT / linewidth_hz,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::chain_output;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};

    fn cfg(n: u32) -> ChainConfig {
        ChainConfig::lossless(n).unwrap()
    }

    // Direct O(S^2) DFT with per-term trig, independent of the twiddle table.
    fn naive_spectrum(values: &[f64]) -> Vec<f64> {
        let s = values.len();
        let m = values.iter().sum::<f64>() / s as f64;
        (1..=s / 2)
            .map(|k| {
                let (mut re, mut im) = (0.0, 0.0);
                for (j, v) in values.iter().enumerate() {
                    let a = -TAU * (j * k) as f64 / s as f64;
                    re += (v - m) * a.cos();
                    im += (v - m) * a.sin();
                }
                (re * re + im * im).sqrt()
            })
            .collect()
    }

    #[test]
    fn intensities_examples() {
        let (a, b) = intensities_n(&cfg(1), 0.0);
        assert!((a - 1.0).abs() < 1e-15 && b.abs() < 1e-15);
        let (a, b) = intensities_n(&cfg(2), FRAC_PI_8);
        assert!((a - 0.5).abs() < 1e-15 && (b - 0.5).abs() < 1e-15);
        let (a, b) = intensities_n(&cfg(1), FRAC_PI_2);
        assert!(a.abs() < 1e-15 && (b - 1.0).abs() < 1e-15);
    }

    #[test]
    fn intensities_match_fields() {
        for (n, eta) in [(1, 1.0), (3, 0.9), (8, 0.5)] {
            let c = ChainConfig::new(n, eta, Complex64::new(0.5, 1.5), 1.0).unwrap();
            for k in 0..500 {
                let phi = -3.0 + 0.0123 * k as f64;
                let (a, b) = intensities_n(&c, phi);
                let (fa, fb) = chain_output(&c, phi).intensities();
                assert!((a - fa).abs() < 1e-12 && (b - fb).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn first_order_examples() {
        assert_eq!(g2_first_order(0.0), 0.0);
        assert!((g2_first_order(FRAC_PI_2) - 1.0).abs() < 1e-15);
        assert!((g2_first_order(FRAC_PI_4) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn first_order_matches_bare_mzi_trace() {
        let t = mzi_trace(4096, TAU).unwrap();
        for (phi, g) in t.phi.iter().zip(&t.g2) {
            assert!((g - g2_first_order(*phi)).abs() < 1e-12);
        }
    }

    #[test]
    fn g2_sample_examples() {
        let t = g2_trace(&cfg(1), 4096, TAU).unwrap();
        assert_eq!(t.phi[512], FRAC_PI_4);
        assert!((t.g2[512] - 1.0).abs() < 1e-12);
        assert_eq!(t.phi[1024], FRAC_PI_2);
        assert!(t.g2[1024].abs() < 1e-12);

        // n = 3 at pi/24: 4096 * (pi/24) / 2pi is not an integer, so use 48 * 64 samples.
        let t = g2_trace(&cfg(3), 48 * 64, TAU).unwrap();
        assert!((t.phi[64] - PI / 24.0).abs() < 1e-15);
        assert!((t.g2[64] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn g2_matches_closed_form() {
        for n in 1..=10 {
            let t = g2_trace(&cfg(n), 4096, TAU).unwrap();
            for (phi, g) in t.phi.iter().zip(&t.g2) {
                assert!((g - g2_closed_form(n, *phi)).abs() < 1e-9, "n = {n}");
                assert!(*g >= 0.0 && *g <= 1.0 + 1e-9);
            }
        }
    }

    #[test]
    fn g2_zeros_on_basis() {
        for n in 1..=10u32 {
            let samples = 64 * n as usize;
            let t = g2_trace(&cfg(n), samples, TAU).unwrap();
            // phi = k pi / 2n falls every samples / 4n = 16 grid points.
            for k in (0..samples).step_by(16) {
                assert!(t.g2[k] < 1e-12, "n = {n}, k = {k}: {}", t.g2[k]);
            }
        }
    }

    #[test]
    fn g2_is_loss_invariant() {
        for n in [1, 2, 5] {
            let clean = g2_trace(&cfg(n), 2048, TAU).unwrap();
            for eta in [0.5, 0.9] {
                let c = ChainConfig::new(n, eta, Complex64::new(1.0, 0.0), 1.0).unwrap();
                let lossy = g2_trace(&c, 2048, TAU).unwrap();
                for (a, b) in clean.g2.iter().zip(&lossy.g2) {
                    assert!((a - b).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn intensity_period_is_twice_correlation_period() {
        for n in 1..=5 {
            let t = g2_trace(&cfg(n), 4096, TAU).unwrap();
            let g2_bin = dominant_bin(&t.g2).unwrap();
            assert_eq!(dominant_bin(&t.i_a).unwrap() * 2, g2_bin);
            assert_eq!(dominant_bin(&t.i_b).unwrap() * 2, g2_bin);
        }
    }

    #[test]
    fn trace_request_validation() {
        assert!(matches!(g2_trace(&cfg(4), 63, TAU), Err(Error::Validation { name: "samples", .. })));
        assert!(g2_trace(&cfg(4), 64, TAU).is_ok());
        assert!(matches!(g2_trace(&cfg(1), 4096, 1.0), Err(Error::Validation { name: "window", .. })));
        assert!(g2_trace(&cfg(1), 4096, FRAC_PI_2).is_ok());
        assert!(g2_trace(&cfg(2), 4096, 3.0 * PI / 4.0).is_ok());
    }

    #[test]
    fn dft_matches_naive_spectrum() {
        let t = g2_trace(&cfg(3), 480, TAU).unwrap();
        let spectrum = naive_spectrum(&t.g2);
        let peak = spectrum.iter().copied().fold(0.0, f64::max);
        let k = spectrum.iter().position(|&m| m == peak).unwrap() + 1;
        assert_eq!(dominant_bin(&t.g2).unwrap(), k);
        assert_eq!(k, 12);
    }

    #[test]
    fn detect_period_examples() {
        let t = g2_trace(&cfg(1), 4096, TAU).unwrap();
        assert_eq!(detect_period(&t).unwrap(), FRAC_PI_2);
        let t = mzi_trace(4096, TAU).unwrap();
        assert_eq!(detect_period(&t).unwrap(), PI);
        for n in 1..=10 {
            let t = g2_trace(&cfg(n), 4096, TAU).unwrap();
            assert_eq!(detect_period(&t).unwrap(), PI / (2.0 * n as f64));
        }
    }

    #[test]
    fn flat_trace_has_no_modulation() {
        let phi = phase_grid(64, TAU);
        let ones = alloc::vec![1.0; 64];
        let t = CorrelationTrace::from_columns(phi, ones.clone(), ones.clone(), ones, TraceSource::Imported)
            .unwrap();
        assert_eq!(detect_period(&t), Err(Error::NoModulation));
        assert_eq!(dominant_bin(&[0.0; 8]), Err(Error::NoModulation));
    }

    #[test]
    fn tie_breaks_to_lowest_bin() {
        // cos(2x) + cos(3x) with equal amplitude.
        let s = 64;
        let values: Vec<f64> = (0..s)
            .map(|j| {
                let x = TAU * j as f64 / s as f64;
                2.0 + (2.0 * x).cos() + (3.0 * x).cos()
            })
            .collect();
        assert_eq!(dominant_bin(&values).unwrap(), 2);
    }

    #[test]
    fn wavelength_examples() {
        let r = de_broglie_wavelength(FRAC_PI_2, 1.0, 1.0).unwrap();
        assert_eq!(r.lambda_ratio, 0.25);
        assert_eq!(r.lambda_cb, 0.25);
        assert_eq!((r.inferred_n, r.equivalent_photon_number), (1, 4));

        let r = de_broglie_wavelength(PI / 12.0, 1.0, 1.0).unwrap();
        assert!((r.lambda_ratio - 1.0 / 24.0).abs() < 1e-16);
        assert_eq!((r.inferred_n, r.equivalent_photon_number), (6, 24));

        let r = de_broglie_wavelength(PI, 633e-9, 1.0).unwrap();
        assert_eq!(r.lambda_ratio, 0.5);
        assert!((r.lambda_cb - 633e-9 / 2.0).abs() < 1e-24);
    }

    #[test]
    fn wavelength_rejects_bad_periods() {
        assert!(de_broglie_wavelength(0.0, 1.0, 1.0).is_err());
        assert!(de_broglie_wavelength(7.0, 1.0, 1.0).is_err());
        // pi/(2 * 2pi) rounds to 0 blocks.
        assert!(de_broglie_wavelength(TAU, 1.0, 1.0).is_err());
    }

    #[test]
    fn pipeline_recovers_block_count() {
        for n in 1..=10 {
            let t = g2_trace(&cfg(n), 4096, TAU).unwrap();
            let r = analyze(&t, 1.0).unwrap();
            assert_eq!(r.inferred_n, n);
            assert_eq!(r.equivalent_photon_number, 4 * n);
            assert!((r.visibility - 1.0).abs() < 1e-12);
            assert!((r.lambda_ratio - r.period_phase / TAU).abs() < 1e-12);
        }
    }

    #[test]
    fn coherence_examples() {
        let b = coherence_budget(1e-3).unwrap();
        assert!((b.coherence_length_m - 2.99792458e11).abs() / 2.99792458e11 < 1e-12);
        assert!((b.coherence_length_km() - 2.99792458e8).abs() / 2.99792458e8 < 1e-12);
        assert_eq!(coherence_budget(1.0).unwrap().coherence_length_m, 2.99792458e8);
        assert!((coherence_budget(1e6).unwrap().coherence_length_m - 299.792458).abs() < 1e-12);
        assert!(coherence_budget(0.0).is_err());
        assert!(coherence_budget(-5.0).is_err());
    }

    #[test]
    fn imported_columns_validation() {
        let phi = alloc::vec![0.0, 0.1, 0.25];
        let v = alloc::vec![1.0; 3];
        assert!(CorrelationTrace::from_columns(phi, v.clone(), v.clone(), v.clone(), TraceSource::Imported).is_err());
        let phi = alloc::vec![0.0, 0.1];
        assert!(CorrelationTrace::from_columns(phi, v.clone(), v.clone(), v, TraceSource::Imported).is_err());
    }

    #[test]
    fn dark_port_trace_is_rejected() {
        let c = crate::circuit::parse("bs bs").unwrap();
        assert!(circuit_trace(&c, Complex64::new(1.0, 0.0), 64, TAU).is_err());
    }
}
