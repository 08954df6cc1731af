//! Optical elements and composite interferometer blocks.
//!
//! Beam splitters follow the symmetric convention `1/sqrt2 [1 i; i 1]`, which
//! puts a pi/2 phase on the reflected output. `D = BS Phi BS` carries its
//! phase shifter in the lower arm and `D' = BS Phi' BS` in the upper arm.
//! A cross-coupled double block is `CM = D' D`.

use core::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
// Unused whenever another crate in the build links std.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{apply, mat_mul, ComplexAmplitude, FieldPair, TransferMatrix};

const I: Complex64 = Complex64::new(0.0, 1.0);
const HALF: f64 = 0.5;

fn unit_phasor(phase: f64) -> Complex64 {
    Complex64::from_polar(1.0, phase)
}

/// Parameters of a serial chain of cross-coupled double blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainConfig {
    /// Number of `CM` blocks.
    pub n: u32,
    /// Amplitude transmission of each block-to-block connection.
    pub eta: f64,
    /// Input field `E0`, fed into the upper port.
    pub input_amplitude: ComplexAmplitude,
    /// Carrier wavelength, in any length unit.
    pub lambda0: f64,
}

impl ChainConfig {
    /// Validated constructor.
    pub fn new(n: u32, eta: f64, input_amplitude: ComplexAmplitude, lambda0: f64) -> Result<Self> {
        let cfg = ChainConfig {
            n,
            eta,
            input_amplitude,
            lambda0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// `n` blocks, no loss, unit input, unit wavelength.
    pub fn lossless(n: u32) -> Result<Self> {
        ChainConfig::new(n, 1.0, Complex64::new(1.0, 0.0), 1.0)
    }

    /// Checks the parameter domains.
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::validation("n", "chain needs at least one block"));
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(Error::validation("eta", "must lie in (0, 1]"));
        }
        let e0 = self.input_amplitude;
        if !(e0.re.is_finite() && e0.im.is_finite()) || e0.norm_sqr() <= 0.0 {
            return Err(Error::validation("input_amplitude", "must be finite and nonzero"));
        }
        if !(self.lambda0 > 0.0 && self.lambda0.is_finite()) {
            return Err(Error::validation("lambda0", "must be positive"));
        }
        Ok(())
    }

    /// Input intensity `|E0|^2`.
    pub fn input_intensity(&self) -> f64 {
        self.input_amplitude.norm_sqr()
    }

    /// Number of individual MZI blocks (`D` and `D'` counted separately), `2n`.
    pub fn mzi_block_count(&self) -> u32 {
        2 * self.n
    }

    /// Photon number of the NOON state with the same fringe period, `4n`.
    pub fn equivalent_photon_number(&self) -> u32 {
        4 * self.n
    }

    /// Amplitude factor accumulated over all connections, `eta^(2(n-1))`.
    pub fn amplitude_prefactor(&self) -> f64 {
        self.eta.powi(2 * (self.n as i32 - 1))
    }

    /// Total output intensity, `eta^(4(n-1)) |E0|^2`.
    pub fn output_intensity(&self) -> f64 {
        self.amplitude_prefactor().powi(2) * self.input_intensity()
    }
}

/// Relative input phase that makes one beam splitter output dark.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MagicPhase {
    /// The order, starting at 1.
    pub order: u32,
    /// `true` for the negative branch.
    pub negative: bool,
}

impl MagicPhase {
    /// `psi_order` on the chosen branch.
    pub fn new(order: u32, negative: bool) -> Result<Self> {
        if order < 1 {
            return Err(Error::validation("order", "magic phase order starts at 1"));
        }
        Ok(MagicPhase { order, negative })
    }

    /// `+-(order - 1/2) pi`.
    pub fn value(&self) -> f64 {
        let sign = if self.negative { -1.0 } else { 1.0 };
        sign * (self.order as f64 - 0.5) * PI
    }
}

/// Lossless symmetric 50:50 beam splitter.
pub fn beam_splitter() -> TransferMatrix {
    let t = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let r = Complex64::new(0.0, FRAC_1_SQRT_2);
    TransferMatrix::new(t, r, r, t)
}

/// Phase shifter in the lower arm, `diag(1, e^{i phi})`.
pub fn phase_lower(phi: f64) -> TransferMatrix {
    TransferMatrix::diagonal(Complex64::new(1.0, 0.0), unit_phasor(phi))
}

/// Phase shifter in the upper arm, `diag(e^{i phi}, 1)`.
pub fn phase_upper(phi: f64) -> TransferMatrix {
    TransferMatrix::diagonal(unit_phasor(phi), Complex64::new(1.0, 0.0))
}

/// Equal amplitude attenuation `t` on both arms.
pub fn loss(t: f64) -> Result<TransferMatrix> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::validation("loss", "transmission must lie in (0, 1]"));
    }
    let t = Complex64::new(t, 0.0);
    Ok(TransferMatrix::diagonal(t, t))
}

/// `D(phi) = BS Phi(phi) BS`, in closed form.
pub fn d_block(phi: f64) -> TransferMatrix {
    let e = unit_phasor(phi);
    let one = Complex64::new(1.0, 0.0);
    let cross = I * (one + e) * HALF;
    TransferMatrix::new((one - e) * HALF, cross, cross, (e - one) * HALF)
}

/// `D'(phi) = BS Phi'(phi) BS`, in closed form.
pub fn d_prime_block(phi: f64) -> TransferMatrix {
    let e = unit_phasor(phi);
    let one = Complex64::new(1.0, 0.0);
    let cross = I * (e + one) * HALF;
    TransferMatrix::new((e - one) * HALF, cross, cross, (one - e) * HALF)
}

/// `CM(phi) = D'(phi) D(phi)`, in closed form.
pub fn ccd_block(phi: f64) -> TransferMatrix {
    ccd_power_form(1, phi).scale(Complex64::new(-1.0, 0.0))
}

// [1 + e, i(1 - e); -i(1 - e), 1 + e] / 2 with e = e^{i 2 n phi}.
fn ccd_power_form(n: u32, phi: f64) -> TransferMatrix {
    let e = unit_phasor(2.0 * n as f64 * phi);
    let one = Complex64::new(1.0, 0.0);
    let diag = (one + e) * HALF;
    let off = I * (one - e) * HALF;
    TransferMatrix::new(diag, off, -off, diag)
}

/// Closed-form transfer matrix of the whole chain, `eta^(2(n-1)) CM^n`.
///
/// Keeps the `(-1)^n` global sign.
pub fn chain_closed_form(cfg: &ChainConfig, phi: f64) -> TransferMatrix {
    let sign = if cfg.n.is_multiple_of(2) { 1.0 } else { -1.0 };
    ccd_power_form(cfg.n, phi).scale(Complex64::new(sign * cfg.amplitude_prefactor(), 0.0))
}

/// Output fields `(E_A, E_B)` of the chain for input `[E0; 0]`, in closed form.
pub fn chain_output(cfg: &ChainConfig, phi: f64) -> FieldPair {
    let m = chain_closed_form(cfg, phi);
    FieldPair::new(m.a11 * cfg.input_amplitude, m.a21 * cfg.input_amplitude)
}

/// One connection between consecutive blocks: `eta` applied twice, so a chain
/// of `n` blocks accumulates `eta^(2(n-1))`.
pub fn connection(eta: f64) -> Result<TransferMatrix> {
    let l = loss(eta)?;
    Ok(mat_mul(&l, &l))
}

/// Chain matrix from explicit products, `CM (L CM) (L CM) ...`, with every
/// block built from `BS`, `Phi` and `Phi'` rather than the closed form.
pub fn chain_brute_force(cfg: &ChainConfig, phi: f64) -> Result<TransferMatrix> {
    cfg.validate()?;
    let bs = beam_splitter();
    let d = mat_mul(&bs, &mat_mul(&phase_lower(phi), &bs));
    let dp = mat_mul(&bs, &mat_mul(&phase_upper(phi), &bs));
    let block = mat_mul(&dp, &d);
    let link = connection(cfg.eta)?;
    let mut m = block;
    for _ in 1..cfg.n {
        m = mat_mul(&block, &mat_mul(&link, &m));
    }
    Ok(m)
}

/// Propagates `[E0; 0]` element by element through the chain.
///
/// `offsets` holds one extra phase per shifter in path order: the `D` shifter
/// of block 0, the `D'` shifter of block 0, the `D` shifter of block 1, ...
/// Missing entries count as zero.
pub fn propagate_chain(cfg: &ChainConfig, phi: f64, offsets: &[f64]) -> FieldPair {
    let bs = beam_splitter();
    let link = cfg.eta * cfg.eta;
    let offset = |k: usize| offsets.get(k).copied().unwrap_or(0.0);
    let mut v = FieldPair::upper_only(cfg.input_amplitude);
    for block in 0..cfg.n as usize {
        if block > 0 {
            v = FieldPair::new(v.upper * link, v.lower * link);
        }
        v = apply(&bs, &v);
        v.lower *= unit_phasor(phi + offset(2 * block));
        v = apply(&bs, &v);
        v = apply(&bs, &v);
        v.upper *= unit_phasor(phi + offset(2 * block + 1));
        v = apply(&bs, &v);
    }
    v
}

/// Beam-splitter picture of anticorrelation: `E0/sqrt2` enters the upper port
/// and `E0/sqrt2 e^{i psi}` the lower port of a single beam splitter.
///
/// The upper output intensity is `I0 (1 - sin psi) / 2`, dark at `psi = pi/2`.
pub fn bs_anticorrelation(psi: f64, e0: ComplexAmplitude) -> FieldPair {
    let a = e0 * FRAC_1_SQRT_2;
    let input = FieldPair::new(a, a * unit_phasor(psi));
    apply(&beam_splitter(), &input)
}

/// MZI-picture phase equivalent to beam-splitter-picture phase `psi`.
pub fn mzi_phase_for(psi: f64) -> f64 {
    PI / 2.0 - psi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{is_unitary, mat_pow};
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, TAU};
    use rand::{Rng, SeedableRng};
    use std::vec::Vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn product_d(phi: f64) -> TransferMatrix {
        let bs = beam_splitter();
        mat_mul(&bs, &mat_mul(&phase_lower(phi), &bs))
    }

    fn product_d_prime(phi: f64) -> TransferMatrix {
        let bs = beam_splitter();
        mat_mul(&bs, &mat_mul(&phase_upper(phi), &bs))
    }

    fn random_phases(count: usize, seed: u64) -> Vec<f64> {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        (0..count).map(|_| rng.random_range(0.0..TAU)).collect()
    }

    #[test]
    fn beam_splitter_entries() {
        let bs = beam_splitter();
        assert_eq!(bs.a11, c(FRAC_1_SQRT_2, 0.0));
        let swap = TransferMatrix::new(c(0.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(0.0, 0.0));
        assert!(mat_mul(&bs, &bs).max_abs_diff(&swap) < 1e-15);
        assert!((bs.det().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn phase_shifters() {
        assert!(phase_lower(0.0).max_abs_diff(&TransferMatrix::IDENTITY) < 1e-16);
        assert!(phase_upper(0.0).max_abs_diff(&TransferMatrix::IDENTITY) < 1e-16);
        let flip_lower = TransferMatrix::diagonal(c(1.0, 0.0), c(-1.0, 0.0));
        assert!(phase_lower(PI).max_abs_diff(&flip_lower) < 1e-15);
        let quarter = TransferMatrix::diagonal(c(1.0, 0.0), c(0.0, 1.0));
        assert!(phase_lower(FRAC_PI_2).max_abs_diff(&quarter) < 1e-15);
        let flip_upper = TransferMatrix::diagonal(c(-1.0, 0.0), c(1.0, 0.0));
        assert!(phase_upper(PI).max_abs_diff(&flip_upper) < 1e-15);

        let phi = 0.83;
        let both = mat_mul(&phase_upper(phi), &phase_lower(phi));
        let expected = TransferMatrix::IDENTITY.scale(Complex64::from_polar(1.0, phi));
        assert!(both.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn loss_scales_amplitude() {
        assert_eq!(loss(1.0).unwrap(), TransferMatrix::IDENTITY);
        let out = apply(&loss(0.9).unwrap(), &FieldPair::upper_only(c(1.0, 0.0)));
        assert!(out.max_abs_diff(&FieldPair::upper_only(c(0.9, 0.0))) < 1e-16);
        let v = FieldPair::new(c(0.3, 0.4), c(-0.1, 0.7));
        let t = 0.37;
        let attenuated = apply(&loss(t).unwrap(), &v);
        assert!((attenuated.total_intensity() - t * t * v.total_intensity()).abs() < 1e-15);
    }

    #[test]
    fn loss_rejects_out_of_range() {
        for t in [0.0, -0.2, 1.0000001, f64::NAN] {
            assert!(matches!(loss(t), Err(Error::Validation { .. })), "t = {t}");
        }
    }

    #[test]
    fn d_block_examples() {
        let input = FieldPair::upper_only(c(1.0, 0.0));
        let at_zero = apply(&d_block(0.0), &input);
        assert!(at_zero.max_abs_diff(&FieldPair::new(c(0.0, 0.0), c(0.0, 1.0))) < 1e-15);

        let at_pi = apply(&d_block(PI), &input);
        assert!(at_pi.max_abs_diff(&FieldPair::new(c(1.0, 0.0), c(0.0, 0.0))) < 1e-15);

        let at_half = apply(&d_block(FRAC_PI_2), &input);
        let expected = FieldPair::new(c(0.5, -0.5), c(-0.5, 0.5));
        assert!(at_half.max_abs_diff(&expected) < 1e-15);
        assert!((at_half.upper_intensity() - 0.5).abs() < 1e-15);
        assert!((at_half.lower_intensity() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn d_prime_block_examples() {
        let cross = TransferMatrix::new(c(0.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(0.0, 0.0));
        assert!(d_prime_block(0.0).max_abs_diff(&cross) < 1e-15);
        let flip = TransferMatrix::diagonal(c(-1.0, 0.0), c(1.0, 0.0));
        assert!(d_prime_block(PI).max_abs_diff(&flip) < 1e-15);

        let phi = 0.7;
        let mirrored = d_block(-phi).conj().scale(c(-1.0, 0.0));
        assert!(d_prime_block(phi).max_abs_diff(&mirrored) < 1e-15);
    }

    #[test]
    fn closed_forms_match_products() {
        for phi in random_phases(1000, 11) {
            assert!(d_block(phi).max_abs_diff(&product_d(phi)) < 1e-14);
            assert!(d_prime_block(phi).max_abs_diff(&product_d_prime(phi)) < 1e-14);
            let cm = mat_mul(&product_d_prime(phi), &product_d(phi));
            assert!(ccd_block(phi).max_abs_diff(&cm) < 1e-13);
        }
    }

    #[test]
    fn ccd_at_zero_is_minus_identity() {
        let m = mat_mul(&d_prime_block(0.0), &d_block(0.0));
        assert!(m.max_abs_diff(&TransferMatrix::IDENTITY.scale(c(-1.0, 0.0))) < 1e-15);
    }

    #[test]
    fn ccd_block_examples() {
        let input = FieldPair::upper_only(c(1.0, 0.0));
        let at_zero = apply(&ccd_block(0.0), &input);
        assert!(at_zero.max_abs_diff(&FieldPair::new(c(-1.0, 0.0), c(0.0, 0.0))) < 1e-15);

        let at_half = apply(&ccd_block(FRAC_PI_2), &input);
        assert!(at_half.max_abs_diff(&FieldPair::new(c(0.0, 0.0), c(0.0, 1.0))) < 1e-15);
        let (ia, ib) = at_half.intensities();
        assert!(ia < 1e-30 && (ib - 1.0).abs() < 1e-15);

        let (ia, ib) = apply(&ccd_block(FRAC_PI_4), &input).intensities();
        assert!((ia - 0.5).abs() < 1e-15 && (ib - 0.5).abs() < 1e-15);
    }

    #[test]
    fn blocks_are_unitary() {
        for phi in random_phases(1000, 12) {
            assert!(is_unitary(&d_block(phi), 1e-12));
            assert!(is_unitary(&d_prime_block(phi), 1e-12));
            assert!(is_unitary(&ccd_block(phi), 1e-12));
        }
        assert!(is_unitary(&ccd_block(1.234), 1e-12));
    }

    #[test]
    fn chain_output_examples() {
        let out = chain_output(&ChainConfig::lossless(1).unwrap(), 0.0);
        assert!(out.max_abs_diff(&FieldPair::new(c(-1.0, 0.0), c(0.0, 0.0))) < 1e-15);

        let out = chain_output(&ChainConfig::lossless(3).unwrap(), FRAC_PI_6);
        assert!(out.upper.norm() < 1e-15);
        assert!((out.lower_intensity() - 1.0).abs() < 1e-15);

        let cfg = ChainConfig::new(2, 0.9, c(1.0, 0.0), 1.0).unwrap();
        let out = chain_output(&cfg, 0.0);
        assert!((out.upper_intensity() - 0.6561).abs() < 1e-15);
        assert!(out.lower.norm() < 1e-15);
    }

    #[test]
    fn closed_form_reduces_to_single_block() {
        let cfg = ChainConfig::lossless(1).unwrap();
        for phi in random_phases(50, 13) {
            assert!(chain_closed_form(&cfg, phi).max_abs_diff(&ccd_block(phi)) < 1e-15);
        }
    }

    #[test]
    fn closed_form_matches_matrix_power() {
        let cfg = ChainConfig::lossless(4).unwrap();
        for phi in random_phases(100, 14) {
            let oracle = mat_pow(&ccd_block(phi), 4);
            assert!(chain_closed_form(&cfg, phi).max_abs_diff(&oracle) < 1e-12);
        }
    }

    #[test]
    fn closed_form_loss_prefactor() {
        let cfg = ChainConfig::new(2, 0.8, c(1.0, 0.0), 1.0).unwrap();
        let lossless = ChainConfig::lossless(2).unwrap();
        for phi in random_phases(20, 15) {
            let m = chain_closed_form(&cfg, phi);
            let scaled = chain_closed_form(&lossless, phi).scale(c(0.64, 0.0));
            assert!(m.max_abs_diff(&scaled) < 1e-15);
        }
    }

    #[test]
    fn chain_output_matches_propagation_and_brute_force() {
        for (n, eta) in [(1, 1.0), (2, 0.9), (5, 0.5), (17, 0.95)] {
            let cfg = ChainConfig::new(n, eta, c(0.6, -0.8), 1.0).unwrap();
            for phi in random_phases(200, 16 + n as u64) {
                let closed = chain_output(&cfg, phi);
                let brute = apply(
                    &chain_brute_force(&cfg, phi).unwrap(),
                    &FieldPair::upper_only(cfg.input_amplitude),
                );
                let walked = propagate_chain(&cfg, phi, &[]);
                assert!(closed.max_abs_diff(&brute) < 1e-11);
                assert!(closed.max_abs_diff(&walked) < 1e-11);
                let total = walked.total_intensity();
                assert!((total - cfg.output_intensity()).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn anticorrelation_basis_of_single_mzi() {
        let e0 = c(0.8, 0.6);
        for k in -20i32..=20 {
            let (a, b) = apply(&d_block(k as f64 * PI), &FieldPair::upper_only(e0)).intensities();
            let (bright, dark) = if a > b { (a, b) } else { (b, a) };
            assert!(dark < 1e-24, "k = {k}: dark = {dark}");
            assert!((bright - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bs_picture_examples() {
        let e0 = c(1.0, 0.0);
        let (u, l) = bs_anticorrelation(FRAC_PI_2, e0).intensities();
        assert!(u < 1e-30 && (l - 1.0).abs() < 1e-15);
        let (u, l) = bs_anticorrelation(-FRAC_PI_2, e0).intensities();
        assert!((u - 1.0).abs() < 1e-15 && l < 1e-30);
        let (u, l) = bs_anticorrelation(0.0, e0).intensities();
        assert!((u - 0.5).abs() < 1e-15 && (l - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bs_picture_matches_offset_mzi_picture() {
        let e0 = c(0.3, -1.1);
        for k in 0..1024 {
            let psi = -2.0 * PI + 4.0 * PI * k as f64 / 1024.0;
            let (u, l) = bs_anticorrelation(psi, e0).intensities();
            let (a, b) = apply(&d_block(mzi_phase_for(psi)), &FieldPair::upper_only(e0)).intensities();
            assert!((u - a).abs() < 1e-12 && (l - b).abs() < 1e-12, "psi = {psi}");
        }
    }

    #[test]
    fn magic_phases_darken_one_port() {
        for order in 1..=40 {
            for negative in [false, true] {
                let psi = MagicPhase::new(order, negative).unwrap().value();
                let (u, l) = bs_anticorrelation(psi, c(1.0, 0.0)).intensities();
                assert!(u.min(l) < 1e-24, "order {order}, negative {negative}");
            }
        }
        assert_eq!(MagicPhase::new(1, false).unwrap().value(), FRAC_PI_2);
        assert_eq!(MagicPhase::new(2, true).unwrap().value(), -1.5 * PI);
        assert!(MagicPhase::new(0, false).is_err());
    }

    #[test]
    fn chain_config_validation() {
        assert!(ChainConfig::new(0, 1.0, c(1.0, 0.0), 1.0).is_err());
        assert!(ChainConfig::new(1, 0.0, c(1.0, 0.0), 1.0).is_err());
        assert!(ChainConfig::new(1, 1.2, c(1.0, 0.0), 1.0).is_err());
        assert!(ChainConfig::new(1, 1.0, c(0.0, 0.0), 1.0).is_err());
        assert!(ChainConfig::new(1, 1.0, c(1.0, 0.0), 0.0).is_err());
        let cfg = ChainConfig::lossless(3).unwrap();
        assert_eq!(cfg.mzi_block_count(), 6);
        assert_eq!(cfg.equivalent_photon_number(), 12);
    }
}
