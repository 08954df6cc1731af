//! 2x2 complex matrices and two-port field vectors.

use core::ops::Mul;

use num_complex::Complex64;

/// Complex field amplitude (dimensionless).
pub type ComplexAmplitude = Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Linear two-port transfer matrix, row-major.
///
/// Composition follows the optical path right to left: light that passes
/// `a` and then `b` sees `b * a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    /// Upper output from upper input.
    pub a11: Complex64,
    /// Upper output from lower input.
    pub a12: Complex64,
    /// Lower output from upper input.
    pub a21: Complex64,
    /// Lower output from lower input.
    pub a22: Complex64,
}

impl TransferMatrix {
    /// The identity.
    pub const IDENTITY: TransferMatrix = TransferMatrix::new(ONE, ZERO, ZERO, ONE);

    /// Builds a matrix from its entries in row-major order.
    pub const fn new(a11: Complex64, a12: Complex64, a21: Complex64, a22: Complex64) -> Self {
        TransferMatrix { a11, a12, a21, a22 }
    }

    /// `diag(a, b)`.
    pub const fn diagonal(a: Complex64, b: Complex64) -> Self {
        TransferMatrix::new(a, ZERO, ZERO, b)
    }

    /// Multiplies every entry by `s`.
    pub fn scale(&self, s: Complex64) -> Self {
        TransferMatrix::new(self.a11 * s, self.a12 * s, self.a21 * s, self.a22 * s)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        TransferMatrix::new(
            self.a11.conj(),
            self.a21.conj(),
            self.a12.conj(),
            self.a22.conj(),
        )
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        TransferMatrix::new(
            self.a11.conj(),
            self.a12.conj(),
            self.a21.conj(),
            self.a22.conj(),
        )
    }

    /// Determinant.
    pub fn det(&self) -> Complex64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> [Complex64; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &TransferMatrix) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Default for TransferMatrix {
    fn default() -> Self {
        TransferMatrix::IDENTITY
    }
}

impl Mul for TransferMatrix {
    type Output = TransferMatrix;

    fn mul(self, rhs: TransferMatrix) -> TransferMatrix {
        mat_mul(&self, &rhs)
    }
}

impl Mul<FieldPair> for TransferMatrix {
    type Output = FieldPair;

    fn mul(self, rhs: FieldPair) -> FieldPair {
        apply(&self, &rhs)
    }
}

/// Field amplitudes on the two arms of an interferometer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPair {
    /// Upper arm amplitude.
    pub upper: Complex64,
    /// Lower arm amplitude.
    pub lower: Complex64,
}

impl FieldPair {
    /// Builds a pair from its two amplitudes.
    pub const fn new(upper: Complex64, lower: Complex64) -> Self {
        FieldPair { upper, lower }
    }

    /// A field entering the upper port only, `[e0; 0]`.
    pub const fn upper_only(e0: Complex64) -> Self {
        FieldPair::new(e0, ZERO)
    }

    /// `|upper|^2`.
    pub fn upper_intensity(&self) -> f64 {
        self.upper.norm_sqr()
    }

    /// `|lower|^2`.
    pub fn lower_intensity(&self) -> f64 {
        self.lower.norm_sqr()
    }

    /// `(|upper|^2, |lower|^2)`.
    pub fn intensities(&self) -> (f64, f64) {
        (self.upper_intensity(), self.lower_intensity())
    }

    /// Sum of both arm intensities.
    pub fn total_intensity(&self) -> f64 {
        self.upper_intensity() + self.lower_intensity()
    }

    /// Largest modulus of the amplitude differences.
    pub fn max_abs_diff(&self, other: &FieldPair) -> f64 {
        (self.upper - other.upper)
            .norm()
            .max((self.lower - other.lower).norm())
    }
}

/// Matrix product `a * b`.
pub fn mat_mul(a: &TransferMatrix, b: &TransferMatrix) -> TransferMatrix {
    TransferMatrix::new(
        a.a11 * b.a11 + a.a12 * b.a21,
        a.a11 * b.a12 + a.a12 * b.a22,
        a.a21 * b.a11 + a.a22 * b.a21,
        a.a21 * b.a12 + a.a22 * b.a22,
    )
}

/// `m` raised to the `n`th power by repeated squaring; `n = 0` gives the identity.
pub fn mat_pow(m: &TransferMatrix, n: u32) -> TransferMatrix {
    let mut result = TransferMatrix::IDENTITY;
    let mut base = *m;
    let mut exp = n;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mat_mul(&result, &base);
        }
        exp >>= 1;
        if exp > 0 {
            base = mat_mul(&base, &base);
        }
    }
    result
}

/// Matrix-vector product.
pub fn apply(m: &TransferMatrix, v: &FieldPair) -> FieldPair {
    FieldPair::new(
        m.a11 * v.upper + m.a12 * v.lower,
        m.a21 * v.upper + m.a22 * v.lower,
    )
}

/// True when every entry of `m^dagger m - I` has modulus below `tol`.
pub fn is_unitary(m: &TransferMatrix, tol: f64) -> bool {
    mat_mul(&m.adjoint(), m).max_abs_diff(&TransferMatrix::IDENTITY) < tol
}
