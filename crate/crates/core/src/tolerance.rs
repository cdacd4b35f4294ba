/// Numerical thresholds threaded through every check.
///
/// All comparisons in the crate read from one of these fields, so a report
/// produced with a given `Tolerances` value is reproducible bit for bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max-norm bound on `M - M^dag` for a matrix to count as Hermitian.
    pub hermiticity: f64,
    /// Relative slack for positivity: `lambda_min >= -psd * max(1, lambda_max)`.
    pub psd: f64,
    /// Bound on `|Tr rho - 1|` for density matrices.
    pub trace: f64,
    /// Eigenvalues closer than `cluster * max(1, spectral radius)` share a projector.
    pub cluster: f64,
    /// An eigenvalue `p` of a state is treated as zero when `p <= rank * p_max`.
    pub rank: f64,
    /// Largest imaginary part discarded from a quantity that must be real.
    pub imaginary: f64,
    /// Verdict threshold for the compatibility test and the PPT check.
    pub verdict: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-10,
            psd: 1e-9,
            trace: 1e-9,
            cluster: 1e-8,
            rank: 1e-12,
            imaginary: 1e-9,
            verdict: 1e-9,
        }
    }
}

impl Tolerances {
    /// Default thresholds with a different verdict tolerance.
    pub fn with_verdict(verdict: f64) -> Self {
        Self {
            verdict,
            ..Self::default()
        }
    }

    /// Absolute clustering gap for a spectrum of the given radius.
    pub fn cluster_gap(&self, spectral_radius: f64) -> f64 {
        self.cluster * spectral_radius.max(1.0)
    }
}
