//! Dense complex linear algebra for small bipartite systems.
//!
//! Bipartite operators on `A ⊗ B` use the row/column index `i_A * dim_B + i_B`
//! everywhere, including the file formats of the CLI.

mod matrix;
mod spectral;

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

pub use matrix::{solve, ComplexMatrix};
pub use spectral::{eigh, SpectralDecomposition};

use crate::{Error, Result, Tolerances};

/// One tensor factor of a bipartite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Self {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }

    pub fn label(self) -> char {
        match self {
            Side::A => 'A',
            Side::B => 'B',
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// A square matrix equal to its adjoint up to the hermiticity tolerance.
///
/// Construction replaces the input by its Hermitian part, so downstream code
/// sees an exactly Hermitian buffer.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator(ComplexMatrix);

impl HermitianOperator {
    pub fn new(m: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        m.ensure_square()?;
        let deviation = m.hermiticity_deviation();
        if deviation > tol.hermiticity {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self(m.hermitian_part()))
    }

    /// Wraps a matrix that is Hermitian by construction.
    pub(crate) fn from_hermitian(m: ComplexMatrix) -> Self {
        debug_assert!(m.hermiticity_deviation() < 1e-8);
        Self(m.hermitian_part())
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self(ComplexMatrix::from_diagonal(diag))
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn spectral(&self, tol: &Tolerances) -> Result<SpectralDecomposition> {
        eig_hermitian(self, tol)
    }
}

/// A positive semidefinite Hermitian operator of unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(HermitianOperator);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        Self::from_hermitian(HermitianOperator::new(m, tol)?, tol)
    }

    pub fn from_hermitian(h: HermitianOperator, tol: &Tolerances) -> Result<Self> {
        let trace = h.trace();
        if (trace - 1.0).abs() > tol.trace {
            return Err(Error::TraceNotOne { trace });
        }
        let check = is_psd(&h, tol.psd)?;
        if !check.psd {
            return Err(Error::NotPositive {
                min_eigenvalue: check.min_eigenvalue,
            });
        }
        Ok(Self(h))
    }

    /// `|psi><psi| / <psi|psi>`.
    pub fn pure(psi: &[Complex64]) -> Self {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        Self(HermitianOperator::from_hermitian(
            ComplexMatrix::outer(psi, psi).scale(1.0 / norm),
        ))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(HermitianOperator(
            ComplexMatrix::identity(dim).scale(1.0 / dim as f64),
        ))
    }

    /// Convex combination `sum_k w_k rho_k`; weights must be a probability vector.
    pub fn mixture(weights: &[f64], states: &[DensityMatrix], tol: &Tolerances) -> Result<Self> {
        check_probability(weights, tol)?;
        let first = states.first().ok_or(Error::Empty)?;
        if weights.len() != states.len() {
            return Err(Error::DimensionMismatch {
                context: "mixture weights",
                expected: states.len(),
                actual: weights.len(),
            });
        }
        let mut acc = ComplexMatrix::zeros(first.dim(), first.dim());
        for (w, s) in weights.iter().zip(states) {
            if s.dim() != first.dim() {
                return Err(Error::DimensionMismatch {
                    context: "mixture states",
                    expected: first.dim(),
                    actual: s.dim(),
                });
            }
            acc += &s.matrix().scale(*w);
        }
        Ok(Self(HermitianOperator::from_hermitian(acc)))
    }

    pub(crate) fn from_psd_unchecked(m: ComplexMatrix) -> Self {
        Self(HermitianOperator::from_hermitian(m))
    }

    pub fn hermitian(&self) -> &HermitianOperator {
        &self.0
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.0.matrix()
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn purity(&self) -> f64 {
        self.matrix().hs_inner(self.matrix()).re
    }
}

pub(crate) fn check_probability(weights: &[f64], tol: &Tolerances) -> Result<()> {
    let sum: f64 = weights.iter().sum();
    let min = weights.iter().copied().fold(f64::INFINITY, f64::min);
    if weights.is_empty() || (sum - 1.0).abs() > tol.trace.max(1e-10) || min < 0.0 {
        return Err(Error::InvalidWeights { sum, min });
    }
    Ok(())
}

/// An operator on `A ⊗ B` together with its factor dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteOperator {
    dim_a: usize,
    dim_b: usize,
    matrix: ComplexMatrix,
}

impl BipartiteOperator {
    pub fn new(dim_a: usize, dim_b: usize, matrix: ComplexMatrix) -> Result<Self> {
        let n = matrix.ensure_square()?;
        if n != dim_a * dim_b {
            return Err(Error::DimensionMismatch {
                context: "bipartite operator",
                expected: dim_a * dim_b,
                actual: n,
            });
        }
        Ok(Self {
            dim_a,
            dim_b,
            matrix,
        })
    }

    pub fn zeros(dim_a: usize, dim_b: usize) -> Self {
        Self {
            dim_a,
            dim_b,
            matrix: ComplexMatrix::zeros(dim_a * dim_b, dim_a * dim_b),
        }
    }

    /// `sum_ij |i><j| ⊗ |j><i|` on `C^d ⊗ C^d`.
    pub fn swap(dim: usize) -> Self {
        let n = dim * dim;
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..dim {
            for j in 0..dim {
                m[(i * dim + j, j * dim + i)] = Complex64::new(1.0, 0.0);
            }
        }
        Self {
            dim_a: dim,
            dim_b: dim,
            matrix: m,
        }
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Entry `<a b| T |a' b'>`.
    #[inline]
    pub fn entry(&self, a: usize, b: usize, a2: usize, b2: usize) -> Complex64 {
        self.matrix[(a * self.dim_b + b, a2 * self.dim_b + b2)]
    }

    /// The `B`-operator `<a| T |a'>` (block of the A index pair).
    pub fn block(&self, a: usize, a2: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim_b, self.dim_b, |b, b2| self.entry(a, b, a2, b2))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim_a: self.dim_a,
            dim_b: self.dim_b,
            matrix: self.matrix.scale(s),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if (self.dim_a, self.dim_b) != (other.dim_a, other.dim_b) {
            return f64::INFINITY;
        }
        self.matrix.max_abs_diff(&other.matrix)
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// `(L ⊗ 1) T (R ⊗ 1)`.
    pub fn conjugate_a(&self, left: &ComplexMatrix, right: &ComplexMatrix) -> Self {
        let id = ComplexMatrix::identity(self.dim_b);
        let l = left.kron(&id);
        let r = right.kron(&id);
        Self {
            dim_a: left.rows(),
            dim_b: self.dim_b,
            matrix: &(&l * &self.matrix) * &r,
        }
    }

    /// `Tr_A[T (Y ⊗ 1)]`, a `B`-operator.
    pub fn contract_a(&self, y: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim_b, self.dim_b);
        for a in 0..self.dim_a {
            for a2 in 0..self.dim_a {
                let coeff = y[(a2, a)];
                if coeff == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for b in 0..self.dim_b {
                    for b2 in 0..self.dim_b {
                        out[(b, b2)] += self.entry(a, b, a2, b2) * coeff;
                    }
                }
            }
        }
        out
    }
}

/// Result of a positivity check; the extreme eigenvalues are always reported.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdCheck {
    pub psd: bool,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

pub fn eig_hermitian(m: &HermitianOperator, tol: &Tolerances) -> Result<SpectralDecomposition> {
    let (values, _) = eigh(m.matrix())?;
    let radius = values
        .first()
        .map(|v| v.abs())
        .unwrap_or(0.0)
        .max(values.last().map(|v| v.abs()).unwrap_or(0.0));
    SpectralDecomposition::new(m.matrix(), tol.cluster_gap(radius), tol.hermiticity)
}

/// `lambda_min >= -tol * max(1, lambda_max)`.
pub fn is_psd(m: &HermitianOperator, tol: f64) -> Result<PsdCheck> {
    psd_check(m.matrix(), tol)
}

pub(crate) fn psd_check(m: &ComplexMatrix, tol: f64) -> Result<PsdCheck> {
    let (values, _) = eigh(m)?;
    let min_eigenvalue = values.first().copied().unwrap_or(0.0);
    let max_eigenvalue = values.last().copied().unwrap_or(0.0);
    Ok(PsdCheck {
        psd: min_eigenvalue >= -tol * max_eigenvalue.max(1.0),
        min_eigenvalue,
        max_eigenvalue,
    })
}

pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<BipartiteOperator> {
    let da = a.ensure_square()?;
    let db = b.ensure_square()?;
    Ok(BipartiteOperator {
        dim_a: da,
        dim_b: db,
        matrix: a.kron(b),
    })
}

/// Traces out `side`, returning the operator on the remaining factor.
pub fn partial_trace(t: &BipartiteOperator, side: Side) -> ComplexMatrix {
    let (da, db) = (t.dim_a, t.dim_b);
    match side {
        Side::B => {
            ComplexMatrix::from_fn(da, da, |a, a2| (0..db).map(|b| t.entry(a, b, a2, b)).sum())
        }
        Side::A => {
            ComplexMatrix::from_fn(db, db, |b, b2| (0..da).map(|a| t.entry(a, b, a, b2)).sum())
        }
    }
}

/// Transpose on one factor, in the computational basis or in the eigenbasis
/// carried by `basis`.
pub fn partial_transpose(
    t: &BipartiteOperator,
    side: Side,
    basis: Option<&SpectralDecomposition>,
) -> Result<BipartiteOperator> {
    let (da, db) = (t.dim_a, t.dim_b);
    let factor_dim = match side {
        Side::A => da,
        Side::B => db,
    };
    let Some(basis) = basis else {
        return Ok(transpose_factor(t, side));
    };
    if basis.dim() != factor_dim {
        return Err(Error::DimensionMismatch {
            context: "partial transpose basis",
            expected: factor_dim,
            actual: basis.dim(),
        });
    }
    let u = basis.basis();
    let left = match side {
        Side::A => u.kron(&ComplexMatrix::identity(db)),
        Side::B => ComplexMatrix::identity(da).kron(u),
    };
    let rotated = BipartiteOperator {
        dim_a: da,
        dim_b: db,
        matrix: &(&left.adjoint() * &t.matrix) * &left,
    };
    let flipped = transpose_factor(&rotated, side);
    Ok(BipartiteOperator {
        dim_a: da,
        dim_b: db,
        matrix: &(&left * &flipped.matrix) * &left.adjoint(),
    })
}

fn transpose_factor(t: &BipartiteOperator, side: Side) -> BipartiteOperator {
    let (da, db) = (t.dim_a, t.dim_b);
    let n = da * db;
    let matrix = ComplexMatrix::from_fn(n, n, |r, c| {
        let (a, b, a2, b2) = (r / db, r % db, c / db, c % db);
        match side {
            Side::A => t.entry(a2, b, a, b2),
            Side::B => t.entry(a, b2, a2, b),
        }
    });
    BipartiteOperator {
        dim_a: da,
        dim_b: db,
        matrix,
    }
}

/// Linear extension of `B ⊗ A -> A ⊗ B`; factor dimensions are exchanged.
pub fn swap_factors(t: &BipartiteOperator) -> BipartiteOperator {
    let (da, db) = (t.dim_a, t.dim_b);
    let n = da * db;
    let matrix = ComplexMatrix::from_fn(n, n, |r, c| {
        // new index is (b, a) with new dim_b = da
        let (b, a, b2, a2) = (r / da, r % da, c / da, c % da);
        t.entry(a, b, a2, b2)
    });
    BipartiteOperator {
        dim_a: db,
        dim_b: da,
        matrix,
    }
}

pub fn hadamard_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.hadamard(b)
}

/// Moore-Penrose inverse square root of a state, with its support split.
#[derive(Clone, Debug)]
pub struct PseudoRoot {
    /// `rho^{-1/2}` on the support, zero on the kernel.
    pub inv_sqrt: HermitianOperator,
    /// `rho^{1/2}`.
    pub sqrt: HermitianOperator,
    /// Projection onto the support.
    pub support: HermitianOperator,
    /// `1 - support`.
    pub kernel: HermitianOperator,
    pub rank: usize,
    /// Clustered spectrum the roots were computed from.
    pub spectral: SpectralDecomposition,
}

impl PseudoRoot {
    pub fn is_faithful(&self) -> bool {
        self.rank == self.spectral.dim()
    }
}

/// Eigenvalues `p <= tol.rank * p_max` are treated as zero.
pub fn sqrt_pinv(rho: &DensityMatrix, tol: &Tolerances) -> Result<PseudoRoot> {
    let spectral = eig_hermitian(rho.hermitian(), tol)?;
    let threshold = support_threshold(&spectral, tol);
    let in_support = |p: f64| p > threshold;
    let inv_sqrt = spectral.apply_function(|p| {
        if in_support(p) {
            1.0 / libm::sqrt(p)
        } else {
            0.0
        }
    });
    let sqrt = spectral.apply_function(|p| if in_support(p) { libm::sqrt(p) } else { 0.0 });
    let support = spectral.apply_function(|p| if in_support(p) { 1.0 } else { 0.0 });
    let rank = spectral
        .eigenvalues()
        .iter()
        .zip(spectral.multiplicities())
        .filter(|(p, _)| in_support(**p))
        .map(|(_, m)| m)
        .sum();
    let kernel = &ComplexMatrix::identity(rho.dim()) - &support;
    Ok(PseudoRoot {
        inv_sqrt: HermitianOperator::from_hermitian(inv_sqrt),
        sqrt: HermitianOperator::from_hermitian(sqrt),
        support: HermitianOperator::from_hermitian(support),
        kernel: HermitianOperator::from_hermitian(kernel),
        rank,
        spectral,
    })
}

pub(crate) fn support_threshold(spectral: &SpectralDecomposition, tol: &Tolerances) -> f64 {
    tol.rank * spectral.max_eigenvalue().max(0.0)
}

fn check_support_vector(p: &[f64]) -> Result<()> {
    for (index, &value) in p.iter().enumerate() {
        if value.is_nan() || value <= 0.0 {
            return Err(Error::NonPositiveEntry { index, value });
        }
    }
    if p.is_empty() {
        return Err(Error::Empty);
    }
    Ok(())
}

/// `omega_ij = 2 / (p_i + p_j)`.
pub fn cauchy_matrix(p: &[f64]) -> Result<HermitianOperator> {
    check_support_vector(p)?;
    let n = p.len();
    Ok(HermitianOperator(ComplexMatrix::from_fn(n, n, |i, j| {
        Complex64::new(2.0 / (p[i] + p[j]), 0.0)
    })))
}

/// `H_ij = 2 sqrt(p_i p_j) / (p_i + p_j)`, the entrywise harmonic over
/// geometric mean. Unit diagonal.
pub fn harmonic_mean_matrix(p: &[f64]) -> Result<HermitianOperator> {
    check_support_vector(p)?;
    let n = p.len();
    Ok(HermitianOperator(ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(2.0 * libm::sqrt(p[i] * p[j]) / (p[i] + p[j]), 0.0)
        }
    })))
}

/// Pauli matrices `sigma_0..sigma_3`.
pub fn pauli(index: u8) -> Result<ComplexMatrix> {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let data: Vec<Complex64> = match index {
        0 => alloc::vec![l, o, o, l],
        1 => alloc::vec![o, l, l, o],
        2 => alloc::vec![o, -i, i, o],
        3 => alloc::vec![l, o, o, -l],
        other => return Err(Error::InvalidPauliIndex(other)),
    };
    ComplexMatrix::from_row_major(2, 2, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn real(dim: usize, e: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_real(dim, e).unwrap()
    }

    fn phi_plus() -> BipartiteOperator {
        let s = 1.0 / libm::sqrt(2.0);
        let psi = [s.into(), 0.0.into(), 0.0.into(), s.into()];
        BipartiteOperator::new(2, 2, ComplexMatrix::outer(&psi, &psi)).unwrap()
    }

    #[test]
    fn eig_sigma3_and_identity() {
        let s3 = HermitianOperator::new(pauli(3).unwrap(), &tol()).unwrap();
        let d = eig_hermitian(&s3, &tol()).unwrap();
        assert_eq!(d.eigenvalues(), &[1.0, -1.0]);
        assert!(d.projectors()[0].max_abs_diff(&ComplexMatrix::from_diagonal(&[1.0, 0.0])) < 1e-15);
        assert!(d.projectors()[1].max_abs_diff(&ComplexMatrix::from_diagonal(&[0.0, 1.0])) < 1e-15);

        let id = HermitianOperator::identity(2);
        let d = eig_hermitian(&id, &tol()).unwrap();
        assert_eq!(d.eigenvalues(), &[1.0]);
        assert_eq!(d.multiplicities(), &[2]);
        assert!(d.projectors()[0].max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn eig_rejects_rectangular() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            HermitianOperator::new(m, &tol()),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn psd_examples() {
        let c = is_psd(&HermitianOperator::from_diagonal(&[1.0, 0.0]), 1e-9).unwrap();
        assert!(c.psd);
        assert_eq!(c.min_eigenvalue, 0.0);
        let c = is_psd(
            &HermitianOperator::new(pauli(3).unwrap(), &tol()).unwrap(),
            1e-9,
        )
        .unwrap();
        assert!(!c.psd);
        assert_eq!(c.min_eigenvalue, -1.0);
        // partial transpose of the Bell projector is SWAP/2
        let pt = partial_transpose(&phi_plus(), Side::A, None).unwrap();
        let c = psd_check(pt.matrix(), 1e-9).unwrap();
        assert!(!c.psd);
        assert!((c.min_eigenvalue + 0.5).abs() < 1e-14);
    }

    #[test]
    fn tensor_examples() {
        let s3 = pauli(3).unwrap();
        let t = tensor(&s3, &s3).unwrap();
        assert_eq!(
            t.matrix(),
            &ComplexMatrix::from_diagonal(&[1.0, -1.0, -1.0, 1.0])
        );
        let ket0 = real(2, &[1.0, 0.0, 0.0, 0.0]);
        let t = tensor(&ket0, &pauli(1).unwrap()).unwrap();
        let expected = real(
            4,
            &[
                0.0, 1.0, 0.0, 0.0, //
                1.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0,
            ],
        );
        assert_eq!(t.matrix(), &expected);
    }

    #[test]
    fn partial_trace_examples() {
        let rho_a = real(2, &[0.7, 0.2, 0.2, 0.3]);
        let rho_b = real(2, &[0.4, 0.0, 0.0, 0.6]);
        let t = tensor(&rho_a, &rho_b).unwrap();
        assert!(partial_trace(&t, Side::B).max_abs_diff(&rho_a) < 1e-15);
        assert!(partial_trace(&t, Side::A).max_abs_diff(&rho_b) < 1e-15);

        let half = ComplexMatrix::identity(2).scale(0.5);
        assert!(partial_trace(&phi_plus(), Side::B).max_abs_diff(&half) < 1e-15);

        let swap = BipartiteOperator::swap(2);
        assert_eq!(partial_trace(&swap, Side::B), ComplexMatrix::identity(2));
    }

    #[test]
    fn partial_transpose_examples() {
        let rho_a = real(2, &[0.7, 0.2, 0.2, 0.3]);
        let rho_b = real(2, &[0.4, 0.1, 0.1, 0.6]);
        let t = tensor(&rho_a, &rho_b).unwrap();
        assert_eq!(partial_transpose(&t, Side::A, None).unwrap(), t);

        let pt = partial_transpose(&phi_plus(), Side::A, None).unwrap();
        assert!(pt.max_abs_diff(&BipartiteOperator::swap(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn partial_transpose_basis_mismatch() {
        let basis = eig_hermitian(&HermitianOperator::identity(3), &tol()).unwrap();
        assert!(matches!(
            partial_transpose(&phi_plus(), Side::A, Some(&basis)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hadamard_examples() {
        let a = ComplexMatrix::from_row_major(
            2,
            2,
            vec![
                Complex64::new(1.0, 2.0),
                Complex64::new(3.0, -1.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(-2.0, 1.0),
            ],
        )
        .unwrap();
        let ones = ComplexMatrix::from_fn(2, 2, |_, _| 1.0.into());
        assert_eq!(hadamard_product(&a, &ones).unwrap(), a);
        let diag = hadamard_product(&a, &ComplexMatrix::identity(2)).unwrap();
        assert_eq!(diag[(0, 1)], Complex64::new(0.0, 0.0));
        assert_eq!(diag[(1, 1)], a[(1, 1)]);
        assert!(hadamard_product(&a, &ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn sqrt_pinv_examples() {
        let r = sqrt_pinv(&DensityMatrix::maximally_mixed(2), &tol()).unwrap();
        assert!(
            r.inv_sqrt
                .matrix()
                .max_abs_diff(&ComplexMatrix::identity(2).scale(libm::sqrt(2.0)))
                < 1e-14
        );

        let pure = DensityMatrix::pure(&[1.0.into(), 0.0.into()]);
        let r = sqrt_pinv(&pure, &tol()).unwrap();
        assert_eq!(r.rank, 1);
        assert!(
            r.inv_sqrt
                .matrix()
                .max_abs_diff(&ComplexMatrix::from_diagonal(&[1.0, 0.0]))
                < 1e-15
        );
        assert!(
            r.kernel
                .matrix()
                .max_abs_diff(&ComplexMatrix::from_diagonal(&[0.0, 1.0]))
                < 1e-15
        );

        let rho = DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.9, 0.1]), &tol()).unwrap();
        let r = sqrt_pinv(&rho, &tol()).unwrap();
        let expected =
            ComplexMatrix::from_diagonal(&[1.0 / libm::sqrt(0.9), 1.0 / libm::sqrt(0.1)]);
        assert!(r.inv_sqrt.matrix().max_abs_diff(&expected) < 1e-14);
        assert!(r.is_faithful());
    }

    #[test]
    fn swap_factors_examples() {
        let rho_a = real(2, &[0.7, 0.2, 0.2, 0.3]);
        let rho_b = real(3, &[0.5, 0.0, 0.1, 0.0, 0.2, 0.0, 0.1, 0.0, 0.3]);
        let t = tensor(&rho_a, &rho_b).unwrap();
        let swapped = swap_factors(&t);
        assert_eq!(swapped.dim_a(), 3);
        assert!(swapped.max_abs_diff(&tensor(&rho_b, &rho_a).unwrap()) < 1e-15);
        let swap = BipartiteOperator::swap(3);
        assert_eq!(swap_factors(&swap), swap);
    }

    #[test]
    fn cauchy_examples() {
        let w = cauchy_matrix(&[0.5, 0.5]).unwrap();
        assert_eq!(w.matrix(), &real(2, &[2.0, 2.0, 2.0, 2.0]));
        // 2 / (1 + 1)
        assert_eq!(cauchy_matrix(&[1.0]).unwrap().matrix(), &real(1, &[1.0]));
        let w = cauchy_matrix(&[0.9, 0.1]).unwrap();
        assert!(
            w.matrix()
                .max_abs_diff(&real(2, &[10.0 / 9.0, 2.0, 2.0, 10.0]))
                < 1e-14
        );
        // det = 100/9 - 4 > 0 with positive trace
        assert!(is_psd(&w, 0.0).unwrap().min_eigenvalue > 0.0);
        assert!(matches!(
            cauchy_matrix(&[0.5, 0.0]),
            Err(Error::NonPositiveEntry { index: 1, .. })
        ));
    }

    #[test]
    fn harmonic_mean_examples() {
        let h = harmonic_mean_matrix(&[0.25; 4]).unwrap();
        assert!(
            h.matrix()
                .max_abs_diff(&ComplexMatrix::from_fn(4, 4, |_, _| 1.0.into()))
                < 1e-15
        );
        let h = harmonic_mean_matrix(&[0.9, 0.1]).unwrap();
        assert!((h.matrix()[(0, 1)].re - 0.6).abs() < 1e-15);
        assert_eq!(h.matrix()[(1, 1)].re, 1.0);
        assert!(harmonic_mean_matrix(&[-0.1, 1.1]).is_err());
    }

    #[test]
    fn density_validation() {
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.5, 0.4]), &tol()),
            Err(Error::TraceNotOne { .. })
        ));
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::from_diagonal(&[1.5, -0.5]), &tol()),
            Err(Error::NotPositive { .. })
        ));
    }
}
