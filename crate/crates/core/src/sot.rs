//! States over time and two-time expectation values.
//!
//! The canonical state over time of a process `(E, rho)` is
//! `E ⋆ rho = ½{rho ⊗ 1, J[E]}`. It reproduces the sequential-measurement
//! expectation values of light-touch observables (spectrum `{λ}` or `{±λ}`).
//! For `m`-qubit systems the same operator is the pseudo-density matrix built
//! from Pauli correlations.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::channels::{Process, SuperOp};
use crate::operators::{
    eig_hermitian, pauli, BipartiteOperator, ComplexMatrix, DensityMatrix, HermitianOperator,
    SpectralDecomposition,
};
use crate::{random, Error, Result, Tolerances};

/// A Hermitian operator with its clustered spectral decomposition.
#[derive(Clone, Debug)]
pub struct Observable {
    matrix: HermitianOperator,
    spectral: SpectralDecomposition,
}

impl Observable {
    pub fn new(matrix: HermitianOperator, tol: &Tolerances) -> Result<Self> {
        let spectral = eig_hermitian(&matrix, tol)?;
        Ok(Self { matrix, spectral })
    }

    pub fn from_matrix(m: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        Self::new(HermitianOperator::new(m, tol)?, tol)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.matrix.matrix()
    }

    pub fn spectral(&self) -> &SpectralDecomposition {
        &self.spectral
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// `½{rho ⊗ 1, J[E]}`.
pub fn star_product(e: &SuperOp, rho: &DensityMatrix) -> Result<BipartiteOperator> {
    if rho.dim() != e.dim_in() {
        return Err(Error::DimensionMismatch {
            context: "state over time input",
            expected: e.dim_in(),
            actual: rho.dim(),
        });
    }
    let j = e.jamiolkowski();
    let left = rho.matrix().kron(&ComplexMatrix::identity(e.dim_out()));
    BipartiteOperator::new(
        e.dim_in(),
        e.dim_out(),
        anticommutator_half(&left, j.matrix()),
    )
}

/// State over time for a channel `F: B -> A` with input `rho_b`, written on
/// `A ⊗ B` as `½{1 ⊗ rho_b, J[F*]}`.
pub fn reverse_star(f: &SuperOp, rho_b: &DensityMatrix) -> Result<BipartiteOperator> {
    if rho_b.dim() != f.dim_in() {
        return Err(Error::DimensionMismatch {
            context: "reverse state over time input",
            expected: f.dim_in(),
            actual: rho_b.dim(),
        });
    }
    let j = f.hs_adjoint().jamiolkowski();
    let right = ComplexMatrix::identity(f.dim_out()).kron(rho_b.matrix());
    BipartiteOperator::new(
        f.dim_out(),
        f.dim_in(),
        anticommutator_half(&right, j.matrix()),
    )
}

fn anticommutator_half(x: &ComplexMatrix, y: &ComplexMatrix) -> ComplexMatrix {
    (&(x * y) + &(y * x)).scale(0.5)
}

/// Spectrum `{λ}` or `{λ, -λ}` with `λ >= 0`, after clustering at
/// `tol.cluster * max(1, ‖M‖)`.
pub fn is_light_touch(m: &Observable, tol: &Tolerances) -> bool {
    let radius = m.spectral.spectral_radius();
    let gap = tol.cluster_gap(radius);
    match *m.spectral.eigenvalues() {
        [lambda] => lambda >= -gap,
        [hi, lo] => (hi + lo).abs() < gap && hi > 0.0,
        _ => false,
    }
}

/// `sum_i λ_i Tr[E(P_i rho P_i) N]` over the clustered spectrum of `M`.
pub fn two_time_expectation(
    m: &Observable,
    n: &Observable,
    p: &Process,
    tol: &Tolerances,
) -> Result<f64> {
    let e = p.channel();
    check_dim("first observable", e.dim_in(), m.dim())?;
    check_dim("second observable", e.dim_out(), n.dim())?;
    let updated = measured_average(m, p.input_state().matrix());
    let out = e.apply(&updated)?;
    real_part(out.hs_inner(n.matrix()).conj(), tol)
}

/// `sum_i λ_i P_i rho P_i`.
fn measured_average(m: &Observable, rho: &ComplexMatrix) -> ComplexMatrix {
    let d = rho.dim();
    let mut acc = ComplexMatrix::zeros(d, d);
    for (lambda, proj) in m.spectral.eigenvalues().iter().zip(m.spectral.projectors()) {
        if *lambda != 0.0 {
            acc += &(&(proj * rho) * proj).scale(*lambda);
        }
    }
    acc
}

fn real_part(z: Complex64, tol: &Tolerances) -> Result<f64> {
    if z.im.abs() > tol.imaginary {
        return Err(Error::ImaginaryResidue { residue: z.im });
    }
    Ok(z.re)
}

fn check_dim(context: &'static str, expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch {
            context,
            expected,
            actual,
        });
    }
    Ok(())
}

/// Outcome of [`representability_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Representability {
    pub representable: bool,
    /// `|Tr[R (M ⊗ N)] - <M, N>|`.
    pub residual: f64,
}

pub fn representability_check(
    r: &BipartiteOperator,
    m: &Observable,
    n: &Observable,
    p: &Process,
    tol: f64,
    tolerances: &Tolerances,
) -> Result<Representability> {
    check_dim("representing operator (A)", m.dim(), r.dim_a())?;
    check_dim("representing operator (B)", n.dim(), r.dim_b())?;
    let predicted = r.matrix().hs_inner(&m.matrix().kron(n.matrix())).conj().re;
    let actual = two_time_expectation(m, n, p, tolerances)?;
    let residual = (predicted - actual).abs();
    Ok(Representability {
        representable: residual <= tol,
        residual,
    })
}

/// Flat index of a Pauli label: the first qubit is the most significant digit.
pub fn pauli_label_index(alpha: &[u8]) -> Result<usize> {
    alpha.iter().try_fold(0usize, |acc, &a| {
        if a > 3 {
            Err(Error::InvalidPauliIndex(a))
        } else {
            Ok(acc * 4 + a as usize)
        }
    })
}

/// Digits of a flat Pauli index for `m` qubits.
pub fn pauli_label(index: usize, m: usize) -> Vec<u8> {
    let mut digits = alloc::vec![0u8; m];
    let mut rest = index;
    for d in digits.iter_mut().rev() {
        *d = (rest % 4) as u8;
        rest /= 4;
    }
    digits
}

/// `sigma_{alpha_1} ⊗ ... ⊗ sigma_{alpha_m}`.
pub fn pauli_string(alpha: &[u8]) -> Result<ComplexMatrix> {
    let mut acc = ComplexMatrix::identity(1);
    for &a in alpha {
        acc = acc.kron(&pauli(a)?);
    }
    Ok(acc)
}

/// [`pauli_string`] wrapped as an observable.
pub fn pauli_observable(alpha: &[u8], tol: &Tolerances) -> Result<Observable> {
    Observable::new(HermitianOperator::from_hermitian(pauli_string(alpha)?), tol)
}

/// Two-time Pauli correlations `<sigma_alpha, sigma_beta>` for `m` qubits per side.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationTable {
    qubits: usize,
    /// Row-major over `(alpha, beta)` flat indices, `4^m x 4^m`.
    values: Vec<f64>,
}

impl CorrelationTable {
    /// Builds a table from `(alpha, beta, value)` triples; every pair must appear.
    pub fn from_entries(
        qubits: usize,
        entries: impl IntoIterator<Item = (usize, usize, f64)>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let size = 1usize << (2 * qubits);
        let mut values: Vec<Option<f64>> = alloc::vec![None; size * size];
        for (alpha, beta, value) in entries {
            if alpha >= size || beta >= size {
                return Err(Error::InvalidTableEntry { alpha, beta, value });
            }
            values[alpha * size + beta] = Some(value);
        }
        let mut dense = Vec::with_capacity(size * size);
        for (k, v) in values.into_iter().enumerate() {
            dense.push(v.ok_or(Error::IncompleteTable {
                alpha: k / size,
                beta: k % size,
            })?);
        }
        Self::new(qubits, dense, tol)
    }

    pub fn new(qubits: usize, values: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        let size = 1usize << (2 * qubits);
        if values.len() != size * size {
            return Err(Error::BadEntryCount {
                expected: size * size,
                actual: values.len(),
            });
        }
        let slack = tol.trace.max(1e-9);
        for (k, &value) in values.iter().enumerate() {
            let bad = !value.is_finite()
                || value.abs() > 1.0 + slack
                || (k == 0 && (value - 1.0).abs() > slack);
            if bad {
                return Err(Error::InvalidTableEntry {
                    alpha: k / size,
                    beta: k % size,
                    value,
                });
            }
        }
        Ok(Self { qubits, values })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    /// Number of Pauli labels per side, `4^m`.
    pub fn labels(&self) -> usize {
        1 << (2 * self.qubits)
    }

    pub fn get(&self, alpha: usize, beta: usize) -> f64 {
        self.values[alpha * self.labels() + beta]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// `4^{-m} sum <sigma_alpha, sigma_beta> sigma_alpha ⊗ sigma_beta`.
pub fn pdm_from_correlations(t: &CorrelationTable) -> Result<BipartiteOperator> {
    let m = t.qubits();
    let labels = t.labels();
    let d = 1usize << m;
    let paulis: Vec<ComplexMatrix> = (0..labels)
        .map(|k| pauli_string(&pauli_label(k, m)))
        .collect::<Result<_>>()?;
    let mut acc = ComplexMatrix::zeros(d * d, d * d);
    for (alpha, sa) in paulis.iter().enumerate() {
        for (beta, sb) in paulis.iter().enumerate() {
            let v = t.get(alpha, beta);
            if v != 0.0 {
                acc += &sa.kron(sb).scale(v);
            }
        }
    }
    BipartiteOperator::new(d, d, acc.scale(1.0 / labels as f64))
}

/// Table of two-time expectations over all Pauli pairs of an `m`-qubit process.
pub fn correlations_from_process(
    p: &Process,
    m: usize,
    tol: &Tolerances,
) -> Result<CorrelationTable> {
    let d = 1usize << m;
    let e = p.channel();
    for dim in [e.dim_in(), e.dim_out()] {
        if dim != d {
            return Err(Error::NotQubits { dim, qubits: m });
        }
    }
    let labels = 1usize << (2 * m);
    let paulis: Vec<Observable> = (0..labels)
        .map(|k| pauli_observable(&pauli_label(k, m), tol))
        .collect::<Result<_>>()?;
    let mut values = Vec::with_capacity(labels * labels);
    for sa in &paulis {
        let out = e.apply(&measured_average(sa, p.input_state().matrix()))?;
        for sb in &paulis {
            values.push(real_part(out.hs_inner(sb.matrix()).conj(), tol)?);
        }
    }
    CorrelationTable::new(m, values, tol)
}

/// `λ (2P - 1)` with `P` a random projector of random rank and `λ ∈ (0, 1]`;
/// rank 0 or full rank gives `∓λ·1`, and full rank is the `{λ}` case.
pub fn random_light_touch<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    tol: &Tolerances,
) -> Result<Observable> {
    let rank = rng.random_range(1..=dim);
    let lambda: f64 = 1.0 - rng.random::<f64>();
    let p = random::projector(rng, dim, rank);
    let m = (&p.scale(2.0) - &ComplexMatrix::identity(dim)).scale(lambda);
    Observable::new(HermitianOperator::from_hermitian(m), tol)
}

/// A pair of observables whose two-time expectation is not represented by
/// the state over time.
#[derive(Clone, Debug)]
pub struct NonRepresentableWitness {
    pub first: Observable,
    pub second: Observable,
    pub residual: f64,
    pub attempts: usize,
}

/// Random search for a non-light-touch first observable (two-level spectrum
/// `{a, b}` with `a != ±b`, random eigenprojector) paired with a random
/// Hermitian second observable, until the representability residual of
/// `E ⋆ rho` exceeds `threshold`.
pub fn find_non_representable<R: Rng + ?Sized>(
    rng: &mut R,
    p: &Process,
    threshold: f64,
    max_attempts: usize,
    tol: &Tolerances,
) -> Result<Option<NonRepresentableWitness>> {
    let (d_in, d_out) = (p.channel().dim_in(), p.channel().dim_out());
    let sot = star_product(p.channel(), p.input_state())?;
    for attempt in 1..=max_attempts {
        let rank = rng.random_range(1..d_in.max(2));
        let proj = random::projector(rng, d_in, rank.min(d_in));
        let a: f64 = rng.random_range(-1.0..1.0);
        let b: f64 = rng.random_range(-1.0..1.0);
        let m = &proj.scale(a) + &(&ComplexMatrix::identity(d_in) - &proj).scale(b);
        let first = Observable::new(HermitianOperator::from_hermitian(m), tol)?;
        if is_light_touch(&first, tol) {
            continue;
        }
        let second = Observable::new(
            HermitianOperator::from_hermitian(random::hermitian(rng, d_out)),
            tol,
        )?;
        let check = representability_check(&sot, &first, &second, p, threshold, tol)?;
        if !check.representable {
            return Ok(Some(NonRepresentableWitness {
                first,
                second,
                residual: check.residual,
                attempts: attempt,
            }));
        }
    }
    Ok(None)
}
