//! Temporal channels of bipartite operators and the compatibility test.
//!
//! For `tau` on `A ⊗ B` with marginal `rho_A = sum_i p_i |i><i|`, the temporal
//! channel `E: A -> B` is the Hermitian-preserving trace-preserving map with
//! `E ⋆ rho_A = tau`. In the eigenbasis of `rho_A`,
//!
//! `E(|i><j|) = 2 / (p_i + p_j) · Tr_A[tau (|j><i| ⊗ 1)]`,
//!
//! for `p_i, p_j > 0`. Kernel directions map to `1/n` on the diagonal and to 0
//! off it. `E` factors as a generalized dephasing `D` followed by a pretty good
//! measure-and-prepare map `G`, and it is completely positive exactly when the
//! dephased, distorted partial transpose `((T ∘ D) ⊗ id)(tau_rho)` is PSD.
//!
//! Every function taking a [`Side`] treats `Side::B` by exchanging the factors,
//! so the channel for side B maps `B -> A`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::channels::{compose, CptpDiagnostics, SuperOp};
use crate::operators::{
    check_probability, eig_hermitian, eigh, partial_trace, partial_transpose, psd_check, solve,
    sqrt_pinv, support_threshold, swap_factors, BipartiteOperator, ComplexMatrix, DensityMatrix,
    HermitianOperator, Side, SpectralDecomposition,
};
use crate::sot::star_product;
use crate::{Error, Result, Tolerances};

/// `tau` with the conditioning factor first.
fn oriented(tau: &BipartiteOperator, side: Side) -> BipartiteOperator {
    match side {
        Side::A => tau.clone(),
        Side::B => swap_factors(tau),
    }
}

/// Validates `tau` (Hermitian, unit trace) and returns both marginals.
pub fn marginals(
    tau: &BipartiteOperator,
    tol: &Tolerances,
) -> Result<(DensityMatrix, DensityMatrix)> {
    let deviation = tau.matrix().hermiticity_deviation();
    if deviation > tol.hermiticity {
        return Err(Error::NotHermitian { deviation });
    }
    let trace = tau.trace().re;
    if (trace - 1.0).abs() > tol.trace {
        return Err(Error::TraceNotOne { trace });
    }
    let a = marginal(tau, Side::A, tol)?;
    let b = marginal(tau, Side::B, tol)?;
    Ok((a, b))
}

fn marginal(tau: &BipartiteOperator, side: Side, tol: &Tolerances) -> Result<DensityMatrix> {
    let m = partial_trace(tau, side.other()).hermitian_part();
    DensityMatrix::new(m, tol).map_err(|e| Error::InvalidMarginal {
        context: "bipartite operator",
        side: side.label(),
        reason: match e {
            Error::NotPositive { .. } => "not positive semidefinite",
            Error::TraceNotOne { .. } => "trace is not 1",
            Error::NotHermitian { .. } => "not hermitian",
            _ => "invalid",
        },
    })
}

fn conditioning_marginal(
    tau: &BipartiteOperator,
    side: Side,
    tol: &Tolerances,
) -> Result<(BipartiteOperator, DensityMatrix)> {
    let (a, b) = marginals(tau, tol)?;
    let rho = match side {
        Side::A => a,
        Side::B => b,
    };
    Ok((oriented(tau, side), rho))
}

/// The Hermitian-preserving trace-preserving map reproducing `tau` as a state
/// over time from `side`.
pub fn temporal_channel(tau: &BipartiteOperator, side: Side, tol: &Tolerances) -> Result<SuperOp> {
    let (t, rho) = conditioning_marginal(tau, side, tol)?;
    let spectral = eig_hermitian(rho.hermitian(), tol)?;
    Ok(channel_from_oriented(&t, &spectral, tol))
}

fn channel_from_oriented(
    t: &BipartiteOperator,
    spectral: &SpectralDecomposition,
    tol: &Tolerances,
) -> SuperOp {
    let (m, n) = (t.dim_a(), t.dim_b());
    let u = spectral.basis();
    let p = spectral.point_spectrum();
    let threshold = support_threshold(spectral, tol);
    let rotated = t.conjugate_a(&u.adjoint(), u);

    let mut choi = ComplexMatrix::zeros(m * n, m * n);
    for i in 0..m {
        for j in 0..m {
            let image = if p[i] > threshold && p[j] > threshold {
                rotated.block(j, i).scale(2.0 / (p[i] + p[j]))
            } else if i == j {
                ComplexMatrix::identity(n).scale(1.0 / n as f64)
            } else {
                continue;
            };
            for a in 0..n {
                for b in 0..n {
                    choi[(i * n + a, j * n + b)] = image[(a, b)];
                }
            }
        }
    }
    let eigen_choi = BipartiteOperator::new(m, n, choi).expect("square by construction");
    SuperOp::from_choi(eigen_choi.conjugate_a(&u.conj(), &u.transpose()))
}

/// Solves `½{rho ⊗ 1, X} = tau` for `X = J[E]` by a dense solve of the
/// vectorized equation. Requires a faithful marginal.
pub fn sylvester_oracle(
    tau: &BipartiteOperator,
    side: Side,
    tol: &Tolerances,
) -> Result<BipartiteOperator> {
    let (t, rho) = conditioning_marginal(tau, side, tol)?;
    let root = sqrt_pinv(&rho, tol)?;
    if !root.is_faithful() {
        return Err(Error::NotFaithful {
            rank: root.rank,
            dim: rho.dim(),
        });
    }
    let (m, n) = (t.dim_a(), t.dim_b());
    let size = m * n;
    let l = rho.matrix().kron(&ComplexMatrix::identity(n));
    let id = ComplexMatrix::identity(size);
    // row-major vec: vec(L X) = (L ⊗ 1) vec X, vec(X L) = (1 ⊗ L^T) vec X
    let k = &l.kron(&id) + &id.kron(&l.transpose());
    let rhs: Vec<Complex64> = t.matrix().as_slice().iter().map(|z| z * 2.0).collect();
    let x = solve(&k, &rhs)?;
    BipartiteOperator::new(m, n, ComplexMatrix::from_row_major(size, size, x)?)
}

/// `D(A) = sum_{k,l} H_kl P_k A P_l + Tr[P_perp A] 1/m` over the spectral
/// projectors of `rho` in its support, `H_kl = 2 sqrt(p_k p_l) / (p_k + p_l)`.
pub fn dephasing_channel(rho: &DensityMatrix, tol: &Tolerances) -> Result<SuperOp> {
    let spectral = eig_hermitian(rho.hermitian(), tol)?;
    let threshold = support_threshold(&spectral, tol);
    let m = rho.dim();
    let support: Vec<(f64, &ComplexMatrix)> = spectral
        .eigenvalues()
        .iter()
        .zip(spectral.projectors())
        .filter(|(p, _)| **p > threshold)
        .map(|(p, proj)| (*p, proj))
        .collect();
    let mut kernel = ComplexMatrix::identity(m);
    for (_, proj) in &support {
        kernel = &kernel - proj;
    }
    let has_kernel = support.iter().map(|(_, p)| p.trace().re).sum::<f64>() < m as f64 - 0.5;
    Ok(SuperOp::from_map(m, m, |x| {
        let mut out = ComplexMatrix::zeros(m, m);
        for (pk, proj_k) in &support {
            let left = *proj_k * x;
            for (pl, proj_l) in &support {
                let h = 2.0 * libm::sqrt(pk * pl) / (pk + pl);
                out += &(&left * proj_l).scale(h);
            }
        }
        if has_kernel {
            let weight = kernel.hs_inner(x);
            out += &ComplexMatrix::identity(m).scale_complex(weight / m as f64);
        }
        out
    }))
}

/// Outcome of [`correlation_matrix_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationCheck {
    /// PSD with unit diagonal.
    pub correlation: bool,
    /// Positive definite.
    pub strict: bool,
    pub min_eigenvalue: f64,
}

pub fn correlation_matrix_check(c: &HermitianOperator, tol: f64) -> Result<CorrelationCheck> {
    let check = psd_check(c.matrix(), tol)?;
    let unit_diagonal = c
        .matrix()
        .diagonal()
        .iter()
        .all(|d| (d.re - 1.0).abs() <= tol && d.im.abs() <= tol);
    Ok(CorrelationCheck {
        correlation: unit_diagonal && check.psd,
        strict: unit_diagonal && check.min_eigenvalue > tol,
        min_eigenvalue: check.min_eigenvalue,
    })
}

/// Pretty good measurement `G_k = t_k rho^{-1/2} rho_k rho^{-1/2}` of an
/// ensemble with average `rho`; the kernel projection of `rho` is appended
/// when `rho` is singular.
pub fn pgm(
    weights: &[f64],
    states: &[DensityMatrix],
    tol: &Tolerances,
) -> Result<Vec<HermitianOperator>> {
    check_probability(weights, tol)?;
    let average = DensityMatrix::mixture(weights, states, tol)?;
    let root = sqrt_pinv(&average, tol)?;
    let inv = root.inv_sqrt.matrix();
    let mut povm: Vec<HermitianOperator> = weights
        .iter()
        .zip(states)
        .map(|(t, s)| HermitianOperator::from_hermitian((&(inv * s.matrix()) * inv).scale(*t)))
        .collect();
    if !root.is_faithful() {
        povm.push(root.kernel.clone());
    }
    Ok(povm)
}

/// `G(X) = Tr_A[tau ((rho^{-1/2} X rho^{-1/2}) ⊗ 1)] + Tr[P_perp X] 1/n`.
pub fn pgm_map(tau: &BipartiteOperator, side: Side, tol: &Tolerances) -> Result<SuperOp> {
    let (t, rho) = conditioning_marginal(tau, side, tol)?;
    let root = sqrt_pinv(&rho, tol)?;
    let inv = root.inv_sqrt.matrix();
    let kernel = root.kernel.matrix();
    let faithful = root.is_faithful();
    let (m, n) = (t.dim_a(), t.dim_b());
    Ok(SuperOp::from_map(m, n, |x| {
        let mut out = t.contract_a(&(&(inv * x) * inv));
        if !faithful {
            out += &ComplexMatrix::identity(n).scale_complex(kernel.hs_inner(x) / n as f64);
        }
        out
    }))
}

/// Largest Choi-matrix entry of `E - G ∘ D`.
///
/// Exact (up to rounding) for faithful marginals. With a singular marginal the
/// kernel diagonal of `G ∘ D` is `(1/m)(sum_i sigma_i + (m - r)/n · 1)` rather
/// than `1/n`, so the residual is nonzero there.
pub fn verify_decomposition(tau: &BipartiteOperator, side: Side, tol: &Tolerances) -> Result<f64> {
    let e = temporal_channel(tau, side, tol)?;
    let rho = conditioning_marginal(tau, side, tol)?.1;
    let d = dephasing_channel(&rho, tol)?;
    let g = pgm_map(tau, side, tol)?;
    Ok(e.max_distance(&compose(&g, &d)?))
}

/// `tau_rho = (rho^{-1/2} ⊗ 1) tau (rho^{-1/2} ⊗ 1)` with the conditioning factor first.
#[derive(Clone, Debug)]
pub struct DistortedState {
    pub base: BipartiteOperator,
    pub side: Side,
    pub marginal: DensityMatrix,
    pub marginal_spectrum: SpectralDecomposition,
    pub distorted: BipartiteOperator,
}

pub fn distort(tau: &BipartiteOperator, side: Side, tol: &Tolerances) -> Result<DistortedState> {
    let (t, rho) = conditioning_marginal(tau, side, tol)?;
    let root = sqrt_pinv(&rho, tol)?;
    let inv = root.inv_sqrt.matrix();
    let distorted = t.conjugate_a(inv, inv);
    Ok(DistortedState {
        base: tau.clone(),
        side,
        marginal: rho,
        marginal_spectrum: root.spectral,
        distorted,
    })
}

/// `((T ∘ D) ⊗ id)(tau_rho)` with the transpose taken in an eigenbasis of the
/// conditioning marginal.
pub fn decohered_test_matrix(
    tau: &BipartiteOperator,
    side: Side,
    tol: &Tolerances,
) -> Result<BipartiteOperator> {
    let state = distort(tau, side, tol)?;
    let d = dephasing_channel(&state.marginal, tol)?;
    let dephased = d.apply_on_first(&state.distorted)?;
    partial_transpose(&dephased, Side::A, Some(&state.marginal_spectrum))
}

/// Verdict of the compatibility test in one direction.
#[derive(Clone, Debug)]
pub struct CompatibilityReport {
    pub side: Side,
    pub compatible: bool,
    /// `|test_min_eigenvalue| < 10 tol`; the verdict is numerically marginal.
    pub boundary: bool,
    pub test_min_eigenvalue: f64,
    pub choi_min_eigenvalue: f64,
    pub channel: SuperOp,
    /// `max |tau - E ⋆ rho|`.
    pub reconstruction_residual: f64,
    pub cptp: CptpDiagnostics,
    pub faithful_marginal: bool,
    pub ppt: bool,
}

/// Decides whether `tau` is a state over time of a CPTP map from `side`.
///
/// The verdict comes from the decohered test matrix and is cross-checked
/// against the Choi matrix of the temporal channel. A disagreement outside the
/// boundary zone is reported as [`Error::InconsistentVerdict`].
pub fn compatibility_test(
    tau: &BipartiteOperator,
    side: Side,
    tol: &Tolerances,
) -> Result<CompatibilityReport> {
    let (t, rho) = conditioning_marginal(tau, side, tol)?;
    let test = decohered_test_matrix(tau, side, tol)?;
    let (test_values, _) = eigh(&test.matrix().hermitian_part())?;
    let test_min = test_values.first().copied().unwrap_or(0.0);

    let spectral = eig_hermitian(rho.hermitian(), tol)?;
    let faithful = spectral.min_eigenvalue() > support_threshold(&spectral, tol);
    let channel = channel_from_oriented(&t, &spectral, tol);
    let cptp = channel.is_cptp(tol)?;
    let choi_min = cptp.choi_min_eigenvalue;

    let zone = 10.0 * tol.verdict;
    let test_ok = test_min >= -tol.verdict;
    let choi_ok = choi_min >= -tol.verdict;
    let boundary = test_min.abs() < zone;
    if test_ok != choi_ok && !boundary && choi_min.abs() >= zone {
        return Err(Error::InconsistentVerdict {
            side: side.label(),
            test_min,
            choi_min,
        });
    }

    let reconstruction_residual = star_product(&channel, &rho)?.max_abs_diff(&t);
    let ppt = is_ppt(tau, tol)?.ppt;
    Ok(CompatibilityReport {
        side,
        compatible: test_ok,
        boundary,
        test_min_eigenvalue: test_min,
        choi_min_eigenvalue: choi_min,
        channel,
        reconstruction_residual,
        cptp,
        faithful_marginal: faithful,
        ppt,
    })
}

/// Positivity of the partial transpose on `A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PptCheck {
    pub ppt: bool,
    pub min_eigenvalue: f64,
}

/// `lambda_min((T ⊗ id)(tau)) >= -tol.verdict`, computational basis.
pub fn is_ppt(tau: &BipartiteOperator, tol: &Tolerances) -> Result<PptCheck> {
    let pt = partial_transpose(tau, Side::A, None)?;
    let (values, _) = eigh(&pt.matrix().hermitian_part())?;
    let min_eigenvalue = values.first().copied().unwrap_or(0.0);
    Ok(PptCheck {
        ppt: min_eigenvalue >= -tol.verdict,
        min_eigenvalue,
    })
}

/// Both directions of the compatibility test plus the PPT flag.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub a_to_b: CompatibilityReport,
    pub b_to_a: CompatibilityReport,
    pub ppt: PptCheck,
}

impl Certificate {
    pub fn compatible_both(&self) -> bool {
        self.a_to_b.compatible && self.b_to_a.compatible
    }

    pub fn reports(&self) -> [&CompatibilityReport; 2] {
        [&self.a_to_b, &self.b_to_a]
    }
}

/// Runs both directions; a PPT state reported incompatible outside the
/// boundary zone is an error.
pub fn certify(tau: &BipartiteOperator, tol: &Tolerances) -> Result<Certificate> {
    let ppt = is_ppt(tau, tol)?;
    let a_to_b = compatibility_test(tau, Side::A, tol)?;
    let b_to_a = compatibility_test(tau, Side::B, tol)?;
    if ppt.ppt && ppt.min_eigenvalue.abs() >= 10.0 * tol.verdict {
        for r in [&a_to_b, &b_to_a] {
            if !r.compatible && !r.boundary {
                return Err(Error::PptNotCompatible {
                    side: r.side.label(),
                    test_min: r.test_min_eigenvalue,
                });
            }
        }
    }
    Ok(Certificate {
        a_to_b,
        b_to_a,
        ppt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{harmonic_mean_matrix, tensor};
    use crate::random::{self, seeded};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn bell() -> BipartiteOperator {
        let psi = [c(1.0), c(0.0), c(0.0), c(1.0)];
        BipartiteOperator::new(2, 2, DensityMatrix::pure(&psi).matrix().clone()).unwrap()
    }

    fn werner(p: f64) -> BipartiteOperator {
        let m = &bell().matrix().scale(p) + &ComplexMatrix::identity(4).scale((1.0 - p) / 4.0);
        BipartiteOperator::new(2, 2, m).unwrap()
    }

    fn random_state(seed: u64, da: usize, db: usize) -> BipartiteOperator {
        let m = random::density_matrix(&mut seeded(seed), da * db, da * db);
        BipartiteOperator::new(da, db, m).unwrap()
    }

    #[test]
    fn product_gives_replace_channel() {
        let rho_a = ComplexMatrix::from_real(2, &[0.7, 0.2, 0.2, 0.3]).unwrap();
        let rho_b =
            ComplexMatrix::from_real(3, &[0.5, 0.1, 0.0, 0.1, 0.3, 0.0, 0.0, 0.0, 0.2]).unwrap();
        let tau = tensor(&rho_a, &rho_b).unwrap();
        let e = temporal_channel(&tau, Side::A, &tol()).unwrap();
        assert!(e.max_distance(&SuperOp::replace(2, &rho_b)) < 1e-12);
        let f = temporal_channel(&tau, Side::B, &tol()).unwrap();
        assert!(f.max_distance(&SuperOp::replace(3, &rho_a)) < 1e-12);
    }

    #[test]
    fn pure_marginal_gives_measure_and_prepare() {
        let rho_b = ComplexMatrix::from_real(2, &[0.6, 0.1, 0.1, 0.4]).unwrap();
        let tau = tensor(&ComplexMatrix::from_diagonal(&[1.0, 0.0]), &rho_b).unwrap();
        let e = temporal_channel(&tau, Side::A, &tol()).unwrap();
        let expected = SuperOp::measure_and_prepare(
            &[
                ComplexMatrix::from_diagonal(&[1.0, 0.0]),
                ComplexMatrix::from_diagonal(&[0.0, 1.0]),
            ],
            &[rho_b.clone(), ComplexMatrix::identity(2).scale(0.5)],
        )
        .unwrap();
        assert!(e.max_distance(&expected) < 1e-12);
        assert!(e.is_cptp(&tol()).unwrap().cptp);
    }

    #[test]
    fn half_swap_gives_identity() {
        let tau = BipartiteOperator::swap(2).scale(0.5);
        let e = temporal_channel(&tau, Side::A, &tol()).unwrap();
        assert!(e.max_distance(&SuperOp::identity(2)) < 1e-12);
        let x = sylvester_oracle(&tau, Side::A, &tol()).unwrap();
        assert!(x.max_abs_diff(&BipartiteOperator::swap(2)) < 1e-12);
    }

    #[test]
    fn sylvester_agrees_with_eigenbasis_formula() {
        for (seed, (da, db)) in [(1, (2, 2)), (2, (2, 3)), (3, (3, 2))] {
            let tau = random_state(seed, da, db);
            for side in [Side::A, Side::B] {
                let j = temporal_channel(&tau, side, &tol()).unwrap().jamiolkowski();
                let x = sylvester_oracle(&tau, side, &tol()).unwrap();
                assert!(j.max_abs_diff(&x) < 1e-9);
            }
        }
        let rho_b = ComplexMatrix::from_diagonal(&[0.3, 0.7]);
        let tau = tensor(&ComplexMatrix::from_diagonal(&[0.4, 0.6]), &rho_b).unwrap();
        let x = sylvester_oracle(&tau, Side::A, &tol()).unwrap();
        assert!(
            x.matrix()
                .max_abs_diff(&ComplexMatrix::identity(2).kron(&rho_b))
                < 1e-12
        );
        let pure = tensor(&ComplexMatrix::from_diagonal(&[1.0, 0.0]), &rho_b).unwrap();
        assert!(matches!(
            sylvester_oracle(&pure, Side::A, &tol()),
            Err(Error::NotFaithful { rank: 1, dim: 2 })
        ));
    }

    #[test]
    fn reconstruction_random() {
        for (seed, (da, db)) in [(4, (2, 2)), (5, (3, 3)), (6, (2, 3))] {
            let tau = random_state(seed, da, db);
            for side in [Side::A, Side::B] {
                let r = compatibility_test(&tau, side, &tol()).unwrap();
                assert!(
                    r.reconstruction_residual < 1e-9,
                    "{}",
                    r.reconstruction_residual
                );
            }
        }
    }

    #[test]
    fn dephasing_examples() {
        let d = dephasing_channel(&DensityMatrix::maximally_mixed(3), &tol()).unwrap();
        assert!(d.max_distance(&SuperOp::identity(3)) < 1e-14);

        let rho = DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.9, 0.1]), &tol()).unwrap();
        let d = dephasing_channel(&rho, &tol()).unwrap();
        let out = d
            .apply(&ComplexMatrix::from_fn(2, 2, |_, _| c(1.0)))
            .unwrap();
        assert!((out[(0, 1)].re - 0.6).abs() < 1e-14);
        assert!((out[(0, 0)].re - 1.0).abs() < 1e-14);
        assert!(d.is_cptp(&tol()).unwrap().cptp);

        let mut rng = seeded(8);
        let rho = DensityMatrix::new(random::density_matrix(&mut rng, 3, 3), &tol()).unwrap();
        let d = dephasing_channel(&rho, &tol()).unwrap();
        assert!(d.apply(rho.matrix()).unwrap().max_abs_diff(rho.matrix()) < 1e-13);
    }

    #[test]
    fn dephasing_is_schur_product_in_eigenbasis() {
        let mut rng = seeded(9);
        let rho = DensityMatrix::new(random::density_matrix(&mut rng, 3, 3), &tol()).unwrap();
        let s = eig_hermitian(rho.hermitian(), &tol()).unwrap();
        let u = s.basis();
        let h = harmonic_mean_matrix(s.point_spectrum()).unwrap();
        let x = random::ginibre(&mut rng, 3, 3);
        let d = dephasing_channel(&rho, &tol()).unwrap();
        let direct = d.apply(&x).unwrap();
        let rotated = &(&u.adjoint() * &x) * u;
        let schur = &(u * &h.matrix().hadamard(&rotated).unwrap()) * &u.adjoint();
        assert!(direct.max_abs_diff(&schur) < 1e-12);
    }

    #[test]
    fn correlation_examples() {
        let ones =
            HermitianOperator::new(ComplexMatrix::from_fn(3, 3, |_, _| c(1.0)), &tol()).unwrap();
        let r = correlation_matrix_check(&ones, 1e-9).unwrap();
        assert!(r.correlation && !r.strict);
        let r = correlation_matrix_check(&HermitianOperator::identity(3), 1e-9).unwrap();
        assert!(r.correlation && r.strict);
        let h = harmonic_mean_matrix(&[0.5, 0.3, 0.2]).unwrap();
        assert!(correlation_matrix_check(&h, 1e-9).unwrap().correlation);
        let r =
            correlation_matrix_check(&HermitianOperator::from_diagonal(&[2.0, 1.0]), 1e-9).unwrap();
        assert!(!r.correlation);
    }

    #[test]
    fn pgm_examples() {
        let zero = DensityMatrix::pure(&[c(1.0), c(0.0)]);
        let one = DensityMatrix::pure(&[c(0.0), c(1.0)]);
        let g = pgm(&[0.5, 0.5], &[zero.clone(), one], &tol()).unwrap();
        assert_eq!(g.len(), 2);
        assert!(
            g[0].matrix()
                .max_abs_diff(&ComplexMatrix::from_diagonal(&[1.0, 0.0]))
                < 1e-14
        );
        assert!(
            g[1].matrix()
                .max_abs_diff(&ComplexMatrix::from_diagonal(&[0.0, 1.0]))
                < 1e-14
        );

        let rho = DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.3, 0.7]), &tol()).unwrap();
        let g = pgm(&[1.0], &[rho], &tol()).unwrap();
        assert!(g[0].matrix().max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);

        let g = pgm(&[1.0], &[zero], &tol()).unwrap();
        assert_eq!(g.len(), 2);
        assert!(
            g[1].matrix()
                .max_abs_diff(&ComplexMatrix::from_diagonal(&[0.0, 1.0]))
                < 1e-14
        );

        assert!(matches!(
            pgm(
                &[0.6, 0.6],
                &[
                    DensityMatrix::maximally_mixed(2),
                    DensityMatrix::maximally_mixed(2)
                ],
                &tol()
            ),
            Err(Error::InvalidWeights { .. })
        ));
    }

    #[test]
    fn pgm_map_examples() {
        let rho_a = ComplexMatrix::from_real(2, &[0.7, 0.2, 0.2, 0.3]).unwrap();
        let rho_b = ComplexMatrix::from_diagonal(&[0.25, 0.75]);
        let tau = tensor(&rho_a, &rho_b).unwrap();
        let g = pgm_map(&tau, Side::A, &tol()).unwrap();
        assert!(g.max_distance(&SuperOp::replace(2, &rho_b)) < 1e-12);

        let g = pgm_map(&bell(), Side::A, &tol()).unwrap();
        assert!(g.trace_preservation_residual() < 1e-12);
        assert!(!g.is_cptp(&tol()).unwrap().cptp);
    }

    #[test]
    fn decomposition_residuals() {
        assert!(verify_decomposition(&bell(), Side::A, &tol()).unwrap() < 1e-10);
        let tau = tensor(
            &ComplexMatrix::from_real(2, &[0.7, 0.2, 0.2, 0.3]).unwrap(),
            &ComplexMatrix::from_diagonal(&[0.25, 0.75]),
        )
        .unwrap();
        assert!(verify_decomposition(&tau, Side::A, &tol()).unwrap() < 1e-12);
        let tau = random_state(10, 3, 2);
        for side in [Side::A, Side::B] {
            assert!(verify_decomposition(&tau, side, &tol()).unwrap() < 1e-10);
        }
    }

    #[test]
    fn bell_is_incompatible_both_ways() {
        for side in [Side::A, Side::B] {
            let r = compatibility_test(&bell(), side, &tol()).unwrap();
            assert!(!r.compatible);
            assert!((r.test_min_eigenvalue + 1.0).abs() < 1e-8);
            assert!(r.choi_min_eigenvalue < 0.0);
            assert!(!r.ppt);
        }
        let ppt = is_ppt(&bell(), &tol()).unwrap();
        assert!(!ppt.ppt);
        assert!((ppt.min_eigenvalue + 0.5).abs() < 1e-12);
    }

    #[test]
    fn werner_boundary() {
        let ppt = is_ppt(&werner(1.0 / 3.0), &tol()).unwrap();
        assert!(ppt.min_eigenvalue.abs() < 1e-9);
        assert!(
            compatibility_test(&werner(0.3), Side::A, &tol())
                .unwrap()
                .compatible
        );
        assert!(
            !compatibility_test(&werner(0.36), Side::B, &tol())
                .unwrap()
                .compatible
        );
    }

    #[test]
    fn certify_examples() {
        let cert = certify(&bell(), &tol()).unwrap();
        assert!(!cert.a_to_b.compatible && !cert.b_to_a.compatible && !cert.ppt.ppt);
        let tau = tensor(
            &ComplexMatrix::from_diagonal(&[1.0, 0.0]),
            &ComplexMatrix::identity(2).scale(0.5),
        )
        .unwrap();
        let cert = certify(&tau, &tol()).unwrap();
        assert!(cert.compatible_both() && cert.ppt.ppt);
        assert!(!cert.a_to_b.faithful_marginal && cert.b_to_a.faithful_marginal);
    }

    #[test]
    fn invalid_marginal_is_rejected() {
        let m = ComplexMatrix::from_diagonal(&[1.2, 0.0, -0.2, 0.0]);
        let tau = BipartiteOperator::new(2, 2, m).unwrap();
        assert!(matches!(
            temporal_channel(&tau, Side::A, &tol()),
            Err(Error::InvalidMarginal { side: 'A', .. })
        ));
        let tau =
            BipartiteOperator::new(2, 2, ComplexMatrix::identity(4).scale(0.9 / 4.0)).unwrap();
        assert!(matches!(
            certify(&tau, &tol()),
            Err(Error::TraceNotOne { .. })
        ));
    }

    #[test]
    fn ppt_route_identity() {
        let tau = random_state(11, 2, 3);
        let state = distort(&tau, Side::A, &tol()).unwrap();
        let lhs = decohered_test_matrix(&tau, Side::A, &tol()).unwrap();
        let basis = &state.marginal_spectrum;
        let transposed = partial_transpose(&tau, Side::A, Some(basis)).unwrap();
        let inv = sqrt_pinv(&state.marginal, &tol()).unwrap().inv_sqrt;
        let conjugated = transposed.conjugate_a(inv.matrix(), inv.matrix());
        let d = dephasing_channel(&state.marginal, &tol()).unwrap();
        let rhs = d.apply_on_first(&conjugated).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-10);
    }
}
