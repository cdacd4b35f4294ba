//! Petz recovery maps and Bayesian inverses of processes.

use crate::channels::{compose, Process, SuperOp};
use crate::operators::{sqrt_pinv, BipartiteOperator, DensityMatrix, PseudoRoot, Side};
use crate::sot::star_product;
use crate::temporal::{
    compatibility_test, dephasing_channel, marginals, temporal_channel, CompatibilityReport,
};
use crate::{Error, Result, Tolerances};

/// `Y -> rho^{1/2} E*(sigma^{-1/2} Y sigma^{-1/2}) rho^{1/2}` with `sigma = E(rho)`.
///
/// Inverse roots are pseudoinverses, so with rank-deficient `rho` or `sigma`
/// the map is only meaningful on the supports.
pub fn petz_recovery(e: &SuperOp, prior: &DensityMatrix, tol: &Tolerances) -> Result<SuperOp> {
    if prior.dim() != e.dim_in() {
        return Err(Error::DimensionMismatch {
            context: "petz recovery prior",
            expected: e.dim_in(),
            actual: prior.dim(),
        });
    }
    let sigma = e.apply(prior.matrix())?.hermitian_part();
    let sigma_root = sqrt_pinv(&DensityMatrix::from_psd_unchecked(sigma), tol)?;
    let prior_root = sqrt_pinv(prior, tol)?;
    let adjoint = e.hs_adjoint();
    let s = sigma_root.inv_sqrt.matrix();
    let r = prior_root.sqrt.matrix();
    Ok(SuperOp::from_map(e.dim_out(), e.dim_in(), |y| {
        let inner = adjoint
            .apply(&(&(s * y) * s))
            .expect("dimensions match the adjoint");
        &(r * &inner) * r
    }))
}

/// Result of [`bayesian_inverse`].
#[derive(Clone, Debug)]
pub enum BayesianInverse {
    /// CPTP `F: B -> A` with `E ⋆ rho_A = gamma(F ⋆ rho_B)`.
    Exists(SuperOp),
    /// The compatibility test from B fails; the report says by how much.
    Incompatible(CompatibilityReport),
}

impl BayesianInverse {
    pub fn channel(&self) -> Option<&SuperOp> {
        match self {
            Self::Exists(f) => Some(f),
            Self::Incompatible(_) => None,
        }
    }
}

pub fn bayesian_inverse(p: &Process, tol: &Tolerances) -> Result<BayesianInverse> {
    let tau = star_product(p.channel(), p.input_state())?;
    let report = compatibility_test(&tau, Side::B, tol)?;
    Ok(if report.compatible {
        BayesianInverse::Exists(report.channel)
    } else {
        BayesianInverse::Incompatible(report)
    })
}

fn faithful_root(rho: &DensityMatrix, tol: &Tolerances) -> Result<PseudoRoot> {
    let root = sqrt_pinv(rho, tol)?;
    if !root.is_faithful() {
        return Err(Error::NotFaithful {
            rank: root.rank,
            dim: rho.dim(),
        });
    }
    Ok(root)
}

/// `max |C[D ∘ F] - C[Ê ∘ D']|` where `F` is the temporal channel from B,
/// `Ê` the Petz recovery of the temporal channel from A, and `D`, `D'` the
/// dephasing channels of the two marginals.
pub fn verify_dfed(tau: &BipartiteOperator, tol: &Tolerances) -> Result<f64> {
    let (rho_a, rho_b) = marginals(tau, tol)?;
    faithful_root(&rho_a, tol)?;
    faithful_root(&rho_b, tol)?;
    let d = dephasing_channel(&rho_a, tol)?;
    let d_prime = dephasing_channel(&rho_b, tol)?;
    let e = temporal_channel(tau, Side::A, tol)?;
    let f = temporal_channel(tau, Side::B, tol)?;
    let e_hat = petz_recovery(&e, &rho_a, tol)?;
    Ok(compose(&d, &f)?.max_distance(&compose(&e_hat, &d_prime)?))
}

/// `max |C[petz(D_rho, rho)] - C[D_rho]|`.
pub fn petz_selfinverse_dephasing_check(rho: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    faithful_root(rho, tol)?;
    let d = dephasing_channel(rho, tol)?;
    Ok(petz_recovery(&d, rho, tol)?.max_distance(&d))
}
