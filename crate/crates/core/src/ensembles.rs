//! Product ensembles, random instances and perfect distinguishability.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::channels::SuperOp;
use crate::operators::{
    is_psd, sqrt_pinv, BipartiteOperator, ComplexMatrix, DensityMatrix, HermitianOperator, Side,
};
use crate::random::{self, stream};
use crate::temporal::{dephasing_channel, marginals, temporal_channel};
use crate::{Error, Result, Tolerances};

/// `sum_k t_k rho_{A;k} ⊗ rho_{B;k}` with real weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductEnsemble {
    weights: Vec<f64>,
    states_a: Vec<DensityMatrix>,
    states_b: Vec<DensityMatrix>,
}

impl ProductEnsemble {
    /// Negative weights are allowed (a quasiprobability ensemble).
    pub fn new(
        weights: Vec<f64>,
        states_a: Vec<DensityMatrix>,
        states_b: Vec<DensityMatrix>,
    ) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Empty);
        }
        for (context, len) in [
            ("ensemble states A", states_a.len()),
            ("ensemble states B", states_b.len()),
        ] {
            if len != weights.len() {
                return Err(Error::DimensionMismatch {
                    context,
                    expected: weights.len(),
                    actual: len,
                });
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-10 {
            let min = weights.iter().copied().fold(f64::INFINITY, f64::min);
            return Err(Error::InvalidWeights { sum, min });
        }
        for (context, states) in [
            ("ensemble states A", &states_a),
            ("ensemble states B", &states_b),
        ] {
            let d = states[0].dim();
            if let Some(s) = states.iter().find(|s| s.dim() != d) {
                return Err(Error::DimensionMismatch {
                    context,
                    expected: d,
                    actual: s.dim(),
                });
            }
        }
        Ok(Self {
            weights,
            states_a,
            states_b,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states_a(&self) -> &[DensityMatrix] {
        &self.states_a
    }

    pub fn states_b(&self) -> &[DensityMatrix] {
        &self.states_b
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dim_a(&self) -> usize {
        self.states_a[0].dim()
    }

    pub fn dim_b(&self) -> usize {
        self.states_b[0].dim()
    }

    /// Some weight is negative.
    pub fn quasi(&self) -> bool {
        self.weights.iter().any(|t| *t < 0.0)
    }

    /// Hermitian with unit trace; PSD when the weights are a probability vector.
    pub fn assemble_state(&self) -> BipartiteOperator {
        let (da, db) = (self.dim_a(), self.dim_b());
        let mut m = ComplexMatrix::zeros(da * db, da * db);
        for ((t, a), b) in self.weights.iter().zip(&self.states_a).zip(&self.states_b) {
            m += &a.matrix().kron(b.matrix()).scale(*t);
        }
        BipartiteOperator::new(da, db, m.hermitian_part()).expect("square by construction")
    }

    /// `sum_k t_k rho_{A;k}` (or `B`), without positivity checks.
    pub fn weighted_marginal(&self, side_a: bool) -> ComplexMatrix {
        let states = if side_a {
            &self.states_a
        } else {
            &self.states_b
        };
        let d = states[0].dim();
        let mut m = ComplexMatrix::zeros(d, d);
        for (t, s) in self.weights.iter().zip(states) {
            m += &s.matrix().scale(*t);
        }
        m
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// The six qubit axis states `|0>, |1>, |+>, |->, |+i>, |-i>`.
pub fn axis_states() -> [DensityMatrix; 6] {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    [
        DensityMatrix::pure(&[c(1.0), c(0.0)]),
        DensityMatrix::pure(&[c(0.0), c(1.0)]),
        DensityMatrix::pure(&[c(h), c(h)]),
        DensityMatrix::pure(&[c(h), c(-h)]),
        DensityMatrix::pure(&[c(h), Complex64::new(0.0, h)]),
        DensityMatrix::pure(&[c(h), Complex64::new(0.0, -h)]),
    ]
}

/// Each axis state paired with itself, weight `5/8` on `|0>` and `3/40` on
/// the other five.
pub fn axis_state_ensemble() -> ProductEnsemble {
    let states: Vec<DensityMatrix> = axis_states().into();
    let mut weights = vec![3.0 / 40.0; 6];
    weights[0] = 5.0 / 8.0;
    ProductEnsemble::new(weights, states.clone(), states).expect("weights sum to one")
}

/// Mixture of `rank` orthonormal Haar-random vectors with Dirichlet weights.
fn mixed_state<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> DensityMatrix {
    let weights = random::dirichlet(rng, rank);
    let mut m = ComplexMatrix::zeros(dim, dim);
    for (w, v) in weights
        .iter()
        .zip(random::orthonormal_vectors(rng, dim, rank))
    {
        m += &ComplexMatrix::outer(&v, &v).scale(*w);
    }
    DensityMatrix::from_psd_unchecked(m.hermitian_part())
}

/// Random separable ensemble; each local state has a uniformly chosen rank.
pub fn random_separable(dim_a: usize, dim_b: usize, n_terms: usize, seed: u64) -> ProductEnsemble {
    let mut rng = stream(seed, 0);
    let weights = random::dirichlet(&mut rng, n_terms.max(1));
    let mut states_a = Vec::with_capacity(weights.len());
    let mut states_b = Vec::with_capacity(weights.len());
    for _ in 0..weights.len() {
        let ra = rng.random_range(1..=dim_a);
        states_a.push(mixed_state(&mut rng, dim_a, ra));
        let rb = rng.random_range(1..=dim_b);
        states_b.push(mixed_state(&mut rng, dim_b, rb));
    }
    ProductEnsemble::new(weights, states_a, states_b).expect("valid by construction")
}

/// Ginibre state `G G^dag / Tr` with `G` of shape `dim x rank`.
pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    if rank == 0 || rank > dim {
        return Err(Error::InvalidRank { rank, dim });
    }
    let m = random::density_matrix(&mut stream(seed, 1), dim, rank);
    Ok(DensityMatrix::from_psd_unchecked(m))
}

pub fn random_cptp(dim_in: usize, dim_out: usize, kraus_count: usize, seed: u64) -> SuperOp {
    let ops = random::kraus_operators(&mut stream(seed, 2), dim_in, dim_out, kraus_count.max(1));
    SuperOp::from_kraus(&ops).expect("kraus operators share a shape")
}

pub fn random_povm(dim: usize, count: usize, seed: u64) -> Vec<HermitianOperator> {
    random::povm(&mut stream(seed, 3), dim, count)
        .into_iter()
        .map(HermitianOperator::from_hermitian)
        .collect()
}

/// Adds `strength · X_A ⊗ X_B` with random traceless Hermitian `X`, which
/// leaves both marginals unchanged.
pub fn marginal_preserving_perturbation(
    tau: &BipartiteOperator,
    strength: f64,
    seed: u64,
) -> BipartiteOperator {
    let mut rng = stream(seed, 4);
    let mut traceless = |d: usize| {
        let h = random::hermitian(&mut rng, d);
        let shift = h.trace().re / d as f64;
        let h = &h - &ComplexMatrix::identity(d).scale(shift);
        let norm = h.frobenius_norm();
        h.scale(1.0 / norm)
    };
    let xa = traceless(tau.dim_a());
    let xb = traceless(tau.dim_b());
    let m = tau.matrix() + &xa.kron(&xb).scale(strength);
    BipartiteOperator::new(tau.dim_a(), tau.dim_b(), m).expect("same shape")
}

fn first_overlap(states: &[DensityMatrix], tol: f64) -> Option<(usize, usize, f64)> {
    for i in 0..states.len() {
        for j in i + 1..states.len() {
            let overlap = states[i].matrix().hs_inner(states[j].matrix()).re;
            if overlap.abs() > tol {
                return Some((i, j, overlap));
            }
        }
    }
    None
}

/// Pairwise `Tr[rho_i rho_j] <= tol`.
pub fn is_orthogonal_ensemble(states: &[DensityMatrix], tol: f64) -> bool {
    first_overlap(states, tol).is_none()
}

/// An ensemble, a POVM and the guess attached to each outcome.
#[derive(Clone, Debug)]
pub struct DiscriminationInstance {
    weights: Vec<f64>,
    states: Vec<DensityMatrix>,
    povm: Vec<HermitianOperator>,
    assignment: Vec<usize>,
}

impl DiscriminationInstance {
    /// Checks the POVM (PSD, sums to 1) and that every ensemble index is guessed
    /// by some outcome.
    pub fn new(
        weights: Vec<f64>,
        states: Vec<DensityMatrix>,
        povm: Vec<HermitianOperator>,
        assignment: Vec<usize>,
        tol: &Tolerances,
    ) -> Result<Self> {
        if assignment.len() != povm.len() {
            return Err(Error::DimensionMismatch {
                context: "outcome assignment",
                expected: povm.len(),
                actual: assignment.len(),
            });
        }
        let mixture = DensityMatrix::mixture(&weights, &states, tol)?;
        let d = mixture.dim();
        let mut sum = ComplexMatrix::zeros(d, d);
        for e in &povm {
            if e.dim() != d {
                return Err(Error::DimensionMismatch {
                    context: "povm element",
                    expected: d,
                    actual: e.dim(),
                });
            }
            let check = is_psd(e, tol.psd)?;
            if !check.psd {
                return Err(Error::NotPositive {
                    min_eigenvalue: check.min_eigenvalue,
                });
            }
            sum += e.matrix();
        }
        let deviation = sum.max_abs_diff(&ComplexMatrix::identity(d));
        if deviation > tol.psd {
            return Err(Error::TraceNotOne {
                trace: sum.trace().re / d as f64,
            });
        }
        for theta in 0..states.len() {
            if !assignment.contains(&theta) {
                return Err(Error::NonSurjective(theta));
            }
        }
        Ok(Self {
            weights,
            states,
            povm,
            assignment,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn povm(&self) -> &[HermitianOperator] {
        &self.povm
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }
}

/// Support projectors of mutually orthogonal states, completed by
/// `1 - sum P_k` when that is nonzero.
pub fn discrimination_povm(
    weights: &[f64],
    states: &[DensityMatrix],
    tol: &Tolerances,
) -> Result<DiscriminationInstance> {
    if let Some((first, second, overlap)) = first_overlap(states, tol.psd) {
        return Err(Error::NotOrthogonal {
            first,
            second,
            overlap,
        });
    }
    let d = states.first().ok_or(Error::Empty)?.dim();
    let mut povm = Vec::with_capacity(states.len() + 1);
    let mut complement = ComplexMatrix::identity(d);
    for s in states {
        let support = sqrt_pinv(s, tol)?.support;
        complement = &complement - support.matrix();
        povm.push(support);
    }
    let mut assignment: Vec<usize> = (0..states.len()).collect();
    if complement.max_abs() > tol.psd {
        povm.push(HermitianOperator::from_hermitian(
            complement.hermitian_part(),
        ));
        assignment.push(0);
    }
    DiscriminationInstance::new(weights.to_vec(), states.to_vec(), povm, assignment, tol)
}

/// `t_k Tr[rho_k E_j] = delta_{k, f(j)} Tr[rho E_j]` for every state `k` and
/// outcome `j`, within `tol`.
pub fn perfect_distinguishability_check(inst: &DiscriminationInstance, tol: f64) -> bool {
    let d = inst.states[0].dim();
    let mut average = ComplexMatrix::zeros(d, d);
    for (t, s) in inst.weights.iter().zip(&inst.states) {
        average += &s.matrix().scale(*t);
    }
    inst.povm.iter().zip(&inst.assignment).all(|(e, &guess)| {
        let total = average.hs_inner(e.matrix()).re;
        inst.weights
            .iter()
            .zip(&inst.states)
            .enumerate()
            .all(|(k, (t, s))| {
                let lhs = t * s.matrix().hs_inner(e.matrix()).re;
                let rhs = if k == guess { total } else { 0.0 };
                (lhs - rhs).abs() <= tol
            })
    })
}

/// Outcome of [`search_distinguishing_povm`].
#[derive(Clone, Debug)]
pub struct PovmSearch {
    pub attempts: usize,
    pub found: Option<DiscriminationInstance>,
}

/// Samples `attempts` random POVMs with `n` or `n + 1` outcomes (outcome `j`
/// guesses state `j mod n`) and returns the first that passes
/// [`perfect_distinguishability_check`]. A miss is evidence, not proof, that
/// no such POVM exists.
pub fn search_distinguishing_povm(
    weights: &[f64],
    states: &[DensityMatrix],
    attempts: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<PovmSearch> {
    let n = states.len();
    let d = states.first().ok_or(Error::Empty)?.dim();
    let mut rng = stream(seed, 5);
    for attempt in 0..attempts {
        let count = n + rng.random_range(0..=1usize);
        let povm = random::povm(&mut rng, d, count)
            .into_iter()
            .map(HermitianOperator::from_hermitian)
            .collect();
        let assignment = (0..count).map(|j| j % n).collect();
        let inst =
            DiscriminationInstance::new(weights.to_vec(), states.to_vec(), povm, assignment, tol)?;
        if perfect_distinguishability_check(&inst, tol.verdict) {
            return Ok(PovmSearch {
                attempts: attempt + 1,
                found: Some(inst),
            });
        }
    }
    Ok(PovmSearch {
        attempts,
        found: None,
    })
}

/// Orthogonal mixed states: a random unitary frame split into consecutive
/// blocks, each carrying a random mixture.
pub fn random_orthogonal_ensemble(
    dim: usize,
    block_sizes: &[usize],
    seed: u64,
) -> (Vec<f64>, Vec<DensityMatrix>) {
    let mut rng = stream(seed, 6);
    let frame =
        random::orthonormal_vectors(&mut rng, dim, block_sizes.iter().sum::<usize>().min(dim));
    let mut states = Vec::with_capacity(block_sizes.len());
    let mut offset = 0;
    for &size in block_sizes {
        let w = random::dirichlet(&mut rng, size);
        let mut m = ComplexMatrix::zeros(dim, dim);
        for (k, v) in frame[offset..offset + size].iter().enumerate() {
            m += &ComplexMatrix::outer(v, v).scale(w[k]);
        }
        offset += size;
        states.push(DensityMatrix::from_psd_unchecked(m.hermitian_part()));
    }
    (random::dirichlet(&mut rng, block_sizes.len()), states)
}

/// `(Tr[rho X], Tr[rho Y], Tr[rho Z])` of a qubit operator.
pub fn bloch_vector(rho: &ComplexMatrix) -> [f64; 3] {
    let off = rho[(0, 1)];
    [2.0 * off.re, -2.0 * off.im, (rho[(0, 0)] - rho[(1, 1)]).re]
}

/// `n` pure qubit states: the six axis states first, then Haar-random ones.
pub fn bloch_sphere_samples(n: usize, seed: u64) -> Vec<DensityMatrix> {
    let mut out: Vec<DensityMatrix> = axis_states().into_iter().take(n).collect();
    let mut rng = stream(seed, 7);
    while out.len() < n {
        out.push(DensityMatrix::pure(&random::haar_vector(&mut rng, 2)));
    }
    out
}

/// Which image of the sampled input states to report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlochStage {
    /// The sampled states themselves.
    Input,
    /// After the dephasing channel of the A marginal.
    Dephased,
    /// After the temporal channel from A.
    Output,
}

/// Bloch vectors of `stage` applied to [`bloch_sphere_samples`], for a
/// two-qubit `tau`.
pub fn bloch_cloud(
    tau: &BipartiteOperator,
    stage: BlochStage,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Vec<[f64; 3]>> {
    for dim in [tau.dim_a(), tau.dim_b()] {
        if dim != 2 {
            return Err(Error::NotQubits { dim, qubits: 1 });
        }
    }
    let map = match stage {
        BlochStage::Input => SuperOp::identity(2),
        BlochStage::Dephased => dephasing_channel(&marginals(tau, tol)?.0, tol)?,
        BlochStage::Output => temporal_channel(tau, Side::A, tol)?,
    };
    bloch_sphere_samples(samples, seed)
        .iter()
        .map(|s| map.apply(s.matrix()).map(|m| bloch_vector(&m)))
        .collect()
}

/// `max - min` of each coordinate; zeros for an empty cloud.
pub fn cloud_extents(points: &[[f64; 3]]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (k, extent) in out.iter_mut().enumerate() {
        let lo = points.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min);
        let hi = points
            .iter()
            .map(|p| p[k])
            .fold(f64::NEG_INFINITY, f64::max);
        if hi >= lo {
            *extent = hi - lo;
        }
    }
    out
}
