//! Linear maps between matrix algebras, stored by their Choi matrix.
//!
//! For `E: M_n -> M_k` the Choi matrix is `C = sum_ij |i><j| ⊗ E(|i><j|)`, so
//! `C[(i,a),(j,b)] = E(|i><j|)[a,b]`. The Jamiołkowski operator
//! `J = (id ⊗ E)(SWAP) = sum_ij |i><j| ⊗ E(|j><i|)` is the partial transpose
//! of `C` on the input factor and is computed on demand.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::operators::{
    partial_trace, psd_check, BipartiteOperator, ComplexMatrix, DensityMatrix, Side,
};
use crate::{Error, Result, Tolerances};

/// A linear map `M_{dim_in} -> M_{dim_out}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperOp {
    choi: BipartiteOperator,
}

impl SuperOp {
    /// Wraps a Choi matrix on `input ⊗ output`.
    pub fn from_choi(choi: BipartiteOperator) -> Self {
        Self { choi }
    }

    /// Tabulates a linear map from its action on matrix units.
    pub fn from_map(
        dim_in: usize,
        dim_out: usize,
        mut f: impl FnMut(&ComplexMatrix) -> ComplexMatrix,
    ) -> Self {
        let mut choi = ComplexMatrix::zeros(dim_in * dim_out, dim_in * dim_out);
        for i in 0..dim_in {
            for j in 0..dim_in {
                let image = f(&ComplexMatrix::unit(dim_in, i, j));
                debug_assert_eq!((image.rows(), image.cols()), (dim_out, dim_out));
                for a in 0..dim_out {
                    for b in 0..dim_out {
                        choi[(i * dim_out + a, j * dim_out + b)] = image[(a, b)];
                    }
                }
            }
        }
        Self {
            choi: BipartiteOperator::new(dim_in, dim_out, choi).expect("square by construction"),
        }
    }

    /// `X -> sum_k K_k X K_k^dag`; each `K_k` is `dim_out x dim_in`.
    pub fn from_kraus(ops: &[ComplexMatrix]) -> Result<Self> {
        let first = ops.first().ok_or(Error::Empty)?;
        let (dim_out, dim_in) = (first.rows(), first.cols());
        let n = dim_in * dim_out;
        let mut choi = ComplexMatrix::zeros(n, n);
        for k in ops {
            if (k.rows(), k.cols()) != (dim_out, dim_in) {
                return Err(Error::DimensionMismatch {
                    context: "Kraus operator shape",
                    expected: dim_out * dim_in,
                    actual: k.rows() * k.cols(),
                });
            }
            // vec(K)[(i, a)] = K[a, i]
            let v: Vec<Complex64> = (0..n).map(|r| k[(r % dim_out, r / dim_out)]).collect();
            choi += &ComplexMatrix::outer(&v, &v);
        }
        Ok(Self {
            choi: BipartiteOperator::new(dim_in, dim_out, choi)?,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_map(dim, dim, Clone::clone)
    }

    /// `A -> Tr[A] sigma`.
    pub fn replace(dim_in: usize, sigma: &ComplexMatrix) -> Self {
        Self::from_map(dim_in, sigma.dim(), |x| sigma.scale_complex(x.trace()))
    }

    /// `A -> U A U^dag`.
    pub fn unitary(u: &ComplexMatrix) -> Self {
        Self::from_kraus(core::slice::from_ref(u)).expect("single operator")
    }

    /// `A -> A^T` in the computational basis.
    pub fn transpose_map(dim: usize) -> Self {
        Self::from_map(dim, dim, ComplexMatrix::transpose)
    }

    /// `A -> sum_k Tr[E_k A] sigma_k`; Choi matrix `sum_k E_k^T ⊗ sigma_k`.
    pub fn measure_and_prepare(povm: &[ComplexMatrix], states: &[ComplexMatrix]) -> Result<Self> {
        let (e0, s0) = match (povm.first(), states.first()) {
            (Some(e), Some(s)) => (e, s),
            _ => return Err(Error::Empty),
        };
        if povm.len() != states.len() {
            return Err(Error::DimensionMismatch {
                context: "measure-and-prepare outcomes",
                expected: povm.len(),
                actual: states.len(),
            });
        }
        let (dim_in, dim_out) = (e0.dim(), s0.dim());
        let mut choi = ComplexMatrix::zeros(dim_in * dim_out, dim_in * dim_out);
        for (e, s) in povm.iter().zip(states) {
            if e.dim() != dim_in || s.dim() != dim_out {
                return Err(Error::DimensionMismatch {
                    context: "measure-and-prepare operators",
                    expected: dim_in,
                    actual: e.dim(),
                });
            }
            choi += &e.transpose().kron(s);
        }
        Ok(Self {
            choi: BipartiteOperator::new(dim_in, dim_out, choi)?,
        })
    }

    pub fn dim_in(&self) -> usize {
        self.choi.dim_a()
    }

    pub fn dim_out(&self) -> usize {
        self.choi.dim_b()
    }

    pub fn choi(&self) -> &BipartiteOperator {
        &self.choi
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let (n, k) = (self.dim_in(), self.dim_out());
        if x.rows() != n || x.cols() != n {
            return Err(Error::DimensionMismatch {
                context: "channel input",
                expected: n,
                actual: x.rows(),
            });
        }
        let mut out = ComplexMatrix::zeros(k, k);
        for i in 0..n {
            for j in 0..n {
                let c = x[(i, j)];
                if c == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for a in 0..k {
                    for b in 0..k {
                        out[(a, b)] += c * self.choi.entry(i, a, j, b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `(E ⊗ id)(T)` for `T` on `input ⊗ R`; the result lives on `output ⊗ R`.
    pub fn apply_on_first(&self, t: &BipartiteOperator) -> Result<BipartiteOperator> {
        let (n, k, r) = (self.dim_in(), self.dim_out(), t.dim_b());
        if t.dim_a() != n {
            return Err(Error::DimensionMismatch {
                context: "channel input factor",
                expected: n,
                actual: t.dim_a(),
            });
        }
        let mut out = ComplexMatrix::zeros(k * r, k * r);
        for i in 0..n {
            for j in 0..n {
                let block = t.block(i, j);
                for a in 0..k {
                    for b in 0..k {
                        let c = self.choi.entry(i, a, j, b);
                        if c == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        for x in 0..r {
                            for y in 0..r {
                                out[(a * r + x, b * r + y)] += c * block[(x, y)];
                            }
                        }
                    }
                }
            }
        }
        BipartiteOperator::new(k, r, out)
    }

    /// `(id ⊗ E)(SWAP)`.
    pub fn jamiolkowski(&self) -> BipartiteOperator {
        partial_transpose_input(&self.choi)
    }

    pub fn from_jamiolkowski(j: &BipartiteOperator) -> Self {
        Self {
            choi: partial_transpose_input(j),
        }
    }

    /// Positivity of the Choi matrix plus trace preservation.
    pub fn is_cptp(&self, tol: &Tolerances) -> Result<CptpDiagnostics> {
        let hermiticity_deviation = self.choi.matrix().hermiticity_deviation();
        let check = psd_check(&self.choi.matrix().hermitian_part(), tol.psd)?;
        let tp_residual = self.trace_preservation_residual();
        let positive = hermiticity_deviation <= tol.hermiticity && check.psd;
        Ok(CptpDiagnostics {
            cptp: positive && tp_residual <= tol.trace,
            choi_min_eigenvalue: check.min_eigenvalue,
            choi_max_eigenvalue: check.max_eigenvalue,
            tp_residual,
            hermiticity_deviation,
        })
    }

    /// Hermitian Choi matrix and `Tr_out C = 1`.
    pub fn is_hptp(&self, tol: &Tolerances) -> bool {
        self.choi.matrix().hermiticity_deviation() <= tol.hermiticity
            && self.trace_preservation_residual() <= tol.trace
    }

    /// `max |Tr_out C - 1|`.
    pub fn trace_preservation_residual(&self) -> f64 {
        partial_trace(&self.choi, Side::B).max_abs_diff(&ComplexMatrix::identity(self.dim_in()))
    }

    /// Hilbert–Schmidt adjoint: `Tr[E(A)^dag B] = Tr[A^dag E*(B)]`.
    pub fn hs_adjoint(&self) -> Self {
        let (n, k) = (self.dim_in(), self.dim_out());
        let m = ComplexMatrix::from_fn(n * k, n * k, |r, c| {
            let (a, i, b, j) = (r / n, r % n, c / n, c % n);
            self.choi.entry(i, a, j, b).conj()
        });
        Self {
            choi: BipartiteOperator::new(k, n, m).expect("square by construction"),
        }
    }

    /// Matrix of the map on row-major vectorized operators:
    /// `vec(E(X)) = S vec(X)` with `S[(a,b),(i,j)] = C[(i,a),(j,b)]`.
    pub fn superoperator_matrix(&self) -> ComplexMatrix {
        let (n, k) = (self.dim_in(), self.dim_out());
        let mut s = ComplexMatrix::zeros(k * k, n * n);
        for i in 0..n {
            for j in 0..n {
                for a in 0..k {
                    for b in 0..k {
                        s[(a * k + b, i * n + j)] = self.choi.entry(i, a, j, b);
                    }
                }
            }
        }
        s
    }

    /// Largest entrywise difference of the Choi matrices.
    pub fn max_distance(&self, other: &Self) -> f64 {
        self.choi.max_abs_diff(&other.choi)
    }
}

/// The map `F ∘ E`.
pub fn compose(f: &SuperOp, e: &SuperOp) -> Result<SuperOp> {
    if e.dim_out() != f.dim_in() {
        return Err(Error::DimensionMismatch {
            context: "composition",
            expected: f.dim_in(),
            actual: e.dim_out(),
        });
    }
    let sf = f.superoperator_matrix();
    let se = e.superoperator_matrix();
    let s = &sf * &se;
    let (n, k) = (e.dim_in(), f.dim_out());
    let choi = ComplexMatrix::from_fn(n * k, n * k, |r, c| {
        let (i, a, j, b) = (r / k, r % k, c / k, c % k);
        s[(a * k + b, i * n + j)]
    });
    Ok(SuperOp {
        choi: BipartiteOperator::new(n, k, choi)?,
    })
}

fn partial_transpose_input(t: &BipartiteOperator) -> BipartiteOperator {
    let (n, k) = (t.dim_a(), t.dim_b());
    let m = ComplexMatrix::from_fn(n * k, n * k, |r, c| {
        let (i, a, j, b) = (r / k, r % k, c / k, c % k);
        t.entry(j, a, i, b)
    });
    BipartiteOperator::new(n, k, m).expect("square by construction")
}

/// Outcome of [`SuperOp::is_cptp`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CptpDiagnostics {
    pub cptp: bool,
    pub choi_min_eigenvalue: f64,
    pub choi_max_eigenvalue: f64,
    /// `max |Tr_out C - 1|`.
    pub tp_residual: f64,
    pub hermiticity_deviation: f64,
}

/// A channel together with its input state.
#[derive(Clone, Debug, PartialEq)]
pub struct Process {
    channel: SuperOp,
    input_state: DensityMatrix,
}

impl Process {
    pub fn new(channel: SuperOp, input_state: DensityMatrix) -> Result<Self> {
        if channel.dim_in() != input_state.dim() {
            return Err(Error::DimensionMismatch {
                context: "process input state",
                expected: channel.dim_in(),
                actual: input_state.dim(),
            });
        }
        Ok(Self {
            channel,
            input_state,
        })
    }

    pub fn channel(&self) -> &SuperOp {
        &self.channel
    }

    pub fn input_state(&self) -> &DensityMatrix {
        &self.input_state
    }

    pub fn output_state(&self) -> ComplexMatrix {
        self.channel
            .apply(self.input_state.matrix())
            .expect("dimensions checked at construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{pauli, tensor};
    use alloc::vec;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn omega(d: usize) -> Vec<Complex64> {
        (0..d * d)
            .map(|r| {
                if r / d == r % d {
                    c(1.0, 0.0)
                } else {
                    c(0.0, 0.0)
                }
            })
            .collect()
    }

    #[test]
    fn identity_kraus_choi_is_omega() {
        let e = SuperOp::from_kraus(&[ComplexMatrix::identity(2)]).unwrap();
        let w = omega(2);
        assert_eq!(e.choi().matrix(), &ComplexMatrix::outer(&w, &w));
        assert_eq!(e, SuperOp::identity(2));
    }

    #[test]
    fn bit_flip_kraus() {
        let e = SuperOp::from_kraus(&[pauli(1).unwrap()]).unwrap();
        let out = e.apply(&ComplexMatrix::from_diagonal(&[1.0, 0.0])).unwrap();
        assert_eq!(out, ComplexMatrix::from_diagonal(&[0.0, 1.0]));
    }

    #[test]
    fn dephasing_kraus_has_half_coherence() {
        let p: f64 = 0.75;
        let e = SuperOp::from_kraus(&[
            ComplexMatrix::identity(2).scale(p.sqrt()),
            pauli(3).unwrap().scale((1.0 - p).sqrt()),
        ])
        .unwrap();
        assert!(e.is_cptp(&tol()).unwrap().cptp);
        let plus = ComplexMatrix::from_real(2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        let out = e.apply(&plus).unwrap();
        assert!((out[(0, 1)].re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn kraus_shape_mismatch() {
        let r = SuperOp::from_kraus(&[ComplexMatrix::identity(2), ComplexMatrix::identity(3)]);
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
        assert!(matches!(SuperOp::from_kraus(&[]), Err(Error::Empty)));
    }

    #[test]
    fn replace_channel_outputs_sigma() {
        let sigma = ComplexMatrix::from_real(2, &[0.3, 0.1, 0.1, 0.7]).unwrap();
        let e = SuperOp::replace(3, &sigma);
        let rho = ComplexMatrix::from_diagonal(&[0.2, 0.5, 0.3]);
        assert!(e.apply(&rho).unwrap().max_abs_diff(&sigma) < 1e-15);
        let j = e.jamiolkowski();
        assert!(
            j.matrix()
                .max_abs_diff(&ComplexMatrix::identity(3).kron(&sigma))
                < 1e-15
        );
    }

    #[test]
    fn apply_rejects_wrong_dimension() {
        let e = SuperOp::identity(2);
        assert!(e.apply(&ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn identity_jamiolkowski_is_swap() {
        assert_eq!(
            SuperOp::identity(3).jamiolkowski(),
            BipartiteOperator::swap(3)
        );
        let e = SuperOp::transpose_map(2);
        assert_eq!(SuperOp::from_jamiolkowski(&e.jamiolkowski()), e);
    }

    #[test]
    fn transpose_map_is_hptp_not_cp() {
        let e = SuperOp::transpose_map(2);
        assert_eq!(e.choi(), &BipartiteOperator::swap(2));
        let d = e.is_cptp(&tol()).unwrap();
        assert!(!d.cptp);
        assert!((d.choi_min_eigenvalue + 1.0).abs() < 1e-14);
        assert!(e.is_hptp(&tol()));
    }

    #[test]
    fn non_hermitian_choi_is_not_hptp() {
        let i_sigma2 = pauli(2).unwrap().scale_complex(c(0.0, 1.0));
        let e = SuperOp::from_choi(tensor(&i_sigma2, &ComplexMatrix::identity(2)).unwrap());
        assert!(!e.is_hptp(&tol()));
        assert!(SuperOp::identity(2).is_hptp(&tol()));
    }

    #[test]
    fn compose_examples() {
        let e = SuperOp::from_kraus(&[pauli(1).unwrap()]).unwrap();
        let id = SuperOp::identity(2);
        assert!(compose(&id, &e).unwrap().max_distance(&e) < 1e-15);
        let sigma = ComplexMatrix::from_diagonal(&[0.25, 0.75]);
        let r = SuperOp::replace(2, &sigma);
        assert!(compose(&r, &e).unwrap().max_distance(&r) < 1e-15);
        assert!(compose(&SuperOp::identity(3), &e).is_err());
    }

    #[test]
    fn adjoint_of_unitary_and_trace() {
        let h = ComplexMatrix::from_real(2, &[1.0, 1.0, 1.0, -1.0])
            .unwrap()
            .scale(1.0 / 2f64.sqrt());
        let s = ComplexMatrix::from_row_major(
            2,
            2,
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)],
        )
        .unwrap();
        let u = &s * &h;
        let e = SuperOp::unitary(&u);
        assert!(e.hs_adjoint().max_distance(&SuperOp::unitary(&u.adjoint())) < 1e-15);

        let trace = SuperOp::from_map(3, 1, |x| ComplexMatrix::from_fn(1, 1, |_, _| x.trace()));
        let adj = trace.hs_adjoint();
        let out = adj
            .apply(&ComplexMatrix::from_fn(1, 1, |_, _| c(2.5, 0.0)))
            .unwrap();
        assert!(out.max_abs_diff(&ComplexMatrix::identity(3).scale(2.5)) < 1e-15);
    }

    #[test]
    fn apply_on_first_matches_blockwise() {
        let e = SuperOp::from_kraus(&[pauli(1).unwrap()]).unwrap();
        let rho = ComplexMatrix::from_diagonal(&[1.0, 0.0]);
        let sigma = ComplexMatrix::from_diagonal(&[0.3, 0.7]);
        let t = tensor(&rho, &sigma).unwrap();
        let out = e.apply_on_first(&t).unwrap();
        let expected = tensor(&ComplexMatrix::from_diagonal(&[0.0, 1.0]), &sigma).unwrap();
        assert!(out.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn process_checks_dimension() {
        let rho = DensityMatrix::maximally_mixed(3);
        assert!(Process::new(SuperOp::identity(2), rho).is_err());
    }
}
