//! Hermitian eigendecomposition.
//!
//! Cyclic complex Jacobi: each rotation first removes the phase of the pivot
//! entry, then applies a real Givens rotation. The sweep order is fixed, so
//! the output is a deterministic function of the input bits.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (ascending) and the matching orthonormal eigenvectors as columns.
pub fn eigh(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = m.ensure_square()?;
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let total = a.frobenius_norm();
    if n <= 1 || total == 0.0 {
        return Ok(finish(a, v));
    }
    let target = (f64::EPSILON * total) * (f64::EPSILON * total);

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    Ok(finish(a, v))
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.dim();
    let g = a[(p, q)];
    let r = g.norm();
    if r == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = g / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + libm::sqrt(theta * theta + 1.0))
    } else {
        -1.0 / (-theta + libm::sqrt(theta * theta + 1.0))
    };
    let c = 1.0 / libm::sqrt(t * t + 1.0);
    let s = t * c;

    // U = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane.
    let u_pp = Complex64::new(c, 0.0);
    let u_pq = Complex64::new(s, 0.0);
    let u_qp = phase.conj() * -s;
    let u_qq = phase.conj() * c;

    for k in 0..n {
        let x = a[(k, p)];
        let y = a[(k, q)];
        a[(k, p)] = x * u_pp + y * u_qp;
        a[(k, q)] = x * u_pq + y * u_qq;
    }
    for k in 0..n {
        let x = a[(p, k)];
        let y = a[(q, k)];
        a[(p, k)] = u_pp.conj() * x + u_qp.conj() * y;
        a[(q, k)] = u_pq.conj() * x + u_qq.conj() * y;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let x = v[(k, p)];
        let y = v[(k, q)];
        v[(k, p)] = x * u_pp + y * u_qp;
        v[(k, q)] = x * u_pq + y * u_qq;
    }
}

fn finish(a: ComplexMatrix, v: ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = a.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    (values, vectors)
}

/// Canonical spectral decomposition `M = sum_k lambda_k P_k` with nearby
/// eigenvalues merged into one projector.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    projectors: Vec<ComplexMatrix>,
    multiplicities: Vec<usize>,
    point_spectrum: Vec<f64>,
    basis: ComplexMatrix,
}

impl SpectralDecomposition {
    /// Decomposes a Hermitian matrix. Eigenvalues whose distance to the first
    /// member of the current cluster is below `cluster_gap` are merged and
    /// represented by their mean.
    pub fn new(m: &ComplexMatrix, cluster_gap: f64, hermiticity_tol: f64) -> Result<Self> {
        m.ensure_square()?;
        let deviation = m.hermiticity_deviation();
        if deviation > hermiticity_tol {
            return Err(Error::NotHermitian { deviation });
        }
        let (ascending, vectors) = eigh(m)?;
        let n = ascending.len();
        // descending order
        let point_spectrum: Vec<f64> = ascending.iter().rev().copied().collect();
        let basis = ComplexMatrix::from_fn(n, n, |r, c| vectors[(r, n - 1 - c)]);

        let mut eigenvalues = Vec::new();
        let mut multiplicities: Vec<usize> = Vec::new();
        let mut start = 0;
        while start < n {
            let head = point_spectrum[start];
            let mut end = start + 1;
            while end < n && head - point_spectrum[end] < cluster_gap {
                end += 1;
            }
            let mean = point_spectrum[start..end].iter().sum::<f64>() / (end - start) as f64;
            eigenvalues.push(mean);
            multiplicities.push(end - start);
            start = end;
        }

        let mut projectors = Vec::with_capacity(eigenvalues.len());
        let mut offset = 0;
        for &mult in &multiplicities {
            let mut p = ComplexMatrix::zeros(n, n);
            for col in offset..offset + mult {
                let u = basis.column(col);
                p += &ComplexMatrix::outer(&u, &u);
            }
            projectors.push(p);
            offset += mult;
        }

        Ok(Self {
            eigenvalues,
            projectors,
            multiplicities,
            point_spectrum,
            basis,
        })
    }

    /// Distinct (clustered) eigenvalues, descending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// Every eigenvalue with repetition, descending, matching [`Self::basis`] columns.
    pub fn point_spectrum(&self) -> &[f64] {
        &self.point_spectrum
    }

    /// Unitary whose columns are eigenvectors ordered like [`Self::point_spectrum`].
    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Cluster index of each basis column.
    pub fn cluster_of_column(&self) -> Vec<usize> {
        self.multiplicities
            .iter()
            .enumerate()
            .flat_map(|(k, &m)| core::iter::repeat_n(k, m))
            .collect()
    }

    /// `sum_k lambda_k P_k`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply_function(|x| x)
    }

    /// `sum_k f(lambda_k) P_k`.
    pub fn apply_function(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for (&lambda, p) in self.eigenvalues.iter().zip(&self.projectors) {
            let value = f(lambda);
            if value != 0.0 {
                out += &p.scale(value);
            }
        }
        out
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.point_spectrum.last().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.point_spectrum.first().copied().unwrap_or(0.0)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.max_eigenvalue().abs().max(self.min_eigenvalue().abs())
    }
}
