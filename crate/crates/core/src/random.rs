//! Seeded samplers for test instances.
//!
//! Every generator is a ChaCha8 stream keyed by a `u64` seed. Independent
//! sub-streams come from [`stream`], so a sampler can hand out reproducible
//! generators without threading one `&mut` through every call.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::operators::ComplexMatrix;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for sub-stream `index` of `seed`.
pub fn stream(seed: u64, index: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Standard complex Gaussian, `E|z|^2 = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

/// `rows x cols` matrix of independent complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-random unit vector.
pub fn haar_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        let norm = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
        if norm > 1e-8 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Uniform point on the probability simplex.
pub fn dirichlet<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let w: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let sum: f64 = w.iter().sum();
        if sum > 0.0 {
            return w.into_iter().map(|x| x / sum).collect();
        }
    }
}

/// `count` orthonormal vectors from Gram–Schmidt on Gaussian draws.
pub fn orthonormal_vectors<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    count: usize,
) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(count);
    while basis.len() < count {
        let mut v: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        for _ in 0..2 {
            for u in &basis {
                let overlap: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= overlap * y;
                }
            }
        }
        let norm = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
        if norm > 1e-6 {
            basis.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    basis
}

/// Haar-random unitary (columns from [`orthonormal_vectors`]).
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let cols = orthonormal_vectors(rng, dim, dim);
    ComplexMatrix::from_fn(dim, dim, |r, c| cols[c][r])
}

/// Orthogonal projector onto a random `rank`-dimensional subspace.
pub fn projector<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> ComplexMatrix {
    let mut p = ComplexMatrix::zeros(dim, dim);
    for v in orthonormal_vectors(rng, dim, rank) {
        p += &ComplexMatrix::outer(&v, &v);
    }
    p
}

/// Hermitian matrix with Gaussian entries, `(G + G^dag) / 2`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    ginibre(rng, dim, dim).hermitian_part()
}

/// Density matrix `G G^dag / Tr` with `G` a `dim x rank` Ginibre matrix.
pub fn density_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> ComplexMatrix {
    let g = ginibre(rng, dim, rank);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    m.scale(1.0 / tr).hermitian_part()
}

/// Kraus operators of a random channel: Ginibre draws `A_k`, normalized to
/// `A_k S^{-1/2}` with `S = sum_k A_k^dag A_k`. `count` is raised to
/// `ceil(dim_in / dim_out)` so that `S` is invertible.
pub fn kraus_operators<R: Rng + ?Sized>(
    rng: &mut R,
    dim_in: usize,
    dim_out: usize,
    count: usize,
) -> Vec<ComplexMatrix> {
    let count = count.max(dim_in.div_ceil(dim_out));
    let ops: Vec<ComplexMatrix> = (0..count).map(|_| ginibre(rng, dim_out, dim_in)).collect();
    let mut s = ComplexMatrix::zeros(dim_in, dim_in);
    for a in &ops {
        s += &(&a.adjoint() * a);
    }
    let inv_root = inverse_sqrt(&s);
    ops.iter().map(|a| a * &inv_root).collect()
}

/// Random POVM with `count` elements `S^{-1/2} A_k S^{-1/2}`, `A_k = G_k G_k^dag`.
pub fn povm<R: Rng + ?Sized>(rng: &mut R, dim: usize, count: usize) -> Vec<ComplexMatrix> {
    let raw: Vec<ComplexMatrix> = (0..count)
        .map(|_| {
            let g = ginibre(rng, dim, dim);
            &g * &g.adjoint()
        })
        .collect();
    let mut s = ComplexMatrix::zeros(dim, dim);
    for a in &raw {
        s += a;
    }
    let inv_root = inverse_sqrt(&s);
    raw.iter()
        .map(|a| (&(&inv_root * a) * &inv_root).hermitian_part())
        .collect()
}

fn inverse_sqrt(s: &ComplexMatrix) -> ComplexMatrix {
    let (values, vectors) = crate::operators::eigh(s).expect("square");
    let d: Vec<f64> = values.iter().map(|v| 1.0 / libm::sqrt(*v)).collect();
    (&(&vectors * &ComplexMatrix::from_diagonal(&d)) * &vectors.adjoint()).hermitian_part()
}
