//! Dense complex matrix helpers shared by the evaluation and testing modules.

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// `(M + M*) / 2`.
pub fn symmetrize(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Largest entrywise modulus of `M - M*`.
pub fn hermitian_deviation(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut vals: Vec<f64> = symmetrize(m).symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Eigen-decomposition `m = Q diag(vals) Q*` of the Hermitian part of `m`.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let eig = symmetrize(m).symmetric_eigen();
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

pub fn min_eigenvalue(m: &CMat) -> f64 {
    hermitian_eigenvalues(m).first().copied().unwrap_or(f64::INFINITY)
}

/// Spectral norm, computed as the square root of the top eigenvalue of `M M*`.
pub fn spectral_norm(m: &CMat) -> f64 {
    hermitian_eigenvalues(&(m * m.adjoint()))
        .last()
        .map_or(0.0, |v| v.max(0.0).sqrt())
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Block-diagonal `diag(a, b)`.
pub fn block_diag(a: &CMat, b: &CMat) -> CMat {
    let (n, m) = (a.nrows(), b.nrows());
    let mut out = CMat::zeros(n + m, a.ncols() + b.ncols());
    out.view_mut((0, 0), (n, a.ncols())).copy_from(a);
    out.view_mut((n, a.ncols()), (m, b.ncols())).copy_from(b);
    out
}

/// Direct sum of two block matrices whose `blocks × blocks` block entries are `n × n` and
/// `m × m`: block `(r, c)` of the result is `a[r, c] ⊕ b[r, c]`.
pub fn blockwise_direct_sum(blocks: usize, a: &CMat, n: usize, b: &CMat, m: usize) -> CMat {
    let size = n + m;
    let mut out = CMat::zeros(blocks * size, blocks * size);
    for r in 0..blocks {
        for col in 0..blocks {
            let ab = a.view((r * n, col * n), (n, n));
            let bb = b.view((r * m, col * m), (m, m));
            out.view_mut((r * size, col * size), (n, n)).copy_from(&ab);
            out.view_mut((r * size + n, col * size + n), (m, m)).copy_from(&bb);
        }
    }
    out
}

/// Permutation matrix `P` with `P (A ⊗ B) P^T = B ⊗ A` for `A` of size `p` and `B` of size `q`.
pub fn shuffle_permutation(p: usize, q: usize) -> CMat {
    let n = p * q;
    let mut perm = CMat::zeros(n, n);
    for i in 0..p {
        for j in 0..q {
            // row index of B ⊗ A is j * p + i, column index of A ⊗ B is i * q + j
            perm[(j * p + i, i * q + j)] = C64::new(1.0, 0.0);
        }
    }
    perm
}

/// Deviation `‖U*U − I‖_max`.
pub fn unitary_deviation(u: &CMat) -> f64 {
    if u.nrows() != u.ncols() {
        return f64::INFINITY;
    }
    max_abs(&(u.adjoint() * u - identity(u.nrows())))
}

pub fn random_gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    })
}

/// Hermitian matrix with Gaussian entries (GUE-like).
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    symmetrize(&random_gaussian(rng, n, n))
}

/// Unitary from the QR factorization of a Ginibre sample, with the phases of `R`'s
/// diagonal moved into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    let qr = random_gaussian(rng, n, n).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// Hermitian matrix `U diag(eigs) U*` with a random unitary `U`.
pub fn hermitian_with_spectrum<R: Rng + ?Sized>(rng: &mut R, eigs: &[f64]) -> CMat {
    let u = random_unitary(rng, eigs.len());
    let d = CMat::from_diagonal(&CVec::from_iterator(eigs.len(), eigs.iter().map(|&e| C64::new(e, 0.0))));
    symmetrize(&(&u * d * u.adjoint()))
}

pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVec {
    let v = random_gaussian(rng, n, 1).column(0).into_owned();
    let norm = v.norm();
    v.unscale(norm)
}

/// Column vector `v ⊗ I_m` as an `(len(v) m) × m` matrix.
pub fn vec_kron_identity(v: &CVec, m: usize) -> CMat {
    let vm = CMat::from_column_slice(v.len(), 1, v.as_slice());
    kron(&vm, &identity(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..6 {
            let u = random_unitary(&mut rng, n);
            assert!(unitary_deviation(&u) < 1e-12);
        }
    }

    #[test]
    fn shuffle_swaps_kronecker_factors() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_hermitian(&mut rng, 2);
        let b = random_hermitian(&mut rng, 3);
        let p = shuffle_permutation(2, 3);
        let lhs = &p * kron(&a, &b) * p.transpose();
        assert!(max_abs(&(lhs - kron(&b, &a))) < 1e-14);
    }

    #[test]
    fn complex_hermitian_eigen_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_hermitian(&mut rng, 5);
        let (vals, q) = hermitian_eigen(&m);
        let d = CMat::from_diagonal(&CVec::from_iterator(5, vals.iter().map(|&v| c(v, 0.0))));
        assert!(max_abs(&(&q * d * q.adjoint() - &m)) < 1e-12);
    }

    #[test]
    fn spectral_norm_of_diagonal() {
        let m = CMat::from_diagonal(&CVec::from_vec(vec![c(3.0, 0.0), c(-1.0, 0.0)]));
        assert!((spectral_norm(&m) - 3.0).abs() < 1e-14);
    }
}
