//! Small dense complex linear algebra.
//!
//! Everything here works on `DMatrix<Complex64>` of modest size (a few hundred rows at most).
//! The only nontrivial primitive is the Hermitian eigendecomposition; qubit-sized matrices take a
//! closed-form path because the optimizers call it in their inner loops.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Eigenvalues (ascending) and matching orthonormal eigenvectors (as columns).
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// Hermitian eigendecomposition. Only the lower triangle is trusted; the input is symmetrized first.
pub fn eigh(m: &CMatrix) -> HermitianEigen {
    let n = m.nrows();
    debug_assert_eq!(n, m.ncols());
    match n {
        0 => HermitianEigen { values: vec![], vectors: CMatrix::zeros(0, 0) },
        1 => HermitianEigen {
            values: vec![m[(0, 0)].re],
            vectors: CMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)),
        },
        2 => eigh_2x2(m),
        _ => {
            let h = hermitize(m);
            let eig = SymmetricEigen::new(h);
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
            let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
            let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
            HermitianEigen { values, vectors }
        }
    }
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(m: &CMatrix) -> Vec<f64> {
    match m.nrows() {
        2 => {
            let (lo, hi) = eigvals_2x2(m);
            vec![lo, hi]
        }
        n if n > 2 => {
            let mut v: Vec<f64> = hermitize(m).symmetric_eigenvalues().iter().copied().collect();
            v.sort_by(f64::total_cmp);
            v
        }
        _ => eigh(m).values,
    }
}

fn eigvals_2x2(m: &CMatrix) -> (f64, f64) {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = (m[(1, 0)].conj() + m[(0, 1)]) * 0.5;
    let mean = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    (mean - rad, mean + rad)
}

fn eigh_2x2(m: &CMatrix) -> HermitianEigen {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = (m[(1, 0)].conj() + m[(0, 1)]) * 0.5;
    let (lo, hi) = eigvals_2x2(m);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    // (b, lam - a) and (lam - d, conj b) both solve (H - lam) v = 0; take the better conditioned.
    let vec_for = |lam: f64| -> [Complex64; 2] {
        let u = [b, Complex64::new(lam - a, 0.0)];
        let w = [Complex64::new(lam - d, 0.0), b.conj()];
        let nu = u[0].norm_sqr() + u[1].norm_sqr();
        let nw = w[0].norm_sqr() + w[1].norm_sqr();
        let (v, nv) = if nu >= nw { (u, nu) } else { (w, nw) };
        if nv <= 1e-300 {
            return [one, zero];
        }
        let s = 1.0 / nv.sqrt();
        [v[0] * s, v[1] * s]
    };
    if hi - lo <= 1e-300 {
        return HermitianEigen { values: vec![lo, hi], vectors: CMatrix::identity(2, 2) };
    }
    let v0 = vec_for(lo);
    // Second vector orthogonal to the first by construction.
    let v1 = [-v0[1].conj(), v0[0].conj()];
    HermitianEigen {
        values: vec![lo, hi],
        vectors: CMatrix::from_column_slice(2, 2, &[v0[0], v0[1], v1[0], v1[1]]),
    }
}

/// (M + M†)/2.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Kronecker product a ⊗ b.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Trace out the second factor of a (d1·d2)-dimensional operator.
pub fn partial_trace_second(m: &CMatrix, d1: usize, d2: usize) -> CMatrix {
    debug_assert_eq!(m.nrows(), d1 * d2);
    CMatrix::from_fn(d1, d1, |i, j| (0..d2).map(|k| m[(i * d2 + k, j * d2 + k)]).sum())
}

/// Trace out the first factor of a (d1·d2)-dimensional operator.
pub fn partial_trace_first(m: &CMatrix, d1: usize, d2: usize) -> CMatrix {
    debug_assert_eq!(m.nrows(), d1 * d2);
    CMatrix::from_fn(d2, d2, |i, j| (0..d1).map(|k| m[(k * d2 + i, k * d2 + j)]).sum())
}

/// |v⟩⟨v|.
pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

/// Re Tr(A B) for Hermitian A, B.
pub fn trace_product_re(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    acc
}

/// Largest absolute entrywise deviation from Hermiticity.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..=i {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}
