//! Dense complex linear algebra helpers shared by every module.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Result, SosError};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn dagger(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn trace(m: &CMatrix) -> C64 {
    m.trace()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Largest entry of `m - m†`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigenvalues (ascending) and eigenvectors (columns) of the Hermitian part of `m`.
/// Hermitian part with entries far below roundoff flushed to zero; the
/// eigensolver returns NaN on matrices whose entries square to underflow.
fn eigen_input(m: &CMatrix) -> CMatrix {
    let mut h = hermitize(m);
    let floor = 1e-32 * max_abs(&h);
    for z in h.iter_mut() {
        if z.norm() < floor {
            *z = C64::new(0.0, 0.0);
        }
    }
    h
}

pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = eigen_input(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |i, j| {
        eig.eigenvectors[(i, order[j])]
    });
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = eigen_input(m).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Eigenvalues in `[-PSD_CLAMP, 0)` are roundoff and get clamped to zero.
pub const PSD_CLAMP: f64 = 1e-8;

/// `V f(Λ) V†` for a Hermitian matrix.
pub fn hermitian_function(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let mut scaled = vectors.clone();
    for (j, &lam) in values.iter().enumerate() {
        let fl = f(lam);
        scaled.column_mut(j).scale_mut(fl);
    }
    scaled * vectors.adjoint()
}

/// Principal square root of a positive semidefinite matrix.
pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let (values, vectors) = hermitian_eigen(m);
    if let Some(&low) = values.first() {
        if low < -PSD_CLAMP {
            return Err(SosError::InvalidState(format!(
                "matrix square root of a non-PSD matrix (min eigenvalue {low:.3e})"
            )));
        }
    }
    let mut scaled = vectors.clone();
    for (j, &lam) in values.iter().enumerate() {
        scaled.column_mut(j).scale_mut(lam.max(0.0).sqrt());
    }
    Ok(scaled * vectors.adjoint())
}

pub fn expm(m: &CMatrix) -> CMatrix {
    m.clone().exp()
}

pub fn outer(u: &CVector, v: &CVector) -> CMatrix {
    u * v.adjoint()
}

/// Compressed sparse row matrix used to apply banded operators to dense matrices.
#[derive(Debug, Clone)]
pub struct SparseMatrix {
    n_rows: usize,
    n_cols: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl SparseMatrix {
    pub fn from_dense(m: &CMatrix) -> Self {
        let mut row_ptr = Vec::with_capacity(m.nrows() + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                if z != C64::new(0.0, 0.0) {
                    cols.push(j);
                    vals.push(z);
                }
            }
            row_ptr.push(cols.len());
        }
        SparseMatrix {
            n_rows: m.nrows(),
            n_cols: m.ncols(),
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn density(&self) -> f64 {
        self.nnz() as f64 / (self.n_rows * self.n_cols).max(1) as f64
    }

    /// `out += scale * self * x`
    pub fn mul_left_acc(&self, x: &CMatrix, scale: C64, out: &mut CMatrix) {
        debug_assert_eq!(self.n_cols, x.nrows());
        debug_assert_eq!(out.nrows(), self.n_rows);
        let (xr, or) = (x.nrows(), out.nrows());
        let xs = x.as_slice();
        let os = out.as_mut_slice();
        for (xc, oc) in xs.chunks_exact(xr).zip(os.chunks_exact_mut(or)) {
            for (i, o) in oc.iter_mut().enumerate() {
                let lo = self.row_ptr[i];
                let hi = self.row_ptr[i + 1];
                if lo == hi {
                    continue;
                }
                let mut acc = C64::new(0.0, 0.0);
                for (v, &c) in self.vals[lo..hi].iter().zip(&self.cols[lo..hi]) {
                    acc += v * xc[c];
                }
                *o += scale * acc;
            }
        }
    }

    pub fn mul_left(&self, x: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.n_rows, x.ncols());
        self.mul_left_acc(x, C64::new(1.0, 0.0), &mut out);
        out
    }

    /// `out += scale * x * self`
    pub fn mul_right_acc(&self, x: &CMatrix, scale: C64, out: &mut CMatrix) {
        debug_assert_eq!(x.ncols(), self.n_rows);
        for r in 0..self.n_rows {
            let src = x.column(r);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let v = scale * self.vals[k];
                let mut dst = out.column_mut(self.cols[k]);
                dst.axpy(v, &src, C64::new(1.0, 0.0));
            }
        }
    }

    pub fn mul_right(&self, x: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(x.nrows(), self.n_cols);
        self.mul_right_acc(x, C64::new(1.0, 0.0), &mut out);
        out
    }
}

/// Dense or sparse storage, picked by fill ratio.
#[derive(Debug, Clone)]
pub enum Operator {
    Dense(CMatrix),
    Sparse(SparseMatrix),
}

impl Operator {
    const SPARSE_FILL: f64 = 0.2;

    pub fn new(m: &CMatrix) -> Self {
        let s = SparseMatrix::from_dense(m);
        if s.density() <= Self::SPARSE_FILL {
            Operator::Sparse(s)
        } else {
            Operator::Dense(m.clone())
        }
    }

    pub fn left(&self, x: &CMatrix) -> CMatrix {
        match self {
            Operator::Dense(m) => m * x,
            Operator::Sparse(s) => s.mul_left(x),
        }
    }

    pub fn right(&self, x: &CMatrix) -> CMatrix {
        match self {
            Operator::Dense(m) => x * m,
            Operator::Sparse(s) => s.mul_right(x),
        }
    }

    pub fn right_acc(&self, x: &CMatrix, scale: C64, out: &mut CMatrix) {
        match self {
            Operator::Dense(m) => out.gemm(scale, x, m, C64::new(1.0, 0.0)),
            Operator::Sparse(s) => s.mul_right_acc(x, scale, out),
        }
    }

    pub fn left_acc(&self, x: &CMatrix, scale: C64, out: &mut CMatrix) {
        match self {
            Operator::Dense(m) => out.gemm(scale, m, x, C64::new(1.0, 0.0)),
            Operator::Sparse(s) => s.mul_left_acc(x, scale, out),
        }
    }
}

/// `y += a * x` elementwise.
pub fn axpy(y: &mut CMatrix, a: C64, x: &CMatrix) {
    for (yi, xi) in y.as_mut_slice().iter_mut().zip(x.as_slice()) {
        *yi += a * xi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize, seed: u64) -> CMatrix {
        let mut s = seed;
        CMatrix::from_fn(n, n, |_, _| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = ((s >> 33) as f64) / (1u64 << 31) as f64 - 0.5;
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let b = ((s >> 33) as f64) / (1u64 << 31) as f64 - 0.5;
            c(a, b)
        })
    }

    #[test]
    fn sparse_products_match_dense() {
        let mut op = sample(7, 3);
        for i in 0..7 {
            for j in 0..7 {
                if (i + 2 * j) % 3 != 0 {
                    op[(i, j)] = C64::new(0.0, 0.0);
                }
            }
        }
        let x = sample(7, 9);
        let s = SparseMatrix::from_dense(&op);
        assert!(max_abs(&(s.mul_left(&x) - &op * &x)) < 1e-14);
        assert!(max_abs(&(s.mul_right(&x) - &x * &op)) < 1e-14);
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let a = sample(6, 11);
        let m = &a * a.adjoint();
        let r = psd_sqrt(&m).unwrap();
        assert!(max_abs(&(&r * &r - &m)) < 1e-12);
    }

    #[test]
    fn psd_sqrt_rejects_negative() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![real(1.0), real(-1e-3)]));
        assert!(psd_sqrt(&m).is_err());
    }

    #[test]
    fn eigenvalues_sorted() {
        let a = sample(5, 1);
        let h = hermitize(&a);
        let v = hermitian_eigenvalues(&h);
        assert!(v.windows(2).all(|w| w[0] <= w[1]));
        let tr: f64 = v.iter().sum();
        assert!((tr - h.trace().re).abs() < 1e-12);
    }
}
