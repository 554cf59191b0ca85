//! Spectral utilities: dense singular values, rank estimation, a Jacobi
//! eigensolver used as an independent cross-check, and seeded randomized
//! subspace iteration for large structured truncations.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Singular values of a dense complex matrix, sorted descending.
pub fn dense_singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let svd = m.clone().svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Counts singular values above `tol` times the largest one. The zero matrix
/// has rank 0.
pub fn rank_from_singular_values(sigma: &[f64], tol: f64) -> usize {
    match sigma.first() {
        None => 0,
        Some(&s0) if s0 == 0.0 => 0,
        Some(&s0) => sigma.iter().filter(|&&s| s > tol * s0).count(),
    }
}

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
/// sorted descending. Independent of the bidiagonalization-based SVD above;
/// the singular values of `A` are the square roots of the eigenvalues of
/// `A^H A`.
pub fn jacobi_hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "matrix must be square");
    let mut a = m.clone();
    let max_sweeps = 60;
    for _ in 0..max_sweeps {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[(i, j)].norm_sqr();
            }
        }
        if off.sqrt() < 1e-14 * (1.0 + a.iter().map(|c| c.norm()).fold(0.0, f64::max)) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.norm() == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Unitary 2x2 diagonalization of [[app, apq], [conj(apq), aqq]].
                let phase = apq / apq.norm();
                let tau = (aqq - app) / (2.0 * apq.norm());
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let cth = 1.0 / (1.0 + t * t).sqrt();
                let sth = t * cth;
                let c = Complex64::new(cth, 0.0);
                let s = phase * sth;
                // Apply G^H A G with G = [[c, s], [-conj(s), c]] on (p, q).
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * s.conj();
                    a[(k, q)] = akp * s + akq * c;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * s;
                    a[(q, k)] = apk * s.conj() + aqk * c;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    eig.sort_by(|x, y| y.partial_cmp(x).unwrap());
    eig
}

/// A linear operator given through block matrix-vector products.
pub trait LinOp: Sync {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    /// `A * X` for a block of column vectors.
    fn apply(&self, x: &DMatrix<Complex64>) -> DMatrix<Complex64>;
    /// `A^H * X`.
    fn apply_adjoint(&self, x: &DMatrix<Complex64>) -> DMatrix<Complex64>;
}

impl LinOp for DMatrix<Complex64> {
    fn nrows(&self) -> usize {
        DMatrix::nrows(self)
    }
    fn ncols(&self) -> usize {
        DMatrix::ncols(self)
    }
    fn apply(&self, x: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        self * x
    }
    fn apply_adjoint(&self, x: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        self.adjoint() * x
    }
}

/// The Kronecker-structured truncation `A1 (x) A2 - B1 (x) B2` on the
/// lexicographic basis (first factor major). Covers tensor-symbol
/// semi-commutators and commutators without materializing the large matrix.
pub struct KronDiff {
    pub a1: DMatrix<Complex64>,
    pub a2: DMatrix<Complex64>,
    pub b1: Option<DMatrix<Complex64>>,
    pub b2: Option<DMatrix<Complex64>>,
}

impl KronDiff {
    fn dim(&self) -> usize {
        self.a1.nrows() * self.a2.nrows()
    }

    fn kron_apply(
        m1: &DMatrix<Complex64>,
        m2: &DMatrix<Complex64>,
        x: &DMatrix<Complex64>,
    ) -> DMatrix<Complex64> {
        // (M1 (x) M2) x = vec(M2 X M1^T) with x read column-major as the
        // (n2 x n1) matrix X[i2, i1] = x[i1 * n2 + i2].
        let n1 = m1.ncols();
        let n2 = m2.ncols();
        let k = x.ncols();
        let mut y = DMatrix::from_element(m1.nrows() * m2.nrows(), k, Complex64::new(0.0, 0.0));
        for col in 0..k {
            let xs = DMatrix::from_fn(n2, n1, |i2, i1| x[(i1 * n2 + i2, col)]);
            let ys = m2 * xs * m1.transpose();
            for i1 in 0..m1.nrows() {
                for i2 in 0..m2.nrows() {
                    y[(i1 * m2.nrows() + i2, col)] = ys[(i2, i1)];
                }
            }
        }
        y
    }

    /// Entry of the represented matrix at global indices.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        let n2r = self.a2.nrows();
        let n2c = self.a2.ncols();
        let (r1, r2) = (row / n2r, row % n2r);
        let (c1, c2) = (col / n2c, col % n2c);
        let mut v = self.a1[(r1, c1)] * self.a2[(r2, c2)];
        if let (Some(b1), Some(b2)) = (&self.b1, &self.b2) {
            v -= b1[(r1, c1)] * b2[(r2, c2)];
        }
        v
    }
}

impl LinOp for KronDiff {
    fn nrows(&self) -> usize {
        self.dim()
    }
    fn ncols(&self) -> usize {
        self.a1.ncols() * self.a2.ncols()
    }
    fn apply(&self, x: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let mut y = Self::kron_apply(&self.a1, &self.a2, x);
        if let (Some(b1), Some(b2)) = (&self.b1, &self.b2) {
            y -= Self::kron_apply(b1, b2, x);
        }
        y
    }
    fn apply_adjoint(&self, x: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let a1h = self.a1.adjoint();
        let a2h = self.a2.adjoint();
        let mut y = Self::kron_apply(&a1h, &a2h, x);
        if let (Some(b1), Some(b2)) = (&self.b1, &self.b2) {
            y -= Self::kron_apply(&b1.adjoint(), &b2.adjoint(), x);
        }
        y
    }
}

/// Restriction of an operator to the entries whose row or column is marked
/// high: `B = C - P_low C P_low`.
pub struct TailBlock<'a, O: LinOp> {
    pub inner: &'a O,
    pub row_low: Vec<bool>,
    pub col_low: Vec<bool>,
}

impl<O: LinOp> TailBlock<'_, O> {
    fn mask_rows(&self, x: &mut DMatrix<Complex64>, low: &[bool]) {
        for (i, &keep_low) in low.iter().enumerate() {
            if !keep_low {
                for c in 0..x.ncols() {
                    x[(i, c)] = Complex64::new(0.0, 0.0);
                }
            }
        }
    }
}

impl<O: LinOp> LinOp for TailBlock<'_, O> {
    fn nrows(&self) -> usize {
        self.inner.nrows()
    }
    fn ncols(&self) -> usize {
        self.inner.ncols()
    }
    fn apply(&self, x: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let full = self.inner.apply(x);
        let mut xl = x.clone();
        self.mask_rows(&mut xl, &self.col_low);
        let mut low = self.inner.apply(&xl);
        self.mask_rows(&mut low, &self.row_low);
        full - low
    }
    fn apply_adjoint(&self, x: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let full = self.inner.apply_adjoint(x);
        let mut xl = x.clone();
        self.mask_rows(&mut xl, &self.row_low);
        let mut low = self.inner.apply_adjoint(&xl);
        self.mask_rows(&mut low, &self.col_low);
        full - low
    }
}

fn random_block(nrows: usize, ncols: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    DMatrix::from_fn(nrows, ncols, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

fn orthonormalize(y: DMatrix<Complex64>) -> DMatrix<Complex64> {
    y.qr().q()
}

/// Top `k` singular values of an operator by seeded randomized subspace
/// iteration (Halko-Martinsson-Tropp style). Deterministic for a fixed seed.
pub fn top_singular_values(op: &dyn LinOp, k: usize, power_iters: usize, seed: u64) -> Vec<f64> {
    let n = op.ncols();
    let m = op.nrows();
    if n == 0 || m == 0 || k == 0 {
        return Vec::new();
    }
    let p = (k + 15).min(n).min(m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let omega = random_block(n, p, &mut rng);
    let mut y = op.apply(&omega);
    for _ in 0..power_iters {
        y = orthonormalize(y);
        let z = orthonormalize(op.apply_adjoint(&y));
        y = op.apply(&z);
    }
    let q = orthonormalize(y);
    // sigma(Q^H A) approximates the leading sigma(A); Q^H A = (A^H Q)^H.
    let b = op.apply_adjoint(&q).adjoint();
    let mut s = dense_singular_values(&b);
    s.truncate(k);
    s
}

/// Operator norm (largest singular value) by randomized subspace iteration.
pub fn operator_norm(op: &dyn LinOp, seed: u64) -> f64 {
    top_singular_values(op, 1, 12, seed)
        .first()
        .copied()
        .unwrap_or(0.0)
}
