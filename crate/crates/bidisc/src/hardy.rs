//! Exact finite truncations of Toeplitz, Hankel, semi-commutator, commutator,
//! and shift operators on the Hardy spaces of the bidisc and the disk.
//!
//! Every operator is a compression to a finite monomial box. Semi-commutator
//! entries are computed from the Hankel pairing
//! `<(T_f T_g - T_{fg}) z^c, z^a> = -sum_{m not in Z_+^2} g_{m-c} f_{a-m}`,
//! which is a finite sum for finitely supported symbols, so "zero" is
//! testable exactly. Product routes over truncated Toeplitz matrices suffer
//! edge effects unless the intermediate box is enlarged by the symbol
//! bandwidth; [`dense_oracle_semicommutator`] does exactly that and serves
//! as an independent cross-check.
//!
//! Basis ordering is lexicographic in `(m1, m2)` with `m1` major, everywhere.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec;
use crate::svd;
use crate::symbol::{FreqIndex, Symbol1, Symbol2};

/// The finite monomial basis `{z1^a z2^b : 0 <= a <= n1, 0 <= b <= n2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationBox {
    pub n1: u32,
    pub n2: u32,
}

impl TruncationBox {
    pub fn new(n1: u32, n2: u32) -> Self {
        Self { n1, n2 }
    }

    pub fn square(n: u32) -> Self {
        Self { n1: n, n2: n }
    }

    pub fn len(&self) -> usize {
        (self.n1 as usize + 1) * (self.n2 as usize + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Basis indices in lexicographic order (m1 major, m2 minor).
    pub fn basis(&self) -> Vec<FreqIndex> {
        let mut v = Vec::with_capacity(self.len());
        for a in 0..=self.n1 as i32 {
            for b in 0..=self.n2 as i32 {
                v.push(FreqIndex::new(a, b));
            }
        }
        v
    }

    pub fn contains(&self, m: FreqIndex) -> bool {
        m.m1 >= 0 && m.m2 >= 0 && m.m1 <= self.n1 as i32 && m.m2 <= self.n2 as i32
    }

    /// Position of `m` in [`TruncationBox::basis`] order.
    pub fn index_of(&self, m: FreqIndex) -> Option<usize> {
        if self.contains(m) {
            Some(m.m1 as usize * (self.n2 as usize + 1) + m.m2 as usize)
        } else {
            None
        }
    }
}

/// Exactness of a computed matrix: either every entry is exact (finite sums
/// over exactly represented symbols), or each entry carries the stored
/// absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exactness {
    Exact,
    Bounded(f64),
}

impl Exactness {
    pub fn entry_bound(&self) -> f64 {
        match self {
            Exactness::Exact => 0.0,
            Exactness::Bounded(b) => *b,
        }
    }

    fn combine(a: Exactness, b: Exactness) -> Exactness {
        match (a, b) {
            (Exactness::Exact, Exactness::Exact) => Exactness::Exact,
            _ => Exactness::Bounded(a.entry_bound() + b.entry_bound()),
        }
    }
}

/// A dense complex matrix carrying its row/column basis index labels.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub entries: DMatrix<Complex64>,
    pub row_basis: Vec<FreqIndex>,
    pub col_basis: Vec<FreqIndex>,
    pub exactness: Exactness,
}

impl OperatorMatrix {
    pub fn nrows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> f64 {
        assert_eq!(self.entries.shape(), other.entries.shape());
        (&self.entries - &other.entries)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Conjugate transpose, with row/column bases swapped.
    pub fn adjoint(&self) -> OperatorMatrix {
        OperatorMatrix {
            entries: self.entries.adjoint(),
            row_basis: self.col_basis.clone(),
            col_basis: self.row_basis.clone(),
            exactness: self.exactness,
        }
    }

    pub fn row_index_of(&self, m: FreqIndex) -> Option<usize> {
        self.row_basis.iter().position(|&x| x == m)
    }

    pub fn col_index_of(&self, m: FreqIndex) -> Option<usize> {
        self.col_basis.iter().position(|&x| x == m)
    }

    fn from_columns(
        row_basis: Vec<FreqIndex>,
        col_basis: Vec<FreqIndex>,
        cols: Vec<Vec<Complex64>>,
        exactness: Exactness,
    ) -> Self {
        let nrows = row_basis.len();
        let ncols = col_basis.len();
        let entries = DMatrix::from_fn(nrows, ncols, |r, c| cols[c][r]);
        OperatorMatrix {
            entries,
            row_basis,
            col_basis,
            exactness,
        }
    }
}

/// Row index set of a truncated Hankel operator: a rectangle of frequencies
/// with the Hardy quadrant removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegWindow {
    pub lo1: i32,
    pub hi1: i32,
    pub lo2: i32,
    pub hi2: i32,
}

impl NegWindow {
    pub fn new(lo1: i32, hi1: i32, lo2: i32, hi2: i32) -> Self {
        assert!(lo1 <= hi1 && lo2 <= hi2);
        Self { lo1, hi1, lo2, hi2 }
    }

    /// Smallest window covering every frequency outside the Hardy quadrant
    /// reachable from `cols` under the stored support of `f`.
    pub fn covering(f: &Symbol2, cols: TruncationBox) -> Self {
        let b = f.freq_bounds();
        Self {
            lo1: b.min1.min(0),
            hi1: cols.n1 as i32 + b.max1.max(0),
            lo2: b.min2.min(0),
            hi2: cols.n2 as i32 + b.max2.max(0),
        }
    }

    pub fn merge(&self, other: &NegWindow) -> NegWindow {
        NegWindow {
            lo1: self.lo1.min(other.lo1),
            hi1: self.hi1.max(other.hi1),
            lo2: self.lo2.min(other.lo2),
            hi2: self.hi2.max(other.hi2),
        }
    }

    pub fn contains(&self, m: FreqIndex) -> bool {
        !m.in_hardy_quadrant()
            && m.m1 >= self.lo1
            && m.m1 <= self.hi1
            && m.m2 >= self.lo2
            && m.m2 <= self.hi2
    }

    /// Window indices in lexicographic order.
    pub fn indices(&self) -> Vec<FreqIndex> {
        let mut v = Vec::new();
        for m1 in self.lo1..=self.hi1 {
            for m2 in self.lo2..=self.hi2 {
                let m = FreqIndex::new(m1, m2);
                if !m.in_hardy_quadrant() {
                    v.push(m);
                }
            }
        }
        v
    }
}

fn toeplitz_exactness(f: &Symbol2) -> Exactness {
    if f.is_exact() {
        Exactness::Exact
    } else {
        // Any single omitted coefficient is bounded by the l2 tail.
        Exactness::Bounded(f.l2_tail())
    }
}

/// Matrix of the compression of `T_f` to the box: entry `(a, c)` is the
/// Fourier coefficient of `f` at `a - c`.
pub fn toeplitz_matrix(f: &Symbol2, boxx: TruncationBox) -> OperatorMatrix {
    let basis = boxx.basis();
    let cols = exec::map_indexed(basis.len(), |ci| {
        let c = basis[ci];
        let mut col = vec![Complex64::new(0.0, 0.0); basis.len()];
        for (&s, &v) in f.coeffs() {
            if let Some(ri) = boxx.index_of(c + s) {
                col[ri] = v;
            }
        }
        col
    });
    OperatorMatrix::from_columns(basis.clone(), basis, cols, toeplitz_exactness(f))
}

/// Matrix of the compression of `H_f` to the box, with rows labeled by the
/// window. Entry `(m, c)` is the coefficient of `f` at `m - c`. For exact
/// symbols the window must cover every reachable frequency outside the
/// Hardy quadrant.
pub fn hankel_matrix(f: &Symbol2, boxx: TruncationBox, window: &NegWindow) -> Result<OperatorMatrix> {
    let cols_basis = boxx.basis();
    let rows = window.indices();
    if f.is_exact() {
        let need = NegWindow::covering(f, boxx);
        // Verify coverage on the actual reachable set, not just the bounding box.
        for c in &cols_basis {
            for (&s, _) in f.coeffs() {
                let m = *c + s;
                if !m.in_hardy_quadrant() && !window.contains(m) {
                    let _ = need;
                    return Err(Error::WindowTooSmall { m1: m.m1, m2: m.m2 });
                }
            }
        }
    }
    let mut row_index = std::collections::HashMap::with_capacity(rows.len());
    for (i, &m) in rows.iter().enumerate() {
        row_index.insert(m, i);
    }
    let nrows = rows.len();
    let cols = exec::map_indexed(cols_basis.len(), |ci| {
        let c = cols_basis[ci];
        let mut col = vec![Complex64::new(0.0, 0.0); nrows];
        for (&s, &v) in f.coeffs() {
            let m = c + s;
            if m.in_hardy_quadrant() {
                continue;
            }
            if let Some(&ri) = row_index.get(&m) {
                col[ri] = v;
            }
        }
        col
    });
    Ok(OperatorMatrix::from_columns(
        rows,
        cols_basis,
        cols,
        toeplitz_exactness(f),
    ))
}

fn semicommutator_exactness(f: &Symbol2, g: &Symbol2) -> Exactness {
    if f.is_exact() && g.is_exact() {
        Exactness::Exact
    } else {
        // Cauchy-Schwarz over the omitted coefficients of either factor.
        let bound = g.l2_tail() * (f.l2_norm_stored() + f.l2_tail())
            + f.l2_tail() * g.l2_norm_stored();
        Exactness::Bounded(bound)
    }
}

/// Compression of the semi-commutator `T_f T_g - T_{fg}` to the box, via the
/// Hankel pairing entry formula. Exact for exact symbols.
pub fn semicommutator_matrix(f: &Symbol2, g: &Symbol2, boxx: TruncationBox) -> OperatorMatrix {
    let basis = boxx.basis();
    let nrows = basis.len();
    let cols = exec::map_indexed(basis.len(), |ci| {
        let c = basis[ci];
        let mut col = vec![Complex64::new(0.0, 0.0); nrows];
        for (&s, &gv) in g.coeffs() {
            let m = c + s;
            if m.in_hardy_quadrant() {
                continue;
            }
            for (&t, &fv) in f.coeffs() {
                // row index a = m + t must land in the box
                if let Some(ri) = boxx.index_of(m + t) {
                    col[ri] -= gv * fv;
                }
            }
        }
        col
    });
    OperatorMatrix::from_columns(basis.clone(), basis, cols, semicommutator_exactness(f, g))
}

/// Commutator `T_f T_g - T_g T_f` as the difference of the two
/// semi-commutators.
pub fn commutator_matrix(f: &Symbol2, g: &Symbol2, boxx: TruncationBox) -> OperatorMatrix {
    let a = semicommutator_matrix(f, g, boxx);
    let b = semicommutator_matrix(g, f, boxx);
    OperatorMatrix {
        entries: &a.entries - &b.entries,
        row_basis: a.row_basis,
        col_basis: a.col_basis,
        exactness: Exactness::combine(a.exactness, b.exactness),
    }
}

/// Brute-force oracle for the semi-commutator, computed along two
/// independent routes:
///
/// 1. `T_f T_g` as a product of Toeplitz matrices on a box enlarged by the
///    stored bandwidth of `g` (so the compression has no edge effects),
///    minus the Toeplitz matrix of the full product symbol `fg`;
/// 2. `-H_conj(f)^* H_g` as a product of Hankel matrices over a covering
///    window.
///
/// Requires exact symbols. Both routes are returned for comparison with
/// [`semicommutator_matrix`].
pub fn dense_oracle_semicommutator(
    f: &Symbol2,
    g: &Symbol2,
    boxx: TruncationBox,
) -> Result<(OperatorMatrix, OperatorMatrix)> {
    if !f.is_exact() || !g.is_exact() {
        return Err(Error::ExactSymbolRequired {
            op: "dense_oracle_semicommutator",
        });
    }
    // Route 1: enlarged Toeplitz product minus Toeplitz of the product symbol.
    let gb = g.freq_bounds();
    let big = TruncationBox::new(
        boxx.n1 + gb.max1.max(0) as u32,
        boxx.n2 + gb.max2.max(0) as u32,
    );
    let tf = toeplitz_matrix(f, big);
    let tg = toeplitz_matrix(g, big);
    let prod_big = &tf.entries * &tg.entries;
    let basis = boxx.basis();
    let mut compressed = DMatrix::from_element(basis.len(), basis.len(), Complex64::new(0.0, 0.0));
    for (ai, &a) in basis.iter().enumerate() {
        for (ci, &c) in basis.iter().enumerate() {
            compressed[(ai, ci)] =
                prod_big[(big.index_of(a).unwrap(), big.index_of(c).unwrap())];
        }
    }
    let fg = f.multiply_full(g);
    let tfg = toeplitz_matrix(&fg, boxx);
    let route1 = OperatorMatrix {
        entries: compressed - tfg.entries,
        row_basis: basis.clone(),
        col_basis: basis.clone(),
        exactness: Exactness::Exact,
    };

    // Route 2: -H_conj(f)^* H_g over a merged covering window.
    let fbar = f.conjugate();
    let w = NegWindow::covering(&fbar, boxx).merge(&NegWindow::covering(g, boxx));
    let hf = hankel_matrix(&fbar, boxx, &w)?;
    let hg = hankel_matrix(g, boxx, &w)?;
    let route2 = OperatorMatrix {
        entries: -(hf.entries.adjoint() * &hg.entries),
        row_basis: basis.clone(),
        col_basis: basis,
        exactness: Exactness::Exact,
    };
    Ok((route1, route2))
}

/// One-variable Toeplitz matrix on degrees `0..=n`: entry `(a, c)` is the
/// coefficient of `f` at `a - c`. Basis labels use the `(m, 0)` convention.
pub fn toeplitz1(f: &Symbol1, n: u32) -> OperatorMatrix {
    let basis: Vec<FreqIndex> = (0..=n as i32).map(|m| FreqIndex::new(m, 0)).collect();
    let size = n as usize + 1;
    let entries = DMatrix::from_fn(size, size, |a, c| f.coeff(a as i32 - c as i32));
    OperatorMatrix {
        entries,
        row_basis: basis.clone(),
        col_basis: basis,
        exactness: if f.is_exact() {
            Exactness::Exact
        } else {
            Exactness::Bounded(f.l2_tail())
        },
    }
}

/// One-variable Hankel matrix: rows are the negative frequencies
/// `-w..=-1`, entry `(m, c)` is the coefficient of `f` at `m - c`.
pub fn hankel1(f: &Symbol1, n: u32, w: u32) -> OperatorMatrix {
    let rows: Vec<FreqIndex> = (-(w as i32)..=-1).map(|m| FreqIndex::new(m, 0)).collect();
    let cols: Vec<FreqIndex> = (0..=n as i32).map(|m| FreqIndex::new(m, 0)).collect();
    let entries = DMatrix::from_fn(rows.len(), cols.len(), |ri, c| {
        let m = ri as i32 - w as i32;
        f.coeff(m - c as i32)
    });
    OperatorMatrix {
        entries,
        row_basis: rows,
        col_basis: cols,
        exactness: if f.is_exact() {
            Exactness::Exact
        } else {
            Exactness::Bounded(f.l2_tail())
        },
    }
}

/// One-variable semi-commutator `T_f T_g - T_{fg}` on degrees `0..=n` via
/// the Hankel pairing entry formula `-sum_{m < 0} g_{m-c} f_{a-m}`.
pub fn semicommutator1(f: &Symbol1, g: &Symbol1, n: u32) -> OperatorMatrix {
    let basis: Vec<FreqIndex> = (0..=n as i32).map(|m| FreqIndex::new(m, 0)).collect();
    let size = n as usize + 1;
    let mut entries = DMatrix::from_element(size, size, Complex64::new(0.0, 0.0));
    for c in 0..size as i32 {
        for (&s, &gv) in g.coeffs() {
            let m = c + s;
            if m >= 0 {
                continue;
            }
            for (&t, &fv) in f.coeffs() {
                let a = m + t;
                if (0..size as i32).contains(&a) {
                    entries[(a as usize, c as usize)] -= gv * fv;
                }
            }
        }
    }
    let exactness = if f.is_exact() && g.is_exact() {
        Exactness::Exact
    } else {
        Exactness::Bounded(
            g.l2_tail() * (f.l2_norm_stored() + f.l2_tail()) + f.l2_tail() * g.l2_norm_stored(),
        )
    };
    OperatorMatrix {
        entries,
        row_basis: basis.clone(),
        col_basis: basis,
        exactness,
    }
}

/// Compression to degrees `0..=n` of the true operator product `T_f T_g` on
/// the disk: entry `(a, c)` is `sum_{b >= 0} f_{a-b} g_{b-c}` over all of
/// `Z_+`, which is a finite sum for stored supports.
pub fn toeplitz1_true_product(f: &Symbol1, g: &Symbol1, n: u32) -> DMatrix<Complex64> {
    let size = n as usize + 1;
    let mut entries = DMatrix::from_element(size, size, Complex64::new(0.0, 0.0));
    for c in 0..size as i32 {
        for (&s, &gv) in g.coeffs() {
            let b = c + s;
            if b < 0 {
                continue;
            }
            for (&t, &fv) in f.coeffs() {
                let a = b + t;
                if (0..size as i32).contains(&a) {
                    entries[(a as usize, c as usize)] += fv * gv;
                }
            }
        }
    }
    entries
}

/// Both sides of the one-step shift identity for the operator `H_f^* H_g`
/// on the bidisc, compressed to the `z2`-monomial basis of degree `<= n2`:
///
/// - `lhs` is the compression of
///   `S1^{*l} H_f^* H_g S1^k - S1^{*(l+1)} H_f^* H_g S1^{k+1}` acting on
///   functions of `z2` alone, computed from Hankel blocks;
/// - `rhs` is the compression of the true one-variable operator product
///   `T_conj(f_{-(l+1)}) T_{g_{-(k+1)}}`, where `f_i(z2)` and `g_i(z2)` are
///   the slices of `f` and `g` at `z1`-frequency `i`.
///
/// The two agree exactly for exact symbols.
pub fn shift_identity_residual(
    f: &Symbol2,
    g: &Symbol2,
    k: u32,
    l: u32,
    n2: u32,
) -> Result<(OperatorMatrix, OperatorMatrix)> {
    if !f.is_exact() || !g.is_exact() {
        return Err(Error::ExactSymbolRequired {
            op: "shift_identity_residual",
        });
    }
    let boxx = TruncationBox::new(k.max(l) + 1, n2);
    let w = NegWindow::covering(f, boxx).merge(&NegWindow::covering(g, boxx));
    let hf = hankel_matrix(f, boxx, &w)?;
    let hg = hankel_matrix(g, boxx, &w)?;
    // Entries of H_f^* H_g over the box.
    let pairing = hf.entries.adjoint() * &hg.entries;
    let size = n2 as usize + 1;
    let basis: Vec<FreqIndex> = (0..=n2 as i32).map(|m| FreqIndex::new(m, 0)).collect();
    let mut lhs = DMatrix::from_element(size, size, Complex64::new(0.0, 0.0));
    for bo in 0..size {
        for bi in 0..size {
            let r0 = boxx.index_of(FreqIndex::new(l as i32, bo as i32)).unwrap();
            let c0 = boxx.index_of(FreqIndex::new(k as i32, bi as i32)).unwrap();
            let r1 = boxx
                .index_of(FreqIndex::new(l as i32 + 1, bo as i32))
                .unwrap();
            let c1 = boxx
                .index_of(FreqIndex::new(k as i32 + 1, bi as i32))
                .unwrap();
            lhs[(bo, bi)] = pairing[(r0, c0)] - pairing[(r1, c1)];
        }
    }
    let phi = f.slice_z1_freq(-(l as i32) - 1).conjugate();
    let gamma = g.slice_z1_freq(-(k as i32) - 1);
    let rhs = toeplitz1_true_product(&phi, &gamma, n2);
    Ok((
        OperatorMatrix {
            entries: lhs,
            row_basis: basis.clone(),
            col_basis: basis.clone(),
            exactness: Exactness::Exact,
        },
        OperatorMatrix {
            entries: rhs,
            row_basis: basis.clone(),
            col_basis: basis,
            exactness: Exactness::Exact,
        },
    ))
}

/// Both sides of the rank-two commutator identity on the disk, on degrees
/// `0..=n`:
///
/// - `residual = C - S1^* C S1` where `C` is the commutator
///   `T_{f1} T_{g1} - T_{g1} T_{f1}` computed as a true operator product on
///   an enlarged basis and compressed;
/// - `rank2 = -(S1^* T_{f1} e0) (x) (S1^* T_conj(g1) e0)^*
///          + (S1^* T_{g1} e0) (x) (S1^* T_conj(f1) e0)^*`.
pub fn rank2_commutator_identity(
    f1: &Symbol1,
    g1: &Symbol1,
    n: u32,
) -> Result<(OperatorMatrix, OperatorMatrix)> {
    if !f1.is_exact() || !g1.is_exact() {
        return Err(Error::ExactSymbolRequired {
            op: "rank2_commutator_identity",
        });
    }
    let size = n as usize + 1;
    let basis: Vec<FreqIndex> = (0..=n as i32).map(|m| FreqIndex::new(m, 0)).collect();
    let big = toeplitz1_true_product(f1, g1, n + 1) - toeplitz1_true_product(g1, f1, n + 1);
    let residual = DMatrix::from_fn(size, size, |a, c| big[(a, c)] - big[(a + 1, c + 1)]);

    // S1^* T_phi e0 has entries phi_{a+1}; for conjugated symbols the
    // coefficient at a+1 of conj(phi) is conj(phi_{-(a+1)}).
    let u1: Vec<Complex64> = (0..size).map(|a| f1.coeff(a as i32 + 1)).collect();
    let v1: Vec<Complex64> = (0..size)
        .map(|c| g1.coeff(-(c as i32) - 1).conj())
        .collect();
    let u2: Vec<Complex64> = (0..size).map(|a| g1.coeff(a as i32 + 1)).collect();
    let v2: Vec<Complex64> = (0..size)
        .map(|c| f1.coeff(-(c as i32) - 1).conj())
        .collect();
    let rank2 = DMatrix::from_fn(size, size, |a, c| {
        -u1[a] * v1[c].conj() + u2[a] * v2[c].conj()
    });
    Ok((
        OperatorMatrix {
            entries: residual,
            row_basis: basis.clone(),
            col_basis: basis.clone(),
            exactness: Exactness::Exact,
        },
        OperatorMatrix {
            entries: rank2,
            row_basis: basis.clone(),
            col_basis: basis,
            exactness: Exactness::Exact,
        },
    ))
}

/// Singular values of the dense matrix, descending.
pub fn singular_values(m: &OperatorMatrix) -> Vec<f64> {
    svd::dense_singular_values(&m.entries)
}

/// Number of singular values above `tol` times the largest one; zero for the
/// zero matrix.
pub fn rank_estimate(m: &OperatorMatrix, tol: f64) -> usize {
    svd::rank_from_singular_values(&singular_values(m), tol)
}

/// Default relative tolerance for [`rank_estimate`].
pub const RANK_TOL: f64 = 1e-8;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::Symbol2;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn toeplitz_of_one_is_identity() {
        let f = Symbol2::constant(c(1.0, 0.0));
        let t = toeplitz_matrix(&f, TruncationBox::square(3));
        assert_eq!(t.entries, DMatrix::identity(16, 16));
        assert_eq!(t.exactness, Exactness::Exact);
    }

    #[test]
    fn toeplitz_of_z1_is_shift() {
        let f = Symbol2::monomial(1, 0);
        let boxx = TruncationBox::square(2);
        let t = toeplitz_matrix(&f, boxx);
        for (ai, &a) in t.row_basis.iter().enumerate() {
            for (ci, &cc) in t.col_basis.iter().enumerate() {
                let expect = if a == cc + FreqIndex::new(1, 0) {
                    c(1.0, 0.0)
                } else {
                    c(0.0, 0.0)
                };
                assert_eq!(t.entries[(ai, ci)], expect);
            }
        }
    }

    #[test]
    fn hankel_of_analytic_symbol_is_zero() {
        let f = Symbol2::trig_poly(&[((1, 0), c(1.0, 0.0)), ((0, 3), c(0.5, -2.0))]);
        let boxx = TruncationBox::square(3);
        let w = NegWindow::covering(&f, boxx);
        let h = hankel_matrix(&f, boxx, &w).unwrap();
        assert_eq!(h.max_abs_entry(), 0.0);
    }

    #[test]
    fn hankel_of_conj_z1_single_column() {
        let f = Symbol2::monomial(-1, 0);
        let boxx = TruncationBox::new(1, 0);
        let w = NegWindow::covering(&f, boxx);
        let h = hankel_matrix(&f, boxx, &w).unwrap();
        // column z1^0 maps to frequency (-1, 0) with coefficient 1
        let col0 = h.col_index_of(FreqIndex::new(0, 0)).unwrap();
        let row = h.row_index_of(FreqIndex::new(-1, 0)).unwrap();
        assert_eq!(h.entries[(row, col0)], c(1.0, 0.0));
        // column z1 maps into the Hardy quadrant: contributes nothing
        let col1 = h.col_index_of(FreqIndex::new(1, 0)).unwrap();
        for r in 0..h.nrows() {
            assert_eq!(h.entries[(r, col1)], c(0.0, 0.0));
        }
    }

    #[test]
    fn hankel_window_too_small_detected() {
        let f = Symbol2::monomial(-3, 0);
        let boxx = TruncationBox::square(2);
        let w = NegWindow::new(-1, 2, 0, 2);
        assert!(matches!(
            hankel_matrix(&f, boxx, &w),
            Err(Error::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn semicommutator_zero_when_analyticity_condition_holds() {
        // conj(f) analytic in z1 and g analytic in z2
        let f = Symbol2::monomial(-1, 1); // conj(z1) z2
        let g = Symbol2::monomial(1, 1); // z1 z2
        let s = semicommutator_matrix(&f, &g, TruncationBox::square(5));
        assert_eq!(s.max_abs_entry(), 0.0);

        // both analytic
        let f2 = Symbol2::trig_poly(&[((1, 0), c(1.0, 0.0)), ((0, 1), c(1.0, 0.0))]);
        let s2 = semicommutator_matrix(&f2, &f2, TruncationBox::square(4));
        assert_eq!(s2.max_abs_entry(), 0.0);
    }

    #[test]
    fn semicommutator_of_shift_pair_is_projector() {
        // f = z1, g = conj(z1): -(rank one in z1) tensor identity in z2.
        let f = Symbol2::monomial(1, 0);
        let g = Symbol2::monomial(-1, 0);
        let n = 4u32;
        let s = semicommutator_matrix(&f, &g, TruncationBox::square(n));
        for (ai, &a) in s.row_basis.iter().enumerate() {
            for (ci, &cc) in s.col_basis.iter().enumerate() {
                let expect = if a == cc && a.m1 == 0 {
                    c(-1.0, 0.0)
                } else {
                    c(0.0, 0.0)
                };
                assert_eq!(s.entries[(ai, ci)], expect);
            }
        }
    }

    #[test]
    fn oracle_routes_agree_on_shift_pair() {
        let f = Symbol2::monomial(1, 0);
        let g = Symbol2::monomial(-1, 0);
        let boxx = TruncationBox::square(3);
        let s = semicommutator_matrix(&f, &g, boxx);
        let (r1, r2) = dense_oracle_semicommutator(&f, &g, boxx).unwrap();
        assert!(s.max_abs_diff(&r1) < 1e-14);
        assert!(s.max_abs_diff(&r2) < 1e-14);
    }

    #[test]
    fn oracle_zero_symbol() {
        let f = Symbol2::monomial(1, -1);
        let g = Symbol2::zero();
        let boxx = TruncationBox::square(2);
        let (r1, r2) = dense_oracle_semicommutator(&f, &g, boxx).unwrap();
        assert_eq!(r1.max_abs_entry(), 0.0);
        assert_eq!(r2.max_abs_entry(), 0.0);
    }

    #[test]
    fn commutator_of_equal_symbols_is_zero() {
        let f = Symbol2::trig_poly(&[((1, -1), c(1.0, 2.0)), ((-2, 0), c(0.5, 0.0))]);
        let k = commutator_matrix(&f, &f, TruncationBox::square(4));
        assert_eq!(k.max_abs_entry(), 0.0);
    }

    #[test]
    fn commutator_of_analytic_pair_is_zero() {
        let f = Symbol2::trig_poly(&[((1, 0), c(1.0, 0.0)), ((2, 1), c(0.0, 1.0))]);
        let g = Symbol2::trig_poly(&[((0, 1), c(2.0, 0.0)), ((1, 1), c(1.0, -1.0))]);
        let k = commutator_matrix(&f, &g, TruncationBox::square(4));
        assert_eq!(k.max_abs_entry(), 0.0);
    }

    #[test]
    fn commutator_of_shift_pair_matches_oracle() {
        let f = Symbol2::monomial(1, 0);
        let g = Symbol2::monomial(-1, 0);
        let boxx = TruncationBox::square(3);
        let k = commutator_matrix(&f, &g, boxx);
        let (sfg, _) = dense_oracle_semicommutator(&f, &g, boxx).unwrap();
        let (sgf, _) = dense_oracle_semicommutator(&g, &f, boxx).unwrap();
        let dense = OperatorMatrix {
            entries: &sfg.entries - &sgf.entries,
            row_basis: sfg.row_basis,
            col_basis: sfg.col_basis,
            exactness: Exactness::Exact,
        };
        assert!(k.max_abs_diff(&dense) < 1e-14);
    }

    #[test]
    fn shift_identity_analytic_pair_vanishes() {
        let f = Symbol2::trig_poly(&[((1, -1), c(1.0, 0.0)), ((0, 2), c(0.5, 0.5))]);
        let g = Symbol2::trig_poly(&[((2, 0), c(1.0, 1.0))]);
        let (lhs, rhs) = shift_identity_residual(&f, &g, 0, 0, 4).unwrap();
        assert_eq!(lhs.max_abs_entry(), 0.0);
        assert_eq!(rhs.max_abs_entry(), 0.0);
    }

    #[test]
    fn shift_identity_spec_case() {
        // f = conj(z1) z2, g = conj(z1), k = l = 0:
        // rhs = T_conj(z2) * T_1 on degrees 0..=4.
        let f = Symbol2::monomial(-1, 1);
        let g = Symbol2::monomial(-1, 0);
        let (lhs, rhs) = shift_identity_residual(&f, &g, 0, 0, 4).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-15);
        for a in 0..5usize {
            for cc in 0..5usize {
                let expect = if a + 1 == cc { c(1.0, 0.0) } else { c(0.0, 0.0) };
                assert_eq!(rhs.entries[(a, cc)], expect);
            }
        }
    }

    #[test]
    fn one_variable_toeplitz_identity() {
        let one = Symbol1::constant(c(1.0, 0.0));
        let t = toeplitz1(&one, 4);
        assert_eq!(t.entries, DMatrix::identity(5, 5));
    }

    #[test]
    fn one_variable_semicommutator_shift_pair() {
        let s = semicommutator1(&Symbol1::z(), &Symbol1::conj_z(), 4);
        for a in 0..5usize {
            for cc in 0..5usize {
                let expect = if a == 0 && cc == 0 { c(-1.0, 0.0) } else { c(0.0, 0.0) };
                assert_eq!(s.entries[(a, cc)], expect);
            }
        }
    }

    #[test]
    fn one_variable_semicommutator_coanalytic_f() {
        // f = conj(z): conj(f) = z is analytic, so T_f T_g - T_{fg} = 0 for
        // every g.
        let f = Symbol1::conj_z();
        let g = Symbol1::trig_poly(&[(-2, c(1.0, 0.5)), (1, c(0.0, 2.0)), (0, c(1.0, 0.0))]);
        let s = semicommutator1(&f, &g, 6);
        assert_eq!(s.max_abs_entry(), 0.0);
    }

    #[test]
    fn rank2_identity_trivial_and_shift_cases() {
        let f = Symbol1::trig_poly(&[(1, c(1.0, 0.0)), (-2, c(0.5, 0.5))]);
        let (r, k) = rank2_commutator_identity(&f, &f, 6).unwrap();
        assert_eq!(r.max_abs_entry(), 0.0);
        assert_eq!(k.max_abs_entry(), 0.0);

        let (r, k) = rank2_commutator_identity(&Symbol1::z(), &Symbol1::conj_z(), 8).unwrap();
        assert!(r.max_abs_diff(&k) < 1e-15);
        assert_eq!(r.entries[(0, 0)], c(-1.0, 0.0));
        assert_eq!(r.entries[(1, 1)], c(0.0, 0.0));
    }

    #[test]
    fn adjoint_symmetry_of_semicommutator() {
        let f = Symbol2::trig_poly(&[((1, -1), c(0.3, 0.7)), ((-2, 1), c(1.0, 0.0))]);
        let g = Symbol2::trig_poly(&[((-1, 0), c(0.0, 1.0)), ((1, 2), c(0.5, 0.5))]);
        let boxx = TruncationBox::square(5);
        let s = semicommutator_matrix(&f, &g, boxx);
        let t = semicommutator_matrix(&g.conjugate(), &f.conjugate(), boxx);
        assert!(s.max_abs_diff(&t.adjoint()) < 1e-14);
    }
}
