//! Componentwise Mobius transforms of the bidisc, symbol pullbacks, and the
//! intertwining convergence test.
//!
//! The disk automorphism `phi_z(w) = (z - w) / (1 - conj(z) w)` is an
//! involution exchanging `0` and `z`. Conjugating a Toeplitz operator by the
//! associated unitary `U_z h = (h o phi_z) k_z` transforms the symbol by
//! composition; at finite truncation the identity only holds in the limit,
//! so [`mobius_intertwining_residual`] is a convergence test rather than an
//! exactness test.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::hardy::{toeplitz_matrix, TruncationBox};
use crate::symbol::{BidiscPoint, Symbol2};

/// One-variable Mobius map `phi_z(w) = (z - w)/(1 - conj(z) w)`.
pub fn mobius_map1(z: Complex64, w: Complex64) -> Complex64 {
    (z - w) / (Complex64::new(1.0, 0.0) - z.conj() * w)
}

/// Componentwise Mobius transform of the bidisc.
pub fn mobius_map(z: &BidiscPoint, w: &BidiscPoint) -> BidiscPoint {
    BidiscPoint::new(mobius_map1(z.z1, w.z1), mobius_map1(z.z2, w.z2))
}

fn fft2_forward(data: &mut [Complex64], n: usize) {
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(n);
    // Rows (second index contiguous).
    for row in data.chunks_exact_mut(n) {
        fft.process(row);
    }
    // Columns, via transpose.
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        for i in 0..n {
            col[i] = data[i * n + j];
        }
        fft.process(&mut col);
        for i in 0..n {
            data[i * n + j] = col[i];
        }
    }
}

/// Pullback `f o phi_z` as a symbol truncated to the frequency box
/// `[-bandwidth, bandwidth]^2`, computed by uniform torus-grid sampling
/// (grid at least 8x the bandwidth per variable, rounded to a power of two)
/// and discrete Fourier inversion.
///
/// The stored `l2_tail` is the coefficient mass found in the outer half of
/// the retained band: pullback coefficients of a band-limited symbol decay
/// geometrically at rate `max(|z1|, |z2|)`, so the rim mass dominates the
/// aliased and truncated remainder (heuristic estimate, recorded as such).
pub fn mobius_pullback(f: &Symbol2, z: &BidiscPoint, bandwidth: u32) -> Result<Symbol2> {
    if !z.is_interior() {
        return Err(Error::OutsideDomain {
            r1: z.z1.norm(),
            r2: z.z2.norm(),
        });
    }
    let bw = bandwidth.max(1);
    let grid = (8 * bw as usize).next_power_of_two();
    let two_pi = 2.0 * std::f64::consts::PI;
    let u1: Vec<Complex64> = (0..grid)
        .map(|j| mobius_map1(z.z1, Complex64::from_polar(1.0, two_pi * j as f64 / grid as f64)))
        .collect();
    let u2: Vec<Complex64> = (0..grid)
        .map(|j| mobius_map1(z.z2, Complex64::from_polar(1.0, two_pi * j as f64 / grid as f64)))
        .collect();
    let mut data = vec![Complex64::new(0.0, 0.0); grid * grid];
    for j1 in 0..grid {
        for j2 in 0..grid {
            data[j1 * grid + j2] = f.eval_on_torus(u1[j1], u2[j2]);
        }
    }
    fft2_forward(&mut data, grid);
    let scale = 1.0 / (grid * grid) as f64;
    let wrap = |m: i32| -> usize { m.rem_euclid(grid as i32) as usize };
    let mut terms = Vec::new();
    let mut rim_sq = 0.0f64;
    let half = (bw / 2) as i32;
    for m1 in -(bw as i32)..=bw as i32 {
        for m2 in -(bw as i32)..=bw as i32 {
            let c = data[wrap(m1) * grid + wrap(m2)] * scale;
            if c.norm() > 1e-300 {
                terms.push(((m1, m2), c));
            }
            if m1.abs() > half || m2.abs() > half {
                rim_sq += c.norm_sqr();
            }
        }
    }
    let mut out = Symbol2::trig_poly(&terms);
    out.set_l2_tail(rim_sq.sqrt().max(f.l2_tail()));
    Ok(out)
}

/// Matrix of `U_z` restricted to one variable: column `c <= cols` holds the
/// Fourier coefficients of degrees `0..=rows` of `phi_z(w)^c k_z(w)`,
/// computed by grid quadrature. `U_z` does not preserve polynomial degree:
/// the mass of column `c` spreads up to degree about
/// `c (1 + |z|)/(1 - |z|)`, so a faithful compression needs `rows`
/// correspondingly larger than `cols`.
pub fn unitary_matrix_1d(z1: Complex64, rows: u32, cols: u32) -> DMatrix<Complex64> {
    let grid = (8 * (rows as usize + 1)).next_power_of_two();
    let two_pi = 2.0 * std::f64::consts::PI;
    let norm = (1.0 - z1.norm_sqr()).max(0.0).sqrt();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(grid);
    let phi: Vec<Complex64> = (0..grid)
        .map(|j| mobius_map1(z1, Complex64::from_polar(1.0, two_pi * j as f64 / grid as f64)))
        .collect();
    let kz: Vec<Complex64> = (0..grid)
        .map(|j| {
            let w = Complex64::from_polar(1.0, two_pi * j as f64 / grid as f64);
            norm / (Complex64::new(1.0, 0.0) - z1.conj() * w)
        })
        .collect();
    let mut out = DMatrix::from_element(rows as usize + 1, cols as usize + 1, Complex64::new(0.0, 0.0));
    let mut col_vals = kz;
    let scale = 1.0 / grid as f64;
    for c in 0..=cols as usize {
        let mut buf = col_vals.clone();
        fft.process(&mut buf);
        for b in 0..=rows as usize {
            out[(b, c)] = buf[b] * scale;
        }
        if c < cols as usize {
            for (v, p) in col_vals.iter_mut().zip(&phi) {
                *v *= p;
            }
        }
    }
    out
}

/// Internal row range needed for the columns `0..=cols` of the unitary to
/// retain their mass, with a proportional safety margin.
fn spread_rows(z1: Complex64, cols: u32, reach: u32) -> u32 {
    let r = z1.norm();
    let spread = (1.0 + r) / (1.0 - r);
    ((cols + reach + 1) as f64 * spread * 1.3).ceil() as u32 + 16
}

/// Frobenius norm of the inner-block difference between the compression to
/// the box of `U_z^H T_f U_z` and the Toeplitz matrix of the pullback
/// symbol `f o phi_z` retained to `bandwidth`.
///
/// `U_z` is realized through its quadratic-form compression, computed by
/// grid quadrature; because the unitary spreads monomial mass by the factor
/// `(1 + |z_i|)/(1 - |z_i|)` per variable, the conjugation is assembled on
/// an internal space enlarged by that factor before compressing to the box
/// (per axis, using the Kronecker factorization
/// `U^H (S1^{s1} (x) S2^{s2}) U = (U1^H S1^{s1} U1) (x) (U2^H S2^{s2} U2)`
/// of each symbol term). The inner block excludes a margin of the symbol's
/// bandwidth at the high-degree edge, where the truncated `T_f` loses mass.
///
/// The identity is exact only in the infinite-dimensional limit, so this is
/// a convergence test of the joint truncation `(box, bandwidth)`: the
/// residual is dominated by the pullback coefficients beyond `bandwidth`
/// that the box can see, and decays geometrically when both parameters are
/// refined together. Band-limited cases (constant symbols; any symbol at
/// the center, where the pullback is again a polynomial) sit at the
/// quadrature floor.
pub fn mobius_intertwining_residual(
    f: &Symbol2,
    z: &BidiscPoint,
    boxx: TruncationBox,
    bandwidth: u32,
) -> Result<f64> {
    if !z.is_interior() {
        return Err(Error::OutsideDomain {
            r1: z.z1.norm(),
            r2: z.z2.norm(),
        });
    }
    let b = f.freq_bounds();
    let reach1 = b.min1.unsigned_abs().max(b.max1.unsigned_abs());
    let reach2 = b.min2.unsigned_abs().max(b.max2.unsigned_abs());
    let rows1 = spread_rows(z.z1, boxx.n1, reach1);
    let rows2 = spread_rows(z.z2, boxx.n2, reach2);
    let u1 = unitary_matrix_1d(z.z1, rows1, boxx.n1);
    let u2 = unitary_matrix_1d(z.z2, rows2, boxx.n2);

    // One-variable compressions U_i^H Shift(s) U_i of the internal-space
    // shift by s (negative s shifts toward lower degrees).
    let conjugated_shift = |u: &DMatrix<Complex64>, s: i32| -> DMatrix<Complex64> {
        let rows = u.nrows();
        let cols = u.ncols();
        let mut shifted = DMatrix::from_element(rows, cols, Complex64::new(0.0, 0.0));
        for c in 0..cols {
            for bidx in 0..rows {
                let src = bidx as i64 - s as i64;
                if src >= 0 && (src as usize) < rows {
                    shifted[(bidx, c)] = u[(src as usize, c)];
                }
            }
        }
        u.adjoint() * shifted
    };

    let dim = boxx.len();
    let mut lhs = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    let n2p = boxx.n2 as usize + 1;
    for (&s, &fv) in f.coeffs() {
        let m1 = conjugated_shift(&u1, s.m1);
        let m2 = conjugated_shift(&u2, s.m2);
        for r1 in 0..=boxx.n1 as usize {
            for r2 in 0..=boxx.n2 as usize {
                for c1 in 0..=boxx.n1 as usize {
                    for c2 in 0..=boxx.n2 as usize {
                        lhs[(r1 * n2p + r2, c1 * n2p + c2)] += fv * m1[(r1, c1)] * m2[(r2, c2)];
                    }
                }
            }
        }
    }

    let pullback = mobius_pullback(f, z, bandwidth)?;
    let rhs = toeplitz_matrix(&pullback, boxx);
    let keep1 = boxx.n1 as i64 - reach1 as i64;
    let keep2 = boxx.n2 as i64 - reach2 as i64;
    let basis = boxx.basis();
    let mut sum_sq = 0.0f64;
    for (ri, &row) in basis.iter().enumerate() {
        if row.m1 as i64 > keep1 || row.m2 as i64 > keep2 {
            continue;
        }
        for (ci, &col) in basis.iter().enumerate() {
            if col.m1 as i64 > keep1 || col.m2 as i64 > keep2 {
                continue;
            }
            sum_sq += (lhs[(ri, ci)] - rhs.entries[(ri, ci)]).norm_sqr();
        }
    }
    Ok(sum_sq.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::FreqIndex;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mobius_swaps_zero_and_z() {
        let z = c(0.3, -0.4);
        assert!((mobius_map1(z, Complex64::new(0.0, 0.0)) - z).norm() < 1e-15);
        assert!(mobius_map1(z, z).norm() < 1e-15);
    }

    #[test]
    fn mobius_is_involution() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..25 {
            let z = BidiscPoint::from_polar(
                rng.gen_range(0.0..0.9),
                rng.gen_range(0.0..6.28),
                rng.gen_range(0.0..0.9),
                rng.gen_range(0.0..6.28),
            );
            let w = BidiscPoint::from_polar(
                rng.gen_range(0.0..0.95),
                rng.gen_range(0.0..6.28),
                rng.gen_range(0.0..0.95),
                rng.gen_range(0.0..6.28),
            );
            let back = mobius_map(&z, &mobius_map(&z, &w));
            assert!((back.z1 - w.z1).norm() < 1e-12);
            assert!((back.z2 - w.z2).norm() < 1e-12);
        }
    }

    #[test]
    fn mobius_maps_circle_to_circle() {
        let z = c(0.6, 0.2);
        for k in 0..8 {
            let w = Complex64::from_polar(1.0, 0.7 * k as f64);
            assert_abs_diff_eq!(mobius_map1(z, w).norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn pullback_at_origin_flips_signs() {
        // phi_0(w) = -w, so the coefficient at m picks up (-1)^(m1+m2).
        let f = Symbol2::trig_poly(&[
            ((1, 0), c(1.0, 0.0)),
            ((0, 1), c(0.0, 2.0)),
            ((-1, 1), c(0.5, 0.5)),
            ((2, -1), c(1.0, -1.0)),
        ]);
        let p = mobius_pullback(&f, &BidiscPoint::origin(), 8).unwrap();
        for (&m, &v) in f.coeffs() {
            let sign = if (m.m1 + m.m2) % 2 == 0 { 1.0 } else { -1.0 };
            assert!((p.coeff(m) - v * sign).norm() < 1e-12);
        }
    }

    #[test]
    fn pullback_of_constant_is_constant() {
        let f = Symbol2::constant(c(2.0, -0.5));
        let z = BidiscPoint::new(c(0.5, 0.1), c(-0.2, 0.6));
        let p = mobius_pullback(&f, &z, 4).unwrap();
        assert!((p.coeff(FreqIndex::new(0, 0)) - c(2.0, -0.5)).norm() < 1e-13);
        let others: f64 = p
            .coeffs()
            .iter()
            .filter(|(m, _)| **m != FreqIndex::new(0, 0))
            .map(|(_, v)| v.norm())
            .sum();
        assert!(others < 1e-12);
    }

    #[test]
    fn pullback_matches_pointwise_composition() {
        let f = Symbol2::trig_poly(&[((1, 0), c(1.0, 0.0)), ((0, -1), c(0.5, 0.5))]);
        let z = BidiscPoint::new(c(0.4, 0.0), c(0.0, 0.3));
        let p = mobius_pullback(&f, &z, 24).unwrap();
        for j in 0..7 {
            let t = 0.9 * j as f64;
            let w1 = Complex64::from_polar(1.0, t);
            let w2 = Complex64::from_polar(1.0, 2.2 * t);
            let direct = f.eval_on_torus(mobius_map1(z.z1, w1), mobius_map1(z.z2, w2));
            let series = p.eval_on_torus(w1, w2);
            assert!((direct - series).norm() < 1e-9, "{direct} vs {series}");
        }
    }

    #[test]
    fn unitary_matrix_is_isometric_with_spread_rows() {
        // Columns of U_z are unit vectors (U_z is unitary); with the row
        // range enlarged by the mass-spread factor the truncation only
        // removes a geometric tail.
        let u = unitary_matrix_1d(c(0.5, 0.2), 160, 32);
        let g = u.adjoint() * &u;
        for d in 0..=32 {
            assert_abs_diff_eq!(g[(d, d)].re, 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn intertwining_residual_halves_when_truncation_doubles() {
        let f = Symbol2::trig_poly(&[
            ((1, 0), c(1.0, 0.0)),
            ((0, 1), c(0.5, 0.25)),
            ((0, 0), c(0.3, 0.0)),
        ]);
        let z = BidiscPoint::new(c(0.5, 0.0), c(0.0, 0.0));
        let r16 = mobius_intertwining_residual(&f, &z, TruncationBox::square(16), 8).unwrap();
        let r32 = mobius_intertwining_residual(&f, &z, TruncationBox::square(32), 16).unwrap();
        assert!(r32 <= r16 / 2.0, "r16 = {r16:.3e}, r32 = {r32:.3e}");
    }

    #[test]
    fn intertwining_residual_of_constant_is_zero() {
        let f = Symbol2::constant(c(1.0, 0.0));
        let z = BidiscPoint::new(c(0.3, 0.0), c(0.2, 0.1));
        let r = mobius_intertwining_residual(&f, &z, TruncationBox::square(8), 16).unwrap();
        assert!(r < 1e-10);
    }

    #[test]
    fn intertwining_residual_exact_at_center() {
        // At z = 0 the pullback of z1 is -z1 and the conjugation is exact.
        let f = Symbol2::monomial(1, 0);
        let r =
            mobius_intertwining_residual(&f, &BidiscPoint::origin(), TruncationBox::square(8), 16)
                .unwrap();
        assert!(r <= 1e-10);
    }
}
