//! Reproducing kernels, Berezin-type boundary probes, and Hankel kernel
//! norms.
//!
//! The normalized reproducing kernel of the bidisc Hardy space at an
//! interior point `z` is the product of the one-variable kernels,
//! `k_z(w) = prod_i (1 - |z_i|^2)^{1/2} / (1 - conj(z_i) w_i)`; its monomial
//! coefficients decay geometrically, so truncations carry explicit tail
//! bounds. Boundary probes track the two quantities whose decay along
//! `z -> T^2` is tied to compactness of the semi-commutator: the product
//! `||H_conj(f) k_z|| * ||H_g k_z||` and the Berezin value
//! `<(T_f T_g - T_{fg}) k_z, k_z>`.
//!
//! For product symbols `F = F1(z1) F2(z2)` the two-variable quantities
//! reduce exactly to one-variable kernel computations:
//! `||H_F k_z||^2 = ||F1 k_{z1}||^2 ||F2 k_{z2}||^2
//!               - ||T_{F1} k_{z1}||^2 ||T_{F2} k_{z2}||^2`
//! (total mass minus the doubly-analytic quadrant). The probe uses this
//! factored route whenever both symbols factor, which keeps shells near the
//! boundary affordable at the large truncation degrees they require.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec;
use crate::hardy::{hankel_matrix, semicommutator_matrix, toeplitz_matrix, NegWindow, TruncationBox};
use crate::symbol::{unit_power, BidiscPoint, Estimate, Symbol1, Symbol2};

/// A real quantity with an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealEstimate {
    pub value: f64,
    pub err: f64,
}

/// Truncated normalized reproducing kernel over a box basis.
#[derive(Debug, Clone)]
pub struct KernelVector {
    /// Coefficients in box (lexicographic) order: the coefficient at
    /// `(a, b)` is `(1-|z1|^2)^{1/2} (1-|z2|^2)^{1/2} conj(z1)^a conj(z2)^b`.
    pub coeffs: Vec<Complex64>,
    pub boxx: TruncationBox,
    pub z: BidiscPoint,
    /// Bound on the l2 mass of the omitted coefficients.
    pub tail: f64,
}

impl KernelVector {
    pub fn norm_sq_stored(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn l1_norm_stored(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }
}

fn require_interior(z: &BidiscPoint) -> Result<()> {
    if !z.is_interior() {
        return Err(Error::OutsideDomain {
            r1: z.z1.norm(),
            r2: z.z2.norm(),
        });
    }
    Ok(())
}

/// One-variable unnormalized kernel value `1 / (1 - conj(z1) w1)`.
pub fn kernel_eval1(z1: Complex64, w1: Complex64) -> Result<Complex64> {
    let d = Complex64::new(1.0, 0.0) - z1.conj() * w1;
    if d.norm() == 0.0 {
        return Err(Error::KernelPole { variable: 1 });
    }
    if z1.norm() * w1.norm() >= 1.0 + 1e-12 {
        return Err(Error::OutsideDomain {
            r1: z1.norm() * w1.norm(),
            r2: f64::NAN,
        });
    }
    Ok(d.inv())
}

/// Reproducing kernel of the bidisc, `K_z(w) = prod_i 1/(1 - conj(z_i) w_i)`.
pub fn kernel_eval(z: &BidiscPoint, w: &BidiscPoint) -> Result<Complex64> {
    let k1 = kernel_eval1(z.z1, w.z1)?;
    let k2 = kernel_eval1(z.z2, w.z2).map_err(|e| match e {
        Error::KernelPole { .. } => Error::KernelPole { variable: 2 },
        other => other,
    })?;
    Ok(k1 * k2)
}

/// Normalized kernel `k_z(w)`, including the normalization factors.
pub fn normalized_kernel_eval(z: &BidiscPoint, w: &BidiscPoint) -> Result<Complex64> {
    let n1 = (1.0 - z.z1.norm_sqr()).max(0.0).sqrt();
    let n2 = (1.0 - z.z2.norm_sqr()).max(0.0).sqrt();
    Ok(kernel_eval(z, w)? * n1 * n2)
}

/// Coefficients of the truncated one-variable normalized kernel together
/// with the squared omitted mass `r^{2(n+1)}`.
pub fn kernel1_coeffs(z1: Complex64, n: u32) -> (Vec<Complex64>, f64) {
    let norm = (1.0 - z1.norm_sqr()).max(0.0).sqrt();
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    let mut p = Complex64::new(norm, 0.0);
    for _ in 0..=n {
        coeffs.push(p);
        p *= z1.conj();
    }
    let tail_sq = z1.norm_sqr().powi(n as i32 + 1);
    (coeffs, tail_sq)
}

/// Truncation of the normalized reproducing kernel to the box.
pub fn normalized_kernel(z: &BidiscPoint, boxx: TruncationBox) -> Result<KernelVector> {
    require_interior(z)?;
    let (c1, t1_sq) = kernel1_coeffs(z.z1, boxx.n1);
    let (c2, t2_sq) = kernel1_coeffs(z.z2, boxx.n2);
    let mut coeffs = Vec::with_capacity(boxx.len());
    for a in &c1 {
        for b in &c2 {
            coeffs.push(a * b);
        }
    }
    // 1 - (1 - t1)(1 - t2) with t_i the per-variable squared tails.
    let tail_sq = t1_sq + t2_sq - t1_sq * t2_sq;
    Ok(KernelVector {
        coeffs,
        boxx,
        z: *z,
        tail: tail_sq.max(0.0).sqrt(),
    })
}

/// Smallest degree `n` with `r^{2(n+1)} <= bound_sq`.
pub fn degree_for_kernel_tail(r: f64, bound_sq: f64) -> u32 {
    if r <= 0.0 {
        return 0;
    }
    if r >= 1.0 {
        return u32::MAX;
    }
    let n = bound_sq.ln() / (2.0 * r.ln()) - 1.0;
    n.ceil().max(0.0) as u32
}

/// `<(T_f T_g - T_{fg}) k_z, k_z>` as a quadratic form of the truncated
/// semi-commutator on the truncated kernel, with an error bound combining
/// the kernel tail (times an operator-norm surrogate from coefficient l1
/// norms) and the symbol tails.
pub fn berezin_semicommutator(
    f: &Symbol2,
    g: &Symbol2,
    z: &BidiscPoint,
    boxx: TruncationBox,
) -> Result<Estimate> {
    let s = semicommutator_matrix(f, g, boxx);
    let k = normalized_kernel(z, boxx)?;
    let v = nalgebra::DVector::from_vec(k.coeffs.clone());
    let sv = &s.entries * &v;
    // dotc conjugates its receiver: this is <S k, k> in the math convention.
    let value = v.dotc(&sv);
    let norm_surrogate = 2.0 * f.sup_norm_surrogate() * g.sup_norm_surrogate();
    let mut err = norm_surrogate * (2.0 * k.tail + k.tail * k.tail);
    let l1 = k.l1_norm_stored();
    err += s.exactness.entry_bound() * l1 * l1;
    Ok(Estimate { value, err })
}

/// `<T_g k_z, k_z>` with the box grown until the kernel tail is below
/// `tail_target`. Recovers the harmonic extension `g(z)` within the bound.
pub fn berezin_toeplitz_auto(g: &Symbol2, z: &BidiscPoint, tail_target: f64) -> Result<Estimate> {
    require_interior(z)?;
    let bound_sq = (tail_target * tail_target) / 2.0;
    let n1 = degree_for_kernel_tail(z.z1.norm(), bound_sq).min(4096);
    let n2 = degree_for_kernel_tail(z.z2.norm(), bound_sq).min(4096);
    let boxx = TruncationBox::new(n1, n2);
    let k = normalized_kernel(z, boxx)?;
    // Matrix-free application of the Toeplitz compression; the entries are
    // exactly those of toeplitz_matrix(g, boxx).
    let mut tv = vec![Complex64::new(0.0, 0.0); k.coeffs.len()];
    let basis = boxx.basis();
    for (ci, &c) in basis.iter().enumerate() {
        let kc = k.coeffs[ci];
        if kc == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (&s, &gv) in g.coeffs() {
            if let Some(ri) = boxx.index_of(c + s) {
                tv[ri] += gv * kc;
            }
        }
    }
    let value: Complex64 = tv.iter().zip(&k.coeffs).map(|(a, b)| a * b.conj()).sum();
    let sup = g.sup_norm_surrogate();
    let mut err = sup * (2.0 * k.tail + k.tail * k.tail);
    // Omitted symbol coefficients act entrywise; bound through the torus sup
    // of the truncated kernel.
    let kinf = k.l1_norm_stored();
    err += g.l2_tail() * kinf * kinf;
    Ok(Estimate { value, err })
}

/// `||H_f k_z||` through the truncated Hankel matrix on an auto-sized
/// window.
pub fn hankel_kernel_norm(f: &Symbol2, z: &BidiscPoint, boxx: TruncationBox) -> Result<RealEstimate> {
    let w = NegWindow::covering(f, boxx);
    let h = hankel_matrix(f, boxx, &w)?;
    let k = normalized_kernel(z, boxx)?;
    let v = nalgebra::DVector::from_vec(k.coeffs.clone());
    let hv = &h.entries * &v;
    let value = hv.norm();
    let sup = f.sup_norm_surrogate();
    let err = sup * k.tail + f.l2_tail() * k.l1_norm_stored();
    Ok(RealEstimate { value, err })
}

/// One-variable decomposition of `phi * k_{z1}` at truncation degree `n`:
/// squared norms of the full product, its Hardy part, and its complementary
/// (Hankel) part.
#[derive(Debug, Clone, Copy)]
pub struct KernelMass1 {
    pub mult_sq: f64,
    pub toeplitz_sq: f64,
    pub hankel_sq: f64,
}

/// Coefficients of `phi * k_trunc` indexed from `lo`.
fn product_coeffs(phi: &Symbol1, k: &[Complex64], lo: i32, hi: i32) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
    for (&s, &v) in phi.coeffs() {
        for (c, &kc) in k.iter().enumerate() {
            let m = c as i32 + s;
            out[(m - lo) as usize] += v * kc;
        }
    }
    out
}

/// Splits `||phi k_{z1}||^2` into Hardy and complementary parts.
pub fn kernel_mass1(phi: &Symbol1, z1: Complex64, n: u32) -> KernelMass1 {
    let (k, _) = kernel1_coeffs(z1, n);
    let lo = phi.min_freq();
    let hi = n as i32 + phi.max_freq();
    let u = product_coeffs(phi, &k, lo, hi);
    let mut toeplitz_sq = 0.0;
    let mut hankel_sq = 0.0;
    for (i, c) in u.iter().enumerate() {
        let m = lo + i as i32;
        if m >= 0 {
            toeplitz_sq += c.norm_sqr();
        } else {
            hankel_sq += c.norm_sqr();
        }
    }
    KernelMass1 {
        mult_sq: toeplitz_sq + hankel_sq,
        toeplitz_sq,
        hankel_sq,
    }
}

/// One-variable pairings `<phi k, psi k>` over all frequencies and over the
/// Hardy part only.
pub fn kernel_pairing1(
    phi: &Symbol1,
    psi: &Symbol1,
    z1: Complex64,
    n: u32,
) -> (Complex64, Complex64) {
    let (k, _) = kernel1_coeffs(z1, n);
    let lo = phi.min_freq().min(psi.min_freq());
    let hi = n as i32 + phi.max_freq().max(psi.max_freq());
    let u = product_coeffs(phi, &k, lo, hi);
    let v = product_coeffs(psi, &k, lo, hi);
    let mut full = Complex64::new(0.0, 0.0);
    let mut hardy = Complex64::new(0.0, 0.0);
    for i in 0..u.len() {
        let t = u[i] * v[i].conj();
        full += t;
        if lo + i as i32 >= 0 {
            hardy += t;
        }
    }
    (full, hardy)
}

/// `||H_{F1 (x) F2} k_z||` from one-variable kernel masses: total product
/// mass minus the doubly-analytic quadrant.
pub fn hankel_kernel_norm_tensor(
    f1: &Symbol1,
    f2: &Symbol1,
    z: &BidiscPoint,
    n1: u32,
    n2: u32,
) -> f64 {
    let m1 = kernel_mass1(f1, z.z1, n1);
    let m2 = kernel_mass1(f2, z.z2, n2);
    (m1.mult_sq * m2.mult_sq - m1.toeplitz_sq * m2.toeplitz_sq)
        .max(0.0)
        .sqrt()
}

/// Evaluates `T_g k_z` at torus points through the truncated Toeplitz
/// compression: matrix-vector product, then polynomial evaluation.
pub fn toeplitz_on_kernel(
    g: &Symbol2,
    z: &BidiscPoint,
    w_grid: &[BidiscPoint],
    boxx: TruncationBox,
) -> Result<Vec<Complex64>> {
    let t = toeplitz_matrix(g, boxx);
    let k = normalized_kernel(z, boxx)?;
    let v = nalgebra::DVector::from_vec(k.coeffs.clone());
    let tv = &t.entries * &v;
    let basis = boxx.basis();
    Ok(w_grid
        .iter()
        .map(|w| {
            basis
                .iter()
                .zip(tv.iter())
                .map(|(m, c)| c * unit_power(w.z1, m.m1) * unit_power(w.z2, m.m2))
                .sum()
        })
        .collect())
}

/// Closed-form route for `T_g k_z` at a torus point: the quadrant expansion
/// `g_{++}(w) k_z(w) + g_{+-}(w1, z2) k_z(w) + g_{-+}(z1, w2) k_z(w)
///  + g_{--}(z1, z2) k_z(w)`.
/// Serves as the independent oracle for [`toeplitz_on_kernel`]; the quadrant
/// parts must admit the mixed boundary evaluations (exact symbols always do).
pub fn toeplitz_on_kernel_quadrants(
    g: &Symbol2,
    z: &BidiscPoint,
    w: &BidiscPoint,
) -> Result<Complex64> {
    use crate::symbol::Quadrant;
    let kz = normalized_kernel_eval(z, w)?;
    let pp = g
        .quadrant_part(Quadrant::PP)
        .harmonic_extension(&BidiscPoint::new(w.z1, w.z2))?;
    let pm = g
        .quadrant_part(Quadrant::PM)
        .harmonic_extension(&BidiscPoint::new(w.z1, z.z2))?;
    let mp = g
        .quadrant_part(Quadrant::MP)
        .harmonic_extension(&BidiscPoint::new(z.z1, w.z2))?;
    let mm = g
        .quadrant_part(Quadrant::MM)
        .harmonic_extension(&BidiscPoint::new(z.z1, z.z2))?;
    Ok((pp.value + pm.value + mp.value + mm.value) * kz)
}

/// Sampling plan for [`boundary_probe`].
#[derive(Debug, Clone)]
pub struct ProbeConfig {
    /// Shell radii, each in (0, 1).
    pub radii: Vec<f64>,
    /// Angles per variable per shell.
    pub angles: usize,
    /// Radius of the coordinate held fixed on mixed shells.
    pub fixed_interior_radius: f64,
    /// Kernel truncations are grown until the tail is below this target
    /// (subject to `max_degree`).
    pub kernel_tail_target: f64,
    /// Cap on the per-variable truncation degree.
    pub max_degree: u32,
    /// Box used by the dense (non-product) fallback route.
    pub dense_box: TruncationBox,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            radii: vec![0.5, 0.9, 0.99],
            angles: 16,
            fixed_interior_radius: 0.5,
            kernel_tail_target: 1e-6,
            max_degree: 4096,
            dense_box: TruncationBox::square(24),
        }
    }
}

/// One boundary-probe evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeRow {
    pub r1: f64,
    pub theta1: f64,
    pub r2: f64,
    pub theta2: f64,
    pub hankel_product: f64,
    pub berezin: Complex64,
    pub err: f64,
}

/// A record sequence of boundary-probe evaluations, ordered by
/// (shell radius, family, angle indices).
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeTable {
    pub rows: Vec<ProbeRow>,
}

impl ProbeTable {
    /// Shell maximum of the Hankel product over rows touching radius `r`.
    pub fn shell_max_hankel(&self, r: f64) -> f64 {
        self.rows
            .iter()
            .filter(|row| row.r1 == r || row.r2 == r)
            .map(|row| row.hankel_product)
            .fold(0.0, f64::max)
    }

    /// CSV payload in the fixed column schema.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("r1,theta1,r2,theta2,hankel_product,berezin_re,berezin_im,err\n");
        for row in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                row.r1,
                row.theta1,
                row.r2,
                row.theta2,
                row.hankel_product,
                row.berezin.re,
                row.berezin.im,
                row.err
            ));
        }
        s
    }

    pub fn from_csv(s: &str) -> Result<ProbeTable> {
        let mut lines = s.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty CSV".into()))?;
        if header != "r1,theta1,r2,theta2,hankel_product,berezin_re,berezin_im,err" {
            return Err(Error::Parse(format!("unexpected CSV header: {header}")));
        }
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 8 {
                return Err(Error::Parse(format!("row {}: expected 8 fields", i + 1)));
            }
            let p = |j: usize| -> Result<f64> {
                fields[j]
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("row {}: {e}", i + 1)))
            };
            rows.push(ProbeRow {
                r1: p(0)?,
                theta1: p(1)?,
                r2: p(2)?,
                theta2: p(3)?,
                hankel_product: p(4)?,
                berezin: Complex64::new(p(5)?, p(6)?),
                err: p(7)?,
            });
        }
        Ok(ProbeTable { rows })
    }
}

struct FactoredProbe {
    fbar1: Symbol1,
    fbar2: Symbol1,
    g1: Symbol1,
    g2: Symbol1,
}

fn probe_points(cfg: &ProbeConfig) -> Vec<(f64, f64, f64, f64)> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let angles: Vec<f64> = (0..cfg.angles)
        .map(|i| two_pi * i as f64 / cfg.angles as f64)
        .collect();
    let fix = cfg.fixed_interior_radius;
    let mut pts = Vec::new();
    for &r in &cfg.radii {
        // Full shell, then the two mixed shells with one coordinate held at
        // the fixed interior radius. The mixed shells are where the
        // derivative-condition obstruction lives.
        for &t1 in &angles {
            for &t2 in &angles {
                pts.push((r, t1, r, t2));
            }
        }
        for &t1 in &angles {
            for &t2 in &angles {
                pts.push((fix, t1, r, t2));
            }
        }
        for &t1 in &angles {
            for &t2 in &angles {
                pts.push((r, t1, fix, t2));
            }
        }
    }
    pts
}

/// Records the Hankel product `||H_conj(f) k_z|| ||H_g k_z||` and the
/// Berezin value of the semi-commutator at sampled shells of the bidisc.
/// Shells include full shells (both radii equal) and mixed shells (one
/// coordinate at a fixed interior radius). Rows appear in deterministic
/// (radius, family, angle) order.
///
/// Product symbols are evaluated through the exact one-variable
/// factorization; non-product symbols fall back to dense truncations on
/// `cfg.dense_box`, with the (possibly larger) kernel tail reflected in the
/// per-row error bound.
pub fn boundary_probe(f: &Symbol2, g: &Symbol2, cfg: &ProbeConfig) -> Result<ProbeTable> {
    for &r in &cfg.radii {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::OutsideDomain { r1: r, r2: r });
        }
    }
    let pts = probe_points(cfg);
    let fbar = f.conjugate();
    let factored = match (fbar.tensor_factors(), g.tensor_factors()) {
        (Some((a1, a2)), Some((b1, b2))) => Some(FactoredProbe {
            fbar1: a1,
            fbar2: a2,
            g1: b1,
            g2: b2,
        }),
        _ => None,
    };
    let sup_f = f.sup_norm_surrogate();
    let sup_g = g.sup_norm_surrogate();
    let symbol_tail_err = f.l2_tail() * sup_g + g.l2_tail() * sup_f;

    let rows = match &factored {
        Some(fp) => {
            let bound_sq = (cfg.kernel_tail_target * cfg.kernel_tail_target) / 2.0;
            exec::map_items(pts, |(r1, t1, r2, t2)| {
                let z = BidiscPoint::from_polar(r1, t1, r2, t2);
                let n1 = degree_for_kernel_tail(r1, bound_sq).min(cfg.max_degree);
                let n2 = degree_for_kernel_tail(r2, bound_sq).min(cfg.max_degree);
                let hf = hankel_kernel_norm_tensor(&fp.fbar1, &fp.fbar2, &z, n1, n2);
                let hg = hankel_kernel_norm_tensor(&fp.g1, &fp.g2, &z, n1, n2);
                // <(T_f T_g - T_{fg}) k, k> = -(<g k, fbar k> - <P(g k), P(fbar k)>)
                let (full1, hardy1) = kernel_pairing1(&fp.g1, &fp.fbar1, z.z1, n1);
                let (full2, hardy2) = kernel_pairing1(&fp.g2, &fp.fbar2, z.z2, n2);
                let berezin = -(full1 * full2 - hardy1 * hardy2);
                let tail_sq = r1.powi(2 * (n1 as i32 + 1)) + r2.powi(2 * (n2 as i32 + 1));
                let ktail = tail_sq.sqrt();
                let err = 2.0 * sup_f * sup_g * (2.0 * ktail + tail_sq)
                    + symbol_tail_err * kernel_sup_bound(r1, r2);
                ProbeRow {
                    r1,
                    theta1: t1,
                    r2,
                    theta2: t2,
                    hankel_product: hf * hg,
                    berezin,
                    err,
                }
            })
        }
        None => {
            let boxx = cfg.dense_box;
            let w = NegWindow::covering(&fbar, boxx).merge(&NegWindow::covering(g, boxx));
            let hf = hankel_matrix(&fbar, boxx, &w)?;
            let hg = hankel_matrix(g, boxx, &w)?;
            exec::map_items(pts, |(r1, t1, r2, t2)| {
                let z = BidiscPoint::from_polar(r1, t1, r2, t2);
                let k = normalized_kernel(&z, boxx).expect("interior shell point");
                let v = nalgebra::DVector::from_vec(k.coeffs.clone());
                let hfv = &hf.entries * &v;
                let hgv = &hg.entries * &v;
                let berezin = -hfv.dotc(&hgv);
                let err = 2.0 * sup_f * sup_g * (2.0 * k.tail + k.tail * k.tail)
                    + symbol_tail_err * kernel_sup_bound(r1, r2);
                ProbeRow {
                    r1,
                    theta1: t1,
                    r2,
                    theta2: t2,
                    hankel_product: hfv.norm() * hgv.norm(),
                    berezin,
                    err,
                }
            })
        }
    };
    Ok(ProbeTable { rows })
}

/// Bound on the torus sup of the truncated kernel,
/// `prod_i ((1 + r_i)/(1 - r_i))^{1/2}`.
fn kernel_sup_bound(r1: f64, r2: f64) -> f64 {
    let b = |r: f64| ((1.0 + r) / (1.0 - r)).sqrt();
    b(r1) * b(r2)
}
