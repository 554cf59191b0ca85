//! Symbols on the torus and bitorus, stored through their Fourier coefficients.
//!
//! A symbol is a bounded function on T (circle) or T^2 (bitorus) represented
//! by a finite sparse map from integer frequencies to complex coefficients,
//! together with an `l2_tail` bound on the mass of any omitted coefficients.
//! Trigonometric polynomials are exact (`l2_tail == 0`); structural families
//! (arc indicators, tents) are truncated at an explicit bandwidth with a
//! closed-form tail bound.
//!
//! Frequency conventions: the coefficient at `m >= 0` multiplies `z^m`, the
//! coefficient at `m < 0` multiplies `conj(z)^|m|`. On the bitorus the pair
//! `(m1, m2)` indexes `z1, z2` in that order, and the zero frequency counts
//! as nonnegative everywhere.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default per-variable bandwidth for structural symbol families.
pub const DEFAULT_BANDWIDTH: u32 = 256;

/// Radius tolerance used to classify a coordinate as on the unit circle.
const BOUNDARY_EPS: f64 = 1e-12;

/// A frequency pair on Z x Z. The first component indexes the `z1` variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreqIndex {
    pub m1: i32,
    pub m2: i32,
}

impl FreqIndex {
    pub fn new(m1: i32, m2: i32) -> Self {
        Self { m1, m2 }
    }

    /// True when both frequencies are nonnegative, i.e. the index lies in
    /// the Hardy quadrant Z_+ x Z_+.
    pub fn in_hardy_quadrant(self) -> bool {
        self.m1 >= 0 && self.m2 >= 0
    }

    pub fn quadrant(self) -> Quadrant {
        match (self.m1 >= 0, self.m2 >= 0) {
            (true, true) => Quadrant::PP,
            (true, false) => Quadrant::PM,
            (false, true) => Quadrant::MP,
            (false, false) => Quadrant::MM,
        }
    }
}

impl std::ops::Add for FreqIndex {
    type Output = FreqIndex;
    fn add(self, rhs: FreqIndex) -> FreqIndex {
        FreqIndex::new(self.m1 + rhs.m1, self.m2 + rhs.m2)
    }
}

impl std::ops::Sub for FreqIndex {
    type Output = FreqIndex;
    fn sub(self, rhs: FreqIndex) -> FreqIndex {
        FreqIndex::new(self.m1 - rhs.m1, self.m2 - rhs.m2)
    }
}

impl std::ops::Neg for FreqIndex {
    type Output = FreqIndex;
    fn neg(self) -> FreqIndex {
        FreqIndex::new(-self.m1, -self.m2)
    }
}

/// The four sign-quadrants of Z x Z. `P` is nonnegative, `M` strictly
/// negative; the first letter refers to the `z1` frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrant {
    PP,
    PM,
    MP,
    MM,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [Quadrant::PP, Quadrant::PM, Quadrant::MP, Quadrant::MM];

    pub fn contains(self, m: FreqIndex) -> bool {
        m.quadrant() == self
    }
}

/// Which variable of a bitorus symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Z1,
    Z2,
}

/// Wirtinger derivative selector for [`Symbol2::wirtinger`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wirtinger {
    /// d/dz1: analytic frequencies m1 >= 1.
    DZ1,
    /// d/dz1-bar: co-analytic frequencies m1 <= -1.
    DZ1Bar,
    /// d/dz2.
    DZ2,
    /// d/dz2-bar.
    DZ2Bar,
}

impl Wirtinger {
    pub fn axis(self) -> Axis {
        match self {
            Wirtinger::DZ1 | Wirtinger::DZ1Bar => Axis::Z1,
            Wirtinger::DZ2 | Wirtinger::DZ2Bar => Axis::Z2,
        }
    }

    fn conjugated(self) -> bool {
        matches!(self, Wirtinger::DZ1Bar | Wirtinger::DZ2Bar)
    }
}

/// A point of the closed bidisc. Interior means strictly inside both disks;
/// a coordinate within `1e-12` of the unit circle counts as a boundary
/// coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BidiscPoint {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl BidiscPoint {
    pub fn new(z1: Complex64, z2: Complex64) -> Self {
        Self { z1, z2 }
    }

    pub fn from_polar(r1: f64, theta1: f64, r2: f64, theta2: f64) -> Self {
        Self {
            z1: Complex64::from_polar(r1, theta1),
            z2: Complex64::from_polar(r2, theta2),
        }
    }

    pub fn origin() -> Self {
        Self::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn coord(&self, axis: Axis) -> Complex64 {
        match axis {
            Axis::Z1 => self.z1,
            Axis::Z2 => self.z2,
        }
    }

    pub fn is_interior(&self) -> bool {
        coord_class(self.z1) == CoordClass::Interior && coord_class(self.z2) == CoordClass::Interior
    }

    /// Errors unless both coordinates lie in the closed bidisc.
    pub fn check_in_closed_bidisc(&self) -> Result<()> {
        if coord_class(self.z1) == CoordClass::Outside || coord_class(self.z2) == CoordClass::Outside
        {
            return Err(Error::OutsideDomain {
                r1: self.z1.norm(),
                r2: self.z2.norm(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum CoordClass {
    Interior,
    Boundary,
    Outside,
}

pub(crate) fn coord_class(z: Complex64) -> CoordClass {
    let r = z.norm();
    if r < 1.0 - BOUNDARY_EPS {
        CoordClass::Interior
    } else if r <= 1.0 + BOUNDARY_EPS {
        CoordClass::Boundary
    } else {
        CoordClass::Outside
    }
}

/// A value together with an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub err: f64,
}

impl Estimate {
    pub fn exact(value: Complex64) -> Self {
        Self { value, err: 0.0 }
    }
}

/// A closed arc of the unit circle, stored as a start angle in `[0, 2pi)`
/// and a length in `(0, 2pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleArc {
    pub start: f64,
    pub len: f64,
}

pub(crate) fn normalize_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut t = theta % two_pi;
    if t < 0.0 {
        t += two_pi;
    }
    t
}

impl CircleArc {
    pub fn new(start: f64, len: f64) -> Self {
        assert!(len > 0.0 && len <= 2.0 * PI, "arc length out of range");
        Self {
            start: normalize_angle(start),
            len,
        }
    }

    pub fn end(&self) -> f64 {
        self.start + self.len
    }

    /// Length of the overlap of the two closed arcs.
    pub fn overlap_len(&self, other: &CircleArc) -> f64 {
        let mut total: f64 = 0.0;
        for k in [-1.0, 0.0, 1.0] {
            let s2 = other.start + k * 2.0 * PI;
            let lo = self.start.max(s2);
            let hi = self.end().min(s2 + other.len);
            if hi > lo {
                total += hi - lo;
            }
        }
        total.min(self.len.min(other.len))
    }

    /// True when the interiors of the two arcs do not meet (shared endpoints
    /// are allowed).
    pub fn interiors_disjoint(&self, other: &CircleArc) -> bool {
        self.overlap_len(other) <= 1e-14
    }
}

/// Largest gap (arc length) of the circle not covered by any of the given
/// arcs. Returns `2*pi` for an empty list and `0` when the arcs cover the
/// whole circle.
pub fn largest_uncovered_gap(arcs: &[CircleArc]) -> f64 {
    if arcs.is_empty() {
        return 2.0 * PI;
    }
    // Unroll arcs to intervals on [0, 4pi) and merge.
    let mut ivs: Vec<(f64, f64)> = Vec::new();
    for a in arcs {
        let len = a.len.min(2.0 * PI);
        ivs.push((a.start, a.start + len));
        ivs.push((a.start + 2.0 * PI, a.start + len + 2.0 * PI));
    }
    ivs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for iv in ivs {
        match merged.last_mut() {
            Some(last) if iv.0 <= last.1 => last.1 = last.1.max(iv.1),
            _ => merged.push(iv),
        }
    }
    let mut max_gap: f64 = 0.0;
    for w in merged.windows(2) {
        max_gap = max_gap.max(w[1].0 - w[0].1);
    }
    // Covered circle: a merged interval spanning at least 2pi leaves no gap.
    if merged.iter().any(|&(s, e)| e - s >= 2.0 * PI) {
        return 0.0;
    }
    max_gap.min(2.0 * PI)
}

/// Structural tag for one-variable symbols.
#[derive(Debug, Clone, PartialEq)]
pub enum Descriptor1 {
    ExplicitList,
    /// Indicator of the closed arc `[a, b]`.
    ArcIndicator { a: f64, b: f64 },
    /// Piecewise-linear bump of height 1 centered at `a` with half-width `w`.
    Tent { a: f64, w: f64 },
}

/// Structural tag for bitorus symbols.
#[derive(Debug, Clone, PartialEq)]
pub enum Descriptor2 {
    ExplicitList,
    /// Product `f1(z1) * f2(z2)` of two one-variable symbols.
    Tensor(Box<Symbol1>, Box<Symbol1>),
    /// Result of a coefficient-wise product of two symbols.
    Product,
}

/// A one-variable symbol on the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct Symbol1 {
    coeffs: BTreeMap<i32, Complex64>,
    descriptor: Option<Descriptor1>,
    support_arcs: Option<Vec<CircleArc>>,
    l2_tail: f64,
}

impl Symbol1 {
    fn from_map(coeffs: BTreeMap<i32, Complex64>) -> Self {
        let mut s = Self {
            coeffs,
            descriptor: Some(Descriptor1::ExplicitList),
            support_arcs: None,
            l2_tail: 0.0,
        };
        s.prune();
        s
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
    }

    pub fn zero() -> Self {
        Self::from_map(BTreeMap::new())
    }

    pub fn constant(c: Complex64) -> Self {
        Self::trig_poly(&[(0, c)])
    }

    /// Trigonometric polynomial from a list of `(frequency, coefficient)`
    /// terms. Repeated frequencies are summed; exact zeros are dropped.
    pub fn trig_poly(terms: &[(i32, Complex64)]) -> Self {
        let mut map = BTreeMap::new();
        for &(m, c) in terms {
            let e = map.entry(m).or_insert(Complex64::new(0.0, 0.0));
            *e += c;
        }
        Self::from_map(map)
    }

    /// The symbol `z` (single coefficient 1 at frequency 1).
    pub fn z() -> Self {
        Self::trig_poly(&[(1, Complex64::new(1.0, 0.0))])
    }

    pub fn conj_z() -> Self {
        Self::trig_poly(&[(-1, Complex64::new(1.0, 0.0))])
    }

    /// Indicator of the closed arc `[a, b]` truncated at the default
    /// bandwidth. Coefficients decay like `1/n`: square-summable but not
    /// absolutely summable, so boundary evaluations are rejected.
    pub fn arc_indicator(a: f64, b: f64) -> Result<Self> {
        Self::arc_indicator_with_bandwidth(a, b, DEFAULT_BANDWIDTH)
    }

    pub fn arc_indicator_with_bandwidth(a: f64, b: f64, bandwidth: u32) -> Result<Self> {
        let len = b - a;
        if !(len > 0.0 && len <= 2.0 * PI) || !a.is_finite() || !b.is_finite() {
            return Err(Error::DegenerateArc { start: a, end: b });
        }
        if (len - 2.0 * PI).abs() < 1e-15 {
            // Full circle: the constant 1, exactly.
            let mut s = Self::constant(Complex64::new(1.0, 0.0));
            s.support_arcs = Some(vec![CircleArc::new(0.0, 2.0 * PI)]);
            return Ok(s);
        }
        let mut map = BTreeMap::new();
        map.insert(0, Complex64::new(len / (2.0 * PI), 0.0));
        for n in 1..=bandwidth as i32 {
            for m in [n, -n] {
                let mf = m as f64;
                // (1/2pi) * int_a^b e^{-i m t} dt
                let num = (Complex64::new(0.0, -mf * a)).exp() - (Complex64::new(0.0, -mf * b)).exp();
                let c = num / Complex64::new(0.0, 2.0 * PI * mf);
                if c != Complex64::new(0.0, 0.0) {
                    map.insert(m, c);
                }
            }
        }
        let b_f = bandwidth as f64;
        // |c_n| <= 1/(pi n); sum_{n>B} n^-2 <= 1/B.
        let tail = (2.0 / b_f).sqrt() / PI;
        let mut s = Self::from_map(map);
        s.descriptor = Some(Descriptor1::ArcIndicator { a, b });
        s.support_arcs = Some(vec![CircleArc::new(a, len)]);
        s.l2_tail = tail;
        Ok(s)
    }

    /// Continuous piecewise-linear bump of height 1 centered at angle `a`
    /// with half-width `w`, truncated at the default bandwidth. Coefficients
    /// decay like `1/n^2`, so both l2 and l1 tails are finite.
    pub fn tent(a: f64, w: f64) -> Result<Self> {
        Self::tent_with_bandwidth(a, w, DEFAULT_BANDWIDTH)
    }

    pub fn tent_with_bandwidth(a: f64, w: f64, bandwidth: u32) -> Result<Self> {
        if !(w > 0.0 && w < PI) {
            return Err(Error::BadTentWidth(w));
        }
        let mut map = BTreeMap::new();
        map.insert(0, Complex64::new(w / (2.0 * PI), 0.0));
        for n in 1..=bandwidth as i32 {
            for m in [n, -n] {
                let mf = m as f64;
                let base = (1.0 - (mf * w).cos()) / (PI * w * mf * mf);
                let c = Complex64::from_polar(1.0, -mf * a) * base;
                if c != Complex64::new(0.0, 0.0) {
                    map.insert(m, c);
                }
            }
        }
        let b_f = bandwidth as f64;
        // |c_n| <= 2/(pi w n^2); sum_{n>B} n^-4 <= 1/(3 B^3).
        let tail = (2.0 / (3.0 * b_f.powi(3))).sqrt() * 2.0 / (PI * w);
        let mut s = Self::from_map(map);
        s.descriptor = Some(Descriptor1::Tent { a, w });
        s.support_arcs = Some(vec![CircleArc::new(a - w, 2.0 * w)]);
        s.l2_tail = tail;
        Ok(s)
    }

    pub fn coeff(&self, m: i32) -> Complex64 {
        self.coeffs.get(&m).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn coeffs(&self) -> &BTreeMap<i32, Complex64> {
        &self.coeffs
    }

    pub fn descriptor(&self) -> Option<&Descriptor1> {
        self.descriptor.as_ref()
    }

    pub fn support_arcs(&self) -> Option<&[CircleArc]> {
        self.support_arcs.as_deref()
    }

    pub fn l2_tail(&self) -> f64 {
        self.l2_tail
    }

    pub fn is_exact(&self) -> bool {
        self.l2_tail == 0.0
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.l2_tail == 0.0
    }

    /// Bound on the l1 norm of omitted coefficients, when certifiable.
    pub fn l1_tail(&self) -> Option<f64> {
        if self.l2_tail == 0.0 {
            return Some(0.0);
        }
        match &self.descriptor {
            Some(Descriptor1::Tent { w, .. }) => {
                let b = self.max_abs_freq() as f64;
                Some(4.0 / (PI * w * b))
            }
            _ => None,
        }
    }

    pub fn min_freq(&self) -> i32 {
        self.coeffs.keys().next().copied().unwrap_or(0)
    }

    pub fn max_freq(&self) -> i32 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    fn max_abs_freq(&self) -> i32 {
        self.min_freq().abs().max(self.max_freq().abs()).max(1)
    }

    pub fn l2_norm_stored(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn l1_norm_stored(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    /// `conj(f)`: the coefficient at `m` becomes the conjugate of the
    /// coefficient at `-m`. Structural descriptors of real symbols and
    /// support arcs are preserved.
    pub fn conjugate(&self) -> Self {
        let map: BTreeMap<i32, Complex64> = self.coeffs.iter().map(|(&m, c)| (-m, c.conj())).collect();
        let descriptor = match &self.descriptor {
            // Tents and arc indicators are real-valued, hence conjugation-invariant.
            Some(d @ (Descriptor1::Tent { .. } | Descriptor1::ArcIndicator { .. })) => Some(d.clone()),
            Some(Descriptor1::ExplicitList) => Some(Descriptor1::ExplicitList),
            None => None,
        };
        Self {
            coeffs: map,
            descriptor,
            support_arcs: self.support_arcs.clone(),
            l2_tail: self.l2_tail,
        }
    }

    /// True when no stored coefficient has a negative frequency. Certified
    /// only for exact symbols.
    pub fn is_analytic(&self) -> bool {
        self.coeffs.keys().all(|&m| m >= 0)
    }

    /// Coefficient-wise convolution restricted to `[-bandwidth, bandwidth]`.
    pub fn multiply(&self, other: &Symbol1, bandwidth: u32) -> Symbol1 {
        let bw = bandwidth as i32;
        let mut map: BTreeMap<i32, Complex64> = BTreeMap::new();
        let mut dropped_sq = 0.0f64;
        for (&mf, &cf) in &self.coeffs {
            for (&mg, &cg) in &other.coeffs {
                let m = mf + mg;
                let term = cf * cg;
                if m.abs() <= bw {
                    *map.entry(m).or_insert(Complex64::new(0.0, 0.0)) += term;
                } else {
                    dropped_sq += term.norm_sqr();
                }
            }
        }
        let tail = propagated_product_tail(
            self.l2_tail,
            self.l1_norm_stored(),
            self.l1_tail(),
            other.l2_tail,
            other.l1_norm_stored(),
            other.l1_tail(),
        ) + dropped_sq.sqrt();
        let mut s = Self::from_map(map);
        s.l2_tail = tail;
        s
    }

    /// Full (untruncated) product of two exactly represented symbols.
    pub fn multiply_full(&self, other: &Symbol1) -> Symbol1 {
        let bw = (self.max_abs_freq() + other.max_abs_freq()).unsigned_abs();
        let mut p = self.multiply(other, bw);
        if self.is_exact() && other.is_exact() {
            p.l2_tail = 0.0;
        }
        p
    }

    /// Evaluates the harmonic extension of the stored coefficients at a
    /// point of the closed disk, with an error bound for the omitted tail.
    pub fn eval(&self, z: Complex64) -> Result<Estimate> {
        let class = coord_class(z);
        if class == CoordClass::Outside {
            return Err(Error::OutsideDomain {
                r1: z.norm(),
                r2: f64::NAN,
            });
        }
        let mut value = Complex64::new(0.0, 0.0);
        for (&m, &c) in &self.coeffs {
            value += c * unit_power(z, m);
        }
        let err = match class {
            CoordClass::Interior => {
                let r2 = z.norm_sqr();
                self.l2_tail * ((1.0 + r2) / (1.0 - r2)).sqrt()
            }
            _ => match self.l1_tail() {
                Some(t) => t,
                None => return Err(Error::DivergenceRisk { variable: 1 }),
            },
        };
        Ok(Estimate { value, err })
    }

    /// Term-wise derivative of the harmonic-extension series. `conjugated`
    /// selects d/dz-bar (negative frequencies) instead of d/dz.
    pub fn eval_deriv(&self, z: Complex64, conjugated: bool) -> Result<Estimate> {
        if coord_class(z) != CoordClass::Interior {
            return Err(Error::OutsideDomain {
                r1: z.norm(),
                r2: f64::NAN,
            });
        }
        let mut value = Complex64::new(0.0, 0.0);
        for (&m, &c) in &self.coeffs {
            if !conjugated && m >= 1 {
                value += c * (m as f64) * z.powi(m - 1);
            } else if conjugated && m <= -1 {
                value += c * (-m as f64) * z.conj().powi(-m - 1);
            }
        }
        let r2 = z.norm_sqr();
        let err = self.l2_tail * ((1.0 + r2) / (1.0 - r2).powi(3)).sqrt();
        Ok(Estimate { value, err })
    }

    /// Value at a point of the unit circle itself (finite coefficient sum).
    pub fn eval_on_circle(&self, u: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&m, &c)| c * unit_power(u, m))
            .sum()
    }
}

/// `z^m` for `m >= 0`, `conj(z)^|m|` for `m < 0`.
pub(crate) fn unit_power(z: Complex64, m: i32) -> Complex64 {
    if m >= 0 {
        z.powi(m)
    } else {
        z.conj().powi(-m)
    }
}

/// Tail bound for a product of two symbols with stored parts `s`, l1 norms
/// `n1`, and l2 tails `t`. The cross term of two truncated factors needs an
/// l1 tail on at least one side; when unavailable a conservative surrogate
/// using the l2 tails is used (documented heuristic).
fn propagated_product_tail(
    t_f: f64,
    l1_f: f64,
    l1_tail_f: Option<f64>,
    t_g: f64,
    l1_g: f64,
    l1_tail_g: Option<f64>,
) -> f64 {
    if t_f == 0.0 && t_g == 0.0 {
        return 0.0;
    }
    let cross = match (l1_tail_f, l1_tail_g) {
        (Some(a), _) => t_g * a,
        (_, Some(b)) => t_f * b,
        _ => t_f * t_g,
    };
    t_f * l1_g + t_g * l1_f + cross
}

/// A bitorus symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct Symbol2 {
    coeffs: BTreeMap<FreqIndex, Complex64>,
    descriptor: Option<Descriptor2>,
    l2_tail: f64,
}

impl Symbol2 {
    fn from_map(coeffs: BTreeMap<FreqIndex, Complex64>) -> Self {
        let mut s = Self {
            coeffs,
            descriptor: Some(Descriptor2::ExplicitList),
            l2_tail: 0.0,
        };
        s.prune();
        s
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
    }

    pub fn zero() -> Self {
        Self::from_map(BTreeMap::new())
    }

    pub fn constant(c: Complex64) -> Self {
        Self::trig_poly(&[((0, 0), c)])
    }

    pub fn trig_poly(terms: &[((i32, i32), Complex64)]) -> Self {
        let mut map = BTreeMap::new();
        for &((m1, m2), c) in terms {
            let e = map
                .entry(FreqIndex::new(m1, m2))
                .or_insert(Complex64::new(0.0, 0.0));
            *e += c;
        }
        Self::from_map(map)
    }

    pub fn monomial(m1: i32, m2: i32) -> Self {
        Self::trig_poly(&[((m1, m2), Complex64::new(1.0, 0.0))])
    }

    /// Product symbol `f1(z1) * f2(z2)`; coefficients are products of the
    /// factor coefficients and the factors (with their support arcs) are
    /// retained in the descriptor.
    pub fn tensor(f1: &Symbol1, f2: &Symbol1) -> Self {
        let mut map = BTreeMap::new();
        for (&m1, &c1) in f1.coeffs() {
            for (&m2, &c2) in f2.coeffs() {
                let c = c1 * c2;
                if c != Complex64::new(0.0, 0.0) {
                    map.insert(FreqIndex::new(m1, m2), c);
                }
            }
        }
        // Omitted mass of a product of truncated factors:
        // ||f||^2 <= (n1^2 + t1^2)(n2^2 + t2^2), stored part is n1^2 n2^2.
        let n1 = f1.l2_norm_stored();
        let n2 = f2.l2_norm_stored();
        let full = (n1 * n1 + f1.l2_tail() * f1.l2_tail()) * (n2 * n2 + f2.l2_tail() * f2.l2_tail());
        let tail = (full - n1 * n1 * n2 * n2).max(0.0).sqrt();
        Self {
            coeffs: map,
            descriptor: Some(Descriptor2::Tensor(
                Box::new(f1.clone()),
                Box::new(f2.clone()),
            )),
            l2_tail: tail,
        }
    }

    pub fn coeff(&self, m: FreqIndex) -> Complex64 {
        self.coeffs.get(&m).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn coeffs(&self) -> &BTreeMap<FreqIndex, Complex64> {
        &self.coeffs
    }

    pub fn descriptor(&self) -> Option<&Descriptor2> {
        self.descriptor.as_ref()
    }

    pub fn l2_tail(&self) -> f64 {
        self.l2_tail
    }

    pub(crate) fn set_l2_tail(&mut self, tail: f64) {
        self.l2_tail = tail;
    }

    pub fn is_exact(&self) -> bool {
        self.l2_tail == 0.0
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.l2_tail == 0.0
    }

    pub fn l2_norm_stored(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn l1_norm_stored(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    /// Surrogate for the sup norm: stored l1 norm plus l1 tail when known.
    pub fn sup_norm_surrogate(&self) -> f64 {
        self.l1_norm_stored() + self.l1_tail().unwrap_or(0.0)
    }

    pub fn l1_tail(&self) -> Option<f64> {
        if self.l2_tail == 0.0 {
            return Some(0.0);
        }
        match &self.descriptor {
            Some(Descriptor2::Tensor(f1, f2)) => {
                let t1 = f1.l1_tail()?;
                let t2 = f2.l1_tail()?;
                let n1 = f1.l1_norm_stored();
                let n2 = f2.l1_norm_stored();
                Some((n1 + t1) * (n2 + t2) - n1 * n2)
            }
            _ => None,
        }
    }

    pub fn freq_bounds(&self) -> FreqBounds {
        let mut b = FreqBounds::empty();
        for m in self.coeffs.keys() {
            b.include(*m);
        }
        b
    }

    /// `conj(f)`: coefficient at `m` is the conjugate of the coefficient at
    /// `-m`.
    pub fn conjugate(&self) -> Self {
        let map: BTreeMap<FreqIndex, Complex64> =
            self.coeffs.iter().map(|(&m, c)| (-m, c.conj())).collect();
        let descriptor = match &self.descriptor {
            Some(Descriptor2::Tensor(f1, f2)) => Some(Descriptor2::Tensor(
                Box::new(f1.conjugate()),
                Box::new(f2.conjugate()),
            )),
            Some(Descriptor2::ExplicitList) => Some(Descriptor2::ExplicitList),
            Some(Descriptor2::Product) => Some(Descriptor2::Product),
            None => None,
        };
        Self {
            coeffs: map,
            descriptor,
            l2_tail: self.l2_tail,
        }
    }

    /// Restriction of the coefficient map to one sign-quadrant. The four
    /// parts partition the symbol.
    pub fn quadrant_part(&self, q: Quadrant) -> Self {
        let map: BTreeMap<FreqIndex, Complex64> = self
            .coeffs
            .iter()
            .filter(|(m, _)| q.contains(**m))
            .map(|(&m, &c)| (m, c))
            .collect();
        Self {
            coeffs: map,
            descriptor: None,
            l2_tail: self.l2_tail,
        }
    }

    /// True when no stored coefficient has a negative frequency on the given
    /// axis. Certified only when the symbol is exact.
    pub fn is_analytic_in(&self, axis: Axis) -> bool {
        self.coeffs.keys().all(|m| match axis {
            Axis::Z1 => m.m1 >= 0,
            Axis::Z2 => m.m2 >= 0,
        })
    }

    /// Coefficient-wise convolution restricted to the box
    /// `[-bandwidth, bandwidth]^2`.
    pub fn multiply(&self, other: &Symbol2, bandwidth: u32) -> Symbol2 {
        let bw = bandwidth as i32;
        let mut map: BTreeMap<FreqIndex, Complex64> = BTreeMap::new();
        let mut dropped_sq = 0.0f64;
        for (&mf, &cf) in &self.coeffs {
            for (&mg, &cg) in &other.coeffs {
                let m = mf + mg;
                let term = cf * cg;
                if m.m1.abs() <= bw && m.m2.abs() <= bw {
                    *map.entry(m).or_insert(Complex64::new(0.0, 0.0)) += term;
                } else {
                    dropped_sq += term.norm_sqr();
                }
            }
        }
        let tail = propagated_product_tail(
            self.l2_tail,
            self.l1_norm_stored(),
            self.l1_tail(),
            other.l2_tail,
            other.l1_norm_stored(),
            other.l1_tail(),
        ) + dropped_sq.sqrt();
        let mut s = Self::from_map(map);
        s.descriptor = Some(Descriptor2::Product);
        s.l2_tail = tail;
        s
    }

    /// Full product of two exact symbols.
    pub fn multiply_full(&self, other: &Symbol2) -> Symbol2 {
        let b1 = self.freq_bounds();
        let b2 = other.freq_bounds();
        let bw = (b1.abs_max() + b2.abs_max()) as u32;
        let mut p = self.multiply(other, bw);
        if self.is_exact() && other.is_exact() {
            p.l2_tail = 0.0;
        }
        p
    }

    /// Harmonic (bi-harmonic) extension at a point of the closed bidisc.
    /// Boundary coordinates are accepted only when the symbol's coefficient
    /// tail in that variable is certifiably absolutely summable.
    pub fn harmonic_extension(&self, z: &BidiscPoint) -> Result<Estimate> {
        z.check_in_closed_bidisc()?;
        if let Some(Descriptor2::Tensor(f1, f2)) = &self.descriptor {
            let e1 = f1.eval(z.z1).map_err(|e| tag_variable(e, 1))?;
            let e2 = f2.eval(z.z2).map_err(|e| tag_variable(e, 2))?;
            return Ok(product_estimate(e1, e2));
        }
        let c1 = coord_class(z.z1);
        let c2 = coord_class(z.z2);
        if self.l2_tail > 0.0 && (c1 == CoordClass::Boundary || c2 == CoordClass::Boundary) {
            let var = if c1 == CoordClass::Boundary { 1 } else { 2 };
            match self.l1_tail() {
                Some(t) => return Ok(Estimate { value: self.stored_sum(z), err: t }),
                None => return Err(Error::DivergenceRisk { variable: var }),
            }
        }
        let value = self.stored_sum(z);
        let err = if self.l2_tail == 0.0 {
            0.0
        } else {
            let g1 = geometric_weight(z.z1);
            let g2 = geometric_weight(z.z2);
            self.l2_tail * (g1 * g2).sqrt()
        };
        Ok(Estimate { value, err })
    }

    fn stored_sum(&self, z: &BidiscPoint) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&m, &c)| c * unit_power(z.z1, m.m1) * unit_power(z.z2, m.m2))
            .sum()
    }

    /// Term-wise Wirtinger derivative of the harmonic-extension series. The
    /// differentiated variable must be interior; the other variable obeys the
    /// boundary rule of [`Symbol2::harmonic_extension`].
    pub fn wirtinger(&self, z: &BidiscPoint, which: Wirtinger) -> Result<Estimate> {
        z.check_in_closed_bidisc()?;
        let axis = which.axis();
        if coord_class(z.coord(axis)) != CoordClass::Interior {
            return Err(Error::OutsideDomain {
                r1: z.z1.norm(),
                r2: z.z2.norm(),
            });
        }
        if let Some(Descriptor2::Tensor(f1, f2)) = &self.descriptor {
            let (ed, eo) = match axis {
                Axis::Z1 => (
                    f1.eval_deriv(z.z1, which.conjugated())
                        .map_err(|e| tag_variable(e, 1))?,
                    f2.eval(z.z2).map_err(|e| tag_variable(e, 2))?,
                ),
                Axis::Z2 => (
                    f2.eval_deriv(z.z2, which.conjugated())
                        .map_err(|e| tag_variable(e, 2))?,
                    f1.eval(z.z1).map_err(|e| tag_variable(e, 1))?,
                ),
            };
            return Ok(product_estimate(ed, eo));
        }
        let other = match axis {
            Axis::Z1 => z.z2,
            Axis::Z2 => z.z1,
        };
        if self.l2_tail > 0.0 && coord_class(other) == CoordClass::Boundary {
            let var = match axis {
                Axis::Z1 => 2,
                Axis::Z2 => 1,
            };
            return Err(Error::DivergenceRisk { variable: var });
        }
        let mut value = Complex64::new(0.0, 0.0);
        for (&m, &c) in &self.coeffs {
            let (md, zd, mo, zo) = match axis {
                Axis::Z1 => (m.m1, z.z1, m.m2, z.z2),
                Axis::Z2 => (m.m2, z.z2, m.m1, z.z1),
            };
            let dfac = if !which.conjugated() && md >= 1 {
                Complex64::new(md as f64, 0.0) * zd.powi(md - 1)
            } else if which.conjugated() && md <= -1 {
                Complex64::new(-md as f64, 0.0) * zd.conj().powi(-md - 1)
            } else {
                continue;
            };
            value += c * dfac * unit_power(zo, mo);
        }
        let err = if self.l2_tail == 0.0 {
            0.0
        } else {
            let rd2 = z.coord(axis).norm_sqr();
            let d = (1.0 + rd2) / (1.0 - rd2).powi(3);
            let g = geometric_weight(other);
            self.l2_tail * (d * g).sqrt()
        };
        Ok(Estimate { value, err })
    }

    /// Value at a point of the bitorus (finite sum of stored coefficients).
    pub fn eval_on_torus(&self, u1: Complex64, u2: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&m, &c)| c * unit_power(u1, m.m1) * unit_power(u2, m.m2))
            .sum()
    }

    /// One-variable slice at fixed `z1`-frequency `i`: the symbol
    /// `sum_j c_{(i, j)} z2^j`.
    pub fn slice_z1_freq(&self, i: i32) -> Symbol1 {
        let map: BTreeMap<i32, Complex64> = self
            .coeffs
            .range(FreqIndex::new(i, i32::MIN)..=FreqIndex::new(i, i32::MAX))
            .map(|(m, &c)| (m.m2, c))
            .collect();
        let mut s = Symbol1::from_map(map);
        s.l2_tail = self.l2_tail;
        if self.is_exact() {
            s.l2_tail = 0.0;
        }
        s
    }

    /// Attempts to recognize the symbol as a product `f1(z1) f2(z2)`. Uses
    /// the tensor descriptor when present, otherwise tries an outer-product
    /// factorization of the stored coefficients (exact up to 1e-13 relative).
    pub fn tensor_factors(&self) -> Option<(Symbol1, Symbol1)> {
        if let Some(Descriptor2::Tensor(f1, f2)) = &self.descriptor {
            return Some((*f1.clone(), *f2.clone()));
        }
        if self.l2_tail > 0.0 || self.coeffs.is_empty() {
            return None;
        }
        // Pivot on the largest stored coefficient.
        let (&pivot, &pc) = self
            .coeffs
            .iter()
            .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())?;
        let mut u: BTreeMap<i32, Complex64> = BTreeMap::new();
        let mut v: BTreeMap<i32, Complex64> = BTreeMap::new();
        for (&m, &c) in &self.coeffs {
            if m.m2 == pivot.m2 {
                u.insert(m.m1, c);
            }
            if m.m1 == pivot.m1 {
                v.insert(m.m2, c / pc);
            }
        }
        let scale = self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max);
        // Verify the outer product reproduces every entry and nothing more.
        let mut count = 0usize;
        for (&m1, &a) in &u {
            for (&m2, &b) in &v {
                let expect = a * b;
                let got = self.coeff(FreqIndex::new(m1, m2));
                if (expect - got).norm() > 1e-13 * scale.max(1.0) {
                    return None;
                }
                if got != Complex64::new(0.0, 0.0) {
                    count += 1;
                }
            }
        }
        if count != self.coeffs.len() {
            return None;
        }
        let f1 = Symbol1::from_map(u);
        let f2 = Symbol1::from_map(v);
        Some((f1, f2))
    }
}

fn tag_variable(e: Error, var: usize) -> Error {
    match e {
        Error::DivergenceRisk { .. } => Error::DivergenceRisk { variable: var },
        other => other,
    }
}

fn product_estimate(a: Estimate, b: Estimate) -> Estimate {
    Estimate {
        value: a.value * b.value,
        err: a.value.norm() * b.err + b.value.norm() * a.err + a.err * b.err,
    }
}

/// `sum_{k in Z} |z|^{2|k|}` for an interior coordinate, the Cauchy-Schwarz
/// weight of a full-lattice tail.
fn geometric_weight(z: Complex64) -> f64 {
    let r2 = z.norm_sqr();
    (1.0 + r2) / (1.0 - r2)
}

/// Bounding box of a stored frequency support.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreqBounds {
    pub min1: i32,
    pub max1: i32,
    pub min2: i32,
    pub max2: i32,
}

impl FreqBounds {
    pub fn empty() -> Self {
        Self {
            min1: 0,
            max1: 0,
            min2: 0,
            max2: 0,
        }
    }

    fn include(&mut self, m: FreqIndex) {
        self.min1 = self.min1.min(m.m1);
        self.max1 = self.max1.max(m.m1);
        self.min2 = self.min2.min(m.m2);
        self.max2 = self.max2.max(m.m2);
    }

    pub fn abs_max(&self) -> i32 {
        self.min1
            .abs()
            .max(self.max1.abs())
            .max(self.min2.abs())
            .max(self.max2.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fourier_coeff_of_constant_is_delta_at_origin() {
        let f = Symbol2::constant(c(1.0, 0.0));
        assert_eq!(f.coeff(FreqIndex::new(0, 0)), c(1.0, 0.0));
        assert_eq!(f.coeff(FreqIndex::new(1, 0)), c(0.0, 0.0));
        assert_eq!(f.coeff(FreqIndex::new(-2, 3)), c(0.0, 0.0));
    }

    #[test]
    fn fourier_coeff_of_monomial() {
        // z1 * conj(z2)
        let f = Symbol2::monomial(1, -1);
        assert_eq!(f.coeff(FreqIndex::new(1, -1)), c(1.0, 0.0));
        assert_eq!(f.coeff(FreqIndex::new(-1, 1)), c(0.0, 0.0));
    }

    #[test]
    fn multiply_z1_by_conj_z1_is_one() {
        let f = Symbol2::monomial(1, 0);
        let g = Symbol2::monomial(-1, 0);
        let p = f.multiply_full(&g);
        assert_eq!(p.coeffs().len(), 1);
        assert_eq!(p.coeff(FreqIndex::new(0, 0)), c(1.0, 0.0));
        assert!(p.is_exact());
    }

    #[test]
    fn multiply_binomial() {
        let f = Symbol2::trig_poly(&[((1, 0), c(1.0, 0.0)), ((0, 1), c(1.0, 0.0))]);
        let p = f.multiply_full(&f);
        assert_eq!(p.coeff(FreqIndex::new(2, 0)), c(1.0, 0.0));
        assert_eq!(p.coeff(FreqIndex::new(1, 1)), c(2.0, 0.0));
        assert_eq!(p.coeff(FreqIndex::new(0, 2)), c(1.0, 0.0));
        assert_eq!(p.coeffs().len(), 3);
    }

    #[test]
    fn conjugate_moves_coefficients() {
        let f = Symbol2::monomial(1, 0);
        let g = f.conjugate();
        assert_eq!(g.coeff(FreqIndex::new(-1, 0)), c(1.0, 0.0));
        assert_eq!(g.coeff(FreqIndex::new(1, 0)), c(0.0, 0.0));
    }

    #[test]
    fn conjugate_fixes_real_symbols() {
        // 2cos(t1) + 3 is real: coefficients {(-1,0):1, (0,0):3, (1,0):1}.
        let f = Symbol2::trig_poly(&[
            ((1, 0), c(1.0, 0.0)),
            ((-1, 0), c(1.0, 0.0)),
            ((0, 0), c(3.0, 0.0)),
        ]);
        assert_eq!(f.conjugate(), f);
    }

    #[test]
    fn conjugate_is_involution() {
        let f = Symbol2::trig_poly(&[
            ((1, -2), c(0.3, 1.7)),
            ((-1, 0), c(-2.0, 0.25)),
            ((0, 2), c(0.0, -1.0)),
        ]);
        assert_eq!(f.conjugate().conjugate(), f);
    }

    #[test]
    fn quadrant_of_single_monomial() {
        let f = Symbol2::monomial(1, -1);
        assert_eq!(f.quadrant_part(Quadrant::PM), {
            let mut g = f.clone();
            g.descriptor = None;
            g
        });
        assert!(f.quadrant_part(Quadrant::PP).coeffs().is_empty());
        assert!(f.quadrant_part(Quadrant::MP).coeffs().is_empty());
        assert!(f.quadrant_part(Quadrant::MM).coeffs().is_empty());
    }

    #[test]
    fn zero_frequency_is_nonnegative_side() {
        let f = Symbol2::constant(c(1.0, 0.0));
        assert_eq!(f.quadrant_part(Quadrant::PP).coeff(FreqIndex::new(0, 0)), c(1.0, 0.0));
        assert!(f.quadrant_part(Quadrant::PM).coeffs().is_empty());
    }

    #[test]
    fn quadrants_partition() {
        let f = Symbol2::trig_poly(&[
            ((2, 3), c(1.0, 2.0)),
            ((2, -3), c(-1.0, 0.5)),
            ((-2, 3), c(0.25, 0.0)),
            ((-2, -3), c(0.0, 1.0)),
            ((0, 0), c(5.0, 0.0)),
            ((0, -1), c(1.0, 1.0)),
            ((-1, 0), c(2.0, 2.0)),
        ]);
        let mut sum: BTreeMap<FreqIndex, Complex64> = BTreeMap::new();
        for q in Quadrant::ALL {
            for (&m, &v) in f.quadrant_part(q).coeffs() {
                *sum.entry(m).or_insert(c(0.0, 0.0)) += v;
            }
        }
        assert_eq!(&sum, f.coeffs());
    }

    #[test]
    fn harmonic_extension_constant_and_origin() {
        let f = Symbol2::constant(c(2.0, -1.0));
        let z = BidiscPoint::from_polar(0.7, 1.0, 0.3, -2.0);
        let e = f.harmonic_extension(&z).unwrap();
        assert_eq!(e.value, c(2.0, -1.0));
        assert_eq!(e.err, 0.0);

        let g = Symbol2::trig_poly(&[
            ((0, 0), c(0.5, 0.5)),
            ((1, 2), c(1.0, 0.0)),
            ((-3, 1), c(0.0, 1.0)),
        ]);
        let e0 = g.harmonic_extension(&BidiscPoint::origin()).unwrap();
        assert_eq!(e0.value, c(0.5, 0.5));
    }

    #[test]
    fn harmonic_extension_uses_conjugate_for_negative_frequencies() {
        // f = conj(z1): at z = (z1, z2) the extension is conj(z1).
        let f = Symbol2::monomial(-1, 0);
        let z = BidiscPoint::new(c(0.3, 0.4), c(0.1, 0.0));
        let e = f.harmonic_extension(&z).unwrap();
        assert_eq!(e.value, c(0.3, -0.4));
    }

    #[test]
    fn boundary_evaluation_rejected_for_arc_tails() {
        let arc = Symbol1::arc_indicator_with_bandwidth(0.0, 1.0, 32).unwrap();
        let f = Symbol2::tensor(&arc, &Symbol1::constant(c(1.0, 0.0)));
        let z = BidiscPoint::new(c(1.0, 0.0), c(0.0, 0.0));
        assert!(matches!(
            f.harmonic_extension(&z),
            Err(Error::DivergenceRisk { variable: 1 })
        ));
        // Tent tails are absolutely summable: boundary evaluation allowed.
        let tent = Symbol1::tent_with_bandwidth(0.0, 0.5, 32).unwrap();
        let g = Symbol2::tensor(&tent, &Symbol1::constant(c(1.0, 0.0)));
        let e = g.harmonic_extension(&z).unwrap();
        assert!(e.err > 0.0);
    }

    #[test]
    fn wirtinger_of_z1() {
        let f = Symbol2::monomial(1, 0);
        let z = BidiscPoint::new(c(0.2, 0.1), c(-0.3, 0.2));
        let d = f.wirtinger(&z, Wirtinger::DZ1).unwrap();
        assert_eq!(d.value, c(1.0, 0.0));
        let db = f.wirtinger(&z, Wirtinger::DZ1Bar).unwrap();
        assert_eq!(db.value, c(0.0, 0.0));
    }

    #[test]
    fn wirtinger_analytic_has_zero_conjugate_derivative() {
        let f = Symbol2::trig_poly(&[
            ((0, 1), c(1.0, 2.0)),
            ((2, 2), c(0.5, 0.0)),
            ((3, 0), c(0.0, -1.0)),
        ]);
        for (re, im) in [(0.1, 0.2), (-0.5, 0.3), (0.0, 0.6)] {
            let z = BidiscPoint::new(c(re, im), c(im, re));
            assert_eq!(f.wirtinger(&z, Wirtinger::DZ1Bar).unwrap().value, c(0.0, 0.0));
            assert_eq!(f.wirtinger(&z, Wirtinger::DZ2Bar).unwrap().value, c(0.0, 0.0));
        }
    }

    #[test]
    fn analyticity_flags() {
        let f = Symbol2::trig_poly(&[((1, 0), c(1.0, 0.0)), ((0, 2), c(1.0, 0.0))]);
        assert!(f.is_analytic_in(Axis::Z1));
        assert!(f.is_analytic_in(Axis::Z2));
        let g = Symbol2::monomial(-1, 1);
        assert!(!g.is_analytic_in(Axis::Z1));
        assert!(g.is_analytic_in(Axis::Z2));
        // Truncated arc indicators always keep a nonzero coefficient at -1.
        let arc = Symbol1::arc_indicator_with_bandwidth(0.0, PI / 2.0, 1).unwrap();
        assert!(arc.coeff(-1).norm() > 0.0);
        assert!(!arc.is_analytic());
    }

    #[test]
    fn tensor_basics() {
        let one = Symbol1::constant(c(1.0, 0.0));
        let t = Symbol2::tensor(&one, &one);
        assert_eq!(t.coeff(FreqIndex::new(0, 0)), c(1.0, 0.0));
        assert_eq!(t.coeffs().len(), 1);

        let zz = Symbol2::tensor(&Symbol1::z(), &Symbol1::conj_z());
        assert_eq!(zz.coeff(FreqIndex::new(1, -1)), c(1.0, 0.0));
        assert_eq!(zz.coeffs().len(), 1);
    }

    #[test]
    fn tensor_coherence_on_stored_entries() {
        let f1 = Symbol1::tent_with_bandwidth(0.3, 0.8, 12).unwrap();
        let f2 = Symbol1::arc_indicator_with_bandwidth(1.0, 2.5, 12).unwrap();
        let t = Symbol2::tensor(&f1, &f2);
        for (&m, &v) in t.coeffs() {
            let expect = f1.coeff(m.m1) * f2.coeff(m.m2);
            assert_abs_diff_eq!((expect - v).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn tent_zero_coefficient_is_area() {
        let w = PI / 4.0;
        let t = Symbol1::tent(0.0, w).unwrap();
        assert_abs_diff_eq!(t.coeff(0).re, w / (2.0 * PI), epsilon = 1e-15);
        assert_eq!(t.coeff(0).im, 0.0);
    }

    #[test]
    fn full_arc_is_constant_one() {
        let a = Symbol1::arc_indicator(0.0, 2.0 * PI).unwrap();
        assert_eq!(a.coeff(0), c(1.0, 0.0));
        assert_eq!(a.coeffs().len(), 1);
        assert!(a.is_exact());
    }

    #[test]
    fn trig_poly_single_term() {
        let s = Symbol1::trig_poly(&[(1, c(1.0, 0.0))]);
        assert_eq!(s.coeff(1), c(1.0, 0.0));
        assert_eq!(s.coeffs().len(), 1);
    }

    #[test]
    fn degenerate_builders_error() {
        assert!(Symbol1::arc_indicator(1.0, 1.0).is_err());
        assert!(Symbol1::arc_indicator(2.0, 1.0).is_err());
        assert!(Symbol1::arc_indicator(0.0, 7.0).is_err());
        assert!(Symbol1::tent(0.0, 0.0).is_err());
        assert!(Symbol1::tent(0.0, PI).is_err());
    }

    #[test]
    fn tent_tail_honesty() {
        // The l2 mass of coefficients between B and 4B must stay below the
        // stored tail bound at bandwidth B.
        for bw in [16u32, 64u32] {
            let coarse = Symbol1::tent_with_bandwidth(0.7, 0.9, bw).unwrap();
            let fine = Symbol1::tent_with_bandwidth(0.7, 0.9, 4 * bw).unwrap();
            let mut mass = 0.0;
            for (&m, &cv) in fine.coeffs() {
                if m.unsigned_abs() > bw {
                    mass += cv.norm_sqr();
                }
            }
            assert!(mass.sqrt() <= coarse.l2_tail());
        }
    }

    #[test]
    fn slice_extraction() {
        let f = Symbol2::trig_poly(&[
            ((-1, 0), c(1.0, 0.0)),
            ((-1, 2), c(0.0, 3.0)),
            ((2, 1), c(4.0, 0.0)),
        ]);
        let s = f.slice_z1_freq(-1);
        assert_eq!(s.coeff(0), c(1.0, 0.0));
        assert_eq!(s.coeff(2), c(0.0, 3.0));
        assert_eq!(s.coeffs().len(), 2);
        assert!(f.slice_z1_freq(5).is_zero());
    }

    #[test]
    fn tensor_factor_detection() {
        let f = Symbol2::monomial(1, 0);
        let (f1, f2) = f.tensor_factors().unwrap();
        assert_eq!(f1.coeff(1), c(1.0, 0.0));
        assert_eq!(f2.coeff(0), c(1.0, 0.0));

        let g = Symbol2::trig_poly(&[((1, 0), c(1.0, 0.0)), ((0, 1), c(1.0, 0.0))]);
        assert!(g.tensor_factors().is_none());

        let t = Symbol2::tensor(
            &Symbol1::trig_poly(&[(0, c(1.0, 0.0)), (2, c(0.5, 0.5))]),
            &Symbol1::trig_poly(&[(-1, c(2.0, 0.0)), (1, c(0.0, 1.0))]),
        );
        let (t1, t2) = t.tensor_factors().unwrap();
        let rebuilt = Symbol2::tensor(&t1, &t2);
        for (&m, &v) in t.coeffs() {
            assert_abs_diff_eq!((rebuilt.coeff(m) - v).norm(), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn largest_gap_of_disjoint_arcs() {
        let arcs = vec![
            CircleArc::new(-PI / 4.0, PI / 2.0),
            CircleArc::new(3.0 * PI / 4.0, PI / 2.0),
        ];
        let gap = largest_uncovered_gap(&arcs);
        assert_abs_diff_eq!(gap, PI / 2.0, epsilon = 1e-12);
        assert!(arcs[0].interiors_disjoint(&arcs[1]));
        let overlapping = CircleArc::new(0.0, PI);
        assert!(!arcs[0].interiors_disjoint(&overlapping));
    }
}
