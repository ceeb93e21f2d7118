//! Globally adaptive Gauss–Kronrod (7/15) quadrature on intervals, the real
//! line, the half line and the plane.
//!
//! Integrands may return `f64`, `Complex64` or a `Vec<Complex64>` of
//! components integrated together over shared subdivisions; the error
//! estimate of a vector is the largest componentwise estimate.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
// Float provides the f64 math methods in no_std builds.
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::{Error, Result};

/// Tolerances and domain cutoff for an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Half-width of the line window, length of the half-line window, or
    /// radius of the disc for the plane.
    pub truncation_radius: f64,
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize, truncation_radius: f64) -> Result<Self> {
        let spec = QuadratureSpec { abs_tol, rel_tol, max_subdivisions, truncation_radius };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Domain("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Domain("quadrature needs at least one subdivision"));
        }
        if !(self.truncation_radius > 0.0 && self.truncation_radius.is_finite()) {
            return Err(Error::Domain("truncation radius must be positive and finite"));
        }
        Ok(())
    }

    pub fn with_radius(self, truncation_radius: f64) -> Self {
        QuadratureSpec { truncation_radius, ..self }
    }

    pub fn with_abs_tol(self, abs_tol: f64) -> Self {
        QuadratureSpec { abs_tol, ..self }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { abs_tol: 1e-12, rel_tol: 1e-12, max_subdivisions: 2000, truncation_radius: 10.0 }
    }
}

/// Values that can be accumulated by the quadrature rules.
pub trait QuadValue: Clone {
    fn zero_like(&self) -> Self;
    fn add_scaled(&mut self, other: &Self, w: f64);
    /// Largest componentwise modulus.
    fn max_abs(&self) -> f64;
    /// Largest componentwise modulus of `self - other`.
    fn max_abs_diff(&self, other: &Self) -> f64;
    fn is_finite(&self) -> bool;
}

impl QuadValue for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn add_scaled(&mut self, other: &Self, w: f64) {
        *self += w * other;
    }
    fn max_abs(&self) -> f64 {
        self.abs()
    }
    fn max_abs_diff(&self, other: &Self) -> f64 {
        (self - other).abs()
    }
    fn is_finite(&self) -> bool {
        Float::is_finite(*self)
    }
}

impl QuadValue for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::zero()
    }
    fn add_scaled(&mut self, other: &Self, w: f64) {
        *self += other * w;
    }
    fn max_abs(&self) -> f64 {
        self.norm()
    }
    fn max_abs_diff(&self, other: &Self) -> f64 {
        (self - other).norm()
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl QuadValue for Vec<Complex64> {
    fn zero_like(&self) -> Self {
        vec![Complex64::zero(); self.len()]
    }
    fn add_scaled(&mut self, other: &Self, w: f64) {
        for (a, b) in self.iter_mut().zip(other) {
            *a += b * w;
        }
    }
    fn max_abs(&self) -> f64 {
        self.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
    fn max_abs_diff(&self, other: &Self) -> f64 {
        self.iter().zip(other).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
    fn is_finite(&self) -> bool {
        self.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

// Kronrod nodes (positive half, descending) and weights; Gauss weights
// belong to the odd-indexed Kronrod nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

struct Segment<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
}

fn gk15<V, F>(f: &F, a: f64, b: f64) -> Result<Segment<V>>
where
    V: QuadValue,
    F: Fn(f64) -> Result<V>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    if !fc.is_finite() {
        return Err(Error::NonFinite(center));
    }
    let mut kronrod = fc.zero_like();
    let mut gauss = fc.zero_like();
    kronrod.add_scaled(&fc, WGK[7]);
    gauss.add_scaled(&fc, WG[3]);
    for j in 0..7 {
        let dx = half * XGK[j];
        for x in [center - dx, center + dx] {
            let v = f(x)?;
            if !v.is_finite() {
                return Err(Error::NonFinite(x));
            }
            kronrod.add_scaled(&v, WGK[j]);
            if j % 2 == 1 {
                gauss.add_scaled(&v, WG[j / 2]);
            }
        }
    }
    let error = kronrod.max_abs_diff(&gauss) * half.abs();
    let mut value = kronrod.zero_like();
    value.add_scaled(&kronrod, half);
    Ok(Segment { a, b, value, error })
}

const INITIAL_PIECES: usize = 8;

/// Adaptive ∫_a^b f for an integrand that may itself fail.
///
/// The interval is cut into a few equal pieces, then the piece with the
/// largest error estimate is bisected until the summed estimate falls below
/// max(abs_tol, rel_tol·|result|). Only the subdivision budget and the
/// tolerances of `spec` are used.
pub fn try_integrate_interval<V, F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<V>
where
    V: QuadValue,
    F: Fn(f64) -> Result<V>,
{
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("integration limits must be finite"));
    }
    let pieces = INITIAL_PIECES.min(spec.max_subdivisions);
    let mut segs = Vec::with_capacity(spec.max_subdivisions + 1);
    for k in 0..pieces {
        let lo = a + (b - a) * k as f64 / pieces as f64;
        let hi = if k + 1 == pieces { b } else { a + (b - a) * (k + 1) as f64 / pieces as f64 };
        segs.push(gk15(&f, lo, hi)?);
    }
    loop {
        let mut total = segs[0].value.zero_like();
        let mut err = 0.0;
        let mut worst = 0;
        for (i, s) in segs.iter().enumerate() {
            total.add_scaled(&s.value, 1.0);
            err += s.error;
            if s.error > segs[worst].error {
                worst = i;
            }
        }
        let target = spec.abs_tol.max(spec.rel_tol * total.max_abs());
        if err <= target {
            return Ok(total);
        }
        if segs.len() >= spec.max_subdivisions {
            return Err(Error::Convergence { subdivisions: segs.len(), estimate: total.max_abs(), error: err });
        }
        let s = segs.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            return Err(Error::Convergence { subdivisions: segs.len(), estimate: total.max_abs(), error: err });
        }
        segs.push(gk15(&f, s.a, mid)?);
        segs.push(gk15(&f, mid, s.b)?);
        // swap_remove reorders; restore left-to-right order so the summation
        // order (and hence the result) depends only on the subdivision.
        segs.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(core::cmp::Ordering::Equal));
    }
}

/// Adaptive ∫_a^b f.
pub fn integrate_interval<V, F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<V>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    try_integrate_interval(|x| Ok(f(x)), a, b, spec)
}

/// ∫_ℝ f, truncated to [-R, R].
pub fn integrate_line<V, F>(f: F, spec: &QuadratureSpec) -> Result<V>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    let r = spec.truncation_radius;
    integrate_interval(f, -r, r, spec)
}

/// ∫_ℝ f, truncated to [c-R, c+R] around the bulk of the integrand.
pub fn integrate_line_centered<V, F>(f: F, center: f64, spec: &QuadratureSpec) -> Result<V>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    let r = spec.truncation_radius;
    integrate_interval(f, center - r, center + r, spec)
}

/// ∫_0^∞ f, truncated to [0, R].
///
/// Fails with [`Error::Singular`] when |f(x)|·x does not decay as x → 0,
/// i.e. when f blows up at least like 1/x.
pub fn integrate_halfline<V, F>(f: F, spec: &QuadratureSpec) -> Result<V>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    let probe = |x: f64| f(x).max_abs() * x;
    let (near, nearer) = (probe(1e-8), probe(1e-12));
    if !(near.is_finite() && nearer.is_finite()) || (near > 0.0 && nearer >= 0.5 * near) {
        return Err(Error::Singular);
    }
    integrate_interval(f, 0.0, spec.truncation_radius, spec)
}

/// ∫_ℂ f dx dy over the disc |z| <= R, in polar coordinates.
///
/// The angular integral is itself adaptive; its absolute tolerance is scaled
/// by R² so that the accumulated angular error stays below `abs_tol`.
pub fn integrate_plane<V, F>(f: F, spec: &QuadratureSpec) -> Result<V>
where
    V: QuadValue,
    F: Fn(Complex64) -> V,
{
    try_integrate_plane(|z| Ok(f(z)), spec)
}

/// [`integrate_plane`] for an integrand that may fail.
pub fn try_integrate_plane<V, F>(f: F, spec: &QuadratureSpec) -> Result<V>
where
    V: QuadValue,
    F: Fn(Complex64) -> Result<V>,
{
    spec.validate()?;
    let r = spec.truncation_radius;
    let inner = QuadratureSpec { abs_tol: spec.abs_tol / (r * r), ..*spec };
    try_integrate_interval(
        |rho| {
            let ring: V = try_integrate_interval(|theta| f(Complex64::from_polar(rho, theta)), 0.0, 2.0 * PI, &inner)?;
            let mut out = ring.zero_like();
            out.add_scaled(&ring, rho);
            Ok(out)
        },
        0.0,
        r,
        spec,
    )
}
