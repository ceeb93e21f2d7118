//! Harmonic oscillator H = -½ d²/dξ² + ½ω²ξ² - ½ω = A†A and its
//! generalized coherent states Φ_m^{z,ω}, the basis in which H is
//! tridiagonal with a_n = |z|² + nω and b_n = -z̄ sqrt((n+1)ω).
//!
//! Two families of Hermite functions appear. [`fock_state`] is the usual
//! number state h_n; [`eigenfunction_psi`] is ψ_n = (-1)^n h_n. The states
//! satisfy Φ_m^{0,ω} = ψ_m and Φ_m^{z,ω} = e^{-|z|²/2ω} Σ_s conj(C_s^{(m)}) h_s.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::jmatrix::{ShiftCoefficients, TridiagonalRep};
use crate::quadrature::{integrate_interval, try_integrate_plane, QuadratureSpec};
use crate::specfun::{hermite_normalized, laguerre, ln_factorial};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicParams {
    pub omega: f64,
}

impl HarmonicParams {
    pub fn new(omega: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::Domain("ω must be positive"));
        }
        Ok(HarmonicParams { omega })
    }

    /// Quadrature settings whose window (in ξ, around the Gaussian centre)
    /// covers Φ_m for every m <= m_max.
    pub fn quadrature(&self, m_max: usize, tol: f64) -> QuadratureSpec {
        let r = (10.0 + (2.0 * m_max as f64 + 1.0).sqrt()) / self.omega.sqrt();
        QuadratureSpec { abs_tol: tol, rel_tol: tol, max_subdivisions: 4000, truncation_radius: r }
    }
}

impl Default for HarmonicParams {
    fn default() -> Self {
        HarmonicParams { omega: 1.0 }
    }
}

/// Phase-space label z, level index m and frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GcsLabel {
    pub z: Complex64,
    pub m: usize,
    pub params: HarmonicParams,
}

impl GcsLabel {
    pub fn new(z: Complex64, m: usize, params: HarmonicParams) -> Self {
        GcsLabel { z, m, params }
    }

    pub fn with_m(self, m: usize) -> Self {
        GcsLabel { m, ..self }
    }

    /// Centre √2 Re z / ω of the Gaussian envelope.
    pub fn center(&self) -> f64 {
        SQRT_2 * self.z.re / self.params.omega
    }
}

fn parity(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Number states h_0..h_n at ξ: (ω/π)^{1/4} e^{-ωξ²/2} H_k(√ω ξ)/sqrt(2^k k!).
pub fn fock_states(n: usize, params: HarmonicParams, xi: f64) -> Vec<f64> {
    let w = params.omega;
    let u = w.sqrt() * xi;
    let g = (w / PI).powf(0.25) * (-0.5 * u * u).exp();
    let mut out = vec![0.0; n + 1];
    let (mut prev, mut cur) = (0.0, 1.0);
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = g * cur;
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * u * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    out
}

/// Number state h_n(ξ).
pub fn fock_state(n: usize, params: HarmonicParams, xi: f64) -> f64 {
    let u = params.omega.sqrt() * xi;
    (params.omega / PI).powf(0.25) * (-0.5 * u * u).exp() * hermite_normalized(n, u)
}

/// Eigenfunction ψ_n(ξ) = (-1)^n h_n(ξ), eigenvalue nω.
pub fn eigenfunction_psi(n: usize, params: HarmonicParams, xi: f64) -> f64 {
    parity(n) * fock_state(n, params, xi)
}

/// Φ_m and its first two ξ-derivatives, all from the closed form.
pub fn gcs_phi_jet(label: &GcsLabel, xi: f64) -> [Complex64; 3] {
    let w = label.params.omega;
    let z = label.z;
    let zc = z.conj();
    let m = label.m;
    let u = w.sqrt() * xi - (2.0 / w).sqrt() * z.re;
    // h̃_k(u) = H_k(u)/sqrt(2^k k!) for k = m, m-1, m-2
    let (mut hm2, mut hm1, mut h) = (0.0, 0.0, 1.0);
    for k in 0..m {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * u * h - (kf / (kf + 1.0)).sqrt() * hm1;
        hm2 = hm1;
        hm1 = h;
        h = next;
    }
    let mf = m as f64;
    let dh = (2.0 * mf).sqrt() * hm1;
    let d2h = if m >= 2 { (4.0 * mf * (mf - 1.0)).sqrt() * hm2 } else { 0.0 };
    let exponent = -z.norm_sqr() / (2.0 * w) - zc * zc / (2.0 * w) + zc * (SQRT_2 * xi) - 0.5 * w * xi * xi;
    let pg = exponent.exp() * ((w / PI).powf(0.25) * parity(m));
    let g = zc * SQRT_2 - w * xi;
    let sw = w.sqrt();
    let phi = pg * h;
    let d1 = pg * (g * h + sw * dh);
    let d2 = pg * ((g * g - w) * h + g * (2.0 * sw * dh) + w * d2h);
    [phi, d1, d2]
}

/// Φ_m^{z,ω}(ξ).
pub fn gcs_phi(label: &GcsLabel, xi: f64) -> Complex64 {
    gcs_phi_jet(label, xi)[0]
}

/// (H Φ_m)(ξ) from the analytic second derivative.
pub fn apply_hamiltonian(label: &GcsLabel, xi: f64) -> Complex64 {
    let w = label.params.omega;
    let [phi, _, d2] = gcs_phi_jet(label, xi);
    -d2 * 0.5 + phi * (0.5 * w * w * xi * xi - 0.5 * w)
}

/// (A Φ_m)(ξ) with A = -(1/√2) d/dξ - (ω/√2) ξ.
pub fn apply_lowering(label: &GcsLabel, xi: f64) -> Complex64 {
    let [phi, d1, _] = gcs_phi_jet(label, xi);
    -(d1 + phi * (label.params.omega * xi)) / SQRT_2
}

/// (A† Φ_m)(ξ) with A† = (1/√2) d/dξ - (ω/√2) ξ.
pub fn apply_raising(label: &GcsLabel, xi: f64) -> Complex64 {
    let [phi, d1, _] = gcs_phi_jet(label, xi);
    (d1 - phi * (label.params.omega * xi)) / SQRT_2
}

/// Right side of dΦ_m/dξ = (√2 z̄ - ωξ) Φ_m - sqrt(2mω) Φ_{m-1}.
pub fn derivative_identity_rhs(label: &GcsLabel, xi: f64) -> Complex64 {
    let w = label.params.omega;
    let g = label.z.conj() * SQRT_2 - w * xi;
    let lower = if label.m == 0 {
        Complex64::zero()
    } else {
        gcs_phi(&label.with_m(label.m - 1), xi) * (2.0 * label.m as f64 * w).sqrt()
    };
    g * gcs_phi(label, xi) - lower
}

/// Expansion coefficient C_s^{(m,ω)}(z, z̄) in closed form:
/// (-1)^{m∧s} sqrt((m∧s)!/(m∨s)!) (|z|²/ω)^{|m-s|/2} e^{i(s-m)θ} L_{m∧s}^{|m-s|}(|z|²/ω).
///
/// At z = 0 this reduces to (-1)^m δ_{ms}.
pub fn expansion_coefficient(label: &GcsLabel, s: usize) -> Complex64 {
    let m = label.m;
    let (lo, hi) = (m.min(s), m.max(s));
    let diff = hi - lo;
    let a = label.z.norm_sqr() / label.params.omega;
    if a == 0.0 {
        return if diff == 0 { Complex64::new(parity(m), 0.0) } else { Complex64::zero() };
    }
    let mag = (0.5 * (ln_factorial(lo) - ln_factorial(hi)) + 0.5 * diff as f64 * a.ln()).exp();
    let theta = label.z.arg();
    let phase = Complex64::from_polar(1.0, (s as f64 - m as f64) * theta);
    phase * (parity(lo) * mag * laguerre(lo, diff as f64, a))
}

/// C_s^{(m,ω)} through the recursion polynomials of the tridiagonal form,
/// (z/√ω)^s p_m(sω)/sqrt(s!); z must be nonzero.
pub fn expansion_coefficient_from_recursion(label: &GcsLabel, s: usize) -> Result<Complex64> {
    if label.z == Complex64::zero() {
        return Err(Error::Degenerate("recursion route needs z ≠ 0"));
    }
    let w = label.params.omega;
    let rep = harmonic_rep(label.z, label.params, label.m + 1);
    let p = crate::jmatrix::recursion_polynomials(&rep, s as f64 * w, label.m + 1)?;
    let zs = (label.z / w.sqrt()).powu(s as u32) * (-0.5 * ln_factorial(s)).exp();
    Ok(zs * p[label.m])
}

/// Closed form of the recursion polynomial at ε_s = sω:
/// p_n(sω) = (-1)^n sqrt(n!) ω^{n/2} z^{-n} L_n^{(s-n)}(|z|²/ω).
pub fn recursion_poly_closed_form(n: usize, s: usize, z: Complex64, params: HarmonicParams) -> Complex64 {
    let w = params.omega;
    let a = z.norm_sqr() / w;
    let scale = (0.5 * ln_factorial(n) + 0.5 * n as f64 * w.ln()).exp() * parity(n);
    z.powi(-(n as i32)) * (scale * laguerre(n, s as f64 - n as f64, a))
}

/// a_n = |z|² + nω, b_n = -z̄ sqrt((n+1)ω) for n < len.
pub fn harmonic_rep(z: Complex64, params: HarmonicParams, len: usize) -> TridiagonalRep {
    let w = params.omega;
    let a = (0..len).map(|n| z.norm_sqr() + n as f64 * w).collect();
    let b = (0..len).map(|n| -z.conj() * ((n + 1) as f64 * w).sqrt()).collect();
    TridiagonalRep::new(a, b)
}

/// c_n = -z̄, d_n = sqrt(nω) for n < len.
pub fn harmonic_shift(z: Complex64, params: HarmonicParams, len: usize) -> ShiftCoefficients {
    let c = vec![-z.conj(); len];
    let d = (0..len).map(|n| Complex64::new((n as f64 * params.omega).sqrt(), 0.0)).collect();
    ShiftCoefficients { c, d, phase_determined: true }
}

fn integrate_xi<F>(f: F, center: f64, qspec: &QuadratureSpec) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let r = qspec.truncation_radius;
    integrate_interval(f, center - r, center + r, qspec)
}

/// ⟨Φ_n, Φ_m⟩ = ∫ Φ_n conj(Φ_m) dξ.
pub fn overlap(n: usize, m: usize, z: Complex64, params: HarmonicParams, qspec: &QuadratureSpec) -> Result<Complex64> {
    let ln = GcsLabel::new(z, n, params);
    let lm = ln.with_m(m);
    integrate_xi(|x| gcs_phi(&ln, x) * gcs_phi(&lm, x).conj(), ln.center(), qspec)
}

/// Matrix element ∫ Φ_n conj(H Φ_m) dξ, with H applied analytically.
///
/// The expected band structure is a_n on the diagonal, b_n = -z̄ sqrt((n+1)ω)
/// at (n, n+1) and b̄_{n-1} = -z sqrt(nω) at (n, n-1).
pub fn matrix_element_quadrature(
    n: usize,
    m: usize,
    z: Complex64,
    params: HarmonicParams,
    qspec: &QuadratureSpec,
) -> Result<Complex64> {
    let ln = GcsLabel::new(z, n, params);
    let lm = ln.with_m(m);
    integrate_xi(|x| gcs_phi(&ln, x) * apply_hamiltonian(&lm, x).conj(), ln.center(), qspec)
}

/// Exact matrix element from the tridiagonal coefficients.
pub fn matrix_element_exact(n: usize, m: usize, z: Complex64, params: HarmonicParams) -> Complex64 {
    let w = params.omega;
    if n == m {
        Complex64::new(z.norm_sqr() + n as f64 * w, 0.0)
    } else if m == n + 1 {
        -z.conj() * (m as f64 * w).sqrt()
    } else if n == m + 1 {
        -z * (n as f64 * w).sqrt()
    } else {
        Complex64::zero()
    }
}

/// L² norms of AΦ_m - (-z̄Φ_m + sqrt(mω)Φ_{m-1}) and
/// A†Φ_m - (-zΦ_m + sqrt((m+1)ω)Φ_{m+1}).
pub fn ladder_residuals(label: &GcsLabel, qspec: &QuadratureSpec) -> Result<(f64, f64)> {
    let w = label.params.omega;
    let m = label.m;
    let up = label.with_m(m + 1);
    let lower = |x: f64| {
        let prev = if m == 0 { Complex64::zero() } else { gcs_phi(&label.with_m(m - 1), x) };
        apply_lowering(label, x) - (-label.z.conj() * gcs_phi(label, x) + prev * (m as f64 * w).sqrt())
    };
    let raise = |x: f64| {
        apply_raising(label, x) - (-label.z * gcs_phi(label, x) + gcs_phi(&up, x) * ((m + 1) as f64 * w).sqrt())
    };
    let r = qspec.truncation_radius;
    let c = label.center();
    let n1: f64 = integrate_interval(|x| lower(x).norm_sqr(), c - r, c + r, qspec)?;
    let n2: f64 = integrate_interval(|x| raise(x).norm_sqr(), c - r, c + r, qspec)?;
    Ok((n1.max(0.0).sqrt(), n2.max(0.0).sqrt()))
}

/// ⟨Φ_m|A†A|Φ_m⟩ = ‖AΦ_m‖².
pub fn factorized_energy(label: &GcsLabel, qspec: &QuadratureSpec) -> Result<f64> {
    let r = qspec.truncation_radius;
    let c = label.center();
    integrate_interval(|x| apply_lowering(label, x).norm_sqr(), c - r, c + r, qspec)
}

/// Mean and second moment of H in Φ_0 plus the ratio variance/mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceCheck {
    pub mean: f64,
    pub second_moment: f64,
    pub variance_over_mean: f64,
}

/// ⟨H⟩ = ⟨Φ_0|HΦ_0⟩ and ⟨H²⟩ = ‖HΦ_0‖² in the state Φ_0.
pub fn variance_check(label: &GcsLabel, qspec: &QuadratureSpec) -> Result<VarianceCheck> {
    if label.m != 0 {
        return Err(Error::Domain("variance check is defined for m = 0"));
    }
    let r = qspec.truncation_radius;
    let c = label.center();
    let mean: Complex64 =
        integrate_interval(|x| gcs_phi(label, x).conj() * apply_hamiltonian(label, x), c - r, c + r, qspec)?;
    let second: f64 = integrate_interval(|x| apply_hamiltonian(label, x).norm_sqr(), c - r, c + r, qspec)?;
    if mean.re.abs() < 1e-300 {
        return Err(Error::Degenerate("⟨H⟩ vanishes (z = 0)"));
    }
    Ok(VarianceCheck {
        mean: mean.re,
        second_moment: second,
        variance_over_mean: (second - mean.re * mean.re) / mean.re,
    })
}

/// Canonical coherent state (ω = 1):
/// π^{-1/4} e^{-|z|²/2} exp(-z̄²/2 + √2 z̄ ξ - ξ²/2).
pub fn canonical_cs(z: Complex64, xi: f64) -> Complex64 {
    let zc = z.conj();
    let e = -z.norm_sqr() / 2.0 - zc * zc / 2.0 + zc * (SQRT_2 * xi) - xi * xi / 2.0;
    e.exp() * PI.powf(-0.25)
}

/// Bargmann transform ∫ π^{-1/4} exp(-z²/2 + √2 z ξ - ξ²/2) φ(ξ) dξ.
///
/// The kernel is analytic in z, so number states map to z^n/sqrt(n!).
pub fn bargmann_transform<F>(phi: F, z: Complex64, qspec: &QuadratureSpec) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let c = SQRT_2 * z.re;
    let k = |xi: f64| (-z * z / 2.0 + z * (SQRT_2 * xi) - xi * xi / 2.0).exp() * PI.powf(-0.25);
    integrate_xi(|x| k(x) * phi(x), c, qspec)
}

/// Landau-level reproducing kernel at ω = 1 for level m.
///
/// Returns the partial sum Σ_{s<N} C_s(z) conj(C_s(w)) / π, built on the
/// functions C_s/√π that are orthonormal in L²(ℂ, e^{-|z|²} dν), and the
/// closed form π^{-1} e^{z w̄} L_m(|z - w|²).
pub fn landau_kernel(z: Complex64, w: Complex64, m: usize, n_terms: usize) -> (Complex64, Complex64) {
    let p = HarmonicParams { omega: 1.0 };
    let lz = GcsLabel::new(z, m, p);
    let lw = GcsLabel::new(w, m, p);
    let mut sum = Complex64::zero();
    for s in 0..n_terms {
        sum += expansion_coefficient(&lz, s) * expansion_coefficient(&lw, s).conj();
    }
    let closed = (z * w.conj()).exp() * laguerre(m, 0.0, (z - w).norm_sqr()) / PI;
    (sum / PI, closed)
}

/// Perelomov state T_ω(x, ωy) ψ_m evaluated at ξ:
/// exp(i(xy/ω - √2 y ξ)) ψ_m(ξ - √2 x/ω).
pub fn perelomov_cs(x: f64, y: f64, m: usize, params: HarmonicParams, xi: f64) -> Complex64 {
    let w = params.omega;
    let phase = Complex64::from_polar(1.0, x * y / w - SQRT_2 * y * xi);
    phase * eigenfunction_psi(m, params, xi - SQRT_2 * x / w)
}

/// Gram matrix (1/(πω)) ∬ ⟨ψ_i|z;m⟩⟨z;m|ψ_j⟩ dx dy for i, j in `indices`,
/// which the resolution of the identity makes equal to δ_{ij}.
///
/// The inner products are themselves computed by quadrature against the
/// Perelomov states, so this does not rely on the expansion coefficients.
pub fn identity_resolution(
    indices: &[usize],
    m: usize,
    params: HarmonicParams,
    qspec: &QuadratureSpec,
) -> Result<Vec<Vec<Complex64>>> {
    let k = indices.len();
    let top = indices.iter().copied().max().unwrap_or(0).max(m);
    let inner = params.quadrature(top, 1e-11);
    let r = inner.truncation_radius;
    let flat: Vec<Complex64> = try_integrate_plane(
        |z: Complex64| {
            let overlaps: Vec<Complex64> = integrate_interval(
                |xi| {
                    let p = perelomov_cs(z.re, z.im, m, params, xi);
                    indices.iter().map(|&i| p * eigenfunction_psi(i, params, xi)).collect::<Vec<_>>()
                },
                -r,
                r,
                &inner,
            )?;
            let mut out = Vec::with_capacity(k * k);
            for a in 0..k {
                for b in 0..k {
                    out.push(overlaps[a] * overlaps[b].conj());
                }
            }
            Ok(out)
        },
        qspec,
    )?;
    let scale = 1.0 / (PI * params.omega);
    Ok((0..k).map(|a| (0..k).map(|b| flat[a * k + b] * scale).collect()).collect())
}

/// Single entry of [`identity_resolution`].
pub fn identity_resolution_entry(
    i: usize,
    j: usize,
    m: usize,
    params: HarmonicParams,
    qspec: &QuadratureSpec,
) -> Result<Complex64> {
    let g = identity_resolution(&[i, j], m, params, qspec)?;
    Ok(g[0][1])
}

/// Largest gap over `grid` between the number-state series
/// Σ_{s<S} (z̄/√ω)^s/sqrt(s!) L_m^{(s-m)}(|z|²/ω) h_s(ξ)
/// and its closed form
/// (ω/π)^{1/4} e^{ωξ²/2} z̄^m (2ω)^{-m/2}/m! exp((i z̄/√(2ω) - i√ω ξ)²) H_m(√ω ξ - √(2/ω) Re z).
pub fn number_state_series_gap(label: &GcsLabel, grid: &[f64], terms: usize) -> f64 {
    let w = label.params.omega;
    let m = label.m;
    let zc = label.z.conj();
    let a = label.z.norm_sqr() / w;
    let mut worst: f64 = 0.0;
    for &xi in grid {
        let h = fock_states(terms, label.params, xi);
        let mut series = Complex64::zero();
        let mut zs = Complex64::new(1.0, 0.0); // (z̄/√ω)^s / sqrt(s!)
        for (s, hs) in h.iter().take(terms).enumerate() {
            series += zs * (laguerre(m, s as f64 - m as f64, a) * hs);
            zs *= zc / (w * (s + 1) as f64).sqrt();
        }
        let u = w.sqrt() * xi - (2.0 / w).sqrt() * label.z.re;
        let i = Complex64::i();
        let sq = i * zc / (2.0 * w).sqrt() - i * (w.sqrt() * xi);
        let log_pref = 0.5 * w * xi * xi - ln_factorial(m) - 0.5 * m as f64 * (2.0 * w).ln();
        let closed =
            (sq * sq + log_pref).exp() * zc.powu(m as u32) * ((w / PI).powf(0.25) * crate::specfun::hermite(m, u));
        worst = worst.max((series - closed).norm());
    }
    worst
}
