//! Tridiagonal (Jacobi) representations, their three-term recursion
//! polynomials, shift-operator factorizations H = A†A, and the generic
//! coherent-state superposition built on an orthonormal basis.
//!
//! Sections are Hermitian with entry (n, n+1) = b_n and entry (n+1, n) = b̄_n.
//! Because matrix elements are taken as ∫ φ_n · conj(H φ_m), the operator
//! itself acts as H φ_n = b̄_{n-1} φ_{n-1} + a_n φ_n + b_n φ_{n+1}, and an
//! energy eigenvector Σ p_n(E) φ_n obeys
//! E p_n = b_{n-1} p_{n-1} + a_n p_n + b̄_n p_{n+1}.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
// Float provides the f64 math methods in no_std builds.
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::quadrature::{integrate_interval, QuadratureSpec};
use crate::{Error, Result};

/// Diagonal `a` and complex couplings `b` of an operator in an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalRep {
    pub a: Vec<f64>,
    pub b: Vec<Complex64>,
}

impl TridiagonalRep {
    pub fn new(a: Vec<f64>, b: Vec<Complex64>) -> Self {
        TridiagonalRep { a, b }
    }

    /// Number of rows for which both the diagonal and the coupling to the
    /// previous row are known.
    pub fn len(&self) -> usize {
        self.a.len().min(self.b.len() + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix { dim, data: vec![Complex64::zero(); dim * dim] }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn conj_transpose(&self) -> Self {
        let mut t = DenseMatrix::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                t.set(j, i, self.get(i, j).conj());
            }
        }
        t
    }
}

/// N×N Hermitian section of a tridiagonal representation.
pub fn finite_section(rep: &TridiagonalRep, n: usize) -> Result<DenseMatrix> {
    if n == 0 || rep.len() < n {
        return Err(Error::Size { needed: n, available: rep.len() });
    }
    let mut m = DenseMatrix::zeros(n);
    for i in 0..n {
        m.set(i, i, Complex64::new(rep.a[i], 0.0));
        if i + 1 < n {
            m.set(i, i + 1, rep.b[i]);
            m.set(i + 1, i, rep.b[i].conj());
        }
    }
    Ok(m)
}

// Number of eigenvalues below x of the real symmetric tridiagonal matrix with
// diagonal a and off-diagonal moduli e (Sturm sequence).
fn sturm_count(a: &[f64], e2: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..a.len() {
        let off = if i == 0 { 0.0 } else { e2[i - 1] / q };
        q = a[i] - x - off;
        if q == 0.0 {
            q = f64::EPSILON * (a[i].abs() + x.abs() + 1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Eigenvalues (ascending) of the N×N section, by Sturm bisection.
///
/// A Hermitian tridiagonal matrix is unitarily similar to the real symmetric
/// one with off-diagonal |b_n|, so only the moduli matter.
pub fn section_eigenvalues(rep: &TridiagonalRep, n: usize) -> Result<Vec<f64>> {
    if n == 0 || rep.len() < n {
        return Err(Error::Size { needed: n, available: rep.len() });
    }
    let a = &rep.a[..n];
    let e2: Vec<f64> = rep.b[..n - 1].iter().map(|b| b.norm_sqr()).collect();
    // Gershgorin bounds
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { e2[i - 1].sqrt() } else { 0.0 } + if i + 1 < n { e2[i].sqrt() } else { 0.0 };
        lo = lo.min(a[i] - r);
        hi = hi.max(a[i] + r);
    }
    let span = (hi - lo).max(1.0);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let (mut l, mut h) = (lo - 1e-12 * span, hi + 1e-12 * span);
        while h - l > 4.0 * f64::EPSILON * (l.abs() + h.abs()) + f64::MIN_POSITIVE {
            let mid = 0.5 * (l + h);
            if mid <= l || mid >= h {
                break;
            }
            if sturm_count(a, &e2, mid) > k {
                h = mid;
            } else {
                l = mid;
            }
        }
        out.push(0.5 * (l + h));
    }
    Ok(out)
}

/// p_0(E), ..., p_{N-1}(E) from p_0 = 1, p_1 = (E - a_0)/b̄_0 and
/// b̄_n p_{n+1} = (E - a_n) p_n - b_{n-1} p_{n-1}.
pub fn recursion_polynomials(rep: &TridiagonalRep, e: f64, n: usize) -> Result<Vec<Complex64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if rep.a.len() < n - 1 || rep.b.len() < n - 1 {
        return Err(Error::Size { needed: n, available: rep.len() + 1 });
    }
    let mut p = Vec::with_capacity(n);
    p.push(Complex64::new(1.0, 0.0));
    for k in 0..n - 1 {
        let bk = rep.b[k];
        if bk.norm() == 0.0 {
            return Err(Error::DivisionByZero { index: k });
        }
        let prev = if k == 0 { Complex64::zero() } else { rep.b[k - 1] * p[k - 1] };
        let next = (p[k] * (e - rep.a[k]) - prev) / bk.conj();
        p.push(next);
    }
    Ok(p)
}

/// Factorization data of H = A†A: A φ_n = c_n φ_n + d_n φ_{n-1}.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftCoefficients {
    pub c: Vec<Complex64>,
    /// d[0] is always zero.
    pub d: Vec<Complex64>,
    /// False when only the moduli are known.
    pub phase_determined: bool,
}

impl ShiftCoefficients {
    /// a_n = |c_n|² + |d_n|², b_n = c_n d̄_{n+1}.
    pub fn to_tridiagonal(&self) -> TridiagonalRep {
        let na = self.c.len().min(self.d.len());
        let nb = self.c.len().min(self.d.len().saturating_sub(1));
        let a = (0..na).map(|n| self.c[n].norm_sqr() + self.d[n].norm_sqr()).collect();
        let b = (0..nb).map(|n| self.c[n] * self.d[n + 1].conj()).collect();
        TridiagonalRep { a, b }
    }
}

// Relative slack allowed when a squared modulus comes out slightly negative
// or slightly complex through rounding.
const MODULUS_SLACK: f64 = 1e-9;

fn checked_modulus_sq(v: Complex64, scale: f64, index: usize) -> Result<f64> {
    let slack = MODULUS_SLACK * (scale + v.norm() + 1.0);
    if v.re < -slack || v.im.abs() > slack {
        return Err(Error::Sign { index, value: v.re });
    }
    Ok(v.re.max(0.0))
}

/// Moduli |c_n|, |d_n| from the recursion polynomials at zero energy:
/// |c_n|² = -b̄_n p_{n+1}(0)/p_n(0) and |d_{n+1}|² = -b_n p_n(0)/p_{n+1}(0).
///
/// With L values of p(0) this yields c_0..c_{L-2} and d_0..d_{L-1}. The
/// phases are not determined and the result is flagged accordingly.
pub fn shift_from_polys(rep: &TridiagonalRep, p_at_zero: &[Complex64]) -> Result<ShiftCoefficients> {
    let l = p_at_zero.len();
    if l < 2 {
        return Err(Error::Size { needed: 2, available: l });
    }
    if rep.b.len() < l - 1 || rep.a.len() < l - 1 {
        return Err(Error::Size { needed: l - 1, available: rep.b.len().min(rep.a.len()) });
    }
    let mut c = Vec::with_capacity(l - 1);
    let mut d = vec![Complex64::zero()];
    for n in 0..l - 1 {
        let (p0, p1) = (p_at_zero[n], p_at_zero[n + 1]);
        if p0.norm() == 0.0 || p1.norm() == 0.0 {
            return Err(Error::DivisionByZero { index: n });
        }
        let scale = rep.a[n].abs();
        let c2 = checked_modulus_sq(-rep.b[n].conj() * p1 / p0, scale, n)?;
        let d2 = checked_modulus_sq(-rep.b[n] * p0 / p1, scale, n + 1)?;
        c.push(Complex64::new(c2.sqrt(), 0.0));
        d.push(Complex64::new(d2.sqrt(), 0.0));
    }
    Ok(ShiftCoefficients { c, d, phase_determined: false })
}

fn nearest_root(sq: Complex64, reference: Complex64) -> Complex64 {
    let r = sq.sqrt();
    if (-r - reference).norm() < (r - reference).norm() {
        -r
    } else {
        r
    }
}

/// Shift coefficients of a shape-invariant Hamiltonian from c_0, d_1 and the
/// spectrum ε_n (with ε_0 = 0):
/// c_n² = c_0² + n d_1² - ε_n, d_n² = n d_1² + n ε_1 - ε_n.
///
/// Square roots start on the principal branch and then follow the root
/// nearest to the previous term.
pub fn shape_invariant_shift<S>(c0: Complex64, d1: Complex64, spectrum: S, n_terms: usize) -> ShiftCoefficients
where
    S: Fn(usize) -> f64,
{
    let eps1 = spectrum(1);
    let d1sq = d1 * d1;
    let mut c = Vec::with_capacity(n_terms);
    let mut d = Vec::with_capacity(n_terms);
    for n in 0..n_terms {
        let nf = n as f64;
        if n == 0 {
            c.push(c0);
            d.push(Complex64::zero());
            continue;
        }
        let c2 = c0 * c0 + d1sq * nf - spectrum(n);
        let d2 = d1sq * nf + nf * eps1 - spectrum(n);
        c.push(nearest_root(c2, c[n - 1]));
        let dref = if n == 1 { d1 } else { d[n - 1] };
        d.push(nearest_root(d2, dref));
    }
    ShiftCoefficients { c, d, phase_determined: true }
}

/// ω_d = Σ |D_n|², the normalization weight of a discrete superposition.
pub fn discrete_weight(coeffs: &[Complex64]) -> f64 {
    coeffs.iter().map(|c| c.norm_sqr()).sum()
}

/// ω_c = ∫ |C_λ|² dλ over [λ_0, λ_0 + R].
pub fn continuous_weight<F>(coeff: F, lambda0: f64, qspec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> Complex64,
{
    integrate_interval(|l| coeff(l).norm_sqr(), lambda0, lambda0 + qspec.truncation_radius, qspec)
}

/// ω_d^{-1/2} Σ D_n φ_n for basis vectors given by their components
/// (coordinates or samples on a grid).
pub fn gcs_superpose_discrete(coeffs: &[Complex64], basis: &[Vec<Complex64>]) -> Result<Vec<Complex64>> {
    if basis.len() < coeffs.len() {
        return Err(Error::Size { needed: coeffs.len(), available: basis.len() });
    }
    let w = discrete_weight(coeffs);
    if w == 0.0 {
        return Err(Error::Degenerate("all superposition coefficients vanish"));
    }
    let len = basis.first().map_or(0, |b| b.len());
    let mut out = vec![Complex64::zero(); len];
    for (c, v) in coeffs.iter().zip(basis) {
        if v.len() != len {
            return Err(Error::Size { needed: len, available: v.len() });
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    let s = w.sqrt();
    out.iter_mut().for_each(|o| *o /= s);
    Ok(out)
}

/// Absolutely continuous part of a spectral measure, supported on [e_min, ∞).
pub struct Continuum<F> {
    pub e_min: f64,
    pub density: F,
}

/// Spectral measure of the recursion polynomials: point masses (E_μ, Ω_μ)
/// plus an optional continuous density.
pub struct SpectralData<F> {
    pub discrete: Vec<(f64, f64)>,
    pub continuum: Option<Continuum<F>>,
}

impl<F: Fn(f64) -> f64> SpectralData<F> {
    pub fn discrete_only(discrete: Vec<(f64, f64)>) -> Self {
        SpectralData { discrete, continuum: None }
    }
}

/// Σ_μ Ω_μ p_n(E_μ) p̄_m(E_μ) + ∫ Ω(E) p_n(E) p̄_m(E) dE, which should be δ_{nm}.
///
/// The continuum integral uses E = E_min + t² to absorb the square-root
/// threshold behaviour, with t running over [0, R].
pub fn closure_check<F, P>(
    spec: &SpectralData<F>,
    polys: P,
    n: usize,
    m: usize,
    qspec: &QuadratureSpec,
) -> Result<Complex64>
where
    F: Fn(f64) -> f64,
    P: Fn(usize, f64) -> Result<Complex64>,
{
    let mut sum = Complex64::zero();
    for &(e, w) in &spec.discrete {
        sum += polys(n, e)? * polys(m, e)?.conj() * w;
    }
    if let Some(cont) = &spec.continuum {
        let integral: Complex64 = crate::quadrature::try_integrate_interval(
            |t| {
                let e = cont.e_min + t * t;
                let w = (cont.density)(e);
                if w == 0.0 {
                    return Ok(Complex64::zero());
                }
                Ok(polys(n, e)? * polys(m, e)?.conj() * (w * 2.0 * t))
            },
            0.0,
            qspec.truncation_radius,
            qspec,
        )?;
        sum += integral;
    }
    Ok(sum)
}
