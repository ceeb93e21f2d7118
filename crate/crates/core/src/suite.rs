//! Registry of numerical checks for the harmonic and Morse constructions.
//!
//! Every check compares a computed value with its target and passes when
//! the absolute error is at most the tolerance. Checks are grouped; each
//! group is independent of the others so callers may run groups in
//! parallel and keep registry order in the output. Numerical failures
//! (quadrature, poles, domain errors) become failed entries carrying the
//! error text rather than aborting the run.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::harmonic::{self, GcsLabel, HarmonicParams};
use crate::jmatrix::{finite_section, recursion_polynomials, shift_from_polys};
use crate::morse::{self, MorseGcsLabel, MorseParams};
use crate::quadrature::QuadratureSpec;
use crate::specfun;
use crate::{Error, Result};

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub id: String,
    /// Short description of the identity being tested.
    pub identity: String,
    pub target: Complex64,
    pub computed: Complex64,
    pub abs_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Error text when the check could not be evaluated.
    pub failure: Option<String>,
}

impl Check {
    pub fn compare(id: &str, identity: &str, target: Complex64, computed: Complex64, tolerance: f64) -> Self {
        let abs_error = (computed - target).norm();
        Check {
            id: id.to_string(),
            identity: identity.to_string(),
            target,
            computed,
            abs_error,
            tolerance,
            passed: abs_error <= tolerance,
            failure: None,
        }
    }

    fn from_worst(id: &str, identity: &str, worst: Worst, tolerance: f64) -> Self {
        Check::compare_err(id, identity, worst.target, worst.computed, worst.err, tolerance)
    }

    /// Comparison with a caller-supplied (for example relative) error.
    pub fn compare_err(
        id: &str,
        identity: &str,
        target: Complex64,
        computed: Complex64,
        err: f64,
        tolerance: f64,
    ) -> Self {
        Check {
            id: id.to_string(),
            identity: identity.to_string(),
            target,
            computed,
            abs_error: err,
            tolerance,
            passed: err <= tolerance,
            failure: None,
        }
    }

    pub fn errored(id: &str, identity: &str, tolerance: f64, e: &Error) -> Self {
        Check {
            id: id.to_string(),
            identity: identity.to_string(),
            target: Complex64::zero(),
            computed: Complex64::new(f64::NAN, f64::NAN),
            abs_error: f64::INFINITY,
            tolerance,
            passed: false,
            failure: Some(e.to_string()),
        }
    }
}

/// Largest error seen so far together with the entry that produced it.
#[derive(Debug, Clone, Copy)]
struct Worst {
    target: Complex64,
    computed: Complex64,
    err: f64,
}

impl Worst {
    fn new() -> Self {
        Worst { target: Complex64::zero(), computed: Complex64::zero(), err: 0.0 }
    }

    fn push(&mut self, target: Complex64, computed: Complex64) {
        self.push_err(target, computed, (computed - target).norm());
    }

    fn push_err(&mut self, target: Complex64, computed: Complex64, err: f64) {
        // NaN must win so that it is reported
        if err.is_nan() || err > self.err {
            self.target = target;
            self.computed = computed;
            self.err = if err.is_nan() { f64::INFINITY } else { err };
        }
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn delta(n: usize, m: usize) -> Complex64 {
    real(if n == m { 1.0 } else { 0.0 })
}

/// Runs `f`, turning an error into a single failed entry.
fn guarded<F>(id: &str, identity: &str, tolerance: f64, f: F) -> Vec<Check>
where
    F: FnOnce() -> Result<Vec<Check>>,
{
    f().unwrap_or_else(|e| vec![Check::errored(id, identity, tolerance, &e)])
}

macro_rules! named_table {
    ($(#[$meta:meta])* $name:ident : $ty:ty { $($field:ident = $default:expr),* $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq)]
        pub struct $name {
            $(pub $field: $ty,)*
        }

        impl Default for $name {
            fn default() -> Self {
                $name { $($field: $default,)* }
            }
        }

        impl $name {
            pub const NAMES: &'static [&'static str] = &[$(stringify!($field)),*];

            pub fn get(&self, name: &str) -> Option<$ty> {
                match name {
                    $(stringify!($field) => Some(self.$field),)*
                    _ => None,
                }
            }

            /// Sets a named entry; returns false for an unknown name.
            pub fn set(&mut self, name: &str, value: $ty) -> bool {
                match name {
                    $(stringify!($field) => { self.$field = value; true })*
                    _ => false,
                }
            }
        }
    };
}

named_table!(
    /// Named tolerances of every check.
    Tolerances: f64 {
        harmonic_tridiagonal = 1e-8,
        harmonic_orthonormality = 1e-9,
        expansion_rows = 1e-10,
        basis_rows = 1e-8,
        basis_columns = 1e-6,
        number_series = 1e-8,
        ladder = 1e-9,
        energy = 1e-8,
        derivative_identity = 1e-9,
        charlier_connection = 1e-9,
        shift_round_trip = 1e-10,
        identity_resolution = 1e-4,
        identity_quadrature = 1e-5,
        landau = 1e-8,
        glauber_residual = 1e-7,
        glauber_norm = 1e-8,
        glauber_lambda = 1e-7,
        glauber_series = 1e-6,
        morse_orthonormality = 1e-8,
        morse_bands = 1e-6,
        morse_d1 = 1e-8,
        spectral_closure = 1e-6,
        spectral_decay = 1e-8,
        limit_distance = 0.05,
        limit_phase = 0.1,
        specfun = 1e-10,
        log_gamma = 1e-12,
        quadrature = 1e-12,
    }
);

named_table!(
    /// Named series truncations and index ranges.
    Truncations: usize {
        expansion_terms = 200,
        basis_rows = 40,
        basis_columns = 10,
        number_series_terms = 150,
        number_series_m = 5,
        expansion_m = 6,
        kernel_terms = 300,
        kernel_m = 4,
        identity_index = 3,
        glauber_terms = 400,
        closure_index = 4,
        limit_m = 3,
    }
);

/// Parameters of the harmonic suite.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSettings {
    pub z: Complex64,
    pub omega: f64,
    /// Largest state index in the matrix-element and ladder checks.
    pub m_max: usize,
    pub tol: Tolerances,
    pub trunc: Truncations,
}

impl Default for HarmonicSettings {
    fn default() -> Self {
        HarmonicSettings {
            z: Complex64::new(0.7, 0.3),
            omega: 1.0,
            m_max: 8,
            tol: Tolerances::default(),
            trunc: Truncations::default(),
        }
    }
}

impl HarmonicSettings {
    pub fn params(&self) -> Result<HarmonicParams> {
        HarmonicParams::new(self.omega)
    }

    fn qspec(&self, m_max: usize) -> Result<QuadratureSpec> {
        Ok(self.params()?.quadrature(m_max, self.tol.quadrature))
    }
}

/// Parameters of the Morse suite, including the harmonic-limit study.
#[derive(Debug, Clone, PartialEq)]
pub struct MorseSettings {
    pub z: Complex64,
    pub v0: f64,
    pub beta: f64,
    /// Free parameter of the g basis; Re ξ_z when absent.
    pub gamma: Option<f64>,
    pub m_max: usize,
    pub limit_z: Complex64,
    pub limit_omega: f64,
    pub beta_path: Vec<f64>,
    pub tol: Tolerances,
    pub trunc: Truncations,
}

impl Default for MorseSettings {
    fn default() -> Self {
        let beta: f64 = 0.5;
        let d: f64 = 7.75;
        MorseSettings {
            z: Complex64::new(0.4, 0.2),
            v0: beta * beta * (2.0 * d + 1.0).powi(2) / 8.0,
            beta,
            gamma: None,
            m_max: 6,
            limit_z: Complex64::new(0.3, 0.0),
            limit_omega: 1.0,
            beta_path: vec![0.5, 0.25, 0.125, 0.0625],
            tol: Tolerances::default(),
            trunc: Truncations::default(),
        }
    }
}

impl MorseSettings {
    pub fn params(&self) -> Result<MorseParams> {
        morse::make_params(self.v0, self.beta)
    }

    pub fn label(&self) -> Result<MorseGcsLabel> {
        MorseGcsLabel::new(self.z, self.params()?)
    }

    pub fn gamma(&self) -> Result<f64> {
        Ok(self.gamma.unwrap_or(self.label()?.default_gamma()))
    }

    fn qspec(&self) -> QuadratureSpec {
        morse::morse_quadrature(self.tol.quadrature)
    }
}

/// A named group of checks.
pub struct Group<S> {
    pub name: &'static str,
    pub run: fn(&S) -> Vec<Check>,
}

/// Harmonic groups in report order.
pub fn harmonic_groups() -> Vec<Group<HarmonicSettings>> {
    vec![
        Group { name: "harmonic tridiagonality", run: harmonic_tridiagonality },
        Group { name: "expansion closure", run: expansion_closure },
        Group { name: "number-state series", run: number_state_series },
        Group { name: "ladder actions and energy moments", run: ladder_and_energy },
        Group { name: "resolution of the identity", run: identity_resolution },
        Group { name: "Landau kernel", run: landau_kernel },
        Group { name: "harmonic invariants", run: harmonic_invariants },
        Group { name: "special functions", run: |s: &HarmonicSettings| special_functions(&s.tol) },
    ]
}

/// Morse groups in report order.
pub fn morse_groups() -> Vec<Group<MorseSettings>> {
    vec![
        Group { name: "Glauber states", run: glauber_states },
        Group { name: "Morse basis", run: morse_basis },
        Group { name: "spectral closure", run: spectral_closure },
        Group { name: "harmonic limit", run: harmonic_limit },
        Group { name: "special functions", run: |s: &MorseSettings| special_functions(&s.tol) },
    ]
}

/// Runs every group sequentially.
pub fn run_all<S>(groups: &[Group<S>], settings: &S) -> Vec<Check> {
    groups.iter().flat_map(|g| (g.run)(settings)).collect()
}

// ---------------------------------------------------------------- harmonic

/// ⟨Φ_n|H|Φ_m⟩ by quadrature against the bands a_n = |z|² + nω and
/// b_n = -z̄ sqrt((n+1)ω), and vanishing entries off the bands.
pub fn harmonic_tridiagonality(s: &HarmonicSettings) -> Vec<Check> {
    let tol = s.tol.harmonic_tridiagonal;
    let identity = "⟨Φ_n|H|Φ_m⟩ is tridiagonal with a_n = |z|²+nω, b_n = -z̄√((n+1)ω)";
    guarded("harmonic.tridiagonal", identity, tol, || {
        let p = s.params()?;
        let q = s.qspec(s.m_max)?;
        let mut band = Worst::new();
        let mut off = Worst::new();
        for n in 0..=s.m_max {
            for m in 0..=s.m_max {
                let v = harmonic::matrix_element_quadrature(n, m, s.z, p, &q)?;
                let want = harmonic::matrix_element_exact(n, m, s.z, p);
                if n.abs_diff(m) <= 1 {
                    band.push(want, v);
                } else {
                    off.push(want, v);
                }
            }
        }
        Ok(vec![
            Check::from_worst("harmonic.tridiagonal.bands", identity, band, tol),
            Check::from_worst("harmonic.tridiagonal.off_band", "⟨Φ_n|H|Φ_m⟩ = 0 for |n-m| >= 2", off, tol),
        ])
    })
}

fn expansion_rows_at(z: Complex64, p: HarmonicParams, m_max: usize, terms: usize) -> Worst {
    let pref = (-z.norm_sqr() / p.omega).exp();
    let rows: Vec<Vec<Complex64>> = (0..=m_max)
        .map(|m| {
            let l = GcsLabel::new(z, m, p);
            (0..terms).map(|k| harmonic::expansion_coefficient(&l, k)).collect()
        })
        .collect();
    let mut w = Worst::new();
    for n in 0..=m_max {
        for m in 0..=m_max {
            let g: Complex64 = rows[n].iter().zip(&rows[m]).map(|(a, b)| a * b.conj()).sum();
            w.push(delta(n, m), g * pref);
        }
    }
    w
}

/// Rows of e^{-|z|²/2ω} C_s^{(m)} orthonormal for |z| ∈ {0.5, 1, 2}.
pub fn expansion_closure(s: &HarmonicSettings) -> Vec<Check> {
    let tol = s.tol.expansion_rows;
    let identity = "e^{-|z|²/ω} Σ_s C_s^{(n)} conj(C_s^{(m)}) = δ_nm";
    guarded("harmonic.expansion_rows", identity, tol, || {
        let p = s.params()?;
        let dir = if s.z.norm() > 0.0 { s.z / s.z.norm() } else { real(1.0) };
        Ok([0.5, 1.0, 2.0]
            .iter()
            .map(|&r| {
                let w = expansion_rows_at(dir * r, p, s.trunc.expansion_m, s.trunc.expansion_terms);
                Check::from_worst(&format!("harmonic.expansion_rows.|z|={r}"), identity, w, tol)
            })
            .collect())
    })
}

/// Truncated number-state series against the closed form on |ξ| <= 4.
pub fn number_state_series(s: &HarmonicSettings) -> Vec<Check> {
    let tol = s.tol.number_series;
    let identity = "number-state series of Φ_m equals its Hermite closed form";
    guarded("harmonic.number_series", identity, tol, || {
        let p = s.params()?;
        let grid: Vec<f64> = (-16..=16).map(|k| 0.25 * k as f64).collect();
        let mut out = Vec::new();
        for m in 0..=s.trunc.number_series_m {
            let gap = harmonic::number_state_series_gap(&GcsLabel::new(s.z, m, p), &grid, s.trunc.number_series_terms);
            out.push(Check::compare(&format!("harmonic.number_series.m={m}"), identity, real(0.0), real(gap), tol));
        }
        Ok(out)
    })
}

/// Ladder residuals for m <= m_max, ⟨H⟩ = |z|² and variance/mean = ω.
pub fn ladder_and_energy(s: &HarmonicSettings) -> Vec<Check> {
    let tol = s.tol.ladder;
    let identity = "AΦ_m = -z̄Φ_m + √(mω)Φ_{m-1} and A†Φ_m = -zΦ_m + √((m+1)ω)Φ_{m+1}";
    guarded("harmonic.ladder", identity, tol, || {
        let p = s.params()?;
        let q = s.qspec(s.m_max + 1)?;
        let mut low = Worst::new();
        let mut up = Worst::new();
        for m in 0..=s.m_max {
            let (a, b) = harmonic::ladder_residuals(&GcsLabel::new(s.z, m, p), &q)?;
            low.push(real(0.0), real(a));
            up.push(real(0.0), real(b));
        }
        let mut out = vec![
            Check::from_worst("harmonic.ladder.lowering", identity, low, tol),
            Check::from_worst("harmonic.ladder.raising", identity, up, tol),
        ];
        let etol = s.tol.energy;
        let v = harmonic::variance_check(&GcsLabel::new(s.z, 0, p), &q)?;
        out.push(Check::compare(
            "harmonic.energy.mean",
            "⟨Φ_0|H|Φ_0⟩ = |z|²",
            real(s.z.norm_sqr()),
            real(v.mean),
            etol,
        ));
        out.push(Check::compare(
            "harmonic.energy.variance_over_mean",
            "(⟨H²⟩ - ⟨H⟩²)/⟨H⟩ = ω",
            real(s.omega),
            real(v.variance_over_mean),
            etol,
        ));
        let mut fac = Worst::new();
        for m in 0..=s.m_max {
            let e = harmonic::factorized_energy(&GcsLabel::new(s.z, m, p), &q)?;
            fac.push(real(s.z.norm_sqr() + m as f64 * s.omega), real(e));
        }
        out.push(Check::from_worst("harmonic.energy.factorized", "‖AΦ_m‖² = a_m", fac, etol));
        Ok(out)
    })
}

/// Gram matrix of the number states built from the coherent-state
/// projectors over the plane, for m ∈ {0, 2}.
pub fn identity_resolution(s: &HarmonicSettings) -> Vec<Check> {
    let tol = s.tol.identity_resolution;
    let identity = "(1/πω)∬ |z;m⟩⟨z;m| d²z = 1 on ψ_0..ψ_3";
    guarded("harmonic.identity_resolution", identity, tol, || {
        let p = s.params()?;
        let qt = s.tol.identity_quadrature;
        let q = QuadratureSpec {
            abs_tol: qt,
            rel_tol: qt,
            max_subdivisions: 4000,
            truncation_radius: 6.0 / p.omega.sqrt(),
        };
        let idx: Vec<usize> = (0..=s.trunc.identity_index).collect();
        let mut out = Vec::new();
        for m in [0usize, 2] {
            let g = harmonic::identity_resolution(&idx, m, p, &q)?;
            let mut w = Worst::new();
            for (a, row) in g.iter().enumerate() {
                for (b, v) in row.iter().enumerate() {
                    w.push(delta(a, b), *v);
                }
            }
            out.push(Check::from_worst(&format!("harmonic.identity_resolution.m={m}"), identity, w, tol));
        }
        Ok(out)
    })
}

/// Landau-level kernel: series against closed form on a 5×5 grid.
pub fn landau_kernel(s: &HarmonicSettings) -> Vec<Check> {
    let tol = s.tol.landau;
    let identity = "Σ_s C_s(z)conj(C_s(w))/π = e^{zw̄}L_m(|z-w|²)/π";
    let pts: Vec<Complex64> =
        (0..5).map(|j| Complex64::from_polar(1.5 * j as f64 / 4.0, 0.3 + 1.1 * j as f64)).collect();
    let mut out = Vec::new();
    for m in 0..=s.trunc.kernel_m {
        let mut w = Worst::new();
        for &z in &pts {
            for &v in &pts {
                let (series, closed) = harmonic::landau_kernel(z, v, m, s.trunc.kernel_terms);
                w.push_err(closed, series, (series - closed).norm() / closed.norm().max(1e-300));
            }
        }
        out.push(Check::from_worst(&format!("harmonic.landau.m={m}"), identity, w, tol));
    }
    out
}

/// Orthonormality, basis-change unitarity, the derivative identity, the
/// Charlier connection and the shift round trip.
pub fn harmonic_invariants(s: &HarmonicSettings) -> Vec<Check> {
    let mut out = Vec::new();
    let tol = s.tol.harmonic_orthonormality;
    let identity = "⟨Φ_n, Φ_m⟩ = δ_nm";
    out.extend(guarded("harmonic.orthonormality", identity, tol, || {
        let p = s.params()?;
        let q = s.qspec(s.m_max)?;
        let mut w = Worst::new();
        for n in 0..=s.m_max {
            for m in 0..=n {
                w.push(delta(n, m), harmonic::overlap(n, m, s.z, p, &q)?);
            }
        }
        Ok(vec![Check::from_worst("harmonic.orthonormality", identity, w, tol)])
    }));

    let identity = "truncated basis-change matrix is unitary";
    out.extend(guarded("harmonic.basis_change", identity, s.tol.basis_rows, || {
        let p = s.params()?;
        let rows = s.trunc.basis_rows;
        let cols = s.trunc.expansion_terms;
        let pref = (-s.z.norm_sqr() / (2.0 * p.omega)).exp();
        let mat: Vec<Vec<Complex64>> = (0..rows)
            .map(|m| {
                let l = GcsLabel::new(s.z, m, p);
                (0..cols).map(|k| harmonic::expansion_coefficient(&l, k) * pref).collect()
            })
            .collect();
        let mut wr = Worst::new();
        for n in 0..rows {
            for m in 0..rows {
                let g: Complex64 = mat[n].iter().zip(&mat[m]).map(|(a, b)| a * b.conj()).sum();
                wr.push(delta(n, m), g);
            }
        }
        let mut wc = Worst::new();
        let top = s.trunc.basis_columns.min(cols - 1);
        for a in 0..=top {
            for b in 0..=top {
                let g: Complex64 = mat.iter().map(|r| r[a] * r[b].conj()).sum();
                wc.push(delta(a, b), g);
            }
        }
        Ok(vec![
            Check::from_worst("harmonic.basis_change.rows", identity, wr, s.tol.basis_rows),
            Check::from_worst("harmonic.basis_change.columns", identity, wc, s.tol.basis_columns),
        ])
    }));

    let tol = s.tol.derivative_identity;
    let identity = "dΦ_m/dξ = (√2z̄ - ωξ)Φ_m - √(2mω)Φ_{m-1}";
    out.extend(guarded("harmonic.derivative_identity", identity, tol, || {
        let p = s.params()?;
        let mut w = Worst::new();
        for m in 0..=s.m_max {
            let l = GcsLabel::new(s.z, m, p);
            let grid: Vec<f64> = (-40..=40).map(|k| l.center() + 0.15 * k as f64 / p.omega.sqrt()).collect();
            let scale = grid.iter().map(|&x| harmonic::derivative_identity_rhs(&l, x).norm()).fold(0.0, f64::max);
            for &x in &grid {
                let lhs = harmonic::gcs_phi_jet(&l, x)[1];
                let rhs = harmonic::derivative_identity_rhs(&l, x);
                w.push_err(rhs, lhs, (lhs - rhs).norm() / scale.max(1e-300));
            }
        }
        Ok(vec![Check::from_worst("harmonic.derivative_identity", identity, w, tol)])
    }));

    let tol = s.tol.charlier_connection;
    let identity = "recursion polynomials at sω equal the Charlier closed form";
    out.extend(guarded("harmonic.charlier_connection", identity, tol, || {
        let p = s.params()?;
        if s.z.norm() == 0.0 {
            return Err(Error::Degenerate("the Charlier closed form needs z ≠ 0"));
        }
        let rep = harmonic::harmonic_rep(s.z, p, s.m_max + 1);
        let mut w = Worst::new();
        for k in 0..=20 {
            let e = k as f64 * p.omega;
            let poly = recursion_polynomials(&rep, e, s.m_max + 1)?;
            for (n, v) in poly.iter().enumerate() {
                let want = harmonic::recursion_poly_closed_form(n, k, s.z, p);
                w.push_err(want, *v, (v - want).norm() / (1.0 + want.norm()));
            }
        }
        Ok(vec![Check::from_worst("harmonic.charlier_connection", identity, w, tol)])
    }));

    let tol = s.tol.shift_round_trip;
    let identity = "|c_n|² + |d_n|² = a_n and |c_n d_{n+1}| = |b_n| from p_n(0)";
    out.extend(guarded("harmonic.shift_round_trip", identity, tol, || {
        let p = s.params()?;
        let n = s.m_max + 2;
        let rep = harmonic::harmonic_rep(s.z, p, n + 1);
        let zc = s.z.conj();
        let mut p0 = vec![real(1.0)];
        for k in 1..=n {
            let prev = p0[k - 1];
            p0.push(prev * zc / (p.omega * k as f64).sqrt());
        }
        let sc = shift_from_polys(&rep, &p0)?;
        let section = finite_section(&rep, n)?;
        let mut w = Worst::new();
        for k in 0..n - 1 {
            w.push(real(rep.a[k]), real(sc.c[k].norm_sqr() + sc.d[k].norm_sqr()));
            w.push(real(rep.b[k].norm()), real((sc.c[k] * sc.d[k + 1]).norm()));
        }
        let herm = section.conj_transpose() == section;
        Ok(vec![
            Check::from_worst("harmonic.shift_round_trip", identity, w, tol),
            Check::compare(
                "harmonic.section_hermitian",
                "finite sections are Hermitian",
                real(1.0),
                real(if herm { 1.0 } else { 0.0 }),
                0.0,
            ),
        ])
    }));
    out
}

// ------------------------------------------------------------------- Morse

/// Glauber state: eigenvector residual, unit norm, Λ_0 closed form against
/// the truncated series, the series against the closed form pointwise and
/// agreement with φ_0 up to a constant phase.
pub fn glauber_states(s: &MorseSettings) -> Vec<Check> {
    let tol = s.tol.glauber_residual;
    let identity = "A|z) = z|z)";
    guarded("morse.glauber", identity, tol, || {
        let l = s.label()?;
        let gamma = s.gamma()?;
        let q = s.qspec();
        let (res, norm) = morse::glauber_residual(&l, gamma, &q)?;
        let mut out = vec![
            Check::compare("morse.glauber.eigen_residual", identity, real(0.0), real(res), tol),
            Check::compare("morse.glauber.norm", "‖|z)‖ = 1", real(1.0), real(norm), s.tol.glauber_norm),
        ];
        let closed = morse::lambda0(&l, gamma)?;
        let series = morse::lambda0_series(&l, gamma, s.trunc.glauber_terms)?;
        out.push(Check::compare_err(
            "morse.glauber.lambda0",
            "Λ_0^{-2} = Σ|Q_n|² in Gamma-function closed form",
            real(series),
            real(closed),
            ((closed - series) / closed).abs(),
            s.tol.glauber_lambda,
        ));
        let mut w = Worst::new();
        let mut ph = Worst::new();
        let r0 = morse::glauber_cs(&l, gamma, 0.0)? / morse::gcs_phi_morse(&l, 0, 0.0)?;
        for k in -24..=24 {
            let x = 0.25 * k as f64;
            let c = morse::glauber_cs(&l, gamma, x)?;
            w.push(c, morse::glauber_cs_series(&l, gamma, x, s.trunc.glauber_terms)?);
            let phi = morse::gcs_phi_morse(&l, 0, x)?;
            ph.push(c, phi * r0);
        }
        out.push(Check::from_worst(
            "morse.glauber.series_pointwise",
            "Λ_0 Σ Q_n g_n equals the closed form",
            w,
            s.tol.glauber_series,
        ));
        out.push(Check::compare(
            "morse.glauber.unimodular_phase",
            "|z) = e^{iθ} φ_0 with a constant θ",
            real(1.0),
            real(r0.norm()),
            s.tol.glauber_series,
        ));
        out.push(Check::from_worst(
            "morse.glauber.equals_phi0",
            "|z) = e^{iθ} φ_0 with a constant θ",
            ph,
            s.tol.glauber_series,
        ));
        Ok(out)
    })
}

/// Orthonormality and tridiagonality of φ_0..φ_{m_max}, Hermitian symmetry,
/// factorized positivity and d_1 from the first shift step.
pub fn morse_basis(s: &MorseSettings) -> Vec<Check> {
    let tol = s.tol.morse_orthonormality;
    let identity = "⟨φ_n, φ_m⟩ = δ_nm";
    guarded("morse.basis", identity, tol, || {
        let l = s.label()?;
        let k = s.m_max + 1;
        let (g, h) = morse::gram_and_hamiltonian(&l, s.m_max, &s.qspec())?;
        let mut wo = Worst::new();
        let mut wb = Worst::new();
        let mut woff = Worst::new();
        let mut wh = Worst::new();
        let mut wpos = Worst::new();
        for n in 0..k {
            for m in 0..k {
                wo.push(delta(n, m), g[n * k + m]);
                let want = morse::matrix_element_exact(&l, n, m);
                if n.abs_diff(m) <= 1 {
                    wb.push(want, h[n * k + m]);
                } else {
                    woff.push(want, h[n * k + m]);
                }
                wh.push(h[m * k + n].conj(), h[n * k + m]);
            }
            let d = h[n * k + n];
            // a negative diagonal is reported as its distance below zero
            wpos.push_err(real(0.0), d, (-d.re).max(0.0) + d.im.abs());
        }
        let bt = s.tol.morse_bands;
        let d1 = morse::d1_quadrature(&l, &s.qspec())?;
        Ok(vec![
            Check::from_worst("morse.orthonormality", identity, wo, tol),
            Check::from_worst(
                "morse.tridiagonal.bands",
                "⟨φ_n|H|φ_m⟩ bands a_n = |c_n|²+d_n², b_n = c_n d_{n+1}",
                wb,
                bt,
            ),
            Check::from_worst("morse.tridiagonal.off_band", "⟨φ_n|H|φ_m⟩ = 0 for |n-m| >= 2", woff, bt),
            Check::from_worst("morse.hermitian", "H_nm = conj(H_mn)", wh, bt),
            Check::from_worst("morse.factorized_positivity", "⟨φ_n|H|φ_n⟩ = ‖Aφ_n‖² >= 0", wpos, bt),
            Check::compare(
                "morse.d1",
                "d_1 = 2‖(W - Re z)φ_0‖ = β√(Re ξ + 1/2)",
                real(l.params.beta * (l.xi.re + 0.5).sqrt()),
                real(d1),
                s.tol.morse_d1,
            ),
        ])
    })
}

/// Closure of the dual Hahn polynomials with the bound-state weights plus
/// the continuum density, positivity of the weights and decay of the density.
pub fn spectral_closure(s: &MorseSettings) -> Vec<Check> {
    let tol = s.tol.spectral_closure;
    let identity = "Σ_s Ω_s p_n p̄_m + ∫ Ω p_n p̄_m dε = δ_nm";
    guarded("morse.spectral", identity, tol, || {
        let l = s.label()?;
        let data = morse::spectral_data(&l)?;
        let q = s.qspec();
        let top = s.trunc.closure_index;
        let mut w = Worst::new();
        for n in 0..=top {
            for m in 0..=n {
                w.push(delta(n, m), morse::spectral_closure(&data, n, m, &q)?);
            }
        }
        let mass = data.discrete_mass() + data.continuum_mass(&q)?;
        let min_w = data.levels.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
        let emin = data.e_min();
        let samples: Vec<f64> =
            (1..400).map(|k| data.density(emin * (1.0 + 0.05 * k as f64))).collect::<Result<_>>()?;
        let peak = samples.iter().cloned().fold(0.0, f64::max);
        let min_density = samples.iter().cloned().fold(f64::INFINITY, f64::min);
        let tail = data.density(100.0 * emin)? / peak;
        Ok(vec![
            Check::from_worst("morse.spectral.closure", identity, w, tol),
            Check::compare("morse.spectral.total_mass", "Σ_s Ω_s + ∫ Ω dε = 1", real(1.0), real(mass), tol),
            Check::compare_err(
                "morse.spectral.positive_weights",
                "Ω_s > 0 and Ω(ε) > 0",
                real(0.0),
                real(min_w.min(min_density)),
                if min_w > 0.0 && min_density > 0.0 { 0.0 } else { f64::INFINITY },
                0.0,
            ),
            Check::compare(
                "morse.spectral.density_decay",
                "Ω(100 E_min)/max Ω -> 0",
                real(0.0),
                real(tail),
                s.tol.spectral_decay,
            ),
        ])
    })
}

/// Distances between φ_m at V0 = ω²/(2β²) and Φ_m^{-z̄,ω} along the β path:
/// strict decrease, final distance and convergence of the aligning phase.
pub fn harmonic_limit(s: &MorseSettings) -> Vec<Check> {
    let tol = s.tol.limit_distance;
    let identity = "φ_m -> e^{iθ} Φ_m^{-z̄,ω} as β -> 0 with V0β² = ω²/2";
    let mut out = Vec::new();
    for m in 0..=s.trunc.limit_m {
        out.extend(guarded(&format!("morse.limit.m={m}"), identity, tol, || {
            let pts = morse::harmonic_limit_study(s.limit_z, s.limit_omega, m, &s.beta_path, &s.qspec())?;
            Ok(limit_checks(m, &pts, &s.tol))
        }));
    }
    out
}

/// Checks derived from one limit-study sequence.
pub fn limit_checks(m: usize, pts: &[morse::LimitPoint], tol: &Tolerances) -> Vec<Check> {
    let mut out = Vec::new();
    let identity = "φ_m -> e^{iθ} Φ_m^{-z̄,ω} as β -> 0 with V0β² = ω²/2";
    if pts.len() >= 2 {
        let rises = pts.windows(2).filter(|w| w[1].distance >= w[0].distance).count();
        out.push(Check::compare(
            &format!("morse.limit.m={m}.monotone"),
            "distance strictly decreases along the β path",
            real(0.0),
            real(rises as f64),
            0.0,
        ));
        let a = pts[pts.len() - 2].phase;
        let b = pts[pts.len() - 1].phase;
        let diff = num_traits::Euclid::rem_euclid(&(b - a + PI), &(2.0 * PI)) - PI;
        out.push(Check::compare_err(
            &format!("morse.limit.m={m}.phase"),
            "aligning phase converges",
            real(a),
            real(b),
            diff.abs(),
            tol.limit_phase,
        ));
    }
    if let Some(last) = pts.last() {
        out.push(Check::compare(
            &format!("morse.limit.m={m}.final_distance"),
            identity,
            real(0.0),
            real(last.distance),
            tol.limit_distance,
        ));
    }
    out
}

// -------------------------------------------------------- special functions

/// Recurrence and identity residuals of the special-function layer.
pub fn special_functions(tol: &Tolerances) -> Vec<Check> {
    let t = tol.specfun;
    let mut out = Vec::new();

    // Hermite: three-term recurrence relative to the envelope
    // sqrt(2^n n!) e^{u²/2}; the explicit sum relative to Σ|terms|.
    let mut rec = Worst::new();
    let mut sum = Worst::new();
    for k in 0..=64 {
        let u = -8.0 + 0.25 * k as f64;
        for n in 0..=30usize {
            let env = (0.5 * (n as f64 * 2f64.ln() + specfun::ln_factorial(n)) + 0.5 * u * u).exp();
            let h = specfun::hermite(n, u);
            let hs = specfun::hermite_sum(n, u);
            sum.push_err(real(hs), real(h), (h - hs).abs() / hermite_abs_sum(n, u).max(env));
            if (1..30).contains(&n) {
                let r = specfun::hermite(n + 1, u) + 2.0 * n as f64 * specfun::hermite(n - 1, u) - 2.0 * u * h;
                rec.push_err(real(0.0), real(r), r.abs() / env / (2.0 * (n as f64 + 1.0)).sqrt());
            }
        }
    }
    out.push(Check::from_worst("specfun.hermite.recurrence", "2uH_n = H_{n+1} + 2nH_{n-1}", rec, t));
    out.push(Check::from_worst("specfun.hermite.explicit_sum", "recursion equals the explicit Hermite sum", sum, t));

    // Laguerre: degree recurrence and the explicit series.
    let mut rec = Worst::new();
    let mut ser = Worst::new();
    for ia in 0..=20 {
        let alpha = -10.0 + ia as f64 + 0.37 * ((ia % 3) as f64);
        for iu in 1..=12 {
            let u = 2.5 * iu as f64 - 0.4;
            for n in 1..=12usize {
                let nf = n as f64;
                let (lm, l0, lp) = (
                    specfun::laguerre(n - 1, alpha, u),
                    specfun::laguerre(n, alpha, u),
                    specfun::laguerre(n + 1, alpha, u),
                );
                let terms = [(nf + alpha) * lm, (nf + 1.0) * lp, (alpha + 1.0 - u + 2.0 * nf) * l0];
                let r = terms[0] + terms[1] - terms[2];
                let scale = terms.iter().map(|v| v.abs()).sum::<f64>().max(1e-300);
                rec.push_err(real(0.0), real(r), r.abs() / scale);
                let s = specfun::laguerre_series(n, alpha, u);
                let sscale = series_scale(n, alpha, u);
                ser.push_err(real(s), real(l0), (l0 - s).abs() / sscale);
            }
        }
    }
    out.push(Check::from_worst("specfun.laguerre.recurrence", "(n+α)L_{n-1} + (n+1)L_{n+1} = (α+1-u+2n)L_n", rec, t));
    out.push(Check::from_worst("specfun.laguerre.series", "Laguerre evaluation equals the explicit series", ser, t));

    // Negative integer order.
    let mut neg = Worst::new();
    let mut nerr = None;
    for n in 1..=8usize {
        for r in 1..=n {
            for &tt in &[0.3, 1.7, 4.2] {
                match specfun::laguerre_negative_order(n, r, tt) {
                    Ok(v) => {
                        let s = specfun::laguerre_series(n, -(r as f64), tt);
                        neg.push_err(real(s), real(v), (v - s).abs() / series_scale(n, -(r as f64), tt));
                    }
                    Err(e) => nerr = Some(e),
                }
            }
        }
    }
    let id = "L_n^{(-r)}(t) = (-t)^r (n-r)!/n! L_{n-r}^{(r)}(t)";
    out.push(match nerr {
        Some(e) => Check::errored("specfun.laguerre.negative_order", id, t, &e),
        None => Check::from_worst("specfun.laguerre.negative_order", id, neg, t),
    });

    // Charlier: recurrence, the Laguerre/series identity and orthogonality.
    out.extend(guarded("specfun.charlier", "Charlier identities", t, || {
        let mut rec = Worst::new();
        let mut ser = Worst::new();
        for &a in &[0.5, 1.0, 4.0] {
            for u in 0..=20 {
                let uf = u as f64;
                for n in 0..=15usize {
                    let nf = n as f64;
                    let c0 = specfun::charlier(n, uf, a)?;
                    let cp = specfun::charlier(n + 1, uf, a)?;
                    let cm = if n == 0 { 0.0 } else { specfun::charlier(n - 1, uf, a)? };
                    let terms = [a * cp, (nf + a) * c0, nf * cm, uf * c0];
                    let r = terms[0] - terms[1] + terms[2] + terms[3];
                    let scale = terms.iter().map(|v| v.abs()).sum::<f64>().max(1e-300);
                    rec.push_err(real(0.0), real(r), r.abs() / scale);
                    if n <= 10 {
                        // (1/(-a)^n) Σ_k (-n)_k/k! (u-n+k+1)_{n-k} a^k
                        let mut s = 0.0;
                        let mut sc = 0.0;
                        for k in 0..=n {
                            let term = specfun::pochhammer_real(-nf, k) / (specfun::ln_factorial(k)).exp()
                                * specfun::pochhammer_real(uf - nf + k as f64 + 1.0, n - k)
                                * a.powi(k as i32);
                            s += term;
                            sc += term.abs();
                        }
                        let den = (-a).powi(n as i32);
                        let s = s / den;
                        ser.push_err(real(s), real(c0), (c0 - s).abs() / (sc / den.abs()).max(1e-300));
                    }
                }
            }
        }
        let a: f64 = 1.0;
        let mut orth = Worst::new();
        for n in 0..=5usize {
            for m in 0..=5usize {
                let mut s = 0.0;
                let mut w = 1.0; // a^u/u!
                for u in 0..=200 {
                    s += w * specfun::charlier(n, u as f64, a)? * specfun::charlier(m, u as f64, a)?;
                    w *= a / (u + 1) as f64;
                }
                let want = if n == m { a.powi(-(n as i32)) * a.exp() * specfun::ln_factorial(n).exp() } else { 0.0 };
                let scale = (a.powi(-(n as i32)) * specfun::ln_factorial(n).exp()).sqrt()
                    * (a.powi(-(m as i32)) * specfun::ln_factorial(m).exp()).sqrt()
                    * a.exp();
                orth.push_err(real(want), real(s), (s - want).abs() / scale);
            }
        }
        Ok(vec![
            Check::from_worst("specfun.charlier.recurrence", "-uC_n = aC_{n+1} - (n+a)C_n + nC_{n-1}", rec, t),
            Check::from_worst(
                "specfun.charlier.series",
                "C_n(u;a) = n!/(-a)^n L_n^{(u-n)}(a) equals its finite sum",
                ser,
                t,
            ),
            Check::from_worst("specfun.charlier.orthogonality", "Σ_u a^u/u! C_n C_m = a^{-n}e^a n! δ_nm", orth, t),
        ])
    }));

    // Log-gamma functional equation and Pochhammer consistency.
    out.extend(guarded("specfun.log_gamma", "ln Γ(x+1) = ln Γ(x) + ln x", tol.log_gamma, || {
        let mut fe = Worst::new();
        let mut po = Worst::new();
        for k in 0..100 {
            let r = 0.2 + 19.7 * ((k * 37) % 100) as f64 / 100.0;
            let th = -1.45 + 2.9 * ((k * 61) % 100) as f64 / 99.0;
            let x = Complex64::from_polar(r, th);
            let lhs = specfun::ln_gamma(x + 1.0)?;
            let rhs = specfun::ln_gamma(x)? + x.ln();
            fe.push_err(lhs, rhs, (lhs - rhs).norm() / lhs.norm().max(1.0));
            let kk = k % 12;
            let p = specfun::pochhammer(x, kk);
            let via = (specfun::ln_gamma(x + kk as f64)? - specfun::ln_gamma(x)?).exp();
            po.push_err(via, p, (p - via).norm() / via.norm().max(1e-300));
        }
        Ok(vec![
            Check::from_worst("specfun.log_gamma.functional_equation", "ln Γ(x+1) = ln Γ(x) + ln x", fe, tol.log_gamma),
            Check::from_worst("specfun.pochhammer", "(x)_k = Γ(x+k)/Γ(x)", po, t),
        ])
    }));

    // Terminating 3F2 against the continuous dual Hahn recurrence.
    out.extend(guarded("specfun.dual_hahn", "continuous dual Hahn recurrence", t, || {
        let l = morse::default_label();
        let u = l.u();
        let d = l.params.d;
        let alpha = l.alpha();
        let mut w = Worst::new();
        for &sg in &[0.0, 0.4, 1.3, 3.0, 7.5] {
            let a1 = Complex64::new(-d, sg);
            let q: Vec<Complex64> =
                (0..=9).map(|m| specfun::f32_terminating(m, a1, a1.conj(), u, u.conj())).collect::<Result<_>>()?;
            for m in 0..=8usize {
                let mf = m as f64;
                let am = (u + mf).norm_sqr();
                let cm = mf * (mf + alpha);
                let prev = if m == 0 { Complex64::zero() } else { q[m - 1] };
                let lhs = q[m] * (d * d + sg * sg);
                let rhs = -prev * cm + q[m] * (am + cm) - q[m + 1] * am;
                let scale = lhs.norm() + (prev * cm).norm() + (q[m] * (am + cm)).norm() + (q[m + 1] * am).norm();
                w.push_err(rhs, lhs, (lhs - rhs).norm() / scale.max(1e-300));
            }
        }
        Ok(vec![Check::from_worst(
            "specfun.dual_hahn.recurrence",
            "(D²+ς²)q_m = -m(m+2Re ξ)q_{m-1} + (|m+u|²+m(m+2Re ξ))q_m - |m+u|²q_{m+1}",
            w,
            t,
        )])
    }));
    out
}

/// Σ_k n!/(k!(n-2k)!) |2u|^{n-2k}, the rounding scale of the explicit
/// Hermite sum.
fn hermite_abs_sum(n: usize, u: f64) -> f64 {
    (0..=n / 2)
        .map(|k| {
            let lf = specfun::ln_factorial(n) - specfun::ln_factorial(k) - specfun::ln_factorial(n - 2 * k);
            (lf + (n - 2 * k) as f64 * (2.0 * u.abs()).max(1e-300).ln()).exp()
        })
        .sum()
}

/// Σ_k |terms| of the explicit Laguerre series, the natural scale for
/// rounding errors in either evaluation.
fn series_scale(n: usize, alpha: f64, u: f64) -> f64 {
    // L_n^{(α)}(u) = Σ_k (-1)^k (α+k+1)_{n-k}/((n-k)! k!) u^k
    (0..=n)
        .map(|k| {
            specfun::pochhammer_real(alpha + k as f64 + 1.0, n - k).abs()
                * (k as f64 * u.abs().ln() - specfun::ln_factorial(n - k) - specfun::ln_factorial(k)).exp()
        })
        .sum::<f64>()
        .max(1e-300)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_tables() {
        let mut t = Tolerances::default();
        assert!(t.set("landau", 1e-3));
        assert_eq!(t.get("landau"), Some(1e-3));
        assert!(!t.set("nonsense", 1.0));
        assert_eq!(Tolerances::NAMES.len(), 28);
        let mut tr = Truncations::default();
        assert!(tr.set("kernel_terms", 50));
        assert_eq!(tr.kernel_terms, 50);
    }

    #[test]
    fn check_semantics() {
        let c = Check::compare("x", "y", real(1.0), real(1.5), 0.5);
        assert!(c.passed);
        let c = Check::compare("x", "y", real(1.0), real(1.6), 0.5);
        assert!(!c.passed);
        let mut w = Worst::new();
        w.push(real(0.0), real(f64::NAN));
        assert!(w.err.is_infinite());
    }

    #[test]
    fn special_function_checks_pass() {
        for c in special_functions(&Tolerances::default()) {
            assert!(c.passed, "{} {:e} {:?}", c.id, c.abs_error, c.failure);
        }
    }

    #[test]
    fn limit_checks_on_degenerate_paths() {
        let pts = [morse::LimitPoint { beta: 0.5, distance: 0.3, phase: 0.0 }];
        let c = limit_checks(0, &pts, &Tolerances::default());
        assert_eq!(c.len(), 1);
        assert!(!c[0].passed);
    }
}
