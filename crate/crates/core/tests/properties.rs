//! Property tests for the invariants of each layer.

use jcs_core::harmonic::{self, GcsLabel, HarmonicParams};
use jcs_core::jmatrix::{finite_section, recursion_polynomials, shift_from_polys, TridiagonalRep};
use jcs_core::morse::{self, MorseGcsLabel, MorseParams};
use jcs_core::quadrature::{integrate_interval, integrate_line, QuadratureSpec};
use jcs_core::{specfun, Complex64};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hermite_recurrence(n in 1usize..30, u in -8.0f64..8.0) {
        let env = (0.5 * ((n + 1) as f64 * 2f64.ln() + specfun::ln_factorial(n + 1)) + 0.5 * u * u).exp();
        let r = specfun::hermite(n + 1, u) + 2.0 * n as f64 * specfun::hermite(n - 1, u) - 2.0 * u * specfun::hermite(n, u);
        prop_assert!(r.abs() / env < 1e-10);
    }

    #[test]
    fn laguerre_degree_recurrence(n in 1usize..=12, alpha in -10.0f64..10.0, u in 0.01f64..30.0) {
        let nf = n as f64;
        let t = [
            (nf + alpha) * specfun::laguerre(n - 1, alpha, u),
            (nf + 1.0) * specfun::laguerre(n + 1, alpha, u),
            (alpha + 1.0 - u + 2.0 * nf) * specfun::laguerre(n, alpha, u),
        ];
        let scale: f64 = t.iter().map(|v| v.abs()).sum::<f64>() + 1e-300;
        prop_assert!((t[0] + t[1] - t[2]).abs() / scale < 1e-10);
    }

    #[test]
    fn log_gamma_functional_equation(r in 0.05f64..20.0, th in -1.5f64..1.5) {
        let x = Complex64::from_polar(r, th);
        let lhs = specfun::ln_gamma(x + 1.0).unwrap();
        let rhs = specfun::ln_gamma(x).unwrap() + x.ln();
        prop_assert!((lhs - rhs).norm() / lhs.norm().max(1.0) < 1e-12);
    }

    #[test]
    fn pochhammer_matches_gamma_ratio(re in 0.1f64..10.0, im in -5.0f64..5.0, k in 0usize..15) {
        let x = c(re, im);
        let p = specfun::pochhammer(x, k);
        let g = (specfun::ln_gamma(x + k as f64).unwrap() - specfun::ln_gamma(x).unwrap()).exp();
        prop_assert!((p - g).norm() / g.norm() < 1e-10);
    }

    #[test]
    fn charlier_recurrence(n in 0usize..15, u in 0u32..20, a in 0.3f64..5.0) {
        let uf = u as f64;
        let nf = n as f64;
        let c0 = specfun::charlier(n, uf, a).unwrap();
        let t = [
            a * specfun::charlier(n + 1, uf, a).unwrap(),
            (nf + a) * c0,
            if n == 0 { 0.0 } else { nf * specfun::charlier(n - 1, uf, a).unwrap() },
            uf * c0,
        ];
        let scale: f64 = t.iter().map(|v| v.abs()).sum::<f64>() + 1e-300;
        prop_assert!((t[0] - t[1] + t[2] + t[3]).abs() / scale < 1e-10);
    }

    #[test]
    fn finite_sections_are_hermitian(
        a in proptest::collection::vec(-5.0f64..5.0, 2..10),
        br in proptest::collection::vec(-3.0f64..3.0, 9),
        bi in proptest::collection::vec(-3.0f64..3.0, 9),
    ) {
        let n = a.len();
        let b: Vec<Complex64> = (0..n - 1).map(|k| c(br[k], bi[k])).collect();
        let rep = TridiagonalRep::new(a, b);
        let m = finite_section(&rep, n).unwrap();
        prop_assert_eq!(m.conj_transpose(), m);
    }

    #[test]
    fn recursion_polynomials_have_degree_n(
        zr in -1.5f64..1.5, zi in -1.5f64..1.5, omega in 0.5f64..2.0, n in 1usize..7,
    ) {
        prop_assume!(zr.abs() + zi.abs() > 0.1);
        let z = c(zr, zi);
        let rep = harmonic::harmonic_rep(z, HarmonicParams::new(omega).unwrap(), n + 2);
        let h = 0.37;
        let vals: Vec<Complex64> =
            (0..n + 2).map(|k| recursion_polynomials(&rep, k as f64 * h, n + 1).unwrap()[n]).collect();
        // k-th forward difference
        let diff = |k: usize| -> Complex64 {
            (0..=k).map(|j| {
                let binom = (specfun::ln_factorial(k) - specfun::ln_factorial(j) - specfun::ln_factorial(k - j)).exp();
                let sign = if (k - j).is_multiple_of(2) { 1.0 } else { -1.0 };
                vals[j] * (sign * binom)
            }).sum()
        };
        let lead: Complex64 = (0..n).map(|k| Complex64::new(1.0, 0.0) / rep.b[k].conj()).product();
        let nth = diff(n);
        let want = lead * ((specfun::ln_factorial(n)).exp() * h.powi(n as i32));
        prop_assert!(nth.norm() > 0.0);
        prop_assert!((nth - want).norm() <= 1e-8 * want.norm());
        let scale: f64 = vals.iter().map(|v| v.norm()).sum::<f64>() * 2f64.powi(n as i32 + 1);
        prop_assert!(diff(n + 1).norm() <= 1e-8 * scale);
    }

    #[test]
    fn shift_round_trip(zr in -2.0f64..2.0, zi in -2.0f64..2.0, omega in 0.3f64..3.0) {
        prop_assume!(zr.abs() + zi.abs() > 0.05);
        let z = c(zr, zi);
        let p = HarmonicParams::new(omega).unwrap();
        let n = 10;
        let rep = harmonic::harmonic_rep(z, p, n + 1);
        let mut p0 = vec![c(1.0, 0.0)];
        for k in 1..=n {
            let prev = p0[k - 1];
            p0.push(prev * z.conj() / (omega * k as f64).sqrt());
        }
        let sc = shift_from_polys(&rep, &p0).unwrap();
        let back = sc.to_tridiagonal();
        for k in 0..n - 1 {
            prop_assert!((back.a[k] - rep.a[k]).abs() < 1e-10 * (1.0 + rep.a[k]));
            prop_assert!((back.b[k].norm() - rep.b[k].norm()).abs() < 1e-10 * (1.0 + rep.b[k].norm()));
        }
    }

    #[test]
    fn derivative_identity(zr in -1.5f64..1.5, zi in -1.5f64..1.5, omega in 0.5f64..2.0, m in 0usize..8, t in -4.0f64..4.0) {
        let l = GcsLabel::new(c(zr, zi), m, HarmonicParams::new(omega).unwrap());
        let x = l.center() + t / omega.sqrt();
        let lhs = harmonic::gcs_phi_jet(&l, x)[1];
        let rhs = harmonic::derivative_identity_rhs(&l, x);
        prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
    }

    #[test]
    fn charlier_connection(zr in -1.5f64..1.5, zi in -1.5f64..1.5, omega in 0.5f64..2.0, s in 0usize..20) {
        prop_assume!(zr.abs() + zi.abs() > 0.1);
        let z = c(zr, zi);
        let p = HarmonicParams::new(omega).unwrap();
        let rep = harmonic::harmonic_rep(z, p, 9);
        let poly = recursion_polynomials(&rep, s as f64 * omega, 9).unwrap();
        for (n, v) in poly.iter().enumerate() {
            let want = harmonic::recursion_poly_closed_form(n, s, z, p);
            prop_assert!((v - want).norm() <= 1e-9 * (1.0 + want.norm()));
        }
    }

    #[test]
    fn quadrature_linearity(a in -3.0f64..3.0, b in -3.0f64..3.0, s1 in 0.3f64..2.0, s2 in 0.3f64..2.0, mu in -1.0f64..1.0) {
        let q = QuadratureSpec::default().with_abs_tol(1e-11);
        let f = |x: f64| (-(x / s1).powi(2)).exp();
        let g = |x: f64| (x - mu).cos() * (-(x - mu).powi(2) / s2).exp();
        let if_: f64 = integrate_line(f, &q).unwrap();
        let ig: f64 = integrate_line(g, &q).unwrap();
        let ic: f64 = integrate_line(|x| a * f(x) + b * g(x), &q).unwrap();
        prop_assert!((ic - a * if_ - b * ig).abs() <= 2.0 * q.abs_tol * (1.0 + a.abs() + b.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn harmonic_orthonormality(zr in -1.5f64..1.5, zi in -1.5f64..1.5, omega in 0.5f64..2.0) {
        let p = HarmonicParams::new(omega).unwrap();
        let z = c(zr, zi);
        let q = p.quadrature(8, 1e-12);
        for n in [0usize, 3, 8] {
            for m in [0usize, 1, 3, 7, 8] {
                let o = harmonic::overlap(n, m, z, p, &q).unwrap();
                let want = if n == m { 1.0 } else { 0.0 };
                prop_assert!((o - c(want, 0.0)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn morse_orthonormality_and_bands(zr in -0.5f64..1.0, zi in -1.0f64..1.0, beta in 0.2f64..1.0, d in 1.5f64..12.0) {
        let params = MorseParams::from_depth(d, beta).unwrap();
        let label = MorseGcsLabel::new(c(zr, zi), params);
        prop_assume!(label.is_ok());
        let l = label.unwrap();
        prop_assume!(l.xi.re > 0.5);
        let (g, h) = morse::gram_and_hamiltonian(&l, 4, &morse::morse_quadrature(1e-12)).unwrap();
        for n in 0..5 {
            for m in 0..5 {
                let want = if n == m { 1.0 } else { 0.0 };
                prop_assert!((g[n * 5 + m] - c(want, 0.0)).norm() < 1e-8);
                let e = morse::matrix_element_exact(&l, n, m);
                prop_assert!((h[n * 5 + m] - e).norm() < 1e-6 * (1.0 + e.norm()));
            }
            // factorized positivity
            prop_assert!(h[n * 5 + n].re > -1e-9);
        }
    }

    #[test]
    fn glauber_eigen_residual(zr in -0.3f64..1.0, zi in -1.0f64..1.0, beta in 0.3f64..1.0, d in 2.0f64..10.0) {
        let params = MorseParams::from_depth(d, beta).unwrap();
        let l = MorseGcsLabel::new(c(zr, zi), params);
        prop_assume!(l.is_ok());
        let l = l.unwrap();
        let (res, norm) = morse::glauber_residual(&l, l.default_gamma(), &morse::morse_quadrature(1e-12)).unwrap();
        prop_assert!(res < 1e-7);
        prop_assert!((norm - 1.0).abs() < 1e-8);
    }

    #[test]
    fn spectral_total_mass(zr in 0.05f64..1.0, zi in -1.0f64..1.0, beta in 0.3f64..1.0, d in 1.3f64..9.0) {
        let params = MorseParams::from_depth(d, beta).unwrap();
        let l = MorseGcsLabel::new(c(zr, zi), params).unwrap();
        let data = morse::spectral_data(&l).unwrap();
        let q = morse::morse_quadrature(1e-11);
        let mass = data.discrete_mass() + data.continuum_mass(&q).unwrap();
        prop_assert!((mass - 1.0).abs() < 1e-6, "mass {}", mass);
        let v = morse::spectral_closure(&data, 2, 1, &q).unwrap();
        prop_assert!(v.norm() < 1e-6);
    }

    #[test]
    fn quadrature_refinement(s in 0.3f64..2.0, mu in -1.0f64..1.0) {
        let exact = s * std::f64::consts::PI.sqrt();
        let f = |x: f64| (-((x - mu) / s).powi(2)).exp();
        let mut prev = f64::INFINITY;
        for tol in [1e-4, 5e-5, 2.5e-5, 1.25e-5] {
            let q = QuadratureSpec { abs_tol: tol, rel_tol: 1e-16, max_subdivisions: 2000, truncation_radius: 12.0 };
            let v: f64 = integrate_interval(f, mu - 12.0, mu + 12.0, &q).unwrap();
            let dev = (v - exact).abs();
            prop_assert!(dev <= prev.max(1e-15));
            prev = dev;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn limit_distances_decrease(z in 0.1f64..0.5, start in 0.3f64..0.6, ratio in 0.3f64..0.5) {
        let path: Vec<f64> = (0..3).map(|k| start * ratio.powi(k)).collect();
        let pts = morse::harmonic_limit_study(c(z, 0.0), 1.0, 0, &path, &morse::morse_quadrature(1e-10)).unwrap();
        for w in pts.windows(2) {
            prop_assert!(w[1].distance < w[0].distance);
        }
    }
}
