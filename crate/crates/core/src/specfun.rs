//! Special functions: log-gamma, Pochhammer symbols and the classical
//! polynomial families (Hermite, Laguerre, Charlier, complex Hermite,
//! terminating 3F2 at unit argument).

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
// Float provides the f64 math methods in no_std builds.
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k-1)) for the Stirling series.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

// Below this modulus the argument is shifted upwards before Stirling.
const STIRLING_MIN: f64 = 16.0;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

fn stirling(w: Complex64) -> Complex64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::zero();
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series
}

/// Principal branch of ln Γ(z).
///
/// Small arguments are shifted with Γ(z+1) = zΓ(z) until Stirling's series is
/// accurate; since every logarithm involved has its cut on the negative real
/// axis the result is the principal branch. On the negative real axis itself
/// the value is the limit from above.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain("log_gamma of a non-finite argument"));
    }
    if z.im == 0.0 && is_nonpositive_integer(z.re) {
        return Err(Error::Pole("log_gamma at a nonpositive integer"));
    }
    if z.re < -1.0e6 {
        return Err(Error::Domain("log_gamma argument too far left"));
    }
    let mut w = z;
    let mut shift = Complex64::zero();
    while w.re < 0.0 || w.norm() < STIRLING_MIN {
        shift += w.ln();
        w += 1.0;
    }
    Ok(stirling(w) - shift)
}

/// ln |Γ(x)| for real x.
pub fn ln_gamma_real(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain("log_gamma of a non-finite argument"));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole("log_gamma at a nonpositive integer"));
    }
    if x < -1.0e6 {
        return Err(Error::Domain("log_gamma argument too far left"));
    }
    let mut w = x;
    let mut shift = 0.0;
    while w < STIRLING_MIN {
        shift += w.abs().ln();
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    Ok((w - 0.5) * w.ln() - w + LN_SQRT_2PI + series - shift)
}

/// Sign of Γ(x) for real x that is not a pole.
pub fn gamma_sign(x: f64) -> f64 {
    if x > 0.0 || (x.floor() as i64) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// ln n!
pub fn ln_factorial(n: usize) -> f64 {
    // n + 1 is never a pole
    ln_gamma_real(n as f64 + 1.0).unwrap_or(f64::INFINITY)
}

/// Rising factorial (x)_k = x (x+1) ... (x+k-1).
pub fn pochhammer(x: Complex64, k: usize) -> Complex64 {
    let mut p = Complex64::new(1.0, 0.0);
    for j in 0..k {
        p *= x + j as f64;
    }
    p
}

/// Real rising factorial.
pub fn pochhammer_real(x: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |p, j| p * (x + j as f64))
}

/// Physicists' Hermite polynomial H_n(u) by forward recursion.
pub fn hermite(n: usize, u: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = 2.0 * u * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Explicit finite sum for H_n(u); slower than [`hermite`], kept as a check.
pub fn hermite_sum(n: usize, u: f64) -> f64 {
    let lnf = ln_factorial(n);
    let mut sum = 0.0;
    for l in 0..=n / 2 {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let mag = (lnf - ln_factorial(l) - ln_factorial(n - 2 * l)).exp();
        sum += sign * mag * (2.0 * u).powi((n - 2 * l) as i32);
    }
    sum
}

/// H_n(u) / sqrt(2^n n!), which stays O(1) for large n.
pub fn hermite_normalized(n: usize, u: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * u * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn negative_integer_order(alpha: f64) -> Option<usize> {
    if alpha < 0.0 && alpha == alpha.floor() && alpha > -1.0e9 {
        Some((-alpha) as usize)
    } else {
        None
    }
}

fn laguerre_recursion(n: usize, alpha: f64, y: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - y) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Generalized Laguerre polynomial L_n^{(α)}(y) for any real α.
///
/// Negative integer orders -r with 1 <= r <= n go through
/// [`laguerre_negative_order`]; other negative integer orders use the
/// explicit series.
pub fn laguerre(n: usize, alpha: f64, y: f64) -> f64 {
    match negative_integer_order(alpha) {
        Some(r) if r <= n => laguerre_negative_order(n, r, y).unwrap_or(f64::NAN),
        Some(_) => laguerre_series(n, alpha, y),
        None => laguerre_recursion(n, alpha, y),
    }
}

/// Explicit series sum_k (-1)^k C(n+α, n-k) y^k / k!.
pub fn laguerre_series(n: usize, alpha: f64, y: f64) -> f64 {
    let mut sum = 0.0;
    let mut ykk = 1.0; // (-y)^k / k!
    for k in 0..=n {
        let mut binom = 1.0;
        for j in 1..=(n - k) {
            binom *= (alpha + (k + j) as f64) / j as f64;
        }
        sum += binom * ykk;
        ykk *= -y / (k + 1) as f64;
    }
    sum
}

/// L_n^{(-r)}(t) = (-t)^r ((n-r)!/n!) L_{n-r}^{(r)}(t) for 1 <= r <= n.
pub fn laguerre_negative_order(n: usize, r: usize, t: f64) -> Result<f64> {
    if r == 0 || r > n {
        return Err(Error::Domain("negative Laguerre order needs 1 <= r <= n"));
    }
    let ratio = (ln_factorial(n - r) - ln_factorial(n)).exp();
    Ok((-t).powi(r as i32) * ratio * laguerre_recursion(n - r, r as f64, t))
}

/// Orthonormal Laguerre functions
/// ℓ_k(y) = sqrt(k!/Γ(k+α+1)) y^{α/2} e^{-y/2} L_k^{(α)}(y), k = 0..=n.
///
/// These are orthonormal on (0, ∞) with respect to dy. The normalized
/// recursion avoids overflow for large α or k.
pub fn laguerre_functions(n: usize, alpha: f64, y: f64) -> Result<Vec<f64>> {
    if alpha <= -1.0 {
        return Err(Error::Domain("Laguerre functions need α > -1"));
    }
    if y < 0.0 || !y.is_finite() {
        return Err(Error::Domain("Laguerre functions need 0 <= y < ∞"));
    }
    let mut out = vec![0.0; n + 1];
    if y == 0.0 {
        if alpha == 0.0 {
            // ℓ_k(0) = 1 for every k when α = 0
            out.iter_mut().for_each(|v| *v = 1.0);
        }
        return Ok(out);
    }
    out[0] = (0.5 * alpha * y.ln() - 0.5 * y - 0.5 * ln_gamma_real(alpha + 1.0)?).exp();
    for k in 0..n {
        let kf = k as f64;
        let prev = if k == 0 { 0.0 } else { out[k - 1] };
        out[k + 1] = ((2.0 * kf + 1.0 + alpha - y) * out[k] - (kf * (kf + alpha)).sqrt() * prev)
            / ((kf + 1.0) * (kf + alpha + 1.0)).sqrt();
    }
    Ok(out)
}

/// Single orthonormal Laguerre function ℓ_n(y); see [`laguerre_functions`].
pub fn laguerre_function(n: usize, alpha: f64, y: f64) -> Result<f64> {
    Ok(laguerre_functions(n, alpha, y)?[n])
}

/// Charlier polynomial C_n(u; a) = n!/(-a)^n L_n^{(u-n)}(a).
pub fn charlier(n: usize, u: f64, a: f64) -> Result<f64> {
    if a <= 0.0 || !a.is_finite() {
        return Err(Error::Domain("Charlier parameter must be positive"));
    }
    let scale = (ln_factorial(n) - n as f64 * a.ln()).exp();
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * scale * laguerre(n, u - n as f64, a))
}

/// Complex Hermite polynomial
/// H_{m,s}(z, z̄) = Σ_j (-1)^j j! C(m,j) C(s,j) z^{m-j} z̄^{s-j}.
pub fn complex_hermite(m: usize, s: usize, z: Complex64) -> Complex64 {
    let zc = z.conj();
    let mut sum = Complex64::zero();
    for j in 0..=m.min(s) {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let coef =
            (ln_factorial(m) + ln_factorial(s) - ln_factorial(j) - ln_factorial(m - j) - ln_factorial(s - j)).exp();
        sum += z.powu((m - j) as u32) * zc.powu((s - j) as u32) * (sign * coef);
    }
    sum
}

/// Terminating ₃F₂(-m, a1, a2; b1, b2; 1) as a finite sum.
pub fn f32_terminating(m: usize, a1: Complex64, a2: Complex64, b1: Complex64, b2: Complex64) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..m {
        let kf = k as f64;
        let den = (b1 + kf) * (b2 + kf);
        if den.norm() == 0.0 {
            return Err(Error::Pole("3F2 denominator vanishes before termination"));
        }
        term *= (a1 + kf) * (a2 + kf) * (kf - m as f64) / (den * (kf + 1.0));
        sum += term;
    }
    Ok(sum)
}
