//! Gamma function, Vandermonde modulus and the ψ_δ comparison functions.

use num_complex::Complex64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn ln_gamma_lanczos(z: Complex64) -> Complex64 {
    // valid for Re z >= 1/2
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// Principal-ish complex log Γ. Only exp() of the result is meaningful
/// away from the right half plane.
pub fn ln_gamma_c(z: Complex64) -> Complex64 {
    if z.re >= 0.5 {
        ln_gamma_lanczos(z)
    } else {
        let s = (PI * z).sin();
        Complex64::new(PI, 0.0).ln() - s.ln() - ln_gamma_lanczos(1.0 - z)
    }
}

pub fn gamma_c(z: Complex64) -> Complex64 {
    ln_gamma_c(z).exp()
}

/// 1/Γ(z), entire: exactly zero at the non-positive integers.
pub fn rgamma_c(z: Complex64) -> Complex64 {
    if z.re >= 0.5 {
        (-ln_gamma_lanczos(z)).exp()
    } else if z.im == 0.0 && z.re == z.re.round() {
        Complex64::new(0.0, 0.0)
    } else {
        (PI * z).sin() / PI * ln_gamma_lanczos(1.0 - z).exp()
    }
}

pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma needs a positive argument");
    if x >= 10.0 {
        stirling_ln_gamma(x)
    } else {
        ln_gamma_lanczos(Complex64::new(x, 0.0)).re
    }
}

pub fn gamma(x: f64) -> f64 {
    if x > 0.0 {
        ln_gamma(x).exp()
    } else {
        gamma_c(Complex64::new(x, 0.0)).re
    }
}

fn stirling_ln_gamma(x: f64) -> f64 {
    let x2 = 1.0 / (x * x);
    let series = (1.0 / 12.0
        - x2 * (1.0 / 360.0 - x2 * (1.0 / 1260.0 - x2 * (1.0 / 1680.0 - x2 / 1188.0))))
        / x;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + series
}

/// ∏_{j<k} |a_k − a_j|
pub fn vandermonde_abs(values: &[Complex64]) -> f64 {
    let mut p = 1.0;
    for k in 1..values.len() {
        for j in 0..k {
            p *= (values[k] - values[j]).norm();
        }
    }
    p
}

/// `e^{iπ p / q}`
pub fn root_of_unity(p: i64, q: usize) -> Complex64 {
    let q2 = 2 * q as i64;
    let r = p.rem_euclid(q2);
    // exact values where cheap, to keep symmetric cancellations clean
    if r == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 2 * r == q2 {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * r == q2 {
        return Complex64::new(0.0, 1.0);
    }
    if 4 * r == 3 * q2 {
        return Complex64::new(0.0, -1.0);
    }
    Complex64::from_polar(1.0, PI * r as f64 / q as f64)
}

/// ψ_δ(ζ) = Γ²(1+δ) / (Γ(1+δ+ζ/π) Γ(1+δ−ζ/π)) = ∏ (1 − ζ²/(π²(n+δ)²)).
pub fn psi_delta(delta: f64, zeta: Complex64) -> Complex64 {
    assert!(delta > -1.0, "psi_delta needs delta > -1");
    let g = gamma(1.0 + delta);
    let w = zeta / PI;
    let base = Complex64::new(1.0 + delta, 0.0);
    g * g * rgamma_c(base + w) * rgamma_c(base - w)
}

/// Ψ_δ(ζ) = ∏_{j<ℓ} ψ_δ(ω_j ζ), ω_j = e^{iπj/ℓ}.
pub fn psi_product(delta: f64, ell: usize, zeta: Complex64) -> Complex64 {
    (0..ell)
        .map(|j| psi_delta(delta, root_of_unity(j as i64, ell) * zeta))
        .product()
}

const BERNOULLI_2K: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// Where the Euler–Maclaurin tail starts; the corrections decay like `(s/2πx)^{2k}`.
fn em_start(s: f64) -> f64 {
    12.0f64.max(2.0 * s)
}

/// Hurwitz zeta ζ(s, a) for s > 1, a > 0.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    assert!(s > 1.0 && a > 0.0);
    let shift = (em_start(s) - a).max(0.0).ceil() as usize;
    let mut sum = 0.0;
    for k in 0..shift {
        sum += (a + k as f64).powf(-s);
    }
    let x = a + shift as f64;
    sum += x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // Euler–Maclaurin corrections
    let mut rising = s; // s (s+1) ... (s+2k-2)
    let mut xpow = x.powf(-s - 1.0);
    let mut fact = 2.0; // (2k)!
    for (k, b) in BERNOULLI_2K.iter().enumerate() {
        let term = b / fact * rising * xpow;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        let kk = (k + 1) as f64;
        rising *= (s + 2.0 * kk - 1.0) * (s + 2.0 * kk);
        xpow /= x * x;
        fact *= (2.0 * kk + 1.0) * (2.0 * kk + 2.0);
    }
    sum
}

/// `a^s ζ(s, a) = Σ_{j≥0} (a/(a+j))^s`, finite for large `s`.
pub fn hurwitz_scaled(s: f64, a: f64) -> f64 {
    assert!(s > 1.0 && a > 0.0);
    let shift = (em_start(s) - a).max(0.0).ceil() as usize;
    let mut sum = 0.0;
    for k in 0..shift {
        let t = (a / (a + k as f64)).powf(s);
        sum += t;
        if t < 1e-18 * sum {
            return sum;
        }
    }
    let x = a + shift as f64;
    let mut inner = x / (s - 1.0) + 0.5;
    let mut rising = s;
    let mut xpow = 1.0 / x;
    let mut fact = 2.0;
    for (k, b) in BERNOULLI_2K.iter().enumerate() {
        let term = b / fact * rising * xpow;
        inner += term;
        if term.abs() < 1e-17 * inner.abs() {
            break;
        }
        let kk = (k + 1) as f64;
        rising *= (s + 2.0 * kk - 1.0) * (s + 2.0 * kk);
        xpow /= x * x;
        fact *= (2.0 * kk + 1.0) * (2.0 * kk + 2.0);
    }
    sum + (a / x).powf(s) * inner
}

/// Standard normal density.
pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Standard normal cdf.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2)
}

/// Mills ratio (1 − Φ(x)) / φ(x) for x ≥ 0, accurate for large x.
pub fn mills_ratio(x: f64) -> f64 {
    assert!(x >= 0.0);
    if x < 30.0 {
        let tail = 0.5 * statrs::function::erf::erfc(x / std::f64::consts::SQRT_2);
        return tail / norm_pdf(x);
    }
    // continued fraction 1/(x+1/(x+2/(x+3/(x+...))))
    let mut f = x;
    for k in (1..40).rev() {
        f = x + k as f64 / f;
    }
    1.0 / f
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_values() {
        assert_relative_eq!(gamma(0.5), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(5.0), 24.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(0.25), 3.625_609_908_221_908_3, max_relative = 1e-14);
        assert_relative_eq!(gamma(12.5), 136_843_365.465_565_83, max_relative = 1e-13);
        assert_relative_eq!(gamma(-0.5), -2.0 * PI.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn reflection_zeros() {
        for n in 0..6 {
            assert_eq!(rgamma_c(Complex64::new(-(n as f64), 0.0)).norm(), 0.0);
        }
    }

    #[test]
    fn psi_examples() {
        let z = Complex64::new(0.0, 0.0);
        assert_relative_eq!(psi_delta(0.3, z).re, 1.0, max_relative = 1e-14);
        let v = psi_delta(0.0, Complex64::new(PI / 2.0, 0.0));
        assert_relative_eq!(v.re, 2.0 / PI, max_relative = 1e-13);
        let v = psi_delta(-0.5, Complex64::new(PI / 3.0, 0.0));
        assert_relative_eq!(v.re, 0.5, max_relative = 1e-13);
        let z = Complex64::new(1.3, 0.7);
        let v = psi_delta(0.0, z);
        let w = z.sin() / z;
        assert!((v - w).norm() < 1e-13 * w.norm());
    }

    #[test]
    fn vandermonde_examples() {
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(vandermonde_abs(&[Complex64::new(0.3, 2.0)]), 1.0);
        assert_eq!(vandermonde_abs(&[]), 1.0);
        assert_relative_eq!(vandermonde_abs(&[one, -one]), 2.0);
        for l in 0..5usize {
            let pts: Vec<_> = (0..2 * l + 2).map(|j| root_of_unity(j as i64, l + 1)).collect();
            let expect = ((2 * l + 2) as f64).powi(l as i32 + 1);
            assert_relative_eq!(vandermonde_abs(&pts), expect, max_relative = 1e-12);
        }
    }

    #[test]
    fn hurwitz() {
        assert_relative_eq!(hurwitz_zeta(2.0, 1.0), PI * PI / 6.0, max_relative = 1e-14);
        assert_relative_eq!(hurwitz_zeta(2.0, 0.5), PI * PI / 2.0, max_relative = 1e-14);
        assert_relative_eq!(hurwitz_zeta(4.0, 1.0), PI.powi(4) / 90.0, max_relative = 1e-14);
        let direct: f64 = (0..200_000).map(|k| (1000.25 + k as f64).powf(-3.0)).sum::<f64>();
        let tail = hurwitz_zeta(3.0, 201_000.25);
        assert_relative_eq!(hurwitz_zeta(3.0, 1000.25), direct + tail, max_relative = 1e-13);
    }

    #[test]
    fn scaled_hurwitz() {
        for &(s, a) in &[(2.0, 0.5), (6.0, 3.25), (40.0, 700.0), (120.0, 20.0)] {
            let direct: f64 = (0..200_000).map(|j| (a / (a + j as f64)).powf(s)).sum();
            let tail = if s == 2.0 { a * a / (a + 200_000.0) } else { 0.0 };
            assert!((hurwitz_scaled(s, a) - direct - tail).abs() < 1e-9 * direct, "{s} {a}");
        }
        assert!((hurwitz_scaled(3.0, 2.0) - 8.0 * hurwitz_zeta(3.0, 2.0)).abs() < 1e-14);
    }

    #[test]
    fn hurwitz_near_a_equals_s() {
        for &(s, a, z) in &[
            (11.286368058992274, 13.230176605604575, 4.075_890_985_732_207_7e-13),
            (12.0, 12.5, 1.178_446_080_027_805_6e-13),
            (80.0, 81.0, 3.365_240_359_282_631_3e-153),
        ] {
            assert_relative_eq!(hurwitz_zeta(s, a), z, max_relative = 1e-14);
            assert_relative_eq!(hurwitz_scaled(s, a), z * a.powf(s), max_relative = 1e-14);
        }
    }

    #[test]
    fn mills() {
        for &x in &[0.0, 1.0, 2.9, 3.1, 5.0, 12.0, 29.0] {
            let direct = statrs::function::erf::erfc(x / std::f64::consts::SQRT_2) / 2.0 / norm_pdf(x);
            assert_relative_eq!(mills_ratio(x), direct, max_relative = 1e-12);
        }
    }
}
