//! Characteristic determinants, their real roots, and eigenvalue sequences.

mod kernel;

pub use kernel::{
    catalog_kernel, center_kernel, integrate_kernel, integrate_kernel_from, nystrom_eigenvalues, KernelGrid,
    DEFAULT_GRID,
};

use crate::bvp_algebra::{rho_pair, theta_coefficients, PhasePair};
use crate::catalog::{BvpSpec, ProcessSpec};
use crate::error::{Error, Result};
use crate::linalg;
use crate::special::root_of_unity;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// Determinant of the boundary functionals applied to `e^{iω_jζx}`, `j < 2ℓ`.
///
/// Row ν is divided by `(iζ)^{q₀}` with `q₀` its lowest order, so the
/// determinant is entire and `|D(ω₁ζ)| = |D(ζ)|`.
#[derive(Debug, Clone)]
pub struct CharFunction {
    pub ell: usize,
    pub size: usize,
    pub leading_factor: f64,
    bvp: BvpSpec,
    omegas: Vec<Complex64>,
    min_orders: Vec<usize>,
    phase_power: usize,
    decay_rate: f64,
}

pub fn char_function(spec: &ProcessSpec) -> CharFunction {
    CharFunction::new(&spec.bvp)
}

impl CharFunction {
    pub fn new(bvp: &BvpSpec) -> Self {
        let ell = bvp.ell;
        let n = 2 * ell;
        let omegas: Vec<Complex64> = (0..n).map(|j| root_of_unity(j as i64, ell)).collect();
        let min_orders: Vec<usize> = bvp.conditions.iter().map(|c| c.min_order()).collect();
        let pairs = if ell % 2 == 1 { ell } else { ell - 1 };
        let decay_rate = omegas.iter().filter(|w| w.im < -1e-12).map(|w| w.im).sum();
        CharFunction {
            ell,
            size: n,
            leading_factor: bvp.leading_factor,
            bvp: bvp.clone(),
            omegas,
            phase_power: pairs + min_orders.iter().sum::<usize>(),
            min_orders,
            decay_rate,
        }
    }

    /// `μ = p_ℓ ζ^{2ℓ}`
    pub fn zeta_to_mu(&self, zeta: f64) -> f64 {
        self.leading_factor * zeta.powi(2 * self.ell as i32)
    }

    /// Entry and its ζ-derivative, with the column multiplied by `e^{s ζ}`
    /// (`s` is `Im ω_j` when negative, so the product stays bounded).
    fn entry(&self, row: usize, j: usize, zeta: Complex64, scaled: bool) -> (Complex64, Complex64) {
        let bc = &self.bvp.conditions[row];
        let q0 = self.min_orders[row];
        let w = self.omegas[j];
        let iz = Complex64::i() * zeta;
        let lam = iz * w;
        let (e, col) = if scaled && w.im < -1e-12 {
            // e^{iωζ} e^{ζ Im ω} and e^{ζ Im ω}
            let s = (zeta * w.im).exp();
            ((lam + zeta * w.im).exp(), s)
        } else {
            (lam.exp(), Complex64::new(1.0, 0.0))
        };
        let mut v = Complex64::new(0.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        let mut wq = Complex64::new(1.0, 0.0);
        for _ in 0..q0 {
            wq *= w;
        }
        for q in q0..=bc.k {
            let (a, g) = bc.coeff(q);
            let p = (q - q0) as i32;
            let izp = iz.powi(p);
            let base = a * col + g * e;
            v += wq * izp * base;
            let mut d = wq * izp * (g * e * Complex64::i() * w);
            if p > 0 {
                d += wq * (p as f64) * Complex64::i() * iz.powi(p - 1) * base;
            }
            dv += d;
            wq *= w;
        }
        (v, dv)
    }

    fn matrix(&self, zeta: Complex64, scaled: bool) -> (Vec<Complex64>, Vec<Complex64>) {
        let n = self.size;
        let mut a = Vec::with_capacity(n * n);
        let mut da = Vec::with_capacity(n * n);
        for r in 0..n {
            for j in 0..n {
                let (v, d) = self.entry(r, j, zeta, scaled);
                a.push(v);
                da.push(d);
            }
        }
        (a, da)
    }

    /// The entire function `D(ζ)`.
    pub fn det(&self, zeta: Complex64) -> Complex64 {
        let (a, _) = self.matrix(zeta, false);
        linalg::det(a, self.size)
    }

    /// Column-scaled determinant and its derivative on the real axis.
    fn scaled_with_derivative(&self, zeta: f64) -> (Complex64, Complex64) {
        let n = self.size;
        let (a, da) = self.matrix(Complex64::new(zeta, 0.0), true);
        let d = linalg::det(a.clone(), n);
        let mut dd = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let mut b = a.clone();
            for r in 0..n {
                b[r * n + j] = da[r * n + j];
            }
            dd += linalg::det(b, n);
        }
        // derivative of the column weights e^{ζ Im ω_j}
        let dd = dd + self.decay_rate * d;
        (d, dd)
    }

    fn phase(&self) -> Complex64 {
        Complex64::i().powi((self.phase_power % 4) as i32)
    }

    /// Real reduction `h(ζ)` and `h′(ζ)`; `h` has the real zeros of `D`.
    pub fn real_reduction(&self, zeta: f64) -> (f64, f64) {
        let ph = self.phase();
        let (d, dd) = self.scaled_with_derivative(zeta);
        ((ph * d).re, (ph * dd).re)
    }

    /// `|Im| / |·|` of the phased determinant, zero in exact arithmetic.
    pub fn reality_defect(&self, zeta: f64) -> f64 {
        let (d, _) = self.scaled_with_derivative(zeta);
        let v = self.phase() * d;
        v.im.abs() / v.norm().max(f64::MIN_POSITIVE)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Root {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub roots: Vec<Root>,
    pub count: usize,
    pub ell: usize,
    pub leading_factor: f64,
    pub phases: Option<PhasePair>,
}

impl SpectrumResult {
    /// `(r_n, multiplicity of r_n)` for `n = 1..=count`.
    pub fn flat_roots(&self) -> Vec<(f64, usize)> {
        let mut out = Vec::with_capacity(self.count);
        for r in &self.roots {
            for _ in 0..r.multiplicity {
                if out.len() == self.count {
                    return out;
                }
                out.push((r.value, r.multiplicity));
            }
        }
        out
    }

    pub fn r(&self) -> Vec<f64> {
        self.flat_roots().into_iter().map(|(r, _)| r).collect()
    }

    pub fn mu(&self) -> Vec<f64> {
        self.r().into_iter().map(|r| self.leading_factor * r.powi(2 * self.ell as i32)).collect()
    }

    pub fn lambda(&self) -> Vec<f64> {
        self.mu().into_iter().map(|m| 1.0 / m).collect()
    }

    /// Build directly from a list of eigenvalues `μ_n` (nondecreasing).
    pub fn from_mu(mu: &[f64], ell: usize, leading_factor: f64) -> Self {
        let mut roots: Vec<Root> = Vec::new();
        for &m in mu {
            let r = (m / leading_factor).powf(1.0 / (2 * ell) as f64);
            match roots.last_mut() {
                Some(last) if (last.value - r).abs() <= 1e-13 * r => last.multiplicity += 1,
                _ => roots.push(Root { value: r, multiplicity: 1 }),
            }
        }
        SpectrumResult { roots, count: mu.len(), ell, leading_factor, phases: None }
    }
}

pub const SCAN_START: f64 = 0.05;
const STEPS_PER_PI: f64 = 48.0;
const DOUBLE_ROOT_TOL: f64 = 1e-8;

fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b || (b - a) <= 1e-13 * b.max(1.0) * 0.25 {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// First `count` positive real roots of the characteristic determinant.
pub fn positive_roots(f: &CharFunction, count: usize) -> Result<SpectrumResult> {
    scan_roots(f, count, SCAN_START)
}

pub fn scan_roots(f: &CharFunction, count: usize, start: f64) -> Result<SpectrumResult> {
    if count == 0 {
        return Err(Error::InvalidParameter("root count must be positive".into()));
    }
    let step = PI / STEPS_PER_PI;
    let cap = PI * (2.0 * count as f64 + 8.0 * f.ell as f64 + 40.0);
    let mut roots: Vec<Root> = Vec::new();
    let mut found = 0usize;
    let mut lo = start;
    // expected extent of the first `count` roots, extended if needed
    let mut hi = (PI * (count as f64 + 2.0 * f.ell as f64 + 4.0)).min(cap);
    let mut carry: Option<(f64, f64, f64)> = None;
    let window = (STEPS_PER_PI as usize) * 2;
    while found < count {
        let cells = ((hi - lo) / step).ceil() as usize;
        let xs: Vec<f64> = (0..=cells).map(|i| lo + i as f64 * step).collect();
        let samples: Vec<(f64, f64)> = xs.par_iter().map(|&x| f.real_reduction(x)).collect();
        let mut pts: Vec<(f64, f64, f64)> = Vec::with_capacity(xs.len() + 1);
        if let Some(c) = carry {
            pts.push(c);
        }
        pts.extend(xs.iter().zip(&samples).map(|(&x, &(h, g))| (x, h, g)));
        let scale_at = |i: usize| -> f64 {
            let a = i.saturating_sub(window);
            let b = (i + window).min(pts.len() - 1);
            pts[a..=b].iter().map(|p| p.1.abs()).fold(0.0, f64::max)
        };
        for i in 0..pts.len() - 1 {
            let (a, ha, ga) = pts[i];
            let (b, hb, gb) = pts[i + 1];
            let mut cell_roots: Vec<Root> = Vec::new();
            if (ga > 0.0) != (gb > 0.0) {
                let c = bisect(|x| f.real_reduction(x).1, a, b, ga);
                let hc = f.real_reduction(c).0;
                if hc.abs() <= DOUBLE_ROOT_TOL * scale_at(i) {
                    cell_roots.push(Root { value: c, multiplicity: 2 });
                } else {
                    if (ha > 0.0) != (hc > 0.0) && ha != 0.0 {
                        cell_roots.push(Root { value: bisect(|x| f.real_reduction(x).0, a, c, ha), multiplicity: 1 });
                    }
                    if (hc > 0.0) != (hb > 0.0) {
                        cell_roots.push(Root { value: bisect(|x| f.real_reduction(x).0, c, b, hc), multiplicity: 1 });
                    }
                }
            } else if ha != 0.0 && ((ha > 0.0) != (hb > 0.0) || hb == 0.0) {
                let r = if hb == 0.0 { b } else { bisect(|x| f.real_reduction(x).0, a, b, ha) };
                cell_roots.push(Root { value: r, multiplicity: 1 });
            }
            for r in cell_roots {
                if found >= count {
                    break;
                }
                found += r.multiplicity;
                roots.push(r);
            }
            if found >= count {
                break;
            }
        }
        if found >= count {
            break;
        }
        if hi >= cap {
            return Err(Error::BracketExhaustion { found, wanted: count, cap });
        }
        carry = pts.last().copied();
        lo = carry.map_or(hi, |p| p.0) + step;
        hi = (hi * 1.25 + 10.0 * step).min(cap);
    }
    let phases = theta_coefficients(&f.bvp).ok().map(|q| rho_pair(&q));
    Ok(SpectrumResult { roots, count, ell: f.ell, leading_factor: f.leading_factor, phases })
}

/// Spectrum of a catalog process (zero mode excluded).
pub fn spectrum(spec: &ProcessSpec, count: usize) -> Result<SpectrumResult> {
    positive_roots(&char_function(spec), count)
}

/// `⌊(R−ρ′)/2π⌋ + ⌊(R−ρ″)/2π⌋ + 2`, the number of branch points `2πk+ρ ∈ (0, R]`.
pub fn predicted_count(phases: PhasePair, zeta_max: f64) -> i64 {
    let c = |rho: f64| -> i64 {
        // k ≥ 1 when ρ ≤ 0, k ≥ 0 when ρ > 0
        let n = ((zeta_max - rho) / (2.0 * PI)).floor() as i64;
        if rho > 0.0 {
            n + 1
        } else {
            n
        }
    };
    c(phases.rho_prime) + c(phases.rho_second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog_process, Family, ProcessParams};

    fn proc(f: Family, p: ProcessParams) -> ProcessSpec {
        catalog_process(f, &p).unwrap()
    }

    #[test]
    fn scalar_slepian_matches_closed_form() {
        for &c in &[0.5, 1.0, 2.0] {
            let s = proc(Family::Slepian, ProcessParams::c(c));
            let f = char_function(&s);
            let mut ratio = None;
            for &z in &[0.7, 1.9, 4.4, 10.3] {
                let fc = 2.0 + 2.0 * f64::cos(z) - (2.0 * c - 1.0) * z * f64::sin(z);
                let d = f.det(Complex64::new(z, 0.0));
                assert!(d.im.abs() < 1e-12 * d.norm().max(1.0) || d.re.abs() < 1e-12 * d.norm());
                let r = d.norm() / fc.abs();
                let r0 = *ratio.get_or_insert(r);
                assert!((r - r0).abs() < 1e-12 * r0, "c={c} z={z}");
            }
            for n in 1..6 {
                let z = (2 * n - 1) as f64 * PI;
                assert!(f.det(Complex64::new(z, 0.0)).norm() < 1e-12 * z);
            }
        }
    }

    #[test]
    fn bridge_vanishes_on_pi_n() {
        let s = proc(Family::BridgeTowerIntegrated, ProcessParams::l(0));
        let f = char_function(&s);
        for n in 1..5 {
            assert!(f.det(Complex64::new(PI * n as f64, 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn double_roots_of_half_slepian() {
        let s = proc(Family::Slepian, ProcessParams::c(0.5));
        let sp = spectrum(&s, 4).unwrap();
        assert_eq!(sp.roots.len(), 2);
        assert!(sp.roots.iter().all(|r| r.multiplicity == 2));
        assert!((sp.roots[0].value - PI).abs() < 1e-10);
        assert!((sp.roots[1].value - 3.0 * PI).abs() < 1e-10);
        let mu = spec_mu(&s, 2);
        assert!((mu[0] - PI * PI / 2.0).abs() < 1e-9 && (mu[1] - PI * PI / 2.0).abs() < 1e-9);
    }

    fn spec_mu(s: &ProcessSpec, n: usize) -> Vec<f64> {
        spectrum(s, n).unwrap().mu()
    }

    #[test]
    fn bridge_lambda_one() {
        let s = proc(Family::BridgeTowerIntegrated, ProcessParams::l(0));
        let l = spectrum(&s, 3).unwrap().lambda();
        assert!((l[0] - 0.101_321_183_6).abs() < 1e-10);
    }

    #[test]
    fn centered_bridge_is_double() {
        let s = proc(Family::BridgeCenteredTower, ProcessParams::l(0));
        let sp = spectrum(&s, 3).unwrap();
        let flat = sp.flat_roots();
        assert_eq!(flat.len(), 3);
        assert!((flat[0].0 - 2.0 * PI).abs() < 1e-10 && flat[0].1 == 2);
        assert!((flat[2].0 - 4.0 * PI).abs() < 1e-10 && flat[2].1 == 2);
    }
}
