//! Distortion constants: the regularized eigenvalue product and its closed forms.

use crate::catalog::{beta_orders, BetaFamily, Family, ProcessSpec};
use crate::error::{Error, Result};
use crate::special::{gamma, hurwitz_zeta, ln_gamma, psi_product, root_of_unity, vandermonde_abs};
use crate::spectral::{CharFunction, SpectrumResult};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

pub use crate::special::{psi_delta, vandermonde_abs as vandermonde};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistortionMethod {
    NumericProduct,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistortionResult {
    pub value: f64,
    pub method: DistortionMethod,
    pub terms_used: usize,
    /// Bound on the log-error of the tail completion.
    pub tail_estimate: f64,
}

impl DistortionResult {
    fn exact(value: f64) -> Self {
        DistortionResult { value, method: DistortionMethod::ClosedForm, terms_used: 0, tail_estimate: 0.0 }
    }
}

/// Default fit order for root deviations in the tail.
pub const DEFAULT_TAIL_ORDER: usize = 3;
const FIT_POINTS: usize = 48;
const CORRECTION_TERMS: usize = 20_000;

/// Slot `2πk + ρ_σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Slot {
    pub class: usize,
    pub k: i64,
}

pub(crate) fn slot_value(phases: &[f64; 2], s: Slot) -> f64 {
    2.0 * PI * s.k as f64 + phases[s.class]
}

/// Greedy nearest-slot assignment of ascending roots to the two branches.
pub(crate) fn assign_slots(roots: &[f64], phases: &[f64; 2]) -> Vec<Slot> {
    let mut used: Vec<Slot> = Vec::new();
    let mut out = Vec::with_capacity(roots.len());
    for &r in roots {
        let mut best: Option<(f64, Slot)> = None;
        for class in 0..2 {
            let k0 = ((r - phases[class]) / (2.0 * PI)).round() as i64;
            for k in [k0 - 1, k0, k0 + 1] {
                let s = Slot { class, k };
                if used.contains(&s) {
                    continue;
                }
                let d = (r - slot_value(phases, s)).abs();
                if best.is_none_or(|(bd, _)| d < bd - 1e-9) {
                    best = Some((d, s));
                }
            }
        }
        let s = best.expect("a free slot always exists").1;
        used.push(s);
        if used.len() > 16 {
            used.remove(0);
        }
        out.push(s);
    }
    out
}

/// Least-squares fit of `d ≈ Σ_{s=1}^{order} c_s x^s`.
fn fit_deviation(xs: &[f64], ds: &[f64], order: usize) -> Vec<f64> {
    if order == 0 || xs.is_empty() {
        return Vec::new();
    }
    let order = order.min(xs.len());
    let xmax = xs.iter().cloned().fold(0.0, f64::max);
    let a = DMatrix::from_fn(xs.len(), order, |i, j| (xs[i] / xmax).powi(j as i32 + 1));
    let b = DVector::from_column_slice(ds);
    let svd = a.svd(true, true);
    match svd.solve(&b, 1e-14) {
        Ok(c) => (0..order).map(|j| c[j] / xmax.powi(j as i32 + 1)).collect(),
        Err(_) => vec![0.0; order],
    }
}

struct TailModel {
    phases: [f64; 2],
    coeffs: [Vec<f64>; 2],
}

impl TailModel {
    fn root(&self, s: Slot) -> f64 {
        let a = slot_value(&self.phases, s);
        let x = 1.0 / a;
        a + self.coeffs[s.class].iter().enumerate().map(|(j, c)| c * x.powi(j as i32 + 1)).sum::<f64>()
    }

    /// `Σ_{k > k_last} log(r_k / a_k)` for one branch.
    fn correction(&self, class: usize, k_last: i64) -> f64 {
        let c = &self.coeffs[class];
        if c.iter().all(|&v| v == 0.0) {
            return 0.0;
        }
        let mut sum = 0.0;
        let mut k = k_last + 1;
        for _ in 0..CORRECTION_TERMS {
            let s = Slot { class, k };
            let a = slot_value(&self.phases, s);
            sum += (self.root(s) / a).ln();
            k += 1;
        }
        // Σ_{k≥K} c_s a_k^{−s−1},  a_k = 2π(k + ρ/2π)
        let shift = k as f64 + self.phases[class] / (2.0 * PI);
        for (j, cj) in c.iter().enumerate() {
            let p = (j + 2) as f64;
            sum += cj * (2.0 * PI).powf(-p) * hurwitz_zeta(p, shift);
        }
        sum
    }
}

struct Estimate {
    log_c: f64,
    mismatch: f64,
}

/// `log C` with the product cut after `n_cut` computed roots.
fn estimate(zetas: &[f64], slots: &[Slot], n_cut: usize, ell: usize, c0: f64, model: &TailModel) -> Estimate {
    let l = ell as f64;
    let head: f64 = zetas[..n_cut]
        .iter()
        .enumerate()
        .map(|(i, &z)| (z / (PI * (i as f64 + 1.0 + c0))).ln())
        .sum();
    let mut last = [i64::MIN; 2];
    for s in &slots[..n_cut] {
        last[s.class] = last[s.class].max(s.k);
    }
    for (class, k) in last.iter_mut().enumerate() {
        if *k == i64::MIN {
            // branch not seen yet: start from the slot just below the first root
            let r0 = zetas[0];
            *k = ((r0 - model.phases[class]) / (2.0 * PI)).floor() as i64 - 1;
        }
    }
    let mut next = [
        slot_value(&model.phases, Slot { class: 0, k: last[0] + 1 }),
        slot_value(&model.phases, Slot { class: 1, k: last[1] + 1 }),
    ];
    next.sort_by(f64::total_cmp);
    let (a, b) = (next[0] / (2.0 * PI), next[1] / (2.0 * PI));
    let n = n_cut as f64;
    let (c, d) = ((n + 1.0 + c0) / 2.0, (n + 2.0 + c0) / 2.0);
    let mismatch = a + b - c - d;
    let pair = ln_gamma(c) + ln_gamma(d) - ln_gamma(a) - ln_gamma(b);
    let corr = model.correction(0, last[0]) + model.correction(1, last[1]);
    Estimate { log_c: l * (head + pair + corr), mismatch }
}

/// `C_dist = ∏ μ_n^{1/2} / (π/ϑ (n + ℓ − 1 − ϰ/2ℓ))^ℓ`, tail completed from the two branches.
pub fn distortion_numeric(
    spectrum: &SpectrumResult,
    ell: usize,
    kappa: usize,
    theta_ell: f64,
    tail_order: usize,
) -> Result<DistortionResult> {
    if kappa >= 2 * ell * ell {
        return Err(Error::KappaTooLarge { kappa, bound: 2 * ell * ell });
    }
    let n = spectrum.count;
    if n < 50 {
        return Err(Error::InvalidParameter(format!("distortion product needs at least 50 eigenvalues, got {n}")));
    }
    let phases = spectrum
        .phases
        .ok_or_else(|| Error::InvalidParameter("spectrum carries no phase pair".into()))?;
    let zetas: Vec<f64> = spectrum
        .mu()
        .iter()
        .map(|&m| theta_ell * m.powf(1.0 / (2 * ell) as f64))
        .collect();
    let c0 = ell as f64 - 1.0 - kappa as f64 / (2 * ell) as f64;
    let ph = [phases.rho_prime, phases.rho_second];
    let slots = assign_slots(&zetas, &ph);
    // the deviation fit uses the last roots of each branch
    let mut xs = [Vec::new(), Vec::new()];
    let mut ds = [Vec::new(), Vec::new()];
    for (z, s) in zetas.iter().zip(&slots).rev() {
        if xs[s.class].len() < FIT_POINTS {
            let a = slot_value(&ph, *s);
            xs[s.class].push(1.0 / a);
            ds[s.class].push(z - a);
        }
    }
    let worst = ds.iter().flatten().fold(0.0f64, |m, d| m.max(d.abs()));
    if worst > 0.25 {
        return Err(Error::Divergence(format!(
            "roots deviate from the two-branch asymptotics by {worst:.3e}"
        )));
    }
    let model_of = |order: usize| TailModel {
        phases: ph,
        coeffs: [fit_deviation(&xs[0], &ds[0], order), fit_deviation(&xs[1], &ds[1], order)],
    };
    let model = model_of(tail_order);
    let full = estimate(&zetas, &slots, n, ell, c0, &model);
    if full.mismatch.abs() > 1e-6 {
        return Err(Error::Divergence(format!(
            "pair sums do not cancel (mismatch {:.6}): wrong kappa or incomplete spectrum",
            full.mismatch
        )));
    }
    let lower = estimate(&zetas, &slots, n, ell, c0, &model_of(tail_order.saturating_sub(1)));
    let cut = (3 * n).div_ceil(4);
    let early = estimate(&zetas, &slots, cut, ell, c0, &model);
    let cauchy = (full.log_c - early.log_c).abs();
    if early.mismatch.abs() > 1e-6 || cauchy > 1e-3 {
        return Err(Error::Divergence(format!("partial log-products are not Cauchy (jump {cauchy:.3e})")));
    }
    let tail_estimate = (full.log_c - lower.log_c).abs() + cauchy + 1e-13 * n as f64;
    Ok(DistortionResult {
        value: full.log_c.exp(),
        method: DistortionMethod::NumericProduct,
        terms_used: n,
        tail_estimate,
    })
}

fn omega_powers(ks: &[usize], ell: usize) -> Vec<Complex64> {
    ks.iter().map(|&k| root_of_unity(k as i64, ell)).collect()
}

pub(crate) fn prod_abs_sq(ks: &[usize], ell: usize, shift: Complex64) -> f64 {
    ks.iter().map(|&k| (shift + root_of_unity(k as i64, ell)).norm_sqr()).product()
}

fn beta_family(spec: &ProcessSpec) -> Option<BetaFamily> {
    match spec.family {
        Family::Slepian | Family::SlepianIntegrated => Some(BetaFamily::Slepian),
        Family::BridgeTowerIntegrated if spec.l == 1 => Some(BetaFamily::Bridge),
        Family::WienerTowerIntegrated if spec.l == 2 => Some(BetaFamily::Wiener2),
        _ => None,
    }
}

/// `(k_j), (k'_j), |𝔙(ω^{k_j})|` for an integrated family; empty when m = 0.
pub(crate) fn beta_data(spec: &ProcessSpec) -> Result<(Vec<usize>, Vec<usize>, f64)> {
    if spec.m == 0 {
        return Ok((Vec::new(), Vec::new(), 1.0));
    }
    let fam = beta_family(spec).ok_or_else(|| Error::NoClosedForm(spec.label()))?;
    let (k, kp) = beta_orders(spec.m, &spec.beta, fam)?;
    let v = vandermonde_abs(&omega_powers(&k, spec.ell));
    Ok((k, kp, v))
}

/// Closed-form `C_dist` where one is known.
pub fn distortion_closed_form(spec: &ProcessSpec) -> Result<DistortionResult> {
    let none = || Error::NoClosedForm(spec.label());
    let ell = spec.ell;
    let w = root_of_unity(1, ell);
    let one = Complex64::new(1.0, 0.0);
    let c2 = match spec.family {
        Family::Slepian | Family::SlepianIntegrated => {
            let m = spec.m as f64;
            let (k, kp, v) = beta_data(spec)?;
            match spec.slepian_offset() {
                None => {
                    let big_m = v * v * (prod_abs_sq(&k, ell, one) + prod_abs_sq(&kp, ell, one));
                    4.0 * (m + 1.0).powf(m + 1.0) / big_m
                }
                Some(_) if spec.m == 0 => return Err(none()),
                Some(off) => {
                    let tau = 1.0 / off;
                    let delta = -(m + 2.0) / (2.0 * m + 2.0);
                    2.0 * tau * (m + 1.0).powf(m) * gamma(1.0 + delta).powf(2.0 * m + 2.0) * (one - w).norm()
                        / (PI.powf(m + 2.0) * v * v)
                }
            }
        }
        Family::BridgeTowerIntegrated if spec.m == 0 => {
            let l = spec.l as f64;
            let delta = l / (2.0 * l + 2.0);
            gamma(1.0 + delta).powf(2.0 * l + 2.0) * PI.powf(l) * (one - w).norm() * (2.0 * l + 2.0)
                / 2f64.powf(l + 2.0)
        }
        Family::BridgeTowerIntegrated if spec.l == 1 => {
            let m = spec.m as f64;
            let (k, kp, v) = beta_data(spec)?;
            let delta = -(m - 1.0) / (2.0 * m + 4.0);
            let w3 = root_of_unity(3, ell);
            let frak_m = v * v * (2.0 * m + 4.0) / (one - w3).norm() * (prod_abs_sq(&k, ell, one) + prod_abs_sq(&kp, ell, one));
            gamma(1.0 + delta).powf(2.0 * m + 4.0) * (2.0 * m + 4.0).powf(m + 2.0)
                / (2f64.powf(m + 2.0) * PI.powf(m - 1.0) * frak_m)
        }
        Family::WienerTowerIntegrated if spec.m == 0 && spec.l == 0 => 1.0,
        Family::WienerTowerIntegrated if spec.m == 0 => {
            let l = spec.l as f64;
            let delta = (l - 1.0) / (2.0 * l + 2.0);
            let bb_m = if spec.l % 2 == 0 {
                (one - w).norm_sqr()
            } else {
                (one - root_of_unity(2, ell)).norm_sqr() / 4.0
            };
            gamma(1.0 + delta).powf(2.0 * l + 2.0) * PI.powf(l - 1.0) * bb_m * (2.0 * l + 2.0).powf(l + 1.0)
                / (2f64.powf(l + 3.0) * (2.0 * l + 2.0).powf(l - 1.0))
        }
        Family::WienerTowerIntegrated if spec.l == 2 => {
            let m = spec.m as f64;
            let (k, kp, v) = beta_data(spec)?;
            let delta = -(m - 1.0) / (2.0 * m + 6.0);
            let geom = (one - w).norm() * (one - root_of_unity(2, ell)).norm_sqr() * (one - root_of_unity(5, ell)).norm();
            let bb_m1 = v * v * (2.0 * m + 6.0).powi(2) / geom * (prod_abs_sq(&k, ell, w) + prod_abs_sq(&kp, ell, w));
            gamma(1.0 + delta).powf(2.0 * m + 6.0) * (2.0 * m + 6.0).powf(m + 3.0)
                / (2f64.powf(m + 3.0) * PI.powf(m - 1.0) * bb_m1)
        }
        _ => return Err(none()),
    };
    Ok(DistortionResult::exact(c2.sqrt()))
}

/// Comparison data `|D(ζ)| / |ζ^power Ψ_δ(ζ)| → constant` along rays.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RayLimit {
    pub delta: f64,
    pub power: i32,
    pub constant: f64,
}

pub fn ray_limit(spec: &ProcessSpec) -> Result<RayLimit> {
    let none = || Error::NoClosedForm(spec.label());
    let ell = spec.ell;
    let w = root_of_unity(1, ell);
    let one = Complex64::new(1.0, 0.0);
    Ok(match spec.family {
        Family::Slepian | Family::SlepianIntegrated => {
            let m = spec.m as f64;
            let (k, kp, v) = beta_data(spec)?;
            match spec.slepian_offset() {
                None => {
                    let big_m = v * v * (prod_abs_sq(&k, ell, one) + prod_abs_sq(&kp, ell, one));
                    RayLimit { delta: -0.5, power: 0, constant: 2f64.powf(m + 1.0) * big_m }
                }
                Some(_) if spec.m == 0 => return Err(none()),
                Some(off) => {
                    let delta = -(m + 2.0) / (2.0 * m + 2.0);
                    // the determinant here carries an extra factor (2c−1) iζ in one row
                    let c = 2f64.powf(m + 1.0) * v * v * (2.0 * m + 2.0)
                        / (gamma(1.0 + delta).powf(2.0 * m + 2.0) * PI.powf((2.0 * m + 2.0) * delta) * (one - w).norm());
                    RayLimit { delta, power: 0, constant: off * c }
                }
            }
        }
        Family::BridgeTowerIntegrated if spec.m == 0 => {
            let l = spec.l as f64;
            let delta = l / (2.0 * l + 2.0);
            let c = 2f64.powf(l + 2.0) * (2.0 * l + 2.0).powf(l)
                / (gamma(1.0 + delta).powf(2.0 * l + 2.0) * PI.powf(l) * (one - w).norm());
            RayLimit { delta, power: 2 * spec.l as i32 + 1, constant: c }
        }
        Family::BridgeTowerIntegrated if spec.l == 1 => {
            let m = spec.m as f64;
            let (k, kp, v) = beta_data(spec)?;
            let delta = -(m - 1.0) / (2.0 * m + 4.0);
            let w3 = root_of_unity(3, ell);
            let frak_m = v * v * (2.0 * m + 4.0) / (one - w3).norm() * (prod_abs_sq(&k, ell, one) + prod_abs_sq(&kp, ell, one));
            let c = 2f64.powf(m + 2.0) * PI.powf(m - 1.0) * frak_m / gamma(1.0 + delta).powf(2.0 * m + 4.0);
            RayLimit { delta, power: 3, constant: c }
        }
        Family::WienerTowerIntegrated if spec.m == 0 && spec.l >= 1 => {
            let l = spec.l as f64;
            let delta = (l - 1.0) / (2.0 * l + 2.0);
            let bb_m = if spec.l % 2 == 0 {
                (one - w).norm_sqr()
            } else {
                (one - root_of_unity(2, ell)).norm_sqr() / 4.0
            };
            let c = 2f64.powf(l + 3.0) * (2.0 * l + 2.0).powf(l - 1.0)
                / (gamma(1.0 + delta).powf(2.0 * l + 2.0) * PI.powf(l - 1.0) * bb_m);
            RayLimit { delta, power: 2 * spec.l as i32, constant: c }
        }
        Family::WienerTowerIntegrated if spec.l == 2 => {
            let m = spec.m as f64;
            let (k, kp, v) = beta_data(spec)?;
            let delta = -(m - 1.0) / (2.0 * m + 6.0);
            let geom = (one - w).norm() * (one - root_of_unity(2, ell)).norm_sqr() * (one - root_of_unity(5, ell)).norm();
            let bb_m1 = v * v * (2.0 * m + 6.0).powi(2) / geom * (prod_abs_sq(&k, ell, w) + prod_abs_sq(&kp, ell, w));
            let c = 2f64.powf(m + 3.0) * PI.powf(m - 1.0) * bb_m1 / gamma(1.0 + delta).powf(2.0 * m + 6.0);
            RayLimit { delta, power: 4, constant: c }
        }
        _ => return Err(none()),
    })
}

/// `|D(ζ)| / |ζ^p Ψ_δ(ζ)|` at `ζ = R e^{iπ/(4ℓ)}`.
pub fn ray_ratio(f: &CharFunction, limit: &RayLimit, radius: f64) -> f64 {
    let z = Complex64::from_polar(radius, PI / (4 * f.ell) as f64);
    let d = f.det(z).norm();
    let psi = psi_product(limit.delta, f.ell, z).norm();
    d / (z.norm().powi(limit.power) * psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog_process, ProcessParams};
    use crate::spectral::{char_function, spectrum};

    fn proc(f: Family, p: ProcessParams) -> ProcessSpec {
        catalog_process(f, &p).unwrap()
    }

    #[test]
    fn trivial_products() {
        let bridge = SpectrumResult::from_mu(&(1..=200).map(|n| (PI * n as f64).powi(2)).collect::<Vec<_>>(), 1, 1.0);
        let mut b = bridge.clone();
        b.phases = Some(crate::bvp_algebra::PhasePair { rho_prime: 0.0, rho_second: -PI });
        let r = distortion_numeric(&b, 1, 0, 1.0, 3).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12, "{}", r.value);
        let wiener: Vec<f64> = (1..=200).map(|n| (PI * (n as f64 - 0.5)).powi(2)).collect();
        let mut w = SpectrumResult::from_mu(&wiener, 1, 1.0);
        w.phases = Some(crate::bvp_algebra::PhasePair { rho_prime: PI / 2.0, rho_second: -PI / 2.0 });
        let r = distortion_numeric(&w, 1, 1, 1.0, 3).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn half_slepian_is_sqrt2() {
        let s = proc(Family::Slepian, ProcessParams::c(0.5));
        let sp = spectrum(&s, 200).unwrap();
        let r = distortion_numeric(&sp, 1, 1, s.theta_ell, 3).unwrap();
        assert!((r.value - 2f64.sqrt()).abs() < 1e-9, "{}", r.value);
        assert!((distortion_closed_form(&s).unwrap().value - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn wrong_kappa_alarms() {
        let s = proc(Family::WienerTowerIntegrated, ProcessParams::l(1));
        let sp = spectrum(&s, 100).unwrap();
        assert!(matches!(distortion_numeric(&sp, 2, 3, 1.0, 3), Err(Error::Divergence(_))));
        assert!(distortion_numeric(&sp, 2, 4, 1.0, 3).is_ok());
        assert!(matches!(distortion_numeric(&sp, 2, 8, 1.0, 3), Err(Error::KappaTooLarge { .. })));
    }

    #[test]
    fn bridge_closed_forms() {
        let b0 = proc(Family::BridgeTowerIntegrated, ProcessParams::l(0));
        assert!((distortion_closed_form(&b0).unwrap().value - 1.0).abs() < 1e-14);
        let w1 = proc(Family::WienerTowerIntegrated, ProcessParams::l(1));
        assert!((distortion_closed_form(&w1).unwrap().value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ray_limits_approach() {
        let cases = [
            proc(Family::Slepian, ProcessParams::c(0.5)),
            proc(Family::SlepianIntegrated, ProcessParams::c(0.5).with_m(2, &[0, 1])),
            proc(Family::SlepianIntegrated, ProcessParams::c(2.0).with_m(1, &[0])),
            proc(Family::BridgeTowerIntegrated, ProcessParams::l(1)),
            proc(Family::BridgeTowerIntegrated, ProcessParams::l(1).with_m(1, &[1])),
            proc(Family::WienerTowerIntegrated, ProcessParams::l(2)),
            proc(Family::WienerTowerIntegrated, ProcessParams::l(2).with_m(1, &[0])),
        ];
        for s in &cases {
            let lim = ray_limit(s).unwrap();
            let f = char_function(s);
            let dev: Vec<f64> = [20.0, 40.0, 80.0]
                .iter()
                .map(|&r| (ray_ratio(&f, &lim, r) / lim.constant - 1.0).abs())
                .collect();
            assert!(dev[0] > dev[1] && dev[1] > dev[2] && dev[2] < 0.05, "{}: {dev:?}", s.label());
        }
    }
}
