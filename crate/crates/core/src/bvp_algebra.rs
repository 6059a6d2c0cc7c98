//! The ξ-quadratic `θ₁ξ + θ₀ + θ₋₁ξ⁻¹` whose roots fix the two phase branches.

use crate::catalog::{BoundaryCondition, BvpSpec};
use crate::error::{Error, Result};
use crate::linalg;
use crate::special::root_of_unity;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaQuadratic {
    pub theta1: Complex64,
    pub theta0: Complex64,
    pub theta_minus1: Complex64,
}

impl ThetaQuadratic {
    pub fn from_real(t1: f64, t0: f64, tm1: f64) -> Self {
        ThetaQuadratic {
            theta1: Complex64::new(t1, 0.0),
            theta0: Complex64::new(t0, 0.0),
            theta_minus1: Complex64::new(tm1, 0.0),
        }
    }

    pub fn eval(&self, xi: Complex64) -> Complex64 {
        self.theta1 * xi + self.theta0 + self.theta_minus1 / xi
    }

    pub fn scale(&self) -> f64 {
        self.theta1.norm().max(self.theta0.norm()).max(self.theta_minus1.norm())
    }

    /// Relative defect of `θ₁ = −ω₁^ϰ θ₋₁`.
    pub fn identity_defect(&self, ell: usize, kappa: usize) -> f64 {
        let w = root_of_unity(kappa as i64, ell);
        (self.theta1 + w * self.theta_minus1).norm() / self.theta1.norm().max(self.theta_minus1.norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhasePair {
    pub rho_prime: f64,
    pub rho_second: f64,
}

/// The 2ℓ×2ℓ leading-coefficient matrix at a given ξ, rows in ascending order.
fn theta_matrix(bvp: &BvpSpec, xi: Complex64) -> Vec<Complex64> {
    let ell = bvp.ell;
    let n = 2 * ell;
    let mut a = Vec::with_capacity(n * n);
    for bc in bvp.conditions.iter().rev() {
        let (al, ga) = (Complex64::new(bc.alpha, 0.0), Complex64::new(bc.gamma, 0.0));
        for j in 0..n {
            let wk = root_of_unity((j * bc.k) as i64, ell);
            let v = if j == 0 {
                al + xi * ga
            } else if j < ell {
                al * wk
            } else if j == ell {
                wk * (al + ga / xi)
            } else {
                ga * wk
            };
            a.push(v);
        }
    }
    a
}

pub fn theta_coefficients(bvp: &BvpSpec) -> Result<ThetaQuadratic> {
    bvp.check_normalized()?;
    let n = 2 * bvp.ell;
    let samples = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0)];
    let mut sys = Vec::with_capacity(9);
    let mut rhs = Vec::with_capacity(3);
    for &xi in &samples {
        sys.extend_from_slice(&[xi, Complex64::new(1.0, 0.0), 1.0 / xi]);
        rhs.push(linalg::det(theta_matrix(bvp, xi), n));
    }
    let x = linalg::solve(sys, rhs, 3).ok_or(Error::SingularExtraction)?;
    let q = ThetaQuadratic { theta1: x[0], theta0: x[1], theta_minus1: x[2] };
    let row_scale: f64 = bvp.conditions.iter().map(|c| c.alpha.abs().max(c.gamma.abs())).product();
    if q.theta1.norm() <= 1e-12 * row_scale || q.theta_minus1.norm() <= 1e-12 * row_scale {
        return Err(Error::Irregular);
    }
    Ok(q)
}

fn reduce_phase(x: f64) -> f64 {
    let mut r = x.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    r
}

pub fn rho_pair(q: &ThetaQuadratic) -> PhasePair {
    let (a, b, c) = (q.theta1, q.theta0, q.theta_minus1);
    let disc = (b * b - 4.0 * a * c).sqrt();
    // stable quadratic formula
    let s = if (b.conj() * disc).re >= 0.0 { b + disc } else { b - disc };
    let (x1, x2) = if s.norm() == 0.0 {
        let r = (-c / a).sqrt();
        (r, -r)
    } else {
        let x1 = -s / (2.0 * a);
        (x1, -2.0 * c / s)
    };
    let (p1, p2) = (reduce_phase(x1.arg()), reduce_phase(x2.arg()));
    PhasePair { rho_prime: p1.max(p2), rho_second: p1.min(p2) }
}

/// `|ξ|` of both roots, which is 1 for the self-adjoint catalog problems.
pub fn root_moduli(q: &ThetaQuadratic) -> (f64, f64) {
    let (a, b, c) = (q.theta1, q.theta0, q.theta_minus1);
    let disc = (b * b - 4.0 * a * c).sqrt();
    ((-b + disc).norm() / (2.0 * a.norm()), (-b - disc).norm() / (2.0 * a.norm()))
}

/// Distance of `ρ′+ρ″ − (2πℓ − 3π − πϰ/ℓ)` to `2πℤ`.
pub fn verify_rho_sum(bvp: &BvpSpec) -> Result<f64> {
    let kappa: usize = bvp.conditions.iter().map(|c| c.k).sum();
    let q = theta_coefficients(bvp)?;
    let p = rho_pair(&q);
    let ell = bvp.ell as f64;
    let target = 2.0 * PI * ell - 3.0 * PI - PI * kappa as f64 / ell;
    Ok(reduce_phase(p.rho_prime + p.rho_second - target).abs())
}

/// Regular normalized systems with random leading coefficients in `[−2, 2]`.
///
/// Orders are drawn uniformly and kept when they satisfy the normalized-form
/// inequalities; systems with `|θ₁| < 1e−6` are rejected and redrawn.
pub fn random_regular_bvp(ell: usize, rng: &mut impl Rng) -> BvpSpec {
    let n = 2 * ell;
    loop {
        let mut ks: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        ks.sort_unstable_by(|a, b| b.cmp(a));
        if (2..n).any(|i| ks[i - 2] <= ks[i]) {
            continue;
        }
        let conds = ks
            .iter()
            .map(|&k| BoundaryCondition::new(k, rng.gen_range(-2.0..=2.0), rng.gen_range(-2.0..=2.0)))
            .collect();
        let Ok(spec) = BvpSpec::new(ell, 1.0, conds, false) else { continue };
        match theta_coefficients(&spec) {
            Ok(q) if q.theta1.norm() >= 1e-6 => return spec,
            _ => continue,
        }
    }
}

pub fn random_ensemble(ell: usize, count: usize, seed: u64) -> Vec<BvpSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(1_000_003).wrapping_add(ell as u64));
    (0..count).map(|_| random_regular_bvp(ell, &mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog_process, Family, ProcessParams};

    fn close(a: Complex64, b: f64) -> bool {
        (a - Complex64::new(b, 0.0)).norm() < 1e-13
    }

    #[test]
    fn periodic_quadratic() {
        let s = catalog_process(Family::BridgeCenteredTower, &ProcessParams::l(0)).unwrap();
        let q = theta_coefficients(&s.bvp).unwrap();
        assert!(close(q.theta1, 2.0) && close(q.theta0, -4.0) && close(q.theta_minus1, 2.0));
        assert!(q.identity_defect(1, 1) < 1e-15);
        let p = rho_pair(&q);
        assert!(p.rho_prime.abs() < 1e-7 && p.rho_second.abs() < 1e-7);
        assert!(verify_rho_sum(&s.bvp).unwrap() < 1e-7);
    }

    #[test]
    fn plus_minus_i() {
        let p = rho_pair(&ThetaQuadratic::from_real(1.0, 0.0, 1.0));
        assert!((p.rho_prime - PI / 2.0).abs() < 1e-15);
        assert!((p.rho_second + PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn dirichlet_neumann() {
        let s = catalog_process(Family::WienerTowerIntegrated, &ProcessParams::l(0)).unwrap();
        let q = theta_coefficients(&s.bvp).unwrap();
        let p = rho_pair(&q);
        assert!((p.rho_prime - PI / 2.0).abs() < 1e-14);
        assert!((p.rho_second + PI / 2.0).abs() < 1e-14);
        assert!(verify_rho_sum(&s.bvp).unwrap() < 1e-14);
    }

    #[test]
    fn hinged_beam() {
        let s = catalog_process(Family::WienerTowerIntegrated, &ProcessParams::l(1)).unwrap();
        assert!(verify_rho_sum(&s.bvp).unwrap() < 1e-12);
    }

    #[test]
    fn irregular_is_error() {
        let conds = vec![BoundaryCondition::at_zero(1), BoundaryCondition::at_zero(0)];
        let s = BvpSpec::new(1, 1.0, conds, false).unwrap();
        assert_eq!(theta_coefficients(&s), Err(Error::Irregular));
    }

    #[test]
    fn ensemble_is_reproducible() {
        assert_eq!(random_ensemble(2, 5, 7), random_ensemble(2, 5, 7));
    }
}
