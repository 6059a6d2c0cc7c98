//! Small-ball laws `P{X ≤ x} ~ K x^a exp(−E x^{−d})`.

use crate::catalog::{beta_patterns, catalog_process, Family, ProcessParams, ProcessSpec};
use crate::constants::{beta_data, distortion_closed_form, distortion_numeric, prod_abs_sq, DEFAULT_TAIL_ORDER};
use crate::error::{Error, Result};
use crate::special::{gamma, root_of_unity};
use crate::spectral::spectrum;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LawVariable {
    /// `x = ε`, the norm.
    NormEps,
    /// `x = r`, the squared norm.
    SquaredR,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmallBallLaw {
    #[serde(rename = "K")]
    pub k: f64,
    pub a: f64,
    pub d: f64,
    #[serde(rename = "E")]
    pub e: f64,
    pub variable: LawVariable,
}

impl SmallBallLaw {
    pub fn norm(k: f64, a: f64, d: f64, e: f64) -> Self {
        // `+ 0.0` turns −0 into 0
        SmallBallLaw { k, a: a + 0.0, d, e, variable: LawVariable::NormEps }
    }

    pub fn to_squared(self) -> Self {
        match self.variable {
            LawVariable::SquaredR => self,
            LawVariable::NormEps => SmallBallLaw {
                a: self.a / 2.0,
                d: self.d / 2.0,
                variable: LawVariable::SquaredR,
                ..self
            },
        }
    }

    pub fn to_norm(self) -> Self {
        match self.variable {
            LawVariable::NormEps => self,
            LawVariable::SquaredR => SmallBallLaw {
                a: self.a * 2.0,
                d: self.d * 2.0,
                variable: LawVariable::NormEps,
                ..self
            },
        }
    }

    /// Law of `s·X` for `s > 0`.
    pub fn scale(self, s: f64) -> Self {
        SmallBallLaw { k: self.k * s.powf(-self.a), e: self.e * s.powf(self.d), ..self }
    }

    /// `D` with `D^{d+1} = E`, in the squared variable.
    pub fn lemma_d(&self) -> f64 {
        let s = self.to_squared();
        s.e.powf(1.0 / (s.d + 1.0))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.k * x.powf(self.a) * (-self.e * x.powf(-self.d)).exp()
    }

    pub fn log_eval(&self, x: f64) -> f64 {
        self.k.ln() + self.a * x.ln() - self.e * x.powf(-self.d)
    }

    /// Largest field-wise relative difference.
    pub fn rel_diff(&self, other: &SmallBallLaw) -> f64 {
        let o = if self.variable == other.variable {
            *other
        } else {
            match self.variable {
                LawVariable::NormEps => other.to_norm(),
                LawVariable::SquaredR => other.to_squared(),
            }
        };
        let rel = |x: f64, y: f64| {
            let s = x.abs().max(y.abs());
            if s == 0.0 {
                0.0
            } else {
                (x - y).abs() / s
            }
        };
        rel(self.k, o.k).max(rel(self.e, o.e)).max(rel(self.d, o.d)).max((self.a - o.a).abs())
    }
}

/// `sin(π/2ℓ)`
fn sin_l(ell: usize) -> f64 {
    (PI / (2 * ell) as f64).sin()
}

/// Law from the eigenvalue data of a self-adjoint positive definite BVP.
pub fn general_law(ell: usize, kappa: usize, theta_ell: f64, c_dist: f64) -> Result<SmallBallLaw> {
    if kappa >= 2 * ell * ell {
        return Err(Error::KappaTooLarge { kappa, bound: 2 * ell * ell });
    }
    if c_dist <= 0.0 || c_dist.is_nan() {
        return Err(Error::InvalidParameter(format!("distortion constant must be positive, got {c_dist}")));
    }
    let l = ell as f64;
    let kap = kappa as f64;
    let s = sin_l(ell);
    let gam = -l + (kap + 1.0) / (2.0 * l - 1.0);
    let d = 2.0 / (2.0 * l - 1.0);
    let e = (2.0 * l - 1.0) / 2.0 * (theta_ell / (2.0 * l * s)).powf(2.0 * l / (2.0 * l - 1.0));
    let k = c_dist * (2.0 * PI).powf(l / 2.0) * (PI / theta_ell).powf(l * gam) * s.powf((1.0 + gam) / 2.0)
        / ((2.0 * l - 1.0).sqrt() * (PI / (2.0 * l)).powf(1.0 + gam / 2.0) * gamma(l - kap / (2.0 * l)).powf(l));
    Ok(SmallBallLaw::norm(k, gam, d, e))
}

/// `coef · x_ℓ^{power} / √(π𝔇_ℓ) · exp(−𝔇_ℓ / 2x_ℓ²)` in canonical form, where
/// `x_ℓ = (ε √(w ℓ sin(π/2ℓ)))^{1/(2ℓ−1)}` with `w = 1` (tilde scale) or `w = 2`.
fn from_scaled(ell: usize, tilde: bool, coef: f64, power: f64) -> SmallBallLaw {
    let l = ell as f64;
    let s = sin_l(ell);
    let big_d = (2.0 * l - 1.0) / (2.0 * l * s);
    let w = if tilde { 1.0 } else { 2.0 };
    let base = w * l * s;
    let q = 2.0 * l - 1.0;
    SmallBallLaw::norm(
        coef / (PI * big_d).sqrt() * base.powf(power / (2.0 * q)),
        power / q,
        2.0 / q,
        big_d / 2.0 * base.powf(-1.0 / q),
    )
}

fn sum_prods(k: &[usize], kp: &[usize], ell: usize, shift: Complex64) -> f64 {
    prod_abs_sq(k, ell, shift) + prod_abs_sq(kp, ell, shift)
}

/// The explicit law stated for this process.
pub fn closed_law(spec: &ProcessSpec) -> Result<SmallBallLaw> {
    let none = || Error::NoClosedForm(spec.label());
    let one = Complex64::new(1.0, 0.0);
    let ell = spec.ell;
    Ok(match spec.family {
        Family::Slepian | Family::SlepianIntegrated => {
            let (m, mf) = (spec.m, spec.m as f64);
            match (spec.slepian_offset(), m) {
                (None, 0) => SmallBallLaw::norm(4.0 / PI.sqrt(), 1.0, 2.0, 0.25),
                (Some(off), 0) => SmallBallLaw::norm(4.0 * 2f64.sqrt() / (PI * off).sqrt(), 2.0, 2.0, 0.25),
                (None, _) => {
                    let (k, kp, v) = beta_data(spec)?;
                    let coef = 2.0 * (2.0 * mf + 2.0).powf(mf / 2.0 + 1.0) / (v * sum_prods(&k, &kp, ell, one).sqrt());
                    from_scaled(ell, true, coef, 1.0)
                }
                (Some(off), _) => {
                    let (_, _, v) = beta_data(spec)?;
                    let coef = 2.0 * (2.0 * mf + 2.0).powf((mf + 1.0) / 2.0) * (2.0 * sin_l(ell)).sqrt() / (v * off.sqrt());
                    from_scaled(ell, true, coef, 2.0)
                }
            }
        }
        Family::BridgeCenteredTower => {
            let l = spec.l as f64;
            from_scaled(ell, false, (2.0 * l + 2.0).sqrt(), -(2.0 * l + 1.0))
        }
        Family::BridgeTowerIntegrated if spec.m == 0 => {
            let l = spec.l as f64;
            from_scaled(ell, false, (2.0 * l + 2.0) * sin_l(ell).sqrt(), -2.0 * l)
        }
        Family::BridgeTowerIntegrated if spec.l == 1 => {
            let mf = spec.m as f64;
            let (k, kp, v) = beta_data(spec)?;
            let coef = (2.0 * mf + 4.0).powf((mf + 2.0) / 2.0) * (2.0 * (3.0 * PI / (2.0 * mf + 4.0)).sin()).sqrt()
                / (v * sum_prods(&k, &kp, ell, one).sqrt());
            from_scaled(ell, false, coef, -2.0)
        }
        Family::WienerCenteredTower => closed_law(&bridge_twin(spec)?)?,
        Family::WienerTowerIntegrated if spec.m == 0 && spec.l == 0 => SmallBallLaw::norm(4.0 / PI.sqrt(), 1.0, 2.0, 0.125),
        Family::WienerTowerIntegrated if spec.m == 0 => {
            let l = spec.l as f64;
            let x = PI / (2.0 * l + 2.0);
            let angle = if spec.l % 2 == 1 { x.cos() } else { 1.0 };
            from_scaled(ell, false, (2.0 * l + 2.0).powf(1.5) * x.sin() * angle, -(2.0 * l - 1.0))
        }
        Family::WienerTowerIntegrated if spec.l == 2 => {
            let mf = spec.m as f64;
            let (k, kp, v) = beta_data(spec)?;
            let n = 2.0 * mf + 6.0;
            let w = root_of_unity(1, ell);
            let coef = 4.0 * n.powf((mf + 2.0) / 2.0) * (PI / (mf + 3.0)).sin() * ((PI / n).sin() * (5.0 * PI / n).sin()).sqrt()
                / (v * sum_prods(&k, &kp, ell, w).sqrt());
            from_scaled(ell, false, coef, -3.0)
        }
        _ => return Err(none()),
    })
}

/// `B_l` with `‖W̄_l‖ =d ‖B_l‖`.
fn bridge_twin(spec: &ProcessSpec) -> Result<ProcessSpec> {
    catalog_process(Family::BridgeTowerIntegrated, &ProcessParams::l(spec.l))
}

/// Default number of eigenvalues for a numeric distortion constant.
pub const ASSEMBLY_COUNT: usize = 2000;

/// Law assembled from the spectrum: the general formula with the distortion
/// constant (closed form where known, numeric product otherwise), or the
/// double-spectrum split for centered tops.
pub fn assembled_law(spec: &ProcessSpec, count: usize) -> Result<SmallBallLaw> {
    match spec.family {
        Family::WienerCenteredTower => assembled_law(&bridge_twin(spec)?, count),
        Family::BridgeCenteredTower => {
            // each copy: μ_n = (2πn)^{2ℓ}, i.e. ϑ = 1/2 and offset ℓ−1−ϰ/2ℓ = 0
            let ell = spec.ell;
            let half = general_law(ell, 2 * ell * (ell - 1), 0.5, 1.0)?.to_squared();
            Ok(combine_laws(&half, &half)?.to_norm())
        }
        _ => {
            let c = match distortion_closed_form(spec) {
                Ok(r) => r.value,
                Err(Error::NoClosedForm(_)) => {
                    if spec.kappa >= 2 * spec.ell * spec.ell {
                        return Err(Error::KappaTooLarge { kappa: spec.kappa, bound: 2 * spec.ell * spec.ell });
                    }
                    let sp = spectrum(spec, count)?;
                    distortion_numeric(&sp, spec.ell, spec.kappa, spec.theta_ell, DEFAULT_TAIL_ORDER)?.value
                }
                Err(e) => return Err(e),
            };
            general_law(spec.ell, spec.kappa, spec.theta_ell, c)
        }
    }
}

/// Law of `V₁ + V₂` for independent `V₁, V₂` (squared variable).
pub fn combine_laws(p: &SmallBallLaw, q: &SmallBallLaw) -> Result<SmallBallLaw> {
    if p.variable != LawVariable::SquaredR || q.variable != LawVariable::SquaredR {
        return Err(Error::LawMismatch("combine_laws expects squared-variable laws".into()));
    }
    if (p.d - q.d).abs() > 1e-12 * p.d.abs().max(1.0) {
        return Err(Error::LawMismatch(format!("decay exponents differ: {} vs {}", p.d, q.d)));
    }
    let d = p.d;
    let (d1, d2) = (p.lemma_d(), q.lemma_d());
    let big_d = d1 + d2;
    let a = p.a + q.a - d / 2.0;
    let k = p.k * q.k * (2.0 * PI * d / (d + 1.0)).sqrt() * d1.powf(p.a + 0.5) * d2.powf(q.a + 0.5)
        / big_d.powf(a + 0.5);
    Ok(SmallBallLaw { k, a, d, e: big_d.powf(d + 1.0), variable: LawVariable::SquaredR })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonRatio {
    pub value: f64,
    /// Log-jump between the products at `N/2` and `N`.
    pub jump: f64,
}

/// `lim P{‖A‖ ≤ ε} / P{‖B‖ ≤ ε} = ∏ (μᵃ_n / μᵇ_n)^{1/2}`.
pub fn comparison_ratio(mu_a: &[f64], mu_b: &[f64]) -> Result<ComparisonRatio> {
    if mu_a.len() != mu_b.len() || mu_a.is_empty() {
        return Err(Error::InvalidParameter("eigenvalue sequences must have equal nonzero length".into()));
    }
    let logs: Vec<f64> = mu_a.iter().zip(mu_b).map(|(a, b)| 0.5 * (a / b).ln()).collect();
    let n = logs.len();
    let full: f64 = logs.iter().sum();
    let half: f64 = logs[..n / 2].iter().sum();
    let jump = (full - half).abs();
    if !full.is_finite() || jump > 0.05 || (logs[n - 1].abs() > 1e-2) {
        return Err(Error::Divergence(format!("comparison product does not settle (jump {jump:.3e})")));
    }
    let value = if n >= 8 { (2.0 * full - half).exp() } else { full.exp() };
    Ok(ComparisonRatio { value, jump })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankGroup {
    #[serde(rename = "K")]
    pub k: f64,
    pub patterns: Vec<Vec<u8>>,
}

/// All `2^m` endpoint patterns grouped by equal `K`, largest first.
pub fn rank_beta_patterns(family: Family, params: &ProcessParams) -> Result<Vec<RankGroup>> {
    let m = params.m.unwrap_or(0);
    if m == 0 {
        return Err(Error::InvalidParameter("ranking needs m ≥ 1".into()));
    }
    if m > 12 {
        return Err(Error::InvalidParameter(format!("m = {m} exceeds the limit 12")));
    }
    let rows: Vec<(Vec<u8>, f64)> = beta_patterns(m)
        .into_par_iter()
        .map(|beta| {
            let p = ProcessParams { beta: Some(beta.clone()), ..params.clone() };
            let spec = catalog_process(family, &p)?;
            Ok((beta, closed_law(&spec)?.k))
        })
        .collect::<Result<_>>()?;
    let mut rows = rows;
    rows.sort_by(|x, y| y.1.total_cmp(&x.1).then_with(|| x.0.cmp(&y.0)));
    let mut groups: Vec<RankGroup> = Vec::new();
    for (beta, k) in rows {
        match groups.last_mut() {
            Some(g) if (g.k - k).abs() <= 1e-10 * g.k => g.patterns.push(beta),
            _ => groups.push(RankGroup { k, patterns: vec![beta] }),
        }
    }
    for g in &mut groups {
        g.patterns.sort();
    }
    Ok(groups)
}
