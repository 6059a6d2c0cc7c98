//! Process families and their boundary value problems.
//!
//! Every entry is `(-1)^ℓ p_ℓ u^{(2ℓ)} = μ u` on `[0,1]` with 2ℓ boundary
//! functionals entered in normalized form.

use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Slepian,
    SlepianIntegrated,
    BridgeCenteredTower,
    BridgeTowerIntegrated,
    WienerCenteredTower,
    WienerTowerIntegrated,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Slepian,
        Family::SlepianIntegrated,
        Family::BridgeCenteredTower,
        Family::BridgeTowerIntegrated,
        Family::WienerCenteredTower,
        Family::WienerTowerIntegrated,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Family::Slepian => "slepian",
            Family::SlepianIntegrated => "slepian-int",
            Family::BridgeCenteredTower => "bridge-c",
            Family::BridgeTowerIntegrated => "bridge-c-int",
            Family::WienerCenteredTower => "wiener-c",
            Family::WienerTowerIntegrated => "wiener-c-int",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Family::Slepian => "Slepian process, covariance c - |t - s| (c >= 1/2)",
            Family::SlepianIntegrated => "m-times integrated Slepian process (c, m, beta)",
            Family::BridgeCenteredTower => "centered integrated bridge tower top (l)",
            Family::BridgeTowerIntegrated => "integrated centered bridge tower, m-times integrated (l, m, beta)",
            Family::WienerCenteredTower => "centered integrated Wiener tower top (l)",
            Family::WienerTowerIntegrated => "integrated centered Wiener tower, m-times integrated (l, m, beta)",
        }
    }

    pub fn uses_c(self) -> bool {
        matches!(self, Family::Slepian | Family::SlepianIntegrated)
    }

    pub fn uses_l(self) -> bool {
        !self.uses_c()
    }

    pub fn uses_m(self) -> bool {
        matches!(
            self,
            Family::SlepianIntegrated | Family::BridgeTowerIntegrated | Family::WienerTowerIntegrated
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        let alias = match norm.as_str() {
            "slepian-integrated" => "slepian-int",
            "bridge-centered-tower" => "bridge-c",
            "bridge-tower-integrated" => "bridge-c-int",
            "wiener-centered-tower" => "wiener-c",
            "wiener-tower-integrated" => "wiener-c-int",
            other => other,
        };
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.id() == alias)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// `Σ_{j≤k} α_j u^{(j)}(0) + γ_j u^{(j)}(1)` with leading pair `(alpha, gamma)` at `j = k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryCondition {
    pub k: usize,
    pub alpha: f64,
    pub gamma: f64,
    pub alpha_lower: Vec<f64>,
    pub gamma_lower: Vec<f64>,
}

impl BoundaryCondition {
    pub fn new(k: usize, alpha: f64, gamma: f64) -> Self {
        BoundaryCondition { k, alpha, gamma, alpha_lower: vec![0.0; k], gamma_lower: vec![0.0; k] }
    }

    pub fn at_zero(k: usize) -> Self {
        Self::new(k, 1.0, 0.0)
    }

    pub fn at_one(k: usize) -> Self {
        Self::new(k, 0.0, 1.0)
    }

    pub fn periodic(k: usize) -> Self {
        Self::new(k, 1.0, -1.0)
    }

    /// Coefficient pair of `u^{(q)}(0)`, `u^{(q)}(1)`.
    pub fn coeff(&self, q: usize) -> (f64, f64) {
        if q == self.k {
            (self.alpha, self.gamma)
        } else if q < self.k {
            (self.alpha_lower[q], self.gamma_lower[q])
        } else {
            (0.0, 0.0)
        }
    }

    /// Lowest order with a nonzero coefficient.
    pub fn min_order(&self) -> usize {
        (0..=self.k)
            .find(|&q| {
                let (a, g) = self.coeff(q);
                a != 0.0 || g != 0.0
            })
            .unwrap_or(self.k)
    }

    /// Same functional applied to `u^{(s)}`.
    pub fn shifted(&self, s: usize) -> Self {
        let mut alpha_lower = vec![0.0; s];
        alpha_lower.extend_from_slice(&self.alpha_lower);
        let mut gamma_lower = vec![0.0; s];
        gamma_lower.extend_from_slice(&self.gamma_lower);
        BoundaryCondition { k: self.k + s, alpha: self.alpha, gamma: self.gamma, alpha_lower, gamma_lower }
    }

    pub fn scaled(&self, f: f64) -> Self {
        BoundaryCondition {
            k: self.k,
            alpha: self.alpha * f,
            gamma: self.gamma * f,
            alpha_lower: self.alpha_lower.iter().map(|v| v * f).collect(),
            gamma_lower: self.gamma_lower.iter().map(|v| v * f).collect(),
        }
    }

    pub fn has_lower_terms(&self) -> bool {
        self.alpha_lower.iter().chain(&self.gamma_lower).any(|&v| v != 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BvpSpec {
    pub ell: usize,
    pub leading_factor: f64,
    pub conditions: Vec<BoundaryCondition>,
    pub zero_mode: bool,
}

impl BvpSpec {
    /// Sorts conditions by descending order and checks normalized form.
    pub fn new(ell: usize, leading_factor: f64, mut conditions: Vec<BoundaryCondition>, zero_mode: bool) -> Result<Self> {
        conditions.sort_by(|a, b| b.k.cmp(&a.k));
        let spec = BvpSpec { ell, leading_factor, conditions, zero_mode };
        spec.check_normalized()?;
        Ok(spec)
    }

    pub fn check_normalized(&self) -> Result<()> {
        let n = 2 * self.ell;
        if self.ell == 0 {
            return Err(Error::NotNormalized("ell must be positive".into()));
        }
        if !(self.leading_factor > 0.0 && self.leading_factor.is_finite()) {
            return Err(Error::NotNormalized("leading factor must be positive".into()));
        }
        if self.conditions.len() != n {
            return Err(Error::NotNormalized(format!("{} conditions for order {}", self.conditions.len(), n)));
        }
        for (i, bc) in self.conditions.iter().enumerate() {
            if bc.alpha == 0.0 && bc.gamma == 0.0 {
                return Err(Error::NotNormalized(format!("condition {i} has vanishing leading pair")));
            }
            if bc.k > n - 1 {
                return Err(Error::NotNormalized(format!("order {} exceeds 2l-1 = {}", bc.k, n - 1)));
            }
            if bc.alpha_lower.len() != bc.k || bc.gamma_lower.len() != bc.k {
                return Err(Error::NotNormalized(format!("condition {i} lower coefficient lists have wrong length")));
            }
            if i > 0 && self.conditions[i - 1].k < bc.k {
                return Err(Error::NotNormalized("orders must be nonincreasing".into()));
            }
            if i >= 2 && self.conditions[i - 2].k <= bc.k {
                return Err(Error::NotNormalized(format!("order {} appears more than twice", bc.k)));
            }
        }
        Ok(())
    }

    pub fn orders(&self) -> Vec<usize> {
        self.conditions.iter().map(|c| c.k).collect()
    }

    /// `ϑ_ℓ = p_ℓ^{-1/(2ℓ)}`
    pub fn theta_ell(&self) -> f64 {
        self.leading_factor.powf(-1.0 / (2 * self.ell) as f64)
    }
}

/// `Σ k_ν` of a normalized system.
pub fn normalized_kappa(spec: &BvpSpec) -> Result<usize> {
    spec.check_normalized()?;
    Ok(spec.conditions.iter().map(|c| c.k).sum())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProcessSpec {
    pub family: Family,
    pub c: Option<f64>,
    pub l: usize,
    pub m: usize,
    pub beta: Vec<u8>,
    pub ell: usize,
    pub kappa: usize,
    pub theta_ell: f64,
    pub zero_mode: bool,
    pub bvp: BvpSpec,
}

impl ProcessSpec {
    pub fn label(&self) -> String {
        let mut s = self.family.id().to_string();
        if let Some(c) = self.c {
            s.push_str(&format!(" c={c}"));
        }
        if self.family.uses_l() {
            s.push_str(&format!(" l={}", self.l));
        }
        if self.family.uses_m() {
            s.push_str(&format!(" m={}", self.m));
            if self.m > 0 {
                s.push_str(" beta=");
                s.extend(self.beta.iter().map(|&b| if b == 1 { '1' } else { '0' }));
            }
        }
        s
    }

    /// `2c − 1 > 0`
    pub fn slepian_offset(&self) -> Option<f64> {
        self.c.map(|c| 2.0 * c - 1.0).filter(|&v| v != 0.0)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ProcessParams {
    pub c: Option<f64>,
    pub l: Option<usize>,
    pub m: Option<usize>,
    pub beta: Option<Vec<u8>>,
}

impl ProcessParams {
    pub fn c(c: f64) -> Self {
        ProcessParams { c: Some(c), ..Default::default() }
    }
    pub fn l(l: usize) -> Self {
        ProcessParams { l: Some(l), ..Default::default() }
    }
    pub fn with_m(mut self, m: usize, beta: &[u8]) -> Self {
        self.m = Some(m);
        self.beta = Some(beta.to_vec());
        self
    }
}

pub fn parse_beta(s: &str) -> Result<Vec<u8>> {
    s.trim()
        .chars()
        .filter(|ch| !matches!(ch, ',' | ' ' | '(' | ')'))
        .map(|ch| match ch {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::InvalidParameter(format!("beta must be a bit string, got `{s}`"))),
        })
        .collect()
}

/// Which closed-form family the β-orders belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BetaFamily {
    Slepian,
    Bridge,
    Wiener2,
}

impl BetaFamily {
    fn base_half_order(self) -> usize {
        match self {
            BetaFamily::Slepian => 1,
            BetaFamily::Bridge => 2,
            BetaFamily::Wiener2 => 3,
        }
    }
}

/// Orders `(k_j, k'_j)` of the conditions added by `m` integrations.
pub fn beta_orders(m: usize, beta: &[u8], family: BetaFamily) -> Result<(Vec<usize>, Vec<usize>)> {
    if m == 0 {
        return Err(Error::InvalidParameter("beta orders need m >= 1".into()));
    }
    Ok(orders_for_base(m, beta, family.base_half_order())?)
}

fn orders_for_base(m: usize, beta: &[u8], l0: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    if beta.len() != m {
        return Err(Error::BetaLength { expected: m, got: beta.len() });
    }
    let total = 2 * m + 2 * l0 - 1;
    let k: Vec<usize> = (1..=m)
        .map(|j| if beta[j - 1] == 0 { m - j } else { m + 2 * l0 + j - 1 })
        .collect();
    let kp = k.iter().map(|&kj| total - kj).collect();
    Ok((k, kp))
}

/// BVP of the `m`-times integrated process `∫_{β}` with base BVP `base`.
pub fn integrate_bvp(base: &BvpSpec, m: usize, beta: &[u8]) -> Result<BvpSpec> {
    if m == 0 {
        return Ok(base.clone());
    }
    let (k, kp) = orders_for_base(m, beta, base.ell)?;
    let mut conds: Vec<BoundaryCondition> = base.conditions.iter().map(|c| c.shifted(m)).collect();
    for j in 0..m {
        if beta[j] == 0 {
            conds.push(BoundaryCondition::at_zero(k[j]));
            conds.push(BoundaryCondition::at_one(kp[j]));
        } else {
            conds.push(BoundaryCondition::at_one(kp[j]));
            conds.push(BoundaryCondition::at_zero(k[j]));
        }
    }
    BvpSpec::new(base.ell + m, base.leading_factor, conds, false)
}

fn slepian_base(c: f64) -> Result<BvpSpec> {
    if !c.is_finite() || c < 0.5 {
        return Err(Error::InvalidParameter(format!("Slepian offset c = {c} must be >= 1/2")));
    }
    let tau_inv = 2.0 * c - 1.0;
    let second = if tau_inv == 0.0 {
        BoundaryCondition::new(0, -1.0, -1.0)
    } else {
        BoundaryCondition {
            k: 1,
            alpha: tau_inv,
            gamma: 0.0,
            alpha_lower: vec![-1.0],
            gamma_lower: vec![-1.0],
        }
    };
    BvpSpec::new(1, 0.5, vec![BoundaryCondition::new(1, 1.0, 1.0), second], false)
}

/// Base of the integrated bridge tower: `u(0)=u(1)=0`, periodic orders `1..2l`.
fn bridge_tower_base(l: usize) -> Result<BvpSpec> {
    let mut conds = vec![BoundaryCondition::at_zero(0), BoundaryCondition::at_one(0)];
    conds.extend((1..=2 * l).map(BoundaryCondition::periodic));
    BvpSpec::new(l + 1, 1.0, conds, false)
}

fn bridge_centered(l: usize) -> Result<BvpSpec> {
    BvpSpec::new(l + 1, 1.0, (0..=2 * l + 1).map(BoundaryCondition::periodic).collect(), true)
}

fn wiener_tower_base(l: usize) -> Result<BvpSpec> {
    if l == 0 {
        return BvpSpec::new(1, 1.0, vec![BoundaryCondition::at_zero(0), BoundaryCondition::at_one(1)], false);
    }
    let mut conds = vec![
        BoundaryCondition::at_zero(0),
        BoundaryCondition::at_one(0),
        BoundaryCondition::at_zero(l + 1),
        BoundaryCondition::at_one(l + 1),
    ];
    conds.extend((1..=2 * l).filter(|&j| j != l && j != l + 1).map(BoundaryCondition::periodic));
    BvpSpec::new(l + 1, 1.0, conds, false)
}

fn wiener_centered(l: usize) -> Result<BvpSpec> {
    let mut conds = vec![BoundaryCondition::at_zero(l + 1), BoundaryCondition::at_one(l + 1)];
    conds.extend((0..=2 * l + 1).filter(|&j| j != l && j != l + 1).map(BoundaryCondition::periodic));
    BvpSpec::new(l + 1, 1.0, conds, true)
}

/// ϰ from the family formulas (centered tops: computed from their conditions).
pub fn family_kappa(family: Family, c: Option<f64>, l: usize, m: usize) -> usize {
    let (l, m) = (l as i64, m as i64);
    let v = match family {
        Family::Slepian | Family::SlepianIntegrated => {
            let base = (2 * m + 1) * (m + 1);
            if c.map(|c| 2.0 * c - 1.0 == 0.0).unwrap_or(true) {
                base
            } else {
                base + 1
            }
        }
        Family::BridgeTowerIntegrated => (2 * m + 2 * l + 1) * (m + l + 1) - (2 * l + 1),
        Family::WienerTowerIntegrated => (2 * m + 2 * l + 1) * (m + l + 1) - 2 * l,
        Family::BridgeCenteredTower => (2 * l + 1) * (l + 1),
        Family::WienerCenteredTower => (2 * l + 1) * (l + 1) + 1,
    };
    v as usize
}

pub fn catalog_process(family: Family, params: &ProcessParams) -> Result<ProcessSpec> {
    let l = if family.uses_l() { params.l.unwrap_or(0) } else { 0 };
    let m = if family.uses_m() { params.m.unwrap_or(0) } else { 0 };
    let beta = if family.uses_m() { params.beta.clone().unwrap_or_default() } else { Vec::new() };
    if !family.uses_c() && params.c.is_some() {
        return Err(Error::InvalidParameter(format!("{family} takes no c parameter")));
    }
    if !family.uses_l() && params.l.is_some() {
        return Err(Error::InvalidParameter(format!("{family} takes no l parameter")));
    }
    if !family.uses_m() && (params.m.unwrap_or(0) != 0 || params.beta.as_ref().is_some_and(|b| !b.is_empty())) {
        return Err(Error::InvalidParameter(format!("{family} takes no m/beta parameters")));
    }
    if beta.len() != m {
        return Err(Error::BetaLength { expected: m, got: beta.len() });
    }
    if beta.iter().any(|&b| b > 1) {
        return Err(Error::InvalidParameter("beta entries must be 0 or 1".into()));
    }
    if m > 12 || l > 12 {
        return Err(Error::InvalidParameter("l and m are limited to 12".into()));
    }
    let c = if family.uses_c() { Some(params.c.unwrap_or(1.0)) } else { None };
    let bvp = match family {
        Family::Slepian => slepian_base(c.unwrap())?,
        Family::SlepianIntegrated => integrate_bvp(&slepian_base(c.unwrap())?, m, &beta)?,
        Family::BridgeCenteredTower => bridge_centered(l)?,
        Family::BridgeTowerIntegrated => integrate_bvp(&bridge_tower_base(l)?, m, &beta)?,
        Family::WienerCenteredTower => wiener_centered(l)?,
        Family::WienerTowerIntegrated => integrate_bvp(&wiener_tower_base(l)?, m, &beta)?,
    };
    let kappa = family_kappa(family, c, l, m);
    let computed = normalized_kappa(&bvp)?;
    if computed != kappa {
        return Err(Error::NotNormalized(format!("kappa {computed} disagrees with family value {kappa}")));
    }
    Ok(ProcessSpec {
        family,
        c,
        l,
        m,
        beta,
        ell: bvp.ell,
        kappa,
        theta_ell: bvp.theta_ell(),
        zero_mode: bvp.zero_mode,
        bvp,
    })
}

/// All `2^m` bottom patterns.
pub fn beta_patterns(m: usize) -> Vec<Vec<u8>> {
    (0..1usize << m).map(|bits| (0..m).map(|j| ((bits >> (m - 1 - j)) & 1) as u8).collect()).collect()
}

/// Every catalog process with `ℓ ≤ max_ell`, with `c ∈ {1/2, 1, 2}` for the
/// Slepian families and all β patterns.
pub fn catalog_entries(max_ell: usize) -> Vec<ProcessSpec> {
    let mut out = Vec::new();
    let mut push = |f: Family, p: ProcessParams| {
        if let Ok(s) = catalog_process(f, &p) {
            out.push(s);
        }
    };
    for c in [0.5, 1.0, 2.0] {
        push(Family::Slepian, ProcessParams::c(c));
        for m in 1..max_ell {
            for b in beta_patterns(m) {
                push(Family::SlepianIntegrated, ProcessParams::c(c).with_m(m, &b));
            }
        }
    }
    for l in 0..max_ell {
        push(Family::BridgeCenteredTower, ProcessParams::l(l));
        push(Family::WienerCenteredTower, ProcessParams::l(l));
    }
    for f in [Family::BridgeTowerIntegrated, Family::WienerTowerIntegrated] {
        for l in 0..max_ell {
            for m in 0..max_ell - l {
                for b in beta_patterns(m) {
                    push(f, ProcessParams::l(l).with_m(m, &b));
                }
            }
        }
    }
    out
}

/// Parse `c=1 l=2 m=1 beta=01` style parameters.
pub fn parse_params<'a, I: IntoIterator<Item = &'a str>>(items: I) -> Result<ProcessParams> {
    let mut p = ProcessParams::default();
    for item in items {
        let (key, val) = item
            .split_once('=')
            .ok_or_else(|| Error::InvalidParameter(format!("expected key=value, got `{item}`")))?;
        let bad = |_| Error::InvalidParameter(format!("bad value for {key}: `{val}`"));
        match key.trim() {
            "c" => p.c = Some(val.trim().parse::<f64>().map_err(|e| bad(e.to_string()))?),
            "l" => p.l = Some(val.trim().parse::<usize>().map_err(|e| bad(e.to_string()))?),
            "m" => p.m = Some(val.trim().parse::<usize>().map_err(|e| bad(e.to_string()))?),
            "beta" => p.beta = Some(parse_beta(val)?),
            other => return Err(Error::InvalidParameter(format!("unknown parameter `{other}`"))),
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(f: Family, p: ProcessParams) -> ProcessSpec {
        catalog_process(f, &p).unwrap()
    }

    #[test]
    fn slepian_one() {
        let s = spec(Family::Slepian, ProcessParams::c(1.0));
        assert_eq!((s.ell, s.kappa), (1, 2));
        assert!((s.theta_ell - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(s.bvp.orders(), vec![1, 1]);
        let second = &s.bvp.conditions[1];
        assert_eq!((second.alpha, second.gamma), (1.0, 0.0));
        assert_eq!((second.alpha_lower[0], second.gamma_lower[0]), (-1.0, -1.0));
    }

    #[test]
    fn slepian_half() {
        let s = spec(Family::Slepian, ProcessParams::c(0.5));
        assert_eq!(s.kappa, 1);
        assert_eq!(s.bvp.orders(), vec![1, 0]);
        assert_eq!((s.bvp.conditions[1].alpha, s.bvp.conditions[1].gamma), (-1.0, -1.0));
    }

    #[test]
    fn wiener_tower_one_is_hinged() {
        let s = spec(Family::WienerTowerIntegrated, ProcessParams::l(1));
        assert_eq!((s.ell, s.kappa, s.theta_ell), (2, 4, 1.0));
        assert_eq!(s.bvp.orders(), vec![2, 2, 0, 0]);
        assert!(s.bvp.conditions.iter().all(|c| c.alpha * c.gamma == 0.0));
    }

    #[test]
    fn centered_bridge() {
        let s = spec(Family::BridgeCenteredTower, ProcessParams::l(0));
        assert_eq!((s.ell, s.kappa, s.zero_mode), (1, 1, true));
        assert!(s.bvp.conditions.iter().all(|c| c.alpha == 1.0 && c.gamma == -1.0));
    }

    #[test]
    fn beta_order_examples() {
        assert_eq!(beta_orders(2, &[0, 1], BetaFamily::Slepian).unwrap(), (vec![1, 5], vec![4, 0]));
        assert_eq!(beta_orders(1, &[1], BetaFamily::Bridge).unwrap(), (vec![5], vec![0]));
        assert_eq!(beta_orders(1, &[0], BetaFamily::Wiener2).unwrap(), (vec![0], vec![7]));
        assert!(beta_orders(0, &[], BetaFamily::Slepian).is_err());
        assert!(matches!(beta_orders(2, &[0], BetaFamily::Slepian), Err(Error::BetaLength { .. })));
    }

    #[test]
    fn kappa_examples() {
        let bridge = spec(Family::BridgeTowerIntegrated, ProcessParams::l(0));
        assert_eq!(normalized_kappa(&bridge.bvp).unwrap(), 0);
        let periodic = spec(Family::BridgeCenteredTower, ProcessParams::l(0));
        assert_eq!(normalized_kappa(&periodic.bvp).unwrap(), 1);
        let b1 = spec(Family::BridgeTowerIntegrated, ProcessParams::l(1));
        assert_eq!(normalized_kappa(&b1.bvp).unwrap(), 3);
    }

    #[test]
    fn errors() {
        assert!(catalog_process(Family::Slepian, &ProcessParams::c(0.4)).is_err());
        assert!(matches!(
            catalog_process(Family::SlepianIntegrated, &ProcessParams::c(1.0).with_m(2, &[0])),
            Err(Error::BetaLength { .. })
        ));
        assert!(matches!("ornstein".parse::<Family>(), Err(Error::UnknownFamily(_))));
        let bad = BvpSpec::new(1, 1.0, vec![BoundaryCondition::at_zero(0); 2], false).unwrap();
        let mut three = bad.clone();
        three.conditions.push(BoundaryCondition::at_one(0));
        assert!(normalized_kappa(&three).is_err());
    }

    #[test]
    fn params_parse() {
        let p = parse_params(["c=1", "m=3", "beta=010"]).unwrap();
        assert_eq!(p.beta, Some(vec![0, 1, 0]));
        assert!(parse_params(["q=1"]).is_err());
    }
}
