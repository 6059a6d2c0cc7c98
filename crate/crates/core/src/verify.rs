//! Named verification suites.
//!
//! A suite is a fixed list of checks; each check records the measured value,
//! what it is compared with, the tolerance, and whether it passed. Suites are
//! deterministic given the seed.

use crate::asymptotics::{
    assembled_law, closed_law, combine_laws, comparison_ratio, rank_beta_patterns, SmallBallLaw, ASSEMBLY_COUNT,
};
use crate::bvp_algebra::{random_ensemble, rho_pair, theta_coefficients, verify_rho_sum};
use crate::catalog::{beta_patterns, catalog_entries, catalog_process, BvpSpec, Family, ProcessParams, ProcessSpec};
use crate::constants::{distortion_closed_form, distortion_numeric, DEFAULT_TAIL_ORDER};
use crate::error::{Error, Result};
use crate::oracle::{asymptotic_eval, prob_imhof, prob_saddlepoint, tail_completed_spectrum, DEFAULT_TAIL_LENGTH};
use crate::special::root_of_unity;
use crate::spectral::{catalog_kernel, char_function, nystrom_eigenvalues, predicted_count, spectrum, DEFAULT_GRID};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

pub const SUITE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    RhoSum,
    Spectrum,
    Nystrom,
    TowerEquality,
    Distortion,
    Laws,
    Asymptotic,
    Rank,
    All,
}

impl Suite {
    /// Every concrete suite, in the order `all` runs them.
    pub const CONCRETE: [Suite; 8] = [
        Suite::RhoSum,
        Suite::Spectrum,
        Suite::Nystrom,
        Suite::TowerEquality,
        Suite::Distortion,
        Suite::Laws,
        Suite::Asymptotic,
        Suite::Rank,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Suite::RhoSum => "rho-sum",
            Suite::Spectrum => "spectrum",
            Suite::Nystrom => "nystrom",
            Suite::TowerEquality => "tower-equality",
            Suite::Distortion => "distortion",
            Suite::Laws => "laws",
            Suite::Asymptotic => "asymptotic",
            Suite::Rank => "rank",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::CONCRETE
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|x| x.id() == s)
            .copied()
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite `{s}`")))
    }
}

/// How `measured` is compared with `target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `|measured / target − 1| ≤ tol`
    Rel,
    /// `|measured − target| ≤ tol`
    Abs,
    /// `measured < target`
    Below,
}

impl Relation {
    pub fn id(self) -> &'static str {
        match self {
            Relation::Rel => "rel",
            Relation::Abs => "abs",
            Relation::Below => "below",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub measured: f64,
    pub target: f64,
    pub tol: f64,
    pub relation: Relation,
    pub pass: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl Check {
    fn new(suite: Suite, name: impl Into<String>, measured: f64, target: f64, tol: f64, relation: Relation) -> Self {
        let mut c =
            Check { suite, name: name.into(), measured, target, tol, relation, pass: false, note: String::new() };
        c.judge();
        c
    }

    fn judge(&mut self) {
        let (m, t) = (self.measured, self.target);
        self.pass = match self.relation {
            Relation::Rel => (m / t - 1.0).abs() <= self.tol,
            Relation::Abs => (m - t).abs() <= self.tol,
            Relation::Below => m < t,
        };
    }

    /// Deviation in the units of `tol`.
    pub fn deviation(&self) -> f64 {
        match self.relation {
            Relation::Rel => (self.measured / self.target - 1.0).abs(),
            Relation::Abs => (self.measured - self.target).abs(),
            Relation::Below => self.measured - self.target,
        }
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    /// A check whose computation failed.
    fn failed(suite: Suite, name: impl Into<String>, target: f64, tol: f64, relation: Relation, err: &Error) -> Self {
        Check::new(suite, name, f64::NAN, target, tol, relation).note(err.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Replaces the default tolerance of every `rel`/`abs` check.
    pub tol: Option<f64>,
    /// Nyström grid intervals.
    pub grid: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 0, tol: None, grid: DEFAULT_GRID }
    }
}

/// Run one suite (or all of them) and return its rows.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Vec<Check> {
    let mut rows = match suite {
        Suite::All => return Suite::CONCRETE.iter().flat_map(|&s| run_suite(s, cfg)).collect(),
        Suite::RhoSum => rho_sum_suite(cfg.seed),
        Suite::Spectrum => spectrum_suite(cfg.seed),
        Suite::Nystrom => nystrom_suite(cfg.grid),
        Suite::TowerEquality => tower_equality_suite(),
        Suite::Distortion => distortion_suite(),
        Suite::Laws => laws_suite(),
        Suite::Asymptotic => asymptotic_suite(),
        Suite::Rank => rank_suite(),
    };
    if let Some(t) = cfg.tol {
        for r in rows.iter_mut().filter(|r| r.relation != Relation::Below) {
            r.tol = t;
            r.judge();
        }
    }
    rows
}

/// Largest value with its tag; NaN counts as worst.
fn max_with<T>(items: impl IntoIterator<Item = (f64, T)>) -> Option<(f64, T)> {
    let mut best: Option<(f64, T)> = None;
    for (v, t) in items {
        let better = match &best {
            None => true,
            Some((b, _)) => !b.is_nan() && (v.is_nan() || v > *b),
        };
        if better {
            best = Some((v, t));
        }
    }
    best
}

fn rho_rows(suite: Suite, name: &str, bvps: &[(String, BvpSpec)]) -> Vec<Check> {
    let res: Vec<(f64, f64, &str)> = bvps
        .par_iter()
        .map(|(label, b)| {
            let kappa = b.conditions.iter().map(|c| c.k).sum();
            let r = verify_rho_sum(b).unwrap_or(f64::NAN);
            let d = theta_coefficients(b).map(|q| q.identity_defect(b.ell, kappa)).unwrap_or(f64::NAN);
            (r, d, label.as_str())
        })
        .collect();
    let (r, rl) = max_with(res.iter().map(|x| (x.0, x.2))).unwrap_or((f64::NAN, ""));
    let (d, dl) = max_with(res.iter().map(|x| (x.1, x.2))).unwrap_or((f64::NAN, ""));
    vec![
        Check::new(suite, format!("{name}: rho-sum residual"), r, 0.0, 1e-8, Relation::Abs).note(format!("worst {rl}")),
        Check::new(suite, format!("{name}: theta identity defect"), d, 0.0, 1e-10, Relation::Abs)
            .note(format!("worst {dl}")),
    ]
}

fn rho_sum_suite(seed: u64) -> Vec<Check> {
    let s = Suite::RhoSum;
    let mut rows = Vec::new();
    for spec in catalog_entries(4) {
        rows.extend(rho_rows(s, &spec.label(), &[(spec.label(), spec.bvp.clone())]));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for ell in 1..=3 {
        let ens: Vec<(String, BvpSpec)> =
            random_ensemble(ell, 100, seed).into_iter().enumerate().map(|(i, b)| (format!("#{i}"), b)).collect();
        rows.extend(rho_rows(s, &format!("random ell={ell} x100 seed={seed}"), &ens));
        // rescaling a condition moves neither phase
        let shift = ens
            .iter()
            .map(|(_, b)| {
                let mut c = b.clone();
                for cond in &mut c.conditions {
                    let f: f64 = rng.gen_range(0.25..4.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                    *cond = cond.scaled(f);
                }
                match (theta_coefficients(b), theta_coefficients(&c)) {
                    (Ok(p), Ok(q)) => {
                        let (p, q) = (rho_pair(&p), rho_pair(&q));
                        let d = |a: f64, b: f64| (Complex64::from_polar(1.0, a) - Complex64::from_polar(1.0, b)).norm();
                        // as an unordered pair: a phase at the branch cut may change sides
                        let same = d(p.rho_prime, q.rho_prime).max(d(p.rho_second, q.rho_second));
                        let swapped = d(p.rho_prime, q.rho_second).max(d(p.rho_second, q.rho_prime));
                        same.min(swapped)
                    }
                    _ => f64::NAN,
                }
            })
            .fold(0.0, |a: f64, b| if b.is_nan() { b } else { a.max(b) });
        rows.push(Check::new(s, format!("random ell={ell} x100: phase shift under rescaling"), shift, 0.0, 1e-8, Relation::Abs));
    }
    rows
}

fn proc(f: Family, p: ProcessParams) -> ProcessSpec {
    catalog_process(f, &p).expect("catalog entry")
}

fn max_rel(a: &[f64], b: impl Fn(usize) -> f64) -> f64 {
    a.iter().enumerate().map(|(i, &x)| (x / b(i) - 1.0).abs()).fold(0.0, f64::max)
}

fn spectrum_suite(seed: u64) -> Vec<Check> {
    let s = Suite::Spectrum;
    let mut rows = Vec::new();
    let half = proc(Family::Slepian, ProcessParams::c(0.5));
    match spectrum(&half, 100) {
        Ok(sp) => {
            let r: Vec<f64> = sp.roots.iter().take(50).map(|r| r.value).collect();
            rows.push(Check::new(
                s,
                "slepian c=0.5: roots (2n-1)pi, n<=50",
                max_rel(&r, |i| (2 * i + 1) as f64 * PI),
                0.0,
                1e-10,
                Relation::Abs,
            ));
            let simple = sp.roots.iter().take(50).filter(|r| r.multiplicity != 2).count();
            rows.push(Check::new(s, "slepian c=0.5: roots not double", simple as f64, 0.0, 0.0, Relation::Abs));
        }
        Err(e) => rows.push(Check::failed(s, "slepian c=0.5: roots (2n-1)pi", 0.0, 1e-10, Relation::Abs, &e)),
    }
    let classical = [
        (Family::BridgeTowerIntegrated, "bridge: mu_n = (pi n)^2, n<=50", 0.0),
        (Family::WienerTowerIntegrated, "wiener: mu_n = (pi(n-1/2))^2, n<=50", 0.5),
    ];
    for (f, name, off) in classical {
        match spectrum(&proc(f, ProcessParams::l(0)), 50) {
            Ok(sp) => rows.push(Check::new(
                s,
                name,
                max_rel(&sp.mu(), |i| (PI * (i as f64 + 1.0 - off)).powi(2)),
                0.0,
                1e-10,
                Relation::Abs,
            )),
            Err(e) => rows.push(Check::failed(s, name, 0.0, 1e-10, Relation::Abs, &e)),
        }
    }
    let entries = catalog_entries(3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7074);
    let samples: Vec<Complex64> =
        (0..100).map(|_| Complex64::from_polar(rng.gen_range(0.5..20.0), rng.gen_range(0.0..2.0 * PI))).collect();
    let rot = entries
        .par_iter()
        .map(|spec| {
            let f = char_function(spec);
            let w = root_of_unity(1, spec.ell);
            let dev = samples
                .iter()
                .map(|&z| {
                    let (a, b) = (f.det(z).norm(), f.det(w * z).norm());
                    (a - b).abs() / a.max(b)
                })
                .fold(0.0, f64::max);
            (dev, spec.label())
        })
        .collect::<Vec<_>>();
    let (dev, worst) = max_with(rot).unwrap_or((f64::NAN, String::new()));
    rows.push(
        Check::new(s, format!("rotation symmetry |D(w z)| = |D(z)|, {} processes x100", entries.len()), dev, 0.0, 1e-8, Relation::Abs)
            .note(format!("worst {worst}")),
    );
    let counts = entries
        .par_iter()
        .map(|spec| {
            let f = char_function(spec);
            let Ok(sp) = spectrum(spec, 1) else { return (f64::NAN, spec.label()) };
            let Some(ph) = sp.phases else { return (f64::NAN, spec.label()) };
            let want = predicted_count(ph, 100.0) as usize + 6;
            let Ok(sp) = crate::spectral::positive_roots(&f, want) else { return (f64::NAN, spec.label()) };
            let r = sp.r();
            let gap = (1..=10)
                .map(|j| {
                    let big_r = 10.0 * j as f64;
                    let n = r.iter().filter(|&&x| x <= big_r).count() as i64;
                    (n - predicted_count(ph, big_r)).abs()
                })
                .max()
                .unwrap_or(0);
            (gap as f64, spec.label())
        })
        .collect::<Vec<_>>();
    let (gap, worst) = max_with(counts).unwrap_or((f64::NAN, String::new()));
    rows.push(
        Check::new(s, format!("root count vs prediction, R<=100, {} processes", entries.len()), gap, 0.0, 2.0, Relation::Abs)
            .note(format!("worst {worst}")),
    );
    rows
}

/// Cases compared against the Nyström oracle.
pub fn nystrom_cases() -> Vec<ProcessSpec> {
    vec![
        proc(Family::Slepian, ProcessParams::c(0.5)),
        proc(Family::Slepian, ProcessParams::c(1.0)),
        proc(Family::Slepian, ProcessParams::c(2.0)),
        proc(Family::BridgeTowerIntegrated, ProcessParams::l(0)),
        proc(Family::BridgeTowerIntegrated, ProcessParams::l(1)),
        proc(Family::WienerTowerIntegrated, ProcessParams::l(1)),
        proc(Family::WienerTowerIntegrated, ProcessParams::l(2)),
        proc(Family::SlepianIntegrated, ProcessParams::c(1.0).with_m(1, &[0])),
        proc(Family::BridgeTowerIntegrated, ProcessParams::l(1).with_m(1, &[0])),
        proc(Family::WienerTowerIntegrated, ProcessParams::l(1).with_m(1, &[0])),
        proc(Family::BridgeCenteredTower, ProcessParams::l(1)),
        proc(Family::WienerCenteredTower, ProcessParams::l(1)),
    ]
}

fn nystrom_suite(grid: usize) -> Vec<Check> {
    let s = Suite::Nystrom;
    nystrom_cases()
        .iter()
        .map(|spec| {
            let name = format!("{}: first 10 lambda vs Nystrom grid {grid}", spec.label());
            let run = || -> Result<f64> {
                let lam = spectrum(spec, 10)?.lambda();
                let ny = nystrom_eigenvalues(&catalog_kernel(spec, grid), 10)?;
                Ok(max_rel(&ny, |i| lam[i]))
            };
            match run() {
                Ok(v) => Check::new(s, name, v, 0.0, 1e-4, Relation::Abs),
                Err(e) => Check::failed(s, name, 0.0, 1e-4, Relation::Abs, &e),
            }
        })
        .collect()
}

fn tower_equality_suite() -> Vec<Check> {
    let s = Suite::TowerEquality;
    (1..=2)
        .map(|l| {
            let name = format!("bridge-c-int l={l} m=0 vs wiener-c l={l}: first 10 lambda");
            let run = || -> Result<f64> {
                let a = spectrum(&proc(Family::BridgeTowerIntegrated, ProcessParams::l(l)), 10)?.lambda();
                let b = spectrum(&proc(Family::WienerCenteredTower, ProcessParams::l(l)), 10)?.lambda();
                Ok(max_rel(&a, |i| b[i]))
            };
            match run() {
                Ok(v) => Check::new(s, name, v, 0.0, 1e-8, Relation::Abs),
                Err(e) => Check::failed(s, name, 0.0, 1e-8, Relation::Abs, &e),
            }
        })
        .collect()
}

/// The closed-form vs numeric-product matrix.
pub fn distortion_cases() -> Vec<ProcessSpec> {
    let mut out = Vec::new();
    for c in [0.5, 1.0, 2.0] {
        for m in 1..=2 {
            for b in beta_patterns(m) {
                out.push(proc(Family::SlepianIntegrated, ProcessParams::c(c).with_m(m, &b)));
            }
        }
    }
    for m in 1..=2 {
        for b in beta_patterns(m) {
            out.push(proc(Family::BridgeTowerIntegrated, ProcessParams::l(1).with_m(m, &b)));
        }
    }
    for l in 1..=3 {
        out.push(proc(Family::WienerTowerIntegrated, ProcessParams::l(l)));
    }
    for b in beta_patterns(1) {
        out.push(proc(Family::WienerTowerIntegrated, ProcessParams::l(2).with_m(1, &b)));
    }
    out
}

fn numeric_distortion(spec: &ProcessSpec, count: usize) -> Result<f64> {
    let sp = spectrum(spec, count)?;
    Ok(distortion_numeric(&sp, spec.ell, spec.kappa, spec.theta_ell, DEFAULT_TAIL_ORDER)?.value)
}

fn distortion_suite() -> Vec<Check> {
    let s = Suite::Distortion;
    let mut rows: Vec<Check> = distortion_cases()
        .par_iter()
        .map(|spec| {
            let name = format!("{}: C_dist numeric vs closed", spec.label());
            let closed = match distortion_closed_form(spec) {
                Ok(c) => c.value,
                Err(e) => return Check::failed(s, name, f64::NAN, 1e-3, Relation::Rel, &e),
            };
            match numeric_distortion(spec, ASSEMBLY_COUNT) {
                Ok(v) => Check::new(s, name, v, closed, 1e-3, Relation::Rel),
                Err(e) => Check::failed(s, name, closed, 1e-3, Relation::Rel, &e),
            }
        })
        .collect();
    for (spec, target, name) in [
        (proc(Family::BridgeTowerIntegrated, ProcessParams::l(0)), 1.0, "bridge: C_dist = 1"),
        (proc(Family::Slepian, ProcessParams::c(0.5)), 2f64.sqrt(), "slepian c=0.5: C_dist = sqrt 2"),
    ] {
        rows.push(match numeric_distortion(&spec, ASSEMBLY_COUNT) {
            Ok(v) => Check::new(s, name, v, target, 1e-6, Relation::Rel),
            Err(e) => Check::failed(s, name, target, 1e-6, Relation::Rel, &e),
        });
    }
    rows
}

fn law_row(s: Suite, name: String, got: Result<SmallBallLaw>, want: &SmallBallLaw, tol: f64) -> Check {
    match got {
        Ok(l) => Check::new(s, name, l.rel_diff(want), 0.0, tol, Relation::Abs),
        Err(e) => Check::failed(s, name, 0.0, tol, Relation::Abs, &e),
    }
}

fn laws_suite() -> Vec<Check> {
    let s = Suite::Laws;
    let mut rows: Vec<Check> = catalog_entries(4)
        .par_iter()
        .filter_map(|spec| {
            let closed = closed_law(spec).ok()?;
            // centered tops go through the double spectrum, everything else needs a closed C_dist
            let exact = match spec.family {
                Family::BridgeCenteredTower => true,
                Family::WienerCenteredTower => spec.l > 0,
                _ => distortion_closed_form(spec).is_ok() && spec.kappa < 2 * spec.ell * spec.ell,
            };
            exact.then(|| {
                law_row(s, format!("{}: closed vs assembled law", spec.label()), assembled_law(spec, ASSEMBLY_COUNT), &closed, 1e-9)
            })
        })
        .collect();
    let wiener = SmallBallLaw::norm(4.0 / PI.sqrt(), 1.0, 2.0, 0.125);
    let v = wiener.to_squared().scale(0.5);
    let half = closed_law(&proc(Family::Slepian, ProcessParams::c(0.5))).expect("closed law");
    rows.push(law_row(
        s,
        "two halved Wiener laws combine to slepian c=0.5".into(),
        combine_laws(&v, &v).map(|l| l.to_norm()),
        &half,
        1e-12,
    ));
    let bq = SmallBallLaw::norm((8.0 / PI).sqrt(), 0.0, 2.0, 0.125).to_squared().scale(0.25);
    let top = closed_law(&proc(Family::BridgeCenteredTower, ProcessParams::l(0))).expect("closed law");
    rows.push(law_row(
        s,
        "two quartered bridge laws combine to bridge-c l=0".into(),
        combine_laws(&bq, &bq).map(|l| l.to_norm()),
        &top,
        1e-12,
    ));
    for l in 0..=3 {
        let lf = l as f64;
        let law = closed_law(&proc(Family::BridgeCenteredTower, ProcessParams::l(l))).expect("closed law");
        let want = ((2.0 * lf + 2.0) / (2.0 * lf + 1.0)).sqrt() / PI.sqrt();
        rows.push(Check::new(s, format!("bridge-c l={l}: prefactor sqrt((2l+2)/(2l+1)/pi)"), law.k, want, 1e-12, Relation::Rel));
        rows.push(Check::new(s, format!("bridge-c l={l}: power of eps"), law.a, -1.0, 1e-12, Relation::Abs));
    }
    let round = catalog_entries(4)
        .iter()
        .filter_map(|spec| closed_law(spec).ok().map(|l| l.to_squared().to_norm().rel_diff(&l)))
        .fold(0.0, f64::max);
    rows.push(Check::new(s, "norm/squared round trip of every closed law", round, 0.0, 1e-15, Relation::Abs));
    let cmp = || -> Result<f64> {
        let a = spectrum(&proc(Family::Slepian, ProcessParams::c(2.0)), ASSEMBLY_COUNT)?.mu();
        let b = spectrum(&proc(Family::Slepian, ProcessParams::c(1.0)), ASSEMBLY_COUNT)?.mu();
        Ok(comparison_ratio(&a, &b)?.value)
    };
    let name = "comparison ratio slepian c=2 vs c=1";
    rows.push(match cmp() {
        Ok(v) => Check::new(s, name, v, 1.0 / 3f64.sqrt(), 1e-3, Relation::Rel),
        Err(e) => Check::failed(s, name, 1.0 / 3f64.sqrt(), 1e-3, Relation::Rel, &e),
    });
    rows
}

/// Processes whose asymptotic law is checked against the probability oracles.
pub fn asymptotic_cases() -> Vec<ProcessSpec> {
    vec![
        proc(Family::BridgeTowerIntegrated, ProcessParams::l(0)),
        proc(Family::WienerTowerIntegrated, ProcessParams::l(0)),
        proc(Family::Slepian, ProcessParams::c(0.5)),
        proc(Family::Slepian, ProcessParams::c(1.0)),
        proc(Family::BridgeCenteredTower, ProcessParams::l(0)),
        proc(Family::BridgeCenteredTower, ProcessParams::l(1)),
        proc(Family::BridgeCenteredTower, ProcessParams::l(2)),
        proc(Family::WienerTowerIntegrated, ProcessParams::l(1)),
    ]
}

pub const EPS_GRID: [f64; 4] = [0.3, 0.2, 0.1, 0.05];
/// Computed eigenvalues before the tail takes over.
pub const ORACLE_ROOTS: usize = 200;

fn asymptotic_rows(spec: &ProcessSpec) -> Vec<Check> {
    let s = Suite::Asymptotic;
    let label = spec.label();
    let fail = |name: String, target: f64, tol: f64, rel: Relation, e: &Error| vec![Check::failed(s, name, target, tol, rel, e)];
    let cs = match spectrum(spec, ORACLE_ROOTS).and_then(|sp| tail_completed_spectrum(&sp, spec, DEFAULT_TAIL_LENGTH)) {
        Ok(c) => c,
        Err(e) => return fail(format!("{label}: tail completion"), 0.0, 0.0, Relation::Abs, &e),
    };
    let law = match closed_law(spec) {
        Ok(l) => l,
        Err(e) => return fail(format!("{label}: closed law"), 0.0, 0.0, Relation::Abs, &e),
    };
    let mut rows = Vec::new();
    let ratios: Vec<Result<f64>> =
        EPS_GRID.iter().map(|&e| prob_saddlepoint(&cs, e).map(|p| asymptotic_eval(&law, e) / p)).collect();
    let last = EPS_GRID.len() - 1;
    rows.push(match &ratios[last] {
        Ok(r) => Check::new(s, format!("{label}: asymptotic/saddlepoint at eps=0.05"), *r, 1.0, 0.1, Relation::Rel),
        Err(e) => Check::failed(s, format!("{label}: asymptotic/saddlepoint at eps=0.05"), 1.0, 0.1, Relation::Rel, e),
    });
    let name = format!("{label}: max step change of |ratio-1| over eps grid");
    rows.push(match ratios.iter().cloned().collect::<Result<Vec<f64>>>() {
        Ok(r) => {
            let worst = r.windows(2).map(|w| (w[1] - 1.0).abs() - (w[0] - 1.0).abs()).fold(f64::NEG_INFINITY, f64::max);
            let shown: Vec<String> = r.iter().map(|x| format!("{x:.6}")).collect();
            Check::new(s, name, worst, 0.0, 0.0, Relation::Below).note(format!("ratios {}", shown.join(" ")))
        }
        Err(e) => Check::failed(s, name, 0.0, 0.0, Relation::Below, &e),
    });
    for eps in [0.2, 0.3] {
        let name = format!("{label}: imhof vs saddlepoint at eps={eps}");
        rows.push(match (prob_imhof(&cs, eps), prob_saddlepoint(&cs, eps)) {
            (Ok(i), Ok(p)) => Check::new(s, name, i, p, 0.02, Relation::Rel),
            (Err(e), _) | (_, Err(e)) => Check::failed(s, name, f64::NAN, 0.02, Relation::Rel, &e),
        });
    }
    rows
}

fn asymptotic_suite() -> Vec<Check> {
    let s = Suite::Asymptotic;
    let mut rows: Vec<Check> = asymptotic_cases().iter().flat_map(asymptotic_rows).collect();
    let bridge = proc(Family::BridgeTowerIntegrated, ProcessParams::l(0));
    let doubled = || -> Result<(f64, f64)> {
        let sp = spectrum(&bridge, ORACLE_ROOTS)?;
        let a = prob_saddlepoint(&tail_completed_spectrum(&sp, &bridge, DEFAULT_TAIL_LENGTH)?, 0.05)?;
        let b = prob_saddlepoint(&tail_completed_spectrum(&sp, &bridge, 2 * DEFAULT_TAIL_LENGTH)?, 0.05)?;
        Ok((b, a))
    };
    let name = "bridge: saddlepoint at eps=0.05, M doubled vs M";
    rows.push(match doubled() {
        Ok((b, a)) => Check::new(s, name, b, a, 5e-3, Relation::Rel),
        Err(e) => Check::failed(s, name, f64::NAN, 5e-3, Relation::Rel, &e),
    });
    rows
}

fn rank_suite() -> Vec<Check> {
    let s = Suite::Rank;
    let mut rows = Vec::new();
    for m in 2..=3 {
        let name = format!("slepian-int c=1 m={m}: top group is all-0 and all-1");
        let want = vec![vec![0u8; m], vec![1u8; m]];
        rows.push(match rank_beta_patterns(Family::SlepianIntegrated, &ProcessParams::c(1.0).with_m(m, &vec![0; m])) {
            Ok(g) => {
                let hit = g.first().is_some_and(|top| top.patterns == want) && g.len() > 1;
                let shown: Vec<String> = g[0]
                    .patterns
                    .iter()
                    .map(|p| p.iter().map(|b| char::from(b'0' + b)).collect())
                    .collect();
                Check::new(s, name, f64::from(u8::from(hit)), 1.0, 0.0, Relation::Abs).note(format!("top {}", shown.join(",")))
            }
            Err(e) => Check::failed(s, name, 1.0, 0.0, Relation::Abs, &e),
        });
    }
    rows
}

/// True when every row passed.
pub fn all_pass(rows: &[Check]) -> bool {
    rows.iter().all(|r| r.pass)
}
