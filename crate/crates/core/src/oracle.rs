//! Reference probabilities `P{Σ λ_n η_n² ≤ ε²}` for tail-completed spectra.

use crate::asymptotics::SmallBallLaw;
use crate::catalog::ProcessSpec;
use crate::constants::{assign_slots, slot_value, Slot};
use crate::error::{Error, Result};
use crate::special::{hurwitz_scaled, mills_ratio, norm_cdf, norm_pdf};
use crate::spectral::SpectrumResult;
use rayon::prelude::*;
use serde::Serialize;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Default total length of a completed spectrum.
pub const DEFAULT_TAIL_LENGTH: usize = 100_000;
const EXPLICIT_CAP: usize = 10_000;
const SERIES_TERMS: usize = 40;
/// Largest `coef·λ` for which the aggregated tail may be expanded.
const SERIES_RADIUS: f64 = 0.35;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailParams {
    pub ell: usize,
    pub theta_ell: f64,
    pub rho_prime: f64,
    pub rho_second: f64,
}

/// Power sums `Σ λ^q = lead^q · scaled[q−1]` of one aggregated branch.
#[derive(Debug, Clone, PartialEq)]
struct BranchMoments {
    lead: f64,
    scaled: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompletedSpectrum {
    /// Eigenvalues from the characteristic roots, decreasing.
    pub computed: Vec<f64>,
    pub tail: Option<TailParams>,
    /// Total length; the analytic remainder beyond it is folded into the moments.
    pub m: usize,
    pub junction_error: f64,
    explicit: Vec<f64>,
    branches: Vec<BranchMoments>,
}

fn branch_moments(lead: f64, a: f64, ell: usize) -> BranchMoments {
    let scaled = (1..=SERIES_TERMS).map(|q| hurwitz_scaled((2 * ell * q) as f64, a)).collect();
    BranchMoments { lead, scaled }
}

impl CompletedSpectrum {
    /// A finite list of eigenvalues with no tail.
    pub fn finite(lambda: Vec<f64>) -> Result<Self> {
        let mut l = lambda;
        if l.iter().any(|&v| v.is_nan() || v <= 0.0) {
            return Err(Error::InvalidParameter("eigenvalues must be positive".into()));
        }
        l.sort_by(|a, b| b.total_cmp(a));
        Ok(CompletedSpectrum {
            computed: l.clone(),
            tail: None,
            m: l.len(),
            junction_error: 0.0,
            explicit: l,
            branches: Vec::new(),
        })
    }

    /// Eigenvalues handled term by term.
    pub fn explicit(&self) -> &[f64] {
        &self.explicit
    }

    /// Largest eigenvalue inside the aggregated part.
    pub fn aggregated_lead(&self) -> f64 {
        self.branches.iter().map(|b| b.lead).fold(0.0, f64::max)
    }

    /// `Σ_{aggregated} f(λ)` with `f(λ) = Σ_q coef(q) λ^q`.
    fn aggregated(&self, radius_coef: f64, coef: impl Fn(usize) -> f64) -> Result<f64> {
        if self.branches.is_empty() {
            return Ok(0.0);
        }
        if radius_coef * self.aggregated_lead() > SERIES_RADIUS {
            return Err(Error::PrecisionLoss(format!(
                "tail expansion outside its radius ({:.3e})",
                radius_coef * self.aggregated_lead()
            )));
        }
        let mut total = 0.0;
        for b in &self.branches {
            let mut pow = 1.0;
            for q in 1..=SERIES_TERMS {
                pow *= b.lead;
                let c = coef(q);
                if c != 0.0 {
                    total += c * pow * b.scaled[q - 1];
                }
            }
        }
        Ok(total)
    }

    fn aggregated_c(&self, radius_coef: f64, coef: impl Fn(usize) -> Complex64) -> Result<Complex64> {
        if self.branches.is_empty() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if radius_coef * self.aggregated_lead() > SERIES_RADIUS {
            return Err(Error::PrecisionLoss(format!(
                "tail expansion outside its radius ({:.3e})",
                radius_coef * self.aggregated_lead()
            )));
        }
        let mut total = Complex64::new(0.0, 0.0);
        for b in &self.branches {
            let mut pow = 1.0;
            for q in 1..=SERIES_TERMS {
                pow *= b.lead;
                total += coef(q) * (pow * b.scaled[q - 1]);
            }
        }
        Ok(total)
    }

    fn explicit_sum(&self, f: impl Fn(f64) -> f64 + Sync) -> f64 {
        self.explicit.par_chunks(2048).map(|c| c.iter().map(|&l| f(l)).sum::<f64>()).sum()
    }

    /// `Σ λ_n`
    pub fn trace(&self) -> f64 {
        self.explicit_sum(|l| l) + self.aggregated(0.0, |q| if q == 1 { 1.0 } else { 0.0 }).unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }
}

/// Extend a computed spectrum by the two-branch asymptotics up to length `m`.
pub fn tail_completed_spectrum(s: &SpectrumResult, spec: &ProcessSpec, m: usize) -> Result<CompletedSpectrum> {
    let n = s.count;
    if n < 50 || m < n {
        return Err(Error::InvalidParameter(format!("need M ≥ N ≥ 50, got N = {n}, M = {m}")));
    }
    let phases = s
        .phases
        .ok_or_else(|| Error::InvalidParameter("spectrum carries no phase pair".into()))?;
    let ell = spec.ell;
    let theta = spec.theta_ell;
    let zetas: Vec<f64> = s.mu().iter().map(|&mu| theta * mu.powf(1.0 / (2 * ell) as f64)).collect();
    let ph = [phases.rho_prime, phases.rho_second];
    let slots = assign_slots(&zetas, &ph);
    let lambda_of = |z: f64| (theta / z).powi(2 * ell as i32);
    let last = *slots.last().expect("n ≥ 50");
    let junction_error = ((zetas[n - 1] / slot_value(&ph, last)).powi(2 * ell as i32) - 1.0).abs();
    if junction_error > 1e-3 {
        return Err(Error::Junction(junction_error));
    }
    let mut next = [i64::MIN; 2];
    for sl in &slots {
        next[sl.class] = next[sl.class].max(sl.k + 1);
    }
    for (class, k) in next.iter_mut().enumerate() {
        if *k == i64::MIN {
            *k = ((zetas[n - 1] - ph[class]) / (2.0 * PI)).ceil() as i64;
        }
    }
    let computed: Vec<f64> = s.lambda();
    let mut explicit = computed.clone();
    let target = m.min(EXPLICIT_CAP.max(n));
    let value = |class: usize, k: i64| slot_value(&ph, Slot { class, k });
    while explicit.len() < target {
        let (z0, z1) = (value(0, next[0]), value(1, next[1]));
        let class = if z0 <= z1 { 0 } else { 1 };
        explicit.push(lambda_of(z0.min(z1)));
        next[class] += 1;
    }
    if explicit.windows(2).any(|w| w[1] > w[0] * (1.0 + 1e-12)) {
        return Err(Error::Junction(junction_error));
    }
    let branches = (0..2)
        .map(|class| {
            let z = value(class, next[class]);
            branch_moments(lambda_of(z), z / (2.0 * PI), ell)
        })
        .collect();
    Ok(CompletedSpectrum {
        computed,
        tail: Some(TailParams { ell, theta_ell: theta, rho_prime: ph[0], rho_second: ph[1] }),
        m,
        junction_error,
        explicit,
        branches,
    })
}

/// `(K, K′, K″, K‴, K⁗)` at `t = −s`.
fn cumulants(cs: &CompletedSpectrum, s: f64) -> Result<[f64; 5]> {
    let x2 = 2.0 * s;
    let sums = cs
        .explicit
        .par_chunks(2048)
        .map(|c| {
            let mut acc = [0.0; 5];
            for &l in c {
                let den = 1.0 + x2 * l;
                let r = l / den;
                acc[0] += den.ln();
                acc[1] += r;
                acc[2] += r * r;
                acc[3] += r * r * r;
                acc[4] += (r * r) * (r * r);
            }
            acc
        })
        .reduce(|| [0.0; 5], |mut p, q| {
            for i in 0..5 {
                p[i] += q[i];
            }
            p
        });
    let sgn = |j: usize| if j % 2 == 0 { 1.0 } else { -1.0 };
    let rad = x2.abs();
    // log(1+xλ) = Σ (−1)^{q+1} x^q λ^q / q
    let a0 = cs.aggregated(rad, |q| sgn(q + 1) * x2.powi(q as i32) / q as f64)?;
    let mut out = [-0.5 * (sums[0] + a0), 0.0, 0.0, 0.0, 0.0];
    // (λ/(1+xλ))^r = Σ_{j≥0} C(r+j−1, j) (−x)^j λ^{r+j}
    let weights = [0.0, 1.0, 2.0, 8.0, 48.0];
    for r in 1..5 {
        let agg = cs.aggregated(rad, |q| {
            if q < r {
                return 0.0;
            }
            let j = q - r;
            let mut c = 1.0;
            for i in 1..=j {
                c *= (r + i - 1) as f64 / i as f64;
            }
            c * sgn(j) * x2.powi(j as i32)
        })?;
        out[r] = weights[r] * (sums[r] + agg);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Saddle {
    /// Saddle point `t̂` of the cumulant function.
    pub t: f64,
    pub w: f64,
    pub u: f64,
    pub probability: f64,
}

/// Solve `K′(t) = x` for `t < 1/(2λ₁)`, returned as `s = −t`.
fn find_saddle(cs: &CompletedSpectrum, x: f64, trace: f64) -> Result<f64> {
    let g = |s: f64| cumulants(cs, s).map(|c| c[1] - x);
    let (mut lo, mut hi);
    if x < trace {
        lo = 0.0f64;
        hi = 1.0 / cs.explicit[0];
        let mut iters = 0;
        while g(hi)? > 0.0 {
            lo = hi;
            hi *= 4.0;
            iters += 1;
            if iters > 200 {
                return Err(Error::Saddle("no upper bracket for the saddle point".into()));
            }
        }
    } else {
        // right tail: s ∈ (−1/(2λ₁), 0)
        let pole = -0.5 / cs.explicit[0];
        hi = 0.0;
        lo = pole * 0.5;
        let mut iters = 0;
        while g(lo)? < 0.0 {
            hi = lo;
            lo = pole + 0.5 * (lo - pole);
            iters += 1;
            if iters > 200 {
                return Err(Error::Saddle("no lower bracket for the saddle point".into()));
            }
        }
    }
    let mut s = 0.5 * (lo + hi);
    for _ in 0..300 {
        let c = cumulants(cs, s)?;
        let (f, k2) = (c[1] - x, c[2]);
        if f > 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        // dK′/ds = −K″
        let newton = s + f / k2;
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        let scale = lo.abs().max(hi.abs());
        if (next - s).abs() <= 1e-15 * scale || hi - lo <= 1e-15 * scale {
            return Ok(next);
        }
        s = next;
    }
    Err(Error::Saddle("saddle iteration did not converge".into()))
}

/// Lugannani–Rice approximation of `P{Q ≤ ε²}` with the saddle data.
pub fn saddlepoint_detail(cs: &CompletedSpectrum, eps: f64) -> Result<Saddle> {
    let x = eps * eps;
    if eps <= 0.0 || cs.explicit.is_empty() {
        return Err(Error::InvalidParameter("eps must be positive and the spectrum nonempty".into()));
    }
    let trace = cs.trace();
    // near the mean the formula has a removable singularity
    let k2_0 = 2.0 * (cs.explicit_sum(|l| l * l) + cs.aggregated(0.0, |q| if q == 2 { 1.0 } else { 0.0 })?);
    if (x - trace).abs() < 1e-6 * k2_0.sqrt() {
        let k3_0 = 8.0 * (cs.explicit_sum(|l| l * l * l) + cs.aggregated(0.0, |q| if q == 3 { 1.0 } else { 0.0 })?);
        let p = 0.5 + k3_0 / (6.0 * (2.0 * PI).sqrt() * k2_0.powf(1.5));
        return Ok(Saddle { t: 0.0, w: 0.0, u: 0.0, probability: p });
    }
    let s = find_saddle(cs, x, trace)?;
    let [k, _, k2, k3, k4] = cumulants(cs, s)?;
    let t = -s;
    let half_w2 = (t * x - k).max(0.0);
    let w = t.signum() * (2.0 * half_w2).sqrt();
    let u = t * k2.sqrt();
    let (l3, l4) = (k3 / k2.powf(1.5), k4 / (k2 * k2));
    // second-order term of the Daniels expansion
    let second = (l4 / 8.0 - 5.0 * l3 * l3 / 24.0) / u - l3 / (2.0 * u * u) - 1.0 / u.powi(3) + 1.0 / w.powi(3);
    let bracket = 1.0 / w - 1.0 / u - second;
    let probability = if t < 0.0 {
        norm_pdf(w) * (mills_ratio(-w) + bracket)
    } else {
        norm_cdf(w) + norm_pdf(w) * bracket
    };
    if !(probability > 0.0) || !probability.is_finite() {
        return Err(Error::Saddle(format!("degenerate saddlepoint value at eps = {eps}")));
    }
    Ok(Saddle { t, w, u, probability })
}

/// Second-order Lugannani–Rice value of `P{Q ≤ ε²}`.
pub fn lugannani_rice(cs: &CompletedSpectrum, eps: f64) -> Result<f64> {
    saddlepoint_detail(cs, eps).map(|d| d.probability)
}

/// Wynn's ε-algorithm; returns the best even-column estimate and its last change.
pub fn wynn_epsilon(partial: &[f64]) -> (f64, f64) {
    let n = partial.len();
    if n < 3 {
        let v = *partial.last().unwrap_or(&0.0);
        return (v, f64::INFINITY);
    }
    let mut prev = vec![0.0; n + 1];
    let mut cur: Vec<f64> = partial.to_vec();
    let mut best = (cur[n - 1], f64::INFINITY);
    let mut col = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            let base = if col == 0 { 0.0 } else { prev[i + 1] };
            next.push(if d == 0.0 { f64::INFINITY } else { base + 1.0 / d });
        }
        col += 1;
        prev = cur;
        cur = next;
        if cur.iter().any(|v| !v.is_finite()) {
            break;
        }
        if col % 2 == 0 && cur.len() >= 2 {
            let est = cur[cur.len() - 1];
            let change = (est - cur[cur.len() - 2]).abs();
            if change <= best.1 {
                best = (est, change);
            }
        }
    }
    best
}

const GL_NODES: [f64; 10] = [
    0.0765265211334973, 0.2277858511416451, 0.3737060887154195, 0.5108670019508271, 0.6360536807265150,
    0.7463319064601508, 0.8391169718222188, 0.9122344282513259, 0.9639719272779138, 0.9931285991850949,
];
const GL_WEIGHTS: [f64; 10] = [
    0.1527533871307258, 0.1491729864726037, 0.1420961093183820, 0.1316886384491766, 0.1181945319615184,
    0.1019301198172404, 0.0832767415767048, 0.0626720483341091, 0.0406014298003869, 0.0176140071391521,
];

/// 20-point Gauss–Legendre on `[a, b]`.
fn gauss(a: f64, b: f64, f: &dyn Fn(f64) -> Result<f64>) -> Result<f64> {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let mut sum = 0.0;
    for (x, w) in GL_NODES.iter().zip(&GL_WEIGHTS) {
        sum += w * (f(c - h * x)? + f(c + h * x)?);
    }
    Ok(sum * h)
}

/// `∫₀^∞ A(y) sin θ(y) dy` with `θ` eventually decreasing at rate `≈ rate`.
struct Oscillatory<'a> {
    value: &'a dyn Fn(f64) -> Result<f64>,
    /// `(θ, θ′)`
    phase: &'a dyn Fn(f64) -> Result<(f64, f64)>,
    /// `|A(y)|`
    envelope: &'a dyn Fn(f64) -> Result<f64>,
    rate: f64,
    width: f64,
}

impl Oscillatory<'_> {
    fn integrate(&self, tol: f64) -> Result<f64> {
        let mut total = 0.0;
        let mut a = 0.0;
        let mut panels = 0;
        let mut quiet = 0;
        loop {
            let b = a + self.width;
            let piece = gauss(a, b, self.value)?;
            total += piece;
            a = b;
            panels += 1;
            let tail = (self.envelope)(a)? * a.max(self.width);
            quiet = if tail < tol { quiet + 1 } else { 0 };
            if quiet >= 2 {
                return Ok(total);
            }
            if (self.phase)(a)?.1 < 0.5 * self.rate || panels > 50_000 {
                break;
            }
        }
        // panels between consecutive zeros of sin θ, accelerated
        let (th, _) = (self.phase)(a)?;
        let mut j = (th / PI).floor();
        let mut partial = vec![total];
        let mut u0 = a;
        let mut last_est = f64::NAN;
        for _ in 0..20_000 {
            let target = j * PI;
            let mut u1 = u0 + PI / self.rate.abs();
            for _ in 0..60 {
                let (t, dt) = (self.phase)(u1)?;
                let step = (t - target) / dt;
                let cand = u1 - step;
                u1 = if cand > u0 { cand } else { 0.5 * (u0 + u1) };
                if step.abs() < 1e-12 * u1 {
                    break;
                }
            }
            let mid = 0.5 * (u0 + u1);
            total += gauss(u0, mid, self.value)? + gauss(mid, u1, self.value)?;
            partial.push(total);
            u0 = u1;
            j -= 1.0;
            if (self.envelope)(u0)? * u0 < tol {
                return Ok(total);
            }
            if partial.len() >= 12 && partial.len() % 4 == 0 {
                let window = &partial[partial.len().saturating_sub(40)..];
                let (est, change) = wynn_epsilon(window);
                if change < tol && (est - last_est).abs() < tol {
                    return Ok(est);
                }
                last_est = est;
            }
        }
        Err(Error::PrecisionLoss("oscillatory integral did not settle".into()))
    }
}

/// Terms of the Laplace exponent on the line `z = c + iy`, relative to `z = c`.
struct LineTerms {
    /// `Re[K(z) − K(c)]`
    re: f64,
    /// `Im K(z)`
    im: f64,
    /// `d/dy Im K(z)`
    dim: f64,
}

fn line_terms(cs: &CompletedSpectrum, c: f64, y: f64) -> Result<LineTerms> {
    let (lr, at, dt) = cs
        .explicit
        .par_chunks(2048)
        .map(|ch| {
            ch.iter().fold((0.0, 0.0, 0.0), |(p, q, r), &l| {
                let den = 1.0 - 2.0 * c * l;
                let b = 2.0 * y * l / den;
                (p + b.ln_1p_sq(), q + b.atan(), r + (2.0 * l / den) / (1.0 + b * b))
            })
        })
        .reduce(|| (0.0, 0.0, 0.0), |p, q| (p.0 + q.0, p.1 + q.1, p.2 + q.2));
    let z = Complex64::new(c, y);
    let z2 = 2.0 * z;
    let c2 = Complex64::new(2.0 * c, 0.0);
    // −½ Σ [log(1−2zλ) − log(1−2cλ)] = ½ Σ_q ((2z)^q − (2c)^q) λ^q / q
    let agg = cs.aggregated_c(z2.norm(), |q| 0.5 * (z2.powi(q as i32) - c2.powi(q as i32)) / q as f64)?;
    // d/dy K(z) = i Σ λ/(1−2zλ) = i Σ_q (2z)^{q−1} λ^q
    let dagg = cs.aggregated_c(z2.norm(), |q| Complex64::i() * z2.powi(q as i32 - 1))?;
    Ok(LineTerms { re: -0.25 * lr + agg.re, im: 0.5 * at + agg.im, dim: 0.5 * dt + dagg.im })
}

/// `P{Q ≤ ε²}` by inverting the Laplace transform along the vertical line through the saddle point.
pub fn prob_saddlepoint(cs: &CompletedSpectrum, eps: f64) -> Result<f64> {
    let x = eps * eps;
    let detail = saddlepoint_detail(cs, eps)?;
    let trace = cs.trace();
    // keep the line away from the pole of 1/z
    let lam1 = cs.explicit[0];
    let floor = 0.05 / lam1;
    let c = if detail.t.abs() >= floor {
        detail.t
    } else if x < trace || detail.t < 0.0 {
        -floor
    } else {
        detail.t.max(floor.min(0.25 / lam1))
    };
    let [kc, _, k2c, _, _] = cumulants(cs, -c)?;
    let scale = kc - c * x; // log factor e^{K(c) − cx}
    let value = |y: f64| -> Result<f64> {
        let t = line_terms(cs, c, y)?;
        let v = Complex64::new(t.re, t.im - y * x).exp() / Complex64::new(c, y);
        Ok(v.re)
    };
    let phase = |y: f64| -> Result<(f64, f64)> {
        let t = line_terms(cs, c, y)?;
        let arg = y.atan2(c);
        Ok((t.im - y * x - arg + 0.5 * PI, t.dim - x - c / (c * c + y * y)))
    };
    let envelope = |y: f64| -> Result<f64> { Ok(line_terms(cs, c, y)?.re.exp() / (c * c + y * y).sqrt()) };
    let sigma = 1.0 / k2c.sqrt();
    let integral = Oscillatory {
        value: &value,
        phase: &phase,
        envelope: &envelope,
        rate: -x,
        width: 0.5 * sigma,
    }
    .integrate(1e-11 * sigma / c.abs())?;
    let p = if c < 0.0 {
        -(scale.exp()) * integral / PI
    } else {
        1.0 - scale.exp() * integral / PI
    };
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::Saddle(format!("inversion along the saddle line gave {p:e}")));
    }
    Ok(p)
}

struct ImhofTerms {
    theta: f64,
    log_rho: f64,
    dtheta: f64,
}

fn imhof_terms(cs: &CompletedSpectrum, x: f64, u: f64) -> Result<ImhofTerms> {
    let (at, lr, dt) = cs
        .explicit
        .par_chunks(2048)
        .map(|c| {
            c.iter().fold((0.0, 0.0, 0.0), |(a, b, d), &l| {
                let y = l * u;
                (a + y.atan(), b + y.ln_1p_sq(), d + l / (1.0 + y * y))
            })
        })
        .reduce(|| (0.0, 0.0, 0.0), |p, q| (p.0 + q.0, p.1 + q.1, p.2 + q.2));
    let odd = |q: usize| q % 2 == 1;
    let sgn_half = |q: usize| if (q / 2) % 2 == 0 { 1.0 } else { -1.0 };
    // atan(y) = Σ_j (−1)^j y^{2j+1}/(2j+1)
    let a_at = cs.aggregated(u, |q| if odd(q) { sgn_half(q) * u.powi(q as i32) / q as f64 } else { 0.0 })?;
    // log(1+y²) = Σ_{j≥1} (−1)^{j+1} y^{2j}/j
    let a_lr = cs.aggregated(u, |q| if odd(q) { 0.0 } else { -sgn_half(q) * u.powi(q as i32) / (q / 2) as f64 })?;
    // λ/(1+y²) = Σ_j (−1)^j u^{2j} λ^{2j+1}
    let a_dt = cs.aggregated(u, |q| if odd(q) { sgn_half(q) * u.powi(q as i32 - 1) } else { 0.0 })?;
    Ok(ImhofTerms {
        theta: 0.5 * (at + a_at) - 0.5 * x * u,
        log_rho: 0.25 * (lr + a_lr),
        dtheta: 0.5 * (dt + a_dt) - 0.5 * x,
    })
}

trait Ln1pSq {
    fn ln_1p_sq(self) -> f64;
}

impl Ln1pSq for f64 {
    /// `log(1 + y²)` without overflow.
    fn ln_1p_sq(self) -> f64 {
        let y = self.abs();
        if y > 1e150 {
            2.0 * y.ln()
        } else {
            (y * y).ln_1p()
        }
    }
}

/// Characteristic-function inversion `½ − (1/π) ∫₀^∞ sin θ(u) / (u ρ(u)) du`.
pub fn prob_imhof(cs: &CompletedSpectrum, eps: f64) -> Result<f64> {
    let x = eps * eps;
    let guess = lugannani_rice(cs, eps)?;
    if guess < 1e-12 {
        return Err(Error::PrecisionLoss(format!("probability near {guess:.1e} is below the inversion floor")));
    }
    let trace = cs.trace();
    let value = |u: f64| -> Result<f64> {
        if u < 1e-300 {
            return Ok(0.5 * (trace - x));
        }
        let t = imhof_terms(cs, x, u)?;
        Ok(t.theta.sin() / (u * t.log_rho.exp()))
    };
    let phase = |u: f64| -> Result<(f64, f64)> {
        let t = imhof_terms(cs, x, u)?;
        Ok((t.theta, t.dtheta))
    };
    let envelope = |u: f64| -> Result<f64> { Ok((-imhof_terms(cs, x, u)?.log_rho).exp() / u.max(1e-300)) };
    let integral = Oscillatory {
        value: &value,
        phase: &phase,
        envelope: &envelope,
        rate: -0.5 * x,
        width: 2.0 * PI / (trace - x).abs().max(x),
    }
    .integrate(1e-9 * guess)?;
    Ok(0.5 - integral / PI)
}

/// `K ε^a exp(−E ε^{−d})`.
pub fn asymptotic_eval(law: &SmallBallLaw, eps: f64) -> f64 {
    law.to_norm().eval(eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog_process, Family, ProcessParams};
    use crate::spectral::spectrum;

    #[test]
    fn chi_square_cases() {
        let one = CompletedSpectrum::finite(vec![1.0]).unwrap();
        let exact1 = statrs::function::erf::erf(1.0 / 2f64.sqrt());
        assert!((prob_imhof(&one, 1.0).unwrap() - exact1).abs() < 1e-6);
        assert!((prob_saddlepoint(&one, 1.0).unwrap() / exact1 - 1.0).abs() < 0.02);
        let two = CompletedSpectrum::finite(vec![1.0, 1.0]).unwrap();
        let exact2 = 1.0 - (-0.5f64).exp();
        assert!((prob_imhof(&two, 1.0).unwrap() - exact2).abs() < 1e-6);
        assert!((prob_saddlepoint(&two, 1.0).unwrap() / exact2 - 1.0).abs() < 0.02);
    }

    #[test]
    fn wynn_alternating() {
        let mut s = 0.0;
        let partial: Vec<f64> = (0..20)
            .map(|k| {
                s += if k % 2 == 0 { 1.0 } else { -1.0 } / (k as f64 + 1.0);
                s
            })
            .collect();
        assert!((wynn_epsilon(&partial).0 - 2f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn bridge_completion_is_exact() {
        let spec = catalog_process(Family::BridgeTowerIntegrated, &ProcessParams::l(0)).unwrap();
        let sp = spectrum(&spec, 60).unwrap();
        let cs = tail_completed_spectrum(&sp, &spec, 20_000).unwrap();
        assert!(cs.junction_error < 1e-12);
        for (n, l) in cs.explicit().iter().enumerate() {
            let want = 1.0 / (PI * (n + 1) as f64).powi(2);
            assert!((l / want - 1.0).abs() < 1e-10, "{n}");
        }
        assert!((cs.trace() - 1.0 / 6.0).abs() < 1e-13);
    }

    #[test]
    fn bridge_distribution_values() {
        let spec = catalog_process(Family::BridgeTowerIntegrated, &ProcessParams::l(0)).unwrap();
        let sp = spectrum(&spec, 100).unwrap();
        let cs = tail_completed_spectrum(&sp, &spec, 100_000).unwrap();
        for (eps, want) in [(0.3, 0.363856), (0.2, 0.0668511), (0.1, 5.86443e-6), (0.05, 3.06654e-22)] {
            let p = prob_saddlepoint(&cs, eps).unwrap();
            assert!((p / want - 1.0).abs() < 2e-6, "{eps}: {p}");
        }
        let (p, q) = (prob_saddlepoint(&cs, 0.25).unwrap(), prob_imhof(&cs, 0.25).unwrap());
        assert!((p / q - 1.0).abs() < 1e-8);
    }

    #[test]
    fn asymptotic_values() {
        let law = SmallBallLaw::norm(1.0, 0.0, 2.0, 0.125);
        assert!((asymptotic_eval(&law, 1.0) - (-0.125f64).exp()).abs() < 1e-15);
    }
}
