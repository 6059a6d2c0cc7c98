use crate::catalog::{Family, ProcessSpec};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_GRID: usize = 2000;

/// Covariance kernel sampled on a uniform trapezoid grid over `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Row-major `n×n` values `G(t_i, t_j)`.
    pub values: Vec<f64>,
}

impl KernelGrid {
    pub fn from_fn(intervals: usize, f: impl Fn(f64, f64) -> f64) -> Self {
        assert!(intervals >= 1);
        let n = intervals + 1;
        let h = 1.0 / intervals as f64;
        let nodes: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
        let mut weights = vec![h; n];
        weights[0] = 0.5 * h;
        weights[n - 1] = 0.5 * h;
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = f(nodes[i], nodes[j]);
                values[i * n + j] = v;
                values[j * n + i] = v;
            }
        }
        KernelGrid { nodes, weights, values }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.len() + j]
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..i).all(|j| self.values[i * n + j] == self.values[j * n + i]))
    }

    fn step(&self) -> f64 {
        self.nodes[1] - self.nodes[0]
    }

    fn symmetrize(&mut self) {
        let n = self.len();
        for i in 0..n {
            for j in 0..i {
                let v = 0.5 * (self.values[i * n + j] + self.values[j * n + i]);
                self.values[i * n + j] = v;
                self.values[j * n + i] = v;
            }
        }
    }
}

/// `∫₀^t ∫₀^s G`
pub fn integrate_kernel(g: &KernelGrid) -> KernelGrid {
    integrate_kernel_from(g, 0)
}

/// Kernel of the process integrated from `β ∈ {0, 1}`.
pub fn integrate_kernel_from(g: &KernelGrid, beta: u8) -> KernelGrid {
    let n = g.len();
    let h2 = 0.5 * g.step();
    let order: Vec<usize> = if beta == 0 { (0..n).collect() } else { (0..n).rev().collect() };
    let mut a = vec![0.0; n * n];
    // along s
    for i in 0..n {
        let row = &g.values[i * n..(i + 1) * n];
        let mut acc = 0.0;
        a[i * n + order[0]] = 0.0;
        for w in order.windows(2) {
            acc += h2 * (row[w[0]] + row[w[1]]);
            a[i * n + w[1]] = acc;
        }
    }
    // along t
    let mut b = vec![0.0; n * n];
    let mut acc = vec![0.0; n];
    for w in order.windows(2) {
        for j in 0..n {
            acc[j] += h2 * (a[w[0] * n + j] + a[w[1] * n + j]);
            b[w[1] * n + j] = acc[j];
        }
    }
    let mut out = KernelGrid { nodes: g.nodes.clone(), weights: g.weights.clone(), values: b };
    out.symmetrize();
    out
}

/// `G − g(t) − g(s) + ḡ`
pub fn center_kernel(g: &KernelGrid) -> KernelGrid {
    let n = g.len();
    let row: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| g.weights[j] * g.values[i * n + j]).sum())
        .collect();
    let mean: f64 = (0..n).map(|i| g.weights[i] * row[i]).sum();
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            values[i * n + j] = g.values[i * n + j] - (row[i] + row[j]) + mean;
        }
    }
    KernelGrid { nodes: g.nodes.clone(), weights: g.weights.clone(), values }
}

/// Covariance of a catalog process built from `c − |t−s|` or `min(t,s)` by the
/// integration / centering recursion of its family.
pub fn catalog_kernel(spec: &ProcessSpec, intervals: usize) -> KernelGrid {
    let tower = |base: KernelGrid, l: usize| -> KernelGrid {
        (0..l).fold(base, |k, _| integrate_kernel(&center_kernel(&k)))
    };
    let integrate_m = |base: KernelGrid| -> KernelGrid {
        spec.beta.iter().fold(base, |k, &b| integrate_kernel_from(&k, b))
    };
    match spec.family {
        Family::Slepian | Family::SlepianIntegrated => {
            let c = spec.c.unwrap_or(1.0);
            integrate_m(KernelGrid::from_fn(intervals, |t, s| c - (t - s).abs()))
        }
        Family::BridgeTowerIntegrated => {
            integrate_m(tower(KernelGrid::from_fn(intervals, |t, s| t.min(s) - t * s), spec.l))
        }
        Family::BridgeCenteredTower => {
            center_kernel(&tower(KernelGrid::from_fn(intervals, |t, s| t.min(s) - t * s), spec.l))
        }
        Family::WienerTowerIntegrated => integrate_m(tower(KernelGrid::from_fn(intervals, f64::min), spec.l)),
        Family::WienerCenteredTower => center_kernel(&tower(KernelGrid::from_fn(intervals, f64::min), spec.l)),
    }
}

/// Largest `count` eigenvalues of `λ y(t) = ∫ G(t,s) y(s) ds`, descending.
pub fn nystrom_eigenvalues(g: &KernelGrid, count: usize) -> Result<Vec<f64>> {
    if !g.is_symmetric() {
        return Err(Error::NonSymmetric);
    }
    let n = g.len();
    if n < 8 * count {
        return Err(Error::InvalidParameter(format!("grid of {n} nodes is too coarse for {count} eigenvalues")));
    }
    let sw: Vec<f64> = g.weights.iter().map(|w| w.sqrt()).collect();
    let a = DMatrix::from_fn(n, n, |i, j| sw[i] * g.values[i * n + j] * sw[j]);
    let block = (2 * count + 4).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut x = DMatrix::from_fn(n, block, |_, _| rng.gen_range(-1.0..1.0));
    let mut prev = vec![f64::INFINITY; count];
    for _ in 0..2000 {
        let q = x.qr().q();
        let y = &a * &q;
        let h = q.transpose() * &y;
        let h = (&h + h.transpose()) * 0.5;
        let eig = SymmetricEigen::new(h);
        let mut idx: Vec<usize> = (0..block).collect();
        idx.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
        let vals: Vec<f64> = idx.iter().take(count).map(|&i| eig.eigenvalues[i]).collect();
        let top = vals[0].abs();
        let done = vals.iter().zip(&prev).all(|(v, p)| (v - p).abs() <= 1e-15 * top + 1e-13 * v.abs());
        prev = vals;
        if done {
            return Ok(prev);
        }
        // next block: A Q V, ordered by Ritz value
        let v = DMatrix::from_fn(block, block, |r, c| eig.eigenvectors[(r, idx[c])]);
        x = y * v;
    }
    Err(Error::Numerical("subspace iteration did not converge".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn weights_sum_to_one() {
        let g = KernelGrid::from_fn(100, |_, _| 1.0);
        assert!((g.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn integrate_examples() {
        let n = 200;
        let one = integrate_kernel(&KernelGrid::from_fn(n, |_, _| 1.0));
        assert_relative_eq!(one.get(n, n), 1.0, max_relative = 1e-12);
        assert_relative_eq!(one.get(n / 2, n / 4), 0.125, max_relative = 1e-12);
        let w = integrate_kernel(&KernelGrid::from_fn(n, f64::min));
        assert_relative_eq!(w.get(n, n), 1.0 / 3.0, max_relative = 1e-4);
        let b = integrate_kernel(&KernelGrid::from_fn(n, |t, s| t.min(s) - t * s));
        assert_relative_eq!(b.get(n, n), 1.0 / 12.0, max_relative = 1e-4);
        assert!(w.is_symmetric());
        let back = integrate_kernel_from(&KernelGrid::from_fn(n, |_, _| 1.0), 1);
        assert_relative_eq!(back.get(0, 0), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn center_examples() {
        let n = 400;
        let c = center_kernel(&KernelGrid::from_fn(n, |_, _| 2.5));
        assert!(c.values.iter().all(|v| v.abs() < 1e-14));
        let w = center_kernel(&KernelGrid::from_fn(n, f64::min));
        assert_relative_eq!(w.get(0, 0), 1.0 / 3.0, max_relative = 1e-5);
        for i in (0..=n).step_by(37) {
            let s: f64 = (0..=n).map(|j| w.weights[j] * w.get(i, j)).sum();
            assert!(s.abs() < 1e-14);
        }
        assert!(w.is_symmetric());
    }

    #[test]
    fn nystrom_examples() {
        let w = nystrom_eigenvalues(&KernelGrid::from_fn(800, f64::min), 5).unwrap();
        assert_relative_eq!(w[0], 4.0 / (PI * PI), max_relative = 1e-5);
        let b = nystrom_eigenvalues(&KernelGrid::from_fn(800, |t, s| t.min(s) - t * s), 5).unwrap();
        assert_relative_eq!(b[0], 1.0 / (PI * PI), max_relative = 1e-5);
        // the root ζ = π of 2 + 2cos ζ − ζ sin ζ is the second one
        let s = nystrom_eigenvalues(&KernelGrid::from_fn(800, |t, s| 1.0 - (t - s).abs()), 5).unwrap();
        assert_relative_eq!(s[1], 2.0 / (PI * PI), max_relative = 1e-5);
        assert!(w.windows(2).all(|p| p[0] >= p[1]));
    }

    #[test]
    fn rejects_asymmetric() {
        let mut g = KernelGrid::from_fn(100, f64::min);
        g.values[1] += 1.0;
        assert_eq!(nystrom_eigenvalues(&g, 3), Err(Error::NonSymmetric));
    }
}
