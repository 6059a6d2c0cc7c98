use num_complex::Complex64;

/// `a / b` without squaring `|b|`, safe for subnormal divisors.
fn cdiv(a: Complex64, b: Complex64) -> Complex64 {
    let s = b.re.abs().max(b.im.abs());
    let (a, b) = (a / s, b / s);
    a * b.conj() / b.norm_sqr()
}

/// Determinant of a dense row-major `n×n` complex matrix by Gaussian
/// elimination with partial pivoting. Consumes its buffer.
pub fn det(mut a: Vec<Complex64>, n: usize) -> Complex64 {
    debug_assert_eq!(a.len(), n * n);
    let mut d = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].norm();
        for r in col + 1..n {
            let v = a[r * n + col].norm();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != col {
            for c in 0..n {
                a.swap(col * n + c, piv * n + c);
            }
            d = -d;
        }
        let p = a[col * n + col];
        d *= p;
        for r in col + 1..n {
            let f = cdiv(a[r * n + col], p);
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in col + 1..n {
                let v = a[col * n + c];
                a[r * n + c] -= f * v;
            }
        }
    }
    d
}

/// Solve `a x = b` for small dense complex systems. `None` when singular.
pub fn solve(mut a: Vec<Complex64>, mut b: Vec<Complex64>, n: usize) -> Option<Vec<Complex64>> {
    let scale = a.iter().map(|v| v.norm()).fold(0.0, f64::max);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm()))
            .unwrap();
        if a[piv * n + col].norm() <= 1e-14 * scale {
            return None;
        }
        if piv != col {
            for c in 0..n {
                a.swap(col * n + c, piv * n + c);
            }
            b.swap(col, piv);
        }
        let p = a[col * n + col];
        for r in col + 1..n {
            let f = cdiv(a[r * n + col], p);
            for c in col..n {
                let v = a[col * n + c];
                a[r * n + c] -= f * v;
            }
            let bc = b[col];
            b[r] -= f * bc;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let mut s = b[r];
        for c in r + 1..n {
            s -= a[r * n + c] * x[c];
        }
        x[r] = cdiv(s, a[r * n + r]);
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn det_small() {
        let a = vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)];
        assert!((det(a, 2) - c(-2.0, 0.0)).norm() < 1e-15);
        let a = vec![c(0.0, 1.0), c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)];
        assert!((det(a, 2) - c(-2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn solve_small() {
        let a = vec![c(2.0, 0.0), c(1.0, 1.0), c(0.0, 1.0), c(3.0, 0.0)];
        let x = vec![c(1.0, -1.0), c(0.5, 2.0)];
        let b = vec![a[0] * x[0] + a[1] * x[1], a[2] * x[0] + a[3] * x[1]];
        let y = solve(a, b, 2).unwrap();
        assert!((y[0] - x[0]).norm() < 1e-14 && (y[1] - x[1]).norm() < 1e-14);
    }
}
