//! Gauss–Legendre rules, geometric panels and Richardson extrapolation.

use alloc::vec;
use alloc::vec::Vec;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(z) and its derivative
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Rule mapped onto the union of panels given by consecutive breakpoints.
pub fn composite(breaks: &[f64], order: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(order);
    let mut out = Vec::with_capacity((breaks.len() - 1) * order);
    for p in breaks.windows(2) {
        let (a, b) = (p[0], p[1]);
        let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
        for (xi, wi) in x.iter().zip(&w) {
            out.push((mid + half * xi, half * wi));
        }
    }
    out
}

/// Breakpoints ε, 2ε, 4ε, …, 1 (the last panel may be shorter).
pub fn geometric_breaks(eps: f64) -> Vec<f64> {
    let mut b = vec![eps];
    let mut t = eps;
    while t * 2.0 < 1.0 - 1e-12 {
        t *= 2.0;
        b.push(t);
    }
    b.push(1.0);
    b
}

/// Richardson table for values at ε, ε/2, ε/4, … assuming an expansion in
/// integer powers of ε. Returns the diagonal.
pub fn richardson_diagonal(values: &[f64]) -> Vec<f64> {
    let m = values.len();
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(m);
    for j in 0..m {
        let mut row = vec![values[j]];
        for k in 1..=j {
            let f = (1u64 << k) as f64;
            let v = row[k - 1] + (row[k - 1] - table[j - 1][k - 1]) / (f - 1.0);
            row.push(v);
        }
        table.push(row);
    }
    table.iter().enumerate().map(|(j, r)| r[j]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        for n in [1, 2, 5, 8, 16] {
            let (x, w) = gauss_legendre(n);
            let deg = 2 * n - 1;
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * libm::pow(*x, deg as f64 - 1.0)).sum();
            let exact = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((s - exact).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn extrapolates_polynomial_in_eps() {
        let f = |e: f64| 2.0 + 3.0 * e - e * e + 0.5 * e * e * e;
        let v: Vec<f64> = (0..6).map(|j| f(0.5 / (1 << j) as f64)).collect();
        let d = richardson_diagonal(&v);
        assert!((d[5] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn panels_cover_interval() {
        let q = composite(&geometric_breaks(1.0 / 64.0), 6);
        let len: f64 = q.iter().map(|(_, w)| w).sum();
        assert!((len - (1.0 - 1.0 / 64.0)).abs() < 1e-14);
    }
}
