//! Gauss–Legendre rules and a couple of special functions.

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p, dp)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    (
        x.iter().map(|t| mid + half * t).collect(),
        w.iter().map(|t| half * t).collect(),
    )
}

/// Error function.
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Imaginary error function `erfi(x) = -i erf(i x)`.
pub fn erfi(x: f64) -> f64 {
    let ax = x.abs();
    if ax == 0.0 {
        return x;
    }
    let value = if ax < 6.0 {
        // Power series 2/sqrt(pi) Σ x^(2k+1) / (k! (2k+1)).
        let mut term = ax;
        let mut sum = ax;
        let x2 = ax * ax;
        let mut k = 0.0;
        loop {
            k += 1.0;
            term *= x2 / k;
            let add = term / (2.0 * k + 1.0);
            sum += add;
            if add < 1e-17 * sum {
                break;
            }
        }
        2.0 / PI.sqrt() * sum
    } else {
        // Asymptotic expansion e^{x²} / (x sqrt(pi)) Σ (2k-1)!! / (2x²)^k.
        let x2 = ax * ax;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..12 {
            term *= (2.0 * k as f64 - 1.0) / (2.0 * x2);
            sum += term;
        }
        x2.exp() / (ax * PI.sqrt()) * sum
    };
    value.copysign(x)
}
