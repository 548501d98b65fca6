//! Reference special functions for the cross-checks, implemented from their
//! own integral representations and power series. Nothing here calls the
//! confluent hypergeometric kernel.

use std::f64::consts::PI;

/// `J_n(x) = (1/2π) ∫₀^{2π} cos(nτ - x sin τ) dτ`; the trapezoidal rule is
/// spectrally accurate for this periodic integrand.
pub fn bessel_j(n: i32, x: f64) -> f64 {
    let points = 2 * (x.abs().ceil() as usize + n.unsigned_abs() as usize) + 64;
    let h = 2.0 * PI / points as f64;
    let nf = n as f64;
    let sum: f64 = (0..points)
        .map(|i| {
            let t = i as f64 * h;
            (nf * t - x * t.sin()).cos()
        })
        .sum();
    sum / points as f64
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on
/// `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
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
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
pub fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `j_l(x) = (1/2)(-i)^l ∫₋₁¹ e^{ixt} P_l(t) dt`, by Gauss–Legendre
/// quadrature.
pub fn spherical_bessel_j(l: u32, x: f64) -> f64 {
    let n = 48 + 2 * x.abs().ceil() as usize + l as usize;
    let (t, w) = gauss_legendre(n);
    let even = l % 2 == 0;
    let sum: f64 = t
        .iter()
        .zip(&w)
        .map(|(&ti, &wi)| {
            let (p, _) = legendre_with_derivative(l as usize, ti);
            let osc = if even { (x * ti).cos() } else { (x * ti).sin() };
            wi * p * osc
        })
        .sum();
    let sign = if (l / 2) % 2 == 0 { 1.0 } else { -1.0 };
    0.5 * sign * sum
}

/// `K_ν(x) = ∫₀^∞ e^{-x cosh t} cosh(νt) dt` for `x > 0`, trapezoidal rule.
pub fn bessel_k(nu: f64, x: f64) -> f64 {
    let h = 0.02;
    let mut sum = 0.5 * (-x).exp();
    let mut i = 1usize;
    loop {
        let t = i as f64 * h;
        let term = (-x * t.cosh()).exp() * (nu * t).cosh();
        sum += term;
        if term < 1e-18 * sum || i > 200_000 {
            break;
        }
        i += 1;
    }
    sum * h
}

const AI0: f64 = 0.355_028_053_887_817_24;
const AIP0: f64 = 0.258_819_403_792_806_8;

fn airy_series(x: f64) -> f64 {
    let x3 = x * x * x;
    let (mut f, mut g) = (0.0, 0.0);
    let (mut tf, mut tg) = (1.0, x);
    for k in 0..200 {
        f += tf;
        g += tg;
        let kf = k as f64;
        tf *= x3 / ((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        tg *= x3 / ((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        if tf.abs() < 1e-18 * f.abs().max(1e-300) && tg.abs() < 1e-18 * g.abs().max(1e-300) {
            break;
        }
    }
    AI0 * f - AIP0 * g
}

/// `Ai(x)`: Maclaurin series for `x ≤ 2`, and
/// `Ai(x) = (1/π) √(x/3) K_{1/3}((2/3) x^{3/2})` beyond.
pub fn airy_ai(x: f64) -> f64 {
    if x <= 2.0 {
        airy_series(x)
    } else {
        let zeta = 2.0 / 3.0 * x.powf(1.5);
        (x / 3.0).sqrt() * bessel_k(1.0 / 3.0, zeta) / PI
    }
}
