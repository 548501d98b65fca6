//! Complex log-gamma and digamma.
//!
//! Both shift the argument up until `|z| >= 15`, apply the Stirling /
//! de Moivre asymptotic series, and undo the shift. The left half-plane goes
//! through the reflection formulas.

use super::dd::{CDd, Dd, PI_DD};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const SHIFT_RADIUS: f64 = 15.0;

// B_{2n} / (2n (2n-1)) for n = 1..10
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

// B_{2n} / (2n) for n = 1..10
const DIGAMMA_ASYM: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
    43_867.0 / 14_364.0,
    -174_611.0 / 6600.0,
];

/// True when `z` is (numerically) one of 0, -1, -2, ...
pub fn is_nonpositive_integer(z: Complex64) -> bool {
    let tol = 1e-12 * z.re.abs().max(1.0);
    z.im.abs() <= tol && z.re <= tol && (z.re - z.re.round()).abs() <= tol
}

/// True when `z` is numerically an integer.
pub fn is_integer(z: Complex64) -> bool {
    let tol = 1e-12 * z.re.abs().max(1.0);
    z.im.abs() <= tol && (z.re - z.re.round()).abs() <= tol
}

fn stirling(z: Complex64) -> Complex64 {
    let zinv = z.inv();
    let zinv2 = zinv * zinv;
    let mut corr = Complex64::new(0.0, 0.0);
    let mut p = zinv;
    for c in STIRLING {
        corr += p * c;
        p *= zinv2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + corr
}

/// Log-gamma continued analytically from the positive real axis, so the
/// imaginary part is not reduced modulo 2π.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::PoleAtNonPositiveInteger { z: z.to_string() });
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    // Shift right past the origin and out to the Stirling radius; the result
    // is a logarithm of Γ, equal to the principal branch modulo 2πi.
    while w.re < 0.5 || w.norm() < SHIFT_RADIUS {
        shift += w.ln();
        w += 1.0;
    }
    Ok(stirling(w) - shift)
}

/// Γ(z) for complex z.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(log_gamma(z)?.exp())
}

/// 1/Γ(z), entire; exactly zero at the poles of Γ.
pub fn recip_gamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return Complex64::new(0.0, 0.0);
    }
    match log_gamma(z) {
        Ok(lg) => (-lg).exp(),
        Err(_) => Complex64::new(0.0, 0.0),
    }
}

/// ψ(z) = Γ'(z)/Γ(z).
pub fn digamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::PoleAtNonPositiveInteger { z: z.to_string() });
    }
    if z.re < 0.5 {
        // ψ(z) = ψ(1-z) - π cot(πz)
        let t = (z * PI).tan();
        return Ok(digamma(Complex64::new(1.0, 0.0) - z)? - PI / t);
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    // Shift right past the origin and out to the Stirling radius; the result
    // is a logarithm of Γ, equal to the principal branch modulo 2πi.
    while w.re < 0.5 || w.norm() < SHIFT_RADIUS {
        shift += w.inv();
        w += 1.0;
    }
    let winv = w.inv();
    let winv2 = winv * winv;
    let mut corr = Complex64::new(0.0, 0.0);
    let mut p = winv2;
    for c in DIGAMMA_ASYM {
        corr += p * c;
        p *= winv2;
    }
    Ok(w.ln() - 0.5 * winv - corr - shift)
}

/// Pochhammer symbol (a)_n.
pub fn pochhammer(a: Complex64, n: usize) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, k| acc * (a + k as f64))
}

/// `B_2k` as exact fractions, `k = 1..=15`.
const BERNOULLI: [(f64, f64); 15] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
];

/// A logarithm of Γ(z) in double-double precision (equal to the principal
/// branch modulo 2πi; callers exponentiate). Shifts to `|w| >= 20`, where
/// fifteen Stirling corrections are below 1e-32.
pub fn log_gamma_dd(z: CDd) -> Result<CDd> {
    if is_nonpositive_integer(z.to_c64()) {
        return Err(Error::PoleAtNonPositiveInteger { z: z.to_c64().to_string() });
    }
    let one = CDd::ONE;
    let mut w = z;
    let mut prod = one;
    while w.re.hi < 0.5 || w.to_c64().norm() < 20.0 {
        prod = prod * w;
        w = w + one;
    }
    let half = CDd::from(0.5);
    let half_ln_2pi = (PI_DD.mul_f64(2.0)).ln().mul_f64(0.5);
    let inv = one / w;
    let inv2 = inv * inv;
    let mut pow = inv;
    let mut corr = CDd::ZERO;
    for (k, &(num, den)) in BERNOULLI.iter().enumerate() {
        let n = 2.0 * (k + 1) as f64;
        let c = Dd::new(num) / (Dd::new(den) * Dd::new(n * (n - 1.0)));
        corr = corr + pow.scale(c);
        pow = pow * inv2;
    }
    let lw = w.ln();
    let stirling = (w - half) * lw - w + CDd::new(half_ln_2pi, Dd::ZERO) + corr;
    Ok(stirling - prod.ln())
}

/// `Γ(x)/Γ(y)` in double-double precision.
pub fn gamma_ratio_dd(x: CDd, y: CDd) -> Result<CDd> {
    Ok((log_gamma_dd(x)? - log_gamma_dd(y)?).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn log_gamma_one_is_zero() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!(log_gamma(c(2.0, 0.0)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn gamma_half_is_sqrt_pi() {
        let g = gamma(c(0.5, 0.0)).unwrap();
        assert!((g.re - PI.sqrt()).abs() < 1e-14);
        assert!(g.im.abs() < 1e-15);
    }

    #[test]
    fn log_gamma_one_plus_i() {
        // mpmath.loggamma(1+1j)
        let lg = log_gamma(c(1.0, 1.0)).unwrap();
        assert!((lg.re - -0.650_923_199_301_856_8).abs() < 1e-14);
        assert!((lg.im - -0.301_640_320_467_533_2).abs() < 1e-14);
    }

    #[test]
    fn gamma_matches_factorials_and_reflection() {
        let mut f = 1.0;
        for n in 1..25 {
            let g = gamma(c(n as f64, 0.0)).unwrap();
            assert!((g.re / f - 1.0).abs() < 1e-13, "n = {n}");
            f *= n as f64;
        }
        // Γ(z)Γ(1-z) = π / sin(πz)
        for &z in &[c(0.3, 0.7), c(-2.4, 1.3), c(-7.5, -0.2), c(3.1, -4.0)] {
            let lhs = gamma(z).unwrap() * gamma(c(1.0, 0.0) - z).unwrap();
            let rhs = PI / (z * PI).sin();
            assert!(((lhs - rhs) / rhs).norm() < 1e-13, "z = {z}");
        }
    }

    #[test]
    fn gamma_recurrence_holds_far_out() {
        for &z in &[c(40.0, 30.0), c(-60.3, 5.0), c(0.1, -80.0), c(95.0, 0.5)] {
            let lhs = log_gamma(z + 1.0).unwrap();
            let rhs = log_gamma(z).unwrap() + z.ln();
            let d = lhs - rhs;
            // Equal modulo 2πi.
            let k = (d.im / (2.0 * PI)).round();
            let d = d - c(0.0, 2.0 * PI * k);
            assert!(d.norm() < 1e-13 * lhs.norm().max(1.0), "z = {z}: {d}");
        }
    }

    const RATIO_RE: (f64, f64) = (557.192_866_167_629_2, -3.622_702_346_248_552e-14);
    const RATIO_IM: (f64, f64) = (-1641.301_437_426_422_8, 1.036_225_255_540_068e-13);

    #[test]
    fn double_double_gamma_ratio() {
        // mpmath at 40 digits: Γ(3.5-2.25i)/Γ(-4.75+1.5i)
        let r = gamma_ratio_dd(c(3.5, -2.25).into(), c(-4.75, 1.5).into()).unwrap();
        let want_re = Dd { hi: RATIO_RE.0, lo: RATIO_RE.1 };
        let want_im = Dd { hi: RATIO_IM.0, lo: RATIO_IM.1 };
        let err = CDd::new(r.re - want_re, r.im - want_im).norm_f64();
        assert!(err < 1e-28 * (RATIO_RE.0.hypot(RATIO_IM.0)), "{err:e}");
    }

    #[test]
    fn recip_gamma_vanishes_at_poles() {
        assert_eq!(recip_gamma(c(0.0, 0.0)).norm(), 0.0);
        assert_eq!(recip_gamma(c(-3.0, 0.0)).norm(), 0.0);
        assert!(matches!(
            log_gamma(c(-2.0, 0.0)),
            Err(Error::PoleAtNonPositiveInteger { .. })
        ));
    }

    #[test]
    fn digamma_values() {
        let d1 = digamma(c(1.0, 0.0)).unwrap();
        assert!((d1.re + EULER_GAMMA).abs() < 1e-15);
        // ψ(1/2) = -γ - 2 ln 2
        let dh = digamma(c(0.5, 0.0)).unwrap();
        assert!((dh.re - (-EULER_GAMMA - 2.0 * 2f64.ln())).abs() < 1e-14);
        // ψ(z+1) = ψ(z) + 1/z off the axis and in the left half-plane
        for &z in &[c(0.2, 3.0), c(-4.3, 0.7), c(12.0, -9.0)] {
            let lhs = digamma(z + 1.0).unwrap();
            let rhs = digamma(z).unwrap() + z.inv();
            assert!((lhs - rhs).norm() < 1e-13 * lhs.norm().max(1.0));
        }
    }
}
