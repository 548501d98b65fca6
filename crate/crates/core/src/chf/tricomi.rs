//! Routing for Tricomi's `U(a,b,ζ)`.
//!
//! * terminating cases (`a` or `1+a-b` a non-positive integer): finite sums;
//! * other sheets: the monodromy relation back to the principal sheet;
//! * large `|ζ|`: the inverse-power asymptotic series;
//! * otherwise: the connection formula through `M` and `M̃` for non-integer
//!   `b`; when its two terms cancel (in the right half-plane they are both of
//!   size `e^Re ζ`), the integral representation with a downward recurrence
//!   in `a` takes over;
//! * integer `b`: the reflection `U(a,b,ζ) = ζ^(1-b) U(1+a-b,2-b,ζ)` plus the
//!   logarithmic series for integer `b`.

use super::dd::CDd;
use super::gamma::{gamma_ratio_dd, is_integer, is_nonpositive_integer, log_gamma, recip_gamma};
use super::series::{
    continue_kummer_ode, kummer_series_dd, regularized_kummer, tricomi_asymptotic, tricomi_integral,
    tricomi_log_series, tricomi_polynomial,
};
use super::{kummer, EvalPolicy, LogPoint, ASYMPTOTIC_TOL};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

type C64 = Complex64;

/// Relative size of the connection-formula sum below which its two terms are
/// deemed to have cancelled too much.
const CANCELLATION_GUARD: f64 = 1e-2;

pub fn tricomi(a: C64, b: C64, z: &LogPoint, policy: &EvalPolicy) -> Result<C64> {
    if is_nonpositive_integer(a) {
        let m = (-a.re).round() as usize;
        return Ok(tricomi_polynomial(m, b, z.value()));
    }
    let a2 = 1.0 + a - b;
    if is_nonpositive_integer(a2) {
        let m = (-a2.re).round() as usize;
        return Ok(z.pow(1.0 - b) * tricomi_polynomial(m, 2.0 - b, z.value()));
    }
    if z.is_origin() {
        if b.re < 1.0 {
            return Ok((log_gamma(1.0 - b)? - log_gamma(a2)?).exp());
        }
        return Err(Error::Domain(format!("U(a,{b},0) is unbounded")));
    }
    let m = z.sheet();
    if m != 0 {
        return monodromy(a, b, z, m, policy);
    }
    principal(a, b, z, policy)
}

fn principal(a: C64, b: C64, z: &LogPoint, policy: &EvalPolicy) -> Result<C64> {
    let zv = z.value();
    if zv.norm() >= policy.asymptotic_crossover {
        let s = tricomi_asymptotic(a, b, z, policy);
        if s.is_accurate(ASYMPTOTIC_TOL) {
            return Ok(s.value);
        }
    }
    if is_integer(b) {
        let n = b.re.round();
        if n <= 0.0 {
            let reflected = principal(1.0 + a - b, 2.0 - b, z, policy)?;
            return Ok(z.pow(1.0 - b) * reflected);
        }
        return Ok(tricomi_log_series(a, n as usize - 1, z, policy)?.value);
    }
    let (t1, t2) = connection_terms(a, b, z, policy)?;
    let sum = t1 + t2;
    if sum.norm() < CANCELLATION_GUARD * t1.norm().max(t2.norm()) {
        return match connection_dd(a, b, z, policy) {
            Ok(v) => Ok(v),
            Err(_) => tricomi_by_integral(a, b, z),
        };
    }
    Ok(sum)
}

/// The two terms of `U = Γ(1-b)/Γ(1+a-b) M(a,b,ζ) + Γ(b-1)/Γ(a) ζ^(1-b) M(1+a-b,2-b,ζ)`.
fn connection_terms(a: C64, b: C64, z: &LogPoint, policy: &EvalPolicy) -> Result<(C64, C64)> {
    let zv = z.value();
    let c1 = (log_gamma(1.0 - b)? - log_gamma(1.0 + a - b)?).exp();
    let c2 = (log_gamma(b - 1.0)? - log_gamma(a)?).exp();
    let t1 = c1 * kummer(a, b, zv, policy)?;
    let t2 = c2 * z.pow(1.0 - b) * kummer(1.0 + a - b, 2.0 - b, zv, policy)?;
    Ok((t1, t2))
}

/// The connection formula carried out entirely in double-double arithmetic
/// (parameters, gamma ratios, power and both Kummer series), for when its two
/// terms cancel: about 31 digits leave ~1e-14 after cancellation of 1e17.
pub fn connection_dd(a: C64, b: C64, z: &LogPoint, policy: &EvalPolicy) -> Result<C64> {
    let (ad, bd, zd) = (CDd::from(a), CDd::from(b), CDd::from(z.value()));
    let one = CDd::ONE;
    let a2 = one + ad - bd;
    let b2 = CDd::from(2.0) - bd;
    let c1 = gamma_ratio_dd(one - bd, a2)?;
    let c2 = gamma_ratio_dd(bd - one, ad)?;
    let power = ((one - bd) * zd.ln()).exp();
    let t1 = c1 * kummer_dd(ad, bd, zd, policy)?;
    let t2 = c2 * power * kummer_dd(a2, b2, zd, policy)?;
    Ok((t1 + t2).to_c64())
}

/// Kummer's M in double-double: the series directly for `Re z >= 0`, through
/// `M(a,b,z) = e^z M(b-a,b,-z)` otherwise.
fn kummer_dd(a: CDd, b: CDd, z: CDd, policy: &EvalPolicy) -> Result<CDd> {
    const TOL: f64 = 1e-33;
    if z.re.hi >= 0.0 {
        Ok(kummer_series_dd(a, b, z, TOL, policy.max_terms)?.0)
    } else {
        Ok(z.exp() * kummer_series_dd(b - a, b, -z, TOL, policy.max_terms)?.0)
    }
}

/// U by the connection formula alone (no routing); a second, independent
/// path used by cross-checks.
pub fn tricomi_by_connection(a: C64, b: C64, z: &LogPoint, policy: &EvalPolicy) -> Result<C64> {
    if is_integer(b) {
        return Err(Error::Domain("connection formula needs non-integer b".into()));
    }
    let (t1, t2) = connection_terms(a, b, z, policy)?;
    Ok(t1 + t2)
}

/// U by asymptotic start plus Taylor continuation of Kummer's equation
/// inward along the ray through `z` (principal sheet, `Re z > 0`). Stable
/// only while `Re ζ + Re(2a-b) ln|ζ|` decreases inward; kept as an
/// independent path for cross-checks.
pub fn tricomi_by_continuation(a: C64, b: C64, z: &LogPoint, policy: &EvalPolicy) -> Result<C64> {
    continued(a, b, z, policy)
}

fn continued(a: C64, b: C64, z: &LogPoint, policy: &EvalPolicy) -> Result<C64> {
    Ok(continued_pair(a, b, z, policy)?.0)
}

/// `(U, U')` by continuation inward along the ray through `z`.
fn continued_pair(a: C64, b: C64, z: &LogPoint, policy: &EvalPolicy) -> Result<(C64, C64)> {
    let theta = z.arg();
    let mut r = policy.asymptotic_crossover.max(z.norm());
    for _ in 0..40 {
        let start = LogPoint::polar(r, theta);
        let u = tricomi_asymptotic(a, b, &start, policy);
        let u1 = tricomi_asymptotic(a + 1.0, b + 1.0, &start, policy);
        if u.is_accurate(ASYMPTOTIC_TOL) && u1.is_accurate(ASYMPTOTIC_TOL) {
            if r <= z.norm() {
                return Ok((u.value, -a * u1.value));
            }
            return continue_kummer_ode(a, b, start.value(), u.value, -a * u1.value, z.value());
        }
        r *= 1.25;
    }
    Err(Error::NonConvergence {
        terms: policy.max_terms,
    })
}

/// U from the integral representation at `a+N`, `a+N+1` (`Re(a+N) >= 1`)
/// and the contiguous relation
/// `U(a-1) = (2a - b + ζ) U(a) - a(a-b+1) U(a+1)` run downwards, the stable
/// direction since U is the recessive solution as `a` grows. Principal sheet,
/// `ζ` off the cut.
pub fn tricomi_by_integral(a: C64, b: C64, z: &LogPoint) -> Result<C64> {
    let zv = z.value();
    let n = (1.0 - a.re).ceil().max(0.0) as usize;
    let top = a + n as f64;
    let mut u1 = tricomi_integral(top + 1.0, b, zv)?;
    let mut u0 = tricomi_integral(top, b, zv)?;
    for k in 0..n {
        let ak = top - k as f64;
        let down = (2.0 * ak - b + zv) * u0 - ak * (ak - b + 1.0) * u1;
        u1 = u0;
        u0 = down;
    }
    Ok(u0)
}

/// `U(a,b,ζ e^(2πim)) = 2πi e^(-πibm) sin(πbm) / (Γ(1+a-b) sin(πb)) · M(a,b,ζ)/Γ(b)
///                     + e^(-2πibm) U(a,b,ζ)`, with the integer-`b` limit.
fn monodromy(a: C64, b: C64, z: &LogPoint, m: i64, policy: &EvalPolicy) -> Result<C64> {
    let zp = z.to_principal();
    let u = principal(a, b, &zp, policy)?;
    let mf = m as f64;
    let i = C64::new(0.0, 1.0);
    let (ratio, phase) = if is_integer(b) {
        let n = b.re.round() as i64;
        // sin(πbm)/sin(πb) → m (-1)^(n(m-1)), e^(-πibm) → (-1)^(nm)
        let s1 = if (n * (m - 1)).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let s2 = if (n * m).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        (C64::new(mf * s1, 0.0), C64::new(s2, 0.0))
    } else {
        ((PI * b * mf).sin() / (PI * b).sin(), (-i * PI * b * mf).exp())
    };
    let mreg = regularized_kummer(a, b, zp.value(), |a, b, z| kummer(a, b, z, policy))?;
    let coef = 2.0 * PI * i * phase * ratio * recip_gamma(1.0 + a - b);
    Ok(coef * mreg + (-2.0 * PI * i * b * mf).exp() * u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn pol() -> EvalPolicy {
        EvalPolicy::default()
    }

    fn u(a: C64, b: C64, z: C64) -> C64 {
        tricomi(a, b, &LogPoint::principal(z).unwrap(), &pol()).unwrap()
    }

    #[test]
    fn reference_values() {
        // mpmath.hyperu at 30 digits
        let cases = [
            (c(0.5, 0.0), c(0.3, 0.0), c(1.7, 0.0), c(0.612_142_055_405_785_87, 0.0)),
            (c(1.2, 0.5), c(2.7, -0.3), c(0.8, 1.1), c(-0.339_453_555_630_395_8, -1.125_074_093_136_301_2)),
            (c(-4.6, 2.0), c(1.0, 4.6), c(12.0, 0.0), c(1106.758_705_826_785_2, -1203.272_860_131_670_5)),
            (c(1.0, 0.0), c(1.0, 0.0), c(0.5, 0.0), c(0.922_910_632_483_730_47, 0.0)),
            (c(2.5, 0.0), c(3.0, 0.0), c(0.0, 4.0), c(-0.024_412_764_245_028_18, 0.014_551_668_740_376_409)),
            // connection terms cancel by 8e11
            (
                c(-7.953_740_443_906_518_5, -5.955_206_947_947_924),
                c(-1.326_919_899_071_681_3, -1.734_324_733_883_836_3),
                c(-6.851_896_190_376_29, 2.517_824_381_648_981),
                c(-0.164_894_026_991_158_44, 0.958_482_623_060_778),
            ),
        ];
        for (a, b, z, want) in cases {
            let got = u(a, b, z);
            assert!((got - want).norm() < 1e-11 * want.norm(), "U({a},{b},{z}) = {got}, want {want}");
        }
    }

    #[test]
    fn integral_route_matches_double_double_connection() {
        let (a, b) = (c(-2.491_231_512_684_852_8, 9.180_048_576_902_703), c(8.054_290_257_000_831, -3.054_533_290_473_014));
        let z = LogPoint::principal(c(-3.540_673_238_214_715_5, -9.060_724_678_511_502)).unwrap();
        let v1 = tricomi_by_integral(a, b, &z).unwrap();
        let v2 = connection_dd(a, b, &z, &pol()).unwrap();
        assert!((v1 - v2).norm() < 1e-12 * v2.norm(), "{v1} vs {v2}");
    }

    #[test]
    fn continuation_agrees_with_connection_near_handover() {
        let (a, b) = (c(-1.8, 0.9), c(1.0, 1.8));
        for &x in &[2.0, 3.5, 6.0] {
            let z = LogPoint::principal(c(x, 0.0)).unwrap();
            let v1 = tricomi_by_connection(a, b, &z, &pol()).unwrap();
            let v2 = tricomi_by_continuation(a, b, &z, &pol()).unwrap();
            assert!((v1 - v2).norm() < 1e-11 * v2.norm(), "x = {x}: {v1} vs {v2}");
        }
    }

    #[test]
    fn monodromy_matches_lifted_connection_formula() {
        // For non-integer b the connection formula is valid on every sheet.
        let (a, b) = (c(0.3, 0.2), c(0.7, -0.4));
        for &arg in &[1.5 * PI, -1.2 * PI, 2.9 * PI] {
            let z = LogPoint::polar(2.5, arg);
            let direct = tricomi_by_connection(a, b, &z, &pol()).unwrap();
            let routed = tricomi(a, b, &z, &pol()).unwrap();
            assert!((direct - routed).norm() < 1e-12 * direct.norm(), "arg = {arg}");
        }
    }

    #[test]
    fn monodromy_for_integer_b_follows_log_series() {
        // The logarithmic series carries its sheet in ln ζ.
        let (a, b) = (c(0.6, 0.3), c(2.0, 0.0));
        let z = LogPoint::polar(1.5, 1.7 * PI);
        let routed = tricomi(a, b, &z, &pol()).unwrap();
        let series = tricomi_log_series(a, 1, &z, &pol()).unwrap().value;
        assert!((routed - series).norm() < 1e-12 * series.norm());
    }

    #[test]
    fn reflection_holds_off_the_cut() {
        let (a, b) = (c(0.4, -0.7), c(-1.3, 0.6));
        for &z in &[c(0.5, 0.5), c(-4.0, 1.0), c(7.0, -2.0), c(0.0, 35.0)] {
            let lp = LogPoint::principal(z).unwrap();
            let lhs = tricomi(a, b, &lp, &pol()).unwrap();
            let rhs = lp.pow(1.0 - b) * tricomi(1.0 + a - b, 2.0 - b, &lp, &pol()).unwrap();
            assert!((lhs - rhs).norm() < 1e-10 * lhs.norm(), "z = {z}");
        }
    }
}
