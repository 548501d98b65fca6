//! Raw evaluation regimes: power series, asymptotic expansions, the
//! logarithmic series for integer `b`, terminating polynomials and Taylor
//! continuation of Kummer's equation. Routing between them lives in
//! `chf::mod` and `chf::tricomi`.

use super::dd::CDd;
use super::gamma::{digamma, is_nonpositive_integer, log_gamma, recip_gamma};
use super::{EvalPolicy, LogPoint};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// A summed series together with its largest term, the natural scale for
/// judging cancellation.
#[derive(Debug, Clone, Copy)]
pub struct Summed {
    pub value: C64,
    pub max_term: f64,
}

/// Stopping rule shared by every convergent series: `quiet` consecutive terms
/// below `tol * |sum|`.
struct Stopper {
    tol: f64,
    quiet: usize,
}

impl Stopper {
    fn new(tol: f64) -> Self {
        Stopper { tol, quiet: 0 }
    }

    fn done(&mut self, term: f64, sum: f64) -> bool {
        if term <= self.tol * sum {
            self.quiet += 1;
        } else {
            self.quiet = 0;
        }
        self.quiet >= 3
    }
}

/// Kummer's power series `sum (a)_n/(b)_n z^n/n!`, accumulated in
/// double-double so that the `e^|z|` cancellation on the imaginary and
/// negative axes does not eat the result.
pub fn kummer_series(a: C64, b: C64, z: C64, policy: &EvalPolicy) -> Result<Summed> {
    if is_nonpositive_integer(b) {
        return Err(Error::InvalidB { b: b.to_string() });
    }
    let (sum, max_term) =
        kummer_series_dd(a.into(), b.into(), z.into(), policy.series_tol * 0.01, policy.max_terms)?;
    Ok(Summed {
        value: sum.to_c64(),
        max_term,
    })
}

/// The same series with double-double parameters, stopped once terms fall
/// below `tol` relative to the sum; returns the double-double sum and the
/// largest term.
pub fn kummer_series_dd(ad: CDd, bd: CDd, zd: CDd, tol: f64, max_terms: usize) -> Result<(CDd, f64)> {
    let mut term = CDd::ONE;
    let mut sum = CDd::ONE;
    let mut max_term = 1.0f64;
    let mut stop = Stopper::new(tol);
    for n in 0..max_terms {
        let nd = CDd::from(n as f64);
        let num = (ad + nd) * zd;
        let den = (bd + nd) * CDd::from((n + 1) as f64);
        term = term * num / den;
        sum = sum + term;
        let t = term.norm_f64();
        max_term = max_term.max(t);
        if t == 0.0 || stop.done(t, sum.norm_f64()) {
            return Ok((sum, max_term));
        }
    }
    Err(Error::NonConvergence { terms: max_terms })
}

/// Result of an optimally truncated asymptotic series.
#[derive(Debug, Clone, Copy)]
pub struct Asymptotic {
    pub value: C64,
    /// Estimated absolute truncation error.
    pub error: f64,
}

impl Asymptotic {
    pub fn is_accurate(&self, rel_tol: f64) -> bool {
        self.value.is_finite() && self.error <= rel_tol * self.value.norm()
    }
}

/// `sum_s (p)_s (q)_s / s! * w^s`, truncated at its smallest term.
/// Returns the partial sum and the magnitude of the first omitted term.
fn divergent_sum(p: C64, q: C64, w: C64, max_terms: usize) -> (C64, f64) {
    let mut term = ONE;
    let mut sum = ONE;
    let mut last = 1.0f64;
    for s in 0..max_terms {
        let next = term * (p + s as f64) * (q + s as f64) * w / (s + 1) as f64;
        let m = next.norm();
        if m == 0.0 {
            return (sum, 0.0);
        }
        if m >= last {
            return (sum, m);
        }
        if m <= 1e-17 * sum.norm() {
            return (sum + next, m * 1e-3);
        }
        sum += next;
        term = next;
        last = m;
    }
    (sum, last)
}

/// Large-|z| expansion of M as the sum of its exponential and algebraic
/// pieces, each optimally truncated. `z` must be on the principal sheet.
pub fn kummer_asymptotic(a: C64, b: C64, z: C64, policy: &EvalPolicy) -> Result<Asymptotic> {
    if is_nonpositive_integer(b) {
        return Err(Error::InvalidB { b: b.to_string() });
    }
    let lgb = log_gamma(b)?;
    let lnz = z.ln();
    let winv = z.inv();
    // e^z z^(a-b) Γ(b)/Γ(a) Σ (1-a)_s (b-a)_s / s! z^-s
    let (s1, e1, pre1) = if is_nonpositive_integer(a) {
        (ZERO, 0.0, ZERO)
    } else {
        let (s, e) = divergent_sum(ONE - a, b - a, winv, policy.max_terms);
        let pre = (lgb - log_gamma(a)? + z + (a - b) * lnz).exp();
        (s, e, pre)
    };
    // e^(±iπa) z^-a Γ(b)/Γ(b-a) Σ (a)_s (a-b+1)_s / s! (-z)^-s
    let (s2, e2, pre2) = if is_nonpositive_integer(b - a) {
        (ZERO, 0.0, ZERO)
    } else {
        let (s, e) = divergent_sum(a, a - b + 1.0, -winv, policy.max_terms);
        let sign = if z.im >= 0.0 { 1.0 } else { -1.0 };
        let phase = C64::new(0.0, sign * PI) * a;
        let pre = (lgb - log_gamma(b - a)? + phase - a * lnz).exp();
        (s, e, pre)
    };
    Ok(Asymptotic {
        value: pre1 * s1 + pre2 * s2,
        error: pre1.norm() * e1 + pre2.norm() * e2,
    })
}

/// `U(a,b,z) ~ z^-a Σ (a)_s (a-b+1)_s / s! (-z)^-s`, valid for
/// |arg z| < 3π/2; the power uses the lifted logarithm of `z`.
pub fn tricomi_asymptotic(a: C64, b: C64, z: &LogPoint, policy: &EvalPolicy) -> Asymptotic {
    let (s, e) = divergent_sum(a, a - b + 1.0, -z.value().inv(), policy.max_terms);
    let pre = z.pow(-a);
    Asymptotic {
        value: pre * s,
        error: pre.norm() * e,
    }
}

/// `Γ(a) U(a,b,z) = ∫_0^∞ e^(-zt) t^(a-1) (1+t)^(b-a-1) dt` for `Re a >= 1`,
/// along a ray `t = u e^(iφ)/|z|`. Normally `φ = -arg z`, which makes `zt = u`
/// real; near the negative axis that ray would graze the branch point
/// `t = -1`, so the rotation is split between damping and clearance
/// (`|arg zt| <= π/4`, ray at least `π/4` from `t = -1`). Exp-sinh quadrature `u = exp(π/2 sinh s)` with step halving. The
/// integrand is formed in log space so that large exponents neither
/// overflow nor lose digits. Returns `U` itself.
pub fn tricomi_integral(a: C64, b: C64, z: C64) -> Result<C64> {
    let theta = z.arg();
    let phi = if theta.abs() <= 0.5 * PI {
        -theta
    } else {
        -theta.signum() * (0.5 * PI + 0.5 * (theta.abs() - 0.5 * PI))
    };
    let rot = C64::from_polar(1.0 / z.norm(), phi);
    let damp = C64::from_polar(1.0, theta + phi);
    let c = b - a - 1.0;
    let ln_rot = rot.ln();
    let log_integrand = |s: f64| -> C64 {
        let u = (0.5 * PI * s.sinh()).exp();
        let lnu = 0.5 * PI * s.sinh();
        let t = rot * u;
        let jac = lnu + (0.5 * PI * s.cosh()).ln();
        -damp * u + (a - 1.0) * (lnu + ln_rot) + c * (ONE + t).ln() + jac + ln_rot
    };
    let term = |s: f64| -> C64 {
        let l = log_integrand(s);
        if l.re < -745.0 {
            ZERO
        } else {
            l.exp()
        }
    };
    const S: f64 = 6.0;
    let mut h = 0.5;
    let mut n = (S / h) as i64;
    let mut sum: C64 = (-n..=n).map(|k| term(k as f64 * h)).sum();
    let mut est = sum * h;
    let mut last_change = f64::INFINITY;
    for _ in 0..8 {
        h *= 0.5;
        n *= 2;
        let mid: C64 = (-n..n).step_by(2).map(|k| term((k + 1) as f64 * h)).sum();
        sum += mid;
        let next = sum * h;
        let change = (next - est).norm() / next.norm();
        est = next;
        // Convergence is roughly quadratic in h, so a 1e-14 change already
        // means the previous halving was close to round-off; a change that
        // stops shrinking at a small level is the round-off floor itself.
        let stalled = change <= 1e-12 && change >= 0.25 * last_change;
        if change <= 1e-14 || stalled {
            return Ok(est * (-log_gamma(a)?).exp());
        }
        last_change = change;
    }
    Err(Error::NonConvergence { terms: 2 * n as usize + 1 })
}

/// `U(-m, b, z)` as the terminating sum `(-1)^m Σ C(m,s) (b+s)_(m-s) (-z)^s`.
pub fn tricomi_polynomial(m: usize, b: C64, z: C64) -> C64 {
    let mut sum = ZERO;
    let mut binom = 1.0f64;
    let mut zpow = ONE;
    for s in 0..=m {
        let mut poch = ONE;
        for j in 0..(m - s) {
            poch *= b + (s + j) as f64;
        }
        sum += poch * zpow * binom;
        zpow *= -z;
        binom = binom * (m - s) as f64 / (s + 1) as f64;
    }
    if m % 2 == 1 {
        -sum
    } else {
        sum
    }
}

/// Logarithmic series for `U(a, n+1, z)`, `n >= 0`, with `a` and `a-n` off
/// the non-positive integers (those cases terminate and are handled
/// elsewhere). The series part is accumulated in double-double, with the
/// digamma increments summed exactly term by term.
pub fn tricomi_log_series(a: C64, n: usize, z: &LogPoint, policy: &EvalPolicy) -> Result<Summed> {
    let zv = z.value();
    let nf = n as f64;
    // (-1)^(n+1) / (n! Γ(a-n))
    let mut nfact = 1.0;
    for j in 1..=n {
        nfact *= j as f64;
    }
    let sign = if (n + 1) % 2 == 0 { 1.0 } else { -1.0 };
    let pref = recip_gamma(a - nf) * (sign / nfact);

    let l0 = z.ln() + digamma(a)? - digamma(ONE)? - digamma(C64::new(nf + 1.0, 0.0))?;
    let (ad, zd) = (CDd::from(a), CDd::from(zv));
    let mut term = CDd::ONE;
    let mut incr = CDd::ZERO;
    let mut s1 = CDd::ONE;
    let mut s2 = CDd::ZERO;
    let mut max_term = 1.0f64;
    let mut stop = Stopper::new(policy.series_tol * 0.01);
    let l0n = l0.norm();
    let mut converged = pref.norm() == 0.0;
    if !converged {
        for k in 0..policy.max_terms {
            let kd = CDd::from(k as f64);
            // digamma differences: ψ(a+k+1)-ψ(a+k) = 1/(a+k), etc.
            incr = incr + CDd::ONE / (ad + kd)
                - CDd::from(1.0 / (k as f64 + 1.0))
                - CDd::ONE / CDd::from(nf + k as f64 + 1.0);
            let num = (ad + kd) * zd;
            let den = CDd::from((nf + k as f64 + 1.0) * (k as f64 + 1.0));
            term = term * num / den;
            s1 = s1 + term;
            s2 = s2 + term * incr;
            let t = term.norm_f64() * (l0n + incr.norm_f64());
            max_term = max_term.max(t);
            let total = (s1.to_c64() * l0 + s2.to_c64()).norm();
            if term.norm_f64() == 0.0 || stop.done(t, total) {
                converged = true;
                break;
            }
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            terms: policy.max_terms,
        });
    }
    let series = (s1.to_c64() * l0 + s2.to_c64()) * pref;
    // (1/Γ(a)) Σ_{k=1}^{n} (k-1)! (1-a+k)_(n-k) / (n-k)! z^-k
    let mut finite = ZERO;
    if n > 0 {
        let rga = recip_gamma(a);
        let zinv = zv.inv();
        let mut zpow = ONE;
        let mut kfact = 1.0; // (k-1)!
        for k in 1..=n {
            zpow *= zinv;
            if k > 1 {
                kfact *= (k - 1) as f64;
            }
            let mut poch = ONE;
            for j in 0..(n - k) {
                poch *= ONE - a + (k + j) as f64;
            }
            let mut nk = 1.0;
            for j in 1..=(n - k) {
                nk *= j as f64;
            }
            finite += poch * zpow * (kfact / nk);
        }
        finite *= rga;
    }
    Ok(Summed {
        value: series + finite,
        max_term: max_term * pref.norm() + finite.norm(),
    })
}

/// Taylor-series continuation of a solution of Kummer's equation
/// `z w'' + (b - z) w' - a w = 0` along the straight segment from `z0` to
/// `z1`, starting from `(w, w')` at `z0`. Each step stays within half the
/// distance to the singular point `z = 0`.
/// Longest Taylor step used by the ODE continuation.
const MAX_TAYLOR_STEP: f64 = 1.5;

pub fn continue_kummer_ode(
    a: C64,
    b: C64,
    z0: C64,
    w0: C64,
    dw0: C64,
    z1: C64,
) -> Result<(C64, C64)> {
    let mut z = z0;
    let mut w = w0;
    let mut dw = dw0;
    let mut guard = 0;
    while (z1 - z).norm() > 0.0 {
        guard += 1;
        if guard > 10_000 {
            return Err(Error::NonConvergence { terms: guard });
        }
        let remaining = z1 - z;
        // Half the distance to the singular point, and short in absolute
        // terms: the Taylor coefficients carry an e^h component that would
        // otherwise swamp the recessive solution.
        let limit = (0.5 * z.norm()).min(MAX_TAYLOR_STEP);
        let h = if remaining.norm() <= limit {
            remaining
        } else {
            remaining * (limit / remaining.norm())
        };
        let (nw, ndw) = taylor_step(a, b, z, w, dw, h)?;
        z = if h == remaining { z1 } else { z + h };
        w = nw;
        dw = ndw;
    }
    Ok((w, dw))
}

fn taylor_step(a: C64, b: C64, z0: C64, w: C64, dw: C64, h: C64) -> Result<(C64, C64)> {
    let mut c_prev = w; // c_n
    let mut c_cur = dw; // c_{n+1}
    let mut val = w + dw * h;
    let mut der = dw;
    let mut hpow = h; // h^(n+1)
    let mut quiet = 0;
    let scale = w.norm() + dw.norm() * h.norm();
    for n in 0..2000usize {
        let nf = n as f64;
        let c_next =
            (-(nf + 1.0) * (nf + b - z0) * c_cur + (nf + a) * c_prev) / (z0 * (nf + 2.0) * (nf + 1.0));
        let dterm = c_next * hpow * (nf + 2.0);
        hpow *= h;
        let vterm = c_next * hpow;
        val += vterm;
        der += dterm;
        if vterm.norm() <= 1e-18 * scale.max(val.norm()) && dterm.norm() * h.norm() <= 1e-18 * scale.max(val.norm()) {
            quiet += 1;
            if quiet >= 3 {
                return Ok((val, der));
            }
        } else {
            quiet = 0;
        }
        c_prev = c_cur;
        c_cur = c_next;
    }
    Err(Error::NonConvergence { terms: 2000 })
}

/// Regularized Kummer function `M(a,b,z)/Γ(b)`, finite for every `b`.
pub fn regularized_kummer<F>(a: C64, b: C64, z: C64, eval_m: F) -> Result<C64>
where
    F: Fn(C64, C64, C64) -> Result<C64>,
{
    if is_nonpositive_integer(b) {
        // M(a,-N,z)/Γ(-N) = (a)_(N+1) z^(N+1) / (N+1)! M(a+N+1, N+2, z)
        let nn = (-b.re).round() as usize;
        let mut coef = ONE;
        for j in 0..=nn {
            coef *= (a + j as f64) * z / (j + 1) as f64;
        }
        if coef == ZERO {
            return Ok(ZERO);
        }
        Ok(coef * eval_m(a + (nn + 1) as f64, C64::new((nn + 2) as f64, 0.0), z)?)
    } else {
        Ok(eval_m(a, b, z)? * recip_gamma(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn series_reproduces_exponential_when_a_equals_b() {
        let p = EvalPolicy::default();
        let s = kummer_series(c(1.5, 0.0), c(1.5, 0.0), c(0.7, 0.0), &p).unwrap();
        assert!((s.value.re - 0.7f64.exp()).abs() < 1e-15);
    }

    #[test]
    fn series_survives_cancellation_on_negative_axis() {
        // M(1,1,-15) = e^-15; the terms reach 15^15/15! ~ 3e5, twelve
        // orders above the sum.
        let p = EvalPolicy::default();
        let s = kummer_series(c(1.0, 0.0), c(1.0, 0.0), c(-15.0, 0.0), &p).unwrap();
        assert!((s.value.re / (-15f64).exp() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn polynomial_matches_closed_forms() {
        // U(-1,b,z) = z - b ; U(-2,b,z) = z^2 - 2(b+1)z + b(b+1)
        let z = c(0.3, -1.2);
        let b = c(0.5, 0.25);
        assert!((tricomi_polynomial(1, b, z) - (z - b)).norm() < 1e-15);
        let want = z * z - 2.0 * (b + 1.0) * z + b * (b + 1.0);
        assert!((tricomi_polynomial(2, b, z) - want).norm() < 1e-14);
        assert_eq!(tricomi_polynomial(0, b, z), ONE);
    }

    #[test]
    fn log_series_reduces_to_inverse_power() {
        // U(1,2,z) = 1/z: the logarithmic part carries 1/Γ(0) = 0.
        let p = EvalPolicy::default();
        let z = LogPoint::principal(c(2.0, 0.0)).unwrap();
        let s = tricomi_log_series(c(1.0, 0.0), 1, &z, &p).unwrap();
        assert!((s.value - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn ode_continuation_follows_exponential() {
        // M(1,1,z) = e^z solves Kummer's equation with a = b = 1.
        let (w, dw) = continue_kummer_ode(
            c(1.0, 0.0),
            c(1.0, 0.0),
            c(2.0, 0.0),
            c(2f64.exp(), 0.0),
            c(2f64.exp(), 0.0),
            c(9.0, 3.0),
        )
        .unwrap();
        let want = c(9.0, 3.0).exp();
        assert!((w / want - 1.0).norm() < 1e-13);
        assert!((dw / want - 1.0).norm() < 1e-13);
    }
}
