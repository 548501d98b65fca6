//! Identity battery for the kernel: random complex samples pushed through
//! the transformation and recurrence identities the factorization relies on.
//! Each identity yields one pass/fail summary line.

use super::{
    eval_f, eval_f_shifted, eval_m, series, tricomi, ChfKind, ChfParams, EvalPolicy,
    GreekCoefficients, LogPoint,
};
use crate::error::Result;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

type C64 = Complex64;

/// Outcome of one identity over all samples.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityResult {
    pub name: String,
    pub samples: usize,
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl IdentityResult {
    pub fn summary_line(&self) -> String {
        format!(
            "{} {:<28} samples={:<5} worst={:.3e} tol={:.0e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.samples,
            self.worst,
            self.tolerance
        )
    }
}

/// Tolerance on the scale-relative residual of every identity.
pub const IDENTITY_TOL: f64 = 1e-11;

/// A parameter sample with `|a|, |b|, |ζ| <= radius`.
#[derive(Debug, Clone, Copy)]
pub struct Sample {
    pub a: C64,
    pub b: C64,
    pub z: C64,
}

fn in_disk(rng: &mut ChaCha8Rng, radius: f64) -> C64 {
    loop {
        let w = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if w.norm() <= 1.0 {
            return w * radius;
        }
    }
}

fn near_nonpositive_integer(b: C64, margin: f64) -> bool {
    b.re < margin && (b - C64::new(b.re.round(), 0.0)).norm() < margin
}

/// Deterministic samples with `b`, `b+1` and `2-b`, `3-b` kept away from the
/// poles of the series, and `ζ` away from the origin.
pub fn samples(n: usize, seed: u64, radius: f64) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let a = in_disk(&mut rng, radius);
        let b = in_disk(&mut rng, radius);
        let z = in_disk(&mut rng, radius);
        let bad = [b, 2.0 - b, 1.0 + a - b]
            .iter()
            .any(|&v| near_nonpositive_integer(v, 0.05))
            || near_nonpositive_integer(a, 0.05)
            || z.norm() < 0.05;
        if !bad {
            out.push(Sample { a, b, z });
        }
    }
    out
}

fn rel(residual: C64, scale: f64) -> f64 {
    residual.norm() / scale.max(f64::MIN_POSITIVE)
}

/// `M(a,b,z) = e^z M(b-a,b,-z)`, both sides by the raw power series.
pub fn kummer_transformation(s: &Sample, policy: &EvalPolicy) -> Result<f64> {
    let lhs = series::kummer_series(s.a, s.b, s.z, policy)?.value;
    let rhs = s.z.exp() * series::kummer_series(s.b - s.a, s.b, -s.z, policy)?.value;
    Ok(rel(lhs - rhs, lhs.norm().max(rhs.norm())))
}

/// `(a-b) M(a,b+1) + b M(a,b) - a M(a+1,b+1) = 0`.
pub fn contiguous_relation(s: &Sample, policy: &EvalPolicy) -> Result<f64> {
    let t1 = (s.a - s.b) * eval_m(ChfParams::new(s.a, s.b + 1.0), s.z, policy)?;
    let t2 = s.b * eval_m(ChfParams::new(s.a, s.b), s.z, policy)?;
    let t3 = s.a * eval_m(ChfParams::new(s.a + 1.0, s.b + 1.0), s.z, policy)?;
    let scale = t1.norm().max(t2.norm()).max(t3.norm());
    Ok(rel(t1 + t2 - t3, scale))
}

/// Derivative of `F` by an identity independent of the β table:
/// `M' = (a/b) M(a+1,b+1)`, `U' = -a U(a+1,b+1)`.
pub fn independent_derivative(kind: ChfKind, p: ChfParams, z: &LogPoint, policy: &EvalPolicy) -> Result<C64> {
    match kind {
        ChfKind::M => Ok(p.a / p.b * eval_m(ChfParams::new(p.a + 1.0, p.b + 1.0), z.value(), policy)?),
        ChfKind::U => Ok(-p.a * tricomi::tricomi(p.a + 1.0, p.b + 1.0, z, policy)?),
        ChfKind::Mtilde => {
            let q = p.frobenius_partner();
            Ok(q.a / q.b * eval_m(ChfParams::new(q.a + 1.0, q.b + 1.0), z.value(), policy)?)
        }
    }
}

/// `F' = F - β F(a,b+1)` against the independent derivative.
pub fn derivative_identity(kind: ChfKind, s: &Sample, policy: &EvalPolicy) -> Result<f64> {
    let p = ChfParams::new(s.a, s.b);
    let z = LogPoint::principal(s.z)?;
    let g = GreekCoefficients::for_kind(kind, p)?;
    let f = eval_f(kind, p, &z, policy)?;
    let f1 = g.beta * eval_f_shifted(kind, p, &z, policy)?;
    let d = independent_derivative(kind, p, &z, policy)?;
    let scale = f.norm().max(f1.norm()).max(d.norm());
    Ok(rel(d - (f - f1), scale))
}

/// `ζ F'(a,b+1) + γ F(a,b+1) - δ F(a,b) = 0`.
pub fn shifted_recurrence(kind: ChfKind, s: &Sample, policy: &EvalPolicy) -> Result<f64> {
    let p = ChfParams::new(s.a, s.b);
    let z = LogPoint::principal(s.z)?;
    let g = GreekCoefficients::for_kind(kind, p)?;
    // F(a,b+1) as a function in its own right, and its derivative.
    let (f1, df1) = match kind {
        ChfKind::Mtilde => {
            let q = p.frobenius_partner();
            let q1 = ChfParams::new(q.a, q.b + 1.0);
            (
                eval_m(q1, s.z, policy)?,
                independent_derivative(ChfKind::M, q1, &z, policy)?,
            )
        }
        _ => {
            let p1 = ChfParams::new(p.a, p.b + 1.0);
            (eval_f(kind, p1, &z, policy)?, independent_derivative(kind, p1, &z, policy)?)
        }
    };
    let f = eval_f(kind, p, &z, policy)?;
    let (t1, t2, t3) = (s.z * df1, g.gamma_c * f1, g.delta_c * f);
    let scale = t1.norm().max(t2.norm()).max(t3.norm());
    Ok(rel(t1 + t2 - t3, scale))
}

/// `U(a,b,ζ) = ζ^(1-b) U(1+a-b, 2-b, ζ)`.
pub fn tricomi_reflection(s: &Sample, policy: &EvalPolicy) -> Result<f64> {
    let z = LogPoint::principal(s.z)?;
    let lhs = tricomi::tricomi(s.a, s.b, &z, policy)?;
    let rhs = z.pow(1.0 - s.b) * tricomi::tricomi(1.0 + s.a - s.b, 2.0 - s.b, &z, policy)?;
    Ok(rel(lhs - rhs, lhs.norm().max(rhs.norm())))
}

fn run<F>(name: &str, set: &[Sample], tol: f64, f: F) -> IdentityResult
where
    F: Fn(&Sample) -> Result<f64>,
{
    let mut worst = 0.0f64;
    let mut failed = false;
    for s in set {
        match f(s) {
            Ok(r) if r.is_finite() => worst = worst.max(r),
            _ => failed = true,
        }
    }
    if failed {
        worst = f64::INFINITY;
    }
    IdentityResult {
        name: name.to_string(),
        samples: set.len(),
        worst,
        tolerance: tol,
        passed: !failed && worst <= tol,
    }
}

/// Runs every identity on `n` samples with `|a|,|b|,|ζ| <= 10`.
pub fn run_identity_battery(n: usize, seed: u64) -> Vec<IdentityResult> {
    let policy = EvalPolicy::default();
    let set = samples(n, seed, 10.0);
    let p = &policy;
    let mut out = vec![
        run("kummer_transformation", &set, IDENTITY_TOL, |s| kummer_transformation(s, p)),
        run("contiguous_relation", &set, IDENTITY_TOL, |s| contiguous_relation(s, p)),
    ];
    for kind in [ChfKind::M, ChfKind::U, ChfKind::Mtilde] {
        out.push(run(
            &format!("derivative_identity[{kind}]"),
            &set,
            IDENTITY_TOL,
            |s| derivative_identity(kind, s, p),
        ));
        out.push(run(
            &format!("shifted_recurrence[{kind}]"),
            &set,
            IDENTITY_TOL,
            |s| shifted_recurrence(kind, s, p),
        ));
    }
    out.push(run("tricomi_reflection", &set, 1e-10, |s| tricomi_reflection(s, p)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chf::gamma::is_nonpositive_integer;

    #[test]
    fn samples_are_deterministic_and_in_range() {
        let s1 = samples(50, 7, 10.0);
        let s2 = samples(50, 7, 10.0);
        for (x, y) in s1.iter().zip(&s2) {
            assert_eq!(x.a, y.a);
            assert!(x.a.norm() <= 10.0 && x.b.norm() <= 10.0 && x.z.norm() <= 10.0);
            assert!(!is_nonpositive_integer(x.b));
        }
    }

    #[test]
    fn small_battery_passes() {
        for r in run_identity_battery(40, 11) {
            assert!(r.passed, "{}", r.summary_line());
        }
    }
}
