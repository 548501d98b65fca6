//! Confluent hypergeometric kernel: Kummer's `M`, Tricomi's `U`, the second
//! Frobenius solution `M̃(a,b,ζ) = ζ^(1-b) M(1+a-b, 2-b, ζ)`, their
//! derivatives and the recurrences used by the factorization.
//!
//! Non-integer powers and logarithms live on the principal branch with the
//! cut along `(-∞, 0]`. Callers that need to follow a path across the cut
//! (a negative coordinate in `ζ = c z^d`, say) pass a [`LogPoint`], which
//! carries an unwrapped logarithm and therefore a definite sheet.

pub mod dd;
pub mod gamma;
pub mod selftest;
pub mod series;
pub mod tricomi;

use crate::error::{Error, Result};
use gamma::is_nonpositive_integer;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub use gamma::{digamma, log_gamma};

type C64 = Complex64;

/// Relative truncation error an asymptotic expansion must reach before it is
/// trusted over the convergent representations.
pub(crate) const ASYMPTOTIC_TOL: f64 = 1e-14;

/// Which solution of Kummer's equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChfKind {
    M,
    U,
    Mtilde,
}

impl ChfKind {
    pub fn symbol(self) -> &'static str {
        match self {
            ChfKind::M => "M",
            ChfKind::U => "U",
            ChfKind::Mtilde => "M~",
        }
    }
}

impl std::fmt::Display for ChfKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.symbol())
    }
}

/// The parameter pair `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChfParams {
    pub a: C64,
    pub b: C64,
}

impl ChfParams {
    pub fn new(a: C64, b: C64) -> Self {
        ChfParams { a, b }
    }

    pub fn real(a: f64, b: f64) -> Self {
        ChfParams::new(C64::new(a, 0.0), C64::new(b, 0.0))
    }

    /// Parameters of the reduced function `M(1+a-b, 2-b, ·)` behind `M̃`.
    pub fn frobenius_partner(self) -> Self {
        ChfParams::new(1.0 + self.a - self.b, 2.0 - self.b)
    }

    /// Whether `kind` is defined for these parameters.
    pub fn admits(self, kind: ChfKind) -> bool {
        match kind {
            ChfKind::M => !is_nonpositive_integer(self.b),
            ChfKind::Mtilde => !is_nonpositive_integer(2.0 - self.b),
            ChfKind::U => true,
        }
    }
}

/// Numerical knobs shared by every evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalPolicy {
    /// Relative stopping tolerance for convergent series.
    pub series_tol: f64,
    /// Hard cap on the number of series terms.
    pub max_terms: usize,
    /// `|ζ|` above which asymptotic expansions are tried first.
    pub asymptotic_crossover: f64,
}

impl Default for EvalPolicy {
    fn default() -> Self {
        EvalPolicy {
            series_tol: 1e-15,
            max_terms: 10_000,
            asymptotic_crossover: 30.0,
        }
    }
}

impl EvalPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.series_tol > 0.0) || self.max_terms < 1 || !(self.asymptotic_crossover > 0.0) {
            return Err(Error::InvalidConfig(format!("{self:?}")));
        }
        Ok(())
    }
}

/// A point of the logarithmic Riemann surface: the value `ζ` together with a
/// definite `ln ζ` (imaginary part not reduced to `(-π, π]`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogPoint {
    value: C64,
    log: C64,
}

impl LogPoint {
    /// Principal-branch point; rejects the cut `(-∞, 0]`.
    pub fn principal(z: C64) -> Result<Self> {
        if z.im == 0.0 && z.re <= 0.0 {
            return Err(Error::BranchCutAmbiguity { zeta: z.to_string() });
        }
        Ok(LogPoint { value: z, log: z.ln() })
    }

    /// Point with modulus `r > 0` and (unwrapped) argument `arg`.
    pub fn polar(r: f64, arg: f64) -> Self {
        LogPoint {
            value: C64::from_polar(r, arg),
            log: C64::new(r.ln(), arg),
        }
    }

    /// Point given by its logarithm.
    pub fn from_log(log: C64) -> Self {
        LogPoint {
            value: log.exp(),
            log,
        }
    }

    /// The origin, the common branch point of every power.
    pub fn origin() -> Self {
        LogPoint {
            value: C64::new(0.0, 0.0),
            log: C64::new(f64::NEG_INFINITY, 0.0),
        }
    }

    pub fn value(&self) -> C64 {
        self.value
    }

    pub fn ln(&self) -> C64 {
        self.log
    }

    pub fn arg(&self) -> f64 {
        self.log.im
    }

    pub fn norm(&self) -> f64 {
        self.value.norm()
    }

    pub fn is_origin(&self) -> bool {
        self.value == C64::new(0.0, 0.0)
    }

    /// Sheet index `m` such that `arg - 2πm ∈ (-π, π]`.
    pub fn sheet(&self) -> i64 {
        let m = ((self.arg() + PI) / (2.0 * PI)).ceil() - 1.0;
        m as i64
    }

    /// Same point moved to the principal sheet.
    pub fn to_principal(&self) -> Self {
        let m = self.sheet();
        if m == 0 {
            return *self;
        }
        LogPoint {
            value: self.value,
            log: self.log - C64::new(0.0, 2.0 * PI * m as f64),
        }
    }

    /// `ζ^p` on this sheet.
    pub fn pow(&self, p: C64) -> C64 {
        if self.is_origin() {
            return if p == C64::new(0.0, 0.0) {
                C64::new(1.0, 0.0)
            } else if p.re > 0.0 {
                C64::new(0.0, 0.0)
            } else {
                C64::new(f64::INFINITY, 0.0)
            };
        }
        (p * self.log).exp()
    }

    /// `s·ζ` for real `s > 0`, keeping the sheet.
    pub fn scale(&self, s: f64) -> Self {
        LogPoint {
            value: self.value * s,
            log: self.log + s.ln(),
        }
    }
}

/// β, γ and δ: the coefficients in `F' = F - β F(a,b+1)` and
/// `ζ F'(a,b+1) = -γ F(a,b+1) + δ F(a,b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreekCoefficients {
    pub beta: C64,
    pub gamma_c: C64,
    pub delta_c: C64,
}

impl GreekCoefficients {
    pub fn for_kind(kind: ChfKind, p: ChfParams) -> Result<Self> {
        let (a, b) = (p.a, p.b);
        let zero = C64::new(0.0, 0.0);
        Ok(match kind {
            ChfKind::M => {
                if b == zero {
                    return Err(Error::BetaUndefined { b: b.to_string() });
                }
                GreekCoefficients {
                    beta: (b - a) / b,
                    gamma_c: b,
                    delta_c: b,
                }
            }
            ChfKind::U => GreekCoefficients {
                beta: C64::new(1.0, 0.0),
                gamma_c: b,
                delta_c: b - a,
            },
            ChfKind::Mtilde => {
                if 2.0 - b == zero {
                    return Err(Error::BetaUndefined { b: b.to_string() });
                }
                GreekCoefficients {
                    beta: (1.0 - a) / (2.0 - b),
                    gamma_c: 2.0 - b,
                    delta_c: 2.0 - b,
                }
            }
        })
    }
}

/// Kummer's function at a complex point (entire in ζ).
pub fn eval_m(p: ChfParams, zeta: C64, policy: &EvalPolicy) -> Result<C64> {
    kummer(p.a, p.b, zeta, policy)
}

pub(crate) fn kummer(a: C64, b: C64, z: C64, policy: &EvalPolicy) -> Result<C64> {
    if is_nonpositive_integer(b) {
        return Err(Error::InvalidB { b: b.to_string() });
    }
    if z == C64::new(0.0, 0.0) {
        return Ok(C64::new(1.0, 0.0));
    }
    if z.norm() > policy.asymptotic_crossover {
        if let Ok(asym) = series::kummer_asymptotic(a, b, z, policy) {
            if asym.is_accurate(ASYMPTOTIC_TOL) {
                return Ok(asym.value);
            }
        }
    }
    if z.re < 0.0 {
        // e^z M(b-a, b, -z) has no cancellation in its terms here.
        let s = series::kummer_series(b - a, b, -z, policy)?;
        Ok(z.exp() * s.value)
    } else {
        Ok(series::kummer_series(a, b, z, policy)?.value)
    }
}

/// Tricomi's function on the principal branch.
pub fn eval_u(p: ChfParams, zeta: C64, policy: &EvalPolicy) -> Result<C64> {
    tricomi::tricomi(p.a, p.b, &LogPoint::principal(zeta)?, policy)
}

/// Tricomi's function on an explicit sheet.
pub fn eval_u_at(p: ChfParams, zeta: &LogPoint, policy: &EvalPolicy) -> Result<C64> {
    tricomi::tricomi(p.a, p.b, zeta, policy)
}

/// `M̃(a,b,ζ) = ζ^(1-b) M(1+a-b, 2-b, ζ)` on the principal branch. An
/// integer power needs no branch, so the cut is only rejected otherwise.
pub fn eval_mtilde(p: ChfParams, zeta: C64, policy: &EvalPolicy) -> Result<C64> {
    let lp = if gamma::is_integer(1.0 - p.b) && zeta.im == 0.0 && zeta.re < 0.0 {
        LogPoint::polar(zeta.norm(), PI)
    } else if zeta == C64::new(0.0, 0.0) {
        LogPoint::origin()
    } else {
        LogPoint::principal(zeta)?
    };
    eval_mtilde_at(p, &lp, policy)
}

pub fn eval_mtilde_at(p: ChfParams, zeta: &LogPoint, policy: &EvalPolicy) -> Result<C64> {
    if is_nonpositive_integer(2.0 - p.b) {
        return Err(Error::InvalidB { b: p.b.to_string() });
    }
    let q = p.frobenius_partner();
    let m = kummer(q.a, q.b, zeta.value(), policy)?;
    Ok(zeta.pow(1.0 - p.b) * m)
}

/// The function `𝔉` itself: `M`, `U` or `M̃`.
pub fn eval_frak(kind: ChfKind, p: ChfParams, zeta: &LogPoint, policy: &EvalPolicy) -> Result<C64> {
    match kind {
        ChfKind::M => kummer(p.a, p.b, zeta.value(), policy),
        ChfKind::U => tricomi::tricomi(p.a, p.b, zeta, policy),
        ChfKind::Mtilde => eval_mtilde_at(p, zeta, policy),
    }
}

/// The function `F` of the derivative identities: `M`, `U`, or for the
/// third kind the power-free `ζ^(b-1) M̃ = M(1+a-b, 2-b, ζ)`.
pub fn eval_f(kind: ChfKind, p: ChfParams, zeta: &LogPoint, policy: &EvalPolicy) -> Result<C64> {
    match kind {
        ChfKind::M => kummer(p.a, p.b, zeta.value(), policy),
        ChfKind::U => tricomi::tricomi(p.a, p.b, zeta, policy),
        ChfKind::Mtilde => {
            let q = p.frobenius_partner();
            kummer(q.a, q.b, zeta.value(), policy)
        }
    }
}

/// The companion `F(a, b+1, ζ)` appearing in the derivative identity. For the
/// third kind this is `M(1+a-b, 3-b, ζ)`, the `b → b+1` partner of the
/// reduced Kummer function.
pub fn eval_f_shifted(kind: ChfKind, p: ChfParams, zeta: &LogPoint, policy: &EvalPolicy) -> Result<C64> {
    match kind {
        ChfKind::M => kummer(p.a, p.b + 1.0, zeta.value(), policy),
        ChfKind::U => tricomi::tricomi(p.a, p.b + 1.0, zeta, policy),
        ChfKind::Mtilde => {
            let q = p.frobenius_partner();
            kummer(q.a, q.b + 1.0, zeta.value(), policy)
        }
    }
}

/// `dF/dζ` through `F' = F(a,b) - β F(a,b+1)`, on the principal branch.
pub fn eval_df(kind: ChfKind, p: ChfParams, zeta: C64) -> Result<C64> {
    let policy = EvalPolicy::default();
    let lp = if zeta == C64::new(0.0, 0.0) {
        LogPoint::origin()
    } else if kind == ChfKind::U {
        LogPoint::principal(zeta)?
    } else {
        // M and the reduced third kind are entire.
        LogPoint::polar(zeta.norm(), zeta.arg())
    };
    eval_df_at(kind, p, &lp, &policy)
}

pub fn eval_df_at(kind: ChfKind, p: ChfParams, zeta: &LogPoint, policy: &EvalPolicy) -> Result<C64> {
    let greek = GreekCoefficients::for_kind(kind, p)?;
    let f = eval_f(kind, p, zeta, policy)?;
    let f1 = eval_f_shifted(kind, p, zeta, policy)?;
    Ok(f - greek.beta * f1)
}

/// Logarithmic derivative `𝔉'/𝔉` together with `𝔉` itself.
pub fn frak_log_derivative(
    kind: ChfKind,
    p: ChfParams,
    zeta: &LogPoint,
    policy: &EvalPolicy,
) -> Result<(C64, C64)> {
    let f = eval_f(kind, p, zeta, policy)?;
    let df = eval_df_at(kind, p, zeta, policy)?;
    Ok(match kind {
        ChfKind::Mtilde => {
            let pw = zeta.pow(1.0 - p.b);
            (pw * f, (1.0 - p.b) / zeta.value() + df / f)
        }
        _ => (f, df / f),
    })
}
