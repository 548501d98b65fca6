//! The factorization ansatz: the map `ζ(z)`, the constraint it must satisfy
//! for a given potential, the prefactors `h`, `f` and `g`, and the tables of
//! parameter choices that solve the constraint for each catalogued system.

use crate::chf::{ChfKind, ChfParams, GreekCoefficients, LogPoint};
use crate::error::{Error, Result};
use crate::systems::{SystemName, SystemSpec};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

type C64 = Complex64;

/// Relative tolerance of the ζ constraint checked when a candidate is built.
pub const ZETA_RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZetaFamily {
    /// `ζ = c z`.
    Linear,
    /// `ζ = c z^d`.
    Power,
    /// `ζ = c e^(-z)`.
    Exponential,
}

/// The map `ζ(z)` with its family, coefficient and (for powers) exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaMap {
    pub family: ZetaFamily,
    pub c: C64,
    pub d: f64,
}

/// `ζ` and its first three derivatives at one point, with `ln ζ` lifted
/// continuously along the real `z` axis (passing above `z = 0`) and a fixed
/// branch of `ln ζ'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaPoint {
    pub zeta: LogPoint,
    pub d1: C64,
    pub d2: C64,
    pub d3: C64,
    pub ln_d1: C64,
}

impl ZetaMap {
    pub fn linear(c: C64) -> Result<Self> {
        Self::checked(ZetaFamily::Linear, c, 1.0)
    }

    pub fn power(c: C64, d: f64) -> Result<Self> {
        Self::checked(ZetaFamily::Power, c, d)
    }

    pub fn exponential(c: C64) -> Result<Self> {
        Self::checked(ZetaFamily::Exponential, c, 1.0)
    }

    fn checked(family: ZetaFamily, c: C64, d: f64) -> Result<Self> {
        if c.norm() == 0.0 || !c.is_finite() {
            return Err(Error::InvalidConfig(format!("zeta coefficient c = {c} must be non-zero")));
        }
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::InvalidConfig(format!("zeta exponent d = {d} must be positive")));
        }
        Ok(ZetaMap { family, c, d })
    }

    /// `ln z` for the algebraic families; the negative real axis is reached
    /// from above.
    fn ln_z(z: C64) -> Result<C64> {
        if z.norm() == 0.0 {
            return Err(Error::Domain("zeta map evaluated at z = 0".into()));
        }
        Ok(z.ln())
    }

    pub fn at(&self, z: C64) -> Result<ZetaPoint> {
        let ln_c = self.c.ln();
        match self.family {
            ZetaFamily::Linear => {
                let lz = Self::ln_z(z)?;
                let zeta = LogPoint::from_log(ln_c + lz);
                Ok(ZetaPoint {
                    zeta,
                    d1: self.c,
                    d2: C64::new(0.0, 0.0),
                    d3: C64::new(0.0, 0.0),
                    ln_d1: ln_c,
                })
            }
            ZetaFamily::Power => {
                let d = self.d;
                let lz = Self::ln_z(z)?;
                let zp = |p: f64| (p * lz).exp();
                let zeta = LogPoint::from_log(ln_c + d * lz);
                Ok(ZetaPoint {
                    zeta,
                    d1: self.c * d * zp(d - 1.0),
                    d2: self.c * d * (d - 1.0) * zp(d - 2.0),
                    d3: self.c * d * (d - 1.0) * (d - 2.0) * zp(d - 3.0),
                    ln_d1: (self.c * d).ln() + (d - 1.0) * lz,
                })
            }
            ZetaFamily::Exponential => {
                let value = self.c * (-z).exp();
                let zeta = LogPoint::from_log(ln_c - z);
                Ok(ZetaPoint {
                    zeta,
                    d1: -value,
                    d2: value,
                    d3: -value,
                    ln_d1: (-self.c).ln() - z,
                })
            }
        }
    }

    /// `ζ(z)` on its lifted sheet.
    pub fn zeta(&self, z: C64) -> Result<LogPoint> {
        Ok(self.at(z)?.zeta)
    }
}

impl fmt::Display for ZetaMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            ZetaFamily::Linear => write!(f, "zeta = ({}) z", self.c),
            ZetaFamily::Power => write!(f, "zeta = ({}) z^{}", self.c, self.d),
            ZetaFamily::Exponential => write!(f, "zeta = ({}) e^-z", self.c),
        }
    }
}

/// The affine frame `z = κ q + α` with `κ = k₀` when the system has an
/// intrinsic scale and `κ = k` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameOffset {
    pub alpha: f64,
    pub k: f64,
    pub k0: Option<f64>,
}

impl FrameOffset {
    pub fn new(alpha: f64, k: f64, k0: Option<f64>) -> Self {
        FrameOffset { alpha, k, k0 }
    }

    pub fn scale(&self) -> f64 {
        self.k0.unwrap_or(self.k)
    }

    pub fn z_of(&self, q: f64) -> f64 {
        self.scale() * q + self.alpha
    }

    pub fn q_of(&self, z: f64) -> f64 {
        (z - self.alpha) / self.scale()
    }
}

/// The terms of the left side of the ζ constraint,
/// `ζ'²[1 + 2(2a-b)/ζ + b(b-2)/ζ²] + 3(ζ''/ζ')² - 2ζ'''/ζ'`.
fn zeta_lhs_terms(zp: &ZetaPoint, p: ChfParams) -> Result<[C64; 5]> {
    let zeta = zp.zeta.value();
    if zeta.norm() == 0.0 || zp.d1.norm() == 0.0 {
        return Err(Error::Domain("zeta constraint needs zeta != 0 and zeta' != 0".into()));
    }
    let d1sq = zp.d1 * zp.d1;
    let r2 = zp.d2 / zp.d1;
    Ok([
        d1sq,
        d1sq * 2.0 * (2.0 * p.a - p.b) / zeta,
        d1sq * p.b * (p.b - 2.0) / (zeta * zeta),
        3.0 * r2 * r2,
        -2.0 * zp.d3 / zp.d1,
    ])
}

/// Left side minus right side of the ζ constraint at `z`.
pub fn zeta_residual(zm: &ZetaMap, p: ChfParams, z: C64, rhs: C64) -> Result<C64> {
    let terms = zeta_lhs_terms(&zm.at(z)?, p)?;
    Ok(terms.iter().sum::<C64>() - rhs)
}

/// The residual relative to the largest term on either side.
pub fn zeta_residual_relative(zm: &ZetaMap, p: ChfParams, z: C64, rhs: C64) -> Result<f64> {
    let terms = zeta_lhs_terms(&zm.at(z)?, p)?;
    let scale = terms.iter().map(|t| t.norm()).fold(rhs.norm(), f64::max);
    let r = terms.iter().sum::<C64>() - rhs;
    Ok(r.norm() / scale.max(f64::MIN_POSITIVE))
}

/// `ln h = -ζ/2 + (b/2) ln ζ - (1/2) ln ζ'`.
pub fn log_h(zm: &ZetaMap, b: C64, z: C64) -> Result<C64> {
    let zp = zm.at(z)?;
    Ok(-zp.zeta.value() / 2.0 + b / 2.0 * zp.zeta.ln() - zp.ln_d1 / 2.0)
}

/// `h(z) = e^(-ζ/2) ζ^(b/2) (ζ')^(-1/2)`, assembled in logarithms.
pub fn compute_h(zm: &ZetaMap, b: C64, z: C64) -> Result<C64> {
    Ok(log_h(zm, b, z)?.exp())
}

/// `d/dz ln h = -ζ'/2 + (b/2) ζ'/ζ - (1/2) ζ''/ζ'`.
pub fn log_h_derivative(zp: &ZetaPoint, b: C64) -> C64 {
    -zp.d1 / 2.0 + b / 2.0 * zp.d1 / zp.zeta.value() - zp.d2 / (2.0 * zp.d1)
}

/// `f(z) = e^(-ζ/2) ζ^(γ/2) (ζ')^(-1/2)`.
pub fn compute_f(zm: &ZetaMap, gamma_c: C64, z: C64) -> Result<C64> {
    log_h(zm, gamma_c, z).map(|l| l.exp())
}

/// `g(z) = -d/dz ln[e^ζ f(z)] = -(1/2)(1 + γ/ζ) ζ' + (1/2) ζ''/ζ'`.
pub fn compute_g(zm: &ZetaMap, gamma_c: C64, z: C64) -> Result<C64> {
    let zp = zm.at(z)?;
    let zeta = zp.zeta.value();
    if zeta.norm() == 0.0 {
        return Err(Error::Domain("g is singular at zeta = 0".into()));
    }
    Ok(-0.5 * (1.0 + gamma_c / zeta) * zp.d1 + 0.5 * zp.d2 / zp.d1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// One row of a system's table: a parameter pair, a ζ map and a solution
/// kind, checked against the ζ constraint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub system: SystemSpec,
    pub k: f64,
    pub case_id: usize,
    pub params: ChfParams,
    pub zeta: ZetaMap,
    pub frame: FrameOffset,
    pub kind: ChfKind,
    pub greek: GreekCoefficients,
    pub sign_b: Sign,
    pub sign_c: Sign,
}

/// Points of the frame coordinate at which the ζ constraint is checked.
pub fn residual_sample_points(system: &SystemSpec) -> [f64; 5] {
    if system.is_radial() {
        [0.37, 0.91, 1.73, 2.96, 4.41]
    } else {
        [-2.21, -0.63, 0.48, 1.37, 3.09]
    }
}

impl Candidate {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        system: SystemSpec,
        k: f64,
        case_id: usize,
        params: ChfParams,
        zeta: ZetaMap,
        kind: ChfKind,
        sign_b: Sign,
        sign_c: Sign,
    ) -> Result<Self> {
        system.validate()?;
        system.check_k(k)?;
        if !params.admits(kind) {
            return Err(Error::InvalidB { b: params.b.to_string() });
        }
        let greek = GreekCoefficients::for_kind(kind, params)?;
        let cand = Candidate {
            system,
            k,
            case_id,
            params,
            zeta,
            frame: system.frame(k),
            kind,
            greek,
            sign_b,
            sign_c,
        };
        let worst = cand.worst_zeta_residual()?;
        if worst > ZETA_RESIDUAL_TOL {
            return Err(Error::InvalidConfig(format!(
                "{} case {case_id}: zeta constraint residual {worst:e} exceeds {ZETA_RESIDUAL_TOL:e}",
                system.name
            )));
        }
        Ok(cand)
    }

    pub fn a(&self) -> C64 {
        self.params.a
    }

    pub fn b(&self) -> C64 {
        self.params.b
    }

    pub fn alpha(&self) -> f64 {
        self.frame.alpha
    }

    /// The same candidate with the frame shifted, `z = kx + α`. Only the
    /// free particle on the line leaves the constraint unchanged under a shift.
    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        if self.system.name != SystemName::Free1D {
            return Err(Error::InvalidConfig(format!(
                "{}: the frame offset is fixed by the potential",
                self.system.name
            )));
        }
        self.frame.alpha = alpha;
        Ok(self)
    }

    /// Largest relative ζ-constraint residual over the sample points.
    pub fn worst_zeta_residual(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for z in residual_sample_points(&self.system) {
            let rhs = self.system.zeta_rhs(self.k, z)?;
            worst = worst.max(zeta_residual_relative(&self.zeta, self.params, C64::new(z, 0.0), rhs)?);
        }
        Ok(worst)
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} case {}: {}(a={}, b={}), {}",
            self.system.name,
            self.case_id,
            self.kind,
            self.params.a,
            self.params.b,
            self.zeta
        )
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Every table row for the system at wavenumber `k`, in reference order,
/// each verified against the ζ constraint.
pub fn solve_parameters(system: &SystemSpec, k: f64) -> Result<Vec<Candidate>> {
    use ChfKind::{Mtilde, M, U};
    use Sign::{Minus, Plus};
    system.validate()?;
    system.check_k(k)?;
    if system.is_zero_energy_special(k) {
        return solve_morse(system, k);
    }
    let mk = |case_id, a: C64, b: C64, zm: ZetaMap, kind, sb, sc| {
        Candidate::new(*system, k, case_id, ChfParams::new(a, b), zm, kind, sb, sc)
    };
    let plus_i = ZetaMap::linear(c(0.0, 2.0))?;
    let minus_i = ZetaMap::linear(c(0.0, -2.0))?;
    match system.name {
        SystemName::Free1D => {
            let (a0, b0, a1, b1) = (c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0));
            Ok(vec![
                mk(1, a0, b0, plus_i, Mtilde, Minus, Plus)?,
                mk(2, a0, b0, plus_i, U, Minus, Plus)?,
                mk(3, a1, b1, plus_i, M, Plus, Plus)?,
                mk(4, a1, b1, plus_i, U, Plus, Plus)?,
            ])
        }
        SystemName::Free2D => {
            let m = system.m().unsigned_abs() as f64;
            let (am, bm) = (c(0.5 - m, 0.0), c(1.0 - 2.0 * m, 0.0));
            let (ap, bp) = (c(0.5 + m, 0.0), c(1.0 + 2.0 * m, 0.0));
            Ok(vec![
                mk(1, am, bm, plus_i, Mtilde, Minus, Plus)?,
                mk(2, am, bm, plus_i, U, Minus, Plus)?,
                mk(3, ap, bp, plus_i, M, Plus, Plus)?,
                mk(4, ap, bp, plus_i, U, Plus, Plus)?,
            ])
        }
        SystemName::Free3D => {
            let l = system.l() as f64;
            let (am, bm) = (c(-l, 0.0), c(-2.0 * l, 0.0));
            let (ap, bp) = (c(l + 1.0, 0.0), c(2.0 * l + 2.0, 0.0));
            Ok(vec![
                mk(1, am, bm, plus_i, Mtilde, Minus, Plus)?,
                mk(2, am, bm, plus_i, U, Minus, Plus)?,
                mk(3, ap, bp, plus_i, M, Plus, Plus)?,
                mk(4, ap, bp, plus_i, U, Plus, Plus)?,
            ])
        }
        SystemName::Linear1D => {
            let zp = ZetaMap::power(c(4.0 / 3.0, 0.0), 1.5)?;
            let zn = ZetaMap::power(c(-4.0 / 3.0, 0.0), 1.5)?;
            let mut out = Vec::with_capacity(8);
            for (offset, a, b, sb) in [(0, 1.0 / 6.0, 1.0 / 3.0, Minus), (4, 5.0 / 6.0, 5.0 / 3.0, Plus)] {
                let (a, b) = (c(a, 0.0), c(b, 0.0));
                out.push(mk(offset + 1, a, b, zp, M, sb, Plus)?);
                out.push(mk(offset + 2, a, b, zn, M, sb, Minus)?);
                out.push(mk(offset + 3, a, b, zp, U, sb, Plus)?);
                out.push(mk(offset + 4, a, b, zn, U, sb, Minus)?);
            }
            Ok(out)
        }
        SystemName::HydrogenContinuum => {
            let l = system.l() as f64;
            let eta = system
                .coulomb_eta(k)
                .ok_or_else(|| Error::InvalidConfig("hydrogen parameters missing".into()))?;
            let (bp, bm) = (c(2.0 * l + 2.0, 0.0), c(-2.0 * l, 0.0));
            Ok(vec![
                mk(1, c(l + 1.0, eta), bp, plus_i, M, Plus, Plus)?,
                mk(2, c(l + 1.0, eta), bp, plus_i, U, Plus, Plus)?,
                mk(3, c(l + 1.0, -eta), bp, minus_i, M, Plus, Minus)?,
                mk(4, c(l + 1.0, -eta), bp, minus_i, U, Plus, Minus)?,
                mk(5, c(-l, eta), bm, plus_i, Mtilde, Minus, Plus)?,
                mk(6, c(-l, eta), bm, plus_i, U, Minus, Plus)?,
                mk(7, c(-l, -eta), bm, minus_i, Mtilde, Minus, Minus)?,
                mk(8, c(-l, -eta), bm, minus_i, U, Minus, Minus)?,
            ])
        }
        SystemName::Morse1D => solve_morse(system, k),
    }
}

/// Morse rows: `c = ±2ξ`, `b = 1 ± 2iη` and `a = b/2 - c/2`.
fn solve_morse(system: &SystemSpec, k: f64) -> Result<Vec<Candidate>> {
    use ChfKind::{M, U};
    let xi = system
        .xi()
        .ok_or_else(|| Error::InvalidConfig("Morse parameters missing".into()))?;
    let eta = system.eta(k).unwrap_or(0.0);
    let mut out = Vec::with_capacity(8);
    for (offset, sb) in [(0, Sign::Plus), (4, Sign::Minus)] {
        let b = c(1.0, 2.0 * sb.value() * eta);
        for (i, sc, kind) in [
            (1, Sign::Plus, M),
            (2, Sign::Plus, U),
            (3, Sign::Minus, M),
            (4, Sign::Minus, U),
        ] {
            let zm = ZetaMap::exponential(c(2.0 * sc.value() * xi, 0.0))?;
            let a = c(0.5 - sc.value() * xi, sb.value() * eta);
            out.push(Candidate::new(*system, k, offset + i, ChfParams::new(a, b), zm, kind, sb, sc)?);
        }
    }
    Ok(out)
}
