//! The six physical systems: potentials, coordinate types, effective
//! potentials, the energy relation, the dimensionless frame `z = κq + α`, and
//! the reference verdict tables as golden data.

use crate::ansatz::FrameOffset;
use crate::chf::ChfKind;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

type C64 = Complex64;

/// Largest `|m|` and `l` admitted by the catalog.
pub const MAX_QUANTUM_NUMBER: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SystemName {
    Free1D,
    Free2D,
    Free3D,
    Linear1D,
    HydrogenContinuum,
    Morse1D,
}

impl SystemName {
    pub const ALL: [SystemName; 6] = [
        SystemName::Free1D,
        SystemName::Free2D,
        SystemName::Free3D,
        SystemName::Linear1D,
        SystemName::HydrogenContinuum,
        SystemName::Morse1D,
    ];

    /// Name used on the command line.
    pub fn cli_name(self) -> &'static str {
        match self {
            SystemName::Free1D => "free1d",
            SystemName::Free2D => "free2d",
            SystemName::Free3D => "free3d",
            SystemName::Linear1D => "linear",
            SystemName::HydrogenContinuum => "hydrogen",
            SystemName::Morse1D => "morse",
        }
    }

    /// Number of rows in the reference table.
    pub fn table_size(self) -> usize {
        match self {
            SystemName::Free1D | SystemName::Free2D | SystemName::Free3D => 4,
            _ => 8,
        }
    }
}

impl fmt::Display for SystemName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

impl FromStr for SystemName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SystemName::ALL
            .into_iter()
            .find(|n| n.cli_name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::UnsupportedSystem(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coordinate {
    Cartesian,
    PlanePolar,
    Spherical,
}

/// Potential parameters; exactly those of the system are present.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PotentialParams {
    None,
    /// `V = C x`, `C > 0`.
    Linear { c: f64 },
    /// `V = -Z ħ²/(M ã₀ r)`.
    Hydrogen { z: f64, a0: f64 },
    /// `V = D (e^(-2 k₀ x) - 2 e^(-k₀ x))`.
    Morse { d: f64, k0: f64 },
}

/// Rejection modes and acceptance, as labelled in the reference tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Accepted,
    RejectedImaginaryW,
    RejectedDivergesAtOrigin,
    RejectedDivergesAtInfinity,
}

impl Status {
    pub fn is_accepted(self) -> bool {
        self == Status::Accepted
    }

    /// The reason in the wording of the reference tables' comment column.
    pub fn reason(self) -> &'static str {
        match self {
            Status::Accepted => "Usual Solution",
            Status::RejectedImaginaryW => "Imaginary Superpotential",
            Status::RejectedDivergesAtOrigin => "Diverges at Origin",
            Status::RejectedDivergesAtInfinity => "Diverges at Infinity",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Accepted => "Accepted",
            Status::RejectedImaginaryW => "RejectedImaginaryW",
            Status::RejectedDivergesAtOrigin => "RejectedDivergesAtOrigin",
            Status::RejectedDivergesAtInfinity => "RejectedDivergesAtInfinity",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub name: SystemName,
    pub coordinate: Coordinate,
    /// Orbital quantum number (spherical systems).
    pub l: Option<u32>,
    /// Magnetic quantum number (plane polar).
    pub m: Option<i32>,
    pub potential: PotentialParams,
    pub mass: f64,
    pub hbar: f64,
}

impl SystemSpec {
    fn base(name: SystemName, coordinate: Coordinate, potential: PotentialParams) -> Self {
        SystemSpec {
            name,
            coordinate,
            l: None,
            m: None,
            potential,
            mass: 1.0,
            hbar: 1.0,
        }
    }

    pub fn free1d() -> Self {
        Self::base(SystemName::Free1D, Coordinate::Cartesian, PotentialParams::None)
    }

    pub fn free2d(m: i32) -> Result<Self> {
        let mut s = Self::base(SystemName::Free2D, Coordinate::PlanePolar, PotentialParams::None);
        s.m = Some(m);
        s.validated()
    }

    pub fn free3d(l: u32) -> Result<Self> {
        let mut s = Self::base(SystemName::Free3D, Coordinate::Spherical, PotentialParams::None);
        s.l = Some(l);
        s.validated()
    }

    pub fn linear(c: f64) -> Result<Self> {
        Self::base(SystemName::Linear1D, Coordinate::Cartesian, PotentialParams::Linear { c }).validated()
    }

    pub fn hydrogen(l: u32, z: f64, a0: f64) -> Result<Self> {
        let mut s = Self::base(
            SystemName::HydrogenContinuum,
            Coordinate::Spherical,
            PotentialParams::Hydrogen { z, a0 },
        );
        s.l = Some(l);
        s.validated()
    }

    pub fn morse(d: f64, k0: f64) -> Result<Self> {
        Self::base(SystemName::Morse1D, Coordinate::Cartesian, PotentialParams::Morse { d, k0 }).validated()
    }

    /// Same system with explicit mass and ħ.
    pub fn with_units(mut self, mass: f64, hbar: f64) -> Result<Self> {
        self.mass = mass;
        self.hbar = hbar;
        self.validated()
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    /// Checks that parameters and quantum numbers match the system.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(format!("{}: {msg}", self.name)));
        if !(self.mass > 0.0 && self.mass.is_finite()) || !(self.hbar > 0.0 && self.hbar.is_finite()) {
            return bad("mass and hbar must be positive");
        }
        let expected_coordinate = match self.name {
            SystemName::Free2D => Coordinate::PlanePolar,
            SystemName::Free3D | SystemName::HydrogenContinuum => Coordinate::Spherical,
            _ => Coordinate::Cartesian,
        };
        if self.coordinate != expected_coordinate {
            return bad("coordinate type does not match the system");
        }
        match self.coordinate {
            Coordinate::PlanePolar => match self.m {
                Some(m) if m.unsigned_abs() <= MAX_QUANTUM_NUMBER && self.l.is_none() => {}
                _ => return bad("plane polar systems need |m| <= 20 and no l"),
            },
            Coordinate::Spherical => match self.l {
                Some(l) if l <= MAX_QUANTUM_NUMBER && self.m.is_none() => {}
                _ => return bad("spherical systems need l <= 20 and no m"),
            },
            Coordinate::Cartesian => {
                if self.l.is_some() || self.m.is_some() {
                    return bad("cartesian systems take no quantum numbers");
                }
            }
        }
        let positive = |x: f64| x > 0.0 && x.is_finite();
        match (self.name, self.potential) {
            (SystemName::Free1D | SystemName::Free2D | SystemName::Free3D, PotentialParams::None) => Ok(()),
            (SystemName::Linear1D, PotentialParams::Linear { c }) if positive(c) => Ok(()),
            (SystemName::HydrogenContinuum, PotentialParams::Hydrogen { z, a0 }) if positive(z) && positive(a0) => {
                Ok(())
            }
            (SystemName::Morse1D, PotentialParams::Morse { d, k0 }) if positive(d) && positive(k0) => Ok(()),
            _ => bad("potential parameters missing, extra or not positive"),
        }
    }

    pub fn l(&self) -> u32 {
        self.l.unwrap_or(0)
    }

    pub fn m(&self) -> i32 {
        self.m.unwrap_or(0)
    }

    pub fn is_radial(&self) -> bool {
        self.coordinate != Coordinate::Cartesian
    }

    /// The bare potential `V(q)`.
    pub fn potential(&self, q: f64) -> f64 {
        match self.potential {
            PotentialParams::None => 0.0,
            PotentialParams::Linear { c } => c * q,
            PotentialParams::Hydrogen { z, a0 } => -z * self.hbar * self.hbar / (self.mass * a0 * q),
            PotentialParams::Morse { d, k0 } => d * ((-2.0 * k0 * q).exp() - 2.0 * (-k0 * q).exp()),
        }
    }

    /// `V_eff(q)`: the potential plus the centrifugal term of the reduced
    /// radial equation.
    pub fn effective_potential(&self, q: f64) -> Result<f64> {
        if self.is_radial() && !(q > 0.0) {
            return Err(Error::Domain(format!("{} needs q > 0, got {q}", self.name)));
        }
        let kinetic = self.hbar * self.hbar / (2.0 * self.mass * q * q);
        let centrifugal = match self.coordinate {
            Coordinate::Cartesian => 0.0,
            Coordinate::PlanePolar => {
                let m = self.m() as f64;
                (m * m - 0.25) * kinetic
            }
            Coordinate::Spherical => {
                let l = self.l() as f64;
                l * (l + 1.0) * kinetic
            }
        };
        Ok(self.potential(q) + centrifugal)
    }

    /// `E = ħ²k²/(2M)`.
    pub fn energy(&self, k: f64) -> f64 {
        self.hbar * self.hbar * k * k / (2.0 * self.mass)
    }

    /// The zero-energy Morse state, handled as a special case.
    pub fn is_zero_energy_special(&self, k: f64) -> bool {
        self.name == SystemName::Morse1D && k == 0.0
    }

    /// Admissible wavenumbers: `k > 0`, and `k = 0` for Morse.
    pub fn check_k(&self, k: f64) -> Result<()> {
        let ok = k.is_finite() && (k > 0.0 || self.is_zero_energy_special(k));
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("{}: wavenumber k = {k} not admissible", self.name)))
        }
    }

    /// `k₀ = (2MC/ħ²)^(1/3)` for the linear potential, the potential's own
    /// `k₀` for Morse.
    pub fn k0(&self) -> Option<f64> {
        match self.potential {
            PotentialParams::Linear { c } => Some((2.0 * self.mass * c / (self.hbar * self.hbar)).cbrt()),
            PotentialParams::Morse { k0, .. } => Some(k0),
            _ => None,
        }
    }

    /// `ξ = √(2MD)/(ħk₀)` (Morse).
    pub fn xi(&self) -> Option<f64> {
        match self.potential {
            PotentialParams::Morse { d, k0 } => Some((2.0 * self.mass * d).sqrt() / (self.hbar * k0)),
            _ => None,
        }
    }

    /// `η = k/k₀` (Morse).
    pub fn eta(&self, k: f64) -> Option<f64> {
        match self.potential {
            PotentialParams::Morse { k0, .. } => Some(k / k0),
            _ => None,
        }
    }

    /// `Z/(k ã₀)` (hydrogen), the imaginary part of `a`.
    pub fn coulomb_eta(&self, k: f64) -> Option<f64> {
        match self.potential {
            PotentialParams::Hydrogen { z, a0 } => Some(z / (k * a0)),
            _ => None,
        }
    }

    /// The dimensionless frame `z = κq + α`: `κ = k` with `α = 0` for the free
    /// and hydrogen systems, `κ = k₀` with `α = -k₀E/C` for the linear
    /// potential, `κ = k₀` with `α = 0` for Morse.
    pub fn frame(&self, k: f64) -> FrameOffset {
        match self.potential {
            PotentialParams::Linear { c } => {
                let k0 = self.k0().unwrap_or(1.0);
                FrameOffset::new(-k0 * self.energy(k) / c, k, Some(k0))
            }
            PotentialParams::Morse { k0, .. } => FrameOffset::new(0.0, k, Some(k0)),
            _ => FrameOffset::new(0.0, k, None),
        }
    }

    /// Right-hand side of the ζ constraint at frame coordinate `z`:
    /// `(8M/ħ²κ²)(V_eff(q) - E)`.
    pub fn zeta_rhs(&self, k: f64, z: f64) -> Result<C64> {
        let frame = self.frame(k);
        let kappa = frame.scale();
        let q = frame.q_of(z);
        let v = self.effective_potential(q)?;
        let pref = 8.0 * self.mass / (self.hbar * self.hbar * kappa * kappa);
        Ok(C64::new(pref * (v - self.energy(k)), 0.0))
    }
}

impl fmt::Display for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if let Some(l) = self.l {
            write!(f, " l={l}")?;
        }
        if let Some(m) = self.m {
            write!(f, " m={m}")?;
        }
        match self.potential {
            PotentialParams::None => {}
            PotentialParams::Linear { c } => write!(f, " C={c}")?,
            PotentialParams::Hydrogen { z, a0 } => write!(f, " Z={z} a0={a0}")?,
            PotentialParams::Morse { d, k0 } => write!(f, " D={d} k0={k0}")?,
        }
        Ok(())
    }
}

/// One row of a verdict table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerdictRow {
    pub case_id: usize,
    pub a: C64,
    pub b: C64,
    pub c: C64,
    /// Power of the ζ map where one is used.
    pub d: Option<f64>,
    pub kind: ChfKind,
    pub expected: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictTable {
    pub system: SystemSpec,
    pub k: f64,
    pub rows: Vec<VerdictRow>,
}

impl VerdictTable {
    pub fn statuses(&self) -> Vec<Status> {
        self.rows.iter().map(|r| r.expected).collect()
    }

    pub fn accepted_cases(&self) -> Vec<usize> {
        self.rows
            .iter()
            .filter(|r| r.expected.is_accepted())
            .map(|r| r.case_id)
            .collect()
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// The reference table for the system at wavenumber `k`, transcribed
/// directly (parameters depend on `k` only for hydrogen and Morse).
pub fn expected_verdicts(s: &SystemSpec, k: f64) -> VerdictTable {
    use ChfKind::{Mtilde, M, U};
    use Status::*;
    let i2 = c(0.0, 2.0);
    let row = |case_id, a, b, cc, d, kind, expected| VerdictRow {
        case_id,
        a,
        b,
        c: cc,
        d,
        kind,
        expected,
    };
    let rows = match s.name {
        SystemName::Free1D => vec![
            row(1, c(0.0, 0.0), c(0.0, 0.0), i2, None, Mtilde, Accepted),
            row(2, c(0.0, 0.0), c(0.0, 0.0), i2, None, U, RejectedImaginaryW),
            row(3, c(1.0, 0.0), c(2.0, 0.0), i2, None, M, Accepted),
            row(4, c(1.0, 0.0), c(2.0, 0.0), i2, None, U, RejectedImaginaryW),
        ],
        SystemName::Free2D => {
            let m = s.m().unsigned_abs() as f64;
            vec![
                row(1, c(0.5 - m, 0.0), c(1.0 - 2.0 * m, 0.0), i2, None, Mtilde, Accepted),
                row(2, c(0.5 - m, 0.0), c(1.0 - 2.0 * m, 0.0), i2, None, U, RejectedImaginaryW),
                row(3, c(0.5 + m, 0.0), c(1.0 + 2.0 * m, 0.0), i2, None, M, Accepted),
                row(4, c(0.5 + m, 0.0), c(1.0 + 2.0 * m, 0.0), i2, None, U, RejectedImaginaryW),
            ]
        }
        SystemName::Free3D => {
            let l = s.l() as f64;
            vec![
                row(1, c(-l, 0.0), c(-2.0 * l, 0.0), i2, None, Mtilde, Accepted),
                row(2, c(-l, 0.0), c(-2.0 * l, 0.0), i2, None, U, RejectedDivergesAtOrigin),
                row(3, c(l + 1.0, 0.0), c(2.0 * l + 2.0, 0.0), i2, None, M, Accepted),
                row(4, c(l + 1.0, 0.0), c(2.0 * l + 2.0, 0.0), i2, None, U, RejectedDivergesAtOrigin),
            ]
        }
        SystemName::Linear1D => {
            let (p, n) = (c(4.0 / 3.0, 0.0), c(-4.0 / 3.0, 0.0));
            let d = Some(1.5);
            let mut rows = Vec::new();
            for (offset, a, b) in [(0, 1.0 / 6.0, 1.0 / 3.0), (4, 5.0 / 6.0, 5.0 / 3.0)] {
                let (a, b) = (c(a, 0.0), c(b, 0.0));
                rows.push(row(offset + 1, a, b, p, d, M, RejectedDivergesAtInfinity));
                rows.push(row(offset + 2, a, b, n, d, M, RejectedDivergesAtInfinity));
                rows.push(row(offset + 3, a, b, p, d, U, Accepted));
                rows.push(row(offset + 4, a, b, n, d, U, RejectedDivergesAtInfinity));
            }
            rows
        }
        SystemName::HydrogenContinuum => {
            let l = s.l() as f64;
            let eta = s.coulomb_eta(k).unwrap_or(0.0);
            let (bp, bm) = (c(2.0 * l + 2.0, 0.0), c(-2.0 * l, 0.0));
            vec![
                row(1, c(l + 1.0, eta), bp, i2, None, M, Accepted),
                row(2, c(l + 1.0, eta), bp, i2, None, U, RejectedDivergesAtOrigin),
                row(3, c(l + 1.0, -eta), bp, -i2, None, M, Accepted),
                row(4, c(l + 1.0, -eta), bp, -i2, None, U, RejectedDivergesAtOrigin),
                row(5, c(-l, eta), bm, i2, None, Mtilde, RejectedDivergesAtOrigin),
                row(6, c(-l, eta), bm, i2, None, U, RejectedDivergesAtOrigin),
                row(7, c(-l, -eta), bm, -i2, None, Mtilde, RejectedDivergesAtOrigin),
                row(8, c(-l, -eta), bm, -i2, None, U, RejectedDivergesAtOrigin),
            ]
        }
        SystemName::Morse1D => {
            let xi = s.xi().unwrap_or(0.0);
            let eta = s.eta(k).unwrap_or(0.0);
            let mut rows = Vec::new();
            for (offset, sb) in [(0, 1.0), (4, -1.0)] {
                let b = c(1.0, 2.0 * sb * eta);
                let (cp, cn) = (c(2.0 * xi, 0.0), c(-2.0 * xi, 0.0));
                let ap = c(0.5 - xi, sb * eta);
                let an = c(0.5 + xi, sb * eta);
                rows.push(row(offset + 1, ap, b, cp, None, M, RejectedDivergesAtInfinity));
                rows.push(row(offset + 2, ap, b, cp, None, U, Accepted));
                rows.push(row(offset + 3, an, b, cn, None, M, RejectedDivergesAtInfinity));
                rows.push(row(offset + 4, an, b, cn, None, U, RejectedDivergesAtInfinity));
            }
            rows
        }
    };
    VerdictTable { system: *s, k, rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn effective_potential_examples() {
        let s3 = SystemSpec::free3d(1).unwrap();
        assert!((s3.effective_potential(2.0).unwrap() - 0.25).abs() < 1e-15);
        let s2 = SystemSpec::free2d(0).unwrap();
        assert!((s2.effective_potential(1.0).unwrap() + 0.125).abs() < 1e-15);
        let sm = SystemSpec::morse(1.0, 1.0).unwrap();
        assert!((sm.effective_potential(0.0).unwrap() + 1.0).abs() < 1e-15);
        assert!(s3.effective_potential(0.0).is_err());
    }

    #[test]
    fn energy_examples() {
        let s = SystemSpec::free1d();
        assert_eq!(s.energy(1.0), 0.5);
        let heavy = SystemSpec::free1d().with_units(0.5, 1.0).unwrap();
        assert_eq!(heavy.energy(2.0), 4.0);
        let m = SystemSpec::morse(2.0, 1.0).unwrap();
        assert_eq!(m.energy(0.0), 0.0);
        assert!(m.is_zero_energy_special(0.0));
        assert!(m.check_k(0.0).is_ok());
        assert!(s.check_k(0.0).is_err());
    }

    #[test]
    fn parameters_must_match_the_system() {
        assert!(SystemSpec::free2d(21).is_err());
        assert!(SystemSpec::free3d(21).is_err());
        assert!(SystemSpec::linear(-1.0).is_err());
        assert!(SystemSpec::hydrogen(1, 1.0, 0.0).is_err());
        let mut s = SystemSpec::free3d(1).unwrap();
        s.m = Some(1);
        assert!(s.validate().is_err());
    }

    #[test]
    fn table_sizes_and_reference_acceptances() {
        let systems = [
            SystemSpec::free1d(),
            SystemSpec::free2d(-2).unwrap(),
            SystemSpec::free3d(1).unwrap(),
            SystemSpec::linear(1.0).unwrap(),
            SystemSpec::hydrogen(1, 1.0, 1.0).unwrap(),
            SystemSpec::morse(2.0, 1.0).unwrap(),
        ];
        let accepted = [vec![1, 3], vec![1, 3], vec![1, 3], vec![3, 7], vec![1, 3], vec![2, 6]];
        for (s, want) in systems.iter().zip(accepted) {
            let t = expected_verdicts(s, 1.0);
            assert_eq!(t.rows.len(), s.name.table_size());
            assert_eq!(t.accepted_cases(), want, "{s}");
        }
    }

    #[test]
    fn centrifugal_term_symmetries() {
        for q in [0.3, 1.0, 4.5] {
            let p = SystemSpec::free2d(3).unwrap().effective_potential(q).unwrap();
            let n = SystemSpec::free2d(-3).unwrap().effective_potential(q).unwrap();
            assert_eq!(p, n);
        }
        let h0 = SystemSpec::hydrogen(0, 1.0, 1.0).unwrap();
        let h1 = SystemSpec::hydrogen(1, 1.0, 1.0).unwrap();
        assert!(h0.effective_potential(1e-6).unwrap() < -1e5);
        assert!(h1.effective_potential(1e-6).unwrap() > 1e5);
    }

    #[test]
    fn names_round_trip() {
        for n in SystemName::ALL {
            assert_eq!(n.cli_name().parse::<SystemName>().unwrap(), n);
        }
        assert!("quartic".parse::<SystemName>().is_err());
    }
}
