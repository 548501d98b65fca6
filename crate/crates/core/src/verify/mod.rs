//! Independent numerical confirmation of accepted solutions: the Schrödinger
//! residual by finite differences, the first-order subsidiary condition, the
//! Riccati relation, the free-particle factorization chain and closed-form
//! cross-checks against separately implemented special functions.

pub mod crosscheck;
pub mod io;
pub mod oracles;
pub mod suite;

use crate::ansatz::{Candidate, FrameOffset};
use crate::classify::{reality_grid, superpotential, superpotential_and_derivative, wavefunction_reduced, POLE_SKIP};
use crate::error::{Error, Result};
use crate::systems::SystemSpec;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

type C64 = Complex64;

pub const SCHRODINGER_TOL: f64 = 1e-6;
pub const SUBSIDIARY_TOL: f64 = 1e-6;
pub const RICCATI_TOL: f64 = 1e-6;
/// Smallest admissible number of grid points.
pub const MIN_GRID_POINTS: usize = 64;
/// Stencil resolution required at a subsidiary-check point: `|W| h_z`.
const RESOLVED_STEP: f64 = 0.03;

pub const NORMALIZATION_CONVENTION: &str = "C = 1, global phase removed";

/// A uniform grid `q_min..=q_max` with `n` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub q_min: f64,
    pub q_max: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn new(q_min: f64, q_max: f64, n: usize) -> Result<Self> {
        let g = GridSpec { q_min, q_max, n };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < MIN_GRID_POINTS || !(self.q_max > self.q_min) || !self.q_min.is_finite() || !self.q_max.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "grid {}:{}:{} needs q_min < q_max and n >= {MIN_GRID_POINTS}",
                self.q_min, self.q_max, self.n
            )));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        (self.q_max - self.q_min) / (self.n - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.n).map(|i| self.q_min + i as f64 * h).collect()
    }
}

impl FromStr for GridSpec {
    type Err = Error;
    /// `q_min:q_max:n`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("grid '{s}' is not q_min:q_max:n"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let q_min = parts[0].trim().parse().map_err(|_| bad())?;
        let q_max = parts[1].trim().parse().map_err(|_| bad())?;
        let n = parts[2].trim().parse().map_err(|_| bad())?;
        GridSpec::new(q_min, q_max, n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSample {
    pub q: f64,
    pub u: C64,
}

/// Samples of a reduced wavefunction on a uniform grid of the physical
/// coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavefunctionGrid {
    pub q_min: f64,
    pub q_max: f64,
    pub n: usize,
    pub samples: Vec<GridSample>,
    pub k: f64,
    pub system: SystemSpec,
    pub frame: FrameOffset,
    pub normalization_convention: String,
}

impl WavefunctionGrid {
    /// Samples `u(q)` of an arbitrary function; the global phase is removed
    /// so that the sample of largest modulus is real and positive.
    pub fn from_function<F>(system: SystemSpec, k: f64, frame: FrameOffset, spec: GridSpec, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<C64>,
    {
        spec.validate()?;
        if system.is_radial() && spec.q_min <= 0.0 {
            return Err(Error::InvalidConfig("radial grids must exclude q = 0".into()));
        }
        let mut samples = spec
            .points()
            .into_iter()
            .map(|q| Ok(GridSample { q, u: f(q)? }))
            .collect::<Result<Vec<_>>>()?;
        remove_global_phase(&mut samples);
        Ok(WavefunctionGrid {
            q_min: spec.q_min,
            q_max: spec.q_max,
            n: spec.n,
            samples,
            k,
            system,
            frame,
            normalization_convention: NORMALIZATION_CONVENTION.to_string(),
        })
    }

    /// Samples the candidate's reduced wavefunction at `z = κq + α`.
    pub fn sample(c: &Candidate, spec: GridSpec) -> Result<Self> {
        let frame = c.frame;
        Self::from_function(c.system, c.k, frame, spec, |q| wavefunction_reduced(c, frame.z_of(q)))
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec {
            q_min: self.q_min,
            q_max: self.q_max,
            n: self.n,
        }
    }

    pub fn step(&self) -> f64 {
        self.spec().step()
    }

    fn values(&self) -> Vec<C64> {
        self.samples.iter().map(|s| s.u).collect()
    }
}

fn remove_global_phase(samples: &mut [GridSample]) {
    let Some(peak) = samples.iter().map(|s| s.u).max_by(|a, b| a.norm().total_cmp(&b.norm())) else {
        return;
    };
    if peak.norm() == 0.0 {
        return;
    }
    let phase = C64::from_polar(1.0, -peak.arg());
    for s in samples.iter_mut() {
        s.u *= phase;
    }
}

/// Outcome of one numerical check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub max_rel_residual: f64,
    /// Abscissa of the worst residual.
    pub location: f64,
    pub tolerance_used: f64,
    pub passed: bool,
}

impl ResidualReport {
    pub fn new(max_rel_residual: f64, location: f64, tolerance_used: f64) -> Self {
        ResidualReport {
            max_rel_residual,
            location,
            tolerance_used,
            passed: max_rel_residual.is_finite() && max_rel_residual <= tolerance_used,
        }
    }
}

/// Running maximum with its location.
struct Worst {
    value: f64,
    at: f64,
}

impl Worst {
    fn new() -> Self {
        Worst {
            value: 0.0,
            at: f64::NAN,
        }
    }

    fn update(&mut self, value: f64, at: f64) {
        if value > self.value || value.is_nan() {
            self.value = value;
            self.at = at;
        }
    }
}

fn second_derivative(u: &[C64], i: usize, h: f64) -> C64 {
    (-u[i - 2] + 16.0 * u[i - 1] - 30.0 * u[i] + 16.0 * u[i + 1] - u[i + 2]) / (12.0 * h * h)
}

fn first_derivative(u: &[C64], i: usize, h: f64) -> C64 {
    (u[i - 2] - 8.0 * u[i - 1] + 8.0 * u[i + 1] - u[i + 2]) / (12.0 * h)
}

fn sixth_difference(u: &[C64], i: usize) -> C64 {
    u[i - 3] - 6.0 * u[i - 2] + 15.0 * u[i - 1] - 20.0 * u[i] + 15.0 * u[i + 1] - 6.0 * u[i + 2] + u[i + 3]
}

/// `max |-(ħ²/2M) u'' + (V_eff - E) u| / max(|E u|, |(ħ²/2M) u''|)` over the
/// interior points, with `u''` from the 5-point stencil.
pub fn schrodinger_residual(g: &WavefunctionGrid, tol: f64) -> Result<ResidualReport> {
    let u = g.values();
    let n = u.len();
    let h = g.step();
    let kin = g.system.hbar * g.system.hbar / (2.0 * g.system.mass);
    let e = g.system.energy(g.k);
    let mut upp = vec![C64::new(0.0, 0.0); n];
    let mut scale = 0.0f64;
    for i in 2..n - 2 {
        upp[i] = second_derivative(&u, i, h);
        scale = scale.max((e * u[i]).norm()).max((kin * upp[i]).norm());
    }
    if scale == 0.0 {
        return Err(Error::InvalidConfig("wavefunction vanishes on the grid".into()));
    }
    // h⁴ max|u⁽⁶⁾|/90 with u⁽⁶⁾ ≈ Δ⁶u/h⁶.
    let d6 = (3..n - 3).map(|i| sixth_difference(&u, i).norm()).fold(0.0, f64::max);
    let estimate = kin * d6 / (90.0 * h * h) / scale;
    if estimate > tol / 10.0 {
        return Err(Error::GridTooCoarse {
            estimate,
            limit: tol / 10.0,
        });
    }
    let mut worst = Worst::new();
    for i in 2..n - 2 {
        let q = g.samples[i].q;
        let v = g.system.effective_potential(q)?;
        let r = -kin * upp[i] + (v - e) * u[i];
        worst.update(r.norm() / scale, q);
    }
    Ok(ResidualReport::new(worst.value, worst.at, tol))
}

/// `max |u'/u + W| / (1 + |W|)` in the frame coordinate, over points at
/// least one cell from any node of `u` where the stencil resolves `u'/u`.
pub fn subsidiary_residual(g: &WavefunctionGrid, c: &Candidate, tol: f64) -> Result<ResidualReport> {
    let u = g.values();
    let n = u.len();
    let hz = g.step() * c.frame.scale();
    let peak = u.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let near_node = |i: usize| {
        let window = &u[i - 2..=i + 2];
        let small = window.iter().any(|v| v.norm() < 1e-3 * peak);
        let flips = window.windows(2).any(|p| p[0].re * p[1].re < 0.0);
        small || flips
    };
    let mut worst = Worst::new();
    let mut used = 0usize;
    for i in 2..n - 2 {
        if near_node(i) {
            continue;
        }
        let z = c.frame.z_of(g.samples[i].q);
        let w = match superpotential(c, z) {
            Ok(w) => w,
            Err(Error::PoleAtNode { .. }) => continue,
            Err(e) => return Err(e),
        };
        if w.norm() * hz > RESOLVED_STEP {
            continue;
        }
        let du = first_derivative(&u, i, hz);
        worst.update((du / u[i] + w).norm() / (1.0 + w.norm()), g.samples[i].q);
        used += 1;
    }
    if used == 0 {
        return Err(Error::AllPointsNearNodes);
    }
    Ok(ResidualReport::new(worst.value, worst.at, tol))
}

/// `W² - W' = (2M/ħ²κ²)(V_eff - E)` at the given frame points, relative to
/// the largest of the terms (and 1).
pub fn riccati_check(c: &Candidate, zs: &[f64], tol: f64) -> Result<ResidualReport> {
    let mut worst = Worst::new();
    for &z in zs {
        let (w, dw) = match superpotential_and_derivative(c, z) {
            Ok(v) => v,
            Err(Error::PoleAtNode { .. }) => return Err(Error::PoleTooClose { z }),
            Err(e) => return Err(e),
        };
        if w.norm() > 1e6 {
            return Err(Error::PoleTooClose { z });
        }
        let rhs = c.system.zeta_rhs(c.k, z)? / 4.0;
        let scale = 1f64.max(w.norm_sqr()).max(dw.norm()).max(rhs.norm());
        worst.update((w * w - dw - rhs).norm() / scale, z);
    }
    Ok(ResidualReport::new(worst.value, worst.at, tol))
}

/// Up to `count` points of the reality grid away from poles of `W`.
pub fn riccati_points(c: &Candidate, count: usize) -> Vec<f64> {
    let safe: Vec<f64> = reality_grid(&c.system)
        .into_iter()
        .filter(|&z| matches!(superpotential(c, z), Ok(w) if w.norm() <= POLE_SKIP))
        .collect();
    let stride = (safe.len() / count.max(1)).max(1);
    safe.into_iter().step_by(stride).take(count).collect()
}

/// The default sampling grid in the physical coordinate for a system at
/// wavenumber `k`.
pub fn default_grid(system: &SystemSpec, k: f64) -> GridSpec {
    use crate::systems::SystemName::*;
    let frame = system.frame(k);
    let from_z = |z0: f64, z1: f64, n| GridSpec {
        q_min: frame.q_of(z0),
        q_max: frame.q_of(z1),
        n,
    };
    match system.name {
        Free1D => from_z(-10.0, 10.0, 4096),
        Free2D => from_z(0.5, 20.0, 2048),
        Free3D => from_z(0.2, 20.0, 2048),
        HydrogenContinuum => GridSpec {
            q_min: 0.05,
            q_max: 25.0,
            n: 2048,
        },
        Linear1D => from_z(-8.0, 4.0, 2048),
        Morse1D => from_z(-1.5, 6.0, 2048),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::solve_parameters;

    #[test]
    fn grid_parses() {
        let g: GridSpec = "0.1:20:2048".parse().unwrap();
        assert_eq!(g.n, 2048);
        assert!("0.1:20".parse::<GridSpec>().is_err());
        assert!("1:0:100".parse::<GridSpec>().is_err());
        assert!("0:1:10".parse::<GridSpec>().is_err());
    }

    #[test]
    fn cosine_satisfies_free_equation() {
        let s = SystemSpec::free1d();
        let spec = GridSpec::new(-10.0, 10.0, 4096).unwrap();
        let g = WavefunctionGrid::from_function(s, 1.0, s.frame(1.0), spec, |q| Ok(C64::new(q.cos(), 0.0))).unwrap();
        let r = schrodinger_residual(&g, SCHRODINGER_TOL).unwrap();
        assert!(r.max_rel_residual < 1e-8, "{r:?}");
    }

    #[test]
    fn coarse_grid_is_refused() {
        let s = SystemSpec::free1d();
        let spec = GridSpec::new(-10.0, 10.0, 64).unwrap();
        let g = WavefunctionGrid::from_function(s, 4.0, s.frame(4.0), spec, |q| Ok(C64::new((4.0 * q).cos(), 0.0)))
            .unwrap();
        assert!(matches!(
            schrodinger_residual(&g, SCHRODINGER_TOL),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn shifted_free_particle_is_a_cosine() {
        let c = solve_parameters(&SystemSpec::free1d(), 1.0).unwrap()[0]
            .with_alpha(std::f64::consts::FRAC_PI_2)
            .unwrap();
        let spec = GridSpec::new(-10.0, 10.0, 4096).unwrap();
        let g = WavefunctionGrid::sample(&c, spec).unwrap();
        let peak = g.samples.iter().map(|s| s.u.norm()).fold(0.0, f64::max);
        let cos_peak = g.samples.iter().map(|s| s.q.cos().abs()).fold(0.0, f64::max);
        for s in g.samples.iter().step_by(97) {
            let want = s.q.cos() / cos_peak;
            assert!((s.u.re / peak - want).abs() < 1e-10 || (s.u.re / peak + want).abs() < 1e-10);
        }
        let r = subsidiary_residual(&g, &c, SUBSIDIARY_TOL).unwrap();
        assert!(r.max_rel_residual < 1e-7, "{r:?}");
    }

    #[test]
    fn riccati_for_free_particle() {
        let c = solve_parameters(&SystemSpec::free1d(), 1.0).unwrap()[2];
        let r = riccati_check(&c, &[0.3, 1.1, 2.0, 4.4], RICCATI_TOL).unwrap();
        assert!(r.max_rel_residual < 1e-12, "{r:?}");
        assert!(matches!(riccati_check(&c, &[0.0], RICCATI_TOL), Err(Error::PoleTooClose { .. }) | Err(Error::Domain(_))));
    }

    #[test]
    fn hydrogen_and_morse_accepted_states_pass() {
        let h = SystemSpec::hydrogen(1, 1.0, 1.0).unwrap();
        let c = solve_parameters(&h, 1.0).unwrap()[0];
        let g = WavefunctionGrid::sample(&c, GridSpec::new(0.2, 15.0, 2048).unwrap()).unwrap();
        assert!(schrodinger_residual(&g, SCHRODINGER_TOL).unwrap().passed);
        assert!(subsidiary_residual(&g, &c, SUBSIDIARY_TOL).unwrap().passed);
        assert!(riccati_check(&c, &riccati_points(&c, 50), RICCATI_TOL).unwrap().passed);

        let m = SystemSpec::morse(2.3 * 2.3 / 2.0, 1.0).unwrap();
        let c = solve_parameters(&m, 0.9).unwrap()[1];
        let g = WavefunctionGrid::sample(&c, default_grid(&m, 0.9)).unwrap();
        let r = subsidiary_residual(&g, &c, SUBSIDIARY_TOL).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(schrodinger_residual(&g, SCHRODINGER_TOL).unwrap().passed);
    }
}
