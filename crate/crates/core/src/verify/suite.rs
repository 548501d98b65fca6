//! The verification suite: every check over a set of (system, k) cells,
//! evaluated in parallel, reported as records.

use super::crosscheck::{
    airy_asymptotics, closed_form_crosschecks, confirm_defect, duplicate_superpotentials, ladder_chain_1d,
    NamedReport,
};
use super::{
    default_grid, riccati_check, riccati_points, schrodinger_residual, subsidiary_residual, ResidualReport,
    WavefunctionGrid, RICCATI_TOL, SCHRODINGER_TOL, SUBSIDIARY_TOL,
};
use crate::classify::{classify_system, max_imaginary_w, REALITY_TOL};
use crate::error::{Error, Result};
use crate::systems::{SystemName, SystemSpec};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::io::Write;
use std::sync::Mutex;

/// Relative energy error accepted for the chain's Riccati energies.
pub const CHAIN_ENERGY_TOL: f64 = 1e-12;
/// Riccati residual above which the two-dimensional chain attempt counts as
/// failing, as it must.
pub const CHAIN_2D_DEFECT: f64 = 1e-3;

/// One check's outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub system: String,
    pub case_id: Option<usize>,
    pub k: f64,
    pub l: Option<u32>,
    pub m: Option<i32>,
    pub check: String,
    pub max_residual: f64,
    pub location: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// What to run.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub cells: Vec<(SystemSpec, f64)>,
    /// Replaces every residual tolerance when set.
    pub tolerance: Option<f64>,
    /// Adds the free-particle chain (and its two-dimensional counterexample)
    /// up to `jmax`.
    pub chain: bool,
    pub jmax: usize,
    pub threads: usize,
}

impl SuiteConfig {
    pub fn new(cells: Vec<(SystemSpec, f64)>) -> Self {
        SuiteConfig {
            cells,
            tolerance: None,
            chain: false,
            jmax: 6,
            threads: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        }
    }
}

/// Three wavenumbers per system and all quantum numbers `l, |m| ≤ 5`; Morse
/// runs over `ξ ∈ {0.7, 2.3, 5.5}` and `η ∈ {0.4, 0.9, 2.0}` with `k₀ = 1`.
pub fn default_cells(name: SystemName) -> Vec<(SystemSpec, f64)> {
    let ks = [0.7, 1.0, 1.9];
    let with_ks = |specs: Vec<SystemSpec>, ks: &[f64]| -> Vec<(SystemSpec, f64)> {
        specs.into_iter().flat_map(|s| ks.iter().map(move |&k| (s, k))).collect()
    };
    match name {
        SystemName::Free1D => with_ks(vec![SystemSpec::free1d()], &ks),
        SystemName::Free2D => with_ks((-5..=5).filter_map(|m| SystemSpec::free2d(m).ok()).collect(), &ks),
        SystemName::Free3D => with_ks((0..=5).filter_map(|l| SystemSpec::free3d(l).ok()).collect(), &ks),
        SystemName::Linear1D => with_ks(vec![SystemSpec::linear(1.0).expect("valid")], &[0.5, 1.0, 1.3]),
        SystemName::HydrogenContinuum => with_ks(
            (0..=5).filter_map(|l| SystemSpec::hydrogen(l, 1.0, 1.0).ok()).collect(),
            &[0.4, 0.7, 1.3],
        ),
        SystemName::Morse1D => [0.7, 2.3, 5.5]
            .into_iter()
            .filter_map(|xi: f64| SystemSpec::morse(xi * xi / 2.0, 1.0).ok())
            .flat_map(|s| [0.4, 0.9, 2.0].into_iter().map(move |k| (s, k)))
            .collect(),
    }
}

/// All default cells of all systems.
pub fn all_cells() -> Vec<(SystemSpec, f64)> {
    SystemName::ALL.into_iter().flat_map(default_cells).collect()
}

/// Records of one run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub records: Vec<CheckRecord>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.records.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.passed)
    }

    pub fn write_jsonl<W: Write + ?Sized>(&self, out: &mut W) -> Result<()> {
        for r in &self.records {
            let line = serde_json::to_string(r).map_err(|e| Error::InvalidConfig(e.to_string()))?;
            writeln!(out, "{line}").map_err(|e| Error::InvalidConfig(format!("write failed: {e}")))?;
        }
        Ok(())
    }

    /// Fixed-width table, one line per record, followed by a summary.
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<10} {:>4} {:>6} {:>4} {:<28} {:>12} {:>9} {}",
            "system", "case", "k", "l/m", "check", "residual", "tol", "result"
        );
        for r in &self.records {
            let qn = match (r.l, r.m) {
                (Some(l), _) => l.to_string(),
                (_, Some(m)) => m.to_string(),
                _ => "-".into(),
            };
            let case = r.case_id.map_or("-".into(), |c| c.to_string());
            let _ = writeln!(
                s,
                "{:<10} {:>4} {:>6.3} {:>4} {:<28} {:>12.3e} {:>9.1e} {}",
                r.system,
                case,
                r.k,
                qn,
                r.check,
                r.max_residual,
                r.tolerance,
                if r.passed { "PASS" } else { "FAIL" }
            );
        }
        let failed = self.failures().count();
        let _ = writeln!(s, "{} checks, {} passed, {} failed", self.records.len(), self.records.len() - failed, failed);
        s
    }
}

struct CellContext {
    system: SystemSpec,
    k: f64,
}

impl CellContext {
    fn record(&self, case_id: Option<usize>, check: &str, r: &ResidualReport) -> CheckRecord {
        CheckRecord {
            system: self.system.name.cli_name().to_string(),
            case_id,
            k: self.k,
            l: matches!(self.system.name, SystemName::Free3D | SystemName::HydrogenContinuum).then(|| self.system.l()),
            m: (self.system.name == SystemName::Free2D).then(|| self.system.m()),
            check: check.to_string(),
            max_residual: r.max_rel_residual,
            location: r.location.is_finite().then_some(r.location),
            tolerance: r.tolerance_used,
            passed: r.passed,
            note: None,
        }
    }

    fn error(&self, case_id: Option<usize>, check: &str, e: &Error) -> CheckRecord {
        let mut r = self.record(case_id, check, &ResidualReport::new(f64::MAX, f64::NAN, 0.0));
        r.passed = false;
        r.note = Some(e.to_string());
        r
    }

    fn push(&self, out: &mut Vec<CheckRecord>, case_id: Option<usize>, check: &str, r: Result<ResidualReport>) {
        out.push(match r {
            Ok(r) => self.record(case_id, check, &r),
            Err(e) => self.error(case_id, check, &e),
        });
    }
}

fn retolerate(r: ResidualReport, tol: Option<f64>) -> ResidualReport {
    match tol {
        Some(t) => ResidualReport::new(r.max_rel_residual, r.location, t),
        None => r,
    }
}

fn push_named(ctx: &CellContext, out: &mut Vec<CheckRecord>, reports: Result<Vec<NamedReport>>, tol: Option<f64>) {
    match reports {
        Ok(rs) => {
            for r in rs {
                out.push(ctx.record(r.case_id, &r.name, &retolerate(r.report, tol)));
            }
        }
        Err(e) => out.push(ctx.error(None, "crosscheck", &e)),
    }
}

/// Every check of one (system, k) cell.
pub fn run_cell(system: &SystemSpec, k: f64, cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let ctx = CellContext { system: *system, k };
    let tol = |default: f64| cfg.tolerance.unwrap_or(default);
    let mut out = Vec::new();
    let classification = match classify_system(system, k) {
        Ok(c) => c,
        Err(e) => return vec![ctx.error(None, "classify", &e)],
    };
    let spec = default_grid(system, k);
    for v in &classification.verdicts {
        let c = match crate::ansatz::solve_parameters(system, k).map(|cs| cs[v.case_id - 1]) {
            Ok(c) => c,
            Err(e) => {
                out.push(ctx.error(Some(v.case_id), "solve", &e));
                continue;
            }
        };
        if v.status.is_accepted() {
            match WavefunctionGrid::sample(&c, spec) {
                Ok(g) => {
                    ctx.push(&mut out, Some(v.case_id), "schrodinger", schrodinger_residual(&g, tol(SCHRODINGER_TOL)));
                    ctx.push(&mut out, Some(v.case_id), "subsidiary", subsidiary_residual(&g, &c, tol(SUBSIDIARY_TOL)));
                }
                Err(e) => out.push(ctx.error(Some(v.case_id), "sample", &e)),
            }
            let reality = max_imaginary_w(&c).map(|m| ResidualReport::new(m, f64::NAN, tol(REALITY_TOL)));
            ctx.push(&mut out, Some(v.case_id), "reality", reality);
            let zs = riccati_points(&c, 40);
            ctx.push(&mut out, Some(v.case_id), "riccati", riccati_check(&c, &zs, tol(RICCATI_TOL)));
        } else {
            let name = "rejection_confirmed";
            match confirm_defect(&c, v.status) {
                Ok(d) => {
                    let mut r = ctx.record(
                        Some(v.case_id),
                        name,
                        &ResidualReport::new(d.observed, f64::NAN, d.threshold),
                    );
                    r.passed = d.confirmed;
                    r.note = Some(format!("{} (observed must exceed threshold)", v.status));
                    out.push(r);
                }
                Err(e) => out.push(ctx.error(Some(v.case_id), name, &e)),
            }
        }
    }
    push_named(&ctx, &mut out, closed_form_crosschecks(system, k), cfg.tolerance);
    match duplicate_superpotentials(system, k) {
        Ok(Some(r)) => out.push(ctx.record(r.case_id, &r.name, &retolerate(r.report, cfg.tolerance))),
        Ok(None) => {}
        Err(e) => out.push(ctx.error(None, "duplicate_superpotential", &e)),
    }
    if system.name == SystemName::Linear1D {
        push_named(&ctx, &mut out, airy_asymptotics(system, k), cfg.tolerance);
    }
    if cfg.chain {
        match system.name {
            SystemName::Free1D => {
                for j in 0..=cfg.jmax {
                    match ladder_chain_1d(j, k, 8192) {
                        Ok(r) => {
                            let name = format!("ladder_chain_j{j}");
                            out.push(ctx.record(None, &name, &retolerate(r.report, cfg.tolerance)));
                            let de = (r.energy - r.expected_energy).abs() / r.expected_energy;
                            let name = format!("ladder_energy_j{j}");
                            let er = ResidualReport::new(de, 1.0, tol(CHAIN_ENERGY_TOL));
                            out.push(ctx.record(None, &name, &er));
                        }
                        Err(e) => out.push(ctx.error(None, &format!("ladder_chain_j{j}"), &e)),
                    }
                }
            }
            SystemName::Free2D => {
                let d = chain_2d_attempt(system, k);
                let mut r = ctx.record(None, "chain_2d_fails", &ResidualReport::new(d.0, d.1, CHAIN_2D_DEFECT));
                r.passed = d.0 > CHAIN_2D_DEFECT;
                r.note = Some("negative example: the one-dimensional chain superpotential must not solve the radial Riccati equation".into());
                out.push(r);
            }
            _ => {}
        }
    }
    out
}

/// The one-dimensional chain superpotential `W = -(|m|+1) cot z` tried on
/// the plane-polar radial equation: largest Riccati defect on
/// `z ∈ [0.2, 3]`, with its location.
pub fn chain_2d_attempt(system: &SystemSpec, k: f64) -> (f64, f64) {
    let j1 = (system.m().unsigned_abs() + 1) as f64;
    let mut worst = (0.0, f64::NAN);
    for i in 0..200 {
        let z = 0.2 + 2.8 * i as f64 / 199.0;
        let w = -j1 / z.tan();
        let dw = j1 / (z.sin() * z.sin());
        let rhs = system.zeta_rhs(k, z).unwrap_or(Complex64::new(f64::NAN, 0.0)) / 4.0;
        let scale = 1f64.max(w * w).max(dw).max(rhs.norm());
        let d = (Complex64::new(w * w - dw, 0.0) - rhs).norm() / scale;
        if d > worst.0 {
            worst = (d, z);
        }
    }
    worst
}

/// Runs all cells on up to `cfg.threads` worker threads; records come back
/// in cell order.
pub fn run_suite(cfg: &SuiteConfig) -> SuiteReport {
    let sink: Mutex<Vec<(usize, Vec<CheckRecord>)>> = Mutex::new(Vec::new());
    let next = std::sync::atomic::AtomicUsize::new(0);
    let workers = cfg.threads.clamp(1, cfg.cells.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let Some((s, k)) = cfg.cells.get(i) else { break };
                let records = run_cell(s, *k, cfg);
                sink.lock().expect("report sink poisoned").push((i, records));
            });
        }
    });
    let mut cells = sink.into_inner().expect("report sink poisoned");
    cells.sort_by_key(|(i, _)| *i);
    SuiteReport {
        records: cells.into_iter().flat_map(|(_, r)| r).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free1d_cell_with_chain_passes() {
        let mut cfg = SuiteConfig::new(vec![(SystemSpec::free1d(), 1.0)]);
        cfg.chain = true;
        let report = run_suite(&cfg);
        assert!(report.records.iter().any(|r| r.check == "ladder_chain_j6"));
        assert!(report.all_passed(), "{:?}", report.failures().collect::<Vec<_>>());
    }

    #[test]
    fn unreachable_tolerance_fails() {
        let mut cfg = SuiteConfig::new(vec![(SystemSpec::free1d(), 1.0)]);
        cfg.tolerance = Some(1e-20);
        assert!(!run_suite(&cfg).all_passed());
    }

    #[test]
    fn two_dimensional_chain_attempt_fails() {
        let s = SystemSpec::free2d(1).unwrap();
        assert!(chain_2d_attempt(&s, 1.0).0 > CHAIN_2D_DEFECT);
    }

    #[test]
    fn records_serialize_as_json_lines() {
        let report = run_suite(&SuiteConfig::new(vec![(SystemSpec::linear(1.0).unwrap(), 1.3)]));
        let mut buf = Vec::new();
        report.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), report.records.len());
        let first: CheckRecord = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(first, report.records[0]);
        assert!(report.table().contains("checks"));
    }
}
