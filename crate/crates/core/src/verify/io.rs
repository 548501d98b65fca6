//! Sampled-row artifacts: the rows written by the sampler and read back by
//! the verifier, as CSV (17 significant digits) or JSON lines.

use super::{GridSample, GridSpec, WavefunctionGrid};
use crate::ansatz::Candidate;
use crate::classify::superpotential;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

type C64 = Complex64;

pub const CSV_COLUMNS: &str = "q,re_u,im_u,re_w,im_w,v_eff";

/// One sampled point: the reduced wavefunction (global phase removed), the
/// superpotential in frame units and the effective potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub q: f64,
    pub re_u: f64,
    pub im_u: f64,
    pub re_w: f64,
    pub im_w: f64,
    pub v_eff: f64,
}

impl SampleRow {
    pub fn u(&self) -> C64 {
        C64::new(self.re_u, self.im_u)
    }

    pub fn w(&self) -> C64 {
        C64::new(self.re_w, self.im_w)
    }
}

/// Samples a candidate on a grid. `u` is the phase-removed wavefunction of
/// [`WavefunctionGrid::sample`]; `W` is not rescaled by the phase.
pub fn sample_rows(c: &Candidate, spec: GridSpec) -> Result<Vec<SampleRow>> {
    let grid = WavefunctionGrid::sample(c, spec)?;
    grid.samples
        .iter()
        .map(|s| {
            let z = c.frame.z_of(s.q);
            let w = superpotential(c, z).unwrap_or(C64::new(f64::NAN, f64::NAN));
            Ok(SampleRow {
                q: s.q,
                re_u: s.u.re,
                im_u: s.u.im,
                re_w: w.re,
                im_w: w.im,
                v_eff: c.system.effective_potential(s.q)?,
            })
        })
        .collect()
}

pub fn write_csv<W: Write + ?Sized>(out: &mut W, header: &[String], rows: &[SampleRow]) -> Result<()> {
    let io = |e: std::io::Error| Error::InvalidConfig(format!("write failed: {e}"));
    for line in header {
        writeln!(out, "# {line}").map_err(io)?;
    }
    writeln!(out, "# columns: {CSV_COLUMNS}").map_err(io)?;
    for r in rows {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.q, r.re_u, r.im_u, r.re_w, r.im_w, r.v_eff
        )
        .map_err(io)?;
    }
    Ok(())
}

pub fn write_jsonl<W: Write + ?Sized>(out: &mut W, rows: &[SampleRow]) -> Result<()> {
    for r in rows {
        let line = serde_json::to_string(r).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        writeln!(out, "{line}").map_err(|e| Error::InvalidConfig(format!("write failed: {e}")))?;
    }
    Ok(())
}

pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<SampleRow>> {
    input
        .lines()
        .filter(|l| !matches!(l, Ok(s) if s.trim().is_empty()))
        .map(|l| {
            let l = l.map_err(|e| Error::InvalidConfig(format!("read failed: {e}")))?;
            serde_json::from_str(&l).map_err(|e| Error::InvalidConfig(format!("bad sample row: {e}")))
        })
        .collect()
}

pub fn read_csv<R: BufRead>(input: R) -> Result<Vec<SampleRow>> {
    let mut rows = Vec::new();
    for line in input.lines() {
        let line = line.map_err(|e| Error::InvalidConfig(format!("read failed: {e}")))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::InvalidConfig(format!("bad sample row {line:?}: {e}")))?;
        if v.len() != 6 {
            return Err(Error::InvalidConfig(format!("expected 6 columns, got {}", v.len())));
        }
        rows.push(SampleRow {
            q: v[0],
            re_u: v[1],
            im_u: v[2],
            re_w: v[3],
            im_w: v[4],
            v_eff: v[5],
        });
    }
    Ok(rows)
}

/// Rebuilds a grid from sampled rows so the residual checks can be run on
/// a file artifact. The rows must be uniformly spaced.
pub fn grid_from_rows(template: &WavefunctionGrid, rows: &[SampleRow]) -> Result<WavefunctionGrid> {
    let (first, last) = match (rows.first(), rows.last()) {
        (Some(f), Some(l)) => (f.q, l.q),
        _ => return Err(Error::InvalidConfig("no sample rows".into())),
    };
    let spec = GridSpec::new(first, last, rows.len())?;
    let h = spec.step();
    if rows.windows(2).any(|w| ((w[1].q - w[0].q) - h).abs() > 1e-9 * h.max(1.0)) {
        return Err(Error::InvalidConfig("sample rows are not uniformly spaced".into()));
    }
    Ok(WavefunctionGrid {
        q_min: first,
        q_max: last,
        n: rows.len(),
        samples: rows.iter().map(|r| GridSample { q: r.q, u: r.u() }).collect(),
        ..template.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::solve_parameters;
    use crate::systems::SystemSpec;

    #[test]
    fn csv_and_jsonl_round_trip_bit_exactly() {
        let s = SystemSpec::free3d(1).unwrap();
        let c = solve_parameters(&s, 1.0).unwrap()[0];
        let rows = sample_rows(&c, GridSpec::new(0.1, 20.0, 128).unwrap()).unwrap();
        let mut buf = Vec::new();
        write_jsonl(&mut buf, &rows).unwrap();
        assert_eq!(read_jsonl(&buf[..]).unwrap(), rows);
        let mut buf = Vec::new();
        write_csv(&mut buf, &["free3d".into()], &rows).unwrap();
        assert_eq!(read_csv(&buf[..]).unwrap(), rows);
    }
}
