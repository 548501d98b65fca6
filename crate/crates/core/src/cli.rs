//! Command-line front end: `enumerate`, `classify`, `sample` and `verify`.
//! A thin adapter over the library; every command is reproducible by
//! calling the library with the same configuration.

use crate::ansatz::{solve_parameters, ZetaFamily};
use crate::classify::classify_system;
use crate::error::{Error, Result};
use crate::systems::{SystemName, SystemSpec};
use crate::verify::io::{sample_rows, write_csv, write_jsonl};
use crate::verify::suite::{all_cells, default_cells, run_suite, SuiteConfig};
use crate::verify::{default_grid, GridSpec, NORMALIZATION_CONVENTION};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_BAD_CONFIG: u8 = 2;
pub const EXIT_REJECTED: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "factorize",
    version,
    about = "Continuum eigenstates by single-shot factorization with confluent hypergeometric functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the candidate table (case, a, b, c, d, kind).
    Enumerate(SystemArgs),
    /// Classify every candidate; exit 1 if the verdicts differ from the reference table.
    Classify(SystemArgs),
    /// Sample an accepted solution to CSV or JSON lines.
    Sample(SampleArgs),
    /// Run the numerical verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    /// free1d, free2d, free3d, linear, hydrogen or morse.
    pub system: String,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// Wavenumber k.
    #[arg(long)]
    pub k: Option<f64>,
    /// Angular momentum l (free3d, hydrogen).
    #[arg(long)]
    pub l: Option<u32>,
    /// Azimuthal number m (free2d).
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<i32>,
    /// Slope C of the linear potential.
    #[arg(long = "C")]
    pub c: Option<f64>,
    /// Nuclear charge Z (hydrogen).
    #[arg(long = "Z")]
    pub z: Option<f64>,
    /// Length scale ã₀ (hydrogen).
    #[arg(long = "a0")]
    pub a0: Option<f64>,
    /// Well depth D (morse).
    #[arg(long = "D")]
    pub d: Option<f64>,
    /// Inverse range k₀ (morse).
    #[arg(long = "k0")]
    pub k0: Option<f64>,
    /// Reduced Planck constant (default 1).
    #[arg(long)]
    pub hbar: Option<f64>,
    /// Mass (default 1).
    #[arg(long)]
    pub mass: Option<f64>,
}

impl ParamArgs {
    fn any_set(&self) -> bool {
        self.k.is_some()
            || self.l.is_some()
            || self.m.is_some()
            || self.c.is_some()
            || self.z.is_some()
            || self.a0.is_some()
            || self.d.is_some()
            || self.k0.is_some()
            || self.hbar.is_some()
            || self.mass.is_some()
    }

    pub fn k(&self) -> f64 {
        self.k.unwrap_or(1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Case id (row of the candidate table).
    #[arg(long)]
    pub case: usize,
    /// Grid in the physical coordinate as q_min:q_max:n.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<GridSpec>,
    /// Output file (stdout when omitted).
    #[arg(short = 'o', long = "output")]
    pub output: Option<String>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// System to verify; all systems when omitted.
    pub system: Option<String>,
    /// Every system over its default cells.
    #[arg(long)]
    pub all: bool,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Replace every residual tolerance.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Include the free-particle factorization chain.
    #[arg(long)]
    pub chain: bool,
    /// Deepest chain level.
    #[arg(long, default_value_t = 6)]
    pub jmax: usize,
    /// JSON-lines report file.
    #[arg(short = 'o', long = "output")]
    pub output: Option<String>,
}

/// Builds the system from its name and flags, rejecting flags that do not
/// belong to it.
pub fn build_system(name: &str, p: &ParamArgs) -> Result<SystemSpec> {
    let name: SystemName = name.parse().map_err(|_| {
        let valid: Vec<&str> = SystemName::ALL.iter().map(|n| n.cli_name()).collect();
        Error::UnsupportedSystem(format!("{name:?}; valid systems: {}", valid.join(", ")))
    })?;
    let foreign = |flag: &str| Err(Error::InvalidConfig(format!("--{flag} does not apply to {name}")));
    let uses_l = matches!(name, SystemName::Free3D | SystemName::HydrogenContinuum);
    if p.l.is_some() && !uses_l {
        return foreign("l");
    }
    if p.m.is_some() && name != SystemName::Free2D {
        return foreign("m");
    }
    if p.c.is_some() && name != SystemName::Linear1D {
        return foreign("C");
    }
    if (p.z.is_some() || p.a0.is_some()) && name != SystemName::HydrogenContinuum {
        return foreign(if p.z.is_some() { "Z" } else { "a0" });
    }
    if (p.d.is_some() || p.k0.is_some()) && name != SystemName::Morse1D {
        return foreign(if p.d.is_some() { "D" } else { "k0" });
    }
    let spec = match name {
        SystemName::Free1D => SystemSpec::free1d(),
        SystemName::Free2D => SystemSpec::free2d(p.m.unwrap_or(0))?,
        SystemName::Free3D => SystemSpec::free3d(p.l.unwrap_or(0))?,
        SystemName::Linear1D => SystemSpec::linear(p.c.unwrap_or(1.0))?,
        SystemName::HydrogenContinuum => {
            SystemSpec::hydrogen(p.l.unwrap_or(0), p.z.unwrap_or(1.0), p.a0.unwrap_or(1.0))?
        }
        SystemName::Morse1D => SystemSpec::morse(p.d.unwrap_or(1.0), p.k0.unwrap_or(1.0))?,
    };
    let spec = spec.with_units(p.mass.unwrap_or(1.0), p.hbar.unwrap_or(1.0))?;
    spec.check_k(p.k())?;
    Ok(spec)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidConfig(_)
        | Error::UnsupportedSystem(_)
        | Error::GridTooCoarse { .. }
        | Error::Domain(_)
        | Error::OracleUnavailable(_) => EXIT_BAD_CONFIG,
        _ => EXIT_MISMATCH,
    }
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

fn describe(s: &SystemSpec, k: f64) -> String {
    let mut d = format!("system={} k={} hbar={} mass={}", s.name, k, s.hbar, s.mass);
    match s.name {
        SystemName::Free2D => d += &format!(" m={}", s.m()),
        SystemName::Free3D => d += &format!(" l={}", s.l()),
        SystemName::HydrogenContinuum => {
            d += &format!(" l={} eta={}", s.l(), s.coulomb_eta(k).unwrap_or(f64::NAN));
        }
        SystemName::Linear1D => d += &format!(" k0={}", s.k0().unwrap_or(f64::NAN)),
        SystemName::Morse1D => {
            d += &format!(" xi={} eta={}", s.xi().unwrap_or(f64::NAN), s.eta(k).unwrap_or(f64::NAN));
        }
        SystemName::Free1D => {}
    }
    d
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidConfig(format!("i/o error: {e}"))
}

fn cmd_enumerate(a: &SystemArgs, out: &mut dyn Write) -> Result<u8> {
    let s = build_system(&a.system, &a.params)?;
    let k = a.params.k();
    writeln!(out, "# {}", describe(&s, k)).map_err(io_err)?;
    writeln!(out, "{:>4}  {:<24} {:<24} {:<24} {:>6}  {}", "case", "a", "b", "c", "d", "kind").map_err(io_err)?;
    for c in solve_parameters(&s, k)? {
        let d = match c.zeta.family {
            ZetaFamily::Power => format!("{}", c.zeta.d),
            _ => "-".into(),
        };
        writeln!(
            out,
            "{:>4}  {:<24} {:<24} {:<24} {:>6}  {}",
            c.case_id,
            fmt_c(c.params.a),
            fmt_c(c.params.b),
            fmt_c(c.zeta.c),
            d,
            c.kind.symbol()
        )
        .map_err(io_err)?;
    }
    Ok(EXIT_PASS)
}

fn cmd_classify(a: &SystemArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8> {
    let s = build_system(&a.system, &a.params)?;
    let k = a.params.k();
    let result = classify_system(&s, k)?;
    let table = crate::systems::expected_verdicts(&s, k);
    writeln!(out, "# {}", describe(&s, k)).map_err(io_err)?;
    writeln!(out, "{:>4}  {:<4} {:<28} {:<28} {}", "case", "kind", "verdict", "reference", "max|Im W|").map_err(io_err)?;
    for (v, row) in result.verdicts.iter().zip(&table.rows) {
        writeln!(
            out,
            "{:>4}  {:<4} {:<28} {:<28} {:.3e}",
            v.case_id,
            v.kind.symbol(),
            v.status.to_string(),
            row.expected.to_string(),
            v.evidence.max_im_w
        )
        .map_err(io_err)?;
    }
    if result.matches_table() {
        return Ok(EXIT_PASS);
    }
    for m in &result.mismatches {
        writeln!(err, "case {}: reference {}, computed {}", m.case_id, m.expected, m.actual).map_err(io_err)?;
    }
    Ok(EXIT_MISMATCH)
}

fn cmd_sample(a: &SampleArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8> {
    let s = build_system(&a.system.system, &a.system.params)?;
    let k = a.system.params.k();
    let candidates = solve_parameters(&s, k)?;
    let Some(c) = candidates.iter().find(|c| c.case_id == a.case) else {
        return Err(Error::InvalidConfig(format!(
            "case {} does not exist; {} has cases 1..={}",
            a.case,
            s.name,
            candidates.len()
        )));
    };
    let verdict = crate::classify::classify(c)?;
    if !verdict.status.is_accepted() {
        writeln!(err, "case {} is rejected: {} ({})", a.case, verdict.status.reason(), verdict.status)
            .map_err(io_err)?;
        return Ok(EXIT_REJECTED);
    }
    let grid = a.grid.unwrap_or_else(|| default_grid(&s, k));
    let rows = sample_rows(c, grid)?;
    let mut file;
    let sink: &mut dyn Write = match &a.output {
        Some(path) => {
            file = BufWriter::new(File::create(path).map_err(io_err)?);
            &mut file
        }
        None => out,
    };
    match a.format {
        Format::Csv => {
            let header = vec![
                describe(&s, k),
                format!("case={} kind={} energy={:.17e}", a.case, c.kind.symbol(), s.energy(k)),
                format!("grid={}:{}:{} frame z = kappa*q + alpha, kappa={} alpha={}", grid.q_min, grid.q_max, grid.n, c.frame.scale(), c.frame.alpha),
                format!("normalization: {NORMALIZATION_CONVENTION}; W in units of the frame coordinate"),
            ];
            write_csv(sink, &header, &rows)?
        }
        Format::Jsonl => write_jsonl(sink, &rows)?,
    }
    sink.flush().map_err(io_err)?;
    Ok(EXIT_PASS)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<u8> {
    let cells = match (&a.system, a.all) {
        (Some(_), true) => return Err(Error::InvalidConfig("give a system or --all, not both".into())),
        (None, _) => {
            if a.params.any_set() {
                return Err(Error::InvalidConfig("system parameters need a system name".into()));
            }
            all_cells()
        }
        (Some(name), false) if a.params.any_set() => {
            let s = build_system(name, &a.params)?;
            vec![(s, a.params.k())]
        }
        (Some(name), false) => {
            let s = build_system(name, &a.params)?;
            default_cells(s.name)
        }
    };
    if let Some(t) = a.tolerance {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidConfig(format!("tolerance must be positive, got {t}")));
        }
    }
    if a.jmax > 6 {
        return Err(Error::InvalidConfig(format!("--jmax {} exceeds 6", a.jmax)));
    }
    let mut cfg = SuiteConfig::new(cells);
    cfg.tolerance = a.tolerance;
    cfg.chain = a.chain;
    cfg.jmax = a.jmax;
    let report = run_suite(&cfg);
    if let Some(path) = &a.output {
        let mut f = BufWriter::new(File::create(path).map_err(io_err)?);
        report.write_jsonl(&mut f)?;
        f.flush().map_err(io_err)?;
    }
    write!(out, "{}", report.table()).map_err(io_err)?;
    Ok(if report.all_passed() { EXIT_PASS } else { EXIT_MISMATCH })
}

/// Parses `args` (including the program name) and runs the command,
/// writing to the given streams. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_BAD_CONFIG } else { EXIT_PASS };
        }
    };
    let result = match &cli.command {
        Command::Enumerate(a) => cmd_enumerate(a, out),
        Command::Classify(a) => cmd_classify(a, out, err),
        Command::Sample(a) => cmd_sample(a, out, err),
        Command::Verify(a) => cmd_verify(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
