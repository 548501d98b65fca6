use factorize::ansatz::solve_parameters;
use factorize::systems::SystemSpec;
use factorize::verify::io::{grid_from_rows, read_csv, read_jsonl, sample_rows};
use factorize::verify::suite::CheckRecord;
use factorize::verify::{schrodinger_residual, GridSpec, WavefunctionGrid, SCHRODINGER_TOL};
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_factorize")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#') && !l.starts_with("case")).collect()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("factorize-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const FREE1D_TABLE: &str = "\
# system=free1d k=1 hbar=1 mass=1
case  a                        b                        c                             d  kind
   1  0.000000+0.000000i       0.000000+0.000000i       0.000000+2.000000i            -  M~
   2  0.000000+0.000000i       0.000000+0.000000i       0.000000+2.000000i            -  U
   3  1.000000+0.000000i       2.000000+0.000000i       0.000000+2.000000i            -  M
   4  1.000000+0.000000i       2.000000+0.000000i       0.000000+2.000000i            -  U
";

#[test]
fn enumerate_free1d_golden() {
    let o = run(&["enumerate", "free1d"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), FREE1D_TABLE);
}

#[test]
fn enumerate_morse_reports_xi_and_eta() {
    let o = run(&["enumerate", "morse", "--D", "1", "--k0", "1", "--k", "0.9"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(data_rows(&out).len(), 8);
    let header = out.lines().next().unwrap();
    assert!(header.contains(&format!("xi={}", 2f64.sqrt())), "{header}");
    assert!(header.contains("eta=0.9"), "{header}");
}

#[test]
fn enumerate_unknown_system_lists_valid_names() {
    let o = run(&["enumerate", "nosuch"]);
    assert_eq!(code(&o), 2);
    let err = stderr(&o);
    for name in ["free1d", "free2d", "free3d", "linear", "hydrogen", "morse"] {
        assert!(err.contains(name), "{err}");
    }
}

#[test]
fn bad_configurations_exit_two() {
    assert_eq!(code(&run(&["enumerate", "free1d", "--l", "2"])), 2);
    assert_eq!(code(&run(&["enumerate", "free3d", "--l", "21"])), 2);
    assert_eq!(code(&run(&["enumerate", "linear", "--C", "-1"])), 2);
    assert_eq!(code(&run(&["enumerate", "free1d", "--k", "-1"])), 2);
    assert_eq!(code(&run(&["sample", "free1d", "--case", "3", "--grid", "0:1:10"])), 2);
    assert_eq!(code(&run(&["sample", "free1d", "--case", "9"])), 2);
    assert_eq!(code(&run(&["verify", "--tolerance", "0"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

fn verdict_column(out: &str) -> Vec<(usize, String)> {
    data_rows(out)
        .iter()
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            (f[0].parse().unwrap(), f[2].to_string())
        })
        .collect()
}

#[test]
fn classify_hydrogen_flags_only_the_reference_conflict() {
    let o = run(&["classify", "hydrogen", "--Z", "1", "--l", "2", "--k", "0.7"]);
    let verdicts = verdict_column(&stdout(&o));
    assert_eq!(verdicts[0], (1, "Accepted".to_string()));
    assert_eq!(verdicts[2], (3, "Accepted".to_string()));
    // Rows 5 and 7 are the regular solution in disguise; the reference
    // table rejects them, so the command reports the mismatch and exits 1.
    assert_eq!(code(&o), 1);
    let err = stderr(&o);
    assert!(err.contains("case 5:") && err.contains("case 7:"), "{err}");
    assert_eq!(err.lines().count(), 2, "{err}");
}

#[test]
fn classify_linear_accepts_cases_3_and_7() {
    let o = run(&["classify", "linear", "--C", "1", "--k", "1.3"]);
    assert_eq!(code(&o), 0);
    let accepted: Vec<usize> = verdict_column(&stdout(&o))
        .into_iter()
        .filter(|(_, v)| v == "Accepted")
        .map(|(c, _)| c)
        .collect();
    assert_eq!(accepted, vec![3, 7]);
}

#[test]
fn classify_free2d_negative_m() {
    let o = run(&["classify", "free2d", "--m", "-2", "--k", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(verdict_column(&stdout(&o))[0], (1, "Accepted".to_string()));
}

#[test]
fn classify_is_unit_independent() {
    let o = run(&["classify", "free3d", "--l", "3", "--k", "0.8", "--hbar", "2", "--mass", "3"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn sample_free3d_csv() {
    let path = scratch("free3d.csv");
    let o = run(&[
        "sample", "free3d", "--l", "1", "--k", "1", "--case", "1", "--grid", "0.1:20:2048", "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().any(|l| l == "# columns: q,re_u,im_u,re_w,im_w,v_eff"));
    let rows = read_csv(text.as_bytes()).unwrap();
    assert_eq!(rows.len(), 2048);
    let peak = rows.iter().map(|r| r.u().norm()).fold(0.0, f64::max);
    assert!(rows.iter().all(|r| r.im_u.abs() < 1e-10 * peak));

    // The artifact is a valid input to the residual checks.
    let s = SystemSpec::free3d(1).unwrap();
    let c = solve_parameters(&s, 1.0).unwrap()[0];
    let template = WavefunctionGrid::sample(&c, GridSpec::new(0.1, 20.0, 2048).unwrap()).unwrap();
    let g = grid_from_rows(&template, &rows).unwrap();
    assert!(schrodinger_residual(&g, SCHRODINGER_TOL).unwrap().passed);
}

#[test]
fn sample_jsonl_round_trips_bit_exactly() {
    let path = scratch("linear.jsonl");
    let o = run(&[
        "sample", "linear", "--C", "1", "--k", "1.3", "--case", "7", "--format", "jsonl", "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = read_jsonl(std::fs::read(&path).unwrap().as_slice()).unwrap();
    let s = SystemSpec::linear(1.0).unwrap();
    let c = solve_parameters(&s, 1.3).unwrap()[6];
    let expected = sample_rows(&c, factorize::verify::default_grid(&s, 1.3)).unwrap();
    assert_eq!(rows, expected);
}

#[test]
fn sampling_a_rejected_case_exits_three() {
    let o = run(&["sample", "free2d", "--m", "1", "--k", "1", "--case", "2"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("Imaginary Superpotential"), "{}", stderr(&o));
    let o = run(&["sample", "morse", "--k", "0.9", "--case", "1"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("Diverges at Infinity"), "{}", stderr(&o));
}

#[test]
fn verify_free1d_chain_block() {
    let path = scratch("report.jsonl");
    let o = run(&["verify", "free1d", "--chain", "--jmax", "6", "-o", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    for j in 1..=6 {
        assert!(out.contains(&format!("ladder_chain_j{j}")));
    }
    let records: Vec<CheckRecord> = std::fs::read_to_string(&path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert!(records.iter().all(|r| r.passed));
    assert!(records.iter().any(|r| r.check == "ladder_chain_j6"));
}

#[test]
fn verify_unreachable_tolerance_exits_one() {
    let o = run(&["verify", "free1d", "--tolerance", "1e-20"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn verify_single_cell_from_flags() {
    let o = run(&["verify", "hydrogen", "--l", "3", "--k", "0.55"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| !l.starts_with("hydrogen") || l.contains(" 0.550 ")));
}
