use std::io::Write;
use std::process::{Command, Output};

fn polmech(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polmech")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value(csv: &str, key: &str) -> String {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .find_map(|l| l.strip_prefix(&format!("{key},")))
        .unwrap_or_else(|| panic!("{key} missing from\n{csv}"))
        .to_string()
}

fn number(csv: &str, key: &str) -> f64 {
    value(csv, key).parse().unwrap()
}

fn config_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn point_inside_squeezing_window_is_entangled() {
    let o = polmech(&["point", "--variant", "two_mode", "--nbar", "0.5", "--Gpsi", "1.5"]);
    assert!(o.status.success(), "{o:?}");
    let s = stdout(&o);
    assert_eq!(value(&s, "stable"), "true");
    assert!(number(&s, "E_N(b:Psi)") > 0.0);
    assert!(number(&s, "chi(b:Psi)") < 1.0);
    assert_eq!(value(&s, "cs_violated(b:Psi)"), "true");
}

#[test]
fn point_below_two_nbar_is_still_entangled() {
    // The solved state stays entangled for every n̄ < 1 at any stable G_Ψ,
    // including G_Ψ < 2n̄γ.
    let s = stdout(&polmech(&["point", "--variant", "two_mode", "--nbar", "0.5", "--Gpsi", "0.5"]));
    assert!(number(&s, "E_N(b:Psi)") > 0.0);
    let s = stdout(&polmech(&["point", "--variant", "two_mode", "--nbar", "1.2", "--Gpsi", "1.5"]));
    assert_eq!(number(&s, "E_N(b:Psi)"), 0.0);
}

#[test]
fn zero_optomechanical_coupling_gives_thermal_report() {
    let cfg = config_file("# drive\nG0 = 0\nE_L = 1.5\nf1 = 2\nDelta_L = 0.5\nnbar = 0.4\n");
    let o = polmech(&["point", "--config", cfg.path().to_str().unwrap()]);
    assert!(o.status.success(), "{o:?}");
    let s = stdout(&o);
    assert_eq!(number(&s, "wp.q_s"), 0.0);
    assert_eq!(number(&s, "wp.G_psi"), 0.0);
    assert_eq!(number(&s, "E_N(b:Psi)"), 0.0);
    assert!((number(&s, "<b+b>") - 0.4).abs() < 1e-12);
    assert!(number(&s, "<Psi+Psi>").abs() < 1e-12);
    assert!(value(&s, "chi(b:Psi)").starts_with("undefined"));
}

#[test]
fn unstable_point_exits_with_code_3() {
    let o = polmech(&["point", "--variant", "two_mode", "--Gpsi", "2.5"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(value(&stdout(&o), "stable"), "false");
}

#[test]
fn config_errors_exit_with_code_2() {
    let bad = config_file("nbar = 0.1\nwhatever = 3\n");
    let o = polmech(&["point", "--Gpsi", "1", "--config", bad.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown key"));
    assert_eq!(polmech(&["point", "--variant", "two_colour", "--Gtheta", "1"]).status.code(), Some(2));
    assert_eq!(polmech(&["point", "--variant", "a1_a2", "--U", "3"]).status.code(), Some(2));
    let o = polmech(&["point", "--Gpsi", "1", "--nbar", "0.5", "--msq", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(polmech(&["sweep", "--figure", "fig2", "--nbar", "1"]).status.code(), Some(2));
}

#[test]
fn squeezed_bath_flag() {
    let s = stdout(&polmech(&["point", "--Gpsi", "1", "--nbar", "0.5", "--msq", "max"]));
    let eta = number(&s, "eta(b:Psi)_PsiPsi");
    assert!((eta - (0.75f64).sqrt() / 1.5).abs() < 1e-9);
    let s = stdout(&polmech(&["point", "--Gpsi", "1", "--nbar", "0.5", "--msq", "0.3,-0.2"]));
    assert_eq!(value(&s, "stable"), "true");
}

#[test]
fn figure_sweep_is_deterministic_and_row_major() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = polmech(&["sweep", "--figure", "fig2", "--grid", "12", "--out", p.to_str().unwrap()]);
        assert!(o.status.success(), "{o:?}");
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert!(text.starts_with("# polmech "));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "nbar,Gpsi,E_N");
    assert_eq!(rows.len(), 1 + 144);
    let parse = |r: &str| -> Vec<f64> { r.split(',').map(|x| x.parse().unwrap()).collect() };
    let (r1, r2, r13) = (parse(rows[1]), parse(rows[2]), parse(rows[13]));
    assert_eq!(r1[0], r2[0]);
    assert!(r2[1] > r1[1]);
    assert!(r13[0] > r1[0] && r13[1] == r1[1]);
    // 13 significant digits in scientific notation.
    let field = rows[2].split(',').nth(1).unwrap();
    assert_eq!(field.split('e').next().unwrap().replace('.', "").len(), 13);
}

#[test]
fn custom_sweep_marks_unstable_points() {
    let o = polmech(&[
        "sweep", "--variant", "two_mode", "--x", "nbar:0:1", "--y", "Gpsi:0.5:2.5", "--grid", "3",
    ]);
    assert!(o.status.success(), "{o:?}");
    let s = stdout(&o);
    let rows: Vec<&str> = s.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 10);
    assert_eq!(rows.iter().filter(|r| r.ends_with(",unstable")).count(), 3);
    let o = polmech(&[
        "sweep", "--variant", "two_colour", "--Gtheta", "1", "--x", "nbar:0:1.5", "--y", "U:0.5:5",
        "--grid", "4", "--quantity", "chi",
    ]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("nbar,U,chi"));
}

#[test]
fn fig5_region_at_low_resolution() {
    let s = stdout(&polmech(&["sweep", "--figure", "fig5", "--grid", "6"]));
    let rows: Vec<Vec<f64>> = s
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 36);
    assert!(rows.iter().all(|r| r[1] > std::f64::consts::FRAC_1_SQRT_2 && r[2] >= 0.0));
    // n̄ = 0 is entangled at every U. At n̄ = 1.5 the entangled range
    // opens only at large U.
    assert!(rows[..6].iter().all(|r| r[2] > 0.0));
    assert_eq!(rows[30][2], 0.0);
    assert!(rows[35][2] > 0.0);
}

#[test]
fn lattice_table_reports_section_numbers() {
    let o = polmech(&["lattice", "--k-max", "4"]);
    assert!(o.status.success(), "{o:?}");
    let s = stdout(&o);
    let rows: Vec<&str> = s.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "k,omega_k,f_k");
    let f1: f64 = rows[1].split(',').nth(2).unwrap().parse().unwrap();
    assert!((f1 - 1.6e8).abs() / 1.6e8 < 0.05);
    assert!(rows[2].ends_with(",decoupled"));
    let magic = config_file(&format!("angle_alpha = {}\n", (1.0f64 / 3f64.sqrt()).acos()));
    let s = stdout(&polmech(&["lattice", "--config", magic.path().to_str().unwrap()]));
    let j: f64 = s
        .lines()
        .find_map(|l| l.strip_prefix("# J_alpha = "))
        .unwrap()
        .trim_end_matches(" rad/s")
        .parse()
        .unwrap();
    assert!(j.abs() < 1e-3, "J = {j}");
}

#[test]
fn simulate_export_is_reproducible() {
    let args = [
        "simulate", "--variant", "two_mode", "--Gpsi", "1", "--nbar", "0.2", "--window", "20", "--burn-in", "5",
        "--trajectories", "100", "--seed", "9",
    ];
    let a = polmech(&args);
    assert!(a.status.success(), "{a:?}");
    assert_eq!(a.stdout, polmech(&args).stdout);
    let s = stdout(&a);
    let rows: Vec<&str> = s.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "i,j,estimate,std_err,lyapunov,z");
    assert_eq!(rows.len(), 1 + 10);
    let o = polmech(&["simulate", "--Gpsi", "1", "--trajectories", "10"]);
    assert_eq!(o.status.code(), Some(2));
    let o = polmech(&["simulate", "--Gpsi", "2.5"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn validate_rejects_tiny_grid() {
    assert_eq!(polmech(&["validate", "--grid", "2"]).status.code(), Some(2));
}
