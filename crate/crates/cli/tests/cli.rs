use std::path::Path;
use std::process::{Command, Output};

fn polaron(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polaron"))
        .args(args)
        .output()
        .unwrap()
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

/// Data row of a one-row bounds CSV, keyed by column name.
fn csv_row(path: &Path) -> Vec<(String, String)> {
    let contents = std::fs::read_to_string(path).unwrap();
    let mut lines = contents.lines();
    let header = lines.next().unwrap().split(',').map(String::from);
    let row = lines.next().unwrap().split(',').map(String::from);
    header.zip(row).collect()
}

fn field<'a>(row: &'a [(String, String)], key: &str) -> &'a str {
    &row.iter().find(|(k, _)| k == key).unwrap().1
}

#[test]
fn repulsive_example_has_thm3_and_mean_field_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = polaron(&[
        "bounds", "--alpha", "1", "--U", "2", "--N", "1", "--out", out,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", text(&o.stderr));
    let row = csv_row(&dir.path().join("bounds.csv"));
    assert_eq!(field(&row, "regime"), "physical");
    assert_eq!(field(&row, "upper_thm4"), "-1");
    assert_eq!(field(&row, "upper_thm1"), "");
    assert_eq!(field(&row, "lower_thm2"), "");
    let thm3: f64 = field(&row, "lower_thm3").parse().unwrap();
    let main_a: f64 = field(&row, "lower_mainA").parse().unwrap();
    assert!(thm3 < -1.0 && main_a < 0.0);
    assert!(
        text(&o.stderr).is_empty(),
        "no C_G warning outside the attractive regime"
    );
}

#[test]
fn attractive_example_has_thm1_and_thm2_but_no_thm3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = polaron(&[
        "bounds", "--alpha", "1", "--U", "1", "--N", "10", "--out", out,
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(text(&o.stderr).contains("placeholder"));
    let row = csv_row(&dir.path().join("bounds.csv"));
    assert_eq!(field(&row, "regime"), "unphysical");
    assert_eq!(field(&row, "upper_thm4"), "-10");
    assert_eq!(field(&row, "lower_thm3"), "");
    assert_eq!(field(&row, "lower_mainA"), "");
    let thm1: f64 = field(&row, "upper_thm1").parse().unwrap();
    let thm2: f64 = field(&row, "lower_thm2").parse().unwrap();
    assert!(thm2 <= thm1 && thm1 <= 0.0);
    assert!(dir.path().join("bounds.txt").exists());
}

#[test]
fn zero_coupling_gives_zero_mean_field_bound() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = polaron(&[
        "bounds", "--alpha", "0", "--U", "0", "--N", "5", "--out", out,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let row = csv_row(&dir.path().join("bounds.csv"));
    assert_eq!(field(&row, "upper_thm4"), "0");
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# comment\nalpha = 1\nbogus\n").unwrap();
    let o = polaron(&["config", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(text(&o.stderr).contains("run.cfg:3"));

    for args in [
        &["bounds", "--set", "no_such_key=1"][..],
        &["bounds", "--alpha", "-1"],
        &["bounds", "--N", "0"],
        &["bounds", "--mu", "2"],
        &["verify", "--inject-fault", "unknown"],
        &["bounds", "--set", "missing-equals"],
        &["frobnicate"],
    ] {
        let o = polaron(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", text(&o.stderr));
    }
}

#[test]
fn config_file_and_flags_layer_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "alpha = 0.25\nU = 3\nseed = 9\n").unwrap();
    let path = cfg.to_str().unwrap();
    let o = polaron(&["config", "--config", path, "--set", "U=5", "--seed", "11"]);
    assert_eq!(o.status.code(), Some(0));
    let shown = text(&o.stdout);
    assert!(shown.contains("alpha = 0.25"));
    assert!(shown.contains("U = 5"));
    assert!(shown.contains("seed = 11"));
}

#[test]
fn empty_sweep_range_is_rejected_before_any_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep");
    let args = [
        "sweep",
        "--set",
        "sweep_n_min=10",
        "--set",
        "sweep_n_max=5",
        "--out",
        out.to_str().unwrap(),
    ];
    let o = polaron(&args);
    assert_eq!(o.status.code(), Some(2));
    assert!(text(&o.stderr).contains("empty N-range"));
    assert!(!out.exists());
}

#[test]
fn sweep_is_reproducible_and_writes_its_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let args = ["sweep", "--set", "sweep_n_points=5", "--out", out];
    let first = polaron(&args);
    assert_eq!(first.status.code(), Some(0), "{}", text(&first.stderr));
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let phase = std::fs::read(dir.path().join("phase.svg")).unwrap();
    // 3 alphas x 2 Us x 5 N values, plus the header
    assert_eq!(csv.lines().count(), 31);
    assert!(dir.path().join("slopes.csv").exists());
    assert!(dir.path().join("loglog_01.svg").exists());

    let second = polaron(&args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(
        csv,
        std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap()
    );
    assert_eq!(phase, std::fs::read(dir.path().join("phase.svg")).unwrap());
}

#[test]
fn unconverged_gradient_solver_fails_the_ptf_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = polaron(&["ptf", "--set", "gradient_max_iters=0", "--out", out]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!text(&o.stderr).is_empty());
}

#[test]
fn constants_table_lists_the_closed_forms() {
    let o = polaron(&["constants"]);
    assert_eq!(o.status.code(), Some(0));
    let table = text(&o.stdout);
    for name in [
        "c_0",
        "I_inf",
        "e_Lambda(100)",
        "c_mu(37/31)",
        "a_mu(1)",
        "E_PTF (shooting)",
    ] {
        assert!(table.contains(name), "{name} missing");
    }
}
