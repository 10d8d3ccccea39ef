use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rotor-chain")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_lines(csv: &str) -> Vec<&str> {
    csv.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn two_molecule_table() {
    let o = run(&["two-molecule", "--v", "0.1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let l0 = data_lines(&out).into_iter().find(|l| l.starts_with("L_psi0_minus,")).unwrap();
    let value: f64 = l0.split(',').nth(1).unwrap().parse().unwrap();
    assert!((value - 1.0).abs() < 1e-9);
    let mix = data_lines(&out).into_iter().find(|l| l.starts_with("L_psi1_minus_mixture,")).unwrap();
    let value: f64 = mix.split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(format!("{value:.2}"), "0.77");
}

#[test]
fn spectrum_single_field() {
    let o = run(&["spectrum", "--ez", "0"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines = data_lines(&out);
    assert_eq!(lines[0], "e_z,subspace_label,level_index,energy");
    assert_eq!(lines.len() - 1, 1 + 2 * 50);
    for key in ["n_molecules", "v_dip", "b_rot", "e_z_grid"] {
        assert!(out.lines().any(|l| l.starts_with(&format!("# {key} = "))), "missing {key}");
    }
}

#[test]
fn byte_identical_reruns_and_file_output() {
    let args = ["pairwise-scan", "--n", "12", "--ez-max", "10", "--ez-steps", "15", "--d", "1,3", "--p", "1,6"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let mut with_out: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    with_out.extend(["--out", p]);
    let c = run(&with_out);
    assert!(c.status.success());
    assert!(c.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(data_lines(&written), data_lines(&stdout(&a)));
    // every float carries 17 significant digits
    let first = data_lines(&written)[1].split(',').next().unwrap().to_string();
    assert_eq!(first, "0.0000000000000000e0");
}

#[test]
fn json_output_parses() {
    let o = run(&["thermal-map", "--n", "4", "--p", "2", "--t-steps", "2", "--ez-max", "2", "--ez-steps", "2", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["header"][2], "observable_name");
    assert_eq!(v["rows"].as_array().unwrap().len(), 2 * 2 * 2);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, "experiment = \"crossing\"\nn = 8\nv = 0.1\nez_min = 0.0\nez_max = 20.0\n").unwrap();
    let o = run(&["crossing", "--config", path.to_str().unwrap(), "--n", "10"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let row = data_lines(&out)[1].to_string();
    assert!(row.starts_with("10,"), "{row}");
}

#[test]
fn physical_units_are_echoed_both_ways() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("krb.toml");
    std::fs::write(
        &path,
        "experiment = \"two-molecule\"\n[physical]\ndipole_debye = 1.2\nb_ghz = 10.0\nr_nm = 5.0\nfield_v_per_m = 0.0\n",
    )
    .unwrap();
    let o = run(&["two-molecule", "--config", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("# dipole_debye = 1.2"));
    let v: f64 = out.lines().find_map(|l| l.strip_prefix("# v_dip = ")).unwrap().parse().unwrap();
    assert!((v - 0.1739).abs() < 1e-3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "experiment = \"spectrum\"\nexz = 3.0\n").unwrap();
    let o = run(&["spectrum", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exz"));

    assert_eq!(run(&["spectrum", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["spectrum", "--ez-min", "5", "--ez-max", "1"]).status.code(), Some(1));
    assert_eq!(run(&["spectrum", "--out", "/no/such/dir/x.csv"]).status.code(), Some(1));

    let o = run(&["validate", "--n", "6"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    assert_eq!(run(&["crossing", "--n", "10", "--ez-min", "15", "--ez-max", "20"]).status.code(), Some(2));

    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
