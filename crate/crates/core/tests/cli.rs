use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use roughdep::solver::read_checkpoint;

fn roughdep(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_roughdep"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(str::to_owned).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(str::to_owned).collect())
        .collect();
    (header, rows)
}

fn column(path: &Path, name: &str) -> Vec<f64> {
    let (header, rows) = csv_rows(path);
    let i = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn simulate_zero_duration_writes_one_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let o = roughdep(
        dir.path(),
        &["simulate", "--override", "t_end=0.0", "--override", "k_max=8"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let ckpts: Vec<_> = fs::read_dir(dir.path().join("checkpoints")).unwrap().collect();
    assert_eq!(ckpts.len(), 1);
    let path = ckpts[0].as_ref().unwrap().path();
    let (state, re) = read_checkpoint(fs::File::open(path).unwrap()).unwrap();
    assert_eq!(state.t, 0.0);
    assert_eq!(state.omega.k_max(), 8);
    assert_eq!(re.to_f64(), 1000.0);
    assert_eq!(column(&dir.path().join("diagnostics.csv"), "t"), vec![0.0]);
}

#[test]
fn simulate_exact_family_tracks_the_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let o = roughdep(
        dir.path(),
        &[
            "simulate",
            "--override", "initial=exact-family",
            "--override", "k_max=16",
            "--override", "reynolds=100.0",
            "--override", "sigma=0.5",
            "--override", "dt=1e-3",
            "--override", "t_end=0.2",
            "--override", "checkpoint_interval=50",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let errs = column(&dir.path().join("diagnostics.csv"), "oracle_max_error");
    assert_eq!(errs.len(), 5);
    assert!(errs.iter().all(|&e| e < 1e-12), "{errs:?}");
}

#[test]
fn unknown_key_is_a_configuration_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = roughdep(dir.path(), &["simulate", "--override", "k_mxa=8"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("k_mxa"), "{}", stderr(&o));

    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "dt = 0.01\nbogus = 1\n").unwrap();
    let o = roughdep(dir.path(), &["tangent", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bogus"));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = roughdep(dir.path(), &["oracle", "poiseuille"]);
    assert_eq!(o.status.code(), Some(2));
    let msg = stderr(&o);
    for valid in ["trivial", "couette", "exact-family"] {
        assert!(msg.contains(valid), "{msg}");
    }
    let o = roughdep(dir.path(), &["no-such-command"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tangent_on_trivial_base() {
    let dir = tempfile::tempdir().unwrap();
    let o = roughdep(
        dir.path(),
        &[
            "tangent",
            "--override", "k_max=8",
            "--override", "reynolds=100.0",
            "--override", "dt=0.01",
            "--override", "t_end=0.5",
            "--override", "samples=5",
            "--override", "perturbation_cutoff=1.0",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    // cutoff 1 leaves only |k| = 1 modes: pure heat decay e^{-t/Re}
    let growth = dir.path().join("growth.csv");
    let t = column(&growth, "t");
    let l0 = column(&growth, "Lambda_0");
    for (t, l) in t.iter().zip(&l0) {
        assert!((l - (-t / 100.0f64).exp()).abs() < 1e-12);
    }

    let o = roughdep(
        dir.path(),
        &[
            "tangent",
            "--override", "k_max=8",
            "--override", "reynolds=100.0",
            "--override", "dt=0.01",
            "--override", "t_end=0.5",
            "--override", "perturbation_cutoff=4.0",
            "--override", "remainder_eps=[1e-3, 1e-4]",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let rem = column(&dir.path().join("remainder.csv"), "remainder_over_eps2");
    assert_eq!(rem.len(), 2);
    assert!((rem[0] / rem[1] - 1.0).abs() < 0.1, "{rem:?}");

    let inviscid = tempfile::tempdir().unwrap();
    let o = roughdep(
        inviscid.path(),
        &["tangent", "--override", "k_max=8", "--override", "reynolds=inf", "--override", "samples=4"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    for l in column(&inviscid.path().join("growth.csv"), "Lambda_3") {
        assert!((l - 1.0).abs() < 1e-14);
    }
}

#[test]
fn tangent_trajectory_base_needs_a_path() {
    let dir = tempfile::tempdir().unwrap();
    let o = roughdep(dir.path(), &["tangent", "--override", "base=trajectory"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("base_path"));

    let o = roughdep(
        dir.path(),
        &["tangent", "--override", "base=trajectory", "--override", "base_path=/nonexistent/run"],
    );
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn tangent_along_a_simulated_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let sim = dir.path().join("sim");
    let o = roughdep(
        &sim,
        &["simulate", "--override", "k_max=8", "--override", "t_end=0.2", "--override", "dt=0.01"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let tan = dir.path().join("tan");
    let base_path = format!("base_path={}", sim.join("checkpoints").display());
    let o = roughdep(
        &tan,
        &[
            "tangent",
            "--override", "k_max=8",
            "--override", "dt=0.01",
            "--override", "t_end=0.2",
            "--override", "samples=4",
            "--override", "base=trajectory",
            "--override", &base_path,
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let l = column(&tan.join("growth.csv"), "Lambda_3");
    assert_eq!(l.len(), 5);
    assert_eq!(l[0], 1.0);

    // trajectory ends at 0.2
    let o = roughdep(
        &tan,
        &[
            "tangent",
            "--override", "k_max=8",
            "--override", "t_end=0.5",
            "--override", "base=trajectory",
            "--override", &base_path,
        ],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn theorem_scan_borderline_grows_logarithmically() {
    let dir = tempfile::tempdir().unwrap();
    let o = roughdep(dir.path(), &["theorem-scan", "--override", "k_list=[8, 16, 32]"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let inc = column(&dir.path().join("scan.csv"), "norm_total");
    assert_eq!(inc.len(), 3);
    assert!(inc[2] > inc[1] && inc[1] > inc[0]);
    let (_, rows) = csv_rows(&dir.path().join("scan.csv"));
    assert_eq!(rows[0][2], "");
}

#[test]
fn oracles_write_their_tables() {
    let dir = tempfile::tempdir().unwrap();
    let o = roughdep(dir.path(), &["oracle", "trivial"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let err = column(&dir.path().join("trivial.csv"), "max_coeff_error");
    assert!(err.iter().all(|&e| e < 1e-12));

    let o = roughdep(dir.path(), &["oracle", "couette"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let fitted = column(&dir.path().join("couette_fit.csv"), "fitted_exponent");
    assert!((fitted[0] - 1.0).abs() <= 0.05 && (fitted[1] - 2.0).abs() <= 0.05, "{fitted:?}");

    let o = roughdep(dir.path(), &["oracle", "exact-family"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("exact_family.csv").exists());
}

#[test]
fn fit_reads_csv_columns() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("growth.csv");
    let mut text = String::from("t,Lambda_3\n");
    for i in 1..=20 {
        let t = i as f64 * 0.05;
        text.push_str(&format!("{t},{}\n", (3.0 * t.sqrt()).exp()));
    }
    fs::write(&data, text).unwrap();
    let o = roughdep(
        dir.path(),
        &["fit", "--input", data.to_str().unwrap(), "--model", "sqrt_exp"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let fit: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("fit.json")).unwrap()).unwrap();
    let sigma = fit["params"]["sigma"].as_f64().unwrap();
    assert!((sigma - 3.0).abs() < 1e-10, "{fit}");

    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "t,Lambda_3\n").unwrap();
    let o = roughdep(dir.path(), &["fit", "--input", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn manifest_reruns_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a");
    let o = roughdep(
        &first,
        &["simulate", "--seed", "7", "--override", "k_max=8", "--override", "t_end=0.1"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let manifest = first.join("manifest.toml");
    let text = fs::read_to_string(&manifest).unwrap();
    assert!(text.starts_with("# roughdep simulate\n"));
    assert!(text.contains("seed = 7"));

    let second = dir.path().join("b");
    let o = roughdep(&second, &["simulate", "--config", manifest.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    for name in ["diagnostics.csv", "manifest.toml", "checkpoints/ckpt_000001.rdf"] {
        assert_eq!(
            fs::read(first.join(name)).unwrap(),
            fs::read(second.join(name)).unwrap(),
            "{name} differs"
        );
    }
}
