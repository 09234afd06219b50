use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use satflow::cli::{RunManifest, MANIFEST_NAME};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn satflow(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_satflow"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("SATFLOW_THREADS", t),
        None => cmd.env_remove("SATFLOW_THREADS"),
    };
    cmd.output().expect("spawn satflow")
}

fn run_into(config: &Path, out: &Path) -> Output {
    satflow(
        &["run", config.to_str().unwrap(), "--out", out.to_str().unwrap()],
        Some("2"),
    )
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("case.toml");
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = configs().join("step-data.toml");
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert_eq!(run_into(&cfg, &a).status.code(), Some(0));
    let b_out = satflow(&["run", cfg.to_str().unwrap(), "--out", b.to_str().unwrap()], Some("1"));
    assert_eq!(b_out.status.code(), Some(0));
    for name in ["field.csv", "interface.csv", "report.txt", "config.toml"] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name} differs"
        );
    }
}

#[test]
fn manifest_lists_every_file_on_disk() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("sweep");
    let res = run_into(&configs().join("step-data-sweep.toml"), &out);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let manifest_path = out.join(MANIFEST_NAME);
    assert_eq!(
        String::from_utf8_lossy(&res.stdout).trim(),
        manifest_path.to_str().unwrap()
    );

    let plot = satflow(&["plotdata", manifest_path.to_str().unwrap()], None);
    assert_eq!(plot.status.code(), Some(0), "{}", String::from_utf8_lossy(&plot.stderr));

    let manifest = RunManifest::load(&manifest_path).unwrap();
    assert!(manifest.passed());
    let mut on_disk: Vec<String> = fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    on_disk.sort();
    assert_eq!(on_disk, manifest.files);
    for f in [
        "refinement.csv",
        "refinement.dat",
        "interface.dat",
        "scaling.dat",
        "config.toml",
    ] {
        assert!(manifest.files.iter().any(|x| x == f), "{f} missing");
    }
}

#[test]
fn rerun_replaces_previous_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let cfg = configs().join("stationary.toml");
    assert_eq!(run_into(&cfg, &out).status.code(), Some(0));
    assert_eq!(run_into(&cfg, &out).status.code(), Some(0));
    fs::write(out.join("notes.txt"), "mine").unwrap();
    assert_eq!(run_into(&cfg, &out).status.code(), Some(2));
    assert!(out.join("notes.txt").exists());
}

#[test]
fn failed_invariant_exits_one_unless_reporting() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = configs().join("optimality.toml");
    let strict = run_into(&cfg, &tmp.path().join("strict"));
    assert_eq!(strict.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&strict.stderr).contains("v-bound"));
    let report_dir = tmp.path().join("report");
    let report = satflow(
        &[
            "run",
            cfg.to_str().unwrap(),
            "--out",
            report_dir.to_str().unwrap(),
            "--check",
            "report",
        ],
        None,
    );
    assert_eq!(report.status.code(), Some(0));
    let manifest = RunManifest::load(&report_dir.join(MANIFEST_NAME)).unwrap();
    assert!(!manifest.passed());
}

#[test]
fn usage_and_config_errors_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let stationary = configs().join("stationary.toml");
    let out = tmp.path().join("x");
    let args = ["run", stationary.to_str().unwrap(), "--out", out.to_str().unwrap()];
    assert_eq!(satflow(&args, Some("zero")).status.code(), Some(2));
    assert_eq!(satflow(&args, Some("0")).status.code(), Some(2));
    assert_eq!(satflow(&["frobnicate"], None).status.code(), Some(2));
    assert_eq!(satflow(&["run", "/nonexistent.toml"], None).status.code(), Some(2));

    let unknown_key = write_config(tmp.path(), "scenario = \"stationary\"\nbogus = 1\n");
    assert_eq!(
        satflow(&["run", unknown_key.to_str().unwrap()], None).status.code(),
        Some(2)
    );
    let wrong_pair = write_config(tmp.path(), "scenario = \"collapse\"\nexperiment = \"optimality\"\n");
    assert_eq!(
        satflow(&["run", wrong_pair.to_str().unwrap()], None).status.code(),
        Some(2)
    );
    let bad_data = write_config(
        tmp.path(),
        "scenario = \"custom\"\n[data]\nlower = 1.0\nupper = 2.0\nleft = 0.5\nright = 1.0\ninitial = 0.5\n",
    );
    assert_eq!(
        satflow(
            &["run", bad_data.to_str().unwrap(), "--out", out.to_str().unwrap()],
            None
        )
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn solver_breakdown_exits_three() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "scenario = \"step-data\"\n[grid]\nnx = 101\nnt = 51\n[solver]\nnewton_max_iter = 1\nnewton_tol = 1e-14\n",
    );
    let res = satflow(
        &[
            "run",
            cfg.to_str().unwrap(),
            "--out",
            tmp.path().join("o").to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(res.status.code(), Some(3), "{}", String::from_utf8_lossy(&res.stderr));
}
