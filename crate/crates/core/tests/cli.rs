//! Output formats of the command-line tool.

use std::process::Command;

use laplace_deconv::harness::output::csv_body;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_laplace-deconv"))
}

fn smoke_config() -> &'static str {
    concat!(env!("CARGO_MANIFEST_DIR"), "/configs/smoke.toml")
}

fn header(text: &str) -> String {
    csv_body(text)
        .lines()
        .next()
        .unwrap_or_default()
        .to_string()
}

#[test]
fn noise_eigs_columns() {
    let out = bin()
        .args(["noise", "eigs", "--alpha", "0.5", "--n", "256,512,1024"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# rng: "));
    let body = csv_body(&text);
    let lines: Vec<&str> = body.lines().collect();
    assert_eq!(lines[0], "n,lambda_min,lambda_max,fitted_slope");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("256,"));
}

#[test]
fn kernels_check_lists_every_condition() {
    let out = bin()
        .args(["kernels", "check", "--Lmax", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let body = csv_body(&String::from_utf8(out.stdout).unwrap());
    // L = 1, 2, 3 have 1 + 4 + 9 moment conditions.
    assert_eq!(body.lines().count(), 1 + 14);
}

#[test]
fn simulate_writes_data_estimate_and_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.csv");
    let status = bin()
        .args([
            "simulate",
            "--config",
            smoke_config(),
            "--seed",
            "5",
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let data = std::fs::read_to_string(&out).unwrap();
    assert!(data.contains("# seed: 5\n"));
    assert!(data.contains("# config_sha256: "));
    assert_eq!(header(&data), "i,t,y,q");
    let estimate = std::fs::read_to_string(dir.path().join("run_estimate.csv")).unwrap();
    assert_eq!(header(&estimate), "t,f_true,f_hat,q0_hat,q1_hat");
    let lepski = std::fs::read_to_string(dir.path().join("run_lepski.csv")).unwrap();
    assert_eq!(
        header(&lepski),
        "j,lambda,lambda_prime,stat,threshold,accepted"
    );
}

#[test]
fn studies_write_their_tables() {
    let dir = tempfile::tempdir().unwrap();
    let rate = dir.path().join("rate");
    let lepski = dir.path().join("lepski");
    for (cmd, out) in [("rate-study", &rate), ("lepski-study", &lepski)] {
        let status = bin()
            .args([
                cmd,
                "--config",
                smoke_config(),
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success(), "{cmd}");
    }
    for name in [
        "rate_study.csv",
        "rate_fits.csv",
        "alpha_monotonicity.csv",
        "decomposition.csv",
    ] {
        assert!(rate.join(name).is_file(), "{name}");
    }
    for name in ["lepski_tail.csv", "lepski_oracle.csv"] {
        assert!(lepski.join(name).is_file(), "{name}");
    }
}

#[test]
fn bad_config_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "seed = 1\nunknown_key = 3\n").unwrap();
    let out = bin()
        .args([
            "simulate",
            "--config",
            cfg.to_str().unwrap(),
            "--seed",
            "1",
            "--out",
            "x.csv",
        ])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
}
