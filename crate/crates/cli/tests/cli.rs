use std::process::{Command, Output};

use ostro_cli::AuditReport;

fn ostro(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ostro"))
        .args(args)
        .env_remove("OSTRO_MAX_DEPTH")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn cf_reports_period_and_unit() {
    let out = ostro(&["cf", "--d", "3", "--depth", "10"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("period = [1,2]"), "{text}");
    assert!(text.contains("m = 2"));
    assert!(text.contains("U = 2+1*sqrt(3)"));

    let json: serde_json::Value =
        serde_json::from_slice(&ostro(&["--format", "json", "cf", "--d", "7/2"]).stdout).unwrap();
    assert_eq!(json["a0"], "1");
    assert_eq!(json["period"].as_array().unwrap().last().unwrap(), 2);
}

#[test]
fn bad_radicands_exit_2() {
    for d in ["9/4", "0", "-3", "x"] {
        let out = ostro(&["cf", "--d", d]);
        assert_eq!(code(&out), 2, "d = {d}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
}

#[test]
fn encode_and_decode() {
    assert_eq!(
        stdout(&ostro(&["encode", "--d", "3", "5"])).trim(),
        "0,1,0,1@d=3"
    );
    assert_eq!(stdout(&ostro(&["decode", "0,1,0,1@d=3"])).trim(), "5");
    assert_eq!(
        stdout(&ostro(&["decode", "0,1,0,1", "--d", "2"])).trim(),
        "14"
    );
    assert_eq!(stdout(&ostro(&["decode", ""])).trim(), "0");
    assert_eq!(code(&ostro(&["decode", "1,0@d=3", "--d", "2"])), 2);
    assert_eq!(code(&ostro(&["decode", "1"])), 2);
    assert_eq!(code(&ostro(&["encode", "--d", "3", "--", "-1"])), 4);
}

#[test]
fn invalid_digit_strings_exit_2() {
    // For d = 3 the partial quotients are 1, 2, 1, 2, ... so a 1 may not follow a 2.
    assert_eq!(code(&ostro(&["decode", "2@d=3"])), 2);
    assert_eq!(code(&ostro(&["decode", "0,2,1@d=3"])), 2);
}

#[test]
fn depth_cap_is_honoured() {
    let out = Command::new(env!("CARGO_BIN_EXE_ostro"))
        .args(["encode", "--d", "2", "100000"])
        .env("OSTRO_MAX_DEPTH", "5")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
    let out = Command::new(env!("CARGO_BIN_EXE_ostro"))
        .args(["encode", "--d", "2", "100000"])
        .env("OSTRO_MAX_DEPTH", "deep")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn mul_is_exact_on_integers() {
    let text = stdout(&ostro(&["mul", "--d", "3", "--x", "5"]));
    assert!(text.contains("value = 0+5*sqrt(3)"), "{text}");
    assert!(text.contains("decimal = 8.66025403784"));

    let json: serde_json::Value = serde_json::from_slice(
        &ostro(&[
            "--format", "json", "mul", "--d", "2", "--x", "1/3", "--eps", "1e-6",
        ])
        .stdout,
    )
    .unwrap();
    assert_eq!(json["integer_part"], "0");
    assert!(json["decimal"].as_str().unwrap().starts_with("0.47140"));
    assert_eq!(
        code(&ostro(&["mul", "--d", "2", "--x", "1", "--eps", "0"])),
        4
    );
}

#[test]
fn constants_for_three() {
    let text = stdout(&ostro(&["constants", "--d", "3"]));
    assert!(text.contains("v = (2/3, 1/3)"), "{text}");
    assert!(text.contains("w = (-1/3, -1/3)"));
    assert!(text.contains("norm = -1"));
}

#[test]
fn audit_json_shows_printed_witness() {
    let out = ostro(&["--format", "json", "audit", "--d", "3", "--n-max", "200"]);
    assert_eq!(code(&out), 0);
    let report: AuditReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report.summary.ok);
    let three = report.radicand("3").unwrap();
    let link = three.fact("pq_link").unwrap();
    assert!(!link.printed.holds());
    let w = link.witness.as_ref().unwrap();
    assert_eq!((w.k, w.lhs.as_str(), w.rhs.as_str()), (1, "5", "4"));
    assert_eq!(three.check("roundtrip").unwrap().cases, 201);
}

#[test]
fn audit_config_and_output_file() {
    let dir = std::env::temp_dir().join(format!("ostro-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"radicands": ["2", "4"]}"#).unwrap();
    assert_eq!(
        code(&ostro(&["audit", "--config", bad.to_str().unwrap()])),
        2
    );
    std::fs::write(&bad, r#"{"radicands": ["2"], "typo": 1}"#).unwrap();
    assert_eq!(
        code(&ostro(&["audit", "--config", bad.to_str().unwrap()])),
        2
    );

    let good = dir.join("good.json");
    std::fs::write(
        &good,
        r#"{"radicands": ["5/3"], "n_max": 100, "probe_samples": 5, "lambda_samples": 5}"#,
    )
    .unwrap();
    let tsv = dir.join("out.tsv");
    let out = ostro(&[
        "--format",
        "tsv",
        "--output",
        tsv.to_str().unwrap(),
        "audit",
        "--config",
        good.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&tsv).unwrap();
    assert!(text.starts_with("d\tkind\tname"));
    assert!(text.lines().skip(1).all(|l| l.starts_with("5/3\t")));
    std::fs::remove_dir_all(&dir).unwrap();
}
