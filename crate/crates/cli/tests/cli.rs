use std::process::{Command, Output};

fn ringcount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ringcount"))
        .args(args)
        .env_remove("RINGCOUNT_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = ringcount(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn binomial_over_f4() {
    assert_eq!(
        stdout(&["binomial", "--ring", "gf:4", "--k", "3", "--kp", "2"]).trim(),
        "21"
    );
    assert_eq!(
        stdout(&["binomial", "--ring", "gf:2", "--degree", "2", "--k", "3", "--kp", "2"]).trim(),
        "21"
    );
    assert_eq!(
        stdout(&["binomial", "--ring", "zps:2:2", "--k", "2", "--kp", "1"]).trim(),
        "6"
    );
    assert_eq!(
        stdout(&[
            "binomial",
            "--ring",
            "crt:(zps:2:1,zps:3:1)",
            "--k",
            "2",
            "--kp",
            "1"
        ])
        .trim(),
        "12"
    );
}

#[test]
fn restriction_of_the_counterexample() {
    let out = stdout(&[
        "restrict",
        "--ring",
        "gf:2",
        "--degree",
        "2",
        "--len",
        "3",
        "--gens",
        "(1,0,a);(0,1,b)",
    ]);
    assert!(out.contains("<(1,1,1)>"), "{out}");
    assert!(out.contains("codewords: {000, 111}"), "{out}");
}

#[test]
fn report_flags_lyle() {
    let args = [
        "report", "--ring", "gf:2", "--degree", "2", "--len", "3", "--k", "2", "--kp", "1",
    ];
    let out = stdout(&args);
    let reports: serde_json::Value = serde_json::from_str(&out).unwrap();
    let lyle = reports
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["formula"] == "lyle")
        .expect("lyle row");
    assert_eq!(lyle["formula_value"], "5");
    assert_eq!(lyle["oracle_value"], "14");
    assert_eq!(lyle["verdict"], "mismatch");
    assert_eq!(out, stdout(&args), "output is deterministic");

    let csv = stdout(&[&args[..], &["--format", "csv"]].concat());
    assert!(csv.starts_with("formula,params,formula_value,oracle_value,verdict\n"));
    assert!(
        csv.contains("lyle,ring=gf:2;m=2;len=3;k=2;kp=1,5,14,mismatch"),
        "{csv}"
    );
}

#[test]
fn enum_count_matches_binomial() {
    for (ring, degree, len, k) in [
        ("gf:2", "2", "3", "2"),
        ("zps:2:2", "1", "3", "2"),
        ("gf:3", "1", "3", "1"),
    ] {
        let lines = stdout(&[
            "enum", "--ring", ring, "--degree", degree, "--len", len, "--k", k,
        ]);
        let predicted = stdout(&[
            "binomial", "--ring", ring, "--degree", degree, "--k", len, "--kp", k,
        ]);
        assert_eq!(
            lines.lines().count().to_string(),
            predicted.trim(),
            "{ring} {len} {k}"
        );
    }
}

#[test]
fn enum_writes_a_cache() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&[
        "enum",
        "--ring",
        "gf:2",
        "--degree",
        "2",
        "--len",
        "2",
        "--k",
        "1",
        "--cache-dir",
        dir.path().to_str().unwrap(),
    ]);
    let path = out.trim();
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(header["count"], 5);
    assert_eq!(lines.count(), 5);
}

#[test]
fn exit_codes() {
    assert_eq!(
        ringcount(&["binomial", "--ring", "gf:6", "--k", "1", "--kp", "0"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(ringcount(&["nonsense"]).status.code(), Some(64));
    assert_eq!(
        ringcount(&["report", "--ring", "gf:2", "--len", "2", "--k", "1", "--kp", "2"])
            .status
            .code(),
        Some(64)
    );
    let guard = ringcount(&[
        "enum", "--ring", "gf:4", "--len", "6", "--k", "3", "--guard", "100",
    ]);
    assert_eq!(guard.status.code(), Some(65));
    assert_eq!(
        ringcount(&["verify", "--strict", "--criterion", "1"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn pir_commands() {
    let out = stdout(&[
        "crt",
        "--ring",
        "crt:(zps:2:1,zps:3:1)",
        "--degree",
        "2",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["integer_modulus"], 6);
    assert_eq!(v["modulus_polynomial"], serde_json::json!([1, 3, 1]));
    let out = stdout(&[
        "omega",
        "--ring",
        "crt:(zps:2:1,zps:3:1)",
        "--degree",
        "2",
        "--len",
        "2",
        "--k",
        "1",
        "--kp",
        "1",
    ]);
    assert!(out.contains("formula with counted aleph: 12"), "{out}");
    assert!(
        out.contains("observed (free restriction of rank k'): 12"),
        "{out}"
    );
}

#[test]
fn counting_commands() {
    let out = stdout(&[
        "aleph", "--ring", "gf:2", "--degree", "2", "--len", "3", "--k", "2",
    ]);
    assert!(out.contains("oracle: 14"), "{out}");
    let out = stdout(&[
        "lyle", "--ring", "gf:2", "--degree", "2", "--len", "3", "--k", "2", "--kp", "1",
    ]);
    assert_eq!(out.trim(), "5");
    let out = stdout(&["minimal", "--ring", "gf:2", "--degree", "2", "--len", "2"]);
    assert!(
        out.contains("<(1,a)>") && out.contains("<(1,1+a)>"),
        "{out}"
    );
    let out = stdout(&[
        "trace", "--ring", "gf:2", "--degree", "2", "--gens", "(1,a)",
    ]);
    assert!(out.contains("<(1,0),(0,1)>"), "{out}");
}
