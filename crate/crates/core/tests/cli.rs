use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_divlat"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

const DIMS: &str = "dimD=10,h1n=0,tau=3";

fn invocations() -> Vec<Vec<&'static str>> {
    vec![
        vec!["check-model", "--resolution", "corpus:elliptic"],
        vec![
            "intersect",
            "--model",
            "corpus:l2",
            "--divisor",
            "C1",
            "--divisor",
            "C2",
        ],
        vec![
            "zariski",
            "--model",
            "corpus:l3",
            "--divisor",
            "C'1+C'2+C'3",
        ],
        vec![
            "integral-zariski",
            "--model",
            "corpus:l3",
            "--divisor",
            "C'1+C'2+C'3",
        ],
        vec![
            "connectivity",
            "--model",
            "corpus:l3",
            "--divisor",
            "2C'1+2C'2+2C'3",
        ],
        vec!["component", "--model", "corpus:l2", "--divisor", "2C1+3C2"],
        vec!["zpositive", "--model", "corpus:l1", "--divisor", "2F"],
        vec![
            "pullback",
            "--resolution",
            "corpus:elliptic",
            "--divisor",
            "C1",
        ],
        vec![
            "pushforward",
            "--resolution",
            "corpus:elliptic",
            "--divisor",
            "C'1+C'3",
        ],
        vec!["anticanonical", "--resolution", "corpus:minus3"],
        vec!["fundcycle", "--resolution", "corpus:d4"],
        vec!["delta", "--resolution", "corpus:d4"],
        vec![
            "dualgraph-b1",
            "--graph",
            "corpus:triangle",
            "--graph",
            "corpus:nodal_cubic",
        ],
        vec!["mu", "--x", "5", "--d", "5"],
        vec!["qmin", "--model", "corpus:l2"],
        vec![
            "reider",
            "--model",
            "corpus:l2",
            "--divisor",
            "2C1+2C2",
            "--cluster",
            "zeta:C1,C2",
            "--delta",
            "4",
        ],
        vec![
            "bpf", "--dsq", "5", "--db-min", "2", "--alpha", "4", "--beta", "2", "--dims", DIMS,
        ],
        vec![
            "very-ample",
            "--dsq",
            "10",
            "--db-min",
            "3",
            "--alpha",
            "9",
            "--beta",
            "3",
            "--dims",
            DIMS,
        ],
        vec!["fujita", "--m", "3", "--hsq", "1", "--dims", DIMS],
        vec![
            "pluri", "--case", "1", "--m", "2", "--ksq", "2", "--dims", DIMS,
        ],
        vec![
            "extension",
            "--dsq",
            "40",
            "--d",
            "5",
            "--q",
            "1",
            "--dims",
            DIMS,
        ],
        vec!["gonality", "--m", "5"],
        vec!["frobenius", "--p", "3", "--matrix", "1,0;0,0"],
    ]
}

#[test]
fn every_command_has_a_structured_round_trip() {
    for args in invocations() {
        let mut full = args.clone();
        full.extend(["--format", "structured"]);
        let (code, out, err) = run(&full);
        assert_eq!(code, 0, "{args:?}: {err}");
        let v: Value = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        assert_eq!(v["command"], args[0], "{args:?}");
        assert!(v["data"].is_object(), "{args:?}");
        let again = serde_json::to_string_pretty(&v).unwrap();
        assert_eq!(again.trim_end(), out.trim_end(), "{args:?}: not canonical");

        let (code, text, err) = run(&args);
        assert_eq!(code, 0, "{args:?}: {err}");
        assert!(!text.trim().is_empty(), "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    for args in invocations() {
        let mut full = args.clone();
        full.extend(["--format", "structured"]);
        assert_eq!(run(&full).1, run(&full).1, "{args:?}");
    }
}

#[test]
fn known_answers() {
    let data = |args: &[&str]| -> Value {
        let mut full = args.to_vec();
        full.extend(["--format", "structured"]);
        let (code, out, err) = run(&full);
        assert_eq!(code, 0, "{err}");
        serde_json::from_str::<Value>(&out).unwrap()["data"].clone()
    };
    let v = data(&["delta", "--resolution", "corpus:elliptic_cone"]);
    assert_eq!(v["delta"], "0");
    let v = data(&["delta", "--resolution", "corpus:minus3"]);
    assert_eq!(v["delta"], "4/3");
    let v = data(&[
        "dualgraph-b1",
        "--graph",
        "corpus:triangle",
        "--graph",
        "corpus:nodal_cubic",
    ]);
    assert_eq!(v["betti1_equal"], true);
    let v = data(&["frobenius", "--p", "2", "--matrix", "0,1;0,0"]);
    assert_eq!(
        (v["dim_s"].as_u64(), v["dim_n"].as_u64()),
        (Some(0), Some(2))
    );
}

#[test]
fn scenarios_run() {
    for name in ["l3_connectivity", "elliptic_pullback", "mu", "l2_reider"] {
        let (code, _, err) = run(&["--scenario", &format!("corpus:{name}")]);
        assert_eq!(code, 0, "{name}: {err}");
    }
}

#[test]
fn scenario_file_with_relative_references() {
    let dir = std::env::temp_dir().join(format!("divlat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("lat.json"), divlat::corpus::get("l2").unwrap()).unwrap();
    std::fs::write(
        dir.join("run.json"),
        r#"{"command":"intersect","model":"lat.json","divisor":["C1","C2"]}"#,
    )
    .unwrap();
    let (code, out, err) = run(&["--scenario", dir.join("run.json").to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("4/3"), "{out}");
}

#[test]
fn exit_codes() {
    let (code, out, err) = run(&["intersect", "--model", "corpus:l2", "--divisor", "C1+"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.starts_with("error[E_PARSE]"), "{err}");

    let (code, _, err) = run(&["intersect", "--model", "corpus:missing", "--divisor", "C1"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error["), "{err}");

    let (code, _, err) = run(&["no-such-command"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error[E_USAGE]"), "{err}");

    let (code, _, err) = run(&[
        "connectivity",
        "--model",
        "corpus:l3",
        "--divisor",
        "9C'1+9C'2+9C'3",
        "--budget",
        "10",
    ]);
    assert_eq!(code, 3);
    assert!(err.starts_with("error[E_BUDGET]"), "{err}");
}
