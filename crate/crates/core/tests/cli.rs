use std::process::Command;

use effbounds::io::{from_json, run, to_json, Outcome};
use serde_json::Value;

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("effbounds").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = cli(&all);
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn exact(v: &Value) -> &str {
    v["exact"].as_str().expect("rational field")
}

#[test]
fn bounds_on_the_quintic_double_cover() {
    let v = json(&["bounds", "--surface", "double_cover_d5", "--divisor", "H"]);
    assert_eq!(exact(&v["result"]["frak_m_value"]), "5/2");
    assert_eq!(v["result"]["frak_m"], "3");
    let text = cli(&["bounds", "--surface", "double_cover_d5", "--divisor", "H"]);
    assert_eq!(text.code, 0);
    assert!(text.stdout.contains("frak_m_value: 5/2 (~2.5)"));
    assert!(text.stdout.contains("frak_m: 3"));
}

#[test]
fn zariski_with_oracle() {
    let v = json(&[
        "zariski",
        "--surface",
        "hirzebruch_f2",
        "--divisor",
        "s+f",
        "--oracle",
    ]);
    let r = &v["result"];
    let p: Vec<&str> = r["positive"]
        .as_array()
        .unwrap()
        .iter()
        .map(exact)
        .collect();
    assert_eq!(p, ["1", "1/2"]);
    assert_eq!(r["negative_expression"], "1/2*s");
    let checks = v["oracle"]["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["agree"] == true));
}

#[test]
fn obstructions_on_a2() {
    let v = json(&[
        "obstructions",
        "--surface",
        "a2_resolution",
        "--divisor",
        "h",
        "-k",
        "2",
    ]);
    let divisors = v["result"]["divisors"].as_array().unwrap();
    assert_eq!(divisors.len(), 3);
    assert!(divisors.iter().all(|d| exact(&d["value"]) == "2"));
}

#[test]
fn text_and_json_carry_the_same_values() {
    let args = [
        "report",
        "--surface",
        "hirzebruch_f2",
        "--divisor",
        "s+2f",
        "-k",
        "1",
    ];
    let text = cli(&args).stdout;
    let v = json(&args);
    let mut exacts = Vec::new();
    collect_exact(&v, &mut exacts);
    assert!(!exacts.is_empty());
    for e in exacts {
        assert!(text.contains(&e), "text output lacks {e}");
    }
}

fn collect_exact(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => {
            if let Some(Value::String(e)) = m.get("exact") {
                out.push(e.clone());
            }
            m.values().for_each(|x| collect_exact(x, out));
        }
        Value::Array(a) => a.iter().for_each(|x| collect_exact(x, out)),
        _ => {}
    }
}

#[test]
fn every_command_round_trips() {
    for cmd in [
        "validate",
        "zariski",
        "fundcycle",
        "exceptional",
        "bounds",
        "ek",
        "obstructions",
        "tau",
        "thresholds",
        "compare-matsusaka",
        "report",
    ] {
        let out = cli(&[cmd, "--surface", "a2_resolution", "--json", "-k", "1"]);
        assert_eq!(out.code, 0, "{cmd}: {}", out.stderr);
        let report = from_json(&out.stdout).unwrap();
        assert_eq!(to_json(&report) + "\n", out.stdout, "{cmd}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["bounds", "--surface", "no_such_surface"]).code, 1);
    assert_eq!(
        cli(&["bounds", "--surface", "a2_resolution", "--divisor", "2*g"]).code,
        2
    );
    assert_eq!(
        cli(&["bounds", "--surface", "a2_resolution", "--divisor", "1,2"]).code,
        2
    );
    assert_eq!(cli(&["bounds"]).code, 2);
    assert_eq!(cli(&["frobnicate", "--surface", "a2_resolution"]).code, 2);
    assert_eq!(
        cli(&["bounds", "--surface", "hirzebruch_f2", "--divisor", "s"]).code,
        1
    );
    let ok = cli(&[
        "zariski",
        "--surface",
        "hirzebruch_f2",
        "--divisor",
        "s+f",
        "--oracle",
    ]);
    assert_eq!(ok.code, 0);
    let bad = cli(&[
        "zariski",
        "--surface",
        "hirzebruch_f2",
        "--divisor",
        "s+f",
        "--oracle",
        "--inject-gram-fault",
        "1,1,-1",
    ]);
    assert_eq!(bad.code, 3);
    assert!(bad.stderr.starts_with("oracle mismatch"));
}

#[test]
fn surface_files_and_their_diagnostics() {
    let dir = std::env::temp_dir().join(format!("effbounds-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("f2.json");
    std::fs::write(
        &good,
        r#"{"schema": 1, "name": "F2", "rank": 2, "gram": [[0, 1], [1, -2]], "canonical": [-4, -2],
            "curves": [{"name": "f", "coords": [1, 0]}, {"name": "s", "coords": [0, 1]}],
            "ample_reference": [3, 1]}"#,
    )
    .unwrap();
    let v = json(&[
        "tau",
        "--surface",
        good.to_str().unwrap(),
        "--divisor",
        "s+2f",
    ]);
    assert_eq!(exact(&v["result"]["value"]), "2");
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"schema": 1, "name": "x", "rank": 1, "gram": [[1, 2]], "canonical": [1], "curves": []}"#)
        .unwrap();
    let out = cli(&["validate", "--surface", bad.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("gram[0]"), "{}", out.stderr);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn binary_entry_point() {
    let out = Command::new(env!("CARGO_BIN_EXE_effbounds"))
        .args([
            "compare-matsusaka",
            "--surface",
            "double_cover_d5",
            "--json",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(exact(&v["result"]["lattice"]["value"]), "9/2");
    let out = Command::new(env!("CARGO_BIN_EXE_effbounds"))
        .args(["tau", "--surface", "double_cover_d5", "--divisor", "Q"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
