use std::process::{Command, Output};

use serde_json::Value;

fn sumprod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumprod")).args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn stats_reports_exact_counts() {
    let out = sumprod(&["stats", "--p", "7", "--set", "list:0,1,2", "--poly", "quad2:1,0,0,0,1,0", "--json"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["e4"], "115");
    assert_eq!(v["sumset_size"], 5);
    assert_eq!(v["image_size"], 7);

    let out = sumprod(&["stats", "--p", "101", "--set", "list:7", "--poly", "quad2:1,0,0,0,1,0", "--json"]);
    let v = stdout_json(&out);
    for key in ["a_size", "sumset_size", "product_size", "image_size"] {
        assert_eq!(v[key], 1, "{key}");
    }
    assert_eq!(v["e2"], "1");
    assert_eq!(v["e4"], "1");
}

#[test]
fn stats_reports_include_named_inequalities() {
    let out = sumprod(&[
        "stats",
        "--p",
        "1009",
        "--set",
        "interval:0,12",
        "--poly",
        "quad2:1,0,0,0,1,0",
        "--reports",
        "--json",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v = stdout_json(&out);
    let names: Vec<&str> = v["reports"].as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["his", "garaev", "rss", "lemma_ss", "main", "lemma1"]);
    for r in v["reports"].as_array().unwrap() {
        assert_eq!(r["holds"], "NotAdjudicable");
    }
}

#[test]
fn usage_and_descriptor_errors_exit_2() {
    let out = sumprod(&["stats", "--p", "7", "--set", "list:0,1", "--poly", "quad2:1,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error[SpecSyntax]"));

    let out = sumprod(&["classify", "--p", "9", "--poly", "quad2:1,0,0,0,0,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error[CompositeModulus]"));

    let out = sumprod(&["stats", "--p", "7", "--set", "list:9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error[ElementOutOfRange]"));

    assert_eq!(sumprod(&["sweep", "--p", "101", "--family", "interval:0", "--sizes", "8,4"]).status.code(), Some(2));
    assert_eq!(sumprod(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn limits_exit_3() {
    let out = sumprod(&["d4", "--p", "101", "--set", "list:0,1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).starts_with("error[UniverseTooLarge]"));

    let out = sumprod(&["sweep", "--p", "101", "--family", "interval:0", "--sizes", "4,11", "--below-sqrt-p"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).starts_with("error[SizeAboveSqrtP]"));
}

#[test]
fn classify_verdicts() {
    for (poly, degenerate) in [("quad2:1,1,2,0,0,0", true), ("quad2:1,0,0,0,1,0", false), ("quad2:0,0,1,0,0,0", false)]
    {
        let out = sumprod(&["classify", "--p", "7", "--poly", poly, "--json"]);
        assert!(out.status.success());
        let v = stdout_json(&out);
        assert_eq!(v["degenerate"], degenerate, "{poly}");
        assert_eq!(v["lift_of_form"], degenerate, "{poly}");
    }
}

#[test]
fn d4_modes() {
    let v = stdout_json(&sumprod(&["d4", "--p", "5", "--set", "list:0,1", "--json"]));
    assert_eq!(v["value"], "9/8");
    assert_eq!(v["mode"], "Exact");
    let v = stdout_json(&sumprod(&["d4", "--p", "5", "--set", "list:0", "--json"]));
    assert_eq!(v["value"], "1");
    let v = stdout_json(&sumprod(&["d4", "--p", "10007", "--set", "interval:0,20", "--mode", "search", "--json"]));
    assert_eq!(v["mode"], "HeuristicLowerBound");
    assert!(v["value_approx"].as_f64().unwrap() >= 1.0);
}

#[test]
fn verify_exit_codes() {
    let out = sumprod(&["verify", "--trials", "20"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));

    let out = sumprod(&["verify", "--trials", "0"]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("warning"));

    let out = sumprod(&["verify", "--trials", "5", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn incidence_check_full_configuration() {
    let out = sumprod(&["incidence-check", "--p", "5", "--json"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["name"], "vinh");
    assert_eq!(v["lhs"], "3875");
    assert_eq!(v["holds"], "True");
    let out = sumprod(&["incidence-check", "--p", "7", "--points", "rand:100,1", "--planes", "rand:50,2"]);
    assert!(out.status.success());
}

#[test]
fn sweep_writes_csv_and_run_object() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("interval.csv");
    let args =
        ["sweep", "--p", "1000003", "--family", "interval:0", "--sizes", "8,16,32,64", "--out", csv.to_str().unwrap()];
    assert!(sumprod(&args).status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "family_id,p,a_size,sumset_size,product_size,image_size,maxgrow,ratio_main,d4_lower,elapsed_ms"
    );
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        let ratio: f64 = cols[7].parse().unwrap();
        assert!(ratio >= 1.0, "{line}");
        let n = |i: usize| cols[i].parse::<u64>().unwrap();
        assert_eq!(n(6), n(3).max(n(5)));
    }
    let run: Value = serde_json::from_slice(&std::fs::read(dir.path().join("interval.run.json")).unwrap()).unwrap();
    assert_eq!(run["manifest"]["field"], 1000003);
    assert_eq!(run["rows"].as_array().unwrap().len(), 4);
    let digest = run["manifest"]["outputs"][0]["sha256"].as_str().unwrap();
    assert_eq!(digest, sumprod_cli::sweep::sha256_hex(text.as_bytes()));
    assert!(run["fit"]["slope"].as_f64().unwrap() > 1.0);

    let again = dir.path().join("again.csv");
    let mut args2 = args;
    args2[8] = again.to_str().unwrap();
    assert!(sumprod(&args2).status.success());
    assert_eq!(std::fs::read(&again).unwrap(), text.as_bytes());
}

#[test]
fn random_sweep_row_is_reproducible() {
    let run = |workers: &str| {
        sumprod(&["sweep", "--p", "10007", "--family", "rand", "--sizes", "32", "--seed", "11", "--workers", workers])
            .stdout
    };
    let first = run("1");
    assert!(!first.is_empty());
    assert_eq!(first, run("1"));
    assert_eq!(first, run("4"));
}

#[test]
fn timing_flag_fills_elapsed_column() {
    let out = sumprod(&["sweep", "--p", "101", "--family", "interval:0", "--sizes", "4,8", "--timing"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().nth(1).unwrap();
    assert!(!row.ends_with(','));
}
