use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn vaisman(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vaisman"))
        .args(args)
        .env_remove("VAISMAN_THREADS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn finding<'a>(report: &'a Value, id: &str) -> &'a Value {
    report["findings"]
        .as_array()
        .unwrap()
        .iter()
        .find(|f| f["check_id"] == id)
        .unwrap_or_else(|| panic!("no finding {id}"))
}

fn temp_json(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn verify_gl2r_vaisman() {
    let out = vaisman(&["--json", "verify", "--algebra", "gl2r", "--lck", "0,0,1", "--J", "1,0"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["status"], "pass");
    assert_eq!(finding(&r, "class")["witness"]["kind"], "lck");
    assert_eq!(finding(&r, "vaisman")["witness"], true);
}

#[test]
fn verify_gl2r_non_vaisman() {
    let out = vaisman(&["--json", "verify", "--algebra", "gl2r", "--lck", "1/2,0,1", "--J", "1,0"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(finding(&r, "class")["witness"]["kind"], "lck");
    assert_eq!(finding(&r, "vaisman")["witness"], false);
    assert_eq!(finding(&r, "lee_field")["witness"], serde_json::json!(["4/3", "0", "2/3", "0"]));
}

#[test]
fn verify_gh_vaisman() {
    let out = vaisman(&["--json", "verify", "--algebra", "gh:2", "--lck", "0,0,0,0,1", "--J", "1,0", "--eps", "1,1"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(finding(&r, "class")["witness"]["kind"], "lck");
    assert_eq!(finding(&r, "vaisman")["witness"], true);
}

#[test]
fn failed_expectation_exits_one() {
    let out = vaisman(&["--json", "verify", "--algebra", "gl2r", "--lck", "1/2,0,1", "--J", "1,0", "--expect", "vaisman"]);
    assert_eq!(code(&out), 1);
    let r = json(&out);
    assert_eq!(r["status"], "fail");
    assert_eq!(finding(&r, "expect_vaisman")["verdict"], "fail");
}

#[test]
fn non_symmetric_metric_fails() {
    let out = vaisman(&["--json", "verify", "--algebra", "u2", "--lck", "1,0,1", "--J", "1,0", "--branch", "w"]);
    assert_eq!(code(&out), 1);
    assert_eq!(finding(&json(&out), "metric_symmetric")["verdict"], "fail");
}

#[test]
fn bad_input_exits_two() {
    let out = vaisman(&["--json", "verify", "--algebra", "nosuch", "--lck", "0,0,1", "--J", "1,0"]);
    assert_eq!(code(&out), 2);
    let r = json(&out);
    assert_eq!(r["status"], "error");
    assert!(r["error"].is_string());

    let wrong_len = vaisman(&["verify", "--algebra", "gl2r", "--lck", "0,1", "--J", "1,0"]);
    assert_eq!(code(&wrong_len), 2);
}

#[test]
fn malformed_json_reports_position() {
    let f = temp_json("{\"dim\": 4,\n  \"basis\": [\"T\", }");
    let out = vaisman(&["--json", "verify", "--algebra-file", f.path().to_str().unwrap(), "--lck", "0,0,1", "--J", "1,0"]);
    assert_eq!(code(&out), 2);
    let err = json(&out)["error"].as_str().unwrap().to_string();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn json_inputs_match_catalog() {
    let g = temp_json(
        r#"{"dim":4,"basis":["T","X","Y","Z"],"brackets":[
            {"i":"X","j":"Y","out":{"Z":1}},
            {"i":"X","j":"Z","out":{"Y":1}},
            {"i":"Y","j":"Z","out":{"X":-1}}]}"#,
    );
    let j = temp_json(r#"[[0,0,0,-1],[0,0,-1,0],[0,1,0,0],[1,0,0,0]]"#);
    let omega = temp_json(r#"{"degree":2,"terms":{"Z,T":1,"Y,X":1}}"#);
    let from_files = vaisman(&[
        "--json", "verify", "--algebra-file", g.path().to_str().unwrap(), "--j-file", j.path().to_str().unwrap(), "--omega",
        omega.path().to_str().unwrap(),
    ]);
    let from_name = vaisman(&["--json", "verify", "--algebra", "gl2r", "--lck", "0,0,1", "--J", "1,0"]);
    assert_eq!(code(&from_files), 0, "{}", String::from_utf8_lossy(&from_files.stdout));
    assert_eq!(json(&from_files)["findings"], json(&from_name)["findings"]);

    let missing = vaisman(&["verify", "--algebra-file", g.path().to_str().unwrap(), "--lck", "0,0,1"]);
    assert_eq!(code(&missing), 2);
}

#[test]
fn modify_gh_with_phi_file() {
    let rot = r#"[[0,0,0,0,0,0],[0,0,0,"-1/2",0,0],[0,0,0,0,0,0],[0,"1/2",0,0,0,0],[0,0,0,0,0,0],[0,0,0,0,0,0]]"#;
    let f = temp_json(&format!(r#"{{"phi":{{"T":{rot}}}}}"#));
    let out = vaisman(&[
        "--json", "modify", "--algebra", "gh:2", "--lck", "0,0,0,0,1", "--J", "1,0", "--eps", "1,1", "--phi",
        f.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let r = json(&out);
    for id in ["modification_valid", "jacobi", "nijenhuis_preserved", "domega_preserved", "unimodularity_preserved"] {
        assert_eq!(finding(&r, id)["verdict"], "pass", "{id}");
    }
    assert_eq!(r["data"]["modified"]["dim"], 6);
}

#[test]
fn modify_rejects_bad_phi_shape() {
    let f = temp_json(r#"{"phi":{"T":[[0]]}}"#);
    let out = vaisman(&["modify", "--algebra", "gh:1", "--lck", "0,0,1", "--J", "1,0", "--eps", "1", "--phi", f.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn search_u2_all_matched() {
    let out = vaisman(&["--json", "search", "--algebra", "u2", "--seeds", "100"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["data"]["unmatched"], serde_json::json!([]));
    let n = r["data"]["solutions"].as_u64().unwrap() as usize;
    assert!(n > 0);
    assert_eq!(r["data"]["params"].as_array().unwrap().len(), n);
    assert_eq!(r["data"]["residuals"].as_array().unwrap().len(), n);
}

#[test]
fn reports_are_byte_stable() {
    let args = ["--json", "search", "--algebra", "gl2r", "--seeds", "40", "--seed", "7"];
    let a = vaisman(&args);
    let b = vaisman(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);

    let t = ["search", "--algebra", "gl2r", "--seeds", "40", "--seed", "7", "--threads", "1"];
    assert_eq!(vaisman(&t).stdout, vaisman(&t).stdout);
}

#[test]
fn thread_count_does_not_change_results() {
    let one = vaisman(&["--json", "--threads", "1", "search", "--algebra", "u2", "--seeds", "30"]);
    let four = vaisman(&["--json", "--threads", "4", "search", "--algebra", "u2", "--seeds", "30"]);
    assert_eq!(json(&one)["data"], json(&four)["data"]);
}

#[test]
fn timings_only_on_request() {
    let plain = vaisman(&["--json", "paper-suite", "--quick", "--only", "1"]);
    assert!(json(&plain).get("timings").is_none());
    let timed = vaisman(&["--json", "--timings", "paper-suite", "--quick", "--only", "1"]);
    let t = json(&timed);
    assert!(t["timings"]["total"].is_number());
    assert!(t["timings"]["criterion-1"].is_number());
}

#[test]
fn threads_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_vaisman"))
        .args(["--json", "paper-suite", "--only", "1"])
        .env("VAISMAN_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    let ok = Command::new(env!("CARGO_BIN_EXE_vaisman"))
        .args(["paper-suite", "--only", "1"])
        .env("VAISMAN_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&ok), 0);
}

#[test]
fn pushforward_holomorphic_map() {
    let out = vaisman(&["--json", "pushforward", "--family", "gh", "--delta", "2,-1", "--eps", "1,-1", "--samples", "20"]);
    assert_eq!(code(&out), 0);
    for (family, delta) in [("gl2", "1,0"), ("sl2", "1,1"), ("su2", "2,-1")] {
        let out = vaisman(&["pushforward", "--family", family, "--delta", delta, "--samples", "20"]);
        assert_eq!(code(&out), 0, "{family}");
    }
}

#[test]
fn unsigned_map_fails_for_mixed_signs() {
    let out = vaisman(&["pushforward", "--family", "gh", "--delta", "2,-1", "--eps", "1,-1", "--samples", "20", "--unsigned-map"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn pushforward_rejects_zero_k() {
    let out = vaisman(&["pushforward", "--family", "sl2", "--delta", "0,1"]);
    assert_eq!(code(&out), 2);
    let gl2 = vaisman(&["pushforward", "--family", "gl2", "--delta", "1,1"]);
    assert_eq!(code(&gl2), 2);
}

#[test]
fn table_format_lists_checks() {
    let out = vaisman(&["verify", "--algebra", "gl2r", "--lck", "0,0,1", "--J", "1,0"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("command: verify --algebra gl2r"));
    assert!(text.contains("status:  PASS"));
    assert!(text.contains("integrable"));
}

#[test]
fn sasaki_catalog() {
    for name in ["su2", "sl2", "affine", "h:1"] {
        let out = vaisman(&["verify", "--sasaki", name]);
        assert_eq!(code(&out), 0, "{name}");
    }
}

#[test]
fn paper_suite_quick_passes() {
    let out = vaisman(&["--json", "paper-suite", "--quick"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let r = json(&out);
    let ids: Vec<&str> = r["findings"].as_array().unwrap().iter().map(|f| f["check_id"].as_str().unwrap()).collect();
    assert_eq!(ids.len(), 8);
    assert!(ids.iter().enumerate().all(|(i, id)| *id == format!("criterion-{}", i + 1)));
}
