use std::process::{Command, Output};

use serde_json::Value;

fn tcubic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tcubic"))
        .args(args)
        .env_remove("TCUBIC_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = vec!["--output-format", "json"];
    a.extend_from_slice(args);
    let o = tcubic(&a);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("elapsed_ms");
    v
}

#[test]
fn mu_both_methods_agree_at_23() {
    let v = json(&["mu", "--q", "23", "--method", "both"]);
    let mus: Vec<u64> = v["mu"].as_array().unwrap().iter().map(|m| m["mu"].as_u64().unwrap()).collect();
    assert_eq!(mus, vec![292261, 292261]);
    assert_eq!(v["checks"][0]["pass"], Value::Bool(true));
}

#[test]
fn census_csv_line_rows() {
    let o = tcubic(&["census", "--q", "7", "--output-format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(r.headers().unwrap(), vec!["kind", "class", "count", "expected"]);
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).filter(|r| &r[0] == "line").collect();
    assert_eq!(rows.len(), 11);
    let total: u64 = rows.iter().map(|r| r[2].parse::<u64>().unwrap()).sum();
    assert_eq!(total, 2850);
    assert!(rows.iter().all(|r| r[2] == r[3]));
}

#[test]
fn classify_real_chord() {
    let o = tcubic(&["classify", "--q", "7", "--line", "1,0,0,0/0,0,0,1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("class: O1\n"), "{s}");
    assert!(s.contains("phi: (x^2)/(x)"), "{s}");
}

#[test]
fn ratfun_prints_divisors() {
    let v = json(&["ratfun", "--q", "7", "--line", "1,0,0,0/0,1,0,0"]);
    assert_eq!(v["class"], "O2");
    assert_eq!(v["base_divisor"], "2P_inf");
    for k in ["phi", "morphism", "ramification_divisor", "different_divisor", "double_point_polynomial"] {
        assert!(v[k].is_string(), "{k}");
    }
}

#[test]
fn extension_field_line_syntax() {
    let v = json(&["classify", "--q", "9", "--line", "1,0,0,0/0,0,0,1"]);
    assert_eq!(v["class"], "O1");
    let o = tcubic(&["classify", "--q", "9", "--line", "0.1,1,0,0/0,0,1,0"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn usage_errors_exit_2() {
    let o = tcubic(&["mu", "--q", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("q >= 5"));
    assert_eq!(tcubic(&["mu", "--q", "6"]).status.code(), Some(2));
    assert_eq!(tcubic(&["mu"]).status.code(), Some(2));
    assert_eq!(tcubic(&["frobnicate"]).status.code(), Some(2));
    let o = tcubic(&["classify", "--q", "7", "--line", "1,0,0/0,0,0,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--line"));
    assert_eq!(tcubic(&["classify", "--q", "7", "--line", "1,0,0,0/2,0,0,0"]).status.code(), Some(2));
}

#[test]
fn failing_check_exits_1() {
    let dir = std::env::temp_dir().join(format!("tcubic-golden-{}", std::process::id()));
    std::fs::write(&dir, "q=7 key=mu value=2129\n").unwrap();
    let o = tcubic(&["verify", "--q", "7", "--golden-path", dir.to_str().unwrap()]);
    std::fs::remove_file(&dir).ok();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("check golden_mu: FAIL"));
}

#[test]
fn verify_passes() {
    let v = json(&["verify", "--q", "8", "--m", "1,2"]);
    assert_eq!(v["q"], 8);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == Value::Bool(true)));
}

#[test]
fn json_is_thread_count_independent() {
    for args in [
        &["census", "--q", "8"][..],
        &["enumerator", "--q", "7", "--m", "1,2"][..],
        &["verify", "--q", "7", "--seed", "3"][..],
    ] {
        let mut one = vec!["--threads", "1"];
        one.extend_from_slice(args);
        let mut three = vec!["--threads", "3"];
        three.extend_from_slice(args);
        assert_eq!(without_timing(json(&one)), without_timing(json(&three)), "{args:?}");
    }
}

#[test]
fn text_numbers_appear_in_json() {
    fn numbers(s: &str) -> Vec<String> {
        s.split(|c: char| !c.is_ascii_digit()).filter(|t| !t.is_empty()).map(str::to_string).collect()
    }
    for args in [
        &["census", "--q", "7"][..],
        &["mu", "--q", "7"][..],
        &["enumerator", "--q", "5", "--m", "1,2"][..],
        &["enumerator", "--q", "16", "--m", "1,2"][..],
        &["ratfun", "--q", "7", "--line", "1,1,0,0/0,0,1,3"][..],
        &["verify", "--q", "5"][..],
    ] {
        let text = stdout(&tcubic(args));
        let j = without_timing(json(args)).to_string();
        let have = numbers(&j);
        for n in numbers(&text) {
            assert!(have.contains(&n), "{args:?}: {n} missing from json");
        }
    }
}

#[test]
fn golden_output_matches_bundled_records() {
    let o = tcubic(&["golden", "--q", "5,7"]);
    let g = tcubic_core::golden::Golden::parse(&stdout(&o)).unwrap();
    let bundled = tcubic_core::golden::Golden::bundled();
    assert!(!g.0.is_empty());
    for ((q, key), v) in &g.0 {
        assert_eq!(bundled.get(*q, key), Some(v), "q={q} {key}");
    }
}
