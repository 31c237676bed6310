use std::process::Command;

use bbs_cli::{ideal_json, parse_ideal, CliError};
use bbs_core::orderideal::{planar_order_ideals, OrderIdeal};
use proptest::prelude::*;
use serde_json::Value;

fn bbs(args: &[&str]) -> (Value, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_bbs")).args(args).output().expect("binary runs");
    let code = out.status.code().expect("exit code");
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (v, code)
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

#[test]
fn box22_border() {
    let (v, code) = bbs(&["border", "--ideal", "box 2 2"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["result"]["border"], serde_json::json!([[0, 2], [2, 0], [1, 2], [2, 1]]));
    assert_eq!(v["result"]["rim"].as_array().unwrap().len(), 3);
}

#[test]
fn box21_exposure() {
    let (v, code) = bbs(&["exposure", "--ideal", "box 2 1"]);
    assert_eq!(code, 0);
    assert_eq!(strings(&v["result"]["exposed"]), ["c13", "c21", "c22", "c23"]);
}

#[test]
fn lshape_verify_reports_support_lengths() {
    let (v, code) = bbs(&["lshape-verify"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["passed"], true);
    let lengths: Vec<u64> = v["result"]["support_lengths"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert_eq!(lengths, [78, 329, 375, 372, 419, 10, 87, 87, 95, 109, 8, 90, 86, 99, 1, 1, 11, 1, 11, 1, 1, 1, 9, 1, 1]);
}

#[test]
fn exit_codes() {
    let (v, code) = bbs(&["border", "--ideal", r#"{"n":2,"terms":[[0,0],[2,0]]}"#]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["witness"], serde_json::json!([1, 0]));
    assert_eq!(bbs(&["best", "--ideal", "lshape", "--search-budget", "5"]).1, 2);
    assert_eq!(bbs(&["border"]).1, 3);
    assert_eq!(bbs(&["lshape-verify", "--ideal", "lshape"]).1, 3);
    assert_eq!(bbs(&["nonsense"]).1, 3);
    assert_eq!(bbs(&["best", "--ideal", "box 1 1 1 1"]).1, 0);
    assert_eq!(bbs(&["weights", "--ideal", "simplicial 3 1"]).1, 1);
}

#[test]
fn simplicial_summary() {
    let (v, code) = bbs(&["simplicial", "--ideal", "simplicial 3 1"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["minimal_quadrics"], 15);
    assert_eq!(v["result"]["cotangent_dim"], 18);
    assert_eq!(v["result"]["reembedding"]["remaining"].as_array().unwrap().len(), 18);
}

#[test]
fn polynomial_serialization_is_canonical() {
    let (v, _) = bbs(&["eliminate", "--ideal", "lshape"]);
    for g in v["result"]["generators"].as_array().unwrap() {
        for t in g["terms"].as_array().unwrap() {
            let c = t[0].as_str().unwrap();
            let (p, q) = c.split_once('/').expect("p/q");
            assert!(p.parse::<i64>().is_ok() && q.parse::<u64>().unwrap() > 0);
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    for args in [["optimal", "--ideal", "box 2 2"], ["gb-elim", "--ideal", "box 2 1"]] {
        let mut a: Vec<&str> = args.to_vec();
        if args[0] == "gb-elim" {
            a.extend(["--z", "c11"]);
        }
        let first = strip(bbs(&a).0);
        let mut b = a.clone();
        b.extend(["--workers", "1"]);
        let mut second = strip(bbs(&b).0);
        second["input"]["workers"] = Value::Null;
        assert_eq!(first, second);
    }
}

#[test]
fn shorthands() {
    assert_eq!(parse_ideal("lshape").unwrap(), OrderIdeal::lshape());
    assert_eq!(parse_ideal(r#"{"n":2,"terms":[[0,0]]}"#).unwrap().mu(), 1);
    assert_eq!(parse_ideal("simplicial 3 1").unwrap().mu(), 4);
    assert_eq!(parse_ideal("box 2 3").unwrap().mu(), 6);
    assert!(matches!(parse_ideal("{"), Err(CliError::Malformed(_))));
    assert!(matches!(parse_ideal("triangle"), Err(CliError::Malformed(_))));
}

#[test]
fn file_source() {
    let path = std::env::temp_dir().join("bbs_cli_ideal.json");
    std::fs::write(&path, r#"{"n": 2, "terms": [[0,0],[1,0],[0,1],[0,2],[1,1]]}"#).unwrap();
    assert_eq!(parse_ideal(path.to_str().unwrap()).unwrap().mu(), 5);
}

proptest! {
    #[test]
    fn serialization_round_trips(mu in 1u32..9, pick in any::<prop::sample::Index>()) {
        let all = planar_order_ideals(mu);
        let o = pick.get(&all).clone();
        let text = ideal_json(&o).to_string();
        prop_assert_eq!(parse_ideal(&text).unwrap(), o);
    }
}
