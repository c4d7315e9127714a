mod common;

use std::collections::BTreeSet;
use std::fs;

use common::{expected_path, load_cases, read_expected, run_case};

/// Set `UNIALG_BLESS=1` to rewrite the expected transcripts.
#[test]
fn golden_transcripts() {
    let bless = std::env::var_os("UNIALG_BLESS").is_some();
    let mut failures = Vec::new();
    for case in load_cases() {
        let (code, transcript) = run_case(&case);
        if code != case.exit {
            failures.push(format!(
                "{}: exit {code}, expected {}\n{transcript}",
                case.name, case.exit
            ));
            continue;
        }
        let path = expected_path(&case);
        if bless {
            fs::write(&path, &transcript).unwrap();
        } else if read_expected(&path).as_deref() != Some(transcript.as_str()) {
            failures.push(format!(
                "{}: transcript differs from {}\n{transcript}",
                case.name,
                path.display()
            ));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn every_exit_code_is_exercised() {
    let codes: BTreeSet<i32> = load_cases().iter().map(|c| c.exit).collect();
    assert_eq!(codes, BTreeSet::from([0, 1, 2, 3]));
}

#[test]
fn con_lists_the_z6_chain() {
    let case = load_cases()
        .into_iter()
        .find(|c| c.name == "con-z6")
        .unwrap();
    let (code, out) = run_case(&case);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[1], "0 3|1 4|2 5");
}

#[test]
fn supernil_json_carries_a_verified_witness() {
    let case = load_cases()
        .into_iter()
        .find(|c| c.name == "supernil-z6-json")
        .unwrap();
    let (code, out) = run_case(&case);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["answer"], "no");
    assert_eq!(v["verification"]["members"], true);
    let s = v["result"]["witness"]["s"].as_array().unwrap();
    let t = v["result"]["witness"]["t"].as_array().unwrap();
    assert_eq!(s.len(), 8);
    assert_eq!(s[..7], t[..7]);
    assert_ne!(s[7], t[7]);
}

#[test]
fn retract_json_certificate_schema() {
    let case = load_cases()
        .into_iter()
        .find(|c| c.name == "retract-cyclic4-json")
        .unwrap();
    let (code, out) = run_case(&case);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let cert = &v["certificate"];
    assert_eq!(cert["verdict"], "VALID");
    assert_eq!(cert["subalgebra"], serde_json::json!([0, 2]));
    assert_eq!(cert["image_of_last"], serde_json::json!([0, 2]));
    for key in [
        "functional",
        "subdirect",
        "retraction_verified",
        "homomorphism",
    ] {
        assert_eq!(cert[key], true, "{key}");
    }
    assert_eq!(v["recheck"]["retraction"], true);
}
