//! Golden-corpus runner shared by the CLI and acceptance tests.

#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn golden_dir() -> PathBuf {
    crate_dir().join("tests/golden")
}

pub fn corpus_dir() -> PathBuf {
    crate_dir().join("tests/corpus")
}

#[derive(Debug, Clone)]
pub struct Case {
    pub name: String,
    pub exit: i32,
    pub args: Vec<String>,
}

/// Whitespace split honoring double quotes.
fn split_args(text: &str) -> Vec<String> {
    let mut args = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut started = false;
    for ch in text.chars() {
        match ch {
            '"' => {
                quoted = !quoted;
                started = true;
            }
            c if c.is_whitespace() && !quoted => {
                if started {
                    args.push(std::mem::take(&mut cur));
                    started = false;
                }
            }
            c => {
                cur.push(c);
                started = true;
            }
        }
    }
    if started {
        args.push(cur);
    }
    args
}

pub fn load_cases() -> Vec<Case> {
    let text = fs::read_to_string(golden_dir().join("commands.txt")).expect("golden manifest");
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let mut parts = l.splitn(3, '|').map(str::trim);
            let name = parts.next().expect("name").to_string();
            let exit = parts
                .next()
                .and_then(|c| c.parse().ok())
                .expect("exit code");
            let args = split_args(parts.next().expect("arguments"));
            Case { name, exit, args }
        })
        .collect()
}

/// Runs one case from the crate directory; returns the exit code and the
/// combined transcript (stdout, then stderr under a marker).
pub fn run_case(case: &Case) -> (i32, String) {
    let output = Command::new(env!("CARGO_BIN_EXE_unialg"))
        .args(&case.args)
        .current_dir(crate_dir())
        .output()
        .expect("spawn unialg");
    let mut transcript = String::from_utf8_lossy(&output.stdout).into_owned();
    if !output.stderr.is_empty() {
        transcript.push_str("--- stderr ---\n");
        transcript.push_str(&String::from_utf8_lossy(&output.stderr));
    }
    (output.status.code().unwrap_or(-1), transcript)
}

pub fn expected_path(case: &Case) -> PathBuf {
    golden_dir().join(format!("{}.out", case.name))
}

pub fn read_expected(path: &Path) -> Option<String> {
    fs::read_to_string(path).ok()
}
