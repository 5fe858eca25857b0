//! Golden-file runner shared by the golden and acceptance tests.

#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

pub struct Case {
    pub name: String,
    pub code: i32,
    pub args: Vec<String>,
}

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

pub fn cases() -> Vec<Case> {
    let manifest = std::fs::read_to_string(golden_dir().join("cases.txt")).expect("cases.txt");
    manifest
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let mut words = l.split_whitespace();
            let name = words.next().expect("name").to_string();
            let code = words.next().expect("exit code").parse().expect("numeric exit code");
            Case { name, code, args: words.map(String::from).collect() }
        })
        .collect()
}

pub fn run(case: &Case) -> Outcome {
    let output = Command::new(env!("CARGO_BIN_EXE_cobord"))
        .args(&case.args)
        .current_dir(golden_dir())
        .output()
        .expect("spawn cobord");
    Outcome {
        code: output.status.code().expect("exit code"),
        stdout: String::from_utf8(output.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(output.stderr).expect("utf-8 stderr"),
    }
}

pub fn expected(case: &Case, stream: &str) -> String {
    std::fs::read_to_string(golden_dir().join(format!("{}.{stream}", case.name))).unwrap_or_default()
}

/// Problems with one case, empty when it matches its golden files.
pub fn check(case: &Case) -> Vec<String> {
    let got = run(case);
    let mut problems = Vec::new();
    if got.code != case.code {
        problems.push(format!("{}: exit {} but expected {}", case.name, got.code, case.code));
    }
    if got.stdout != expected(case, "out") {
        problems.push(format!("{}: stdout differs from {}.out", case.name, case.name));
    }
    if got.stderr != expected(case, "err") {
        problems.push(format!("{}: stderr differs from {}.err", case.name, case.name));
    }
    problems
}

/// Writes the current outputs as the expected ones.
pub fn bless(case: &Case) {
    let got = run(case);
    for (stream, text) in [("out", &got.stdout), ("err", &got.stderr)] {
        let path = golden_dir().join(format!("{}.{stream}", case.name));
        if text.is_empty() {
            let _ = std::fs::remove_file(path);
        } else {
            std::fs::write(path, text).expect("write golden file");
        }
    }
}
