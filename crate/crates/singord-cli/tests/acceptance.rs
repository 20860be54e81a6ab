//! Acceptance suite: runs `singord corpus --seed 0` twice and prints one
//! PASS/FAIL line per criterion.

use std::io::Write;
use std::process::Command;
use std::time::Duration;

use serde_json::Value;

struct Run {
    stdout: Vec<u8>,
    code: i32,
    timings: Vec<Duration>,
}

fn corpus() -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_singord"))
        .args(["corpus", "--seed", "0", "--timings"])
        .output()
        .expect("run singord");
    let timings = String::from_utf8_lossy(&out.stderr)
        .lines()
        .filter_map(|l| l.split_whitespace().nth(2)?.strip_suffix('s')?.parse::<f64>().ok())
        .map(Duration::from_secs_f64)
        .collect();
    Run { stdout: out.stdout, code: out.status.code().unwrap_or(-1), timings }
}

#[test]
fn acceptance() {
    let first = corpus();
    let second = corpus();
    let report: Value = serde_json::from_slice(&first.stdout).expect("corpus JSON");
    let criteria = report["criteria"].as_array().expect("criteria");
    assert_eq!(criteria.len(), 10);
    assert_eq!(first.timings.len(), 10, "timings on stderr");

    let limits = [(1, 120), (4, 600), (9, 300)];
    let mut failed = Vec::new();
    for c in criteria {
        let id = c["id"].as_u64().unwrap() as usize;
        let mut ok = c["verdict"] == "PASS";
        let mut note = c["summary"].as_str().unwrap_or("").to_string();
        if let Some(&(_, secs)) = limits.iter().find(|l| l.0 == id) {
            let t = first.timings[id - 1];
            ok &= t < Duration::from_secs(secs);
            note += &format!("; {:.2}s of {secs}s", t.as_secs_f64());
        }
        if id == 10 {
            let same = first.stdout == second.stdout;
            ok &= same;
            note += &format!("; two CLI runs byte-identical: {same}");
        }
        // straight to stdout so the lines survive test output capture
        let line = format!("criterion {id:>2} {}: {note}\n", if ok { "PASS" } else { "FAIL" });
        std::io::stdout().lock().write_all(line.as_bytes()).unwrap();
        if !ok {
            failed.push(id);
        }
    }
    assert_eq!(first.code, 0, "corpus exit code");
    assert!(failed.is_empty(), "failed criteria {failed:?}");
}
