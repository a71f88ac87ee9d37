//! Runs `cyclic verify all --seed 42` twice and prints one line per acceptance criterion.
//! Built without the test harness so the lines always reach stdout.

use std::process::{Command, ExitCode};

use serde_json::Value;

fn verify_all() -> (Vec<u8>, bool) {
    let out = Command::new(env!("CARGO_BIN_EXE_cyclic"))
        .args(["verify", "all", "--seed", "42"])
        .output()
        .expect("binary runs");
    (out.stdout, out.status.success())
}

fn main() -> ExitCode {
    let (first, ok) = verify_all();
    let (second, _) = verify_all();
    let report: Value = serde_json::from_slice(&first).expect("report is JSON");
    let records = report["records"].as_array().expect("records");
    let identical = first == second;

    let mut failed = Vec::new();
    for c in 1..=11u64 {
        let found: Vec<&Value> = records.iter().filter(|r| r["criterion"] == c).collect();
        let (pass, line) = match found.as_slice() {
            [r] => {
                let mut pass = r["pass"] == true;
                if c == 11 {
                    pass &= identical;
                }
                let line = format!(
                    "{} residual={:.3e} tolerance={:.3e} cases={} samples={}{}",
                    r["name"].as_str().unwrap_or("?"),
                    r["residual"].as_f64().unwrap_or(f64::NAN),
                    r["tolerance"].as_f64().unwrap_or(f64::NAN),
                    r["cases"],
                    r["samples"],
                    if r["escalated"] == true { " escalated" } else { "" },
                );
                (pass, line)
            }
            _ => (false, format!("expected one record, found {}", found.len())),
        };
        println!("{} criterion {c:>2}: {line}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            failed.push(c);
        }
    }
    println!("reports byte-identical across runs: {identical}");
    if ok && failed.is_empty() {
        println!("acceptance: all 11 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}, verify exit status ok = {ok}");
        ExitCode::FAILURE
    }
}
