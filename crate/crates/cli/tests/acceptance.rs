//! One pass/fail line per acceptance criterion. Exits non-zero if any fail.

use std::path::Path;
use std::process::{Command, ExitCode};

use hoplab_cli::criteria::{self, CriterionReport};

/// Runs the built binary twice per determinism config and compares every
/// artifact byte for byte.
fn binary_is_deterministic(scratch: &Path) -> Result<(), String> {
    let bin = env!("CARGO_BIN_EXE_hoplab");
    for (i, text) in criteria::DETERMINISM_CONFIGS.iter().enumerate() {
        let config = scratch.join(format!("run{i}.conf"));
        std::fs::write(&config, text).map_err(|e| e.to_string())?;
        let mut outputs = Vec::new();
        for side in ["a", "b"] {
            let dir = scratch.join(format!("run{i}_{side}"));
            let status = Command::new(bin)
                .arg(&config)
                .env("HOPLAB_OUT_DIR", &dir)
                .output()
                .map_err(|e| e.to_string())?
                .status;
            if !status.success() {
                return Err(format!("config {i} exited with {status}"));
            }
            let mut files: Vec<_> = std::fs::read_dir(&dir)
                .map_err(|e| e.to_string())?
                .map(|e| {
                    let path = e.unwrap().path();
                    (
                        path.file_name().unwrap().to_owned(),
                        std::fs::read(&path).unwrap(),
                    )
                })
                .collect();
            files.sort();
            outputs.push(files);
        }
        if outputs[0] != outputs[1] {
            return Err(format!("config {i} output differs between runs"));
        }
    }
    Ok(())
}

fn describe(report: &CriterionReport) -> String {
    let mut parts: Vec<String> = report
        .failures()
        .iter()
        .map(|c| format!("{}: measured {}, expected {}", c.name, c.measured, c.target))
        .collect();
    if !report.within_runtime() {
        parts.push(format!(
            "runtime {:.3?} over limit {:?}",
            report.elapsed,
            report.runtime_limit.unwrap()
        ));
    }
    parts.join("; ")
}

fn main() -> ExitCode {
    let scratch = tempfile::tempdir().expect("temporary directory");
    let mut failed = 0;
    for id in 1..=criteria::COUNT {
        let title = criteria::title(id).unwrap();
        let (pass, detail) = match criteria::evaluate(id, scratch.path()) {
            Ok(mut report) => {
                if id == 12 {
                    let check = binary_is_deterministic(scratch.path());
                    report.checks.push(criteria::Check {
                        name: "binary_runs".into(),
                        measured: check.clone().err().unwrap_or_else(|| "identical".into()),
                        target: "identical".into(),
                        pass: check.is_ok(),
                    });
                }
                let detail = if report.passed() {
                    format!("{} checks, {:.3?}", report.checks.len(), report.elapsed)
                } else {
                    describe(&report)
                };
                (report.passed(), detail)
            }
            Err(e) => (false, e.to_string()),
        };
        failed += usize::from(!pass);
        println!(
            "criterion {id:>2} [{}] {title}: {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria::COUNT - failed,
        criteria::COUNT
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
