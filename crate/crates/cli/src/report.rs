//! Line-oriented run reports: `key: value` pairs, a timing line, and a
//! final `status: pass|fail`. The exit code mirrors the status. Tooling
//! that diffs reports strips the `time_ms` line first.

use sha2::{Digest, Sha256};
use std::process::ExitCode;
use std::time::Instant;

pub struct Report {
    lines: Vec<(String, String)>,
    started: Instant,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report { lines: Vec::new(), started: Instant::now() };
        r.put("command", command);
        r
    }

    pub fn put(&mut self, key: impl Into<String>, value: impl ToString) {
        self.lines.push((key.into(), value.to_string()));
    }

    pub fn digest(&mut self, key: &str, bytes: &[u8]) {
        self.put(format!("sha256.{key}"), format!("{:x}", Sha256::digest(bytes)));
    }

    /// Prints the report and turns the verdict into the exit code.
    pub fn finish(mut self, pass: bool) -> ExitCode {
        self.put("time_ms", self.started.elapsed().as_millis());
        for (key, value) in &self.lines {
            println!("{key}: {value}");
        }
        println!("status: {}", if pass { "pass" } else { "fail" });
        if pass {
            ExitCode::SUCCESS
        } else {
            ExitCode::FAILURE
        }
    }
}

/// Space-separated list for witness lines; `-` when empty so the value
/// column is never blank.
pub fn id_list<T: ToString>(ids: &[T]) -> String {
    if ids.is_empty() {
        return "-".into();
    }
    ids.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}
