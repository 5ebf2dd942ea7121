//! CSV and summary emission. All floating-point output is printed at 17
//! significant digits so text round-trips are lossless. CSV bodies are
//! deterministic for a fixed config and seed; wall-clock data lives in
//! headers and in the separate timing file.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use hesseig_core::verify::CheckReport;

/// 17 significant digits, locale-free.
pub fn fnum(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn header_comment(command: &str, seed: u64) -> String {
    let unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("# hesseig {command} seed={seed} generated_unix={unix}\n")
}

/// Per-iteration solver log: deterministic body (iter, lambda, residual,
/// functional); wall-clock times go to the companion timing file.
pub struct RunLog {
    rows: Vec<(usize, f64, f64, f64)>,
    walls: Vec<f64>,
}

impl RunLog {
    pub fn new() -> Self {
        RunLog {
            rows: Vec::new(),
            walls: Vec::new(),
        }
    }

    pub fn push(&mut self, iter: usize, lambda: f64, residual: f64, functional: f64, wall: f64) {
        self.rows.push((iter, lambda, residual, functional));
        self.walls.push(wall);
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn write(&self, dir: &Path, command: &str, seed: u64, total_wall: f64) -> io::Result<()> {
        let mut body = header_comment(command, seed);
        let _ = writeln!(body, "# total_wall_s={total_wall}");
        body.push_str("iter,lambda,residual,functional\n");
        for (iter, lambda, residual, functional) in &self.rows {
            let _ = writeln!(
                body,
                "{iter},{},{},{}",
                fnum(*lambda),
                fnum(*residual),
                fnum(*functional)
            );
        }
        fs::write(dir.join("run_log.csv"), body)?;

        let mut timing = String::from("# wall-clock per logged iteration; not reproducible\n");
        timing.push_str("iter,wall_s\n");
        for ((iter, ..), wall) in self.rows.iter().zip(&self.walls) {
            let _ = writeln!(timing, "{iter},{wall}");
        }
        fs::write(dir.join("timing.csv"), timing)
    }
}

impl Default for RunLog {
    fn default() -> Self {
        Self::new()
    }
}

/// key = value summary, floats at full precision.
pub struct Summary {
    lines: Vec<(String, String)>,
}

impl Summary {
    pub fn new(command: &str) -> Self {
        Summary {
            lines: vec![("command".into(), command.into())],
        }
    }

    pub fn push(&mut self, key: &str, value: impl Into<String>) {
        self.lines.push((key.into(), value.into()));
    }

    pub fn push_f64(&mut self, key: &str, value: f64) {
        self.push(key, fnum(value));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.lines {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }

    pub fn write(&self, dir: &Path) -> io::Result<()> {
        fs::write(dir.join("summary.txt"), self.render())
    }
}

/// Details CSV of a check: one row per sample with inputs hash, lhs, rhs,
/// ratio.
pub fn write_check_csv(dir: &Path, report: &CheckReport, seed: u64) -> io::Result<()> {
    let mut body = header_comment(report.name, seed);
    body.push_str("input_hash,lhs,rhs,ratio\n");
    for row in &report.rows {
        let _ = writeln!(
            body,
            "{:016x},{},{},{}",
            row.input_hash,
            fnum(row.lhs),
            fnum(row.rhs),
            fnum(row.ratio)
        );
    }
    fs::write(dir.join("details.csv"), body)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnum_round_trips() {
        for x in [core::f64::consts::PI, -1.0 / 3.0, 1e-300, 0.0] {
            let s = fnum(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }
}
