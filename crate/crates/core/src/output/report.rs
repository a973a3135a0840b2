//! Plain-text and JSON rendering of verification results.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::OutputError;
use crate::oracle::suite::Report;
use crate::oracle::BoundSearch;

pub fn render_report(report: &Report) -> String {
    let width = report.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for c in &report.checks {
        let _ = writeln!(
            out,
            "{} {:width$}  value={:.3e}  tol={:.1e}  {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.max_error,
            c.tolerance,
            c.detail
        );
    }
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    let _ = writeln!(out, "{} checks, {} failed", report.checks.len(), failed);
    out
}

pub fn render_bound_search(b: &BoundSearch) -> String {
    let bound = 2.0 * std::f64::consts::LN_2;
    let mut out = String::new();
    let _ = writeln!(out, "samples        {}", b.samples);
    let _ = writeln!(out, "seed           {}", b.seed);
    let _ = writeln!(out, "sampled min    {:.12}", b.sampled_min);
    let _ = writeln!(out, "refined min    {:.12}", b.min_sum);
    let _ = writeln!(out, "2 ln 2         {:.12}", bound);
    let _ = writeln!(out, "gap            {:.3e}", b.min_sum - bound);
    let state = b
        .argmin
        .iter()
        .zip(["C", "B", "A"])
        .map(|((re, im), name)| format!("d{name}={re:+.6}{im:+.6}i"))
        .collect::<Vec<_>>()
        .join(" ");
    let _ = writeln!(out, "argmin         {state}");
    out
}

pub fn write_json<T: serde::Serialize>(value: &T, path: impl AsRef<Path>) -> Result<(), OutputError> {
    let path = path.as_ref();
    let text =
        serde_json::to_string_pretty(value).map_err(|source| OutputError::Json { path: path.to_path_buf(), source })?;
    fs::write(path, text + "\n").map_err(|e| OutputError::io(path, e))
}
