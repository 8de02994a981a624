//! The `dist` subcommand: per-relatedness-level histogram of one edge
//! attribute, 64 equal bins over [0, 1].

use std::path::Path;

use glottograph::stats::histogram_by_relatedness;
use serde_json::json;

use crate::stats_cmd::{load, parse_attr};
use crate::CliError;

pub const BINS: usize = 64;

#[derive(Debug, serde::Serialize)]
pub struct DistSummary {
    pub command: &'static str,
    pub attr: String,
    pub rows: usize,
    pub out: String,
}

pub fn run(graph_path: &Path, attr: &str, out: &Path) -> Result<DistSummary, CliError> {
    let graph = load(graph_path)?;
    let attr_id = parse_attr(attr)?;
    let histogram = histogram_by_relatedness(&graph, attr_id, BINS);
    let mut body = String::from("relatedness,bin,bin_low,bin_high,count\n");
    let mut rows = 0usize;
    for (level, counts) in &histogram {
        for (i, count) in counts.iter().enumerate() {
            let lo = i as f64 / BINS as f64;
            let hi = (i + 1) as f64 / BINS as f64;
            body.push_str(&format!("{level},{i},{lo},{hi},{count}\n"));
            rows += 1;
        }
    }
    std::fs::write(out, body)
        .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", out.display())))?;
    let meta = json!({
        "analysis": "dist",
        "graph": graph_path.display().to_string(),
        "attr": attr,
        "bins": BINS,
    });
    let meta_path = format!("{}.meta.json", out.display());
    std::fs::write(
        &meta_path,
        serde_json::to_string_pretty(&meta)
            .map_err(|e| CliError::Internal(format!("metadata serialization: {e}")))?
            + "\n",
    )
    .map_err(|e| CliError::Internal(format!("cannot write {meta_path}: {e}")))?;
    Ok(DistSummary {
        command: "dist",
        attr: attr.to_string(),
        rows,
        out: out.display().to_string(),
    })
}
