//! The `export` subcommand: convert a built graph between the json and
//! edges-tsv formats.

use std::path::Path;

use glottograph::graph::{export_graph, GraphFormat};

use crate::stats_cmd::load;
use crate::CliError;

#[derive(Debug, serde::Serialize)]
pub struct ExportSummary {
    pub command: &'static str,
    pub format: String,
    pub edges: usize,
    pub out: String,
}

pub fn run(graph_path: &Path, format: &str, out: &Path) -> Result<ExportSummary, CliError> {
    let parsed: GraphFormat = format
        .parse()
        .map_err(|e: glottograph::graph::GraphError| CliError::Config(e.to_string()))?;
    let graph = load(graph_path)?;
    export_graph(&graph, out, parsed)?;
    Ok(ExportSummary {
        command: "export",
        format: format.to_string(),
        edges: graph.edge_count(),
        out: out.display().to_string(),
    })
}
