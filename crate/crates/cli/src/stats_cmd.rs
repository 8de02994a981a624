//! The `stats` subcommands: pearson, beta, ols and ari reports over a built
//! graph, written as CSV plus a JSON metadata sidecar echoing parameters
//! and seed.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use glottograph::concepts::SetName;
use glottograph::graph::{AttrId, LanguageGraph, RelatednessLevel};
use glottograph::stats::{
    family_ari_report, group_pearson, ols, standardized_beta, stratified_sample, GroupKey,
};
use serde::Serialize;
use serde_json::json;

use crate::CliError;

pub fn load(graph_path: &Path) -> Result<LanguageGraph, CliError> {
    Ok(glottograph::graph::load_graph(graph_path)?)
}

pub fn parse_attr(name: &str) -> Result<AttrId, CliError> {
    name.parse::<AttrId>()
        .map_err(|e| CliError::Config(e.to_string()))
}

pub fn parse_attr_list(raw: &str) -> Result<Vec<AttrId>, CliError> {
    let mut out = Vec::new();
    for piece in raw.split(',') {
        let piece = piece.trim();
        if !piece.is_empty() {
            out.push(parse_attr(piece)?);
        }
    }
    Ok(out)
}

pub fn parse_sets(raw: &str) -> Result<Vec<SetName>, CliError> {
    let mut out = Vec::new();
    for piece in raw.split(',') {
        let piece = piece.trim();
        if !piece.is_empty() {
            out.push(
                piece
                    .parse::<SetName>()
                    .map_err(|e| CliError::Config(e.to_string()))?,
            );
        }
    }
    Ok(out)
}

fn write_output(path: &Path, body: &str) -> Result<(), CliError> {
    std::fs::write(path, body)
        .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))
}

/// Sidecar `<out>.meta.json` with the analysis name, parameters and seed.
fn write_meta(out: &Path, meta: serde_json::Value) -> Result<(), CliError> {
    let path = PathBuf::from(format!("{}.meta.json", out.display()));
    let body = serde_json::to_string_pretty(&meta)
        .map_err(|e| CliError::Internal(format!("metadata serialization: {e}")))?;
    write_output(&path, &(body + "\n"))
}

#[derive(Debug, Serialize)]
pub struct StatsSummary {
    pub command: &'static str,
    pub analysis: String,
    pub rows: usize,
    pub out: String,
}

fn summary(analysis: &str, rows: usize, out: &Path) -> StatsSummary {
    StatsSummary {
        command: "stats",
        analysis: analysis.to_string(),
        rows,
        out: out.display().to_string(),
    }
}

pub fn pearson_report(
    graph_path: &Path,
    x: &str,
    y: &str,
    group: &str,
    out: &Path,
) -> Result<StatsSummary, CliError> {
    let graph = load(graph_path)?;
    let attr_x = parse_attr(x)?;
    let attr_y = parse_attr(y)?;
    let key: GroupKey = group.parse().map_err(CliError::Config)?;
    let results = group_pearson(&graph, attr_x, attr_y, key);
    let mut body = String::from("group,r,p,n\n");
    for r in &results {
        body.push_str(&format!("{},{},{},{}\n", r.group, r.r, r.p_value, r.n));
    }
    write_output(out, &body)?;
    write_meta(
        out,
        json!({
            "analysis": "pearson",
            "graph": graph_path.display().to_string(),
            "x": x,
            "y": y,
            "group": group,
        }),
    )?;
    Ok(summary("pearson", results.len(), out))
}

pub fn beta_report(
    graph_path: &Path,
    target: &str,
    predictor: &str,
    controls: &str,
    by_relatedness: bool,
    out: &Path,
) -> Result<StatsSummary, CliError> {
    let graph = load(graph_path)?;
    let target_attr = parse_attr(target)?;
    let predictor_attr = parse_attr(predictor)?;
    let control_attrs = parse_attr_list(controls)?;
    let results = standardized_beta(
        &graph,
        target_attr,
        predictor_attr,
        &control_attrs,
        by_relatedness,
    )?;
    let mut body = String::from("group,target,predictor,controls,beta,ci_low,ci_high,p,n\n");
    for r in &results {
        body.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.group,
            r.target,
            r.predictor,
            r.controls.join("+"),
            r.beta,
            r.ci95.0,
            r.ci95.1,
            r.p_value.map(|p| p.to_string()).unwrap_or_else(|| "NA".into()),
            r.n
        ));
    }
    write_output(out, &body)?;
    write_meta(
        out,
        json!({
            "analysis": "beta",
            "graph": graph_path.display().to_string(),
            "target": target,
            "predictor": predictor,
            "controls": controls,
            "by_relatedness": by_relatedness,
        }),
    )?;
    Ok(summary("beta", results.len(), out))
}

#[allow(clippy::too_many_arguments)]
pub fn ols_report(
    graph_path: &Path,
    target: &str,
    predictors: &str,
    by_relatedness: bool,
    sample: Option<usize>,
    seed: u64,
    out: &Path,
) -> Result<StatsSummary, CliError> {
    let graph = load(graph_path)?;
    let target_attr = parse_attr(target)?;
    let predictor_attrs = parse_attr_list(predictors)?;
    if predictor_attrs.is_empty() {
        return Err(CliError::Config("no predictors given".into()));
    }

    // Optional stratified subsample (by relatedness, proportional quotas).
    let keep: Option<BTreeSet<(String, String)>> = match sample {
        Some(n) => Some(
            stratified_sample(&graph, GroupKey::Relatedness, n, seed)?
                .into_iter()
                .collect(),
        ),
        None => None,
    };
    let in_sample = |a: &str, b: &str| -> bool {
        match &keep {
            Some(set) => set.contains(&(a.to_string(), b.to_string())),
            None => true,
        }
    };

    // Group -> (design columns, y)
    let groups: Vec<(String, Vec<(&str, &str)>)> = if by_relatedness {
        RelatednessLevel::ALL
            .iter()
            .map(|level| {
                (
                    level.as_str().to_string(),
                    graph
                        .edges()
                        .filter(|(a, b, attrs)| {
                            attrs.relatedness == *level && in_sample(a, b)
                        })
                        .map(|(a, b, _)| (a, b))
                        .collect(),
                )
            })
            .collect()
    } else {
        vec![(
            "all".to_string(),
            graph
                .edges()
                .filter(|(a, b, _)| in_sample(a, b))
                .map(|(a, b, _)| (a, b))
                .collect(),
        )]
    };

    let mut body = String::from("group,term,coef,std_err,ci_low,ci_high,t,p,n\n");
    let mut rows = 0usize;
    for (label, pairs) in groups {
        let mut y = Vec::new();
        let mut columns: Vec<(String, Vec<f64>)> = predictor_attrs
            .iter()
            .map(|a| (a.as_string(), Vec::new()))
            .collect();
        'pairs: for (a, b) in pairs {
            let attrs = graph.edge(a, b).expect("edge listed by graph");
            let Some(ty) = attrs.value(target_attr) else { continue };
            let mut values = Vec::with_capacity(predictor_attrs.len());
            for attr in &predictor_attrs {
                match attrs.value(*attr) {
                    Some(v) => values.push(v),
                    None => continue 'pairs,
                }
            }
            y.push(ty);
            for (column, v) in columns.iter_mut().zip(values) {
                column.1.push(v);
            }
        }
        match ols(&columns, &y) {
            Ok(fit) => {
                for c in &fit.coefficients {
                    body.push_str(&format!(
                        "{label},{},{},{},{},{},{},{},{}\n",
                        c.name, c.estimate, c.std_err, c.ci95.0, c.ci95.1, c.t, c.p_value, fit.n
                    ));
                    rows += 1;
                }
            }
            Err(e) => log::warn!("ols: group `{label}` skipped: {e}"),
        }
    }
    if rows == 0 {
        return Err(CliError::Data(format!(
            "no group could be fitted for target `{target}` on predictors `{predictors}`"
        )));
    }
    write_output(out, &body)?;
    write_meta(
        out,
        json!({
            "analysis": "ols",
            "graph": graph_path.display().to_string(),
            "target": target,
            "predictors": predictors,
            "by_relatedness": by_relatedness,
            "sample": sample,
            "seed": seed,
        }),
    )?;
    Ok(summary("ols", rows, out))
}

pub fn ari_report(
    graph_path: &Path,
    sets: &str,
    top_families: usize,
    seed: u64,
    out: &Path,
) -> Result<StatsSummary, CliError> {
    let graph = load(graph_path)?;
    let set_list = parse_sets(sets)?;
    let reports = family_ari_report(&graph, &set_list, top_families, seed)?;
    let mut body = String::from("family,languages,set_a,set_b,ari\n");
    let mut rows = 0usize;
    for report in &reports {
        for i in 0..report.sets.len() {
            for j in (i + 1)..report.sets.len() {
                body.push_str(&format!(
                    "{},{},{},{},{}\n",
                    report.family,
                    report.languages,
                    report.sets[i],
                    report.sets[j],
                    report.ari[i][j]
                ));
                rows += 1;
            }
        }
    }
    write_output(out, &body)?;
    write_meta(
        out,
        json!({
            "analysis": "ari",
            "graph": graph_path.display().to_string(),
            "sets": sets,
            "top_families": top_families,
            "seed": seed,
        }),
    )?;
    Ok(summary("ari", rows, out))
}
