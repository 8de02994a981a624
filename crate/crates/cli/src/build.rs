//! The `build` subcommand: ingest everything, compute all distance tables,
//! assemble the graph and write the outputs.
//!
//! Outputs in the configured directory:
//!   graph.json         round-trippable graph document
//!   edges.tsv          one row per pair, fixed column order
//!   contact_edges.tsv  raw km, raw in-between count and neighbour flag
//!   report.json        coverage, pair counts and exclusions

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use glottograph::colex::{build_matrix, select_patterns, semantic_distance_table, PatternMode};
use glottograph::concepts::{
    builtin_set, filter_by_affect, filter_by_concreteness, ConceptSet, ConcretenessMode, SetName,
};
use glottograph::geo::{contact_count_table, geodesic_table, neighbour_flag, ContactConfig};
use glottograph::graph::{
    assemble, export_graph, AssembleConfig, EdgeTable, GraphFormat, LanguageGraph, TableInput,
};
use glottograph::ingest::{
    load_colex, load_languages, load_pair_matrix, load_ratings, load_wordlists, ColexTable,
    LanguageTable, PairValueTable, RatingTable, ScaleSpec,
};
use glottograph::phon::{phonological_distance_table_detailed, PhonDistanceSpec};
use serde::Serialize;

use crate::config::BuildPlan;
use crate::CliError;

#[derive(Debug, Default, Serialize)]
struct AttributeReport {
    languages: usize,
    pairs: usize,
    source: String,
}

#[derive(Debug, Default, Serialize)]
struct Exclusions {
    /// Languages without coordinates, excluded from geo/contact tables.
    missing_coordinates: Vec<String>,
    /// Languages without a genealogy path; genetic distance stays missing.
    missing_genealogy: Vec<String>,
    /// Per concept set, languages with all-zero frequency vectors.
    zero_vector: BTreeMap<String, Vec<String>>,
    /// Pairs dropped from the phonological table for low concept overlap.
    low_overlap_pairs: usize,
    /// Default-selected sets skipped because the data cannot support them.
    skipped_sets: Vec<String>,
}

#[derive(Debug, Serialize)]
struct BuildReport {
    seed: u64,
    languages_total: usize,
    languages_with_coordinates: usize,
    attributes: BTreeMap<String, AttributeReport>,
    exclusions: Exclusions,
    neighbour_threshold: u64,
    min_languages_any: usize,
    min_languages_both: usize,
    min_shared_concepts: usize,
}

/// Summary line printed on success, machine readable.
#[derive(Debug, Serialize)]
pub struct BuildSummary {
    pub command: &'static str,
    pub nodes: usize,
    pub edges: usize,
    pub attributes: usize,
    pub out_dir: String,
}

fn source_note(path: &Path) -> String {
    format!("ingested from {}", path.display())
}

/// The eight concept sets the plan asks for, resolved against the available
/// rating data. `explicit` distinguishes hard failure from skip-and-report.
struct SetPlan {
    sets: Vec<(SetName, ConceptSet, PatternMode, usize)>,
    skipped: Vec<String>,
}

fn resolve_concept_sets(
    plan: &BuildPlan,
    ratings: Option<&RatingTable>,
) -> Result<SetPlan, CliError> {
    let requested: Vec<SetName> = match &plan.concept_sets {
        Some(sets) => sets.clone(),
        None => SetName::ALL.to_vec(),
    };
    let explicit = plan.concept_sets.is_some();
    let mut out = Vec::new();
    let mut skipped = Vec::new();

    let mut concrete: Option<ConceptSet> = None;
    let mut r#abstract: Option<ConceptSet> = None;
    if let Some(table) = ratings {
        concrete = filter_by_concreteness(table, ConcretenessMode::Concrete).ok();
        r#abstract = filter_by_concreteness(table, ConcretenessMode::Abstract).ok();
    }

    for set in requested {
        let resolved: Option<ConceptSet> = match set {
            SetName::Nuclear | SetName::NonNuclear | SetName::Emotion | SetName::Random => {
                Some(builtin_set(set).expect("bundled set"))
            }
            SetName::Concrete => concrete.clone(),
            SetName::Abstract => r#abstract.clone(),
            SetName::AffConcrete => match (&concrete, ratings) {
                (Some(base), Some(table)) => filter_by_affect(base, table).ok(),
                _ => None,
            },
            SetName::AffAbstract => match (&r#abstract, ratings) {
                (Some(base), Some(table)) => filter_by_affect(base, table).ok(),
                _ => None,
            },
        };
        match resolved {
            Some(concepts) => {
                let mode = match set {
                    SetName::Nuclear | SetName::NonNuclear | SetName::Emotion | SetName::Random => {
                        PatternMode::Any
                    }
                    _ => PatternMode::Both,
                };
                let min_languages = match mode {
                    PatternMode::Any => plan.min_languages_any,
                    PatternMode::Both => plan.min_languages_both,
                };
                out.push((set, concepts, mode, min_languages));
            }
            None if explicit => {
                return Err(CliError::Config(format!(
                    "concept set `{set}` requires a ratings table that supports it"
                )));
            }
            None => {
                skipped.push(set.to_string());
            }
        }
    }
    Ok(SetPlan { sets: out, skipped })
}

fn attr_report(table: &PairValueTable, source: &str) -> AttributeReport {
    AttributeReport {
        languages: table.ids().len(),
        pairs: table.len(),
        source: source.to_string(),
    }
}

/// Appendix-style contact edge list: raw km, raw count, neighbour flag.
fn write_contact_edges(
    km: &PairValueTable,
    counts: &PairValueTable,
    threshold: u64,
    path: &Path,
) -> Result<(), CliError> {
    let file = File::create(path)
        .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    let config = ContactConfig {
        neighbour_threshold: threshold,
    };
    let mut out = String::from("id_a\tid_b\tkm\tcontact_count\tneighbour\n");
    for ((a, b), distance) in km.iter() {
        let count = counts.get(a, b).unwrap_or(0.0) as u64;
        let flag = u8::from(neighbour_flag(count, &config));
        out.push_str(&format!("{a}\t{b}\t{distance}\t{count}\t{flag}\n"));
    }
    w.write_all(out.as_bytes())
        .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))
}

pub fn run(plan: &BuildPlan) -> Result<BuildSummary, CliError> {
    std::fs::create_dir_all(&plan.out_dir)
        .map_err(|e| CliError::Internal(format!("cannot create {}: {e}", plan.out_dir.display())))?;

    let languages: LanguageTable = load_languages(&plan.languages)?;
    let ratings: Option<RatingTable> = match &plan.ratings {
        Some(path) => Some(load_ratings(path, &ScaleSpec::default())?),
        None => None,
    };
    let colex: Option<ColexTable> = match &plan.colex {
        Some(path) => Some(load_colex(path)?),
        None => None,
    };

    let mut report = BuildReport {
        seed: plan.seed,
        languages_total: languages.len(),
        languages_with_coordinates: languages
            .records()
            .iter()
            .filter(|r| r.has_coordinates())
            .count(),
        attributes: BTreeMap::new(),
        exclusions: Exclusions::default(),
        neighbour_threshold: plan.neighbour_threshold,
        min_languages_any: plan.min_languages_any,
        min_languages_both: plan.min_languages_both,
        min_shared_concepts: plan.min_shared_concepts,
    };
    report.exclusions.missing_coordinates = languages
        .records()
        .iter()
        .filter(|r| !r.has_coordinates())
        .map(|r| r.id.clone())
        .collect();
    report.exclusions.missing_coordinates.sort();
    report.exclusions.missing_genealogy = languages
        .records()
        .iter()
        .filter(|r| glottograph::graph::genealogy_path(r).is_empty())
        .map(|r| r.id.clone())
        .collect();
    report.exclusions.missing_genealogy.sort();

    let mut inputs: Vec<TableInput> = Vec::new();

    // Geodesic and contact tables over coordinated languages.
    let km = geodesic_table(&languages);
    let counts = contact_count_table(&languages);
    if !km.is_empty() {
        report
            .attributes
            .insert("geo_dist".into(), attr_report(&km, "haversine over node coordinates"));
        report.attributes.insert(
            "contact_dist".into(),
            attr_report(&counts, "in-between counts over node coordinates"),
        );
        write_contact_edges(
            &km,
            &counts,
            plan.neighbour_threshold,
            &plan.out_dir.join("contact_edges.tsv"),
        )?;
        inputs.push(TableInput::new(
            EdgeTable::GeoKm,
            km,
            "haversine over node coordinates",
        ));
        inputs.push(TableInput::new(
            EdgeTable::ContactCount,
            counts,
            "in-between counts over node coordinates",
        ));
    }

    // Semantic distances per concept set.
    if let Some(colex) = &colex {
        let set_plan = resolve_concept_sets(plan, ratings.as_ref())?;
        report.exclusions.skipped_sets = set_plan.skipped;
        let node_ids: Vec<String> = languages.sorted_ids();
        for (set, concepts, mode, min_languages) in set_plan.sets {
            let patterns = match select_patterns(colex, &concepts, mode, min_languages) {
                Ok(p) => p,
                Err(glottograph::colex::ColexError::EmptyPatternList { .. })
                    if plan.concept_sets.is_none() =>
                {
                    log::warn!("no patterns for default set `{set}`; skipping");
                    report.exclusions.skipped_sets.push(set.to_string());
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            let matrix = build_matrix(colex, &patterns, &node_ids)?;
            let zero: Vec<String> = matrix
                .zero_row_languages()
                .into_iter()
                .map(|s| s.to_string())
                .collect();
            if !zero.is_empty() {
                report.exclusions.zero_vector.insert(set.to_string(), zero);
            }
            let table = semantic_distance_table(&matrix);
            let source = format!(
                "cosine over {} patterns ({} concepts, mode {:?}, min languages {})",
                matrix.n_patterns(),
                concepts.len(),
                mode,
                min_languages
            );
            report
                .attributes
                .insert(set.to_string(), attr_report(&table, &source));
            inputs.push(TableInput::new(EdgeTable::Semantic(set), table, source));
        }
        report.exclusions.skipped_sets.sort();
        report.exclusions.skipped_sets.dedup();
    }

    // Phonological distances: precomputed matrix wins over wordlists.
    match (&plan.phon_matrix, &plan.wordlists) {
        (Some(matrix_path), wordlists) => {
            if wordlists.is_some() {
                log::warn!("both phon_matrix and wordlists supplied; using the matrix");
            }
            let table = load_pair_matrix(matrix_path, Some((0.0, 1.0)))?;
            report
                .attributes
                .insert("phon".into(), attr_report(&table, &source_note(matrix_path)));
            inputs.push(TableInput::new(
                EdgeTable::Phon,
                table,
                source_note(matrix_path),
            ));
        }
        (None, Some(wordlist_path)) => {
            let wordlists = load_wordlists(wordlist_path)?;
            let spec = PhonDistanceSpec::new(
                builtin_set(SetName::Nuclear).expect("bundled set"),
                plan.min_shared_concepts,
            )?;
            let (table, phon_report) = phonological_distance_table_detailed(&wordlists, &spec);
            report.exclusions.low_overlap_pairs = phon_report.omitted_low_overlap;
            let source = format!(
                "mean of per-concept minimum LDN over nuclear concepts; {}",
                source_note(wordlist_path)
            );
            report
                .attributes
                .insert("phon".into(), attr_report(&table, &source));
            inputs.push(TableInput::new(EdgeTable::Phon, table, source));
        }
        (None, None) => {}
    }

    if let Some(path) = &plan.syntactic_matrix {
        let table = load_pair_matrix(path, Some((0.0, 1.0)))?;
        report
            .attributes
            .insert("syntactic".into(), attr_report(&table, &source_note(path)));
        inputs.push(TableInput::new(EdgeTable::Syntactic, table, source_note(path)));
    }
    if let Some(path) = &plan.genetic_matrix {
        let table = load_pair_matrix(path, Some((0.0, 1.0)))?;
        report
            .attributes
            .insert("genetic".into(), attr_report(&table, &source_note(path)));
        inputs.push(TableInput::new(EdgeTable::Genetic, table, source_note(path)));
    }

    let graph: LanguageGraph = assemble(
        &languages,
        inputs,
        &AssembleConfig {
            contact: ContactConfig {
                neighbour_threshold: plan.neighbour_threshold,
            },
            derive_genetic: true,
        },
    )?;

    export_graph(&graph, &plan.out_dir.join("graph.json"), GraphFormat::Json)?;
    export_graph(&graph, &plan.out_dir.join("edges.tsv"), GraphFormat::EdgesTsv)?;

    let report_path = plan.out_dir.join("report.json");
    let body = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Internal(format!("report serialization: {e}")))?;
    std::fs::write(&report_path, body + "\n")
        .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", report_path.display())))?;

    let attributes: BTreeSet<String> = report.attributes.keys().cloned().collect();
    Ok(BuildSummary {
        command: "build",
        nodes: graph.node_count(),
        edges: graph.edge_count(),
        attributes: attributes.len(),
        out_dir: plan.out_dir.display().to_string(),
    })
}
