//! The rich language graph: nodes with genealogy and coordinates, edges
//! with the full per-pair distance table.
//!
//! Edges exist for every pair appearing in at least one input table; the
//! attributes a pair lacks stay missing rather than being imputed. Node and
//! edge order are canonical (sorted ids, sorted pairs), so assembly and
//! serialization are deterministic.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::concepts::SetName;
use crate::geo::{neighbour_flag, rescale_unit, ContactConfig};
use crate::ingest::{LanguageRecord, LanguageTable, PairValueTable};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("table `{attr}` references language id(s) not in the node table: {}", .ids.join(", "))]
    UnknownLanguageId { attr: String, ids: Vec<String> },
    #[error("attribute `{attr}` supplied twice with conflicting values for pair ({}, {})", .pair.0, .pair.1)]
    DuplicateAttribute { attr: String, pair: (String, String) },
    #[error("attribute `{attr}` value {value} for pair ({}, {}) outside [0, 1]", .pair.0, .pair.1)]
    ValueOutOfRange {
        attr: String,
        pair: (String, String),
        value: f64,
    },
    #[error("language `{0}` has no genealogical classification path")]
    MissingPath(String),
    #[error("unknown edge attribute `{0}`")]
    UnknownAttribute(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {detail}")]
    Format { path: String, detail: String },
}

/// Genealogical relatedness of a pair, from most to least specific match.
/// Empty genealogy fields never match.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelatednessLevel {
    /// Identical language branch.
    Lower,
    /// Identical genus.
    Mid,
    /// Identical family.
    Higher,
    Unrelated,
}

impl RelatednessLevel {
    pub const ALL: [RelatednessLevel; 4] = [
        RelatednessLevel::Lower,
        RelatednessLevel::Mid,
        RelatednessLevel::Higher,
        RelatednessLevel::Unrelated,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RelatednessLevel::Lower => "lower",
            RelatednessLevel::Mid => "mid",
            RelatednessLevel::Higher => "higher",
            RelatednessLevel::Unrelated => "unrelated",
        }
    }
}

impl std::fmt::Display for RelatednessLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Most specific matching level: branch, then genus, then family.
pub fn relatedness_level(a: &LanguageRecord, b: &LanguageRecord) -> RelatednessLevel {
    relatedness_with_label(a, b).0
}

/// Relatedness level plus the shared genealogical label that produced it.
pub fn relatedness_with_label(
    a: &LanguageRecord,
    b: &LanguageRecord,
) -> (RelatednessLevel, Option<String>) {
    if !a.branch.is_empty() && a.branch == b.branch {
        (RelatednessLevel::Lower, Some(a.branch.clone()))
    } else if !a.genus.is_empty() && a.genus == b.genus {
        (RelatednessLevel::Mid, Some(a.genus.clone()))
    } else if !a.family.is_empty() && a.family == b.family {
        (RelatednessLevel::Higher, Some(a.family.clone()))
    } else {
        (RelatednessLevel::Unrelated, None)
    }
}

/// Classification path from root to the most specific node: family, genus,
/// branch, parent, skipping empty fields.
pub fn genealogy_path(rec: &LanguageRecord) -> Vec<&str> {
    [
        rec.family.as_str(),
        rec.genus.as_str(),
        rec.branch.as_str(),
        rec.parent.as_str(),
    ]
    .into_iter()
    .filter(|s| !s.is_empty())
    .collect()
}

/// Tree distance from classification paths: one minus the longest common
/// prefix over the longer path. Zero for identical paths, one for disjoint
/// roots.
pub fn genetic_distance(a: &LanguageRecord, b: &LanguageRecord) -> Result<f64, GraphError> {
    let pa = genealogy_path(a);
    let pb = genealogy_path(b);
    if pa.is_empty() {
        return Err(GraphError::MissingPath(a.id.clone()));
    }
    if pb.is_empty() {
        return Err(GraphError::MissingPath(b.id.clone()));
    }
    let common = pa.iter().zip(&pb).take_while(|(x, y)| **x == **y).count();
    Ok(1.0 - common as f64 / pa.len().max(pb.len()) as f64)
}

/// Per-concept-set semantic distances, all optional.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SemanticDistances([Option<f64>; 8]);

impl SemanticDistances {
    pub fn get(&self, set: SetName) -> Option<f64> {
        self.0[set.index()]
    }

    pub fn set(&mut self, set: SetName, value: f64) {
        self.0[set.index()] = Some(value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (SetName, f64)> + '_ {
        SetName::ALL
            .iter()
            .filter_map(|&s| self.0[s.index()].map(|v| (s, v)))
    }
}

/// Everything known about one language pair. Missing attributes are
/// first-class; only the relatedness classification is always present.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EdgeAttributes {
    pub geo_dist: Option<f64>,
    pub contact_dist: Option<f64>,
    pub neighbour: Option<bool>,
    pub relatedness: RelatednessLevel,
    /// The shared branch/genus/family name behind `relatedness`.
    pub relatedness_label: Option<String>,
    pub genetic: Option<f64>,
    pub phon: Option<f64>,
    pub syntactic: Option<f64>,
    pub semantic: SemanticDistances,
}

impl Default for RelatednessLevel {
    fn default() -> Self {
        RelatednessLevel::Unrelated
    }
}

/// Name of an edge attribute carrying a numeric value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AttrId {
    GeoDist,
    ContactDist,
    Neighbour,
    Genetic,
    Phon,
    Syntactic,
    Semantic(SetName),
}

impl AttrId {
    pub fn as_string(&self) -> String {
        match self {
            AttrId::GeoDist => "geo_dist".into(),
            AttrId::ContactDist => "contact_dist".into(),
            AttrId::Neighbour => "neighbour".into(),
            AttrId::Genetic => "genetic".into(),
            AttrId::Phon => "phon".into(),
            AttrId::Syntactic => "syntactic".into(),
            AttrId::Semantic(set) => set.as_str().into(),
        }
    }
}

impl std::fmt::Display for AttrId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.as_string())
    }
}

impl std::str::FromStr for AttrId {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "geo_dist" => Ok(AttrId::GeoDist),
            "contact_dist" => Ok(AttrId::ContactDist),
            "neighbour" => Ok(AttrId::Neighbour),
            "genetic" => Ok(AttrId::Genetic),
            "phon" => Ok(AttrId::Phon),
            "syntactic" => Ok(AttrId::Syntactic),
            other => other
                .parse::<SetName>()
                .map(AttrId::Semantic)
                .map_err(|_| GraphError::UnknownAttribute(other.to_string())),
        }
    }
}

impl EdgeAttributes {
    /// Numeric view of an attribute; the neighbour flag reads as 0.0/1.0.
    pub fn value(&self, attr: AttrId) -> Option<f64> {
        match attr {
            AttrId::GeoDist => self.geo_dist,
            AttrId::ContactDist => self.contact_dist,
            AttrId::Neighbour => self.neighbour.map(|n| if n { 1.0 } else { 0.0 }),
            AttrId::Genetic => self.genetic,
            AttrId::Phon => self.phon,
            AttrId::Syntactic => self.syntactic,
            AttrId::Semantic(set) => self.semantic.get(set),
        }
    }
}

/// Which edge attribute a [`TableInput`] feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeTable {
    /// Raw geodesic kilometers; rescaled to `[0, 1]` during assembly.
    GeoKm,
    /// Raw in-between counts; rescaled, and thresholded into the neighbour
    /// flag.
    ContactCount,
    Genetic,
    Phon,
    Syntactic,
    Semantic(SetName),
}

impl EdgeTable {
    fn attr_name(&self) -> String {
        match self {
            EdgeTable::GeoKm => "geo_dist".into(),
            EdgeTable::ContactCount => "contact_dist".into(),
            EdgeTable::Genetic => "genetic".into(),
            EdgeTable::Phon => "phon".into(),
            EdgeTable::Syntactic => "syntactic".into(),
            EdgeTable::Semantic(set) => set.as_str().into(),
        }
    }

    /// Whether values must already be in `[0, 1]` when supplied.
    fn unit_range(&self) -> bool {
        !matches!(self, EdgeTable::GeoKm | EdgeTable::ContactCount)
    }
}

/// One distance table feeding assembly, with a human-readable source note
/// for the provenance map.
#[derive(Debug, Clone)]
pub struct TableInput {
    pub table: EdgeTable,
    pub values: PairValueTable,
    pub source: String,
}

impl TableInput {
    pub fn new(table: EdgeTable, values: PairValueTable, source: impl Into<String>) -> Self {
        Self {
            table,
            values,
            source: source.into(),
        }
    }
}

/// Assembly options.
#[derive(Debug, Clone)]
pub struct AssembleConfig {
    pub contact: ContactConfig,
    /// Compute genetic distances from node genealogy paths when no genetic
    /// table is supplied.
    pub derive_genetic: bool,
}

impl Default for AssembleConfig {
    fn default() -> Self {
        Self {
            contact: ContactConfig::default(),
            derive_genetic: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Edge {
    a: u32,
    b: u32,
    attrs: EdgeAttributes,
}

/// Immutable language graph; construct with [`assemble`] or [`load_graph`].
#[derive(Debug, Clone, PartialEq)]
pub struct LanguageGraph {
    nodes: Vec<LanguageRecord>,
    node_index: HashMap<String, u32>,
    edges: Vec<Edge>,
    provenance: BTreeMap<String, String>,
}

impl LanguageGraph {
    pub fn nodes(&self) -> &[LanguageRecord] {
        &self.nodes
    }

    pub fn node(&self, id: &str) -> Option<&LanguageRecord> {
        self.node_index.get(id).map(|&i| &self.nodes[i as usize])
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical pair order as (id_a, id_b, attributes).
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, &EdgeAttributes)> {
        self.edges.iter().map(move |e| {
            (
                self.nodes[e.a as usize].id.as_str(),
                self.nodes[e.b as usize].id.as_str(),
                &e.attrs,
            )
        })
    }

    pub fn edge(&self, a: &str, b: &str) -> Option<&EdgeAttributes> {
        let (&ia, &ib) = (self.node_index.get(a)?, self.node_index.get(b)?);
        let key = (ia.min(ib), ia.max(ib));
        self.edges
            .binary_search_by(|e| (e.a, e.b).cmp(&key))
            .ok()
            .map(|i| &self.edges[i].attrs)
    }

    pub fn provenance(&self) -> &BTreeMap<String, String> {
        &self.provenance
    }
}

/// Assemble a graph from a node table and per-attribute pair tables.
///
/// Raw geodesic and contact tables are min-max rescaled; the neighbour flag
/// comes from raw contact counts and the configured threshold. Relatedness
/// is classified for every edge and genetic distances are derived from
/// genealogy paths unless a precomputed genetic table is supplied. One edge
/// per pair appearing in at least one table.
pub fn assemble(
    nodes: &LanguageTable,
    inputs: Vec<TableInput>,
    config: &AssembleConfig,
) -> Result<LanguageGraph, GraphError> {
    let mut records: Vec<LanguageRecord> = nodes.records().to_vec();
    records.sort_by(|a, b| a.id.cmp(&b.id));
    let node_index: HashMap<String, u32> = records
        .iter()
        .enumerate()
        .map(|(i, r)| (r.id.clone(), i as u32))
        .collect();

    // Merge duplicate-attribute tables; conflicting re-supply is an error.
    let mut merged: BTreeMap<EdgeTable, PairValueTable> = BTreeMap::new();
    let mut provenance: BTreeMap<String, String> = BTreeMap::new();
    for input in inputs {
        let attr = input.table.attr_name();
        for ((a, b), value) in input.values.iter() {
            let missing: Vec<String> = [a, b]
                .iter()
                .filter(|id| !node_index.contains_key(**id))
                .map(|id| id.to_string())
                .collect();
            if !missing.is_empty() {
                return Err(GraphError::UnknownLanguageId { attr, ids: missing });
            }
            if input.table.unit_range() && !(0.0..=1.0).contains(&value) {
                return Err(GraphError::ValueOutOfRange {
                    attr,
                    pair: (a.clone(), b.clone()),
                    value,
                });
            }
            merged
                .entry(input.table)
                .or_insert_with(|| PairValueTable::new(None))
                .insert(a, b, value)
                .map_err(|_| GraphError::DuplicateAttribute {
                    attr: input.table.attr_name(),
                    pair: (a.clone(), b.clone()),
                })?;
        }
        provenance
            .entry(attr)
            .and_modify(|s| {
                s.push_str("; ");
                s.push_str(&input.source);
            })
            .or_insert(input.source);
    }

    let geo_raw = merged.remove(&EdgeTable::GeoKm);
    let contact_raw = merged.remove(&EdgeTable::ContactCount);
    let geo_scaled = match &geo_raw {
        Some(t) => Some(rescale_unit(t).expect("non-empty by construction")),
        None => None,
    };
    let contact_scaled = match &contact_raw {
        Some(t) => Some(rescale_unit(t).expect("non-empty by construction")),
        None => None,
    };
    let genetic_supplied = merged.contains_key(&EdgeTable::Genetic);
    if !genetic_supplied && config.derive_genetic {
        provenance
            .entry("genetic".into())
            .or_insert_with(|| "derived from genealogy paths (common-prefix ratio)".into());
    }
    provenance
        .entry("relatedness".into())
        .or_insert_with(|| "classified from branch/genus/family fields".into());

    // Every pair appearing anywhere gets an edge.
    let mut pair_keys: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut collect = |table: &PairValueTable| {
        for ((a, b), _) in table.iter() {
            let ia = node_index[a];
            let ib = node_index[b];
            pair_keys.insert((ia.min(ib), ia.max(ib)));
        }
    };
    if let Some(t) = &geo_raw {
        collect(t);
    }
    if let Some(t) = &contact_raw {
        collect(t);
    }
    for t in merged.values() {
        collect(t);
    }

    let mut edges = Vec::with_capacity(pair_keys.len());
    for (ia, ib) in pair_keys {
        let ra = &records[ia as usize];
        let rb = &records[ib as usize];
        let (relatedness, relatedness_label) = relatedness_with_label(ra, rb);
        let lookup = |table: &Option<PairValueTable>| {
            table.as_ref().and_then(|t| t.get(&ra.id, &rb.id))
        };
        let from_merged =
            |key: EdgeTable, merged: &BTreeMap<EdgeTable, PairValueTable>| -> Option<f64> {
                merged.get(&key).and_then(|t| t.get(&ra.id, &rb.id))
            };
        let genetic = if genetic_supplied {
            from_merged(EdgeTable::Genetic, &merged)
        } else if config.derive_genetic {
            genetic_distance(ra, rb).ok()
        } else {
            None
        };
        let contact_count_raw = lookup(&contact_raw);
        let mut semantic = SemanticDistances::default();
        for set in SetName::ALL {
            if let Some(v) = from_merged(EdgeTable::Semantic(set), &merged) {
                semantic.set(set, v);
            }
        }
        edges.push(Edge {
            a: ia,
            b: ib,
            attrs: EdgeAttributes {
                geo_dist: lookup(&geo_scaled),
                contact_dist: lookup(&contact_scaled),
                neighbour: contact_count_raw.map(|c| neighbour_flag(c as u64, &config.contact)),
                relatedness,
                relatedness_label,
                genetic,
                phon: from_merged(EdgeTable::Phon, &merged),
                syntactic: from_merged(EdgeTable::Syntactic, &merged),
                semantic,
            },
        });
    }

    Ok(LanguageGraph {
        nodes: records,
        node_index,
        edges,
        provenance,
    })
}

/// Serialization format for [`export_graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    /// One row per pair, one column per attribute, `NA` for missing.
    EdgesTsv,
    /// Round-trippable JSON document with nodes, edges and provenance.
    Json,
}

impl std::str::FromStr for GraphFormat {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "edges-tsv" => Ok(GraphFormat::EdgesTsv),
            "json" => Ok(GraphFormat::Json),
            other => Err(GraphError::Format {
                path: String::new(),
                detail: format!("unknown graph format `{other}` (expected edges-tsv or json)"),
            }),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    a: String,
    b: String,
    relatedness: RelatednessLevel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    geo_dist: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    contact_dist: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    neighbour: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    genetic: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    syntactic: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    semantic: BTreeMap<String, f64>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    nodes: Vec<LanguageRecord>,
    edges: Vec<EdgeJson>,
    #[serde(default)]
    provenance: BTreeMap<String, String>,
}

/// Fixed edges-tsv column order.
pub const EDGE_TSV_COLUMNS: [&str; 17] = [
    "id_a",
    "id_b",
    "geo_dist",
    "contact_dist",
    "neighbour",
    "relatedness",
    "genetic",
    "phon",
    "syntactic",
    "nuclear",
    "non-nuclear",
    "emotion",
    "random",
    "concrete",
    "abstract",
    "aff.concrete",
    "aff.abstract",
];

fn na(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "NA".into())
}

fn write_edges_tsv(graph: &LanguageGraph, path: &Path) -> Result<(), GraphError> {
    let file = File::create(path).map_err(|source| GraphError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut w = BufWriter::new(file);
    let mut out = EDGE_TSV_COLUMNS.join("\t");
    out.push('\n');
    for (a, b, attrs) in graph.edges() {
        out.push_str(a);
        out.push('\t');
        out.push_str(b);
        for v in [attrs.geo_dist, attrs.contact_dist] {
            out.push('\t');
            out.push_str(&na(v));
        }
        out.push('\t');
        out.push_str(
            &attrs
                .neighbour
                .map(|n| u8::from(n).to_string())
                .unwrap_or_else(|| "NA".into()),
        );
        out.push('\t');
        out.push_str(attrs.relatedness.as_str());
        for v in [attrs.genetic, attrs.phon, attrs.syntactic] {
            out.push('\t');
            out.push_str(&na(v));
        }
        for set in SetName::ALL {
            out.push('\t');
            out.push_str(&na(attrs.semantic.get(set)));
        }
        out.push('\n');
        if out.len() > 1 << 20 {
            w.write_all(out.as_bytes()).map_err(|source| GraphError::Io {
                path: path.display().to_string(),
                source,
            })?;
            out.clear();
        }
    }
    w.write_all(out.as_bytes()).map_err(|source| GraphError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn graph_to_json(graph: &LanguageGraph) -> GraphJson {
    GraphJson {
        nodes: graph.nodes.clone(),
        edges: graph
            .edges()
            .map(|(a, b, attrs)| EdgeJson {
                a: a.to_string(),
                b: b.to_string(),
                relatedness: attrs.relatedness,
                label: attrs.relatedness_label.clone(),
                geo_dist: attrs.geo_dist,
                contact_dist: attrs.contact_dist,
                neighbour: attrs.neighbour.map(u8::from),
                genetic: attrs.genetic,
                phon: attrs.phon,
                syntactic: attrs.syntactic,
                semantic: attrs
                    .semantic
                    .iter()
                    .map(|(s, v)| (s.as_str().to_string(), v))
                    .collect(),
            })
            .collect(),
        provenance: graph.provenance.clone(),
    }
}

/// Write the graph to `path` in the chosen format.
pub fn export_graph(
    graph: &LanguageGraph,
    path: &Path,
    format: GraphFormat,
) -> Result<(), GraphError> {
    match format {
        GraphFormat::EdgesTsv => write_edges_tsv(graph, path),
        GraphFormat::Json => {
            let file = File::create(path).map_err(|source| GraphError::Io {
                path: path.display().to_string(),
                source,
            })?;
            let mut w = BufWriter::new(file);
            serde_json::to_writer(&mut w, &graph_to_json(graph)).map_err(|e| {
                GraphError::Format {
                    path: path.display().to_string(),
                    detail: e.to_string(),
                }
            })?;
            w.write_all(b"\n").map_err(|source| GraphError::Io {
                path: path.display().to_string(),
                source,
            })
        }
    }
}

/// Load a graph written by [`export_graph`] with [`GraphFormat::Json`].
pub fn load_graph(path: &Path) -> Result<LanguageGraph, GraphError> {
    let file = File::open(path).map_err(|source| GraphError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let parsed: GraphJson =
        serde_json::from_reader(BufReader::new(file)).map_err(|e| GraphError::Format {
            path: path.display().to_string(),
            detail: e.to_string(),
        })?;

    let mut nodes = parsed.nodes;
    nodes.sort_by(|a, b| a.id.cmp(&b.id));
    let node_index: HashMap<String, u32> = nodes
        .iter()
        .enumerate()
        .map(|(i, r)| (r.id.clone(), i as u32))
        .collect();
    if node_index.len() != nodes.len() {
        return Err(GraphError::Format {
            path: path.display().to_string(),
            detail: "duplicate node ids".into(),
        });
    }

    let mut edges = Vec::with_capacity(parsed.edges.len());
    for e in parsed.edges {
        let missing: Vec<String> = [&e.a, &e.b]
            .iter()
            .filter(|id| !node_index.contains_key(**id))
            .map(|id| id.to_string())
            .collect();
        if !missing.is_empty() {
            return Err(GraphError::UnknownLanguageId {
                attr: "edges".into(),
                ids: missing,
            });
        }
        let ia = node_index[&e.a];
        let ib = node_index[&e.b];
        let mut semantic = SemanticDistances::default();
        for (name, value) in &e.semantic {
            let set: SetName = name.parse().map_err(|_| GraphError::Format {
                path: path.display().to_string(),
                detail: format!("unknown semantic set `{name}`"),
            })?;
            semantic.set(set, *value);
        }
        edges.push(Edge {
            a: ia.min(ib),
            b: ia.max(ib),
            attrs: EdgeAttributes {
                geo_dist: e.geo_dist,
                contact_dist: e.contact_dist,
                neighbour: e.neighbour.map(|n| n != 0),
                relatedness: e.relatedness,
                relatedness_label: e.label,
                genetic: e.genetic,
                phon: e.phon,
                syntactic: e.syntactic,
                semantic,
            },
        });
    }
    edges.sort_by_key(|e| (e.a, e.b));
    edges.dedup_by(|x, y| (x.a, x.b) == (y.a, y.b));

    Ok(LanguageGraph {
        nodes,
        node_index,
        edges,
        provenance: parsed.provenance,
    })
}
