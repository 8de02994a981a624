//! File ingestion: the single gate through which data enters the system.
//!
//! Every loader takes a TSV or CSV file (separator decided by extension:
//! `.tsv` is tab, everything else comma), validates rows against the type's
//! invariants and returns an immutable table. Row-level errors always carry
//! the 1-based line number of the offending row. Missing numeric fields are
//! empty strings in the files and `None` in memory, never sentinel numbers.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One out-of-scale rating cell, reported by [`load_ratings`].
#[derive(Debug, Clone, PartialEq)]
pub struct RatingViolation {
    pub line: u64,
    pub column: String,
    pub value: f64,
}

impl fmt::Display for RatingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {} = {}", self.line, self.column, self.value)
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{path}:{line}: malformed row: {detail}")]
    MalformedRow {
        path: String,
        line: u64,
        detail: String,
    },
    #[error("{path}:{line}: duplicate id `{id}` (first defined earlier in the file)")]
    DuplicateId { path: String, line: u64, id: String },
    #[error("{path}:{line}: coordinate out of range: {detail}")]
    CoordinateOutOfRange {
        path: String,
        line: u64,
        detail: String,
    },
    #[error("{path}:{line}: malformed forms field: {detail}")]
    MalformedForms {
        path: String,
        line: u64,
        detail: String,
    },
    #[error("{path}:{line}: negative frequency `{value}`")]
    NegativeFrequency {
        path: String,
        line: u64,
        value: String,
    },
    #[error("{path}:{line}: self-colexification of `{concept}`")]
    SelfColexification {
        path: String,
        line: u64,
        concept: String,
    },
    #[error("{path}: rating(s) out of scale: {}", .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    RatingOutOfScale {
        path: String,
        violations: Vec<RatingViolation>,
    },
    #[error("{path}:{line}: asymmetric matrix: {detail}")]
    AsymmetricMatrix {
        path: String,
        line: u64,
        detail: String,
    },
    #[error("{path}:{line}: value {value} outside declared range [{lo}, {hi}]")]
    ValueOutOfRange {
        path: String,
        line: u64,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("{path}: missing required column `{column}`")]
    MissingColumn { path: String, column: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, IngestError>;

/// One language node: identifiers, genealogy, macroarea/area, coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LanguageRecord {
    pub id: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub family: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub genus: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub parent: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub branch: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub macroarea: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub area: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub longitude: Option<f64>,
}

impl LanguageRecord {
    /// True when both coordinates are present.
    pub fn has_coordinates(&self) -> bool {
        self.latitude.is_some() && self.longitude.is_some()
    }
}

/// Validated language table with id lookup. Record order follows the file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LanguageTable {
    records: Vec<LanguageRecord>,
    by_id: HashMap<String, usize>,
}

impl LanguageTable {
    pub fn from_records(records: Vec<LanguageRecord>) -> std::result::Result<Self, String> {
        let mut by_id = HashMap::with_capacity(records.len());
        for (i, rec) in records.iter().enumerate() {
            if rec.id.is_empty() {
                return Err(format!("record {i}: empty id"));
            }
            if by_id.insert(rec.id.clone(), i).is_some() {
                return Err(format!("duplicate id `{}`", rec.id));
            }
        }
        Ok(Self { records, by_id })
    }

    pub fn records(&self) -> &[LanguageRecord] {
        &self.records
    }

    pub fn get(&self, id: &str) -> Option<&LanguageRecord> {
        self.by_id.get(id).map(|&i| &self.records[i])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.by_id.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Ids in ascending order; the canonical node order used everywhere.
    pub fn sorted_ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.records.iter().map(|r| r.id.clone()).collect();
        ids.sort();
        ids
    }
}

/// One word form realizing a colexification pattern, with its corpus count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormCount {
    pub form: String,
    pub count: u64,
}

/// One (concept_a, concept_b, language, frequency) data point.
///
/// The concept pair is stored in canonical (lexicographic) order, so rows for
/// (A, B) and (B, A) collide. When `forms` is non-empty its counts sum to
/// `frequency`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColexRecord {
    pub concept_a: String,
    pub concept_b: String,
    pub language: String,
    pub frequency: u64,
    pub forms: Vec<FormCount>,
}

/// Colexification table, canonicalized and deduplicated.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ColexTable {
    records: Vec<ColexRecord>,
}

impl ColexTable {
    pub fn records(&self) -> &[ColexRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Concreteness plus valence/arousal/dominance ratings for one lemma.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatingRecord {
    pub lemma: String,
    pub concreteness: Option<f64>,
    pub valence: Option<f64>,
    pub arousal: Option<f64>,
    pub dominance: Option<f64>,
}

/// Inclusive scale bounds for each rating column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleSpec {
    pub concreteness: (f64, f64),
    pub valence: (f64, f64),
    pub arousal: (f64, f64),
    pub dominance: (f64, f64),
}

impl Default for ScaleSpec {
    fn default() -> Self {
        Self {
            concreteness: (1.0, 5.0),
            valence: (1.0, 9.0),
            arousal: (1.0, 9.0),
            dominance: (1.0, 9.0),
        }
    }
}

/// Rating table with lemma lookup. Duplicate lemmas keep the first row.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RatingTable {
    records: Vec<RatingRecord>,
    by_lemma: HashMap<String, usize>,
}

impl RatingTable {
    pub fn from_records(records: Vec<RatingRecord>) -> Self {
        let mut by_lemma = HashMap::with_capacity(records.len());
        let mut kept = Vec::with_capacity(records.len());
        for rec in records {
            if by_lemma.contains_key(&rec.lemma) {
                continue;
            }
            by_lemma.insert(rec.lemma.clone(), kept.len());
            kept.push(rec);
        }
        Self {
            records: kept,
            by_lemma,
        }
    }

    pub fn records(&self) -> &[RatingRecord] {
        &self.records
    }

    pub fn get(&self, lemma: &str) -> Option<&RatingRecord> {
        self.by_lemma.get(lemma).map(|&i| &self.records[i])
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// One transcription of a concept in a language, over a sound-class alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordlistEntry {
    pub language: String,
    pub concept: String,
    pub transcription: String,
}

/// Wordlist table indexed by (language, concept); synonyms are kept.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WordlistTable {
    entries: Vec<WordlistEntry>,
    index: HashMap<(String, String), Vec<usize>>,
    languages: Vec<String>,
}

impl WordlistTable {
    pub fn from_entries(entries: Vec<WordlistEntry>) -> Self {
        let mut index: HashMap<(String, String), Vec<usize>> = HashMap::new();
        let mut languages: HashSet<String> = HashSet::new();
        for (i, e) in entries.iter().enumerate() {
            index
                .entry((e.language.clone(), e.concept.clone()))
                .or_default()
                .push(i);
            languages.insert(e.language.clone());
        }
        let mut languages: Vec<String> = languages.into_iter().collect();
        languages.sort();
        Self {
            entries,
            index,
            languages,
        }
    }

    pub fn entries(&self) -> &[WordlistEntry] {
        &self.entries
    }

    /// All transcriptions for (language, concept), in file order.
    pub fn forms(&self, language: &str, concept: &str) -> Vec<&str> {
        match self
            .index
            .get(&(language.to_string(), concept.to_string()))
        {
            Some(ids) => ids
                .iter()
                .map(|&i| self.entries[i].transcription.as_str())
                .collect(),
            None => Vec::new(),
        }
    }

    pub fn has_language(&self, language: &str) -> bool {
        self.languages.binary_search_by(|l| l.as_str().cmp(language)).is_ok()
    }

    /// Sorted list of languages appearing in the table.
    pub fn languages(&self) -> &[String] {
        &self.languages
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Symmetric per-pair real values keyed by canonical (id_a < id_b) pairs,
/// with an optional declared value range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairValueTable {
    range: Option<(f64, f64)>,
    entries: BTreeMap<(String, String), f64>,
}

/// Why a [`PairValueTable::insert`] was rejected.
#[derive(Debug, Clone, PartialEq)]
pub enum PairInsertError {
    SelfPair,
    OutOfRange { value: f64, lo: f64, hi: f64 },
    Conflict { existing: f64, new: f64 },
}

impl PairValueTable {
    pub fn new(range: Option<(f64, f64)>) -> Self {
        Self {
            range,
            entries: BTreeMap::new(),
        }
    }

    /// The `[0, 1]` range shared by all normalized distance tables.
    pub fn unit_range() -> Self {
        Self::new(Some((0.0, 1.0)))
    }

    pub fn range(&self) -> Option<(f64, f64)> {
        self.range
    }

    /// Canonical key for an unordered pair.
    pub fn key(a: &str, b: &str) -> (String, String) {
        if a <= b {
            (a.to_string(), b.to_string())
        } else {
            (b.to_string(), a.to_string())
        }
    }

    /// Insert a value for the unordered pair `(a, b)`.
    ///
    /// Re-inserting the identical value is a no-op; a differing value for an
    /// existing pair is a conflict.
    pub fn insert(&mut self, a: &str, b: &str, value: f64) -> std::result::Result<(), PairInsertError> {
        if a == b {
            return Err(PairInsertError::SelfPair);
        }
        if let Some((lo, hi)) = self.range {
            if !(value >= lo && value <= hi) {
                return Err(PairInsertError::OutOfRange { value, lo, hi });
            }
        }
        match self.entries.entry(Self::key(a, b)) {
            Entry::Vacant(e) => {
                e.insert(value);
                Ok(())
            }
            Entry::Occupied(e) => {
                let existing = *e.get();
                if existing == value {
                    Ok(())
                } else {
                    Err(PairInsertError::Conflict {
                        existing,
                        new: value,
                    })
                }
            }
        }
    }

    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        self.entries.get(&Self::key(a, b)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in canonical sorted-pair order.
    pub fn iter(&self) -> impl Iterator<Item = (&(String, String), f64)> {
        self.entries.iter().map(|(k, &v)| (k, v))
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.values().copied()
    }

    /// Sorted ids appearing in at least one pair.
    pub fn ids(&self) -> Vec<String> {
        let mut set = HashSet::new();
        for (a, b) in self.entries.keys() {
            set.insert(a.clone());
            set.insert(b.clone());
        }
        let mut ids: Vec<String> = set.into_iter().collect();
        ids.sort();
        ids
    }

    /// Write as long-format `id_a<sep>id_b<sep>value` with a header row.
    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = writer(path)?;
        let mut out = String::from("id_a");
        let sep = sep_for(path);
        out.push(sep);
        out.push_str("id_b");
        out.push(sep);
        out.push_str("value\n");
        for ((a, b), v) in self.entries.iter() {
            out.push_str(a);
            out.push(sep);
            out.push_str(b);
            out.push(sep);
            out.push_str(&v.to_string());
            out.push('\n');
        }
        write_all(&mut w, path, out.as_bytes())
    }
}

fn sep_for(path: &Path) -> char {
    match path.extension().and_then(|e| e.to_str()) {
        Some("tsv") => '\t',
        _ => ',',
    }
}

fn reader(path: &Path) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(csv::ReaderBuilder::new()
        .delimiter(sep_for(path) as u8)
        .flexible(true)
        .from_reader(file))
}

fn writer(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(BufWriter::new(file))
}

fn write_all(w: &mut BufWriter<File>, path: &Path, bytes: &[u8]) -> Result<()> {
    w.write_all(bytes).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

/// Header lookup: column name -> position. Names are trimmed, case kept.
fn header_positions(path: &Path, rdr: &mut csv::Reader<File>) -> Result<HashMap<String, usize>> {
    let headers = rdr.headers().map_err(|e| IngestError::MalformedRow {
        path: path_str(path),
        line: 1,
        detail: e.to_string(),
    })?;
    Ok(headers
        .iter()
        .enumerate()
        .map(|(i, h)| (h.trim().to_string(), i))
        .collect())
}

fn record_line(rec: &csv::StringRecord) -> u64 {
    rec.position().map(|p| p.line()).unwrap_or(0)
}

fn require_column(path: &Path, cols: &HashMap<String, usize>, name: &str) -> Result<usize> {
    cols.get(name)
        .copied()
        .ok_or_else(|| IngestError::MissingColumn {
            path: path_str(path),
            column: name.to_string(),
        })
}

fn field<'a>(rec: &'a csv::StringRecord, idx: usize) -> &'a str {
    rec.get(idx).unwrap_or("").trim()
}

/// Rows must match the header width exactly.
fn check_width(path: &Path, rec: &csv::StringRecord, expected: usize) -> Result<()> {
    if rec.len() != expected {
        return Err(IngestError::MalformedRow {
            path: path_str(path),
            line: record_line(rec),
            detail: format!("expected {} columns, found {}", expected, rec.len()),
        });
    }
    Ok(())
}

fn parse_f64(path: &Path, rec: &csv::StringRecord, raw: &str, what: &str) -> Result<f64> {
    raw.parse::<f64>().map_err(|_| IngestError::MalformedRow {
        path: path_str(path),
        line: record_line(rec),
        detail: format!("cannot parse {what} `{raw}` as a number"),
    })
}

/// Lowercased, whitespace-trimmed concept/lemma normalization, applied at
/// the ingestion boundary so set membership is consistent everywhere.
pub fn normalize_concept(s: &str) -> String {
    s.trim().to_lowercase()
}

const LANGUAGE_COLUMNS: [&str; 10] = [
    "id",
    "name",
    "family",
    "genus",
    "parent",
    "branch",
    "macroarea",
    "area",
    "latitude",
    "longitude",
];

/// Load a language table. The header must name at least `id`; the other
/// recognized columns are `name`, `family`, `genus`, `parent`, `branch`,
/// `macroarea`, `area`, `latitude`, `longitude`. Unrecognized columns are
/// ignored with a warning.
pub fn load_languages(path: &Path) -> Result<LanguageTable> {
    let mut rdr = reader(path)?;
    let cols = header_positions(path, &mut rdr)?;
    let id_col = require_column(path, &cols, "id")?;
    for name in cols.keys() {
        if !LANGUAGE_COLUMNS.contains(&name.as_str()) {
            log::warn!("{}: ignoring unrecognized column `{name}`", path_str(path));
        }
    }
    let width = cols.len();
    let col = |name: &str| cols.get(name).copied();

    let mut records = Vec::new();
    let mut seen: HashMap<String, u64> = HashMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| IngestError::MalformedRow {
            path: path_str(path),
            line: e
                .position()
                .map(|p| p.line())
                .unwrap_or(0),
            detail: e.to_string(),
        })?;
        check_width(path, &rec, width)?;
        let line = record_line(&rec);
        let id = field(&rec, id_col).to_string();
        if id.is_empty() {
            return Err(IngestError::MalformedRow {
                path: path_str(path),
                line,
                detail: "empty id".into(),
            });
        }
        if seen.insert(id.clone(), line).is_some() {
            return Err(IngestError::DuplicateId {
                path: path_str(path),
                line,
                id,
            });
        }
        let text = |name: &str| col(name).map(|i| field(&rec, i).to_string()).unwrap_or_default();
        let number = |name: &str| -> Result<Option<f64>> {
            match col(name) {
                Some(i) => {
                    let raw = field(&rec, i);
                    if raw.is_empty() {
                        Ok(None)
                    } else {
                        parse_f64(path, &rec, raw, name).map(Some)
                    }
                }
                None => Ok(None),
            }
        };
        let latitude = number("latitude")?;
        let longitude = number("longitude")?;
        match (latitude, longitude) {
            (Some(_), None) | (None, Some(_)) => {
                return Err(IngestError::MalformedRow {
                    path: path_str(path),
                    line,
                    detail: "latitude and longitude must be both present or both missing".into(),
                });
            }
            (Some(lat), Some(lon)) => {
                if !(-90.0..=90.0).contains(&lat) {
                    return Err(IngestError::CoordinateOutOfRange {
                        path: path_str(path),
                        line,
                        detail: format!("latitude {lat} outside [-90, 90]"),
                    });
                }
                if !(-180.0..=180.0).contains(&lon) {
                    return Err(IngestError::CoordinateOutOfRange {
                        path: path_str(path),
                        line,
                        detail: format!("longitude {lon} outside [-180, 180]"),
                    });
                }
            }
            (None, None) => {}
        }
        records.push(LanguageRecord {
            id,
            name: text("name"),
            family: text("family"),
            genus: text("genus"),
            parent: text("parent"),
            branch: text("branch"),
            macroarea: text("macroarea"),
            area: text("area"),
            latitude,
            longitude,
        });
    }
    LanguageTable::from_records(records).map_err(|detail| IngestError::MalformedRow {
        path: path_str(path),
        line: 0,
        detail,
    })
}

/// Write a language table with the full canonical column set.
pub fn write_languages(table: &LanguageTable, path: &Path) -> Result<()> {
    let sep = sep_for(path);
    let mut out = LANGUAGE_COLUMNS.join(&sep.to_string());
    out.push('\n');
    for r in table.records() {
        let fields = [
            r.id.as_str(),
            r.name.as_str(),
            r.family.as_str(),
            r.genus.as_str(),
            r.parent.as_str(),
            r.branch.as_str(),
            r.macroarea.as_str(),
            r.area.as_str(),
        ];
        out.push_str(&fields.join(&sep.to_string()));
        out.push(sep);
        if let Some(lat) = r.latitude {
            out.push_str(&lat.to_string());
        }
        out.push(sep);
        if let Some(lon) = r.longitude {
            out.push_str(&lon.to_string());
        }
        out.push('\n');
    }
    let mut w = writer(path)?;
    write_all(&mut w, path, out.as_bytes())
}

fn parse_forms(path: &Path, rec: &csv::StringRecord, raw: &str) -> Result<Vec<FormCount>> {
    let mut forms = Vec::new();
    for piece in raw.split(';') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let (form, count) = piece.rsplit_once(':').ok_or_else(|| IngestError::MalformedForms {
            path: path_str(path),
            line: record_line(rec),
            detail: format!("`{piece}` is not form:count"),
        })?;
        let count: u64 = count.trim().parse().map_err(|_| IngestError::MalformedForms {
            path: path_str(path),
            line: record_line(rec),
            detail: format!("count `{}` is not a positive integer", count.trim()),
        })?;
        if count == 0 {
            return Err(IngestError::MalformedForms {
                path: path_str(path),
                line: record_line(rec),
                detail: format!("form `{}` has zero count", form.trim()),
            });
        }
        forms.push(FormCount {
            form: form.trim().to_string(),
            count,
        });
    }
    Ok(forms)
}

/// Load colexification data points.
///
/// Header: `concept_a, concept_b, language, frequency[, forms]` with forms
/// encoded `form:count;form:count`. Concept pairs are canonicalized to
/// lexicographic order; rows with identical (pair, language) are summed with
/// a warning. Form counts, when present, must sum to the row frequency.
pub fn load_colex(path: &Path) -> Result<ColexTable> {
    let mut rdr = reader(path)?;
    let cols = header_positions(path, &mut rdr)?;
    let ca = require_column(path, &cols, "concept_a")?;
    let cb = require_column(path, &cols, "concept_b")?;
    let lg = require_column(path, &cols, "language")?;
    let fq = require_column(path, &cols, "frequency")?;
    let fm = cols.get("forms").copied();
    let width = cols.len();

    // (pair, language) -> index into records
    let mut merged: HashMap<(String, String, String), usize> = HashMap::new();
    let mut records: Vec<ColexRecord> = Vec::new();

    for rec in rdr.records() {
        let rec = rec.map_err(|e| IngestError::MalformedRow {
            path: path_str(path),
            line: e.position().map(|p| p.line()).unwrap_or(0),
            detail: e.to_string(),
        })?;
        check_width(path, &rec, width)?;
        let line = record_line(&rec);
        let a = normalize_concept(field(&rec, ca));
        let b = normalize_concept(field(&rec, cb));
        let language = field(&rec, lg).to_string();
        if a.is_empty() || b.is_empty() || language.is_empty() {
            return Err(IngestError::MalformedRow {
                path: path_str(path),
                line,
                detail: "empty concept or language field".into(),
            });
        }
        if a == b {
            return Err(IngestError::SelfColexification {
                path: path_str(path),
                line,
                concept: a,
            });
        }
        let raw_freq = field(&rec, fq);
        if raw_freq.starts_with('-') {
            return Err(IngestError::NegativeFrequency {
                path: path_str(path),
                line,
                value: raw_freq.to_string(),
            });
        }
        let frequency: u64 = raw_freq.parse().map_err(|_| IngestError::MalformedRow {
            path: path_str(path),
            line,
            detail: format!("cannot parse frequency `{raw_freq}`"),
        })?;
        let forms = match fm {
            Some(i) => parse_forms(path, &rec, field(&rec, i))?,
            None => Vec::new(),
        };
        if !forms.is_empty() {
            let sum: u64 = forms.iter().map(|f| f.count).sum();
            if sum != frequency {
                return Err(IngestError::MalformedForms {
                    path: path_str(path),
                    line,
                    detail: format!("form counts sum to {sum} but frequency is {frequency}"),
                });
            }
        }
        let (concept_a, concept_b) = if a < b { (a, b) } else { (b, a) };
        let key = (concept_a.clone(), concept_b.clone(), language.clone());
        match merged.get(&key) {
            Some(&idx) => {
                log::warn!(
                    "{}:{line}: duplicate ({concept_a}, {concept_b}, {language}) row; summing frequencies",
                    path_str(path)
                );
                let existing = &mut records[idx];
                existing.frequency += frequency;
                if existing.forms.is_empty() || forms.is_empty() {
                    // A merge with an unattributed row cannot keep the form
                    // breakdown without violating the sum invariant.
                    existing.forms.clear();
                } else {
                    let mut by_form: BTreeMap<String, u64> = BTreeMap::new();
                    for f in existing.forms.drain(..).chain(forms) {
                        *by_form.entry(f.form).or_insert(0) += f.count;
                    }
                    existing.forms = by_form
                        .into_iter()
                        .map(|(form, count)| FormCount { form, count })
                        .collect();
                }
            }
            None => {
                merged.insert(key, records.len());
                records.push(ColexRecord {
                    concept_a,
                    concept_b,
                    language,
                    frequency,
                    forms,
                });
            }
        }
    }
    Ok(ColexTable { records })
}

/// Write a colexification table in the `load_colex` format.
pub fn write_colex(table: &ColexTable, path: &Path) -> Result<()> {
    let sep = sep_for(path);
    let mut out = ["concept_a", "concept_b", "language", "frequency", "forms"].join(&sep.to_string());
    out.push('\n');
    for r in table.records() {
        let forms = r
            .forms
            .iter()
            .map(|f| format!("{}:{}", f.form, f.count))
            .collect::<Vec<_>>()
            .join(";");
        out.push_str(&format!(
            "{}{sep}{}{sep}{}{sep}{}{sep}{}\n",
            r.concept_a, r.concept_b, r.language, r.frequency, forms
        ));
    }
    let mut w = writer(path)?;
    write_all(&mut w, path, out.as_bytes())
}

/// Load lemma ratings. Header: `lemma` plus any of `concreteness`,
/// `valence`, `arousal`, `dominance`. Every out-of-scale cell in the file is
/// collected into a single [`IngestError::RatingOutOfScale`]. Duplicate
/// lemmas keep the first row with a warning.
pub fn load_ratings(path: &Path, scales: &ScaleSpec) -> Result<RatingTable> {
    let mut rdr = reader(path)?;
    let cols = header_positions(path, &mut rdr)?;
    let lemma_col = require_column(path, &cols, "lemma")?;
    let width = cols.len();
    let rating_cols: [(&str, Option<usize>, (f64, f64)); 4] = [
        ("concreteness", cols.get("concreteness").copied(), scales.concreteness),
        ("valence", cols.get("valence").copied(), scales.valence),
        ("arousal", cols.get("arousal").copied(), scales.arousal),
        ("dominance", cols.get("dominance").copied(), scales.dominance),
    ];

    let mut records = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    let mut violations: Vec<RatingViolation> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| IngestError::MalformedRow {
            path: path_str(path),
            line: e.position().map(|p| p.line()).unwrap_or(0),
            detail: e.to_string(),
        })?;
        check_width(path, &rec, width)?;
        let line = record_line(&rec);
        let lemma = normalize_concept(field(&rec, lemma_col));
        if lemma.is_empty() {
            return Err(IngestError::MalformedRow {
                path: path_str(path),
                line,
                detail: "empty lemma".into(),
            });
        }
        let mut values = [None; 4];
        for (slot, (name, idx, (lo, hi))) in rating_cols.iter().enumerate() {
            if let Some(i) = idx {
                let raw = field(&rec, *i);
                if raw.is_empty() {
                    continue;
                }
                let v = parse_f64(path, &rec, raw, name)?;
                if v < *lo || v > *hi {
                    violations.push(RatingViolation {
                        line,
                        column: name.to_string(),
                        value: v,
                    });
                    continue;
                }
                values[slot] = Some(v);
            }
        }
        if !seen.insert(lemma.clone()) {
            log::warn!("{}:{line}: duplicate lemma `{lemma}`; keeping first", path_str(path));
            continue;
        }
        records.push(RatingRecord {
            lemma,
            concreteness: values[0],
            valence: values[1],
            arousal: values[2],
            dominance: values[3],
        });
    }
    if !violations.is_empty() {
        return Err(IngestError::RatingOutOfScale {
            path: path_str(path),
            violations,
        });
    }
    Ok(RatingTable::from_records(records))
}

/// Write a rating table in the `load_ratings` format.
pub fn write_ratings(table: &RatingTable, path: &Path) -> Result<()> {
    let sep = sep_for(path);
    let mut out = ["lemma", "concreteness", "valence", "arousal", "dominance"].join(&sep.to_string());
    out.push('\n');
    let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in table.records() {
        out.push_str(&format!(
            "{}{sep}{}{sep}{}{sep}{}{sep}{}\n",
            r.lemma,
            cell(r.concreteness),
            cell(r.valence),
            cell(r.arousal),
            cell(r.dominance)
        ));
    }
    let mut w = writer(path)?;
    write_all(&mut w, path, out.as_bytes())
}

/// Load sound-class wordlists. Header: `language, concept, transcription`.
/// Multiple rows per (language, concept) are synonyms and all retained;
/// an empty transcription is a malformed row.
pub fn load_wordlists(path: &Path) -> Result<WordlistTable> {
    let mut rdr = reader(path)?;
    let cols = header_positions(path, &mut rdr)?;
    let lg = require_column(path, &cols, "language")?;
    let cc = require_column(path, &cols, "concept")?;
    let tr = require_column(path, &cols, "transcription")?;
    let width = cols.len();

    let mut entries = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| IngestError::MalformedRow {
            path: path_str(path),
            line: e.position().map(|p| p.line()).unwrap_or(0),
            detail: e.to_string(),
        })?;
        check_width(path, &rec, width)?;
        let line = record_line(&rec);
        let language = field(&rec, lg).to_string();
        let concept = normalize_concept(field(&rec, cc));
        let transcription = field(&rec, tr).to_string();
        if language.is_empty() || concept.is_empty() {
            return Err(IngestError::MalformedRow {
                path: path_str(path),
                line,
                detail: "empty language or concept field".into(),
            });
        }
        if transcription.is_empty() {
            return Err(IngestError::MalformedRow {
                path: path_str(path),
                line,
                detail: "empty transcription".into(),
            });
        }
        entries.push(WordlistEntry {
            language,
            concept,
            transcription,
        });
    }
    Ok(WordlistTable::from_entries(entries))
}

/// Write a wordlist table in the `load_wordlists` format.
pub fn write_wordlists(table: &WordlistTable, path: &Path) -> Result<()> {
    let sep = sep_for(path);
    let mut out = ["language", "concept", "transcription"].join(&sep.to_string());
    out.push('\n');
    for e in table.entries() {
        out.push_str(&format!("{}{sep}{}{sep}{}\n", e.language, e.concept, e.transcription));
    }
    let mut w = writer(path)?;
    write_all(&mut w, path, out.as_bytes())
}

/// Load a symmetric pair-value matrix.
///
/// Two layouts are accepted. Long format (header starts with `id_a`):
/// one `id_a, id_b, value` row per pair, canonicalized on load; conflicting
/// duplicate pairs are an asymmetry error. Square format: an id header row
/// and one row per id, which must be symmetric within 1e-9 with a zero
/// diagonal. A declared `range`, when given, rejects out-of-range values.
pub fn load_pair_matrix(path: &Path, range: Option<(f64, f64)>) -> Result<PairValueTable> {
    let mut rdr = reader(path)?;
    let headers = rdr.headers().map_err(|e| IngestError::MalformedRow {
        path: path_str(path),
        line: 1,
        detail: e.to_string(),
    })?.clone();
    let first = headers.get(0).unwrap_or("").trim();
    if first == "id_a" {
        load_pair_matrix_long(path, &mut rdr, &headers, range)
    } else {
        load_pair_matrix_square(path, &mut rdr, &headers, range)
    }
}

fn range_check(path: &Path, line: u64, value: f64, range: Option<(f64, f64)>) -> Result<()> {
    if let Some((lo, hi)) = range {
        if !(value >= lo && value <= hi) {
            return Err(IngestError::ValueOutOfRange {
                path: path_str(path),
                line,
                value,
                lo,
                hi,
            });
        }
    }
    Ok(())
}

fn load_pair_matrix_long(
    path: &Path,
    rdr: &mut csv::Reader<File>,
    headers: &csv::StringRecord,
    range: Option<(f64, f64)>,
) -> Result<PairValueTable> {
    let cols: HashMap<String, usize> = headers
        .iter()
        .enumerate()
        .map(|(i, h)| (h.trim().to_string(), i))
        .collect();
    let ia = require_column(path, &cols, "id_a")?;
    let ib = require_column(path, &cols, "id_b")?;
    let iv = require_column(path, &cols, "value")?;
    let width = cols.len();
    let mut table = PairValueTable::new(range);
    for rec in rdr.records() {
        let rec = rec.map_err(|e| IngestError::MalformedRow {
            path: path_str(path),
            line: e.position().map(|p| p.line()).unwrap_or(0),
            detail: e.to_string(),
        })?;
        check_width(path, &rec, width)?;
        let line = record_line(&rec);
        let a = field(&rec, ia).to_string();
        let b = field(&rec, ib).to_string();
        if a.is_empty() || b.is_empty() {
            return Err(IngestError::MalformedRow {
                path: path_str(path),
                line,
                detail: "empty id field".into(),
            });
        }
        let value = parse_f64(path, &rec, field(&rec, iv), "value")?;
        range_check(path, line, value, range)?;
        table.insert(&a, &b, value).map_err(|e| match e {
            PairInsertError::SelfPair => IngestError::MalformedRow {
                path: path_str(path),
                line,
                detail: format!("self pair `{a}`"),
            },
            PairInsertError::Conflict { existing, new } => IngestError::AsymmetricMatrix {
                path: path_str(path),
                line,
                detail: format!("pair ({a}, {b}) given as both {existing} and {new}"),
            },
            PairInsertError::OutOfRange { value, lo, hi } => IngestError::ValueOutOfRange {
                path: path_str(path),
                line,
                value,
                lo,
                hi,
            },
        })?;
    }
    Ok(table)
}

fn load_pair_matrix_square(
    path: &Path,
    rdr: &mut csv::Reader<File>,
    headers: &csv::StringRecord,
    range: Option<(f64, f64)>,
) -> Result<PairValueTable> {
    let ids: Vec<String> = headers.iter().skip(1).map(|h| h.trim().to_string()).collect();
    if ids.is_empty() || ids.iter().any(|i| i.is_empty()) {
        return Err(IngestError::MalformedRow {
            path: path_str(path),
            line: 1,
            detail: "square matrix header must list ids after the corner cell".into(),
        });
    }
    let n = ids.len();
    let mut matrix = vec![vec![0.0_f64; n]; n];
    let mut row_lines = vec![0_u64; n];
    let mut row_idx = 0usize;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| IngestError::MalformedRow {
            path: path_str(path),
            line: e.position().map(|p| p.line()).unwrap_or(0),
            detail: e.to_string(),
        })?;
        let line = record_line(&rec);
        if row_idx >= n {
            return Err(IngestError::MalformedRow {
                path: path_str(path),
                line,
                detail: format!("more rows than the {n} ids in the header"),
            });
        }
        check_width(path, &rec, n + 1)?;
        let row_id = field(&rec, 0);
        if row_id != ids[row_idx] {
            return Err(IngestError::MalformedRow {
                path: path_str(path),
                line,
                detail: format!(
                    "row id `{row_id}` does not match header id `{}` (rows must follow header order)",
                    ids[row_idx]
                ),
            });
        }
        for j in 0..n {
            let value = parse_f64(path, &rec, field(&rec, j + 1), "matrix cell")?;
            range_check(path, line, value, range)?;
            matrix[row_idx][j] = value;
        }
        row_lines[row_idx] = line;
        row_idx += 1;
    }
    if row_idx != n {
        return Err(IngestError::MalformedRow {
            path: path_str(path),
            line: 0,
            detail: format!("expected {n} data rows, found {row_idx}"),
        });
    }
    for i in 0..n {
        if matrix[i][i] != 0.0 {
            return Err(IngestError::MalformedRow {
                path: path_str(path),
                line: row_lines[i],
                detail: format!("nonzero diagonal {} for id `{}`", matrix[i][i], ids[i]),
            });
        }
        for j in (i + 1)..n {
            if (matrix[i][j] - matrix[j][i]).abs() > 1e-9 {
                return Err(IngestError::AsymmetricMatrix {
                    path: path_str(path),
                    line: row_lines[j],
                    detail: format!(
                        "M[{}][{}] = {} but M[{}][{}] = {}",
                        ids[i], ids[j], matrix[i][j], ids[j], ids[i], matrix[j][i]
                    ),
                });
            }
        }
    }
    let mut table = PairValueTable::new(range);
    for i in 0..n {
        for j in (i + 1)..n {
            // Store the upper-triangle cell of the canonically smaller id.
            let value = if ids[i] <= ids[j] { matrix[i][j] } else { matrix[j][i] };
            table.insert(&ids[i], &ids[j], value).map_err(|_| {
                IngestError::MalformedRow {
                    path: path_str(path),
                    line: row_lines[i],
                    detail: format!("duplicate id `{}` in header", ids[i]),
                }
            })?;
        }
    }
    Ok(table)
}

/// Load a pair table written by [`PairValueTable::write`] (long format).
pub fn load_pair_table(path: &Path, range: Option<(f64, f64)>) -> Result<PairValueTable> {
    load_pair_matrix(path, range)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;
    use tempfile::TempDir;

    fn write_file(dir: &TempDir, name: &str, contents: &str) -> std::path::PathBuf {
        let path = dir.path().join(name);
        let mut f = File::create(&path).unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        path
    }

    #[test]
    fn languages_basic_row() {
        let dir = TempDir::new().unwrap();
        let path = write_file(
            &dir,
            "langs.tsv",
            "id\tname\tfamily\tgenus\tparent\tbranch\tmacroarea\tarea\tlatitude\tlongitude\n\
             deu\tGerman\tIndo-European\tGermanic\t\tWest Germanic\tEurasia\t\t51.0\t10.0\n\
             abc\tNowhere\t\t\t\t\t\t\t\t\n",
        );
        let table = load_languages(&path).unwrap();
        assert_eq!(table.len(), 2);
        let deu = table.get("deu").unwrap();
        assert_eq!(deu.latitude, Some(51.0));
        assert_eq!(deu.longitude, Some(10.0));
        assert_eq!(deu.branch, "West Germanic");
        let abc = table.get("abc").unwrap();
        assert!(abc.latitude.is_none());
        assert!(abc.family.is_empty());
    }

    #[test]
    fn languages_duplicate_id() {
        let dir = TempDir::new().unwrap();
        let path = write_file(
            &dir,
            "langs.tsv",
            "id\tname\ndeu\tGerman\ndeu\tAgain\n",
        );
        match load_languages(&path) {
            Err(IngestError::DuplicateId { line, id, .. }) => {
                assert_eq!(id, "deu");
                assert_eq!(line, 3);
            }
            other => panic!("expected DuplicateId, got {other:?}"),
        }
    }

    #[test]
    fn languages_coordinate_out_of_range() {
        let dir = TempDir::new().unwrap();
        let path = write_file(
            &dir,
            "langs.tsv",
            "id\tlatitude\tlongitude\nxxx\t99.0\t10.0\n",
        );
        match load_languages(&path) {
            Err(IngestError::CoordinateOutOfRange { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected CoordinateOutOfRange, got {other:?}"),
        }
    }

    #[test]
    fn languages_half_missing_coordinates() {
        let dir = TempDir::new().unwrap();
        let path = write_file(&dir, "langs.tsv", "id\tlatitude\tlongitude\nxxx\t45.0\t\n");
        assert!(matches!(
            load_languages(&path),
            Err(IngestError::MalformedRow { line: 2, .. })
        ));
    }

    #[test]
    fn languages_wrong_column_count() {
        let dir = TempDir::new().unwrap();
        let path = write_file(&dir, "langs.tsv", "id\tname\nxxx\n");
        assert!(matches!(
            load_languages(&path),
            Err(IngestError::MalformedRow { line: 2, .. })
        ));
    }

    #[test]
    fn colex_danish_forms_example() {
        let dir = TempDir::new().unwrap();
        let path = write_file(
            &dir,
            "colex.tsv",
            "concept_a\tconcept_b\tlanguage\tfrequency\tforms\n\
             tree\twood\tdan\t244\ttræ:91;træe:153\n",
        );
        let table = load_colex(&path).unwrap();
        assert_eq!(table.len(), 1);
        let rec = &table.records()[0];
        assert_eq!(rec.frequency, 244);
        assert_eq!(rec.forms.len(), 2);
        assert_eq!(rec.forms[0].count + rec.forms[1].count, 244);
    }

    #[test]
    fn colex_canonical_pair_order() {
        let dir = TempDir::new().unwrap();
        let path = write_file(
            &dir,
            "colex.tsv",
            "concept_a\tconcept_b\tlanguage\tfrequency\nwood\ttree\tdan\t244\n",
        );
        let table = load_colex(&path).unwrap();
        let rec = &table.records()[0];
        assert_eq!((rec.concept_a.as_str(), rec.concept_b.as_str()), ("tree", "wood"));
    }

    #[test]
    fn colex_forms_sum_mismatch() {
        let dir = TempDir::new().unwrap();
        let path = write_file(
            &dir,
            "colex.tsv",
            "concept_a\tconcept_b\tlanguage\tfrequency\tforms\n\
             tree\twood\tdan\t244\ttræ:91;træe:109\n",
        );
        assert!(matches!(
            load_colex(&path),
            Err(IngestError::MalformedForms { line: 2, .. })
        ));
    }

    #[test]
    fn colex_negative_frequency_and_self_pair() {
        let dir = TempDir::new().unwrap();
        let neg = write_file(
            &dir,
            "neg.tsv",
            "concept_a\tconcept_b\tlanguage\tfrequency\ntree\twood\tdan\t-3\n",
        );
        assert!(matches!(
            load_colex(&neg),
            Err(IngestError::NegativeFrequency { line: 2, .. })
        ));
        let own = write_file(
            &dir,
            "self.tsv",
            "concept_a\tconcept_b\tlanguage\tfrequency\ntree\tTree\tdan\t3\n",
        );
        assert!(matches!(
            load_colex(&own),
            Err(IngestError::SelfColexification { line: 2, .. })
        ));
    }

    #[test]
    fn colex_duplicates_summed() {
        let dir = TempDir::new().unwrap();
        let path = write_file(
            &dir,
            "colex.tsv",
            "concept_a\tconcept_b\tlanguage\tfrequency\tforms\n\
             tree\twood\tdan\t100\ttræ:100\n\
             wood\ttree\tdan\t50\ttræ:20;træe:30\n",
        );
        let table = load_colex(&path).unwrap();
        assert_eq!(table.len(), 1);
        let rec = &table.records()[0];
        assert_eq!(rec.frequency, 150);
        let sum: u64 = rec.forms.iter().map(|f| f.count).sum();
        assert_eq!(sum, 150);
        assert_eq!(rec.forms.len(), 2);
    }

    #[test]
    fn colex_merge_drops_forms_when_one_side_lacks_them() {
        let dir = TempDir::new().unwrap();
        let path = write_file(
            &dir,
            "colex.tsv",
            "concept_a\tconcept_b\tlanguage\tfrequency\tforms\n\
             tree\twood\tdan\t100\ttræ:100\n\
             tree\twood\tdan\t50\t\n",
        );
        let table = load_colex(&path).unwrap();
        let rec = &table.records()[0];
        assert_eq!(rec.frequency, 150);
        assert!(rec.forms.is_empty());
    }

    #[test]
    fn ratings_examples() {
        let dir = TempDir::new().unwrap();
        let path = write_file(
            &dir,
            "ratings.csv",
            "lemma,concreteness,valence,arousal,dominance\n\
             water,4.8,,,\n\
             hope,1.9,7.0,5.5,6.2\n",
        );
        let table = load_ratings(&path, &ScaleSpec::default()).unwrap();
        assert_eq!(table.len(), 2);
        let water = table.get("water").unwrap();
        assert_eq!(water.concreteness, Some(4.8));
        assert!(water.valence.is_none());
        let hope = table.get("hope").unwrap();
        assert_eq!(hope.dominance, Some(6.2));
    }

    #[test]
    fn ratings_out_of_scale() {
        let dir = TempDir::new().unwrap();
        let path = write_file(
            &dir,
            "ratings.csv",
            "lemma,concreteness\nx,6.1\ny,0.2\nz,3.0\n",
        );
        match load_ratings(&path, &ScaleSpec::default()) {
            Err(IngestError::RatingOutOfScale { violations, .. }) => {
                assert_eq!(violations.len(), 2);
                assert_eq!(violations[0].line, 2);
                assert_eq!(violations[0].value, 6.1);
                assert_eq!(violations[1].line, 3);
            }
            other => panic!("expected RatingOutOfScale, got {other:?}"),
        }
    }

    #[test]
    fn ratings_duplicates_keep_first() {
        let dir = TempDir::new().unwrap();
        let path = write_file(
            &dir,
            "ratings.csv",
            "lemma,concreteness\nwater,4.8\nwater,1.2\n",
        );
        let table = load_ratings(&path, &ScaleSpec::default()).unwrap();
        assert_eq!(table.len(), 1);
        assert_eq!(table.get("water").unwrap().concreteness, Some(4.8));
    }

    #[test]
    fn wordlists_synonyms_and_empty_transcription() {
        let dir = TempDir::new().unwrap();
        let path = write_file(
            &dir,
            "wl.tsv",
            "language\tconcept\ttranscription\ndeu\twater\tvasa\ndeu\twater\tvas3r\n",
        );
        let table = load_wordlists(&path).unwrap();
        assert_eq!(table.len(), 2);
        assert_eq!(table.forms("deu", "water"), vec!["vasa", "vas3r"]);

        let bad = write_file(
            &dir,
            "bad.tsv",
            "language\tconcept\ttranscription\ndeu\twater\t\n",
        );
        assert!(matches!(
            load_wordlists(&bad),
            Err(IngestError::MalformedRow { line: 2, .. })
        ));
    }

    #[test]
    fn pair_matrix_long_canonicalizes() {
        let dir = TempDir::new().unwrap();
        let path = write_file(&dir, "m.csv", "id_a,id_b,value\neng,deu,0.25\n");
        let table = load_pair_matrix(&path, Some((0.0, 1.0))).unwrap();
        assert_eq!(table.get("deu", "eng"), Some(0.25));
        assert_eq!(table.get("eng", "deu"), Some(0.25));
    }

    #[test]
    fn pair_matrix_long_conflict_is_asymmetric() {
        let dir = TempDir::new().unwrap();
        let path = write_file(
            &dir,
            "m.csv",
            "id_a,id_b,value\neng,deu,0.25\ndeu,eng,0.30\n",
        );
        assert!(matches!(
            load_pair_matrix(&path, None),
            Err(IngestError::AsymmetricMatrix { line: 3, .. })
        ));
    }

    #[test]
    fn pair_matrix_square() {
        let dir = TempDir::new().unwrap();
        let path = write_file(
            &dir,
            "m.csv",
            "id,deu,eng,fra\ndeu,0,0.2,0.4\neng,0.2,0,0.6\nfra,0.4,0.6,0\n",
        );
        let table = load_pair_matrix(&path, Some((0.0, 1.0))).unwrap();
        assert_eq!(table.len(), 3);
        assert_eq!(table.get("deu", "fra"), Some(0.4));
    }

    #[test]
    fn pair_matrix_square_asymmetric() {
        let dir = TempDir::new().unwrap();
        let path = write_file(
            &dir,
            "m.csv",
            "id,deu,eng\ndeu,0,0.2\neng,0.3,0\n",
        );
        assert!(matches!(
            load_pair_matrix(&path, None),
            Err(IngestError::AsymmetricMatrix { .. })
        ));
    }

    #[test]
    fn pair_matrix_value_out_of_range() {
        let dir = TempDir::new().unwrap();
        let path = write_file(&dir, "m.csv", "id_a,id_b,value\neng,deu,1.2\n");
        match load_pair_matrix(&path, Some((0.0, 1.0))) {
            Err(IngestError::ValueOutOfRange { line, value, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(value, 1.2);
            }
            other => panic!("expected ValueOutOfRange, got {other:?}"),
        }
    }

    #[test]
    fn round_trips() {
        let dir = TempDir::new().unwrap();
        let langs = write_file(
            &dir,
            "langs.tsv",
            "id\tname\tfamily\tgenus\tparent\tbranch\tmacroarea\tarea\tlatitude\tlongitude\n\
             deu\tGerman\tIndo-European\tGermanic\t\tWest Germanic\tEurasia\t\t51.0\t10.0\n\
             abc\t\t\t\t\t\t\t\t\t\n",
        );
        let t1 = load_languages(&langs).unwrap();
        let out = dir.path().join("langs_out.tsv");
        write_languages(&t1, &out).unwrap();
        assert_eq!(load_languages(&out).unwrap(), t1);

        let colex = write_file(
            &dir,
            "colex.tsv",
            "concept_a\tconcept_b\tlanguage\tfrequency\tforms\n\
             tree\twood\tdan\t244\ttræ:91;træe:153\n\
             eye\tlook\trus\t264\t\n",
        );
        let c1 = load_colex(&colex).unwrap();
        let out = dir.path().join("colex_out.tsv");
        write_colex(&c1, &out).unwrap();
        assert_eq!(load_colex(&out).unwrap(), c1);

        let ratings = write_file(
            &dir,
            "r.csv",
            "lemma,concreteness,valence,arousal,dominance\nwater,4.8,,,\nhope,1.9,7.0,5.5,6.2\n",
        );
        let r1 = load_ratings(&ratings, &ScaleSpec::default()).unwrap();
        let out = dir.path().join("r_out.csv");
        write_ratings(&r1, &out).unwrap();
        assert_eq!(load_ratings(&out, &ScaleSpec::default()).unwrap(), r1);

        let wl = write_file(
            &dir,
            "wl.tsv",
            "language\tconcept\ttranscription\ndeu\twater\tvasa\ndeu\twater\tvas3r\n",
        );
        let w1 = load_wordlists(&wl).unwrap();
        let out = dir.path().join("wl_out.tsv");
        write_wordlists(&w1, &out).unwrap();
        assert_eq!(load_wordlists(&out).unwrap(), w1);

        let mut pt = PairValueTable::new(Some((0.0, 1.0)));
        pt.insert("eng", "deu", 0.25).unwrap();
        pt.insert("fra", "deu", 0.5).unwrap();
        let out = dir.path().join("pt.tsv");
        pt.write(&out).unwrap();
        assert_eq!(load_pair_table(&out, Some((0.0, 1.0))).unwrap(), pt);
    }

    #[test]
    fn load_twice_is_identical() {
        let dir = TempDir::new().unwrap();
        let path = write_file(
            &dir,
            "colex.tsv",
            "concept_a\tconcept_b\tlanguage\tfrequency\n\
             wood\ttree\tdan\t100\n\
             tree\twood\tdan\t44\n\
             eye\tlook\trus\t264\n",
        );
        assert_eq!(load_colex(&path).unwrap(), load_colex(&path).unwrap());
    }

    #[test]
    fn pair_table_rejects_self_pair() {
        let mut t = PairValueTable::new(None);
        assert_eq!(t.insert("x", "x", 1.0), Err(PairInsertError::SelfPair));
    }
}
