//! Colexification matrices and cosine-based semantic distances.
//!
//! A language is represented by the vector of frequencies with which it
//! realizes each selected colexification pattern; unattested patterns are
//! explicit zeros (negative samples). The distance between two languages is
//! the cosine distance of their frequency vectors, in `[0, 1]`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use thiserror::Error;

use crate::concepts::ConceptSet;
use crate::ingest::{ColexTable, PairValueTable};

#[derive(Debug, Error, PartialEq)]
pub enum ColexError {
    #[error("no colexification pattern satisfies the selection (set `{set}`, mode {mode:?}, min_languages {min_languages})")]
    EmptyPatternList {
        set: String,
        mode: PatternMode,
        min_languages: usize,
    },
    #[error("colexification data references unknown language id(s): {}", .0.join(", "))]
    UnknownLanguageId(Vec<String>),
    #[error("language `{0}` has an all-zero frequency vector; distance undefined")]
    ZeroVector(String),
    #[error("language `{0}` is not in the matrix")]
    UnknownLanguage(String),
}

/// How a concept set selects colexification patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternMode {
    /// At least one of the two concepts is in the set.
    Any,
    /// Both concepts are in the set.
    Both,
}

impl PatternMode {
    /// Per-pattern language-attestation threshold used when none is given:
    /// 1 for `Any`, 3 for `Both`.
    pub fn default_min_languages(&self) -> usize {
        match self {
            PatternMode::Any => 1,
            PatternMode::Both => 3,
        }
    }
}

/// Ordered list of canonical `(concept_a, concept_b)` patterns, each
/// attested (frequency > 0) in at least one language.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PatternList {
    patterns: Vec<(String, String)>,
}

impl PatternList {
    pub fn patterns(&self) -> &[(String, String)] {
        &self.patterns
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }
}

/// Select the patterns of `table` matching `set` under `mode`, dropping
/// patterns attested in fewer than `min_languages` languages. The result is
/// sorted lexicographically.
pub fn select_patterns(
    table: &ColexTable,
    set: &ConceptSet,
    mode: PatternMode,
    min_languages: usize,
) -> Result<PatternList, ColexError> {
    let min_languages = min_languages.max(1);
    let mut attesting: BTreeMap<(&str, &str), BTreeSet<&str>> = BTreeMap::new();
    for rec in table.records() {
        if rec.frequency == 0 {
            continue;
        }
        let matches = match mode {
            PatternMode::Any => set.contains(&rec.concept_a) || set.contains(&rec.concept_b),
            PatternMode::Both => set.contains(&rec.concept_a) && set.contains(&rec.concept_b),
        };
        if matches {
            attesting
                .entry((&rec.concept_a, &rec.concept_b))
                .or_default()
                .insert(&rec.language);
        }
    }
    let patterns: Vec<(String, String)> = attesting
        .into_iter()
        .filter(|(_, langs)| langs.len() >= min_languages)
        .map(|((a, b), _)| (a.to_string(), b.to_string()))
        .collect();
    if patterns.is_empty() {
        return Err(ColexError::EmptyPatternList {
            set: set.name().to_string(),
            mode,
            min_languages,
        });
    }
    Ok(PatternList { patterns })
}

/// Sparse language-by-pattern frequency matrix. Row order follows the
/// `languages` argument of [`build_matrix`], column order the pattern list;
/// absent cells are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ColexMatrix {
    languages: Vec<String>,
    patterns: PatternList,
    // Per row: (column, frequency) entries sorted by column.
    rows: Vec<Vec<(u32, u64)>>,
}

impl ColexMatrix {
    pub fn languages(&self) -> &[String] {
        &self.languages
    }

    pub fn patterns(&self) -> &PatternList {
        &self.patterns
    }

    pub fn n_languages(&self) -> usize {
        self.languages.len()
    }

    pub fn n_patterns(&self) -> usize {
        self.patterns.len()
    }

    fn row_index(&self, language: &str) -> Option<usize> {
        self.languages.iter().position(|l| l == language)
    }

    /// Dense frequency vector for one language, zeros included.
    pub fn dense_row(&self, language: &str) -> Option<Vec<u64>> {
        let idx = self.row_index(language)?;
        let mut out = vec![0u64; self.n_patterns()];
        for &(col, freq) in &self.rows[idx] {
            out[col as usize] = freq;
        }
        Some(out)
    }

    /// Languages whose entire row is zero; their distances are undefined.
    pub fn zero_row_languages(&self) -> Vec<&str> {
        self.languages
            .iter()
            .enumerate()
            .filter(|(i, _)| self.rows[*i].is_empty())
            .map(|(_, l)| l.as_str())
            .collect()
    }
}

/// Build the frequency matrix of `patterns` over `languages`.
///
/// Cell (i, j) is the summed frequency of pattern j in language i, zero when
/// unattested (the negative samples). A record matching a selected pattern
/// whose language is not in `languages` is an error.
pub fn build_matrix(
    table: &ColexTable,
    patterns: &PatternList,
    languages: &[String],
) -> Result<ColexMatrix, ColexError> {
    let lang_index: HashMap<&str, usize> = languages
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let col_index: HashMap<(&str, &str), u32> = patterns
        .patterns()
        .iter()
        .enumerate()
        .map(|(j, (a, b))| ((a.as_str(), b.as_str()), j as u32))
        .collect();

    let mut cells: Vec<BTreeMap<u32, u64>> = vec![BTreeMap::new(); languages.len()];
    let mut unknown: BTreeSet<String> = BTreeSet::new();
    for rec in table.records() {
        let Some(&col) = col_index.get(&(rec.concept_a.as_str(), rec.concept_b.as_str())) else {
            continue;
        };
        match lang_index.get(rec.language.as_str()) {
            Some(&row) => {
                if rec.frequency > 0 {
                    *cells[row].entry(col).or_insert(0) += rec.frequency;
                }
            }
            None => {
                unknown.insert(rec.language.clone());
            }
        }
    }
    if !unknown.is_empty() {
        return Err(ColexError::UnknownLanguageId(unknown.into_iter().collect()));
    }
    let rows = cells
        .into_iter()
        .map(|m| m.into_iter().collect())
        .collect();
    Ok(ColexMatrix {
        languages: languages.to_vec(),
        patterns: patterns.clone(),
        rows,
    })
}

/// Sparse dot product over rows sorted by column index. The accumulation
/// order is fixed (ascending column), so the result is bit-identical
/// regardless of argument order.
fn sparse_dot(a: &[(u32, u64)], b: &[(u32, u64)]) -> f64 {
    let mut sum = 0.0;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                sum += a[i].1 as f64 * b[j].1 as f64;
                i += 1;
                j += 1;
            }
        }
    }
    sum
}

fn norm_squared(row: &[(u32, u64)]) -> f64 {
    row.iter()
        .map(|&(_, v)| {
            let v = v as f64;
            v * v
        })
        .sum()
}

fn cosine_distance(a: &[(u32, u64)], b: &[(u32, u64)]) -> f64 {
    if a == b {
        return 0.0;
    }
    let d = 1.0 - sparse_dot(a, b) / (norm_squared(a) * norm_squared(b)).sqrt();
    d.clamp(0.0, 1.0)
}

/// Cosine distance between two languages' frequency rows, in `[0, 1]`.
/// Identical vectors give 0, orthogonal vectors 1. A language with an
/// all-zero row has no defined distance.
pub fn semantic_distance(
    matrix: &ColexMatrix,
    lang_a: &str,
    lang_b: &str,
) -> Result<f64, ColexError> {
    let ia = matrix
        .row_index(lang_a)
        .ok_or_else(|| ColexError::UnknownLanguage(lang_a.to_string()))?;
    let ib = matrix
        .row_index(lang_b)
        .ok_or_else(|| ColexError::UnknownLanguage(lang_b.to_string()))?;
    if matrix.rows[ia].is_empty() {
        return Err(ColexError::ZeroVector(lang_a.to_string()));
    }
    if matrix.rows[ib].is_empty() {
        return Err(ColexError::ZeroVector(lang_b.to_string()));
    }
    Ok(cosine_distance(&matrix.rows[ia], &matrix.rows[ib]))
}

/// All-pairs semantic distances over the languages with nonzero rows.
/// Zero-vector languages are omitted (not assigned maximal distance), so the
/// table has k(k-1)/2 entries for k nonzero rows.
pub fn semantic_distance_table(matrix: &ColexMatrix) -> PairValueTable {
    let nonzero: Vec<usize> = (0..matrix.n_languages())
        .filter(|&i| !matrix.rows[i].is_empty())
        .collect();
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(nonzero.len() * (nonzero.len().saturating_sub(1)) / 2);
    for (i, &a) in nonzero.iter().enumerate() {
        for &b in &nonzero[i + 1..] {
            pairs.push((a, b));
        }
    }
    let distances: Vec<f64> = pairs
        .par_iter()
        .map(|&(a, b)| cosine_distance(&matrix.rows[a], &matrix.rows[b]))
        .collect();
    let mut table = PairValueTable::unit_range();
    for (&(a, b), d) in pairs.iter().zip(distances) {
        table
            .insert(&matrix.languages[a], &matrix.languages[b], d)
            .expect("distances are in [0, 1] and pairs unique");
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concepts::{builtin_set, SetName};
    use crate::ingest::ColexRecord;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn record(a: &str, b: &str, lang: &str, freq: u64) -> ColexRecord {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        ColexRecord {
            concept_a: a.to_string(),
            concept_b: b.to_string(),
            language: lang.to_string(),
            frequency: freq,
            forms: Vec::new(),
        }
    }

    fn table(records: Vec<ColexRecord>) -> ColexTable {
        // Round-trip through the loader is tested in ingest; build directly here.
        let mut merged: BTreeMap<(String, String, String), ColexRecord> = BTreeMap::new();
        for r in records {
            merged
                .entry((r.concept_a.clone(), r.concept_b.clone(), r.language.clone()))
                .and_modify(|e| e.frequency += r.frequency)
                .or_insert(r);
        }
        let records = merged.into_values().collect::<Vec<_>>();
        // ColexTable has no public constructor from raw records; go through
        // the serialized form.
        let dir = tempfile::TempDir::new().unwrap();
        let path = dir.path().join("t.tsv");
        let mut out = String::from("concept_a\tconcept_b\tlanguage\tfrequency\n");
        for r in &records {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                r.concept_a, r.concept_b, r.language, r.frequency
            ));
        }
        std::fs::write(&path, out).unwrap();
        crate::ingest::load_colex(&path).unwrap()
    }

    /// The worked five-language, four-pattern example.
    fn worked_example() -> ColexTable {
        table(vec![
            record("language", "tongue", "rus", 163),
            record("eye", "look", "rus", 264),
            record("tree", "wood", "rus", 228),
            record("knee", "kneel", "rus", 42),
            record("language", "tongue", "pol", 169),
            record("tree", "wood", "pol", 251),
            record("language", "tongue", "dan", 162),
            record("tree", "wood", "dan", 244),
            record("language", "tongue", "deu", 152),
            record("language", "tongue", "nld", 158),
        ])
    }

    fn worked_matrix() -> ColexMatrix {
        let t = worked_example();
        let nuclear = builtin_set(SetName::Nuclear).unwrap();
        let patterns = select_patterns(&t, &nuclear, PatternMode::Any, 1).unwrap();
        let langs: Vec<String> = ["rus", "pol", "dan", "deu", "nld"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        build_matrix(&t, &patterns, &langs).unwrap()
    }

    #[test]
    fn select_patterns_any_mode() {
        let t = worked_example();
        let nuclear = builtin_set(SetName::Nuclear).unwrap();
        let patterns = select_patterns(&t, &nuclear, PatternMode::Any, 1).unwrap();
        assert_eq!(patterns.len(), 4);
        assert!(patterns
            .patterns()
            .contains(&("language".to_string(), "tongue".to_string())));
    }

    #[test]
    fn select_patterns_both_mode() {
        let t = worked_example();
        let set = ConceptSet::new("s", ["tree", "wood", "eye"]);
        let patterns = select_patterns(&t, &set, PatternMode::Both, 1).unwrap();
        assert_eq!(
            patterns.patterns(),
            &[("tree".to_string(), "wood".to_string())]
        );
    }

    #[test]
    fn select_patterns_language_threshold() {
        let t = worked_example();
        let nuclear = builtin_set(SetName::Nuclear).unwrap();
        // (knee, kneel) and (eye, look) are attested only in Russian.
        let patterns = select_patterns(&t, &nuclear, PatternMode::Any, 3).unwrap();
        assert_eq!(patterns.len(), 2);
        let patterns = select_patterns(&t, &nuclear, PatternMode::Any, 6);
        assert!(matches!(patterns, Err(ColexError::EmptyPatternList { .. })));
    }

    #[test]
    fn worked_example_rows() {
        let m = worked_matrix();
        assert_eq!(m.n_languages(), 5);
        assert_eq!(m.n_patterns(), 4);
        // Columns are sorted patterns: (eye, look), (knee, kneel),
        // (language, tongue), (tree, wood). Reorder to the presentation
        // order (language,tongue), (eye,look), (tree,wood), (knee,kneel).
        let rus = m.dense_row("rus").unwrap();
        assert_eq!([rus[2], rus[0], rus[3], rus[1]], [163, 264, 228, 42]);
        let pol = m.dense_row("pol").unwrap();
        assert_eq!([pol[2], pol[0], pol[3], pol[1]], [169, 0, 251, 0]);
    }

    #[test]
    fn worked_example_distance() {
        let m = worked_matrix();
        let d = semantic_distance(&m, "rus", "pol").unwrap();
        assert_abs_diff_eq!(d, 0.2766, epsilon = 1e-4);
        assert_eq!(d, semantic_distance(&m, "pol", "rus").unwrap());
    }

    #[test]
    fn zero_row_retained_as_negative_samples() {
        let t = worked_example();
        let nuclear = builtin_set(SetName::Nuclear).unwrap();
        let patterns = select_patterns(&t, &nuclear, PatternMode::Any, 1).unwrap();
        let langs: Vec<String> = ["rus", "pol", "dan", "deu", "nld", "xxx"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let m = build_matrix(&t, &patterns, &langs).unwrap();
        assert_eq!(m.dense_row("xxx").unwrap(), vec![0, 0, 0, 0]);
        assert_eq!(m.zero_row_languages(), vec!["xxx"]);
        assert!(matches!(
            semantic_distance(&m, "rus", "xxx"),
            Err(ColexError::ZeroVector(_))
        ));
    }

    #[test]
    fn unknown_language_in_table() {
        let t = worked_example();
        let nuclear = builtin_set(SetName::Nuclear).unwrap();
        let patterns = select_patterns(&t, &nuclear, PatternMode::Any, 1).unwrap();
        let langs: Vec<String> = vec!["rus".to_string()];
        match build_matrix(&t, &patterns, &langs) {
            Err(ColexError::UnknownLanguageId(ids)) => {
                assert!(ids.contains(&"pol".to_string()));
            }
            other => panic!("expected UnknownLanguageId, got {other:?}"),
        }
    }

    #[test]
    fn identical_and_disjoint_rows() {
        let t = table(vec![
            record("a", "b", "l1", 10),
            record("a", "c", "l1", 5),
            record("a", "b", "l2", 10),
            record("a", "c", "l2", 5),
            record("a", "d", "l3", 7),
        ]);
        let set = ConceptSet::new("s", ["a"]);
        let patterns = select_patterns(&t, &set, PatternMode::Any, 1).unwrap();
        let langs: Vec<String> = ["l1", "l2", "l3"].iter().map(|s| s.to_string()).collect();
        let m = build_matrix(&t, &patterns, &langs).unwrap();
        assert_eq!(semantic_distance(&m, "l1", "l2").unwrap(), 0.0);
        assert_eq!(semantic_distance(&m, "l1", "l3").unwrap(), 1.0);
    }

    #[test]
    fn distance_table_omits_zero_rows() {
        let t = worked_example();
        let nuclear = builtin_set(SetName::Nuclear).unwrap();
        let patterns = select_patterns(&t, &nuclear, PatternMode::Any, 1).unwrap();
        let mut langs: Vec<String> = ["rus", "pol", "dan", "deu", "nld"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let m = build_matrix(&t, &patterns, &langs).unwrap();
        assert_eq!(semantic_distance_table(&m).len(), 10); // C(5,2)

        langs.push("zzz".to_string());
        let m = build_matrix(&t, &patterns, &langs).unwrap();
        assert_eq!(semantic_distance_table(&m).len(), 10); // zero row omitted
    }

    /// Dense oracle used by the brute-force equivalence property.
    fn dense_cosine_distance(a: &[u64], b: &[u64]) -> f64 {
        let dot: f64 = a.iter().zip(b).map(|(&x, &y)| x as f64 * y as f64).sum();
        let na: f64 = a.iter().map(|&x| (x as f64).powi(2)).sum::<f64>().sqrt();
        let nb: f64 = b.iter().map(|&x| (x as f64).powi(2)).sum::<f64>().sqrt();
        (1.0 - dot / (na * nb)).clamp(0.0, 1.0)
    }

    proptest! {
        // Sparse computation matches a dense oracle on small random matrices.
        #[test]
        fn sparse_matches_dense_oracle(
            rows in proptest::collection::vec(
                proptest::collection::vec(0u64..50, 50),
                2..20,
            )
        ) {
            let n = rows.len();
            let mut records = Vec::new();
            for (i, row) in rows.iter().enumerate() {
                for (j, &freq) in row.iter().enumerate() {
                    if freq > 0 {
                        records.push(record("c", &format!("p{j:02}"), &format!("l{i:02}"), freq));
                    }
                }
            }
            prop_assume!(!records.is_empty());
            let t = table(records);
            let set = ConceptSet::new("s", ["c"]);
            let patterns = select_patterns(&t, &set, PatternMode::Any, 1).unwrap();
            let langs: Vec<String> = (0..n).map(|i| format!("l{i:02}")).collect();
            let m = build_matrix(&t, &patterns, &langs).unwrap();
            for i in 0..n {
                for j in (i + 1)..n {
                    let (da, db) = (m.dense_row(&langs[i]).unwrap(), m.dense_row(&langs[j]).unwrap());
                    let sparse = semantic_distance(&m, &langs[i], &langs[j]);
                    if da.iter().all(|&x| x == 0) || db.iter().all(|&x| x == 0) {
                        prop_assert!(matches!(sparse, Err(ColexError::ZeroVector(_))));
                    } else {
                        let expect = dense_cosine_distance(&da, &db);
                        prop_assert!((sparse.unwrap() - expect).abs() < 1e-12);
                    }
                }
            }
        }

        // Scaling one language's frequencies must not change its distances.
        #[test]
        fn scale_invariance(
            a in proptest::collection::vec(0u64..100, 10),
            b in proptest::collection::vec(0u64..100, 10),
            scale in 2u64..10,
        ) {
            prop_assume!(a.iter().any(|&x| x > 0) && b.iter().any(|&x| x > 0));
            let build = |a: &[u64], b: &[u64]| {
                let mut records = Vec::new();
                for (j, &f) in a.iter().enumerate() {
                    if f > 0 { records.push(record("c", &format!("p{j}"), "la", f)); }
                }
                for (j, &f) in b.iter().enumerate() {
                    if f > 0 { records.push(record("c", &format!("p{j}"), "lb", f)); }
                }
                let t = table(records);
                let set = ConceptSet::new("s", ["c"]);
                let patterns = select_patterns(&t, &set, PatternMode::Any, 1).unwrap();
                build_matrix(&t, &patterns, &["la".to_string(), "lb".to_string()]).unwrap()
            };
            let base = build(&a, &b);
            let scaled_a: Vec<u64> = a.iter().map(|&x| x * scale).collect();
            let scaled = build(&scaled_a, &b);
            // Pattern lists can differ only if zero-columns change, which
            // scaling cannot do.
            let d1 = semantic_distance(&base, "la", "lb").unwrap();
            let d2 = semantic_distance(&scaled, "la", "lb").unwrap();
            prop_assert!((d1 - d2).abs() < 1e-12);
        }

        // k nonzero rows always produce exactly k(k-1)/2 pairs.
        #[test]
        fn pair_count_law(present in proptest::collection::vec(proptest::bool::ANY, 2..30)) {
            let mut records = Vec::new();
            for (i, &p) in present.iter().enumerate() {
                if p {
                    records.push(record("c", "p0", &format!("l{i:02}"), 1 + i as u64));
                }
            }
            prop_assume!(!records.is_empty());
            let t = table(records);
            let set = ConceptSet::new("s", ["c"]);
            let patterns = select_patterns(&t, &set, PatternMode::Any, 1).unwrap();
            let langs: Vec<String> = (0..present.len()).map(|i| format!("l{i:02}")).collect();
            let m = build_matrix(&t, &patterns, &langs).unwrap();
            let k = present.iter().filter(|&&p| p).count();
            prop_assert_eq!(semantic_distance_table(&m).len(), k * (k - 1) / 2);
        }
    }
}
