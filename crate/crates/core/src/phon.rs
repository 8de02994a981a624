//! Phonological distances from sound-class wordlists.
//!
//! The pairwise measure is normalized Levenshtein distance (LDN): edit
//! distance over sound-class symbols divided by the longer transcription.
//! Language distance is the mean, over shared concepts, of the per-concept
//! minimum LDN across form pairs, so synonyms can only lower a distance.
//! Pairs sharing fewer than `min_shared_concepts` concepts are omitted.
//! A precomputed matrix can be ingested instead via
//! [`crate::ingest::load_pair_matrix`] when calibrated distances are wanted.

use rayon::prelude::*;
use thiserror::Error;

use crate::concepts::{builtin_set, ConceptSet, SetName};
use crate::ingest::{PairValueTable, WordlistTable};

#[derive(Debug, Error, PartialEq)]
pub enum PhonError {
    #[error("empty transcription")]
    EmptyTranscription,
    #[error("languages `{a}` and `{b}` share only {shared} concepts (minimum {minimum})")]
    InsufficientOverlap {
        a: String,
        b: String,
        shared: usize,
        minimum: usize,
    },
    #[error("language `{0}` is not in the wordlist table")]
    UnknownLanguage(String),
    #[error("min_shared_concepts {minimum} exceeds concept set size {set_size}")]
    InvalidSpec { minimum: usize, set_size: usize },
}

/// Configuration for wordlist-based distances. Aggregation is fixed to the
/// mean of per-concept minima.
#[derive(Debug, Clone)]
pub struct PhonDistanceSpec {
    concept_set: ConceptSet,
    min_shared_concepts: usize,
}

impl PhonDistanceSpec {
    pub fn new(concept_set: ConceptSet, min_shared_concepts: usize) -> Result<Self, PhonError> {
        let minimum = min_shared_concepts.max(1);
        if minimum > concept_set.len() {
            return Err(PhonError::InvalidSpec {
                minimum,
                set_size: concept_set.len(),
            });
        }
        Ok(Self {
            concept_set,
            min_shared_concepts: minimum,
        })
    }

    pub fn concept_set(&self) -> &ConceptSet {
        &self.concept_set
    }

    pub fn min_shared_concepts(&self) -> usize {
        self.min_shared_concepts
    }
}

impl Default for PhonDistanceSpec {
    /// The 40 nuclear concepts with at least 20 shared.
    fn default() -> Self {
        Self::new(builtin_set(SetName::Nuclear).expect("bundled set"), 20)
            .expect("20 <= 40")
    }
}

/// Levenshtein edit distance over symbols (unicode scalar values).
fn levenshtein(a: &[char], b: &[char]) -> usize {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut cache: Vec<usize> = (0..=short.len()).collect();
    for (j, &cl) in long.iter().enumerate() {
        let mut prev_diag = cache[0];
        cache[0] = j + 1;
        for (i, &cs) in short.iter().enumerate() {
            let cur = cache[i + 1];
            cache[i + 1] = if cs == cl {
                prev_diag
            } else {
                1 + prev_diag.min(cur).min(cache[i])
            };
            prev_diag = cur;
        }
    }
    *cache.last().expect("non-empty cache")
}

/// Normalized Levenshtein distance: edit distance divided by the longer
/// string, in `[0, 1]`. Zero iff the transcriptions are equal.
pub fn ldn(a: &str, b: &str) -> Result<f64, PhonError> {
    if a.is_empty() || b.is_empty() {
        return Err(PhonError::EmptyTranscription);
    }
    let ca: Vec<char> = a.chars().collect();
    let cb: Vec<char> = b.chars().collect();
    Ok(levenshtein(&ca, &cb) as f64 / ca.len().max(cb.len()) as f64)
}

/// Per-concept minimum LDN across the two languages' form pairs, or `None`
/// when either language lacks the concept.
fn concept_min_ldn(
    wordlists: &WordlistTable,
    concept: &str,
    lang_a: &str,
    lang_b: &str,
) -> Option<f64> {
    let forms_a = wordlists.forms(lang_a, concept);
    let forms_b = wordlists.forms(lang_b, concept);
    if forms_a.is_empty() || forms_b.is_empty() {
        return None;
    }
    let mut best = f64::INFINITY;
    for fa in &forms_a {
        for fb in &forms_b {
            // Loader guarantees non-empty transcriptions.
            let d = ldn(fa, fb).expect("non-empty transcription");
            if d < best {
                best = d;
            }
        }
    }
    Some(best)
}

fn distance_over_shared(
    wordlists: &WordlistTable,
    spec: &PhonDistanceSpec,
    lang_a: &str,
    lang_b: &str,
) -> (usize, f64) {
    let mut shared = 0usize;
    let mut sum = 0.0;
    for concept in spec.concept_set.members() {
        if let Some(d) = concept_min_ldn(wordlists, concept, lang_a, lang_b) {
            shared += 1;
            sum += d;
        }
    }
    (shared, sum)
}

/// Mean of per-concept minimum LDNs over the concepts of `spec` attested in
/// both languages. Symmetric; errors when overlap is below the spec minimum.
pub fn phonological_distance(
    wordlists: &WordlistTable,
    lang_a: &str,
    lang_b: &str,
    spec: &PhonDistanceSpec,
) -> Result<f64, PhonError> {
    for lang in [lang_a, lang_b] {
        if !wordlists.has_language(lang) {
            return Err(PhonError::UnknownLanguage(lang.to_string()));
        }
    }
    let (shared, sum) = distance_over_shared(wordlists, spec, lang_a, lang_b);
    if shared < spec.min_shared_concepts {
        return Err(PhonError::InsufficientOverlap {
            a: lang_a.to_string(),
            b: lang_b.to_string(),
            shared,
            minimum: spec.min_shared_concepts,
        });
    }
    Ok(sum / shared as f64)
}

/// Coverage statistics from [`phonological_distance_table_detailed`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PhonTableReport {
    pub languages: usize,
    pub pairs: usize,
    pub omitted_low_overlap: usize,
}

/// All-pairs phonological distances over the languages of the table,
/// omitting pairs with insufficient concept overlap.
pub fn phonological_distance_table(
    wordlists: &WordlistTable,
    spec: &PhonDistanceSpec,
) -> PairValueTable {
    phonological_distance_table_detailed(wordlists, spec).0
}

/// As [`phonological_distance_table`], also reporting how many pairs were
/// omitted for low overlap.
pub fn phonological_distance_table_detailed(
    wordlists: &WordlistTable,
    spec: &PhonDistanceSpec,
) -> (PairValueTable, PhonTableReport) {
    let languages = wordlists.languages();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..languages.len() {
        for j in (i + 1)..languages.len() {
            pairs.push((i, j));
        }
    }
    let computed: Vec<Option<f64>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (shared, sum) = distance_over_shared(wordlists, spec, &languages[i], &languages[j]);
            if shared < spec.min_shared_concepts {
                None
            } else {
                Some(sum / shared as f64)
            }
        })
        .collect();
    let mut table = PairValueTable::unit_range();
    let mut omitted = 0usize;
    for (&(i, j), value) in pairs.iter().zip(computed) {
        match value {
            Some(d) => table
                .insert(&languages[i], &languages[j], d)
                .expect("LDN means are in [0, 1] and pairs unique"),
            None => omitted += 1,
        }
    }
    let report = PhonTableReport {
        languages: languages.len(),
        pairs: table.len(),
        omitted_low_overlap: omitted,
    };
    (table, report)
}
