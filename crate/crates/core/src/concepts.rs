//! Concept set curation.
//!
//! Four sets ship with the crate as fixture data (nuclear, non-nuclear,
//! emotion, random); four more are derived from rating tables: `concrete`
//! and `abstract` by concreteness thresholds, `aff.concrete` and
//! `aff.abstract` by an additional affectiveness filter on valence, arousal
//! and dominance.

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{normalize_concept, RatingTable};

#[derive(Debug, Error, PartialEq)]
pub enum ConceptError {
    #[error("unknown builtin concept set `{0}` (expected nuclear, non-nuclear, emotion or random)")]
    UnknownSetName(String),
    #[error("filter `{0}` produced an empty concept set")]
    EmptyResult(String),
}

/// The eight canonical concept-set names, in fixed export order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SetName {
    Nuclear,
    NonNuclear,
    Emotion,
    Random,
    Concrete,
    Abstract,
    AffConcrete,
    AffAbstract,
}

impl SetName {
    pub const ALL: [SetName; 8] = [
        SetName::Nuclear,
        SetName::NonNuclear,
        SetName::Emotion,
        SetName::Random,
        SetName::Concrete,
        SetName::Abstract,
        SetName::AffConcrete,
        SetName::AffAbstract,
    ];

    /// The four bundled sets.
    pub const BUILTIN: [SetName; 4] = [
        SetName::Nuclear,
        SetName::NonNuclear,
        SetName::Emotion,
        SetName::Random,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SetName::Nuclear => "nuclear",
            SetName::NonNuclear => "non-nuclear",
            SetName::Emotion => "emotion",
            SetName::Random => "random",
            SetName::Concrete => "concrete",
            SetName::Abstract => "abstract",
            SetName::AffConcrete => "aff.concrete",
            SetName::AffAbstract => "aff.abstract",
        }
    }

    /// Position in the fixed export order.
    pub fn index(&self) -> usize {
        Self::ALL.iter().position(|s| s == self).expect("member of ALL")
    }
}

impl std::fmt::Display for SetName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for SetName {
    type Err = ConceptError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_lowercase().as_str() {
            "nuclear" => Ok(SetName::Nuclear),
            "non-nuclear" | "non_nuclear" => Ok(SetName::NonNuclear),
            "emotion" => Ok(SetName::Emotion),
            "random" => Ok(SetName::Random),
            "concrete" => Ok(SetName::Concrete),
            "abstract" => Ok(SetName::Abstract),
            "aff.concrete" | "aff_concrete" => Ok(SetName::AffConcrete),
            "aff.abstract" | "aff_abstract" => Ok(SetName::AffAbstract),
            other => Err(ConceptError::UnknownSetName(other.to_string())),
        }
    }
}

/// A named, ordered, duplicate-free set of lowercase concepts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptSet {
    name: String,
    members: IndexSet<String>,
}

impl ConceptSet {
    /// Normalizes members (trim + lowercase) and drops duplicates.
    pub fn new<I, S>(name: &str, members: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let members: IndexSet<String> = members
            .into_iter()
            .map(|m| normalize_concept(m.as_ref()))
            .filter(|m| !m.is_empty())
            .collect();
        Self {
            name: name.to_string(),
            members,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn contains(&self, concept: &str) -> bool {
        self.members.contains(concept)
    }

    pub fn members(&self) -> impl Iterator<Item = &str> {
        self.members.iter().map(|s| s.as_str())
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

const NUCLEAR: &str = include_str!("../data/nuclear.txt");
const NON_NUCLEAR: &str = include_str!("../data/non_nuclear.txt");
const EMOTION: &str = include_str!("../data/emotion.txt");
const RANDOM: &str = include_str!("../data/random.txt");

/// One of the four bundled concept lists, one concept per fixture line.
pub fn builtin_set(name: SetName) -> Result<ConceptSet, ConceptError> {
    let raw = match name {
        SetName::Nuclear => NUCLEAR,
        SetName::NonNuclear => NON_NUCLEAR,
        SetName::Emotion => EMOTION,
        SetName::Random => RANDOM,
        other => return Err(ConceptError::UnknownSetName(other.to_string())),
    };
    Ok(ConceptSet::new(name.as_str(), raw.lines()))
}

/// Parse a builtin set name and return the set; convenience for CLI use.
pub fn builtin_set_by_name(name: &str) -> Result<ConceptSet, ConceptError> {
    let set: SetName = name.parse()?;
    builtin_set(set)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConcretenessMode {
    /// Concreteness strictly below 3.
    Abstract,
    /// Concreteness strictly above 4.
    Concrete,
}

/// Select lemmas by concreteness rating: strictly below 3 for the abstract
/// set, strictly above 4 for the concrete set. Boundary values (exactly 3
/// or 4) and lemmas without a concreteness rating fall in neither set.
pub fn filter_by_concreteness(
    ratings: &RatingTable,
    mode: ConcretenessMode,
) -> Result<ConceptSet, ConceptError> {
    let (name, keep): (&str, fn(f64) -> bool) = match mode {
        ConcretenessMode::Abstract => ("abstract", |c| c < 3.0),
        ConcretenessMode::Concrete => ("concrete", |c| c > 4.0),
    };
    let members: Vec<&str> = ratings
        .records()
        .iter()
        .filter(|r| r.concreteness.is_some_and(keep))
        .map(|r| r.lemma.as_str())
        .collect();
    if members.is_empty() {
        return Err(ConceptError::EmptyResult(name.to_string()));
    }
    Ok(ConceptSet::new(name, members))
}

/// How the valence/arousal/dominance band `[4, 6]` is applied when selecting
/// affectively loaded concepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AffectRule {
    /// Each of the three ratings independently outside the closed band.
    #[default]
    PerRatingOutsideBand,
    /// All three ratings below 4, or all three above 6.
    AllSameSide,
}

/// Keep members of `base` whose valence, arousal and dominance are all
/// affectively loaded under [`AffectRule::PerRatingOutsideBand`]; members
/// lacking any of the three ratings are dropped. The resulting set is named
/// `aff.<base name>`.
pub fn filter_by_affect(base: &ConceptSet, ratings: &RatingTable) -> Result<ConceptSet, ConceptError> {
    filter_by_affect_with_rule(base, ratings, AffectRule::default())
}

/// [`filter_by_affect`] with an explicit band rule.
pub fn filter_by_affect_with_rule(
    base: &ConceptSet,
    ratings: &RatingTable,
    rule: AffectRule,
) -> Result<ConceptSet, ConceptError> {
    let name = format!("aff.{}", base.name());
    let members: Vec<&str> = base
        .members()
        .filter(|m| {
            let Some(rec) = ratings.get(m) else { return false };
            let (Some(v), Some(a), Some(d)) = (rec.valence, rec.arousal, rec.dominance) else {
                return false;
            };
            match rule {
                AffectRule::PerRatingOutsideBand => {
                    [v, a, d].iter().all(|&x| x < 4.0 || x > 6.0)
                }
                AffectRule::AllSameSide => {
                    [v, a, d].iter().all(|&x| x < 4.0) || [v, a, d].iter().all(|&x| x > 6.0)
                }
            }
        })
        .collect();
    if members.is_empty() {
        return Err(ConceptError::EmptyResult(name));
    }
    Ok(ConceptSet::new(&name, members))
}

/// One concept shared by two sets that were expected to be disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Overlap {
    pub set_a: String,
    pub set_b: String,
    pub concept: String,
}

/// Report every (set_a, set_b, concept) overlap among the given sets.
/// An empty report means the sets are mutually exclusive.
pub fn assert_mutually_exclusive(sets: &[&ConceptSet]) -> Vec<Overlap> {
    let mut overlaps = Vec::new();
    for i in 0..sets.len() {
        for j in (i + 1)..sets.len() {
            for concept in sets[i].members() {
                if sets[j].contains(concept) {
                    overlaps.push(Overlap {
                        set_a: sets[i].name().to_string(),
                        set_b: sets[j].name().to_string(),
                        concept: concept.to_string(),
                    });
                }
            }
        }
    }
    overlaps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::RatingRecord;
    use proptest::prelude::*;

    fn ratings(rows: &[(&str, Option<f64>, Option<f64>, Option<f64>, Option<f64>)]) -> RatingTable {
        RatingTable::from_records(
            rows.iter()
                .map(|(lemma, c, v, a, d)| RatingRecord {
                    lemma: lemma.to_string(),
                    concreteness: *c,
                    valence: *v,
                    arousal: *a,
                    dominance: *d,
                })
                .collect(),
        )
    }

    #[test]
    fn builtin_cardinalities() {
        assert_eq!(builtin_set(SetName::Nuclear).unwrap().len(), 40);
        assert_eq!(builtin_set(SetName::NonNuclear).unwrap().len(), 60);
        assert_eq!(builtin_set(SetName::Emotion).unwrap().len(), 23);
        assert_eq!(builtin_set(SetName::Random).unwrap().len(), 60);
    }

    #[test]
    fn builtin_members() {
        let nuclear = builtin_set(SetName::Nuclear).unwrap();
        for c in ["blood", "bone", "water", "tongue", "eye", "tree", "knee"] {
            assert!(nuclear.contains(c), "nuclear should contain {c}");
        }
        let emotion = builtin_set(SetName::Emotion).unwrap();
        for c in ["grief", "regret", "shame", "fear"] {
            assert!(emotion.contains(c), "emotion should contain {c}");
        }
    }

    #[test]
    fn builtin_unknown_name() {
        assert!(matches!(
            builtin_set(SetName::Concrete),
            Err(ConceptError::UnknownSetName(_))
        ));
        assert!(builtin_set_by_name("nuclear").is_ok());
        assert!(builtin_set_by_name("no-such-set").is_err());
    }

    #[test]
    fn builtins_mutually_exclusive() {
        let sets: Vec<ConceptSet> = SetName::BUILTIN
            .iter()
            .map(|&n| builtin_set(n).unwrap())
            .collect();
        let refs: Vec<&ConceptSet> = sets.iter().collect();
        assert_eq!(assert_mutually_exclusive(&refs), Vec::new());
    }

    #[test]
    fn concreteness_thresholds_strict() {
        let table = ratings(&[
            ("low", Some(2.9), None, None, None),
            ("three", Some(3.0), None, None, None),
            ("four", Some(4.0), None, None, None),
            ("high", Some(4.5), None, None, None),
            ("norating", None, None, None, None),
        ]);
        let abs = filter_by_concreteness(&table, ConcretenessMode::Abstract).unwrap();
        let con = filter_by_concreteness(&table, ConcretenessMode::Concrete).unwrap();
        assert!(abs.contains("low"));
        assert!(!abs.contains("three"));
        assert!(con.contains("high"));
        assert!(!con.contains("four"));
        assert!(!abs.contains("norating") && !con.contains("norating"));
    }

    #[test]
    fn concreteness_empty_result() {
        let table = ratings(&[("mid", Some(3.5), None, None, None)]);
        assert!(matches!(
            filter_by_concreteness(&table, ConcretenessMode::Abstract),
            Err(ConceptError::EmptyResult(_))
        ));
    }

    #[test]
    fn affect_band_examples() {
        let table = ratings(&[
            ("kept", None, Some(2.0), Some(7.1), Some(3.3)),
            ("dropped", None, Some(5.0), Some(7.1), Some(3.3)),
            ("edges", None, Some(3.9), Some(6.1), Some(6.5)),
            ("partial", None, Some(2.0), None, Some(3.3)),
        ]);
        let base = ConceptSet::new("concrete", ["kept", "dropped", "edges", "partial"]);
        let aff = filter_by_affect(&base, &table).unwrap();
        assert!(aff.contains("kept"));
        assert!(!aff.contains("dropped"));
        assert!(aff.contains("edges"));
        assert!(!aff.contains("partial"));
        assert_eq!(aff.name(), "aff.concrete");
    }

    #[test]
    fn affect_all_same_side_rule() {
        let table = ratings(&[
            ("split", None, Some(2.0), Some(7.1), Some(3.3)),
            ("alllow", None, Some(2.0), Some(3.0), Some(3.3)),
        ]);
        let base = ConceptSet::new("abstract", ["split", "alllow"]);
        let aff = filter_by_affect_with_rule(&base, &table, AffectRule::AllSameSide).unwrap();
        assert!(!aff.contains("split"));
        assert!(aff.contains("alllow"));
    }

    #[test]
    fn overlap_report() {
        let a = ConceptSet::new("a", ["x", "y"]);
        let b = ConceptSet::new("b", ["y", "z"]);
        let report = assert_mutually_exclusive(&[&a, &b]);
        assert_eq!(
            report,
            vec![Overlap {
                set_a: "a".into(),
                set_b: "b".into(),
                concept: "y".into()
            }]
        );

        let twin = ConceptSet::new("a2", ["x", "y"]);
        assert_eq!(assert_mutually_exclusive(&[&a, &twin]).len(), 2);
    }

    #[test]
    fn normalization_folds_case_and_whitespace() {
        let set = ConceptSet::new("s", [" Tree", "tree", "WOOD "]);
        assert_eq!(set.len(), 2);
        assert!(set.contains("tree"));
        assert!(set.contains("wood"));
    }

    proptest! {
        // The < 3 and > 4 bands cannot intersect, whatever the ratings.
        #[test]
        fn abstract_and_concrete_disjoint(values in proptest::collection::vec(1.0_f64..=5.0, 1..40)) {
            let rows: Vec<RatingRecord> = values
                .iter()
                .enumerate()
                .map(|(i, &c)| RatingRecord {
                    lemma: format!("w{i}"),
                    concreteness: Some(c),
                    valence: None,
                    arousal: None,
                    dominance: None,
                })
                .collect();
            let table = RatingTable::from_records(rows);
            let abs = filter_by_concreteness(&table, ConcretenessMode::Abstract);
            let con = filter_by_concreteness(&table, ConcretenessMode::Concrete);
            if let (Ok(abs), Ok(con)) = (abs, con) {
                prop_assert!(assert_mutually_exclusive(&[&abs, &con]).is_empty());
            }
        }

        // Affect filtering always yields a subset of its base.
        #[test]
        fn affect_subset_of_base(
            vad in proptest::collection::vec((1.0_f64..=9.0, 1.0_f64..=9.0, 1.0_f64..=9.0), 1..40)
        ) {
            let rows: Vec<RatingRecord> = vad
                .iter()
                .enumerate()
                .map(|(i, &(v, a, d))| RatingRecord {
                    lemma: format!("w{i}"),
                    concreteness: Some(2.0),
                    valence: Some(v),
                    arousal: Some(a),
                    dominance: Some(d),
                })
                .collect();
            let table = RatingTable::from_records(rows);
            let base = filter_by_concreteness(&table, ConcretenessMode::Abstract).unwrap();
            if let Ok(aff) = filter_by_affect(&base, &table) {
                for m in aff.members() {
                    prop_assert!(base.contains(m));
                }
            }
        }
    }
}
