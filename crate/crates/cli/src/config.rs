//! Build configuration: a flat key-value JSON document, every key
//! overridable by a CLI flag (flags win). Relative paths resolve against
//! the config file's directory.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use glottograph::concepts::SetName;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildConfig {
    pub languages: Option<PathBuf>,
    pub colex: Option<PathBuf>,
    pub ratings: Option<PathBuf>,
    pub wordlists: Option<PathBuf>,
    pub phon_matrix: Option<PathBuf>,
    pub syntactic_matrix: Option<PathBuf>,
    pub genetic_matrix: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    /// Comma-separated concept-set names; unset means every feasible set.
    pub concept_sets: Option<String>,
    pub min_languages_any: Option<usize>,
    pub min_languages_both: Option<usize>,
    pub min_shared_concepts: Option<usize>,
    pub neighbour_threshold: Option<u64>,
    pub seed: Option<u64>,
}

/// A validated build plan with all defaults applied.
#[derive(Debug, Clone)]
pub struct BuildPlan {
    pub languages: PathBuf,
    pub colex: Option<PathBuf>,
    pub ratings: Option<PathBuf>,
    pub wordlists: Option<PathBuf>,
    pub phon_matrix: Option<PathBuf>,
    pub syntactic_matrix: Option<PathBuf>,
    pub genetic_matrix: Option<PathBuf>,
    pub out_dir: PathBuf,
    /// Requested sets, or `None` for "every feasible set".
    pub concept_sets: Option<Vec<SetName>>,
    pub min_languages_any: usize,
    pub min_languages_both: usize,
    pub min_shared_concepts: usize,
    pub neighbour_threshold: u64,
    pub seed: u64,
}

impl BuildConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let body = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let mut config: BuildConfig = serde_json::from_str(&body)
            .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        config.resolve_paths(base);
        Ok(config)
    }

    fn resolve_paths(&mut self, base: &Path) {
        for slot in [
            &mut self.languages,
            &mut self.colex,
            &mut self.ratings,
            &mut self.wordlists,
            &mut self.phon_matrix,
            &mut self.syntactic_matrix,
            &mut self.genetic_matrix,
            &mut self.out_dir,
        ] {
            if let Some(p) = slot {
                if p.is_relative() {
                    *p = base.join(&p);
                }
            }
        }
    }

    /// Overlay `other` (CLI flags) on top of this config: set fields win.
    pub fn merged_with(mut self, other: BuildConfig) -> BuildConfig {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if other.$field.is_some() { self.$field = other.$field; })*
            };
        }
        take!(
            languages,
            colex,
            ratings,
            wordlists,
            phon_matrix,
            syntactic_matrix,
            genetic_matrix,
            out_dir,
            concept_sets,
            min_languages_any,
            min_languages_both,
            min_shared_concepts,
            neighbour_threshold,
            seed
        );
        self
    }

    /// Validate and fill defaults. Referenced input paths must exist and
    /// thresholds must be positive.
    pub fn into_plan(self) -> Result<BuildPlan, CliError> {
        let languages = self
            .languages
            .ok_or_else(|| CliError::Config("missing required `languages` path".into()))?;
        let mut check = |name: &str, p: &Option<PathBuf>| -> Result<(), CliError> {
            if let Some(p) = p {
                if !p.is_file() {
                    return Err(CliError::Config(format!(
                        "`{name}` path {} does not exist",
                        p.display()
                    )));
                }
            }
            Ok(())
        };
        check("languages", &Some(languages.clone()))?;
        check("colex", &self.colex)?;
        check("ratings", &self.ratings)?;
        check("wordlists", &self.wordlists)?;
        check("phon_matrix", &self.phon_matrix)?;
        check("syntactic_matrix", &self.syntactic_matrix)?;
        check("genetic_matrix", &self.genetic_matrix)?;

        let concept_sets = match &self.concept_sets {
            None => None,
            Some(raw) => {
                let mut seen = BTreeSet::new();
                let mut sets = Vec::new();
                for piece in raw.split(',') {
                    let piece = piece.trim();
                    if piece.is_empty() {
                        continue;
                    }
                    let set: SetName = piece
                        .parse()
                        .map_err(|e| CliError::Config(format!("concept_sets: {e}")))?;
                    if seen.insert(set) {
                        sets.push(set);
                    }
                }
                if sets.is_empty() {
                    return Err(CliError::Config("concept_sets is empty".into()));
                }
                Some(sets)
            }
        };

        let positive = |name: &str, v: usize| -> Result<usize, CliError> {
            if v == 0 {
                Err(CliError::Config(format!("`{name}` must be positive")))
            } else {
                Ok(v)
            }
        };
        let neighbour_threshold = self.neighbour_threshold.unwrap_or(10);
        if neighbour_threshold == 0 {
            return Err(CliError::Config("`neighbour_threshold` must be positive".into()));
        }

        Ok(BuildPlan {
            languages,
            colex: self.colex,
            ratings: self.ratings,
            wordlists: self.wordlists,
            phon_matrix: self.phon_matrix,
            syntactic_matrix: self.syntactic_matrix,
            genetic_matrix: self.genetic_matrix,
            out_dir: self.out_dir.unwrap_or_else(|| PathBuf::from("out")),
            concept_sets,
            min_languages_any: positive("min_languages_any", self.min_languages_any.unwrap_or(1))?,
            min_languages_both: positive(
                "min_languages_both",
                self.min_languages_both.unwrap_or(3),
            )?,
            min_shared_concepts: positive(
                "min_shared_concepts",
                self.min_shared_concepts.unwrap_or(20),
            )?,
            neighbour_threshold,
            seed: self.seed.unwrap_or(42),
        })
    }
}
