//! The hypothesis-testing suite: grouped Pearson correlations, OLS,
//! standardized-beta regressions with contact controls, stratified sampling,
//! community detection and adjusted Rand indices.
//!
//! Every operation is a pure function of its inputs (plus an explicit seed
//! where sampling is involved) and emits results in a deterministic order.

mod community;
mod correlation;
mod regression;
mod sampling;

pub use community::{
    adjusted_rand_index, detect_communities, family_ari_report, weighted_modularity, FamilyAri,
    Partition,
};
pub use correlation::{group_pearson, group_sample_sizes, pearson, CorrelationResult};
pub use regression::{ols, standardized_beta, BetaResult, Coefficient, OlsFit};
pub use sampling::stratified_sample;

use thiserror::Error;

use crate::graph::{AttrId, EdgeAttributes, LanguageGraph, RelatednessLevel};

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("series lengths differ: {a} vs {b}")]
    LengthMismatch { a: usize, b: usize },
    #[error("need at least {needed} samples, found {found}")]
    TooFewSamples { needed: usize, found: usize },
    #[error("series `{0}` has zero variance")]
    DegenerateSeries(String),
    #[error("design matrix is rank deficient ({0})")]
    RankDeficient(String),
    #[error("no edges carry all of the requested attributes ({0})")]
    EmptyGroup(String),
    #[error("sample of {requested} exceeds population of {population}")]
    SampleTooLarge { requested: usize, population: usize },
    #[error("partitions cover different node sets")]
    NodeSetMismatch,
    #[error("edge references node `{0}` absent from the node list")]
    UnknownNode(String),
    #[error("edge ({a}, {b}) has invalid weight {weight}")]
    InvalidWeight { a: String, b: String, weight: f64 },
    #[error("need at least 2 concept sets, got {0}")]
    TooFewConceptSets(usize),
    #[error("no family has the minimum of {needed} languages")]
    InsufficientLanguages { needed: usize },
}

/// How edges are grouped for grouped analyses and stratified sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKey {
    /// One group per shared macroarea plus a `cross` group for pairs whose
    /// endpoints differ; pairs lacking a macroarea are skipped.
    Macroarea,
    /// Only the `cross` group.
    Cross,
    /// One group per relatedness level.
    Relatedness,
}

impl std::str::FromStr for GroupKey {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "macroarea" => Ok(GroupKey::Macroarea),
            "cross" => Ok(GroupKey::Cross),
            "relatedness" => Ok(GroupKey::Relatedness),
            other => Err(format!(
                "unknown group key `{other}` (expected macroarea, cross or relatedness)"
            )),
        }
    }
}

pub(crate) const CROSS_GROUP: &str = "cross";

/// Group label of one edge under `key`, or `None` when the edge cannot be
/// grouped (missing macroarea).
pub(crate) fn edge_group(
    graph: &LanguageGraph,
    a: &str,
    b: &str,
    attrs: &EdgeAttributes,
    key: GroupKey,
) -> Option<String> {
    match key {
        GroupKey::Relatedness => Some(attrs.relatedness.as_str().to_string()),
        GroupKey::Macroarea | GroupKey::Cross => {
            let ma = &graph.node(a)?.macroarea;
            let mb = &graph.node(b)?.macroarea;
            if ma.is_empty() || mb.is_empty() {
                return None;
            }
            if ma == mb {
                match key {
                    GroupKey::Macroarea => Some(ma.clone()),
                    _ => None,
                }
            } else {
                Some(CROSS_GROUP.to_string())
            }
        }
    }
}

/// Edges grouped under `key`, in deterministic output order: relatedness
/// levels in declaration order, macroareas sorted with `cross` last. Each
/// group's edges are in canonical pair order.
pub(crate) fn group_edges<'g>(
    graph: &'g LanguageGraph,
    key: GroupKey,
) -> Vec<(String, Vec<(&'g str, &'g str, &'g EdgeAttributes)>)> {
    let mut groups: std::collections::BTreeMap<String, Vec<(&str, &str, &EdgeAttributes)>> =
        std::collections::BTreeMap::new();
    for (a, b, attrs) in graph.edges() {
        if let Some(label) = edge_group(graph, a, b, attrs, key) {
            groups.entry(label).or_default().push((a, b, attrs));
        }
    }
    match key {
        GroupKey::Relatedness => RelatednessLevel::ALL
            .iter()
            .filter_map(|level| {
                groups
                    .remove(level.as_str())
                    .map(|edges| (level.as_str().to_string(), edges))
            })
            .collect(),
        GroupKey::Macroarea | GroupKey::Cross => {
            let cross = groups.remove(CROSS_GROUP);
            let mut out: Vec<_> = groups.into_iter().collect();
            if let Some(edges) = cross {
                out.push((CROSS_GROUP.to_string(), edges));
            }
            out
        }
    }
}

/// Per-relatedness-level histogram of an attribute over `bins` equal-width
/// bins spanning `[0, 1]`; the last bin is closed. Levels with no data are
/// still reported, with all-zero counts.
pub fn histogram_by_relatedness(
    graph: &LanguageGraph,
    attr: AttrId,
    bins: usize,
) -> Vec<(RelatednessLevel, Vec<u64>)> {
    let mut out: Vec<(RelatednessLevel, Vec<u64>)> = RelatednessLevel::ALL
        .iter()
        .map(|&level| (level, vec![0u64; bins]))
        .collect();
    for (_, _, attrs) in graph.edges() {
        if let Some(v) = attrs.value(attr) {
            let idx = ((v * bins as f64).floor() as usize).min(bins - 1);
            let slot = attrs.relatedness as usize;
            out[slot].1[idx] += 1;
        }
    }
    out
}

/// Two-sided p-value of a t statistic with `df` degrees of freedom.
pub(crate) fn two_sided_t_pvalue(t: f64, df: f64) -> f64 {
    use statrs::distribution::{ContinuousCDF, StudentsT};
    if !t.is_finite() {
        return 0.0;
    }
    let dist = StudentsT::new(0.0, 1.0, df).expect("df >= 1");
    (2.0 * (1.0 - dist.cdf(t.abs()))).clamp(0.0, 1.0)
}

/// 97.5% quantile of the t distribution with `df` degrees of freedom.
pub(crate) fn t_critical_975(df: f64) -> f64 {
    use statrs::distribution::{ContinuousCDF, StudentsT};
    let dist = StudentsT::new(0.0, 1.0, df).expect("df >= 1");
    dist.inverse_cdf(0.975)
}
