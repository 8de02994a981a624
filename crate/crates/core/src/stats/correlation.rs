//! Pearson correlation, plain and grouped.

use serde::Serialize;

use super::{edge_group, group_edges, two_sided_t_pvalue, GroupKey, StatsError};
use crate::graph::{AttrId, LanguageGraph};

/// Pearson r with its two-sided p-value for one group of samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationResult {
    pub group: String,
    pub r: f64,
    pub p_value: f64,
    pub n: usize,
}

/// Standard Pearson correlation; p is two-sided from the t distribution
/// with n - 2 degrees of freedom. Requires equal lengths, n >= 3 and
/// nonzero variance in both series.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<CorrelationResult, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch { a: x.len(), b: y.len() });
    }
    let n = x.len();
    if n < 3 {
        return Err(StatsError::TooFewSamples { needed: 3, found: n });
    }
    let nf = n as f64;
    let mean_x = x.iter().sum::<f64>() / nf;
    let mean_y = y.iter().sum::<f64>() / nf;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - mean_x;
        let dy = yi - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 {
        return Err(StatsError::DegenerateSeries("x".into()));
    }
    if var_y == 0.0 {
        return Err(StatsError::DegenerateSeries("y".into()));
    }
    let r = (cov / (var_x.sqrt() * var_y.sqrt())).clamp(-1.0, 1.0);
    let df = nf - 2.0;
    let p_value = if (1.0 - r * r) <= 0.0 {
        0.0
    } else {
        two_sided_t_pvalue(r * (df / (1.0 - r * r)).sqrt(), df)
    };
    Ok(CorrelationResult {
        group: "all".to_string(),
        r,
        p_value,
        n,
    })
}

/// Pearson correlations of two edge attributes, grouped by `key`. Edges
/// missing either attribute are skipped; groups with fewer than 3 usable
/// samples or zero variance are omitted with a warning.
pub fn group_pearson(
    graph: &LanguageGraph,
    attr_x: AttrId,
    attr_y: AttrId,
    key: GroupKey,
) -> Vec<CorrelationResult> {
    let mut results = Vec::new();
    for (label, edges) in group_edges(graph, key) {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (_, _, attrs) in edges {
            if let (Some(x), Some(y)) = (attrs.value(attr_x), attrs.value(attr_y)) {
                xs.push(x);
                ys.push(y);
            }
        }
        match pearson(&xs, &ys) {
            Ok(mut result) => {
                result.group = label;
                results.push(result);
            }
            Err(e) => {
                log::warn!("group `{label}` omitted from pearson report: {e}");
            }
        }
    }
    results
}

/// Number of edges carrying both attributes within each group; used by
/// build/stats reports.
pub fn group_sample_sizes(
    graph: &LanguageGraph,
    attr_x: AttrId,
    attr_y: AttrId,
    key: GroupKey,
) -> Vec<(String, usize)> {
    let mut sizes = std::collections::BTreeMap::new();
    for (a, b, attrs) in graph.edges() {
        if attrs.value(attr_x).is_some() && attrs.value(attr_y).is_some() {
            if let Some(label) = edge_group(graph, a, b, attrs, key) {
                *sizes.entry(label).or_insert(0usize) += 1;
            }
        }
    }
    sizes.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concepts::SetName;
    use crate::graph::EdgeTable;
    use crate::ingest::PairValueTable;
    use crate::stats::testutil::{graph_from, record, semantic};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn perfect_linear_series() {
        let x: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        let result = pearson(&x, &y).unwrap();
        assert!((result.r - 1.0).abs() < 1e-12);
        assert!(result.p_value < 1e-9);

        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&x, &neg).unwrap().r + 1.0).abs() < 1e-12);
    }

    #[test]
    fn hand_computed_four_points() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y = [1.0, 3.0, 2.0, 4.0];
        let result = pearson(&x, &y).unwrap();
        assert_abs_diff_eq!(result.r, 0.8, epsilon = 1e-9);
        assert_eq!(result.n, 4);
    }

    #[test]
    fn error_paths() {
        assert_eq!(
            pearson(&[1.0, 2.0], &[1.0, 2.0, 3.0]),
            Err(StatsError::LengthMismatch { a: 2, b: 3 })
        );
        assert_eq!(
            pearson(&[1.0, 2.0], &[1.0, 2.0]),
            Err(StatsError::TooFewSamples { needed: 3, found: 2 })
        );
        assert_eq!(
            pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(StatsError::DegenerateSeries("x".into()))
        );
    }

    fn correlated_macroarea_graph() -> crate::graph::LanguageGraph {
        // Two macroareas; semantic distance equals phon distance on every
        // edge, so r = 1 in every group.
        let mut records = Vec::new();
        for i in 0..6 {
            let area = if i < 3 { "AreaOne" } else { "AreaTwo" };
            records.push(record(&format!("l{i}"), "F", "", "", area));
        }
        let ids: Vec<String> = (0..6).map(|i| format!("l{i}")).collect();
        let mut phon = PairValueTable::unit_range();
        let mut sem = PairValueTable::unit_range();
        let mut v = 0.05;
        for i in 0..6 {
            for j in (i + 1)..6 {
                phon.insert(&ids[i], &ids[j], v).unwrap();
                sem.insert(&ids[i], &ids[j], v).unwrap();
                v += 0.05;
            }
        }
        graph_from(
            records,
            vec![
                (EdgeTable::Phon, phon),
                (semantic(SetName::Nuclear), sem),
            ],
        )
    }

    #[test]
    fn group_pearson_macroarea_groups() {
        let graph = correlated_macroarea_graph();
        let results = group_pearson(
            &graph,
            AttrId::Semantic(SetName::Nuclear),
            AttrId::Phon,
            GroupKey::Macroarea,
        );
        let labels: Vec<&str> = results.iter().map(|r| r.group.as_str()).collect();
        assert_eq!(labels, vec!["AreaOne", "AreaTwo", "cross"]);
        for r in &results {
            assert!((r.r - 1.0).abs() < 1e-12, "group {}", r.group);
        }
        // 3 within each area, 9 across.
        assert_eq!(results[0].n, 3);
        assert_eq!(results[2].n, 9);
    }

    #[test]
    fn group_pearson_cross_only() {
        let graph = correlated_macroarea_graph();
        let results = group_pearson(
            &graph,
            AttrId::Semantic(SetName::Nuclear),
            AttrId::Phon,
            GroupKey::Cross,
        );
        assert_eq!(results.len(), 1);
        assert_eq!(results[0].group, "cross");
        assert_eq!(results[0].n, 9);
    }

    #[test]
    fn group_pearson_omits_small_groups() {
        // One area has a single pair; it must be omitted, not fail.
        let records = vec![
            record("a0", "F", "", "", "Big"),
            record("a1", "F", "", "", "Big"),
            record("a2", "F", "", "", "Big"),
            record("b0", "F", "", "", "Small"),
            record("b1", "F", "", "", "Small"),
        ];
        let ids = ["a0", "a1", "a2", "b0", "b1"];
        let mut phon = PairValueTable::unit_range();
        let mut sem = PairValueTable::unit_range();
        let mut v = 0.02;
        for i in 0..5 {
            for j in (i + 1)..5 {
                phon.insert(ids[i], ids[j], v).unwrap();
                sem.insert(ids[i], ids[j], (v * 2.0).min(1.0)).unwrap();
                v += 0.03;
            }
        }
        let graph = graph_from(
            records,
            vec![(EdgeTable::Phon, phon), (semantic(SetName::Nuclear), sem)],
        );
        let results = group_pearson(
            &graph,
            AttrId::Phon,
            AttrId::Semantic(SetName::Nuclear),
            GroupKey::Macroarea,
        );
        let labels: Vec<&str> = results.iter().map(|r| r.group.as_str()).collect();
        assert!(labels.contains(&"Big"));
        assert!(!labels.contains(&"Small"));
    }

    proptest! {
        // Positive affine rescaling leaves r unchanged.
        #[test]
        fn affine_invariance(
            base in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0), 4..40),
            scale in 0.1f64..10.0,
            shift in -5.0f64..5.0,
        ) {
            let x: Vec<f64> = base.iter().map(|p| p.0).collect();
            let y: Vec<f64> = base.iter().map(|p| p.1).collect();
            let scaled: Vec<f64> = x.iter().map(|v| v * scale + shift).collect();
            match (pearson(&x, &y), pearson(&scaled, &y)) {
                (Ok(a), Ok(b)) => prop_assert!((a.r - b.r).abs() < 1e-12),
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "inconsistent: {a:?} vs {b:?}"),
            }
        }
    }
}
