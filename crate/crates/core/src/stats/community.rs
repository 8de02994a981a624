//! Community detection and adjusted Rand indices.
//!
//! Detection is greedy modularity maximization (local moving plus
//! aggregation) over a weighted undirected graph. The procedure is frozen
//! deterministic: nodes are visited in sorted id order and gain ties break
//! toward the community whose smallest member id is lexicographically
//! smaller, so results do not depend on scheduling or hashing.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::StatsError;
use crate::concepts::SetName;
use crate::graph::{AttrId, LanguageGraph};

/// Node-to-community assignment; community labels are the lexicographically
/// smallest member id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignments: BTreeMap<String, String>,
}

impl Partition {
    pub fn new(assignments: BTreeMap<String, String>) -> Self {
        Self { assignments }
    }

    pub fn get(&self, node: &str) -> Option<&str> {
        self.assignments.get(node).map(|s| s.as_str())
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.assignments.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn community_count(&self) -> usize {
        self.assignments.values().collect::<BTreeSet<_>>().len()
    }

    /// Communities as label -> sorted members.
    pub fn communities(&self) -> BTreeMap<&str, Vec<&str>> {
        let mut out: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (node, label) in self.iter() {
            out.entry(label).or_default().push(node);
        }
        out
    }
}

struct LevelGraph {
    /// Neighbor lists without self loops, sorted by neighbor index.
    adj: Vec<Vec<(usize, f64)>>,
    /// Internal weight of each node (sum of edge weights collapsed inside).
    self_weight: Vec<f64>,
}

impl LevelGraph {
    fn n(&self) -> usize {
        self.adj.len()
    }

    fn degree(&self, v: usize) -> f64 {
        self.adj[v].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self.self_weight[v]
    }
}

/// One pass of local moving; returns whether any node changed community.
/// `comm_of`, `sigma_tot` and `members` are updated in place.
fn local_move_pass(
    graph: &LevelGraph,
    degrees: &[f64],
    two_m: f64,
    comm_of: &mut [usize],
    sigma_tot: &mut [f64],
    members: &mut [BTreeSet<usize>],
) -> bool {
    let mut changed = false;
    for v in 0..graph.n() {
        let old = comm_of[v];
        sigma_tot[old] -= degrees[v];
        members[old].remove(&v);

        // Weight from v to each candidate community (old always included).
        let mut k_v_c: BTreeMap<usize, f64> = BTreeMap::new();
        k_v_c.insert(old, 0.0);
        for &(u, w) in &graph.adj[v] {
            *k_v_c.entry(comm_of[u]).or_insert(0.0) += w;
        }

        // Candidates ordered by community label (smallest member index; an
        // emptied old community would be v's own singleton, labeled v).
        // Strict improvement below keeps ties on the smaller label.
        let mut candidates: Vec<(usize, usize, f64)> = k_v_c
            .into_iter()
            .map(|(c, k)| {
                let label = members[c].first().copied().unwrap_or(v);
                (label, c, k)
            })
            .collect();
        candidates.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));

        let mut best_comm = old;
        let mut best_gain = f64::NEG_INFINITY;
        for &(_, c, k_vc) in &candidates {
            let gain = k_vc - sigma_tot[c] * degrees[v] / two_m;
            if gain > best_gain {
                best_gain = gain;
                best_comm = c;
            }
        }

        sigma_tot[best_comm] += degrees[v];
        members[best_comm].insert(v);
        comm_of[v] = best_comm;
        if best_comm != old {
            changed = true;
        }
    }
    changed
}

/// Greedy modularity maximization. `nodes` fixes the node set (isolated
/// nodes become singleton communities); `similarity_edges` carry weights in
/// `(0, 1]`, typically `1 - distance`. Zero-weight and self edges are
/// skipped. The `seed` parameter is accepted for interface uniformity; the
/// procedure itself is deterministic.
pub fn detect_communities(
    nodes: &[String],
    similarity_edges: &[(String, String, f64)],
    _seed: u64,
) -> Result<Partition, StatsError> {
    let mut ids: Vec<String> = nodes.to_vec();
    ids.sort();
    ids.dedup();
    let index: BTreeMap<&str, usize> = ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();

    let mut weights: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for (a, b, w) in similarity_edges {
        if !w.is_finite() || *w < 0.0 {
            return Err(StatsError::InvalidWeight {
                a: a.clone(),
                b: b.clone(),
                weight: *w,
            });
        }
        let &ia = index
            .get(a.as_str())
            .ok_or_else(|| StatsError::UnknownNode(a.clone()))?;
        let &ib = index
            .get(b.as_str())
            .ok_or_else(|| StatsError::UnknownNode(b.clone()))?;
        if ia == ib || *w == 0.0 {
            continue;
        }
        *weights.entry((ia.min(ib), ia.max(ib))).or_insert(0.0) += *w;
    }

    let n = ids.len();
    let mut graph = LevelGraph {
        adj: vec![Vec::new(); n],
        self_weight: vec![0.0; n],
    };
    for (&(a, b), &w) in &weights {
        graph.adj[a].push((b, w));
        graph.adj[b].push((a, w));
    }
    for list in graph.adj.iter_mut() {
        list.sort_by(|x, y| x.0.cmp(&y.0));
    }
    let total_weight: f64 = weights.values().sum();

    // Level-0 node -> current super-node.
    let mut assignment: Vec<usize> = (0..n).collect();

    if total_weight > 0.0 {
        let two_m = 2.0 * total_weight;
        for _level in 0..64 {
            let ln = graph.n();
            let degrees: Vec<f64> = (0..ln).map(|v| graph.degree(v)).collect();
            let mut comm_of: Vec<usize> = (0..ln).collect();
            let mut sigma_tot = degrees.clone();
            let mut members: Vec<BTreeSet<usize>> =
                (0..ln).map(|v| BTreeSet::from([v])).collect();

            let mut any_change = false;
            loop {
                let changed = local_move_pass(
                    &graph,
                    &degrees,
                    two_m,
                    &mut comm_of,
                    &mut sigma_tot,
                    &mut members,
                );
                any_change |= changed;
                if !changed {
                    break;
                }
            }
            if !any_change {
                break;
            }

            // Aggregate communities into super-nodes, ordered by their
            // smallest member so index order keeps matching label order.
            let mut non_empty: Vec<usize> = (0..ln).filter(|&c| !members[c].is_empty()).collect();
            non_empty.sort_by_key(|&c| *members[c].first().unwrap());
            let renumber: BTreeMap<usize, usize> = non_empty
                .iter()
                .enumerate()
                .map(|(new, &c)| (c, new))
                .collect();
            let nn = non_empty.len();
            if nn == ln {
                break;
            }

            let mut new_weights: BTreeMap<(usize, usize), f64> = BTreeMap::new();
            let mut new_self = vec![0.0; nn];
            for (&old_c, &new_c) in &renumber {
                for &v in &members[old_c] {
                    new_self[new_c] += graph.self_weight[v];
                }
            }
            for v in 0..ln {
                let cv = renumber[&comm_of[v]];
                for &(u, w) in &graph.adj[v] {
                    if u < v {
                        continue; // each undirected edge once
                    }
                    let cu = renumber[&comm_of[u]];
                    if cv == cu {
                        new_self[cv] += w;
                    } else {
                        *new_weights.entry((cv.min(cu), cv.max(cu))).or_insert(0.0) += w;
                    }
                }
            }
            let mut new_adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nn];
            for (&(a, b), &w) in &new_weights {
                new_adj[a].push((b, w));
                new_adj[b].push((a, w));
            }
            for list in new_adj.iter_mut() {
                list.sort_by(|x, y| x.0.cmp(&y.0));
            }
            for slot in assignment.iter_mut() {
                *slot = renumber[&comm_of[*slot]];
            }
            graph = LevelGraph {
                adj: new_adj,
                self_weight: new_self,
            };
        }
    }

    // Community label = lexicographically smallest member id.
    let mut label_of: BTreeMap<usize, String> = BTreeMap::new();
    for (i, id) in ids.iter().enumerate() {
        label_of
            .entry(assignment[i])
            .and_modify(|l| {
                if id < l {
                    *l = id.clone();
                }
            })
            .or_insert_with(|| id.clone());
    }
    let assignments: BTreeMap<String, String> = ids
        .iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), label_of[&assignment[i]].clone()))
        .collect();
    Ok(Partition::new(assignments))
}

/// Weighted modularity of a partition; the quantity the detector maximizes
/// greedily. Exposed for oracle checks.
pub fn weighted_modularity(
    nodes: &[String],
    similarity_edges: &[(String, String, f64)],
    partition: &Partition,
) -> Result<f64, StatsError> {
    let mut m = 0.0;
    let mut degree: BTreeMap<&str, f64> = nodes.iter().map(|n| (n.as_str(), 0.0)).collect();
    let mut internal: BTreeMap<&str, f64> = BTreeMap::new();
    for (a, b, w) in similarity_edges {
        if a == b || *w == 0.0 {
            continue;
        }
        m += w;
        *degree
            .get_mut(a.as_str())
            .ok_or_else(|| StatsError::UnknownNode(a.clone()))? += w;
        *degree
            .get_mut(b.as_str())
            .ok_or_else(|| StatsError::UnknownNode(b.clone()))? += w;
        let ca = partition.get(a).ok_or_else(|| StatsError::UnknownNode(a.clone()))?;
        let cb = partition.get(b).ok_or_else(|| StatsError::UnknownNode(b.clone()))?;
        if ca == cb {
            *internal.entry(ca).or_insert(0.0) += w;
        }
    }
    if m == 0.0 {
        return Ok(0.0);
    }
    let mut sigma_tot: BTreeMap<&str, f64> = BTreeMap::new();
    for (node, label) in partition.iter() {
        if let Some(&k) = degree.get(node) {
            *sigma_tot.entry(label).or_insert(0.0) += k;
        }
    }
    let mut q = 0.0;
    for (label, &tot) in &sigma_tot {
        let inside = internal.get(label).copied().unwrap_or(0.0);
        q += inside / m - (tot / (2.0 * m)).powi(2);
    }
    Ok(q)
}

fn comb2(x: u64) -> f64 {
    (x as f64) * (x as f64 - 1.0) / 2.0
}

/// Chance-adjusted agreement between two partitions of the same node set:
/// 1 for identical partitions (up to relabeling), about 0 for independent
/// ones, negative for less agreement than chance.
pub fn adjusted_rand_index(p1: &Partition, p2: &Partition) -> Result<f64, StatsError> {
    if p1.len() != p2.len() {
        return Err(StatsError::NodeSetMismatch);
    }
    let mut contingency: BTreeMap<(&str, &str), u64> = BTreeMap::new();
    let mut a_sizes: BTreeMap<&str, u64> = BTreeMap::new();
    let mut b_sizes: BTreeMap<&str, u64> = BTreeMap::new();
    for (node, label1) in p1.iter() {
        let label2 = p2.get(node).ok_or(StatsError::NodeSetMismatch)?;
        *contingency.entry((label1, label2)).or_insert(0) += 1;
        *a_sizes.entry(label1).or_insert(0) += 1;
        *b_sizes.entry(label2).or_insert(0) += 1;
    }
    let n = p1.len() as u64;
    let index: f64 = contingency.values().map(|&c| comb2(c)).sum();
    let sum_a: f64 = a_sizes.values().map(|&c| comb2(c)).sum();
    let sum_b: f64 = b_sizes.values().map(|&c| comb2(c)).sum();
    let expected = sum_a * sum_b / comb2(n);
    let max_index = 0.5 * (sum_a + sum_b);
    let denom = max_index - expected;
    if denom == 0.0 {
        // Both partitions trivial in the same direction, hence equal.
        return Ok(1.0);
    }
    Ok((index - expected) / denom)
}

/// Pairwise ARIs between concept-set community structures within one family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyAri {
    pub family: String,
    pub languages: usize,
    pub sets: Vec<SetName>,
    /// Symmetric sets-by-sets matrix with unit diagonal.
    pub ari: Vec<Vec<f64>>,
}

const MIN_FAMILY_LANGUAGES: usize = 4;

/// For each of the `top_k` families with the most languages, detect
/// communities per concept-set distance (similarity = 1 - distance) and
/// report every pairwise ARI. Families under 4 languages are skipped with a
/// warning; it is an error when none qualify.
pub fn family_ari_report(
    graph: &LanguageGraph,
    sets: &[SetName],
    top_k: usize,
    seed: u64,
) -> Result<Vec<FamilyAri>, StatsError> {
    if sets.len() < 2 {
        return Err(StatsError::TooFewConceptSets(sets.len()));
    }
    let mut families: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    for rec in graph.nodes() {
        if !rec.family.is_empty() {
            families.entry(&rec.family).or_default().push(rec.id.clone());
        }
    }
    let mut ranked: Vec<(&str, Vec<String>)> = families.into_iter().collect();
    ranked.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(b.0)));
    ranked.truncate(top_k);

    let mut reports = Vec::new();
    for (family, mut members) in ranked {
        if members.len() < MIN_FAMILY_LANGUAGES {
            log::warn!(
                "family `{family}` has {} languages, fewer than {MIN_FAMILY_LANGUAGES}; skipped",
                members.len()
            );
            continue;
        }
        members.sort();
        let member_set: BTreeSet<&str> = members.iter().map(|s| s.as_str()).collect();
        let mut partitions = Vec::with_capacity(sets.len());
        for &set in sets {
            let mut edges = Vec::new();
            for (a, b, attrs) in graph.edges() {
                if !member_set.contains(a) || !member_set.contains(b) {
                    continue;
                }
                if let Some(d) = attrs.value(AttrId::Semantic(set)) {
                    let w = 1.0 - d;
                    if w > 0.0 {
                        edges.push((a.to_string(), b.to_string(), w));
                    }
                }
            }
            partitions.push(detect_communities(&members, &edges, seed)?);
        }
        let k = sets.len();
        let mut ari = vec![vec![1.0; k]; k];
        for i in 0..k {
            for j in (i + 1)..k {
                let value = adjusted_rand_index(&partitions[i], &partitions[j])?;
                ari[i][j] = value;
                ari[j][i] = value;
            }
        }
        reports.push(FamilyAri {
            family: family.to_string(),
            languages: members.len(),
            sets: sets.to_vec(),
            ari,
        });
    }
    if reports.is_empty() {
        return Err(StatsError::InsufficientLanguages {
            needed: MIN_FAMILY_LANGUAGES,
        });
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeTable;
    use crate::ingest::PairValueTable;
    use crate::stats::testutil::{graph_from, record, semantic, uniform_stream};

    fn names(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    fn clique_edges(ids: &[String], weight: f64) -> Vec<(String, String, f64)> {
        let mut edges = Vec::new();
        for i in 0..ids.len() {
            for j in (i + 1)..ids.len() {
                edges.push((ids[i].clone(), ids[j].clone(), weight));
            }
        }
        edges
    }

    #[test]
    fn two_cliques_split_matches_enumeration_oracle() {
        let left = names("a", 5);
        let right = names("b", 5);
        let mut nodes = left.clone();
        nodes.extend(right.clone());
        let mut edges = clique_edges(&left, 1.0);
        edges.extend(clique_edges(&right, 1.0));
        edges.push((left[4].clone(), right[0].clone(), 0.1));

        // Oracle: the best 2-partition by exhaustive modularity search.
        let mut best_q = f64::NEG_INFINITY;
        let mut best_mask = 0u32;
        for mask in 1..(1u32 << 10) - 1 {
            let assignments: BTreeMap<String, String> = nodes
                .iter()
                .enumerate()
                .map(|(i, id)| {
                    let side = if mask & (1 << i) != 0 { "s1" } else { "s0" };
                    (id.clone(), side.to_string())
                })
                .collect();
            let q = weighted_modularity(&nodes, &edges, &Partition::new(assignments)).unwrap();
            if q > best_q {
                best_q = q;
                best_mask = mask;
            }
        }
        let oracle_side_a: BTreeSet<&String> = nodes
            .iter()
            .enumerate()
            .filter(|(i, _)| best_mask & (1 << i) != 0)
            .map(|(_, id)| id)
            .collect();
        let clique_a: BTreeSet<&String> = left.iter().collect();
        assert!(
            oracle_side_a == clique_a || oracle_side_a == right.iter().collect(),
            "oracle best 2-partition should be the clique split"
        );

        let partition = detect_communities(&nodes, &edges, 42).unwrap();
        assert_eq!(partition.community_count(), 2);
        for id in &left {
            assert_eq!(partition.get(id), Some("a0"));
        }
        for id in &right {
            assert_eq!(partition.get(id), Some("b0"));
        }
        // The detected split attains the oracle's modularity.
        let detected_q = weighted_modularity(&nodes, &edges, &partition).unwrap();
        assert!((detected_q - best_q).abs() < 1e-12);
    }

    #[test]
    fn edgeless_graph_gives_singletons() {
        let nodes = names("n", 6);
        let partition = detect_communities(&nodes, &[], 0).unwrap();
        assert_eq!(partition.community_count(), 6);
        for id in &nodes {
            assert_eq!(partition.get(id), Some(id.as_str()));
        }
    }

    #[test]
    fn single_clique_is_one_community() {
        let nodes = names("n", 6);
        let edges = clique_edges(&nodes, 0.8);
        let partition = detect_communities(&nodes, &edges, 0).unwrap();
        assert_eq!(partition.community_count(), 1);
    }

    #[test]
    fn invalid_inputs() {
        let nodes = names("n", 2);
        assert!(matches!(
            detect_communities(&nodes, &[("n0".into(), "zz".into(), 0.5)], 0),
            Err(StatsError::UnknownNode(_))
        ));
        assert!(matches!(
            detect_communities(&nodes, &[("n0".into(), "n1".into(), -0.5)], 0),
            Err(StatsError::InvalidWeight { .. })
        ));
    }

    #[test]
    fn deterministic_across_runs() {
        let nodes = names("n", 30);
        let mut rng = uniform_stream(5);
        let mut edges = Vec::new();
        for i in 0..30 {
            for j in (i + 1)..30 {
                let w = rng();
                if w > 0.35 {
                    edges.push((nodes[i].clone(), nodes[j].clone(), w));
                }
            }
        }
        let p1 = detect_communities(&nodes, &edges, 1).unwrap();
        let p2 = detect_communities(&nodes, &edges, 1).unwrap();
        assert_eq!(p1, p2);
    }

    fn partition_from(labels: &[(&str, &str)]) -> Partition {
        Partition::new(
            labels
                .iter()
                .map(|(n, c)| (n.to_string(), c.to_string()))
                .collect(),
        )
    }

    #[test]
    fn ari_identity_and_relabeling() {
        let p1 = partition_from(&[("a", "x"), ("b", "x"), ("c", "y"), ("d", "y")]);
        assert_eq!(adjusted_rand_index(&p1, &p1).unwrap(), 1.0);
        let relabeled = partition_from(&[("a", "q"), ("b", "q"), ("c", "r"), ("d", "r")]);
        assert_eq!(adjusted_rand_index(&p1, &relabeled).unwrap(), 1.0);
    }

    #[test]
    fn ari_symmetric_and_disagreeing() {
        let p1 = partition_from(&[("a", "x"), ("b", "x"), ("c", "y"), ("d", "y")]);
        let p2 = partition_from(&[("a", "x"), ("b", "y"), ("c", "x"), ("d", "y")]);
        let ab = adjusted_rand_index(&p1, &p2).unwrap();
        let ba = adjusted_rand_index(&p2, &p1).unwrap();
        assert_eq!(ab, ba);
        assert!(ab < 0.5);
    }

    #[test]
    fn ari_node_set_mismatch() {
        let p1 = partition_from(&[("a", "x"), ("b", "x")]);
        let p2 = partition_from(&[("a", "x"), ("zz", "x")]);
        assert_eq!(adjusted_rand_index(&p1, &p2), Err(StatsError::NodeSetMismatch));
    }

    #[test]
    fn ari_independent_partitions_near_zero() {
        let mut rng = uniform_stream(99);
        for _ in 0..3 {
            let p1 = Partition::new(
                (0..1000)
                    .map(|i| (format!("n{i:04}"), format!("c{}", (rng() * 4.0) as usize)))
                    .collect(),
            );
            let p2 = Partition::new(
                (0..1000)
                    .map(|i| (format!("n{i:04}"), format!("c{}", (rng() * 4.0) as usize)))
                    .collect(),
            );
            let ari = adjusted_rand_index(&p1, &p2).unwrap();
            assert!(ari.abs() < 0.05, "independent ARI was {ari}");
        }
    }

    /// Two-family graph where both sets carry identical block-structured
    /// distances and a third attribute carries noise.
    fn family_graph() -> crate::graph::LanguageGraph {
        let mut records = Vec::new();
        let mut ids_a = Vec::new();
        let mut ids_b = Vec::new();
        for i in 0..12 {
            let id = format!("fa{i:02}");
            records.push(record(&id, "FamA", "", "", "Area"));
            ids_a.push(id);
        }
        for i in 0..6 {
            let id = format!("fb{i:02}");
            records.push(record(&id, "FamB", "", "", "Area"));
            ids_b.push(id);
        }
        // Block structure inside each family: two halves, near vs far.
        let mut structured = PairValueTable::unit_range();
        let mut noise = PairValueTable::unit_range();
        let mut rng = uniform_stream(3);
        let mut fill = |ids: &[String], structured: &mut PairValueTable, noise: &mut PairValueTable| {
            let half = ids.len() / 2;
            for i in 0..ids.len() {
                for j in (i + 1)..ids.len() {
                    let same_block = (i < half) == (j < half);
                    let d = if same_block { 0.1 } else { 0.9 };
                    structured.insert(&ids[i], &ids[j], d).unwrap();
                    noise.insert(&ids[i], &ids[j], rng()).unwrap();
                }
            }
        };
        fill(&ids_a, &mut structured, &mut noise);
        fill(&ids_b, &mut structured, &mut noise);
        let twin = structured.clone();
        graph_from(
            records,
            vec![
                (semantic(SetName::Nuclear), structured),
                (semantic(SetName::Emotion), twin),
                (semantic(SetName::Random), noise),
            ],
        )
    }

    #[test]
    fn family_report_identical_attributes_give_unit_ari() {
        let graph = family_graph();
        let reports = family_ari_report(
            &graph,
            &[SetName::Nuclear, SetName::Emotion],
            5,
            42,
        )
        .unwrap();
        assert_eq!(reports.len(), 2);
        // Largest family first.
        assert_eq!(reports[0].family, "FamA");
        assert_eq!(reports[0].languages, 12);
        for report in &reports {
            assert_eq!(report.ari[0][1], 1.0);
        }
    }

    #[test]
    fn family_report_top_k_and_noise() {
        let graph = family_graph();
        let reports =
            family_ari_report(&graph, &[SetName::Nuclear, SetName::Random], 1, 42).unwrap();
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].family, "FamA");
        // Noise attribute should not reproduce the block structure.
        assert!(reports[0].ari[0][1] < 0.6);
    }

    #[test]
    fn family_report_errors() {
        let graph = family_graph();
        assert_eq!(
            family_ari_report(&graph, &[SetName::Nuclear], 5, 42),
            Err(StatsError::TooFewConceptSets(1))
        );
    }
}
