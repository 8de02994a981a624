//! Deterministic stratified sampling of graph edges.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{group_edges, GroupKey, StatsError};
use crate::graph::LanguageGraph;

/// Per-group quotas proportional to group size, by largest-remainder
/// rounding on exact integer arithmetic. When `total_n` covers every group,
/// each non-empty group is guaranteed at least one sample; quotas never
/// exceed group sizes and always sum to `total_n`.
fn quotas(sizes: &[usize], total_n: usize) -> Vec<usize> {
    let g = sizes.len();
    let population: u128 = sizes.iter().map(|&s| s as u128).sum();
    let mut quota = vec![0usize; g];
    let mut remaining = total_n;
    if total_n >= g {
        for q in quota.iter_mut() {
            *q = 1;
        }
        remaining -= g;
    }
    // Exact floors and remainders of remaining * size / population.
    let mut leftovers: Vec<(u128, usize)> = Vec::with_capacity(g); // (remainder numerator, index)
    let mut assigned = 0usize;
    for (i, &size) in sizes.iter().enumerate() {
        let num = remaining as u128 * size as u128;
        let floor = (num / population) as usize;
        quota[i] += floor;
        assigned += floor;
        leftovers.push((num % population, i));
    }
    // Largest remainder first; ties toward the earlier (lexicographically
    // smaller) group.
    leftovers.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut left = remaining - assigned;
    while left > 0 {
        let mut progressed = false;
        for &(_, i) in &leftovers {
            if left == 0 {
                break;
            }
            if quota[i] < sizes[i] {
                quota[i] += 1;
                left -= 1;
                progressed = true;
            }
        }
        assert!(progressed, "population >= total_n guarantees spare capacity");
    }
    // The minimum-one guarantee can overshoot tiny groups; push the excess
    // to groups with room, largest remainder first.
    loop {
        let mut excess = 0usize;
        for (i, q) in quota.iter_mut().enumerate() {
            if *q > sizes[i] {
                excess += *q - sizes[i];
                *q = sizes[i];
            }
        }
        if excess == 0 {
            break;
        }
        for &(_, i) in &leftovers {
            if excess == 0 {
                break;
            }
            let room = sizes[i] - quota[i];
            let take = room.min(excess);
            quota[i] += take;
            excess -= take;
        }
        if excess > 0 {
            unreachable!("population >= total_n guarantees capacity");
        }
    }
    quota
}

/// Draw a stratified sample of `total_n` edges, with per-group quotas
/// proportional to group size. Deterministic for a fixed seed: groups are
/// visited in their canonical order and the result is sorted by pair key.
pub fn stratified_sample(
    graph: &LanguageGraph,
    key: GroupKey,
    total_n: usize,
    seed: u64,
) -> Result<Vec<(String, String)>, StatsError> {
    let groups = group_edges(graph, key);
    let population: usize = groups.iter().map(|(_, edges)| edges.len()).sum();
    if total_n > population {
        return Err(StatsError::SampleTooLarge {
            requested: total_n,
            population,
        });
    }
    let sizes: Vec<usize> = groups.iter().map(|(_, edges)| edges.len()).collect();
    let quota = quotas(&sizes, total_n);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample: Vec<(String, String)> = Vec::with_capacity(total_n);
    for ((_, edges), &q) in groups.iter().zip(&quota) {
        let chosen = rand::seq::index::sample(&mut rng, edges.len(), q);
        for idx in chosen.iter() {
            let (a, b, _) = edges[idx];
            sample.push((a.to_string(), b.to_string()));
        }
    }
    sample.sort();
    Ok(sample)
}
