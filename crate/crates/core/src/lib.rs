//! Rich language graphs and the statistics to interrogate them.
//!
//! The crate is organized as a pipeline:
//!
//! 1. [`ingest`] parses language metadata, colexification frequencies, word
//!    ratings, sound-class wordlists and precomputed distance matrices from
//!    TSV/CSV files into validated in-memory tables.
//! 2. [`concepts`] curates concept sets, either bundled (nuclear, non-nuclear,
//!    emotion, random) or derived from concreteness/affect ratings.
//! 3. [`colex`] builds language-by-pattern frequency matrices and cosine-based
//!    semantic distances; [`phon`] computes normalized-Levenshtein phonological
//!    distances; [`geo`] computes geodesic distances, contact counts and
//!    neighbour flags.
//! 4. [`graph`] assembles everything into a [`graph::LanguageGraph`]: nodes
//!    carry genealogy and coordinates, edges carry the full per-pair distance
//!    table.
//! 5. [`stats`] runs the analyses: grouped Pearson correlations, OLS,
//!    standardized-beta regressions by relatedness level, stratified sampling,
//!    community detection and adjusted Rand indices.
//!
//! All randomized operations take an explicit seed and all pair-parallel
//! computations emit results in canonical (sorted pair) order, so outputs are
//! reproducible byte for byte across runs and worker counts.

pub mod colex;
pub mod concepts;
pub mod geo;
pub mod graph;
pub mod ingest;
pub mod phon;
pub mod stats;

pub use ingest::PairValueTable;
