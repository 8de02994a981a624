//! CLI error type; variants map one-to-one onto exit codes.

use glottograph::colex::ColexError;
use glottograph::concepts::ConceptError;
use glottograph::geo::GeoError;
use glottograph::graph::GraphError;
use glottograph::ingest::IngestError;
use glottograph::phon::PhonError;
use glottograph::stats::StatsError;

#[derive(Debug)]
pub enum CliError {
    /// Bad configuration or flags; exit 2.
    Config(String),
    /// Input data violates a contract; exit 3.
    Data(String),
    /// IO or serialization failure; exit 4.
    Internal(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        match e {
            IngestError::Io { .. } => CliError::Internal(format!("ingest: {e}")),
            other => CliError::Data(format!("ingest: {other}")),
        }
    }
}

impl From<ColexError> for CliError {
    fn from(e: ColexError) -> Self {
        CliError::Data(format!("colex: {e}"))
    }
}

impl From<ConceptError> for CliError {
    fn from(e: ConceptError) -> Self {
        CliError::Data(format!("concepts: {e}"))
    }
}

impl From<PhonError> for CliError {
    fn from(e: PhonError) -> Self {
        CliError::Data(format!("phon: {e}"))
    }
}

impl From<GeoError> for CliError {
    fn from(e: GeoError) -> Self {
        CliError::Data(format!("geo: {e}"))
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Io { .. } => CliError::Internal(format!("graph: {e}")),
            other => CliError::Data(format!("graph: {other}")),
        }
    }
}

impl From<StatsError> for CliError {
    fn from(e: StatsError) -> Self {
        CliError::Data(format!("stats: {e}"))
    }
}
