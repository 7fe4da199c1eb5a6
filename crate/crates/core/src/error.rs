use thiserror::Error;

/// Crate-wide error type.
///
/// Variants split into two families used by callers to pick exit codes:
/// [`Error::is_usage`] covers malformed inputs and invalid options, the rest
/// are domain errors about the data's meaning.
#[derive(Debug, Error)]
pub enum Error {
    #[error("edge list is empty")]
    EmptyEdgeList,
    #[error("center `{0}` does not appear in the edge list")]
    CenterMissing(String),
    #[error("center `{0}` has no neighbors")]
    IsolatedCenter(String),
    #[error("`{0}` is not a node of this network")]
    UnknownNode(String),
    #[error("`{0}` is not a neighbor of the center")]
    NotANeighbor(String),

    #[error("distance `{0}` needs a precomputed context; build one with `distance_context`")]
    MissingContext(String),
    #[error("invalid distance spec `{text}`: {reason}")]
    BadDistanceSpec { text: String, reason: String },
    #[error("threshold radius must be 2, 3, or 4 (got {0})")]
    BadThreshold(u32),
    #[error("iteration count must be at least 1")]
    BadIterationCount,

    #[error("{path}:{line}: {reason}")]
    ParseLine {
        path: String,
        line: usize,
        reason: String,
    },
    #[error("duplicate edge {0} -- {1} in output")]
    DuplicateEdge(String, String),
    #[error("self-loop {0} -- {0} in output")]
    SelfLoopEdge(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("unknown measure `{0}`; expected emb, disp, norm, parametric, rec, betweenness, or constraint")]
    UnknownMeasure(String),
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("sweep grid is empty")]
    EmptyGrid,
    #[error("partner `{0}` is not a neighbor of center `{1}`")]
    PartnerNotNeighbor(String, String),
    #[error("family member `{0}` is not a neighbor of center `{1}`")]
    FamilyNotNeighbor(String, String),
    #[error("reverse network for `{candidate}` does not contain `{center}` as a neighbor")]
    ReverseMissingCenter { candidate: String, center: String },

    #[error("generator params: {0}")]
    BadGenParams(String),
    #[error("partner attachment failed after {0} attempts; raise partner_attach or focus sizes")]
    PartnerAttachmentFailed(u32),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
}

impl Error {
    /// True when the error is the caller's input being malformed or an option
    /// being invalid, as opposed to a well-formed request that the data
    /// cannot satisfy.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::BadDistanceSpec { .. }
                | Error::BadThreshold(_)
                | Error::BadIterationCount
                | Error::UnknownMeasure(_)
                | Error::ParseLine { .. }
                | Error::Io { .. }
                | Error::EmptyCorpus
                | Error::EmptyGrid
                | Error::BadGenParams(_)
                | Error::UnknownPreset(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
