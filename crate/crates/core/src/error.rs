use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid vertex `{0}`: not a vertex of the graph")]
    InvalidVertex(String),

    #[error("invalid vertex name `{0}`: names are nonempty strings over [a-z0-9_]")]
    InvalidVertexName(String),

    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),

    #[error("loop edge on `{0}` is not allowed")]
    LoopEdge(String),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(String, String),

    #[error("too many vertices: {0} (limit {1})")]
    TooManyVertices(usize, usize),

    #[error("cut constraints overlap on {0}; no valid cut exists")]
    NoValidCut(String),

    #[error("set {0} is not sparse in the graph")]
    NotSparse(String),

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown vertex `{name}` at byte {pos}")]
    UnknownVertex { pos: usize, name: String },

    #[error("truth assignment is missing atom {0}")]
    IncompleteAssignment(String),

    #[error("profile space has {0} entries, above the guard of {1}; raise the guard to proceed")]
    TooLarge(u128, u128),

    #[error("incomplete game: player `{player}` has no payoff entry for local profile {profile}")]
    IncompleteGame { player: String, profile: String },

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("derivation state exceeds the vertex bound: {0} > {1}")]
    DerivationTooLarge(usize, usize),

    #[error("formula has {0} distinct atoms, above the guard of {1}")]
    TooManyAtoms(usize, usize),

    #[error("atom {0} is not derivable; no proof exists")]
    NoProof(String),

    #[error("atom {0} is derivable; no counterexample exists")]
    NoCounterexample(String),

    #[error("internal soundness failure: {0}")]
    InternalSoundness(String),

    #[error("games are over different graphs")]
    GraphMismatch,

    #[error("proof step {step}: {msg}")]
    BadProofStep { step: usize, msg: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
