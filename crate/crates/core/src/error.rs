use thiserror::Error;

/// Errors shared across the kinematics, frame and diagram layers.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("superluminal velocity: |v| = {speed} with c = {c}")]
    Superluminal { speed: f64, c: f64 },

    #[error("non-finite component in {what}")]
    NonFinite { what: String },

    #[error("singular matrix (|det| = {det:e})")]
    SingularMatrix { det: f64 },

    #[error("rotation axis has near-zero norm")]
    ZeroAxis,

    #[error("matrix does not preserve the Minkowski form (deviation {deviation:e})")]
    NotLorentz { deviation: f64 },

    #[error("non-orthochronous transform (time-time entry {entry})")]
    NonOrthochronous { entry: f64 },

    #[error("unknown frame id `{id}`")]
    UnknownFrame { id: String },

    #[error("frame id `{id}` declared twice")]
    DuplicateFrame { id: String },

    #[error("anchor frame `{id}` must carry the identity transform")]
    NonIdentityAnchor { id: String },

    #[error("morphisms are not composable: {g_source} -> ... vs ... -> {f_target}")]
    NonComposable { f_target: String, g_source: String },

    #[error("regime mismatch: expected {expected}, got {actual}")]
    RegimeMismatch { expected: String, actual: String },

    #[error("arrow `{arrow}` references undeclared object `{object}`")]
    DanglingEndpoint { arrow: String, object: String },

    #[error("relation equates paths with mismatched endpoints")]
    RelationEndpointMismatch,

    #[error("index category presentation exceeds the cap of {cap} morphism classes")]
    IndexExplosion { cap: usize },

    #[error("invalid index presentation: {reason}")]
    InvalidIndex { reason: String },

    #[error("diagram maps index object `{object}` to unknown frame `{frame}`")]
    UnmappedObject { object: String, frame: String },

    #[error("classical velocity |v| = {speed} cannot embed with c = {c}")]
    SuperluminalEmbedding { speed: f64, c: f64 },
}
