use thiserror::Error;

/// Errors produced by curve validation, the linking engines, and the
/// double-cover oracle.
#[derive(Debug, Error)]
pub enum Error {
    #[error("zero vector cannot represent a projective point")]
    ZeroVector,

    #[error("span is degenerate: the two basis points are projectively equal")]
    DegenerateSpan,

    #[error("point is not on the line within tolerance (residual {residual:.3e})")]
    NotOnLine { residual: f64 },

    #[error("curve `{curve}` needs at least 3 vertices, got {count}")]
    TooFewVertices { curve: String, count: usize },

    #[error("curve `{curve}`: edge {index} is degenerate (consecutive lifts equal, antipodal, or a quarter turn apart)")]
    DegenerateEdge { curve: String, index: usize },

    #[error("curve `{curve}`: declared closure sign contradicts the lift chain")]
    ClosureMismatch { curve: String },

    #[error("curve `{curve}`: edges {edge_a} and {edge_b} intersect")]
    SelfIntersection {
        curve: String,
        edge_a: usize,
        edge_b: usize,
    },

    #[error("curve generation failed after {attempts} attempts")]
    GenerationFailure { attempts: u32 },

    #[error("curves `{a}` and `{b}` are not disjoint: separation {separation:.3e} below margin {margin:.3e}")]
    CurvesNotDisjoint {
        a: String,
        b: String,
        separation: f64,
        margin: f64,
    },

    #[error("edge pair ({edge_a}, {edge_b}) is degenerate for this viewpoint")]
    DegeneratePair { edge_a: usize, edge_b: usize },

    #[error("orientation determinant {det:.3e} is below the sign margin")]
    SignMarginViolation { det: f64 },

    #[error("no generic viewpoint found after {attempts} attempts (last: {last})")]
    TooManyDegenerateViewpoints { attempts: u32, last: String },

    #[error("viewpoint trials disagree on the degree: {values:?}")]
    TrialsDisagree { values: Vec<i64> },

    #[error("curve `{curve}` is not null-homologous (closure -1)")]
    NotNullHomologous { curve: String },

    #[error("crossing coefficients too small to classify the loop (alpha {alpha:.3e}, beta {beta:.3e})")]
    AmbiguousClass { alpha: f64, beta: f64 },

    #[error("no stable projection found after {attempts} attempts")]
    DegenerateProjection { attempts: u32 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate curve name `{name}`")]
    DuplicateCurve { name: String },

    #[error("curve `{name}` not found in file")]
    UnknownCurve { name: String },

    #[error("invalid configuration: {message}")]
    BadConfig { message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
