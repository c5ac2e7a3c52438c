use thiserror::Error;

/// Errors produced by graph construction, validation, and inference.
#[derive(Debug, Error)]
pub enum RiseError {
    #[error("non-finite entry at row {row}, column {col}")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("need at least 4 observations, got {0}")]
    TooFewObservations(usize),

    #[error("observation rows have inconsistent widths: row {row} has {got}, expected {expected}")]
    RaggedRow {
        row: usize,
        got: usize,
        expected: usize,
    },

    #[error("shape hint ({rows}, {cols}) does not match row width {dim}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        dim: usize,
    },

    #[error("frobenius metric requires a shape hint")]
    MissingShapeHint,

    #[error("distance matrix is not square: {rows} rows, row {row} has {cols} columns")]
    NotSquare {
        rows: usize,
        row: usize,
        cols: usize,
    },

    #[error("distance matrix asymmetric at ({i},{j})/({j},{i}): {a} vs {b}")]
    Asymmetric { i: usize, j: usize, a: f64, b: f64 },

    #[error("negative distance {value} at ({i},{j})")]
    NegativeEntry { i: usize, j: usize, value: f64 },

    #[error("nonzero diagonal {value} at ({i},{i})")]
    NonzeroDiagonal { i: usize, value: f64 },

    #[error("layer count k={k} out of range 1..={max} for {graph} on {n} vertices")]
    LayerCountOutOfRange {
        k: usize,
        max: usize,
        graph: &'static str,
        n: usize,
    },

    #[error("layer {layer}: residual graph admits no {want} (graph exhausted)")]
    InfeasibleLayer { layer: usize, want: &'static str },

    #[error("kernel bandwidth must be positive, got {0}")]
    InvalidBandwidth(f64),

    #[error("sample sizes m={m}, n={n} invalid: need m, n >= 2")]
    InvalidSplit { m: usize, n: usize },

    #[error("dimension mismatch: rank matrix is {rank_n}x{rank_n}, split has N={split_n}")]
    DimensionMismatch { rank_n: usize, split_n: usize },

    #[error("pooled size N={0} too small for permutation moments (need N >= 4)")]
    PooledTooSmall(usize),

    #[error("rank matrix is degenerate ({condition}); use a permutation p-value or a different similarity graph")]
    Degenerate { condition: &'static str },

    #[error("permutation budget must be >= 1")]
    EmptyBudget,

    #[error("unknown setting token `{0}`")]
    UnknownSetting(String),

    #[error("lambda {0} outside (0, 1)")]
    InvalidLambda(f64),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Csv {
        context: String,
        #[source]
        source: csv::Error,
    },

    #[error("{0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, RiseError>;

impl RiseError {
    /// Exit-code class used by the CLI: 2 for validation problems, 3 for degeneracy.
    pub fn exit_code(&self) -> i32 {
        match self {
            RiseError::Degenerate { .. } => 3,
            _ => 2,
        }
    }
}
