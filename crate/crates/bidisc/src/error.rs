use thiserror::Error;

/// Errors produced by symbol construction and operator evaluation.
#[derive(Debug, Error)]
pub enum Error {
    /// An arc builder was given an empty or over-full arc.
    #[error("degenerate arc: start {start}, end {end}")]
    DegenerateArc { start: f64, end: f64 },

    /// Tent half-widths must lie strictly between 0 and pi.
    #[error("tent half-width {0} outside (0, pi)")]
    BadTentWidth(f64),

    /// A point expected inside the bidisc (or on an allowed boundary face)
    /// was outside the closed bidisc.
    #[error("point outside domain: |z1| = {r1}, |z2| = {r2}")]
    OutsideDomain { r1: f64, r2: f64 },

    /// Evaluation at a boundary coordinate was requested for a symbol whose
    /// coefficient tail in that variable is not certifiably summable.
    #[error("boundary evaluation in variable {variable} risks divergence (no summable tail bound)")]
    DivergenceRisk { variable: usize },

    /// The reproducing kernel has a pole at the requested point pair.
    #[error("kernel pole: conj(z{variable}) * w{variable} = 1")]
    KernelPole { variable: usize },

    /// A Hankel range window does not cover every frequency reachable from
    /// the column box under the symbol's stored support.
    #[error("window too small: frequency ({m1}, {m2}) reachable but not covered")]
    WindowTooSmall { m1: i32, m2: i32 },

    /// An operation that needs exactly represented symbols was given a
    /// truncated one.
    #[error("{op} requires exact symbols (l2 tail must be 0)")]
    ExactSymbolRequired { op: &'static str },

    /// A checker's standing hypothesis was violated (e.g. a zero factor).
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// Malformed input file or record.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
