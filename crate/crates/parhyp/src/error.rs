use thiserror::Error;

/// Errors surfaced by the solvers, kernel evaluators and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("series truncation cap exceeded: needed N = {needed}, cap = {cap}")]
    TruncationCap { needed: usize, cap: usize },

    #[error("Neumann series did not decay: tail ratio {ratio:.3e} at j = {j}")]
    Convergence { ratio: f64, j: usize },

    #[error("quadrature did not converge: refinement changed result by {change:.3e} (tol {tol:.3e})")]
    Accuracy { change: f64, tol: f64 },

    #[error("near-singular collocation step at node {node}: diagonal weight {weight:.3e}")]
    SingularStep { node: usize, weight: f64 },

    #[error("Picard iteration diverging: residual grew for {count} consecutive sweeps")]
    Divergence { count: usize },

    #[error(
        "kernel evaluation inside the regularization floor: |x - x1| = {sep:.3e} < {floor:.3e}"
    )]
    Proximity { sep: f64, floor: f64 },

    #[error("grid mismatch: {0}")]
    Shape(String),

    #[error("node count {count} exceeds cap {cap}")]
    SizeCap { count: usize, cap: usize },

    #[error("eigensolver failed to converge for a {n}x{n} matrix")]
    Eigensolver { n: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("unsupported parameter: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
