use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sample array has length {got}, grid expects {want}")]
    ShapeMismatch { got: usize, want: usize },
    #[error("operation needs a {want}-component field, got {got}")]
    ComponentMismatch { got: usize, want: usize },
    #[error("grids differ: {0} vs {1} points per axis")]
    GridMismatch(usize, usize),
    #[error("field is not divergence-free (max |k·c| = {0:.3e})")]
    NotSolenoidal(f64),
    #[error("field has nonzero mean (|c(0)| = {0:.3e})")]
    NotMeanFree(f64),
    #[error("wavevector {k:?} exceeds the grid band (kmax = {kmax})")]
    BandOverflow { k: [i64; 3], kmax: i64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("matrix outside the geometric-lemma ball: |R - Id| = {dist:.4} > eps_gamma = {eps:.4}")]
    GammaOutOfBall { dist: f64, eps: f64 },
    #[error("cutoff scale exceeded: {0}")]
    Cutoff(String),
    #[error("CFL violation: dt = {dt:.3e} exceeds advective limit {limit:.3e}")]
    Cfl { dt: f64, limit: f64 },
    #[error("solver blow-up detected: ||u||_L2 = {0:.3e}")]
    BlowUp(f64),
    #[error("stress reassembly mismatch: relative residual {0:.3e} above tolerance {1:.3e}")]
    Reassembly(f64, f64),
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("snapshot format error: {0}")]
    Snapshot(String),
}

pub type Result<T> = std::result::Result<T, Error>;
