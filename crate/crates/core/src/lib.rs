//! Graded R-matrices, boundary reflection matrices, and Grassmann-exact
//! numerical verification of the graded Yang-Baxter and reflection equations
//! for gl(m|n) and U_q(gl(m|n)) chains.

pub mod cli;
pub mod grassmann;
pub mod json;
pub mod reflection;
pub mod rmatrix;
pub mod sampling;
pub mod solutions;
pub mod supermatrix;
pub mod verify;

pub use grassmann::{
    gadd, gen, gmul, gnorm, gparity, gscale, GeneratorRegistry, GrassmannElement, Parity, C64,
};
pub use supermatrix::{GradingProfile, SuperMatrix};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Registry(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("profile mismatch: {0}")]
    Profile(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("singular parameters: {0}")]
    Singular(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
