use thiserror::Error;

/// Errors shared by the elliptic, susy, models and verify modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    Domain(String),

    /// Argument within pole tolerance of a lattice point.
    #[error("argument {re}{im:+}i is within {tol:e} of a lattice point")]
    Pole { re: f64, im: f64, tol: f64 },

    /// The transformation function w(x) = D + W(u1, du1/deps) vanishes.
    #[error("singular transformation: w(x) vanishes near x = {x}")]
    SingularTransform { x: f64 },

    /// A seed function has a node on an integration path.
    #[error("division by zero: u1 vanishes on the integration path near x = {x}")]
    NodeOnPath { x: f64 },

    #[error("degenerate seed: {0}")]
    DegenerateSeed(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A quantity required to be real carries too much imaginary part.
    #[error("{what}: imaginary part {imag:e} exceeds tolerance {tol:e}")]
    ImaginaryResidue { what: String, imag: f64, tol: f64 },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),
}

pub type Result<T> = std::result::Result<T, Error>;
