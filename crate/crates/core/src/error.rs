//! Error types shared across the crate.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum ComplexError {
    #[error("regular tree requires degree q >= 3 (every vertex must have degree at least 3), got q = {0}")]
    DegreeTooSmall(u32),
    #[error("vertex {0} is outside the queried window")]
    OutOfWindow(String),
    #[error("bad complex descriptor '{0}' (expected 'tree:q', 'line' or 'finite:<path>')")]
    BadDescriptor(String),
    #[error("finite complex: {0}")]
    BadFinite(String),
    #[error("finite complex file: {0}")]
    FiniteIo(String),
}

#[derive(Error, Debug)]
pub enum ChainError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("boundary of a 0-chain is undefined")]
    BoundaryOfZeroChain,
    #[error("bad coefficient {0}")]
    BadCoefficient(String),
    #[error("chain record line {line}: {msg}")]
    BadRecord { line: usize, msg: String },
    #[error("vertex tuple is not an increasing chain in the product order")]
    NotASimplex,
}

#[derive(Error, Debug)]
pub enum SchemeError {
    #[error("bounded tail scheme unavailable: vertex {vertex} has {children} in-complex children (need >= 2)")]
    BoundedSchemeUnavailable { vertex: String, children: usize },
    #[error("tail scheme requires a tree factor, got {0}")]
    NotATree(String),
}

#[derive(Error, Debug)]
pub enum ReduceError {
    #[error("input chain has degree {got}, pipeline expects degree {want}")]
    WrongDegree { want: usize, got: usize },
    #[error("input is not a cycle on the window interior (boundary survives at {0})")]
    NotACycle(String),
    #[error("product arity {got} unsupported here (want {want})")]
    WrongArity { want: usize, got: usize },
    #[error("margin {margin} too small: pipeline needs total stage margin >= {need}")]
    MarginTooSmall { margin: u32, need: u32 },
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

#[derive(Error, Debug)]
pub enum SolveError {
    #[error("relative degree {degree} not below cube dimension {k}")]
    DegreeNotBelowCube { degree: usize, k: usize },
    #[error("boundary of the input is not supported on the cube boundary")]
    BoundaryNotOnSkeleton,
    #[error("input chain touches simplices outside the union of {k}-cubes")]
    OutsideCubes { k: usize },
    #[error("no integral solution within search bound {bound}")]
    NoSolutionInBox { bound: i128 },
}
