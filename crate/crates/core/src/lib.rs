//! Exact chain calculus on triangulated products of ordered locally finite
//! complexes.
//!
//! The library builds finite windows of regular trees, the line and small
//! explicit graphs, forms their triangulated Cartesian products, and runs
//! swindle constructions (tails, panels, beams) that reduce cycles to
//! boundaries. Every run produces a machine-checkable certificate: the
//! constructed chains, the residual after each stage, and the region on which
//! the identities hold. All arithmetic is exact (integers or rationals); there
//! are no tolerances anywhere.

pub mod cert;
pub mod chain;
pub mod coeff;
pub mod complex;
pub mod error;
pub mod generate;
pub mod product;
pub mod reduce1;
pub mod reduce2;
pub mod relative;
pub mod tails;
pub mod witness;


pub use chain::Chain;
pub use coeff::{Coeff, CoeffMode};
pub use complex::{Ball, OrderedComplex, VertexRef, Window};
pub use error::{ChainError, ComplexError, ReduceError, SchemeError, SolveError};
pub use product::{Cube, EdgeClass, PVertex, ProductComplex, Region, Simplex, TriSimplexClass};

