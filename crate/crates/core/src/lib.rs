//! Exact homology actions of surface mapping classes.
//!
//! This crate evaluates words in Dehn twist generators to integral symplectic
//! matrices, works with Z2-quadratic forms and their Arf invariants, decides
//! membership in spin mapping class groups (equivalently, extendability of
//! surface diffeomorphisms for certain knotted surfaces in the complex
//! projective plane), factorizes Torelli-group generators into a fixed
//! generating set with replayable certificates, and reproduces the genus-2
//! coset table of the odd spin subgroup.
//!
//! All integer linear algebra is exact (arbitrary precision over Z, bit-packed
//! over F2). Every public operation is pure and deterministic; with the
//! default `parallel` feature the closure searches and exhaustive sweeps run
//! on rayon, with identical results.

pub mod certify;
pub mod closure;
pub mod curves;
pub mod error;
pub mod f2;
pub mod factorize;
pub mod genus;
pub mod homology;
pub mod membership;
pub mod quadform;
pub mod rokhlin;
pub mod schreier;
pub mod tacks;
pub mod words;

pub use error::Error;
pub use f2::{ClassF2, MatrixF2};
pub use genus::Genus;
pub use homology::{HomologyClass, SymplecticMatrix};
pub use quadform::QuadraticForm;
pub use words::TwistWord;

/// Shorthand for results carrying this crate's error type.
pub type Result<T> = std::result::Result<T, Error>;
