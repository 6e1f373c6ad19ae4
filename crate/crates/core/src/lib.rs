//! Exact normalization of morphism words in very special equivariant
//! K-theory over finite-dimensional Gaussian-rational algebras.

pub mod algebra;
pub mod amatrix;
pub mod characters;
pub mod column_action;
pub mod corner;
pub mod error;
pub mod field;
pub mod fuzz;
pub mod group;
pub mod hom;
pub mod ktheory;
pub mod homotopy;
pub mod levelone;
pub mod matrix;
pub mod normalizer;
pub mod oracle;
pub mod path;
pub mod rational;
pub mod scalar;
pub mod splitexact;
pub mod witness;
pub mod words;
pub mod workspace;

pub use error::{Error, Indeterminate, Result, ValidationError, WordError};
pub use field::{Field, Ring};
pub use group::FiniteGroup;
pub use matrix::Matrix;
pub use rational::Rational;
pub use scalar::Scalar;

/// Matrices over the Gaussian rationals.
pub type QMatrix = Matrix<Scalar>;
