//! Exact and high-precision tools for fewnomial systems: sparse polynomial
//! systems, certified positive-root solving of elimination blocks, assembly
//! of systems with many positive solutions, and calculators for the known
//! upper bounds.

pub mod blocks;
pub mod bounds;
pub mod construct;
pub mod error;
pub mod matrix;
pub mod numeric;
pub mod solver;
pub mod sparse_system;
pub mod univariate;

pub use blocks::{builtin_block, eliminate, BlockHandle, BlockRecipe, BlockRegistry, EliminationStep};
pub use bounds::{BoundKind, BoundReport, BoundValue, Factor, TableFormat};
pub use construct::{assemble, census, plan, predicted_count, Census, ConstructionPlan, PlanRecord};
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use solver::{
    certify, solve_assembled, solve_block, Certificate, CertifiedSolution, SolutionSet, SolutionsFile,
    DEFAULT_PRECISION,
};
pub use sparse_system::{
    affine_span_dim, evaluate, jacobian, jacobian_det, monomial_substitution, support, transform_point,
    ExponentVector, SparsePolynomial, SparseSystem, Term,
};
pub use univariate::UniPoly;

pub use num::{BigInt, BigRational};
