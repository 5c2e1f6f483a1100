//! Naturally labelled posets as Boolean lower triangular matrices, their
//! embedding into binary Pascal matrices, isomorphism classes, domination
//! moves on incidence matrices, and order ideals of the Pascal poset.

pub mod bmatrix;
pub mod domination;
pub mod enumerate;
pub mod error;
pub mod ideals;
pub mod pascal;
pub mod posetcore;

pub use bmatrix::{
    bool_mul, flip_transpose, is_idempotent, permute_similar, BoolMatrix, Permutation,
};
pub use error::{Error, Result};
pub use pascal::{induced_submatrix, pascal_matrix, IndexVector, SubsetMask};
pub use posetcore::{dual, dual_index, embed, realize, validate, PosetMatrix, ValidationError};
