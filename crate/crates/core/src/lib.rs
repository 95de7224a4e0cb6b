//! Recursive row-represented tensor calculus on level-set embedded submanifolds.
//!
//! Tensors are complete `n`-ary trees stored flat ([`tensor::Tensor`]); fields
//! are composable expression graphs ([`field::TensorField`]) that can be
//! differentiated repeatedly; submanifolds are given by level functions
//! ([`geometry::LevelSetGeometry`]) and integrated over with chart atlases
//! ([`integration::Atlas`]).

pub mod applications;
pub mod differential;
pub mod error;
pub mod field;
pub mod geometry;
pub mod integration;
pub mod registry;
pub mod samples;
pub mod tensor;
pub mod verify;

pub use error::{Error, Result};
pub use field::TensorField;
pub use tensor::Tensor;
