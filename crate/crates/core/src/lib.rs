//! Exact computation of the generation length of finite sets of square
//! matrices, with checkers for the ordered-rewriting (PBW-type) property,
//! certified subword rewriting, length-bound analysis and witness families.

pub mod bounds;
pub mod error;
pub mod pbw;
pub mod rewrite;
pub mod exact_linalg;
pub mod formats;
pub mod span_engine;
pub mod witnesses;
pub mod words;

pub use error::{Error, Result};
