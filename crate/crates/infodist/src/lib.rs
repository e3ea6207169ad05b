//! Corpus handling, external compressors, parallel distance matrices, matrix
//! file formats and dataset pipelines on top of `infodist-core`.

pub mod cache;
pub mod compressors;
pub mod compute;
pub mod config;
pub mod corpus;
mod error;
pub mod export;
pub mod fetch;
pub mod reproduce;

pub use compute::{compute_matrix, compute_matrix_with, evaluate_pair, MatrixStats, PairReport};
pub use error::{Error, Result};
pub use infodist_core as core;
