//! Compression- and k-mer-based information distances.
//!
//! This crate is `no_std` (it needs `alloc`). It holds the pure parts of the
//! toolkit: a deterministic LZ77-style reference compressor, the normalized
//! distance formulas over compressed sizes, distinct k-mer and spaced-word
//! distances, neighbor-joining tree reconstruction with Newick I/O and
//! Robinson-Foulds comparison, matrix audits, and exhaustive toy-scale checks
//! of prefix-code (Kraft) and density conditions.
//!
//! Everything that touches the operating system (files, processes, threads,
//! network) lives in the `infodist` companion crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod compressor;
pub mod distances;
pub mod document;
mod error;
pub mod kmer;
pub mod matrix;
pub mod theory;
pub mod tree;

pub use compressor::{CompressedSize, Compressor, CompressorSpec, LzCompressor};
pub use distances::{JointSizePolicy, PairDistance, SizeTriple};
pub use document::{Document, DocumentKind};
pub use error::Error;
pub use matrix::{DistanceMatrix, DistanceRecipe};
pub use tree::PhyloTree;

/// Exact rational used for distance values computed from integer sizes.
pub type Rational = num_rational::Ratio<i128>;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Lossy conversion used when an exact value is presented.
pub fn rational_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
