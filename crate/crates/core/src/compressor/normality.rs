//! Empirical check of how "normal" a compressor is on a corpus:
//! idempotency, symmetry and monotonicity of compressed sizes.

use alloc::string::String;
use alloc::vec::Vec;

use super::{compressed_size, concat_size, Compressor};
use crate::document::Document;
use crate::error::Error;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct IdempotencyEntry {
    pub id: String,
    pub c_x: u64,
    pub c_xx: u64,
    /// |C(xx) - C(x)| / C(x)
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SymmetryEntry {
    pub a: String,
    pub b: String,
    pub c_ab: u64,
    pub c_ba: u64,
    /// |C(ab) - C(ba)| / max(C(ab), C(ba))
    pub deviation: f64,
}

/// An ordered pair with C(ab) < C(a).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MonotonicityViolation {
    pub a: String,
    pub b: String,
    pub c_a: u64,
    pub c_ab: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Quantiles {
    pub min: f64,
    pub median: f64,
    pub p90: f64,
    pub max: f64,
}

impl Quantiles {
    /// Linear-interpolation quantiles; `None` for an empty sample.
    pub fn of(values: impl IntoIterator<Item = f64>) -> Option<Self> {
        let mut v: Vec<f64> = values.into_iter().collect();
        if v.is_empty() {
            return None;
        }
        v.sort_by(f64::total_cmp);
        let q = |p: f64| {
            let pos = p * (v.len() - 1) as f64;
            let lo = pos as usize;
            let hi = (lo + 1).min(v.len() - 1);
            v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
        };
        Some(Quantiles {
            min: v[0],
            median: q(0.5),
            p90: q(0.9),
            max: v[v.len() - 1],
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct NormalityReport {
    pub idempotency: Vec<IdempotencyEntry>,
    pub symmetry: Vec<SymmetryEntry>,
    pub monotonicity_violations: Vec<MonotonicityViolation>,
    pub ordered_pairs_checked: usize,
    pub idempotency_summary: Option<Quantiles>,
    pub symmetry_summary: Option<Quantiles>,
}

/// Measures idempotency per document, symmetry per unordered pair and
/// monotonicity per ordered pair.
pub fn normality_audit<C: Compressor + ?Sized>(c: &C, corpus: &[Document]) -> Result<NormalityReport> {
    if corpus.is_empty() {
        return Err(Error::Contract("normality audit needs a non-empty corpus".into()));
    }
    let singles = corpus
        .iter()
        .map(|d| compressed_size(c, &d.bytes).map(|s| s.bits))
        .collect::<Result<Vec<_>>>()?;

    let mut idempotency = Vec::with_capacity(corpus.len());
    for (doc, &c_x) in corpus.iter().zip(&singles) {
        let c_xx = concat_size(c, &doc.bytes, &doc.bytes)?.bits;
        idempotency.push(IdempotencyEntry {
            id: doc.id.clone(),
            c_x,
            c_xx,
            deviation: c_xx.abs_diff(c_x) as f64 / c_x.max(1) as f64,
        });
    }

    let mut symmetry = Vec::new();
    let mut monotonicity_violations = Vec::new();
    let mut ordered_pairs_checked = 0;
    for i in 0..corpus.len() {
        for j in i + 1..corpus.len() {
            let (a, b) = (&corpus[i], &corpus[j]);
            let c_ab = concat_size(c, &a.bytes, &b.bytes)?.bits;
            let c_ba = concat_size(c, &b.bytes, &a.bytes)?.bits;
            symmetry.push(SymmetryEntry {
                a: a.id.clone(),
                b: b.id.clone(),
                c_ab,
                c_ba,
                deviation: c_ab.abs_diff(c_ba) as f64 / c_ab.max(c_ba).max(1) as f64,
            });
            for (first, second, c_first, joint) in [(a, b, singles[i], c_ab), (b, a, singles[j], c_ba)] {
                ordered_pairs_checked += 1;
                if joint < c_first {
                    monotonicity_violations.push(MonotonicityViolation {
                        a: first.id.clone(),
                        b: second.id.clone(),
                        c_a: c_first,
                        c_ab: joint,
                    });
                }
            }
        }
    }

    Ok(NormalityReport {
        idempotency_summary: Quantiles::of(idempotency.iter().map(|e| e.deviation)),
        symmetry_summary: Quantiles::of(symmetry.iter().map(|e| e.deviation)),
        idempotency,
        symmetry,
        monotonicity_violations,
        ordered_pairs_checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compressor::LzCompressor;
    use crate::document::DocumentKind;
    use alloc::format;
    use alloc::vec;
    use rand::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_file_has_one_idempotency_entry_and_no_pairs() {
        let doc = Document::new("x", b"abracadabra abracadabra".to_vec(), DocumentKind::Text);
        let r = normality_audit(&LzCompressor::default(), &[doc]).unwrap();
        assert_eq!(r.idempotency.len(), 1);
        assert!(r.symmetry.is_empty());
        assert_eq!(r.ordered_pairs_checked, 0);
        assert!(r.symmetry_summary.is_none());
    }

    #[test]
    fn random_files_never_violate_monotonicity() {
        let corpus: Vec<Document> = (0..10)
            .map(|i| {
                let mut bytes = vec![0u8; 4096];
                ChaCha8Rng::seed_from_u64(1000 + i).fill_bytes(&mut bytes);
                Document::new(format!("r{i}"), bytes, DocumentKind::Binary)
            })
            .collect();
        let r = normality_audit(&LzCompressor::default(), &corpus).unwrap();
        assert_eq!(r.symmetry.len(), 45);
        assert_eq!(r.ordered_pairs_checked, 90);
        assert_eq!(r.monotonicity_violations.len(), 0);
    }

    #[test]
    fn empty_corpus_is_rejected() {
        assert!(normality_audit(&LzCompressor::default(), &[]).is_err());
    }

    #[test]
    fn quantiles_interpolate() {
        let q = Quantiles::of([4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(q.min, 1.0);
        assert_eq!(q.median, 2.5);
        assert_eq!(q.max, 4.0);
        assert!((q.p90 - 3.7).abs() < 1e-12);
    }
}
