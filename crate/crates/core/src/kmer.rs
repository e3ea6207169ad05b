//! Distinct-word counts as a compression-free complexity estimate.
//!
//! `N(x)` is the number of distinct words extracted from `x`, either
//! contiguous k-mers or spaced words selected by a 0/1 template. Two
//! conditional counts are supported:
//!
//! * [`CondVariant::Concat`]: `N(x|y) = N(xy) - N(y)`, which also counts the
//!   words spanning the junction of `x` and `y` (so `N(x|x)` can be nonzero);
//! * [`CondVariant::SetDiff`]: `N(x|y) = |words(x) \ words(y)|`.
//!
//! Word sets are sorted vectors; pure-ACGT input with weight ≤ 32 is packed
//! two bits per base, anything else is kept as byte strings.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::Error;
use crate::{Rational, Result};

/// A 0/1 pattern; the 1-positions select the bases forming a word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpacedTemplate {
    ones: Vec<usize>,
    len: usize,
}

impl SpacedTemplate {
    /// The all-ones template of length `k`.
    pub fn contiguous(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidTemplate(String::new(), "empty template"));
        }
        Ok(SpacedTemplate {
            ones: (0..k).collect(),
            len: k,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn weight(&self) -> usize {
        self.ones.len()
    }

    pub fn is_contiguous(&self) -> bool {
        self.weight() == self.len
    }
}

impl FromStr for SpacedTemplate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why| Error::InvalidTemplate(s.into(), why);
        if s.is_empty() {
            return Err(bad("empty template"));
        }
        let mut ones = Vec::new();
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => ones.push(i),
                '0' => {}
                _ => return Err(bad("only 0 and 1 are allowed")),
            }
        }
        if !s.starts_with('1') || !s.ends_with('1') {
            return Err(bad("must start and end with 1"));
        }
        Ok(SpacedTemplate { ones, len: s.len() })
    }
}

impl fmt::Display for SpacedTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut j = 0;
        for i in 0..self.len {
            if j < self.ones.len() && self.ones[j] == i {
                f.write_str("1")?;
                j += 1;
            } else {
                f.write_str("0")?;
            }
        }
        Ok(())
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for SpacedTemplate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for SpacedTemplate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let s = <alloc::borrow::Cow<'de, str>>::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Where words come from: contiguous k-mers or a spaced template.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum WordSource {
    Contiguous(usize),
    Spaced(SpacedTemplate),
}

impl WordSource {
    /// Length of the window each word is read from.
    pub fn span(&self) -> usize {
        match self {
            WordSource::Contiguous(k) => *k,
            WordSource::Spaced(t) => t.len(),
        }
    }

    pub fn weight(&self) -> usize {
        match self {
            WordSource::Contiguous(k) => *k,
            WordSource::Spaced(t) => t.weight(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            WordSource::Contiguous(0) => Err(Error::Contract("k must be at least 1".into())),
            _ => Ok(()),
        }
    }

    fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        let (contig, ones): (usize, &[usize]) = match self {
            WordSource::Contiguous(k) => (*k, &[]),
            WordSource::Spaced(t) => (0, &t.ones),
        };
        (0..contig).chain(ones.iter().copied())
    }

    /// All words, in window order, with duplicates.
    fn words<'a>(&'a self, x: &'a [u8]) -> impl Iterator<Item = Vec<u8>> + 'a {
        let span = self.span();
        let count = if span == 0 {
            0
        } else {
            (x.len() + 1).saturating_sub(span)
        };
        (0..count).map(move |start| self.positions().map(|p| x[start + p]).collect())
    }
}

impl fmt::Display for WordSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordSource::Contiguous(k) => write!(f, "k={k}"),
            WordSource::Spaced(t) => write!(f, "template={t}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Alphabet {
    Dna,
    Bytes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum CondVariant {
    Concat,
    #[default]
    SetDiff,
}

impl FromStr for CondVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "concat" => Ok(CondVariant::Concat),
            "setdiff" | "set-diff" => Ok(CondVariant::SetDiff),
            _ => Err(Error::Contract(alloc::format!("unknown k-mer variant `{s}`"))),
        }
    }
}

fn base_code(b: u8) -> Option<u64> {
    match b {
        b'A' => Some(0),
        b'C' => Some(1),
        b'G' => Some(2),
        b'T' => Some(3),
        _ => None,
    }
}

const BASES: [u8; 4] = *b"ACGT";

#[derive(Debug, Clone, PartialEq, Eq)]
enum Words {
    Packed(Vec<u64>),
    Raw(Vec<Vec<u8>>),
}

/// A set of distinct words of equal length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KmerSet {
    k: usize,
    words: Words,
}

impl KmerSet {
    fn extract(x: &[u8], source: &WordSource) -> Self {
        let k = source.weight();
        let words = if k <= 32 && x.iter().all(|&b| base_code(b).is_some()) {
            let mut v: Vec<u64> = source
                .words(x)
                .map(|w| w.iter().fold(0u64, |acc, &b| (acc << 2) | base_code(b).unwrap()))
                .collect();
            v.sort_unstable();
            v.dedup();
            Words::Packed(v)
        } else {
            let mut v: Vec<Vec<u8>> = source.words(x).collect();
            v.sort_unstable();
            v.dedup();
            Words::Raw(v)
        };
        KmerSet { k, words }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn count(&self) -> usize {
        match &self.words {
            Words::Packed(v) => v.len(),
            Words::Raw(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    pub fn alphabet(&self) -> Alphabet {
        match self.words {
            Words::Packed(_) => Alphabet::Dna,
            Words::Raw(_) => Alphabet::Bytes,
        }
    }

    /// The words in sorted byte order.
    pub fn to_words(&self) -> Vec<Vec<u8>> {
        let mut out = self.raw_words();
        out.sort_unstable();
        out
    }

    fn raw_words(&self) -> Vec<Vec<u8>> {
        match &self.words {
            Words::Raw(v) => v.clone(),
            Words::Packed(v) => v.iter().map(|&w| unpack(w, self.k)).collect(),
        }
    }

    fn raw(&self) -> Words {
        let mut v = self.raw_words();
        v.sort_unstable();
        Words::Raw(v)
    }
}

fn unpack(word: u64, k: usize) -> Vec<u8> {
    (0..k).rev().map(|i| BASES[((word >> (2 * i)) & 3) as usize]).collect()
}

/// Calls `f` with both sets in the same representation.
fn with_common<R>(a: &KmerSet, b: &KmerSet, f: impl Fn(&Words, &Words) -> R) -> R {
    match (&a.words, &b.words) {
        (Words::Packed(_), Words::Packed(_)) | (Words::Raw(_), Words::Raw(_)) => f(&a.words, &b.words),
        (Words::Packed(_), Words::Raw(_)) => f(&a.raw(), &b.words),
        (Words::Raw(_), Words::Packed(_)) => f(&a.words, &b.raw()),
    }
}

fn diff_count<T: Ord>(a: &[T], b: &[T]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() {
        if j == b.len() || a[i] < b[j] {
            n += 1;
            i += 1;
        } else if a[i] == b[j] {
            i += 1;
            j += 1;
        } else {
            j += 1;
        }
    }
    n
}

fn set_minus_count(a: &KmerSet, b: &KmerSet) -> usize {
    with_common(a, b, |x, y| match (x, y) {
        (Words::Packed(x), Words::Packed(y)) => diff_count(x, y),
        (Words::Raw(x), Words::Raw(y)) => diff_count(x, y),
        _ => unreachable!(),
    })
}

/// Number of words in `extra` that are in neither `a` nor `b`.
fn fresh_count(extra: &KmerSet, a: &KmerSet, b: &KmerSet) -> usize {
    let a_or_b = |w: &Vec<u8>| {
        let has = |s: &KmerSet| match &s.words {
            Words::Raw(v) => v.binary_search(w).is_ok(),
            Words::Packed(v) => {
                let code = w.iter().try_fold(0u64, |acc, &b| base_code(b).map(|c| (acc << 2) | c));
                code.is_some_and(|c| v.binary_search(&c).is_ok())
            }
        };
        has(a) || has(b)
    };
    extra.raw_words().iter().filter(|w| !a_or_b(w)).count()
}

/// Exact set of contiguous length-`k` words of `x`.
pub fn distinct_kmers(x: &[u8], k: usize) -> Result<KmerSet> {
    let source = WordSource::Contiguous(k);
    source.validate()?;
    Ok(KmerSet::extract(x, &source))
}

/// Words read through `t` at every alignment from the first positions to
/// the last positions.
pub fn spaced_words(x: &[u8], t: &SpacedTemplate) -> KmerSet {
    KmerSet::extract(x, &WordSource::Spaced(t.clone()))
}

pub fn words(x: &[u8], source: &WordSource) -> Result<KmerSet> {
    source.validate()?;
    Ok(KmerSet::extract(x, source))
}

/// Per-sequence data needed for pairwise counts: the word set plus the
/// boundary bytes that can form junction words with a neighbour.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KmerProfile {
    pub set: KmerSet,
    head: Vec<u8>,
    tail: Vec<u8>,
    source: WordSource,
}

impl KmerProfile {
    pub fn new(x: &[u8], source: &WordSource) -> Result<Self> {
        let set = words(x, source)?;
        let edge = source.span() - 1;
        Ok(KmerProfile {
            set,
            head: x[..edge.min(x.len())].to_vec(),
            tail: x[x.len() - edge.min(x.len())..].to_vec(),
            source: source.clone(),
        })
    }

    pub fn count(&self) -> usize {
        self.set.count()
    }
}

fn check_same_source(x: &KmerProfile, y: &KmerProfile) -> Result<()> {
    if x.source != y.source {
        return Err(Error::Contract("profiles built with different word sources".into()));
    }
    Ok(())
}

/// `N(xy)`: distinct words of the concatenation, from the two profiles.
pub fn concat_count(x: &KmerProfile, y: &KmerProfile) -> Result<usize> {
    check_same_source(x, y)?;
    let mut junction = x.tail.clone();
    junction.extend_from_slice(&y.head);
    let j = KmerSet::extract(&junction, &x.source);
    let union = x.set.count() + set_minus_count(&y.set, &x.set);
    Ok(union + fresh_count(&j, &x.set, &y.set))
}

pub fn n_cond_profiles(x: &KmerProfile, y: &KmerProfile, variant: CondVariant) -> Result<usize> {
    check_same_source(x, y)?;
    Ok(match variant {
        CondVariant::Concat => concat_count(x, y)? - y.count(),
        CondVariant::SetDiff => set_minus_count(&x.set, &y.set),
    })
}

/// `max{N(x|y), N(y|x)} / max{N(x), N(y)}`.
pub fn d_prime_profiles(x: &KmerProfile, y: &KmerProfile, variant: CondVariant) -> Result<Rational> {
    let den = x.count().max(y.count());
    if den == 0 {
        return Err(Error::Degenerate("d': both sequences are shorter than the word span"));
    }
    let num = n_cond_profiles(x, y, variant)?.max(n_cond_profiles(y, x, variant)?);
    Ok(Rational::new(num as i128, den as i128))
}

/// `(N(x|y) + N(y|x)) / N(xy)`, with `N(xy)` always a concatenation count.
///
/// The denominator is `min(N(xy), N(yx))`; the two orders differ only in
/// their junction words, and taking the smaller keeps the value exactly
/// symmetric.
pub fn d_star_profiles(x: &KmerProfile, y: &KmerProfile, variant: CondVariant) -> Result<Rational> {
    let den = concat_count(x, y)?.min(concat_count(y, x)?);
    if den == 0 {
        return Err(Error::Degenerate("d*: both sequences are shorter than the word span"));
    }
    let num = n_cond_profiles(x, y, variant)? + n_cond_profiles(y, x, variant)?;
    Ok(Rational::new(num as i128, den as i128))
}

pub fn n_cond(x: &[u8], y: &[u8], source: &WordSource, variant: CondVariant) -> Result<usize> {
    n_cond_profiles(&KmerProfile::new(x, source)?, &KmerProfile::new(y, source)?, variant)
}

pub fn d_prime(x: &[u8], y: &[u8], source: &WordSource, variant: CondVariant) -> Result<Rational> {
    d_prime_profiles(&KmerProfile::new(x, source)?, &KmerProfile::new(y, source)?, variant)
}

pub fn d_star(x: &[u8], y: &[u8], source: &WordSource, variant: CondVariant) -> Result<Rational> {
    d_star_profiles(&KmerProfile::new(x, source)?, &KmerProfile::new(y, source)?, variant)
}

/// Occurrence counts of overlapping length-`k` words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreqVector {
    pub k: usize,
    pub counts: BTreeMap<Vec<u8>, u64>,
}

impl FreqVector {
    pub fn new(x: &[u8], k: usize) -> Result<Self> {
        let source = WordSource::Contiguous(k);
        source.validate()?;
        let mut counts = BTreeMap::new();
        for w in source.words(x) {
            *counts.entry(w).or_insert(0) += 1;
        }
        Ok(FreqVector { k, counts })
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Squared Euclidean distance, exact.
    pub fn squared_distance(&self, other: &FreqVector) -> u128 {
        let mut sum = 0u128;
        for (w, &a) in &self.counts {
            let b = other.counts.get(w).copied().unwrap_or(0);
            sum += (a.abs_diff(b) as u128).pow(2);
        }
        for (w, &b) in &other.counts {
            if !self.counts.contains_key(w) {
                sum += (b as u128).pow(2);
            }
        }
        sum
    }
}

/// Euclidean distance between the k-word occurrence-count vectors.
pub fn freq_euclidean(x: &[u8], y: &[u8], k: usize) -> Result<f64> {
    Ok(libm::sqrt(
        FreqVector::new(x, k)?.squared_distance(&FreqVector::new(y, k)?) as f64,
    ))
}

/// Suggested word lengths for sequences of length `n` over `a` symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct KRecommendation {
    pub default: usize,
    pub min: usize,
    pub max: usize,
}

/// Default `ceil(log_a n) + 3`; sweep range
/// `[floor(log_a n) - 1, floor(log_a n) + 6]` clipped below at 1.
///
/// For mitochondrial genomes (`n` about 17000, `a = 4`) this gives 11 and
/// `[6, 13]`.
pub fn recommend_k(n: u64, a: u64) -> Result<KRecommendation> {
    if n < 2 || a < 2 {
        return Err(Error::Contract(
            "recommend_k needs n >= 2 and alphabet size >= 2".into(),
        ));
    }
    let mut floor = 0usize;
    let mut power = 1u128;
    while power * a as u128 <= n as u128 {
        power *= a as u128;
        floor += 1;
    }
    let ceil = if power == n as u128 { floor } else { floor + 1 };
    Ok(KRecommendation {
        default: ceil + 3,
        min: floor.saturating_sub(1).max(1),
        max: floor + 6,
    })
}
