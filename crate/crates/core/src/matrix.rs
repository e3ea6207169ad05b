//! Labeled square distance matrices, symmetrization and metric audits.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::compressor::CompressorSpec;
use crate::distances::{FragmentPolicy, JointSizePolicy};
use crate::error::Error;
use crate::kmer::{CondVariant, WordSource};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum DistanceKind {
    Ncd,
    DsHat,
    Cdm,
    BenedettoS,
    DPrime,
    DStar,
    FreqEuclidean,
}

impl DistanceKind {
    pub const ALL: [DistanceKind; 7] = [
        DistanceKind::Ncd,
        DistanceKind::DsHat,
        DistanceKind::Cdm,
        DistanceKind::BenedettoS,
        DistanceKind::DPrime,
        DistanceKind::DStar,
        DistanceKind::FreqEuclidean,
    ];

    pub fn is_compression_based(self) -> bool {
        matches!(
            self,
            DistanceKind::Ncd | DistanceKind::DsHat | DistanceKind::Cdm | DistanceKind::BenedettoS
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            DistanceKind::Ncd => "ncd",
            DistanceKind::DsHat => "ds-hat",
            DistanceKind::Cdm => "cdm",
            DistanceKind::BenedettoS => "benedetto-S",
            DistanceKind::DPrime => "d-prime",
            DistanceKind::DStar => "d-star",
            DistanceKind::FreqEuclidean => "freq-euclidean",
        }
    }
}

impl fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistanceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let alias = match s {
            "benedetto-s" | "benedetto" => Some(DistanceKind::BenedettoS),
            "dprime" | "d'" => Some(DistanceKind::DPrime),
            "dstar" | "d*" => Some(DistanceKind::DStar),
            _ => None,
        };
        alias
            .or_else(|| DistanceKind::ALL.into_iter().find(|k| k.name() == s))
            .ok_or_else(|| Error::Contract(format!("unknown distance `{s}`")))
    }
}

/// Everything needed to reproduce a matrix: the distance and its settings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DistanceRecipe {
    pub distance: DistanceKind,
    #[cfg_attr(feature = "serde", serde(serialize_with = "ser_display_opt"))]
    pub compressor: Option<CompressorSpec>,
    pub words: Option<WordSource>,
    pub joint_policy: JointSizePolicy,
    pub variant: CondVariant,
    pub fragment: FragmentPolicy,
}

#[cfg(feature = "serde")]
fn ser_display_opt<S: serde::Serializer, T: fmt::Display>(
    v: &Option<T>,
    s: S,
) -> core::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

impl DistanceRecipe {
    pub fn compression(distance: DistanceKind, compressor: CompressorSpec) -> Self {
        DistanceRecipe {
            distance,
            compressor: Some(compressor),
            words: None,
            joint_policy: JointSizePolicy::default(),
            variant: CondVariant::default(),
            fragment: FragmentPolicy::default(),
        }
    }

    pub fn kmer(distance: DistanceKind, words: WordSource) -> Self {
        DistanceRecipe {
            distance,
            compressor: None,
            words: Some(words),
            joint_policy: JointSizePolicy::default(),
            variant: CondVariant::default(),
            fragment: FragmentPolicy::default(),
        }
    }

    pub fn with_variant(mut self, variant: CondVariant) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_joint_policy(mut self, policy: JointSizePolicy) -> Self {
        self.joint_policy = policy;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let compression = self.distance.is_compression_based();
        match (&self.compressor, compression) {
            (None, true) => return Err(Error::Contract(format!("{} needs a compressor", self.distance))),
            (Some(_), false) => return Err(Error::Contract(format!("{} does not use a compressor", self.distance))),
            (Some(c), true) => c.validate()?,
            (None, false) => {}
        }
        match (&self.words, compression) {
            (None, false) => Err(Error::Contract(format!("{} needs k or a template", self.distance))),
            (Some(_), true) => Err(Error::Contract(format!("{} does not use k-mers", self.distance))),
            (Some(WordSource::Spaced(_)), false) if self.distance == DistanceKind::FreqEuclidean => Err(
                Error::Contract("freq-euclidean needs a contiguous k, not a template".into()),
            ),
            (Some(w), false) => w.validate(),
            (None, true) => Ok(()),
        }
    }
}

impl fmt::Display for DistanceRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.distance)?;
        if let Some(c) = &self.compressor {
            write!(f, " compressor={c}")?;
            match self.distance {
                DistanceKind::BenedettoS => write!(
                    f,
                    " fragment=1/{}<= {}",
                    self.fragment.divisor, self.fragment.max_fragment
                )?,
                _ => write!(
                    f,
                    " joint={}",
                    match self.joint_policy {
                        JointSizePolicy::SingleOrder => "single-order",
                        JointSizePolicy::MinOfBothOrders => "min-of-both-orders",
                    }
                )?,
            }
        }
        if let Some(w) = &self.words {
            write!(f, " {w}")?;
            if self.distance != DistanceKind::FreqEuclidean {
                let v = match self.variant {
                    CondVariant::Concat => "concat",
                    CondVariant::SetDiff => "setdiff",
                };
                write!(f, " variant={v}")?;
            }
        }
        Ok(())
    }
}

/// A square, labeled matrix of raw distance values (row-major).
///
/// Values are kept exactly as computed, including the diagonal and any
/// asymmetry; [`DistanceMatrix::symmetrize`] collapses them for export.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    labels: Vec<String>,
    values: Vec<f64>,
    recipe: Option<DistanceRecipe>,
}

impl DistanceMatrix {
    pub fn new(labels: Vec<String>, values: Vec<f64>) -> Result<Self> {
        let n = labels.len();
        if n < 2 {
            return Err(Error::Contract(format!(
                "a distance matrix needs at least 2 labels, got {n}"
            )));
        }
        if values.len() != n * n {
            return Err(Error::Contract(format!(
                "{} values for {n} labels; expected {}",
                values.len(),
                n * n
            )));
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if l.is_empty() {
                return Err(Error::Contract("empty label".into()));
            }
            if !seen.insert(l.as_str()) {
                return Err(Error::Contract(format!("duplicate label `{l}`")));
            }
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Contract(format!(
                "non-finite value at ({}, {})",
                labels[pos / n],
                labels[pos % n]
            )));
        }
        Ok(DistanceMatrix {
            labels,
            values,
            recipe: None,
        })
    }

    pub fn from_fn(labels: Vec<String>, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let n = labels.len();
        let values = (0..n * n).map(|k| f(k / n, k % n)).collect();
        DistanceMatrix::new(labels, values)
    }

    pub fn with_recipe(mut self, recipe: DistanceRecipe) -> Self {
        self.recipe = Some(recipe);
        self
    }

    pub fn recipe(&self) -> Option<&DistanceRecipe> {
        self.recipe.as_ref()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.len() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let n = self.len();
        self.values[i * n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.len();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn max_symmetry_gap(&self) -> f64 {
        let n = self.len();
        let mut gap = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                gap = gap.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        gap
    }

    pub fn max_self_distance(&self) -> f64 {
        (0..self.len())
            .map(|i| self.get(i, i))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// True when exactly symmetric with an all-zero diagonal.
    pub fn is_tree_ready(&self) -> bool {
        self.max_symmetry_gap() == 0.0 && (0..self.len()).all(|i| self.get(i, i) == 0.0)
    }

    pub fn symmetrize(&self, mode: SymmetrizeMode, zero_diagonal: bool) -> DistanceMatrix {
        let n = self.len();
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (self.get(i, j), self.get(j, i));
                let v = match mode {
                    SymmetrizeMode::Raw => a,
                    SymmetrizeMode::Avg => {
                        if a == b {
                            a
                        } else {
                            (a + b) / 2.0
                        }
                    }
                    SymmetrizeMode::Min => a.min(b),
                };
                out.set(i, j, if zero_diagonal && i == j { 0.0 } else { v });
            }
        }
        out
    }

    /// Scans every unordered triple for triangle violations beyond `tolerance`.
    pub fn metric_audit(&self, tolerance: f64) -> MetricAuditReport {
        let n = self.len();
        let mut violations = 0usize;
        let mut worst = f64::NEG_INFINITY;
        let mut triples = 0usize;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    triples += 1;
                    let mut violated = false;
                    for (x, y, z) in [(a, b, c), (b, a, c), (a, c, b), (c, a, b), (b, c, a), (c, b, a)] {
                        let slack = self.get(x, y) - (self.get(x, z) + self.get(z, y));
                        worst = worst.max(slack);
                        if slack > tolerance {
                            violated = true;
                        }
                    }
                    if violated {
                        violations += 1;
                    }
                }
            }
        }
        MetricAuditReport {
            n,
            tolerance,
            max_self_distance: self.max_self_distance(),
            max_symmetry_gap: self.max_symmetry_gap(),
            triples_checked: triples,
            triangle_violations: violations,
            violation_fraction: if triples == 0 {
                0.0
            } else {
                violations as f64 / triples as f64
            },
            worst_slack: if triples == 0 { None } else { Some(worst) },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum SymmetrizeMode {
    Raw,
    #[default]
    Avg,
    Min,
}

impl FromStr for SymmetrizeMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(SymmetrizeMode::Raw),
            "avg" => Ok(SymmetrizeMode::Avg),
            "min" => Ok(SymmetrizeMode::Min),
            _ => Err(Error::Contract(format!("unknown symmetrization mode `{s}`"))),
        }
    }
}

/// Default triangle tolerance for audits.
pub const DEFAULT_AUDIT_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MetricAuditReport {
    pub n: usize,
    pub tolerance: f64,
    pub max_self_distance: f64,
    pub max_symmetry_gap: f64,
    pub triples_checked: usize,
    /// Unordered triples where some side exceeds the sum of the other two
    /// by more than `tolerance`.
    pub triangle_violations: usize,
    pub violation_fraction: f64,
    /// Largest `d(x,y) - d(x,z) - d(z,y)` seen; `None` when `n < 3`.
    pub worst_slack: Option<f64>,
}
