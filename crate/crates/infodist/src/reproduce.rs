//! End-to-end runs on the two bundled datasets: mitochondrial genomes of 20
//! mammals and translations of one legal text into many languages.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use infodist_core::kmer::{recommend_k, CondVariant, WordSource};
use infodist_core::matrix::{DistanceKind, SymmetrizeMode};
use infodist_core::tree::neighbor_join;
use infodist_core::{CompressorSpec, DistanceMatrix, DistanceRecipe, Document};
use serde::Serialize;

use crate::compute::compute_matrix;
use crate::corpus::Manifest;
use crate::error::{Error, Result};
use crate::export::write_phylip;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Mammals,
    Languages,
}

impl std::str::FromStr for ExperimentKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "mammals" => Ok(ExperimentKind::Mammals),
            "languages" => Ok(ExperimentKind::Languages),
            _ => Err(format!("unknown experiment `{s}`; expected mammals or languages")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub kind: ExperimentKind,
    pub name: &'static str,
    pub manifest: Manifest,
    /// Family name to member ids, in file order.
    pub groups: Vec<(String, Vec<String>)>,
    pub outgroup: &'static str,
    /// Whether clades are judged on the outgroup-rooted tree; otherwise on
    /// splits of the unrooted tree.
    pub rooted_checks: bool,
}

const MAMMALS_MANIFEST: &str = include_str!("../data/manifests/mammals.tsv");
const MAMMALS_GROUPS: &str = include_str!("../data/manifests/mammals-groups.tsv");
const LANGUAGES_MANIFEST: &str = include_str!("../data/manifests/languages.tsv");
const LANGUAGES_GROUPS: &str = include_str!("../data/manifests/languages-groups.tsv");

/// Parses `family <TAB> id` lines.
pub fn parse_groups(text: &str) -> std::result::Result<Vec<(String, Vec<String>)>, String> {
    let mut groups: Vec<(String, Vec<String>)> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (family, id) = line
            .split_once('\t')
            .ok_or_else(|| format!("line {}: expected `family<TAB>id`", n + 1))?;
        match groups.iter_mut().find(|g| g.0 == family) {
            Some(g) => g.1.push(id.trim().to_owned()),
            None => groups.push((family.to_owned(), vec![id.trim().to_owned()])),
        }
    }
    Ok(groups)
}

impl Experiment {
    pub fn bundled(kind: ExperimentKind) -> Self {
        let (name, manifest, groups, outgroup, rooted_checks) = match kind {
            ExperimentKind::Mammals => ("mammals", MAMMALS_MANIFEST, MAMMALS_GROUPS, "platypus", false),
            ExperimentKind::Languages => ("languages", LANGUAGES_MANIFEST, LANGUAGES_GROUPS, "Basque", true),
        };
        Experiment {
            kind,
            name,
            manifest: Manifest::parse(manifest, Path::new(".")).expect("bundled manifest parses"),
            groups: parse_groups(groups).expect("bundled groups parse"),
            outgroup,
            rooted_checks,
        }
    }

    /// Recipes run on a corpus: NCD with the built-in compressor, then d*
    /// (set difference) for every k in the recommended sweep.
    pub fn recipes(&self, docs: &[Document]) -> Result<Vec<DistanceRecipe>> {
        let mut lens: Vec<u64> = docs.iter().map(|d| d.len() as u64).collect();
        lens.sort_unstable();
        let median = lens[lens.len() / 2].max(2);
        let alphabet = match self.kind {
            ExperimentKind::Mammals => 4,
            ExperimentKind::Languages => {
                let mut seen = [false; 256];
                docs.iter()
                    .flat_map(|d| d.bytes.iter())
                    .for_each(|&b| seen[b as usize] = true);
                seen.iter().filter(|&&s| s).count().max(2) as u64
            }
        };
        let rec = recommend_k(median, alphabet)?;
        let mut out = vec![DistanceRecipe::compression(
            DistanceKind::Ncd,
            CompressorSpec::default(),
        )];
        for k in rec.min..=rec.max {
            out.push(
                DistanceRecipe::kmer(DistanceKind::DStar, WordSource::Contiguous(k)).with_variant(CondVariant::SetDiff),
            );
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupCheck {
    pub family: String,
    pub members: Vec<String>,
    pub monophyletic: bool,
    /// Mean distance over pairs inside the family.
    pub mean_within: Option<f64>,
    /// Mean distance over pairs with exactly one member in the family.
    pub mean_cross: Option<f64>,
}

impl GroupCheck {
    pub fn separated(&self) -> bool {
        match (self.mean_within, self.mean_cross) {
            (Some(w), Some(c)) => w < c,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub recipe: String,
    pub slug: String,
    pub newick: String,
    pub negative_edges: usize,
    pub groups: Vec<GroupCheck>,
}

impl RunReport {
    pub fn all_monophyletic(&self) -> bool {
        self.groups.iter().all(|g| g.monophyletic)
    }

    pub fn all_separated(&self) -> bool {
        self.groups.iter().all(GroupCheck::separated)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproduceReport {
    pub experiment: String,
    pub documents: usize,
    pub outgroup: String,
    pub clades_judged_on: &'static str,
    pub runs: Vec<RunReport>,
}

pub fn slug(recipe: &DistanceRecipe) -> String {
    match &recipe.words {
        Some(WordSource::Contiguous(k)) => format!("{}-k{k}", recipe.distance),
        Some(WordSource::Spaced(t)) => format!("{}-t{t}", recipe.distance),
        None => recipe.distance.to_string(),
    }
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Clade and distance-separation checks for each family.
pub fn check_groups(
    m: &DistanceMatrix,
    tree: &infodist_core::PhyloTree,
    groups: &[(String, Vec<String>)],
) -> Result<Vec<GroupCheck>> {
    let mut out = Vec::with_capacity(groups.len());
    for (family, members) in groups {
        let idx: Vec<usize> = members
            .iter()
            .map(|id| {
                m.index_of(id)
                    .ok_or_else(|| Error::Input(format!("group `{family}` member `{id}` is not in the corpus")))
            })
            .collect::<Result<_>>()?;
        let inside = |i: usize| idx.contains(&i);
        let n = m.len();
        let within = mean(
            idx.iter()
                .flat_map(|&i| idx.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
                .map(|(i, j)| m.get(i, j)),
        );
        let cross = mean(
            idx.iter()
                .flat_map(|&i| (0..n).filter(|&j| !inside(j)).map(move |j| (i, j)))
                .map(|(i, j)| m.get(i, j)),
        );
        out.push(GroupCheck {
            family: family.clone(),
            members: members.clone(),
            monophyletic: tree.is_monophyletic(members),
            mean_within: within,
            mean_cross: cross,
        });
    }
    Ok(out)
}

/// Runs every recipe on `docs`. Trees, PHYLIP matrices and `report.json`
/// go to `out` when given.
pub fn run_experiment(
    exp: &Experiment,
    docs: &[Document],
    workers: usize,
    out: Option<&Path>,
) -> Result<ReproduceReport> {
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut runs = Vec::new();
    for recipe in exp.recipes(docs)? {
        let (raw, _) = compute_matrix(docs, &recipe, workers)?;
        let m = raw.symmetrize(SymmetrizeMode::Avg, true);
        let tree = neighbor_join(&m)?;
        let rooted = tree.root_at_outgroup(exp.outgroup)?;
        let judged = if exp.rooted_checks { &rooted } else { &tree };
        let groups = check_groups(&m, judged, &exp.groups)?;
        let run = RunReport {
            recipe: recipe.to_string(),
            slug: slug(&recipe),
            newick: rooted.to_newick(6),
            negative_edges: tree.negative_edges().len(),
            groups,
        };
        log::info!(
            "{}: monophyletic {} / {}",
            run.slug,
            run.groups.iter().filter(|g| g.monophyletic).count(),
            run.groups.len()
        );
        if let Some(dir) = out {
            write_file(&dir.join(format!("{}.nwk", run.slug)), &format!("{}\n", run.newick))?;
            write_file(&dir.join(format!("{}.phy", run.slug)), &write_phylip(&m))?;
        }
        runs.push(run);
    }
    let report = ReproduceReport {
        experiment: exp.name.to_owned(),
        documents: docs.len(),
        outgroup: exp.outgroup.to_owned(),
        clades_judged_on: if exp.rooted_checks { "rooted" } else { "unrooted" },
        runs,
    };
    if let Some(dir) = out {
        let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
        json.push('\n');
        write_file(&dir.join("report.json"), &json)?;
    }
    Ok(report)
}

fn write_file(path: &PathBuf, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Ids per family, as a map, for reporting.
pub fn family_of(groups: &[(String, Vec<String>)]) -> BTreeMap<String, String> {
    groups
        .iter()
        .flat_map(|(f, ids)| ids.iter().map(move |id| (id.clone(), f.clone())))
        .collect()
}
