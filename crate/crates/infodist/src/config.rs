//! Run configuration: a flat `key = value` file whose entries can be
//! overridden by command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use infodist_core::kmer::{CondVariant, SpacedTemplate, WordSource};
use infodist_core::matrix::{DistanceKind, SymmetrizeMode, DEFAULT_AUDIT_TOLERANCE};
use infodist_core::{CompressorSpec, DistanceRecipe, JointSizePolicy};

use crate::error::{Error, Result};
use crate::export::MatrixFormat;

pub const KEYS: &[&str] = &[
    "corpus",
    "data-dir",
    "distance",
    "compressor",
    "k",
    "template",
    "variant",
    "joint",
    "symmetrize",
    "zero-diagonal",
    "out",
    "name",
    "formats",
    "workers",
    "seed",
    "tolerance",
];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> std::result::Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value`", n + 1))?;
        let k = k.trim();
        if !KEYS.contains(&k) {
            return Err(format!("line {}: unknown key `{k}`", n + 1));
        }
        map.insert(k.to_owned(), v.trim().to_owned());
    }
    Ok(map)
}

pub fn load_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text).map_err(|m| Error::format(path, m))
}

/// Builds a recipe from textual settings. Compression distances default to
/// the built-in compressor.
pub fn build_recipe(
    distance: &str,
    compressor: Option<&str>,
    k: Option<usize>,
    template: Option<&str>,
    variant: Option<&str>,
    joint: Option<&str>,
) -> Result<DistanceRecipe> {
    let kind: DistanceKind = distance.parse()?;
    let mut recipe = if kind.is_compression_based() {
        if k.is_some() || template.is_some() {
            return Err(Error::Input(format!("{kind} does not use k-mers")));
        }
        let spec: CompressorSpec = compressor.unwrap_or("builtin-lz").parse()?;
        DistanceRecipe::compression(kind, spec)
    } else {
        if compressor.is_some() {
            return Err(Error::Input(format!("{kind} does not use a compressor")));
        }
        let words = match (k, template) {
            (Some(_), Some(_)) => return Err(Error::Input("give either k or a template, not both".into())),
            (Some(k), None) => WordSource::Contiguous(k),
            (None, Some(t)) => WordSource::Spaced(t.parse::<SpacedTemplate>()?),
            (None, None) => return Err(Error::Input(format!("{kind} needs k or a template"))),
        };
        DistanceRecipe::kmer(kind, words)
    };
    if let Some(v) = variant {
        recipe = recipe.with_variant(v.parse::<CondVariant>()?);
    }
    if let Some(j) = joint {
        recipe = recipe.with_joint_policy(match j {
            "min" | "min-of-both-orders" => JointSizePolicy::MinOfBothOrders,
            "single" | "single-order" => JointSizePolicy::SingleOrder,
            _ => {
                return Err(Error::Input(format!(
                    "unknown joint-size policy `{j}`; expected min or single"
                )))
            }
        });
    }
    recipe.validate()?;
    Ok(recipe)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Directory of documents or a manifest file.
    pub corpus: PathBuf,
    /// Where fetched remote entries live.
    pub data_dir: Option<PathBuf>,
    pub recipe: DistanceRecipe,
    pub symmetrize: SymmetrizeMode,
    pub zero_diagonal: bool,
    pub out: PathBuf,
    /// Output file stem.
    pub name: String,
    pub formats: Vec<MatrixFormat>,
    /// 0 means one per core.
    pub workers: usize,
    pub seed: u64,
    pub tolerance: f64,
}

fn parse_num<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    map.get(key)
        .map(|v| {
            v.parse()
                .map_err(|_| Error::Input(format!("`{key}`: cannot parse `{v}`")))
        })
        .transpose()
}

impl RunConfig {
    /// Settings from `file`, with `overrides` taking precedence.
    pub fn resolve(file: &BTreeMap<String, String>, overrides: &BTreeMap<String, String>) -> Result<Self> {
        let mut map = file.clone();
        map.extend(overrides.iter().map(|(k, v)| (k.clone(), v.clone())));
        let get = |k: &str| map.get(k).map(String::as_str);
        let corpus = get("corpus").ok_or_else(|| Error::Input("no corpus given".into()))?;
        let recipe = build_recipe(
            get("distance").unwrap_or("ncd"),
            get("compressor"),
            parse_num(&map, "k")?,
            get("template"),
            get("variant"),
            get("joint"),
        )?;
        let formats = match get("formats") {
            None => MatrixFormat::ALL.to_vec(),
            Some(f) => f
                .split(',')
                .map(|s| s.trim().parse::<MatrixFormat>().map_err(Error::Input))
                .collect::<Result<_>>()?,
        };
        let zero_diagonal = match get("zero-diagonal") {
            None | Some("true") | Some("yes") | Some("1") => true,
            Some("false") | Some("no") | Some("0") => false,
            Some(v) => {
                return Err(Error::Input(format!(
                    "`zero-diagonal`: expected true or false, got `{v}`"
                )))
            }
        };
        let tolerance = parse_num(&map, "tolerance")?.unwrap_or(DEFAULT_AUDIT_TOLERANCE);
        if tolerance.is_nan() || tolerance < 0.0 {
            return Err(Error::Input("`tolerance` must be >= 0".into()));
        }
        Ok(RunConfig {
            corpus: corpus.into(),
            data_dir: get("data-dir").map(PathBuf::from),
            recipe,
            symmetrize: get("symmetrize").unwrap_or("avg").parse()?,
            zero_diagonal,
            out: get("out").unwrap_or(".").into(),
            name: get("name").unwrap_or("matrix").to_owned(),
            formats,
            workers: parse_num(&map, "workers")?.unwrap_or(0),
            seed: parse_num(&map, "seed")?.unwrap_or(0),
            tolerance,
        })
    }
}
