use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use infodist::compressors::AnyCompressor;
use infodist::config::{build_recipe, load_config, RunConfig};
use infodist::core::compressor::normality_audit;
use infodist::core::kmer::{recommend_k, words, WordSource};
use infodist::core::matrix::{DistanceKind, MetricAuditReport, SymmetrizeMode};
use infodist::core::theory::{
    big_rational_to_f64, density_check, format_bits, kraft_holds, kraft_sum, parse_bits, NamedCode, NamedDistance,
};
use infodist::core::tree::{neighbor_join, parse_newick, rf_distance, NewickOptions};
use infodist::core::{CompressorSpec, DistanceRecipe, Rational};
use infodist::corpus::{load_corpus, load_file, load_manifest, Manifest};
use infodist::export::{read_matrix, write_matrix};
use infodist::fetch::{fetch_dataset, HttpFetcher, GENBANK_URL_TEMPLATE};
use infodist::reproduce::{run_experiment, Experiment, ExperimentKind};
use infodist::{compute_matrix, evaluate_pair, Error};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "infodist",
    version,
    about = "Compression and k-mer distances, matrices and trees"
)]
struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distance between two files.
    Pair {
        x: PathBuf,
        y: PathBuf,
        #[command(flatten)]
        recipe: RecipeArgs,
        /// Print only the value.
        #[arg(long)]
        plain: bool,
    },
    /// All-pairs matrix over a corpus, written as PHYLIP, TSV and JSON.
    Matrix(MatrixArgs),
    /// Build or compare trees.
    #[command(subcommand)]
    Tree(TreeCommand),
    /// Compressor normality and metric-property reports for a corpus.
    Audit(AuditArgs),
    /// Word counts and k recommendations.
    #[command(subcommand)]
    Kmer(KmerCommand),
    /// Exhaustive Kraft sums and density checks over small binary strings.
    #[command(subcommand)]
    Theory(TheoryCommand),
    /// Download the remote entries of a manifest.
    Fetch {
        /// Manifest file, or `mammals` / `languages` for a bundled one.
        manifest: String,
        #[arg(long)]
        dest: PathBuf,
        #[arg(long, default_value = GENBANK_URL_TEMPLATE)]
        genbank_template: String,
    },
    /// Run a bundled experiment end to end.
    Reproduce {
        /// mammals or languages
        experiment: ExperimentKind,
        /// Where fetched data lives; default `data/<experiment>`.
        #[arg(long)]
        data_dir: Option<PathBuf>,
        /// Download missing data first.
        #[arg(long)]
        fetch: bool,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
}

#[derive(Args, Clone, Default)]
struct RecipeArgs {
    /// ncd, ds-hat, cdm, benedetto-S, d-prime, d-star or freq-euclidean.
    #[arg(long)]
    distance: Option<String>,
    /// builtin-lz[:window=N,level=L], gzip, bzip2 or cmd:<command>.
    #[arg(long)]
    compressor: Option<String>,
    #[arg(long)]
    k: Option<usize>,
    /// Spaced template such as 110101.
    #[arg(long)]
    template: Option<String>,
    /// setdiff or concat.
    #[arg(long)]
    variant: Option<String>,
    /// min (both concatenation orders) or single.
    #[arg(long)]
    joint: Option<String>,
}

impl RecipeArgs {
    fn recipe(&self) -> infodist::Result<DistanceRecipe> {
        build_recipe(
            self.distance.as_deref().unwrap_or("ncd"),
            self.compressor.as_deref(),
            self.k,
            self.template.as_deref(),
            self.variant.as_deref(),
            self.joint.as_deref(),
        )
    }

    fn overrides(&self, map: &mut BTreeMap<String, String>) {
        let pairs = [
            ("distance", self.distance.clone()),
            ("compressor", self.compressor.clone()),
            ("k", self.k.map(|k| k.to_string())),
            ("template", self.template.clone()),
            ("variant", self.variant.clone()),
            ("joint", self.joint.clone()),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                map.insert(k.to_owned(), v);
            }
        }
    }
}

#[derive(Args)]
struct MatrixArgs {
    /// Flat `key = value` settings; flags override them.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory of documents, a manifest (.tsv), or a single file.
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    data_dir: Option<PathBuf>,
    #[command(flatten)]
    recipe: RecipeArgs,
    /// raw, avg or min; applied to the exported matrix only.
    #[arg(long)]
    symmetrize: Option<String>,
    /// Keep the measured diagonal in the exported matrix.
    #[arg(long)]
    keep_diagonal: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output file stem.
    #[arg(long)]
    name: Option<String>,
    /// Comma-separated subset of phylip,tsv,json.
    #[arg(long)]
    formats: Option<String>,
    #[arg(long)]
    workers: Option<usize>,
    /// Triangle tolerance for the audit.
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum TreeCommand {
    /// Neighbor-joining tree from a matrix file (.phy, .tsv or .json).
    Build {
        matrix: PathBuf,
        #[arg(long)]
        outgroup: Option<String>,
        /// Symmetrize (avg, min) and zero the diagonal first.
        #[arg(long)]
        symmetrize: Option<String>,
        /// Newick output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Reference Newick tree to compare against.
        #[arg(long)]
        compare: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        precision: usize,
        /// Write negative branch lengths as they are.
        #[arg(long)]
        keep_negative: bool,
    },
    /// Robinson-Foulds distance between two Newick files.
    Compare { a: PathBuf, b: PathBuf },
}

#[derive(Args)]
struct AuditArgs {
    corpus: PathBuf,
    #[arg(long)]
    data_dir: Option<PathBuf>,
    #[arg(long, default_value = "builtin-lz")]
    compressor: String,
    #[arg(long, default_value_t = infodist::core::matrix::DEFAULT_AUDIT_TOLERANCE)]
    tolerance: f64,
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Fail with exit code 5 past a threshold: `triangle=EPS:FRAC`,
    /// `self=MAX`, `symmetry=MAX`, or a bare `EPS:FRAC` for all three.
    /// Values may end in `%`.
    #[arg(long)]
    strict: Vec<String>,
}

#[derive(Subcommand)]
enum KmerCommand {
    /// Distinct words in a file.
    Count {
        file: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        template: Option<String>,
    },
    /// Recommended k and sweep range for a sequence length.
    Recommend {
        /// Sequence length; or give a file.
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        alphabet: u64,
    },
}

#[derive(Subcommand)]
enum TheoryCommand {
    /// Sum of 2^-code(x,y) over all y of the same length as x.
    Kraft {
        /// Binary string x; default all zeros of length n.
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        /// hamming or constant:L
        #[arg(long, default_value = "hamming")]
        code: String,
    },
    /// Counts |{y : d(x,y) <= e}| against 2^(e*kappa) + 1.
    Density {
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        /// Default |x|.
        #[arg(long)]
        kappa: Option<String>,
        /// Comma-separated thresholds, decimal or p/q.
        #[arg(long, default_value = "0,1/4,1/2,3/4,1")]
        e: String,
        /// hamming-fraction or identity
        #[arg(long, default_value = "hamming-fraction")]
        distance: String,
    },
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: e.exit_code() as u8,
            error: e.into(),
        }
    }
}

impl From<infodist::core::Error> for Failure {
    fn from(e: infodist::core::Error) -> Self {
        Error::from(e).into()
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let code = error.downcast_ref::<Error>().map_or(2, |e| e.exit_code() as u8);
        Failure { code, error }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        error: anyhow::anyhow!(message.into()),
    }
}

type CmdResult = Result<(), Failure>;

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e).into())
}

fn parse_rational(s: &str) -> Result<Rational, Failure> {
    let s = s.trim();
    let bad = || usage(format!("cannot parse `{s}` as a number"));
    if let Some((p, q)) = s.split_once('/') {
        let (p, q): (i128, i128) = (
            p.trim().parse().map_err(|_| bad())?,
            q.trim().parse().map_err(|_| bad())?,
        );
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let denom = 10i128.pow(frac.len() as u32);
    let whole: i128 = if int.is_empty() {
        0
    } else {
        int.parse().map_err(|_| bad())?
    };
    let part: i128 = if frac.is_empty() {
        0
    } else {
        frac.parse().map_err(|_| bad())?
    };
    let sign = if int.starts_with('-') { -1 } else { 1 };
    Ok(Rational::new(whole * denom + sign * part, denom))
}

fn rational_string(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn cmd_pair(x: &Path, y: &Path, recipe: &RecipeArgs, plain: bool) -> CmdResult {
    let recipe = recipe.recipe()?;
    let (a, b) = (load_file(x)?, load_file(y)?);
    let report = evaluate_pair(&a, &b, &recipe)?;
    if plain {
        println!("{:?}", report.value);
    } else {
        print_json(&report);
    }
    Ok(())
}

#[derive(Serialize)]
struct MatrixSummary<'a> {
    recipe: String,
    stats: infodist::MatrixStats,
    audit: &'a MetricAuditReport,
    /// Written file names, relative to the output directory.
    files: Vec<String>,
}

fn cmd_matrix(args: &MatrixArgs) -> CmdResult {
    let file = match &args.config {
        Some(p) => load_config(p)?,
        None => BTreeMap::new(),
    };
    let mut over = BTreeMap::new();
    args.recipe.overrides(&mut over);
    let flags = [
        ("corpus", args.corpus.as_ref().map(|p| p.display().to_string())),
        ("data-dir", args.data_dir.as_ref().map(|p| p.display().to_string())),
        ("symmetrize", args.symmetrize.clone()),
        ("zero-diagonal", args.keep_diagonal.then(|| "false".to_owned())),
        ("out", args.out.as_ref().map(|p| p.display().to_string())),
        ("name", args.name.clone()),
        ("formats", args.formats.clone()),
        ("workers", args.workers.map(|w| w.to_string())),
        ("tolerance", args.tolerance.map(|t| t.to_string())),
        ("seed", args.seed.map(|s| s.to_string())),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            over.insert(k.to_owned(), v);
        }
    }
    let cfg = RunConfig::resolve(&file, &over)?;
    let docs = load_corpus(&cfg.corpus, cfg.data_dir.as_deref())?;
    let (raw, stats) = compute_matrix(&docs, &cfg.recipe, cfg.workers)?;
    let audit = raw.metric_audit(cfg.tolerance);
    let exported = raw.symmetrize(cfg.symmetrize, cfg.zero_diagonal);
    let mut files = Vec::new();
    for format in &cfg.formats {
        let path = cfg.out.join(format!("{}.{}", cfg.name, format.extension()));
        write(&path, &write_matrix(&exported, *format, Some(&audit)))?;
        files.push(path.file_name().unwrap_or_default().to_string_lossy().into_owned());
    }
    let summary = MatrixSummary {
        recipe: cfg.recipe.to_string(),
        stats,
        audit: &audit,
        files,
    };
    let path = cfg.out.join(format!("{}.audit.json", cfg.name));
    write(
        &path,
        &(serde_json::to_string_pretty(&summary).expect("report serializes") + "\n"),
    )?;
    print_json(&summary);
    Ok(())
}

#[derive(Serialize)]
struct TreeReport {
    leaves: usize,
    negative_edges: usize,
    rooted_at: Option<String>,
    rf_distance: Option<usize>,
}

fn read_newick(path: &Path) -> Result<infodist::core::PhyloTree, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_newick(text.trim()).map_err(|e| Error::format(path, e.to_string()).into())
}

fn cmd_tree(cmd: &TreeCommand) -> CmdResult {
    match cmd {
        TreeCommand::Build {
            matrix,
            outgroup,
            symmetrize,
            out,
            compare,
            precision,
            keep_negative,
        } => {
            let mut m = read_matrix(matrix)?;
            if let Some(mode) = symmetrize {
                m = m.symmetrize(mode.parse::<SymmetrizeMode>()?, true);
            }
            let unrooted = neighbor_join(&m)?;
            let tree = match outgroup {
                Some(o) => unrooted.root_at_outgroup(o)?,
                None => unrooted.clone(),
            };
            let newick = tree.to_newick_with(&NewickOptions {
                precision: *precision,
                clamp_negative: !keep_negative,
            });
            match out {
                Some(p) => write(p, &format!("{newick}\n"))?,
                None => println!("{newick}"),
            }
            let rf = match compare {
                Some(r) => Some(rf_distance(&unrooted, &read_newick(r)?)?),
                None => None,
            };
            if out.is_some() || rf.is_some() {
                print_json(&TreeReport {
                    leaves: tree.leaf_count(),
                    negative_edges: unrooted.negative_edges().len(),
                    rooted_at: outgroup.clone(),
                    rf_distance: rf,
                });
            }
            Ok(())
        }
        TreeCommand::Compare { a, b } => {
            let (ta, tb) = (read_newick(a)?, read_newick(b)?);
            #[derive(Serialize)]
            struct Compare {
                rf_distance: usize,
                splits_a: usize,
                splits_b: usize,
            }
            print_json(&Compare {
                rf_distance: rf_distance(&ta, &tb)?,
                splits_a: ta.splits().len(),
                splits_b: tb.splits().len(),
            });
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
enum Threshold {
    Triangle { tolerance: f64, max_fraction: f64 },
    SelfDistance { max: f64 },
    Symmetry { max: f64 },
}

fn parse_fraction(s: &str) -> Result<f64, Failure> {
    let s = s.trim();
    let (num, scale) = match s.strip_suffix('%') {
        Some(p) => (p, 0.01),
        None => (s, 1.0),
    };
    num.parse::<f64>()
        .ok()
        .filter(|v| *v >= 0.0)
        .map(|v| v * scale)
        .ok_or_else(|| usage(format!("bad threshold value `{s}`")))
}

fn parse_triangle(value: &str) -> Result<(f64, f64), Failure> {
    let (eps, frac) = value
        .split_once(':')
        .ok_or_else(|| usage(format!("--strict expects EPS:FRAC, got `{value}`")))?;
    Ok((parse_fraction(eps)?, parse_fraction(frac)?))
}

/// `key=value` sets one threshold; a bare `EPS:FRAC` asks for a metric up
/// to EPS: self-distance and asymmetry at most EPS, triangle violations at
/// EPS in at most FRAC of the triples.
fn parse_threshold(s: &str) -> Result<Vec<Threshold>, Failure> {
    let Some((key, value)) = s.split_once('=') else {
        let (tolerance, max_fraction) = parse_triangle(s)?;
        return Ok(vec![
            Threshold::SelfDistance { max: tolerance },
            Threshold::Symmetry { max: tolerance },
            Threshold::Triangle {
                tolerance,
                max_fraction,
            },
        ]);
    };
    let t = match key {
        "triangle" => {
            let (tolerance, max_fraction) = parse_triangle(value)?;
            Threshold::Triangle {
                tolerance,
                max_fraction,
            }
        }
        "self" => Threshold::SelfDistance {
            max: parse_fraction(value)?,
        },
        "symmetry" => Threshold::Symmetry {
            max: parse_fraction(value)?,
        },
        _ => {
            return Err(usage(format!(
                "unknown --strict key `{key}`; expected triangle, self or symmetry"
            )))
        }
    };
    Ok(vec![t])
}

#[derive(Serialize)]
struct StrictResult {
    threshold: Threshold,
    observed: f64,
    pass: bool,
}

#[derive(Serialize)]
struct AuditReport {
    compressor: String,
    normality: infodist::core::compressor::NormalityReport,
    metric: Option<MetricAuditReport>,
    strict: Vec<StrictResult>,
}

fn cmd_audit(args: &AuditArgs) -> CmdResult {
    let mut thresholds = Vec::new();
    for s in &args.strict {
        thresholds.extend(parse_threshold(s)?);
    }
    let spec: CompressorSpec = args.compressor.parse()?;
    let docs = load_corpus(&args.corpus, args.data_dir.as_deref())?;
    let c = AnyCompressor::from_spec(&spec)?;
    let normality = normality_audit(&c, &docs)?;
    // A single document has no pairs; only its normality entry is reported.
    let matrix = if docs.len() >= 2 {
        let recipe = DistanceRecipe::compression(DistanceKind::Ncd, spec.clone());
        Some(compute_matrix(&docs, &recipe, args.workers)?.0)
    } else {
        None
    };
    let metric = matrix.as_ref().map(|m| m.metric_audit(args.tolerance));
    let mut strict = Vec::new();
    for t in thresholds {
        let observed = match (&t, &matrix, &metric) {
            (_, None, _) | (_, _, None) => 0.0,
            (Threshold::Triangle { tolerance, .. }, Some(m), _) => m.metric_audit(*tolerance).violation_fraction,
            (Threshold::SelfDistance { .. }, _, Some(r)) => r.max_self_distance,
            (Threshold::Symmetry { .. }, _, Some(r)) => r.max_symmetry_gap,
        };
        let limit = match &t {
            Threshold::Triangle { max_fraction, .. } => *max_fraction,
            Threshold::SelfDistance { max } | Threshold::Symmetry { max } => *max,
        };
        strict.push(StrictResult {
            threshold: t,
            observed,
            pass: observed <= limit,
        });
    }
    let failed = strict.iter().any(|s| !s.pass);
    print_json(&AuditReport {
        compressor: spec.to_string(),
        normality,
        metric,
        strict,
    });
    if failed {
        return Err(Failure {
            code: 5,
            error: anyhow::anyhow!("strict audit thresholds exceeded"),
        });
    }
    Ok(())
}

fn cmd_kmer(cmd: &KmerCommand) -> CmdResult {
    match cmd {
        KmerCommand::Count { file, k, template } => {
            let source = match (k, template) {
                (Some(k), None) => WordSource::Contiguous(*k),
                (None, Some(t)) => WordSource::Spaced(t.parse()?),
                _ => return Err(usage("give exactly one of --k or --template")),
            };
            let doc = load_file(file)?;
            let set = words(&doc.bytes, &source)?;
            #[derive(Serialize)]
            struct Count {
                id: String,
                length: usize,
                words: String,
                distinct: usize,
            }
            print_json(&Count {
                id: doc.id,
                length: doc.bytes.len(),
                words: source.to_string(),
                distinct: set.count(),
            });
        }
        KmerCommand::Recommend { n, file, alphabet } => {
            let n = match (n, file) {
                (Some(n), None) => *n,
                (None, Some(f)) => load_file(f)?.len() as u64,
                _ => return Err(usage("give exactly one of --n or --file")),
            };
            let r = recommend_k(n, *alphabet)?;
            #[derive(Serialize)]
            struct Recommend {
                n: u64,
                alphabet: u64,
                default: u64,
                min: u64,
                max: u64,
            }
            print_json(&Recommend {
                n,
                alphabet: *alphabet,
                default: r.default as u64,
                min: r.min as u64,
                max: r.max as u64,
            });
        }
    }
    Ok(())
}

fn bits_arg(x: &Option<String>, n: Option<usize>) -> Result<Vec<u8>, Failure> {
    match (x, n) {
        (Some(x), None) => Ok(parse_bits(x)?),
        (Some(x), Some(n)) if x.len() == n => Ok(parse_bits(x)?),
        (Some(_), Some(_)) => Err(usage("--x and --n disagree")),
        (None, Some(n)) => Ok(vec![0; n]),
        (None, None) => Err(usage("give --x or --n")),
    }
}

fn cmd_theory(cmd: &TheoryCommand) -> CmdResult {
    match cmd {
        TheoryCommand::Kraft { x, n, code } => {
            let x = bits_arg(x, *n)?;
            let code: NamedCode = code.parse()?;
            let sum = kraft_sum(|a, b| code.length(a, b), &x)?;
            #[derive(Serialize)]
            struct Kraft {
                x: String,
                n: usize,
                code: String,
                sum: String,
                sum_approx: f64,
                holds: bool,
            }
            print_json(&Kraft {
                x: format_bits(&x),
                n: x.len(),
                code: code.to_string(),
                sum: sum.to_string(),
                sum_approx: big_rational_to_f64(&sum),
                holds: kraft_holds(&sum),
            });
        }
        TheoryCommand::Density {
            x,
            n,
            kappa,
            e,
            distance,
        } => {
            let x = bits_arg(x, *n)?;
            let kappa = match kappa {
                Some(k) => parse_rational(k)?,
                None => Rational::from_integer(x.len() as i128),
            };
            let grid = e.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
            let dist: NamedDistance = distance.parse()?;
            let r = density_check(|a, b| dist.distance(a, b), &x, kappa, &grid)?;
            #[derive(Serialize)]
            struct Row {
                e: String,
                count: u64,
                bound: f64,
                pass: bool,
            }
            #[derive(Serialize)]
            struct Density {
                x: String,
                kappa: String,
                distance: String,
                rows: Vec<Row>,
                all_pass: bool,
            }
            print_json(&Density {
                x: format_bits(&r.x),
                kappa: rational_string(&r.kappa),
                distance: dist.to_string(),
                all_pass: r.all_pass(),
                rows: r
                    .rows
                    .iter()
                    .map(|row| Row {
                        e: rational_string(&row.e),
                        count: row.count,
                        bound: row.bound,
                        pass: row.pass,
                    })
                    .collect(),
            });
        }
    }
    Ok(())
}

fn manifest_arg(name: &str) -> Result<Manifest, Failure> {
    match name.parse::<ExperimentKind>() {
        Ok(kind) => Ok(Experiment::bundled(kind).manifest),
        Err(_) => Ok(Manifest::load(Path::new(name))?),
    }
}

fn run_fetch(manifest: &Manifest, dest: &Path, template: &str) -> CmdResult {
    let report = fetch_dataset(manifest, dest, &HttpFetcher::default(), template)?;
    print_json(&report);
    if !report.failures.is_empty() {
        return Err(Error::Fetch {
            failed: report.failures.len(),
            total: manifest.entries.len(),
        }
        .into());
    }
    Ok(())
}

fn cmd_reproduce(kind: ExperimentKind, data_dir: Option<&Path>, fetch: bool, out: &Path, workers: usize) -> CmdResult {
    let exp = Experiment::bundled(kind);
    let data_dir = data_dir
        .map(Path::to_path_buf)
        .unwrap_or_else(|| Path::new("data").join(exp.name));
    if fetch {
        run_fetch(&exp.manifest, &data_dir, GENBANK_URL_TEMPLATE)?;
    }
    let docs = load_manifest(&exp.manifest, Some(&data_dir)).map_err(|e| {
        usage(format!(
            "{e}\nthe {} data is not present in {}; rerun with --fetch, or run `infodist fetch {} --dest {}`",
            exp.name,
            data_dir.display(),
            exp.name,
            data_dir.display()
        ))
    })?;
    let report = run_experiment(&exp, &docs, workers, Some(&out.join(exp.name)))
        .context("running the experiment")
        .map_err(Failure::from)?;
    print_json(&report);
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    match &cli.command {
        Command::Pair { x, y, recipe, plain } => cmd_pair(x, y, recipe, *plain),
        Command::Matrix(args) => cmd_matrix(args),
        Command::Tree(cmd) => cmd_tree(cmd),
        Command::Audit(args) => cmd_audit(args),
        Command::Kmer(cmd) => cmd_kmer(cmd),
        Command::Theory(cmd) => cmd_theory(cmd),
        Command::Fetch {
            manifest,
            dest,
            genbank_template,
        } => run_fetch(&manifest_arg(manifest)?, dest, genbank_template),
        Command::Reproduce {
            experiment,
            data_dir,
            fetch,
            out,
            workers,
        } => cmd_reproduce(*experiment, data_dir.as_deref(), *fetch, out, *workers),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let mut message = f.error.to_string();
            for cause in f.error.chain().skip(1).map(|c| c.to_string()) {
                if !message.contains(&cause) {
                    message = format!("{message}: {cause}");
                }
            }
            eprintln!("error: {message}");
            ExitCode::from(f.code)
        }
    }
}
