//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Criteria 11 and 12 need the network and run only with
//! `INFODIST_NETWORK=1`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use infodist::compute_matrix;
use infodist::core::distances::{cdm, ds_hat, ncd};
use infodist::core::kmer::{
    d_prime, d_star, distinct_kmers, recommend_k, spaced_words, CondVariant, SpacedTemplate, WordSource,
};
use infodist::core::matrix::DistanceKind;
use infodist::core::theory::{density_check, hamming_code_length, hamming_fraction, kraft_sum};
use infodist::core::tree::{neighbor_join, rf_distance};
use infodist::core::{
    CompressorSpec, DistanceMatrix, DistanceRecipe, Document, DocumentKind, PhyloTree, Rational, SizeTriple,
};
use infodist::corpus::{load_dir, load_manifest};
use infodist::fetch::{fetch_dataset, HttpFetcher, GENBANK_URL_TEMPLATE};
use infodist::reproduce::{run_experiment, Experiment, ExperimentKind};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

use Outcome::{Fail, Pass, Skip};

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Pass(detail)
    } else {
        Fail(detail)
    }
}

fn desk() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/desk")
}

fn builtin() -> CompressorSpec {
    CompressorSpec::default()
}

// 1

fn formula_exactness() -> Outcome {
    let s = SizeTriple::new(800, 1000, 1300);
    let got = (ncd(&s), ds_hat(&s), cdm(&s));
    let want = (Rational::new(1, 2), Rational::new(8, 13), Rational::new(13, 18));
    match got {
        (Ok(a), Ok(b), Ok(c)) => check((a, b, c) == want, format!("ncd={a} ds_hat={b} cdm={c}")),
        other => Fail(format!("{other:?}")),
    }
}

// 2

type EdgeList = Vec<(usize, usize, f64)>;
type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

/// Random unrooted binary tree: leaves 0..n, internal nodes after them.
/// Grown by attaching each new leaf to the middle of a random edge.
fn random_tree(rng: &mut ChaCha8Rng, n: usize, lengths: (f64, f64)) -> (Vec<Option<String>>, EdgeList) {
    let mut len = || rng.gen_range(lengths.0..=lengths.1);
    let centre = n;
    let mut edges: Vec<(usize, usize, f64)> = (0..3).map(|i| (i, centre, 0.0)).collect();
    for e in &mut edges {
        e.2 = len();
    }
    let mut next_internal = n + 1;
    for leaf in 3..n {
        let pick = rng.gen_range(0..edges.len());
        let (a, b, _) = edges[pick];
        let mid = next_internal;
        next_internal += 1;
        let mut len = || rng.gen_range(lengths.0..=lengths.1);
        edges[pick] = (a, mid, len());
        edges.push((mid, b, len()));
        edges.push((leaf, mid, len()));
    }
    let mut labels: Vec<Option<String>> = (0..n).map(|i| Some(format!("t{i}"))).collect();
    labels.resize(next_internal, None);
    (labels, edges)
}

/// Leaf-to-leaf path lengths by depth-first search over the edge list.
fn additive_matrix(labels: &[Option<String>], edges: &[(usize, usize, f64)], n: usize) -> DistanceMatrix {
    let mut adj = vec![Vec::new(); labels.len()];
    for &(a, b, w) in edges {
        adj[a].push((b, w));
        adj[b].push((a, w));
    }
    let mut values = vec![0.0; n * n];
    for s in 0..n {
        let mut dist = vec![f64::NAN; labels.len()];
        dist[s] = 0.0;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &(w, len) in &adj[v] {
                if dist[w].is_nan() {
                    dist[w] = dist[v] + len;
                    stack.push(w);
                }
            }
        }
        for t in s..n {
            values[s * n + t] = dist[t];
            values[t * n + s] = dist[t];
        }
    }
    let names = labels[..n].iter().map(|l| l.clone().unwrap()).collect();
    DistanceMatrix::new(names, values).unwrap()
}

/// Each edge keyed by the leaf set on the side not containing `t0`.
fn edge_splits(tree: &PhyloTree) -> BTreeMap<BTreeSet<String>, f64> {
    let nodes = tree.nodes();
    let mut out = BTreeMap::new();
    for (a, b, w) in tree.edges() {
        let mut side = BTreeSet::new();
        let mut seen = vec![false; nodes.len()];
        seen[a] = true;
        seen[b] = true;
        let mut stack = vec![b];
        while let Some(v) = stack.pop() {
            if nodes[v].edges.len() == 1 {
                side.insert(nodes[v].label.clone().unwrap());
            }
            for &(u, _) in &nodes[v].edges {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        if side.contains("t0") {
            let all: BTreeSet<String> = tree.leaf_labels().into_iter().collect();
            side = all.difference(&side).cloned().collect();
        }
        out.insert(side, w);
    }
    out
}

fn nj_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut ok = 0;
    let mut worst: f64 = 0.0;
    let mut first_bad = None;
    for t in 0..200 {
        let n = rng.gen_range(4..=16);
        let (labels, edges) = random_tree(&mut rng, n, (0.1, 10.0));
        let truth = PhyloTree::from_edges(labels.clone(), &edges).unwrap();
        let m = additive_matrix(&labels, &edges, n);
        let nj = neighbor_join(&m).unwrap();
        let rf = rf_distance(&nj, &truth).unwrap();
        let (a, b) = (edge_splits(&truth), edge_splits(&nj));
        let err = if a.keys().eq(b.keys()) {
            a.iter().map(|(k, w)| (w - b[k]).abs()).fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        worst = worst.max(err);
        if rf == 0 && err <= 1e-9 {
            ok += 1;
        } else if first_bad.is_none() {
            first_bad = Some(t);
        }
    }
    check(
        ok == 200,
        format!("{ok}/200 exact, max branch error {worst:.2e}, first failure {first_bad:?}"),
    )
}

// 3

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| {
        acc * BigInt::from(n - i) / BigInt::from(i + 1)
    })
}

fn kraft_closed_form(n: u64) -> BigRational {
    (0..=n)
        .map(|d| {
            let len = hamming_code_length(n, d).unwrap();
            BigRational::new(binomial(n, d), BigInt::from(1) << len)
        })
        .fold(BigRational::from_integer(0.into()), |a, b| a + b)
}

fn kraft_brute_force() -> Outcome {
    let one = BigRational::from_integer(1.into());
    for n in 4..=12usize {
        let x = vec![0u8; n];
        let sum = kraft_sum(
            |a, b| hamming_code_length(a.len() as u64, infodist::core::theory::hamming(a, b)),
            &x,
        );
        let sum = match sum {
            Ok(s) => s,
            Err(e) => return Fail(format!("n={n}: {e}")),
        };
        if sum >= one || sum != kraft_closed_form(n as u64) {
            return Fail(format!("n={n}: sum {sum}"));
        }
    }
    // 2^-16 (9/8)^8 = 9^8 / 2^40
    let want = BigRational::new(BigInt::from(9u64.pow(8)), BigInt::from(1) << 40);
    let at8 = kraft_sum(
        |a, b| hamming_code_length(a.len() as u64, infodist::core::theory::hamming(a, b)),
        &[0u8; 8],
    )
    .unwrap();
    check(at8 == want, format!("all sums < 1 for n=4..12; n=8 sum {at8}"))
}

// 4

fn density_counterexample() -> Outcome {
    let x = [0u8; 8];
    let kappa = Rational::from_integer(8);
    let r = density_check(hamming_fraction, &x, kappa, &[Rational::new(1, 4)]).unwrap();
    let row = &r.rows[0];
    let identity = |a: &[u8], b: &[u8]| Rational::from_integer(i128::from(a != b));
    let id = density_check(identity, &x, kappa, &[Rational::from_integer(0)]).unwrap();
    let id_row = &id.rows[0];
    check(
        row.count == 37 && row.bound == 5.0 && !row.pass && id_row.count == 1 && id_row.pass,
        format!(
            "hamming e=1/4: count {} bound {} pass {}; identity e=0: count {} pass {}",
            row.count, row.bound, row.pass, id_row.count, id_row.pass
        ),
    )
}

// 5

fn spaced_seed_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut compared = 0;
    for _ in 0..1000 {
        let len = rng.gen_range(0..=64);
        let alphabet: &[u8] = if rng.gen_bool(0.5) { b"ACGT" } else { b"abcdefghij" };
        let s: Vec<u8> = (0..len).map(|_| *alphabet.choose(&mut rng).unwrap()).collect();
        for k in 1..=8 {
            let t: SpacedTemplate = "1".repeat(k).parse().unwrap();
            let a = spaced_words(&s, &t);
            let b = distinct_kmers(&s, k).unwrap();
            if a.to_words() != b.to_words() || a.count() != b.count() {
                return Fail(format!("mismatch for {:?} k={k}", String::from_utf8_lossy(&s)));
            }
            compared += 1;
        }
    }
    Pass(format!("{compared} string/template pairs identical"))
}

// 6

fn oracle_words(x: &[u8], k: usize) -> BTreeSet<&[u8]> {
    if x.len() < k {
        return BTreeSet::new();
    }
    x.windows(k).collect()
}

fn oracle_cond(x: &[u8], y: &[u8], k: usize, variant: CondVariant) -> usize {
    match variant {
        CondVariant::SetDiff => oracle_words(x, k).difference(&oracle_words(y, k)).count(),
        CondVariant::Concat => {
            let xy = [x, y].concat();
            oracle_words(&xy, k).len() - oracle_words(y, k).len()
        }
    }
}

fn oracle_d_prime(x: &[u8], y: &[u8], k: usize, v: CondVariant) -> Rational {
    let num = oracle_cond(x, y, k, v).max(oracle_cond(y, x, k, v));
    let den = oracle_words(x, k).len().max(oracle_words(y, k).len());
    Rational::new(num as i128, den as i128)
}

fn oracle_d_star(x: &[u8], y: &[u8], k: usize, v: CondVariant) -> Rational {
    let num = oracle_cond(x, y, k, v) + oracle_cond(y, x, k, v);
    let den = oracle_words(&[x, y].concat(), k)
        .len()
        .min(oracle_words(&[y, x].concat(), k).len());
    Rational::new(num as i128, den as i128)
}

fn kmer_hand_values() -> Outcome {
    use CondVariant::{Concat, SetDiff};
    let w = |k| WordSource::Contiguous(k);
    // (x, y, k, variant, is_d_star, expected)
    let cases: [(&str, &str, usize, CondVariant, bool, Rational); 8] = [
        ("AAAA", "AAAA", 1, SetDiff, false, Rational::from_integer(0)),
        ("AAAA", "CCCC", 1, SetDiff, false, Rational::from_integer(1)),
        ("ACGT", "ACGT", 2, Concat, false, Rational::new(1, 3)),
        ("AAAA", "AAAA", 1, SetDiff, true, Rational::from_integer(0)),
        ("AAAA", "CCCC", 1, SetDiff, true, Rational::from_integer(1)),
        ("AAAA", "CCCC", 1, Concat, true, Rational::from_integer(1)),
        ("ACGT", "ACGT", 2, Concat, true, Rational::new(1, 2)),
        ("AAAA", "AAAA", 1, Concat, true, Rational::from_integer(0)),
    ];
    for (x, y, k, v, star, want) in cases {
        let (x, y) = (x.as_bytes(), y.as_bytes());
        let (got, oracle) = if star {
            (d_star(x, y, &w(k), v), oracle_d_star(x, y, k, v))
        } else {
            (d_prime(x, y, &w(k), v), oracle_d_prime(x, y, k, v))
        };
        if got.as_ref().ok() != Some(&want) || oracle != want {
            return Fail(format!(
                "{x:?} {y:?} k={k}: got {got:?}, oracle {oracle}, expected {want}"
            ));
        }
    }
    // Random agreement with the enumerator beyond the hand cases.
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..300 {
        let gen = |rng: &mut ChaCha8Rng| -> Vec<u8> {
            let n = rng.gen_range(3..40);
            (0..n).map(|_| *b"ACGT".choose(rng).unwrap()).collect()
        };
        let (x, y) = (gen(&mut rng), gen(&mut rng));
        let k = rng.gen_range(1..=3);
        for v in [SetDiff, Concat] {
            if d_star(&x, &y, &w(k), v).unwrap() != oracle_d_star(&x, &y, k, v)
                || d_prime(&x, &y, &w(k), v).unwrap() != oracle_d_prime(&x, &y, k, v)
            {
                return Fail(format!("random pair disagrees at k={k} {v:?}"));
            }
        }
    }
    Pass("8 hand values and 300 random pairs match the enumerator".into())
}

// 7, 8

fn desk_matrix(kind: DistanceKind) -> DistanceMatrix {
    let docs = load_dir(&desk()).unwrap();
    assert_eq!(docs.len(), 12, "desk corpus should hold 12 files");
    compute_matrix(&docs, &DistanceRecipe::compression(kind, builtin()), 0)
        .unwrap()
        .0
}

fn range(m: &DistanceMatrix) -> (f64, f64) {
    m.values()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
}

fn ncd_bounds() -> Outcome {
    let (n_lo, n_hi) = range(&desk_matrix(DistanceKind::Ncd));
    let (c_lo, c_hi) = range(&desk_matrix(DistanceKind::Cdm));
    check(
        n_lo >= 0.0 && n_hi <= 1.1 && c_lo >= 0.45 && c_hi <= 1.05,
        format!("NCD in [{n_lo:.4}, {n_hi:.4}], CDM in [{c_lo:.4}, {c_hi:.4}]"),
    )
}

fn metric_audit_tolerance() -> Outcome {
    let m = desk_matrix(DistanceKind::Ncd);
    let a = m.metric_audit(0.05);
    check(
        a.violation_fraction <= 0.05 && a.max_self_distance <= 0.15,
        format!(
            "{} of {} triples violate at eps=0.05 ({:.2}%), max self-NCD {:.4}",
            a.triangle_violations,
            a.triples_checked,
            100.0 * a.violation_fraction,
            a.max_self_distance
        ),
    )
}

// 9

fn mutate(rng: &mut ChaCha8Rng, parent: &[u8], rate: f64) -> Vec<u8> {
    parent
        .iter()
        .map(|&b| {
            if rng.gen_bool(rate) {
                **b"ACGT"
                    .iter()
                    .filter(|&&c| c != b)
                    .collect::<Vec<_>>()
                    .choose(rng)
                    .unwrap()
            } else {
                b
            }
        })
        .collect()
}

/// Evolves sequences from the centre node outwards; returns leaf documents.
fn evolve(rng: &mut ChaCha8Rng, labels: &[Option<String>], edges: &[(usize, usize, f64)], len: usize) -> Vec<Document> {
    let mut adj = vec![Vec::new(); labels.len()];
    for &(a, b, rate) in edges {
        adj[a].push((b, rate));
        adj[b].push((a, rate));
    }
    let root = labels.iter().position(Option::is_none).unwrap();
    let mut seqs: Vec<Option<Vec<u8>>> = vec![None; labels.len()];
    seqs[root] = Some((0..len).map(|_| *b"ACGT".choose(rng).unwrap()).collect());
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        for &(w, rate) in &adj[v] {
            if seqs[w].is_none() {
                let child = mutate(rng, seqs[v].as_ref().unwrap(), rate);
                seqs[w] = Some(child);
                stack.push(w);
            }
        }
    }
    labels
        .iter()
        .zip(seqs)
        .filter_map(|(l, s)| Some(Document::new(l.clone()?, s.unwrap(), DocumentKind::Dna)))
        .collect()
}

fn recovered(docs: &[Document], recipe: &DistanceRecipe, truth: &PhyloTree) -> bool {
    let (m, _) = compute_matrix(docs, recipe, 0).unwrap();
    let m = m.symmetrize(infodist::core::matrix::SymmetrizeMode::Avg, true);
    rf_distance(&neighbor_join(&m).unwrap(), truth).unwrap() == 0
}

/// Topologies recovered by NCD and d* over 40 seeded 8-leaf trees. With
/// `per_edge` every edge draws its own mutation rate from 1-5%; otherwise
/// each tree draws one rate in that range for all of its edges.
fn recovery(per_edge: bool, k: usize) -> (usize, usize) {
    const LEN: usize = 16 * 1024;
    let ncd_recipe = DistanceRecipe::compression(DistanceKind::Ncd, builtin());
    let dstar_recipe = DistanceRecipe::kmer(DistanceKind::DStar, WordSource::Contiguous(k));
    let (mut ncd_ok, mut dstar_ok) = (0, 0);
    for seed in 0..40u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(9000 + seed);
        // Edge weights here are per-site mutation probabilities.
        let (labels, mut edges) = random_tree(&mut rng, 8, (0.01, 0.05));
        if !per_edge {
            let rate = rng.gen_range(0.01..=0.05);
            edges.iter_mut().for_each(|e| e.2 = rate);
        }
        let truth = PhyloTree::from_edges(labels.clone(), &edges).unwrap();
        let docs = evolve(&mut rng, &labels, &edges, LEN);
        ncd_ok += usize::from(recovered(&docs, &ncd_recipe, &truth));
        dstar_ok += usize::from(recovered(&docs, &dstar_recipe, &truth));
    }
    (ncd_ok, dstar_ok)
}

fn synthetic_phylogeny() -> Outcome {
    let k = recommend_k(16 * 1024, 4).unwrap().default;
    let (ncd_ok, dstar_ok) = recovery(false, k);
    let (ncd_het, dstar_het) = recovery(true, k);
    check(
        ncd_ok >= 38 && dstar_ok >= 38,
        format!(
            "one rate per tree: NCD {ncd_ok}/40, d* (k={k}) {dstar_ok}/40 recovered; \
             independent rate per edge (not gating): NCD {ncd_het}/40, d* {dstar_het}/40"
        ),
    )
}

// 10

fn cli_matrix(workers: usize, out: &Path) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_infodist"))
        .args(["matrix", "--corpus"])
        .arg(desk())
        .arg("--out")
        .arg(out)
        .args(["--workers", &workers.to_string()])
        .output()
        .map_err(|e| e.to_string())?;
    if status.status.success() {
        Ok(())
    } else {
        Err(String::from_utf8_lossy(&status.stderr).into_owned())
    }
}

fn dir_contents(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect()
}

fn parallel_determinism() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let (one, eight) = (tmp.path().join("w1"), tmp.path().join("w8"));
    if let Err(e) = cli_matrix(1, &one).and_then(|_| cli_matrix(8, &eight)) {
        return Fail(format!("matrix command failed: {e}"));
    }
    let (a, b) = (dir_contents(&one), dir_contents(&eight));
    check(
        a == b && a.len() == 4,
        format!("{} output files, byte-identical: {}", a.len(), a == b),
    )
}

// 11, 12

fn network_enabled() -> bool {
    std::env::var("INFODIST_NETWORK").is_ok_and(|v| v == "1")
}

fn fetched(kind: ExperimentKind) -> Result<(Experiment, Vec<Document>), String> {
    let exp = Experiment::bundled(kind);
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("data").join(exp.name);
    let report =
        fetch_dataset(&exp.manifest, &dir, &HttpFetcher::default(), GENBANK_URL_TEMPLATE).map_err(|e| e.to_string())?;
    if !report.failures.is_empty() {
        return Err(format!("{} entries failed to download", report.failures.len()));
    }
    let docs = load_manifest(&exp.manifest, Some(&dir)).map_err(|e| e.to_string())?;
    Ok((exp, docs))
}

fn mammal_reproduction() -> Outcome {
    if !network_enabled() {
        return Skip("set INFODIST_NETWORK=1 to fetch GenBank data".into());
    }
    let (exp, docs) = match fetched(ExperimentKind::Mammals) {
        Ok(x) => x,
        Err(e) => return Fail(e),
    };
    let report = run_experiment(&exp, &docs, 0, None).unwrap();
    let mut lines = Vec::new();
    let mut ok = true;
    for k in 8..=13 {
        let slug = format!("d-star-k{k}");
        match report.runs.iter().find(|r| r.slug == slug) {
            Some(r) => {
                ok &= r.all_monophyletic();
                lines.push(format!("k={k}:{}", if r.all_monophyletic() { "ok" } else { "broken" }));
            }
            None => {
                ok = false;
                lines.push(format!("k={k}:missing"));
            }
        }
    }
    check(ok, lines.join(" "))
}

fn language_reproduction() -> Outcome {
    if !network_enabled() {
        return Skip("set INFODIST_NETWORK=1 to fetch UDHR texts".into());
    }
    let (exp, docs) = match fetched(ExperimentKind::Languages) {
        Ok(x) => x,
        Err(e) => return Fail(e),
    };
    if docs.len() < 12 {
        return Fail(format!("only {} translations", docs.len()));
    }
    let report = run_experiment(&exp, &docs, 0, None).unwrap();
    let run = report.runs.iter().find(|r| r.slug == "ncd").unwrap();
    let detail = run
        .groups
        .iter()
        .map(|g| {
            format!(
                "{}: within {:.4} cross {:.4} mono {}",
                g.family,
                g.mean_within.unwrap_or(f64::NAN),
                g.mean_cross.unwrap_or(f64::NAN),
                g.monophyletic
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    check(run.all_separated() && run.all_monophyletic(), detail)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("1 formula exactness", Some(Duration::from_secs(1)), formula_exactness),
        ("2 NJ consistency", Some(Duration::from_secs(5)), nj_consistency),
        ("3 Kraft brute force", Some(Duration::from_secs(10)), kraft_brute_force),
        (
            "4 density counterexample",
            Some(Duration::from_secs(1)),
            density_counterexample,
        ),
        ("5 spaced-seed equivalence", None, spaced_seed_equivalence),
        ("6 k-mer hand values", None, kmer_hand_values),
        ("7 NCD bounds on desk corpus", Some(Duration::from_secs(5)), ncd_bounds),
        ("8 metric audit tolerance", None, metric_audit_tolerance),
        (
            "9 synthetic phylogeny recovery",
            Some(Duration::from_secs(120)),
            synthetic_phylogeny,
        ),
        ("10 parallel determinism", None, parallel_determinism),
        (
            "11 mammal reproduction",
            Some(Duration::from_secs(600)),
            mammal_reproduction,
        ),
        (
            "12 language reproduction",
            Some(Duration::from_secs(120)),
            language_reproduction,
        ),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (tag, detail) = match outcome {
            Pass(d) if budget.is_some_and(|b| took > b) => {
                failed += 1;
                ("FAIL", format!("{d}; took {took:.1?}, budget {:?}", budget.unwrap()))
            }
            Pass(d) => ("PASS", d),
            Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Skip(d) => ("SKIP", d),
        };
        println!("{tag} criterion {name}: {detail} [{took:.2?}]");
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
