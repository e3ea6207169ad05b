//! All-pairs distance matrices over a corpus, computed in parallel with a
//! fixed output layout.

use std::sync::atomic::{AtomicUsize, Ordering};

use infodist_core::compressor::{compressed_size, concat_size};
use infodist_core::distances::{benedetto_symmetric_sizes, Formula, FragmentPolicy, FragmentSizes};
use infodist_core::kmer::{concat_count, d_prime_profiles, d_star_profiles, n_cond_profiles, FreqVector, KmerProfile};
use infodist_core::matrix::DistanceKind;
use infodist_core::{
    rational_to_f64, DistanceMatrix, DistanceRecipe, Document, Error as CoreError, JointSizePolicy, PairDistance,
    Rational, SizeTriple,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::cache::{SizeCache, SizeKey};
use crate::compressors::AnyCompressor;
use crate::error::{Error, Result};

/// Work done while computing one matrix.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct MatrixStats {
    pub documents: usize,
    /// Unordered pairs evaluated: n(n-1)/2.
    pub pair_evaluations: usize,
    /// Diagonal entries evaluated: n.
    pub self_evaluations: usize,
    /// Compressor invocations made by this computation.
    pub compressor_calls: usize,
    pub cache_hits: usize,
    /// Per-document word sets or frequency vectors built.
    pub profiles: usize,
}

/// Maps `f` over `0..count` in parallel. On failure returns the lowest
/// failing index; indices above a known failure are skipped.
fn fail_fast<T, F>(count: usize, f: F) -> std::result::Result<Vec<T>, (usize, CoreError)>
where
    T: Send,
    F: Fn(usize) -> std::result::Result<T, CoreError> + Sync,
{
    let first = AtomicUsize::new(usize::MAX);
    let mut results: Vec<Option<std::result::Result<T, CoreError>>> = (0..count)
        .into_par_iter()
        .map(|i| {
            if i > first.load(Ordering::SeqCst) {
                return None;
            }
            let r = f(i);
            if r.is_err() {
                first.fetch_min(i, Ordering::SeqCst);
            }
            Some(r)
        })
        .collect();
    let first = first.into_inner();
    if first != usize::MAX {
        let Some(Err(e)) = results.swap_remove(first) else {
            unreachable!()
        };
        return Err((first, e));
    }
    Ok(results
        .into_iter()
        .map(|r| r.expect("no failure, so nothing skipped").expect("checked"))
        .collect())
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn formula(kind: DistanceKind) -> Option<Formula> {
    match kind {
        DistanceKind::Ncd => Some(Formula::Ncd),
        DistanceKind::DsHat => Some(Formula::DsHat),
        DistanceKind::Cdm => Some(Formula::Cdm),
        _ => None,
    }
}

fn triple(policy: JointSizePolicy, cx: u64, cy: u64, cxy: u64, cyx: u64) -> SizeTriple {
    let t = SizeTriple::new(cx, cy, cxy);
    match policy {
        JointSizePolicy::SingleOrder => t,
        JointSizePolicy::MinOfBothOrders => t.with_reverse(cyx),
    }
}

fn value_of(formula: Formula, t: SizeTriple) -> std::result::Result<f64, CoreError> {
    Ok(PairDistance::from_sizes(formula, t)?.value)
}

fn check_fragment(doc: &Document, policy: FragmentPolicy) -> std::result::Result<(), CoreError> {
    let f = policy.fragment_len(doc.len());
    if f == 0 || f >= doc.len() {
        return Err(CoreError::Contract(format!(
            "document `{}` ({} bytes) is too short for a fragment",
            doc.id,
            doc.len()
        )));
    }
    Ok(())
}

/// `(C(body), C(body fragment), |fragment|)` for one document.
fn fragment_profile(
    c: &AnyCompressor,
    cache: &SizeCache,
    doc: &Document,
    policy: FragmentPolicy,
) -> std::result::Result<(u64, u64, u64), CoreError> {
    check_fragment(doc, policy)?;
    let (body, frag) = policy.split(&doc.bytes);
    let c_body = cache.get_or_compute(SizeKey::Body(doc.id.clone()), || Ok(compressed_size(c, body)?.bits))?;
    let c_self = cache.get_or_compute(SizeKey::BodyFragment(doc.id.clone(), doc.id.clone()), || {
        Ok(concat_size(c, body, frag)?.bits)
    })?;
    Ok((c_body, c_self, frag.len() as u64))
}

fn cross_fragment(
    c: &AnyCompressor,
    cache: &SizeCache,
    x: &Document,
    y: &Document,
    policy: FragmentPolicy,
) -> std::result::Result<u64, CoreError> {
    let (body, _) = policy.split(&x.bytes);
    let (_, frag) = policy.split(&y.bytes);
    cache.get_or_compute(SizeKey::BodyFragment(x.id.clone(), y.id.clone()), || {
        Ok(concat_size(c, body, frag)?.bits)
    })
}

fn single(c: &AnyCompressor, cache: &SizeCache, x: &Document) -> std::result::Result<u64, CoreError> {
    cache.get_or_compute(SizeKey::Single(x.id.clone()), || Ok(compressed_size(c, &x.bytes)?.bits))
}

fn joint(c: &AnyCompressor, cache: &SizeCache, x: &Document, y: &Document) -> std::result::Result<u64, CoreError> {
    cache.get_or_compute(SizeKey::Concat(x.id.clone(), y.id.clone()), || {
        Ok(concat_size(c, &x.bytes, &y.bytes)?.bits)
    })
}

fn check_input(corpus: &[Document], recipe: &DistanceRecipe) -> Result<()> {
    recipe.validate()?;
    if corpus.len() < 2 {
        return Err(Error::Input(format!(
            "a matrix needs at least 2 documents, got {}",
            corpus.len()
        )));
    }
    let mut ids: Vec<&str> = corpus.iter().map(|d| d.id.as_str()).collect();
    ids.sort_unstable();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Input(format!("duplicate document id `{}`", w[0])));
    }
    Ok(())
}

fn in_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Input(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(f))
}

/// Computes the full matrix with a fresh size cache. `workers = 0` uses one
/// thread per core. The result does not depend on `workers`.
pub fn compute_matrix(
    corpus: &[Document],
    recipe: &DistanceRecipe,
    workers: usize,
) -> Result<(DistanceMatrix, MatrixStats)> {
    let name = recipe.compressor.as_ref().map(|c| c.to_string()).unwrap_or_default();
    compute_matrix_with(corpus, recipe, workers, &SizeCache::new(name))
}

/// As [`compute_matrix`], reusing sizes already in `cache`.
pub fn compute_matrix_with(
    corpus: &[Document],
    recipe: &DistanceRecipe,
    workers: usize,
    cache: &SizeCache,
) -> Result<(DistanceMatrix, MatrixStats)> {
    check_input(corpus, recipe)?;
    let n = corpus.len();
    let mut stats = MatrixStats {
        documents: n,
        pair_evaluations: n * (n - 1) / 2,
        self_evaluations: n,
        ..MatrixStats::default()
    };
    let (misses, hits) = (cache.misses(), cache.hits());
    let values = in_pool(workers, || match &recipe.compressor {
        Some(spec) => {
            if cache.compressor() != spec.to_string() {
                return Err(Error::Input(format!(
                    "size cache holds sizes for `{}`, not `{spec}`",
                    cache.compressor()
                )));
            }
            let c = AnyCompressor::from_spec(spec)?;
            compression_values(corpus, recipe, &c, cache)
        }
        None => {
            stats.profiles = n;
            kmer_values(corpus, recipe)
        }
    })??;
    stats.compressor_calls = cache.misses() - misses;
    stats.cache_hits = cache.hits() - hits;
    let labels = corpus.iter().map(|d| d.id.clone()).collect();
    let m = DistanceMatrix::new(labels, values)?.with_recipe(recipe.clone());
    Ok((m, stats))
}

fn doc_error(corpus: &[Document], (i, source): (usize, CoreError)) -> Error {
    Error::Pair {
        a: corpus[i].id.clone(),
        b: corpus[i].id.clone(),
        source,
    }
}

fn pair_error(corpus: &[Document], pairs: &[(usize, usize)], (p, source): (usize, CoreError)) -> Error {
    let (i, j) = pairs[p];
    Error::Pair {
        a: corpus[i].id.clone(),
        b: corpus[j].id.clone(),
        source,
    }
}

fn compression_values(
    corpus: &[Document],
    recipe: &DistanceRecipe,
    c: &AnyCompressor,
    cache: &SizeCache,
) -> Result<Vec<f64>> {
    let n = corpus.len();
    let pairs = pairs(n);
    let policy = recipe.joint_policy;
    let mut values = vec![0.0; n * n];
    if recipe.distance == DistanceKind::BenedettoS {
        let frag = recipe.fragment;
        let profiles = fail_fast(n, |i| {
            let (c_x, c_xxp, len_xp) = fragment_profile(c, cache, &corpus[i], frag)?;
            let own = FragmentSizes {
                c_x,
                c_y: c_x,
                c_xxp,
                c_yyp: c_xxp,
                c_xyp: c_xxp,
                c_yxp: c_xxp,
                len_xp,
                len_yp: len_xp,
            };
            let id = corpus[i].id.as_str();
            let diag = rational_to_f64(&benedetto_symmetric_sizes(&own, (id, id))?);
            Ok((c_x, c_xxp, len_xp, diag))
        })
        .map_err(|e| doc_error(corpus, e))?;
        let off = fail_fast(pairs.len(), |p| {
            let (i, j) = pairs[p];
            let (px, py) = (profiles[i], profiles[j]);
            let sizes = FragmentSizes {
                c_x: px.0,
                c_y: py.0,
                c_xxp: px.1,
                c_yyp: py.1,
                c_xyp: cross_fragment(c, cache, &corpus[i], &corpus[j], frag)?,
                c_yxp: cross_fragment(c, cache, &corpus[j], &corpus[i], frag)?,
                len_xp: px.2,
                len_yp: py.2,
            };
            Ok(rational_to_f64(&benedetto_symmetric_sizes(
                &sizes,
                (&corpus[i].id, &corpus[j].id),
            )?))
        })
        .map_err(|e| pair_error(corpus, &pairs, e))?;
        for (i, p) in profiles.iter().enumerate() {
            values[i * n + i] = p.3;
        }
        for (&(i, j), v) in pairs.iter().zip(off) {
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
        return Ok(values);
    }

    let f = formula(recipe.distance).expect("compression-based distance");
    let singles = fail_fast(n, |i| {
        let cx = single(c, cache, &corpus[i])?;
        let cxx = joint(c, cache, &corpus[i], &corpus[i])?;
        Ok((cx, value_of(f, triple(policy, cx, cx, cxx, cxx))?))
    })
    .map_err(|e| doc_error(corpus, e))?;
    let off = fail_fast(pairs.len(), |p| {
        let (i, j) = pairs[p];
        let (x, y) = (&corpus[i], &corpus[j]);
        let (cx, cy) = (singles[i].0, singles[j].0);
        let cxy = joint(c, cache, x, y)?;
        let cyx = match policy {
            JointSizePolicy::MinOfBothOrders => joint(c, cache, y, x)?,
            JointSizePolicy::SingleOrder => cxy,
        };
        Ok((
            value_of(f, triple(policy, cx, cy, cxy, cyx))?,
            value_of(f, triple(policy, cy, cx, cyx, cxy))?,
        ))
    })
    .map_err(|e| pair_error(corpus, &pairs, e))?;
    for (i, s) in singles.iter().enumerate() {
        values[i * n + i] = s.1;
    }
    for (&(i, j), (vij, vji)) in pairs.iter().zip(off) {
        values[i * n + j] = vij;
        values[j * n + i] = vji;
    }
    Ok(values)
}

enum Profile {
    Words(KmerProfile),
    Freq(FreqVector),
}

fn kmer_distance(a: &Profile, b: &Profile, recipe: &DistanceRecipe) -> std::result::Result<f64, CoreError> {
    match (a, b, recipe.distance) {
        (Profile::Words(a), Profile::Words(b), DistanceKind::DPrime) => {
            Ok(rational_to_f64(&d_prime_profiles(a, b, recipe.variant)?))
        }
        (Profile::Words(a), Profile::Words(b), DistanceKind::DStar) => {
            Ok(rational_to_f64(&d_star_profiles(a, b, recipe.variant)?))
        }
        (Profile::Freq(a), Profile::Freq(b), DistanceKind::FreqEuclidean) => Ok((a.squared_distance(b) as f64).sqrt()),
        _ => unreachable!("profile kind follows the recipe"),
    }
}

fn kmer_values(corpus: &[Document], recipe: &DistanceRecipe) -> Result<Vec<f64>> {
    let n = corpus.len();
    let pairs = pairs(n);
    let words = recipe.words.as_ref().expect("validated k-mer recipe");
    let profiles = fail_fast(n, |i| {
        let x = &corpus[i].bytes;
        let p = match recipe.distance {
            DistanceKind::FreqEuclidean => Profile::Freq(FreqVector::new(x, words.span())?),
            _ => Profile::Words(KmerProfile::new(x, words)?),
        };
        let diag = kmer_distance(&p, &p, recipe)?;
        Ok((p, diag))
    })
    .map_err(|e| doc_error(corpus, e))?;
    let off = fail_fast(pairs.len(), |p| {
        let (i, j) = pairs[p];
        kmer_distance(&profiles[i].0, &profiles[j].0, recipe)
    })
    .map_err(|e| pair_error(corpus, &pairs, e))?;
    let mut values = vec![0.0; n * n];
    for (i, p) in profiles.iter().enumerate() {
        values[i * n + i] = p.1;
    }
    for (&(i, j), v) in pairs.iter().zip(off) {
        values[i * n + j] = v;
        values[j * n + i] = v;
    }
    Ok(values)
}

/// Word counts behind a k-mer distance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KmerCounts {
    pub n_x: usize,
    pub n_y: usize,
    pub n_xy: usize,
    pub n_yx: usize,
    pub n_x_given_y: usize,
    pub n_y_given_x: usize,
}

/// One distance with everything it was computed from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairReport {
    pub x: String,
    pub y: String,
    pub recipe: String,
    pub value: f64,
    /// Exact rational value, as `p/q`, where one exists.
    pub exact: Option<String>,
    pub sizes: Option<SizeTriple>,
    pub fragment_sizes: Option<FragmentSizes>,
    pub counts: Option<KmerCounts>,
}

fn exact_string(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Evaluates the recipe on a single pair.
pub fn evaluate_pair(x: &Document, y: &Document, recipe: &DistanceRecipe) -> Result<PairReport> {
    recipe.validate()?;
    let mut report = PairReport {
        x: x.id.clone(),
        y: y.id.clone(),
        recipe: recipe.to_string(),
        value: 0.0,
        exact: None,
        sizes: None,
        fragment_sizes: None,
        counts: None,
    };
    if let Some(spec) = &recipe.compressor {
        let c = AnyCompressor::from_spec(spec)?;
        let d = match recipe.distance {
            DistanceKind::BenedettoS => infodist_core::distances::benedetto_symmetric(x, y, recipe.fragment, &c)?,
            kind => infodist_core::distances::compression_pair(
                &x.bytes,
                &y.bytes,
                &c,
                recipe.joint_policy,
                formula(kind).expect("compression-based distance"),
            )?,
        };
        report.value = d.value;
        report.exact = d.exact.as_ref().map(exact_string);
        report.sizes = d.sizes;
        report.fragment_sizes = d.fragment_sizes;
        return Ok(report);
    }
    let words = recipe.words.as_ref().expect("validated k-mer recipe");
    if recipe.distance == DistanceKind::FreqEuclidean {
        let (a, b) = (
            FreqVector::new(&x.bytes, words.span())?,
            FreqVector::new(&y.bytes, words.span())?,
        );
        report.value = (a.squared_distance(&b) as f64).sqrt();
        return Ok(report);
    }
    let (a, b) = (KmerProfile::new(&x.bytes, words)?, KmerProfile::new(&y.bytes, words)?);
    let exact = match recipe.distance {
        DistanceKind::DPrime => d_prime_profiles(&a, &b, recipe.variant)?,
        _ => d_star_profiles(&a, &b, recipe.variant)?,
    };
    report.value = rational_to_f64(&exact);
    report.exact = Some(exact_string(&exact));
    report.counts = Some(KmerCounts {
        n_x: a.count(),
        n_y: b.count(),
        n_xy: concat_count(&a, &b)?,
        n_yx: concat_count(&b, &a)?,
        n_x_given_y: n_cond_profiles(&a, &b, recipe.variant)?,
        n_y_given_x: n_cond_profiles(&b, &a, recipe.variant)?,
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use infodist_core::kmer::{CondVariant, WordSource};
    use infodist_core::{CompressorSpec, DocumentKind};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn doc(id: &str, bytes: &[u8]) -> Document {
        Document::new(id, bytes.to_vec(), DocumentKind::Text)
    }

    fn random_docs(n: usize, len: usize, seed: u64) -> Vec<Document> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base: Vec<u8> = (0..len).map(|_| b"ACGT"[rng.gen_range(0..4)]).collect();
        (0..n)
            .map(|i| {
                let mut b = base.clone();
                for _ in 0..len / 20 {
                    let p = rng.gen_range(0..len);
                    b[p] = b"ACGT"[rng.gen_range(0..4)];
                }
                Document::new(format!("s{i}"), b, DocumentKind::Dna)
            })
            .collect()
    }

    #[test]
    fn identical_documents_under_ncd() {
        let text = b"It was the best of times, it was the worst of times, it was the age of wisdom. ".repeat(40);
        let docs = vec![doc("a", &text), doc("b", &text)];
        let recipe = DistanceRecipe::compression(DistanceKind::Ncd, CompressorSpec::default());
        let (m, _) = compute_matrix(&docs, &recipe, 1).unwrap();
        assert!(m.get(0, 1) <= 0.15);
        assert_eq!(m.get(0, 0), m.get(0, 1));
        assert_eq!(m.get(1, 1), m.get(0, 1));
    }

    #[test]
    fn d_star_toy_pattern() {
        let docs = vec![doc("x", b"AAAA"), doc("y", b"CCCC"), doc("z", b"AAAA")];
        let recipe =
            DistanceRecipe::kmer(DistanceKind::DStar, WordSource::Contiguous(1)).with_variant(CondVariant::SetDiff);
        let (m, stats) = compute_matrix(&docs, &recipe, 2).unwrap();
        assert_eq!(m.values(), [0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0]);
        assert_eq!(
            (stats.profiles, stats.pair_evaluations, stats.compressor_calls),
            (3, 3, 0)
        );
    }

    #[test]
    fn compressor_call_accounting() {
        let docs = random_docs(5, 800, 3);
        for (policy, per_pair) in [(JointSizePolicy::MinOfBothOrders, 2), (JointSizePolicy::SingleOrder, 1)] {
            let recipe =
                DistanceRecipe::compression(DistanceKind::Ncd, CompressorSpec::default()).with_joint_policy(policy);
            let (_, s) = compute_matrix(&docs, &recipe, 3).unwrap();
            // C(x) and C(xx) per document, then the joint sizes per pair
            assert_eq!(s.compressor_calls, 5 + 5 + per_pair * 10);
            assert_eq!(s.pair_evaluations, 10);
            assert_eq!(s.self_evaluations, 5);
        }
        let cache = SizeCache::new(CompressorSpec::default().to_string());
        let ncd = DistanceRecipe::compression(DistanceKind::Ncd, CompressorSpec::default());
        let cdm = DistanceRecipe::compression(DistanceKind::Cdm, CompressorSpec::default());
        compute_matrix_with(&docs, &ncd, 2, &cache).unwrap();
        let (_, s) = compute_matrix_with(&docs, &cdm, 2, &cache).unwrap();
        assert_eq!(s.compressor_calls, 0);
        assert_eq!(s.cache_hits, 5 + 5 + 2 * 10);
    }

    #[test]
    fn output_independent_of_workers() {
        let docs = random_docs(7, 1500, 9);
        for recipe in [
            DistanceRecipe::compression(DistanceKind::Ncd, CompressorSpec::default()),
            DistanceRecipe::compression(DistanceKind::DsHat, CompressorSpec::default())
                .with_joint_policy(JointSizePolicy::SingleOrder),
            DistanceRecipe::compression(DistanceKind::BenedettoS, CompressorSpec::default()),
            DistanceRecipe::kmer(DistanceKind::DPrime, WordSource::Contiguous(5)).with_variant(CondVariant::Concat),
            DistanceRecipe::kmer(DistanceKind::DStar, WordSource::Spaced("11011".parse().unwrap())),
            DistanceRecipe::kmer(DistanceKind::FreqEuclidean, WordSource::Contiguous(3)),
        ] {
            let one = compute_matrix(&docs, &recipe, 1).unwrap();
            let many = compute_matrix(&docs, &recipe, 8).unwrap();
            assert_eq!(one, many, "{recipe}");
            assert_eq!(one.0.max_symmetry_gap(), 0.0, "{recipe}");
        }
    }

    #[test]
    fn benedetto_diagonal_is_zero() {
        let docs = random_docs(3, 4000, 5);
        let recipe = DistanceRecipe::compression(DistanceKind::BenedettoS, CompressorSpec::default());
        let (m, s) = compute_matrix(&docs, &recipe, 2).unwrap();
        assert_eq!(m.max_self_distance(), 0.0);
        assert_eq!(s.compressor_calls, 2 * 3 + 2 * 3);
    }

    #[test]
    fn failures_name_the_lowest_pair() {
        let docs = vec![
            doc("a", b"ACGTACGT"),
            doc("b", b"A"),
            doc("c", b"A"),
            doc("d", b"ACGTAC"),
        ];
        let recipe = DistanceRecipe::kmer(DistanceKind::DStar, WordSource::Contiguous(3));
        for workers in [1, 4] {
            match compute_matrix(&docs, &recipe, workers) {
                Err(Error::Pair { a, b, .. }) => assert_eq!((a.as_str(), b.as_str()), ("b", "b")),
                other => panic!("unexpected {other:?}"),
            }
        }
        let short = vec![doc("a", b"ACGTACGTAAAA"), doc("b", b"ACG")];
        let recipe = DistanceRecipe::compression(DistanceKind::BenedettoS, CompressorSpec::default());
        let err = compute_matrix(&short, &recipe, 1).unwrap_err();
        assert!(matches!(err, Error::Pair { .. }));
        assert_eq!(err.exit_code(), 4);
    }

    #[test]
    fn input_checks() {
        let recipe = DistanceRecipe::kmer(DistanceKind::DStar, WordSource::Contiguous(1));
        assert!(matches!(
            compute_matrix(&[doc("a", b"A")], &recipe, 1),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            compute_matrix(&[doc("a", b"A"), doc("a", b"C")], &recipe, 1),
            Err(Error::Input(_))
        ));
        let bad = DistanceRecipe::compression(
            DistanceKind::Ncd,
            CompressorSpec::External {
                command: "no-such-tool-q".into(),
            },
        );
        let err = compute_matrix(&[doc("a", b"A"), doc("b", b"C")], &bad, 1).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn pair_reports() {
        let x = doc("x", b"AAAA");
        let y = doc("y", b"CCCC");
        let recipe = DistanceRecipe::kmer(DistanceKind::DStar, WordSource::Contiguous(1));
        let r = evaluate_pair(&x, &y, &recipe).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.exact.as_deref(), Some("1"));
        let c = r.counts.unwrap();
        assert_eq!((c.n_x, c.n_y, c.n_xy, c.n_x_given_y), (1, 1, 2, 1));
        let recipe = DistanceRecipe::compression(DistanceKind::Ncd, CompressorSpec::default());
        let r = evaluate_pair(&x, &x, &recipe).unwrap();
        assert!(r.sizes.is_some());
        assert!(r.exact.unwrap().contains('/'));
    }
}
