//! Pairwise distance formulas over compressed sizes.
//!
//! The size-level functions ([`ncd`], [`ds_hat`], [`cdm`], [`benedetto_s`],
//! [`benedetto_symmetric_sizes`]) take integer bit counts and return exact
//! rationals; rounding only happens when a [`PairDistance`] is presented.
//! Real compressors are not ideal, so values outside the textbook ranges
//! (an NCD slightly above 1, a negative asymmetric `s`) are returned as-is.

use crate::compressor::{compressed_size, concat_size, Compressor};
use crate::document::Document;
use crate::error::Error;
use crate::matrix::DistanceMatrix;
use crate::{rational_to_f64, Rational, Result};

/// How the joint size C(x,y) is obtained from concatenations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum JointSizePolicy {
    /// C(xy) only.
    SingleOrder,
    /// min(C(xy), C(yx)); makes every formula exactly symmetric.
    #[default]
    MinOfBothOrders,
}

/// Compressed sizes of `x`, `y` and their concatenation(s), in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SizeTriple {
    pub cx: u64,
    pub cy: u64,
    pub cxy: u64,
    pub cyx: Option<u64>,
}

impl SizeTriple {
    pub fn new(cx: u64, cy: u64, cxy: u64) -> Self {
        SizeTriple { cx, cy, cxy, cyx: None }
    }

    pub fn with_reverse(mut self, cyx: u64) -> Self {
        self.cyx = Some(cyx);
        self
    }

    /// The joint size under whichever policy produced this triple.
    pub fn joint(&self) -> u64 {
        match self.cyx {
            Some(cyx) => self.cxy.min(cyx),
            None => self.cxy,
        }
    }

    pub fn swapped(&self) -> Self {
        match self.cyx {
            Some(cyx) => SizeTriple::new(self.cy, self.cx, cyx).with_reverse(self.cxy),
            None => SizeTriple::new(self.cy, self.cx, self.cxy),
        }
    }
}

fn ratio(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

/// Normalized compression distance:
/// `(C(x,y) - min(C(x), C(y))) / max(C(x), C(y))`.
pub fn ncd(s: &SizeTriple) -> Result<Rational> {
    let max = s.cx.max(s.cy) as i128;
    if max == 0 {
        return Err(Error::Degenerate("ncd: max(C(x), C(y)) = 0"));
    }
    let min = s.cx.min(s.cy) as i128;
    Ok(ratio(s.joint() as i128 - min, max))
}

/// Sum-normalized distance with conditional sizes replaced by
/// `C(x|y) ~ C(xy) - C(y)`: `(2 C(x,y) - C(x) - C(y)) / C(x,y)`.
pub fn ds_hat(s: &SizeTriple) -> Result<Rational> {
    let joint = s.joint() as i128;
    if joint == 0 {
        return Err(Error::Degenerate("ds_hat: C(x,y) = 0"));
    }
    Ok(ratio(2 * joint - s.cx as i128 - s.cy as i128, joint))
}

/// Compression-based dissimilarity: `C(x,y) / (C(x) + C(y))`.
pub fn cdm(s: &SizeTriple) -> Result<Rational> {
    let den = s.cx as i128 + s.cy as i128;
    if den == 0 {
        return Err(Error::Degenerate("cdm: C(x) + C(y) = 0"));
    }
    Ok(ratio(s.joint() as i128, den))
}

/// Asymmetric relative-entropy style distance
/// `([C(x y') - C(x)] - [C(y y') - C(y)]) / |y'|`, where `y'` is a short
/// fragment from the same source as `y`. May be negative.
pub fn benedetto_s(c_xyp: u64, c_x: u64, c_yyp: u64, c_y: u64, len_yp: u64) -> Result<Rational> {
    if len_yp == 0 {
        return Err(Error::Degenerate("benedetto_s: empty fragment"));
    }
    let cross = c_xyp as i128 - c_x as i128;
    let own = c_yyp as i128 - c_y as i128;
    Ok(ratio(cross - own, len_yp as i128))
}

/// How a document is split into a reference body and a short fragment.
///
/// The fragment is the first `min(len / divisor, max_fragment)` bytes; the
/// body is everything after it, so the fragment never occurs verbatim in the
/// body it is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FragmentPolicy {
    pub divisor: usize,
    pub max_fragment: usize,
}

impl Default for FragmentPolicy {
    fn default() -> Self {
        FragmentPolicy {
            divisor: 10,
            max_fragment: 1024,
        }
    }
}

impl FragmentPolicy {
    pub fn fragment_len(&self, len: usize) -> usize {
        (len / self.divisor.max(1)).min(self.max_fragment)
    }

    /// Returns `(body, fragment)`.
    pub fn split<'a>(&self, bytes: &'a [u8]) -> (&'a [u8], &'a [u8]) {
        let f = self.fragment_len(bytes.len());
        (&bytes[f..], &bytes[..f])
    }
}

/// Sizes needed for the symmetric fragment distance of one pair.
/// `x` and `y` here denote the document bodies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FragmentSizes {
    pub c_x: u64,
    pub c_y: u64,
    /// C(x x')
    pub c_xxp: u64,
    /// C(y y')
    pub c_yyp: u64,
    /// C(x y')
    pub c_xyp: u64,
    /// C(y x')
    pub c_yxp: u64,
    pub len_xp: u64,
    pub len_yp: u64,
}

/// `S(x,y) = s(x,y) |y'| / [C(yy') - C(y)] + s(y,x) |x'| / [C(xx') - C(x)]`.
///
/// Symmetric by construction. The labels are only used to name the pair in
/// a singularity error.
pub fn benedetto_symmetric_sizes(sz: &FragmentSizes, labels: (&str, &str)) -> Result<Rational> {
    let own_y = sz.c_yyp as i128 - sz.c_y as i128;
    let own_x = sz.c_xxp as i128 - sz.c_x as i128;
    if own_y == 0 {
        return Err(Error::Singularity(labels.1.into(), labels.0.into()));
    }
    if own_x == 0 {
        return Err(Error::Singularity(labels.0.into(), labels.1.into()));
    }
    let s_xy = benedetto_s(sz.c_xyp, sz.c_x, sz.c_yyp, sz.c_y, sz.len_yp)?;
    let s_yx = benedetto_s(sz.c_yxp, sz.c_y, sz.c_xxp, sz.c_x, sz.len_xp)?;
    Ok(s_xy * ratio(sz.len_yp as i128, own_y) + s_yx * ratio(sz.len_xp as i128, own_x))
}

/// Per-document sizes for the fragment distances: `(C(body), C(body fragment), |fragment|)`.
pub fn fragment_profile<C: Compressor + ?Sized>(c: &C, doc: &[u8], policy: FragmentPolicy) -> Result<(u64, u64, u64)> {
    let (body, frag) = policy.split(doc);
    Ok((
        compressed_size(c, body)?.bits,
        concat_size(c, body, frag)?.bits,
        frag.len() as u64,
    ))
}

/// Measures everything [`benedetto_symmetric_sizes`] needs for one pair.
pub fn measure_fragment_sizes<C: Compressor + ?Sized>(
    c: &C,
    x: &Document,
    y: &Document,
    policy: FragmentPolicy,
) -> Result<FragmentSizes> {
    for d in [x, y] {
        if policy.fragment_len(d.len()) == 0 || policy.fragment_len(d.len()) >= d.len() {
            return Err(Error::Contract(alloc::format!(
                "document `{}` ({} bytes) is too short for a fragment",
                d.id,
                d.len()
            )));
        }
    }
    let (xb, xf) = policy.split(&x.bytes);
    let (yb, yf) = policy.split(&y.bytes);
    let (c_x, c_xxp, len_xp) = fragment_profile(c, &x.bytes, policy)?;
    let (c_y, c_yyp, len_yp) = fragment_profile(c, &y.bytes, policy)?;
    Ok(FragmentSizes {
        c_x,
        c_y,
        c_xxp,
        c_yyp,
        c_xyp: concat_size(c, xb, yf)?.bits,
        c_yxp: concat_size(c, yb, xf)?.bits,
        len_xp,
        len_yp,
    })
}

/// Symmetric fragment distance between two documents.
pub fn benedetto_symmetric<C: Compressor + ?Sized>(
    x: &Document,
    y: &Document,
    policy: FragmentPolicy,
    c: &C,
) -> Result<PairDistance> {
    let sizes = measure_fragment_sizes(c, x, y, policy)?;
    let exact = benedetto_symmetric_sizes(&sizes, (&x.id, &y.id))?;
    Ok(PairDistance {
        value: rational_to_f64(&exact),
        exact: Some(exact),
        formula: Formula::BenedettoSymmetric,
        sizes: None,
        fragment_sizes: Some(sizes),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Formula {
    Ncd,
    DsHat,
    Cdm,
    BenedettoAsymmetric,
    BenedettoSymmetric,
    HammingCode,
}

/// A computed distance with the sizes it was computed from.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PairDistance {
    pub value: f64,
    #[cfg_attr(feature = "serde", serde(skip))]
    pub exact: Option<Rational>,
    pub formula: Formula,
    pub sizes: Option<SizeTriple>,
    pub fragment_sizes: Option<FragmentSizes>,
}

impl PairDistance {
    pub fn from_sizes(formula: Formula, sizes: SizeTriple) -> Result<Self> {
        let exact = match formula {
            Formula::Ncd => ncd(&sizes)?,
            Formula::DsHat => ds_hat(&sizes)?,
            Formula::Cdm => cdm(&sizes)?,
            other => {
                return Err(Error::Contract(alloc::format!(
                    "{other:?} is not computed from a size triple"
                )))
            }
        };
        Ok(PairDistance {
            value: rational_to_f64(&exact),
            exact: Some(exact),
            formula,
            sizes: Some(sizes),
            fragment_sizes: None,
        })
    }
}

/// C(x), C(y), C(xy) and, under [`JointSizePolicy::MinOfBothOrders`], C(yx).
pub fn measure_sizes<C: Compressor + ?Sized>(c: &C, x: &[u8], y: &[u8], policy: JointSizePolicy) -> Result<SizeTriple> {
    let triple = SizeTriple::new(
        compressed_size(c, x)?.bits,
        compressed_size(c, y)?.bits,
        concat_size(c, x, y)?.bits,
    );
    Ok(match policy {
        JointSizePolicy::SingleOrder => triple,
        JointSizePolicy::MinOfBothOrders => triple.with_reverse(concat_size(c, y, x)?.bits),
    })
}

/// Compression distance between two documents with provenance sizes.
pub fn compression_pair<C: Compressor + ?Sized>(
    x: &[u8],
    y: &[u8],
    c: &C,
    policy: JointSizePolicy,
    formula: Formula,
) -> Result<PairDistance> {
    PairDistance::from_sizes(formula, measure_sizes(c, x, y, policy)?)
}

pub fn ncd_pair<C: Compressor + ?Sized>(
    x: &Document,
    y: &Document,
    c: &C,
    policy: JointSizePolicy,
) -> Result<PairDistance> {
    compression_pair(&x.bytes, &y.bytes, c, policy, Formula::Ncd)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Triangularized {
    pub matrix: DistanceMatrix,
    pub converged: bool,
    pub rounds: usize,
}

/// Repairs triangle-inequality violations by repeatedly replacing
/// `m[x][y]` with `min_w m[x][w] + m[w][y]` when that is smaller.
///
/// One round sweeps every unordered pair once, updating in place. The
/// result is converged when a full round changes nothing. `max_rounds`
/// defaults to the matrix dimension.
pub fn procrustes_triangularize(m: &DistanceMatrix, max_rounds: Option<usize>) -> Result<Triangularized> {
    let n = m.len();
    if m.max_symmetry_gap() != 0.0 {
        return Err(Error::Contract(
            "procrustes triangularization needs a symmetric matrix; symmetrize it first".into(),
        ));
    }
    let max_rounds = max_rounds.unwrap_or(n).max(1);
    let mut out = m.clone();
    let mut rounds = 0;
    let mut converged = false;
    while rounds < max_rounds {
        rounds += 1;
        let mut changed = false;
        for x in 0..n {
            for y in x + 1..n {
                let best = (0..n)
                    .filter(|&w| w != x && w != y)
                    .map(|w| out.get(x, w) + out.get(w, y))
                    .fold(f64::INFINITY, f64::min);
                if out.get(x, y) > best {
                    out.set(x, y, best);
                    out.set(y, x, best);
                    changed = true;
                }
            }
        }
        if !changed {
            converged = true;
            break;
        }
    }
    Ok(Triangularized {
        matrix: out,
        converged,
        rounds,
    })
}
