//! Exhaustive checks of coding-theoretic conditions over `{0,1}^n` for
//! small `n`.
//!
//! Binary strings are byte slices holding 0 and 1.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::{Rational, Result};

/// Largest `n` for which `{0,1}^n` is enumerated.
pub const MAX_ENUMERATION_BITS: usize = 20;

fn ceil_log2(n: u64) -> u64 {
    if n <= 1 {
        0
    } else {
        64 - u64::from((n - 1).leading_zeros())
    }
}

/// Length in bits of the prefix code for `(n, d, i_1, ..., i_d)`, with all
/// logarithms rounded up.
pub fn hamming_code_length(n: u64, d: u64) -> Result<u64> {
    if n < 4 {
        return Err(Error::Contract(format!("hamming code needs n >= 4, got {n}")));
    }
    if d > n {
        return Err(Error::Contract(format!("hamming distance {d} exceeds length {n}")));
    }
    let l = ceil_log2(n);
    Ok(2 * l + 4 * ceil_log2(l) + 2 + d * l)
}

pub fn hamming(x: &[u8], y: &[u8]) -> u64 {
    x.iter().zip(y).filter(|(a, b)| a != b).count() as u64
}

/// `hamming(x, y) / |x|`.
pub fn hamming_fraction(x: &[u8], y: &[u8]) -> Rational {
    if x.is_empty() {
        return Rational::zero();
    }
    Rational::new(hamming(x, y) as i128, x.len() as i128)
}

/// Parses a string of `0` and `1` characters.
pub fn parse_bits(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::Contract(format!("`{c}` is not a binary digit"))),
        })
        .collect()
}

pub fn format_bits(x: &[u8]) -> String {
    x.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

fn check_budget(n: usize) -> Result<()> {
    if n > MAX_ENUMERATION_BITS {
        return Err(Error::BudgetExceeded {
            requested: n,
            max: MAX_ENUMERATION_BITS,
        });
    }
    Ok(())
}

fn check_binary(x: &[u8]) -> Result<()> {
    if x.iter().any(|&b| b > 1) {
        return Err(Error::Contract("binary strings hold only 0 and 1".into()));
    }
    Ok(())
}

/// Calls `f` on every `y` in `{0,1}^n`, in lexicographic order.
fn for_each_string(n: usize, mut f: impl FnMut(&[u8])) {
    let mut y = alloc::vec![0u8; n];
    for v in 0u64..(1 << n) {
        for (i, b) in y.iter_mut().enumerate() {
            *b = (v >> (n - 1 - i) & 1) as u8;
        }
        f(&y);
    }
}

/// Code length functions with a name, for reports and the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedCode {
    /// `hamming_code_length(|x|, hamming(x, y))`.
    Hamming,
    /// The same length for every `y`.
    Constant(u64),
}

impl NamedCode {
    pub fn length(&self, x: &[u8], y: &[u8]) -> Result<u64> {
        match *self {
            NamedCode::Hamming => hamming_code_length(x.len() as u64, hamming(x, y)),
            NamedCode::Constant(c) => Ok(c),
        }
    }
}

impl fmt::Display for NamedCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedCode::Hamming => f.write_str("hamming"),
            NamedCode::Constant(c) => write!(f, "constant:{c}"),
        }
    }
}

impl FromStr for NamedCode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "hamming" {
            return Ok(NamedCode::Hamming);
        }
        s.strip_prefix("constant:")
            .and_then(|c| c.parse().ok())
            .map(NamedCode::Constant)
            .ok_or_else(|| Error::Contract(format!("unknown code `{s}`; expected hamming or constant:N")))
    }
}

/// `sum over y in {0,1}^|x| of 2^-code(x, y)`, exactly.
pub fn kraft_sum<F>(code: F, x: &[u8]) -> Result<BigRational>
where
    F: Fn(&[u8], &[u8]) -> Result<u64>,
{
    check_budget(x.len())?;
    check_binary(x)?;
    let mut histogram: BTreeMap<u64, u64> = BTreeMap::new();
    let mut failure = None;
    for_each_string(x.len(), |y| {
        if failure.is_some() {
            return;
        }
        match code(x, y) {
            Ok(l) => *histogram.entry(l).or_default() += 1,
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let mut sum = BigRational::zero();
    for (len, count) in histogram {
        let denom = BigInt::one() << len;
        sum += BigRational::new(BigInt::from(count), denom);
    }
    Ok(sum)
}

pub fn kraft_holds(sum: &BigRational) -> bool {
    *sum <= BigRational::one()
}

pub fn big_rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Distances with a name, for reports and the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedDistance {
    /// `hamming(x, y) / |x|`.
    HammingFraction,
    /// 0 if `y == x`, 1 otherwise.
    Identity,
}

impl NamedDistance {
    pub fn distance(&self, x: &[u8], y: &[u8]) -> Rational {
        match self {
            NamedDistance::HammingFraction => hamming_fraction(x, y),
            NamedDistance::Identity => {
                if x == y {
                    Rational::zero()
                } else {
                    Rational::one()
                }
            }
        }
    }
}

impl fmt::Display for NamedDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NamedDistance::HammingFraction => "hamming-fraction",
            NamedDistance::Identity => "identity",
        })
    }
}

impl FromStr for NamedDistance {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hamming-fraction" | "hamming" => Ok(NamedDistance::HammingFraction),
            "identity" => Ok(NamedDistance::Identity),
            _ => Err(Error::Contract(format!(
                "unknown distance `{s}`; expected hamming-fraction or identity"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityRow {
    pub e: Rational,
    pub count: u64,
    /// `2^(e*kappa) + 1`, for display only; `pass` is decided exactly.
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityCheckResult {
    pub x: Vec<u8>,
    pub kappa: Rational,
    /// Sorted by `e`.
    pub rows: Vec<DensityRow>,
}

impl DensityCheckResult {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// `count < 2^(p/q) + 1`, i.e. `(count - 1)^q < 2^p`, for `p/q >= 0`.
fn below_bound(count: u64, exponent: &Rational) -> bool {
    if count <= 1 {
        return true;
    }
    let p = *exponent.numer() as u64;
    let q = *exponent.denom() as u32;
    BigUint::from(count - 1).pow(q) < (BigUint::one() << p)
}

/// Counts `|{y : dist(x, y) <= e}|` over `{0,1}^|x|` for each `e` in the
/// grid and compares each count to `2^(e*kappa) + 1`.
pub fn density_check<F>(dist: F, x: &[u8], kappa: Rational, grid: &[Rational]) -> Result<DensityCheckResult>
where
    F: Fn(&[u8], &[u8]) -> Rational,
{
    check_budget(x.len())?;
    check_binary(x)?;
    if kappa <= Rational::zero() {
        return Err(Error::Contract("kappa must be positive".into()));
    }
    let mut grid: Vec<Rational> = grid.to_vec();
    if grid.iter().any(|e| *e < Rational::zero() || *e > Rational::one()) {
        return Err(Error::Contract("thresholds must lie in [0, 1]".into()));
    }
    grid.sort();
    grid.dedup();
    let mut counts = alloc::vec![0u64; grid.len()];
    for_each_string(x.len(), |y| {
        let d = dist(x, y);
        let first = grid.partition_point(|e| *e < d);
        for c in &mut counts[first..] {
            *c += 1;
        }
    });
    let rows = grid
        .into_iter()
        .zip(counts)
        .map(|(e, count)| {
            let exponent = e * kappa;
            DensityRow {
                bound: libm::exp2(crate::rational_to_f64(&exponent)) + 1.0,
                pass: below_bound(count, &exponent),
                e,
                count,
            }
        })
        .collect();
    Ok(DensityCheckResult {
        x: x.to_vec(),
        kappa,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    fn binomial(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn hamming_code_lengths() {
        assert_eq!(hamming_code_length(8, 0), Ok(16));
        assert_eq!(hamming_code_length(8, 2), Ok(22));
        assert_eq!(hamming_code_length(256, 1), Ok(38));
        assert!(hamming_code_length(8, 9).is_err());
        assert!(hamming_code_length(3, 0).is_err());
    }

    #[test]
    fn kraft_matches_binomial_closed_form() {
        let x = vec![0u8; 8];
        let sum = kraft_sum(|x, y| NamedCode::Hamming.length(x, y), &x).unwrap();
        let nine_eighths = BigRational::new(BigInt::from(9), BigInt::from(8));
        let expected = BigRational::new(BigInt::one(), BigInt::one() << 16u32) * nine_eighths.pow(8);
        assert_eq!(sum, expected);
        assert!(kraft_holds(&sum));
        assert!((big_rational_to_f64(&sum) - 3.915076e-5).abs() < 1e-11);
    }

    #[test]
    fn kraft_below_one_for_small_n() {
        for n in 4..=12u64 {
            let x: Vec<u8> = (0..n).map(|i| (i % 3 == 0) as u8).collect();
            let sum = kraft_sum(|x, y| NamedCode::Hamming.length(x, y), &x).unwrap();
            // every y at distance d has the same length, so the sum is a binomial sum
            let l = ceil_log2(n);
            let oracle = (0..=n).fold(BigRational::zero(), |acc, d| {
                acc + BigRational::new(
                    BigInt::from(binomial(n, d)),
                    BigInt::one() << (2 * l + 4 * ceil_log2(l) + 2 + d * l),
                )
            });
            assert_eq!(sum, oracle);
            assert!(sum < BigRational::one(), "n={n}");
        }
    }

    #[test]
    fn kraft_boundaries() {
        let zero = kraft_sum(|_, _| Ok(0), &[0, 1]).unwrap();
        assert_eq!(zero, BigRational::from_integer(BigInt::from(4)));
        assert!(!kraft_holds(&zero));
        let complete = kraft_sum(|x, _| Ok(x.len() as u64), &[1, 0, 1, 1, 0]).unwrap();
        assert_eq!(complete, BigRational::one());
        assert!(kraft_holds(&complete));
    }

    #[test]
    fn enumeration_budget_is_enforced() {
        let x = vec![0u8; 21];
        assert_eq!(
            kraft_sum(|_, _| Ok(1), &x),
            Err(Error::BudgetExceeded { requested: 21, max: 20 })
        );
        assert!(density_check(hamming_fraction, &x, Rational::from_integer(21), &[Rational::one()]).is_err());
    }

    #[test]
    fn density_hamming_fraction_fails() {
        let x = vec![0u8; 8];
        let r = density_check(hamming_fraction, &x, Rational::from_integer(8), &[Rational::new(1, 4)]).unwrap();
        assert_eq!(r.rows[0].count, 37);
        assert_eq!(r.rows[0].bound, 5.0);
        assert!(!r.rows[0].pass);
    }

    #[test]
    fn density_identity_passes_at_zero() {
        let x = parse_bits("10110010").unwrap();
        let d = |a: &[u8], b: &[u8]| NamedDistance::Identity.distance(a, b);
        let r = density_check(d, &x, Rational::from_integer(8), &[Rational::zero()]).unwrap();
        assert_eq!(r.rows[0].count, 1);
        assert_eq!(r.rows[0].bound, 2.0);
        assert!(r.rows[0].pass);
    }

    #[test]
    fn density_at_one_passes_iff_kappa_covers_length() {
        let x = vec![1u8; 6];
        for kappa in 4..9 {
            let r = density_check(hamming_fraction, &x, Rational::from_integer(kappa), &[Rational::one()]).unwrap();
            assert_eq!(r.rows[0].count, 64);
            assert_eq!(r.rows[0].pass, kappa >= 6, "kappa={kappa}");
        }
    }

    #[test]
    fn bound_comparison_is_exact_for_fractional_exponents() {
        // 2^(3/2) = 2.828..., so count - 1 = 2 passes and 3 fails
        let e = Rational::new(3, 2);
        assert!(below_bound(3, &e));
        assert!(!below_bound(4, &e));
        assert!(below_bound(0, &Rational::zero()));
        assert!(!below_bound(2, &Rational::zero()));
    }

    #[test]
    fn bits_parse_and_format() {
        assert_eq!(parse_bits("0110").unwrap(), vec![0, 1, 1, 0]);
        assert_eq!(format_bits(&[1, 0, 0]), "100");
        assert!(parse_bits("012").is_err());
        assert_eq!("constant:7".parse::<NamedCode>(), Ok(NamedCode::Constant(7)));
        assert_eq!(NamedCode::Hamming.to_string(), "hamming");
    }

    proptest! {
        #[test]
        fn density_counts_are_binomial_tails_and_monotone(
            x in proptest::collection::vec(0u8..2, 4..12),
            raw in proptest::collection::vec((0i128..=20, 1i128..=20), 1..6),
        ) {
            let n = x.len() as u64;
            let grid: Vec<Rational> = raw
                .into_iter()
                .map(|(a, b)| Rational::new(a.min(b), b))
                .collect();
            let r = density_check(hamming_fraction, &x, Rational::from_integer(n as i128), &grid).unwrap();
            let mut prev = 0;
            for row in &r.rows {
                prop_assert!(row.count >= prev);
                prev = row.count;
                let tail: u64 = (0..=n)
                    .filter(|&d| Rational::new(d as i128, n as i128) <= row.e)
                    .map(|d| binomial(n, d))
                    .sum();
                prop_assert_eq!(row.count, tail);
            }
        }
    }
}
