//! Greedy LZ77 reference compressor.
//!
//! Stream layout (all sizes are reported as 8 × output bytes):
//!
//! ```text
//! header   8 bytes   magic 0xB7, then the input length as 56-bit little endian
//! tokens   bits      literal: 0 b7..b0
//!                    match:   1 gamma(distance) gamma(length - MIN_MATCH + 1)
//! padding  0..7 bits zero bits up to the next byte boundary
//! ```
//!
//! `gamma` is the Elias gamma code (`v >= 1`, `2*floor(log2 v) + 1` bits).
//! The parser is greedy: at each position it takes the candidate match with
//! the largest saving over coding the same bytes as literals, or a literal
//! when no candidate saves anything. Candidates come from a hash chain over
//! 4-byte prefixes, restricted to the sliding window.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::Result;

pub const HEADER_BYTES: usize = 8;
pub const HEADER_BITS: u64 = HEADER_BYTES as u64 * 8;
pub const MAGIC: u8 = 0xB7;
pub const MIN_MATCH: usize = 4;
pub const DEFAULT_WINDOW: usize = 64 * 1024;
pub const MIN_WINDOW: usize = 1024;
pub const MAX_WINDOW: usize = 1 << 30;
pub const DEFAULT_LEVEL: u8 = 6;
pub const MAX_LEVEL: u8 = 9;

const LITERAL_BITS: u64 = 9;
const HASH_BITS: u32 = 16;
const NO_POS: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LzCompressor {
    window: usize,
    level: u8,
}

impl Default for LzCompressor {
    fn default() -> Self {
        LzCompressor {
            window: DEFAULT_WINDOW,
            level: DEFAULT_LEVEL,
        }
    }
}

impl LzCompressor {
    pub fn new(window: usize, level: u8) -> Result<Self> {
        if !(MIN_WINDOW..=MAX_WINDOW).contains(&window) {
            return Err(Error::InvalidCompressor(alloc::format!(
                "builtin-lz window {window} outside [{MIN_WINDOW}, {MAX_WINDOW}]"
            )));
        }
        if !(1..=MAX_LEVEL).contains(&level) {
            return Err(Error::InvalidCompressor(alloc::format!(
                "builtin-lz level {level} outside [1, {MAX_LEVEL}]"
            )));
        }
        Ok(LzCompressor { window, level })
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn level(&self) -> u8 {
        self.level
    }

    fn chain_depth(&self) -> usize {
        1 << (self.level as usize + 2)
    }

    /// Compresses `input` into the stream described in the module docs.
    pub fn compress(&self, input: &[u8]) -> Vec<u8> {
        let mut out = BitWriter::with_capacity(HEADER_BYTES + input.len() + input.len() / 8);
        out.bytes.push(MAGIC);
        out.bytes
            .extend_from_slice(&(input.len() as u64).to_le_bytes()[..HEADER_BYTES - 1]);
        for token in self.parse(input) {
            match token {
                Token::Literal(b) => {
                    out.put_bit(false);
                    out.put_bits(b as u64, 8);
                }
                Token::Match { distance, length } => {
                    out.put_bit(true);
                    out.put_gamma(distance as u64);
                    out.put_gamma((length - MIN_MATCH + 1) as u64);
                }
            }
        }
        out.finish()
    }

    /// Size of [`LzCompressor::compress`] output in bits, without building it.
    pub fn compressed_bits(&self, input: &[u8]) -> u64 {
        let body: u64 = self
            .parse(input)
            .map(|t| match t {
                Token::Literal(_) => LITERAL_BITS,
                Token::Match { distance, length } => match_bits(distance, length),
            })
            .sum();
        HEADER_BITS + body.div_ceil(8) * 8
    }

    fn parse<'a>(&self, input: &'a [u8]) -> Parser<'a> {
        Parser {
            input,
            pos: 0,
            window: self.window,
            depth: self.chain_depth(),
            head: vec![NO_POS; 1 << HASH_BITS],
            prev: vec![NO_POS; input.len()],
        }
    }
}

fn gamma_bits(v: u64) -> u64 {
    debug_assert!(v >= 1);
    2 * (63 - v.leading_zeros() as u64) + 1
}

fn match_bits(distance: usize, length: usize) -> u64 {
    1 + gamma_bits(distance as u64) + gamma_bits((length - MIN_MATCH + 1) as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Token {
    Literal(u8),
    Match { distance: usize, length: usize },
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
    window: usize,
    depth: usize,
    head: Vec<u32>,
    prev: Vec<u32>,
}

impl Parser<'_> {
    fn hash(&self, at: usize) -> usize {
        let w = u32::from_le_bytes([
            self.input[at],
            self.input[at + 1],
            self.input[at + 2],
            self.input[at + 3],
        ]);
        (w.wrapping_mul(2_654_435_761) >> (32 - HASH_BITS)) as usize
    }

    fn insert(&mut self, at: usize) {
        if at + MIN_MATCH <= self.input.len() {
            let h = self.hash(at);
            self.prev[at] = self.head[h];
            self.head[h] = at as u32;
        }
    }

    fn best_match(&self) -> Option<(usize, usize)> {
        let i = self.pos;
        let remaining = self.input.len() - i;
        if remaining < MIN_MATCH {
            return None;
        }
        let mut cand = self.head[self.hash(i)];
        let mut best: Option<(usize, usize)> = None;
        let mut best_saving = 0i64;
        let mut steps = 0;
        while cand != NO_POS && steps < self.depth {
            let p = cand as usize;
            let distance = i - p;
            if distance > self.window {
                break;
            }
            let length = common_prefix(&self.input[p..], &self.input[i..], remaining);
            if length >= MIN_MATCH {
                let saving = (length as u64 * LITERAL_BITS) as i64 - match_bits(distance, length) as i64;
                if saving > best_saving {
                    best_saving = saving;
                    best = Some((distance, length));
                }
                if length == remaining {
                    break;
                }
            }
            cand = self.prev[p];
            steps += 1;
        }
        best
    }
}

impl Iterator for Parser<'_> {
    type Item = Token;

    fn next(&mut self) -> Option<Token> {
        if self.pos >= self.input.len() {
            return None;
        }
        let token = match self.best_match() {
            Some((distance, length)) => {
                for at in self.pos..self.pos + length {
                    self.insert(at);
                }
                self.pos += length;
                Token::Match { distance, length }
            }
            None => {
                let b = self.input[self.pos];
                self.insert(self.pos);
                self.pos += 1;
                Token::Literal(b)
            }
        };
        Some(token)
    }
}

fn common_prefix(a: &[u8], b: &[u8], limit: usize) -> usize {
    let limit = limit.min(a.len()).min(b.len());
    let mut n = 0;
    while n + 8 <= limit {
        let x = u64::from_le_bytes(a[n..n + 8].try_into().unwrap());
        let y = u64::from_le_bytes(b[n..n + 8].try_into().unwrap());
        let diff = x ^ y;
        if diff != 0 {
            return n + (diff.trailing_zeros() / 8) as usize;
        }
        n += 8;
    }
    while n < limit && a[n] == b[n] {
        n += 1;
    }
    n
}

struct BitWriter {
    bytes: Vec<u8>,
    acc: u8,
    nbits: u8,
}

impl BitWriter {
    fn with_capacity(cap: usize) -> Self {
        BitWriter {
            bytes: Vec::with_capacity(cap),
            acc: 0,
            nbits: 0,
        }
    }

    fn put_bit(&mut self, bit: bool) {
        self.acc = (self.acc << 1) | bit as u8;
        self.nbits += 1;
        if self.nbits == 8 {
            self.bytes.push(self.acc);
            self.acc = 0;
            self.nbits = 0;
        }
    }

    fn put_bits(&mut self, value: u64, count: u32) {
        for shift in (0..count).rev() {
            self.put_bit((value >> shift) & 1 == 1);
        }
    }

    fn put_gamma(&mut self, v: u64) {
        let n = 63 - v.leading_zeros();
        for _ in 0..n {
            self.put_bit(false);
        }
        self.put_bits(v, n + 1);
    }

    fn finish(mut self) -> Vec<u8> {
        if self.nbits > 0 {
            self.bytes.push(self.acc << (8 - self.nbits));
        }
        self.bytes
    }
}
