use std::fmt;

use crate::error::{Error, Result};

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Colex position of the pair `{i, j}`.
pub fn pair_index(i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    j * (j - 1) / 2 + i
}

/// A graph on `[0, n)` as a bit vector over pairs in colex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphVector {
    n: usize,
    bits: Vec<u64>,
}

impl GraphVector {
    pub fn empty(n: usize) -> Self {
        GraphVector {
            n,
            bits: vec![0; pair_count(n).div_ceil(64)],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for b in 0..pair_count(n) {
            g.bits[b / 64] |= 1 << (b % 64);
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(i, j) in edges {
            if i == j || i >= n || j >= n {
                return Err(Error::pre(format!("({i}, {j}) is not a pair in [0, {n})")));
            }
            g.toggle(i, j);
        }
        Ok(g)
    }

    /// The graph whose bits are the low `C(n, 2)` bits of `index`.
    pub fn from_index(n: usize, index: u64) -> Self {
        let mut g = Self::empty(n);
        if let Some(w) = g.bits.first_mut() {
            let len = pair_count(n);
            *w = if len >= 64 { index } else { index & ((1 << len) - 1) };
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        pair_count(self.n)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.bits
    }

    /// Index into a dense table; needs at most 64 pairs.
    pub fn index(&self) -> u64 {
        debug_assert!(self.len() <= 64);
        self.bits.first().copied().unwrap_or(0)
    }

    pub fn bit(&self, b: usize) -> bool {
        self.bits[b / 64] >> (b % 64) & 1 == 1
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.bit(pair_index(i, j))
    }

    pub fn toggle(&mut self, i: usize, j: usize) {
        let b = pair_index(i, j);
        self.bits[b / 64] ^= 1 << (b % 64);
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 1..self.n {
            for i in 0..j {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn xor(&self, other: &GraphVector) -> GraphVector {
        GraphVector {
            n: self.n,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect(),
        }
    }

    /// Parity of `|x ∩ y|`, the character `x^T y`.
    pub fn dot(&self, other: &GraphVector) -> bool {
        self.bits
            .iter()
            .zip(&other.bits)
            .fold(0, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// `n=<n>:` followed by the bytes of the bit vector in little-endian
    /// order, as lowercase hex.
    pub fn to_hex(&self) -> String {
        let bytes = self.len().div_ceil(8);
        let hex = hex::encode(
            (0..bytes)
                .map(|b| (self.bits[b / 8] >> (8 * (b % 8))) as u8)
                .collect::<Vec<u8>>(),
        );
        format!("n={}:{}", self.n, hex)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let (head, body) = s
            .split_once(':')
            .ok_or_else(|| Error::parse(format!("graph vector {s:?} lacks the n=<n>: prefix")))?;
        let n: usize = head
            .strip_prefix("n=")
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| Error::parse(format!("bad graph vector prefix {head:?}")))?;
        let bytes = hex::decode(body).map_err(|e| Error::parse(format!("bad hex: {e}")))?;
        let mut g = Self::empty(n);
        if bytes.len() != g.len().div_ceil(8) {
            return Err(Error::parse(format!(
                "expected {} bytes for n = {n}, got {}",
                g.len().div_ceil(8),
                bytes.len()
            )));
        }
        for (b, &byte) in bytes.iter().enumerate() {
            g.bits[b / 8] |= (byte as u64) << (8 * (b % 8));
        }
        if g.bits.iter().enumerate().any(|(w, &word)| {
            (0..64).any(|k| word >> k & 1 == 1 && w * 64 + k >= g.len())
        }) {
            return Err(Error::parse("bits set beyond the last pair"));
        }
        Ok(g)
    }
}

impl fmt::Display for GraphVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}
