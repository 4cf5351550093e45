//! Gray-labelled square QAM.
//!
//! The label-to-point table is read from `fixtures/qam_gray.txt` (bit `b0`
//! first; I from the even-indexed bits, Q from the odd-indexed ones), so the
//! mapper and the demapper share a single source of truth.

use alloc::vec::Vec;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};

const GRAY_TABLE: &str = include_str!("../fixtures/qam_gray.txt");

/// Hard bits, one `u8` (0 or 1) per bit.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BitBlock(pub Vec<u8>);

impl BitBlock {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    /// Number of positions where the two blocks differ.
    pub fn hamming_distance(&self, other: &BitBlock) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }
}

/// Unit-energy square QAM constellation; point `i` carries label `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct QamConstellation {
    order: usize,
    bits_per_symbol: usize,
    points: Vec<Complex64>,
}

impl QamConstellation {
    /// Loads the Gray table for `order` in {4, 16, 64, 256}.
    pub fn new(order: usize) -> Result<Self> {
        Self::from_table(GRAY_TABLE, order)
    }

    /// Parses a `order label I Q` table, keeping rows of the requested order.
    pub fn from_table(table: &str, order: usize) -> Result<Self> {
        if !matches!(order, 4 | 16 | 64 | 256) {
            return Err(Error::UnsupportedQamOrder(order));
        }
        let bits_per_symbol = order.trailing_zeros() as usize;
        let mut grid: Vec<Option<(f64, f64)>> = alloc::vec![None; order];
        for line in table.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split_whitespace();
            let (Some(o), Some(label), Some(i), Some(q), None) = (cols.next(), cols.next(), cols.next(), cols.next(), cols.next()) else {
                return Err(Error::ConstellationTable("expected four columns"));
            };
            let o: usize = o.parse().map_err(|_| Error::ConstellationTable("bad order"))?;
            if o != order {
                continue;
            }
            if label.len() != bits_per_symbol {
                return Err(Error::ConstellationTable("label width does not match order"));
            }
            let idx = usize::from_str_radix(label, 2).map_err(|_| Error::ConstellationTable("bad label"))?;
            let i: f64 = i.parse().map_err(|_| Error::ConstellationTable("bad I coordinate"))?;
            let q: f64 = q.parse().map_err(|_| Error::ConstellationTable("bad Q coordinate"))?;
            if grid[idx].replace((i, q)).is_some() {
                return Err(Error::ConstellationTable("duplicate label"));
            }
        }
        let raw: Vec<(f64, f64)> = grid
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::ConstellationTable("missing label"))?;
        let mean_energy = raw.iter().map(|(i, q)| i * i + q * q).sum::<f64>() / order as f64;
        let scale = 1.0 / mean_energy.sqrt();
        Ok(Self {
            order,
            bits_per_symbol,
            points: raw.into_iter().map(|(i, q)| Complex64::new(i * scale, q * scale)).collect(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    /// Point for each label, indexed by label value.
    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    fn label_of(&self, bits: &[u8]) -> usize {
        bits.iter().fold(0usize, |acc, &b| (acc << 1) | (b & 1) as usize)
    }

    /// Nearest point; ties go to the lower label.
    #[inline]
    pub fn nearest_label(&self, s: Complex64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (label, p) in self.points.iter().enumerate() {
            let d = (s - p).norm_sqr();
            if d < best_d {
                best_d = d;
                best = label;
            }
        }
        best
    }
}

/// Maps groups of `log2(order)` bits to constellation points.
pub fn qam_map(bits: &BitBlock, c: &QamConstellation) -> Result<Vec<Complex64>> {
    let bps = c.bits_per_symbol;
    if !bits.len().is_multiple_of(bps) {
        return Err(Error::BitLength {
            len: bits.len(),
            bits_per_symbol: bps,
        });
    }
    Ok(bits.0.chunks_exact(bps).map(|chunk| c.points[c.label_of(chunk)]).collect())
}

/// Minimum-distance hard decisions.
pub fn qam_demap_hard(symbols: &[Complex64], c: &QamConstellation) -> BitBlock {
    let bps = c.bits_per_symbol;
    let mut bits = Vec::with_capacity(symbols.len() * bps);
    for &s in symbols {
        let label = c.nearest_label(s);
        bits.extend((0..bps).rev().map(|i| ((label >> i) & 1) as u8));
    }
    BitBlock(bits)
}
