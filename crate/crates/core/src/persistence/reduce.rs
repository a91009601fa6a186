use std::collections::HashMap;

use super::{Barcode, Interval};
use crate::error::{Error, Result};
use crate::metrics::ZERO_TOLERANCE;
use crate::rips::FilteredComplex;

/// A prime field GF(p).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField(u32);

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Config(format!("field characteristic {p} is not prime")));
        }
        if p > (1 << 31) {
            return Err(Error::Config(format!("field characteristic {p} is too large")));
        }
        Ok(Self(p))
    }

    pub fn characteristic(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((u64::from(a) + u64::from(b)) % u64::from(self.0)) as u32
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((u64::from(a) * u64::from(b)) % u64::from(self.0)) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    /// Multiplicative inverse of a nonzero element (Fermat).
    pub fn inv(self, a: u32) -> u32 {
        debug_assert!(!a.is_multiple_of(self.0));
        let mut result = 1u32;
        let mut base = a % self.0;
        let mut exp = self.0 - 2;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        result
    }

    /// `(-1)^k` in the field.
    pub fn sign(self, k: usize) -> u32 {
        if k.is_multiple_of(2) {
            1
        } else {
            self.neg(1)
        }
    }
}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while u64::from(d) * u64::from(d) <= u64::from(p) {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Sparse column: (row, nonzero coefficient), rows strictly increasing.
type Column = Vec<(usize, u32)>;

/// `target += factor * source`, dropping zeros.
fn axpy(field: PrimeField, target: &Column, factor: u32, source: &Column) -> Column {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < source.len() {
        let take_target = j >= source.len() || (i < target.len() && target[i].0 < source[j].0);
        let take_source = i >= target.len() || (j < source.len() && source[j].0 < target[i].0);
        if take_target {
            out.push(target[i]);
            i += 1;
        } else if take_source {
            out.push((source[j].0, field.mul(factor, source[j].1)));
            j += 1;
        } else {
            let c = field.add(target[i].1, field.mul(factor, source[j].1));
            if c != 0 {
                out.push((target[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Result of reducing a boundary matrix: indices refer to the complex's
/// simplex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PersistencePairs {
    /// (positive simplex, negative simplex that kills it).
    pub pairs: Vec<(usize, usize)>,
    /// Positive simplices never killed.
    pub essential: Vec<usize>,
}

impl PersistencePairs {
    /// Number of positive simplices in each dimension `0..=max_dim`.
    pub fn positive_counts(&self, complex: &FilteredComplex) -> Vec<usize> {
        let mut counts = vec![0; complex.max_dim() + 1];
        for &i in self.pairs.iter().map(|(b, _)| b).chain(&self.essential) {
            counts[complex.simplices()[i].dim()] += 1;
        }
        counts
    }

    /// Converts pairs to intervals, dropping zero-length ones (within
    /// [`ZERO_TOLERANCE`], since equal distances computed along different
    /// paths can differ in the last bits).
    pub fn barcode(&self, complex: &FilteredComplex, field: PrimeField) -> Barcode {
        let s = complex.simplices();
        let mut intervals: Vec<Interval> = self
            .pairs
            .iter()
            .filter(|&&(b, d)| s[d].filtration - s[b].filtration > ZERO_TOLERANCE)
            .map(|&(b, d)| Interval {
                dim: s[b].dim(),
                birth: s[b].filtration,
                death: Some(s[d].filtration),
            })
            .chain(self.essential.iter().map(|&b| Interval {
                dim: s[b].dim(),
                birth: s[b].filtration,
                death: None,
            }))
            .collect();
        intervals.sort_by(Interval::order);
        Barcode {
            field: field.characteristic(),
            eps_max: complex.eps_max(),
            max_dim: complex.max_dim(),
            capped: true,
            intervals,
        }
    }
}

/// Encodes a sorted vertex list as a combinatorial-number-system index.
fn simplex_key(vertices: &[usize], binom: &[Vec<u64>]) -> u64 {
    vertices
        .iter()
        .enumerate()
        .map(|(k, &v)| binom[v][k + 1])
        .sum()
}

fn binomial_table(n: usize, k: usize) -> Vec<Vec<u64>> {
    let mut t = vec![vec![0u64; k + 1]; n + 1];
    for i in 0..=n {
        t[i][0] = 1;
        for j in 1..=k.min(i) {
            t[i][j] = t[i - 1][j - 1].saturating_add(t[i - 1][j]);
        }
    }
    t
}

/// Boundary columns of every simplex, in simplex order.
fn boundary_columns(complex: &FilteredComplex, field: PrimeField) -> Vec<Column> {
    let simplices = complex.simplices();
    let binom = binomial_table(complex.num_vertices(), complex.max_dim() + 1);
    let index: HashMap<(usize, u64), usize> = simplices
        .iter()
        .enumerate()
        .map(|(i, s)| ((s.dim(), simplex_key(&s.vertices, &binom)), i))
        .collect();

    simplices
        .iter()
        .map(|s| {
            if s.dim() == 0 {
                return Vec::new();
            }
            let mut col: Column = (0..s.vertices.len())
                .map(|drop| {
                    let face: Vec<usize> = s
                        .vertices
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != drop)
                        .map(|(_, &v)| v)
                        .collect();
                    let row = index[&(s.dim() - 1, simplex_key(&face, &binom))];
                    (row, field.sign(drop))
                })
                .collect();
            col.sort_unstable_by_key(|&(r, _)| r);
            col
        })
        .collect()
}

/// Column reduction of the filtration's boundary matrix over GF(p).
///
/// With `clearing`, dimensions are processed from the top down and every
/// simplex already known to be the low of a higher column is skipped, since
/// its own column must reduce to zero. The pairs are the same either way.
pub fn reduce_pairs(complex: &FilteredComplex, p: u32, clearing: bool) -> Result<PersistencePairs> {
    let field = PrimeField::new(p)?;
    let simplices = complex.simplices();
    let n = simplices.len();
    let mut columns = boundary_columns(complex, field);
    let mut pivot_col: Vec<Option<usize>> = vec![None; n];
    let mut is_negative = vec![false; n];
    let mut cleared = vec![false; n];

    let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); complex.max_dim() + 1];
    for (i, s) in simplices.iter().enumerate() {
        by_dim[s.dim()].push(i);
    }
    let order: Vec<usize> = if clearing {
        by_dim.iter().rev().flatten().copied().collect()
    } else {
        (0..n).collect()
    };

    for j in order {
        if cleared[j] {
            columns[j].clear();
            continue;
        }
        let mut col = std::mem::take(&mut columns[j]);
        while let Some(&(low, coeff)) = col.last() {
            match pivot_col[low] {
                Some(k) => {
                    let (_, pivot_coeff) = *columns[k].last().expect("pivot column is nonempty");
                    let factor = field.neg(field.mul(coeff, field.inv(pivot_coeff)));
                    col = axpy(field, &col, factor, &columns[k]);
                }
                None => break,
            }
        }
        if let Some(&(low, _)) = col.last() {
            pivot_col[low] = Some(j);
            is_negative[j] = true;
            if clearing {
                cleared[low] = true;
            }
        }
        columns[j] = col;
    }

    let mut pairs = Vec::new();
    let mut killed = vec![false; n];
    for (low, col) in pivot_col.iter().enumerate() {
        if let Some(j) = col {
            pairs.push((low, *j));
            killed[low] = true;
        }
    }
    let essential = (0..n).filter(|&i| !is_negative[i] && !killed[i]).collect();
    Ok(PersistencePairs { pairs, essential })
}

/// Persistence barcode of a filtered complex over GF(p).
pub fn reduce(complex: &FilteredComplex, p: u32) -> Result<Barcode> {
    let field = PrimeField::new(p)?;
    Ok(reduce_pairs(complex, p, true)?.barcode(complex, field))
}
