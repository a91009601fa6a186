//! Persistent homology of Rips filtrations.
//!
//! [`reduce`] pairs simplices by sparse column reduction over a prime field;
//! [`oracle_betti`] recomputes Betti numbers at a single scale by dense
//! elimination and serves as an independent check.

mod oracle;
mod reduce;

pub use oracle::{oracle_betti, ORACLE_MAX_POINTS};
pub use reduce::{reduce, reduce_pairs, PersistencePairs, PrimeField};

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rips::FilteredComplex;

/// A persistence interval `[birth, death)`; `death = None` means it never dies
/// within the filtration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub dim: usize,
    pub birth: f64,
    pub death: Option<f64>,
}

impl Interval {
    pub fn contains(&self, eps: f64) -> bool {
        self.birth <= eps && self.death.is_none_or(|d| eps < d)
    }

    pub fn is_infinite(&self) -> bool {
        self.death.is_none()
    }

    /// Length of the bar; infinite bars have infinite persistence.
    pub fn persistence(&self) -> f64 {
        self.death.map_or(f64::INFINITY, |d| d - self.birth)
    }

    /// (dim, birth, death) with infinite deaths last.
    pub fn order(a: &Interval, b: &Interval) -> Ordering {
        a.dim
            .cmp(&b.dim)
            .then(a.birth.total_cmp(&b.birth))
            .then_with(|| match (a.death, b.death) {
                (Some(x), Some(y)) => x.total_cmp(&y),
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (None, None) => Ordering::Equal,
            })
    }
}

/// All intervals of a filtration, sorted by [`Interval::order`].
#[derive(Debug, Clone, PartialEq)]
pub struct Barcode {
    pub field: u32,
    pub eps_max: f64,
    /// Highest homology dimension present.
    pub max_dim: usize,
    /// True when `max_dim` is the simplex dimension cap of the complex, so
    /// bars in that dimension can never die and may be spurious.
    pub capped: bool,
    pub intervals: Vec<Interval>,
}

/// Betti numbers at one scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BettiProfile {
    pub eps: f64,
    pub counts: Vec<usize>,
}

impl Barcode {
    pub fn in_dim(&self, dim: usize) -> impl Iterator<Item = &Interval> {
        self.intervals.iter().filter(move |i| i.dim == dim)
    }

    /// Number of bars of dimension `dim` alive at `eps` (`birth <= eps < death`).
    pub fn betti_at(&self, eps: f64, dim: usize) -> usize {
        self.in_dim(dim).filter(|i| i.contains(eps)).count()
    }

    pub fn betti_profile(&self, eps: f64) -> BettiProfile {
        BettiProfile {
            eps,
            counts: (0..=self.max_dim).map(|d| self.betti_at(eps, d)).collect(),
        }
    }

    /// Intervals as (birth, death) pairs per dimension, for comparisons that
    /// ignore ordering among equal bars.
    pub fn pairs(&self, dim: usize) -> Vec<(f64, Option<f64>)> {
        self.in_dim(dim).map(|i| (i.birth, i.death)).collect()
    }

    /// The bars of dimension at most `max_dim`. Truncating below the cap of
    /// the complex leaves only dimensions whose bars are exact.
    pub fn truncate(&self, max_dim: usize) -> Barcode {
        if max_dim >= self.max_dim {
            return self.clone();
        }
        Barcode {
            field: self.field,
            eps_max: self.eps_max,
            max_dim,
            capped: false,
            intervals: self.intervals.iter().filter(|i| i.dim <= max_dim).cloned().collect(),
        }
    }

    pub fn to_json_model(&self) -> BarcodeJson {
        BarcodeJson {
            field: self.field,
            eps_max: self.eps_max,
            dimensions: (0..=self.max_dim)
                .map(|dim| DimensionJson {
                    dim,
                    bars: self
                        .in_dim(dim)
                        .map(|i| BarJson {
                            birth: i.birth,
                            death: i.death,
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    /// Pretty-printed JSON:
    /// `{"field", "eps_max", "dimensions": [{"dim", "bars": [{"birth", "death"}]}]}`
    /// with `null` deaths for infinite bars.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_model()).expect("barcode serialises")
    }

    pub fn from_json(text: &str) -> Result<Barcode> {
        let model: BarcodeJson =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid barcode JSON: {e}")))?;
        let max_dim = model.dimensions.iter().map(|d| d.dim).max().unwrap_or(0);
        let mut intervals: Vec<Interval> = model
            .dimensions
            .iter()
            .flat_map(|d| {
                d.bars.iter().map(move |b| Interval {
                    dim: d.dim,
                    birth: b.birth,
                    death: b.death,
                })
            })
            .collect();
        intervals.sort_by(Interval::order);
        Ok(Barcode {
            field: model.field,
            eps_max: model.eps_max,
            max_dim,
            capped: false,
            intervals,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarcodeJson {
    pub field: u32,
    pub eps_max: f64,
    pub dimensions: Vec<DimensionJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionJson {
    pub dim: usize,
    pub bars: Vec<BarJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarJson {
    pub birth: f64,
    pub death: Option<f64>,
}

/// Outcome of [`euler_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EulerCheck {
    Holds,
    Fails { simplices: i64, betti: i64 },
    /// Classes in the top (capped) dimension are alive, so the complex may be
    /// too thin to be conclusive.
    Inconclusive,
}

/// Compares the alternating simplex count with the alternating Betti sum at `eps`.
pub fn euler_check(complex: &FilteredComplex, barcode: &Barcode, eps: f64) -> Result<EulerCheck> {
    let counts = complex.simplex_counts_at(eps)?;
    let top = complex.max_dim();
    if barcode.max_dim < top {
        return Err(Error::Config(format!(
            "barcode stops at dimension {} but the complex reaches {top}",
            barcode.max_dim
        )));
    }
    if barcode.betti_at(eps, top) > 0 {
        return Ok(EulerCheck::Inconclusive);
    }
    let alternating = |values: &mut dyn Iterator<Item = usize>| -> i64 {
        values
            .enumerate()
            .map(|(k, c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    };
    let simplices = alternating(&mut counts.iter().copied());
    let betti = alternating(&mut (0..=top).map(|d| barcode.betti_at(eps, d)));
    Ok(if simplices == betti {
        EulerCheck::Holds
    } else {
        EulerCheck::Fails { simplices, betti }
    })
}

/// Dimensions where the GF(2) and GF(3) barcodes differ, with the bars of each.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldDisagreement {
    pub dim: usize,
    pub mod2: Vec<(f64, Option<f64>)>,
    pub mod3: Vec<(f64, Option<f64>)>,
}

/// Reduces over GF(2) and GF(3) and reports every dimension where the bar
/// multisets differ (a sign of torsion in the filtration).
pub fn field_sensitivity(complex: &FilteredComplex) -> Result<Vec<FieldDisagreement>> {
    let b2 = reduce(complex, 2)?;
    let b3 = reduce(complex, 3)?;
    Ok((0..=complex.max_dim())
        .filter_map(|dim| {
            let (mod2, mod3) = (b2.pairs(dim), b3.pairs(dim));
            (mod2 != mod3).then_some(FieldDisagreement { dim, mod2, mod3 })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointcloud::DistanceMatrix;
    use crate::rips::build_rips;

    fn square() -> DistanceMatrix {
        let s = 2f64.sqrt();
        DistanceMatrix::from_rows(&[
            vec![0.0, 1.0, s, 1.0],
            vec![1.0, 0.0, 1.0, s],
            vec![s, 1.0, 0.0, 1.0],
            vec![1.0, s, 1.0, 0.0],
        ])
        .unwrap()
    }

    #[test]
    fn square_has_one_loop() {
        let m = square();
        let c = build_rips(&m, 2, 2.0).unwrap();
        let b = reduce(&c, 2).unwrap();
        let h1: Vec<_> = b.in_dim(1).collect();
        assert_eq!(h1.len(), 1);
        assert_eq!(h1[0].birth, 1.0);
        assert_eq!(h1[0].death, Some(2f64.sqrt()));
        assert_eq!(b.betti_at(1.2, 1), 1);
        assert_eq!(b.betti_at(1.2, 0), 1);
        assert_eq!(b.in_dim(0).filter(|i| i.is_infinite()).count(), 1);
        assert_eq!(euler_check(&c, &b, 1.2).unwrap(), EulerCheck::Holds);
    }

    #[test]
    fn equilateral_fills() {
        let m = DistanceMatrix::from_lower(3, vec![1.0, 1.0, 1.0]).unwrap();
        let c = build_rips(&m, 2, 2.0).unwrap();
        let b = reduce(&c, 3).unwrap();
        assert_eq!(b.in_dim(1).count(), 0);
        assert_eq!(b.betti_at(1.0, 0), 1);
        assert_eq!(euler_check(&c, &b, 1.0).unwrap(), EulerCheck::Holds);
    }

    #[test]
    fn non_prime_field() {
        let c = build_rips(&square(), 2, 2.0).unwrap();
        assert!(matches!(reduce(&c, 4), Err(Error::Config(_))));
    }

    #[test]
    fn capped_dimension_is_inconclusive() {
        let c = build_rips(&square(), 1, 2.0).unwrap();
        let b = reduce(&c, 2).unwrap();
        // without triangles the square's loop and the diagonals' loops never die
        assert!(b.in_dim(1).all(|i| i.is_infinite()));
        assert_eq!(euler_check(&c, &b, 1.5).unwrap(), EulerCheck::Inconclusive);
    }

    #[test]
    fn truncation_drops_the_capped_dimension() {
        let c = build_rips(&square(), 2, 2.0).unwrap();
        let b = reduce(&c, 2).unwrap();
        assert!(b.capped);
        let t = b.truncate(1);
        assert_eq!((t.max_dim, t.capped), (1, false));
        assert_eq!(t.intervals, b.intervals.iter().filter(|i| i.dim <= 1).cloned().collect::<Vec<_>>());
        assert_eq!(b.truncate(5), b);
        assert!(matches!(euler_check(&c, &t, 1.2), Err(Error::Config(_))));
    }

    #[test]
    fn clearing_does_not_change_pairs() {
        let c = build_rips(&square(), 3, 2.0).unwrap();
        let mut a = reduce_pairs(&c, 2, true).unwrap();
        let mut b = reduce_pairs(&c, 2, false).unwrap();
        a.pairs.sort_unstable();
        b.pairs.sort_unstable();
        assert_eq!(a, b);
    }

    #[test]
    fn json_schema_and_round_trip() {
        let c = build_rips(&square(), 2, 2.0).unwrap();
        let b = reduce(&c, 2).unwrap();
        let json = b.to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["field"], 2);
        assert_eq!(v["dimensions"][0]["dim"], 0);
        assert!(v["dimensions"][0]["bars"]
            .as_array()
            .unwrap()
            .iter()
            .any(|bar| bar["death"].is_null()));
        assert_eq!(v["dimensions"].as_array().unwrap().len(), 3);
        // the cap is not part of the schema
        assert_eq!(Barcode::from_json(&json).unwrap(), Barcode { capped: false, ..b });
    }

    #[test]
    fn square_is_field_independent() {
        let c = build_rips(&square(), 3, 2.0).unwrap();
        assert!(field_sensitivity(&c).unwrap().is_empty());
    }
}
