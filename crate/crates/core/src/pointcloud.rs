//! Labelled point clouds, time-delay embeddings and dense distance matrices.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{
    chord_class_distance, hausdorff_distance, necklace_distance, rhythm_distance_with,
    tde_chord_distance, tuple_distance, ChordClass, CirclePoint, FiniteSubset, PitchTuple,
    RhythmAlignment, RhythmPattern,
};

/// One element of a point cloud.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Payload {
    Point(CirclePoint),
    Tuple(PitchTuple),
    Chord(ChordClass),
    Rhythm(RhythmPattern),
    ChordTuple(Vec<ChordClass>),
    Subset(FiniteSubset),
}

impl Payload {
    fn kind(&self) -> &'static str {
        match self {
            Payload::Point(_) => "point",
            Payload::Tuple(_) => "pitch tuple",
            Payload::Chord(_) => "chord",
            Payload::Rhythm(_) => "rhythm",
            Payload::ChordTuple(_) => "chord tuple",
            Payload::Subset(_) => "finite subset",
        }
    }
}

/// Distance function applied to every pair of payloads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    /// Shortest arc between circle points (pitch classes or onsets).
    Necklace,
    /// Component-wise sum of necklace distances.
    Tuple,
    ChordClass,
    Hausdorff,
    Rhythm(RhythmAlignment),
    /// Sum of chord-class distances over aligned chord positions.
    TdeChord,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Necklace => "necklace",
            Metric::Tuple => "tuple",
            Metric::ChordClass => "chord-class",
            Metric::Hausdorff => "hausdorff",
            Metric::Rhythm(RhythmAlignment::Indexed) => "rhythm",
            Metric::Rhythm(RhythmAlignment::Anchored) => "rhythm-anchored",
            Metric::Rhythm(RhythmAlignment::Continuous) => "rhythm-continuous",
            Metric::TdeChord => "tde",
        }
    }

    pub fn accepts(self, payload: &Payload) -> bool {
        matches!(
            (self, payload),
            (Metric::Necklace, Payload::Point(_))
                | (Metric::Tuple, Payload::Tuple(_))
                | (Metric::ChordClass, Payload::Chord(_))
                | (Metric::Hausdorff, Payload::Chord(_) | Payload::Subset(_))
                | (Metric::Rhythm(_), Payload::Rhythm(_))
                | (Metric::TdeChord, Payload::ChordTuple(_))
        )
    }

    pub fn distance(self, a: &Payload, b: &Payload) -> Result<f64> {
        match (self, a, b) {
            (Metric::Necklace, Payload::Point(x), Payload::Point(y)) => Ok(necklace_distance(*x, *y)),
            (Metric::Tuple, Payload::Tuple(x), Payload::Tuple(y)) => tuple_distance(x, y),
            (Metric::ChordClass, Payload::Chord(x), Payload::Chord(y)) => chord_class_distance(x, y),
            (Metric::Hausdorff, x, y) => {
                let x = as_subset(x).ok_or_else(|| self.mismatch(a))?;
                let y = as_subset(y).ok_or_else(|| self.mismatch(b))?;
                Ok(hausdorff_distance(&x, &y))
            }
            (Metric::Rhythm(alignment), Payload::Rhythm(x), Payload::Rhythm(y)) => {
                rhythm_distance_with(x, y, alignment)
            }
            (Metric::TdeChord, Payload::ChordTuple(x), Payload::ChordTuple(y)) => {
                tde_chord_distance(x, y)
            }
            _ => Err(self.mismatch(if self.accepts(a) { b } else { a })),
        }
    }

    fn mismatch(self, payload: &Payload) -> Error {
        Error::Config(format!(
            "metric {} does not apply to {} payloads",
            self.name(),
            payload.kind()
        ))
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    /// Accepts every [`Metric::name`], plus `pitch-class` for the necklace metric.
    fn from_str(s: &str) -> Result<Self> {
        const ALL: [Metric; 8] = [
            Metric::Necklace,
            Metric::Tuple,
            Metric::ChordClass,
            Metric::Hausdorff,
            Metric::Rhythm(RhythmAlignment::Indexed),
            Metric::Rhythm(RhythmAlignment::Anchored),
            Metric::Rhythm(RhythmAlignment::Continuous),
            Metric::TdeChord,
        ];
        if s == "pitch-class" {
            return Ok(Metric::Necklace);
        }
        ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| {
            let names: Vec<&str> = ALL.iter().map(|m| m.name()).collect();
            Error::Config(format!("unknown metric {s:?}; expected one of {}", names.join(", ")))
        })
    }
}

fn as_subset(p: &Payload) -> Option<FiniteSubset> {
    match p {
        Payload::Subset(s) => Some(s.clone()),
        Payload::Chord(c) => Some(c.to_subset()),
        _ => None,
    }
}

/// Points with display labels and multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    points: Vec<Payload>,
    labels: Vec<String>,
    multiplicities: Vec<usize>,
}

impl PointCloud {
    pub fn new(points: Vec<Payload>, labels: Vec<String>) -> Result<Self> {
        if points.len() != labels.len() {
            return Err(Error::Dimension {
                expected: points.len(),
                found: labels.len(),
            });
        }
        let multiplicities = vec![1; points.len()];
        Ok(Self {
            points,
            labels,
            multiplicities,
        })
    }

    /// Labels each point by its index.
    pub fn unlabelled(points: Vec<Payload>) -> Self {
        let labels = (0..points.len()).map(|i| i.to_string()).collect();
        Self::new(points, labels).expect("aligned")
    }

    pub fn points(&self) -> &[Payload] {
        &self.points
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Merges points within `tolerance` of an earlier point under `metric`.
    /// Each group keeps its first member; multiplicities are summed and labels
    /// joined with `=`.
    pub fn collapse_duplicates(&self, metric: Metric, tolerance: f64) -> Result<PointCloud> {
        let mut reps: Vec<usize> = Vec::new();
        let mut out = PointCloud {
            points: Vec::new(),
            labels: Vec::new(),
            multiplicities: Vec::new(),
        };
        for (i, p) in self.points.iter().enumerate() {
            let mut merged = false;
            for (slot, &r) in reps.iter().enumerate() {
                if metric.distance(&self.points[r], p)? <= tolerance {
                    out.multiplicities[slot] += self.multiplicities[i];
                    out.labels[slot] = format!("{}={}", out.labels[slot], self.labels[i]);
                    merged = true;
                    break;
                }
            }
            if !merged {
                reps.push(i);
                out.points.push(p.clone());
                out.labels.push(self.labels[i].clone());
                out.multiplicities.push(self.multiplicities[i]);
            }
        }
        Ok(out)
    }
}

/// Overlapping windows `(x_n, ..., x_{n+d-1})` of a sequence.
pub fn delay_embed<T: Clone>(sequence: &[T], d: usize) -> Result<Vec<Vec<T>>> {
    if d == 0 || sequence.len() < d {
        return Err(Error::Dimension {
            expected: d.max(1),
            found: sequence.len(),
        });
    }
    Ok(sequence.windows(d).map(<[T]>::to_vec).collect())
}

/// Symmetric matrix with zero diagonal, stored as its strict lower triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    lower: Vec<f64>,
}

#[inline]
fn tri_index(i: usize, j: usize) -> usize {
    debug_assert!(i > j);
    i * (i - 1) / 2 + j
}

impl DistanceMatrix {
    /// Builds from a full square matrix, checking symmetry, zero diagonal and
    /// finite non-negative entries.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut lower = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: row.len(),
                });
            }
            if row[i] != 0.0 {
                return Err(Error::Domain(format!("diagonal entry {i} is {}", row[i])));
            }
            for (j, &d) in row.iter().enumerate().take(i) {
                check_entry(d)?;
                if d != rows[j][i] {
                    return Err(Error::Domain(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
                lower.push(d);
            }
        }
        Ok(Self { n, lower })
    }

    /// Builds from the strict lower triangle, row by row.
    pub fn from_lower(n: usize, lower: Vec<f64>) -> Result<Self> {
        let expected = n * n.saturating_sub(1) / 2;
        if lower.len() != expected {
            return Err(Error::Dimension {
                expected,
                found: lower.len(),
            });
        }
        for &d in &lower {
            check_entry(d)?;
        }
        Ok(Self { n, lower })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Greater => self.lower[tri_index(i, j)],
            std::cmp::Ordering::Less => self.lower[tri_index(j, i)],
        }
    }

    /// Strict lower triangle, row by row.
    pub fn lower_triangle(&self) -> &[f64] {
        &self.lower
    }

    /// Largest entry (0 for fewer than two points).
    pub fn max(&self) -> f64 {
        self.lower.iter().copied().fold(0.0, f64::max)
    }

    /// Submatrix on the given indices, in the given order.
    pub fn restrict(&self, indices: &[usize]) -> DistanceMatrix {
        let mut lower = Vec::with_capacity(indices.len() * indices.len().saturating_sub(1) / 2);
        for (a, &i) in indices.iter().enumerate() {
            for &j in &indices[..a] {
                lower.push(self.get(i, j));
            }
        }
        DistanceMatrix {
            n: indices.len(),
            lower,
        }
    }

    /// Greedy grouping of points within `tolerance` of a group's first member.
    pub fn duplicate_groups(&self, tolerance: f64) -> Vec<Vec<usize>> {
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for i in 0..self.n {
            match groups.iter_mut().find(|g| self.get(g[0], i) <= tolerance) {
                Some(g) => g.push(i),
                None => groups.push(vec![i]),
            }
        }
        groups
    }

    /// Plain-text interchange form: `n`, then one line per row `i >= 1` with
    /// the entries `d(i, 0) .. d(i, i-1)` in scientific notation (17
    /// significant digits, exact round trip).
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for i in 1..self.n {
            let row: Vec<String> = (0..i).map(|j| format!("{:.16e}", self.get(i, j))).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line_no, first) = lines.next().ok_or(Error::MatrixFormat {
            line: 1,
            message: "empty input".into(),
        })?;
        let n: usize = first.parse().map_err(|_| Error::MatrixFormat {
            line: line_no,
            message: format!("expected point count, found {first:?}"),
        })?;
        let mut lower = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for row in 1..n {
            let (line_no, line) = lines.next().ok_or(Error::MatrixFormat {
                line: line_no,
                message: format!("missing row {row}"),
            })?;
            let values: Vec<&str> = line.split_whitespace().collect();
            if values.len() != row {
                return Err(Error::MatrixFormat {
                    line: line_no,
                    message: format!("row {row} has {} entries, expected {row}", values.len()),
                });
            }
            for v in values {
                let d: f64 = v.parse().map_err(|_| Error::MatrixFormat {
                    line: line_no,
                    message: format!("not a number: {v:?}"),
                })?;
                check_entry(d).map_err(|e| Error::MatrixFormat {
                    line: line_no,
                    message: e.to_string(),
                })?;
                lower.push(d);
            }
        }
        if let Some((line_no, _)) = lines.next() {
            return Err(Error::MatrixFormat {
                line: line_no,
                message: "trailing data after last row".into(),
            });
        }
        Ok(Self { n, lower })
    }
}

fn check_entry(d: f64) -> Result<()> {
    if !d.is_finite() || d < 0.0 {
        return Err(Error::Domain(format!("distance {d} is not finite and non-negative")));
    }
    Ok(())
}

/// Pairwise distances of a cloud under `metric`.
///
/// Entries are computed independently (in parallel on the current rayon
/// pool), so the result does not depend on the schedule.
pub fn distance_matrix(cloud: &PointCloud, metric: Metric) -> Result<DistanceMatrix> {
    if let Some(bad) = cloud.points.iter().find(|p| !metric.accepts(p)) {
        return Err(metric.mismatch(bad));
    }
    let n = cloud.len();
    let lower: Vec<f64> = (1..n)
        .into_par_iter()
        .flat_map_iter(|i| (0..i).map(move |j| (i, j)))
        .map(|(i, j)| metric.distance(&cloud.points[i], &cloud.points[j]))
        .collect::<Result<_>>()?;
    DistanceMatrix::from_lower(n, lower)
}
