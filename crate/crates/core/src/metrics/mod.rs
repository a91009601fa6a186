//! Distance functions on circle-valued musical data.
//!
//! Every metric here is built from the shortest-arc distance on the circle
//! `R/Z`. Pitches are octave-reduced onto the circle (one unit per octave),
//! rhythmic onsets are reduced modulo the cycle length (one unit per cycle).
//! On top of that:
//!
//! * [`tuple_distance`] sums component-wise (time-delay embeddings),
//! * [`chord_class_distance`] minimises over note permutations, solved as a
//!   linear assignment,
//! * [`rhythm_distance`] minimises over cyclic shifts and rotations of the cycle,
//! * [`hausdorff_distance`] compares finite subsets of different sizes,
//! * [`tde_chord_distance`] sums chord-class distances position by position.

mod assignment;
mod rhythm;

pub use assignment::{min_cost_assignment, Assignment};
pub use rhythm::{rhythm_distance, rhythm_distance_with, RhythmAlignment, RhythmPattern};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for treating two circle points (or a distance) as zero.
pub const ZERO_TOLERANCE: f64 = 1e-9;

/// A point of the circle `R/Z`, stored as its representative in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CirclePoint(f64);

impl CirclePoint {
    /// Reduces `value` modulo one.
    ///
    /// Panics if `value` is not finite; use [`CirclePoint::try_new`] for
    /// untrusted input.
    pub fn new(value: f64) -> Self {
        Self::try_new(value).expect("circle point must be finite")
    }

    pub fn try_new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::Domain(format!("circle point {value} is not finite")));
        }
        let mut reduced = value.rem_euclid(1.0);
        // rem_euclid rounds tiny negative inputs up to exactly 1.0
        if reduced >= 1.0 {
            reduced = 0.0;
        }
        Ok(Self(reduced))
    }

    /// Pitch class of a MIDI key number, `(key mod 12) / 12`.
    pub fn from_midi_key(key: u8) -> Self {
        Self(f64::from(key % 12) / 12.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `self - other` on the circle.
    pub fn offset_from(self, other: CirclePoint) -> CirclePoint {
        CirclePoint::new(self.0 - other.0)
    }

    pub fn approx_eq(self, other: CirclePoint) -> bool {
        necklace_distance(self, other) <= ZERO_TOLERANCE
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Shortest-arc distance between two points of `R/Z`: `min(s, 1 - s)` with
/// `s = |a - b| mod 1`. Always in `[0, 0.5]`.
pub fn necklace_distance(a: CirclePoint, b: CirclePoint) -> f64 {
    let s = (a.0 - b.0).abs().rem_euclid(1.0);
    s.min(1.0 - s)
}

/// Octave-reduced pitch class of a frequency in hertz: `log2(f) mod 1`.
///
/// The frequency is first scaled into `[1, 2)` by exact powers of two, so `f`
/// and `2f` always land on bit-identical points.
pub fn pitch_class_of(frequency: f64) -> Result<CirclePoint> {
    if !(frequency > 0.0) || !frequency.is_finite() {
        return Err(Error::Domain(format!(
            "frequency must be positive and finite, got {frequency}"
        )));
    }
    let mut mantissa = frequency;
    while mantissa >= 2.0 {
        mantissa *= 0.5;
    }
    while mantissa < 1.0 {
        mantissa *= 2.0;
    }
    Ok(CirclePoint::new(mantissa.log2()))
}

/// Pitch-class distance between two frequencies. Zero for octave-related pitches.
pub fn pitch_class_distance(f: f64, g: f64) -> Result<f64> {
    Ok(necklace_distance(pitch_class_of(f)?, pitch_class_of(g)?))
}

/// An ordered tuple of pitch classes, one coordinate of a time-delay embedding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PitchTuple(Vec<CirclePoint>);

impl PitchTuple {
    pub fn new(entries: Vec<CirclePoint>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyInput("pitch tuple needs at least one entry".into()));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[CirclePoint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Sum of component-wise necklace distances. Range `[0, d/2]`.
pub fn tuple_distance(u: &PitchTuple, v: &PitchTuple) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::Dimension {
            expected: u.len(),
            found: v.len(),
        });
    }
    Ok(u.0
        .iter()
        .zip(&v.0)
        .map(|(&a, &b)| necklace_distance(a, b))
        .sum())
}

/// An unordered multiset of pitch classes.
///
/// Notes are kept sorted by value; equality ignores order and uses
/// [`ZERO_TOLERANCE`] on the chord-class distance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChordClass(Vec<CirclePoint>);

impl ChordClass {
    pub fn new(mut notes: Vec<CirclePoint>) -> Result<Self> {
        if notes.is_empty() {
            return Err(Error::EmptyInput("chord needs at least one note".into()));
        }
        notes.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Self(notes))
    }

    pub fn from_midi_keys(keys: &[u8]) -> Result<Self> {
        Self::new(keys.iter().map(|&k| CirclePoint::from_midi_key(k)).collect())
    }

    pub fn notes(&self) -> &[CirclePoint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Distinct pitch classes of the chord.
    pub fn to_subset(&self) -> FiniteSubset {
        FiniteSubset::new(self.0.clone()).expect("chord is nonempty")
    }
}

impl PartialEq for ChordClass {
    fn eq(&self, other: &Self) -> bool {
        chord_class_distance(self, other).is_ok_and(|d| d <= ZERO_TOLERANCE)
    }
}

/// Minimum over note permutations of the summed necklace distances.
///
/// Each term depends only on the pair of notes it matches, so the minimum
/// over permutations is a minimum-cost perfect matching.
pub fn chord_class_distance(f: &ChordClass, g: &ChordClass) -> Result<f64> {
    if f.len() != g.len() {
        return Err(Error::Cardinality {
            left: f.len(),
            right: g.len(),
        });
    }
    let costs: Vec<Vec<f64>> = f
        .0
        .iter()
        .map(|&a| g.0.iter().map(|&b| necklace_distance(a, b)).collect())
        .collect();
    let assignment = min_cost_assignment(&costs);
    // re-sum in row order so the result does not depend on solver internals
    Ok(assignment
        .columns
        .iter()
        .enumerate()
        .map(|(row, &col)| costs[row][col])
        .sum())
}

/// A nonempty set of circle points without multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteSubset(Vec<CirclePoint>);

impl FiniteSubset {
    /// Builds the set, dropping elements within [`ZERO_TOLERANCE`] of an earlier one.
    pub fn new(elements: Vec<CirclePoint>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Domain("finite subset must be nonempty".into()));
        }
        let mut distinct: Vec<CirclePoint> = Vec::with_capacity(elements.len());
        for p in elements {
            if !distinct.iter().any(|q| q.approx_eq(p)) {
                distinct.push(p);
            }
        }
        distinct.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Self(distinct))
    }

    pub fn elements(&self) -> &[CirclePoint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn directed_hausdorff(a: &[CirclePoint], b: &[CirclePoint]) -> f64 {
    a.iter()
        .map(|&x| {
            b.iter()
                .map(|&y| necklace_distance(x, y))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Hausdorff distance between finite subsets of the circle.
pub fn hausdorff_distance(a: &FiniteSubset, b: &FiniteSubset) -> f64 {
    directed_hausdorff(&a.0, &b.0).max(directed_hausdorff(&b.0, &a.0))
}

/// Time-delay embedding distance for sequences of chords: the sum of
/// chord-class distances at aligned positions. Notes are permuted within a
/// chord, never across positions.
pub fn tde_chord_distance(p: &[ChordClass], q: &[ChordClass]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Dimension {
            expected: p.len(),
            found: q.len(),
        });
    }
    let mut total = 0.0;
    for (f, g) in p.iter().zip(q) {
        total += chord_class_distance(f, g)?;
    }
    Ok(total)
}
