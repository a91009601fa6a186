use serde::{Deserialize, Serialize};

use super::{necklace_distance, CirclePoint};
use crate::error::{Error, Result};

/// Onset times of one rhythmic cycle, as fractions of the cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhythmPattern(Vec<CirclePoint>);

impl RhythmPattern {
    /// Sorts the onsets; rejects empty input and coincident onsets.
    pub fn new(mut onsets: Vec<CirclePoint>) -> Result<Self> {
        if onsets.is_empty() {
            return Err(Error::EmptyInput("rhythm pattern has no onsets".into()));
        }
        onsets.sort_by(|a, b| a.value().total_cmp(&b.value()));
        let n = onsets.len();
        for i in 0..n {
            let next = onsets[(i + 1) % n];
            if n > 1 && onsets[i].approx_eq(next) {
                return Err(Error::Domain(format!(
                    "coincident onsets at {} in rhythm pattern",
                    onsets[i]
                )));
            }
        }
        Ok(Self(onsets))
    }

    /// Builds a pattern from a pulse timeline such as `[1,0,0,1,...]`; every
    /// nonzero pulse is an onset at `index / len`.
    pub fn from_timeline(pulses: &[u8]) -> Result<Self> {
        let len = pulses.len() as f64;
        Self::new(
            pulses
                .iter()
                .enumerate()
                .filter(|(_, &p)| p != 0)
                .map(|(i, _)| CirclePoint::new(i as f64 / len))
                .collect(),
        )
    }

    pub fn onsets(&self) -> &[CirclePoint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The same cycle heard from onset `k` onwards, with times measured from
    /// that onset.
    pub fn rotate(&self, k: usize) -> RhythmPattern {
        let start = self.0[k % self.0.len()];
        RhythmPattern::new(self.0.iter().map(|&p| p.offset_from(start)).collect())
            .expect("rotation preserves distinct onsets")
    }
}

/// How [`rhythm_distance_with`] aligns two patterns before summing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RhythmAlignment {
    /// Pair onset `i` of `f` with onset `i + k` of `g` on the common clock and
    /// minimise over the cyclic shift `k`. Where a pattern starts does not
    /// matter, but shifting it in time does.
    #[default]
    Indexed,
    /// For each cyclic shift of `g`, re-anchor both patterns at a pair of
    /// corresponding onsets (onset `j` of `f`, onset `j + k` of `g`) and take
    /// the best anchor pair. Invariant under shifting either pattern in time.
    Anchored,
    /// For each cyclic shift of `g`, minimise over a continuous rotation of
    /// the cycle by evaluating the piecewise-linear cost at all of its kinks.
    Continuous,
}

/// Rhythm distance with the default [`RhythmAlignment::Indexed`] alignment.
pub fn rhythm_distance(f: &RhythmPattern, g: &RhythmPattern) -> Result<f64> {
    rhythm_distance_with(f, g, RhythmAlignment::Indexed)
}

/// Minimum over cyclic shifts of the summed necklace distances between
/// aligned onsets.
pub fn rhythm_distance_with(
    f: &RhythmPattern,
    g: &RhythmPattern,
    alignment: RhythmAlignment,
) -> Result<f64> {
    if f.len() != g.len() {
        return Err(Error::Cardinality {
            left: f.len(),
            right: g.len(),
        });
    }
    let n = f.len();
    let mut best = f64::INFINITY;
    for shift in 0..n {
        let cost = match alignment {
            RhythmAlignment::Indexed => indexed_cost(&f.0, &g.0, shift),
            RhythmAlignment::Anchored => anchored_cost(&f.0, &g.0, shift),
            RhythmAlignment::Continuous => continuous_cost(&f.0, &g.0, shift),
        };
        best = best.min(cost);
    }
    Ok(best)
}

fn indexed_cost(f: &[CirclePoint], g: &[CirclePoint], shift: usize) -> f64 {
    let n = f.len();
    (0..n).map(|i| necklace_distance(f[i], g[(i + shift) % n])).sum()
}

fn anchored_cost(f: &[CirclePoint], g: &[CirclePoint], shift: usize) -> f64 {
    let n = f.len();
    (0..n)
        .map(|anchor| {
            let f0 = f[anchor];
            let g0 = g[(anchor + shift) % n];
            (0..n)
                .map(|i| necklace_distance(f[i].offset_from(f0), g[(i + shift) % n].offset_from(g0)))
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
}

fn continuous_cost(f: &[CirclePoint], g: &[CirclePoint], shift: usize) -> f64 {
    let n = f.len();
    let gaps: Vec<f64> = (0..n)
        .map(|i| f[i].value() - g[(i + shift) % n].value())
        .collect();
    // each term |gap_i - theta| on the circle kinks at gap_i (convex) and at
    // gap_i + 1/2 (concave); a piecewise-linear minimum sits on a kink
    gaps.iter()
        .flat_map(|&x| [x, x + 0.5])
        .map(|theta| {
            let theta = CirclePoint::new(theta);
            gaps.iter()
                .map(|&x| necklace_distance(CirclePoint::new(x), theta))
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
}
