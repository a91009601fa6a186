//! Built-in inputs, addressable by name.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::ingest::{extract_chords, extract_onsets, extract_track_rhythms, fixtures, Selector};
use crate::metrics::{pitch_class_of, RhythmAlignment};
use crate::pointcloud::{DistanceMatrix, Metric, Payload, PointCloud};

const NOTE_NAMES: [&str; 12] = ["C", "C#", "D", "Eb", "E", "F", "F#", "G", "Ab", "A", "Bb", "B"];

/// What a dataset provides: a cloud with its natural metric, or a ready matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum DatasetData {
    Cloud { cloud: PointCloud, metric: Metric },
    Matrix(DistanceMatrix),
}

/// What the points of a dataset are.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Content {
    /// Pitch classes of a melody, in order.
    Melody,
    /// Onset positions within one cycle.
    Onsets,
    /// Chords, in order.
    Chords,
    /// Whole rhythm patterns.
    Rhythms,
    /// Distances only.
    Matrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: &'static str,
    pub description: &'static str,
    pub content: Content,
    pub data: DatasetData,
}

impl Dataset {
    pub fn len(&self) -> usize {
        match &self.data {
            DatasetData::Cloud { cloud, .. } => cloud.len(),
            DatasetData::Matrix(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// (name, description) of every built-in dataset.
pub const CATALOGUE: [(&str, &str); 9] = [
    ("ewe", "Ewe standard bell pattern: 7 onsets on a 12-pulse cycle, necklace metric"),
    ("yoruba", "standard pattern started from its 4th onset, necklace metric"),
    ("bemba", "standard pattern started from its 5th onset, necklace metric"),
    ("cmajor-scale", "C major scale from middle C, 8 equal-tempered frequencies, pitch-class metric"),
    ("circle-of-fifths", "the 12 major scales in fifths order as 7-note chords, chord-class metric"),
    ("afro-cuban", "6 sixteen-pulse Afro-Cuban timelines, rhythm metric"),
    ("clave-son", "clave son: 5 onsets on a 16-pulse cycle, necklace metric"),
    ("square", "corners of the unit square, Euclidean distances"),
    ("equilateral", "3 points at mutual distance 1"),
];

pub fn list() -> &'static [(&'static str, &'static str)] {
    &CATALOGUE
}

pub fn load(name: &str) -> Result<Dataset> {
    let (name, description) = *CATALOGUE
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Lookup(format!("no built-in dataset named {name:?}")))?;
    let (content, data) = match name {
        "ewe" => (Content::Onsets, onset_cloud(&fixtures::ewe(), 2)?),
        "yoruba" => (Content::Onsets, onset_cloud(&fixtures::standard_pattern(3), 2)?),
        "bemba" => (Content::Onsets, onset_cloud(&fixtures::standard_pattern(4), 2)?),
        "cmajor-scale" => (Content::Melody, cmajor_scale()?),
        "circle-of-fifths" => (Content::Chords, circle_of_fifths()?),
        "afro-cuban" => (Content::Rhythms, afro_cuban()?),
        "clave-son" => (Content::Onsets, onset_cloud(&fixtures::clave_son(), 4)?),
        "square" => {
            let s = 2f64.sqrt();
            let m = DistanceMatrix::from_lower(4, vec![1.0, s, 1.0, 1.0, s, 1.0])?;
            (Content::Matrix, DatasetData::Matrix(m))
        }
        "equilateral" => (Content::Matrix, DatasetData::Matrix(DistanceMatrix::from_lower(3, vec![1.0; 3])?)),
        _ => unreachable!("catalogue entry without a loader"),
    };
    Ok(Dataset {
        name,
        description,
        content,
        data,
    })
}

fn onset_cloud(score: &crate::ingest::Score, cycle: u64) -> Result<DatasetData> {
    let pattern = extract_onsets(score, &Selector::all(), Ratio::from_integer(cycle))?;
    let points: Vec<Payload> = pattern.onsets().iter().map(|&p| Payload::Point(p)).collect();
    let labels = pattern.onsets().iter().map(|p| format!("{:.4}", p.value())).collect();
    Ok(DatasetData::Cloud {
        cloud: PointCloud::new(points, labels)?,
        metric: Metric::Necklace,
    })
}

fn cmajor_scale() -> Result<DatasetData> {
    let steps = [0, 2, 4, 5, 7, 9, 11, 12];
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for (i, &s) in steps.iter().enumerate() {
        let hz = 261.6 * 2f64.powf(f64::from(s) / 12.0);
        points.push(Payload::Point(pitch_class_of(hz)?));
        labels.push(format!("{}{}", NOTE_NAMES[s as usize % 12], if i == 7 { "5" } else { "4" }));
    }
    Ok(DatasetData::Cloud {
        cloud: PointCloud::new(points, labels)?,
        metric: Metric::Necklace,
    })
}

fn circle_of_fifths() -> Result<DatasetData> {
    let seq = extract_chords(&fixtures::circle_of_fifths(), &Selector::all(), crate::ingest::default_chord_window())?;
    let labels = (0..seq.len()).map(|i| NOTE_NAMES[(7 * i) % 12].to_string()).collect();
    let points = seq.chords.into_iter().map(Payload::Chord).collect();
    Ok(DatasetData::Cloud {
        cloud: PointCloud::new(points, labels)?,
        metric: Metric::ChordClass,
    })
}

fn afro_cuban() -> Result<DatasetData> {
    let rhythms = extract_track_rhythms(&fixtures::afro_cuban(), Ratio::from_integer(4))?;
    let labels = rhythms
        .iter()
        .map(|(t, _)| fixtures::AFRO_CUBAN[usize::from(*t)].0.to_string())
        .collect();
    let points = rhythms.into_iter().map(|(_, r)| Payload::Rhythm(r)).collect();
    Ok(DatasetData::Cloud {
        cloud: PointCloud::new(points, labels)?,
        metric: Metric::Rhythm(RhythmAlignment::Indexed),
    })
}
