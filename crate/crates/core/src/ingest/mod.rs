//! Symbolic music input: Standard MIDI Files and the sequences extracted from them.

pub mod fixtures;
mod smf;

pub use smf::{parse_midi, write_midi};

use std::collections::BTreeMap;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::metrics::{ChordClass, CirclePoint, RhythmPattern};

/// Times in beats (quarter notes), exact.
pub type Beats = Ratio<u64>;

/// Default chord segmentation window: 1/32 beat.
pub fn default_chord_window() -> Beats {
    Ratio::new(1, 32)
}

/// A sounded note.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoteEvent {
    pub onset: Beats,
    pub duration: Beats,
    pub key: u8,
    pub velocity: u8,
    pub track: u16,
    pub channel: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Score {
    pub format: u16,
    /// Ticks per quarter note.
    pub division: u16,
    /// Sorted by (onset, track, key).
    pub events: Vec<NoteEvent>,
}

impl Score {
    pub fn new(format: u16, division: u16, mut events: Vec<NoteEvent>) -> Self {
        events.sort_by(|a, b| {
            (a.onset, a.track, a.key, a.channel, a.duration)
                .cmp(&(b.onset, b.track, b.key, b.channel, b.duration))
        });
        Self {
            format,
            division,
            events,
        }
    }

    /// Track indices that carry at least one note, ascending.
    pub fn tracks(&self) -> Vec<u16> {
        let mut t: Vec<u16> = self.events.iter().map(|e| e.track).collect();
        t.sort_unstable();
        t.dedup();
        t
    }
}

/// Which notes of a score to analyse. Empty filters select everything.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Selector {
    pub tracks: Vec<u16>,
    pub channels: Vec<u8>,
}

impl Selector {
    pub fn all() -> Self {
        Self::default()
    }

    pub fn track(track: u16) -> Self {
        Self {
            tracks: vec![track],
            channels: Vec::new(),
        }
    }

    pub fn channel(channel: u8) -> Self {
        Self {
            tracks: Vec::new(),
            channels: vec![channel],
        }
    }

    pub fn matches(&self, e: &NoteEvent) -> bool {
        (self.tracks.is_empty() || self.tracks.contains(&e.track))
            && (self.channels.is_empty() || self.channels.contains(&e.channel))
    }
}

/// Chronological pitch classes of a melody.
#[derive(Debug, Clone, PartialEq)]
pub struct MelodySequence {
    pub pitches: Vec<CirclePoint>,
    /// MIDI keys the pitch classes came from, for labelling.
    pub keys: Vec<u8>,
}

impl MelodySequence {
    pub fn len(&self) -> usize {
        self.pitches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pitches.is_empty()
    }
}

/// Chords in chronological order.
#[derive(Debug, Clone, PartialEq)]
pub struct ChordSequence {
    pub chords: Vec<ChordClass>,
    /// Onset of the window slot each chord occupies.
    pub onsets: Vec<Beats>,
    pub keys: Vec<Vec<u8>>,
}

impl ChordSequence {
    /// The common chord size, or `None` if the sequence is ragged.
    pub fn uniform_size(&self) -> Option<usize> {
        let first = self.chords.first()?.len();
        self.chords.iter().all(|c| c.len() == first).then_some(first)
    }

    /// Number of chords of each size.
    pub fn cardinality_report(&self) -> BTreeMap<usize, usize> {
        let mut report = BTreeMap::new();
        for c in &self.chords {
            *report.entry(c.len()).or_insert(0) += 1;
        }
        report
    }

    pub fn len(&self) -> usize {
        self.chords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chords.is_empty()
    }
}

/// Pitch classes of the selected notes in onset order; notes starting together
/// are ordered by ascending key. Repeated pitches are kept.
pub fn extract_melody(score: &Score, selector: &Selector) -> Result<MelodySequence> {
    let mut notes: Vec<&NoteEvent> = score.events.iter().filter(|e| selector.matches(e)).collect();
    if notes.is_empty() {
        return Err(Error::EmptyInput("selector matches no notes".into()));
    }
    notes.sort_by_key(|e| (e.onset, e.key));
    Ok(MelodySequence {
        pitches: notes.iter().map(|e| CirclePoint::from_midi_key(e.key)).collect(),
        keys: notes.iter().map(|e| e.key).collect(),
    })
}

/// Groups the selected notes into chords by quantising onsets to `window`.
/// Empty slots are skipped.
pub fn extract_chords(score: &Score, selector: &Selector, window: Beats) -> Result<ChordSequence> {
    if window == Ratio::from_integer(0) {
        return Err(Error::Config("chord window must be positive".into()));
    }
    let mut slots: BTreeMap<u64, Vec<u8>> = BTreeMap::new();
    for e in score.events.iter().filter(|e| selector.matches(e)) {
        let slot = (e.onset / window).floor().to_integer();
        slots.entry(slot).or_default().push(e.key);
    }
    let mut seq = ChordSequence {
        chords: Vec::with_capacity(slots.len()),
        onsets: Vec::with_capacity(slots.len()),
        keys: Vec::with_capacity(slots.len()),
    };
    for (slot, mut keys) in slots {
        keys.sort_unstable();
        seq.chords.push(ChordClass::from_midi_keys(&keys)?);
        seq.onsets.push(window * Ratio::from_integer(slot));
        seq.keys.push(keys);
    }
    Ok(seq)
}

fn onset_phase(onset: Beats, cycle: Beats) -> Ratio<u64> {
    let turns = onset / cycle;
    turns - turns.floor()
}

/// Onset positions of the selected notes as fractions of `cycle`, reduced
/// modulo one, deduplicated and sorted.
pub fn extract_onsets(score: &Score, selector: &Selector, cycle: Beats) -> Result<RhythmPattern> {
    if cycle == Ratio::from_integer(0) {
        return Err(Error::Config("cycle length must be positive".into()));
    }
    let mut phases: Vec<Ratio<u64>> = score
        .events
        .iter()
        .filter(|e| selector.matches(e))
        .map(|e| onset_phase(e.onset, cycle))
        .collect();
    if phases.is_empty() {
        return Err(Error::EmptyInput("no onsets selected".into()));
    }
    phases.sort_unstable();
    phases.dedup();
    RhythmPattern::new(
        phases
            .into_iter()
            .map(|p| CirclePoint::new(*p.numer() as f64 / *p.denom() as f64))
            .collect(),
    )
}

/// One rhythm pattern per track that has notes.
pub fn extract_track_rhythms(score: &Score, cycle: Beats) -> Result<Vec<(u16, RhythmPattern)>> {
    score
        .tracks()
        .into_iter()
        .map(|t| Ok((t, extract_onsets(score, &Selector::track(t), cycle)?)))
        .collect()
}
