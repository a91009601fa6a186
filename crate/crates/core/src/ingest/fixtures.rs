//! Small hand-built scores used as test and demo inputs. The `.mid` files in
//! the crate's `fixtures/` directory are these scores written with
//! [`write_midi`](super::write_midi).

use num_rational::Ratio;

use super::{Beats, NoteEvent, Score};

/// Twelve-pulse standard bell pattern (Ewe ordering), one pulse per 1/6 beat.
pub const STANDARD_PATTERN: [u8; 12] = [1, 0, 1, 0, 1, 1, 0, 1, 0, 1, 0, 1];

/// The Afro-Cuban timelines, sixteen pulses each.
pub const AFRO_CUBAN: [(&str, [u8; 16]); 6] = [
    ("bossa-nova", [1, 0, 0, 1, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 0]),
    ("gahu", [1, 0, 0, 1, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0]),
    ("rumba", [1, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 1, 0, 0, 0]),
    ("shiko", [1, 0, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 0]),
    ("son", [1, 0, 0, 1, 0, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 0]),
    ("soukous", [1, 0, 0, 1, 0, 0, 1, 0, 0, 0, 1, 1, 0, 0, 0, 0]),
];

/// Major-scale degrees in semitones above the tonic.
pub const MAJOR_SCALE: [u8; 7] = [0, 2, 4, 5, 7, 9, 11];

const DIVISION: u16 = 96;

fn note(onset: Beats, duration: Beats, key: u8, track: u16, channel: u8) -> NoteEvent {
    NoteEvent {
        onset,
        duration,
        key,
        velocity: 96,
        track,
        channel,
    }
}

fn timeline_notes(pulses: &[u8], pulse: Beats, repeats: u64, track: u16, key: u8) -> Vec<NoteEvent> {
    let len = pulses.len() as u64;
    (0..repeats)
        .flat_map(|r| {
            pulses
                .iter()
                .enumerate()
                .filter(|(_, &p)| p != 0)
                .map(move |(i, _)| pulse * Ratio::from_integer(r * len + i as u64))
        })
        .map(|onset| note(onset, pulse, key, track, 9))
        .collect()
}

/// The standard pattern started from its `rotation`-th onset, played twice.
/// Cycle length 2 beats.
pub fn standard_pattern(rotation: usize) -> Score {
    let onsets: Vec<usize> = (0..12).filter(|&i| STANDARD_PATTERN[i] != 0).collect();
    let start = onsets[rotation % onsets.len()];
    let rotated: Vec<u8> = (0..12).map(|i| STANDARD_PATTERN[(i + start) % 12]).collect();
    Score::new(0, DIVISION, timeline_notes(&rotated, Ratio::new(1, 6), 2, 0, 76))
}

pub fn ewe() -> Score {
    standard_pattern(0)
}

/// C D E F G A B C, one quarter note each, from middle C.
pub fn c_major_scale() -> Score {
    let keys = [60u8, 62, 64, 65, 67, 69, 71, 72];
    Score::new(
        0,
        DIVISION,
        keys.iter()
            .enumerate()
            .map(|(i, &k)| note(Ratio::from_integer(i as u64), Ratio::from_integer(1), k, 0, 0))
            .collect(),
    )
}

/// Sixteen-pulse clave son, one pulse per sixteenth note; cycle 4 beats.
pub fn clave_son() -> Score {
    Score::new(0, DIVISION, timeline_notes(&AFRO_CUBAN[4].1, Ratio::new(1, 4), 1, 0, 75))
}

/// One track per Afro-Cuban timeline; cycle 4 beats.
pub fn afro_cuban() -> Score {
    let events = AFRO_CUBAN
        .iter()
        .enumerate()
        .flat_map(|(t, (_, pulses))| timeline_notes(pulses, Ratio::new(1, 4), 1, t as u16, 75))
        .collect();
    Score::new(1, DIVISION, events)
}

/// The twelve major scales in circle-of-fifths order, each sounded as a
/// seven-note block for one bar.
pub fn circle_of_fifths() -> Score {
    let events = (0..12u64)
        .flat_map(|i| {
            let tonic = ((7 * i) % 12) as u8;
            MAJOR_SCALE
                .iter()
                .map(move |&deg| note(Ratio::from_integer(4 * i), Ratio::from_integer(4), 60 + tonic + deg, 0, 0))
        })
        .collect();
    Score::new(0, DIVISION, events)
}

/// Four voices (one track each) sounding I, IV, V in C major; the alto
/// enters one tick late on the second chord.
pub fn chorale() -> Score {
    let voicings: [[u8; 4]; 3] = [[48, 55, 64, 72], [53, 57, 65, 72], [55, 59, 62, 67]];
    let mut events = Vec::new();
    for (c, chord) in voicings.iter().enumerate() {
        for (voice, &key) in chord.iter().enumerate() {
            let mut onset = Ratio::from_integer(2 * c as u64);
            if c == 1 && voice == 2 {
                onset += Ratio::new(1, u64::from(DIVISION));
            }
            let end = Ratio::from_integer(2 * c as u64 + 2);
            events.push(note(onset, end - onset, key, voice as u16, voice as u8));
        }
    }
    Score::new(1, DIVISION, events)
}

/// Every fixture with the file name it is shipped under.
pub fn all() -> Vec<(&'static str, Score)> {
    vec![
        ("ewe.mid", ewe()),
        ("yoruba.mid", standard_pattern(3)),
        ("bemba.mid", standard_pattern(4)),
        ("c_major_scale.mid", c_major_scale()),
        ("clave_son.mid", clave_son()),
        ("afro_cuban.mid", afro_cuban()),
        ("circle_of_fifths.mid", circle_of_fifths()),
        ("chorale.mid", chorale()),
    ]
}
