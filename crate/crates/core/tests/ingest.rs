use std::path::Path;

use musitopo::ingest::{
    extract_chords, extract_melody, extract_onsets, extract_track_rhythms, fixtures, parse_midi, write_midi,
    default_chord_window, NoteEvent, Score, Selector,
};
use musitopo::Error;
use num_rational::Ratio;
use proptest::prelude::*;

fn shipped(name: &str) -> Score {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    parse_midi(&std::fs::read(&path).unwrap()).unwrap()
}

fn onsets_in_pulses(score: &Score, cycle: u64, pulses: u64) -> Vec<u64> {
    let pattern = extract_onsets(score, &Selector::all(), Ratio::from_integer(cycle)).unwrap();
    pattern.onsets().iter().map(|p| (p.value() * pulses as f64).round() as u64).collect()
}

#[test]
fn shipped_files_match_generators() {
    for (name, score) in fixtures::all() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
        let bytes = std::fs::read(&path).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(bytes, write_midi(&score).unwrap(), "{name} is stale");
        assert_eq!(parse_midi(&bytes).unwrap(), score, "{name}");
    }
}

#[test]
fn ewe_onsets() {
    assert_eq!(onsets_in_pulses(&shipped("ewe.mid"), 2, 12), vec![0, 2, 4, 5, 7, 9, 11]);
}

#[test]
fn clave_son_onsets() {
    assert_eq!(onsets_in_pulses(&shipped("clave_son.mid"), 4, 16), vec![0, 3, 6, 10, 12]);
}

#[test]
fn standard_pattern_rotations_share_intervals() {
    let gaps = |score: &Score| {
        let on = onsets_in_pulses(score, 2, 12);
        let mut g: Vec<u64> = (0..on.len()).map(|i| (on[(i + 1) % on.len()] + 12 - on[i]) % 12).collect();
        g.sort_unstable();
        g
    };
    let ewe = gaps(&shipped("ewe.mid"));
    assert_eq!(ewe, vec![1, 1, 2, 2, 2, 2, 2]);
    assert_eq!(gaps(&shipped("yoruba.mid")), ewe);
    assert_eq!(gaps(&shipped("bemba.mid")), ewe);
}

#[test]
fn chorale_has_three_four_note_chords() {
    let seq = extract_chords(&shipped("chorale.mid"), &Selector::all(), default_chord_window()).unwrap();
    assert_eq!(seq.len(), 3);
    assert_eq!(seq.uniform_size(), Some(4));
    assert_eq!(seq.keys[1], vec![53, 57, 65, 72]);
    // a window finer than the late tick splits the second chord
    let fine = extract_chords(&shipped("chorale.mid"), &Selector::all(), Ratio::new(1, 192)).unwrap();
    assert_eq!(fine.len(), 4);
    assert_eq!(fine.uniform_size(), None);
}

#[test]
fn c_major_melody_wraps_to_its_start() {
    let m = extract_melody(&shipped("c_major_scale.mid"), &Selector::all()).unwrap();
    assert_eq!(m.keys, vec![60, 62, 64, 65, 67, 69, 71, 72]);
    assert_eq!(m.pitches[0], m.pitches[7]);
}

#[test]
fn circle_of_fifths_chords() {
    let seq = extract_chords(&shipped("circle_of_fifths.mid"), &Selector::all(), default_chord_window()).unwrap();
    assert_eq!(seq.len(), 12);
    assert_eq!(seq.uniform_size(), Some(7));
    for (i, keys) in seq.keys.iter().enumerate() {
        let mut classes: Vec<u8> = keys.iter().map(|k| k % 12).collect();
        classes.sort_unstable();
        let tonic = (7 * i as u8) % 12;
        let mut expected: Vec<u8> = fixtures::MAJOR_SCALE.iter().map(|d| (d + tonic) % 12).collect();
        expected.sort_unstable();
        assert_eq!(classes, expected, "scale {i}");
    }
}

#[test]
fn afro_cuban_tracks() {
    let rhythms = extract_track_rhythms(&shipped("afro_cuban.mid"), Ratio::from_integer(4)).unwrap();
    assert_eq!(rhythms.len(), 6);
    for (track, pattern) in rhythms {
        let (name, timeline) = fixtures::AFRO_CUBAN[usize::from(track)];
        let expected: Vec<f64> =
            (0..16).filter(|&i| timeline[i] == 1).map(|i| i as f64 / 16.0).collect();
        let got: Vec<f64> = pattern.onsets().iter().map(|p| p.value()).collect();
        assert_eq!(got, expected, "{name}");
    }
}

/// Format 0, division 96: tempo meta, C4 for one beat, then E4 and G4 under
/// running status with velocity-0 releases and a two-byte delta.
#[test]
fn hand_assembled_file() {
    let track: Vec<u8> = vec![
        0x00, 0xFF, 0x51, 0x03, 0x07, 0xA1, 0x20, // tempo
        0x00, 0x90, 60, 100, //
        0x60, 0x80, 60, 0, // one beat later
        0x00, 0x90, 64, 90, // running status from here
        0x00, 67, 90, //
        0x81, 0x40, 64, 0, // 192 ticks
        0x00, 67, 0, //
        0x00, 0xFF, 0x2F, 0x00,
    ];
    let mut bytes = b"MThd".to_vec();
    bytes.extend_from_slice(&[0, 0, 0, 6, 0, 0, 0, 1, 0, 96]);
    bytes.extend_from_slice(b"MTrk");
    bytes.extend_from_slice(&(track.len() as u32).to_be_bytes());
    bytes.extend_from_slice(&track);

    let score = parse_midi(&bytes).unwrap();
    let summary: Vec<(Ratio<u64>, Ratio<u64>, u8, u8)> =
        score.events.iter().map(|e| (e.onset, e.duration, e.key, e.velocity)).collect();
    assert_eq!(
        summary,
        vec![
            (Ratio::from_integer(0), Ratio::from_integer(1), 60, 100),
            (Ratio::from_integer(1), Ratio::from_integer(2), 64, 90),
            (Ratio::from_integer(1), Ratio::from_integer(2), 67, 90),
        ]
    );
}

#[test]
fn rejects_unterminated_note() {
    let track: Vec<u8> = vec![0x00, 0x90, 60, 100, 0x00, 0xFF, 0x2F, 0x00];
    let mut bytes = b"MThd".to_vec();
    bytes.extend_from_slice(&[0, 0, 0, 6, 0, 0, 0, 1, 0, 96]);
    bytes.extend_from_slice(b"MTrk");
    bytes.extend_from_slice(&(track.len() as u32).to_be_bytes());
    bytes.extend_from_slice(&track);
    assert!(matches!(parse_midi(&bytes), Err(Error::Parse { .. })));
}

#[test]
fn merged_tracks_follow_onset_order() {
    let score = Score::new(
        1,
        96,
        vec![
            note(Ratio::from_integer(1), 1, 64, 1, 1),
            note(Ratio::from_integer(0), 1, 60, 0, 0),
            note(Ratio::new(1, 2), 1, 62, 1, 1),
        ],
    );
    let parsed = parse_midi(&write_midi(&score).unwrap()).unwrap();
    assert_eq!(extract_melody(&parsed, &Selector::all()).unwrap().keys, vec![60, 62, 64]);
    assert_eq!(extract_melody(&parsed, &Selector::track(1)).unwrap().keys, vec![62, 64]);
    assert_eq!(extract_melody(&parsed, &Selector::channel(0)).unwrap().keys, vec![60]);
}

fn note(onset: Ratio<u64>, beats: u64, key: u8, track: u16, channel: u8) -> NoteEvent {
    NoteEvent {
        onset,
        duration: Ratio::from_integer(beats),
        key,
        velocity: 80,
        track,
        channel,
    }
}

/// Notes on whole ticks; notes sharing (track, channel, key) never overlap.
fn score_strategy() -> impl Strategy<Value = Score> {
    let division = prop::sample::select(vec![24u16, 96, 480]);
    (division, prop::collection::vec((0u64..400, 1u64..60, 0u8..12, 1u8..128, 0u16..3, 0u8..3), 1..40)).prop_map(
        |(division, raw)| {
            let ticks = |t: u64| Ratio::new(t, u64::from(division));
            let mut events: Vec<NoteEvent> = Vec::new();
            for (start, len, key, velocity, track, channel) in raw {
                let key = 48 + key;
                let clash = events.iter().any(|e| {
                    e.track == track
                        && e.channel == channel
                        && e.key == key
                        && e.onset < ticks(start + len)
                        && ticks(start) < e.onset + e.duration
                });
                if !clash {
                    events.push(NoteEvent {
                        onset: ticks(start),
                        duration: ticks(len),
                        key,
                        velocity,
                        track,
                        channel,
                    });
                }
            }
            Score::new(1, division, events)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn smf_round_trip(score in score_strategy()) {
        let bytes = write_midi(&score).unwrap();
        prop_assert_eq!(parse_midi(&bytes).unwrap(), score);
    }

    #[test]
    fn truncated_files_never_panic(score in score_strategy(), cut in 0.0f64..1.0) {
        let bytes = write_midi(&score).unwrap();
        let keep = ((bytes.len() - 1) as f64 * cut) as usize;
        prop_assert!(parse_midi(&bytes[..keep]).is_err());
    }

    #[test]
    fn corrupted_files_never_panic(score in score_strategy(), at in any::<prop::sample::Index>(), byte in any::<u8>()) {
        let mut bytes = write_midi(&score).unwrap();
        let i = at.index(bytes.len());
        bytes[i] = byte;
        let _ = parse_midi(&bytes);
    }

    #[test]
    fn onsets_ignore_duration_and_velocity(score in score_strategy(), velocity in 1u8..128) {
        let mut altered = score.clone();
        for e in &mut altered.events {
            e.duration = Ratio::new(1, u64::from(score.division));
            e.velocity = velocity;
        }
        let cycle = Ratio::from_integer(4);
        let a = extract_onsets(&score, &Selector::all(), cycle);
        let b = extract_onsets(&altered, &Selector::all(), cycle);
        prop_assert_eq!(a.ok(), b.ok());
    }
}
