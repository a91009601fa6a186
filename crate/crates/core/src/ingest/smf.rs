//! Standard MIDI File reader (formats 0 and 1) and a minimal writer.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_rational::Ratio;

use super::{NoteEvent, Score};
use crate::error::{Error, Result};

const NOTE_OFF: u8 = 0x8;
const NOTE_ON: u8 = 0x9;
const META: u8 = 0xFF;
const SYSEX: u8 = 0xF0;
const SYSEX_ESCAPE: u8 = 0xF7;
const END_OF_TRACK: u8 = 0x2F;

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    fn error<T>(&self, offset: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset,
            message: message.into(),
        })
    }

    fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }

    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        if self.remaining() < n {
            return self.error(
                self.pos,
                format!("truncated {what}: need {n} bytes, {} left", self.remaining()),
            );
        }
        let slice = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }

    fn u8(&mut self, what: &str) -> Result<u8> {
        Ok(self.take(1, what)?[0])
    }

    fn u16(&mut self, what: &str) -> Result<u16> {
        let b = self.take(2, what)?;
        Ok(u16::from_be_bytes([b[0], b[1]]))
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        let b = self.take(4, what)?;
        Ok(u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn data_byte(&mut self, what: &str) -> Result<u8> {
        let at = self.pos;
        let b = self.u8(what)?;
        if b & 0x80 != 0 {
            return self.error(at, format!("{what}: expected data byte, found status 0x{b:02X}"));
        }
        Ok(b)
    }

    /// Variable-length quantity, at most four bytes.
    fn vlq(&mut self, what: &str) -> Result<u32> {
        let start = self.pos;
        let mut value = 0u32;
        for _ in 0..4 {
            let b = self.u8(what)?;
            value = (value << 7) | u32::from(b & 0x7F);
            if b & 0x80 == 0 {
                return Ok(value);
            }
        }
        self.error(start, format!("{what}: variable-length quantity longer than 4 bytes"))
    }
}

/// Parses a Standard MIDI File into a [`Score`].
///
/// Running status is honoured, a NoteOn with velocity 0 ends a note, and
/// tempo, meta, SysEx and controller events are skipped. Notes are matched
/// first-in first-out per (track, channel, key); a note still sounding at the
/// end of its track is an error. Zero-length notes are dropped.
pub fn parse_midi(bytes: &[u8]) -> Result<Score> {
    let mut r = Reader::new(bytes);
    let magic = r.take(4, "header chunk id")?;
    if magic != b"MThd" {
        return r.error(0, "missing MThd header");
    }
    let header_len = r.u32("header length")? as usize;
    if header_len < 6 {
        return r.error(4, format!("header length {header_len} < 6"));
    }
    let header_at = r.pos;
    let format = r.u16("format")?;
    let ntracks = r.u16("track count")?;
    let division_at = r.pos;
    let division = r.u16("division")?;
    r.take(header_len - 6, "header padding")?;
    match format {
        0 | 1 => {}
        2 => return r.error(header_at, "SMF format 2 is not supported"),
        other => return r.error(header_at, format!("unknown SMF format {other}")),
    }
    if division & 0x8000 != 0 {
        return r.error(division_at, "SMPTE time division is not supported");
    }
    if division == 0 {
        return r.error(division_at, "division must be positive");
    }

    let mut events = Vec::new();
    let mut track_index: u16 = 0;
    while track_index < ntracks {
        let chunk_at = r.pos;
        let id = r.take(4, "chunk id")?;
        let len = r.u32("chunk length")? as usize;
        let body_at = r.pos;
        let body = r.take(len, "chunk body").map_err(|_| Error::Parse {
            offset: chunk_at,
            message: format!(
                "truncated chunk: declared {len} bytes, {} available",
                bytes.len() - body_at
            ),
        })?;
        if id != b"MTrk" {
            continue;
        }
        parse_track(body, body_at, track_index, division, &mut events)?;
        track_index += 1;
    }

    events.sort_by(|a: &NoteEvent, b: &NoteEvent| {
        (a.onset, a.track, a.key, a.channel, a.duration).cmp(&(
            b.onset, b.track, b.key, b.channel, b.duration,
        ))
    });
    Ok(Score {
        format,
        division,
        events,
    })
}

struct OpenNote {
    tick: u64,
    velocity: u8,
    offset: usize,
}

fn parse_track(
    body: &[u8],
    base: usize,
    track: u16,
    division: u16,
    out: &mut Vec<NoteEvent>,
) -> Result<()> {
    let mut r = Reader::new(body);
    let rebase = |e: Error| match e {
        Error::Parse { offset, message } => Error::Parse {
            offset: offset + base,
            message,
        },
        other => other,
    };
    let mut tick: u64 = 0;
    let mut running: Option<u8> = None;
    let mut open: HashMap<(u8, u8), VecDeque<OpenNote>> = HashMap::new();
    let beats = |ticks: u64| Ratio::new(ticks, u64::from(division));

    while r.remaining() > 0 {
        tick += u64::from(r.vlq("delta time").map_err(rebase)?);
        let event_at = r.pos;
        let first = r.u8("event").map_err(rebase)?;
        let status = if first & 0x80 != 0 {
            first
        } else {
            r.pos -= 1;
            match running {
                Some(s) => s,
                None => {
                    return Err(Error::Parse {
                        offset: base + event_at,
                        message: "data byte without running status".into(),
                    })
                }
            }
        };

        match status {
            META => {
                running = None;
                let kind = r.u8("meta type").map_err(rebase)?;
                let len = r.vlq("meta length").map_err(rebase)? as usize;
                r.take(len, "meta data").map_err(rebase)?;
                if kind == END_OF_TRACK {
                    break;
                }
            }
            SYSEX | SYSEX_ESCAPE => {
                running = None;
                let len = r.vlq("sysex length").map_err(rebase)? as usize;
                r.take(len, "sysex data").map_err(rebase)?;
            }
            0xF1..=0xFE => {
                return Err(Error::Parse {
                    offset: base + event_at,
                    message: format!("unexpected system message 0x{status:02X} in track"),
                });
            }
            _ => {
                running = Some(status);
                let kind = status >> 4;
                let channel = status & 0x0F;
                match kind {
                    NOTE_ON | NOTE_OFF => {
                        let key = r.data_byte("note key").map_err(rebase)?;
                        let velocity = r.data_byte("note velocity").map_err(rebase)?;
                        if kind == NOTE_ON && velocity > 0 {
                            open.entry((channel, key)).or_default().push_back(OpenNote {
                                tick,
                                velocity,
                                offset: base + event_at,
                            });
                        } else if let Some(note) =
                            open.get_mut(&(channel, key)).and_then(VecDeque::pop_front)
                        {
                            if tick > note.tick {
                                out.push(NoteEvent {
                                    onset: beats(note.tick),
                                    duration: beats(tick - note.tick),
                                    key,
                                    velocity: note.velocity,
                                    track,
                                    channel,
                                });
                            }
                        }
                    }
                    0xC | 0xD => {
                        r.data_byte("channel message").map_err(rebase)?;
                    }
                    _ => {
                        r.data_byte("channel message").map_err(rebase)?;
                        r.data_byte("channel message").map_err(rebase)?;
                    }
                }
            }
        }
    }

    if let Some(note) = open.values().flat_map(|q| q.iter()).min_by_key(|n| n.offset) {
        return Err(Error::Parse {
            offset: note.offset,
            message: format!("NoteOn at tick {} is never released", note.tick),
        });
    }
    Ok(())
}

fn push_vlq(out: &mut Vec<u8>, mut value: u32) {
    let mut buf = [0u8; 4];
    let mut n = 0;
    loop {
        buf[n] = (value & 0x7F) as u8;
        n += 1;
        value >>= 7;
        if value == 0 {
            break;
        }
    }
    for i in (0..n).rev() {
        out.push(if i > 0 { buf[i] | 0x80 } else { buf[i] });
    }
}

fn to_ticks(beats: Ratio<u64>, division: u16) -> Result<u64> {
    let ticks = beats * Ratio::from_integer(u64::from(division));
    if !ticks.is_integer() {
        return Err(Error::Domain(format!(
            "time {beats} beats is not a whole number of ticks at division {division}"
        )));
    }
    Ok(ticks.to_integer())
}

/// Serialises a score as an SMF with one track chunk per track index, using
/// running status and NoteOff messages. Format 0 is written only for a
/// single-track format-0 score.
///
/// Intended for building fixtures; onsets and durations must fall on whole ticks.
pub fn write_midi(score: &Score) -> Result<Vec<u8>> {
    if score.division == 0 || score.division & 0x8000 != 0 {
        return Err(Error::Domain(format!("unsupported division {}", score.division)));
    }
    let track_count = score
        .events
        .iter()
        .map(|e| usize::from(e.track) + 1)
        .max()
        .unwrap_or(1);
    if score.format == 0 && track_count > 1 {
        return Err(Error::Domain("format 0 holds a single track".into()));
    }

    // (tick, is_note_on, key, channel) -> status + data
    let mut tracks: Vec<BTreeMap<(u64, bool, u8, u8, usize), [u8; 3]>> =
        vec![BTreeMap::new(); track_count];
    for (i, e) in score.events.iter().enumerate() {
        if e.key > 127 || e.velocity > 127 || e.velocity == 0 || e.channel > 15 {
            return Err(Error::Domain(format!("note {i} has out-of-range fields")));
        }
        let on = to_ticks(e.onset, score.division)?;
        let off = to_ticks(e.onset + e.duration, score.division)?;
        if off <= on {
            return Err(Error::Domain(format!("note {i} has non-positive duration")));
        }
        let t = &mut tracks[usize::from(e.track)];
        t.insert((on, true, e.key, e.channel, i), [0x90 | e.channel, e.key, e.velocity]);
        t.insert((off, false, e.key, e.channel, i), [0x80 | e.channel, e.key, 0x40]);
    }

    let mut out = Vec::new();
    out.extend_from_slice(b"MThd");
    out.extend_from_slice(&6u32.to_be_bytes());
    out.extend_from_slice(&score.format.to_be_bytes());
    out.extend_from_slice(&(track_count as u16).to_be_bytes());
    out.extend_from_slice(&score.division.to_be_bytes());

    for track in &tracks {
        let mut body = Vec::new();
        let mut last_tick = 0u64;
        let mut running: Option<u8> = None;
        for (&(tick, ..), msg) in track {
            let delta = u32::try_from(tick - last_tick)
                .map_err(|_| Error::Domain("delta time exceeds 32 bits".into()))?;
            push_vlq(&mut body, delta);
            last_tick = tick;
            if running != Some(msg[0]) {
                body.push(msg[0]);
                running = Some(msg[0]);
            }
            body.extend_from_slice(&msg[1..]);
        }
        body.extend_from_slice(&[0x00, META, END_OF_TRACK, 0x00]);
        out.extend_from_slice(b"MTrk");
        out.extend_from_slice(&(body.len() as u32).to_be_bytes());
        out.extend_from_slice(&body);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header(format: u16, ntracks: u16, division: u16) -> Vec<u8> {
        let mut v = b"MThd".to_vec();
        v.extend_from_slice(&6u32.to_be_bytes());
        v.extend_from_slice(&format.to_be_bytes());
        v.extend_from_slice(&ntracks.to_be_bytes());
        v.extend_from_slice(&division.to_be_bytes());
        v
    }

    fn track(body: &[u8]) -> Vec<u8> {
        let mut v = b"MTrk".to_vec();
        v.extend_from_slice(&(body.len() as u32).to_be_bytes());
        v.extend_from_slice(body);
        v
    }

    fn single_note(off: &[u8]) -> Vec<u8> {
        let mut body = vec![0x00, 0x90, 60, 100, 0x60];
        body.extend_from_slice(off);
        body.extend_from_slice(&[0x00, 0xFF, 0x2F, 0x00]);
        let mut file = header(0, 1, 96);
        file.extend(track(&body));
        file
    }

    #[test]
    fn one_note() {
        let score = parse_midi(&single_note(&[0x80, 60, 0])).unwrap();
        assert_eq!(score.division, 96);
        assert_eq!(score.events.len(), 1);
        let e = &score.events[0];
        assert_eq!(e.key, 60);
        assert_eq!(e.velocity, 100);
        assert_eq!(e.onset, Ratio::from_integer(0));
        assert_eq!(e.duration, Ratio::from_integer(1));
    }

    #[test]
    fn zero_velocity_note_on_ends_note() {
        let with_off = parse_midi(&single_note(&[0x80, 60, 0x40])).unwrap();
        let with_zero = parse_midi(&single_note(&[0x90, 60, 0])).unwrap();
        // running status form: data bytes only
        let running = parse_midi(&single_note(&[60, 0])).unwrap();
        assert_eq!(with_off, with_zero);
        assert_eq!(with_off, running);
    }

    #[test]
    fn skips_meta_sysex_and_controllers() {
        let body = [
            0x00, 0xFF, 0x51, 0x03, 0x07, 0xA1, 0x20, // tempo
            0x00, 0xF0, 0x02, 0x01, 0xF7, // sysex
            0x00, 0xB0, 0x07, 0x64, // controller
            0x00, 0xC0, 0x05, // program change
            0x00, 0x90, 64, 90, 0x30, 0x80, 64, 0, 0x00, 0xFF, 0x2F, 0x00,
        ];
        let mut file = header(0, 1, 48);
        file.extend(track(&body));
        let score = parse_midi(&file).unwrap();
        assert_eq!(score.events.len(), 1);
        assert_eq!(score.events[0].key, 64);
    }

    #[test]
    fn rejects_format_two_and_bad_magic() {
        let mut file = header(2, 1, 96);
        file.extend(track(&[0x00, 0xFF, 0x2F, 0x00]));
        assert!(matches!(parse_midi(&file), Err(Error::Parse { offset: 8, .. })));
        assert!(matches!(
            parse_midi(b"RIFF\0\0\0\0"),
            Err(Error::Parse { offset: 0, .. })
        ));
    }

    #[test]
    fn unmatched_note_on_reports_offset() {
        let mut file = header(0, 1, 96);
        file.extend(track(&[0x00, 0x90, 60, 100, 0x00, 0xFF, 0x2F, 0x00]));
        // header is 14 bytes, track chunk header 8, delta 1
        assert!(matches!(parse_midi(&file), Err(Error::Parse { offset: 23, .. })));
    }

    #[test]
    fn truncated_chunk() {
        let mut file = single_note(&[0x80, 60, 0]);
        file.truncate(file.len() - 3);
        assert!(matches!(parse_midi(&file), Err(Error::Parse { offset: 14, .. })));
    }

    #[test]
    fn missing_running_status() {
        let mut file = header(0, 1, 96);
        file.extend(track(&[0x00, 60, 100, 0x00, 0xFF, 0x2F, 0x00]));
        assert!(matches!(parse_midi(&file), Err(Error::Parse { offset: 23, .. })));
    }

    #[test]
    fn vlq_round_trip() {
        for value in [0u32, 0x40, 0x7F, 0x80, 0x2000, 0x3FFF, 0x4000, 0x0FFF_FFFF] {
            let mut buf = Vec::new();
            push_vlq(&mut buf, value);
            assert!(buf.len() <= 4);
            assert_eq!(Reader::new(&buf).vlq("test").unwrap(), value);
        }
    }

    #[test]
    fn writer_rejects_fractional_ticks() {
        let score = Score {
            format: 0,
            division: 4,
            events: vec![NoteEvent {
                onset: Ratio::new(1, 3),
                duration: Ratio::from_integer(1),
                key: 60,
                velocity: 64,
                track: 0,
                channel: 0,
            }],
        };
        assert!(write_midi(&score).is_err());
    }
}
