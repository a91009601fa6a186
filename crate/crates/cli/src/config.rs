use std::fmt;
use std::str::FromStr;

use clap::ValueEnum;
use musitopo::ingest::{default_chord_window, Beats};
use musitopo::persistence::PrimeField;
use musitopo::{Metric, SpaceDescriptor};
use num_rational::Ratio;

use crate::error::{CliError, Result};

/// How an input is turned into a point cloud.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// One point per note (or per delay window of notes).
    Melody,
    /// One chord per onset slot (or per delay window of chords).
    Chords,
    /// One rhythm pattern per track.
    Rhythm,
    /// One circle point per distinct onset of the cycle.
    RhythmPoints,
    /// A precomputed distance matrix in the plain-text format.
    Matrix,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Svg,
}

/// Closed scale window `lo:hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, found {s:?}"))?;
        let parse = |v: &str| v.trim().parse::<f64>().map_err(|_| format!("not a number: {v:?}"));
        let (lo, hi) = (parse(lo)?, parse(hi)?);
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(format!("window needs finite lo < hi, found {s:?}"));
        }
        Ok(Window { lo, hi })
    }
}

/// Parses `n` or `n/d` as a positive number of beats.
pub fn parse_beats(s: &str) -> Result<Beats, String> {
    let r = match s.split_once('/') {
        Some((n, d)) => {
            let n: u64 = n.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
            let d: u64 = d.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
            if d == 0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ratio::new(n, d)
        }
        None => Ratio::from_integer(s.trim().parse().map_err(|_| format!("not a beat count: {s:?}"))?),
    };
    if r == Ratio::from_integer(0) {
        return Err("beat length must be positive".into());
    }
    Ok(r)
}

/// Everything one analysis run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    /// A file path, or the name of a built-in dataset when no such file exists.
    pub input: String,
    /// Required for MIDI files; datasets imply their own.
    pub mode: Option<Mode>,
    /// Defaults to the natural metric of the mode.
    pub metric: Option<Metric>,
    /// Delay-embedding window length for melodies and chord sequences.
    pub delay: usize,
    /// Expected notes per chord.
    pub chord_size: Option<usize>,
    /// Highest homology dimension reported.
    pub max_dim: usize,
    /// Largest filtration scale; the cloud diameter when absent.
    pub eps_max: Option<f64>,
    pub field: u32,
    pub keep_duplicates: bool,
    pub format: OutputFormat,
    pub compare: Option<(SpaceDescriptor, Window)>,
    /// Chord segmentation window.
    pub quantize: Beats,
    /// Rhythm cycle length.
    pub cycle: Beats,
    pub track: Option<u16>,
    pub channel: Option<u8>,
    /// Worker threads for the distance matrix; all cores when absent.
    pub threads: Option<usize>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            input: String::new(),
            mode: None,
            metric: None,
            delay: 1,
            chord_size: None,
            max_dim: 3,
            eps_max: None,
            field: 2,
            keep_duplicates: false,
            format: OutputFormat::Text,
            compare: None,
            quantize: default_chord_window(),
            cycle: Ratio::from_integer(4),
            track: None,
            channel: None,
            threads: None,
        }
    }
}

impl AnalysisConfig {
    pub fn new(input: impl Into<String>) -> Self {
        Self {
            input: input.into(),
            ..Self::default()
        }
    }

    /// Checks everything that can be checked before touching the input.
    pub fn validate(&self) -> Result<()> {
        PrimeField::new(self.field)?;
        if self.delay == 0 {
            return Err(CliError::Config("--delay must be at least 1".into()));
        }
        if self.chord_size == Some(0) {
            return Err(CliError::Config("--chord-size must be at least 1".into()));
        }
        if let Some(eps) = self.eps_max {
            if !(eps.is_finite() && eps >= 0.0) {
                return Err(CliError::Config(format!("--eps-max must be finite and non-negative, got {eps}")));
            }
        }
        if self.threads == Some(0) {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        if let Some(mode) = self.mode {
            if let Some(metric) = self.metric {
                if !mode_accepts(mode, metric, self.delay) {
                    return Err(CliError::Config(format!(
                        "metric {metric} does not apply in {mode} mode with delay {}",
                        self.delay
                    )));
                }
            }
            if self.delay > 1 && !matches!(mode, Mode::Melody | Mode::Chords) {
                return Err(CliError::Config(format!("--delay applies to melody and chords modes, not {mode}")));
            }
        }
        Ok(())
    }
}

/// Metrics each mode can produce payloads for.
pub fn mode_accepts(mode: Mode, metric: Metric, delay: usize) -> bool {
    match mode {
        Mode::Melody => match metric {
            Metric::Necklace => delay == 1,
            Metric::Tuple => true,
            _ => false,
        },
        Mode::Chords => match metric {
            Metric::ChordClass | Metric::Hausdorff => delay == 1,
            Metric::TdeChord => true,
            _ => false,
        },
        Mode::Rhythm => matches!(metric, Metric::Rhythm(_) | Metric::Necklace),
        Mode::RhythmPoints => metric == Metric::Necklace,
        Mode::Matrix => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows() {
        assert_eq!("0.17:0.4".parse::<Window>().unwrap(), Window { lo: 0.17, hi: 0.4 });
        assert!("0.4:0.17".parse::<Window>().is_err());
        assert!("0.4".parse::<Window>().is_err());
        assert!("a:1".parse::<Window>().is_err());
    }

    #[test]
    fn beats() {
        assert_eq!(parse_beats("1/32").unwrap(), Ratio::new(1, 32));
        assert_eq!(parse_beats("4").unwrap(), Ratio::from_integer(4));
        assert!(parse_beats("0").is_err());
        assert!(parse_beats("1/0").is_err());
        assert!(parse_beats("x").is_err());
    }

    #[test]
    fn validation() {
        let ok = AnalysisConfig::new("ewe");
        assert!(ok.validate().is_ok());
        let bad_field = AnalysisConfig { field: 4, ..ok.clone() };
        assert!(matches!(bad_field.validate(), Err(CliError::Core(musitopo::Error::Config(_)))));
        let bad_metric = AnalysisConfig {
            mode: Some(Mode::Melody),
            metric: Some(Metric::ChordClass),
            ..ok.clone()
        };
        assert!(matches!(bad_metric.validate(), Err(CliError::Config(_))));
        let bad_delay = AnalysisConfig {
            mode: Some(Mode::Rhythm),
            delay: 2,
            ..ok
        };
        assert!(bad_delay.validate().is_err());
    }
}
