//! Input resolution, point-cloud construction and the persistence run.

use std::path::Path;

use musitopo::datasets::{self, Content, DatasetData};
use musitopo::ingest::{
    extract_chords, extract_melody, extract_onsets, extract_track_rhythms, parse_midi, Score, Selector,
};
use musitopo::metrics::ZERO_TOLERANCE;
use musitopo::persistence::{field_sensitivity, FieldDisagreement};
use musitopo::theory::ComparisonReport;
use musitopo::{
    build_rips, compare_barcode, delay_embed, distance_matrix, euler_check, reduce, Barcode, ChordClass,
    CirclePoint, DistanceMatrix, EulerCheck, FilteredComplex, Metric, Payload, PitchTuple, PointCloud, RhythmAlignment,
    RhythmPattern,
};

use crate::config::{mode_accepts, AnalysisConfig, Mode};
use crate::error::{CliError, Result};

const NOTE_NAMES: [&str; 12] = ["C", "C#", "D", "Eb", "E", "F", "F#", "G", "Ab", "A", "Bb", "B"];

/// Result of one run.
#[derive(Debug, Clone)]
pub struct Analysis {
    /// Dataset name or file path.
    pub source: String,
    pub mode: Mode,
    /// `None` for matrix input.
    pub metric: Option<Metric>,
    /// Points before duplicates were merged.
    pub input_points: usize,
    /// One label per point after merging; merged labels are joined with `=`.
    pub labels: Vec<String>,
    pub multiplicities: Vec<usize>,
    pub matrix: DistanceMatrix,
    pub complex_size: usize,
    /// Bars in dimensions `0..=max_dim`, all exact.
    pub barcode: Barcode,
    /// Euler identity on the full complex at every edge scale up to `eps_max`.
    pub euler: EulerSummary,
    pub comparison: Option<ComparisonReport>,
    /// Dimensions where GF(2) and GF(3) disagree.
    pub field_disagreements: Vec<FieldDisagreement>,
}

/// Outcome of the Euler identity over the distinct edge scales of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerSummary {
    /// Scales where the top dimension of the complex was free of classes.
    pub conclusive: usize,
    /// Scales where the dimension cap left classes alive.
    pub inconclusive: usize,
    /// First scale where the identity failed, with the two sides.
    pub failure: Option<(f64, EulerCheck)>,
}

impl EulerSummary {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// An input before a metric is chosen.
#[derive(Debug, Clone)]
enum Source {
    Melody(Vec<CirclePoint>, Vec<String>),
    Chords(Vec<ChordClass>, Vec<String>),
    Onsets(Vec<CirclePoint>, Vec<String>),
    Rhythms(Vec<RhythmPattern>, Vec<String>),
    Matrix(DistanceMatrix),
}

impl Source {
    fn mode(&self) -> Mode {
        match self {
            Source::Melody(..) => Mode::Melody,
            Source::Chords(..) => Mode::Chords,
            Source::Onsets(..) => Mode::RhythmPoints,
            Source::Rhythms(..) => Mode::Rhythm,
            Source::Matrix(_) => Mode::Matrix,
        }
    }
}

/// Runs the whole pipeline, on a dedicated pool when `threads` is set.
pub fn run(config: &AnalysisConfig) -> Result<Analysis> {
    config.validate()?;
    match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Config(format!("cannot start {n} worker threads: {e}")))?
            .install(|| analyse(config)),
        None => analyse(config),
    }
}

fn analyse(config: &AnalysisConfig) -> Result<Analysis> {
    // rhythm mode with the necklace metric means one point per onset
    let requested = match (config.mode, config.metric) {
        (Some(Mode::Rhythm), Some(Metric::Necklace)) => Some(Mode::RhythmPoints),
        (mode, _) => mode,
    };
    let (source, dataset_metric) = load(config, requested)?;
    let mode = source.mode();
    if let Some(m) = requested.filter(|&m| m != mode) {
        return Err(CliError::Config(format!("{} holds {mode} data, not {m}", config.input)));
    }

    let (matrix, labels, metric) = match source {
        Source::Matrix(m) => {
            if let Some(metric) = config.metric {
                return Err(CliError::Config(format!("metric {metric} does not apply to a distance matrix")));
            }
            if config.delay > 1 {
                return Err(CliError::Config("--delay does not apply to a distance matrix".into()));
            }
            let labels = (0..m.len()).map(|i| i.to_string()).collect();
            (m, labels, None)
        }
        source => {
            let metric = config
                .metric
                .or(dataset_metric.filter(|_| config.delay == 1))
                .unwrap_or_else(|| default_metric(&source, config.delay, config.chord_size));
            if !mode_accepts(mode, metric, config.delay) {
                return Err(CliError::Config(format!(
                    "metric {metric} does not apply in {mode} mode with delay {}",
                    config.delay
                )));
            }
            let cloud = build_cloud(source, metric, config)?;
            let labels = cloud.labels().to_vec();
            (distance_matrix(&cloud, metric)?, labels, Some(metric))
        }
    };
    let input_points = matrix.len();
    if input_points == 0 {
        return Err(musitopo::Error::EmptyInput("no points to analyse".into()).into());
    }

    let (matrix, labels, multiplicities) = if config.keep_duplicates {
        (matrix, labels, vec![1; input_points])
    } else {
        merge_duplicates(&matrix, &labels)
    };

    let eps_max = config.eps_max.unwrap_or_else(|| matrix.max());
    // one dimension above the report, so every reported dimension is exact
    let complex = build_rips(&matrix, config.max_dim + 1, eps_max)?;
    let full = reduce(&complex, config.field)?;
    let euler = check_euler(&complex, &full, &matrix, eps_max)?;
    let barcode = full.truncate(config.max_dim);
    let comparison = config
        .compare
        .map(|(space, w)| compare_barcode(&barcode, space, w.lo, w.hi))
        .transpose()?;
    let field_disagreements = field_sensitivity(&complex)?
        .into_iter()
        .filter(|d| d.dim <= config.max_dim)
        .collect();

    Ok(Analysis {
        source: config.input.clone(),
        mode,
        metric,
        input_points,
        labels,
        multiplicities,
        matrix,
        complex_size: complex.len(),
        barcode,
        euler,
        comparison,
        field_disagreements,
    })
}

fn check_euler(complex: &FilteredComplex, full: &Barcode, matrix: &DistanceMatrix, eps_max: f64) -> Result<EulerSummary> {
    let mut scales: Vec<f64> = (0..matrix.len())
        .flat_map(|i| (0..i).map(move |j| matrix.get(i, j)))
        .chain([0.0, eps_max])
        .filter(|&e| e <= eps_max)
        .collect();
    scales.sort_by(f64::total_cmp);
    // scales within the zero tolerance count as one, checked at the highest so
    // that bars dropped for zero length are wholly inside it
    scales.dedup_by(|hi, lo| *hi - *lo <= ZERO_TOLERANCE && {
        *lo = *hi;
        true
    });
    let mut summary = EulerSummary {
        conclusive: 0,
        inconclusive: 0,
        failure: None,
    };
    for eps in scales {
        match euler_check(complex, full, eps)? {
            EulerCheck::Holds => summary.conclusive += 1,
            EulerCheck::Inconclusive => summary.inconclusive += 1,
            failed => {
                summary.conclusive += 1;
                summary.failure.get_or_insert((eps, failed));
            }
        }
    }
    Ok(summary)
}

fn merge_duplicates(matrix: &DistanceMatrix, labels: &[String]) -> (DistanceMatrix, Vec<String>, Vec<usize>) {
    let groups = matrix.duplicate_groups(ZERO_TOLERANCE);
    let reps: Vec<usize> = groups.iter().map(|g| g[0]).collect();
    let labels = groups
        .iter()
        .map(|g| g.iter().map(|&i| labels[i].as_str()).collect::<Vec<_>>().join("="))
        .collect();
    let counts = groups.iter().map(Vec::len).collect();
    (matrix.restrict(&reps), labels, counts)
}

/// A requested chord size rules out the ragged fallback, so mismatched
/// chords are reported instead of silently switching to Hausdorff.
fn default_metric(source: &Source, delay: usize, chord_size: Option<usize>) -> Metric {
    match source {
        Source::Melody(..) if delay == 1 => Metric::Necklace,
        Source::Melody(..) => Metric::Tuple,
        Source::Chords(..) if delay > 1 => Metric::TdeChord,
        Source::Chords(chords, _) => {
            if chord_size.is_some() || chords.windows(2).all(|w| w[0].len() == w[1].len()) {
                Metric::ChordClass
            } else {
                Metric::Hausdorff
            }
        }
        Source::Onsets(..) => Metric::Necklace,
        Source::Rhythms(..) => Metric::Rhythm(RhythmAlignment::default()),
        Source::Matrix(_) => unreachable!("matrices carry no metric"),
    }
}

fn build_cloud(source: Source, metric: Metric, config: &AnalysisConfig) -> Result<PointCloud> {
    let d = config.delay;
    let cloud = match source {
        Source::Melody(points, labels) | Source::Onsets(points, labels) => {
            if metric == Metric::Tuple {
                let payloads = delay_embed(&points, d)?
                    .into_iter()
                    .map(|w| PitchTuple::new(w).map(Payload::Tuple))
                    .collect::<musitopo::Result<_>>()?;
                PointCloud::new(payloads, window_labels(&labels, d)?)?
            } else {
                PointCloud::new(points.into_iter().map(Payload::Point).collect(), labels)?
            }
        }
        Source::Chords(chords, labels) => {
            if let (Some(k), false) = (config.chord_size, metric == Metric::Hausdorff) {
                if let Some(bad) = chords.iter().find(|c| c.len() != k) {
                    return Err(musitopo::Error::Cardinality {
                        left: k,
                        right: bad.len(),
                    }
                    .into());
                }
            }
            if metric == Metric::TdeChord {
                let payloads = delay_embed(&chords, d)?.into_iter().map(Payload::ChordTuple).collect();
                PointCloud::new(payloads, window_labels(&labels, d)?)?
            } else {
                PointCloud::new(chords.into_iter().map(Payload::Chord).collect(), labels)?
            }
        }
        Source::Rhythms(patterns, labels) => {
            PointCloud::new(patterns.into_iter().map(Payload::Rhythm).collect(), labels)?
        }
        Source::Matrix(_) => unreachable!("matrices skip cloud construction"),
    };
    Ok(cloud)
}

fn window_labels(labels: &[String], d: usize) -> Result<Vec<String>> {
    Ok(delay_embed(labels, d)?.into_iter().map(|w| w.join(" ")).collect())
}

/// Reads a file when one exists at `input`, otherwise a built-in dataset.
fn load(config: &AnalysisConfig, mode: Option<Mode>) -> Result<(Source, Option<Metric>)> {
    let path = Path::new(&config.input);
    if path.is_file() {
        let bytes = std::fs::read(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        return Ok((from_file(&bytes, config, mode)?, None));
    }
    let dataset = datasets::load(&config.input).map_err(|_| CliError::DatasetNotFound(config.input.clone()))?;
    let (cloud, metric) = match dataset.data {
        DatasetData::Matrix(m) => return Ok((Source::Matrix(m), None)),
        DatasetData::Cloud { cloud, metric } => (cloud, metric),
    };
    let labels = cloud.labels().to_vec();
    let payloads = cloud.points();
    let source = match dataset.content {
        Content::Melody => Source::Melody(collect(payloads, as_point)?, labels),
        Content::Onsets => Source::Onsets(collect(payloads, as_point)?, labels),
        Content::Chords => Source::Chords(
            collect(payloads, |p| match p {
                Payload::Chord(c) => Some(c.clone()),
                _ => None,
            })?,
            labels,
        ),
        Content::Rhythms => Source::Rhythms(
            collect(payloads, |p| match p {
                Payload::Rhythm(r) => Some(r.clone()),
                _ => None,
            })?,
            labels,
        ),
        Content::Matrix => unreachable!("matrix datasets return above"),
    };
    Ok((source, Some(metric)))
}

fn as_point(p: &Payload) -> Option<CirclePoint> {
    match p {
        Payload::Point(x) => Some(*x),
        _ => None,
    }
}

fn collect<T>(payloads: &[Payload], f: impl Fn(&Payload) -> Option<T>) -> Result<Vec<T>> {
    payloads
        .iter()
        .map(|p| f(p).ok_or_else(|| CliError::Config("dataset content does not match its payloads".into())))
        .collect()
}

fn from_file(bytes: &[u8], config: &AnalysisConfig, mode: Option<Mode>) -> Result<Source> {
    let is_midi = bytes.starts_with(b"MThd");
    let mode = match mode {
        Some(m) => m,
        None if is_midi => {
            return Err(CliError::Config(
                "--mode is required for MIDI input (melody, chords, rhythm or rhythm-points)".into(),
            ))
        }
        None => Mode::Matrix,
    };
    if mode == Mode::Matrix {
        let text = std::str::from_utf8(bytes).map_err(|e| musitopo::Error::MatrixFormat {
            line: 1,
            message: format!("input is not UTF-8 text: {e}"),
        })?;
        return Ok(Source::Matrix(DistanceMatrix::from_text(text)?));
    }
    let score = parse_midi(bytes)?;
    let selector = Selector {
        tracks: config.track.into_iter().collect(),
        channels: config.channel.into_iter().collect(),
    };
    Ok(match mode {
        Mode::Melody => {
            let m = extract_melody(&score, &selector)?;
            let labels = m.keys.iter().map(|&k| note_name(k)).collect();
            Source::Melody(m.pitches, labels)
        }
        Mode::Chords => {
            let seq = extract_chords(&score, &selector, config.quantize)?;
            if seq.is_empty() {
                return Err(musitopo::Error::EmptyInput("selector matches no notes".into()).into());
            }
            let labels = seq.onsets.iter().map(|b| format!("beat {b}")).collect();
            Source::Chords(seq.chords, labels)
        }
        Mode::RhythmPoints => {
            let pattern = extract_onsets(&score, &selector, config.cycle)?;
            Source::Onsets(pattern.onsets().to_vec(), onset_labels(pattern.onsets()))
        }
        Mode::Rhythm => rhythms_by_track(&score, config)?,
        Mode::Matrix => unreachable!("handled above"),
    })
}

fn rhythms_by_track(score: &Score, config: &AnalysisConfig) -> Result<Source> {
    let (labels, patterns): (Vec<String>, Vec<RhythmPattern>) = extract_track_rhythms(score, config.cycle)?
        .into_iter()
        .filter(|(t, _)| config.track.is_none_or(|want| want == *t))
        .map(|(t, r)| (format!("track {t}"), r))
        .unzip();
    if patterns.is_empty() {
        return Err(musitopo::Error::EmptyInput("no track carries notes".into()).into());
    }
    Ok(Source::Rhythms(patterns, labels))
}

fn onset_labels(points: &[CirclePoint]) -> Vec<String> {
    points.iter().map(|p| format!("{:.4}", p.value())).collect()
}

/// `C4` for key 60.
pub fn note_name(key: u8) -> String {
    format!("{}{}", NOTE_NAMES[usize::from(key % 12)], i32::from(key / 12) - 1)
}
