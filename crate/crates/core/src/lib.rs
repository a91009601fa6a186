//! Distances on circle-valued musical data, Vietoris–Rips filtrations and
//! persistent homology.
//!
//! The usual pipeline is: parse a MIDI file ([`ingest`]), extract pitch
//! classes, chords or rhythms, build a [`PointCloud`], take its
//! [`distance_matrix`], filter with [`build_rips`], [`reduce`] to a
//! [`Barcode`] and compare against known homology with [`compare_barcode`].

pub mod datasets;
pub mod error;
pub mod ingest;
pub mod metrics;
pub mod persistence;
pub mod pointcloud;
pub mod rips;
pub mod theory;

pub use error::{Error, Result};
pub use metrics::{ChordClass, CirclePoint, FiniteSubset, PitchTuple, RhythmAlignment, RhythmPattern};
pub use persistence::{euler_check, oracle_betti, reduce, Barcode, BettiProfile, EulerCheck, Interval};
pub use pointcloud::{delay_embed, distance_matrix, DistanceMatrix, Metric, Payload, PointCloud};
pub use rips::{build_rips, FilteredComplex, Simplex};
pub use theory::{compare_barcode, homology_summary, poincare_polynomial, SpaceDescriptor};
