use musitopo::datasets::{self, DatasetData};
use musitopo::ingest::{extract_melody, fixtures, Selector};
use musitopo::metrics::{necklace_distance, pitch_class_distance, pitch_class_of, rhythm_distance};
use musitopo::theory::HomologyGroup;
use musitopo::{
    build_rips, compare_barcode, delay_embed, distance_matrix, euler_check, homology_summary, oracle_betti,
    poincare_polynomial, reduce, Barcode, CirclePoint, DistanceMatrix, EulerCheck, FilteredComplex, RhythmPattern,
    SpaceDescriptor,
};

const TOL: f64 = 1e-9;

fn matrix(name: &str) -> DistanceMatrix {
    match datasets::load(name).unwrap().data {
        DatasetData::Cloud { cloud, metric } => {
            distance_matrix(&cloud.collapse_duplicates(metric, TOL).unwrap(), metric).unwrap()
        }
        DatasetData::Matrix(m) => m,
    }
}

/// Homology through dimension 3 from a complex one dimension higher, plus
/// the untruncated barcode for Euler checks.
fn analyse(name: &str) -> (DistanceMatrix, FilteredComplex, Barcode, Barcode) {
    let m = matrix(name);
    let complex = build_rips(&m, 4, m.max()).unwrap();
    let full = reduce(&complex, 2).unwrap();
    (m, complex, full.truncate(3), full)
}

fn same_bars(a: &Barcode, b: &Barcode) -> bool {
    let close = |x: f64, y: f64| (x - y).abs() <= TOL;
    a.max_dim == b.max_dim
        && a.intervals.len() == b.intervals.len()
        && a.intervals.iter().zip(&b.intervals).all(|(i, j)| {
            i.dim == j.dim
                && close(i.birth, j.birth)
                && match (i.death, j.death) {
                    (Some(x), Some(y)) => close(x, y),
                    (x, y) => x == y,
                }
        })
}

fn finite_deaths(barcode: &Barcode, dim: usize) -> Vec<f64> {
    barcode.in_dim(dim).filter_map(|i| i.death).collect()
}

fn count_near(values: &[f64], target: f64) -> usize {
    values.iter().filter(|v| (*v - target).abs() <= TOL).count()
}

#[test]
fn necklace_examples() {
    assert_eq!(necklace_distance(CirclePoint::new(0.0), CirclePoint::new(0.0)), 0.0);
    assert!((necklace_distance(CirclePoint::new(0.1), CirclePoint::new(0.9)) - 0.2).abs() <= TOL);
    assert!((necklace_distance(CirclePoint::new(0.0), CirclePoint::new(5.0 / 12.0)) - 5.0 / 12.0).abs() <= TOL);
}

#[test]
fn octave_related_pitches_coincide() {
    assert_eq!(pitch_class_distance(261.6, 523.2).unwrap(), 0.0);
    assert_eq!(pitch_class_of(261.6).unwrap(), pitch_class_of(523.2).unwrap());
    assert_eq!(pitch_class_distance(440.0, 880.0).unwrap(), 0.0);
    assert!((pitch_class_of(440.0).unwrap().value() - 440f64.log2().rem_euclid(1.0)).abs() <= TOL);
    assert!(pitch_class_of(0.0).is_err());
    assert!(pitch_class_distance(-1.0, 440.0).is_err());
}

#[test]
fn son_and_soukous() {
    let son = RhythmPattern::from_timeline(&[1, 0, 0, 1, 0, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 0]).unwrap();
    let soukous = RhythmPattern::from_timeline(&[1, 0, 0, 1, 0, 0, 1, 0, 0, 0, 1, 1, 0, 0, 0, 0]).unwrap();
    assert_eq!(rhythm_distance(&son, &soukous).unwrap(), 0.0625);
}

#[test]
fn melody_delay_embedding_counts() {
    let melody = extract_melody(&fixtures::c_major_scale(), &Selector::all()).unwrap();
    assert_eq!(melody.len(), 8);
    assert_eq!(delay_embed(&melody.pitches, 3).unwrap().len(), 6);
    assert_eq!(delay_embed(&melody.pitches, 1).unwrap().len(), 8);
    assert!(delay_embed(&melody.pitches, 9).is_err());
}

#[test]
fn ewe_matrix_and_barcode() {
    let (m, complex, barcode, full) = analyse("ewe");
    assert_eq!(m.len(), 7);
    assert!((m.max() - 0.5).abs() <= TOL);

    let h0 = finite_deaths(&barcode, 0);
    assert_eq!(barcode.in_dim(0).count(), 7);
    assert_eq!(h0.len(), 6);
    assert_eq!(count_near(&h0, 1.0 / 12.0), 2);
    assert_eq!(count_near(&h0, 2.0 / 12.0), 4);

    let h1: Vec<_> = barcode.in_dim(1).collect();
    assert_eq!(h1.len(), 1);
    assert!((h1[0].birth - 2.0 / 12.0).abs() <= TOL);
    let death = h1[0].death.unwrap();
    assert!((0.398..=0.418).contains(&death), "{death}");

    assert_eq!(barcode.betti_at(0.25, 1), 1);
    assert_eq!(barcode.betti_at(0.45, 1), 0);
    assert_eq!(barcode.betti_at(1.0, 0), 1);
    assert_eq!(oracle_betti(&m, 0.3, 1, 2).unwrap(), 1);
    assert_eq!(euler_check(&complex, &full, 0.3).unwrap(), EulerCheck::Holds);

    let report = compare_barcode(&barcode, SpaceDescriptor::Circle, 0.17, 0.40).unwrap();
    assert!(report.matched, "{}", report.to_text());
}

#[test]
fn rotations_of_the_standard_pattern_agree() {
    let (_, _, ewe, _) = analyse("ewe");
    for name in ["yoruba", "bemba"] {
        let (_, _, other, _) = analyse(name);
        assert!(same_bars(&other, &ewe), "{name}: {other:?}");
    }
}

#[test]
fn cmajor_scale_barcode() {
    let (m, _, barcode, _) = analyse("cmajor-scale");
    assert_eq!(m.len(), 7);
    let h0 = finite_deaths(&barcode, 0);
    assert_eq!(barcode.in_dim(0).count(), 7);
    assert_eq!(count_near(&h0, 1.0 / 12.0), 2);
    assert_eq!(count_near(&h0, 2.0 / 12.0), 4);
    let h1: Vec<_> = barcode.in_dim(1).collect();
    assert_eq!(h1.len(), 1);
    assert!((h1[0].birth - 2.0 / 12.0).abs() <= TOL);
    assert!((0.38..=0.42).contains(&h1[0].death.unwrap()));
    assert!(compare_barcode(&barcode, SpaceDescriptor::Circle, 0.17, 0.37).unwrap().matched);
}

#[test]
fn circle_of_fifths_barcode() {
    let (m, complex, barcode, full) = analyse("circle-of-fifths");
    for i in 0..12 {
        assert!((m.get(i, (i + 1) % 12) - 1.0 / 12.0).abs() <= TOL, "scale {i}");
    }
    assert!((m.max() - 0.5).abs() <= TOL);

    let h1: Vec<_> = barcode.in_dim(1).collect();
    assert_eq!(h1.len(), 1);
    assert!((h1[0].birth - 1.0 / 12.0).abs() <= 1e-3);
    assert!((h1[0].death.unwrap() - 4.0 / 12.0).abs() <= 1e-3);

    assert_eq!(barcode.betti_at(0.35, 1), 0);
    assert_eq!(barcode.betti_at(0.35, 2), 3);
    assert_eq!(oracle_betti(&m, 0.35, 2, 2).unwrap(), 3);
    assert_eq!(oracle_betti(&m, 0.35, 1, 2).unwrap(), 0);
    assert_eq!(euler_check(&complex, &full, 0.35).unwrap(), EulerCheck::Holds);
    assert_eq!(euler_check(&complex, &full, 0.2).unwrap(), EulerCheck::Holds);

    let report = compare_barcode(&barcode, SpaceDescriptor::Circle, 0.09, 0.32).unwrap();
    assert!(report.matched, "{}", report.to_text());
}

#[test]
fn afro_cuban_table() {
    let (m, _, barcode, _) = analyse("afro-cuban");
    assert_eq!(m.len(), 6);
    assert!((m.max() - 0.1875).abs() <= TOL);
    let nearest: Vec<f64> = (0..6)
        .map(|i| (0..6).filter(|&j| j != i).map(|j| m.get(i, j)).fold(f64::INFINITY, f64::min))
        .collect();
    assert!(nearest.iter().all(|&d| (d - 0.0625).abs() <= TOL), "{nearest:?}");
    assert_eq!(barcode.intervals.iter().filter(|i| i.dim >= 1).count(), 0);
}

#[test]
fn clave_son_is_a_loop() {
    let (m, _, barcode, _) = analyse("clave-son");
    assert_eq!(m.len(), 5);
    let h1: Vec<_> = barcode.in_dim(1).collect();
    assert_eq!(h1.len(), 1);
    assert!((h1[0].birth - 0.25).abs() <= TOL);
}

#[test]
fn toy_clouds() {
    let (m, complex, barcode, full) = analyse("square");
    assert_eq!(complex.simplex_counts_at(1.2).unwrap(), vec![4, 4, 0, 0, 0]);
    assert_eq!(oracle_betti(&m, 1.2, 1, 2).unwrap(), 1);
    assert_eq!(euler_check(&complex, &full, 1.2).unwrap(), EulerCheck::Holds);
    let h1: Vec<_> = barcode.in_dim(1).collect();
    assert_eq!((h1[0].birth, h1[0].death), (1.0, Some(2f64.sqrt())));

    let (_, complex, _, full) = analyse("equilateral");
    assert_eq!(complex.simplex_counts_at(0.5).unwrap()[..3], [3, 0, 0]);
    assert_eq!(complex.simplex_counts_at(1.0).unwrap()[..3], [3, 3, 1]);
    assert_eq!(euler_check(&complex, &full, 1.0).unwrap(), EulerCheck::Holds);
}

#[test]
fn poincare_examples() {
    let coeffs = |s| poincare_polynomial(s).unwrap().coefficients().to_vec();
    assert_eq!(coeffs(SpaceDescriptor::Circle), vec![1, 1]);
    assert_eq!(coeffs(SpaceDescriptor::SymmA3_3), vec![1, 1, 1, 1]);
    assert_eq!(coeffs(SpaceDescriptor::CirclePower { d: 2 }), vec![1, 2, 1]);
    assert_eq!(poincare_polynomial(SpaceDescriptor::SymmA3_3).unwrap().to_string(), "1 + t + t^2 + t^3");
}

#[test]
fn homology_examples() {
    let z = |rank, torsion: &[u64]| HomologyGroup {
        rank,
        torsion: torsion.to_vec(),
    };
    let groups = |s| homology_summary(s).unwrap().groups;
    assert_eq!(
        groups(SpaceDescriptor::SymmZ4_4),
        vec![z(1, &[]), z(1, &[]), z(1, &[2]), z(1, &[2])]
    );
    assert_eq!(homology_summary(SpaceDescriptor::SymmZ4_4).unwrap().betti(4), 0);
    assert_eq!(groups(SpaceDescriptor::Exp { n: 3 }), vec![z(1, &[]), z(0, &[]), z(0, &[]), z(1, &[])]);
    assert_eq!(groups(SpaceDescriptor::Circle), vec![z(1, &[]), z(1, &[])]);
}
