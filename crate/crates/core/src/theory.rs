//! Known homology of the spaces musical data lives on, and comparison of
//! empirical barcodes against it.
//!
//! This is a curated table, not a computer-algebra system: anything outside
//! [`SpaceDescriptor`] is rejected with [`Error::Lookup`].

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::persistence::Barcode;

/// Spaces with tabulated homology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "space", rename_all = "kebab-case")]
pub enum SpaceDescriptor {
    /// The pitch-class or rhythm circle.
    Circle,
    /// `d` independent circles, e.g. time-delay embeddings of melodies.
    CirclePower { d: u32 },
    /// n-note chords: the n-th symmetric product of the circle.
    Symm { n: u32 },
    /// Three-note chords up to the alternating group; homotopic to S¹×S².
    SymmA3_3,
    /// Four-note chords up to cyclic permutation.
    SymmZ4_4,
    /// `j` consecutive `k`-note chords (delay embedding of a chord sequence).
    ChordDelayProduct { k: u32, j: u32 },
    /// Nonempty subsets of the circle with at most `n` points.
    Exp { n: u32 },
}

impl SpaceDescriptor {
    fn validate(self) -> Result<Self> {
        let ok = match self {
            Self::Circle | Self::SymmA3_3 | Self::SymmZ4_4 => true,
            Self::CirclePower { d } => d >= 1,
            Self::Symm { n } | Self::Exp { n } => n >= 1,
            Self::ChordDelayProduct { k, j } => k >= 1 && j >= 1,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::Lookup(format!("{self}: parameters must be at least 1")))
        }
    }
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Circle => write!(f, "circle"),
            Self::CirclePower { d } => write!(f, "circle-power:{d}"),
            Self::Symm { n } => write!(f, "symm:{n}"),
            Self::SymmA3_3 => write!(f, "symm-a3-3"),
            Self::SymmZ4_4 => write!(f, "symm-z4-4"),
            Self::ChordDelayProduct { k, j } => write!(f, "chord-delay:{k}:{j}"),
            Self::Exp { n } => write!(f, "exp:{n}"),
        }
    }
}

/// Parses the names printed by `Display`, e.g. `circle`, `circle-power:2`,
/// `chord-delay:4:2`.
impl FromStr for SpaceDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.trim().split(':');
        let name = parts.next().unwrap_or_default().to_ascii_lowercase();
        let args: Vec<u32> = parts
            .map(|p| p.parse::<u32>().map_err(|_| Error::Lookup(format!("bad parameter {p:?} in {s:?}"))))
            .collect::<Result<_>>()?;
        let space = match (name.as_str(), args.as_slice()) {
            ("circle", []) => Self::Circle,
            ("circle-power" | "torus", [d]) => Self::CirclePower { d: *d },
            ("symm", [n]) => Self::Symm { n: *n },
            ("symm-a3-3", []) => Self::SymmA3_3,
            ("symm-z4-4", []) => Self::SymmZ4_4,
            ("chord-delay", [k, j]) => Self::ChordDelayProduct { k: *k, j: *j },
            ("exp", [n]) => Self::Exp { n: *n },
            _ => return Err(Error::Lookup(format!("unsupported space {s:?}"))),
        };
        space.validate()
    }
}

/// Σ β_k t^k with trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct PoincarePolynomial(Vec<u64>);

impl PoincarePolynomial {
    pub fn new(mut coefficients: Vec<u64>) -> Self {
        while coefficients.last() == Some(&0) {
            coefficients.pop();
        }
        Self(coefficients)
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.0
    }

    pub fn coefficient(&self, degree: usize) -> u64 {
        self.0.get(degree).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::new(vec![1]), |acc, _| &acc * self)
    }
}

impl std::ops::Mul for &PoincarePolynomial {
    type Output = PoincarePolynomial;

    fn mul(self, rhs: Self) -> PoincarePolynomial {
        if self.0.is_empty() || rhs.0.is_empty() {
            return PoincarePolynomial::new(Vec::new());
        }
        let mut out = vec![0u64; self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PoincarePolynomial::new(out)
    }
}

impl fmt::Display for PoincarePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| {
                let coeff = if c == 1 && k > 0 { String::new() } else { c.to_string() };
                match k {
                    0 => coeff,
                    1 => format!("{coeff}t"),
                    _ => format!("{coeff}t^{k}"),
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// One integral homology group: Z^rank ⊕ Z_t1 ⊕ Z_t2 ⊕ ...
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub rank: u64,
    pub torsion: Vec<u64>,
}

impl HomologyGroup {
    fn free(rank: u64) -> Self {
        Self {
            rank,
            torsion: Vec::new(),
        }
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologySummary {
    pub space: SpaceDescriptor,
    /// `groups[k]` is H_k; every group past the last entry is zero.
    pub groups: Vec<HomologyGroup>,
    pub notes: Vec<String>,
}

impl HomologySummary {
    pub fn ranks(&self) -> Vec<u64> {
        self.groups.iter().map(|g| g.rank).collect()
    }

    pub fn betti(&self, dim: usize) -> u64 {
        self.groups.get(dim).map_or(0, |g| g.rank)
    }
}

fn binomial_row(n: u32) -> Vec<u64> {
    let mut row = vec![1u64];
    for k in 0..n as u64 {
        let next = row[k as usize] * (n as u64 - k) / (k + 1);
        row.push(next);
    }
    row
}

fn sphere_with_point(n: usize) -> Vec<u64> {
    let mut c = vec![0u64; n + 1];
    c[0] += 1;
    c[n] += 1;
    c
}

/// Degree of the sphere `exp_n` of the circle is homotopy equivalent to.
fn exp_sphere_dim(n: u32) -> usize {
    if n % 2 == 1 {
        n as usize
    } else {
        n as usize - 1
    }
}

pub fn poincare_polynomial(space: SpaceDescriptor) -> Result<PoincarePolynomial> {
    let space = space.validate()?;
    let circle = PoincarePolynomial::new(vec![1, 1]);
    Ok(match space {
        SpaceDescriptor::Circle | SpaceDescriptor::Symm { .. } => circle,
        SpaceDescriptor::CirclePower { d } => circle.pow(d),
        SpaceDescriptor::SymmA3_3 => &circle * &PoincarePolynomial::new(vec![1, 0, 1]),
        SpaceDescriptor::SymmZ4_4 => PoincarePolynomial::new(vec![1, 1, 1, 1]),
        SpaceDescriptor::ChordDelayProduct { j, .. } => circle.pow(j),
        SpaceDescriptor::Exp { n } => PoincarePolynomial::new(sphere_with_point(exp_sphere_dim(n))),
    })
}

pub fn homology_summary(space: SpaceDescriptor) -> Result<HomologySummary> {
    let space = space.validate()?;
    let free = |ranks: Vec<u64>| ranks.into_iter().map(HomologyGroup::free).collect::<Vec<_>>();
    let (groups, notes) = match space {
        SpaceDescriptor::Circle => (free(vec![1, 1]), Vec::new()),
        SpaceDescriptor::CirclePower { d } => (free(binomial_row(d)), Vec::new()),
        SpaceDescriptor::Symm { n } => (
            free(vec![1, 1]),
            vec![
                format!("disc bundle over the circle with fibre of dimension {}", n - 1),
                if n % 2 == 1 { "orientable" } else { "non-orientable" }.to_string(),
            ],
        ),
        SpaceDescriptor::SymmA3_3 => (free(vec![1, 1, 1, 1]), vec!["homotopy equivalent to S1 x S2".to_string()]),
        SpaceDescriptor::SymmZ4_4 => (
            vec![
                HomologyGroup::free(1),
                HomologyGroup::free(1),
                HomologyGroup {
                    rank: 1,
                    torsion: vec![2],
                },
                HomologyGroup {
                    rank: 1,
                    torsion: vec![2],
                },
            ],
            Vec::new(),
        ),
        SpaceDescriptor::ChordDelayProduct { k, j } => (
            free(binomial_row(j)),
            vec![format!("product of {j} copies of the {k}-note chord space, each homotopic to a circle")],
        ),
        SpaceDescriptor::Exp { n } => {
            let m = exp_sphere_dim(n);
            let mut notes = vec![format!("homotopy equivalent to S{m}")];
            if n >= 3 {
                notes.push(format!("inclusion of exp_{} induces multiplication by 2 on top homology", n - 2));
            }
            (free(sphere_with_point(m)), notes)
        }
    };
    Ok(HomologySummary { space, groups, notes })
}

/// Observed versus expected Betti number in one dimension over a window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionComparison {
    pub dim: usize,
    pub expected: u64,
    /// Distinct Betti values taken on the window, in order of appearance.
    pub observed: Vec<usize>,
    pub constant: bool,
    pub matches: bool,
    /// False for the top dimension of a capped complex, whose classes can
    /// never be killed.
    pub conclusive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub space: String,
    pub window: [f64; 2],
    pub dimensions: Vec<DimensionComparison>,
    /// Every conclusive dimension matches.
    pub matched: bool,
}

impl ComparisonReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &DimensionComparison> {
        self.dimensions.iter().filter(|d| d.conclusive && !d.matches)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "comparison with {} on [{}, {}]: {}\n",
            self.space,
            self.window[0],
            self.window[1],
            if self.matched { "match" } else { "mismatch" }
        );
        for d in &self.dimensions {
            let observed: Vec<String> = d.observed.iter().map(usize::to_string).collect();
            let status = match (d.conclusive, d.matches) {
                (false, _) => "not conclusive (dimension cap)",
                (true, true) => "ok",
                (true, false) => "MISMATCH",
            };
            out.push_str(&format!(
                "  H{}: expected {}, observed {} {}\n",
                d.dim,
                d.expected,
                observed.join(" -> "),
                status
            ));
        }
        out
    }
}

/// Checks, for each dimension of `barcode`, whether β_k is constant on the
/// closed window `[lo, hi]` and equals the Betti number of `space`.
pub fn compare_barcode(barcode: &Barcode, space: SpaceDescriptor, lo: f64, hi: f64) -> Result<ComparisonReport> {
    if !(lo < hi) {
        return Err(Error::Config(format!("window must satisfy lo < hi, got [{lo}, {hi}]")));
    }
    let summary = homology_summary(space)?;
    let dimensions = (0..=barcode.max_dim)
        .map(|dim| {
            // β only changes at bar endpoints, so sampling lo and every
            // endpoint inside (lo, hi] sees every value taken on the window
            let mut samples = vec![lo];
            for i in barcode.in_dim(dim) {
                samples.extend(
                    std::iter::once(i.birth)
                        .chain(i.death)
                        .filter(|&e| e > lo && e <= hi),
                );
            }
            samples.sort_by(f64::total_cmp);
            let mut observed: Vec<usize> = Vec::new();
            for e in samples {
                let b = barcode.betti_at(e, dim);
                if observed.last() != Some(&b) {
                    observed.push(b);
                }
            }
            let expected = summary.betti(dim);
            let constant = observed.len() == 1;
            DimensionComparison {
                dim,
                expected,
                matches: constant && observed[0] as u64 == expected,
                observed,
                constant,
                conclusive: !barcode.capped || dim < barcode.max_dim,
            }
        })
        .collect::<Vec<_>>();
    let matched = dimensions.iter().all(|d| !d.conclusive || d.matches);
    Ok(ComparisonReport {
        space: space.to_string(),
        window: [lo, hi],
        dimensions,
        matched,
    })
}

/// Every descriptor with a short description, for listings.
pub fn catalogue() -> Vec<(SpaceDescriptor, &'static str)> {
    vec![
        (SpaceDescriptor::Circle, "pitch classes or rhythmic phase"),
        (SpaceDescriptor::CirclePower { d: 2 }, "d-fold delay embedding of a melody"),
        (SpaceDescriptor::Symm { n: 3 }, "n-note chords"),
        (SpaceDescriptor::SymmA3_3, "three-note chords up to even permutations"),
        (SpaceDescriptor::SymmZ4_4, "four-note chords up to rotation"),
        (SpaceDescriptor::ChordDelayProduct { k: 4, j: 2 }, "j consecutive k-note chords"),
        (SpaceDescriptor::Exp { n: 3 }, "subsets of at most n points"),
    ]
}
