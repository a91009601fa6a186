//! Vietoris–Rips filtrations.
//!
//! A simplex enters at the largest pairwise distance among its vertices. The
//! threshold is closed: with cap `eps_max`, an edge of length exactly
//! `eps_max` is present.

use std::cmp::Ordering;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pointcloud::DistanceMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    /// Strictly increasing point indices.
    pub vertices: Vec<usize>,
    pub filtration: f64,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// Total order used everywhere a simplex order matters: filtration value,
/// then dimension, then lexicographic vertices.
pub fn simplex_order(a: &Simplex, b: &Simplex) -> Ordering {
    a.filtration
        .total_cmp(&b.filtration)
        .then(a.vertices.len().cmp(&b.vertices.len()))
        .then_with(|| a.vertices.cmp(&b.vertices))
}

/// Rips complex truncated at dimension `max_dim` and scale `eps_max`, with
/// simplices in [`simplex_order`].
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredComplex {
    simplices: Vec<Simplex>,
    max_dim: usize,
    eps_max: f64,
    num_vertices: usize,
}

impl FilteredComplex {
    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn eps_max(&self) -> f64 {
        self.eps_max
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Number of simplices of each dimension `0..=max_dim` with filtration `<= eps`.
    pub fn simplex_counts_at(&self, eps: f64) -> Result<Vec<usize>> {
        if eps > self.eps_max {
            return Err(Error::Range(format!(
                "eps {eps} exceeds the complex's scale cap {}",
                self.eps_max
            )));
        }
        let mut counts = vec![0; self.max_dim + 1];
        for s in self.simplices.iter().take_while(|s| s.filtration <= eps) {
            counts[s.dim()] += 1;
        }
        Ok(counts)
    }

    /// One simplex per line: `dim filtration v0 v1 ...`.
    pub fn debug_dump(&self) -> String {
        let mut out = String::new();
        for s in &self.simplices {
            let _ = write!(out, "{} {}", s.dim(), s.filtration);
            for v in &s.vertices {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        out
    }
}

/// Builds the Rips filtration of `matrix` up to dimension `max_dim`, keeping
/// simplices whose diameter is at most `eps_max`.
///
/// Vertices first, then edges by length, then every edge `{v, u}` (`v < u`)
/// grows its cofaces from the common lower neighbours of its endpoints.
pub fn build_rips(matrix: &DistanceMatrix, max_dim: usize, eps_max: f64) -> Result<FilteredComplex> {
    if !(eps_max >= 0.0) {
        return Err(Error::Config(format!("eps_max must be non-negative, got {eps_max}")));
    }
    let n = matrix.len();
    let mut simplices: Vec<Simplex> = (0..n)
        .map(|v| Simplex {
            vertices: vec![v],
            filtration: 0.0,
        })
        .collect();

    if max_dim >= 1 {
        let mut edges: Vec<(f64, usize, usize)> = (1..n)
            .flat_map(|u| (0..u).map(move |v| (u, v)))
            .filter_map(|(u, v)| {
                let d = matrix.get(u, v);
                (d <= eps_max).then_some((d, v, u))
            })
            .collect();
        edges.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));

        // lower[u]: neighbours v < u, ascending
        let mut lower: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(_, v, u) in &edges {
            lower[u].push(v);
        }
        for l in &mut lower {
            l.sort_unstable();
        }

        let cofaces: Vec<Simplex> = edges
            .par_iter()
            .flat_map_iter(|&(d, v, u)| {
                let mut out = Vec::new();
                let common = intersect(&lower[u], &lower[v]);
                let mut stack = vec![v, u];
                expand(matrix, &lower, &mut stack, d, &common, max_dim, &mut out);
                out
            })
            .collect();
        simplices.extend(cofaces);
    }

    simplices.par_sort_unstable_by(simplex_order);
    Ok(FilteredComplex {
        simplices,
        max_dim,
        eps_max,
        num_vertices: n,
    })
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Emits `stack` (kept descending from the back: newest vertex smallest) and
/// recursively every coface obtained by adding a common lower neighbour.
fn expand(
    matrix: &DistanceMatrix,
    lower: &[Vec<usize>],
    stack: &mut Vec<usize>,
    filtration: f64,
    candidates: &[usize],
    max_dim: usize,
    out: &mut Vec<Simplex>,
) {
    let mut vertices = stack.clone();
    vertices.sort_unstable();
    out.push(Simplex {
        vertices,
        filtration,
    });
    if stack.len() > max_dim {
        return;
    }
    for &w in candidates {
        let f = stack
            .iter()
            .map(|&x| matrix.get(x, w))
            .fold(filtration, f64::max);
        let next = intersect(candidates, &lower[w]);
        stack.push(w);
        expand(matrix, lower, stack, f, &next, max_dim, out);
        stack.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn equilateral() -> DistanceMatrix {
        DistanceMatrix::from_lower(3, vec![1.0, 1.0, 1.0]).unwrap()
    }

    fn square() -> DistanceMatrix {
        // corners in cyclic order (0,0), (1,0), (1,1), (0,1)
        let pts = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        let rows: Vec<Vec<f64>> = pts
            .iter()
            .map(|&(x1, y1): &(f64, f64)| {
                pts.iter()
                    .map(|&(x2, y2): &(f64, f64)| ((x1 - x2).powi(2) + (y1 - y2).powi(2)).sqrt())
                    .collect()
            })
            .collect();
        DistanceMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn equilateral_triangle() {
        let c = build_rips(&equilateral(), 2, 2.0).unwrap();
        assert_eq!(c.len(), 7);
        assert_eq!(c.simplex_counts_at(0.5).unwrap(), vec![3, 0, 0]);
        assert_eq!(c.simplex_counts_at(1.0).unwrap(), vec![3, 3, 1]);
        let tri = c.simplices().last().unwrap();
        assert_eq!(tri.vertices, vec![0, 1, 2]);
        assert_eq!(tri.filtration, 1.0);
        assert!(matches!(c.simplex_counts_at(2.5), Err(Error::Range(_))));
    }

    #[test]
    fn unit_square() {
        let c = build_rips(&square(), 2, 2.0).unwrap();
        let sqrt2 = 2f64.sqrt();
        let edges: Vec<f64> = c.simplices().iter().filter(|s| s.dim() == 1).map(|s| s.filtration).collect();
        assert_eq!(edges.iter().filter(|&&f| f == 1.0).count(), 4);
        assert_eq!(edges.iter().filter(|&&f| f == sqrt2).count(), 2);
        let triangles: Vec<&Simplex> = c.simplices().iter().filter(|s| s.dim() == 2).collect();
        assert_eq!(triangles.len(), 4);
        assert!(triangles.iter().all(|t| t.filtration == sqrt2));
        assert_eq!(c.simplex_counts_at(1.2).unwrap(), vec![4, 4, 0]);
    }

    #[test]
    fn zero_scale_keeps_vertices_only() {
        let c = build_rips(&square(), 3, 0.0).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.simplices().iter().all(|s| s.dim() == 0));
    }

    #[test]
    fn dimension_cap() {
        let c = build_rips(&square(), 1, 2.0).unwrap();
        assert_eq!(c.simplex_counts_at(2.0).unwrap(), vec![4, 6]);
        let c = build_rips(&square(), 0, 2.0).unwrap();
        assert_eq!(c.len(), 4);
        let c = build_rips(&square(), 5, 2.0).unwrap();
        assert_eq!(c.simplex_counts_at(2.0).unwrap(), vec![4, 6, 4, 1, 0, 0]);
    }

    #[test]
    fn order_is_filtration_dim_lex() {
        let c = build_rips(&square(), 3, 2.0).unwrap();
        for w in c.simplices().windows(2) {
            assert_eq!(simplex_order(&w[0], &w[1]), Ordering::Less);
        }
    }

    #[test]
    fn rejects_negative_cap() {
        assert!(build_rips(&square(), 2, -1.0).is_err());
        assert!(build_rips(&square(), 2, f64::NAN).is_err());
    }

    #[test]
    fn dump_format() {
        let c = build_rips(&equilateral(), 2, 1.0).unwrap();
        let dump = c.debug_dump();
        assert_eq!(dump.lines().next(), Some("0 0 0"));
        assert_eq!(dump.lines().last(), Some("2 1 0 1 2"));
    }
}
