use super::reduce::PrimeField;
use crate::error::{Error, Result};
use crate::pointcloud::DistanceMatrix;

/// Largest cloud [`oracle_betti`] accepts.
pub const ORACLE_MAX_POINTS: usize = 16;

/// β_dim of the Rips complex at the single scale `eps` (closed threshold),
/// computed from scratch: enumerate every clique, build the dense boundary
/// matrices and take ranks over GF(p).
pub fn oracle_betti(matrix: &DistanceMatrix, eps: f64, dim: usize, p: u32) -> Result<usize> {
    let field = PrimeField::new(p)?;
    let n = matrix.len();
    if n > ORACLE_MAX_POINTS {
        return Err(Error::Size {
            size: n,
            limit: ORACLE_MAX_POINTS,
        });
    }
    let cliques = |k: usize| -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = (0u32..1 << n)
            .filter(|m| m.count_ones() as usize == k + 1)
            .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|vs| {
                vs.iter()
                    .enumerate()
                    .all(|(a, &u)| vs[a + 1..].iter().all(|&v| matrix.get(u, v) <= eps))
            })
            .collect();
        out.sort_unstable();
        out
    };
    let lower = if dim == 0 { Vec::new() } else { cliques(dim - 1) };
    let middle = cliques(dim);
    let upper = cliques(dim + 1);
    let rank_in = boundary_rank(field, &lower, &middle);
    let rank_out = boundary_rank(field, &middle, &upper);
    Ok(middle.len() - rank_in - rank_out)
}

/// Rank of the boundary map from `cells` to `faces` (both sorted lists).
fn boundary_rank(field: PrimeField, faces: &[Vec<usize>], cells: &[Vec<usize>]) -> usize {
    if faces.is_empty() || cells.is_empty() {
        return 0;
    }
    let mut rows: Vec<Vec<u32>> = cells
        .iter()
        .map(|cell| {
            let mut row = vec![0u32; faces.len()];
            for drop in 0..cell.len() {
                let face: Vec<usize> = cell
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != drop)
                    .map(|(_, &v)| v)
                    .collect();
                let idx = faces.binary_search(&face).expect("face of a clique is a clique");
                row[idx] = field.sign(drop);
            }
            row
        })
        .collect();
    rank(field, &mut rows)
}

fn rank(field: PrimeField, rows: &mut [Vec<u32>]) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..width {
        let Some(pivot) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pivot);
        let inv = field.inv(rows[r][c]);
        for i in r + 1..rows.len() {
            if rows[i][c] != 0 {
                let factor = field.neg(field.mul(rows[i][c], inv));
                for k in c..width {
                    rows[i][k] = field.add(rows[i][k], field.mul(factor, rows[r][k]));
                }
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equilateral_filled() {
        let m = DistanceMatrix::from_lower(3, vec![1.0, 1.0, 1.0]).unwrap();
        assert_eq!(oracle_betti(&m, 1.0, 1, 2).unwrap(), 0);
        assert_eq!(oracle_betti(&m, 1.0, 0, 2).unwrap(), 1);
        assert_eq!(oracle_betti(&m, 0.5, 0, 2).unwrap(), 3);
    }

    #[test]
    fn square_loop() {
        let s = 2f64.sqrt();
        let m = DistanceMatrix::from_lower(4, vec![1.0, s, 1.0, 1.0, s, 1.0]).unwrap();
        assert_eq!(oracle_betti(&m, 1.2, 1, 2).unwrap(), 1);
        assert_eq!(oracle_betti(&m, 1.2, 1, 3).unwrap(), 1);
        assert_eq!(oracle_betti(&m, s, 1, 2).unwrap(), 0);
    }

    #[test]
    fn size_guard() {
        let m = DistanceMatrix::from_lower(17, vec![1.0; 17 * 16 / 2]).unwrap();
        assert!(matches!(oracle_betti(&m, 1.0, 1, 2), Err(Error::Size { size: 17, limit: 16 })));
    }
}
