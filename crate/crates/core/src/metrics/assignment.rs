//! Minimum-cost perfect matching on a dense square cost matrix.
//!
//! Shortest augmenting path formulation of the Hungarian method with row and
//! column potentials, O(n^3).

/// Result of [`min_cost_assignment`]: `columns[row]` is the column matched to `row`.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub columns: Vec<usize>,
    pub cost: f64,
}

/// Solves the square linear assignment problem.
///
/// `costs` must be square with finite entries.
pub fn min_cost_assignment(costs: &[Vec<f64>]) -> Assignment {
    let n = costs.len();
    if n == 0 {
        return Assignment {
            columns: Vec::new(),
            cost: 0.0,
        };
    }
    debug_assert!(costs.iter().all(|row| row.len() == n));

    // 1-based with a sentinel column 0
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut matched_row = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        matched_row[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];

        loop {
            used[j0] = true;
            let i0 = matched_row[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;

            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = costs[i0 - 1][j - 1] - u[i0] - v[j];
                if reduced < minv[j] {
                    minv[j] = reduced;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }

            for j in 0..=n {
                if used[j] {
                    u[matched_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }

            j0 = j1;
            if matched_row[j0] == 0 {
                break;
            }
        }

        loop {
            let j1 = way[j0];
            matched_row[j0] = matched_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut columns = vec![0usize; n];
    for j in 1..=n {
        if matched_row[j] > 0 {
            columns[matched_row[j] - 1] = j - 1;
        }
    }
    let cost = columns
        .iter()
        .enumerate()
        .map(|(row, &col)| costs[row][col])
        .sum();
    Assignment { columns, cost }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn brute_force(costs: &[Vec<f64>]) -> f64 {
        fn go(costs: &[Vec<f64>], row: usize, used: &mut Vec<bool>, acc: f64, best: &mut f64) {
            if row == costs.len() {
                *best = best.min(acc);
                return;
            }
            for col in 0..costs.len() {
                if !used[col] {
                    used[col] = true;
                    go(costs, row + 1, used, acc + costs[row][col], best);
                    used[col] = false;
                }
            }
        }
        let mut best = f64::INFINITY;
        go(costs, 0, &mut vec![false; costs.len()], 0.0, &mut best);
        best
    }

    #[test]
    fn small_known_instance() {
        let costs = vec![
            vec![4.0, 1.0, 3.0],
            vec![2.0, 0.0, 5.0],
            vec![3.0, 2.0, 2.0],
        ];
        let a = min_cost_assignment(&costs);
        assert_eq!(a.cost, 5.0);
        let mut cols = a.columns.clone();
        cols.sort();
        assert_eq!(cols, vec![0, 1, 2]);
    }

    #[test]
    fn empty_matrix() {
        let a = min_cost_assignment(&[]);
        assert!(a.columns.is_empty());
        assert_eq!(a.cost, 0.0);
    }

    #[test]
    fn agrees_with_enumeration() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..=6);
            let costs: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(0.0..1.0)).collect())
                .collect();
            let a = min_cost_assignment(&costs);
            assert!((a.cost - brute_force(&costs)).abs() < 1e-12);
        }
    }
}
