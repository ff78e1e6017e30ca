//! Exact minimum-cost assignment on a square cost matrix.
//!
//! Shortest-augmenting-path formulation with dual potentials, O(n^3).
//! Row/column counts here are topic counts (tens), so exactness matters
//! and runtime does not.

/// Solve the square assignment problem, minimizing total cost.
/// `cost[i][j]` is the cost of assigning row `i` to column `j`.
/// Returns the column matched to each row.
pub fn solve_min_cost(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    debug_assert!(cost.iter().all(|row| row.len() == n));
    if n == 0 {
        return Vec::new();
    }

    // potentials over rows/columns; column n is a virtual start column
    let mut row_potential = vec![0.0f64; n];
    let mut col_potential = vec![0.0f64; n + 1];
    // matched_row[j] = row currently assigned to column j (n = unassigned)
    let mut matched_row = vec![n; n + 1];
    let mut previous_col = vec![0usize; n + 1];

    for row in 0..n {
        matched_row[n] = row;
        let mut current_col = n;
        let mut min_slack = vec![f64::INFINITY; n + 1];
        let mut visited = vec![false; n + 1];

        // grow the alternating tree until an unmatched column is reached
        while matched_row[current_col] != n || current_col == n {
            visited[current_col] = true;
            let current_row = matched_row[current_col];
            let mut delta = f64::INFINITY;
            let mut next_col = n;
            for col in 0..n {
                if visited[col] {
                    continue;
                }
                let reduced =
                    cost[current_row][col] - row_potential[current_row] - col_potential[col];
                if reduced < min_slack[col] {
                    min_slack[col] = reduced;
                    previous_col[col] = current_col;
                }
                if min_slack[col] < delta {
                    delta = min_slack[col];
                    next_col = col;
                }
            }
            for col in 0..=n {
                if visited[col] {
                    if matched_row[col] != n {
                        row_potential[matched_row[col]] += delta;
                    }
                    col_potential[col] -= delta;
                } else {
                    min_slack[col] -= delta;
                }
            }
            current_col = next_col;
            if matched_row[current_col] == n {
                break;
            }
        }

        // augment along the recorded path
        while current_col != n {
            let prev = previous_col[current_col];
            matched_row[current_col] = matched_row[prev];
            current_col = prev;
        }
    }

    let mut assignment = vec![0usize; n];
    for col in 0..n {
        if matched_row[col] != n {
            assignment[matched_row[col]] = col;
        }
    }
    assignment
}

/// Maximize total value by solving min-cost on the negated matrix.
/// Returns the column matched to each row.
pub fn solve_max_value(value: &[Vec<f64>]) -> Vec<usize> {
    let negated: Vec<Vec<f64>> = value
        .iter()
        .map(|row| row.iter().map(|v| -v).collect())
        .collect();
    solve_min_cost(&negated)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total(cost: &[Vec<f64>], assignment: &[usize]) -> f64 {
        assignment
            .iter()
            .enumerate()
            .map(|(i, &j)| cost[i][j])
            .sum()
    }

    fn brute_force_min(cost: &[Vec<f64>]) -> f64 {
        let n = cost.len();
        let mut cols: Vec<usize> = (0..n).collect();
        let mut best = f64::INFINITY;
        permute(&mut cols, 0, &mut |perm| {
            let sum: f64 = perm.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
            if sum < best {
                best = sum;
            }
        });
        best
    }

    fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
        if k == items.len() {
            visit(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            permute(items, k + 1, visit);
            items.swap(k, i);
        }
    }

    #[test]
    fn identity_matrix_assigns_diagonal() {
        let cost = vec![
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ];
        assert_eq!(solve_min_cost(&cost), vec![0, 1, 2]);
    }

    #[test]
    fn classic_small_case() {
        let cost = vec![
            vec![10.0, 25.0, 15.0, 20.0],
            vec![15.0, 30.0, 5.0, 15.0],
            vec![35.0, 20.0, 12.0, 24.0],
            vec![17.0, 25.0, 24.0, 20.0],
        ];
        let assignment = solve_min_cost(&cost);
        assert_eq!(total(&cost, &assignment), 10.0 + 5.0 + 20.0 + 20.0);
    }

    #[test]
    fn matches_brute_force_on_random_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for n in 1..=6 {
            for _ in 0..40 {
                let cost: Vec<Vec<f64>> = (0..n)
                    .map(|_| (0..n).map(|_| rng.gen::<f64>()).collect())
                    .collect();
                let assignment = solve_min_cost(&cost);
                assert_eq!(total(&cost, &assignment), brute_force_min(&cost));
            }
        }
    }

    #[test]
    fn max_value_is_min_cost_negated() {
        let value = vec![vec![0.9, 0.1], vec![0.8, 0.2]];
        let assignment = solve_max_value(&value);
        assert_eq!(assignment, vec![0, 1]); // 0.9 + 0.2 beats 0.1 + 0.8
    }

    #[test]
    fn empty_matrix() {
        assert!(solve_min_cost(&[]).is_empty());
    }
}
