use super::quad::QuadRational;

/// Exact rank over Q(√3) by fraction-free (Bareiss) elimination.
///
/// Rows may be ragged only if empty; all nonempty rows must share a length.
pub fn exact_rank(matrix: &[Vec<QuadRational>]) -> usize {
    let rows = matrix.len();
    if rows == 0 {
        return 0;
    }
    let cols = matrix[0].len();
    assert!(matrix.iter().all(|r| r.len() == cols), "ragged matrix");
    let mut a: Vec<Vec<QuadRational>> = matrix.to_vec();
    let mut prev = QuadRational::one();
    let mut rank = 0;

    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        for r in (rank + 1)..rows {
            for c in (col + 1)..cols {
                let cross = &(&a[rank][col] * &a[r][c]) - &(&a[r][col] * &a[rank][c]);
                // exact: every intermediate is a minor of the input
                a[r][c] = &cross / &prev;
            }
            a[r][col] = QuadRational::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}
