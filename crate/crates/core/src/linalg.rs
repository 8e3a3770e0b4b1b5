//! Exact rank computation.

use crate::scalar::EuclideanRing;

/// Rank of a dense matrix given as rows, by fraction-free (Bareiss)
/// elimination. Every division is exact, so entries stay in `C`.
pub fn rank<C: EuclideanRing>(mut rows: Vec<Vec<C>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    debug_assert!(rows.iter().all(|r| r.len() == cols));
    let mut prev = C::one();
    let mut r = 0;
    for col in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = pivot_row[col].clone();
        for row in tail.iter_mut() {
            let factor = row[col].clone();
            for j in col + 1..cols {
                let num = pivot.clone() * row[j].clone() - factor.clone() * pivot_row[j].clone();
                row[j] = num / prev.clone();
            }
            row[col] = C::zero();
        }
        prev = pivot;
        r += 1;
    }
    r
}
