//! Small dense linear algebra over [`Scalar`]: rank, determinant, solve.

use crate::scalar::Scalar;

/// Row-reduce in place; returns the pivot columns.
fn eliminate<S: Scalar>(m: &mut [Vec<S>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero_tie()) else {
            continue;
        };
        m.swap(r, p);
        let inv = S::one() / m[r][c].clone();
        for j in c..cols {
            m[r][j] = m[r][j].clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero_tie() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let d = f.clone() * m[r][j].clone();
                    m[i][j] = m[i][j].clone() - d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a matrix given by rows.
pub fn rank<S: Scalar>(rows: &[Vec<S>]) -> usize {
    let mut m = rows.to_vec();
    eliminate(&mut m).len()
}

/// Affine dimension of a point set (`-1` is reported as `None` for no points).
pub fn affine_dim<S: Scalar>(points: &[&[S]]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let diffs: Vec<Vec<S>> = rest
        .iter()
        .map(|p| p.iter().zip(first.iter()).map(|(a, b)| a.clone() - b.clone()).collect())
        .collect();
    Some(rank(&diffs))
}

/// Determinant of a square matrix.
pub fn det<S: Scalar>(rows: &[Vec<S>]) -> S {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut d = S::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero_tie()) else {
            return S::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        let piv = m[c][c].clone();
        d = d * piv.clone();
        for i in c + 1..n {
            if m[i][c].is_zero_tie() {
                continue;
            }
            let f = m[i][c].clone() / piv.clone();
            for j in c..n {
                let t = f.clone() * m[c][j].clone();
                m[i][j] = m[i][j].clone() - t;
            }
        }
    }
    d
}

/// Solve `A x = b` when the solution is unique; `None` if singular or
/// inconsistent.
pub fn solve<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Option<Vec<S>> {
    let n = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = eliminate(&mut m);
    if pivots.len() != n || pivots.contains(&n) {
        return None;
    }
    Some((0..n).map(|i| m[i][n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi, Q};

    #[test]
    fn rank_det_solve() {
        let m = vec![vec![qi(1), qi(2)], vec![qi(2), qi(4)]];
        assert_eq!(rank(&m), 1);
        assert_eq!(det(&m), qi(0));
        let m = vec![vec![qi(2), qi(1)], vec![qi(1), qi(3)]];
        assert_eq!(det(&m), qi(5));
        assert_eq!(solve(&m, &[qi(3), qi(4)]).unwrap(), vec![qi(1), qi(1)]);
        let pts: Vec<Vec<Q>> = vec![vec![q(1, 2), q(1, 2)], vec![qi(1), qi(0)]];
        let refs: Vec<&[Q]> = pts.iter().map(Vec::as_slice).collect();
        assert_eq!(affine_dim(&refs), Some(1));
    }
}
