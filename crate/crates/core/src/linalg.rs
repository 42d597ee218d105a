//! Dense Gaussian elimination over a [`FieldSpec`].

use crate::field::{FieldElement, FieldSpec};

/// Outcome of solving a square or rectangular linear system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveStatus {
    Unique,
    None,
    Underdetermined,
}

/// Reduces `rows` in place to row echelon form, pivoting on the first
/// nonzero entry of each column. Returns the pivot columns and whether an
/// odd number of row swaps happened.
fn echelon(rows: &mut [Vec<FieldElement>], ncols: usize) -> (Vec<usize>, bool) {
    let mut pivots = Vec::new();
    let mut odd = false;
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            rows.swap(p, r);
            odd = !odd;
        }
        let inv = rows[r][c].inverse().expect("pivot is nonzero");
        for i in r + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let factor = &rows[i][c] * &inv;
            let (top, bottom) = rows.split_at_mut(i);
            let pivot_row = &top[r];
            for (x, y) in bottom[0][c..].iter_mut().zip(&pivot_row[c..]) {
                if !y.is_zero() {
                    *x = &*x - &(&factor * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (pivots, odd)
}

pub fn rank(rows: &[Vec<FieldElement>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut work = rows.to_vec();
    echelon(&mut work, ncols).0.len()
}

pub fn determinant(field: FieldSpec, rows: &[Vec<FieldElement>]) -> FieldElement {
    let n = rows.len();
    let mut work = rows.to_vec();
    let (pivots, odd) = echelon(&mut work, n);
    if pivots.len() < n {
        return field.zero();
    }
    let det = (0..n).fold(field.one(), |acc, i| &acc * &work[i][i]);
    if odd {
        -det
    } else {
        det
    }
}

/// Solves `a * x = b`. A unique solution is returned only when the system
/// is consistent and `a` has full column rank.
pub fn solve(
    field: FieldSpec,
    a: &[Vec<FieldElement>],
    b: &[FieldElement],
) -> (SolveStatus, Option<Vec<FieldElement>>) {
    let ncols = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<FieldElement>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let (pivots, _) = echelon(&mut aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return (SolveStatus::None, None);
    }
    if pivots.len() < ncols {
        return (SolveStatus::Underdetermined, None);
    }
    let mut x = vec![field.zero(); ncols];
    for (r, &c) in pivots.iter().enumerate().rev() {
        let mut acc = aug[r][ncols].clone();
        for j in c + 1..ncols {
            if !aug[r][j].is_zero() {
                acc = &acc - &(&aug[r][j] * &x[j]);
            }
        }
        x[c] = acc.checked_div(&aug[r][c]).expect("pivot is nonzero");
    }
    (SolveStatus::Unique, Some(x))
}

/// A nonzero `x` with `a * x = 0`, if one exists. The free variable chosen
/// is the first non-pivot column, set to 1.
pub fn kernel_vector(field: FieldSpec, a: &[Vec<FieldElement>]) -> Option<Vec<FieldElement>> {
    let ncols = a.first().map_or(0, Vec::len);
    let mut work = a.to_vec();
    let (pivots, _) = echelon(&mut work, ncols);
    let free = (0..ncols).find(|c| !pivots.contains(c))?;
    let mut x = vec![field.zero(); ncols];
    x[free] = field.one();
    for (r, &c) in pivots.iter().enumerate().rev() {
        if c > free {
            continue;
        }
        let mut acc = field.zero();
        for j in c + 1..ncols {
            if !work[r][j].is_zero() && !x[j].is_zero() {
                acc = &acc - &(&work[r][j] * &x[j]);
            }
        }
        x[c] = acc.checked_div(&work[r][c]).expect("pivot is nonzero");
    }
    Some(x)
}

pub fn transpose(a: &[Vec<FieldElement>]) -> Vec<Vec<FieldElement>> {
    let ncols = a.first().map_or(0, Vec::len);
    (0..ncols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul(field: FieldSpec, a: &[Vec<FieldElement>], b: &[Vec<FieldElement>]) -> Vec<Vec<FieldElement>> {
    let inner = b.len();
    let ncols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..ncols)
                .map(|j| {
                    (0..inner).fold(field.zero(), |acc, l| {
                        if row[l].is_zero() || b[l][j].is_zero() {
                            acc
                        } else {
                            &acc + &(&row[l] * &b[l][j])
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// Inverse of a square matrix by Gauss-Jordan elimination.
pub fn inverse(field: FieldSpec, a: &[Vec<FieldElement>]) -> Option<Vec<Vec<FieldElement>>> {
    let n = a.len();
    let mut aug: Vec<Vec<FieldElement>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    let (pivots, _) = echelon(&mut aug, n);
    if pivots.len() < n {
        return None;
    }
    for c in (0..n).rev() {
        let inv = aug[c][c].inverse().expect("pivot is nonzero");
        for x in aug[c].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..c {
            if aug[i][c].is_zero() {
                continue;
            }
            let factor = aug[i][c].clone();
            let (top, bottom) = aug.split_at_mut(c);
            for (x, y) in top[i].iter_mut().zip(&bottom[0]) {
                if !y.is_zero() {
                    *x = &*x - &(&factor * y);
                }
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(f: FieldSpec, rows: &[&[i64]]) -> Vec<Vec<FieldElement>> {
        rows.iter().map(|r| r.iter().map(|&x| f.int(x)).collect()).collect()
    }

    #[test]
    fn determinant_and_rank() {
        let q = FieldSpec::RATIONALS;
        let a = m(q, &[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        assert_eq!(determinant(q, &a), q.int(-2));
        assert_eq!(rank(&a), 3);
        let f2 = FieldSpec::new(2).unwrap();
        let a2 = m(f2, &[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        assert!(determinant(f2, &a2).is_zero());
        assert_eq!(rank(&a2), 2);
    }

    #[test]
    fn solve_statuses() {
        let q = FieldSpec::RATIONALS;
        let a = m(q, &[&[2, -1], &[1, 0]]);
        let (s, x) = solve(q, &a, &[q.int(0), q.int(1)]);
        assert_eq!(s, SolveStatus::Unique);
        assert_eq!(x.unwrap(), vec![q.int(1), q.int(2)]);
        let a = m(q, &[&[1, 1], &[1, 1]]);
        assert_eq!(solve(q, &a, &[q.int(0), q.int(1)]).0, SolveStatus::None);
        assert_eq!(solve(q, &a, &[q.int(1), q.int(1)]).0, SolveStatus::Underdetermined);
    }

    #[test]
    fn kernel_and_inverse() {
        let q = FieldSpec::RATIONALS;
        let a = m(q, &[&[1, 2, 3], &[2, 4, 6]]);
        let x = kernel_vector(q, &a).unwrap();
        assert!(x.iter().any(|v| !v.is_zero()));
        let ax = mat_mul(q, &a, &transpose(&[x]));
        assert!(ax.iter().all(|r| r[0].is_zero()));
        assert!(kernel_vector(q, &m(q, &[&[1, 0], &[0, 1]])).is_none());

        let f5 = FieldSpec::new(5).unwrap();
        let b = m(f5, &[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        let inv = inverse(f5, &b).unwrap();
        assert_eq!(mat_mul(f5, &b, &inv), m(f5, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
        assert!(inverse(q, &m(q, &[&[1, 2], &[2, 4]])).is_none());
    }
}
