//! Exact integer linear algebra over `i128` with overflow checks.
//!
//! Fraction-free (Bareiss) elimination keeps every intermediate entry a minor
//! of the input, so values stay small at the sizes used here; any overflow is
//! reported instead of wrapping.

use crate::error::{Error, Result};

pub type Matrix = Vec<Vec<i128>>;

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

fn sub(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

/// Converts rows of any integer type into a working matrix.
pub fn matrix<T: Copy + Into<i128>>(rows: &[Vec<T>]) -> Matrix {
    rows.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect()
}

/// Row echelon form by Bareiss elimination. Returns the pivot columns.
fn echelon(m: &mut Matrix) -> Result<Vec<usize>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = 1i128;
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = sub(mul(m[r][c], m[i][j])?, mul(m[i][c], m[r][j])?)?;
                debug_assert_eq!(num % prev, 0);
                m[i][j] = num / prev;
            }
            m[i][c] = 0;
        }
        prev = m[r][c];
        pivots.push(c);
        r += 1;
    }
    Ok(pivots)
}

pub fn rank(rows: &Matrix) -> Result<usize> {
    let mut m = rows.clone();
    Ok(echelon(&mut m)?.len())
}

/// Lexicographically first set of linearly independent columns spanning the
/// column space.
pub fn independent_columns(rows: &Matrix) -> Result<Vec<usize>> {
    let mut m = rows.clone();
    echelon(&mut m)
}

/// Determinant of a square matrix.
pub fn det(rows: &Matrix) -> Result<i128> {
    let n = rows.len();
    debug_assert!(rows.iter().all(|r| r.len() == n));
    if n == 0 {
        return Ok(1);
    }
    let mut m = rows.clone();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| m[i][k] != 0) else { return Ok(0) };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = sub(mul(m[k][k], m[i][j])?, mul(m[i][k], m[k][j])?)?;
                m[i][j] = num / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    mul(sign, m[n - 1][n - 1])
}

/// Nonzero elementary divisors `d_1 | d_2 | ...` of the Smith normal form.
pub fn elementary_divisors(rows: &Matrix) -> Result<Vec<i128>> {
    let mut m = rows.clone();
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut divisors = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = m[t][t];
            let mut changed = false;
            for i in t + 1..nrows {
                let q = m[i][t] / p;
                if q != 0 {
                    for j in t..ncols {
                        m[i][j] = sub(m[i][j], mul(q, m[t][j])?)?;
                    }
                }
                if m[i][t] != 0 {
                    changed = true;
                }
            }
            for j in t + 1..ncols {
                let q = m[t][j] / p;
                if q != 0 {
                    for row in m.iter_mut().skip(t) {
                        row[j] = sub(row[j], mul(q, row[t])?)?;
                    }
                }
                if m[t][j] != 0 {
                    changed = true;
                }
            }
            if changed {
                // move the smallest remainder in row/column t into the pivot
                let mut best = (t, t);
                for i in t + 1..nrows {
                    if m[i][t] != 0 && m[i][t].abs() < m[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..ncols {
                    if m[t][j] != 0 && m[t][j].abs() < m[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.1 == t {
                    m.swap(t, best.0);
                } else {
                    for row in m.iter_mut() {
                        row.swap(t, best.1);
                    }
                }
                continue;
            }
            // the pivot must divide every entry of the trailing block
            let bad = (t + 1..nrows).find(|&i| (t + 1..ncols).any(|j| m[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in t..ncols {
                        m[t][j] = m[t][j].checked_add(m[i][j]).ok_or(Error::Overflow)?;
                    }
                }
                None => break,
            }
        }
        divisors.push(m[t][t].abs());
        t += 1;
    }
    Ok(divisors)
}

/// Rows `points[i] - points[0]` for `i >= 1`.
pub fn difference_matrix(points: &[&[i64]]) -> Matrix {
    let Some(base) = points.first() else { return Vec::new() };
    points[1..]
        .iter()
        .map(|p| p.iter().zip(base.iter()).map(|(&x, &y)| i128::from(x) - i128::from(y)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_det() {
        let m = matrix(&[vec![1i64, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]);
        assert_eq!(rank(&m).unwrap(), 3);
        assert_eq!(det(&m).unwrap(), -3);
        let singular = matrix(&[vec![1i64, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(rank(&singular).unwrap(), 2);
        assert_eq!(det(&singular).unwrap(), 0);
        assert_eq!(independent_columns(&singular).unwrap(), vec![0, 1]);
    }

    #[test]
    fn det_needs_row_swap() {
        let m = matrix(&[vec![0i64, 1], vec![1, 0]]);
        assert_eq!(det(&m).unwrap(), -1);
    }

    #[test]
    fn smith_divisors() {
        let m = matrix(&[vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(elementary_divisors(&m).unwrap(), vec![2, 6, 12]);
        let m = matrix(&[vec![2i64, 0], vec![0, 3]]);
        assert_eq!(elementary_divisors(&m).unwrap(), vec![1, 6]);
        let m = matrix(&[vec![1i64, 1, 0, 0], vec![0, 0, 1, 1]]);
        assert_eq!(elementary_divisors(&m).unwrap(), vec![1, 1]);
        let m = matrix(&[vec![2i64, 0, 0]]);
        assert_eq!(elementary_divisors(&m).unwrap(), vec![2]);
    }

    #[test]
    fn zero_matrix_has_no_divisors() {
        let m = matrix(&[vec![0i64, 0], vec![0, 0]]);
        assert!(elementary_divisors(&m).unwrap().is_empty());
        assert_eq!(rank(&m).unwrap(), 0);
    }

    #[test]
    fn divisor_product_matches_determinant() {
        let m = matrix(&[vec![3i64, 1, 4], vec![1, 5, 9], vec![2, 6, 5]]);
        let d = det(&m).unwrap().abs();
        let prod: i128 = elementary_divisors(&m).unwrap().iter().product();
        assert_eq!(d, prod);
    }
}
