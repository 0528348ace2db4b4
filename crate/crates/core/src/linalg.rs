//! Gaussian elimination over an exact field. Matrices here are at most rank ~8.

use crate::scalar::Scalar;

/// Solves `a x = b` for square nonsingular `a` (row-major). Returns `None` if
/// `a` is singular or the shapes disagree.
pub fn solve<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Option<Vec<S>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|row| row.len() != n) {
        return None;
    }
    let mut m: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = S::one() / m[col][col].clone();
        for x in m[col].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (x, p) in m[r].iter_mut().zip(pivot_row).skip(col) {
                    *x = x.clone() - p * f.clone();
                }
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Expresses `target` in the basis `columns` (each a coordinate vector).
pub fn coordinates<S: Scalar>(columns: &[Vec<S>], target: &[S]) -> Option<Vec<S>> {
    let n = columns.len();
    if n == 0 || target.len() != n {
        return None;
    }
    let a: Vec<Vec<S>> = (0..n)
        .map(|row| columns.iter().map(|c| c[row].clone()).collect())
        .collect();
    solve(&a, target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    #[test]
    fn solves_small_system() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        let x = solve(&a, &[q(3), q(5)]).unwrap();
        assert_eq!(x, vec![Q::new(4, 5), Q::new(7, 5)]);
    }

    #[test]
    fn singular_is_none() {
        let a = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert!(solve(&a, &[q(1), q(1)]).is_none());
    }

    #[test]
    fn coordinates_in_basis() {
        let cols = vec![vec![q(1), q(-1)], vec![q(0), q(1)]];
        assert_eq!(coordinates(&cols, &[q(2), q(1)]).unwrap(), vec![q(2), q(3)]);
    }
}
