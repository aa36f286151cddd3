//! Dense exact Gaussian elimination over the rationals.

use crate::rational::Rational;
use num_traits::{One, Zero};

/// Row-reduces `rows` (each with `ncols` coefficients followed by an optional
/// augmented column) in place and returns the pivot column of each pivot row.
fn reduce(rows: &mut Vec<Vec<Rational>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let Some(ncols) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut m = rows.to_vec();
    reduce(&mut m, ncols).len()
}

/// Solves `a x = b` when the system is consistent with a unique solution.
pub fn solve_unique(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.first()?.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = reduce(&mut m, n);
    if pivots.len() < n {
        return None;
    }
    if m[pivots.len()..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][n].clone();
    }
    Some(x)
}

/// A nonzero vector `z` with `a z = 0`, if the kernel is nontrivial.
pub fn null_vector(a: &[Vec<Rational>], ncols: usize) -> Option<Vec<Rational>> {
    let mut m = a.to_vec();
    let pivots = reduce(&mut m, ncols);
    let free = (0..ncols).find(|c| !pivots.contains(c))?;
    let mut z = vec![Rational::zero(); ncols];
    z[free] = Rational::one();
    for (r, &c) in pivots.iter().enumerate() {
        z[c] = -m[r][free].clone();
    }
    Some(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{dot, int, ratio};

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn solves_square_system() {
        let a = mat(&[&[2, 1], &[1, 3]]);
        let x = solve_unique(&a, &[int(3), int(5)]).unwrap();
        assert_eq!(x, vec![ratio(4, 5), ratio(7, 5)]);
    }

    #[test]
    fn detects_singular_and_inconsistent() {
        let a = mat(&[&[1, 1], &[2, 2]]);
        assert!(solve_unique(&a, &[int(1), int(2)]).is_none());
        let a = mat(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert!(solve_unique(&a, &[int(1), int(1), int(3)]).is_none());
        assert_eq!(
            solve_unique(&a, &[int(1), int(1), int(2)]).unwrap(),
            vec![int(1), int(1)]
        );
    }

    #[test]
    fn kernel_vector() {
        let a = mat(&[&[1, 2, 3], &[1, 1, 1]]);
        assert_eq!(rank(&a), 2);
        let z = null_vector(&a, 3).unwrap();
        assert!(a.iter().all(|row| dot(row, &z).is_zero()));
        assert!(z.iter().any(|x| !x.is_zero()));
        assert!(null_vector(&mat(&[&[1, 0], &[0, 1]]), 2).is_none());
    }
}
