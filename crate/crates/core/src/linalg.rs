//! Exact determinants over the rationals.

use num_traits::{One, Zero};

use crate::arith::Rat;

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
pub fn det_bareiss(matrix: &[Vec<Rat>]) -> Rat {
    let n = matrix.len();
    if n == 0 {
        return Rat::one();
    }
    let mut a: Vec<Vec<Rat>> = matrix.to_vec();
    let mut sign = true;
    let mut prev = Rat::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = !sign;
                }
                None => return Rat::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        d
    } else {
        -d
    }
}

/// Determinant by cofactor expansion along the first row.
pub fn det_laplace(matrix: &[Vec<Rat>]) -> Rat {
    let n = matrix.len();
    if n == 0 {
        return Rat::one();
    }
    let mut acc = Rat::zero();
    for j in 0..n {
        if matrix[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Rat>> = matrix[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let t = &matrix[0][j] * det_laplace(&minor);
        if j % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, int};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(det_bareiss(&[]), int(1));
        assert_eq!(det_bareiss(&m(&[&[1, 2], &[3, 4]])), int(-2));
        assert_eq!(det_bareiss(&m(&[&[0, 1], &[1, 0]])), int(-1));
        assert_eq!(det_bareiss(&m(&[&[1, 2], &[2, 4]])), int(0));
        let h = vec![vec![int(1), frac(1, 2)], vec![frac(1, 2), frac(1, 3)]];
        assert_eq!(det_bareiss(&h), frac(1, 12));
    }

    proptest! {
        #[test]
        fn bareiss_matches_laplace(n in 1usize..=5, seed in proptest::collection::vec((-4i64..=4, 1i64..=3), 25)) {
            let a: Vec<Vec<Rat>> = (0..n)
                .map(|i| (0..n).map(|j| { let (p, q) = seed[i * 5 + j]; frac(p, q) }).collect())
                .collect();
            prop_assert_eq!(det_bareiss(&a), det_laplace(&a));
        }
    }
}
