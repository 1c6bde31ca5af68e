//! Smith normal form of integer matrices.
//!
//! `U * M * V = D` with `U`, `V` unimodular and `D` diagonal, the
//! diagonal nonnegative and forming a divisibility chain
//! `d1 | d2 | ...`.  Entries are arbitrary-precision, so coefficient
//! growth during elimination is harmless.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::matrix::IntMat;

/// The result of [`smith_normal_form`]: `u * m * v = d`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
}

impl SmithDecomposition {
    /// Diagonal entries, including trailing zeros, length `min(p, q)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.nrows().min(self.d.ncols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Finds the position of a nonzero entry of minimal absolute value in the
/// trailing submatrix starting at `(t, t)`, scanning row-major.
fn pivot_position(d: &IntMat, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.nrows() {
        for j in t..d.ncols() {
            if d[(i, j)].is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some(b) => {
                    if d[(i, j)].abs() < d[b].abs() {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

/// Computes the Smith normal form of `m`.
///
/// Empty matrices are allowed and yield empty (or identity) factors.
pub fn smith_normal_form(m: &IntMat) -> SmithDecomposition {
    let p = m.nrows();
    let q = m.ncols();
    let mut d = m.clone();
    let mut u = IntMat::identity(p);
    let mut v = IntMat::identity(q);

    for t in 0..p.min(q) {
        // re-pivots until the trailing submatrix is zero or the pivot
        // divides everything that remains
        'pivot: while let Some((pi, pj)) = pivot_position(&d, t) {
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            // Clear the pivot column; if a division leaves a remainder the
            // next sweep finds a strictly smaller pivot.
            let mut dirty = false;
            for i in t + 1..p {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let k = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_multiple_of_row(i, t, &k);
                u.add_multiple_of_row(i, t, &k);
                if !d[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            let mut dirty = false;
            for j in t + 1..q {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let k = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_multiple_of_col(j, t, &k);
                v.add_multiple_of_col(j, t, &k);
                if !d[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }

            // Divisibility sweep: the pivot must divide every remaining
            // entry; folding an offending row into row t reduces the pivot.
            for i in t + 1..p {
                for j in t + 1..q {
                    if !d[(i, j)].mod_floor(&d[(t, t)]).is_zero() {
                        let one = BigInt::from(1);
                        d.add_multiple_of_row(t, i, &one);
                        u.add_multiple_of_row(t, i, &one);
                        continue 'pivot;
                    }
                }
            }
            break 'pivot;
        }
    }

    for t in 0..p.min(q) {
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }

    SmithDecomposition { u, d, v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    fn check(m: &IntMat) -> SmithDecomposition {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d, "U*M*V != D");
        assert!(s.u.is_unimodular(), "U not unimodular");
        assert!(s.v.is_unimodular(), "V not unimodular");
        assert!(s.d.is_diagonal(), "D not diagonal");
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(!w[0].is_negative() && !w[1].is_negative());
            if !w[0].is_zero() {
                assert!(
                    w[1].mod_floor(&w[0]).is_zero(),
                    "divisibility chain broken: {} does not divide {}",
                    w[0],
                    w[1]
                );
            } else {
                assert!(w[1].is_zero(), "nonzero after zero on the diagonal");
            }
        }
        s
    }

    #[test]
    fn one_by_one() {
        let m = IntMat::from_i64(&[&[4]], 1).unwrap();
        let s = check(&m);
        assert_eq!(s.d, IntMat::from_i64(&[&[4]], 1).unwrap());
    }

    #[test]
    fn worked_two_by_two() {
        // invariant factors of [[2,4],[2,6]] are (2, 2): |det| = 4 = d1*d2
        let m = IntMat::from_i64(&[&[2, 4], &[2, 6]], 2).unwrap();
        let s = check(&m);
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(2)]);
        let d1d2: BigInt = s.diagonal().iter().product();
        assert_eq!(d1d2, m.determinant().abs());
    }

    #[test]
    fn zero_matrix() {
        let m = IntMat::zeros(2, 2);
        let s = check(&m);
        assert!(s.d.is_zero());
    }

    #[test]
    fn empty_matrices() {
        for (p, q) in [(0, 0), (0, 3), (3, 0)] {
            let m = IntMat::zeros(p, q);
            let s = check(&m);
            assert_eq!(s.d.nrows(), p);
            assert_eq!(s.d.ncols(), q);
        }
    }

    #[test]
    fn rectangular() {
        let m = IntMat::from_i64(&[&[6, 10, 15]], 3).unwrap();
        let s = check(&m);
        assert_eq!(s.diagonal(), vec![BigInt::one()]);
        let m = IntMat::from_i64(&[&[2, 0], &[0, 0], &[0, 4]], 2).unwrap();
        let s = check(&m);
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    proptest! {
        #[test]
        fn snf_properties_hold(
            p in 1usize..=4,
            q in 1usize..=4,
            entries in proptest::collection::vec(-10i64..=10, 16),
        ) {
            let rows: Vec<Vec<BigInt>> = (0..p)
                .map(|i| (0..q).map(|j| BigInt::from(entries[i * 4 + j])).collect())
                .collect();
            let m = IntMat::from_rows(rows, q).unwrap();
            check(&m);
        }
    }
}
