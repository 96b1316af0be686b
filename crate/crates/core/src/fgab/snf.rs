//! Smith normal form over the integers, with the unimodular transforms.
//!
//! Pivot rule: the nonzero entry of least absolute value in the active
//! submatrix, first occurrence in row-major order. Diagonal entries come out
//! nonnegative and form a divisibility chain, with zeros last.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// `left * input * right == diagonal`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub left: IntMatrix,
    pub diagonal: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    /// The diagonal entries `d_0 | d_1 | ...`, `min(rows, cols)` of them.
    pub fn invariants(&self) -> Vec<BigInt> {
        let n = self.diagonal.rows().min(self.diagonal.cols());
        (0..n).map(|i| self.diagonal.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariants().iter().filter(|d| !d.is_zero()).count()
    }
}

pub fn smith_normal_form(input: &IntMatrix) -> SmithForm {
    let (rows, cols) = (input.rows(), input.cols());
    let mut a = input.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = find_pivot(&a, t) else {
                return SmithForm {
                    left,
                    diagonal: a,
                    right,
                };
            };
            a.swap_rows(t, pi);
            left.swap_rows(t, pi);
            a.swap_cols(t, pj);
            right.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = a.get(i, t).div_floor(a.get(t, t));
                let neg_q = -q;
                a.add_row_multiple(i, t, &neg_q);
                left.add_row_multiple(i, t, &neg_q);
                clean &= a.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j).div_floor(a.get(t, t));
                let neg_q = -q;
                a.add_col_multiple(j, t, &neg_q);
                right.add_col_multiple(j, t, &neg_q);
                clean &= a.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }

            // Pivot must divide the rest of the active block.
            let pivot = a.get(t, t).clone();
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    a.add_row_multiple(t, i, &one);
                    left.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
    }

    SmithForm {
        left,
        diagonal: a,
        right,
    }
}

fn find_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            let abs = v.abs();
            if best.as_ref().is_none_or(|(_, _, b)| abs < *b) {
                best = Some((i, j, abs));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(form: &SmithForm, input: &IntMatrix) {
        assert_eq!(form.left.mul(input).mul(&form.right), form.diagonal);
        assert!(form.left.is_unimodular());
        assert!(form.right.is_unimodular());
        let d = &form.diagonal;
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if i != j {
                    assert!(d.get(i, j).is_zero(), "off-diagonal entry in {d}");
                }
            }
        }
        let inv = form.invariants();
        for x in &inv {
            assert!(!x.is_negative());
        }
        for w in inv.windows(2) {
            // zero divides only zero
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
    }

    #[test]
    fn zero_one_by_one() {
        let m = IntMatrix::from_i64_rows(&[&[0]], 1).unwrap();
        let f = smith_normal_form(&m);
        check(&f, &m);
        assert_eq!(f.diagonal, m);
    }

    #[test]
    fn two_by_two_example() {
        // gcd of entries is 2 and |det| = 8, so the form is diag(2, 4)
        let m = IntMatrix::from_i64_rows(&[&[2, 4], &[6, 8]], 2).unwrap();
        let f = smith_normal_form(&m);
        check(&f, &m);
        assert_eq!(f.invariants(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn identity_is_fixed() {
        let m = IntMatrix::identity(3);
        let f = smith_normal_form(&m);
        check(&f, &m);
        assert_eq!(f.diagonal, m);
    }

    #[test]
    fn divisibility_fixup_needed() {
        // diag(2, 3) is diagonal but not in Smith form: diag(1, 6)
        let m = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 3]], 2).unwrap();
        let f = smith_normal_form(&m);
        check(&f, &m);
        assert_eq!(f.invariants(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn degenerate_shapes() {
        for (r, c) in [(0, 0), (0, 3), (3, 0)] {
            let m = IntMatrix::zeros(r, c);
            let f = smith_normal_form(&m);
            check(&f, &m);
            assert_eq!(f.rank(), 0);
        }
    }

    #[test]
    fn negative_pivot_normalized() {
        let m = IntMatrix::from_i64_rows(&[&[-3, 0, 0]], 3).unwrap();
        let f = smith_normal_form(&m);
        check(&f, &m);
        assert_eq!(f.invariants(), vec![BigInt::from(3)]);
    }

    #[test]
    fn deterministic() {
        let m = IntMatrix::from_i64_rows(&[&[4, -6, 2], &[3, 9, -1]], 3).unwrap();
        assert_eq!(smith_normal_form(&m), smith_normal_form(&m));
    }

    fn arb_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-9i64..=9, r * c).prop_map(move |v| {
                let rows = v
                    .chunks(c)
                    .map(|ch| ch.iter().map(|&x| BigInt::from(x)).collect())
                    .collect();
                IntMatrix::from_rows(rows, c).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn random_matrices_reduce(m in arb_matrix()) {
            let f = smith_normal_form(&m);
            check(&f, &m);
        }
    }
}
