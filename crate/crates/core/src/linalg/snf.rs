use super::{Matrix, Scalar};

/// `u · a · v = d` with `u`, `v` unimodular and `d` diagonal, `d_i | d_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith<T> {
    pub d: Matrix<T>,
    pub u: Matrix<T>,
    pub v: Matrix<T>,
    pub rank: usize,
}

impl<T: Scalar> Smith<T> {
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }
}

fn min_pivot<T: Scalar>(d: &Matrix<T>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

pub fn snf<T: Scalar>(a: &Matrix<T>) -> Smith<T> {
    let (r, c) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = Matrix::identity(r);
    let mut v = Matrix::identity(c);
    let mut rank = 0;

    for t in 0..r.min(c) {
        let Some((pi, pj)) = min_pivot(&d, t) else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..r {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -(d[(i, t)].clone() / d[(t, t)].clone());
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                dirty |= !d[(i, t)].is_zero();
            }
            for j in t + 1..c {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -(d[(t, j)].clone() / d[(t, t)].clone());
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                dirty |= !d[(t, j)].is_zero();
            }
            if dirty {
                // A remainder smaller than the pivot survived: promote it.
                let mut best = (t, t);
                for i in t..r {
                    let x = &d[(i, t)];
                    if !x.is_zero() && x.abs() < d[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t..c {
                    let x = &d[(t, j)];
                    if !x.is_zero() && x.abs() < d[best].abs() {
                        best = (t, j);
                    }
                }
                d.swap_rows(t, best.0);
                u.swap_rows(t, best.0);
                d.swap_cols(t, best.1);
                v.swap_cols(t, best.1);
                continue;
            }
            // Divisibility: fold an offending row into the pivot row and redo.
            let bad = (t + 1..r).find(|&i| {
                (t + 1..c).any(|j| !(d[(i, j)].clone() % d[(t, t)].clone()).is_zero())
            });
            match bad {
                Some(i) => {
                    let one = T::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        rank += 1;
    }
    Smith { d, u, v, rank }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Int;
    use num_traits::{One, Signed, Zero};

    fn check(a: &Matrix<Int>) -> Smith<Int> {
        let s = snf(a);
        assert_eq!(&(&s.u * a) * &s.v, s.d);
        assert!(s.u.determinant().abs().is_one());
        assert!(s.v.determinant().abs().is_one());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let diag = s.diagonal();
        assert!(diag.iter().all(|x| !x.is_negative()));
        for w in diag.windows(2) {
            assert!(w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()));
        }
        s
    }

    fn diag(s: &Smith<Int>) -> Vec<i64> {
        s.diagonal().iter().map(|x| i64::try_from(x).unwrap()).collect()
    }

    #[test]
    fn documented_forms() {
        assert_eq!(diag(&check(&Matrix::from_i64(&[&[2, 0], &[0, 3]]))), vec![1, 6]);
        assert_eq!(diag(&check(&Matrix::from_i64(&[&[2, 4], &[6, 8]]))), vec![2, 4]);
        let z = check(&Matrix::zeros(2, 3));
        assert_eq!(z.u, Matrix::identity(2));
        assert_eq!(z.v, Matrix::identity(3));
        assert_eq!(z.rank, 0);
    }

    #[test]
    fn rectangular_and_degenerate() {
        let s = check(&Matrix::from_i64(&[&[4, 6, 2], &[2, 2, 8]]));
        assert_eq!(diag(&s), vec![2, 2]);
        let s = check(&Matrix::from_i64(&[&[1, 2], &[2, 4], &[3, 6]]));
        assert_eq!((diag(&s), s.rank), (vec![1, 0], 1));
        check(&Matrix::zeros(0, 3));
        check(&Matrix::zeros(2, 0));
    }

    #[test]
    fn divisibility_fixup() {
        // diag(4, 6) needs the fix-up to become diag(2, 12)
        let s = check(&Matrix::from_i64(&[&[4, 0], &[0, 6]]));
        assert_eq!(diag(&s), vec![2, 12]);
        let s = check(&Matrix::from_i64(&[&[6, 0, 0], &[0, 10, 0], &[0, 0, 15]]));
        assert_eq!(diag(&s), vec![1, 30, 30]);
    }

    #[test]
    fn machine_integer_instance() {
        let a = Matrix::<i64>::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = snf(&a);
        assert_eq!(&(&s.u * &a) * &s.v, s.d);
        assert_eq!(s.diagonal(), vec![2, 6, 12]);
    }
}
