//! Smith normal form over the integers, with unimodular transforms.
//!
//! For an `m x n` matrix `A` we compute unimodular `U` (`m x m`) and `V`
//! (`n x n`) such that `U * A * V = D` where `D` is diagonal, nonnegative and
//! `d_1 | d_2 | ...`. The inverse of `U` is tracked alongside, since lifting
//! quotient generators back to the free module needs it.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{Int, IntMatrix};

#[derive(Clone, Debug)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
}

impl SnfDecomposition {
    /// Diagonal entries `d_1, ..., d_min(m,n)`, zeros included.
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

struct Work {
    d: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
    }

    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &Int) {
        self.d.add_row_multiple(dst, src, k);
        self.u.add_row_multiple(dst, src, k);
        self.u_inv.add_col_multiple(src, dst, &-k);
    }

    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &Int) {
        self.d.add_col_multiple(dst, src, k);
        self.v.add_col_multiple(dst, src, k);
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }
}

/// Computes the Smith normal form of `a`. Total: works for any shape,
/// including matrices with zero rows or columns.
pub fn snf(a: &IntMatrix) -> SnfDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work {
        d: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
    };

    'outer: for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = smallest_nonzero(&w.d, t) else {
                break 'outer;
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if w.d[(i, t)].is_zero() {
                    continue;
                }
                let q = w.d[(i, t)].div_floor(&w.d[(t, t)]);
                w.add_row_multiple(i, t, &-q);
                if !w.d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if w.d[(t, j)].is_zero() {
                    continue;
                }
                let q = w.d[(t, j)].div_floor(&w.d[(t, t)]);
                w.add_col_multiple(j, t, &-q);
                if !w.d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row and redo
            let pivot = w.d[(t, t)].clone();
            let offending = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !w.d[(i, j)].is_multiple_of(&pivot))
            });
            match offending {
                Some(i) => w.add_row_multiple(t, i, &Int::one()),
                None => break,
            }
        }
        if w.d[(t, t)].is_negative() {
            w.negate_row(t);
        }
    }

    SnfDecomposition {
        u: w.u,
        u_inv: w.u_inv,
        v: w.v,
        d: w.d,
    }
}

fn smallest_nonzero(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, Int)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let v = d[(i, j)].abs();
            if v.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, _, b)| v < *b) {
                best = Some((i, j, v));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Basis (as columns) of the integer kernel `{x : A x = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let s = snf(a);
    let r = s.rank();
    let idx: Vec<usize> = (r..a.cols()).collect();
    s.v.select_cols(&idx)
}

/// Solves `A x = b` over the integers. Returns one solution or `None` when
/// the system has no integral solution.
pub fn solve(a: &IntMatrix, b: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let s = snf(a);
    let c = s.u.mul_vec(b);
    let diag = s.diagonal();
    let mut y = vec![Int::zero(); a.cols()];
    for (i, ci) in c.iter().enumerate() {
        let di = diag.get(i).cloned().unwrap_or_else(Int::zero);
        if di.is_zero() {
            if !ci.is_zero() {
                return None;
            }
        } else {
            let (q, r) = ci.div_rem(&di);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(s.v.mul_vec(&y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgroup::matrix::int;

    fn check(a: &IntMatrix) -> SnfDecomposition {
        let s = snf(a);
        assert_eq!(&(&s.u * a) * &s.v, s.d, "U A V != D for {a}");
        assert_eq!(s.u.determinant().abs(), Int::one());
        assert_eq!(s.v.determinant().abs(), Int::one());
        assert_eq!(&s.u * &s.u_inv, IntMatrix::identity(a.rows()));
        let diag = s.diagonal();
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        s
    }

    #[test]
    fn two_by_two_example() {
        let a = IntMatrix::from_rows_i64(&[&[2, 4], &[6, 8]], 2);
        let s = check(&a);
        assert_eq!(s.diagonal(), vec![int(2), int(4)]);
    }

    #[test]
    fn identity_and_zero() {
        let s = check(&IntMatrix::identity(2));
        assert_eq!(s.diagonal(), vec![int(1), int(1)]);
        let z = IntMatrix::zeros(1, 3);
        let s = check(&z);
        assert_eq!(s.diagonal(), vec![int(0)]);
        check(&IntMatrix::zeros(0, 3));
        check(&IntMatrix::zeros(2, 0));
    }

    #[test]
    fn divisibility_fixup() {
        // diag(2,3) is diagonal but not in normal form: expect (1, 6)
        let a = IntMatrix::from_rows_i64(&[&[2, 0], &[0, 3]], 2);
        assert_eq!(check(&a).diagonal(), vec![int(1), int(6)]);
    }

    #[test]
    fn solve_and_kernel() {
        let a = IntMatrix::from_rows_i64(&[&[2, 4, 6]], 3);
        assert!(solve(&a, &[int(3)]).is_none());
        let x = solve(&a, &[int(8)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![int(8)]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 2);
        assert!((&a * &k).is_zero());
    }
}
