use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// `left * a * right == diagonal`, with `left` and `right` unimodular and the
/// diagonal entries nonnegative, each dividing the next, zeros last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub left: IntMatrix,
    pub diagonal: IntMatrix,
    pub right: IntMatrix,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.diagonal.diagonal().iter().take_while(|d| !d.is_zero()).count()
    }

    /// The nonzero diagonal entries.
    pub fn factors(&self) -> Vec<BigInt> {
        self.diagonal
            .diagonal()
            .into_iter()
            .take_while(|d| !d.is_zero())
            .collect()
    }
}

struct Reduction {
    s: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
}

impl Reduction {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.s.swap_rows(a, b);
        self.u.swap_rows(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.s.swap_cols(a, b);
        self.v.swap_cols(a, b);
    }

    fn add_row(&mut self, target: usize, source: usize, factor: &BigInt) {
        self.s.add_row_multiple(target, source, factor);
        self.u.add_row_multiple(target, source, factor);
    }

    fn add_col(&mut self, target: usize, source: usize, factor: &BigInt) {
        self.s.add_col_multiple(target, source, factor);
        self.v.add_col_multiple(target, source, factor);
    }

    /// Moves the smallest nonzero entry of row `t` / column `t` (from `t` on)
    /// to the pivot position.
    fn bring_small_pivot(&mut self, t: usize) {
        let (m, n) = (self.s.rows(), self.s.cols());
        let mut best: Option<(BigInt, usize, usize)> = None;
        let candidates = (t..m).map(|i| (i, t)).chain((t + 1..n).map(|j| (t, j)));
        for (i, j) in candidates {
            let x = self.s[(i, j)].abs();
            if !x.is_zero() && best.as_ref().is_none_or(|(b, _, _)| x < *b) {
                best = Some((x, i, j));
            }
        }
        if let Some((_, i, j)) = best {
            self.swap_rows(t, i);
            self.swap_cols(t, j);
        }
    }

    fn run(&mut self) {
        let (m, n) = (self.s.rows(), self.s.cols());
        for t in 0..m.min(n) {
            let Some((i, j)) = (t..m)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !self.s[(i, j)].is_zero())
                .min_by_key(|&(i, j)| self.s[(i, j)].abs())
            else {
                break;
            };
            self.swap_rows(t, i);
            self.swap_cols(t, j);
            loop {
                let pivot = self.s[(t, t)].clone();
                let mut clean = true;
                for i in t + 1..m {
                    if !self.s[(i, t)].is_zero() {
                        let q = self.s[(i, t)].div_floor(&pivot);
                        self.add_row(i, t, &-q);
                        clean &= self.s[(i, t)].is_zero();
                    }
                }
                for j in t + 1..n {
                    if !self.s[(t, j)].is_zero() {
                        let q = self.s[(t, j)].div_floor(&pivot);
                        self.add_col(j, t, &-q);
                        clean &= self.s[(t, j)].is_zero();
                    }
                }
                if !clean {
                    self.bring_small_pivot(t);
                    continue;
                }
                // Force divisibility of the remaining block by the pivot.
                let offending = (t + 1..m).find(|&i| (t + 1..n).any(|j| !self.s[(i, j)].is_multiple_of(&pivot)));
                match offending {
                    Some(i) => self.add_row(t, i, &BigInt::from(1)),
                    None => break,
                }
            }
            if self.s[(t, t)].is_negative() {
                self.s.negate_row(t);
                self.u.negate_row(t);
            }
        }
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let mut r = Reduction {
        s: a.clone(),
        u: IntMatrix::identity(a.rows()),
        v: IntMatrix::identity(a.cols()),
    };
    r.run();
    SmithDecomposition {
        left: r.u,
        diagonal: r.s,
        right: r.v,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn check(a: &IntMatrix) -> SmithDecomposition {
        let d = smith_normal_form(a);
        assert_eq!(&(&d.left * a) * &d.right, d.diagonal);
        assert!(d.left.is_unimodular() && d.right.is_unimodular());
        assert!(d.diagonal.is_diagonal());
        let diag = d.diagonal.diagonal();
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        d
    }

    #[test]
    fn small_examples() {
        let d = check(&IntMatrix::from_rows(&[vec![0, -1], vec![-1, 0]]));
        assert_eq!(d.diagonal, IntMatrix::identity(2));
        let d = check(&IntMatrix::from_rows(&[vec![-2]]));
        assert_eq!(d.diagonal, IntMatrix::from_rows(&[vec![2]]));
        let d = check(&IntMatrix::zeros(0, 0));
        assert_eq!(d.diagonal.rows(), 0);
        assert_eq!(d.rank(), 0);
    }

    #[test]
    fn divisibility_is_enforced() {
        // diag(2, 3) must become diag(1, 6).
        let d = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(d.factors(), vec![BigInt::one(), BigInt::from(6)]);
        let d = check(&IntMatrix::from_rows(&[
            vec![2, 4, 4],
            vec![-6, 6, 12],
            vec![10, -4, -16],
        ]));
        assert_eq!(d.factors(), vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn rectangular() {
        let d = check(&IntMatrix::from_rows(&[vec![1, 0], vec![0, 0], vec![-1, 0]]));
        assert_eq!(d.rank(), 1);
        check(&IntMatrix::from_rows(&[vec![0, 0, 0]]));
        check(&IntMatrix::from_rows(&[vec![4, 6, 8]]));
    }
}
