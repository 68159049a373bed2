//! Smith normal form over the integers with unimodular transforms.

use super::matrix::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// The decomposition `d = u * a * v` with `u`, `v` unimodular and `d`
/// diagonal, nonnegative, each entry dividing the next.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries, in chain order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Computes the Smith normal form of `a`.
///
/// The pivot is the entry of minimal nonzero absolute value in the
/// remaining block; entries sharing its row or column are folded into it by
/// single Bezout transforms rather than repeated Euclidean steps, which
/// keeps intermediate entries from blowing up.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let mut d = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let mut v = IntMatrix::identity(a.cols());
    let n = a.rows().min(a.cols());

    let mut t = 0;
    while t < n {
        let Some((pi, pj)) = d.min_nonzero_from(t) else {
            break; // all remaining entries zero
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        // shrink the pivot to the gcd of its column and row
        loop {
            let mut changed = false;
            for i in t + 1..d.rows() {
                if !(&d[(i, t)] % &d[(t, t)]).is_zero() {
                    bezout_rows(&mut d, &mut u, t, i);
                    changed = true;
                }
            }
            for j in t + 1..d.cols() {
                if !(&d[(t, j)] % &d[(t, t)]).is_zero() {
                    bezout_cols(&mut d, &mut v, t, j);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }

        // exact elimination of the pivot column and row
        for i in t + 1..d.rows() {
            if !d[(i, t)].is_zero() {
                let q = -(&d[(i, t)] / &d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
            }
        }
        for j in t + 1..d.cols() {
            if !d[(t, j)].is_zero() {
                let q = -(&d[(t, j)] / &d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
            }
        }

        // divisibility chain: fold in a row holding a non-divisible entry
        // and redo this pivot; the new pivot properly divides the old one
        let offender = (t + 1..d.rows())
            .flat_map(|i| (t + 1..d.cols()).map(move |j| (i, j)))
            .find(|&(i, j)| !(&d[(i, j)] % &d[(t, t)]).is_zero());
        if let Some((i, _)) = offender {
            d.add_row_multiple(t, i, &BigInt::from(1));
            u.add_row_multiple(t, i, &BigInt::from(1));
            continue;
        }

        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    SmithDecomposition { d, u, v }
}

/// Replaces rows `t` and `i` by unimodular combinations so that the pivot
/// becomes `gcd(d[t][t], d[i][t])` and `d[i][t]` becomes zero.
fn bezout_rows(d: &mut IntMatrix, u: &mut IntMatrix, t: usize, i: usize) {
    let a = d[(t, t)].clone();
    let b = d[(i, t)].clone();
    let (g, s, w) = extended_gcd(&a, &b); // s*a + w*b = g
    let x = &a / &g;
    let y = &b / &g;
    // det [[s, w], [-y, x]] = s*x + w*y = (s*a + w*b)/g = 1
    d.transform_rows(t, i, &s, &w, &-&y, &x);
    u.transform_rows(t, i, &s, &w, &-&y, &x);
}

/// Column version of `bezout_rows`.
fn bezout_cols(d: &mut IntMatrix, v: &mut IntMatrix, t: usize, j: usize) {
    let a = d[(t, t)].clone();
    let b = d[(t, j)].clone();
    let (g, s, w) = extended_gcd(&a, &b);
    let x = &a / &g;
    let y = &b / &g;
    d.transform_cols(t, j, &s, &w, &-&y, &x);
    v.transform_cols(t, j, &s, &w, &-&y, &x);
}

/// `(g, s, w)` with `s*a + w*b = g` and `g = gcd(a, b) > 0`.
fn extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let eg = Integer::extended_gcd(a, b);
    if eg.gcd.is_negative() {
        (-eg.gcd, -eg.x, -eg.y)
    } else {
        (eg.gcd, eg.x, eg.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn diag(d: &IntMatrix) -> Vec<i64> {
        let n = d.rows().min(d.cols());
        (0..n)
            .map(|i| {
                let s = d[(i, i)].to_string();
                s.parse().unwrap()
            })
            .collect()
    }

    fn check(a: &IntMatrix) -> SmithDecomposition {
        let s = smith_normal_form(a);
        // d = u * a * v
        assert_eq!(s.u.mul(a).mul(&s.v), s.d, "transform identity failed");
        // unimodular
        assert_eq!(s.u.determinant().abs(), BigInt::one());
        assert_eq!(s.v.determinant().abs(), BigInt::one());
        // diagonal, nonnegative, divisibility chain
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "chain violated: {f:?}");
        }
        s
    }

    #[test]
    fn rectangular_example_with_unit_factors() {
        // gcd of entries is 1 and gcd of 2x2 minors is 1, so diag(1, 1)
        let a = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 3], &[7, 7]]);
        let s = check(&a);
        assert_eq!(diag(&s.d), [1, 1]);
    }

    #[test]
    fn two_by_two_with_torsion() {
        // d1 = gcd = 2, d1*d2 = |det| = 8
        let a = IntMatrix::from_i64_rows(&[&[2, 4], &[6, 8]]);
        let s = check(&a);
        assert_eq!(diag(&s.d), [2, 4]);
    }

    #[test]
    fn identity_and_zero() {
        let s = check(&IntMatrix::identity(2));
        assert_eq!(diag(&s.d), [1, 1]);
        let s = check(&IntMatrix::from_i64_rows(&[&[0]]));
        assert_eq!(diag(&s.d), [0]);
    }

    #[test]
    fn empty_matrices_are_fine() {
        check(&IntMatrix::zero(0, 0));
        check(&IntMatrix::zero(0, 3));
        check(&IntMatrix::zero(3, 0));
    }

    /// Independent oracle: the product d1...dk equals the gcd of all k x k
    /// minors (the k-th determinantal divisor).
    fn determinantal_divisor(a: &IntMatrix, k: usize) -> BigInt {
        fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 0..n {
                for mut rest in combos(n, k - 1) {
                    if rest.first().map_or(true, |&x| x > first) {
                        rest.insert(0, first);
                        out.push(rest);
                    }
                }
            }
            out
        }
        let mut g = BigInt::zero();
        for ri in combos(a.rows(), k) {
            for ci in combos(a.cols(), k) {
                let mut sub = IntMatrix::zero(k, k);
                for (si, &i) in ri.iter().enumerate() {
                    for (sj, &j) in ci.iter().enumerate() {
                        sub[(si, sj)] = a[(i, j)].clone();
                    }
                }
                g = num_integer::Integer::gcd(&g, &sub.determinant());
            }
        }
        g
    }

    #[test]
    fn matches_determinantal_divisors_on_random_small_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let rows = rng.gen_range(1..=5);
            let cols = rng.gen_range(1..=5);
            let mut a = IntMatrix::zero(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    a[(i, j)] = BigInt::from(rng.gen_range(-9i64..=9));
                }
            }
            let s = check(&a);
            let factors = s.invariant_factors();
            let mut prod = BigInt::one();
            for (k, f) in factors.iter().enumerate() {
                prod *= f;
                assert_eq!(prod, determinantal_divisor(&a, k + 1));
            }
            assert!(determinantal_divisor(&a, factors.len() + 1).is_zero());
        }
    }

    #[test]
    fn regression_full_rank_six_by_five() {
        // this shape once drove the old reduction into entry blow-up
        let a = IntMatrix::from_i64_rows(&[
            &[4, 19, 10, -13, 8],
            &[20, -2, -9, 5, -19],
            &[9, -2, -8, 12, -3],
            &[12, -17, 17, -6, 0],
            &[-15, -16, 16, 18, 7],
            &[-16, -18, 13, -18, 20],
        ]);
        check(&a);
    }

    #[test]
    fn invariant_under_transpose_and_permutation() {
        use rand::{seq::SliceRandom, Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let rows = rng.gen_range(1..=6);
            let cols = rng.gen_range(1..=6);
            let mut a = IntMatrix::zero(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    a[(i, j)] = BigInt::from(rng.gen_range(-20i64..=20));
                }
            }
            let base = smith_normal_form(&a).invariant_factors();
            assert_eq!(smith_normal_form(&a.transpose()).invariant_factors(), base);

            let mut p = a.clone();
            let mut rperm: Vec<usize> = (0..rows).collect();
            rperm.shuffle(&mut rng);
            for (i, &pi) in rperm.iter().enumerate() {
                if i < pi {
                    p.swap_rows(i, pi);
                }
            }
            let mut cperm: Vec<usize> = (0..cols).collect();
            cperm.shuffle(&mut rng);
            for (j, &pj) in cperm.iter().enumerate() {
                if j < pj {
                    p.swap_cols(j, pj);
                }
            }
            assert_eq!(smith_normal_form(&p).invariant_factors(), base);
        }
    }
}
