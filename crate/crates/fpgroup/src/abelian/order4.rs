//! Enumeration of the order-four quotients of a finitely generated abelian
//! group.
//!
//! Quotients of order four kill the odd torsion, so everything happens in
//! `G' = (2-primary part) + Z^r`. Writing `G' = Z^m / L` for the diagonal
//! relation lattice `L`, subgroups of index four correspond to sublattices
//! `L <= K <= Z^m` with `[Z^m : K] = 4`, and each such `K` has a unique
//! Hermite-form basis, which doubles as the canonical sort key.

use super::matrix::IntMatrix;
use super::snf::smith_normal_form;
use crate::abelian::AbelianInvariants;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// The two groups of order four.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum QuotientType {
    /// Cyclic of order four.
    C4,
    /// Klein four-group `C2 x C2`.
    V4,
}

impl fmt::Display for QuotientType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientType::C4 => write!(f, "C4"),
            QuotientType::V4 => write!(f, "V4"),
        }
    }
}

/// One order-four quotient, described by its kernel.
///
/// The rows of `kernel_basis` are the Hermite-form basis of the preimage
/// lattice of the kernel in the coordinates of `G'` (2-power cyclic factors
/// first, then the free factors).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuotientDescriptor {
    pub kernel_basis: IntMatrix,
    pub quotient_type: QuotientType,
}

/// Number of subgroups `K <= G` with `|G/K| = 4`.
pub fn count_order4_quotients(g: &AbelianInvariants) -> usize {
    enumerate_order4_quotients(g).len()
}

/// All order-four quotients of `g`, canonically ordered by the
/// lexicographic comparison of their kernel bases.
pub fn enumerate_order4_quotients(g: &AbelianInvariants) -> Vec<QuotientDescriptor> {
    let two_powers: Vec<u64> =
        g.two_power_exponents().iter().map(|&e| 2u64.pow(e)).collect();
    let t = two_powers.len();
    let m = t + g.free_rank();
    if m == 0 {
        return Vec::new();
    }

    let mut found: Vec<(Vec<BigInt>, QuotientDescriptor)> = Vec::new();
    let mut diag = vec![1u64; m];
    enumerate_diagonals(&mut diag, 0, 4, &mut |diag| {
        let mut h = IntMatrix::zero(m, m);
        for i in 0..m {
            h[(i, i)] = BigInt::from(diag[i]);
        }
        fill_off_diagonal(&mut h, diag, 0, 1, &mut |h| {
            if !contains_relation_lattice(h, &two_powers) {
                return;
            }
            let flat: Vec<BigInt> =
                (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).map(|ij| h[ij].clone()).collect();
            found.push((
                flat,
                QuotientDescriptor { kernel_basis: h.clone(), quotient_type: classify(h) },
            ));
        });
    });

    found.sort_by(|a, b| a.0.cmp(&b.0));
    found.into_iter().map(|(_, d)| d).collect()
}

/// Diagonals (d_0, ..., d_{m-1}) with product `target`, divisors of 4.
fn enumerate_diagonals(diag: &mut [u64], pos: usize, remaining: u64, emit: &mut impl FnMut(&[u64])) {
    if pos == diag.len() {
        if remaining == 1 {
            emit(diag);
        }
        return;
    }
    let mut d = 1;
    while remaining % d == 0 {
        diag[pos] = d;
        enumerate_diagonals(diag, pos + 1, remaining / d, emit);
        d *= 2;
        if d > remaining {
            break;
        }
    }
    diag[pos] = 1;
}

/// Fills entries above the diagonal, column by column: `0 <= h[i][j] < d_j`
/// for `i < j`.
fn fill_off_diagonal(
    h: &mut IntMatrix,
    diag: &[u64],
    i: usize,
    j: usize,
    emit: &mut impl FnMut(&IntMatrix),
) {
    let m = diag.len();
    if j == m {
        emit(h);
        return;
    }
    let (ni, nj) = if i + 1 < j { (i + 1, j) } else { (0, j + 1) };
    for v in 0..diag[j] {
        h[(i, j)] = BigInt::from(v);
        fill_off_diagonal(h, diag, ni, nj, emit);
    }
    h[(i, j)] = BigInt::zero();
}

/// Does the row space of `h` contain every relation row `2^{a_i} e_i`?
fn contains_relation_lattice(h: &IntMatrix, two_powers: &[u64]) -> bool {
    let m = h.rows();
    for (i, &q) in two_powers.iter().enumerate() {
        let mut v = vec![BigInt::zero(); m];
        v[i] = BigInt::from(q);
        for col in 0..m {
            if v[col].is_zero() {
                continue;
            }
            if !(&v[col] % &h[(col, col)]).is_zero() {
                return false;
            }
            let c = &v[col] / &h[(col, col)];
            for j in col..m {
                let sub = &c * &h[(col, j)];
                v[j] -= sub;
            }
        }
        debug_assert!(v.iter().all(|x| x.is_zero()));
    }
    true
}

/// `Z^m / K` for a determinant-4 lattice `K` is `C4` or `V4`; read it off
/// the nonunit invariant factor(s) of the basis matrix.
fn classify(h: &IntMatrix) -> QuotientType {
    let factors = smith_normal_form(h).invariant_factors();
    let nonunit: Vec<u64> =
        factors.iter().filter(|d| !d.is_one()).map(|d| d.to_u64().unwrap()).collect();
    match nonunit.as_slice() {
        [4] => QuotientType::C4,
        [2, 2] => QuotientType::V4,
        other => unreachable!("determinant-4 lattice with factors {other:?}"),
    }
}
