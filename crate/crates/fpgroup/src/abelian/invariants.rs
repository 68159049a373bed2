//! Finitely generated abelian groups as invariant-factor lists.

use super::matrix::IntMatrix;
use super::snf::smith_normal_form;
use crate::presentation::Presentation;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// The group `Z/d1 + Z/d2 + ... + Z^free_rank` with `d_i | d_{i+1}` and
/// every `d_i >= 2`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianInvariants {
    torsion: Vec<BigInt>,
    free_rank: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InvariantError {
    #[error("torsion entries must be >= 2, got {0}")]
    TorsionTooSmall(BigInt),
    #[error("invariant factors must form a divisibility chain: {0} does not divide {1}")]
    ChainBroken(BigInt, BigInt),
}

impl AbelianInvariants {
    pub fn new(torsion: Vec<BigInt>, free_rank: usize) -> Result<Self, InvariantError> {
        for d in &torsion {
            if *d < BigInt::from(2) {
                return Err(InvariantError::TorsionTooSmall(d.clone()));
            }
        }
        for w in torsion.windows(2) {
            if !(&w[1] % &w[0]).is_zero() {
                return Err(InvariantError::ChainBroken(w[0].clone(), w[1].clone()));
            }
        }
        Ok(AbelianInvariants { torsion, free_rank })
    }

    pub fn trivial() -> Self {
        AbelianInvariants { torsion: Vec::new(), free_rank: 0 }
    }

    pub fn free(rank: usize) -> Self {
        AbelianInvariants { torsion: Vec::new(), free_rank: rank }
    }

    pub fn from_u64(torsion: &[u64], free_rank: usize) -> Self {
        AbelianInvariants::new(torsion.iter().map(|&d| BigInt::from(d)).collect(), free_rank)
            .expect("invalid invariant factors")
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    /// True when the group is finite, i.e. the free rank vanishes.
    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    /// 2-adic valuations of the invariant factors, smallest first, zeros
    /// dropped. `C2 x C4 x C3` gives `[1, 2]`.
    pub fn two_power_exponents(&self) -> Vec<u32> {
        self.torsion
            .iter()
            .filter_map(|d| {
                let mut d = d.clone();
                let mut e = 0u32;
                while d.is_even() {
                    d /= 2;
                    e += 1;
                }
                (e > 0).then_some(e)
            })
            .collect()
    }

    /// Primary decomposition as (prime, exponent multiset) pairs.
    fn primary_decomposition(&self) -> BTreeMap<BigInt, Vec<u32>> {
        let mut out: BTreeMap<BigInt, Vec<u32>> = BTreeMap::new();
        for d in &self.torsion {
            let mut d = d.clone();
            let mut p = BigInt::from(2);
            while &p * &p <= d {
                if (&d % &p).is_zero() {
                    let mut e = 0;
                    while (&d % &p).is_zero() {
                        d /= &p;
                        e += 1;
                    }
                    out.entry(p.clone()).or_default().push(e);
                }
                p += 1;
            }
            if d > BigInt::one() {
                out.entry(d).or_default().push(1);
            }
        }
        out
    }

    /// Rebuilds the invariant-factor chain from a list of prime powers.
    pub fn from_prime_powers(powers: &[(BigInt, u32)], free_rank: usize) -> Self {
        let mut by_prime: BTreeMap<BigInt, Vec<u32>> = BTreeMap::new();
        for (p, e) in powers {
            assert!(*e > 0);
            by_prime.entry(p.clone()).or_default().push(*e);
        }
        let depth = by_prime.values().map(|v| v.len()).max().unwrap_or(0);
        let mut factors = vec![BigInt::one(); depth];
        for (p, mut exps) in by_prime {
            exps.sort_unstable_by(|a, b| b.cmp(a)); // largest power into the last factor
            for (slot, e) in exps.into_iter().enumerate() {
                factors[depth - 1 - slot] *= p.pow(e);
            }
        }
        AbelianInvariants::new(factors, free_rank).expect("CRT recombination preserves the chain")
    }
}

/// Serialized in elementary-divisor style: `C2^2 x C13`, `C2 x Z^3`, `Z`,
/// or `1` for the trivial group.
impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        // group equal prime powers: C2 x C2 -> C2^2
        let mut runs: BTreeMap<BigInt, usize> = BTreeMap::new();
        for (p, exps) in self.primary_decomposition() {
            for e in exps {
                *runs.entry(p.pow(e)).or_default() += 1;
            }
        }
        for (q, count) in runs {
            if count == 1 {
                parts.push(format!("C{q}"));
            } else {
                parts.push(format!("C{q}^{count}"));
            }
        }
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

impl fmt::Debug for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbelianInvariants({self})")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot parse abelian group {0:?}")]
pub struct GroupParseError(String);

/// Accepts the `Display` format: `x`-separated `C<n>[^k]` and `Z[^r]`
/// factors, or `1`.
impl FromStr for AbelianInvariants {
    type Err = GroupParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GroupParseError(s.to_string());
        let body = s.trim();
        if body == "1" || body == "0" {
            return Ok(AbelianInvariants::trivial());
        }
        let mut powers: Vec<(BigInt, u32)> = Vec::new();
        let mut free_rank = 0usize;
        for part in body.split(['x', '×']) {
            let part = part.trim();
            let (base, mult) = match part.split_once('^') {
                Some((b, m)) => (b.trim(), m.trim().parse::<usize>().map_err(|_| bad())?),
                None => (part, 1),
            };
            if base == "Z" {
                free_rank += mult;
            } else if let Some(num) = base.strip_prefix('C') {
                let n: u64 = num.parse().map_err(|_| bad())?;
                if n < 2 {
                    return Err(bad());
                }
                // factor the cyclic order into prime powers
                let mut n = n;
                let mut p = 2u64;
                while p * p <= n {
                    if n % p == 0 {
                        let mut e = 0;
                        while n % p == 0 {
                            n /= p;
                            e += 1;
                        }
                        for _ in 0..mult {
                            powers.push((BigInt::from(p), e));
                        }
                    }
                    p += 1;
                }
                if n > 1 {
                    for _ in 0..mult {
                        powers.push((BigInt::from(n), 1));
                    }
                }
            } else {
                return Err(bad());
            }
        }
        Ok(AbelianInvariants::from_prime_powers(&powers, free_rank))
    }
}

/// Exponent-sum matrix of a presentation: one row per relator, one column
/// per generator.
pub fn relator_matrix(p: &Presentation) -> IntMatrix {
    let mut m = IntMatrix::zero(p.relators().len(), p.generator_count());
    for (i, r) in p.relators().iter().enumerate() {
        for &l in r.letters() {
            let j = (l.unsigned_abs() as usize) - 1;
            if l > 0 {
                m[(i, j)] += 1;
            } else {
                m[(i, j)] -= 1;
            }
        }
    }
    m
}

/// Abelianization of a finitely presented group: the cokernel of its
/// relator exponent-sum matrix, read off the Smith normal form. Unit
/// factors are discarded; zero columns contribute to the free rank.
pub fn abelianization(p: &Presentation) -> AbelianInvariants {
    let snf = smith_normal_form(&relator_matrix(p));
    let torsion: Vec<BigInt> =
        snf.invariant_factors().into_iter().filter(|d| !d.is_one()).collect();
    let free_rank = p.generator_count() - snf.rank();
    AbelianInvariants::new(torsion, free_rank).expect("SNF yields a valid chain")
}

/// Convenience for tests and reports: torsion as u64 values.
pub fn torsion_u64(inv: &AbelianInvariants) -> Vec<u64> {
    inv.torsion().iter().map(|d| d.to_u64().expect("torsion fits u64")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    #[test]
    fn cyclic_of_order_five() {
        let p = parse_presentation("< a | a^5 >").unwrap();
        let inv = abelianization(&p);
        assert_eq!(torsion_u64(&inv), [5]);
        assert_eq!(inv.free_rank(), 0);
    }

    #[test]
    fn genus_two_surface_group_is_free_of_rank_four_abelianized() {
        let p = parse_presentation("< a, b, c, d | [a,b][c,d] >").unwrap();
        let inv = abelianization(&p);
        assert!(inv.torsion().is_empty());
        assert_eq!(inv.free_rank(), 4);
    }

    #[test]
    fn two_three_seven_triangle_quotient_has_trivial_abelianization() {
        let p = parse_presentation("< a, b | a^2, b^3, (a*b)^7 >").unwrap();
        assert!(abelianization(&p).is_trivial());
    }

    #[test]
    fn free_group_abelianizes_to_lattice() {
        let p = parse_presentation("< a, b | >").unwrap();
        assert_eq!(abelianization(&p), AbelianInvariants::free(2));
    }

    #[test]
    fn invariant_under_relator_reorder_invert_and_rotation() {
        let p = parse_presentation("< a, b | a^4, b^6, (a*b)^2 >").unwrap();
        let base = abelianization(&p);

        let relators = p.relators();
        let variants = [
            vec![relators[2].clone(), relators[0].clone(), relators[1].clone()],
            vec![relators[0].inverse(), relators[1].clone(), relators[2].clone()],
            vec![
                // rotate (ab)^2 -> (ba)^2
                crate::word::Word::new([2, 1, 2, 1]),
                relators[0].clone(),
                relators[1].inverse(),
            ],
        ];
        for rel in variants {
            let q = Presentation::new(vec!["a".into(), "b".into()], rel).unwrap();
            assert_eq!(abelianization(&q), base);
        }
    }

    #[test]
    fn display_uses_elementary_divisors() {
        assert_eq!(AbelianInvariants::from_u64(&[2, 26], 0).to_string(), "C2^2 x C13");
        assert_eq!(AbelianInvariants::from_u64(&[2, 124], 0).to_string(), "C2 x C4 x C31");
        assert_eq!(AbelianInvariants::from_u64(&[], 2).to_string(), "Z^2");
        assert_eq!(AbelianInvariants::from_u64(&[6], 1).to_string(), "C2 x C3 x Z");
        assert_eq!(AbelianInvariants::trivial().to_string(), "1");
    }

    #[test]
    fn parse_round_trips_table_style_strings() {
        for s in ["C2 x C4 x C31", "C2^4", "C2^6", "C3^3", "C2^2 x C13", "C2 x C3 x C4^2", "Z^2", "1"] {
            let g: AbelianInvariants = s.parse().unwrap();
            let h: AbelianInvariants = g.to_string().parse().unwrap();
            assert_eq!(g, h);
        }
        // invariant factors of C2 x C4 x C31: 2 | 124
        let g: AbelianInvariants = "C2 x C4 x C31".parse().unwrap();
        assert_eq!(torsion_u64(&g), [2, 124]);
        assert!("C2 y C3".parse::<AbelianInvariants>().is_err());
    }

    #[test]
    fn chain_is_validated() {
        assert!(AbelianInvariants::new(vec![BigInt::from(2), BigInt::from(3)], 0).is_err());
        assert!(AbelianInvariants::new(vec![BigInt::from(1)], 0).is_err());
    }
}
