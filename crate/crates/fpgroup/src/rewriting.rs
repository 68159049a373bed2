//! Reidemeister-Schreier rewriting: a presentation of a finite-index
//! subgroup from its coset table.
//!
//! The Schreier transversal is read off the breadth-first spanning tree of
//! the canonical table, one subgroup generator per non-tree edge (in
//! positive orientation), so the subgroup has `index * k - (index - 1)`
//! generators before any are discarded. Relators are the rewrites of every
//! ambient relator at every coset, freely and cyclically reduced; only
//! trivial ones are dropped, no further simplification is attempted.

use crate::abelian::{abelianization, AbelianInvariants};
use crate::coset::CosetTable;
use crate::presentation::Presentation;
use crate::word::Word;

/// A presentation of the subgroup the table belongs to. Generators are
/// named `s1, s2, ...` in the scan order of their non-tree edges.
pub fn schreier_presentation(p: &Presentation, t: &CosetTable) -> Presentation {
    debug_assert!(t.validate(p).is_ok(), "table does not belong to the presentation");
    let n = t.index();
    let k = p.generator_count();
    let (_, tree) = t.spanning_tree();

    // generator index for each non-tree positive edge (coset, gen)
    let mut edge_gen = vec![vec![0usize; k]; n];
    let mut count = 0usize;
    for c in 0..n {
        for g in 0..k {
            if !tree.contains(&(c, g)) {
                count += 1;
                edge_gen[c][g] = count; // 1-based
            }
        }
    }
    debug_assert_eq!(count, n * k - (n - 1));

    let mut relators = Vec::new();
    for r in p.relators() {
        for start in 0..n {
            relators.push(rewrite(t, &edge_gen, start, r));
        }
    }
    let names = (1..=count).map(|i| format!("s{i}")).collect();
    Presentation::new(names, relators).expect("rewritten relators are valid")
}

/// Rewrites a word traced from `start` into the Schreier generators.
fn rewrite(t: &CosetTable, edge_gen: &[Vec<usize>], start: usize, w: &Word) -> Word {
    let mut out = Vec::new();
    let mut c = start;
    for &l in w.letters() {
        let g = (l.unsigned_abs() as usize) - 1;
        if l > 0 {
            let sg = edge_gen[c][g];
            if sg != 0 {
                out.push(sg as i32);
            }
            c = t.action()[g][c];
        } else {
            let d = t.apply_letter(c, l);
            let sg = edge_gen[d][g];
            if sg != 0 {
                out.push(-(sg as i32));
            }
            c = d;
        }
    }
    Word::new(out)
}

/// Abelian invariants of the subgroup; the free rank is the first Betti
/// number of the corresponding cover.
pub fn subgroup_abelianization(p: &Presentation, t: &CosetTable) -> AbelianInvariants {
    abelianization(&schreier_presentation(p, t))
}

/// True when the group is finite as an abelian group, i.e. b1 = 0.
pub fn has_finite_abelianization(inv: &AbelianInvariants) -> bool {
    inv.free_rank() == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::torsion_u64;
    use crate::coset::{coset_enumerate, SubgroupSpec};
    use crate::lowindex::{low_index_subgroups, SearchMode};
    use crate::presentation::parse_presentation;

    #[test]
    fn index_two_subgroup_of_free_group_is_free_of_rank_three() {
        let p = parse_presentation("< a, b | >").unwrap();
        // kernel of F2 -> C2 sending a -> 0, b -> 1
        let h = SubgroupSpec::new(vec![
            Word::new([1]),
            Word::new([2, 2]),
            Word::new([2, 1, -2]),
        ]);
        let t = coset_enumerate(&p, &h, 100).unwrap();
        assert_eq!(t.index(), 2);
        let q = schreier_presentation(&p, &t);
        assert_eq!(q.generator_count(), 3);
        assert!(q.relators().is_empty());
        let inv = subgroup_abelianization(&p, &t);
        assert_eq!(inv.free_rank(), 3);
        assert!(inv.torsion().is_empty());
    }

    #[test]
    fn point_stabilizer_in_s3_abelianizes_to_c2() {
        let p = parse_presentation("< a, b | a^2, b^2, (a*b)^3 >").unwrap();
        let h = SubgroupSpec::new(vec![Word::new([1])]);
        let t = coset_enumerate(&p, &h, 100).unwrap();
        assert_eq!(t.index(), 3);
        let inv = subgroup_abelianization(&p, &t);
        assert_eq!(torsion_u64(&inv), [2]);
        assert_eq!(inv.free_rank(), 0);
    }

    #[test]
    fn index_one_table_rewrites_to_the_group_itself() {
        let p = parse_presentation("< a, b | a^2, b^3, (a*b)^7 >").unwrap();
        let t = coset_enumerate(&p, &SubgroupSpec::new(vec![Word::new([1]), Word::new([2])]), 10)
            .unwrap();
        assert_eq!(t.index(), 1);
        let q = schreier_presentation(&p, &t);
        assert_eq!(q.generator_count(), p.generator_count());
        // same relators up to renaming a -> s1, b -> s2
        assert_eq!(q.relators(), p.relators());
        assert_eq!(abelianization(&q), abelianization(&p));
    }

    #[test]
    fn schreier_generator_count_formula() {
        let p = parse_presentation("< a, b | a^2, b^2, (a*b)^3 >").unwrap();
        for t in low_index_subgroups(&p, 6, SearchMode::All).unwrap() {
            let q = schreier_presentation(&p, &t);
            let n = t.index();
            assert_eq!(q.generator_count(), n * 2 - (n - 1));
        }
    }

    #[test]
    fn genus_two_index_two_covers_have_first_betti_number_six() {
        let p = parse_presentation("< a, b, c, d | [a,b][c,d] >").unwrap();
        let subs = low_index_subgroups(&p, 2, SearchMode::NormalOnly).unwrap();
        for t in subs.iter().filter(|t| t.index() == 2) {
            let inv = subgroup_abelianization(&p, t);
            assert_eq!(inv.free_rank(), 6);
            assert!(inv.torsion().is_empty());
        }
    }

    #[test]
    fn euler_characteristic_multiplicativity_on_surface_groups() {
        // genus-g surface group; an index-d subgroup is a genus-g' surface
        // group with 2 - 2g' = d(2 - 2g), so b1 = 2 + d(2g - 2)
        for (g, pres) in
            [(2usize, "< a, b, c, d | [a,b][c,d] >"), (3, "< a, b, c, d, e, f | [a,b][c,d][e,f] >")]
        {
            let p = parse_presentation(pres).unwrap();
            for d in 2..=3usize {
                let subs = low_index_subgroups(&p, d, SearchMode::All).unwrap();
                for t in subs.iter().filter(|t| t.index() == d) {
                    let inv = subgroup_abelianization(&p, t);
                    assert_eq!(inv.free_rank(), 2 + d * (2 * g - 2));
                    assert!(inv.torsion().is_empty());
                }
            }
        }
    }

    #[test]
    fn cyclic_eight_over_fourth_powers_gives_c2() {
        let p = parse_presentation("< a | a^8 >").unwrap();
        let t = coset_enumerate(&p, &SubgroupSpec::new(vec![Word::new([1, 1, 1, 1])]), 100)
            .unwrap();
        let inv = subgroup_abelianization(&p, &t);
        assert_eq!(torsion_u64(&inv), [2]);
        assert!(has_finite_abelianization(&inv));
    }

    #[test]
    fn finite_abelianization_predicate() {
        assert!(has_finite_abelianization(&AbelianInvariants::from_u64(&[2, 2], 0)));
        assert!(!has_finite_abelianization(&AbelianInvariants::free(6)));
        assert!(has_finite_abelianization(&AbelianInvariants::trivial()));
    }

    #[test]
    fn normal_subgroup_invariants_survive_base_change() {
        let p = parse_presentation("< a, b | a^2, b^2, (a*b)^3 >").unwrap();
        let normal = low_index_subgroups(&p, 3, SearchMode::NormalOnly).unwrap();
        for t in normal.iter().filter(|t| t.index() > 1) {
            let base = subgroup_abelianization(&p, t);
            for c in 1..t.index() {
                assert_eq!(subgroup_abelianization(&p, &t.rebase(c)), base);
            }
        }
    }
}
