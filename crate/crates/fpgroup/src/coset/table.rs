//! Closed coset tables: the permutation action of the generators on the
//! right cosets of a finite-index subgroup. Coset 0 is the subgroup itself.

use crate::presentation::Presentation;
use crate::word::Word;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// Subgroup of a finitely presented group, given by generator words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupSpec {
    pub generators: Vec<Word>,
}

impl SubgroupSpec {
    pub fn trivial() -> Self {
        SubgroupSpec { generators: Vec::new() }
    }

    pub fn new(generators: Vec<Word>) -> Self {
        SubgroupSpec { generators }
    }
}

/// A permutation of `{0..n-1}` as its image list.
pub type Perm = Vec<usize>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TableError {
    #[error("generator {gen:?} does not act bijectively")]
    NotBijective { gen: String },
    #[error("action is not transitive: coset {0} unreachable from 0")]
    NotTransitive(usize),
    #[error("relator {relator} does not close at coset {coset}")]
    RelatorOpen { relator: usize, coset: usize },
    #[error("table has {table} generators but the presentation has {presentation}")]
    GeneratorMismatch { table: usize, presentation: usize },
    #[error("word uses generator index {0}, table only has {1}")]
    WordOutOfRange(usize, usize),
    #[error("operation requires index 4, table has index {0}")]
    NotIndexFour(usize),
    #[error("operation requires a normal subgroup")]
    NotNormal,
}

/// The closed coset table of a finite-index subgroup, with rows numbered in
/// breadth-first discovery order from coset 0.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct CosetTable {
    gen_names: Vec<String>,
    /// `action[g][c]` = image of coset `c` under right multiplication by
    /// generator `g+1`.
    action: Vec<Vec<usize>>,
}

impl CosetTable {
    pub fn new(gen_names: Vec<String>, action: Vec<Vec<usize>>) -> Self {
        assert_eq!(gen_names.len(), action.len());
        CosetTable { gen_names, action }
    }

    /// Number of cosets, i.e. the index of the subgroup.
    pub fn index(&self) -> usize {
        self.action.first().map_or(1, |p| p.len())
    }

    pub fn generator_count(&self) -> usize {
        self.action.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.gen_names
    }

    pub fn action(&self) -> &[Vec<usize>] {
        &self.action
    }

    /// Image of a coset under one signed letter.
    pub fn apply_letter(&self, coset: usize, letter: i32) -> usize {
        let g = (letter.unsigned_abs() as usize) - 1;
        if letter > 0 {
            self.action[g][coset]
        } else {
            // position of `coset` in the permutation = preimage
            self.action[g].iter().position(|&x| x == coset).expect("bijective action")
        }
    }

    /// Traces a word from a coset.
    pub fn trace(&self, start: usize, w: &Word) -> usize {
        let inv = self.inverse_action();
        self.trace_with(&inv, start, w)
    }

    fn inverse_action(&self) -> Vec<Vec<usize>> {
        self.action
            .iter()
            .map(|p| {
                let mut inv = vec![0; p.len()];
                for (i, &x) in p.iter().enumerate() {
                    inv[x] = i;
                }
                inv
            })
            .collect()
    }

    fn trace_with(&self, inv: &[Vec<usize>], start: usize, w: &Word) -> usize {
        let mut c = start;
        for &l in w.letters() {
            let g = (l.unsigned_abs() as usize) - 1;
            c = if l > 0 { self.action[g][c] } else { inv[g][c] };
        }
        c
    }

    /// The permutation a word induces on the cosets.
    pub fn permutation_image(&self, w: &Word) -> Result<Perm, TableError> {
        if w.max_index() > self.generator_count() {
            return Err(TableError::WordOutOfRange(w.max_index(), self.generator_count()));
        }
        let inv = self.inverse_action();
        Ok((0..self.index()).map(|c| self.trace_with(&inv, c, w)).collect())
    }

    /// Number of cosets fixed by every one of the given subgroup
    /// generators: `|N_G(H) : H|` when the words generate the subgroup the
    /// table belongs to.
    pub fn normalizer_index(&self, subgroup: &SubgroupSpec) -> Result<usize, TableError> {
        let mut fixed = vec![true; self.index()];
        let inv = self.inverse_action();
        for h in &subgroup.generators {
            if h.max_index() > self.generator_count() {
                return Err(TableError::WordOutOfRange(h.max_index(), self.generator_count()));
            }
            for c in 0..self.index() {
                if fixed[c] && self.trace_with(&inv, c, h) != c {
                    fixed[c] = false;
                }
            }
        }
        Ok(fixed.iter().filter(|&&f| f).count())
    }

    /// True when every given subgroup generator fixes every coset, i.e. the
    /// subgroup is normal.
    pub fn is_normal_for(&self, subgroup: &SubgroupSpec) -> Result<bool, TableError> {
        Ok(self.normalizer_index(subgroup)? == self.index())
    }

    /// Normality from the table alone, via its Schreier generators.
    pub fn is_normal(&self) -> bool {
        let gens = self.schreier_generators();
        self.is_normal_for(&SubgroupSpec::new(gens)).expect("schreier words are valid")
    }

    /// Words generating the point stabilizer of coset 0: one per non-tree
    /// edge of the breadth-first spanning tree.
    pub fn schreier_generators(&self) -> Vec<Word> {
        let (transversal, tree) = self.spanning_tree();
        let mut gens = Vec::new();
        for c in 0..self.index() {
            for g in 0..self.generator_count() {
                if tree.contains(&(c, g)) {
                    continue;
                }
                let d = self.action[g][c];
                let w = transversal[c]
                    .concat(&Word::generator(g + 1, false))
                    .concat(&transversal[d].inverse());
                if !w.is_empty() {
                    gens.push(w);
                }
            }
        }
        gens
    }

    /// BFS transversal words and the set of tree edges `(coset, generator)`
    /// in positive-generator orientation.
    pub(crate) fn spanning_tree(&self) -> (Vec<Word>, std::collections::BTreeSet<(usize, usize)>) {
        let n = self.index();
        let inv = self.inverse_action();
        let mut transversal: Vec<Option<Word>> = vec![None; n];
        transversal[0] = Some(Word::empty());
        let mut tree = std::collections::BTreeSet::new();
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            for g in 0..self.generator_count() {
                // scan columns in the order g, g^-1 to match the canonical
                // breadth-first renumbering
                let d = self.action[g][c];
                if transversal[d].is_none() {
                    transversal[d] = Some(
                        transversal[c].as_ref().unwrap().concat(&Word::generator(g + 1, false)),
                    );
                    tree.insert((c, g));
                    queue.push_back(d);
                }
                let e = inv[g][c];
                if transversal[e].is_none() {
                    transversal[e] = Some(
                        transversal[c].as_ref().unwrap().concat(&Word::generator(g + 1, true)),
                    );
                    // the positive orientation of the tree edge c -> e
                    // labelled g^-1 is (e, g)
                    tree.insert((e, g));
                    queue.push_back(e);
                }
            }
        }
        let transversal = transversal
            .into_iter()
            .map(|t| t.expect("transitive action reaches every coset"))
            .collect();
        (transversal, tree)
    }

    /// `C4` or `V4` for the table of a normal subgroup of index four.
    pub fn quotient_type(&self) -> Result<crate::abelian::QuotientType, TableError> {
        if self.index() != 4 {
            return Err(TableError::NotIndexFour(self.index()));
        }
        if !self.is_normal() {
            return Err(TableError::NotNormal);
        }
        let cyclic = self.action.iter().any(|p| perm_order(p) == 4);
        Ok(if cyclic { crate::abelian::QuotientType::C4 } else { crate::abelian::QuotientType::V4 })
    }

    /// Renumbers cosets in breadth-first discovery order from `base`,
    /// scanning columns as `g1, g1^-1, g2, ...`. With `base = 0` this is the
    /// canonical form of the table; other bases move the subgroup to the
    /// stabilizer of `base`.
    pub fn rebase(&self, base: usize) -> CosetTable {
        let n = self.index();
        let inv = self.inverse_action();
        let mut new_of_old = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        new_of_old[base] = 0;
        order.push(base);
        let mut head = 0;
        while head < order.len() {
            let c = order[head];
            head += 1;
            for g in 0..self.generator_count() {
                for d in [self.action[g][c], inv[g][c]] {
                    if new_of_old[d] == usize::MAX {
                        new_of_old[d] = order.len();
                        order.push(d);
                    }
                }
            }
        }
        let action = (0..self.generator_count())
            .map(|g| (0..n).map(|new_c| new_of_old[self.action[g][order[new_c]]]).collect())
            .collect();
        CosetTable { gen_names: self.gen_names.clone(), action }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.rebase(0)
    }

    /// Checks the three defining invariants: bijective generator actions,
    /// transitivity, and closure of every relator at every coset.
    pub fn validate(&self, p: &Presentation) -> Result<(), TableError> {
        if self.generator_count() != p.generator_count() {
            return Err(TableError::GeneratorMismatch {
                table: self.generator_count(),
                presentation: p.generator_count(),
            });
        }
        let n = self.index();
        for (g, perm) in self.action.iter().enumerate() {
            let mut seen = vec![false; n];
            for &x in perm {
                if x >= n || seen[x] {
                    return Err(TableError::NotBijective { gen: self.gen_names[g].clone() });
                }
                seen[x] = true;
            }
        }
        let mut reached = vec![false; n];
        let mut stack = vec![0usize];
        reached[0] = true;
        let inv = self.inverse_action();
        while let Some(c) = stack.pop() {
            for g in 0..self.generator_count() {
                for d in [self.action[g][c], inv[g][c]] {
                    if !reached[d] {
                        reached[d] = true;
                        stack.push(d);
                    }
                }
            }
        }
        if let Some(c) = reached.iter().position(|&r| !r) {
            return Err(TableError::NotTransitive(c));
        }
        for (ri, r) in p.relators().iter().enumerate() {
            for c in 0..n {
                if self.trace_with(&inv, c, r) != c {
                    return Err(TableError::RelatorOpen { relator: ri, coset: c });
                }
            }
        }
        Ok(())
    }

    /// JSON form `{"index": n, "action": {gen: [images...]}}`.
    pub fn to_json_value(&self) -> serde_json::Value
    where
        Self: Sized,
    {
        let mut action = BTreeMap::new();
        for (g, name) in self.gen_names.iter().enumerate() {
            action.insert(name.clone(), self.action[g].clone());
        }
        serde_json::json!({ "index": self.index(), "action": action })
    }

    /// Reads the JSON form back, resolving generator names against a
    /// presentation.
    pub fn from_json_value(
        value: &serde_json::Value,
        p: &Presentation,
    ) -> Result<Self, String> {
        let index = value
            .get("index")
            .and_then(|v| v.as_u64())
            .ok_or("missing or invalid \"index\"")? as usize;
        let action_obj =
            value.get("action").and_then(|v| v.as_object()).ok_or("missing \"action\" object")?;
        let mut action = Vec::with_capacity(p.generator_count());
        for name in p.generator_names() {
            let images = action_obj
                .get(name)
                .and_then(|v| v.as_array())
                .ok_or_else(|| format!("missing action for generator {name:?}"))?;
            if images.len() != index {
                return Err(format!("action for {name:?} has length {}, want {index}", images.len()));
            }
            let perm: Option<Vec<usize>> =
                images.iter().map(|v| v.as_u64().map(|x| x as usize)).collect();
            action.push(perm.ok_or_else(|| format!("non-integer image for {name:?}"))?);
        }
        if action_obj.len() != p.generator_count() {
            return Err("action lists generators not in the presentation".to_string());
        }
        let table = CosetTable { gen_names: p.generator_names().to_vec(), action };
        table.validate(p).map_err(|e| e.to_string())?;
        Ok(table)
    }

    /// Flattened row-major action, the lexicographic sort key used for
    /// canonical ordering of subgroup lists.
    pub fn flattened(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.index() * self.generator_count());
        for c in 0..self.index() {
            for g in 0..self.generator_count() {
                out.push(self.action[g][c]);
            }
        }
        out
    }
}

/// Order of a permutation: lcm of its cycle lengths.
pub fn perm_order(p: &[usize]) -> usize {
    let n = p.len();
    let mut seen = vec![false; n];
    let mut order = 1usize;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut c = start;
        while !seen[c] {
            seen[c] = true;
            c = p[c];
            len += 1;
        }
        order = num_integer::lcm(order, len);
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    /// The table of the trivial subgroup in C4 = <a | a^4>.
    fn c4_regular() -> CosetTable {
        CosetTable::new(vec!["a".to_string()], vec![vec![1, 2, 3, 0]])
    }

    /// Klein group acting on itself: <a, b | a^2, b^2, [a,b]>.
    fn v4_regular() -> CosetTable {
        CosetTable::new(
            vec!["a".to_string(), "b".to_string()],
            vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]],
        )
    }

    #[test]
    fn validator_accepts_regular_tables() {
        let p = parse_presentation("< a | a^4 >").unwrap();
        c4_regular().validate(&p).unwrap();
        let v = parse_presentation("< a, b | a^2, b^2, [a,b] >").unwrap();
        v4_regular().validate(&v).unwrap();
    }

    #[test]
    fn validator_rejects_open_relators_and_bad_permutations() {
        let p = parse_presentation("< a | a^3 >").unwrap();
        let t = c4_regular();
        assert!(matches!(t.validate(&p), Err(TableError::RelatorOpen { .. })));
        let broken = CosetTable::new(vec!["a".to_string()], vec![vec![1, 1, 3, 0]]);
        assert!(matches!(
            broken.validate(&parse_presentation("< a | a^4 >").unwrap()),
            Err(TableError::NotBijective { .. })
        ));
    }

    #[test]
    fn empty_word_acts_as_identity() {
        let t = v4_regular();
        assert_eq!(t.permutation_image(&Word::empty()).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn quotient_types_of_regular_actions() {
        assert_eq!(c4_regular().quotient_type().unwrap(), crate::abelian::QuotientType::C4);
        assert_eq!(v4_regular().quotient_type().unwrap(), crate::abelian::QuotientType::V4);
    }

    #[test]
    fn quotient_type_rejects_wrong_index() {
        let t = CosetTable::new(vec!["a".to_string()], vec![vec![1, 2, 0]]);
        assert_eq!(t.quotient_type(), Err(TableError::NotIndexFour(3)));
    }

    #[test]
    fn normal_iff_all_cosets_fixed() {
        let t = v4_regular();
        assert!(t.is_normal());
        assert_eq!(
            t.normalizer_index(&SubgroupSpec::new(t.schreier_generators())).unwrap(),
            4
        );
    }

    #[test]
    fn perm_order_examples() {
        assert_eq!(perm_order(&[0, 1, 2]), 1);
        assert_eq!(perm_order(&[1, 0, 2]), 2);
        assert_eq!(perm_order(&[1, 2, 3, 0]), 4);
        assert_eq!(perm_order(&[1, 0, 3, 4, 2]), 6);
    }

    #[test]
    fn json_round_trip() {
        let p = parse_presentation("< a, b | a^2, b^2, [a,b] >").unwrap();
        let t = v4_regular();
        let v = t.to_json_value();
        let back = CosetTable::from_json_value(&v, &p).unwrap();
        assert_eq!(t, back);
    }
}
