//! Low-index subgroup search: every subgroup of index at most `n` of a
//! finitely presented group, as canonical coset tables.
//!
//! The search backtracks over partial coset tables kept in standard form
//! (new cosets are introduced in row-scan order, so a completed table is
//! its own breadth-first canonical form). Forced coincidences prune a
//! branch. Completed tables are emitted only when they are the
//! lexicographically least table in their conjugacy class; the full
//! subgroup list is then recovered by rebasing each class representative
//! at every coset.

use crate::coset::CosetTable;
use crate::presentation::Presentation;
use std::collections::BTreeSet;
use thiserror::Error;

pub const DEFAULT_NODE_CAP: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// One table per subgroup of index <= n, the whole group included.
    All,
    /// Only the normal subgroups.
    NormalOnly,
}

#[derive(Clone, Copy, Debug)]
pub struct LowIndexOptions {
    /// Cap on partial-table extensions before the search gives up.
    pub node_cap: usize,
}

impl Default for LowIndexOptions {
    fn default() -> Self {
        LowIndexOptions { node_cap: DEFAULT_NODE_CAP }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LowIndexError {
    #[error("search node cap of {node_cap} exceeded")]
    NodeCapExceeded { node_cap: usize },
    #[error("max index must be at least 1")]
    BadIndex,
}

/// All subgroups of index at most `max_index`, in a deterministic order
/// (ascending index, then lexicographic on the flattened tables).
pub fn low_index_subgroups(
    p: &Presentation,
    max_index: usize,
    mode: SearchMode,
) -> Result<Vec<CosetTable>, LowIndexError> {
    low_index_subgroups_with(p, max_index, mode, &LowIndexOptions::default())
}

pub fn low_index_subgroups_with(
    p: &Presentation,
    max_index: usize,
    mode: SearchMode,
    options: &LowIndexOptions,
) -> Result<Vec<CosetTable>, LowIndexError> {
    if max_index == 0 {
        return Err(LowIndexError::BadIndex);
    }
    let mut search = Search::new(p, max_index, options.node_cap);
    search.run()?;
    let mut out = Vec::new();
    for rep in search.found {
        debug_assert!(rep.is_canonical());
        debug_assert!(rep.validate(p).is_ok());
        match mode {
            SearchMode::All => {
                let mut class: BTreeSet<CosetTable> = BTreeSet::new();
                for c in 0..rep.index() {
                    class.insert(rep.rebase(c));
                }
                out.extend(class);
            }
            SearchMode::NormalOnly => {
                if rep.is_normal() {
                    out.push(rep);
                }
            }
        }
    }
    out.sort_by(|a, b| (a.index(), a.flattened()).cmp(&(b.index(), b.flattened())));
    Ok(out)
}

/// One conjugacy class of subgroups: its canonically least table and size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: CosetTable,
    pub size: usize,
}

/// Partitions subgroup tables (from `low_index_subgroups` on a single
/// presentation) into conjugacy classes.
pub fn conjugacy_classes(subgroups: &[CosetTable]) -> Vec<ConjugacyClass> {
    let mut classes: std::collections::BTreeMap<CosetTable, usize> = Default::default();
    for t in subgroups {
        let rep = (0..t.index()).map(|c| t.rebase(c)).min().expect("index >= 1");
        *classes.entry(rep).or_insert(0) += 1;
    }
    classes
        .into_iter()
        .map(|(representative, size)| ConjugacyClass { representative, size })
        .collect()
}

const UNDEF: i64 = -1;

struct Search {
    ncols: usize,
    ngens: usize,
    gen_names: Vec<String>,
    relators: Vec<Vec<usize>>,
    max_index: usize,
    table: Vec<i64>,
    num_cosets: usize,
    trail: Vec<usize>,
    nodes: usize,
    node_cap: usize,
    found: Vec<CosetTable>,
}

enum ScanOutcome {
    Ok,
    Progress,
    Dead,
}

impl Search {
    fn new(p: &Presentation, max_index: usize, node_cap: usize) -> Search {
        let ncols = 2 * p.generator_count();
        let relators = p
            .relators()
            .iter()
            .map(|r| {
                r.letters()
                    .iter()
                    .map(|&l| {
                        let g = (l.unsigned_abs() as usize) - 1;
                        2 * g + usize::from(l < 0)
                    })
                    .collect()
            })
            .collect();
        Search {
            ncols,
            ngens: p.generator_count(),
            gen_names: p.generator_names().to_vec(),
            relators,
            max_index,
            table: vec![UNDEF; max_index * ncols],
            num_cosets: 1,
            trail: Vec::new(),
            nodes: 0,
            node_cap,
            found: Vec::new(),
        }
    }

    fn run(&mut self) -> Result<(), LowIndexError> {
        if !matches!(self.propagate(), ScanOutcome::Dead) {
            self.search()?;
        }
        Ok(())
    }

    fn cell(&self, c: usize, col: usize) -> i64 {
        self.table[c * self.ncols + col]
    }

    fn assign(&mut self, c: usize, col: usize, d: usize) {
        debug_assert_eq!(self.cell(c, col), UNDEF);
        debug_assert_eq!(self.cell(d, col ^ 1), UNDEF);
        self.table[c * self.ncols + col] = d as i64;
        self.table[d * self.ncols + (col ^ 1)] = c as i64;
        self.trail.push(c * self.ncols + col);
        self.trail.push(d * self.ncols + (col ^ 1));
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let idx = self.trail.pop().unwrap();
            self.table[idx] = UNDEF;
        }
    }

    fn first_undefined(&self) -> Option<(usize, usize)> {
        for c in 0..self.num_cosets {
            for col in 0..self.ncols {
                if self.cell(c, col) == UNDEF {
                    return Some((c, col));
                }
            }
        }
        None
    }

    fn search(&mut self) -> Result<(), LowIndexError> {
        let Some((c, col)) = self.first_undefined() else {
            self.emit();
            return Ok(());
        };
        for d in 0..=self.num_cosets {
            let is_new = d == self.num_cosets;
            if is_new {
                if self.num_cosets == self.max_index {
                    break;
                }
            } else if self.cell(d, col ^ 1) != UNDEF {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.node_cap {
                return Err(LowIndexError::NodeCapExceeded { node_cap: self.node_cap });
            }
            let mark = self.trail.len();
            if is_new {
                self.num_cosets += 1;
            }
            self.assign(c, col, d);
            if !matches!(self.propagate(), ScanOutcome::Dead) {
                self.search()?;
            }
            self.undo_to(mark);
            if is_new {
                self.num_cosets -= 1;
            }
        }
        Ok(())
    }

    /// Fixpoint of relator scanning over every coset. Scanning forward and
    /// backward deduces any instance missing a single edge; a closed scan
    /// landing on the wrong coset is a forced coincidence, which kills the
    /// branch since all cosets are distinct here.
    fn propagate(&mut self) -> ScanOutcome {
        loop {
            let mut progressed = false;
            for ri in 0..self.relators.len() {
                for c in 0..self.num_cosets {
                    match self.scan(ri, c) {
                        ScanOutcome::Dead => return ScanOutcome::Dead,
                        ScanOutcome::Progress => progressed = true,
                        ScanOutcome::Ok => {}
                    }
                }
            }
            if !progressed {
                return ScanOutcome::Ok;
            }
        }
    }

    fn scan(&mut self, ri: usize, start: usize) -> ScanOutcome {
        let len = self.relators[ri].len();
        let mut f = start;
        let mut i = 0;
        while i < len {
            let col = self.relators[ri][i];
            match self.cell(f, col) {
                UNDEF => break,
                d => {
                    f = d as usize;
                    i += 1;
                }
            }
        }
        if i == len {
            return if f == start { ScanOutcome::Ok } else { ScanOutcome::Dead };
        }
        let mut b = start;
        let mut j = len;
        while j > i + 1 {
            let col = self.relators[ri][j - 1];
            match self.cell(b, col ^ 1) {
                UNDEF => break,
                d => {
                    b = d as usize;
                    j -= 1;
                }
            }
        }
        if j == i + 1 {
            let col = self.relators[ri][i];
            if self.cell(b, col ^ 1) != UNDEF {
                return ScanOutcome::Dead;
            }
            self.assign(f, col, b);
            return ScanOutcome::Progress;
        }
        ScanOutcome::Ok
    }

    /// Completed table: keep it when it is the least member of its
    /// conjugacy class.
    fn emit(&mut self) {
        let action: Vec<Vec<usize>> = (0..self.ngens)
            .map(|g| (0..self.num_cosets).map(|c| self.cell(c, 2 * g) as usize).collect())
            .collect();
        let t = CosetTable::new(self.gen_names.clone(), action);
        let key = t.flattened();
        for c in 1..t.index() {
            if t.rebase(c).flattened() < key {
                return;
            }
        }
        self.found.push(t);
    }
}
