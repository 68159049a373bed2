//! Todd-Coxeter coset enumeration, Felsch style: every new table entry is
//! pushed on a deduction stack and its consequences traced through the
//! relators before the next coset is defined. Coincidences are merged with
//! a union-find; definitions carried by a dying coset are replayed as fresh
//! deductions.

use super::table::{CosetTable, SubgroupSpec};
use crate::presentation::Presentation;

use rand::{Rng, SeedableRng};
use thiserror::Error;

pub const DEFAULT_MAX_COSETS: usize = 1_000_000;

/// Which undefined table cell to define next. The closed table is the same
/// for every strategy; only the work order changes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DefinitionStrategy {
    /// First undefined cell in row-scan order (the default).
    FirstUndefined,
    /// Uniformly random undefined cell from a seeded generator. Used to
    /// check strategy independence.
    Shuffled(u64),
}

#[derive(Clone, Copy, Debug)]
pub struct EnumerationOptions {
    pub max_cosets: usize,
    pub strategy: DefinitionStrategy,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            max_cosets: DEFAULT_MAX_COSETS,
            strategy: DefinitionStrategy::FirstUndefined,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumerationError {
    #[error("coset budget of {max_cosets} exceeded before the enumeration closed")]
    BudgetExceeded { max_cosets: usize },
    #[error("invalid subgroup generator: {0}")]
    InvalidWord(String),
    #[error("max_cosets must be at least 1")]
    EmptyBudget,
}

/// Enumerates the cosets of the subgroup generated by `h` in the group
/// presented by `p`. On success the table is closed, validated, and
/// renumbered in breadth-first order from coset 0.
pub fn coset_enumerate(
    p: &Presentation,
    h: &SubgroupSpec,
    max_cosets: usize,
) -> Result<CosetTable, EnumerationError> {
    coset_enumerate_with(p, h, &EnumerationOptions { max_cosets, ..Default::default() })
}

pub fn coset_enumerate_with(
    p: &Presentation,
    h: &SubgroupSpec,
    options: &EnumerationOptions,
) -> Result<CosetTable, EnumerationError> {
    if options.max_cosets == 0 {
        return Err(EnumerationError::EmptyBudget);
    }
    for w in &h.generators {
        p.validate_word(w).map_err(|e| EnumerationError::InvalidWord(e.to_string()))?;
    }
    let mut machine = Machine::new(p, h, options);
    machine.run()?;
    let table = machine.extract(p);
    debug_assert!(table.validate(p).is_ok(), "enumerator produced an invalid table");
    Ok(table)
}

const UNDEF: i64 = -1;

/// Column index of a signed letter; `col ^ 1` is the inverse column.
fn col_of(letter: i32) -> usize {
    let g = (letter.unsigned_abs() as usize) - 1;
    2 * g + usize::from(letter < 0)
}

struct Machine {
    ncols: usize,
    /// Flat table, `ncols` cells per coset, `UNDEF` for empty.
    cells: Vec<i64>,
    /// Union-find parent; `parent[c] == c` for live cosets.
    parent: Vec<u32>,
    live: usize,
    deductions: Vec<(u32, usize)>,
    /// Relators as column sequences.
    relators: Vec<Vec<usize>>,
    /// For each column, the (relator, position) pairs whose letter maps to
    /// that column; a new edge is scanned through exactly these rotations.
    positions: Vec<Vec<(usize, usize)>>,
    subgroup: Vec<Vec<usize>>,
    max_cosets: usize,
    created: usize,
    rng: Option<rand_chacha::ChaCha8Rng>,
}

impl Machine {
    fn new(p: &Presentation, h: &SubgroupSpec, options: &EnumerationOptions) -> Machine {
        let ncols = 2 * p.generator_count();
        let relators: Vec<Vec<usize>> =
            p.relators().iter().map(|r| r.letters().iter().map(|&l| col_of(l)).collect()).collect();
        let mut positions = vec![Vec::new(); ncols];
        for (ri, r) in relators.iter().enumerate() {
            for (pos, &c) in r.iter().enumerate() {
                positions[c].push((ri, pos));
            }
        }
        let subgroup =
            h.generators.iter().map(|w| w.letters().iter().map(|&l| col_of(l)).collect()).collect();
        let rng = match options.strategy {
            DefinitionStrategy::FirstUndefined => None,
            DefinitionStrategy::Shuffled(seed) => {
                Some(rand_chacha::ChaCha8Rng::seed_from_u64(seed))
            }
        };
        let mut m = Machine {
            ncols,
            cells: Vec::new(),
            parent: Vec::new(),
            live: 0,
            deductions: Vec::new(),
            relators,
            positions,
            subgroup,
            max_cosets: options.max_cosets,
            created: 0,
            rng,
        };
        m.new_coset().expect("budget is at least 1");
        m
    }

    fn find(&mut self, c: u32) -> u32 {
        let mut root = c;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = c;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn get(&mut self, c: u32, col: usize) -> Option<u32> {
        let raw = self.cells[c as usize * self.ncols + col];
        if raw == UNDEF {
            None
        } else {
            Some(self.find(raw as u32))
        }
    }

    fn set_edge(&mut self, a: u32, col: usize, b: u32) {
        self.cells[a as usize * self.ncols + col] = b as i64;
        self.cells[b as usize * self.ncols + (col ^ 1)] = a as i64;
        self.deductions.push((a, col));
        self.deductions.push((b, col ^ 1));
    }

    fn new_coset(&mut self) -> Result<u32, EnumerationError> {
        if self.created >= self.max_cosets {
            return Err(EnumerationError::BudgetExceeded { max_cosets: self.max_cosets });
        }
        let id = self.parent.len() as u32;
        self.parent.push(id);
        self.cells.extend(std::iter::repeat(UNDEF).take(self.ncols));
        self.live += 1;
        self.created += 1;
        Ok(id)
    }

    fn run(&mut self) -> Result<(), EnumerationError> {
        self.close_subgroup_words()?;
        loop {
            self.drain_deductions();
            match self.pick_undefined() {
                Some((c, col)) => {
                    let d = self.new_coset()?;
                    let c = self.find(c);
                    // the picked cell can have been filled by a merge that
                    // ran after picking; then the fresh coset is wasted but
                    // nothing breaks
                    if self.get(c, col).is_none() {
                        self.set_edge(c, col, d);
                    } else {
                        self.parent[d as usize] = c;
                        self.live -= 1;
                    }
                }
                None => {
                    if self.verify_closed() {
                        return Ok(());
                    }
                    // verification produced coincidences; keep going
                }
            }
        }
    }

    /// Traces every subgroup generator from coset 0, defining cosets as
    /// needed so each word closes back to 0.
    fn close_subgroup_words(&mut self) -> Result<(), EnumerationError> {
        for wi in 0..self.subgroup.len() {
            loop {
                self.drain_deductions();
                let word = self.subgroup[wi].clone();
                let base = self.find(0);
                match self.scan(base, &word) {
                    ScanResult::Closed => break,
                    ScanResult::Gap { at, coset } => {
                        let d = self.new_coset()?;
                        self.set_edge(coset, word[at], d);
                    }
                }
            }
        }
        Ok(())
    }

    fn drain_deductions(&mut self) {
        while let Some((c, col)) = self.deductions.pop() {
            // scan every relator rotation that begins with this column
            for idx in 0..self.positions[col].len() {
                let (ri, pos) = self.positions[col][idx];
                let rot: Vec<usize> = {
                    let r = &self.relators[ri];
                    r[pos..].iter().chain(r[..pos].iter()).copied().collect()
                };
                // the coset may have been merged away since the push; its
                // definitions were replayed on the survivor, so scanning
                // from the root is both safe and sufficient
                let base = self.find(c);
                let _ = self.scan(base, &rot);
            }
        }
    }

    /// Scans `word` (as columns) from `base`, expecting to return to
    /// `base`. Deduces the bridging edge when one cell is missing, merges
    /// cosets on mismatch, and reports a wider gap otherwise.
    fn scan(&mut self, base: u32, word: &[usize]) -> ScanResult {
        let mut f = base;
        let mut i = 0;
        while i < word.len() {
            match self.get(f, word[i]) {
                Some(next) => {
                    f = next;
                    i += 1;
                }
                None => break,
            }
        }
        if i == word.len() {
            if f != base {
                self.coincide(f, base);
            }
            return ScanResult::Closed;
        }
        let mut b = base;
        let mut j = word.len();
        while j > i + 1 {
            match self.get(b, word[j - 1] ^ 1) {
                Some(prev) => {
                    b = prev;
                    j -= 1;
                }
                None => break,
            }
        }
        if j == i + 1 {
            // single missing cell: the relator forces f . word[i] = b
            self.set_edge(f, word[i], b);
            return ScanResult::Closed;
        }
        ScanResult::Gap { at: i, coset: f }
    }

    /// Merges two cosets and everything that follows from the merge.
    fn coincide(&mut self, a: u32, b: u32) {
        let mut queue = vec![(a, b)];
        while let Some((a, b)) = queue.pop() {
            let ra = self.find(a);
            let rb = self.find(b);
            if ra == rb {
                continue;
            }
            // keep the older coset so coset 0 always survives
            let (keep, kill) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[kill as usize] = keep;
            self.live -= 1;
            for col in 0..self.ncols {
                let raw = self.cells[kill as usize * self.ncols + col];
                if raw == UNDEF {
                    continue;
                }
                self.cells[kill as usize * self.ncols + col] = UNDEF;
                let target = raw as u32;
                match self.get(keep, col) {
                    Some(existing) => {
                        // both rows defined this column: their targets agree
                        queue.push((existing, target));
                    }
                    None => {
                        let t = self.find(target);
                        self.cells[keep as usize * self.ncols + col] = t as i64;
                        self.cells[t as usize * self.ncols + (col ^ 1)] = keep as i64;
                        self.deductions.push((keep, col));
                        self.deductions.push((t, col ^ 1));
                    }
                }
            }
        }
    }

    fn pick_undefined(&mut self) -> Option<(u32, usize)> {
        match self.rng.take() {
            None => {
                for c in 0..self.parent.len() as u32 {
                    if self.find(c) != c {
                        continue;
                    }
                    for col in 0..self.ncols {
                        if self.get(c, col).is_none() {
                            return Some((c, col));
                        }
                    }
                }
                None
            }
            Some(mut rng) => {
                let mut open = Vec::new();
                for c in 0..self.parent.len() as u32 {
                    if self.find(c) != c {
                        continue;
                    }
                    for col in 0..self.ncols {
                        if self.get(c, col).is_none() {
                            open.push((c, col));
                        }
                    }
                }
                let pick = (!open.is_empty()).then(|| open[rng.gen_range(0..open.len())]);
                self.rng = Some(rng);
                pick
            }
        }
    }

    /// With no cell undefined, re-scans every relator at every coset and
    /// every subgroup word at 0. Returns false if that produced merges.
    fn verify_closed(&mut self) -> bool {
        let before = self.live;
        let roots: Vec<u32> =
            (0..self.parent.len() as u32).filter(|&c| self.find(c) == c).collect();
        for ri in 0..self.relators.len() {
            let word = self.relators[ri].clone();
            for &c in &roots {
                if self.find(c) != c {
                    continue;
                }
                let base = self.find(c);
                self.scan(base, &word);
            }
        }
        for wi in 0..self.subgroup.len() {
            let word = self.subgroup[wi].clone();
            let base = self.find(0);
            self.scan(base, &word);
        }
        self.live == before && self.deductions.is_empty()
    }

    /// Renumbers live cosets in breadth-first order from coset 0 and builds
    /// the positive-generator permutations.
    fn extract(&mut self, p: &Presentation) -> CosetTable {
        let n = self.live;
        let root0 = self.find(0);
        let mut new_of = std::collections::HashMap::new();
        let mut order = Vec::with_capacity(n);
        new_of.insert(root0, 0usize);
        order.push(root0);
        let mut head = 0;
        while head < order.len() {
            let c = order[head];
            head += 1;
            for col in 0..self.ncols {
                let d = self.get(c, col).expect("closed table");
                if !new_of.contains_key(&d) {
                    new_of.insert(d, order.len());
                    order.push(d);
                }
            }
        }
        assert_eq!(order.len(), n, "closed table must be transitive");
        let mut action = vec![vec![0usize; n]; p.generator_count()];
        for (new_c, &c) in order.iter().enumerate() {
            for g in 0..p.generator_count() {
                let d = self.get(c, 2 * g).expect("closed table");
                action[g][new_c] = new_of[&d];
            }
        }
        CosetTable::new(p.generator_names().to_vec(), action)
    }
}

enum ScanResult {
    Closed,
    Gap { at: usize, coset: u32 },
}
