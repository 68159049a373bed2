//! Words in the generators of a finitely presented group.
//!
//! A letter is a signed 1-based generator index: `+i` is the i-th generator,
//! `-i` its inverse. Words are kept freely reduced at all times.

use serde::{Deserialize, Serialize};
use std::fmt;

/// A freely reduced word in signed generator letters.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<i32>,
}

impl Word {
    /// Builds a word from raw letters, freely reducing as it goes.
    ///
    /// Panics if any letter is zero; zero is not a valid signed index.
    pub fn new(letters: impl IntoIterator<Item = i32>) -> Self {
        let mut out: Vec<i32> = Vec::new();
        for l in letters {
            assert!(l != 0, "letter 0 is not a valid signed generator index");
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    /// Single-letter word; `index` is 1-based, `inverse` negates it.
    pub fn generator(index: usize, inverse: bool) -> Self {
        let l = index as i32;
        Word::new([if inverse { -l } else { l }])
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index used (0 for the empty word).
    pub fn max_index(&self) -> usize {
        self.letters.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// The reversed word with every letter negated. An involution.
    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    /// Concatenation, freely reduced across the seam.
    pub fn concat(&self, other: &Word) -> Word {
        Word::new(self.letters.iter().chain(other.letters.iter()).copied())
    }

    /// Strips matching first/last inverse pairs until none remain.
    pub fn cyclically_reduced(&self) -> Word {
        let mut s = self.letters.as_slice();
        while s.len() >= 2 && s[0] == -s[s.len() - 1] {
            s = &s[1..s.len() - 1];
        }
        Word { letters: s.to_vec() }
    }

    /// Commutator `[x, y] = x^-1 y^-1 x y`.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.inverse().concat(&y.inverse()).concat(x).concat(y)
    }

    /// Rewrites the word through a generator map: letter `+/-i` becomes
    /// `images[i-1]` or its inverse. Used to push words along an embedding
    /// of one presented group into another.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Word::empty();
        for &l in &self.letters {
            let img = &images[(l.unsigned_abs() as usize) - 1];
            out = if l > 0 { out.concat(img) } else { out.concat(&img.inverse()) };
        }
        out
    }

    /// `w^n`, with negative `n` meaning powers of the inverse.
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }
}

/// Returns the unique freely reduced form of a raw letter sequence.
pub fn free_reduce(letters: &[i32]) -> Word {
    Word::new(letters.iter().copied())
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({:?})", self.letters)
    }
}
