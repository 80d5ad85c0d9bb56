//! Fixed-width atom sets.
//!
//! A [`Relation`] is a set of atoms of one calculus stored as a 192-bit
//! vector, wide enough for the 169 atoms of the rectangle algebra. The
//! representation is calculus-agnostic; operations that need the atom count
//! (complement, universal relation) take it explicitly.

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Sub};

/// Largest atom count any calculus may have.
pub const MAX_ATOMS: usize = 192;

const WORDS: usize = MAX_ATOMS / 64;

/// Index of an atom within its calculus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomId(pub u8);

impl AtomId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for AtomId {
    fn from(i: usize) -> Self {
        debug_assert!(i < MAX_ATOMS);
        AtomId(i as u8)
    }
}

/// A set of atoms.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Relation {
    bits: [u64; WORDS],
}

impl Relation {
    pub const EMPTY: Relation = Relation { bits: [0; WORDS] };

    #[inline]
    pub fn empty() -> Self {
        Self::EMPTY
    }

    /// The universal relation over `atom_count` atoms.
    pub fn full(atom_count: usize) -> Self {
        assert!(atom_count <= MAX_ATOMS, "atom count {atom_count} exceeds {MAX_ATOMS}");
        let mut bits = [0u64; WORDS];
        for (w, word) in bits.iter_mut().enumerate() {
            let lo = w * 64;
            if atom_count >= lo + 64 {
                *word = u64::MAX;
            } else if atom_count > lo {
                *word = (1u64 << (atom_count - lo)) - 1;
            }
        }
        Relation { bits }
    }

    #[inline]
    pub fn singleton(a: AtomId) -> Self {
        let mut r = Self::EMPTY;
        r.insert(a);
        r
    }

    pub fn from_atoms<I: IntoIterator<Item = AtomId>>(atoms: I) -> Self {
        let mut r = Self::EMPTY;
        for a in atoms {
            r.insert(a);
        }
        r
    }

    /// Builds a relation from the low 64 bits; used by the small-calculus
    /// lookup tables.
    #[inline]
    pub fn from_u64(word: u64) -> Self {
        let mut bits = [0u64; WORDS];
        bits[0] = word;
        Relation { bits }
    }

    /// The low 64 bits. Only meaningful for calculi with at most 64 atoms.
    #[inline]
    pub fn low_word(&self) -> u64 {
        self.bits[0]
    }

    #[inline]
    pub fn insert(&mut self, a: AtomId) {
        let i = a.index();
        self.bits[i / 64] |= 1u64 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, a: AtomId) {
        let i = a.index();
        self.bits[i / 64] &= !(1u64 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, a: AtomId) -> bool {
        let i = a.index();
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_atomic(&self) -> bool {
        self.len() == 1
    }

    #[inline]
    pub fn is_subset(&self, other: &Relation) -> bool {
        self.bits.iter().zip(other.bits.iter()).all(|(a, b)| a & !b == 0)
    }

    #[inline]
    pub fn intersects(&self, other: &Relation) -> bool {
        self.bits.iter().zip(other.bits.iter()).any(|(a, b)| a & b != 0)
    }

    /// Complement with respect to the universal relation of `atom_count` atoms.
    pub fn complement(&self, atom_count: usize) -> Relation {
        let full = Relation::full(atom_count);
        let mut bits = [0u64; WORDS];
        for (w, word) in bits.iter_mut().enumerate() {
            *word = !self.bits[w] & full.bits[w];
        }
        Relation { bits }
    }

    /// Lowest-indexed atom, if any.
    #[inline]
    pub fn first(&self) -> Option<AtomId> {
        for (w, &word) in self.bits.iter().enumerate() {
            if word != 0 {
                return Some(AtomId((w * 64 + word.trailing_zeros() as usize) as u8));
            }
        }
        None
    }

    /// Largest atom index + 1, or 0 for the empty relation.
    pub fn span(&self) -> usize {
        for w in (0..WORDS).rev() {
            if self.bits[w] != 0 {
                return w * 64 + 64 - self.bits[w].leading_zeros() as usize;
            }
        }
        0
    }

    pub fn iter(&self) -> Atoms {
        Atoms { bits: self.bits, word: 0 }
    }
}

impl BitAnd for Relation {
    type Output = Relation;
    #[inline]
    fn bitand(self, rhs: Relation) -> Relation {
        let mut bits = self.bits;
        for (a, b) in bits.iter_mut().zip(rhs.bits.iter()) {
            *a &= b;
        }
        Relation { bits }
    }
}

impl BitAndAssign for Relation {
    #[inline]
    fn bitand_assign(&mut self, rhs: Relation) {
        *self = *self & rhs;
    }
}

impl BitOr for Relation {
    type Output = Relation;
    #[inline]
    fn bitor(self, rhs: Relation) -> Relation {
        let mut bits = self.bits;
        for (a, b) in bits.iter_mut().zip(rhs.bits.iter()) {
            *a |= b;
        }
        Relation { bits }
    }
}

impl BitOrAssign for Relation {
    #[inline]
    fn bitor_assign(&mut self, rhs: Relation) {
        for (a, b) in self.bits.iter_mut().zip(rhs.bits.iter()) {
            *a |= b;
        }
    }
}

impl Sub for Relation {
    type Output = Relation;
    #[inline]
    fn sub(self, rhs: Relation) -> Relation {
        let mut bits = self.bits;
        for (a, b) in bits.iter_mut().zip(rhs.bits.iter()) {
            *a &= !b;
        }
        Relation { bits }
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|a| a.0)).finish()
    }
}

impl FromIterator<AtomId> for Relation {
    fn from_iter<I: IntoIterator<Item = AtomId>>(iter: I) -> Self {
        Relation::from_atoms(iter)
    }
}

impl IntoIterator for &Relation {
    type Item = AtomId;
    type IntoIter = Atoms;
    fn into_iter(self) -> Atoms {
        self.iter()
    }
}

/// Iterator over the atoms of a relation in increasing index order.
pub struct Atoms {
    bits: [u64; WORDS],
    word: usize,
}

impl Iterator for Atoms {
    type Item = AtomId;

    #[inline]
    fn next(&mut self) -> Option<AtomId> {
        while self.word < WORDS {
            let w = self.bits[self.word];
            if w != 0 {
                let tz = w.trailing_zeros() as usize;
                self.bits[self.word] &= w - 1;
                return Some(AtomId((self.word * 64 + tz) as u8));
            }
            self.word += 1;
        }
        None
    }
}
