//! Permutations of {1,..,n} and their indexing.
//!
//! Elements are 1-based in the external interface and 0-based internally.
//! Permutations are indexed 0..n! by Lehmer code in lexicographic order of
//! the image sequence, so `Permutation::identity(n)` always has index 0.

use crate::error::{Error, Result};

pub const MAX_N: u8 = 8;

pub const FACTORIALS: [usize; 9] = [1, 1, 2, 6, 24, 120, 720, 5040, 40320];

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    n: u8,
    images: [u8; MAX_N as usize],
}

impl Permutation {
    /// Builds a permutation from 0-based images.
    pub fn from_images(images: &[u8]) -> Result<Self> {
        let n = images.len();
        if n == 0 || n > MAX_N as usize {
            return Err(Error::Domain(format!("permutation size {n} out of range 1..=8")));
        }
        let mut seen = [false; MAX_N as usize];
        let mut buf = [0u8; MAX_N as usize];
        for (x, &y) in images.iter().enumerate() {
            if y as usize >= n || seen[y as usize] {
                return Err(Error::Domain(format!("images {images:?} are not a bijection")));
            }
            seen[y as usize] = true;
            buf[x] = y;
        }
        Ok(Permutation { n: n as u8, images: buf })
    }

    pub fn identity(n: u8) -> Self {
        let mut images = [0u8; MAX_N as usize];
        for x in 0..n {
            images[x as usize] = x;
        }
        Permutation { n, images }
    }

    /// The transposition (a b), 0-based.
    pub fn swap(n: u8, a: u8, b: u8) -> Self {
        let mut p = Self::identity(n);
        p.images[a as usize] = b;
        p.images[b as usize] = a;
        p
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn apply(&self, x: u8) -> u8 {
        self.images[x as usize]
    }

    pub fn images(&self) -> &[u8] {
        &self.images[..self.n as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images().iter().enumerate().all(|(x, &y)| x == y as usize)
    }

    /// Group product: (self * other)(x) = self(other(x)).
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.n, other.n);
        let mut images = [0u8; MAX_N as usize];
        for x in 0..self.n as usize {
            images[x] = self.images[other.images[x] as usize];
        }
        Permutation { n: self.n, images }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = [0u8; MAX_N as usize];
        for x in 0..self.n as usize {
            images[self.images[x] as usize] = x as u8;
        }
        Permutation { n: self.n, images }
    }

    pub fn order(&self) -> usize {
        let mut p = *self;
        let mut k = 1;
        while !p.is_identity() {
            p = p.compose(self);
            k += 1;
        }
        k
    }

    /// Lexicographic rank of the image sequence among all n! permutations.
    pub fn index(&self) -> usize {
        let n = self.n as usize;
        let mut rank = 0;
        for x in 0..n {
            let smaller = (x + 1..n).filter(|&y| self.images[y] < self.images[x]).count();
            rank += smaller * FACTORIALS[n - 1 - x];
        }
        rank
    }

    pub fn from_index(n: u8, mut index: usize) -> Self {
        let nn = n as usize;
        debug_assert!(index < FACTORIALS[nn]);
        let mut avail: Vec<u8> = (0..n).collect();
        let mut images = [0u8; MAX_N as usize];
        for x in 0..nn {
            let f = FACTORIALS[nn - 1 - x];
            let pos = index / f;
            index %= f;
            images[x] = avail.remove(pos);
        }
        Permutation { n, images }
    }
}

/// All permutations of {0,..,n-1} in index order.
pub fn all_permutations(n: u8) -> Vec<Permutation> {
    (0..FACTORIALS[n as usize]).map(|i| Permutation::from_index(n, i)).collect()
}

impl std::fmt::Debug for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        // printed 1-based
        write!(f, "[")?;
        for (x, &y) in self.images().iter().enumerate() {
            if x > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", y + 1)?;
        }
        write!(f, "]")
    }
}
