//! Locally injective walks on the tiling as a subshift of finite type.
//!
//! The oriented edges of the fundamental hexagon, in the order they are
//! traversed, are `u = w₀, v = −jw₀, w = j²w₀` followed by `−u, −v, −w`
//! (normalised, `w₀ = 1`). A word is admissible when consecutive symbols are
//! consecutive tiling edges without immediate reversal.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::HexLattice;
use crate::eisenstein::Eisenstein;

pub const SYMBOLS: [&str; 6] = ["u", "v", "w", "-u", "-v", "-w"];

pub const INCIDENCE: [[u8; 6]; 6] = [
    [0, 1, 0, 0, 0, 1],
    [1, 0, 1, 0, 0, 0],
    [0, 1, 0, 1, 0, 0],
    [0, 0, 1, 0, 1, 0],
    [0, 0, 0, 1, 0, 1],
    [1, 0, 0, 0, 1, 0],
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkShift {
    pub matrix: [[u8; 6]; 6],
}

impl WalkShift {
    pub fn standard() -> Self {
        Self {
            matrix: INCIDENCE,
        }
    }

    pub fn edge_vector(symbol: usize) -> Eisenstein {
        [
            Eisenstein::ONE,
            -Eisenstein::J,
            Eisenstein::J2,
            -Eisenstein::ONE,
            Eisenstein::J,
            -Eisenstein::J2,
        ][symbol]
    }

    pub fn symbol_of(step: Eisenstein) -> Option<usize> {
        (0..6).find(|&s| Self::edge_vector(s) == step)
    }

    /// `A[a][b] = 1` when some tiling vertex admits step `a` followed by a
    /// step `b` that does not undo it.
    pub fn from_tiling(lattice: &HexLattice) -> Self {
        let mut matrix = [[0u8; 6]; 6];
        let near: Vec<Eisenstein> = lattice
            .vertices()
            .copied()
            .filter(|z| z.to_complex().norm() <= 2.0)
            .collect();
        for a in 0..6 {
            for b in 0..6 {
                let step_a = Self::edge_vector(a);
                let step_b = Self::edge_vector(b);
                let ok = near.iter().any(|z| {
                    let y = *z + step_a;
                    lattice.contains_normalized(&y)
                        && lattice.contains_normalized(&(y + step_b))
                        && step_b != -step_a
                });
                matrix[a][b] = ok as u8;
            }
        }
        Self { matrix }
    }

    pub fn allowed(&self, a: usize, b: usize) -> bool {
        self.matrix[a][b] == 1
    }

    pub fn admissible(&self, word: &[usize]) -> bool {
        word.windows(2).all(|p| self.allowed(p[0], p[1]))
    }

    /// Admissible continuations of length `n` after `first`, by powers of
    /// the incidence matrix.
    pub fn word_count(&self, first: usize, n: u32) -> u128 {
        let mut row = [0u128; 6];
        row[first] = 1;
        for _ in 0..n {
            let mut next = [0u128; 6];
            for a in 0..6 {
                for b in 0..6 {
                    next[b] += row[a] * self.matrix[a][b] as u128;
                }
            }
            row = next;
        }
        row.iter().sum()
    }

    /// The same count by explicit depth-first enumeration of words.
    pub fn enumerate_words(&self, first: usize, n: u32) -> u128 {
        if n == 0 {
            return 1;
        }
        (0..6)
            .filter(|&b| self.allowed(first, b))
            .map(|b| self.enumerate_words(b, n - 1))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Walk {
    pub symbols: Vec<usize>,
    /// Partial sums `S_0, …, S_{n−1}` as tiling vertices.
    pub positions: Vec<Eisenstein>,
}

impl Walk {
    pub fn position(&self, i: usize) -> Complex64 {
        self.positions[i].to_complex()
    }

    pub fn final_abs(&self) -> f64 {
        self.positions.last().map_or(0.0, |z| z.to_complex().norm())
    }

    pub fn max_abs(&self) -> f64 {
        self.positions.iter().map(|z| z.to_complex().norm()).fold(0.0, f64::max)
    }

    pub fn mean_abs(&self) -> f64 {
        if self.positions.is_empty() {
            return 0.0;
        }
        self.positions.iter().map(|z| z.to_complex().norm()).sum::<f64>() / self.positions.len() as f64
    }
}

/// A walk of `n` steps from the origin, each step uniform among the
/// admissible successors. The origin is a vertex whose edges are
/// `u, −v, w`, so the first symbol is drawn from those three.
pub fn walk_sample(shift: &WalkShift, n: usize, seed: u64) -> Walk {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut symbols = Vec::with_capacity(n);
    let mut positions = Vec::with_capacity(n);
    let mut here = Eisenstein::ZERO;
    for i in 0..n {
        let options: Vec<usize> = if i == 0 {
            vec![0, 4, 2]
        } else {
            let prev = symbols[i - 1];
            (0..6).filter(|&b| shift.allowed(prev, b)).collect()
        };
        let s = options[rng.gen_range(0..options.len())];
        here = here + WalkShift::edge_vector(s);
        symbols.push(s);
        positions.push(here);
    }
    Walk { symbols, positions }
}
