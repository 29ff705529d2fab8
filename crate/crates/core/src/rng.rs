//! SplitMix64 and the seeded samplers used by the randomized suites.
//!
//! The generator is implemented here rather than taken from a crate because
//! the exact output sequence is part of the report format.

use crate::clifford::{qform, Parity, Spinor, SplitSpace, Vector};
use crate::exterior::{IndexSet, Multivector};
use crate::matrix::Matrix;
use crate::mf::ThreeForm;
use crate::scalar::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    /// Stream for one trial: master seed XOR trial index.
    pub fn for_trial(seed: u64, trial: u64) -> SplitMix64 {
        SplitMix64::new(seed ^ trial)
    }

    pub fn state(&self) -> u64 {
        self.state
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut x = self.state;
        x ^= x >> 30;
        x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
        x ^= x >> 27;
        x = x.wrapping_mul(0x94D0_49BB_1331_11EB);
        x ^ (x >> 31)
    }

    /// Uniform-ish integer in [−r, r]: (x mod (2r+1)) − r.
    pub fn coeff(&mut self, r: u64) -> i64 {
        let x = self.next_u64();
        (x % (2 * r + 1)) as i64 - r as i64
    }

    pub fn coeff_rat(&mut self, r: u64) -> Rat {
        Rat::int(self.coeff(r))
    }
}

/// Functional form of one SplitMix64 step.
pub fn rng_next(state: u64) -> (u64, u64) {
    let mut g = SplitMix64::new(state);
    let v = g.next_u64();
    (g.state(), v)
}

/// Even index sets of ∧E_m in ascending bitmask order.
pub fn even_masks(m: usize) -> Vec<IndexSet> {
    (0u16..(1 << m))
        .filter(|b| b.count_ones() % 2 == 0)
        .map(IndexSet::from_bits)
        .collect()
}

/// Three-element subsets of 0..n in lexicographic order.
pub fn triples(n: usize) -> Vec<IndexSet> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push(IndexSet::from_positions(&[a, b, c]));
            }
        }
    }
    out
}

/// One coefficient per even monomial; an all-zero draw is redrawn.
pub fn random_even_spinor(space: SplitSpace, rng: &mut SplitMix64, r: u64) -> Spinor {
    let masks = even_masks(space.m());
    loop {
        let mv = Multivector::from_terms(space.m(), masks.iter().map(|k| (*k, rng.coeff_rat(r)))).expect("m ≤ 7");
        if !mv.is_zero() {
            return Spinor::with_parity(space, Parity::Even, mv).expect("even masks");
        }
    }
}

/// One coefficient per lexicographic triple; an all-zero draw is redrawn.
pub fn random_three_form(n: usize, rng: &mut SplitMix64, r: u64) -> ThreeForm {
    let ts = triples(n);
    loop {
        let mv = Multivector::from_terms(n, ts.iter().map(|k| (*k, rng.coeff_rat(r)))).expect("n ≤ 16");
        if !mv.is_zero() {
            return ThreeForm::new(mv).expect("grade 3");
        }
    }
}

/// A vector with q(v) ≠ 0.
pub fn random_anisotropic_vector(space: SplitSpace, rng: &mut SplitMix64, r: u64) -> Vector {
    loop {
        let c: Vec<Rat> = (0..space.dim()).map(|_| rng.coeff_rat(r)).collect();
        let v = Vector::from_coords(space, c).expect("dim");
        if !qform(&v).is_zero() {
            return v;
        }
    }
}

/// An n×n integer matrix with nonzero determinant.
pub fn random_invertible(n: usize, rng: &mut SplitMix64, r: u64) -> Matrix<Rat> {
    loop {
        let rows: Vec<Vec<Rat>> = (0..n).map(|_| (0..n).map(|_| rng.coeff_rat(r)).collect()).collect();
        let g = Matrix::from_rows(rows).expect("square");
        if !g.det().expect("square").is_zero() {
            return g;
        }
    }
}
