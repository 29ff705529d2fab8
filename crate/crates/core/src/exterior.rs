//! Sparse exterior algebra over at most 16 labels.
//!
//! Labels are 1-based in the public API (`e₁₂₃` is `from_labels(&[1, 2, 3])`)
//! and stored as bits 0..n internally.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_LABELS: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct IndexSet(u16);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn from_bits(bits: u16) -> IndexSet {
        IndexSet(bits)
    }

    /// Set of 1-based labels; duplicates collapse.
    pub fn from_labels(labels: &[usize]) -> IndexSet {
        IndexSet(labels.iter().fold(0u16, |m, &l| m | (1 << (l - 1))))
    }

    /// Set of 0-based positions.
    pub fn from_positions(pos: &[usize]) -> IndexSet {
        IndexSet(pos.iter().fold(0u16, |m, &p| m | (1 << p)))
    }

    pub fn singleton(pos: usize) -> IndexSet {
        IndexSet(1 << pos)
    }

    pub fn full(n: usize) -> IndexSet {
        IndexSet(((1u32 << n) - 1) as u16)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, pos: usize) -> bool {
        self.0 >> pos & 1 == 1
    }

    pub fn is_disjoint(self, other: IndexSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 | other.0)
    }

    pub fn without(self, pos: usize) -> IndexSet {
        IndexSet(self.0 & !(1 << pos))
    }

    pub fn with(self, pos: usize) -> IndexSet {
        IndexSet(self.0 | (1 << pos))
    }

    /// Increasing 0-based positions.
    pub fn positions(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let p = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(p)
            }
        })
    }

    pub fn labels(self) -> Vec<usize> {
        self.positions().map(|p| p + 1).collect()
    }

    /// Number of elements strictly below `pos`.
    pub fn rank_of(self, pos: usize) -> usize {
        (self.0 & ((1u16 << pos) - 1)).count_ones() as usize
    }

    pub fn max_label(self) -> usize {
        16 - self.0.leading_zeros() as usize
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.labels())
    }
}

/// Sign of e_S ∧ e_T: (−1)^{#{(s, t) : s ∈ S, t ∈ T, s > t}}, or 0 if S ∩ T ≠ ∅.
pub fn wedge_sign(s: IndexSet, t: IndexSet) -> i32 {
    if !s.is_disjoint(t) {
        return 0;
    }
    let mut inv = 0u32;
    for p in t.positions() {
        let above = !((1u32 << (p + 1)) - 1) as u16;
        inv += (s.0 & above).count_ones();
    }
    if inv & 1 == 1 {
        -1
    } else {
        1
    }
}

/// Sign that sorts a sequence of distinct 0-based positions into increasing order.
pub fn permutation_sign(pos: &[usize]) -> i32 {
    let mut inv = 0;
    for i in 0..pos.len() {
        for j in i + 1..pos.len() {
            if pos[i] > pos[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 1 {
        -1
    } else {
        1
    }
}

fn signed<S: Scalar>(x: &S, sign: i32) -> S {
    if sign < 0 {
        x.negated()
    } else {
        x.clone()
    }
}

#[derive(Clone, PartialEq)]
pub struct Multivector<S> {
    n: usize,
    terms: BTreeMap<IndexSet, S>,
}

impl<S: Scalar> Multivector<S> {
    pub fn zero(n: usize) -> Result<Self> {
        if n > MAX_LABELS {
            return Err(Error::TooManyLabels(n));
        }
        Ok(Multivector {
            n,
            terms: BTreeMap::new(),
        })
    }

    pub fn scalar(n: usize, c: S) -> Result<Self> {
        let mut out = Self::zero(n)?;
        out.add_term(IndexSet::EMPTY, c);
        Ok(out)
    }

    /// c·e_{l₁} ∧ … ∧ e_{l_k} for 1-based labels in any order.
    pub fn monomial(n: usize, labels: &[usize], c: S) -> Result<Self> {
        let mut out = Self::zero(n)?;
        for &l in labels {
            if l == 0 || l > n {
                return Err(Error::LabelOutOfRange { label: l, n });
            }
        }
        let pos: Vec<usize> = labels.iter().map(|l| l - 1).collect();
        let set = IndexSet::from_positions(&pos);
        if set.grade() != labels.len() {
            return Ok(out);
        }
        out.add_term(set, signed(&c, permutation_sign(&pos)));
        Ok(out)
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (IndexSet, S)>) -> Result<Self> {
        let mut out = Self::zero(n)?;
        for (k, c) in terms {
            if k.max_label() > n {
                return Err(Error::LabelOutOfRange {
                    label: k.max_label(),
                    n,
                });
            }
            out.add_term(k, c);
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<IndexSet, S> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&IndexSet, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: IndexSet) -> S {
        self.terms.get(&k).cloned().unwrap_or_else(S::zero)
    }

    /// Adds c·e_k, dropping the entry if it cancels.
    pub fn add_term(&mut self, k: IndexSet, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(v) => {
                *v = v.plus(&c);
                if v.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    fn check_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            Err(Error::LabelMismatch(self.n, other.n))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.negated());
        }
        Ok(out)
    }

    /// self + t·other, in place.
    pub fn axpy(&mut self, t: &S, other: &Self) -> Result<()> {
        self.check_n(other)?;
        for (k, c) in &other.terms {
            self.add_term(*k, t.times(c));
        }
        Ok(())
    }

    pub fn scale(&self, t: &S) -> Self {
        if t.is_zero() {
            return Multivector {
                n: self.n,
                terms: BTreeMap::new(),
            };
        }
        Multivector {
            n: self.n,
            terms: self.terms.iter().map(|(k, c)| (*k, c.times(t))).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Multivector {
            n: self.n,
            terms: self.terms.iter().map(|(k, c)| (*k, c.negated())).collect(),
        }
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        let mut out = Multivector {
            n: self.n,
            terms: BTreeMap::new(),
        };
        for (s, x) in &self.terms {
            for (t, y) in &other.terms {
                let sign = wedge_sign(*s, *t);
                if sign != 0 {
                    out.add_term(s.union(*t), signed(&x.times(y), sign));
                }
            }
        }
        Ok(out)
    }

    /// e_S ↦ Σ_j (−1)^{pos(j)−1} c_j e_{S∖j}, extended linearly.
    pub fn interior(&self, c: &[S]) -> Result<Self> {
        if c.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: c.len(),
            });
        }
        let mut out = Multivector {
            n: self.n,
            terms: BTreeMap::new(),
        };
        for (s, x) in &self.terms {
            for (rank, p) in s.positions().enumerate() {
                if c[p].is_zero() {
                    continue;
                }
                let v = signed(&c[p].times(x), if rank % 2 == 1 { -1 } else { 1 });
                out.add_term(s.without(p), v);
            }
        }
        Ok(out)
    }

    /// Contraction by the dual basis covector y_pos (0-based).
    pub fn interior_basis(&self, pos: usize) -> Self {
        let mut out = Multivector {
            n: self.n,
            terms: BTreeMap::new(),
        };
        for (s, x) in &self.terms {
            if s.contains(pos) {
                let v = signed(x, if s.rank_of(pos) % 2 == 1 { -1 } else { 1 });
                out.add_term(s.without(pos), v);
            }
        }
        out
    }

    /// e_pos ∧ self (0-based position).
    pub fn wedge_basis_left(&self, pos: usize) -> Self {
        let mut out = Multivector {
            n: self.n,
            terms: BTreeMap::new(),
        };
        for (s, x) in &self.terms {
            if !s.contains(pos) {
                let v = signed(x, if s.rank_of(pos) % 2 == 1 { -1 } else { 1 });
                out.add_term(s.with(pos), v);
            }
        }
        out
    }

    pub fn top_coeff(&self) -> S {
        self.coeff(IndexSet::full(self.n))
    }

    pub fn grade_part(&self, k: usize) -> Self {
        Multivector {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(s, _)| s.grade() == k)
                .map(|(s, c)| (*s, c.clone()))
                .collect(),
        }
    }

    pub fn is_homogeneous(&self, k: usize) -> bool {
        self.terms.keys().all(|s| s.grade() == k)
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Multivector<T> {
        let mut out = Multivector::<T> {
            n: self.n,
            terms: BTreeMap::new(),
        };
        for (k, c) in &self.terms {
            out.add_term(*k, f(c));
        }
        out
    }

    /// Reversion: e_S ↦ (−1)^{k(k−1)/2} e_S with k = |S|.
    pub fn reverse(&self) -> Self {
        Multivector {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(s, c)| {
                    let k = s.grade();
                    (
                        *s,
                        signed(c, if (k * (k.wrapping_sub(1)) / 2) % 2 == 1 { -1 } else { 1 }),
                    )
                })
                .collect(),
        }
    }
}

impl<S: Scalar> fmt::Debug for Multivector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                if *k == IndexSet::EMPTY {
                    format!("{c}")
                } else {
                    let name: String = k.labels().iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",");
                    format!("{c}*e[{name}]")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;
    use proptest::prelude::*;

    type Mv = Multivector<Rat>;

    fn e(n: usize, labels: &[usize]) -> Mv {
        Mv::monomial(n, labels, Rat::one()).unwrap()
    }

    fn y(n: usize, label: usize) -> Vec<Rat> {
        (1..=n)
            .map(|i| if i == label { Rat::one() } else { Rat::zero() })
            .collect()
    }

    #[test]
    fn wedge_of_basis_vectors() {
        assert_eq!(e(3, &[1]).wedge(&e(3, &[2])).unwrap(), e(3, &[1, 2]));
        assert_eq!(e(3, &[2]).wedge(&e(3, &[1])).unwrap(), e(3, &[1, 2]).neg());
        assert!(e(3, &[1, 2]).wedge(&e(3, &[1, 3])).unwrap().is_zero());
    }

    #[test]
    fn wedge_label_mismatch() {
        assert_eq!(e(3, &[1]).wedge(&e(4, &[2])), Err(Error::LabelMismatch(3, 4)));
    }

    #[test]
    fn monomial_sorts_with_sign() {
        assert_eq!(e(4, &[3, 1, 2]), e(4, &[1, 2, 3]));
        assert_eq!(e(4, &[2, 1, 3]), e(4, &[1, 2, 3]).neg());
        assert!(e(4, &[1, 1]).is_zero());
        assert!(Mv::monomial(4, &[5], Rat::one()).is_err());
    }

    #[test]
    fn interior_examples() {
        let a = e(4, &[1, 2, 3]);
        assert_eq!(a.interior(&y(4, 1)).unwrap(), e(4, &[2, 3]));
        assert_eq!(a.interior(&y(4, 2)).unwrap(), e(4, &[1, 3]).neg());
        assert!(a.interior(&y(4, 4)).unwrap().is_zero());
        assert_eq!(a.interior_basis(1), e(4, &[1, 3]).neg());
        assert!(a.interior(&y(3, 1)).is_err());
    }

    #[test]
    fn top_coeff_examples() {
        let full = e(7, &[1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(full.top_coeff(), Rat::one());
        let a = Mv::scalar(7, Rat::one()).unwrap().add(&e(7, &[1, 2])).unwrap();
        assert_eq!(a.top_coeff(), Rat::zero());
        let b = full.scale(&"3/2".parse().unwrap()).add(&e(7, &[1])).unwrap();
        assert_eq!(b.top_coeff(), "3/2".parse().unwrap());
    }

    #[test]
    fn wedge_basis_left_matches_wedge() {
        let a = e(5, &[1, 3, 5]).add(&e(5, &[2])).unwrap();
        for p in 0..5 {
            assert_eq!(a.wedge_basis_left(p), e(5, &[p + 1]).wedge(&a).unwrap());
        }
    }

    #[test]
    fn reverse_signs() {
        assert_eq!(e(4, &[1, 2]).reverse(), e(4, &[1, 2]).neg());
        assert_eq!(e(4, &[1, 2, 3, 4]).reverse(), e(4, &[1, 2, 3, 4]));
        assert_eq!(e(4, &[1]).reverse(), e(4, &[1]));
    }

    fn arb_mv(n: usize) -> impl Strategy<Value = Mv> {
        prop::collection::vec((0u16..(1 << n), -3i64..=3), 0..6).prop_map(move |ts| {
            Mv::from_terms(n, ts.into_iter().map(|(k, c)| (IndexSet::from_bits(k), Rat::int(c)))).unwrap()
        })
    }

    fn arb_homog(n: usize) -> impl Strategy<Value = Mv> {
        (0..=n, arb_mv(n)).prop_map(|(k, a)| a.grade_part(k))
    }

    fn arb_covector(n: usize) -> impl Strategy<Value = Vec<Rat>> {
        prop::collection::vec((-3i64..=3).prop_map(Rat::int), n)
    }

    fn parity_sign(k: usize) -> Rat {
        if k % 2 == 1 {
            Rat::int(-1)
        } else {
            Rat::one()
        }
    }

    proptest! {
        #[test]
        fn wedge_is_associative(a in arb_mv(6), b in arb_mv(6), c in arb_mv(6)) {
            let l = a.wedge(&b).unwrap().wedge(&c).unwrap();
            let r = a.wedge(&b.wedge(&c).unwrap()).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn wedge_graded_commutative(a in arb_homog(7), b in arb_homog(7)) {
            let ka = a.terms().keys().next().map(|s| s.grade()).unwrap_or(0);
            let kb = b.terms().keys().next().map(|s| s.grade()).unwrap_or(0);
            let l = a.wedge(&b).unwrap();
            let r = b.wedge(&a).unwrap().scale(&parity_sign(ka * kb));
            prop_assert_eq!(l, r);
        }

        #[test]
        fn interior_is_antiderivation(a in arb_homog(6), b in arb_mv(6), c in arb_covector(6)) {
            let ka = a.terms().keys().next().map(|s| s.grade()).unwrap_or(0);
            let l = a.wedge(&b).unwrap().interior(&c).unwrap();
            let r1 = a.interior(&c).unwrap().wedge(&b).unwrap();
            let r2 = a.wedge(&b.interior(&c).unwrap()).unwrap().scale(&parity_sign(ka));
            prop_assert_eq!(l, r1.add(&r2).unwrap());
        }

        #[test]
        fn interior_squares_to_zero(a in arb_mv(8), c in arb_covector(8)) {
            prop_assert!(a.interior(&c).unwrap().interior(&c).unwrap().is_zero());
        }
    }

    #[test]
    fn graded_commutativity_exhaustive_on_basis() {
        let n = 8;
        for s in 0u16..(1 << n) {
            for t in 0u16..(1 << n) {
                let (s, t) = (IndexSet::from_bits(s), IndexSet::from_bits(t));
                let l = wedge_sign(s, t);
                let r = wedge_sign(t, s);
                if l == 0 {
                    assert_eq!(r, 0);
                } else {
                    let expect = if (s.grade() * t.grade()) % 2 == 1 { -1 } else { 1 };
                    assert_eq!(l * r, expect);
                }
            }
        }
    }
}
