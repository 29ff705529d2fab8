//! The split quadratic space V₂ₘ = E ⊕ F and its Clifford action on ∧*E.
//!
//! E acts by wedge and F by plain interior contraction, so
//! xy + yx = B(x, y) and x·x = N(x) with N(x) = q(x)/2 = B(x, x)/2.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{IndexSet, Multivector};
use crate::matrix::Matrix;
use crate::scalar::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitSpace {
    m: usize,
}

impl SplitSpace {
    pub fn new(m: usize) -> Result<SplitSpace> {
        if !(3..=7).contains(&m) {
            return Err(Error::UnsupportedRank(m));
        }
        Ok(SplitSpace { m })
    }

    pub fn m(self) -> usize {
        self.m
    }

    pub fn dim(self) -> usize {
        2 * self.m
    }

    /// Index in the w-basis (f₁..f_m, e₁..e_m) of the vector dual to v-basis index k.
    pub fn dual_index(self, k: usize) -> usize {
        if k < self.m {
            k + self.m
        } else {
            k - self.m
        }
    }

    /// Gram matrix of B in the v-basis (e₁..e_m, f₁..f_m).
    pub fn gram(self) -> Matrix<Rat> {
        let n = self.dim();
        let mut g = Matrix::zeros(n, n);
        for i in 0..self.m {
            g.set(i, i + self.m, Rat::one());
            g.set(i + self.m, i, Rat::one());
        }
        g
    }

    /// B on v-basis indices.
    pub fn b_basis(self, a: usize, b: usize) -> i64 {
        if self.dual_index(a) == b {
            1
        } else {
            0
        }
    }

    /// Human-readable name of a v-basis index: e1..em, f1..fm.
    pub fn label(self, k: usize) -> String {
        if k < self.m {
            format!("e{}", k + 1)
        } else {
            format!("f{}", k - self.m + 1)
        }
    }

    fn check(self, other: SplitSpace) -> Result<()> {
        if self.m != other.m {
            Err(Error::SpaceMismatch(self.m, other.m))
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vector {
    space: SplitSpace,
    coords: Vec<Rat>,
}

impl Vector {
    pub fn zero(space: SplitSpace) -> Vector {
        Vector {
            space,
            coords: vec![Rat::zero(); space.dim()],
        }
    }

    pub fn from_coords(space: SplitSpace, coords: Vec<Rat>) -> Result<Vector> {
        if coords.len() != space.dim() {
            return Err(Error::LengthMismatch {
                expected: space.dim(),
                got: coords.len(),
            });
        }
        Ok(Vector { space, coords })
    }

    pub fn from_ints(space: SplitSpace, coords: &[i64]) -> Result<Vector> {
        Vector::from_coords(space, coords.iter().map(|&c| Rat::int(c)).collect())
    }

    /// v-basis vector with 0-based index k.
    pub fn basis(space: SplitSpace, k: usize) -> Vector {
        let mut v = Vector::zero(space);
        v.coords[k] = Rat::one();
        v
    }

    /// e_i, 1-based.
    pub fn e(space: SplitSpace, i: usize) -> Vector {
        Vector::basis(space, i - 1)
    }

    /// f_i, 1-based.
    pub fn f(space: SplitSpace, i: usize) -> Vector {
        Vector::basis(space, space.m + i - 1)
    }

    pub fn space(&self) -> SplitSpace {
        self.space
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn e_part(&self) -> &[Rat] {
        &self.coords[..self.space.m]
    }

    pub fn f_part(&self) -> &[Rat] {
        &self.coords[self.space.m..]
    }

    pub fn add(&self, o: &Vector) -> Result<Vector> {
        self.space.check(o.space)?;
        Ok(Vector {
            space: self.space,
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, o: &Vector) -> Result<Vector> {
        self.space.check(o.space)?;
        Ok(Vector {
            space: self.space,
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, t: &Rat) -> Vector {
        Vector {
            space: self.space,
            coords: self.coords.iter().map(|a| a * t).collect(),
        }
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("{c}*{}", self.space.label(k)))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// B(x, y) = Σᵢ (x_{eᵢ} y_{fᵢ} + x_{fᵢ} y_{eᵢ}).
pub fn bform(x: &Vector, y: &Vector) -> Result<Rat> {
    x.space.check(y.space)?;
    let m = x.space.m;
    let mut s = Rat::zero();
    for i in 0..m {
        s += &x.coords[i] * &y.coords[m + i];
        s += &x.coords[m + i] * &y.coords[i];
    }
    Ok(s)
}

pub fn qform(x: &Vector) -> Rat {
    bform(x, x).expect("same space")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_grade(k: usize) -> Parity {
        if k.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// An element of ∧*E of fixed parity.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpinorJson", into = "SpinorJson")]
pub struct Spinor {
    space: SplitSpace,
    parity: Parity,
    body: Multivector<Rat>,
}

impl Spinor {
    pub fn zero(space: SplitSpace, parity: Parity) -> Spinor {
        Spinor {
            space,
            parity,
            body: Multivector::zero(space.m).expect("m ≤ 7"),
        }
    }

    pub fn vacuum(space: SplitSpace) -> Spinor {
        Spinor::from_multivector(space, Multivector::scalar(space.m, Rat::one()).expect("m ≤ 7")).expect("even")
    }

    /// Infers the parity from the terms; the zero multivector is taken as even.
    pub fn from_multivector(space: SplitSpace, body: Multivector<Rat>) -> Result<Spinor> {
        if body.n() != space.m {
            return Err(Error::LabelMismatch(space.m, body.n()));
        }
        let parity = body
            .terms()
            .keys()
            .next()
            .map_or(Parity::Even, |k| Parity::of_grade(k.grade()));
        Spinor::with_parity(space, parity, body)
    }

    pub fn with_parity(space: SplitSpace, parity: Parity, body: Multivector<Rat>) -> Result<Spinor> {
        if body.n() != space.m {
            return Err(Error::LabelMismatch(space.m, body.n()));
        }
        if body.terms().keys().any(|k| Parity::of_grade(k.grade()) != parity) {
            return Err(Error::ParityMismatch(format!(
                "terms of mixed parity in a {parity:?} spinor"
            )));
        }
        Ok(Spinor { space, parity, body })
    }

    /// Σ c·e_S from 1-based label lists.
    pub fn from_terms(space: SplitSpace, terms: &[(&[usize], Rat)]) -> Result<Spinor> {
        let mut body = Multivector::zero(space.m)?;
        for (labels, c) in terms {
            body = body.add(&Multivector::monomial(space.m, labels, c.clone())?)?;
        }
        Spinor::from_multivector(space, body)
    }

    pub fn space(&self) -> SplitSpace {
        self.space
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn body(&self) -> &Multivector<Rat> {
        &self.body
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn scale(&self, t: &Rat) -> Spinor {
        Spinor {
            space: self.space,
            parity: self.parity,
            body: self.body.scale(t),
        }
    }

    pub fn add(&self, o: &Spinor) -> Result<Spinor> {
        self.space.check(o.space)?;
        if self.parity != o.parity {
            return Err(Error::ParityMismatch("adding spinors of opposite parity".into()));
        }
        Ok(Spinor {
            space: self.space,
            parity: self.parity,
            body: self.body.add(&o.body)?,
        })
    }

    pub fn sub(&self, o: &Spinor) -> Result<Spinor> {
        self.add(&o.scale(&Rat::int(-1)))
    }

    /// Action of the v-basis vector with 0-based index k.
    pub fn act_basis(&self, k: usize) -> Spinor {
        let m = self.space.m;
        let body = if k < m {
            self.body.wedge_basis_left(k)
        } else {
            self.body.interior_basis(k - m)
        };
        Spinor {
            space: self.space,
            parity: self.parity.flip(),
            body,
        }
    }
}

impl fmt::Debug for Spinor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Spinor[m={}, {:?}]({:?})", self.space.m, self.parity, self.body)
    }
}

/// Clifford action: E-part by wedge, F-part by interior contraction.
pub fn cl_act(x: &Vector, s: &Spinor) -> Result<Spinor> {
    x.space.check(s.space)?;
    let m = x.space.m;
    let mut body = s.body.interior(x.f_part())?;
    for i in 0..m {
        let c = &x.coords[i];
        if !c.is_zero() {
            body.axpy(c, &s.body.wedge_basis_left(i))?;
        }
    }
    Ok(Spinor {
        space: s.space,
        parity: s.parity.flip(),
        body,
    })
}

/// scale · x₁·(x₂·(…(x_k·s))): the last letter acts first.
pub fn cl_word(xs: &[Vector], scale: &Rat, s: &Spinor) -> Result<Spinor> {
    let mut out = s.clone();
    for x in xs.iter().rev() {
        out = cl_act(x, &out)?;
    }
    Ok(out.scale(scale))
}

/// Invariant pairing top(rev(s) ∧ t); satisfies spair(x·s, t) = spair(s, x·t).
pub fn spair(s: &Spinor, t: &Spinor) -> Result<Rat> {
    s.space.check(t.space)?;
    Ok(s.body.reverse().wedge(&t.body)?.top_coeff())
}

/// The linear functional t ↦ spair(s, t), stored as coefficients on e_T.
pub fn pairing_functional(s: &Spinor) -> std::collections::BTreeMap<IndexSet, Rat> {
    let full = IndexSet::full(s.space.m);
    s.body
        .reverse()
        .iter()
        .map(|(k, c)| {
            let comp = IndexSet::from_bits(full.bits() & !k.bits());
            let sign = crate::exterior::wedge_sign(*k, comp);
            (comp, if sign < 0 { -c } else { c.clone() })
        })
        .collect()
}

/// Evaluates a functional from `pairing_functional` on t.
pub fn eval_functional(f: &std::collections::BTreeMap<IndexSet, Rat>, t: &Spinor) -> Rat {
    let mut s = Rat::zero();
    for (k, c) in t.body.iter() {
        if let Some(x) = f.get(k) {
            s += x * c;
        }
    }
    s
}

/// Matrix (in the v-basis) of x ↦ g x g⁻¹ for the word g = x₁…x_k.
///
/// Each letter contributes x ↦ (2B(v,x)/q(v))·v − x; the last letter is
/// applied first.
pub fn conj_map(space: SplitSpace, xs: &[Vector]) -> Result<Matrix<Rat>> {
    let n = space.dim();
    let mut total = Matrix::identity(n);
    for v in xs {
        space.check(v.space)?;
        let q = qform(v);
        if q.is_zero() {
            return Err(Error::IsotropicLetter);
        }
        let mut c = Matrix::zeros(n, n);
        for col in 0..n {
            let x = Vector::basis(space, col);
            let t = Rat::int(2) * bform(v, &x)? / &q;
            for row in 0..n {
                let mut val = &t * &v.coords[row];
                if row == col {
                    val -= Rat::one();
                }
                c.set(row, col, val);
            }
        }
        total = total.mul(&c)?;
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub indices: Vec<usize>,
    pub coeff: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinorJson {
    pub m: usize,
    pub parity: Parity,
    pub terms: Vec<TermJson>,
}

pub fn terms_to_json(mv: &Multivector<Rat>) -> Vec<TermJson> {
    mv.iter()
        .map(|(k, c)| TermJson {
            indices: k.labels(),
            coeff: c.clone(),
        })
        .collect()
}

pub fn terms_from_json(n: usize, terms: &[TermJson]) -> Result<Multivector<Rat>> {
    let mut mv = Multivector::zero(n)?;
    for t in terms {
        mv = mv.add(&Multivector::monomial(n, &t.indices, t.coeff.clone())?)?;
    }
    Ok(mv)
}

impl From<Spinor> for SpinorJson {
    fn from(s: Spinor) -> SpinorJson {
        SpinorJson {
            m: s.space.m,
            parity: s.parity,
            terms: terms_to_json(&s.body),
        }
    }
}

impl TryFrom<SpinorJson> for Spinor {
    type Error = Error;

    fn try_from(j: SpinorJson) -> Result<Spinor> {
        let space = SplitSpace::new(j.m)?;
        let body = terms_from_json(j.m, &j.terms)?;
        Spinor::with_parity(space, j.parity, body)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sp7() -> SplitSpace {
        SplitSpace::new(7).unwrap()
    }

    fn sp(labels: &[usize]) -> Spinor {
        Spinor::from_terms(sp7(), &[(labels, Rat::one())]).unwrap()
    }

    #[test]
    fn bform_examples() {
        let s = sp7();
        assert_eq!(bform(&Vector::e(s, 1), &Vector::f(s, 1)).unwrap(), Rat::one());
        assert_eq!(bform(&Vector::e(s, 1), &Vector::e(s, 2)).unwrap(), Rat::zero());
        let e0 = Vector::e(s, 7).sub(&Vector::f(s, 7)).unwrap();
        assert_eq!(qform(&e0), Rat::int(-2));
        let other = SplitSpace::new(5).unwrap();
        assert!(bform(&Vector::e(s, 1), &Vector::e(other, 1)).is_err());
    }

    #[test]
    fn cl_act_examples() {
        let s = sp7();
        let one = Spinor::vacuum(s);
        assert_eq!(cl_act(&Vector::e(s, 1), &one).unwrap(), sp(&[1]));
        assert_eq!(cl_act(&Vector::f(s, 1), &sp(&[1])).unwrap(), one);
        let x = Vector::e(s, 1).add(&Vector::f(s, 1)).unwrap();
        // (e₁ + f₁)·(e₁ + 1) = e₁ + 1
        let t = Spinor::with_parity(s, Parity::Odd, sp(&[1]).body().clone()).unwrap();
        assert_eq!(cl_act(&x, &t).unwrap(), one);
        assert_eq!(cl_act(&x, &one).unwrap(), sp(&[1]));
    }

    #[test]
    fn cl_word_order() {
        let s = sp7();
        let one = Spinor::vacuum(s);
        let w1 = [Vector::e(s, 1), Vector::f(s, 1)];
        assert!(cl_word(&w1, &Rat::one(), &one).unwrap().is_zero());
        let w2 = [Vector::f(s, 1), Vector::e(s, 1)];
        assert_eq!(cl_word(&w2, &Rat::one(), &one).unwrap(), one);
        assert_eq!(cl_word(&[], &Rat::one(), &sp(&[1, 2])).unwrap(), sp(&[1, 2]));
    }

    #[test]
    fn spair_examples() {
        assert_eq!(
            spair(&Spinor::vacuum(sp7()), &sp(&[1, 2, 3, 4, 5, 6, 7])).unwrap(),
            Rat::one()
        );
        assert_eq!(spair(&sp(&[1, 2]), &sp(&[3, 4, 5, 6, 7])).unwrap(), Rat::int(-1));
        assert_eq!(spair(&sp(&[1, 2]), &sp(&[1, 2, 3, 4, 5])).unwrap(), Rat::zero());
    }

    #[test]
    fn pairing_functional_agrees() {
        let z = Spinor::from_terms(
            sp7(),
            &[(&[], Rat::one()), (&[1, 2, 3, 7], Rat::int(2)), (&[4, 5], Rat::int(-3))],
        )
        .unwrap();
        let f = pairing_functional(&z);
        for t in [sp(&[4, 5, 6, 7]), sp(&[1, 2, 3, 6, 7]), sp(&[1, 2, 3, 4, 5, 6, 7])] {
            assert_eq!(eval_functional(&f, &t), spair(&z, &t).unwrap());
        }
    }

    #[test]
    fn conj_map_examples() {
        let s = sp7();
        assert_eq!(conj_map(s, &[]).unwrap(), Matrix::identity(14));
        let v = Vector::e(s, 1).add(&Vector::f(s, 1)).unwrap();
        let c = conj_map(s, std::slice::from_ref(&v)).unwrap();
        assert_eq!(c.col(0), Vector::f(s, 1).coords().to_vec());
        let g = s.gram();
        assert_eq!(c.transpose().mul(&g).unwrap().mul(&c).unwrap(), g);
        let iso = Vector::e(s, 1);
        assert_eq!(conj_map(s, &[iso]), Err(Error::IsotropicLetter));
    }

    #[test]
    fn json_shape() {
        let z = sp(&[1, 2, 3, 7]);
        let j = serde_json::to_string(&z).unwrap();
        assert_eq!(
            j,
            r#"{"m":7,"parity":"even","terms":[{"indices":[1,2,3,7],"coeff":"1"}]}"#
        );
        let back: Spinor = serde_json::from_str(&j).unwrap();
        assert_eq!(back, z);
        let bad = r#"{"m":7,"parity":"odd","terms":[{"indices":[1,2],"coeff":"1"}]}"#;
        assert!(serde_json::from_str::<Spinor>(bad).is_err());
    }

    fn arb_vec() -> impl Strategy<Value = Vector> {
        prop::collection::vec(-3i64..=3, 14).prop_map(|c| Vector::from_ints(sp7(), &c).unwrap())
    }

    fn arb_spinor() -> impl Strategy<Value = Spinor> {
        prop::collection::vec((0u16..128, -3i64..=3), 0..8).prop_map(|ts| {
            let body = Multivector::from_terms(
                7,
                ts.into_iter()
                    .filter(|(k, _)| k.count_ones() % 2 == 0)
                    .map(|(k, c)| (IndexSet::from_bits(k), Rat::int(c))),
            )
            .unwrap();
            Spinor::with_parity(sp7(), Parity::Even, body).unwrap()
        })
    }

    proptest! {
        #[test]
        fn clifford_relation(x in arb_vec(), y in arb_vec(), s in arb_spinor()) {
            let xy = cl_act(&x, &cl_act(&y, &s).unwrap()).unwrap();
            let yx = cl_act(&y, &cl_act(&x, &s).unwrap()).unwrap();
            let b = bform(&x, &y).unwrap();
            prop_assert_eq!(xy.add(&yx).unwrap(), s.scale(&b));
        }

        #[test]
        fn pairing_is_invariant(x in arb_vec(), s in arb_spinor(), t in arb_spinor()) {
            let t = cl_act(&x, &t).unwrap();
            let l = spair(&cl_act(&x, &s).unwrap(), &t).unwrap();
            let r = spair(&s, &cl_act(&x, &t).unwrap()).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn conj_map_is_orthogonal(a in arb_vec(), b in arb_vec()) {
            prop_assume!(!qform(&a).is_zero() && !qform(&b).is_zero());
            let s = sp7();
            let c = conj_map(s, &[a, b]).unwrap();
            let g = s.gram();
            prop_assert_eq!(c.transpose().mul(&g).unwrap().mul(&c).unwrap(), g);
        }
    }
}
