//! GL(V) actions on forms over a single sort of labels.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exterior::{wedge_sign, IndexSet, Multivector};
use crate::matrix::Matrix;
use crate::scalar::Rat;

/// E_{qp}·w for the elementary endomorphism e_p ↦ e_q (0-based), acting as a
/// derivation: e_q ∧ i_{y_p}(w).
pub fn derivation(w: &Multivector<Rat>, q: usize, p: usize) -> Multivector<Rat> {
    w.interior_basis(p).wedge_basis_left(q)
}

/// X·w for X ∈ gl(V) acting by derivations, with X e_p = Σ_q X[q][p] e_q.
pub fn gl_action(x: &Matrix<Rat>, w: &Multivector<Rat>) -> Result<Multivector<Rat>> {
    let n = w.n();
    if x.rows() != n || x.cols() != n {
        return Err(Error::LabelMismatch(n, x.rows()));
    }
    let mut out = Multivector::zero(n)?;
    for p in 0..n {
        let contracted = w.interior_basis(p);
        if contracted.is_zero() {
            continue;
        }
        for q in 0..n {
            let c = x.get(q, p);
            if !c.is_zero() {
                out.axpy(c, &contracted.wedge_basis_left(q))?;
            }
        }
    }
    Ok(out)
}

/// ∧g·w: each e_{a₁…a_k} goes to g e_{a₁} ∧ … ∧ g e_{a_k}.
pub fn wedge_power(g: &Matrix<Rat>, w: &Multivector<Rat>) -> Result<Multivector<Rat>> {
    let n = w.n();
    if g.rows() != n || g.cols() != n {
        return Err(Error::LabelMismatch(n, g.rows()));
    }
    let images: Vec<Multivector<Rat>> = (0..n)
        .map(|j| {
            Multivector::from_terms(n, (0..n).map(|i| (IndexSet::singleton(i), g.get(i, j).clone()))).expect("n ≤ 16")
        })
        .collect();
    let mut out = Multivector::zero(n)?;
    for (s, c) in w.iter() {
        let mut term = Multivector::scalar(n, c.clone())?;
        for p in s.positions() {
            term = term.wedge(&images[p])?;
        }
        out = out.add(&term)?;
    }
    Ok(out)
}

/// The functional β ↦ top(w ∧ β), stored by the index set of β.
pub fn top_functional(w: &Multivector<Rat>) -> BTreeMap<IndexSet, Rat> {
    let full = IndexSet::full(w.n());
    let mut out = BTreeMap::new();
    for (s, c) in w.iter() {
        let comp = IndexSet::from_bits(full.bits() & !s.bits());
        let v = if wedge_sign(*s, comp) < 0 { -c } else { c.clone() };
        out.insert(comp, v);
    }
    out
}

/// Evaluates a functional on a multivector.
pub fn evaluate(f: &BTreeMap<IndexSet, Rat>, b: &Multivector<Rat>) -> Rat {
    let mut s = Rat::zero();
    for (k, c) in b.iter() {
        if let Some(x) = f.get(k) {
            s += x * c;
        }
    }
    s
}

/// Covector y_a as a coefficient list.
pub fn dual_basis(n: usize, a: usize) -> Vec<Rat> {
    (0..n).map(|i| if i == a { Rat::one() } else { Rat::zero() }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, labels: &[usize]) -> Multivector<Rat> {
        Multivector::monomial(n, labels, Rat::one()).unwrap()
    }

    #[test]
    fn derivation_replaces_label() {
        // E_{4,2}: e₂ ↦ e₄ on e₁₂₃ gives e₁₄₃ = −e₁₃₄
        let w = e(5, &[1, 2, 3]);
        assert_eq!(derivation(&w, 3, 1), e(5, &[1, 3, 4]).scale(&Rat::int(-1)));
        assert!(derivation(&w, 2, 1).is_zero());
    }

    #[test]
    fn identity_acts_by_degree() {
        let w = e(6, &[1, 2, 3]).add(&e(6, &[2, 5, 6])).unwrap();
        let id = Matrix::identity(6);
        assert_eq!(gl_action(&id, &w).unwrap(), w.scale(&Rat::int(3)));
        assert_eq!(wedge_power(&id, &w).unwrap(), w);
    }

    #[test]
    fn wedge_power_of_swap() {
        let mut g = Matrix::<Rat>::zeros(3, 3);
        g.set(1, 0, Rat::one());
        g.set(0, 1, Rat::one());
        g.set(2, 2, Rat::one());
        assert_eq!(
            wedge_power(&g, &e(3, &[1, 2, 3])).unwrap(),
            e(3, &[1, 2, 3]).scale(&Rat::int(-1))
        );
    }

    #[test]
    fn top_functional_matches_wedge() {
        let w = e(7, &[1, 2, 3]).add(&e(7, &[2, 4, 6])).unwrap();
        let f = top_functional(&w);
        for b in [e(7, &[4, 5, 6, 7]), e(7, &[1, 3, 5, 7]), e(7, &[1, 2, 3, 4])] {
            assert_eq!(evaluate(&f, &b), w.wedge(&b).unwrap().top_coeff());
        }
    }
}
