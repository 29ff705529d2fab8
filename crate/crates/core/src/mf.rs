//! Spinor → three-form → self-adjoint endomorphism pipeline.
//!
//! `omega` sends a spinor to Ω_z ∈ ∧³V, `theta` contracts two three-forms
//! to an element of S²V, read as a B-self-adjoint endomorphism of V.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::{
    eval_functional, pairing_functional, terms_from_json, terms_to_json, Parity, Spinor, SplitSpace, TermJson, Vector,
};
use crate::error::{Error, Result};
use crate::exterior::{permutation_sign, IndexSet, Multivector};
use crate::matrix::Matrix;
use crate::scalar::Rat;

/// A homogeneous grade-3 multivector. For the spinor cases the labels are
/// the v-basis (e₁..e_m, f₁..f_m); for the three-form cases they are the
/// coordinates of V₇ or V₈.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ThreeFormJson", into = "ThreeFormJson")]
pub struct ThreeForm {
    mv: Multivector<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeFormJson {
    pub n: usize,
    pub terms: Vec<TermJson>,
}

impl ThreeForm {
    pub fn new(mv: Multivector<Rat>) -> Result<ThreeForm> {
        if !mv.is_homogeneous(3) {
            return Err(Error::GradeViolation(3));
        }
        Ok(ThreeForm { mv })
    }

    pub fn zero(n: usize) -> Result<ThreeForm> {
        Ok(ThreeForm {
            mv: Multivector::zero(n)?,
        })
    }

    /// Σ c·e_{abc} from 1-based label triples.
    pub fn from_terms(n: usize, terms: &[([usize; 3], i64)]) -> Result<ThreeForm> {
        let mut mv = Multivector::zero(n)?;
        for (l, c) in terms {
            mv = mv.add(&Multivector::monomial(n, l, Rat::int(*c))?)?;
        }
        ThreeForm::new(mv)
    }

    pub fn n(&self) -> usize {
        self.mv.n()
    }

    pub fn mv(&self) -> &Multivector<Rat> {
        &self.mv
    }

    pub fn is_zero(&self) -> bool {
        self.mv.is_zero()
    }

    pub fn scale(&self, t: &Rat) -> ThreeForm {
        ThreeForm { mv: self.mv.scale(t) }
    }

    pub fn add(&self, o: &ThreeForm) -> Result<ThreeForm> {
        Ok(ThreeForm {
            mv: self.mv.add(&o.mv)?,
        })
    }

    pub fn sub(&self, o: &ThreeForm) -> Result<ThreeForm> {
        Ok(ThreeForm {
            mv: self.mv.sub(&o.mv)?,
        })
    }
}

impl std::fmt::Debug for ThreeForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ThreeForm({:?})", self.mv)
    }
}

impl From<ThreeForm> for ThreeFormJson {
    fn from(t: ThreeForm) -> ThreeFormJson {
        ThreeFormJson {
            n: t.mv.n(),
            terms: terms_to_json(&t.mv),
        }
    }
}

impl TryFrom<ThreeFormJson> for ThreeForm {
    type Error = Error;

    fn try_from(j: ThreeFormJson) -> Result<ThreeForm> {
        ThreeForm::new(terms_from_json(j.n, &j.terms)?)
    }
}

/// An endomorphism of V₂ₘ in the v-basis, B-self-adjoint by construction.
#[derive(Clone, PartialEq, Debug)]
pub struct SymEndo {
    pub space: SplitSpace,
    pub matrix: Matrix<Rat>,
}

impl SymEndo {
    pub fn zero(space: SplitSpace) -> SymEndo {
        SymEndo {
            space,
            matrix: Matrix::zeros(space.dim(), space.dim()),
        }
    }

    pub fn scale(&self, t: &Rat) -> SymEndo {
        SymEndo {
            space: self.space,
            matrix: self.matrix.scale(t),
        }
    }

    /// G·M = Mᵀ·G.
    pub fn is_self_adjoint(&self) -> bool {
        let g = self.space.gram();
        g.mul(&self.matrix).expect("square") == self.matrix.transpose().mul(&g).expect("square")
    }

    pub fn square(&self) -> Matrix<Rat> {
        self.matrix.mul(&self.matrix).expect("square")
    }

    pub fn trace(&self) -> Rat {
        self.matrix.trace()
    }
}

fn triple_sign_monomial(n: usize, pos: [usize; 3], c: Rat) -> (IndexSet, Rat) {
    debug_assert!(pos.iter().all(|&p| p < n));
    let sign = permutation_sign(&pos);
    (IndexSet::from_positions(&pos), if sign < 0 { -c } else { c })
}

/// Antisymmetrized coefficients ⟨s₁, v_[i v_j v_k] s₂⟩ for i < j < k,
/// keyed by the v-index set {i, j, k}.
///
/// The antisymmetrization subtracts the B-traces of the ordered product
/// v_i v_j v_k: ½B(v_i,v_j)v_k − ½B(v_i,v_k)v_j + ½B(v_j,v_k)v_i.
pub fn triple_coeffs(s1: &Spinor, s2: &Spinor) -> Result<BTreeMap<IndexSet, Rat>> {
    let space = s1.space();
    if space != s2.space() {
        return Err(Error::SpaceMismatch(space.m(), s2.space().m()));
    }
    let n = space.dim();
    let functional = pairing_functional(s1);
    let single: Vec<Rat> = (0..n).map(|r| eval_functional(&functional, &s2.act_basis(r))).collect();
    let half = Rat::new(1, 2);

    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|k| (0..k).map(move |j| (j, k))).collect();
    let chunks: Vec<Vec<(IndexSet, Rat)>> = pairs
        .par_iter()
        .map(|&(j, k)| {
            let jk = s2.act_basis(k).act_basis(j);
            let mut out = Vec::new();
            for i in 0..j {
                let mut c = eval_functional(&functional, &jk.act_basis(i));
                if space.b_basis(i, j) != 0 {
                    c -= &half * &single[k];
                }
                if space.b_basis(i, k) != 0 {
                    c += &half * &single[j];
                }
                if space.b_basis(j, k) != 0 {
                    c -= &half * &single[i];
                }
                if !c.is_zero() {
                    out.push((IndexSet::from_positions(&[i, j, k]), c));
                }
            }
            out
        })
        .collect();
    // Keys are distinct, so the map does not depend on collection order.
    Ok(chunks.into_iter().flatten().collect())
}

/// Ω(s₁, s₂) = Σ_{i<j<k} ⟨s₁, v_[i v_j v_k] s₂⟩ w_i∧w_j∧w_k in v-coordinates.
pub fn omega_pair(s1: &Spinor, s2: &Spinor) -> Result<ThreeForm> {
    let space = s1.space();
    let n = space.dim();
    let mut mv = Multivector::zero(n)?;
    for (set, c) in triple_coeffs(s1, s2)? {
        let p: Vec<usize> = set.positions().map(|k| space.dual_index(k)).collect();
        let (k, v) = triple_sign_monomial(n, [p[0], p[1], p[2]], c);
        mv.add_term(k, v);
    }
    ThreeForm::new(mv)
}

pub fn omega(z: &Spinor) -> Result<ThreeForm> {
    if z.parity() != Parity::Even {
        return Err(Error::ParityMismatch("omega needs an even spinor".into()));
    }
    omega_pair(z, z)
}

fn check_space(space: SplitSpace, n: usize) -> Result<()> {
    if n != space.dim() {
        Err(Error::LabelMismatch(space.dim(), n))
    } else {
        Ok(())
    }
}

/// Bilinear extension of q₂(u₁∧u₂, w₁∧w₂) = det[B(uᵢ, wⱼ)].
pub fn q2(space: SplitSpace, alpha: &Multivector<Rat>, beta: &Multivector<Rat>) -> Result<Rat> {
    check_space(space, alpha.n())?;
    check_space(space, beta.n())?;
    if !alpha.is_homogeneous(2) || !beta.is_homogeneous(2) {
        return Err(Error::GradeViolation(2));
    }
    let mut total = Rat::zero();
    for (s, x) in alpha.iter() {
        let ab: Vec<usize> = s.positions().collect();
        let (a, b) = (ab[0], ab[1]);
        // B is a perfect pairing of basis vectors, so only one β-term can contribute.
        let key = IndexSet::from_positions(&[space.dual_index(a), space.dual_index(b)]);
        let Some(y) = beta.terms().get(&key) else {
            continue;
        };
        let cd: Vec<usize> = key.positions().collect();
        let (c, d) = (cd[0], cd[1]);
        let det = space.b_basis(a, c) * space.b_basis(b, d) - space.b_basis(a, d) * space.b_basis(b, c);
        if det != 0 {
            total += Rat::int(det) * x * y;
        }
    }
    Ok(total)
}

/// x∧y∧z ↦ x⊗(y∧z) − y⊗(x∧z) + z⊗(x∧y), grouped by the V-slot index.
pub fn comultiply(t: &ThreeForm) -> Vec<Multivector<Rat>> {
    let n = t.n();
    let mut out = vec![Multivector::zero(n).expect("n ≤ 16"); n];
    for (s, c) in t.mv.iter() {
        let p: Vec<usize> = s.positions().collect();
        let (a, b, d) = (p[0], p[1], p[2]);
        out[a].add_term(IndexSet::from_positions(&[b, d]), c.clone());
        out[b].add_term(IndexSet::from_positions(&[a, d]), -c);
        out[d].add_term(IndexSet::from_positions(&[a, b]), c.clone());
    }
    out
}

/// Θ(T₁, T₂): contract the ∧² slots with q₂, symmetrize, and turn S²V into
/// an endomorphism via x⊗y ↦ (u ↦ B(y, u)·x).
pub fn theta(space: SplitSpace, t1: &ThreeForm, t2: &ThreeForm) -> Result<SymEndo> {
    check_space(space, t1.n())?;
    check_space(space, t2.n())?;
    let n = space.dim();
    let a = comultiply(t1);
    let b = comultiply(t2);
    let mut c = Matrix::<Rat>::zeros(n, n);
    for u in 0..n {
        if a[u].is_zero() {
            continue;
        }
        for w in 0..n {
            if b[w].is_zero() {
                continue;
            }
            let v = q2(space, &a[u], &b[w])?;
            if !v.is_zero() {
                c.set(u, w, v);
            }
        }
    }
    let sym = c.add(&c.transpose())?.scale(&Rat::new(1, 2));
    Ok(SymEndo {
        space,
        matrix: sym.mul(&space.gram())?,
    })
}

/// norm · Θ(Ω_z, Ω_z).
pub fn mmatrix(z: &Spinor, norm: &Rat) -> Result<SymEndo> {
    let om = omega(z)?;
    Ok(theta(z.space(), &om, &om)?.scale(norm))
}

/// The double sum Σ_{i<j} ⟨z, v_i v_j v_k z⟩⟨z, w_i w_j w_ℓ z⟩ w_k⊗v_ℓ,
/// evaluated literally and read as an endomorphism.
pub fn mmatrix_direct(z: &Spinor) -> Result<SymEndo> {
    if z.parity() != Parity::Even {
        return Err(Error::ParityMismatch("mmatrix_direct needs an even spinor".into()));
    }
    let space = z.space();
    let n = space.dim();
    let coeffs = triple_coeffs(z, z)?;
    let c = |a: usize, b: usize, d: usize| -> Rat {
        if a == b || a == d || b == d {
            return Rat::zero();
        }
        let set = IndexSet::from_positions(&[a, b, d]);
        match coeffs.get(&set) {
            Some(v) if permutation_sign(&[a, b, d]) < 0 => -v,
            Some(v) => v.clone(),
            None => Rat::zero(),
        }
    };
    let star = |k: usize| space.dual_index(k);
    let mut out = Matrix::<Rat>::zeros(n, n);
    for k in 0..n {
        for l in 0..n {
            let mut d = Rat::zero();
            for i in 0..n {
                if i == k || i == l {
                    continue;
                }
                for j in i + 1..n {
                    if j == k || j == l {
                        continue;
                    }
                    let x = c(i, j, k);
                    if x.is_zero() {
                        continue;
                    }
                    let y = c(star(i), star(j), star(l));
                    if !y.is_zero() {
                        d += x * y;
                    }
                }
            }
            // w_k ⊗ v_ℓ: column c picks up B(v_ℓ, v_c), nonzero only at c = ℓ*.
            if !d.is_zero() {
                out.add_at(star(k), star(l), &d);
            }
        }
    }
    Ok(SymEndo { space, matrix: out })
}

/// tr(M²)/dim.
pub fn mf_scalar(m: &SymEndo) -> Rat {
    m.square().trace() / Rat::int(m.space.dim() as i64)
}

/// The rational `norm` with norm·raw(e_k) = target·e_k; raw must map e_k to a
/// nonzero multiple of itself.
pub fn calibrate_norm(raw: &SymEndo, k: usize, target: &Rat) -> Result<Rat> {
    let col = raw.matrix.col(k);
    let diag = &col[k];
    if diag.is_zero() || col.iter().enumerate().any(|(i, x)| i != k && !x.is_zero()) {
        return Err(Error::Degenerate(format!(
            "calibration vector {} is not an eigenvector",
            raw.space.label(k)
        )));
    }
    Ok(target / diag)
}

/// B-orthogonal projector onto span(basis) (B must be nondegenerate on it):
/// π = U (UᵀGU)⁻¹ UᵀG.
pub fn orthogonal_projector(space: SplitSpace, basis: &[Vector]) -> Result<Matrix<Rat>> {
    let n = space.dim();
    let u = Matrix::from_cols(&basis.iter().map(|v| v.coords().to_vec()).collect::<Vec<_>>(), n);
    let g = space.gram();
    let ut_g = u.transpose().mul(&g)?;
    let gram_u = ut_g.mul(&u)?;
    u.mul(&gram_u.inverse()?)?.mul(&ut_g)
}

/// One symmetric-square term of an S²V expression.
#[derive(Debug, Clone)]
pub enum SymTerm {
    /// x² ↦ x⊗B(x, ·)
    Square(Vector),
    /// xy ↦ x⊗B(y, ·) + y⊗B(x, ·)
    Product(Vector, Vector),
}

/// Endomorphism of Σ cᵢ·termᵢ.
pub fn sym_to_endo(space: SplitSpace, terms: &[(Rat, SymTerm)]) -> Result<Matrix<Rat>> {
    let n = space.dim();
    let g = space.gram();
    let mut out = Matrix::zeros(n, n);
    let mut rank_one = |c: &Rat, x: &Vector, y: &Vector| -> Result<()> {
        let yg = g.apply(y.coords())?;
        for r in 0..n {
            for col in 0..n {
                let v = c * &x.coords()[r] * &yg[col];
                if !v.is_zero() {
                    out.add_at(r, col, &v);
                }
            }
        }
        Ok(())
    };
    for (c, t) in terms {
        match t {
            SymTerm::Square(x) => rank_one(c, x, x)?,
            SymTerm::Product(x, y) => {
                rank_one(c, x, y)?;
                rank_one(c, y, x)?;
            }
        }
    }
    Ok(out)
}

/// Some(c) when M² = c·Id.
pub fn is_matrix_factorization(m: &SymEndo) -> Option<Rat> {
    m.square().scalar_value()
}
