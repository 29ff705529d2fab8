//! The heptic semi-invariant of ∧³V₇ and its symmetric factorization (P, R).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{derivation, evaluate, top_functional, wedge_power};
use crate::matrix::Matrix;
use crate::mf::ThreeForm;
use crate::scalar::Rat;

pub const N: usize = 7;

fn check(w: &ThreeForm) -> Result<()> {
    if w.n() != N {
        return Err(Error::LabelMismatch(N, w.n()));
    }
    Ok(())
}

/// ω* = e₁₂₃ + e₁₄₅ + e₁₆₇ + e₂₄₆ − e₂₅₇ − e₃₄₇ − e₃₅₆.
pub fn associative_form() -> ThreeForm {
    ThreeForm::from_terms(
        N,
        &[
            ([1, 2, 3], 1),
            ([1, 4, 5], 1),
            ([1, 6, 7], 1),
            ([2, 4, 6], 1),
            ([2, 5, 7], -1),
            ([3, 4, 7], -1),
            ([3, 5, 6], -1),
        ],
    )
    .expect("grade 3")
}

/// P[a][b] = (1/6)·top(ω ∧ i_a ω ∧ i_b ω).
pub fn pmat(w: &ThreeForm) -> Result<Matrix<Rat>> {
    check(w)?;
    let mv = w.mv();
    let contractions: Vec<_> = (0..N).map(|a| mv.interior_basis(a)).collect();
    let sixth = Rat::new(1, 6);
    let mut p = Matrix::zeros(N, N);
    for a in 0..N {
        let left = mv.wedge(&contractions[a])?;
        for b in a..N {
            let v = left.wedge(&contractions[b])?.top_coeff() * &sixth;
            p.set(a, b, v.clone());
            p.set(b, a, v);
        }
    }
    Ok(p)
}

/// A_a[p][q] = top(ω ∧ e_a ∧ E_{qp}·ω), E_{qp}: e_p ↦ e_q.
pub fn theta7(w: &ThreeForm) -> Result<Vec<Matrix<Rat>>> {
    check(w)?;
    let mv = w.mv();
    let xi = top_functional(mv);
    let moved: Vec<Vec<_>> = (0..N).map(|p| (0..N).map(|q| derivation(mv, q, p)).collect()).collect();
    let mut out = Vec::with_capacity(N);
    for a in 0..N {
        let mut m = Matrix::zeros(N, N);
        for p in 0..N {
            for q in 0..N {
                let v = evaluate(&xi, &moved[p][q].wedge_basis_left(a));
                m.set(p, q, v);
            }
        }
        out.push(m);
    }
    Ok(out)
}

/// R[a][b] = tr(A_a·A_b).
pub fn rmat(w: &ThreeForm) -> Result<Matrix<Rat>> {
    let a = theta7(w)?;
    let mut r = Matrix::zeros(N, N);
    for i in 0..N {
        for j in i..N {
            let v = a[i].mul(&a[j])?.trace();
            r.set(i, j, v.clone());
            r.set(j, i, v);
        }
    }
    Ok(r)
}

/// tr(P·R)/7.
pub fn j7(w: &ThreeForm) -> Result<Rat> {
    Ok(pmat(w)?.mul(&rmat(w)?)?.trace() / Rat::int(N as i64))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HepticReport {
    pub j7: Rat,
    pub pr_scalar: Option<Rat>,
    pub rp_scalar: Option<Rat>,
    pub symmetric: bool,
    pub pass: bool,
}

/// P·R = R·P = J₇·Id.
pub fn verify_heptic_mf(w: &ThreeForm) -> Result<HepticReport> {
    let p = pmat(w)?;
    let r = rmat(w)?;
    let pr = p.mul(&r)?;
    let rp = r.mul(&p)?;
    let j = pr.trace() / Rat::int(N as i64);
    let (pr_scalar, rp_scalar) = (pr.scalar_value(), rp.scalar_value());
    let symmetric = p.is_symmetric() && r.is_symmetric();
    let pass = pr_scalar.as_ref() == Some(&j) && rp_scalar.as_ref() == Some(&j) && symmetric;
    Ok(HepticReport {
        j7: j,
        pr_scalar,
        rp_scalar,
        symmetric,
        pass,
    })
}

pub fn act(g: &Matrix<Rat>, w: &ThreeForm) -> Result<ThreeForm> {
    ThreeForm::new(wedge_power(g, w.mv())?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceReport {
    pub det: Rat,
    pub before: Rat,
    pub after: Rat,
    pub pass: bool,
}

/// j(∧³g·ω) = det(g)^k·j(ω) for an invariant `j` of weight k.
pub fn covariance(
    w: &ThreeForm,
    g: &Matrix<Rat>,
    exponent: i32,
    j: impl Fn(&ThreeForm) -> Result<Rat>,
) -> Result<CovarianceReport> {
    let det = g.det()?;
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let before = j(w)?;
    let after = j(&act(g, w)?)?;
    Ok(CovarianceReport {
        pass: after == det.pow(exponent) * &before,
        det,
        before,
        after,
    })
}

/// j7(∧³g·ω) = det(g)³·j7(ω).
pub fn gl_covariance(w: &ThreeForm, g: &Matrix<Rat>) -> Result<CovarianceReport> {
    check(w)?;
    covariance(w, g, 3, j7)
}
