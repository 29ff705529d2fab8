//! The degree-16 invariant of ∧³V₈ from the graded adjoint chain
//!
//! V₈^∨ → ∧²V₈ → ∧³V₈^∨ → gl(V₈) → ∧³V₈ → ∧²V₈^∨ → V₈
//!
//! of degrees −3..3, and the factorization (Q, R).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{IndexSet, Multivector};
use crate::forms::{derivation, evaluate, gl_action, top_functional};
use crate::heptic::{covariance, CovarianceReport};
use crate::matrix::Matrix;
use crate::mf::ThreeForm;
use crate::rng::{random_three_form, SplitMix64};
use crate::scalar::Rat;

pub const N: usize = 8;

/// Pairs (i < j) of 0..8 in lexicographic order; the row order of P.
pub fn pairs() -> Vec<(usize, usize)> {
    (0..N).flat_map(|i| (i + 1..N).map(move |j| (i, j))).collect()
}

fn pair_index(i: usize, j: usize) -> usize {
    // rows before i hold (N−1) + … + (N−i) pairs
    i * (2 * N - i - 1) / 2 + (j - i - 1)
}

/// One element of a graded summand. Dual summands store the values of the
/// functional on basis monomials, keyed by index set.
#[derive(Debug, Clone, PartialEq)]
pub enum GradedElement {
    /// degree −3: V₈^∨
    Covector(Vec<Rat>),
    /// degree −2: ∧²V₈
    Bivector(Multivector<Rat>),
    /// degree −1: ∧³V₈^∨
    TrivectorDual(Multivector<Rat>),
    /// degree 0: gl(V₈), X e_q = Σ_p X[p][q] e_p
    Gl(Matrix<Rat>),
    /// degree 1: ∧³V₈
    Trivector(Multivector<Rat>),
    /// degree 2: ∧²V₈^∨
    BivectorDual(Multivector<Rat>),
    /// degree 3: V₈
    Vector(Vec<Rat>),
}

impl GradedElement {
    pub fn degree(&self) -> i32 {
        match self {
            GradedElement::Covector(_) => -3,
            GradedElement::Bivector(_) => -2,
            GradedElement::TrivectorDual(_) => -1,
            GradedElement::Gl(_) => 0,
            GradedElement::Trivector(_) => 1,
            GradedElement::BivectorDual(_) => 2,
            GradedElement::Vector(_) => 3,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            GradedElement::Covector(v) | GradedElement::Vector(v) => v.iter().all(Rat::is_zero),
            GradedElement::Gl(x) => x.is_zero(),
            GradedElement::Bivector(m)
            | GradedElement::TrivectorDual(m)
            | GradedElement::Trivector(m)
            | GradedElement::BivectorDual(m) => m.is_zero(),
        }
    }
}

/// z with its 64 elementary derivations E_{qp}·z precomputed.
pub struct Chain<'a> {
    z: &'a Multivector<Rat>,
    moved: Vec<Vec<Multivector<Rat>>>,
    lambda: Rat,
}

impl<'a> Chain<'a> {
    pub fn new(z: &'a ThreeForm, lambda: &Rat) -> Result<Chain<'a>> {
        if z.n() != N {
            return Err(Error::LabelMismatch(N, z.n()));
        }
        let mv = z.mv();
        let moved = (0..N).map(|p| (0..N).map(|q| derivation(mv, q, p)).collect()).collect();
        Ok(Chain {
            z: mv,
            moved,
            lambda: lambda.clone(),
        })
    }

    /// ad(z) on one graded element.
    pub fn step(&self, x: &GradedElement) -> Result<GradedElement> {
        let z = self.z;
        Ok(match x {
            GradedElement::Covector(y) => GradedElement::Bivector(z.interior(y)?),
            GradedElement::Bivector(beta) => {
                let f = top_functional(&z.wedge(beta)?);
                // η(γ) = top(z∧β∧γ), kept on the grade-3 index sets
                let eta = Multivector::from_terms(N, f.into_iter().filter(|(k, _)| k.grade() == 3))?;
                GradedElement::TrivectorDual(eta)
            }
            GradedElement::TrivectorDual(eta) => {
                let f = eta.terms();
                let ev = |w: &Multivector<Rat>| evaluate(f, w);
                let mut m = Matrix::zeros(N, N);
                for p in 0..N {
                    for q in 0..N {
                        m.set(p, q, ev(&self.moved[p][q]));
                    }
                }
                if !self.lambda.is_zero() {
                    let t = &self.lambda * &ev(z);
                    for p in 0..N {
                        m.add_at(p, p, &t);
                    }
                }
                GradedElement::Gl(m)
            }
            GradedElement::Gl(m) => GradedElement::Trivector(gl_action(m, z)?),
            GradedElement::Trivector(w) => {
                let f = top_functional(&z.wedge(w)?);
                let kappa = Multivector::from_terms(N, f.into_iter().filter(|(k, _)| k.grade() == 2))?;
                GradedElement::BivectorDual(kappa)
            }
            GradedElement::BivectorDual(kappa) => {
                let mut v = vec![Rat::zero(); N];
                let k = |a: usize, b: usize| kappa.coeff(IndexSet::from_positions(&[a, b]));
                for (s, c) in z.iter() {
                    let p: Vec<usize> = s.positions().collect();
                    let (a, b, d) = (p[0], p[1], p[2]);
                    v[d] += c * &k(a, b);
                    v[b] -= c * &k(a, d);
                    v[a] += c * &k(b, d);
                }
                GradedElement::Vector(v)
            }
            GradedElement::Vector(_) => {
                return Err(Error::Invalid("no graded piece above degree 3".into()));
            }
        })
    }

    pub fn run(&self, x: GradedElement, steps: usize) -> Result<GradedElement> {
        let mut x = x;
        for _ in 0..steps {
            x = self.step(&x)?;
        }
        Ok(x)
    }
}

pub fn ad_step(z: &ThreeForm, x: &GradedElement, lambda: &Rat) -> Result<GradedElement> {
    Chain::new(z, lambda)?.step(x)
}

fn p_from_chain(chain: &Chain) -> Result<Matrix<Rat>> {
    let ps = pairs();
    let mut p = Matrix::zeros(ps.len(), ps.len());
    for (row, &(i, j)) in ps.iter().enumerate() {
        let beta = Multivector::from_terms(N, [(IndexSet::from_positions(&[i, j]), Rat::one())])?;
        let GradedElement::BivectorDual(kappa) = chain.run(GradedElement::Bivector(beta), 4)? else {
            unreachable!("four steps from degree -2 land in degree 2");
        };
        for (k, c) in kappa.iter() {
            let kl: Vec<usize> = k.positions().collect();
            p.set(row, pair_index(kl[0], kl[1]), c.clone());
        }
    }
    Ok(p)
}

fn q_from_chain(chain: &Chain) -> Result<Matrix<Rat>> {
    let mut q = Matrix::zeros(N, N);
    for u in 0..N {
        let y = crate::forms::dual_basis(N, u);
        let GradedElement::Vector(v) = chain.run(GradedElement::Covector(y), 6)? else {
            unreachable!("six steps from degree -3 land in degree 3");
        };
        for (w, c) in v.into_iter().enumerate() {
            q.set(u, w, c);
        }
    }
    Ok(q)
}

/// P(e_a∧e_b, e_c∧e_d) with the antisymmetry in each slot.
fn p_value(p: &Matrix<Rat>, a: usize, b: usize, c: usize, d: usize) -> Rat {
    if a == b || c == d {
        return Rat::zero();
    }
    let mut neg = false;
    let (a, b) = if a < b {
        (a, b)
    } else {
        neg = !neg;
        (b, a)
    };
    let (c, d) = if c < d {
        (c, d)
    } else {
        neg = !neg;
        (d, c)
    };
    let v = p.get(pair_index(a, b), pair_index(c, d));
    if neg {
        -v
    } else {
        v.clone()
    }
}

fn r_from(p: &Matrix<Rat>, q: &Matrix<Rat>) -> Matrix<Rat> {
    let qs = q.nonzeros();
    let mut r = Matrix::zeros(N, N);
    for u in 0..N {
        for w in 0..N {
            let mut s = Rat::zero();
            for (c, d, x) in &qs {
                let pv = p_value(p, u, *c, w, *d);
                if !pv.is_zero() {
                    s += x * &pv;
                }
            }
            r.set(u, w, s);
        }
    }
    r
}

/// 28×28 matrix of the chain ∧²V₈ → ∧²V₈^∨, rows and columns in `pairs()` order.
pub fn p16(z: &ThreeForm, lambda: &Rat) -> Result<Matrix<Rat>> {
    p_from_chain(&Chain::new(z, lambda)?)
}

/// 8×8 matrix of the chain V₈^∨ → V₈; row u is the image of y_u.
pub fn q16(z: &ThreeForm, lambda: &Rat) -> Result<Matrix<Rat>> {
    q_from_chain(&Chain::new(z, lambda)?)
}

/// R[u][w] = Σ_{c,d} Q[c][d]·P(e_u∧e_c, e_w∧e_d).
pub fn r16(z: &ThreeForm, lambda: &Rat) -> Result<Matrix<Rat>> {
    let chain = Chain::new(z, lambda)?;
    Ok(r_from(&p_from_chain(&chain)?, &q_from_chain(&chain)?))
}

/// P, Q and R from one chain.
pub struct SedecicMatrices {
    pub p: Matrix<Rat>,
    pub q: Matrix<Rat>,
    pub r: Matrix<Rat>,
}

pub fn matrices(z: &ThreeForm, lambda: &Rat) -> Result<SedecicMatrices> {
    let chain = Chain::new(z, lambda)?;
    let p = p_from_chain(&chain)?;
    let q = q_from_chain(&chain)?;
    let r = r_from(&p, &q);
    Ok(SedecicMatrices { p, q, r })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CalibrationStatus {
    Calibrated,
    Failed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaVerdict {
    /// R·Q is scalar for every λ; λ = 0 is the canonical representative.
    AllLambda,
    /// A single rational λ works.
    Unique,
    /// No rational λ was found.
    NoSolution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub lambda: Rat,
    pub status: CalibrationStatus,
    pub verdict: LambdaVerdict,
    pub validated_points: usize,
    pub seed: u64,
}

/// Polynomials (coefficient lists, lowest degree first) over ℚ.
type Poly = Vec<Rat>;

fn poly_trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Rat::is_zero) {
        p.pop();
    }
    p
}

/// Lagrange interpolation through (x_i, y_i).
fn interpolate(xs: &[Rat], ys: &[Rat]) -> Poly {
    let n = xs.len();
    let mut out = vec![Rat::zero(); n];
    for i in 0..n {
        let mut basis: Poly = vec![Rat::one()];
        let mut denom = Rat::one();
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut next = vec![Rat::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * &xs[j];
            }
            basis = next;
            denom *= &(&xs[i] - &xs[j]);
        }
        let scale = &ys[i] / &denom;
        for (k, c) in basis.iter().enumerate() {
            out[k] += c * &scale;
        }
    }
    poly_trim(out)
}

fn poly_rem(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    let lead = b.last().expect("nonzero divisor");
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let f = r.last().expect("nonempty") / lead;
        for (k, c) in b.iter().enumerate() {
            let v = &r[shift + k] - &f * c;
            r[shift + k] = v;
        }
        r = poly_trim(r);
    }
    r
}

fn poly_gcd(a: Poly, b: Poly) -> Poly {
    let (mut a, mut b) = (a, b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn scalar_conditions(m: &Matrix<Rat>) -> Vec<Rat> {
    let mut out = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if i != j {
                out.push(m.get(i, j).clone());
            } else if i > 0 {
                out.push(m.get(i, i) - m.get(0, 0));
            }
        }
    }
    out
}

fn rq_is_scalar(z: &ThreeForm, lambda: &Rat) -> Result<bool> {
    let s = matrices(z, lambda)?;
    Ok(s.r.mul(&s.q)?.scalar_value().is_some())
}

/// Solves for λ with R·Q scalar at a point drawn from `seed`, then
/// validates the answer at a second point drawn from `seed + 1`.
///
/// R·Q has degree at most 3 in λ, so each scalar condition is a cubic,
/// recovered exactly by interpolation at four values.
pub fn calibrate(seed: u64) -> Result<Calibration> {
    let z = random_three_form(N, &mut SplitMix64::new(seed), 9);
    let xs: Vec<Rat> = (0..4).map(Rat::int).collect();
    let mut values: Vec<Vec<Rat>> = Vec::new();
    for x in &xs {
        let s = matrices(&z, x)?;
        values.push(scalar_conditions(&s.r.mul(&s.q)?));
    }
    let count = values[0].len();
    let mut g: Poly = Vec::new();
    for c in 0..count {
        let ys: Vec<Rat> = values.iter().map(|v| v[c].clone()).collect();
        let p = interpolate(&xs, &ys);
        if !p.is_empty() {
            g = if g.is_empty() { p } else { poly_gcd(g, p) };
        }
    }
    let (lambda, verdict) = if g.is_empty() {
        (Rat::zero(), LambdaVerdict::AllLambda)
    } else if g.len() == 2 {
        (-(&g[0] / &g[1]), LambdaVerdict::Unique)
    } else {
        (Rat::zero(), LambdaVerdict::NoSolution)
    };
    if verdict == LambdaVerdict::NoSolution {
        return Ok(Calibration {
            lambda,
            status: CalibrationStatus::Failed,
            verdict,
            validated_points: 0,
            seed,
        });
    }
    let second = random_three_form(N, &mut SplitMix64::new(seed.wrapping_add(1)), 9);
    let mut validated = usize::from(rq_is_scalar(&z, &lambda)?);
    if rq_is_scalar(&second, &lambda)? {
        validated += 1;
    }
    if verdict == LambdaVerdict::AllLambda && !rq_is_scalar(&second, &Rat::new(7, 3))? {
        validated = validated.min(1);
    }
    let status = if validated == 2 {
        CalibrationStatus::Calibrated
    } else {
        CalibrationStatus::Failed
    };
    Ok(Calibration {
        lambda,
        status,
        verdict,
        validated_points: validated,
        seed,
    })
}

fn require(cal: &Calibration) -> Result<&Rat> {
    match cal.status {
        CalibrationStatus::Calibrated => Ok(&cal.lambda),
        CalibrationStatus::Failed => Err(Error::Invalid("sedecic calibration failed".into())),
    }
}

/// tr(R·Q)/8.
pub fn j16(z: &ThreeForm, cal: &Calibration) -> Result<Rat> {
    let s = matrices(z, require(cal)?)?;
    Ok(s.r.mul(&s.q)?.trace() / Rat::int(N as i64))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SedecicReport {
    pub j16: Rat,
    pub rq_scalar: Option<Rat>,
    pub qr_scalar: Option<Rat>,
    pub p_symmetric: bool,
    pub q_symmetric: bool,
    pub r_symmetric: bool,
    pub pass: bool,
}

/// R·Q = Q·R = J₁₆·Id, with P, Q, R symmetric.
pub fn verify_sedecic_mf(z: &ThreeForm, cal: &Calibration) -> Result<SedecicReport> {
    let s = matrices(z, require(cal)?)?;
    let rq = s.r.mul(&s.q)?;
    let qr = s.q.mul(&s.r)?;
    let j = rq.trace() / Rat::int(N as i64);
    let (rq_scalar, qr_scalar) = (rq.scalar_value(), qr.scalar_value());
    let (p_symmetric, q_symmetric, r_symmetric) = (s.p.is_symmetric(), s.q.is_symmetric(), s.r.is_symmetric());
    let pass =
        rq_scalar.as_ref() == Some(&j) && qr_scalar.as_ref() == Some(&j) && p_symmetric && q_symmetric && r_symmetric;
    Ok(SedecicReport {
        j16: j,
        rq_scalar,
        qr_scalar,
        p_symmetric,
        q_symmetric,
        r_symmetric,
        pass,
    })
}

/// j16(∧³g·z) = det(g)⁶·j16(z).
pub fn gl_covariance(z: &ThreeForm, g: &Matrix<Rat>, cal: &Calibration) -> Result<CovarianceReport> {
    covariance(z, g, 6, |w| j16(w, cal))
}
