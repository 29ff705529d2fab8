//! The m = 7 case: the octic J₈ on the half-spin space ∧⁺E₇, its matrix
//! factorization, the eigenspace splitting and the boundary geometry.

use serde::{Deserialize, Serialize};

use crate::clifford::{cl_word, conj_map, qform, Spinor, SplitSpace, Vector};
use crate::error::{Error, Result};
use crate::exterior::{wedge_sign, IndexSet, Multivector};
use crate::matrix::{in_span, Matrix, MatrixJson};
use crate::mf::{
    calibrate_norm, mf_scalar, mmatrix, mmatrix_direct, omega, orthogonal_projector, sym_to_endo, theta, SymEndo,
    SymTerm, ThreeForm,
};
use crate::rng::SplitMix64;
use crate::scalar::{QuadRat, Rat, Scalar};

pub const M: usize = 7;

/// Index of the calibration vector e₁ and the value M_{z₀}(e₁) = −24 e₁.
pub const CALIBRATION_INDEX: usize = 0;
pub const CALIBRATION_TARGET: i64 = -24;

/// Spinor norm exponent: j8(v·w·z) = (N(v)N(w))^P · j8(z).
pub const INVARIANCE_EXPONENT: i32 = 4;

pub fn space() -> SplitSpace {
    SplitSpace::new(M).expect("rank 7")
}

fn e(i: usize) -> Vector {
    Vector::e(space(), i)
}

fn f(i: usize) -> Vector {
    Vector::f(space(), i)
}

fn plus(a: &Vector, b: &Vector) -> Vector {
    a.add(b).expect("same space")
}

fn minus(a: &Vector, b: &Vector) -> Vector {
    a.sub(b).expect("same space")
}

pub fn z0() -> Spinor {
    Spinor::from_terms(
        space(),
        &[
            (&[], Rat::one()),
            (&[1, 2, 3, 7], Rat::one()),
            (&[4, 5, 6, 7], Rat::one()),
            (&[1, 2, 3, 4, 5, 6], Rat::one()),
        ],
    )
    .expect("valid spinor")
}

/// Labels substituted for the impossible index 8 in the printed monomial e₁₅₈₇.
pub const Z1_CANDIDATES: [usize; 4] = [2, 3, 4, 6];

/// 1 + e₁₂₃₇ + e_{1 5 k 7} + e₂₄₆₇ + e₁₂₃₄₅₆.
pub fn z1_candidate(k: usize) -> Result<Spinor> {
    Spinor::from_terms(
        space(),
        &[
            (&[], Rat::one()),
            (&[1, 2, 3, 7], Rat::one()),
            (&[1, 5, k, 7], Rat::one()),
            (&[2, 4, 6, 7], Rat::one()),
            (&[1, 2, 3, 4, 5, 6], Rat::one()),
        ],
    )
}

/// Pure-E and pure-F cubic part of ½Ω_{z₁} as printed:
/// e₁₂₃ + e₁₅₆ + e₂₄₆ − f₁₃₅ − f₂₃₄ − f₄₅₆.
pub fn z1_printed_cubic() -> ThreeForm {
    let n = 2 * M;
    let f_ = |i: usize| M + i;
    ThreeForm::from_terms(
        n,
        &[
            ([1, 2, 3], 1),
            ([1, 5, 6], 1),
            ([2, 4, 6], 1),
            ([f_(1), f_(3), f_(5)], -1),
            ([f_(2), f_(3), f_(4)], -1),
            ([f_(4), f_(5), f_(6)], -1),
        ],
    )
    .expect("grade 3")
}

/// Terms of a three-form over E⊕F whose labels are all in E or all in F.
pub fn pure_part(t: &ThreeForm) -> ThreeForm {
    let e_mask = IndexSet::full(M).bits();
    let f_mask = e_mask << M;
    let mv = Multivector::from_terms(
        t.n(),
        t.mv()
            .iter()
            .filter(|(k, _)| k.bits() & f_mask == 0 || k.bits() & e_mask == 0)
            .map(|(k, c)| (*k, c.clone())),
    )
    .expect("same labels");
    ThreeForm::new(mv).expect("grade 3")
}

/// The ratio r with a = r·b, if any.
pub fn proportionality(a: &Multivector<Rat>, b: &Multivector<Rat>) -> Option<Rat> {
    if a.len() != b.len() || b.is_zero() {
        return None;
    }
    let (k0, b0) = b.iter().next()?;
    let r = a.coeff(*k0) / b0;
    if r.is_zero() {
        return None;
    }
    if b.iter().all(|(k, c)| a.coeff(*k) == &r * c) {
        Some(r)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Z1Reading {
    /// The label k in e_{15k7}.
    pub k: usize,
    /// Human-readable spinor, e.g. "1+e1237+e1567+e2467+e123456".
    pub spinor: String,
    /// r with pure(Ω_{z₁}) = r·(printed cubic part); the global unit is r/2.
    pub ratio: Rat,
}

/// "1+e1237+…" with terms ordered by grade, then lexicographically.
pub fn spinor_name(z: &Spinor) -> String {
    let mut terms: Vec<_> = z.body().iter().collect();
    terms.sort_by_key(|(k, _)| (k.grade(), k.labels()));
    terms
        .into_iter()
        .map(|(k, c)| {
            let mono = if k.grade() == 0 {
                String::new()
            } else {
                format!("e{}", k.labels().iter().map(|l| l.to_string()).collect::<String>())
            };
            let coeff = if c.is_one() && !mono.is_empty() {
                String::new()
            } else if mono.is_empty() {
                c.to_string()
            } else {
                format!("{c}*")
            };
            format!("{coeff}{mono}")
        })
        .collect::<Vec<_>>()
        .join("+")
}

/// Among the candidate readings of z₁, the ones whose Ω reproduces the
/// printed cubic terms up to a unit (ratio ±2 against ½Ω).
pub fn z1_matching_readings() -> Result<Vec<Z1Reading>> {
    let printed = z1_printed_cubic();
    let mut out = Vec::new();
    for k in Z1_CANDIDATES {
        let z = z1_candidate(k)?;
        let pure = pure_part(&omega(&z)?);
        if let Some(r) = proportionality(pure.mv(), printed.mv()) {
            if r.abs() == Rat::int(2) {
                out.push(Z1Reading {
                    k,
                    spinor: spinor_name(&z),
                    ratio: r,
                });
            }
        }
    }
    Ok(out)
}

/// The unique matching reading of z₁.
pub fn select_z1() -> Result<(Z1Reading, Spinor)> {
    let matches = z1_matching_readings()?;
    match matches.as_slice() {
        [one] => Ok((one.clone(), z1_candidate(one.k)?)),
        _ => Err(Error::Degenerate(format!(
            "{} readings of z1 match the printed expansion",
            matches.len()
        ))),
    }
}

/// V₇ = span(e₁, e₂, e₃, f₁, f₂, f₃, e₇ − f₇).
pub fn v7_basis() -> Vec<Vector> {
    vec![e(1), e(2), e(3), f(1), f(2), f(3), minus(&e(7), &f(7))]
}

/// V₇′ = span(e₄, e₅, e₆, f₄, f₅, f₆, e₇ + f₇).
pub fn v7p_basis() -> Vec<Vector> {
    vec![e(4), e(5), e(6), f(4), f(5), f(6), plus(&e(7), &f(7))]
}

pub fn projector_v7() -> Matrix<Rat> {
    orthogonal_projector(space(), &v7_basis()).expect("B nondegenerate on V7")
}

pub fn projector_v7p() -> Matrix<Rat> {
    orthogonal_projector(space(), &v7p_basis()).expect("B nondegenerate on V7'")
}

/// 24(π_{V₇′} − π_{V₇}).
pub fn golden_m_z0() -> Matrix<Rat> {
    projector_v7p()
        .sub(&projector_v7())
        .expect("same shape")
        .scale(&Rat::int(24))
}

/// 8(3f₇² − e₁f₄ + e₂f₅ + e₆f₃) as printed.
pub fn printed_m_z1() -> Matrix<Rat> {
    sym_to_endo(
        space(),
        &[
            (Rat::int(24), SymTerm::Square(f(7))),
            (Rat::int(-8), SymTerm::Product(e(1), f(4))),
            (Rat::int(8), SymTerm::Product(e(2), f(5))),
            (Rat::int(8), SymTerm::Product(e(6), f(3))),
        ],
    )
    .expect("rank 7 space")
}

/// The golden kernel span(f₇, e₁, f₄, e₂, f₅, e₆, f₃) of M_{z₁}.
pub fn z1_kernel_basis() -> Vec<Vector> {
    vec![f(7), e(1), f(4), e(2), f(5), e(6), f(3)]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    /// Scalar with M_z = norm·Θ(Ω_z, Ω_z).
    pub norm: Rat,
    /// Ratio of the Eq. (4) double sum to the raw Θ route.
    pub rho: Rat,
}

fn ratio_of(a: &Matrix<Rat>, b: &Matrix<Rat>) -> Option<Rat> {
    let (i, j, bv) = b.nonzeros().into_iter().next()?;
    let r = a.get(i, j) / &bv;
    if b.scale(&r) == *a {
        Some(r)
    } else {
        None
    }
}

/// The proportionality constant between the Eq. (4) route and Θ(Ω_z, Ω_z).
pub fn direct_ratio(z: &Spinor) -> Result<Option<Rat>> {
    let om = omega(z)?;
    let raw = theta(z.space(), &om, &om)?;
    let direct = mmatrix_direct(z)?;
    Ok(ratio_of(&direct.matrix, &raw.matrix))
}

/// Fixes norm from M_{z₀}(e₁) = −24 e₁ and ρ at z₀.
pub fn calibrate() -> Result<Calibration> {
    let z = z0();
    let om = omega(&z)?;
    let raw = theta(space(), &om, &om)?;
    let norm = calibrate_norm(&raw, CALIBRATION_INDEX, &Rat::int(CALIBRATION_TARGET))?;
    let rho = direct_ratio(&z)?.ok_or_else(|| Error::Degenerate("Eq. (4) route not proportional at z0".into()))?;
    Ok(Calibration { norm, rho })
}

pub fn m_z(z: &Spinor, cal: &Calibration) -> Result<SymEndo> {
    check_rank(z)?;
    mmatrix(z, &cal.norm)
}

fn check_rank(z: &Spinor) -> Result<()> {
    if z.space().m() != M {
        return Err(Error::SpaceMismatch(M, z.space().m()));
    }
    Ok(())
}

pub fn j8(z: &Spinor, cal: &Calibration) -> Result<Rat> {
    Ok(mf_scalar(&m_z(z, cal)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryFailure {
    pub row: usize,
    pub col: usize,
    pub expected: Rat,
    pub got: Rat,
}

/// Entries where `got` differs from `expected`.
pub fn entry_failures(expected: &Matrix<Rat>, got: &Matrix<Rat>) -> Vec<EntryFailure> {
    let mut out = Vec::new();
    for i in 0..expected.rows() {
        for j in 0..expected.cols() {
            if expected.get(i, j) != got.get(i, j) {
                out.push(EntryFailure {
                    row: i,
                    col: j,
                    expected: expected.get(i, j).clone(),
                    got: got.get(i, j).clone(),
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OcticReport {
    pub j8: Rat,
    pub trace: Rat,
    pub self_adjoint: bool,
    pub failures: Vec<EntryFailure>,
    pub pass: bool,
}

/// Checks M_z² = J₈(z)·Id entrywise, tr M_z = 0 and self-adjointness.
pub fn verify_octic_mf(z: &Spinor, cal: &Calibration) -> Result<OcticReport> {
    let m = m_z(z, cal)?;
    let j = mf_scalar(&m);
    let sq = m.square();
    let failures = entry_failures(&Matrix::scalar_id(2 * M, &j), &sq);
    let trace = m.trace();
    let self_adjoint = m.is_self_adjoint();
    let pass = failures.is_empty() && trace.is_zero() && self_adjoint;
    Ok(OcticReport {
        j8: j,
        trace,
        self_adjoint,
        failures,
        pass,
    })
}

/// Eigenprojector splitting of M_z over ℚ(√J₈(z)).
#[derive(Debug, Clone, PartialEq)]
pub struct SplitData {
    pub d: Rat,
    pub m: QuadRat,
    pub proj_plus: Matrix<QuadRat>,
    pub proj_minus: Matrix<QuadRat>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitDataJson {
    pub d: Rat,
    pub m: QuadRat,
    pub proj_plus: MatrixJson<QuadRat>,
    pub proj_minus: MatrixJson<QuadRat>,
}

impl SplitData {
    pub fn to_json(&self) -> SplitDataJson {
        SplitDataJson {
            d: self.d.clone(),
            m: self.m.clone(),
            proj_plus: self.proj_plus.to_json(),
            proj_minus: self.proj_minus.to_json(),
        }
    }

    pub fn from_json(j: SplitDataJson) -> Result<SplitData> {
        Ok(SplitData {
            d: j.d,
            m: j.m,
            proj_plus: Matrix::from_json(j.proj_plus)?,
            proj_minus: Matrix::from_json(j.proj_minus)?,
        })
    }
}

pub fn to_quad(m: &Matrix<Rat>) -> Matrix<QuadRat> {
    m.map(QuadRat::from_rat)
}

/// π± = (Id ± M_z/√J₈)/2; fails at J₈(z) = 0.
pub fn split(z: &Spinor, cal: &Calibration) -> Result<SplitData> {
    let m = m_z(z, cal)?;
    let d = mf_scalar(&m);
    if d.is_zero() {
        return Err(Error::Degenerate(
            "J8(z) = 0: boundary point, use the kernel analysis instead".into(),
        ));
    }
    let root = QuadRat::sqrt_of(&d)?;
    let inv = root.recip().ok_or(Error::DivisionByZero)?;
    let half = QuadRat::rational(Rat::new(1, 2));
    let n = 2 * M;
    let id = Matrix::<QuadRat>::identity(n);
    let mq = to_quad(&m.matrix).scale(&inv);
    Ok(SplitData {
        d,
        m: root,
        proj_plus: id.add(&mq)?.scale(&half),
        proj_minus: id.sub(&mq)?.scale(&half),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitChecks {
    pub idempotent: bool,
    pub complementary: bool,
    pub annihilate: bool,
    pub ranks: (usize, usize),
    pub b_orthogonal: bool,
    pub nondegenerate: bool,
    pub reconstructs: bool,
    pub pass: bool,
}

fn b_restricted_nondegenerate(g: &Matrix<QuadRat>, p: &Matrix<QuadRat>) -> bool {
    let basis = p.column_basis();
    if basis.is_empty() {
        return false;
    }
    let u = Matrix::from_cols(&basis, p.rows());
    let gu = u.transpose().mul(g).and_then(|x| x.mul(&u));
    matches!(gu.and_then(|x| x.det()), Ok(d) if !d.is_zero())
}

/// Every invariant of a splitting, against the matrix M_z it came from.
pub fn check_split(sd: &SplitData, m: &SymEndo) -> SplitChecks {
    let n = 2 * M;
    let id = Matrix::<QuadRat>::identity(n);
    let g = to_quad(&m.space.gram());
    let (pp, pm) = (&sd.proj_plus, &sd.proj_minus);
    let mul = |a: &Matrix<QuadRat>, b: &Matrix<QuadRat>| a.mul(b).expect("square");
    let idempotent = mul(pp, pp) == *pp && mul(pm, pm) == *pm;
    let complementary = pp.add(pm).expect("shape") == id;
    let annihilate = mul(pp, pm).is_zero() && mul(pm, pp).is_zero();
    let ranks = (pp.rank(), pm.rank());
    let b_orthogonal = mul(&mul(&pp.transpose(), &g), pm).is_zero();
    let nondegenerate = b_restricted_nondegenerate(&g, pp) && b_restricted_nondegenerate(&g, pm);
    let rebuilt = pp.sub(pm).expect("shape").scale(&sd.m);
    let reconstructs = rebuilt == to_quad(&m.matrix);
    let pass =
        idempotent && complementary && annihilate && ranks == (M, M) && b_orthogonal && nondegenerate && reconstructs;
    SplitChecks {
        idempotent,
        complementary,
        annihilate,
        ranks,
        b_orthogonal,
        nondegenerate,
        reconstructs,
        pass,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryData {
    pub rank: usize,
    pub kernel: Vec<Vec<Rat>>,
    pub image: Vec<Vec<Rat>>,
    pub square_zero: bool,
    pub image_equals_kernel: bool,
    pub isotropic: bool,
}

fn is_isotropic(space: SplitSpace, vs: &[Vec<Rat>]) -> bool {
    let g = space.gram();
    vs.iter().all(|a| {
        let ga = g.apply(a).expect("dim");
        vs.iter()
            .all(|b| ga.iter().zip(b).map(|(x, y)| x * y).sum::<Rat>().is_zero())
    })
}

fn same_span(a: &[Vec<Rat>], b: &[Vec<Rat>], dim: usize) -> bool {
    a.len() == b.len() && in_span(a, b, dim) && in_span(b, a, dim)
}

/// Kernel/image geometry of M_z at a point with J₈(z) = 0.
pub fn boundary_kernel(z: &Spinor, cal: &Calibration) -> Result<BoundaryData> {
    let m = m_z(z, cal)?;
    let n = 2 * M;
    let kernel = m.matrix.kernel();
    let image = m.matrix.column_basis();
    Ok(BoundaryData {
        rank: image.len(),
        square_zero: m.square().is_zero(),
        image_equals_kernel: same_span(&kernel, &image, n),
        isotropic: is_isotropic(m.space, &kernel),
        kernel,
        image,
    })
}

/// Is span(vs) equal to span(expected)?
pub fn spans_equal(vs: &[Vec<Rat>], expected: &[Vector]) -> bool {
    let exp: Vec<Vec<Rat>> = expected.iter().map(|v| v.coords().to_vec()).collect();
    same_span(vs, &exp, 2 * M)
}

/// Kernel ranks of M_z + y·Id and M_z − y·Id, with y² = J₈(z).
pub fn double_cover_kernels(z: &Spinor, y: &QuadRat, cal: &Calibration) -> Result<(usize, usize)> {
    let m = m_z(z, cal)?;
    let j = mf_scalar(&m);
    if y.times(y) != QuadRat::rational(j.clone()) {
        return Err(Error::Invalid(format!("y^2 != J8(z) = {j}")));
    }
    let n = 2 * M;
    let mq = to_quad(&m.matrix);
    let yi = Matrix::scalar_id(n, y);
    let plus = mq.add(&yi)?;
    let minus = mq.sub(&yi)?;
    Ok((n - plus.rank(), n - minus.rank()))
}

/// The word (a₁+a₄)(b₁+b₄)(a₂+a₅)(b₂+b₅)(a₃+a₆)(b₃+b₆)a₇b₇ with the √2's of
/// aᵢ = (eᵢ+fᵢ)/√2, bᵢ = (eᵢ−fᵢ)/√2 dropped; every letter is an integer vector.
pub fn swap_word() -> Vec<Vector> {
    let mut word = Vec::new();
    for (i, j) in [(1, 4), (2, 5), (3, 6)] {
        word.push(plus(&plus(&e(i), &f(i)), &plus(&e(j), &f(j))));
        word.push(plus(&minus(&e(i), &f(i)), &minus(&e(j), &f(j))));
    }
    word.push(plus(&e(7), &f(7)));
    word.push(minus(&e(7), &f(7)));
    word
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorImage {
    pub source: String,
    pub image: Vec<Rat>,
    pub in_target: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupplementaryElement {
    pub description: String,
    pub fixes_z0: bool,
    pub exchanges: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwapReport {
    pub word_scale: Rat,
    pub g_z0: Spinor,
    /// ε with g·z₀ = ε·z₀ when such a rational exists.
    pub epsilon: Option<Rat>,
    pub b_orthogonal: bool,
    pub v7_images: Vec<VectorImage>,
    pub v7p_images: Vec<VectorImage>,
    pub exchanges: bool,
    pub signature_v7: (usize, usize),
    pub signature_v7p: (usize, usize),
    pub supplementary: SupplementaryElement,
    pub pass: bool,
}

const BASIS_NAMES_V7: [&str; 7] = ["e1", "e2", "e3", "f1", "f2", "f3", "e7-f7"];
const BASIS_NAMES_V7P: [&str; 7] = ["e4", "e5", "e6", "f4", "f5", "f6", "e7+f7"];

/// (positive, negative) inertia of B restricted to span(basis), by
/// symmetric Gaussian elimination over ℚ.
pub fn signature(space: SplitSpace, basis: &[Vector]) -> (usize, usize) {
    let n = basis.len();
    let g = space.gram();
    let mut a = Matrix::<Rat>::zeros(n, n);
    for i in 0..n {
        let gi = g.apply(basis[i].coords()).expect("dim");
        for j in 0..n {
            let v: Rat = gi.iter().zip(basis[j].coords()).map(|(x, y)| x * y).sum();
            a.set(i, j, v);
        }
    }
    let (mut pos, mut neg) = (0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        // pick a nonzero diagonal pivot, or make one from an off-diagonal pair
        let piv = active.iter().copied().find(|&i| !a.get(i, i).is_zero());
        let p = match piv {
            Some(p) => p,
            None => {
                let pair = active.iter().copied().find_map(|i| {
                    active
                        .iter()
                        .copied()
                        .find(|&j| j != i && !a.get(i, j).is_zero())
                        .map(|j| (i, j))
                });
                let Some((i, j)) = pair else { break };
                // row/col i += row/col j gives a(i,i) = 2a(i,j) ≠ 0
                for k in 0..n {
                    let v = a.get(i, k) + a.get(j, k);
                    a.set(i, k, v);
                }
                for k in 0..n {
                    let v = a.get(k, i) + a.get(k, j);
                    a.set(k, i, v);
                }
                i
            }
        };
        let d = a.get(p, p).clone();
        if d.is_negative() {
            neg += 1;
        } else {
            pos += 1;
        }
        active.retain(|&i| i != p);
        for &i in &active {
            let f = a.get(i, p) / &d;
            if f.is_zero() {
                continue;
            }
            for &j in &active {
                let v = a.get(i, j) - &f * a.get(p, j);
                a.set(i, j, v);
            }
        }
    }
    (pos, neg)
}

fn images(c: &Matrix<Rat>, basis: &[Vector], names: &[&str], target: &[Vector]) -> Vec<VectorImage> {
    let tgt: Vec<Vec<Rat>> = target.iter().map(|v| v.coords().to_vec()).collect();
    basis
        .iter()
        .zip(names)
        .map(|(v, name)| {
            let image = c.apply(v.coords()).expect("dim");
            VectorImage {
                source: name.to_string(),
                in_target: in_span(&tgt, std::slice::from_ref(&image), 2 * M),
                image,
            }
        })
        .collect()
}

/// ∧A on ∧E for A monomial: A e_j = d_j e_{σ(j)} (0-based σ).
pub fn wedge_power_monomial(body: &Multivector<QuadRat>, sigma: &[usize], diag: &[QuadRat]) -> Multivector<QuadRat> {
    let mut out = Multivector::zero(body.n()).expect("n ≤ 16");
    for (s, c) in body.iter() {
        let mut img = IndexSet::EMPTY;
        let mut coeff = c.clone();
        let mut sign = 1;
        for p in s.positions() {
            let t = IndexSet::singleton(sigma[p]);
            sign *= wedge_sign(img, t);
            img = img.union(t);
            coeff = coeff.times(&diag[p]);
        }
        if sign < 0 {
            coeff = coeff.negated();
        }
        out.add_term(img, coeff);
    }
    out
}

/// The element (14)(25)(36)·diag(−i, 1, 1, −i, 1, 1, i) of GL(E) over ℚ(i),
/// acting on ∧E by ∧A and on V = E ⊕ F by A ⊕ A⁻ᵀ.
pub fn supplementary_swap() -> SupplementaryElement {
    let i_unit = QuadRat::sqrt_of(&Rat::int(-1)).expect("d = -1");
    let one = QuadRat::one();
    let mi = i_unit.negated();
    let diag = vec![mi.clone(), one.clone(), one.clone(), mi, one.clone(), one, i_unit];
    let sigma = [3, 4, 5, 0, 1, 2, 6];
    let body = z0().body().map_coeffs(QuadRat::from_rat);
    let fixes_z0 = wedge_power_monomial(&body, &sigma, &diag) == body;

    // A on E: e_j ↦ d_j e_σ(j); A⁻ᵀ on F: f_j ↦ d_j⁻¹ f_σ(j).
    let n = 2 * M;
    let mut a = Matrix::<QuadRat>::zeros(n, n);
    for j in 0..M {
        a.set(sigma[j], j, diag[j].clone());
        a.set(M + sigma[j], M + j, diag[j].recip().expect("unit"));
    }
    let to_q = |vs: &[Vector]| -> Vec<Vec<QuadRat>> {
        vs.iter()
            .map(|v| v.coords().iter().map(QuadRat::from_rat).collect())
            .collect()
    };
    let (v7, v7p) = (to_q(&v7_basis()), to_q(&v7p_basis()));
    let img = |vs: &[Vec<QuadRat>]| -> Vec<Vec<QuadRat>> { vs.iter().map(|v| a.apply(v).expect("dim")).collect() };
    let exchanges = in_span(&v7p, &img(&v7), n) && in_span(&v7, &img(&v7p), n);
    SupplementaryElement {
        description: "(14)(25)(36)*diag(-i,1,1,-i,1,1,i) on E over Q(i)".into(),
        fixes_z0,
        exchanges,
    }
}

/// Applies the literal swap word to z₀ and V₇, V₇′.
pub fn swap_check() -> Result<SwapReport> {
    let sp = space();
    let word = swap_word();
    let scale = Rat::one();
    let z = z0();
    let g_z0 = cl_word(&word, &scale, &z)?;
    let epsilon = proportionality(g_z0.body(), z.body());
    let c = conj_map(sp, &word)?;
    let g = sp.gram();
    let b_orthogonal = c.transpose().mul(&g)?.mul(&c)? == g;
    let v7_images = images(&c, &v7_basis(), &BASIS_NAMES_V7, &v7p_basis());
    let v7p_images = images(&c, &v7p_basis(), &BASIS_NAMES_V7P, &v7_basis());
    let exchanges = v7_images.iter().chain(&v7p_images).all(|x| x.in_target);
    let eps_ok = epsilon.as_ref().is_some_and(|e| e.abs().is_one());
    Ok(SwapReport {
        word_scale: scale,
        g_z0,
        pass: b_orthogonal && exchanges && eps_ok,
        epsilon,
        b_orthogonal,
        v7_images,
        v7p_images,
        exchanges,
        signature_v7: signature(sp, &v7_basis()),
        signature_v7p: signature(sp, &v7p_basis()),
        supplementary: supplementary_swap(),
    })
}

/// 2·(σe₁₂₃ + c·f₁₂₃ + ½Σᵢ eᵢ∧fᵢ∧(e₇ + s·f₇)), labels shifted by `offset`
/// (0 for V₇, 3 for V₇′).
fn cubic_on_block(offset: usize, c: i64, s: i64, e_sign: i64) -> ThreeForm {
    let f_ = |i: usize| M + i;
    let o = offset;
    let mut terms = vec![
        ([1 + o, 2 + o, 3 + o], 2 * e_sign),
        ([f_(1 + o), f_(2 + o), f_(3 + o)], 2 * c),
    ];
    for i in 1 + o..=3 + o {
        terms.push(([i, f_(i), 7], 1));
        terms.push(([i, f_(i), f_(7)], s));
    }
    ThreeForm::from_terms(2 * M, &terms).expect("grade 3")
}

/// Ω = e₁₂₃ + f₁₂₃ + ½Σᵢ₌₁³ eᵢ∧fᵢ∧(e₇ − f₇) ∈ ∧³V₇, the V₇ part of ½Ω_{z₀}.
pub fn omega_v7() -> ThreeForm {
    cubic_on_block(0, 1, -1, 1).scale(&Rat::new(1, 2))
}

/// Ω′ = −e₄₅₆ + f₄₅₆ + ½Σᵢ₌₄⁶ eᵢ∧fᵢ∧(e₇ + f₇) ∈ ∧³V₇′, with ½Ω_{z₀} = Ω − Ω′.
pub fn omega_v7p() -> ThreeForm {
    cubic_on_block(3, 1, 1, -1).scale(&Rat::new(1, 2))
}

/// The printed form e₁₂₃ − f₁₂₃ + (Σᵢ₌₁³ eᵢ∧fᵢ)∧(e₇ − f₇).
pub fn omega_v7_printed() -> ThreeForm {
    let f_ = |i: usize| M + i;
    let mut terms = vec![([1, 2, 3], 1), ([f_(1), f_(2), f_(3)], -1)];
    for i in 1..=3 {
        terms.push(([i, f_(i), 7], 1));
        terms.push(([i, f_(i), f_(7)], -1));
    }
    ThreeForm::from_terms(2 * M, &terms).expect("grade 3")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaReport {
    /// ½Ω_{z₀} = Ω − Ω′.
    pub decomposes: bool,
    /// norm·Θ(Ω, Ω) = −6π_{V₇}.
    pub theta_v7: bool,
    /// norm·Θ(Ω′, Ω′) = 6π_{V₇′}.
    pub theta_v7p: bool,
    /// c with norm·Θ(printed, printed) = c·π_{V₇}, if any.
    pub printed_scalar: Option<Rat>,
    pub pass: bool,
}

/// Θ on the V₇ and V₇′ components of ½Ω_{z₀}.
pub fn theta_golden(cal: &Calibration) -> Result<ThetaReport> {
    let sp = space();
    let half = omega(&z0())?.scale(&Rat::new(1, 2));
    let (om, omp) = (omega_v7(), omega_v7p());
    let decomposes = half == om.sub(&omp)?;
    let th = |t: &ThreeForm| -> Result<Matrix<Rat>> { Ok(theta(sp, t, t)?.matrix.scale(&cal.norm)) };
    let theta_v7 = th(&om)? == projector_v7().scale(&Rat::int(-6));
    let theta_v7p = th(&omp)? == projector_v7p().scale(&Rat::int(6));
    let printed_scalar = ratio_of(&th(&omega_v7_printed())?, &projector_v7());
    Ok(ThetaReport {
        pass: decomposes && theta_v7 && theta_v7p,
        decomposes,
        theta_v7,
        theta_v7p,
        printed_scalar,
    })
}

/// Θ(T − T′, T − T′) = Θ(T, T) + Θ(T′, T′) for T ∈ ∧³U, T′ ∈ ∧³U′ with U ⊥ U′.
pub fn theta_additive(t: &ThreeForm, tp: &ThreeForm) -> Result<bool> {
    let sp = space();
    let d = t.sub(tp)?;
    let lhs = theta(sp, &d, &d)?.matrix;
    let rhs = theta(sp, t, t)?.matrix.add(&theta(sp, tp, tp)?.matrix)?;
    Ok(lhs == rhs)
}

/// A random pair (T, T′) supported on ∧³U and ∧³U′, where U = ⟨eᵢ, fᵢ : i ∈ A⟩
/// and U′ = ⟨eᵢ, fᵢ : i ∉ A⟩ for a random proper nonempty A ⊂ {1..7}.
pub fn random_orthogonal_pair(rng: &mut SplitMix64, r: u64) -> (ThreeForm, ThreeForm) {
    let a = loop {
        let bits = rng.next_u64() & 0x7f;
        if bits != 0 && bits != 0x7f {
            break bits as usize;
        }
    };
    let mut block = |inside: bool| -> ThreeForm {
        let labels: Vec<usize> = (0..M)
            .filter(|i| ((a >> i) & 1 == 1) == inside)
            .flat_map(|i| [i, i + M])
            .collect();
        let mut mv = Multivector::zero(2 * M).expect("n = 14");
        for (x, &p) in labels.iter().enumerate() {
            for (y, &q) in labels.iter().enumerate().skip(x + 1) {
                for &t in &labels[y + 1..] {
                    mv.add_term(IndexSet::from_positions(&[p, q, t]), rng.coeff_rat(r));
                }
            }
        }
        ThreeForm::new(mv).expect("grade 3")
    };
    let t = block(true);
    (t, block(false))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub j8_before: Rat,
    pub j8_after: Rat,
    /// (N(v)N(w))^4 with N = q/2.
    pub factor: Rat,
    pub pass: bool,
}

/// Spinor norm N(v) = v·v = q(v)/2 under the plain-contraction action.
pub fn spinor_norm(v: &Vector) -> Rat {
    qform(v) / Rat::int(2)
}

/// j8(v·w·z) = (N(v)N(w))⁴ · j8(z).
pub fn invariance_check(z: &Spinor, v: &Vector, w: &Vector, cal: &Calibration) -> Result<InvarianceReport> {
    let (nv, nw) = (spinor_norm(v), spinor_norm(w));
    if nv.is_zero() || nw.is_zero() {
        return Err(Error::IsotropicLetter);
    }
    let moved = cl_word(&[v.clone(), w.clone()], &Rat::one(), z)?;
    let before = j8(z, cal)?;
    let after = j8(&moved, cal)?;
    let factor = (nv * nw).pow(INVARIANCE_EXPONENT);
    Ok(InvarianceReport {
        pass: after == &factor * &before,
        j8_before: before,
        j8_after: after,
        factor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cal() -> Calibration {
        calibrate().unwrap()
    }

    #[test]
    fn calibration_constants() {
        let c = cal();
        assert_eq!(c.norm, Rat::int(-4));
        assert_eq!(c.rho, Rat::one());
    }

    #[test]
    fn m_z0_is_golden() {
        let m = m_z(&z0(), &cal()).unwrap();
        assert_eq!(m.matrix, golden_m_z0());
        assert_eq!(m.square(), Matrix::scalar_id(14, &Rat::int(576)));
    }

    #[test]
    fn j8_values() {
        let c = cal();
        assert_eq!(j8(&z0(), &c).unwrap(), Rat::int(576));
        assert_eq!(j8(&z0().scale(&Rat::int(2)), &c).unwrap(), Rat::int(147456));
        let (_, z1) = select_z1().unwrap();
        assert_eq!(j8(&z1, &c).unwrap(), Rat::zero());
    }

    #[test]
    fn z1_reading_is_unique() {
        let (r, z) = select_z1().unwrap();
        assert_eq!(r.k, 6);
        assert_eq!(r.spinor, "1+e1237+e1567+e2467+e123456");
        assert_eq!(spinor_name(&z), r.spinor);
    }

    #[test]
    fn m_z1_computed_entries() {
        let (_, z1) = select_z1().unwrap();
        let m = m_z(&z1, &cal()).unwrap();
        let expected = vec![
            (0, 3, 48),
            (1, 4, -48),
            (5, 2, -48),
            (9, 12, -48),
            (10, 7, 48),
            (11, 8, -48),
            (13, 6, 24),
        ];
        let got: Vec<(usize, usize, Rat)> = m.matrix.nonzeros();
        let want: Vec<(usize, usize, Rat)> = expected.into_iter().map(|(i, j, v)| (i, j, Rat::int(v))).collect();
        assert_eq!(got, want);
        // same support as the printed matrix, different cross-term weights
        let printed = printed_m_z1();
        let support =
            |x: &Matrix<Rat>| -> Vec<(usize, usize)> { x.nonzeros().into_iter().map(|(i, j, _)| (i, j)).collect() };
        assert_eq!(support(&printed), support(&m.matrix));
        assert_ne!(printed, m.matrix);
    }

    #[test]
    fn boundary_of_z1() {
        let (_, z1) = select_z1().unwrap();
        let b = boundary_kernel(&z1, &cal()).unwrap();
        assert_eq!(b.rank, 7);
        assert!(b.square_zero && b.image_equals_kernel && b.isotropic);
        assert!(spans_equal(&b.kernel, &z1_kernel_basis()));
        let scaled = boundary_kernel(&z1.scale(&Rat::int(3)), &cal()).unwrap();
        assert!(spans_equal(&scaled.kernel, &z1_kernel_basis()));
        let one = boundary_kernel(&Spinor::vacuum(space()), &cal()).unwrap();
        assert_eq!(one.rank, 0);
    }

    #[test]
    fn split_z0_is_rational() {
        let c = cal();
        let sd = split(&z0(), &c).unwrap();
        assert_eq!(sd.m, QuadRat::rational(Rat::int(24)));
        assert!(sd.proj_plus.nonzeros().iter().all(|(_, _, x)| x.is_rational()));
        assert_eq!(sd.proj_plus, to_quad(&projector_v7p()));
        assert_eq!(sd.proj_minus, to_quad(&projector_v7()));
        let m = m_z(&z0(), &c).unwrap();
        assert!(check_split(&sd, &m).pass);
        let sd2 = split(&z0().scale(&Rat::int(2)), &c).unwrap();
        assert_eq!(sd2.m, QuadRat::rational(Rat::int(384)));
        assert_eq!(sd2.proj_plus, sd.proj_plus);
    }

    #[test]
    fn split_rejects_boundary() {
        let (_, z1) = select_z1().unwrap();
        assert!(matches!(split(&z1, &cal()), Err(Error::Degenerate(_))));
    }

    #[test]
    fn double_cover() {
        let c = cal();
        let y = QuadRat::rational(Rat::int(24));
        assert_eq!(double_cover_kernels(&z0(), &y, &c).unwrap(), (7, 7));
        assert_eq!(double_cover_kernels(&z0(), &y.negated(), &c).unwrap(), (7, 7));
        let (_, z1) = select_z1().unwrap();
        assert_eq!(double_cover_kernels(&z1, &QuadRat::zero(), &c).unwrap(), (7, 7));
        assert!(double_cover_kernels(&z0(), &QuadRat::one(), &c).is_err());
    }

    #[test]
    fn swap_word_literal_behaviour() {
        let r = swap_check().unwrap();
        assert!(r.b_orthogonal);
        let expected = Spinor::from_terms(
            space(),
            &[
                (&[], Rat::int(8)),
                (&[1, 2, 3, 7], Rat::int(8)),
                (&[4, 5, 6, 7], Rat::int(8)),
                (&[1, 2, 3, 4, 5, 6], Rat::int(-8)),
            ],
        )
        .unwrap();
        assert_eq!(r.g_z0, expected);
        assert_eq!(r.epsilon, None);
        assert_eq!(r.v7_images.iter().filter(|x| x.in_target).count(), 6);
        assert!(!r.v7_images[6].in_target);
        assert_eq!(r.signature_v7, (3, 4));
        assert_eq!(r.signature_v7p, (4, 3));
        assert!(r.supplementary.fixes_z0 && r.supplementary.exchanges);
        assert!(!r.pass);
    }

    #[test]
    fn invariance_with_unit_letters() {
        let c = cal();
        let v = plus(&e(1), &f(1));
        let w = plus(&e(2).scale(&Rat::int(2)), &f(2).scale(&Rat::new(1, 2)));
        let r = invariance_check(&z0(), &v, &w, &c).unwrap();
        assert_eq!(r.factor, Rat::int(1));
        assert!(r.pass);
        let v2 = v.scale(&Rat::int(2));
        let r2 = invariance_check(&z0(), &v2, &w, &c).unwrap();
        assert_eq!(r2.factor, Rat::int(256));
        assert!(r2.pass);
        assert!(invariance_check(&z0(), &e(1), &w, &c).is_err());
    }

    #[test]
    fn theta_on_golden_components() {
        let r = theta_golden(&cal()).unwrap();
        assert!(r.decomposes && r.theta_v7 && r.theta_v7p);
        assert!(r.pass);
        // the printed coefficients do not give a multiple of the projector
        assert_eq!(r.printed_scalar, None);
    }

    #[test]
    fn theta_additivity_on_orthogonal_pairs() {
        assert!(theta_additive(&omega_v7(), &omega_v7p()).unwrap());
        let mut rng = SplitMix64::new(17);
        for _ in 0..5 {
            let (t, tp) = random_orthogonal_pair(&mut rng, 3);
            assert!(theta_additive(&t, &tp).unwrap());
        }
    }

    #[test]
    fn octic_reports() {
        let c = cal();
        assert!(verify_octic_mf(&z0(), &c).unwrap().pass);
        let (_, z1) = select_z1().unwrap();
        let r = verify_octic_mf(&z1, &c).unwrap();
        assert!(r.pass);
        assert_eq!(r.j8, Rat::zero());
    }
}
