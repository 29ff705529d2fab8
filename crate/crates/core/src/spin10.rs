//! The m = 5 case on V₂⊗Δ₁₀: z = v₁⊗s₁ + v₂⊗s₂, its three-form in
//! ∧³V₁₀ ≅ ∧²Δ₁₀, the matrix M_z, the quartic J₄ and the shifted
//! factorization of J₄².

use serde::{Deserialize, Serialize};

use crate::clifford::{cl_word, Parity, Spinor, SplitSpace, Vector};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::mf::{calibrate_norm, omega_pair, orthogonal_projector, theta, SymEndo, ThreeForm};
use crate::scalar::Rat;
use crate::spin14::{entry_failures, spinor_norm, EntryFailure};

pub const M: usize = 5;

/// Calibration: M_z(e₁) = 6e₁ at the generic point.
pub const CALIBRATION_INDEX: usize = 0;
pub const CALIBRATION_TARGET: i64 = 6;

/// j4(v·w·z) = (N(v)N(w))^P′ · j4(z).
pub const INVARIANCE_EXPONENT: i32 = 2;

/// Denominator of the shifted identity (M − J₄/18)² = J₄²/D.
pub const SHIFT_DENOMINATOR: i64 = 81;
pub const PRINTED_DENOMINATOR: i64 = 162;

pub const CONFLICT_162: &str = "printed identity uses J4^2/162; the explicit M_z = 6*pi_V7 - 2*pi_V3 \
gives (M - 2*Id)^2 = 16*Id = J4^2/81*Id with J4 = 36 (J4^2/162 = 8); verified with 81";

pub fn space() -> SplitSpace {
    SplitSpace::new(M).expect("rank 5")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PairSpinorJson", into = "PairSpinorJson")]
pub struct PairSpinor {
    s1: Spinor,
    s2: Spinor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSpinorJson {
    pub m: usize,
    pub s1: Spinor,
    pub s2: Spinor,
}

impl PairSpinor {
    pub fn new(s1: Spinor, s2: Spinor) -> Result<PairSpinor> {
        for s in [&s1, &s2] {
            if s.space().m() != M {
                return Err(Error::SpaceMismatch(M, s.space().m()));
            }
            if s.parity() != Parity::Even {
                return Err(Error::ParityMismatch("pair components must be even".into()));
            }
        }
        Ok(PairSpinor { s1, s2 })
    }

    pub fn s1(&self) -> &Spinor {
        &self.s1
    }

    pub fn s2(&self) -> &Spinor {
        &self.s2
    }

    pub fn scale(&self, t: &Rat) -> PairSpinor {
        PairSpinor {
            s1: self.s1.scale(t),
            s2: self.s2.scale(t),
        }
    }

    pub fn swapped(&self) -> PairSpinor {
        PairSpinor {
            s1: self.s2.clone(),
            s2: self.s1.clone(),
        }
    }

    pub fn zero() -> PairSpinor {
        PairSpinor {
            s1: Spinor::zero(space(), Parity::Even),
            s2: Spinor::zero(space(), Parity::Even),
        }
    }

    /// Applies the same Clifford word to both components.
    pub fn act(&self, word: &[Vector]) -> Result<PairSpinor> {
        PairSpinor::new(
            cl_word(word, &Rat::one(), &self.s1)?,
            cl_word(word, &Rat::one(), &self.s2)?,
        )
    }
}

impl From<PairSpinor> for PairSpinorJson {
    fn from(p: PairSpinor) -> PairSpinorJson {
        PairSpinorJson {
            m: M,
            s1: p.s1,
            s2: p.s2,
        }
    }
}

impl TryFrom<PairSpinorJson> for PairSpinor {
    type Error = Error;

    fn try_from(j: PairSpinorJson) -> Result<PairSpinor> {
        if j.m != M {
            return Err(Error::UnsupportedRank(j.m));
        }
        PairSpinor::new(j.s1, j.s2)
    }
}

/// z = v₁⊗(1 + e₁₂₃₄) + v₂⊗(e₁₂₃₅ + e₄₅).
pub fn generic_point() -> PairSpinor {
    let sp = space();
    let s1 = Spinor::from_terms(sp, &[(&[], Rat::one()), (&[1, 2, 3, 4], Rat::one())]).expect("even");
    let s2 = Spinor::from_terms(sp, &[(&[1, 2, 3, 5], Rat::one()), (&[4, 5], Rat::one())]).expect("even");
    PairSpinor::new(s1, s2).expect("rank 5")
}

fn e(i: usize) -> Vector {
    Vector::e(space(), i)
}

fn f(i: usize) -> Vector {
    Vector::f(space(), i)
}

/// e₀ = e₄ + f₄ and f₀ = f₄ − e₄.
pub fn e0() -> Vector {
    e(4).add(&f(4)).expect("same space")
}

pub fn f0() -> Vector {
    f(4).sub(&e(4)).expect("same space")
}

/// V₇ = span(e₀, e₁, e₂, e₃, f₁, f₂, f₃).
pub fn v7_basis() -> Vec<Vector> {
    vec![e0(), e(1), e(2), e(3), f(1), f(2), f(3)]
}

/// V₃ = span(f₀, e₅, f₅).
pub fn v3_basis() -> Vec<Vector> {
    vec![f0(), e(5), f(5)]
}

/// 6π_{V₇} − 2π_{V₃}.
pub fn golden_m() -> Matrix<Rat> {
    let p7 = orthogonal_projector(space(), &v7_basis()).expect("nondegenerate");
    let p3 = orthogonal_projector(space(), &v3_basis()).expect("nondegenerate");
    p7.scale(&Rat::int(6)).sub(&p3.scale(&Rat::int(2))).expect("shape")
}

pub fn omega10(z: &PairSpinor) -> Result<ThreeForm> {
    omega_pair(&z.s1, &z.s2)
}

pub fn raw_m10(z: &PairSpinor) -> Result<SymEndo> {
    let om = omega10(z)?;
    theta(space(), &om, &om)
}

/// The norm that sends the generic point's M(e₁) to 6e₁.
pub fn calibrate() -> Result<Rat> {
    let raw = raw_m10(&generic_point())?;
    calibrate_norm(&raw, CALIBRATION_INDEX, &Rat::int(CALIBRATION_TARGET))
}

pub fn m10(z: &PairSpinor, norm: &Rat) -> Result<SymEndo> {
    Ok(raw_m10(z)?.scale(norm))
}

pub fn j4(z: &PairSpinor, norm: &Rat) -> Result<Rat> {
    Ok(m10(z, norm)?.trace())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuarticReport {
    pub j4: Rat,
    /// The scalar c with (M − J₄/18)² = c·Id, if the square is scalar.
    pub shifted_square: Option<Rat>,
    pub expected: Rat,
    pub printed_value: Rat,
    pub failures: Vec<EntryFailure>,
    /// Kernel dimensions of M − a and M + a/3 with a = J₄/6.
    pub eigen_multiplicities: (usize, usize),
    pub self_adjoint: bool,
    pub pass: bool,
}

/// (M_z − J₄/18·Id)² = J₄²/81·Id, plus the (a ×7, −a/3 ×3) spectrum when J₄ ≠ 0.
pub fn verify_quartic_mf(z: &PairSpinor, norm: &Rat) -> Result<QuarticReport> {
    let m = m10(z, norm)?;
    let j = m.trace();
    let n = 2 * M;
    let shifted = m.matrix.sub(&Matrix::scalar_id(n, &(&j / Rat::int(18))))?;
    let sq = shifted.mul(&shifted)?;
    let expected = &j * &j / Rat::int(SHIFT_DENOMINATOR);
    let failures = entry_failures(&Matrix::scalar_id(n, &expected), &sq);
    let a = &j / Rat::int(6);
    let mult = |c: Rat| n - m.matrix.sub(&Matrix::scalar_id(n, &c)).expect("shape").rank();
    let eigen_multiplicities = (mult(a.clone()), mult(-(&a / Rat::int(3))));
    let spectrum_ok = j.is_zero() || eigen_multiplicities == (7, 3);
    let self_adjoint = m.is_self_adjoint();
    Ok(QuarticReport {
        shifted_square: sq.scalar_value(),
        printed_value: &j * &j / Rat::int(PRINTED_DENOMINATOR),
        pass: failures.is_empty() && spectrum_ok && self_adjoint,
        j4: j,
        expected,
        failures,
        eigen_multiplicities,
        self_adjoint,
    })
}

/// Sign κ with omega10(s₂, s₁) = κ·omega10(s₁, s₂), when one exists.
pub fn swap_sign(z: &PairSpinor) -> Result<Option<i64>> {
    let a = omega10(z)?;
    let b = omega10(&z.swapped())?;
    if a.is_zero() && b.is_zero() {
        return Ok(None);
    }
    if b == a {
        Ok(Some(1))
    } else if b == a.scale(&Rat::int(-1)) {
        Ok(Some(-1))
    } else {
        Ok(None)
    }
}

/// omega10(s₁ + λs₂, s₂) = omega10(s₁, s₂).
pub fn shear_invariant(z: &PairSpinor, lambda: &Rat) -> Result<bool> {
    let sheared = PairSpinor::new(z.s1.add(&z.s2.scale(lambda))?, z.s2.clone())?;
    Ok(omega10(&sheared)? == omega10(z)?)
}

/// j4(v·w·z) = (N(v)N(w))² · j4(z).
pub fn invariance_holds(z: &PairSpinor, v: &Vector, w: &Vector, norm: &Rat) -> Result<bool> {
    let (nv, nw) = (spinor_norm(v), spinor_norm(w));
    if nv.is_zero() || nw.is_zero() {
        return Err(Error::IsotropicLetter);
    }
    let moved = z.act(&[v.clone(), w.clone()])?;
    let factor = (nv * nw).pow(INVARIANCE_EXPONENT);
    Ok(j4(&moved, norm)? == factor * j4(z, norm)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::IndexSet;

    #[test]
    fn calibration_is_minus_four() {
        assert_eq!(calibrate().unwrap(), Rat::int(-4));
    }

    #[test]
    fn golden_point() {
        let norm = calibrate().unwrap();
        let z = generic_point();
        let m = m10(&z, &norm).unwrap();
        assert_eq!(m.matrix, golden_m());
        assert_eq!(j4(&z, &norm).unwrap(), Rat::int(36));
        let r = verify_quartic_mf(&z, &norm).unwrap();
        assert!(r.pass);
        assert_eq!(r.shifted_square, Some(Rat::int(16)));
        assert_eq!(r.printed_value, Rat::int(8));
        assert_eq!(r.eigen_multiplicities, (7, 3));
    }

    #[test]
    fn omega10_golden_shape() {
        // Ω = −e₁₂₃ + f₁₂₃ + ½e₀∧(e₁f₁ + e₂f₂ + e₃f₃) + ½f₀∧e₅f₅
        let om = omega10(&generic_point()).unwrap();
        let get = |p: &[usize]| om.mv().coeff(IndexSet::from_positions(p));
        assert_eq!(get(&[0, 1, 2]), Rat::int(-1));
        assert_eq!(get(&[5, 6, 7]), Rat::int(1));
        assert_eq!(om.mv().len(), 10);
        let half = Rat::new(1, 2);
        // e₀∧e₁∧f₁ = e₄e₁f₁ + f₄e₁f₁ = −e₁e₄f₁ + e₁f₁f₄
        assert_eq!(get(&[0, 3, 5]), -&half);
        assert_eq!(get(&[0, 5, 8]), half.clone());
        // f₀∧e₅∧f₅ = f₄e₅f₅ − e₄e₅f₅
        assert_eq!(get(&[3, 4, 9]), -&half);
        assert_eq!(get(&[4, 8, 9]), -&half);
    }

    #[test]
    fn antisymmetric_and_shear() {
        let z = generic_point();
        assert_eq!(swap_sign(&z).unwrap(), Some(-1));
        assert!(shear_invariant(&z, &Rat::new(3, 7)).unwrap());
        let same = PairSpinor::new(z.s1().clone(), z.s1().scale(&Rat::int(2))).unwrap();
        assert!(omega10(&same).unwrap().is_zero());
    }

    #[test]
    fn homogeneity_and_zero() {
        let norm = calibrate().unwrap();
        let z = generic_point();
        let t = Rat::int(-2);
        assert_eq!(
            m10(&z.scale(&t), &norm).unwrap().matrix,
            m10(&z, &norm).unwrap().matrix.scale(&Rat::int(16))
        );
        assert!(m10(&PairSpinor::zero(), &norm).unwrap().matrix.is_zero());
        assert_eq!(j4(&PairSpinor::zero(), &norm).unwrap(), Rat::zero());
    }

    #[test]
    fn invariance_exponent_two() {
        let norm = calibrate().unwrap();
        let v = e(1).add(&f(1).scale(&Rat::int(3))).unwrap();
        let w = e(2).sub(&f(5)).unwrap().add(&f(2)).unwrap();
        assert!(invariance_holds(&generic_point(), &v, &w, &norm).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let z = generic_point();
        let s = serde_json::to_string(&z).unwrap();
        assert!(s.starts_with(r#"{"m":5,"s1":{"m":5,"parity":"even""#));
        assert_eq!(serde_json::from_str::<PairSpinor>(&s).unwrap(), z);
    }
}
