//! Verification campaigns: golden suites, seeded randomized trials,
//! calibration constants and the JSON reports the CLI emits.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::clifford::Spinor;
use crate::error::{Error, Result};
use crate::exterior::Multivector;
use crate::heptic;
use crate::matrix::Matrix;
use crate::mf::ThreeForm;
use crate::rng::{random_anisotropic_vector, random_even_spinor, random_invertible, random_three_form, SplitMix64};
use crate::scalar::{QuadRat, Rat};
use crate::sedecic;
use crate::spin10::{self, PairSpinor};
use crate::spin14;

pub const SIDECAR_VERSION: u32 = 1;

/// Coefficient range for the Clifford letters and GL matrices drawn inside
/// trials; kept small so the transformed points stay cheap.
const AUX_RANGE: u64 = 2;
const HEPTIC_COVARIANCE_TRIALS: u64 = 20;
const SEDECIC_COVARIANCE_TRIALS: u64 = 10;
const ADDITIVITY_PAIRS: u64 = 20;
const SPLIT_TRIALS: u64 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    Spin14,
    Spin10,
    Heptic,
    Sedecic,
}

impl Case {
    pub const ALL: [Case; 4] = [Case::Spin14, Case::Spin10, Case::Heptic, Case::Sedecic];

    pub fn name(self) -> &'static str {
        match self {
            Case::Spin14 => "spin14",
            Case::Spin10 => "spin10",
            Case::Heptic => "heptic",
            Case::Sedecic => "sedecic",
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Case> {
        Case::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown case {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub case: Case,
    pub trials: u64,
    pub seed: u64,
    pub coeff_range: u64,
}

impl RunConfig {
    pub fn new(case: Case, trials: u64, seed: u64, coeff_range: u64) -> Result<RunConfig> {
        if trials == 0 {
            return Err(Error::Invalid("trials must be at least 1".into()));
        }
        if coeff_range == 0 {
            return Err(Error::Invalid("coeff-range must be at least 1".into()));
        }
        Ok(RunConfig {
            case,
            trials,
            seed,
            coeff_range,
        })
    }

    /// Stream for golden-suite draws, disjoint from the trial streams.
    fn aux_stream(&self, k: u64) -> SplitMix64 {
        SplitMix64::for_trial(self.seed, u64::MAX - k)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spin14Constants {
    pub norm: Rat,
    pub rho: Rat,
    /// Invariance exponent p in j8(vw·z) = (N(v)N(w))^p j8(z).
    pub p: i32,
    /// ε with g·z₀ = ε·z₀ for the literal swap word, if any.
    pub epsilon: Option<Rat>,
    pub z1_reading: spin14::Z1Reading,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spin10Constants {
    pub norm: Rat,
    pub p: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SedecicConstants {
    pub lambda: Rat,
    pub status: sedecic::CalibrationStatus,
    pub verdict: sedecic::LambdaVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CaseConstants {
    Spin14(Box<Spin14Constants>),
    Spin10(Spin10Constants),
    Sedecic(SedecicConstants),
    /// The heptic pipeline has no free constants.
    None,
}

pub fn spin14_constants() -> Result<(spin14::Calibration, Spin14Constants)> {
    let cal = spin14::calibrate()?;
    let (reading, _) = spin14::select_z1()?;
    let swap = spin14::swap_check()?;
    let c = Spin14Constants {
        norm: cal.norm.clone(),
        rho: cal.rho.clone(),
        p: spin14::INVARIANCE_EXPONENT,
        epsilon: swap.epsilon,
        z1_reading: reading,
    };
    Ok((cal, c))
}

pub fn spin10_constants() -> Result<Spin10Constants> {
    Ok(Spin10Constants {
        norm: spin10::calibrate()?,
        p: spin10::INVARIANCE_EXPONENT,
    })
}

pub fn sedecic_constants(seed: u64) -> Result<(sedecic::Calibration, SedecicConstants)> {
    let cal = sedecic::calibrate(seed)?;
    let c = SedecicConstants {
        lambda: cal.lambda.clone(),
        status: cal.status,
        verdict: cal.verdict,
    };
    Ok((cal, c))
}

pub fn constants(case: Case, seed: u64) -> Result<CaseConstants> {
    Ok(match case {
        Case::Spin14 => CaseConstants::Spin14(Box::new(spin14_constants()?.1)),
        Case::Spin10 => CaseConstants::Spin10(spin10_constants()?),
        Case::Heptic => CaseConstants::None,
        Case::Sedecic => CaseConstants::Sedecic(sedecic_constants(seed)?.1),
    })
}

/// The persisted calibration constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spin14: Option<Spin14Constants>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spin10: Option<Spin10Constants>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sedecic: Option<SedecicConstants>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SidecarCheck {
    /// The section was absent and has been written.
    Stored,
    Matched,
    /// Nothing to persist for this case.
    NotApplicable,
    Mismatch {
        stored: Value,
        computed: Value,
    },
}

impl Default for Sidecar {
    fn default() -> Sidecar {
        Sidecar {
            version: SIDECAR_VERSION,
            spin14: None,
            spin10: None,
            sedecic: None,
        }
    }
}

impl Sidecar {
    pub fn load(path: &Path) -> Result<Option<Sidecar>> {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::Invalid(format!("{}: {e}", path.display()))),
        };
        let raw: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let version = raw.get("version").and_then(Value::as_u64);
        if version != Some(SIDECAR_VERSION as u64) {
            return Err(Error::Invalid(format!(
                "{}: sidecar version {version:?}, expected {SIDECAR_VERSION}",
                path.display()
            )));
        }
        serde_json::from_value(raw)
            .map(Some)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = to_json_string(self)?;
        std::fs::write(path, text + "\n").map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
    }

    /// Installs `c`; returns the previous value of that section.
    pub fn set(&mut self, c: &CaseConstants) -> Option<Value> {
        fn swap<T: Clone + Serialize>(slot: &mut Option<T>, v: &T) -> Option<Value> {
            let old = slot.replace(v.clone());
            old.map(|o| serde_json::to_value(o).expect("plain data"))
        }
        match c {
            CaseConstants::Spin14(x) => swap(&mut self.spin14, x.as_ref()),
            CaseConstants::Spin10(x) => swap(&mut self.spin10, x),
            CaseConstants::Sedecic(x) => swap(&mut self.sedecic, x),
            CaseConstants::None => None,
        }
    }

    fn section(&self, c: &CaseConstants) -> Option<Value> {
        let v = match c {
            CaseConstants::Spin14(_) => serde_json::to_value(&self.spin14),
            CaseConstants::Spin10(_) => serde_json::to_value(&self.spin10),
            CaseConstants::Sedecic(_) => serde_json::to_value(&self.sedecic),
            CaseConstants::None => return None,
        };
        v.ok().filter(|v| !v.is_null())
    }
}

/// Compares `c` with the sidecar at `path`, writing the section when it is
/// missing.
pub fn check_sidecar(path: &Path, c: &CaseConstants) -> Result<SidecarCheck> {
    if *c == CaseConstants::None {
        return Ok(SidecarCheck::NotApplicable);
    }
    let mut car = Sidecar::load(path)?.unwrap_or_default();
    let computed = serde_json::to_value(c).map_err(|e| Error::Invalid(e.to_string()))?;
    match car.section(c) {
        Some(stored) if stored == computed => Ok(SidecarCheck::Matched),
        Some(stored) => Ok(SidecarCheck::Mismatch { stored, computed }),
        None => {
            car.set(c);
            car.save(path)?;
            Ok(SidecarCheck::Stored)
        }
    }
}

/// Pretty JSON with a stable layout.
pub fn to_json_string<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map_err(|e| Error::Invalid(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

impl Check {
    fn new(name: &str, pass: bool, detail: Value) -> Check {
        Check {
            name: name.into(),
            pass,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialVerdict {
    pub index: u64,
    /// The case's invariant at the trial point.
    pub invariant: Rat,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failed: Vec<String>,
}

/// A printed value that the computation does not reproduce. Conflicts are
/// reported, not counted as failures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conflict {
    pub item: String,
    pub note: String,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub location: String,
    pub check: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    CalibrationFailed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: RunConfig,
    pub calibration: CaseConstants,
    pub golden: Vec<Check>,
    pub trials: Vec<TrialVerdict>,
    pub conflicts: Vec<Conflict>,
    pub failures: Vec<Failure>,
    pub verdict: Verdict,
}

impl Report {
    fn assemble(
        config: &RunConfig,
        calibration: CaseConstants,
        golden: Vec<Check>,
        trials: Vec<TrialVerdict>,
        conflicts: Vec<Conflict>,
    ) -> Report {
        let mut failures: Vec<Failure> = golden
            .iter()
            .filter(|c| !c.pass)
            .map(|c| Failure {
                location: "golden".into(),
                check: c.name.clone(),
            })
            .collect();
        for t in &trials {
            for name in &t.failed {
                failures.push(Failure {
                    location: format!("trial {}", t.index),
                    check: name.clone(),
                });
            }
        }
        let verdict = if failures.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Report {
            config: config.clone(),
            calibration,
            golden,
            trials,
            conflicts,
            failures,
            verdict,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Collects named boolean checks for one trial.
struct TrialChecks {
    failed: Vec<String>,
}

impl TrialChecks {
    fn new() -> TrialChecks {
        TrialChecks { failed: Vec::new() }
    }

    fn check(&mut self, name: &str, ok: bool) {
        if !ok {
            self.failed.push(name.into());
        }
    }

    /// An error inside a check counts as that check failing.
    fn check_result(&mut self, name: &str, r: Result<bool>) {
        self.check(name, r.unwrap_or(false));
    }

    fn finish(self, index: u64, invariant: Rat) -> TrialVerdict {
        TrialVerdict {
            index,
            invariant,
            pass: self.failed.is_empty(),
            failed: self.failed,
        }
    }
}

fn run_trials(cfg: &RunConfig, f: impl Fn(u64, &mut SplitMix64) -> TrialVerdict + Sync) -> Vec<TrialVerdict> {
    (0..cfg.trials)
        .into_par_iter()
        .map(|i| f(i, &mut SplitMix64::for_trial(cfg.seed, i)))
        .collect()
}

pub fn spin14_trial_point(cfg: &RunConfig, index: u64) -> Spinor {
    random_even_spinor(
        spin14::space(),
        &mut SplitMix64::for_trial(cfg.seed, index),
        cfg.coeff_range,
    )
}

fn spin14_golden(cfg: &RunConfig, cal: &spin14::Calibration) -> Result<(Vec<Check>, Vec<Conflict>)> {
    let mut g = Vec::new();
    let mut conflicts = Vec::new();
    let z0 = spin14::z0();
    let m0 = spin14::m_z(&z0, cal)?;
    g.push(Check::new(
        "m_z0_golden",
        m0.matrix == spin14::golden_m_z0(),
        Value::Null,
    ));
    g.push(Check::new(
        "m_z0_square",
        m0.square() == Matrix::scalar_id(14, &Rat::int(576)),
        Value::Null,
    ));
    let j0 = spin14::j8(&z0, cal)?;
    g.push(Check::new("j8_z0", j0 == Rat::int(576), json!(j0.to_string())));
    let j2 = spin14::j8(&z0.scale(&Rat::int(2)), cal)?;
    g.push(Check::new("j8_2z0", j2 == Rat::int(147456), json!(j2.to_string())));

    let (reading, z1) = spin14::select_z1()?;
    g.push(Check::new(
        "z1_reading",
        true,
        json!({ "k": reading.k, "spinor": reading.spinor }),
    ));
    let j1 = spin14::j8(&z1, cal)?;
    g.push(Check::new("j8_z1", j1.is_zero(), json!(j1.to_string())));
    let b = spin14::boundary_kernel(&z1, cal)?;
    let kernel_ok = spin14::spans_equal(&b.kernel, &spin14::z1_kernel_basis());
    g.push(Check::new(
        "m_z1_structure",
        b.square_zero && b.rank == 7 && b.image_equals_kernel && b.isotropic && kernel_ok,
        json!({
            "rank": b.rank,
            "square_zero": b.square_zero,
            "image_equals_kernel": b.image_equals_kernel,
            "isotropic": b.isotropic,
            "kernel_is_printed_span": kernel_ok,
        }),
    ));
    let m1 = spin14::m_z(&z1, cal)?;
    let diffs = spin14::entry_failures(&spin14::printed_m_z1(), &m1.matrix);
    if !diffs.is_empty() {
        conflicts.push(Conflict {
            item: "m_z1_entries".into(),
            note: "computed M_z1 = 8(3f7^2 + 6e1f4 - 6e2f5 - 6e6f3) has the printed support \
                   but not the printed cross-term weights"
                .into(),
            detail: serde_json::to_value(&diffs).map_err(|e| Error::Invalid(e.to_string()))?,
        });
    }

    let theta = spin14::theta_golden(cal)?;
    g.push(Check::new(
        "theta_golden",
        theta.pass,
        serde_json::to_value(&theta).map_err(|e| Error::Invalid(e.to_string()))?,
    ));
    if theta.printed_scalar.is_none() {
        conflicts.push(Conflict {
            item: "theta_printed_omega".into(),
            note: "Theta of the printed Omega is not a multiple of pi_V7; the V7 component \
                   of Omega_z0/2 is used instead"
                .into(),
            detail: Value::Null,
        });
    }
    let mut rng = cfg.aux_stream(0);
    let mut additive = 0;
    for _ in 0..ADDITIVITY_PAIRS {
        let (t, tp) = spin14::random_orthogonal_pair(&mut rng, cfg.coeff_range);
        if spin14::theta_additive(&t, &tp)? {
            additive += 1;
        }
    }
    g.push(Check::new(
        "theta_additivity",
        additive == ADDITIVITY_PAIRS,
        json!({ "pairs": ADDITIVITY_PAIRS, "additive": additive }),
    ));

    let sd = spin14::split(&z0, cal)?;
    let sc = spin14::check_split(&sd, &m0);
    let rational = sd.m == QuadRat::rational(Rat::int(24))
        && sd.proj_plus == spin14::to_quad(&spin14::projector_v7p())
        && sd.proj_minus == spin14::to_quad(&spin14::projector_v7());
    g.push(Check::new(
        "split_z0",
        sc.pass && rational,
        json!({ "m": sd.m.to_string() }),
    ));
    let sd2 = spin14::split(&z0.scale(&Rat::int(2)), cal)?;
    g.push(Check::new(
        "split_2z0",
        sd2.m == QuadRat::rational(Rat::int(384)) && sd2.proj_plus == sd.proj_plus,
        json!({ "m": sd2.m.to_string() }),
    ));
    g.push(Check::new(
        "split_z1_rejected",
        spin14::split(&z1, cal).is_err(),
        Value::Null,
    ));
    let dc = spin14::double_cover_kernels(&z0, &QuadRat::rational(Rat::int(24)), cal)?;
    g.push(Check::new("double_cover_z0", dc == (7, 7), json!([dc.0, dc.1])));

    let z = spin14_trial_point(cfg, 0);
    let jz = spin14::j8(&z, cal)?;
    let mz = spin14::m_z(&z, cal)?;
    let mut homogeneous = true;
    for t in [Rat::int(2), Rat::int(-3), Rat::new(1, 2)] {
        let zt = z.scale(&t);
        homogeneous &= spin14::j8(&zt, cal)? == t.pow(8) * &jz;
        homogeneous &= spin14::m_z(&zt, cal)?.matrix == mz.matrix.scale(&t.pow(4));
    }
    g.push(Check::new("homogeneity", homogeneous, json!(["2", "-3", "1/2"])));

    let swap = spin14::swap_check()?;
    g.push(Check::new("swap_b_orthogonal", swap.b_orthogonal, Value::Null));
    if !swap.pass {
        let moved = swap
            .v7_images
            .iter()
            .chain(&swap.v7p_images)
            .filter(|x| !x.in_target)
            .map(|x| x.source.clone())
            .collect::<Vec<_>>();
        conflicts.push(Conflict {
            item: "swap_element".into(),
            note: "the printed word does not exchange V7 and V7' and does not fix z0 up to sign; \
                   B has signature (3,4) on V7 and (4,3) on V7'"
                .into(),
            detail: json!({
                "g_z0": spin14::spinor_name(&swap.g_z0),
                "epsilon": swap.epsilon.as_ref().map(Rat::to_string),
                "not_exchanged": moved,
                "signature_v7": swap.signature_v7,
                "signature_v7p": swap.signature_v7p,
                "supplementary": swap.supplementary,
            }),
        });
    }
    Ok((g, conflicts))
}

fn spin14_trial(cal: &spin14::Calibration, cfg: &RunConfig, i: u64, rng: &mut SplitMix64) -> TrialVerdict {
    let sp = spin14::space();
    let z = random_even_spinor(sp, rng, cfg.coeff_range);
    let mut c = TrialChecks::new();
    let report = match spin14::verify_octic_mf(&z, cal) {
        Ok(r) => r,
        Err(_) => {
            c.check("octic_mf", false);
            return c.finish(i, Rat::zero());
        }
    };
    c.check("octic_mf", report.failures.is_empty() && report.self_adjoint);
    c.check("trace_zero", report.trace.is_zero());
    c.check_result(
        "rho_global",
        spin14::direct_ratio(&z).map(|r| r.as_ref() == Some(&cal.rho)),
    );
    let j = report.j8.clone();
    if i < SPLIT_TRIALS && !j.is_zero() {
        let split = spin14::split(&z, cal).and_then(|sd| Ok(spin14::check_split(&sd, &spin14::m_z(&z, cal)?).pass));
        c.check_result("split", split);
        let dc = QuadRat::sqrt_of(&j).and_then(|y| spin14::double_cover_kernels(&z, &y, cal));
        c.check_result("double_cover", dc.map(|k| k == (7, 7)));
    }
    let v = random_anisotropic_vector(sp, rng, AUX_RANGE);
    let w = random_anisotropic_vector(sp, rng, AUX_RANGE);
    c.check_result("invariance", spin14::invariance_check(&z, &v, &w, cal).map(|r| r.pass));
    c.finish(i, j)
}

fn verify_spin14(cfg: &RunConfig) -> Result<Report> {
    let (cal, constants) = spin14_constants()?;
    let (golden, conflicts) = spin14_golden(cfg, &cal)?;
    let trials = run_trials(cfg, |i, rng| spin14_trial(&cal, cfg, i, rng));
    Ok(Report::assemble(
        cfg,
        CaseConstants::Spin14(Box::new(constants)),
        golden,
        trials,
        conflicts,
    ))
}

pub fn spin10_trial_point(cfg: &RunConfig, rng: &mut SplitMix64) -> PairSpinor {
    let sp = spin10::space();
    let s1 = random_even_spinor(sp, rng, cfg.coeff_range);
    let s2 = random_even_spinor(sp, rng, cfg.coeff_range);
    PairSpinor::new(s1, s2).expect("even spinors of rank 5")
}

fn verify_spin10(cfg: &RunConfig) -> Result<Report> {
    let constants = spin10_constants()?;
    let norm = constants.norm.clone();
    let z = spin10::generic_point();
    let r = spin10::verify_quartic_mf(&z, &norm)?;
    let m = spin10::m10(&z, &norm)?;
    let mut g = vec![
        Check::new("m_z_golden", m.matrix == spin10::golden_m(), Value::Null),
        Check::new("j4", r.j4 == Rat::int(36), json!(r.j4.to_string())),
        Check::new(
            "shifted_square",
            r.pass && r.shifted_square.as_ref() == Some(&Rat::int(16)),
            json!({
                "computed": r.shifted_square.as_ref().map(Rat::to_string),
                "denominator": spin10::SHIFT_DENOMINATOR,
            }),
        ),
        Check::new(
            "eigen_multiplicities",
            r.eigen_multiplicities == (7, 3),
            json!([r.eigen_multiplicities.0, r.eigen_multiplicities.1]),
        ),
        Check::new("omega_antisymmetric", spin10::swap_sign(&z)? == Some(-1), Value::Null),
        Check::new(
            "omega_shear_invariant",
            spin10::shear_invariant(&z, &Rat::new(3, 7))?,
            Value::Null,
        ),
    ];
    let mut rng = cfg.aux_stream(0);
    let t = spin10_trial_point(cfg, &mut rng);
    let jt = spin10::j4(&t, &norm)?;
    let mut homogeneous = true;
    for s in [Rat::int(2), Rat::int(-3), Rat::new(1, 2)] {
        homogeneous &= spin10::j4(&t.scale(&s), &norm)? == s.pow(4) * &jt;
    }
    g.push(Check::new("homogeneity", homogeneous, Value::Null));
    let conflicts = vec![Conflict {
        item: "shifted_square_denominator".into(),
        note: spin10::CONFLICT_162.into(),
        detail: json!({
            "printed": r.printed_value.to_string(),
            "computed": r.expected.to_string(),
        }),
    }];
    let trials = run_trials(cfg, |i, rng| {
        let z = spin10_trial_point(cfg, rng);
        let mut c = TrialChecks::new();
        let Ok(r) = spin10::verify_quartic_mf(&z, &norm) else {
            c.check("quartic_mf", false);
            return c.finish(i, Rat::zero());
        };
        c.check("quartic_mf", r.pass);
        c.check_result(
            "omega_antisymmetric",
            spin10::omega10(&z).and_then(|o| Ok(o.is_zero() || spin10::swap_sign(&z)? == Some(-1))),
        );
        let lambda = rng.coeff_rat(cfg.coeff_range);
        c.check_result("omega_shear_invariant", spin10::shear_invariant(&z, &lambda));
        let sp = spin10::space();
        let v = random_anisotropic_vector(sp, rng, AUX_RANGE);
        let w = random_anisotropic_vector(sp, rng, AUX_RANGE);
        c.check_result("invariance", spin10::invariance_holds(&z, &v, &w, &norm));
        c.finish(i, r.j4)
    });
    Ok(Report::assemble(
        cfg,
        CaseConstants::Spin10(constants),
        g,
        trials,
        conflicts,
    ))
}

/// The form restricted to the labels other than `drop` (0-based).
fn drop_label(w: &ThreeForm, drop: usize) -> ThreeForm {
    let mv = Multivector::from_terms(
        w.n(),
        w.mv()
            .iter()
            .filter(|(k, _)| !k.contains(drop))
            .map(|(k, c)| (*k, c.clone())),
    )
    .expect("same labels");
    ThreeForm::new(mv).expect("grade 3")
}

fn verify_heptic(cfg: &RunConfig) -> Result<Report> {
    let star = heptic::associative_form();
    let r = heptic::verify_heptic_mf(&star)?;
    let e123 = ThreeForm::from_terms(heptic::N, &[([1, 2, 3], 1)])?;
    let mut g = vec![
        Check::new(
            "p_associative",
            heptic::pmat(&star)? == Matrix::identity(7),
            Value::Null,
        ),
        Check::new(
            "r_associative",
            heptic::rmat(&star)? == Matrix::scalar_id(7, &Rat::int(-24)),
            Value::Null,
        ),
        Check::new("j7_associative", r.pass && !r.j7.is_zero(), json!(r.j7.to_string())),
        Check::new("j7_decomposable", heptic::j7(&e123)?.is_zero(), Value::Null),
    ];
    let w = random_three_form(heptic::N, &mut cfg.aux_stream(0), cfg.coeff_range);
    let jw = heptic::j7(&w)?;
    let mut homogeneous = true;
    for t in [Rat::int(2), Rat::int(-3), Rat::new(1, 2)] {
        homogeneous &= heptic::j7(&w.scale(&t))? == t.pow(7) * &jw;
    }
    g.push(Check::new("homogeneity", homogeneous, Value::Null));
    let trials = run_trials(cfg, |i, rng| {
        let w = random_three_form(heptic::N, rng, cfg.coeff_range);
        let mut c = TrialChecks::new();
        let Ok(r) = heptic::verify_heptic_mf(&w) else {
            c.check("heptic_mf", false);
            return c.finish(i, Rat::zero());
        };
        c.check("heptic_mf", r.pass);
        let sub = drop_label(&w, (i % heptic::N as u64) as usize);
        c.check_result("six_label_vanishing", heptic::j7(&sub).map(|j| j.is_zero()));
        if i < HEPTIC_COVARIANCE_TRIALS {
            let gm = random_invertible(heptic::N, rng, AUX_RANGE);
            c.check_result("det3_covariance", heptic::gl_covariance(&w, &gm).map(|x| x.pass));
        }
        c.finish(i, r.j7)
    });
    Ok(Report::assemble(cfg, CaseConstants::None, g, trials, Vec::new()))
}

/// The report for a failed sedecic calibration.
fn sedecic_failed(cfg: &RunConfig, constants: SedecicConstants) -> Report {
    Report {
        config: cfg.clone(),
        calibration: CaseConstants::Sedecic(constants),
        golden: Vec::new(),
        trials: Vec::new(),
        conflicts: Vec::new(),
        failures: vec![Failure {
            location: "calibration".into(),
            check: "lambda".into(),
        }],
        verdict: Verdict::CalibrationFailed,
    }
}

fn verify_sedecic(cfg: &RunConfig) -> Result<Report> {
    let (cal, constants) = sedecic_constants(cfg.seed)?;
    if cal.status != sedecic::CalibrationStatus::Calibrated {
        return Ok(sedecic_failed(cfg, constants));
    }
    let e123 = ThreeForm::from_terms(sedecic::N, &[([1, 2, 3], 1)])?;
    let r0 = sedecic::verify_sedecic_mf(&e123, &cal)?;
    let mut g = vec![
        Check::new(
            "calibration",
            cal.validated_points == 2,
            json!({ "verdict": cal.verdict, "validated_points": cal.validated_points }),
        ),
        Check::new("j16_decomposable", r0.pass && r0.j16.is_zero(), Value::Null),
    ];
    let z = random_three_form(sedecic::N, &mut cfg.aux_stream(0), cfg.coeff_range);
    let jz = sedecic::j16(&z, &cal)?;
    let mut homogeneous = true;
    for t in [Rat::int(2), Rat::new(-1, 3)] {
        homogeneous &= sedecic::j16(&z.scale(&t), &cal)? == t.pow(16) * &jz;
    }
    g.push(Check::new("homogeneity", homogeneous, json!(jz.to_string())));
    let trials = run_trials(cfg, |i, rng| {
        let z = random_three_form(sedecic::N, rng, cfg.coeff_range);
        let mut c = TrialChecks::new();
        let Ok(r) = sedecic::verify_sedecic_mf(&z, &cal) else {
            c.check("sedecic_mf", false);
            return c.finish(i, Rat::zero());
        };
        c.check("sedecic_mf", r.pass);
        if i < SEDECIC_COVARIANCE_TRIALS {
            let gm = random_invertible(sedecic::N, rng, 1);
            c.check_result("det6_covariance", sedecic::gl_covariance(&z, &gm, &cal).map(|x| x.pass));
        }
        c.finish(i, r.j16)
    });
    Ok(Report::assemble(
        cfg,
        CaseConstants::Sedecic(constants),
        g,
        trials,
        Vec::new(),
    ))
}

/// Golden suite plus `cfg.trials` randomized checks for one case.
pub fn verify(cfg: &RunConfig) -> Result<Report> {
    match cfg.case {
        Case::Spin14 => verify_spin14(cfg),
        Case::Spin10 => verify_spin10(cfg),
        Case::Heptic => verify_heptic(cfg),
        Case::Sedecic => verify_sedecic(cfg),
    }
}

/// Golden points and their values, for `vectors`.
pub fn golden_vectors(case: Case) -> Result<Value> {
    let err = |e: serde_json::Error| Error::Invalid(e.to_string());
    match case {
        Case::Spin14 => {
            let cal = spin14::calibrate()?;
            let z0 = spin14::z0();
            let (reading, z1) = spin14::select_z1()?;
            Ok(json!({
                "case": "spin14",
                "z0": serde_json::to_value(&z0).map_err(err)?,
                "z1": serde_json::to_value(&z1).map_err(err)?,
                "z1_reading": serde_json::to_value(&reading).map_err(err)?,
                "m_z0": serde_json::to_value(spin14::m_z(&z0, &cal)?.matrix.to_json()).map_err(err)?,
                "m_z1": serde_json::to_value(spin14::m_z(&z1, &cal)?.matrix.to_json()).map_err(err)?,
                "j8_z0": spin14::j8(&z0, &cal)?.to_string(),
                "j8_z1": spin14::j8(&z1, &cal)?.to_string(),
            }))
        }
        Case::Spin10 => {
            let norm = spin10::calibrate()?;
            let z = spin10::generic_point();
            Ok(json!({
                "case": "spin10",
                "z": serde_json::to_value(&z).map_err(err)?,
                "m_z": serde_json::to_value(spin10::m10(&z, &norm)?.matrix.to_json()).map_err(err)?,
                "j4": spin10::j4(&z, &norm)?.to_string(),
            }))
        }
        Case::Heptic | Case::Sedecic => Err(Error::Invalid(format!("{case} has no golden vectors"))),
    }
}

/// A parsed input point.
#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    Spin14(Spinor),
    Spin10(PairSpinor),
    Form(ThreeForm),
}

pub fn parse_point(case: Case, text: &str) -> Result<Point> {
    let perr = |e: serde_json::Error| Error::Parse(e.to_string());
    match case {
        Case::Spin14 => {
            let z: Spinor = serde_json::from_str(text).map_err(perr)?;
            if z.space().m() != spin14::M {
                return Err(Error::SpaceMismatch(spin14::M, z.space().m()));
            }
            Ok(Point::Spin14(z))
        }
        Case::Spin10 => Ok(Point::Spin10(serde_json::from_str(text).map_err(perr)?)),
        Case::Heptic | Case::Sedecic => {
            let w: ThreeForm = serde_json::from_str(text).map_err(perr)?;
            let n = if case == Case::Heptic { heptic::N } else { sedecic::N };
            if w.n() != n {
                return Err(Error::LabelMismatch(n, w.n()));
            }
            Ok(Point::Form(w))
        }
    }
}

/// The case's invariant at a point. The sedecic case calibrates from `seed`.
pub fn evaluate(case: Case, point: &Point, seed: u64) -> Result<Rat> {
    match (case, point) {
        (Case::Spin14, Point::Spin14(z)) => spin14::j8(z, &spin14::calibrate()?),
        (Case::Spin10, Point::Spin10(z)) => spin10::j4(z, &spin10::calibrate()?),
        (Case::Heptic, Point::Form(w)) => heptic::j7(w),
        (Case::Sedecic, Point::Form(w)) => sedecic::j16(w, &sedecic::calibrate(seed)?),
        _ => Err(Error::Invalid("point does not match case".into())),
    }
}

/// The matrices of the factorization at a point.
pub fn matrices(case: Case, point: &Point, seed: u64) -> Result<Value> {
    let err = |e: serde_json::Error| Error::Invalid(e.to_string());
    let mj = |m: Matrix<Rat>| serde_json::to_value(m.to_json()).map_err(err);
    match (case, point) {
        (Case::Spin14, Point::Spin14(z)) => Ok(json!({ "m": mj(spin14::m_z(z, &spin14::calibrate()?)?.matrix)? })),
        (Case::Spin10, Point::Spin10(z)) => Ok(json!({ "m": mj(spin10::m10(z, &spin10::calibrate()?)?.matrix)? })),
        (Case::Heptic, Point::Form(w)) => Ok(json!({ "p": mj(heptic::pmat(w)?)?, "r": mj(heptic::rmat(w)?)? })),
        (Case::Sedecic, Point::Form(w)) => {
            let cal = sedecic::calibrate(seed)?;
            if cal.status != sedecic::CalibrationStatus::Calibrated {
                return Err(Error::Invalid("sedecic calibration failed".into()));
            }
            let s = sedecic::matrices(w, &cal.lambda)?;
            Ok(json!({ "p": mj(s.p)?, "q": mj(s.q)?, "r": mj(s.r)? }))
        }
        _ => Err(Error::Invalid("point does not match case".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_names_round_trip() {
        for c in Case::ALL {
            assert_eq!(c.name().parse::<Case>().unwrap(), c);
        }
        assert!("e8".parse::<Case>().is_err());
        assert!(RunConfig::new(Case::Heptic, 0, 1, 9).is_err());
        assert!(RunConfig::new(Case::Heptic, 1, 1, 0).is_err());
    }

    #[test]
    fn verdict_tracks_failures() {
        let cfg = RunConfig::new(Case::Heptic, 3, 2024, 9).unwrap();
        let r = verify(&cfg).unwrap();
        assert!(r.passed());
        assert!(r.failures.is_empty());
        assert_eq!(r.trials.len(), 3);
        assert!(r.trials.iter().enumerate().all(|(i, t)| t.index == i as u64));
        let bad = Check::new("x", false, Value::Null);
        let r2 = Report::assemble(&cfg, CaseConstants::None, vec![bad], Vec::new(), Vec::new());
        assert_eq!(r2.verdict, Verdict::Fail);
        assert_eq!(r2.failures.len(), 1);
    }

    #[test]
    fn sidecar_store_then_match_then_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cal.json");
        let c = constants(Case::Spin10, 2024).unwrap();
        assert_eq!(check_sidecar(&path, &c).unwrap(), SidecarCheck::Stored);
        assert_eq!(check_sidecar(&path, &c).unwrap(), SidecarCheck::Matched);
        let other = CaseConstants::Spin10(Spin10Constants {
            norm: Rat::int(5),
            p: 2,
        });
        assert!(matches!(
            check_sidecar(&path, &other).unwrap(),
            SidecarCheck::Mismatch { .. }
        ));
        assert_eq!(
            check_sidecar(&path, &CaseConstants::None).unwrap(),
            SidecarCheck::NotApplicable
        );
        std::fs::write(&path, r#"{"version": 99}"#).unwrap();
        assert!(Sidecar::load(&path).is_err());
    }

    #[test]
    fn points_parse_by_case() {
        let z = serde_json::to_string(&spin14::z0()).unwrap();
        let p = parse_point(Case::Spin14, &z).unwrap();
        assert_eq!(evaluate(Case::Spin14, &p, 0).unwrap(), Rat::int(576));
        assert!(parse_point(Case::Spin10, &z).is_err());
        let w = serde_json::to_string(&heptic::associative_form()).unwrap();
        assert!(parse_point(Case::Sedecic, &w).is_err());
        let p = parse_point(Case::Heptic, &w).unwrap();
        assert_eq!(evaluate(Case::Heptic, &p, 0).unwrap(), Rat::int(-24));
        assert!(golden_vectors(Case::Heptic).is_err());
    }
}
