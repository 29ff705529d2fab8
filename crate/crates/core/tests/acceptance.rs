//! Acceptance criteria 1-10, one PASS/FAIL line each.
//!
//! Criteria 2 and 5 compare against reference values the computation
//! contradicts (see README, "Known discrepancies"). They are expected red;
//! the target fails when the red set changes in either direction.

use std::process::Command;
use std::time::{Duration, Instant};

use mfact::matrix::Matrix;
use mfact::mf::omega;
use mfact::report::{self, Case, RunConfig};
use mfact::rng::{random_even_spinor, SplitMix64};
use mfact::scalar::{QuadRat, Rat};
use mfact::{heptic, sedecic, spin10, spin14};

const EXPECTED_RED: [u32; 2] = [2, 5];

struct Outcome {
    pass: bool,
    note: String,
}

fn outcome(pass: bool, note: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        note: note.into(),
    }
}

fn within(t: Instant, limit: Duration) -> bool {
    t.elapsed() < limit
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let cal = spin14::calibrate().unwrap();
    let z0 = spin14::z0();
    let m = spin14::m_z(&z0, &cal).unwrap();
    let expected = spin14::projector_v7p()
        .sub(&spin14::projector_v7())
        .unwrap()
        .scale(&Rat::int(24));
    let golden = m.matrix == expected;
    let square = m.square() == Matrix::scalar_id(14, &Rat::int(576));
    let j = spin14::j8(&z0, &cal).unwrap();
    let fast = within(t, Duration::from_secs(1));
    outcome(
        golden && square && j == Rat::int(576) && fast,
        format!("norm {}, J8(z0) = {j}, {:.0?}", cal.norm, t.elapsed()),
    )
}

fn criterion_2() -> Outcome {
    let cal = spin14::calibrate().unwrap();
    let (reading, z1) = spin14::select_z1().unwrap();
    let m = spin14::m_z(&z1, &cal).unwrap();
    let diffs = spin14::entry_failures(&spin14::printed_m_z1(), &m.matrix);
    let b = spin14::boundary_kernel(&z1, &cal).unwrap();
    let structure = b.square_zero && b.rank == 7 && b.image_equals_kernel && b.isotropic;
    let half = spin14::pure_part(&omega(&z1).unwrap()).scale(&Rat::new(1, 2));
    let unit =
        spin14::proportionality(half.mv(), spin14::z1_printed_cubic().mv()).is_some_and(|r| r.abs() == Rat::one());
    outcome(
        diffs.is_empty() && structure && unit,
        format!(
            "reading k = {}; {} entries differ from the reference matrix; square zero {}, rank {}, \
             image = kernel {}, isotropic {}, Omega unit match {unit}",
            reading.k,
            diffs.len(),
            b.square_zero,
            b.rank,
            b.image_equals_kernel,
            b.isotropic
        ),
    )
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let cal = spin14::calibrate().unwrap();
    let mut ok = 0;
    let mut homogeneous = true;
    let mut rho = true;
    for i in 0..100 {
        let z = random_even_spinor(spin14::space(), &mut SplitMix64::for_trial(2024, i), 9);
        let r = spin14::verify_octic_mf(&z, &cal).unwrap();
        if r.pass {
            ok += 1;
        }
        for s in [Rat::int(2), Rat::int(-3), Rat::new(1, 2)] {
            homogeneous &= spin14::j8(&z.scale(&s), &cal).unwrap() == s.pow(8) * &r.j8;
        }
        rho &= spin14::direct_ratio(&z).unwrap().as_ref() == Some(&cal.rho);
    }
    let fast = within(t, Duration::from_secs(120));
    outcome(
        ok == 100 && homogeneous && rho && fast,
        format!("{ok}/100 octic identities, rho = {}, {:.1?}", cal.rho, t.elapsed()),
    )
}

fn criterion_4() -> Outcome {
    let cal = spin14::calibrate().unwrap();
    let theta = spin14::theta_golden(&cal).unwrap();
    let mut rng = SplitMix64::new(2024);
    let mut additive = 0;
    for _ in 0..20 {
        let (a, b) = spin14::random_orthogonal_pair(&mut rng, 9);
        if spin14::theta_additive(&a, &b).unwrap() {
            additive += 1;
        }
    }
    outcome(
        theta.pass && additive == 20,
        format!(
            "Theta(Omega) = -6 pi_V7 {}, Theta(Omega') = 6 pi_V7' {}, additive pairs {additive}/20",
            theta.theta_v7, theta.theta_v7p
        ),
    )
}

fn criterion_5() -> Outcome {
    let r = spin14::swap_check().unwrap();
    let missed: Vec<_> = r
        .v7_images
        .iter()
        .chain(&r.v7p_images)
        .filter(|x| !x.in_target)
        .map(|x| x.source.clone())
        .collect();
    outcome(
        r.pass,
        format!(
            "B-orthogonal {}, not exchanged {:?}, epsilon {:?}, signatures {:?}/{:?}",
            r.b_orthogonal,
            missed,
            r.epsilon.map(|e| e.to_string()),
            r.signature_v7,
            r.signature_v7p
        ),
    )
}

fn criterion_6() -> Outcome {
    let norm = spin10::calibrate().unwrap();
    let z = spin10::generic_point();
    let m = spin10::m10(&z, &norm).unwrap();
    let q = spin10::verify_quartic_mf(&z, &norm).unwrap();
    let golden = m.matrix == spin10::golden_m() && q.j4 == Rat::int(36) && q.pass;
    let cfg = RunConfig::new(Case::Spin10, 100, 2024, 9).unwrap();
    let r = report::verify(&cfg).unwrap();
    let text = report::to_json_string(&r).unwrap();
    let verbatim = serde_json::to_string(spin10::CONFLICT_162).unwrap();
    let conflict = text.contains(verbatim.trim_matches('"'));
    outcome(
        golden && conflict && r.passed(),
        format!(
            "J4 = {}, shifted square {:?}, conflict reported {conflict}, {} trials pass",
            q.j4,
            q.shifted_square.map(|s| s.to_string()),
            r.trials.iter().filter(|t| t.pass).count()
        ),
    )
}

fn criterion_7() -> Outcome {
    let t = Instant::now();
    let star = heptic::j7(&heptic::associative_form()).unwrap();
    let cfg = RunConfig::new(Case::Heptic, 100, 2024, 9).unwrap();
    let r = report::verify(&cfg).unwrap();
    let covariance = r
        .trials
        .iter()
        .take(20)
        .all(|t| !t.failed.iter().any(|f| f == "det3_covariance"));
    outcome(
        !star.is_zero() && r.passed() && covariance && within(t, Duration::from_secs(120)),
        format!(
            "J7(omega*) = {star}, {} golden checks, 100 trials, {:.1?}",
            r.golden.len(),
            t.elapsed()
        ),
    )
}

fn criterion_8() -> Outcome {
    let t = Instant::now();
    let cal = sedecic::calibrate(2024).unwrap();
    let calibrated = cal.status == sedecic::CalibrationStatus::Calibrated && cal.validated_points == 2;
    let cfg = RunConfig::new(Case::Sedecic, 50, 2024, 9).unwrap();
    let r = report::verify(&cfg).unwrap();
    outcome(
        calibrated && r.passed() && within(t, Duration::from_secs(600)),
        format!(
            "lambda = {} ({:?}), 50 trials pass {}, {:.1?}",
            cal.lambda,
            cal.verdict,
            r.passed(),
            t.elapsed()
        ),
    )
}

fn criterion_9() -> Outcome {
    let cal = spin14::calibrate().unwrap();
    let mut rng = SplitMix64::new(9);
    let mut done = 0;
    let mut ok = 0;
    while done < 20 {
        let z = random_even_spinor(spin14::space(), &mut rng, 9);
        let j = spin14::j8(&z, &cal).unwrap();
        if j.is_zero() {
            continue;
        }
        done += 1;
        let sd = spin14::split(&z, &cal).unwrap();
        let checks = spin14::check_split(&sd, &spin14::m_z(&z, &cal).unwrap());
        let y = QuadRat::sqrt_of(&j).unwrap();
        let kernels = spin14::double_cover_kernels(&z, &y, &cal).unwrap();
        if checks.pass && checks.ranks == (7, 7) && kernels == (7, 7) {
            ok += 1;
        }
    }
    outcome(ok == 20, format!("{ok}/20 splittings with double-cover kernels (7,7)"))
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_mfact"))
            .args([
                "verify",
                "--case",
                "spin14",
                "--trials",
                "100",
                "--seed",
                "2024",
                "--sidecar",
            ])
            .arg(dir.path().join("calibration.json"))
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    outcome(
        same && a.status.success() && b.status.success(),
        format!(
            "{} bytes, identical {same}, exit {:?}/{:?}",
            a.stdout.len(),
            a.status.code(),
            b.status.code()
        ),
    )
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut red = Vec::new();
    for (n, f) in criteria {
        let o = f();
        println!("criterion {n:>2}: {}  {}", if o.pass { "PASS" } else { "FAIL" }, o.note);
        if !o.pass {
            red.push(n);
        }
    }
    if red == EXPECTED_RED {
        println!("red criteria {red:?} as expected");
    } else {
        println!("red criteria {red:?}, expected {EXPECTED_RED:?}");
        std::process::exit(1);
    }
}
