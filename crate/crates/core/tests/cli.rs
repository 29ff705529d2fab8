use std::path::Path;
use std::process::{Command, Output};

use mfact::mf::ThreeForm;
use mfact::report::Sidecar;
use mfact::scalar::Rat;
use mfact::spin14;
use serde_json::Value;

fn mfact(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfact"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn write_json(dir: &Path, name: &str, v: &impl serde::Serialize) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(v).unwrap()).unwrap();
    path.to_str().unwrap().to_owned()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn stdout_line(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap().trim().to_owned()
}

#[test]
fn vectors_spin14_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = mfact(&["vectors", "--case", "spin14"], dir.path());
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert_eq!(v["j8_z0"], "576");
    assert_eq!(v["j8_z1"], "0");
    assert_eq!(v["z1_reading"]["k"], 6);
    // the emitted point re-parses to the same value
    let z0: mfact::clifford::Spinor = serde_json::from_value(v["z0"].clone()).unwrap();
    assert_eq!(z0, spin14::z0());
    let m: mfact::matrix::MatrixJson<Rat> = serde_json::from_value(v["m_z0"].clone()).unwrap();
    assert_eq!(mfact::matrix::Matrix::from_json(m).unwrap(), spin14::golden_m_z0());
}

#[test]
fn vectors_spin10_and_unsupported_case() {
    let dir = tempfile::tempdir().unwrap();
    let o = mfact(&["vectors", "--case", "spin10"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout_json(&o)["j4"], "36");
    let o = mfact(&["vectors", "--case", "heptic"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    let o = mfact(&["vectors", "--case", "g2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eval_golden_points() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let z0 = write_json(d, "z0.json", &spin14::z0());
    let o = mfact(&["eval", "--case", "spin14", "--point", &z0], d);
    assert!(o.status.success());
    assert_eq!(stdout_line(&o), "576");
    let (_, z1) = spin14::select_z1().unwrap();
    let z1 = write_json(d, "z1.json", &z1);
    assert_eq!(
        stdout_line(&mfact(&["eval", "--case", "spin14", "--point", &z1], d)),
        "0"
    );
    let e123 = write_json(d, "e123.json", &ThreeForm::from_terms(7, &[([1, 2, 3], 1)]).unwrap());
    assert_eq!(
        stdout_line(&mfact(&["eval", "--case", "heptic", "--point", &e123], d)),
        "0"
    );
    // a seven-variable form is not a sedecic point
    assert_eq!(
        mfact(&["eval", "--case", "sedecic", "--point", &e123], d).status.code(),
        Some(2)
    );
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("bad.json"), "{\"m\": 7, \"parity\": \"even\"").unwrap();
    let o = mfact(&["eval", "--case", "spin14", "--point", "bad.json"], d);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
    let o = mfact(&["eval", "--case", "spin14", "--point", "missing.json"], d);
    assert_eq!(o.status.code(), Some(2));
    let o = mfact(&["verify", "--case", "heptic", "--trials", "0"], d);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn split_command() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let z0 = write_json(d, "z0.json", &spin14::z0());
    let o = mfact(&["split", "--point", &z0], d);
    assert!(o.status.success());
    let v = stdout_json(&o);
    let sd = spin14::SplitData::from_json(serde_json::from_value(v).unwrap()).unwrap();
    assert_eq!(sd.m.to_string(), "24");
    assert_eq!(sd.proj_plus, spin14::to_quad(&spin14::projector_v7p()));
    let z2 = write_json(d, "z2.json", &spin14::z0().scale(&Rat::int(2)));
    let v = stdout_json(&mfact(&["split", "--point", &z2], d));
    assert_eq!(v["m"]["a"], "384");
    let (_, z1) = spin14::select_z1().unwrap();
    let z1 = write_json(d, "z1.json", &z1);
    let o = mfact(&["split", "--point", &z1], d);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("kernel"));
}

#[test]
fn matrix_command() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let w = write_json(d, "w.json", &mfact::heptic::associative_form());
    let o = mfact(&["matrix", "--case", "heptic", "--point", &w, "--out", "m.json"], d);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(d.join("m.json")).unwrap()).unwrap();
    assert_eq!(v["p"]["entries"][0][0], "1");
    assert_eq!(v["r"]["entries"][3][3], "-24");
}

#[test]
fn verify_writes_and_enforces_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = mfact(&["verify", "--case", "spin10", "--trials", "2"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = stdout_json(&o);
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["failures"].as_array().unwrap().len(), 0);
    assert_eq!(r["trials"].as_array().unwrap().len(), 2);
    assert!(r["conflicts"][0]["note"].as_str().unwrap().contains("162"));
    let car = Sidecar::load(&d.join("calibration.json")).unwrap().unwrap();
    assert_eq!(car.spin10.unwrap().norm, Rat::int(-4));

    // tamper with the stored norm
    let path = d.join("calibration.json");
    let text = std::fs::read_to_string(&path).unwrap().replace("\"-4\"", "\"-5\"");
    std::fs::write(&path, text).unwrap();
    let o = mfact(&["verify", "--case", "spin10", "--trials", "1"], d);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout_json(&o)["stored"]["norm"], "-5");

    std::fs::write(&path, "{\"version\": 0}").unwrap();
    let o = mfact(&["verify", "--case", "spin10", "--trials", "1"], d);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_sedecic_persists_lambda() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = mfact(
        &["verify", "--case", "sedecic", "--trials", "2", "--sidecar", "s.json"],
        d,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let car = Sidecar::load(&d.join("s.json")).unwrap().unwrap();
    let s = car.sedecic.unwrap();
    assert_eq!(s.lambda, Rat::zero());
    assert_eq!(serde_json::to_value(s.status).unwrap(), "calibrated");
}

#[test]
fn calibrate_command() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = mfact(&["calibrate"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["version"], 1);
    assert_eq!(v["spin14"]["norm"], "-4");
    assert_eq!(v["spin14"]["rho"], "1");
    assert_eq!(v["spin14"]["p"], 4);
    assert_eq!(v["spin14"]["epsilon"], Value::Null);
    assert_eq!(v["spin14"]["z1_reading"]["spinor"], "1+e1237+e1567+e2467+e123456");
    assert_eq!(v["sedecic"]["verdict"], "all_lambda");
    let stored: Value = serde_json::from_str(&std::fs::read_to_string(d.join("calibration.json")).unwrap()).unwrap();
    assert_eq!(stored, v);
    // a second seed reaches the same verdict
    let o = mfact(
        &["calibrate", "--case", "sedecic", "--seed", "7", "--sidecar", "b.json"],
        d,
    );
    assert_eq!(stdout_json(&o)["sedecic"], v["sedecic"]);
}

#[test]
fn swap_check_reports_literal_word() {
    let dir = tempfile::tempdir().unwrap();
    let o = mfact(&["swap-check"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let v = stdout_json(&o);
    assert_eq!(v["b_orthogonal"], true);
    assert_eq!(v["exchanges"], false);
    assert_eq!(v["supplementary"]["fixes_z0"], true);
    assert_eq!(v["supplementary"]["exchanges"], true);
}
