use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use mfact::report::{self, Case, CaseConstants, Point, RunConfig, SidecarCheck, Verdict};
use mfact::{sedecic, spin14, Error};

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CALIBRATION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "mfact",
    version,
    about = "Exact matrix factorizations of relative invariants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Output {
    /// Write the JSON here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct CaseArg {
    /// spin14, spin10, heptic or sedecic
    #[arg(long, value_parser = parse_case)]
    case: Case,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the golden points with their matrices and invariants
    Vectors {
        #[command(flatten)]
        case: CaseArg,
        #[command(flatten)]
        out: Output,
    },
    /// Print the invariant at a point as p/q
    Eval {
        #[command(flatten)]
        case: CaseArg,
        #[arg(long)]
        point: PathBuf,
        /// Seed for the sedecic calibration
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
    /// Run the golden suite and seeded randomized trials
    Verify {
        #[command(flatten)]
        case: CaseArg,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long = "coeff-range", default_value_t = 9)]
        coeff_range: u64,
        /// Calibration sidecar to check against (written when absent)
        #[arg(long, default_value = "calibration.json")]
        sidecar: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Emit the factorization matrices at a point
    Matrix {
        #[command(flatten)]
        case: CaseArg,
        #[arg(long)]
        point: PathBuf,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Eigenprojector splitting of M_z for a spin14 point
    Split {
        #[arg(long)]
        point: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Compute calibration constants and write the sidecar
    Calibrate {
        /// Only this case (default: all)
        #[arg(long, value_parser = parse_case)]
        case: Option<Case>,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, default_value = "calibration.json")]
        sidecar: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Check the spin14 swap element
    SwapCheck {
        #[command(flatten)]
        out: Output,
    },
}

fn parse_case(s: &str) -> Result<Case, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// An exit code with a message for standard error.
struct Exit(u8, String);

impl Exit {
    fn input(msg: impl std::fmt::Display) -> Exit {
        Exit(EXIT_INPUT, msg.to_string())
    }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Exit {
        Exit(EXIT_INPUT, e.to_string())
    }
}

fn emit(out: &Output, value: &impl serde::Serialize) -> Result<(), Exit> {
    let text = report::to_json_string(value)? + "\n";
    match &out.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Exit::input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_point(case: Case, path: &Path) -> Result<Point, Exit> {
    let text = std::fs::read_to_string(path).map_err(|e| Exit::input(format!("{}: {e}", path.display())))?;
    report::parse_point(case, &text).map_err(|e| Exit::input(format!("{}: {e}", path.display())))
}

fn verify(cfg: RunConfig, sidecar: &Path, out: &Output) -> Result<(), Exit> {
    let start = Instant::now();
    let constants = report::constants(cfg.case, cfg.seed)?;
    if let CaseConstants::Sedecic(c) = &constants {
        if c.status == sedecic::CalibrationStatus::Failed {
            let r = report::verify(&cfg)?;
            emit(out, &r)?;
            return Err(Exit(EXIT_CALIBRATION, "sedecic calibration failed".into()));
        }
    }
    match report::check_sidecar(sidecar, &constants).map_err(|e| Exit(EXIT_CALIBRATION, e.to_string()))? {
        SidecarCheck::Mismatch { stored, computed } => {
            emit(
                out,
                &json!({ "sidecar": sidecar, "stored": stored, "computed": computed }),
            )?;
            return Err(Exit(
                EXIT_CALIBRATION,
                format!("calibration constants differ from {}", sidecar.display()),
            ));
        }
        SidecarCheck::Stored => eprintln!("stored {} constants in {}", cfg.case, sidecar.display()),
        SidecarCheck::Matched | SidecarCheck::NotApplicable => {}
    }
    let r = report::verify(&cfg)?;
    emit(out, &r)?;
    let passed = r.trials.iter().filter(|t| t.pass).count();
    eprintln!(
        "{}: {}/{} trials passed, {} golden checks, {} conflicts, {:.2?}",
        cfg.case,
        passed,
        r.trials.len(),
        r.golden.len(),
        r.conflicts.len(),
        start.elapsed()
    );
    match r.verdict {
        Verdict::Pass => Ok(()),
        Verdict::Fail => {
            for f in &r.failures {
                eprintln!("failed: {} {}", f.location, f.check);
            }
            Err(Exit(EXIT_FAIL, "verification failed".into()))
        }
        Verdict::CalibrationFailed => Err(Exit(EXIT_CALIBRATION, "calibration failed".into())),
    }
}

fn calibrate(case: Option<Case>, seed: u64, sidecar: &Path, out: &Output) -> Result<(), Exit> {
    let cases = case.map_or(Case::ALL.to_vec(), |c| vec![c]);
    let mut car = report::Sidecar::load(sidecar)
        .map_err(|e| Exit(EXIT_CALIBRATION, e.to_string()))?
        .unwrap_or_default();
    let mut failed = false;
    for c in cases {
        let constants = report::constants(c, seed)?;
        if let CaseConstants::Sedecic(s) = &constants {
            failed |= s.status == sedecic::CalibrationStatus::Failed;
        }
        car.set(&constants);
    }
    car.save(sidecar)?;
    emit(out, &car)?;
    if failed {
        return Err(Exit(EXIT_CALIBRATION, "sedecic calibration failed".into()));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Exit> {
    match cli.command {
        Command::Vectors { case, out } => {
            let v = report::golden_vectors(case.case).map_err(Exit::input)?;
            emit(&out, &v)
        }
        Command::Eval { case, point, seed } => {
            let p = read_point(case.case, &point)?;
            println!("{}", report::evaluate(case.case, &p, seed)?);
            Ok(())
        }
        Command::Verify {
            case,
            trials,
            seed,
            coeff_range,
            sidecar,
            out,
        } => {
            let cfg = RunConfig::new(case.case, trials, seed, coeff_range)?;
            verify(cfg, &sidecar, &out)
        }
        Command::Matrix { case, point, seed, out } => {
            let p = read_point(case.case, &point)?;
            emit(&out, &report::matrices(case.case, &p, seed)?)
        }
        Command::Split { point, out } => {
            let Point::Spin14(z) = read_point(Case::Spin14, &point)? else {
                unreachable!("spin14 points are spinors");
            };
            let cal = spin14::calibrate()?;
            let sd = spin14::split(&z, &cal)?;
            emit(&out, &sd.to_json())
        }
        Command::Calibrate {
            case,
            seed,
            sidecar,
            out,
        } => calibrate(case, seed, &sidecar, &out),
        Command::SwapCheck { out } => {
            let r = spin14::swap_check()?;
            emit(&out, &r)?;
            if r.pass {
                Ok(())
            } else {
                Err(Exit(EXIT_FAIL, "swap element check failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
