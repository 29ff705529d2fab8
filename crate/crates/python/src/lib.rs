//! Python bindings. Exact values cross the boundary as `fractions.Fraction`;
//! points, matrices and reports as the JSON the CLI uses.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyList;

use mfact::clifford::{Parity, Spinor as CoreSpinor};
use mfact::matrix::Matrix;
use mfact::mf::ThreeForm as CoreThreeForm;
use mfact::report::{self, Case, RunConfig};
use mfact::spin10::PairSpinor as CorePair;
use mfact::{heptic, rng, sedecic, spin10, spin14, Error, Rat};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, r: &Rat) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((r.to_string(),))
}

/// Accepts int, Fraction or a "p/q" string.
fn to_rat(x: &Bound<'_, PyAny>) -> PyResult<Rat> {
    x.str()?.to_str()?.parse::<Rat>().map_err(err)
}

fn matrix<'py>(py: Python<'py>, m: &Matrix<Rat>) -> PyResult<Bound<'py, PyList>> {
    let rows = m
        .to_rows()
        .iter()
        .map(|row| {
            let cells = row.iter().map(|r| fraction(py, r)).collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, cells)
        })
        .collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, rows)
}

fn case(name: &str) -> PyResult<Case> {
    name.parse().map_err(err)
}

/// An even or odd element of ∧E_m.
#[pyclass(module = "mfact_py", frozen)]
struct Spinor {
    inner: CoreSpinor,
}

#[pymethods]
impl Spinor {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Spinor> {
        Ok(Spinor {
            inner: serde_json::from_str(text).map_err(json_err)?,
        })
    }

    /// The base point z₀ of the m = 7 case.
    #[staticmethod]
    fn z0() -> Spinor {
        Spinor { inner: spin14::z0() }
    }

    /// The boundary point z₁ of the m = 7 case.
    #[staticmethod]
    fn z1() -> PyResult<Spinor> {
        let (_, z) = spin14::select_z1().map_err(err)?;
        Ok(Spinor { inner: z })
    }

    #[staticmethod]
    fn random(m: usize, seed: u64, coeff_range: u64) -> PyResult<Spinor> {
        let space = mfact::clifford::SplitSpace::new(m).map_err(err)?;
        let z = rng::random_even_spinor(space, &mut rng::SplitMix64::new(seed), coeff_range);
        Ok(Spinor { inner: z })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(json_err)
    }

    fn scale(&self, t: &Bound<'_, PyAny>) -> PyResult<Spinor> {
        Ok(Spinor {
            inner: self.inner.scale(&to_rat(t)?),
        })
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.space().m()
    }

    #[getter]
    fn even(&self) -> bool {
        self.inner.parity() == Parity::Even
    }

    fn __repr__(&self) -> String {
        format!("Spinor({})", spin14::spinor_name(&self.inner))
    }

    fn __eq__(&self, other: &Spinor) -> bool {
        self.inner == other.inner
    }
}

/// A three-form on n variables.
#[pyclass(module = "mfact_py", frozen)]
struct ThreeForm {
    inner: CoreThreeForm,
}

#[pymethods]
impl ThreeForm {
    /// From (1-based label triple, integer coefficient) pairs.
    #[new]
    fn new(n: usize, terms: Vec<([usize; 3], i64)>) -> PyResult<ThreeForm> {
        Ok(ThreeForm {
            inner: CoreThreeForm::from_terms(n, &terms).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<ThreeForm> {
        Ok(ThreeForm {
            inner: serde_json::from_str(text).map_err(json_err)?,
        })
    }

    #[staticmethod]
    fn associative() -> ThreeForm {
        ThreeForm {
            inner: heptic::associative_form(),
        }
    }

    #[staticmethod]
    fn random(n: usize, seed: u64, coeff_range: u64) -> ThreeForm {
        ThreeForm {
            inner: rng::random_three_form(n, &mut rng::SplitMix64::new(seed), coeff_range),
        }
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(json_err)
    }

    fn scale(&self, t: &Bound<'_, PyAny>) -> PyResult<ThreeForm> {
        Ok(ThreeForm {
            inner: self.inner.scale(&to_rat(t)?),
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn __eq__(&self, other: &ThreeForm) -> bool {
        self.inner == other.inner
    }
}

/// A point of ℂ²⊗Δ₁₀.
#[pyclass(module = "mfact_py", frozen)]
struct PairSpinor {
    inner: CorePair,
}

#[pymethods]
impl PairSpinor {
    #[new]
    fn new(s1: &Spinor, s2: &Spinor) -> PyResult<PairSpinor> {
        Ok(PairSpinor {
            inner: CorePair::new(s1.inner.clone(), s2.inner.clone()).map_err(err)?,
        })
    }

    #[staticmethod]
    fn generic_point() -> PairSpinor {
        PairSpinor {
            inner: spin10::generic_point(),
        }
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(json_err)
    }
}

#[pyfunction]
fn j8<'py>(py: Python<'py>, z: &Spinor) -> PyResult<Bound<'py, PyAny>> {
    let cal = spin14::calibrate().map_err(err)?;
    fraction(py, &spin14::j8(&z.inner, &cal).map_err(err)?)
}

/// M_z for a point of the m = 7 case, as rows of Fractions.
#[pyfunction]
fn m_z<'py>(py: Python<'py>, z: &Spinor) -> PyResult<Bound<'py, PyList>> {
    let cal = spin14::calibrate().map_err(err)?;
    matrix(py, &spin14::m_z(&z.inner, &cal).map_err(err)?.matrix)
}

#[pyfunction]
fn j4<'py>(py: Python<'py>, z: &PairSpinor) -> PyResult<Bound<'py, PyAny>> {
    let norm = spin10::calibrate().map_err(err)?;
    fraction(py, &spin10::j4(&z.inner, &norm).map_err(err)?)
}

#[pyfunction]
fn m10<'py>(py: Python<'py>, z: &PairSpinor) -> PyResult<Bound<'py, PyList>> {
    let norm = spin10::calibrate().map_err(err)?;
    matrix(py, &spin10::m10(&z.inner, &norm).map_err(err)?.matrix)
}

#[pyfunction]
fn j7<'py>(py: Python<'py>, w: &ThreeForm) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &heptic::j7(&w.inner).map_err(err)?)
}

/// (P, R) of the heptic factorization.
#[pyfunction]
fn heptic_matrices<'py>(py: Python<'py>, w: &ThreeForm) -> PyResult<(Bound<'py, PyList>, Bound<'py, PyList>)> {
    let p = heptic::pmat(&w.inner).map_err(err)?;
    let r = heptic::rmat(&w.inner).map_err(err)?;
    Ok((matrix(py, &p)?, matrix(py, &r)?))
}

#[pyfunction]
#[pyo3(signature = (w, seed = 2024))]
fn j16<'py>(py: Python<'py>, w: &ThreeForm, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let cal = sedecic::calibrate(seed).map_err(err)?;
    fraction(py, &sedecic::j16(&w.inner, &cal).map_err(err)?)
}

/// The eigenprojector splitting of M_z as JSON.
#[pyfunction]
fn split(z: &Spinor) -> PyResult<String> {
    let cal = spin14::calibrate().map_err(err)?;
    let sd = spin14::split(&z.inner, &cal).map_err(err)?;
    report::to_json_string(&sd.to_json()).map_err(err)
}

#[pyfunction]
fn swap_check() -> PyResult<String> {
    report::to_json_string(&spin14::swap_check().map_err(err)?).map_err(err)
}

/// Calibration constants of one case as JSON.
#[pyfunction]
#[pyo3(signature = (case_name, seed = 2024))]
fn calibrate(case_name: &str, seed: u64) -> PyResult<String> {
    let c = report::constants(case(case_name)?, seed).map_err(err)?;
    report::to_json_string(&c).map_err(err)
}

/// The verification report as JSON, byte-identical to `mfact verify`.
#[pyfunction]
#[pyo3(signature = (case_name, trials = 100, seed = 2024, coeff_range = 9))]
fn verify(py: Python<'_>, case_name: &str, trials: u64, seed: u64, coeff_range: u64) -> PyResult<String> {
    let cfg = RunConfig::new(case(case_name)?, trials, seed, coeff_range).map_err(err)?;
    let r = py.detach(|| report::verify(&cfg)).map_err(err)?;
    report::to_json_string(&r).map_err(err)
}

#[pyfunction]
fn rng_next(state: u64) -> (u64, u64) {
    rng::rng_next(state)
}

#[pymodule]
fn mfact_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Spinor>()?;
    m.add_class::<ThreeForm>()?;
    m.add_class::<PairSpinor>()?;
    m.add_function(wrap_pyfunction!(j8, m)?)?;
    m.add_function(wrap_pyfunction!(m_z, m)?)?;
    m.add_function(wrap_pyfunction!(j4, m)?)?;
    m.add_function(wrap_pyfunction!(m10, m)?)?;
    m.add_function(wrap_pyfunction!(j7, m)?)?;
    m.add_function(wrap_pyfunction!(heptic_matrices, m)?)?;
    m.add_function(wrap_pyfunction!(j16, m)?)?;
    m.add_function(wrap_pyfunction!(split, m)?)?;
    m.add_function(wrap_pyfunction!(swap_check, m)?)?;
    m.add_function(wrap_pyfunction!(calibrate, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(rng_next, m)?)?;
    Ok(())
}
