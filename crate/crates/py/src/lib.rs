//! Python bindings: fields, ideals, index codes, gain analysis and simulation.

use latticedex::analysis::{diversity_and_product_distance, overall_gain, side_info_gain};
use latticedex::codec::{build_index_code, IndexCode, SideInfo};
use latticedex::experiment::{preset, PRESET_NAMES};
use latticedex::sim::{run_sim, Channel, SimConfig};
use latticedex::{Error, FieldFamily, Ideal, NumberField};
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

fn err(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

/// Serialize through JSON into plain Python objects.
fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn side_info(set: Vec<usize>) -> PyResult<SideInfo> {
    SideInfo::from_one_based(&set).map_err(err)
}

/// A supported number field.
#[pyclass(name = "NumberField", module = "latticedex", frozen)]
#[derive(Clone)]
struct PyField(NumberField);

#[pymethods]
impl PyField {
    /// `family` is `quadratic` (param d), `cyclotomic` or `maximal_real` (param m).
    #[new]
    fn new(family: &str, param: i64) -> PyResult<Self> {
        let fam = match family {
            "quadratic" => FieldFamily::Quadratic { d: param },
            "cyclotomic" | "maximal_real" => {
                let m = u64::try_from(param).map_err(|_| PyValueError::new_err("m must be positive"))?;
                if family == "cyclotomic" {
                    FieldFamily::Cyclotomic { m }
                } else {
                    FieldFamily::MaximalReal { m }
                }
            }
            _ => return Err(PyValueError::new_err(format!("unknown family {family:?}"))),
        };
        NumberField::new(fam).map(PyField).map_err(err)
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    #[getter]
    fn discriminant(&self) -> i128 {
        self.0.discriminant()
    }

    #[getter]
    fn signature(&self) -> (usize, usize) {
        self.0.signature()
    }

    #[getter]
    fn totally_real(&self) -> bool {
        self.0.is_totally_real()
    }

    #[getter]
    fn min_poly(&self) -> Vec<i64> {
        self.0.min_poly().to_vec()
    }

    /// `(kind, e, f, g)` for the rational prime `p`.
    fn classify_prime(&self, p: u64) -> PyResult<(String, u32, u32, u32)> {
        let s = self.0.classify_prime(p).map_err(err)?;
        Ok((format!("{:?}", s.kind).to_lowercase(), s.e, s.f, s.g))
    }

    fn primes_above(&self, p: u64) -> PyResult<Vec<PyIdeal>> {
        let ideals = self.0.prime_ideals_above(p).map_err(err)?;
        Ok(ideals
            .into_iter()
            .map(|i| PyIdeal {
                ideal: i,
                field: self.0.clone(),
            })
            .collect())
    }

    fn norm(&self, coords: Vec<i64>) -> PyResult<i128> {
        Ok(self.0.norm(&self.0.element(coords).map_err(err)?))
    }

    /// Exact `‖Ψ(x)‖²` as `(numerator, denominator)`.
    fn energy(&self, coords: Vec<i64>) -> PyResult<(i128, i64)> {
        let x = self.0.element(coords).map_err(err)?;
        Ok((self.0.energy_numerator(&x), self.0.energy_denominator()))
    }

    fn embed(&self, coords: Vec<i64>) -> PyResult<Vec<f64>> {
        Ok(self.0.canonical_embed(&self.0.element(coords).map_err(err)?))
    }

    fn format(&self, coords: Vec<i64>) -> PyResult<String> {
        Ok(self.0.format(&self.0.element(coords).map_err(err)?))
    }

    fn __repr__(&self) -> String {
        format!("NumberField({})", self.0.family())
    }
}

/// An ideal of the ring of integers, in Hermite normal form.
#[pyclass(name = "Ideal", module = "latticedex", frozen)]
#[derive(Clone)]
struct PyIdeal {
    ideal: Ideal,
    field: NumberField,
}

#[pymethods]
impl PyIdeal {
    #[getter]
    fn norm(&self) -> u64 {
        self.ideal.norm()
    }

    #[getter]
    fn hnf(&self) -> Vec<Vec<i64>> {
        self.ideal.hnf().to_vec()
    }

    fn contains(&self, coords: Vec<i64>) -> PyResult<bool> {
        Ok(self.ideal.contains(&self.field.element(coords).map_err(err)?))
    }

    fn __repr__(&self) -> String {
        format!("Ideal({})", self.field.format_ideal(&self.ideal))
    }
}

/// Lattice index code over `O_K / p_1 ... p_K`.
#[pyclass(name = "IndexCode", module = "latticedex", frozen)]
struct PyCode(IndexCode);

#[pymethods]
impl PyCode {
    #[new]
    fn new(field: &PyField, primes: Vec<PyIdeal>) -> PyResult<Self> {
        let ideals: Vec<Ideal> = primes.into_iter().map(|p| p.ideal).collect();
        build_index_code(&field.0, &ideals).map(PyCode).map_err(err)
    }

    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        preset(name).and_then(|s| s.build()).map(PyCode).map_err(err)
    }

    #[staticmethod]
    fn preset_names() -> Vec<&'static str> {
        PRESET_NAMES.to_vec()
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        IndexCode::load(path).map(PyCode).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        IndexCode::from_json(text).map(PyCode).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        self.0.to_json().map_err(err)
    }

    fn save(&self, path: &str) -> PyResult<()> {
        self.0.save(path).map_err(err)
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField(self.0.field().clone())
    }

    #[getter]
    fn alphabet(&self) -> Vec<u64> {
        self.0.alphabet()
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.0.gamma()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    /// Unit-power symbol for the message with the given residue labels.
    fn encode(&self, labels: Vec<u64>) -> PyResult<Vec<f64>> {
        let msg = self.0.message_from_labels(&labels).map_err(err)?;
        self.0.encode(&msg).map_err(err)
    }

    /// Labels of the message whose coset contains the integral element `coords`.
    fn decode(&self, coords: Vec<i64>) -> PyResult<Vec<u64>> {
        let x = self.0.field().element(coords).map_err(err)?;
        self.0.labels(&self.0.decode_point(&x)).map_err(err)
    }

    /// Normalized points, one row per message in index order.
    fn points(&self) -> Vec<Vec<f64>> {
        (0..self.0.len()).map(|i| self.0.normalized_point(i)).collect()
    }

    fn labels(&self) -> Vec<Vec<u64>> {
        self.0.points().iter().map(|p| p.labels.clone()).collect()
    }

    /// Side-information gain report for a 1-based index set.
    fn gain<'py>(&self, py: Python<'py>, side_info_set: Vec<usize>) -> PyResult<Bound<'py, PyAny>> {
        let s = side_info(side_info_set)?;
        to_py(py, &side_info_gain(&self.0, s).map_err(err)?)
    }

    #[pyo3(signature = (max_k = 20))]
    fn overall_gain<'py>(&self, py: Python<'py>, max_k: usize) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &overall_gain(&self.0, max_k).map_err(err)?)
    }

    /// Diversity and minimum product distance; `[]` is the full code.
    fn fading<'py>(&self, py: Python<'py>, side_info_set: Vec<usize>) -> PyResult<Bound<'py, PyAny>> {
        let s = side_info(side_info_set)?;
        to_py(py, &diversity_and_product_distance(&self.0, s).map_err(err)?)
    }

    /// Monte Carlo SER points as dicts; sets are 1-based index lists.
    #[pyo3(signature = (snr_db, sets, channel = "awgn", seed = 0, min_errors = None, max_trials = None, workers = 0))]
    #[allow(clippy::too_many_arguments)]
    fn simulate<'py>(
        &self,
        py: Python<'py>,
        snr_db: Vec<f64>,
        sets: Vec<Vec<usize>>,
        channel: &str,
        seed: u64,
        min_errors: Option<u64>,
        max_trials: Option<u64>,
        workers: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let channel: Channel = channel.parse().map_err(err)?;
        let sets = sets.into_iter().map(side_info).collect::<PyResult<Vec<_>>>()?;
        let mut cfg = SimConfig::new(channel, snr_db, sets, seed);
        cfg.workers = workers;
        if let Some(e) = min_errors {
            cfg.stop.min_errors = e;
        }
        if let Some(t) = max_trials {
            cfg.stop.max_trials = t;
        }
        let result = py.allow_threads(|| run_sim(&self.0, &cfg)).map_err(err)?;
        to_py(py, &result.points)
    }

    fn __repr__(&self) -> String {
        format!("IndexCode({}, {} points)", self.0.field().family(), self.0.len())
    }
}

#[pymodule]
#[pyo3(name = "latticedex")]
fn latticedex_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyIdeal>()?;
    m.add_class::<PyCode>()?;
    let info = PyDict::new(m.py());
    info.set_item("version", env!("CARGO_PKG_VERSION"))?;
    m.add("build_info", info)?;
    Ok(())
}
