//! Python module `gp_majority`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_bigint::BigInt;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gp_majority::fitness::{self, LeafClass};
use gp_majority::harness::{self, KvConfig};
use gp_majority::{algorithms, oracle, variation, GpError, Problem};

fn py_err(e: GpError) -> PyErr {
    match e {
        GpError::Io(_) | GpError::Csv(_) => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn problem(name: &str, c: Option<u32>) -> PyResult<Problem> {
    Problem::from_name(name, c).map_err(py_err)
}

fn class_name(c: LeafClass) -> &'static str {
    match c {
        LeafClass::PositiveCritical => "positive_critical",
        LeafClass::NegativeCritical => "negative_critical",
        LeafClass::Redundant => "redundant",
    }
}

/// Stringifies keyword arguments into a key=value config.
fn kv_from(kwargs: Option<&Bound<'_, PyDict>>) -> PyResult<KvConfig> {
    let mut kv = KvConfig::default();
    if let Some(d) = kwargs {
        for (k, v) in d.iter() {
            let key: String = k.extract()?;
            let value = if let Ok(b) = v.extract::<bool>() {
                b.to_string()
            } else if let Ok(list) = v.extract::<Vec<usize>>() {
                list.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
            } else {
                v.str()?.to_string()
            };
            kv.set(&key, &value).map_err(py_err)?;
        }
    }
    Ok(kv)
}

/// A GP tree stored as its ordered leaf sequence.
#[pyclass(name = "Individual", module = "gp_majority", skip_from_py_object)]
#[derive(Clone)]
struct PyIndividual {
    inner: gp_majority::Individual,
}

#[pymethods]
impl PyIndividual {
    /// Builds a tree from literal strings such as `"x1"` or `"~x3"`.
    #[new]
    fn new(n: usize, leaves: Vec<String>) -> PyResult<Self> {
        let lits = leaves
            .iter()
            .map(|s| s.parse::<gp_majority::Literal>().map_err(py_err))
            .collect::<PyResult<Vec<_>>>()?;
        let inner = gp_majority::Individual::from_leaves(n, lits).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn parse(n: usize, text: &str) -> PyResult<Self> {
        let inner = gp_majority::Individual::parse_tree(n, text).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn random(n: usize, size: usize, seed: u64) -> PyResult<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inner = gp_majority::Individual::random(n, size, &mut rng).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    fn leaves(&self) -> Vec<String> {
        self.inner.leaves().map(|l| l.to_string()).collect()
    }

    /// `(positive, negative)` literal counts of variable `var` (1-based).
    fn counts(&self, var: usize) -> PyResult<(u32, u32)> {
        if var == 0 || var > self.inner.n() {
            return Err(PyValueError::new_err(format!("variable {var} out of range")));
        }
        let c = self.inner.counts(var);
        Ok((c.plus, c.minus))
    }

    fn join(&self, other: &PyIndividual) -> PyResult<Self> {
        let inner = self.inner.join(&other.inner).map_err(py_err)?;
        Ok(Self { inner })
    }

    fn tree(&self) -> String {
        self.inner.to_tree_string()
    }

    fn __len__(&self) -> usize {
        self.inner.size()
    }

    fn __eq__(&self, other: &PyIndividual) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Individual(n={}, size={})", self.inner.n(), self.inner.size())
    }
}

/// `(numerator, denominator_exponent, size)`; the value is `numerator / 2**exp`.
#[pyfunction]
#[pyo3(signature = (ind, problem_name, c=None))]
fn evaluate(ind: &PyIndividual, problem_name: &str, c: Option<u32>) -> PyResult<(BigInt, u64, usize)> {
    let s = fitness::evaluate(problem(problem_name, c)?, &ind.inner);
    Ok((s.value.numerator().clone(), s.value.denominator_exponent(), s.size))
}

#[pyfunction]
#[pyo3(signature = (ind, problem_name, c=None))]
fn brute_force_score(ind: &PyIndividual, problem_name: &str, c: Option<u32>) -> PyResult<(BigInt, u64, usize)> {
    let s = oracle::brute_force_score(problem(problem_name, c)?, &ind.inner);
    Ok((s.value.numerator().clone(), s.value.denominator_exponent(), s.size))
}

#[pyfunction]
#[pyo3(signature = (ind, problem_name, c=None))]
fn classify(ind: &PyIndividual, problem_name: &str, c: Option<u32>) -> PyResult<Vec<&'static str>> {
    let p = problem(problem_name, c)?;
    Ok(fitness::classify_leaves(p, &ind.inner)
        .into_iter()
        .map(class_name)
        .collect())
}

#[pyfunction]
#[pyo3(signature = (ind, problem_name, c=None))]
fn deletion_stable(ind: &PyIndividual, problem_name: &str, c: Option<u32>) -> PyResult<bool> {
    Ok(fitness::deletion_stable(problem(problem_name, c)?, &ind.inner))
}

/// One HVL-Prime step; returns the offspring and the operation name.
#[pyfunction]
#[pyo3(signature = (ind, seed, allow_substitution=true))]
fn hvl_prime(ind: &PyIndividual, seed: u64, allow_substitution: bool) -> (PyIndividual, &'static str) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let out = variation::hvl_prime(&ind.inner, &mut rng, allow_substitution);
    let kind = out.op_kind().name();
    (PyIndividual { inner: out.offspring }, kind)
}

#[pyfunction]
fn local_search_budget(size: usize) -> u64 {
    algorithms::local_search_budget(size)
}

/// Runs one configuration. Keyword arguments use the config-file keys,
/// e.g. `run(problem="majority", n=50, seed=3)`.
#[pyfunction]
#[pyo3(signature = (**kwargs))]
fn run<'py>(py: Python<'py>, kwargs: Option<&Bound<'py, PyDict>>) -> PyResult<Bound<'py, PyDict>> {
    let cfg = kv_from(kwargs)?.run_config().map_err(py_err)?;
    let rec = py.detach(|| algorithms::run(&cfg)).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("evaluations", rec.evaluations_used)?;
    d.set_item("success", rec.success)?;
    d.set_item("final_value_num", rec.final_value.numerator().clone())?;
    d.set_item("final_value_den_pow2", rec.final_value.denominator_exponent())?;
    d.set_item("final_value", rec.final_value.to_f64())?;
    d.set_item("final_size", rec.final_size)?;
    d.set_item("unexpressed", rec.unexpressed_count)?;
    let trace: Vec<(u64, f64, usize, usize)> = rec
        .trace
        .iter()
        .map(|t| (t.evaluations, t.value.to_f64(), t.size, t.expressed))
        .collect();
    d.set_item("trace", trace)?;
    Ok(d)
}

/// Runs a sweep (same keys as a spec file) and writes its CSV. Returns the
/// output path.
#[pyfunction]
#[pyo3(signature = (**kwargs))]
fn run_experiment(py: Python<'_>, kwargs: Option<&Bound<'_, PyDict>>) -> PyResult<PathBuf> {
    let spec = kv_from(kwargs)?.experiment_spec().map_err(py_err)?;
    py.detach(|| harness::run_experiment(&spec)).map_err(py_err)?;
    Ok(spec.output_path)
}

fn stats_dict<'py>(py: Python<'py>, s: &harness::BoxStats) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("min", s.min)?;
    d.set_item("q1", s.q1)?;
    d.set_item("median", s.median)?;
    d.set_item("q3", s.q3)?;
    d.set_item("max", s.max)?;
    d.set_item("count", s.count)?;
    d.set_item("success_count", s.success_count)?;
    Ok(d)
}

/// Box statistics of a list of numbers.
#[pyfunction]
fn summarize<'py>(py: Python<'py>, values: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
    stats_dict(py, &harness::summarize(&values).map_err(py_err)?)
}

/// Box statistics of `evaluations` per configuration and `n` in a results CSV.
#[pyfunction]
fn summarize_csv<'py>(py: Python<'py>, path: PathBuf) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let rows = harness::read_csv(&path).map_err(py_err)?;
    let groups = harness::summarize_rows(&rows).map_err(py_err)?;
    groups
        .iter()
        .map(|(key, s)| {
            let d = stats_dict(py, s)?;
            d.set_item("configuration", key.to_string())?;
            d.set_item("n", key.n)?;
            Ok(d)
        })
        .collect()
}

/// `(w, {n: median / (n ln n)})`.
#[pyfunction]
fn fit_nlogn(medians: BTreeMap<usize, f64>) -> PyResult<(f64, BTreeMap<usize, f64>)> {
    let fit = harness::fit_nlogn(&medians).map_err(py_err)?;
    Ok((fit.w, fit.ratios.into_iter().collect()))
}

#[pyfunction]
fn poisson_reference(nu: f64, k: u32, l: u32) -> f64 {
    oracle::poisson_reference(nu, k, l)
}

/// `{(k, l): number of variables with k positive and l negative literals}`.
#[pyfunction]
fn literal_histogram(ind: &PyIndividual) -> BTreeMap<(u32, u32), usize> {
    oracle::literal_histogram(&ind.inner)
}

#[pymodule]
#[pyo3(name = "gp_majority")]
fn gp_majority_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyIndividual>()?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_score, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(deletion_stable, m)?)?;
    m.add_function(wrap_pyfunction!(hvl_prime, m)?)?;
    m.add_function(wrap_pyfunction!(local_search_budget, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(summarize, m)?)?;
    m.add_function(wrap_pyfunction!(summarize_csv, m)?)?;
    m.add_function(wrap_pyfunction!(fit_nlogn, m)?)?;
    m.add_function(wrap_pyfunction!(poisson_reference, m)?)?;
    m.add_function(wrap_pyfunction!(literal_histogram, m)?)?;
    Ok(())
}
