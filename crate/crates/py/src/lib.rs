//! Python bindings for `hobo_core`.
//!
//! Assignments cross the boundary as lists of 0/1 integers; every library
//! error surfaces as `ValueError`.

use hobo_core::annealer::{self, AnnealConfig, AnnealResult};
use hobo_core::compressor::{self, SvdFactors};
use hobo_core::evaluator;
use hobo_core::oracle;
use hobo_core::polynomial::{self, Assignment, RandomInstance};
use hobo_core::tensor;
use hobo_core::HoboError;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: HoboError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn assignment(bits: Vec<u8>) -> PyResult<Assignment> {
    Assignment::from_bits(bits).map_err(err)
}

// `Vec<u8>` would surface as `bytes`
fn bit_list(x: &Assignment) -> Vec<u32> {
    x.bits().iter().map(|&b| u32::from(b)).collect()
}

#[pyclass(name = "Polynomial", module = "hobopy", frozen)]
pub struct PyPolynomial {
    inner: polynomial::Polynomial,
}

#[pymethods]
impl PyPolynomial {
    /// Parses the `.hobo` text format or the JSON form.
    #[new]
    fn new(source: &str) -> PyResult<Self> {
        polynomial::Polynomial::parse_any(source)
            .map(|inner| PyPolynomial { inner })
            .map_err(err)
    }

    /// Builds from `[(vars, coef), ...]`; repeated variables collapse.
    #[staticmethod]
    #[pyo3(signature = (terms, num_vars=None, offset=0.0))]
    fn from_terms(terms: Vec<(Vec<usize>, f64)>, num_vars: Option<usize>, offset: f64) -> PyResult<Self> {
        polynomial::Polynomial::from_terms(num_vars, terms, offset)
            .map(|inner| PyPolynomial { inner })
            .map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (n, max_degree, terms, seed, coef_min=-10.0, coef_max=10.0, integer=false))]
    fn random(
        n: usize,
        max_degree: usize,
        terms: usize,
        seed: u64,
        coef_min: f64,
        coef_max: f64,
        integer: bool,
    ) -> PyResult<Self> {
        let cfg = RandomInstance {
            n,
            max_degree,
            terms,
            coef_min,
            coef_max,
            integer,
            seed,
        };
        polynomial::random_instance(&cfg)
            .map(|inner| PyPolynomial { inner })
            .map_err(err)
    }

    #[getter]
    fn num_vars(&self) -> usize {
        self.inner.num_vars()
    }

    #[getter]
    fn offset(&self) -> f64 {
        self.inner.offset()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    /// `[(vars, coef), ...]` in degree-then-lexicographic order.
    fn terms(&self) -> Vec<(Vec<usize>, f64)> {
        self.inner
            .terms()
            .map(|(m, c)| (m.vars().to_vec(), c))
            .collect()
    }

    fn evaluate(&self, x: Vec<u8>) -> PyResult<f64> {
        self.inner.evaluate(&assignment(x)?).map_err(err)
    }

    fn delta_flip(&self, x: Vec<u8>, j: usize) -> PyResult<f64> {
        evaluator::delta_flip(&self.inner, &assignment(x)?, j).map_err(err)
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __len__(&self) -> usize {
        self.inner.num_terms()
    }

    fn __repr__(&self) -> String {
        format!(
            "Polynomial(num_vars={}, terms={}, degree={})",
            self.inner.num_vars(),
            self.inner.num_terms(),
            self.inner.degree()
        )
    }
}

#[pyclass(name = "HoboTensor", module = "hobopy", frozen)]
pub struct PyHoboTensor {
    inner: tensor::HoboTensor,
}

#[pymethods]
impl PyHoboTensor {
    #[staticmethod]
    #[pyo3(signature = (poly, order=None))]
    fn build(poly: &PyPolynomial, order: Option<usize>) -> PyResult<Self> {
        tensor::build_hobo_tensor(&poly.inner, order)
            .map(|inner| PyHoboTensor { inner })
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(source: &str) -> PyResult<Self> {
        tensor::HoboTensor::from_json(source)
            .map(|inner| PyHoboTensor { inner })
            .map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    /// Flat row-major entries.
    fn entries(&self) -> Vec<f64> {
        self.inner.entries().to_vec()
    }

    fn get(&self, index: Vec<usize>) -> PyResult<f64> {
        if index.len() != self.inner.order() || index.iter().any(|&i| i >= self.inner.n()) {
            return Err(PyValueError::new_err(format!("index {index:?} out of range")));
        }
        Ok(self.inner.get(&index))
    }

    fn contract(&self, x: Vec<u8>) -> PyResult<f64> {
        evaluator::contract(&self.inner, &assignment(x)?).map_err(err)
    }

    fn to_polynomial(&self) -> PyPolynomial {
        PyPolynomial {
            inner: tensor::tensor_to_polynomial(&self.inner),
        }
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    /// `(dense, factored, frobenius_error, relative_error)` at `rank`.
    fn compression_report(&self, rank: usize) -> PyResult<(usize, usize, f64, f64)> {
        let r = compressor::compression_report(&self.inner, rank).map_err(err)?;
        Ok((
            r.stored_values_dense,
            r.stored_values_factored,
            r.frobenius_error,
            r.relative_error,
        ))
    }

    /// Cost through the rank-`rank` factors (full rank when omitted).
    #[pyo3(signature = (x, rank=None))]
    fn compressed_cost(&self, x: Vec<u8>, rank: Option<usize>) -> PyResult<f64> {
        let f = SvdFactors::of_tensor(&self.inner).map_err(err)?;
        let f = compressor::truncate(&f, rank.unwrap_or(f.rank())).map_err(err)?;
        compressor::compressed_cost(&f, &assignment(x)?).map_err(err)
    }

    fn singular_values(&self) -> PyResult<Vec<f64>> {
        SvdFactors::of_tensor(&self.inner)
            .map(|f| f.singular_values)
            .map_err(err)
    }
}

#[pyclass(name = "AnnealResult", module = "hobopy", frozen, get_all)]
pub struct PyAnnealResult {
    assignment: Vec<u32>,
    cost: f64,
    restart_costs: Vec<f64>,
    accepted_moves: u64,
    seed: u64,
}

impl From<AnnealResult> for PyAnnealResult {
    fn from(r: AnnealResult) -> Self {
        PyAnnealResult {
            assignment: bit_list(&r.best_assignment),
            cost: r.best_cost,
            restart_costs: r.restart_costs,
            accepted_moves: r.accepted_moves,
            seed: r.seed_used,
        }
    }
}

#[pymethods]
impl PyAnnealResult {
    fn __repr__(&self) -> String {
        format!("AnnealResult(cost={}, assignment={:?})", self.cost, self.assignment)
    }
}

#[pyfunction]
#[pyo3(signature = (poly, sweeps=1000, restarts=8, seed=0, t_initial=None, t_final=1e-3))]
fn anneal(
    py: Python<'_>,
    poly: &PyPolynomial,
    sweeps: usize,
    restarts: usize,
    seed: u64,
    t_initial: Option<f64>,
    t_final: f64,
) -> PyResult<PyAnnealResult> {
    let cfg = AnnealConfig {
        sweeps,
        restarts,
        t_initial,
        t_final,
        seed,
        ..Default::default()
    };
    py.detach(|| annealer::anneal(&poly.inner, &cfg))
        .map(PyAnnealResult::from)
        .map_err(err)
}

#[pyfunction]
fn brute_force_min(poly: &PyPolynomial) -> PyResult<(Vec<u32>, f64)> {
    oracle::brute_force_min(&poly.inner)
        .map(|(x, c)| (bit_list(&x), c))
        .map_err(err)
}

#[pyfunction]
fn qubo_matrix(poly: &PyPolynomial) -> PyResult<Vec<Vec<f64>>> {
    tensor::build_qubo_matrix(&poly.inner)
        .map(|q| q.rows())
        .map_err(err)
}

#[pyfunction]
fn acceptance_probability(delta: f64, temperature: f64) -> PyResult<f64> {
    annealer::acceptance_probability(delta, temperature).map_err(err)
}

#[pymodule]
fn hobopy(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolynomial>()?;
    m.add_class::<PyHoboTensor>()?;
    m.add_class::<PyAnnealResult>()?;
    m.add_function(wrap_pyfunction!(anneal, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_min, m)?)?;
    m.add_function(wrap_pyfunction!(qubo_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(acceptance_probability, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
