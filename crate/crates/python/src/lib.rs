//! Python bindings for scllab.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use scllab_core::costmodel;
use scllab_core::crossbar;
use scllab_core::harness::{self, PrunerKind, SimConfig};
use scllab_core::pruning::{build_bitonic, build_mvf, verify_zero_one, CompareExchangeNetwork};
use scllab_core::{ChannelConfig, MetricKind, SclDecoder};

fn err(e: scllab_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

// Vec<u8> would come out as `bytes`; bits read better as a list of ints.
fn bit_list(bits: Vec<u8>) -> Vec<u32> {
    bits.into_iter().map(u32::from).collect()
}

/// A polar code: block length, information set and frozen values.
#[pyclass(name = "PolarCode", module = "scllab", frozen)]
struct PyPolarCode {
    inner: scllab_core::PolarCode,
}

#[pymethods]
impl PyPolarCode {
    #[new]
    #[pyo3(signature = (n, k, z0 = 0.5))]
    fn new(n: usize, k: usize, z0: f64) -> PyResult<Self> {
        Ok(Self {
            inner: scllab_core::PolarCode::construct(n, k, z0).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_info_set(n: usize, info_set: Vec<usize>) -> PyResult<Self> {
        Ok(Self {
            inner: scllab_core::PolarCode::from_info_set(n, info_set).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_code_file(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: scllab_core::PolarCode::from_code_file(text).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn rate(&self) -> f64 {
        self.inner.rate()
    }

    #[getter]
    fn info_set(&self) -> Vec<usize> {
        self.inner.info_set().to_vec()
    }

    #[getter]
    fn frozen_set(&self) -> Vec<usize> {
        self.inner.frozen_set().to_vec()
    }

    fn encode(&self, info_bits: Vec<u8>) -> PyResult<Vec<u32>> {
        self.inner.encode(&info_bits).map(bit_list).map_err(err)
    }

    fn to_code_file(&self) -> String {
        self.inner.to_code_file()
    }

    fn __repr__(&self) -> String {
        format!("PolarCode(n={}, k={})", self.inner.n(), self.inner.k())
    }
}

/// Result of an SCL decode.
#[pyclass(name = "SclOutput", module = "scllab", frozen, get_all)]
struct PySclOutput {
    info_bits: Vec<u32>,
    decoded: Vec<u32>,
    metric: f64,
    /// One line per pruning step: `bit=<i> survivors=.. sources=..`.
    audit: Vec<String>,
}

#[pymethods]
impl PySclOutput {
    fn __repr__(&self) -> String {
        format!(
            "SclOutput(metric={}, k={})",
            self.metric,
            self.info_bits.len()
        )
    }
}

/// BPSK over AWGN; returns channel LLRs for frame `frame` of stream `seed`.
#[pyfunction]
#[pyo3(signature = (codeword, ebn0_db, rate, seed = 1, frame = 0))]
fn transmit(
    codeword: Vec<u8>,
    ebn0_db: f64,
    rate: f64,
    seed: u64,
    frame: u64,
) -> PyResult<Vec<f64>> {
    let cfg = ChannelConfig::new(ebn0_db, rate, seed).map_err(err)?;
    Ok(scllab_core::transmit(&codeword, &cfg, frame))
}

#[pyfunction]
fn decode_sc(code: &PyPolarCode, llrs: Vec<f64>) -> PyResult<Vec<u32>> {
    scllab_core::decode_sc(&code.inner, &llrs)
        .map(bit_list)
        .map_err(err)
}

/// SCL decode. `pruner` is conventional, proposed, design1, design2 or
/// design3; index-sorting pruners run on the reduced crossbar.
#[pyfunction]
#[pyo3(signature = (code, llrs, list_size, pruner = "proposed", exact_metric = false))]
fn decode_scl(
    py: Python<'_>,
    code: &PyPolarCode,
    llrs: Vec<f64>,
    list_size: usize,
    pruner: &str,
    exact_metric: bool,
) -> PyResult<PySclOutput> {
    let kind: PrunerKind = pruner.parse().map_err(err)?;
    let code = code.inner.clone();
    let out = py
        .detach(|| {
            let p = kind.build(list_size)?;
            let x = kind.crossbar(list_size)?;
            let metric = if exact_metric {
                MetricKind::Exact
            } else {
                MetricKind::Approximate
            };
            SclDecoder::new(&code, list_size, p.as_ref(), &x)?
                .with_metric(metric)
                .decode(&llrs)
        })
        .map_err(err)?;
    Ok(PySclOutput {
        info_bits: bit_list(out.info_bits),
        decoded: bit_list(out.decoded),
        metric: out.metric,
        audit: out.audit.events.iter().map(ToString::to_string).collect(),
    })
}

/// Inclusive `(first, last)` source paths slot `k` may copy from.
#[pyfunction]
fn allowed_sources(k: usize, list_size: usize) -> PyResult<(usize, usize)> {
    let r = crossbar::allowed_sources(k, list_size).map_err(err)?;
    Ok((*r.start(), *r.end()))
}

/// Checks the reduced crossbar; returns `(passed, report_text)`.
#[pyfunction]
fn verify_proposition(py: Python<'_>, list_size: usize) -> PyResult<(bool, String)> {
    let r = py
        .detach(|| crossbar::verify_proposition(list_size))
        .map_err(err)?;
    Ok((r.passed(), r.to_string()))
}

#[pyfunction]
fn estimate_lut_gain(conventional_luts: u64, list_size: usize) -> PyResult<u64> {
    costmodel::estimate_lut_gain(conventional_luts, list_size).map_err(err)
}

#[pyfunction]
fn latency_cycles(n: usize, p: usize) -> PyResult<u64> {
    costmodel::latency_cycles(n, p).map_err(err)
}

/// Summary of a compare-exchange network.
#[pyclass(name = "Network", module = "scllab", frozen, get_all)]
struct PyNetwork {
    width: usize,
    comparators: usize,
    depth: usize,
    dump: String,
    zero_one_ok: Option<bool>,
}

impl PyNetwork {
    fn from_net(net: CompareExchangeNetwork) -> PyResult<Self> {
        let zero_one_ok = if net.width() <= 20 {
            Some(verify_zero_one(&net).map_err(err)?.passed())
        } else {
            None
        };
        Ok(Self {
            width: net.width(),
            comparators: net.comparator_count(),
            depth: net.depth(),
            dump: net.dump(),
            zero_one_ok,
        })
    }
}

#[pymethods]
impl PyNetwork {
    fn __repr__(&self) -> String {
        format!(
            "Network(width={}, comparators={}, depth={})",
            self.width, self.comparators, self.depth
        )
    }
}

#[pyfunction]
fn bitonic_network(width: usize) -> PyResult<PyNetwork> {
    PyNetwork::from_net(build_bitonic(width).map_err(err)?)
}

#[pyfunction]
fn mvf_network(width: usize) -> PyResult<PyNetwork> {
    PyNetwork::from_net(build_mvf(width).map_err(err)?)
}

/// Runs a FER sweep from `key = value` config text and returns the CSV.
#[pyfunction]
fn simulate(py: Python<'_>, config: &str) -> PyResult<String> {
    let cfg = SimConfig::parse(config).map_err(err)?;
    let result = py.detach(|| harness::run_fer(&cfg)).map_err(err)?;
    Ok(harness::to_csv(&result))
}

#[pymodule]
fn scllab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolarCode>()?;
    m.add_class::<PySclOutput>()?;
    m.add_class::<PyNetwork>()?;
    m.add_function(wrap_pyfunction!(transmit, m)?)?;
    m.add_function(wrap_pyfunction!(decode_sc, m)?)?;
    m.add_function(wrap_pyfunction!(decode_scl, m)?)?;
    m.add_function(wrap_pyfunction!(allowed_sources, m)?)?;
    m.add_function(wrap_pyfunction!(verify_proposition, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_lut_gain, m)?)?;
    m.add_function(wrap_pyfunction!(latency_cycles, m)?)?;
    m.add_function(wrap_pyfunction!(bitonic_network, m)?)?;
    m.add_function(wrap_pyfunction!(mvf_network, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    Ok(())
}
