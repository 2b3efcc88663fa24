//! Python bindings: `import synthcycle`.

use num_bigint::BigUint;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use synthcycle as core;
use synthcycle::codec::{BitString, CodecConfig, EncodedBatch, Scheme};
use synthcycle::sweep::{Curve, OutputFormat, RhoGrid, SweepRequest};
use synthcycle::{Alphabet, Oligo, Symbol};

create_exception!(synthcycle, CorruptDataError, PyValueError, "Encoded data failed validation.");

fn to_py(e: core::Error) -> PyErr {
    if e.is_corruption() {
        CorruptDataError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn oligo(q: u32, symbols: Vec<Symbol>) -> PyResult<Oligo> {
    Oligo::new(Alphabet::new(q).map_err(to_py)?, symbols).map_err(to_py)
}

fn bits(text: &str) -> PyResult<BitString> {
    BitString::parse(text).map_err(to_py)
}

#[pyfunction]
fn subsequence_count(q: u32, cycles: u64, length: u64) -> PyResult<BigUint> {
    core::counting::subsequence_count(q, cycles, length).map_err(to_py)
}

#[pyfunction]
fn deletion_ball_size(q: u32, cycles: u64, t: u64) -> PyResult<BigUint> {
    core::counting::deletion_ball_size(q, cycles, t).map_err(to_py)
}

#[pyfunction]
fn brute_force_count(q: u32, cycles: u64, length: u64) -> PyResult<BigUint> {
    core::counting::brute_force_count(q, cycles, length).map_err(to_py)
}

/// Lexicographic index of `symbols` among length-L subsequences of A_q[C].
#[pyfunction]
fn rank(q: u32, cycles: u64, symbols: Vec<Symbol>) -> PyResult<BigUint> {
    core::counting::rank(q, cycles, &oligo(q, symbols)?).map_err(to_py)
}

#[pyfunction]
fn unrank(q: u32, cycles: u64, length: u64, index: BigUint) -> PyResult<Vec<Symbol>> {
    Ok(core::counting::unrank(q, cycles, length, &index).map_err(to_py)?.into_symbols())
}

#[pyfunction]
fn synthesis_cycles(q: u32, symbols: Vec<Symbol>) -> PyResult<u64> {
    Ok(core::sequence::synthesis_cycles(&oligo(q, symbols)?))
}

#[pyfunction]
fn binary_entropy(rho: f64) -> PyResult<f64> {
    core::capacity::binary_entropy(rho).map_err(to_py)
}

#[pyfunction]
fn cap_fixed_length(q: u32, rho: f64) -> PyResult<f64> {
    core::capacity::cap_fixed_length(q, rho).map_err(to_py)
}

#[pyfunction]
fn cap_flexible(q: u32) -> PyResult<f64> {
    core::capacity::cap_flexible(q).map_err(to_py)
}

#[pyfunction]
fn empirical_cap(q: u32, cycles: u64, rho: f64) -> PyResult<f64> {
    core::capacity::empirical_cap(q, cycles, rho).map_err(to_py)
}

#[pyfunction]
fn optimal_alpha(q: u32, rho: f64) -> PyResult<(u32, f64)> {
    core::codec::optimal_alpha(q, rho).map_err(to_py)
}

#[pyfunction]
fn multisize_rate(q: u32, rho: f64) -> PyResult<f64> {
    core::codec::multisize_rate(q, rho).map_err(to_py)
}

#[pyfunction]
fn f_and_qstar(q: u32) -> PyResult<(usize, usize)> {
    core::codec::f_and_qstar(q).map_err(to_py)
}

/// Knuth-balanced word of a bit string such as "100".
#[pyfunction]
fn knuth_balance(q: u32, payload: &str) -> PyResult<String> {
    Ok(core::codec::knuth_balance(q, &bits(payload)?).map_err(to_py)?.to_string())
}

#[pyfunction]
fn knuth_unbalance(q: u32, word: &str) -> PyResult<String> {
    Ok(core::codec::knuth_unbalance(q, &bits(word)?).map_err(to_py)?.to_string())
}

#[pyfunction]
fn e1_encode(q: u32, payload: &str) -> PyResult<Vec<Symbol>> {
    Ok(core::codec::e1_encode(q, &bits(payload)?).map_err(to_py)?.into_symbols())
}

#[pyfunction]
fn base_encode(q: u32, info: Vec<Symbol>) -> PyResult<Vec<Symbol>> {
    let a = Alphabet::new(q).map_err(to_py)?;
    Ok(core::codec::base_encode(a, &info).map_err(to_py)?.into_symbols())
}

#[pyfunction]
fn base_decode(q: u32, symbols: Vec<Symbol>) -> PyResult<Vec<Symbol>> {
    core::codec::base_decode(&oligo(q, symbols)?).map_err(to_py)
}

#[pyfunction]
fn rho_star(q: u32) -> PyResult<f64> {
    core::cost::rho_star(q).map_err(to_py)
}

fn cost_params(alpha: f64, beta: f64, bits: u64, cycles: u64) -> PyResult<core::cost::CostParams> {
    core::cost::CostParams::new(alpha, beta, bits, cycles).map_err(to_py)
}

#[pyfunction]
fn cost_star(alpha: f64, beta: f64, bits: u64, cycles: u64, q: u32, rho: f64) -> PyResult<f64> {
    core::cost::cost_star(&cost_params(alpha, beta, bits, cycles)?, q, rho).map_err(to_py)
}

/// `(q, rho_opt, cost_opt)`; pass `max_q` instead of `q` to optimize q as well.
#[pyfunction]
#[pyo3(signature = (alpha, beta, bits, cycles, q=None, max_q=None))]
fn minimize_cost(
    alpha: f64,
    beta: f64,
    bits: u64,
    cycles: u64,
    q: Option<u32>,
    max_q: Option<u32>,
) -> PyResult<(u32, f64, f64)> {
    let p = cost_params(alpha, beta, bits, cycles)?;
    let opt = match (q, max_q) {
        (Some(q), None) => core::cost::minimize_rho(&p, q),
        (None, Some(m)) => core::cost::minimize_with_alphabet_bound(&p, m),
        _ => return Err(PyValueError::new_err("pass exactly one of q or max_q")),
    }
    .map_err(to_py)?;
    Ok((opt.q, opt.rho, opt.cost))
}

/// Rows `(scheme, rho, rate, cap)`.
#[pyfunction]
fn rate_table(q: u32, rho_grid: Vec<f64>) -> PyResult<Vec<(String, f64, f64, f64)>> {
    let rows = core::codec::rate_table(q, &rho_grid).map_err(to_py)?;
    Ok(rows.into_iter().map(|r| (r.scheme.to_string(), r.rho, r.rate, r.cap)).collect())
}

/// Curve data as CSV or JSON text.
#[pyfunction]
#[pyo3(signature = (curve, qs, start=0.0, stop=1.0, step=0.01, format="csv"))]
fn sweep(curve: &str, qs: Vec<u32>, start: f64, stop: f64, step: f64, format: &str) -> PyResult<String> {
    let curve: Curve = curve.parse().map_err(to_py)?;
    let mut req = SweepRequest::new(curve, qs, RhoGrid::new(start, stop, step).map_err(to_py)?);
    req.format = format.parse::<OutputFormat>().map_err(to_py)?;
    req.render().map_err(to_py)
}

/// An encoder/decoder for one scheme.
#[pyclass(name = "Codec", module = "synthcycle")]
struct PyCodec {
    inner: core::codec::Codec,
}

#[pymethods]
impl PyCodec {
    #[new]
    #[pyo3(signature = (scheme, q, rho=None, d=None, length=None))]
    fn new(scheme: &str, q: u32, rho: Option<f64>, d: Option<u64>, length: Option<usize>) -> PyResult<Self> {
        let scheme: Scheme = scheme.parse().map_err(to_py)?;
        let cfg = CodecConfig { scheme, q, rho, d, length };
        Ok(PyCodec { inner: core::codec::Codec::from_config(&cfg).map_err(to_py)? })
    }

    #[getter]
    fn scheme(&self) -> String {
        self.inner.scheme().to_string()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.q()
    }

    #[getter]
    fn rate(&self) -> f64 {
        self.inner.profile().rate
    }

    #[getter]
    fn cycles_per_bit(&self) -> f64 {
        self.inner.profile().cycles_per_bit()
    }

    fn profile<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let text = serde_json::to_string(&self.inner.profile()).expect("profile serializes");
        json_to_py(py, &text)
    }

    /// Encodes bytes (most significant bit first).
    fn encode(&self, data: &[u8]) -> PyResult<PyBatch> {
        Ok(PyBatch { inner: self.inner.encode(&BitString::from_bytes(data)).map_err(to_py)? })
    }

    fn decode<'py>(&self, py: Python<'py>, batch: &PyBatch) -> PyResult<Bound<'py, PyBytes>> {
        let out = self.inner.decode(&batch.inner).map_err(to_py)?;
        Ok(PyBytes::new(py, &out.to_bytes()))
    }

    fn __repr__(&self) -> String {
        let p = self.inner.profile();
        format!("Codec(scheme={:?}, q={}, rho={}, rate={})", p.scheme.as_str(), p.q, p.rho, p.rate)
    }
}

/// Oligos plus the synthesis program that produces them.
#[pyclass(name = "Batch", module = "synthcycle")]
struct PyBatch {
    inner: EncodedBatch,
}

#[pymethods]
impl PyBatch {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyBatch { inner: EncodedBatch::from_json(text).map_err(to_py)? })
    }

    #[pyo3(signature = (pretty=false))]
    fn to_json(&self, pretty: bool) -> String {
        if pretty {
            self.inner.to_json_pretty()
        } else {
            self.inner.to_json()
        }
    }

    #[getter]
    fn scheme(&self) -> String {
        self.inner.scheme.to_string()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.q
    }

    #[getter]
    fn rho(&self) -> f64 {
        self.inner.rho
    }

    #[getter]
    fn payload_bits(&self) -> u64 {
        self.inner.payload_bits
    }

    /// `[(alphabet, cycles), ...]`.
    #[getter]
    fn spec(&self) -> Vec<(u32, u64)> {
        self.inner.spec.segments().iter().map(|s| (s.alphabet.size(), s.cycles)).collect()
    }

    #[getter]
    fn oligos(&self) -> Vec<Vec<Symbol>> {
        self.inner.oligos.iter().map(|o| o.symbols().to_vec()).collect()
    }

    fn total_cycles(&self) -> u64 {
        self.inner.spec.total_cycles()
    }

    fn fits_cycle_budget(&self) -> bool {
        self.inner.fits_cycle_budget()
    }

    /// Decodes with the parameters recorded in the batch.
    fn decode<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyBytes>> {
        let out = core::codec::decode_batch(&self.inner).map_err(to_py)?;
        Ok(PyBytes::new(py, &out.to_bytes()))
    }

    fn __len__(&self) -> usize {
        self.inner.oligos.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Batch(scheme={:?}, q={}, oligos={}, payload_bits={})",
            self.inner.scheme.as_str(),
            self.inner.q,
            self.inner.oligos.len(),
            self.inner.payload_bits
        )
    }
}

#[pymodule]
#[pyo3(name = "synthcycle")]
fn py_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CorruptDataError", m.py().get_type::<CorruptDataError>())?;
    m.add_class::<PyCodec>()?;
    m.add_class::<PyBatch>()?;
    m.add_function(wrap_pyfunction!(subsequence_count, m)?)?;
    m.add_function(wrap_pyfunction!(deletion_ball_size, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_count, m)?)?;
    m.add_function(wrap_pyfunction!(rank, m)?)?;
    m.add_function(wrap_pyfunction!(unrank, m)?)?;
    m.add_function(wrap_pyfunction!(synthesis_cycles, m)?)?;
    m.add_function(wrap_pyfunction!(binary_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(cap_fixed_length, m)?)?;
    m.add_function(wrap_pyfunction!(cap_flexible, m)?)?;
    m.add_function(wrap_pyfunction!(empirical_cap, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(multisize_rate, m)?)?;
    m.add_function(wrap_pyfunction!(f_and_qstar, m)?)?;
    m.add_function(wrap_pyfunction!(knuth_balance, m)?)?;
    m.add_function(wrap_pyfunction!(knuth_unbalance, m)?)?;
    m.add_function(wrap_pyfunction!(e1_encode, m)?)?;
    m.add_function(wrap_pyfunction!(base_encode, m)?)?;
    m.add_function(wrap_pyfunction!(base_decode, m)?)?;
    m.add_function(wrap_pyfunction!(rho_star, m)?)?;
    m.add_function(wrap_pyfunction!(cost_star, m)?)?;
    m.add_function(wrap_pyfunction!(minimize_cost, m)?)?;
    m.add_function(wrap_pyfunction!(rate_table, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
