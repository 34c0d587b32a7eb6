//! Python bindings: codes, recovery simulation and provisioning.

use std::collections::BTreeMap;

use npc_core::codes::{self, Catalog, CatalogQuery, LinearCode, Provenance, Rule};
use npc_core::gf2::{BitMatrix, CodewordVector};
use npc_core::provision::{self, BnbLimits, BnbStatus, ProvisionResult, Topology};
use npc_core::scheme;
use npc_core::sim::{self, ValidateOptions};
use num_rational::Rational64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: npc_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// An `[n, k, d_min]` binary code; the first `k` coordinates carry plain data.
#[pyclass(name = "Code", frozen)]
struct PyCode {
    inner: LinearCode,
}

#[pymethods]
impl PyCode {
    /// Narrow-sense BCH code of odd length `n` and designed distance `d`.
    #[staticmethod]
    fn bch(n: usize, d: usize) -> PyResult<Self> {
        codes::construct_bch(n, d).map(|inner| Self { inner }).map_err(err)
    }

    /// The `[n, n-1, 2]` single-parity code.
    #[staticmethod]
    fn single_parity(n: usize) -> PyResult<Self> {
        LinearCode::single_parity(n).map(|inner| Self { inner }).map_err(err)
    }

    /// Code spanned by the rows of a 0/1 generator matrix.
    #[staticmethod]
    fn from_rows(rows: Vec<Vec<u8>>) -> PyResult<Self> {
        let g = BitMatrix::from_rows(&rows).map_err(err)?;
        LinearCode::from_generator(&g, Provenance::Explicit("python".into()))
            .map(|inner| Self { inner })
            .map_err(err)
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
    fn m(&self) -> usize {
        self.inner.m()
    }

    /// Minimum distance, or a lower bound when `d_min_exact` is false.
    #[getter]
    fn d_min(&self) -> usize {
        self.inner.d_min().value()
    }

    #[getter]
    fn d_min_exact(&self) -> bool {
        self.inner.d_min().is_exact()
    }

    #[getter]
    fn parameters(&self) -> String {
        self.inner.parameters()
    }

    fn generator(&self) -> Vec<Vec<u8>> {
        self.inner.generator().to_rows()
    }

    fn parity(&self) -> Vec<Vec<u8>> {
        self.inner.parity().to_rows()
    }

    fn encode(&self, message: Vec<u8>) -> PyResult<Vec<u8>> {
        self.inner
            .encode(&CodewordVector::from_bits(&message))
            .map(|w| w.to_bits())
            .map_err(err)
    }

    fn is_codeword(&self, word: Vec<u8>) -> PyResult<bool> {
        self.inner.is_codeword(&CodewordVector::from_bits(&word)).map_err(err)
    }

    /// Applies `shorten`, `puncture`, `append` or `extend`.
    fn derive(&self, rule: &str) -> PyResult<Self> {
        let rule: Rule = rule.parse().map_err(err)?;
        codes::derive(&self.inner, rule).map(|inner| Self { inner }).map_err(err)
    }

    /// Singleton and Hamming bound checks.
    fn bounds(&self) -> BTreeMap<&'static str, usize> {
        let r = codes::check_bounds(&self.inner);
        BTreeMap::from([
            ("singleton_ok", usize::from(r.singleton_ok)),
            ("hamming_ok", usize::from(r.hamming_ok)),
            ("hamming_tight", usize::from(r.hamming_tight)),
            ("min_m_required", r.min_m_required),
        ])
    }

    fn __repr__(&self) -> String {
        format!("Code({})", self.inner.parameters())
    }
}

/// Dimension of the narrow-sense BCH code of length `n`, designed distance
/// `d` and multiplicative order `mu`.
#[pyfunction]
fn bch_dimension(n: usize, d: usize, mu: u32) -> PyResult<usize> {
    codes::bch_dimension(n, d, mu).map_err(err)
}

/// Catalog entries as `(parameters, kind, tables)` tuples.
#[pyfunction]
#[pyo3(signature = (n=None, t=None, kind=None))]
fn catalog(n: Option<usize>, t: Option<usize>, kind: Option<String>) -> Vec<(String, String, String)> {
    Catalog::bundled()
        .query(&CatalogQuery { n, t, kind })
        .into_iter()
        .map(|e| (e.parameters(), e.kind.clone(), e.tables.join(",")))
        .collect()
}

/// Normalized capacity `(n - m) / n` as `(numerator, denominator)`.
#[pyfunction]
fn capacity(n: usize, m: usize) -> PyResult<(u64, u64)> {
    let c = scheme::capacity(n, m).map_err(err)?;
    Ok((*c.numer(), *c.denom()))
}

/// Encodes one round, erases the failed connections (numbered from 1) and
/// recovers the plain data. Returns the data and the recovery statistics.
#[pyfunction]
fn recover_round(
    code: &PyCode,
    round: usize,
    data: Vec<u64>,
    failed: Vec<usize>,
) -> PyResult<(Vec<u64>, BTreeMap<&'static str, String>)> {
    let code = &code.inner;
    let plan = scheme::plan_round(code.n(), code.m(), round).map_err(err)?;
    let packets = scheme::encode_round(code, &plan, &data).map_err(err)?;
    let received = sim::inject(&packets, &sim::FailureScenario::new(&failed, round)).map_err(err)?;
    let (out, stats) = sim::recover(&received, code, &plan).map_err(err)?;
    let stats = BTreeMap::from([
        ("case", stats.case.to_string()),
        ("xor_ops", stats.xor_ops.to_string()),
        ("queries", stats.queries.to_string()),
        ("unicasts", stats.unicasts.to_string()),
    ]);
    Ok((out, stats))
}

/// Checks recovery from every failure pattern of up to `t` connections and
/// returns the one-line report.
#[pyfunction]
#[pyo3(signature = (code, t, pattern_cap=100_000, codeword_cap=100, seed=0))]
fn validate(code: &PyCode, t: usize, pattern_cap: u64, codeword_cap: u64, seed: u64) -> PyResult<(bool, String)> {
    let opts = ValidateOptions {
        pattern_cap,
        codeword_cap,
        seed,
    };
    let r = sim::exhaustive_validate(&code.inner, t, &opts).map_err(err)?;
    Ok((r.passed(), r.line()))
}

/// Outcome of provisioning a topology.
#[pyclass(name = "Provisioning", frozen, get_all)]
struct PyProvisioning {
    total: f64,
    working: f64,
    spare: f64,
    optimal: bool,
    /// Connection indices protected together.
    groups: Vec<Vec<usize>>,
    /// Working path of each connection as node names.
    working_paths: Vec<Vec<String>>,
}

impl PyProvisioning {
    fn new(t: &Topology, r: &ProvisionResult) -> Self {
        Self {
            total: to_f64(r.total),
            working: to_f64(r.working),
            spare: to_f64(r.spare),
            optimal: r.status == BnbStatus::Optimal,
            groups: r.groups.iter().map(|g| g.members.clone()).collect(),
            working_paths: r
                .connections
                .iter()
                .map(|p| t.path_nodes(&p.working).iter().map(|&v| t.name(v).to_string()).collect())
                .collect(),
        }
    }
}

#[pymethods]
impl PyProvisioning {
    fn __repr__(&self) -> String {
        format!(
            "Provisioning(total={}, working={}, spare={}, optimal={})",
            self.total, self.working, self.spare, self.optimal
        )
    }
}

/// Provisions the topology given in `.top` text with coded protection.
#[pyfunction]
#[pyo3(signature = (text, max_nodes=2_000_000))]
fn provision_npc(text: &str, max_nodes: u64) -> PyResult<PyProvisioning> {
    let (t, c) = provision::load_topology(text).map_err(err)?;
    let limits = BnbLimits {
        max_nodes,
        ..BnbLimits::default()
    };
    let r = provision::provision(&t, &c, &limits).map_err(err)?;
    Ok(PyProvisioning::new(&t, &r))
}

/// Total cost of 1+1 protection from Bhandari pairs.
#[pyfunction]
fn one_plus_one_cost(text: &str) -> PyResult<f64> {
    let (t, c) = provision::load_topology(text).map_err(err)?;
    provision::one_plus_one_costs(&t, &c).map(|r| to_f64(r.total)).map_err(err)
}

/// The provisioning model in LP format.
#[pyfunction]
fn export_lp(text: &str) -> PyResult<String> {
    let (t, c) = provision::load_topology(text).map_err(err)?;
    provision::build_ilp(&t, &c).map(|ilp| ilp.model.export_lp()).map_err(err)
}

#[pymodule]
fn npc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCode>()?;
    m.add_class::<PyProvisioning>()?;
    m.add_function(wrap_pyfunction!(bch_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(capacity, m)?)?;
    m.add_function(wrap_pyfunction!(recover_round, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(provision_npc, m)?)?;
    m.add_function(wrap_pyfunction!(one_plus_one_cost, m)?)?;
    m.add_function(wrap_pyfunction!(export_lp, m)?)?;
    Ok(())
}
