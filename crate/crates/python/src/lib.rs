//! Python bindings. Results with structure (invariant reports, search
//! results, manifests) come back as plain dicts and lists.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use braidword::braid;
use braidword::construct;
use braidword::diagram::{self, Orientation};
use braidword::invariants::{self, CapCupCycle, CapCupSymbol};
use braidword::oracle;
use braidword::orient;
use braidword::render;
use braidword::rewrite::{self, Budget};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn parse_cycle(names: Vec<String>) -> PyResult<CapCupCycle> {
    let symbols = names
        .iter()
        .map(|n| {
            CapCupSymbol::ALL
                .into_iter()
                .find(|s| s.name() == n)
                .ok_or_else(|| err(format!("unknown cap/cup `{n}`")))
        })
        .collect::<PyResult<Vec<_>>>()?;
    CapCupCycle::new(symbols).map_err(err)
}

#[pyclass(name = "Diagram", module = "braidword", frozen)]
struct PyDiagram(diagram::Diagram);

#[pymethods]
impl PyDiagram {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        diagram::parse_diagram(text).map(PyDiagram).map_err(err)
    }

    fn __str__(&self) -> String {
        diagram::serialize_diagram(&self.0)
    }

    fn __repr__(&self) -> String {
        format!(
            "Diagram({} slices, {} -> {})",
            self.0.len(),
            self.0.domain(),
            self.0.codomain()
        )
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __eq__(&self, other: &PyDiagram) -> bool {
        self.0 == other.0
    }

    #[getter]
    fn domain(&self) -> String {
        self.0.domain().to_string()
    }

    #[getter]
    fn codomain(&self) -> String {
        self.0.codomain().to_string()
    }

    fn is_closed(&self) -> bool {
        self.0.is_closed()
    }

    fn crossing_count(&self) -> usize {
        self.0.crossing_count()
    }

    fn writhe(&self) -> PyResult<i64> {
        invariants::writhe(&self.0).map_err(err)
    }

    fn turning_number(&self) -> PyResult<i64> {
        invariants::turning_number(&self.0).map_err(err)
    }

    fn cap_cup_cycle(&self) -> PyResult<Vec<String>> {
        let c = invariants::cap_cup_cycle(&self.0).map_err(err)?;
        Ok(c.elements().iter().map(|s| s.name().to_owned()).collect())
    }

    fn invariants<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &invariants::report(&self.0).map_err(err)?)
    }

    fn render(&self) -> String {
        render::render(&self.0)
    }

    fn bridge_normalize(&self) -> PyDiagram {
        PyDiagram(rewrite::bridge_normalize(&self.0))
    }

    fn canonical_form(&self) -> PyDiagram {
        PyDiagram(rewrite::canonical_form(&self.0))
    }

    /// `(exponent, coefficient)` pairs of the writhe-normalized bracket.
    #[pyo3(signature = (crossing_limit = oracle::DEFAULT_CROSSING_LIMIT))]
    fn normalized_invariant(&self, crossing_limit: usize) -> PyResult<Vec<(i64, i64)>> {
        let p = oracle::normalized_invariant_with_limit(&self.0, crossing_limit).map_err(err)?;
        Ok(p.terms().collect())
    }

    #[pyo3(signature = (crossing_limit = oracle::DEFAULT_CROSSING_LIMIT))]
    fn kauffman_bracket(&self, crossing_limit: usize) -> PyResult<Vec<(i64, i64)>> {
        let p = oracle::kauffman_bracket_with_limit(&self.0, crossing_limit).map_err(err)?;
        Ok(p.terms().collect())
    }
}

#[pyclass(name = "BraidWord", module = "braidword", frozen)]
struct PyBraidWord(braid::BraidWord);

#[pymethods]
impl PyBraidWord {
    #[new]
    fn new(n: usize, text: &str) -> PyResult<Self> {
        braid::BraidWord::parse(n, text).map(PyBraidWord).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("BraidWord({}, {:?})", self.0.strands(), self.0.to_string())
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    #[getter]
    fn strands(&self) -> usize {
        self.0.strands()
    }

    fn inverse(&self) -> PyBraidWord {
        PyBraidWord(self.0.inverse())
    }

    fn is_trivial(&self) -> PyResult<bool> {
        braid::is_trivial(&self.0).map_err(err)
    }

    fn equals(&self, other: &PyBraidWord) -> PyResult<bool> {
        braid::braid_equal(&self.0, &other.0).map_err(err)
    }

    #[pyo3(signature = (up = true))]
    fn to_diagram(&self, up: bool) -> PyResult<PyDiagram> {
        let wire = if up { Orientation::Up } else { Orientation::Down };
        self.0.to_diagram(wire).map(PyDiagram).map_err(err)
    }

    #[staticmethod]
    fn from_diagram(d: &PyDiagram) -> PyResult<PyBraidWord> {
        braid::BraidWord::from_diagram(&d.0).map(PyBraidWord).map_err(err)
    }
}

#[pyfunction]
fn parse_diagram(text: &str) -> PyResult<PyDiagram> {
    PyDiagram::new(text)
}

/// Orients an unoriented single-component diagram (`cap @ k`, `cup @ k`).
#[pyfunction]
#[pyo3(signature = (text, reverse = false))]
fn orient_knot(text: &str, reverse: bool) -> PyResult<PyDiagram> {
    orient::orient_knot(text, reverse).map(PyDiagram).map_err(err)
}

/// The canonical unknot with the given cap-cup cycle and writhe.
#[pyfunction]
fn realize_cycle_with_writhe(cycle: Vec<String>, writhe: i64) -> PyResult<PyDiagram> {
    construct::realize_cycle_with_writhe(&parse_cycle(cycle)?, writhe)
        .map(PyDiagram)
        .map_err(err)
}

#[pyfunction]
fn realize_cycle(cycle: Vec<String>) -> PyResult<PyDiagram> {
    construct::realize_cycle(&parse_cycle(cycle)?)
        .map(PyDiagram)
        .map_err(err)
}

/// `(knot, canonical unknot, manifest)`.
#[pyfunction]
fn build_instance<'py>(py: Python<'py>, knot: &PyDiagram) -> PyResult<(PyDiagram, PyDiagram, Bound<'py, PyAny>)> {
    let inst = construct::build_instance(&knot.0).map_err(err)?;
    let manifest = to_py(py, &inst.manifest())?;
    Ok((PyDiagram(inst.lhs), PyDiagram(inst.rhs), manifest))
}

/// Bounded search; the GIL is released while it runs.
#[pyfunction]
#[pyo3(signature = (a, b, max_states = Budget::default().max_states, max_slices = None))]
fn equiv_search<'py>(
    py: Python<'py>,
    a: &PyDiagram,
    b: &PyDiagram,
    max_states: usize,
    max_slices: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let (a, b) = (a.0.clone(), b.0.clone());
    let result = py
        .detach(move || rewrite::equiv_search(&a, &b, Budget::new(max_states, max_slices)))
        .map_err(err)?;
    to_py(py, &result)
}

#[pyfunction]
fn braid_equal(n: usize, u: &str, v: &str) -> PyResult<bool> {
    let u = braid::BraidWord::parse(n, u).map_err(err)?;
    let v = braid::BraidWord::parse(n, v).map_err(err)?;
    braid::braid_equal(&u, &v).map_err(err)
}

#[pymodule]
#[pyo3(name = "braidword")]
fn braidword_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDiagram>()?;
    m.add_class::<PyBraidWord>()?;
    m.add_function(wrap_pyfunction!(parse_diagram, m)?)?;
    m.add_function(wrap_pyfunction!(orient_knot, m)?)?;
    m.add_function(wrap_pyfunction!(realize_cycle, m)?)?;
    m.add_function(wrap_pyfunction!(realize_cycle_with_writhe, m)?)?;
    m.add_function(wrap_pyfunction!(build_instance, m)?)?;
    m.add_function(wrap_pyfunction!(equiv_search, m)?)?;
    m.add_function(wrap_pyfunction!(braid_equal, m)?)?;
    Ok(())
}
