//! Python bindings: formulas, proof checking, model checking, bounded
//! search, and the case corpus, driven in-process.
//!
//! Usage from Python:
//!
//!     import jto_py
//!     f = jto_py.parse("[t]_1 p -> p")
//!     print(f.core())
//!     report = jto_py.corpus_run("arguments-v1")

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use jto_core::corpus;
use jto_core::cs::ConstantSpecification;
use jto_core::formats;
use jto_core::proof::Checker;
use jto_core::search::{bounded_sat, SearchBounds};
use jto_core::semantics::{
    mc_fitting, mc_neighborhood, validate_fitting, validate_neighborhood, Universe,
};
use jto_core::syntax;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A parsed formula.
#[pyclass]
#[derive(Clone)]
struct Formula {
    inner: syntax::Formula,
}

#[pymethods]
impl Formula {
    /// Render with minimal parentheses.
    fn pretty(&self) -> String {
        syntax::pretty(&self.inner)
    }

    /// The desugared core form.
    fn core(&self) -> Formula {
        Formula { inner: self.inner.desugar() }
    }

    fn is_core(&self) -> bool {
        self.inner.is_core()
    }

    fn temporal_depth(&self) -> usize {
        self.inner.temporal_depth()
    }

    /// Erase the justification terms of every obligation.
    fn forgetful_projection(&self) -> Formula {
        Formula { inner: syntax::forgetful_projection(&self.inner) }
    }

    fn __repr__(&self) -> String {
        format!("Formula({})", self.pretty())
    }

    fn __str__(&self) -> String {
        self.pretty()
    }

    fn __eq__(&self, other: &Formula) -> bool {
        self.inner == other.inner
    }
}

/// Parse a formula; agents referenced by name are registered in order of
/// appearance, numeric subscripts keep their index.
#[pyfunction]
fn parse(text: &str) -> PyResult<Formula> {
    syntax::parse_formula(text)
        .map(|inner| Formula { inner })
        .map_err(value_err)
}

/// `time=m` as a formula.
#[pyfunction]
fn time_literal(m: usize) -> Formula {
    Formula { inner: syntax::time_literal(m) }
}

/// `true_m(f)` as a formula.
#[pyfunction]
fn true_at(m: usize, f: &Formula) -> Formula {
    Formula { inner: syntax::true_at(m, f.inner.clone()) }
}

/// A model loaded from `.jtom` text.
#[pyclass]
struct Model {
    inner: formats::Model,
}

#[pymethods]
impl Model {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        formats::parse_jtom(text)
            .map(|inner| Model { inner })
            .map_err(value_err)
    }

    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    fn kind(&self) -> &'static str {
        match self.inner {
            formats::Model::Neighborhood(_) => "neighborhood",
            formats::Model::Fitting(_) => "fitting",
        }
    }

    /// Truth of the formula at (run, pos), by the model's own semantics.
    fn check(&self, formula: &str, run: usize, pos: usize) -> PyResult<bool> {
        let mut agents = self.inner.agents().clone();
        let f = syntax::parse_formula_with(formula, &mut agents).map_err(value_err)?;
        match &self.inner {
            formats::Model::Neighborhood(m) => mc_neighborhood(m, run, pos, &f),
            formats::Model::Fitting(m) => mc_fitting(m, run, pos, &f),
        }
        .map_err(value_err)
    }

    /// Validate the closure conditions over a universe of formula strings.
    /// Returns the violation descriptions; empty means valid.
    fn validate(&self, universe: Vec<String>) -> PyResult<Vec<String>> {
        let mut agents = self.inner.agents().clone();
        let mut formulas = Vec::new();
        for text in &universe {
            formulas.push(syntax::parse_formula_with(text, &mut agents).map_err(value_err)?);
        }
        let uni = Universe::from_formulas(formulas.iter());
        let report = match &self.inner {
            formats::Model::Neighborhood(m) => {
                validate_neighborhood(m, &uni).map_err(value_err)?
            }
            formats::Model::Fitting(m) => validate_fitting(m, &uni),
        };
        Ok(report.violations.iter().map(|v| v.to_string()).collect())
    }
}

/// Check a proof script (`.jtopf` text). `support` scripts are checked and
/// registered first; `cs` is a `.jto` list of constant-specification
/// entries. Returns (accepted, diagnostics).
#[pyfunction]
#[pyo3(signature = (script, support = Vec::new(), cs = None))]
fn check_proof(
    script: &str,
    support: Vec<String>,
    cs: Option<String>,
) -> PyResult<(bool, Vec<String>)> {
    let spec = match cs {
        Some(text) => {
            let parsed = formats::parse_jto(&text).map_err(value_err)?;
            ConstantSpecification::from_formulas(parsed.formulas)
        }
        None => ConstantSpecification::empty(),
    };
    let mut checker = Checker::new(spec);
    for text in &support {
        let (s, _) = formats::parse_jtopf(text).map_err(value_err)?;
        let report = checker.check(&s);
        if !report.accepted {
            return Err(value_err(format!("support script `{}` rejected", s.name)));
        }
    }
    let (s, _) = formats::parse_jtopf(script).map_err(value_err)?;
    let report = checker.check(&s);
    let diags: Vec<String> = report
        .lines
        .iter()
        .filter_map(|l| {
            l.diagnostic
                .as_ref()
                .map(|d| format!("line {}: {d}", l.index))
        })
        .chain(report.goal_diagnostic.iter().map(|d| format!("goal: {d}")))
        .collect();
    Ok((report.accepted, diags))
}

/// Bounded lasso search over the conjunction of the formulas. Returns the
/// verdict line (`SAT ...` or `UNSAT ...`).
#[pyfunction]
#[pyo3(signature = (formulas, at = None, max_stem = 8, max_loop = 2))]
fn search(
    formulas: Vec<String>,
    at: Option<usize>,
    max_stem: usize,
    max_loop: usize,
) -> PyResult<String> {
    if max_loop == 0 {
        return Err(PyValueError::new_err("max_loop must be at least 1"));
    }
    let mut agents = syntax::AgentTable::open();
    let mut parsed = Vec::new();
    for text in &formulas {
        parsed.push(syntax::parse_formula_with(text, &mut agents).map_err(value_err)?);
    }
    let verdict = bounded_sat(&parsed, at, SearchBounds::new(max_stem, max_loop))
        .map_err(value_err)?;
    Ok(verdict.to_string())
}

/// The built-in case names.
#[pyfunction]
fn corpus_cases() -> Vec<String> {
    corpus::load_corpus().into_iter().map(|c| c.name).collect()
}

/// Run a case; returns rows of (engine, target, verdict, pass).
#[pyfunction]
fn corpus_run(name: &str) -> PyResult<Vec<(String, String, String, bool)>> {
    let report = corpus::run_case_by_name(name).map_err(value_err)?;
    Ok(report
        .entries
        .into_iter()
        .map(|e| (e.engine.to_string(), e.target, e.verdict, e.pass))
        .collect())
}

#[pymodule]
fn jto_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Formula>()?;
    m.add_class::<Model>()?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(time_literal, m)?)?;
    m.add_function(wrap_pyfunction!(true_at, m)?)?;
    m.add_function(wrap_pyfunction!(check_proof, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(corpus_cases, m)?)?;
    m.add_function(wrap_pyfunction!(corpus_run, m)?)?;
    Ok(())
}
