//! Python bindings: terms, types, equations, reduction, typing, the two
//! translations and the lemma checks.

use pyo3::exceptions::{PyTypeError, PyValueError};
use pyo3::prelude::*;

use lmcalc::harness::{enumerate_typed_terms, run_lemma, CorpusSpec, VerifyOptions};
use lmcalc::reduce::{normalize, reducts, sn_verdict, RuleSet, SnVerdict, DEFAULT_FUEL};
use lmcalc::syntax::{alpha_eq, parse_term, parse_term_any, Mode, Position, Sort};
use lmcalc::translate::{circle, diamond, TranslationEnv};
use lmcalc::types::{is_good, parse_type, EquationSet, Goodness};
use lmcalc::typing::{self, Context, System};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rules(name: &str) -> PyResult<RuleSet> {
    RuleSet::from_preset(name).ok_or_else(|| value_err(format!("unknown rule preset {name:?}")))
}

fn sort(name: &str) -> PyResult<Sort> {
    match name {
        "lambda" => Ok(Sort::Lambda),
        "lambda-mu" => Ok(Sort::LambdaMu),
        "full" => Ok(Sort::Full),
        _ => Err(value_err(format!("unknown sort {name:?}"))),
    }
}

fn system(name: &str) -> PyResult<System> {
    match name {
        "S" => Ok(System::S),
        "Sc" => Ok(System::Sc),
        "Smu" => Ok(System::Smu),
        "Sfull" => Ok(System::Sfull),
        _ => Err(value_err(format!("unknown system {name:?}"))),
    }
}

fn context(text: Option<&str>) -> PyResult<Context> {
    text.map_or_else(|| Ok(Context::new()), |t| Context::parse(t).map_err(value_err))
}

#[pyclass(frozen, skip_from_py_object, name = "Term", module = "lmcalc")]
#[derive(Clone)]
struct PyTerm(lmcalc::syntax::Term);

#[pymethods]
impl PyTerm {
    /// Parse a term; with `church=True` every λ and μ binder must be annotated.
    #[new]
    #[pyo3(signature = (text, church = false))]
    fn new(text: &str, church: bool) -> PyResult<Self> {
        let t = if church {
            parse_term(text, Sort::Full, Mode::Church).or_else(|e| parse_term(text, Sort::Lambda, Mode::Church).map_err(|_| e))
        } else {
            parse_term_any(text)
        };
        t.map(PyTerm).map_err(value_err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Term({:?})", self.0.to_string())
    }

    /// Equality up to renaming of bound variables.
    fn __eq__(&self, other: &Self) -> bool {
        alpha_eq(&self.0, &other.0)
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        lmcalc::syntax::canonical(&self.0).hash(&mut h);
        h.finish()
    }

    #[getter]
    fn size(&self) -> usize {
        self.0.size()
    }

    /// The smallest sort containing the term, or None when it mixes
    /// constants with μ or pairs.
    #[getter]
    fn sort(&self) -> Option<String> {
        self.0.sort().map(|s| s.to_string())
    }

    fn erase(&self) -> Self {
        PyTerm(self.0.erase())
    }

    /// One-step reducts as (label, position, term).
    #[pyo3(signature = (rules_preset = "full-rt"))]
    fn reducts(&self, rules_preset: &str) -> PyResult<Vec<(String, String, PyTerm)>> {
        Ok(reducts(&self.0, rules(rules_preset)?)
            .into_iter()
            .map(|(pos, label, t)| (label.to_string(), pos.to_string(), PyTerm(t)))
            .collect())
    }

    /// Contract the redex at a position such as "root" or "0.1".
    fn step(&self, position: &str) -> PyResult<(String, PyTerm)> {
        let pos: Position = position.parse().map_err(value_err)?;
        lmcalc::reduce::step(&self.0, &pos).map(|(l, t)| (l.to_string(), PyTerm(t))).map_err(value_err)
    }

    /// Leftmost-outermost reduction; returns the trace and whether it ended
    /// in a normal form.
    #[pyo3(signature = (rules_preset = "full-rt", fuel = DEFAULT_FUEL))]
    fn normalize(&self, rules_preset: &str, fuel: usize) -> PyResult<(PyTrace, bool)> {
        let (t, normal) = normalize(&self.0, rules(rules_preset)?, fuel);
        Ok((PyTrace(t), normal))
    }

    /// ("sn", eta), ("loop", trace) or ("unknown", expansions).
    #[pyo3(signature = (rules_preset = "full-rt", fuel = DEFAULT_FUEL))]
    fn sn<'py>(&self, py: Python<'py>, rules_preset: &str, fuel: usize) -> PyResult<(String, Bound<'py, PyAny>)> {
        Ok(match sn_verdict(&self.0, rules(rules_preset)?, fuel) {
            SnVerdict::Sn(n) => ("sn".into(), n.into_pyobject(py)?.into_any()),
            SnVerdict::Loop(t) => ("loop".into(), Bound::new(py, PyTrace(t))?.into_any()),
            SnVerdict::Unknown(n) => ("unknown".into(), n.into_pyobject(py)?.into_any()),
        })
    }

    /// The λ-term with constants obtained by the CPS-style translation of a
    /// Church λμ-term.
    #[pyo3(signature = (ctx = None))]
    fn diamond(&self, ctx: Option<&str>) -> PyResult<PyTerm> {
        let env = TranslationEnv::new(&context(ctx)?, &self.0);
        diamond(&self.0, &env).map(PyTerm).map_err(value_err)
    }

    /// The λμ-term coding pairs and injections.
    fn circle(&self) -> PyTerm {
        PyTerm(circle(&self.0))
    }
}

#[pyclass(frozen, skip_from_py_object, name = "Type", module = "lmcalc")]
#[derive(Clone)]
struct PyType(lmcalc::types::Type);

#[pymethods]
impl PyType {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_type(text).map(PyType).map_err(value_err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Type({:?})", self.0.to_string())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

#[pyclass(frozen, name = "Trace", module = "lmcalc")]
struct PyTrace(lmcalc::reduce::Trace);

#[pymethods]
impl PyTrace {
    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __len__(&self) -> usize {
        self.0.lg()
    }

    #[getter]
    fn lg(&self) -> usize {
        self.0.lg()
    }

    #[getter]
    fn lg_bm(&self) -> usize {
        self.0.lg_bm()
    }

    #[getter]
    fn start(&self) -> PyTerm {
        PyTerm(self.0.start.clone())
    }

    #[getter]
    fn end(&self) -> PyTerm {
        PyTerm(self.0.end().clone())
    }

    /// The steps as (label, position, term).
    #[getter]
    fn steps(&self) -> Vec<(String, String, PyTerm)> {
        self.0.steps.iter().map(|s| (s.label.to_string(), s.pos.to_string(), PyTerm(s.term.clone()))).collect()
    }
}

#[pyclass(frozen, name = "EquationSet", module = "lmcalc")]
struct PyEquations(EquationSet);

#[pymethods]
impl PyEquations {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        EquationSet::parse(text).map(PyEquations).map_err(value_err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn is_good(&self) -> bool {
        is_good(&self.0) == Goodness::Good
    }

    /// The goodness verdict with its reason.
    fn goodness(&self) -> String {
        is_good(&self.0).to_string()
    }

    fn congruent(&self, a: &PyType, b: &PyType) -> bool {
        self.0.congruent(&a.0, &b.0)
    }
}

fn default_system(m: &lmcalc::syntax::Term) -> System {
    let mut constants = false;
    m.visit(&mut |t| constants |= matches!(t, lmcalc::syntax::Term::Const(_)));
    if constants {
        return System::Sc;
    }
    match m.sort() {
        Some(Sort::LambdaMu) => System::Smu,
        Some(Sort::Full) => System::Sfull,
        Some(Sort::Lambda) => System::S,
        None => System::Sc,
    }
}

/// Check `term : ty`; raises TypeError with the reason on failure.
#[pyfunction]
#[pyo3(signature = (term, ty, ctx = None, system_name = None, eqs = None))]
fn check(term: &PyTerm, ty: &PyType, ctx: Option<&str>, system_name: Option<&str>, eqs: Option<&PyEquations>) -> PyResult<()> {
    let sys = system_name.map_or_else(|| Ok(default_system(&term.0)), system)?;
    typing::typecheck(&context(ctx)?, &term.0, &ty.0, sys, eqs.map(|e| &e.0)).map_err(|e| PyTypeError::new_err(e.to_string()))
}

/// The type of an annotated term.
#[pyfunction]
#[pyo3(signature = (term, ctx = None, system_name = None, eqs = None))]
fn infer(term: &PyTerm, ctx: Option<&str>, system_name: Option<&str>, eqs: Option<&PyEquations>) -> PyResult<PyType> {
    let sys = system_name.map_or_else(|| Ok(default_system(&term.0)), system)?;
    typing::infer(&context(ctx)?, &term.0, sys, eqs.map(|e| &e.0)).map(PyType).map_err(|e| PyTypeError::new_err(e.to_string()))
}

/// Run a lemma check; returns (tried, passed, failed, inconclusive, failures).
#[pyfunction]
#[pyo3(signature = (lemma, sort_name = None, max_size = None, count = None, seed = 0, fuel = DEFAULT_FUEL, depth = None))]
fn verify(
    py: Python<'_>,
    lemma: &str,
    sort_name: Option<&str>,
    max_size: Option<usize>,
    count: Option<usize>,
    seed: u64,
    fuel: usize,
    depth: Option<usize>,
) -> PyResult<(usize, usize, usize, usize, Vec<(String, String)>)> {
    let opts = VerifyOptions { sort: sort_name.map(sort).transpose()?, max_size, fuel, seed, count, eqs: None, depth };
    let r = py.detach(|| run_lemma(lemma, &opts)).map_err(value_err)?;
    let failures = r.failures.iter().map(|f| (f.input.clone(), f.detail.clone())).collect();
    Ok((r.tried, r.passed, r.failed(), r.inconclusive, failures))
}

/// The exhaustive closed corpus as (term, type) pairs. Curry mode gives
/// every typable erased term; Church mode annotates from a small universe.
#[pyfunction]
#[pyo3(signature = (sort_name, max_size, church = false))]
fn corpus(py: Python<'_>, sort_name: &str, max_size: usize, church: bool) -> PyResult<Vec<(PyTerm, PyType)>> {
    let mut spec = CorpusSpec::exhaustive(sort(sort_name)?, max_size);
    spec.mode = if church { Mode::Church } else { Mode::Curry };
    let items = py.detach(|| enumerate_typed_terms(&spec));
    Ok(items.into_iter().map(|i| (PyTerm(i.term), PyType(i.ty))).collect())
}

#[pymodule]
#[pyo3(name = "lmcalc")]
fn lmcalc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTerm>()?;
    m.add_class::<PyType>()?;
    m.add_class::<PyTrace>()?;
    m.add_class::<PyEquations>()?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(infer, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(corpus, m)?)?;
    Ok(())
}
