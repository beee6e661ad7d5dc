//! Python bindings: `import qsets_py`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qsets::commutator;
use qsets::eval::{Evaluator, SemanticsMode};
use qsets::formula;
use qsets::harness::{self, Suite, SuiteConfig};
use qsets::universe::{qset_commutator, support_many};
use qsets::{Conditional, Error};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

/// A subspace of the rational space Q^dim, i.e. an orthogonal projection.
#[pyclass(
    name = "Projection",
    module = "qsets_py",
    frozen,
    eq,
    hash,
    from_py_object
)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyProjection(qsets::Projection);

impl PyProjection {
    fn check(&self, other: &PyProjection) -> PyResult<()> {
        if self.0.dim() != other.0.dim() {
            return Err(err(Error::DimensionMismatch(self.0.dim(), other.0.dim())));
        }
        Ok(())
    }
}

#[pymethods]
impl PyProjection {
    /// `Projection([["1", "0"], ["0", "1/2"]], dim)`; entries are ints or
    /// rational strings.
    #[new]
    fn new(span: Vec<Vec<Bound<'_, PyAny>>>, dim: usize) -> PyResult<Self> {
        let mut vectors = Vec::new();
        for row in span {
            let mut v = Vec::new();
            for x in row {
                let text: String = x.str()?.extract()?;
                v.push(qsets::linalg::parse_rational(&text).map_err(err)?);
            }
            vectors.push(v);
        }
        qsets::Projection::from_span(vectors, dim)
            .map(PyProjection)
            .map_err(err)
    }

    #[staticmethod]
    fn zero(dim: usize) -> Self {
        PyProjection(qsets::Projection::zero(dim))
    }

    #[staticmethod]
    fn one(dim: usize) -> Self {
        PyProjection(qsets::Projection::one(dim))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    /// Canonical basis as rows of rational strings.
    fn basis(&self) -> Vec<Vec<String>> {
        self.0.basis_strings()
    }

    /// "zero", "one" or "proper".
    fn classify(&self) -> String {
        self.0.classify().to_string()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn is_one(&self) -> bool {
        self.0.is_one()
    }

    fn meet(&self, other: &PyProjection) -> PyResult<Self> {
        self.check(other)?;
        Ok(PyProjection(self.0.meet(&other.0)))
    }

    fn join(&self, other: &PyProjection) -> PyResult<Self> {
        self.check(other)?;
        Ok(PyProjection(self.0.join(&other.0)))
    }

    fn ortho(&self) -> Self {
        PyProjection(self.0.ortho())
    }

    fn leq(&self, other: &PyProjection) -> PyResult<bool> {
        self.check(other)?;
        Ok(self.0.leq(&other.0))
    }

    fn commutes(&self, other: &PyProjection) -> PyResult<bool> {
        self.check(other)?;
        Ok(self.0.commutes(&other.0))
    }

    fn sasaki_arrow(&self, other: &PyProjection) -> PyResult<Self> {
        self.check(other)?;
        Ok(PyProjection(self.0.sasaki_arrow(&other.0)))
    }

    fn sasaki_star(&self, other: &PyProjection) -> PyResult<Self> {
        self.check(other)?;
        Ok(PyProjection(self.0.sasaki_star(&other.0)))
    }

    /// `kind` is "sasaki", "contrapositive" or "relevance".
    #[pyo3(signature = (other, kind = "sasaki"))]
    fn conditional(&self, other: &PyProjection, kind: &str) -> PyResult<Self> {
        self.check(other)?;
        let c = Conditional::ALL
            .into_iter()
            .find(|c| c.to_string() == kind)
            .ok_or_else(|| PyValueError::new_err(format!("unknown conditional `{kind}`")))?;
        Ok(PyProjection(c.apply(&self.0, &other.0)))
    }

    fn equivalence(&self, other: &PyProjection) -> PyResult<Self> {
        self.check(other)?;
        Ok(PyProjection(self.0.equivalence(&other.0)))
    }

    fn commutator(&self, other: &PyProjection) -> PyResult<Self> {
        self.check(other)?;
        Ok(PyProjection(self.0.commutator_pair(&other.0)))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Projection({}, dim={})", self.0, self.0.dim())
    }
}

/// An interned quantum set.
#[pyclass(name = "QSet", module = "qsets_py", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyQSet(qsets::QSet);

#[pymethods]
impl PyQSet {
    #[getter]
    fn id(&self) -> u64 {
        self.0.id()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn entries(&self) -> Vec<(PyQSet, PyProjection)> {
        self.0
            .entries()
            .iter()
            .map(|(k, v)| (PyQSet(k.clone()), PyProjection(v.clone())))
            .collect()
    }

    /// The hereditary support L(u), always containing 0.
    fn support(&self) -> Vec<PyProjection> {
        self.0.support().iter().cloned().map(PyProjection).collect()
    }

    fn __len__(&self) -> usize {
        self.0.entries().len()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("QSet({})", self.0)
    }
}

fn mode(semantics: &str) -> PyResult<SemanticsMode> {
    semantics.parse().map_err(PyValueError::new_err)
}

/// Named projections, quantum sets and formulas over one ambient space.
#[pyclass(name = "Environment", module = "qsets_py")]
struct PyEnvironment(qsets::Environment);

#[pymethods]
impl PyEnvironment {
    #[new]
    fn new(dim: usize) -> PyResult<Self> {
        qsets::Environment::new(dim).map(PyEnvironment).map_err(err)
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        qsets::Environment::load(&path)
            .map(PyEnvironment)
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file = qsets::env::UniverseFile::from_json(text).map_err(err)?;
        qsets::Environment::from_file(&file)
            .map(PyEnvironment)
            .map_err(err)
    }

    /// The two-line universe of the De Morgan counterexample.
    #[staticmethod]
    fn counterexample() -> Self {
        PyEnvironment(qsets::env::counterexample_environment())
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn to_json(&self) -> String {
        self.0.to_file().to_json()
    }

    fn add_projection(&mut self, name: &str, p: &PyProjection) -> PyResult<()> {
        self.0.add_projection(name, p.0.clone()).map_err(err)
    }

    /// Builds and binds a quantum set; keys and values may be objects or
    /// names.
    fn add_qset(
        &mut self,
        name: &str,
        entries: Vec<(Bound<'_, PyAny>, Bound<'_, PyAny>)>,
    ) -> PyResult<PyQSet> {
        let mut es = Vec::new();
        for (k, v) in entries {
            let key = match k.extract::<PyQSet>() {
                Ok(q) => q.0,
                Err(_) => {
                    let n: String = k.extract()?;
                    self.0
                        .qset(&n)
                        .ok_or_else(|| err(Error::UnknownConstant(n)))?
                }
            };
            let value = match v.extract::<PyProjection>() {
                Ok(p) => p.0,
                Err(_) => {
                    let n: String = v.extract()?;
                    self.0
                        .projection(&n)
                        .ok_or_else(|| PyValueError::new_err(format!("unknown projection `{n}`")))?
                }
            };
            es.push((key, value));
        }
        let u = self.0.universe().make_qset(es).map_err(err)?;
        self.0.add_qset(name, u.clone()).map_err(err)?;
        Ok(PyQSet(u))
    }

    fn bind(&mut self, name: &str, u: &PyQSet) -> PyResult<()> {
        self.0.add_qset(name, u.0.clone()).map_err(err)
    }

    fn projection(&self, name: &str) -> Option<PyProjection> {
        self.0.projection(name).map(PyProjection)
    }

    /// A declared quantum set or `check:n`.
    fn qset(&self, name: &str) -> Option<PyQSet> {
        self.0.qset(name).map(PyQSet)
    }

    fn check_ordinal(&self, n: usize) -> PyQSet {
        PyQSet(self.0.universe().check_ordinal(n))
    }

    fn restrict(&self, u: &PyQSet, p: &PyProjection) -> PyResult<PyQSet> {
        self.0
            .universe()
            .restrict(&u.0, &p.0)
            .map(PyQSet)
            .map_err(err)
    }

    /// Truth value of a closed Delta0 formula; `semantics` is "reformed" or
    /// "takeuti".
    #[pyo3(signature = (formula, semantics = "reformed"))]
    fn eval(&self, formula: &str, semantics: &str) -> PyResult<PyProjection> {
        let f = formula::parse(formula).map_err(err)?;
        Evaluator::new(&self.0, mode(semantics)?)
            .eval(&f)
            .map(PyProjection)
            .map_err(err)
    }

    #[pyo3(signature = (u, v, semantics = "reformed"))]
    fn equal(&self, u: &PyQSet, v: &PyQSet, semantics: &str) -> PyResult<PyProjection> {
        Ok(PyProjection(
            Evaluator::new(&self.0, mode(semantics)?).equal(&u.0, &v.0),
        ))
    }

    #[pyo3(signature = (u, v, semantics = "reformed"))]
    fn member(&self, u: &PyQSet, v: &PyQSet, semantics: &str) -> PyResult<PyProjection> {
        Ok(PyProjection(
            Evaluator::new(&self.0, mode(semantics)?).member(&u.0, &v.0),
        ))
    }
}

fn unwrap(ps: Vec<PyProjection>) -> Vec<qsets::Projection> {
    ps.into_iter().map(|p| p.0).collect()
}

/// Canonical printed form of a formula.
#[pyfunction]
fn parse(text: &str) -> PyResult<String> {
    formula::parse(text).map(|f| f.to_string()).map_err(err)
}

#[pyfunction]
fn desugar(text: &str) -> PyResult<String> {
    formula::parse(text)
        .map(|f| formula::desugar(&f).to_string())
        .map_err(err)
}

#[pyfunction]
fn is_delta0(text: &str) -> PyResult<bool> {
    formula::parse(text).map(|f| f.is_delta0()).map_err(err)
}

#[pyfunction]
fn commutator_finite(family: Vec<PyProjection>) -> PyResult<PyProjection> {
    commutator::commutator_finite(&unwrap(family))
        .map(PyProjection)
        .map_err(err)
}

#[pyfunction]
fn commutator_kernel(family: Vec<PyProjection>) -> PyResult<PyProjection> {
    commutator::commutator_kernel(&unwrap(family))
        .map(PyProjection)
        .map_err(err)
}

#[pyfunction]
fn commutator_algebra(family: Vec<PyProjection>) -> PyResult<PyProjection> {
    commutator::commutator_algebra(&unwrap(family))
        .map(PyProjection)
        .map_err(err)
}

#[pyfunction]
fn in_generated_logic(x: &PyProjection, family: Vec<PyProjection>) -> PyResult<bool> {
    commutator::in_generated_logic(&x.0, &unwrap(family)).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (family, dim, seed = 0))]
fn commutant_sample(
    family: Vec<PyProjection>,
    dim: usize,
    seed: u64,
) -> PyResult<Vec<PyProjection>> {
    commutator::commutant_sample(&unwrap(family), dim, seed)
        .map(|v| v.into_iter().map(PyProjection).collect())
        .map_err(err)
}

/// Commutator of the joint support of the given quantum sets.
#[pyfunction]
fn qset_commutator_of(sets: Vec<PyQSet>, dim: usize) -> PyResult<PyProjection> {
    let sets: Vec<qsets::QSet> = sets.into_iter().map(|u| u.0).collect();
    qset_commutator(&sets, dim).map(PyProjection).map_err(err)
}

#[pyfunction]
fn support(sets: Vec<PyQSet>) -> Vec<PyProjection> {
    let sets: Vec<qsets::QSet> = sets.into_iter().map(|u| u.0).collect();
    support_many(&sets).into_iter().map(PyProjection).collect()
}

/// Runs a property suite and returns its machine-readable summary.
#[pyfunction]
#[pyo3(signature = (name, seed = 7, cases = None, dim_min = 2, dim_max = 4, rank = 2))]
fn run_suite<'py>(
    py: Python<'py>,
    name: &str,
    seed: u64,
    cases: Option<usize>,
    dim_min: usize,
    dim_max: usize,
    rank: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let suite: Suite = name.parse().map_err(PyValueError::new_err)?;
    let cfg = SuiteConfig::new(seed, cases.unwrap_or(suite.default_cases()))
        .dims(dim_min, dim_max)
        .rank(rank);
    let report = py.detach(|| suite.run(&cfg));
    json_to_py(py, &report.summary().to_string())
}

/// Both sides of the De Morgan counterexample in both semantics.
#[pyfunction]
fn demo_counterexample(py: Python<'_>) -> PyResult<Bound<'_, PyDict>> {
    let v = harness::reproduce_counterexample().map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("P", PyProjection(v.p.clone()))?;
    d.set_item("Q", PyProjection(v.q.clone()))?;
    d.set_item("takeuti_exists", PyProjection(v.takeuti_exists.clone()))?;
    d.set_item(
        "takeuti_not_forall",
        PyProjection(v.takeuti_not_forall.clone()),
    )?;
    d.set_item("reformed_exists", PyProjection(v.reformed_exists.clone()))?;
    d.set_item(
        "reformed_not_forall",
        PyProjection(v.reformed_not_forall.clone()),
    )?;
    d.set_item("reproduced", v.reproduced())?;
    Ok(d)
}

#[pymodule]
fn qsets_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProjection>()?;
    m.add_class::<PyQSet>()?;
    m.add_class::<PyEnvironment>()?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(desugar, m)?)?;
    m.add_function(wrap_pyfunction!(is_delta0, m)?)?;
    m.add_function(wrap_pyfunction!(commutator_finite, m)?)?;
    m.add_function(wrap_pyfunction!(commutator_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(commutator_algebra, m)?)?;
    m.add_function(wrap_pyfunction!(in_generated_logic, m)?)?;
    m.add_function(wrap_pyfunction!(commutant_sample, m)?)?;
    m.add_function(wrap_pyfunction!(qset_commutator_of, m)?)?;
    m.add_function(wrap_pyfunction!(support, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(demo_counterexample, m)?)?;
    Ok(())
}
