//! Python bindings: boards, verdicts, tours, sites, construction, lifting and search.

use std::time::Duration;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use ktour::io::Metadata;
use ktour::oracle::Outcome;
use ktour::{BoardSpec, Cell, MoveParams, SearchBudget, SearchConstraints};

create_exception!(pyktour, KtourError, PyException);

fn err(e: impl ToString) -> PyErr {
    KtourError::new_err(e.to_string())
}

fn board(dims: Vec<usize>) -> PyResult<BoardSpec> {
    BoardSpec::new(dims).map_err(err)
}

#[pyclass(name = "MoveParams", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyMoveParams(MoveParams);

#[pymethods]
impl PyMoveParams {
    #[new]
    #[pyo3(signature = (alpha = 2, beta = 1))]
    fn new(alpha: usize, beta: usize) -> PyResult<Self> {
        MoveParams::new(alpha, beta).map(PyMoveParams).map_err(err)
    }

    #[getter]
    fn alpha(&self) -> usize {
        self.0.alpha()
    }

    #[getter]
    fn beta(&self) -> usize {
        self.0.beta()
    }

    fn __repr__(&self) -> String {
        format!("MoveParams({}, {})", self.0.alpha(), self.0.beta())
    }
}

#[pyclass(name = "Verdict", frozen)]
struct PyVerdict(ktour::Verdict);

#[pymethods]
impl PyVerdict {
    #[getter]
    fn tourable(&self) -> bool {
        self.0.tourable
    }

    #[getter]
    fn reason(&self) -> String {
        format!("{:?}", self.0.reason)
    }

    #[getter]
    fn theorem(&self) -> String {
        format!("{:?}", self.0.theorem)
    }

    fn __bool__(&self) -> bool {
        self.0.tourable
    }

    fn __repr__(&self) -> String {
        format!("Verdict({})", self.0)
    }
}

#[pyclass(name = "Board", frozen)]
struct PyBoard(BoardSpec);

#[pymethods]
impl PyBoard {
    #[new]
    fn new(dims: Vec<usize>) -> PyResult<Self> {
        board(dims).map(PyBoard)
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.0.dims().to_vec()
    }

    #[getter]
    fn cell_count(&self) -> usize {
        self.0.cell_count()
    }

    fn classify(&self) -> PyVerdict {
        PyVerdict(ktour::classify_nd(&self.0))
    }

    #[pyo3(signature = (moves = None))]
    fn is_connected(&self, moves: Option<PyMoveParams>) -> bool {
        ktour::is_connected(&self.0, moves.map_or(MoveParams::CLASSICAL, |m| m.0))
    }

    fn __repr__(&self) -> String {
        format!("Board({})", self.0)
    }
}

#[pyclass(name = "Site", frozen)]
struct PySite {
    site: ktour::Site,
    cells: Vec<Vec<usize>>,
}

#[pymethods]
impl PySite {
    #[getter]
    fn label(&self) -> String {
        self.site.label()
    }

    #[getter]
    fn axis(&self) -> usize {
        self.site.axis
    }

    #[getter]
    fn magnitude(&self) -> usize {
        self.site.magnitude
    }

    /// Tour positions of the two edges, `[n, n+1, m, m+1]`.
    #[getter]
    fn support(&self) -> Vec<usize> {
        self.site.support.to_vec()
    }

    #[getter]
    fn cells(&self) -> Vec<Vec<usize>> {
        self.cells.clone()
    }

    fn is_disjoint(&self, other: &PySite) -> bool {
        self.site.is_disjoint(&other.site)
    }

    fn __repr__(&self) -> String {
        format!("Site({})", self.site)
    }
}

#[pyclass(name = "Tour", frozen)]
struct PyTour(ktour::Tour);

impl PyTour {
    fn site(&self, s: ktour::Site) -> PySite {
        let cells = s.support.iter().map(|&p| self.0.cell(p).0).collect();
        PySite { site: s, cells }
    }
}

#[pymethods]
impl PyTour {
    /// Builds and verifies a tour from 1-based cells.
    #[new]
    #[pyo3(signature = (dims, cells, closed = true, moves = None))]
    fn new(dims: Vec<usize>, cells: Vec<Vec<usize>>, closed: bool, moves: Option<PyMoveParams>) -> PyResult<Self> {
        let cells: Vec<Cell> = cells.into_iter().map(Cell).collect();
        let mp = moves.map_or(MoveParams::CLASSICAL, |m| m.0);
        ktour::Tour::from_cells(board(dims)?, mp, &cells, closed)
            .map(PyTour)
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        ktour::import_json(text).map(PyTour).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        ktour::export_json(&self.0, Metadata::default()).map_err(err)
    }

    fn grid(&self) -> PyResult<String> {
        ktour::export_grid(&self.0).map_err(err)
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.0.board().dims().to_vec()
    }

    #[getter]
    fn moves(&self) -> PyMoveParams {
        PyMoveParams(self.0.moves())
    }

    #[getter]
    fn closed(&self) -> bool {
        self.0.is_closed()
    }

    fn cells(&self) -> Vec<Vec<usize>> {
        self.0.cells().into_iter().map(|c| c.0).collect()
    }

    /// Raises `KtourError` naming the first violation.
    fn verify(&self) -> PyResult<()> {
        self.0.verify().map_err(err)
    }

    fn is_valid(&self) -> bool {
        self.0.verify().is_ok()
    }

    fn sites(&self) -> PyResult<Vec<PySite>> {
        let found = ktour::find_sites(&self.0).map_err(err)?;
        Ok(found.into_iter().map(|s| self.site(s)).collect())
    }

    fn disjoint_sites(&self) -> PyResult<Option<(PySite, PySite)>> {
        let found = ktour::find_sites(&self.0).map_err(err)?;
        Ok(ktour::disjoint_site_pair(&found).map(|(a, b)| (self.site(a), self.site(b))))
    }

    fn is_bisited(&self) -> PyResult<bool> {
        ktour::is_bisited(&self.0).map_err(err)
    }

    fn lift(&self, k: usize) -> PyResult<PyTour> {
        ktour::lift(&self.0, k).map(PyTour).map_err(err)
    }

    fn lift_generalized(&self, k: usize) -> PyResult<PyTour> {
        ktour::lift_generalized(&self.0, k).map(PyTour).map_err(err)
    }

    fn same_cycle(&self, other: &PyTour) -> bool {
        self.0.same_cycle(&other.0)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        let kind = if self.0.is_closed() { "closed" } else { "open" };
        format!("Tour({kind}, {} cells on {})", self.0.len(), self.0.board())
    }
}

/// Result of a search: `outcome` is `found`, `proved_none` or `exhausted`.
#[pyclass(name = "SolveResult", frozen)]
struct PySolveResult {
    #[pyo3(get)]
    outcome: String,
    #[pyo3(get)]
    detail: String,
    tour: Option<ktour::Tour>,
}

#[pymethods]
impl PySolveResult {
    #[getter]
    fn tour(&self) -> Option<PyTour> {
        self.tour.clone().map(PyTour)
    }

    fn __repr__(&self) -> String {
        format!("SolveResult({})", self.outcome)
    }
}

#[pyfunction]
fn classify(dims: Vec<usize>) -> PyResult<PyVerdict> {
    Ok(PyVerdict(ktour::classify_nd(&board(dims)?)))
}

#[pyfunction]
fn construct(dims: Vec<usize>) -> PyResult<PyTour> {
    ktour::construct_nd(&board(dims)?).map(PyTour).map_err(err)
}

#[pyfunction]
fn lift(tour: &PyTour, k: usize) -> PyResult<PyTour> {
    tour.lift(k)
}

#[pyfunction]
fn glue(a: &PyTour, b: &PyTour, axis: usize, offset: usize) -> PyResult<PyTour> {
    ktour::glue(&a.0, &b.0, axis, offset).map(PyTour).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (
    dims, moves = None, closed = true, start = None, end = None,
    required_edges = Vec::new(), budget_ms = 60_000, seed = None, workers = 1
))]
#[allow(clippy::too_many_arguments)]
fn solve(
    py: Python<'_>,
    dims: Vec<usize>,
    moves: Option<PyMoveParams>,
    closed: bool,
    start: Option<Vec<usize>>,
    end: Option<Vec<usize>>,
    required_edges: Vec<(Vec<usize>, Vec<usize>)>,
    budget_ms: u64,
    seed: Option<u64>,
    workers: usize,
) -> PyResult<PySolveResult> {
    let b = board(dims)?;
    let mp = moves.map_or(MoveParams::CLASSICAL, |m| m.0);
    let mut c = if closed { SearchConstraints::closed() } else { SearchConstraints::open() };
    c.start = start.map(Cell);
    c.end = end.map(Cell);
    c.required_edges = required_edges.into_iter().map(|(a, b)| (Cell(a), Cell(b))).collect();
    let mut budget = SearchBudget::default()
        .with_time_limit(Duration::from_millis(budget_ms))
        .with_workers(workers);
    if let Some(s) = seed {
        budget = budget.with_seed(s);
    }
    let outcome = py.detach(|| ktour::solve(&b, mp, &c, &budget)).map_err(err)?;
    let to_json = |v: serde_json::Result<String>| v.unwrap_or_default();
    Ok(match outcome {
        Outcome::Found(t) => PySolveResult {
            outcome: "found".into(),
            detail: String::new(),
            tour: Some(t),
        },
        Outcome::ProvedNone(p) => PySolveResult {
            outcome: "proved_none".into(),
            detail: to_json(serde_json::to_string(&p)),
            tour: None,
        },
        Outcome::Exhausted(s) => PySolveResult {
            outcome: "exhausted".into(),
            detail: to_json(serde_json::to_string(&s)),
            tour: None,
        },
    })
}

#[pymodule]
fn pyktour(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("KtourError", m.py().get_type::<KtourError>())?;
    m.add_class::<PyMoveParams>()?;
    m.add_class::<PyBoard>()?;
    m.add_class::<PyVerdict>()?;
    m.add_class::<PySite>()?;
    m.add_class::<PyTour>()?;
    m.add_class::<PySolveResult>()?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(lift, m)?)?;
    m.add_function(wrap_pyfunction!(glue, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    Ok(())
}
