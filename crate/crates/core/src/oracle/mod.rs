//! Exhaustive and heuristic search for closed tours and open paths.
//!
//! The search is a depth-first walk over a packed adjacency list with
//! fewest-onward-moves ordering. A negative answer is reported only from a
//! certificate or from a search that ran to completion.

mod graph;
mod search;

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::board::{BoardSpec, Cell, MoveParams};
use crate::error::{Error, Result};
use crate::tour::Tour;

use graph::Graph;
use search::{Limits, RunEnd, Search};

/// What a tour or path must satisfy beyond covering the board.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchConstraints {
    pub closed: bool,
    /// First cell; for closed tours only the rotation of the output.
    pub start: Option<Cell>,
    /// Last cell of an open path.
    pub end: Option<Cell>,
    pub required_edges: Vec<(Cell, Cell)>,
    pub forbidden_edges: Vec<(Cell, Cell)>,
}

impl SearchConstraints {
    pub fn closed() -> Self {
        SearchConstraints {
            closed: true,
            ..Default::default()
        }
    }

    pub fn open() -> Self {
        SearchConstraints::default()
    }

    pub fn with_start(mut self, c: impl Into<Cell>) -> Self {
        self.start = Some(c.into());
        self
    }

    pub fn with_end(mut self, c: impl Into<Cell>) -> Self {
        self.end = Some(c.into());
        self
    }

    pub fn require(mut self, a: impl Into<Cell>, b: impl Into<Cell>) -> Self {
        self.required_edges.push((a.into(), b.into()));
        self
    }

    pub fn forbid(mut self, a: impl Into<Cell>, b: impl Into<Cell>) -> Self {
        self.forbidden_edges.push((a.into(), b.into()));
        self
    }

    /// Whether a found tour honours every constraint.
    pub fn accepts(&self, t: &Tour) -> bool {
        if t.is_closed() != self.closed || !t.covers_board() {
            return false;
        }
        if !self.closed {
            if self.start.as_ref().is_some_and(|s| t.first().as_ref() != Some(s)) {
                return false;
            }
            if self.end.as_ref().is_some_and(|e| t.last().as_ref() != Some(e)) {
                return false;
            }
        }
        self.required_edges.iter().all(|(a, b)| t.has_edge(a, b))
            && self.forbidden_edges.iter().all(|(a, b)| !t.has_edge(a, b))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub node_limit: u64,
    pub time_limit: Duration,
    /// Seeds the tie-breaking order among equally constrained moves.
    pub seed: u64,
    pub workers: usize,
    /// Fewest-onward-moves ordering; off means plain index order.
    pub heuristic: bool,
    /// Largest board for which an exhausted search is reported as a proof.
    pub proof_cell_cap: usize,
    /// Depth interval between reachability checks; 0 disables them.
    pub connectivity_interval: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            node_limit: 20_000_000_000,
            time_limit: Duration::from_secs(60),
            seed: 0x6b74_6f75,
            workers: 1,
            heuristic: true,
            proof_cell_cap: 40,
            connectivity_interval: 3,
        }
    }
}

impl SearchBudget {
    pub fn with_time_limit(mut self, t: Duration) -> Self {
        self.time_limit = t;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }
}

/// Reason a board (under the given constraints) cannot carry the requested tour.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "certificate", rename_all = "snake_case")]
pub enum Certificate {
    /// Closed tour on a bipartite move graph with an odd number of cells.
    OddCellCount { cells: usize },
    Disconnected { components: usize },
    DegreeZeroCell { cell: Cell },
    /// A closed tour needs two moves at this cell; an open path tolerates two such cells.
    DegreeOneForcing { cell: Cell },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "proof", rename_all = "snake_case")]
pub enum Proof {
    Certificates { certificates: Vec<Certificate> },
    Exhaustive { nodes: u64 },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub elapsed_ms: u64,
    pub restarts: u32,
    /// The search space was exhausted but the board is above the proof cap.
    pub complete: bool,
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Found(Tour),
    ProvedNone(Proof),
    Exhausted(SearchStats),
}

impl Outcome {
    pub fn tour(&self) -> Option<&Tour> {
        match self {
            Outcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn into_tour(self) -> Option<Tour> {
        match self {
            Outcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_proved_none(&self) -> bool {
        matches!(self, Outcome::ProvedNone(_))
    }
}

/// Shape-level certificates for a closed tour under the given moves.
pub fn prune_checks(b: &BoardSpec, mp: MoveParams) -> Vec<Certificate> {
    let g = Graph::build(b, mp, &SearchConstraints::closed()).expect("unconstrained graph");
    certificates(&g, b, mp, true)
}

fn certificates(g: &Graph, b: &BoardSpec, mp: MoveParams, closed: bool) -> Vec<Certificate> {
    let mut out = Vec::new();
    let cells = g.cells;
    if closed && (mp.alpha() + mp.beta()) % 2 == 1 && cells % 2 == 1 {
        out.push(Certificate::OddCellCount { cells });
    }
    if cells > 1 {
        let components = g.real_components();
        if components > 1 {
            out.push(Certificate::Disconnected { components });
        }
        if let Some(v) = (0..cells as u32).find(|&v| g.real_degree(v) == 0) {
            out.push(Certificate::DegreeZeroCell {
                cell: b.cell_at(v as usize),
            });
        }
        let ones: Vec<u32> = (0..cells as u32).filter(|&v| g.real_degree(v) == 1).collect();
        let allowed = if closed { 0 } else { 2 };
        if ones.len() > allowed {
            out.push(Certificate::DegreeOneForcing {
                cell: b.cell_at(ones[allowed] as usize),
            });
        }
    } else if closed {
        out.push(Certificate::DegreeZeroCell { cell: b.cell_at(0) });
    }
    out
}

fn priorities(n: usize, seed: u64) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random()).collect()
}

/// Turns a cycle over graph vertices into a tour of real cells.
fn cycle_to_tour(g: &Graph, b: &BoardSpec, mp: MoveParams, c: &SearchConstraints, cycle: Vec<u32>) -> Tour {
    let order = match g.virt {
        None => {
            let mut order = cycle;
            if let Some(s) = c.start.as_ref().and_then(|s| b.index_of(s).ok()) {
                let p = order.iter().position(|&v| v as usize == s).unwrap_or(0);
                order.rotate_left(p);
            }
            order
        }
        Some(v) => {
            let p = cycle.iter().position(|&w| w == v).expect("virtual vertex on cycle");
            let mut order: Vec<u32> = cycle[p + 1..].iter().chain(&cycle[..p]).copied().collect();
            let wrong_start = g.start.is_some_and(|s| order[0] != s);
            let wrong_end = g.start.is_none() && g.end.is_some_and(|e| *order.last().unwrap() != e);
            if wrong_start || wrong_end {
                order.reverse();
            }
            order
        }
    };
    Tour::from_raw(b.clone(), mp, order, c.closed)
}

/// Searches for a tour (closed) or Hamiltonian path (open) under the constraints.
pub fn solve(b: &BoardSpec, mp: MoveParams, c: &SearchConstraints, budget: &SearchBudget) -> Result<Outcome> {
    let began = Instant::now();
    let g = Graph::build(b, mp, c)?;
    if !c.closed && g.cells == 1 {
        let t = Tour::from_raw(b.clone(), mp, vec![0], false);
        return Ok(if c.accepts(&t) {
            Outcome::Found(t)
        } else {
            Outcome::ProvedNone(Proof::Exhaustive { nodes: 0 })
        });
    }
    let certs = certificates(&g, b, mp, c.closed);
    if !certs.is_empty() {
        return Ok(Outcome::ProvedNone(Proof::Certificates { certificates: certs }));
    }
    let provable = g.cells <= budget.proof_cell_cap;
    let deadline = began + budget.time_limit;
    let stats = |nodes: u64, restarts: u32, complete: bool| SearchStats {
        nodes,
        elapsed_ms: began.elapsed().as_millis() as u64,
        restarts,
        complete,
    };
    let finish = |cycle: Vec<u32>| -> Result<Outcome> {
        let t = cycle_to_tour(&g, b, mp, c, cycle);
        t.verify().map_err(Error::Verification)?;
        if !c.accepts(&t) {
            return Err(Error::Constraint("search returned a tour violating its constraints".into()));
        }
        Ok(Outcome::Found(t))
    };

    if budget.workers > 1 {
        let prio = priorities(g.n, budget.seed);
        return match solve_parallel(&g, &prio, budget, deadline) {
            (RunEnd::Found(cycle), _) => finish(cycle),
            (RunEnd::Complete, nodes) if provable => Ok(Outcome::ProvedNone(Proof::Exhaustive { nodes })),
            (RunEnd::Complete, nodes) => Ok(Outcome::Exhausted(stats(nodes, 0, true))),
            (RunEnd::Cutoff, nodes) => Ok(Outcome::Exhausted(stats(nodes, 0, false))),
        };
    }

    // Below the proof cap one deterministic pass; above it, restarts with
    // growing node caps and fresh tie-breaking.
    let mut total = 0u64;
    let mut restarts = 0u32;
    let mut seeder = ChaCha8Rng::seed_from_u64(budget.seed);
    loop {
        let (seed, cap) = if provable || !budget.heuristic {
            (budget.seed, budget.node_limit)
        } else {
            let cap = 20_000u64.saturating_mul(1 << restarts.min(20));
            (seeder.random(), cap.min(budget.node_limit.saturating_sub(total)))
        };
        let prio = priorities(g.n, seed);
        let mut s = Search::new(&g, &prio, budget.heuristic, budget.connectivity_interval);
        let lim = Limits {
            node_limit: cap,
            deadline: Some(deadline),
            cancel: None,
            shared_nodes: None,
        };
        let end = s.run(&lim);
        total += s.nodes;
        match end {
            RunEnd::Found(cycle) => return finish(cycle),
            RunEnd::Complete if provable => {
                return Ok(Outcome::ProvedNone(Proof::Exhaustive { nodes: total }));
            }
            RunEnd::Complete => return Ok(Outcome::Exhausted(stats(total, restarts, true))),
            RunEnd::Cutoff => {
                let out_of_time = Instant::now() >= deadline || total >= budget.node_limit;
                if provable || !budget.heuristic || out_of_time {
                    return Ok(Outcome::Exhausted(stats(total, restarts, false)));
                }
                restarts += 1;
            }
        }
    }
}

/// Splits the search tree at a shallow frontier and explores the subtrees on
/// worker threads. The first cycle found wins.
fn solve_parallel(g: &Graph, prio: &[u32], budget: &SearchBudget, deadline: Instant) -> (RunEnd, u64) {
    let mut prefixes = Vec::new();
    let mut depth = 2;
    loop {
        prefixes.clear();
        let mut probe = Search::new(g, prio, budget.heuristic, budget.connectivity_interval);
        if let Some(found) = probe.collect(depth, &mut prefixes) {
            return (RunEnd::Found(found), probe.nodes);
        }
        if prefixes.len() >= 8 * budget.workers || depth >= g.n.min(16) || prefixes.is_empty() {
            break;
        }
        depth += 1;
    }
    if prefixes.is_empty() {
        return (RunEnd::Complete, 0);
    }
    let next = AtomicUsize::new(0);
    let cancel = AtomicBool::new(false);
    let nodes = AtomicU64::new(0);
    let cut = AtomicBool::new(false);
    let found: OnceLock<Vec<u32>> = OnceLock::new();
    std::thread::scope(|scope| {
        for _ in 0..budget.workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= prefixes.len() || cancel.load(Ordering::Relaxed) {
                    break;
                }
                let mut s = Search::new(g, prio, budget.heuristic, budget.connectivity_interval);
                if !s.replay(&prefixes[i]) {
                    continue;
                }
                let lim = Limits {
                    node_limit: budget.node_limit,
                    deadline: Some(deadline),
                    cancel: Some(&cancel),
                    shared_nodes: Some(&nodes),
                };
                match s.run(&lim) {
                    RunEnd::Found(cycle) => {
                        let _ = found.set(cycle);
                        cancel.store(true, Ordering::Relaxed);
                    }
                    RunEnd::Complete => {}
                    RunEnd::Cutoff => {
                        if !cancel.load(Ordering::Relaxed) {
                            cut.store(true, Ordering::Relaxed);
                        }
                    }
                }
            });
        }
    });
    let total = nodes.load(Ordering::Relaxed);
    if let Some(cycle) = found.into_inner() {
        (RunEnd::Found(cycle), total)
    } else if cut.load(Ordering::Relaxed) {
        (RunEnd::Cutoff, total)
    } else {
        (RunEnd::Complete, total)
    }
}

/// Convenience: closed tour search with the default budget.
pub fn find_closed_tour(b: &BoardSpec, mp: MoveParams) -> Result<Outcome> {
    solve(b, mp, &SearchConstraints::closed(), &SearchBudget::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn board(d: &[usize]) -> BoardSpec {
        BoardSpec::new(d.to_vec()).unwrap()
    }

    fn closed(d: &[usize]) -> Outcome {
        find_closed_tour(&board(d), MoveParams::CLASSICAL).unwrap()
    }

    #[test]
    fn small_negatives_and_positives() {
        assert!(closed(&[3, 4]).is_proved_none());
        assert!(closed(&[6, 6]).tour().is_some());
        assert!(closed(&[5, 6]).tour().is_some());
        assert!(matches!(
            closed(&[2, 2, 2]),
            Outcome::ProvedNone(Proof::Certificates { .. })
        ));
    }

    #[test]
    fn certificate_examples() {
        let mp = MoveParams::CLASSICAL;
        assert!(prune_checks(&board(&[3, 5]), mp).contains(&Certificate::OddCellCount { cells: 15 }));
        assert!(prune_checks(&board(&[2, 2, 2, 5]), mp)
            .iter()
            .any(|c| matches!(c, Certificate::Disconnected { .. })));
        assert!(prune_checks(&board(&[3, 3, 3]), mp).contains(&Certificate::DegreeZeroCell {
            cell: Cell::from([2, 2, 2])
        }));
        assert!(prune_checks(&board(&[6, 6]), mp).is_empty());
    }

    #[test]
    fn open_paths_with_endpoints() {
        let b = board(&[4, 3]);
        let c = SearchConstraints::open().with_start([4, 3]).with_end([4, 2]);
        let t = solve(&b, MoveParams::CLASSICAL, &c, &SearchBudget::default())
            .unwrap()
            .into_tour()
            .unwrap();
        assert_eq!(t.first(), Some(Cell::from([4, 3])));
        assert_eq!(t.last(), Some(Cell::from([4, 2])));
        assert!(t.verify().is_ok());
    }

    #[test]
    fn required_edges_are_honoured() {
        let b = board(&[6, 6]);
        let c = SearchConstraints::closed().require([1, 4], [2, 6]).require([4, 1], [6, 2]);
        let t = solve(&b, MoveParams::CLASSICAL, &c, &SearchBudget::default())
            .unwrap()
            .into_tour()
            .unwrap();
        assert!(t.has_edge(&Cell::from([1, 4]), &Cell::from([2, 6])));
        assert!(t.has_edge(&Cell::from([4, 1]), &Cell::from([6, 2])));
    }

    #[test]
    fn contradictory_constraints() {
        let b = board(&[6, 6]);
        let c = SearchConstraints::closed().require([1, 1], [2, 3]).forbid([2, 3], [1, 1]);
        assert!(matches!(
            solve(&b, MoveParams::CLASSICAL, &c, &SearchBudget::default()),
            Err(Error::Constraint(_))
        ));
        let c = SearchConstraints::closed().require([1, 1], [1, 2]);
        assert!(solve(&b, MoveParams::CLASSICAL, &c, &SearchBudget::default()).is_err());
        let c = SearchConstraints::open().with_start([1, 1]).with_end([1, 1]);
        assert!(solve(&b, MoveParams::CLASSICAL, &c, &SearchBudget::default()).is_err());
    }

    #[test]
    fn deterministic_single_worker() {
        let a = closed(&[6, 6]).into_tour().unwrap();
        let b = closed(&[6, 6]).into_tour().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parallel_agrees() {
        let budget = SearchBudget::default().with_workers(4);
        let c = SearchConstraints::closed();
        let out = solve(&board(&[3, 6]), MoveParams::CLASSICAL, &c, &budget).unwrap();
        assert!(out.is_proved_none());
        let out = solve(&board(&[6, 6]), MoveParams::CLASSICAL, &c, &budget).unwrap();
        assert!(out.tour().unwrap().verify().is_ok());
    }
}
