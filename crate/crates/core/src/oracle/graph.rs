use std::collections::HashSet;

use crate::board::{board_steps, neighbor_indices, BoardSpec, MoveParams};
use crate::error::{Error, Result};

use super::SearchConstraints;

pub(crate) const NONE: u32 = u32::MAX;

/// Packed move graph; open-path searches add one virtual vertex that closes
/// the path into a cycle.
pub(crate) struct Graph {
    pub n: usize,
    pub cells: usize,
    off: Vec<u32>,
    adj: Vec<u32>,
    /// Up to two required partners per vertex, `NONE` when absent.
    pub req: Vec<[u32; 2]>,
    pub virt: Option<u32>,
    /// Endpoints requested for an open path.
    pub start: Option<u32>,
    pub end: Option<u32>,
}

impl Graph {
    #[inline]
    pub fn nbrs(&self, v: u32) -> &[u32] {
        &self.adj[self.off[v as usize] as usize..self.off[v as usize + 1] as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        (self.off[v as usize + 1] - self.off[v as usize]) as usize
    }

    pub fn is_virtual(&self, v: u32) -> bool {
        self.virt == Some(v)
    }

    /// Number of required partners of `v`.
    pub fn req_count(&self, v: u32) -> usize {
        self.req[v as usize].iter().filter(|&&p| p != NONE).count()
    }

    pub fn build(board: &BoardSpec, mp: MoveParams, c: &SearchConstraints) -> Result<Graph> {
        let cells = board.cell_count();
        let idx = |cell: &crate::board::Cell| -> Result<u32> {
            board
                .index_of(cell)
                .map(|i| i as u32)
                .map_err(|e| Error::Constraint(e.to_string()))
        };
        let key = |a: u32, b: u32| (a.min(b), a.max(b));
        let mut forbidden = HashSet::new();
        for (a, b) in &c.forbidden_edges {
            forbidden.insert(key(idx(a)?, idx(b)?));
        }
        let start = c.start.as_ref().map(&idx).transpose()?;
        let end = c.end.as_ref().map(&idx).transpose()?;
        if c.closed && end.is_some() {
            return Err(Error::Constraint("a closed tour has no end cell".into()));
        }
        if !c.closed && start.is_some() && start == end {
            return Err(Error::Constraint("open path start and end coincide".into()));
        }

        let virt = (!c.closed).then_some(cells as u32);
        let n = cells + usize::from(virt.is_some());
        let steps = board_steps(board, mp);
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut buf = Vec::new();
        for (i, list) in lists.iter_mut().enumerate().take(cells) {
            neighbor_indices(board, &steps, i, &mut buf);
            list.extend(
                buf.iter()
                    .map(|&j| j as u32)
                    .filter(|&j| !forbidden.contains(&key(i as u32, j))),
            );
        }
        let mut req_pairs = Vec::new();
        for (a, b) in &c.required_edges {
            let (a, b) = (idx(a)?, idx(b)?);
            if forbidden.contains(&key(a, b)) {
                return Err(Error::Constraint(format!(
                    "edge {}-{} is both required and forbidden",
                    board.cell_at(a as usize),
                    board.cell_at(b as usize)
                )));
            }
            if !lists[a as usize].contains(&b) {
                return Err(Error::Constraint(format!(
                    "required edge {}-{} is not a move",
                    board.cell_at(a as usize),
                    board.cell_at(b as usize)
                )));
            }
            req_pairs.push((a, b));
        }
        if let Some(v) = virt {
            let ends: Vec<u32> = match (start, end) {
                (Some(s), Some(e)) => vec![s, e],
                _ => (0..cells as u32).collect(),
            };
            for &e in &ends {
                lists[v as usize].push(e);
                lists[e as usize].push(v);
            }
            for e in [start, end].into_iter().flatten() {
                req_pairs.push((v, e));
            }
        }
        let mut req = vec![[NONE; 2]; n];
        let mut seen = HashSet::new();
        for (a, b) in req_pairs {
            if !seen.insert(key(a, b)) {
                continue;
            }
            for (x, y) in [(a, b), (b, a)] {
                let slot = req[x as usize].iter().position(|&p| p == NONE).ok_or_else(|| {
                    Error::Constraint(format!("more than two required edges at vertex {x}"))
                })?;
                req[x as usize][slot] = y;
            }
        }
        let mut off = Vec::with_capacity(n + 1);
        let mut adj = Vec::new();
        off.push(0u32);
        for list in &lists {
            adj.extend_from_slice(list);
            off.push(adj.len() as u32);
        }
        Ok(Graph {
            n,
            cells,
            off,
            adj,
            req,
            virt,
            start,
            end,
        })
    }

    /// Connected components of the real cells (the virtual vertex excluded).
    pub fn real_components(&self) -> usize {
        let mut seen = vec![false; self.cells];
        let mut stack = Vec::new();
        let mut count = 0;
        for root in 0..self.cells {
            if seen[root] {
                continue;
            }
            count += 1;
            seen[root] = true;
            stack.push(root as u32);
            while let Some(u) = stack.pop() {
                for &w in self.nbrs(u) {
                    if !self.is_virtual(w) && !seen[w as usize] {
                        seen[w as usize] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    pub fn real_degree(&self, v: u32) -> usize {
        self.nbrs(v).iter().filter(|&&w| !self.is_virtual(w)).count()
    }
}
