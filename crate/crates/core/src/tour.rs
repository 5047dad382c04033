//! Tours as ordered cell sequences, and their verification.

use std::fmt;

use serde::Serialize;

use crate::board::{adjacent, BoardSpec, Cell, MoveParams, Permutation};
use crate::error::{Error, Result};

/// First invariant a cell sequence breaks, with the offending position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    BadShape { index: usize },
    OutOfBounds { index: usize },
    DuplicateCell { index: usize, first: usize },
    /// The step from position `index` to `index + 1` is not a move.
    NonKnightStep { index: usize },
    NotClosed,
    IncompleteCoverage { visited: usize, cells: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadShape { index } => write!(f, "cell {index} has the wrong number of coordinates"),
            Violation::OutOfBounds { index } => write!(f, "cell {index} lies outside the board"),
            Violation::DuplicateCell { index, first } => {
                write!(f, "cell {index} repeats cell {first}")
            }
            Violation::NonKnightStep { index } => {
                write!(f, "step {index} -> {} is not a move", index + 1)
            }
            Violation::NotClosed => f.write_str("last cell does not attack the first"),
            Violation::IncompleteCoverage { visited, cells } => {
                write!(f, "tour visits {visited} of {cells} cells")
            }
        }
    }
}

impl std::error::Error for Violation {}

/// An ordered sequence of distinct cells on a board.
///
/// A verified closed tour is a Hamiltonian cycle of the move graph. Open
/// tours are paths and need not cover the board.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tour {
    board: BoardSpec,
    moves: MoveParams,
    order: Vec<u32>,
    closed: bool,
}

impl Tour {
    /// Wraps an index sequence without checking it.
    pub(crate) fn from_raw(board: BoardSpec, moves: MoveParams, order: Vec<u32>, closed: bool) -> Self {
        Tour {
            board,
            moves,
            order,
            closed,
        }
    }

    /// Builds a tour from linear cell indices and verifies it.
    pub fn from_indices(
        board: BoardSpec,
        moves: MoveParams,
        order: Vec<u32>,
        closed: bool,
    ) -> Result<Self, Violation> {
        if let Some(index) = order.iter().position(|&i| i as usize >= board.cell_count()) {
            return Err(Violation::OutOfBounds { index });
        }
        let t = Tour::from_raw(board, moves, order, closed);
        t.verify()?;
        Ok(t)
    }

    pub fn from_cells(
        board: BoardSpec,
        moves: MoveParams,
        cells: &[Cell],
        closed: bool,
    ) -> Result<Self, Violation> {
        let mut order = Vec::with_capacity(cells.len());
        for (index, cell) in cells.iter().enumerate() {
            if cell.0.len() != board.rank() {
                return Err(Violation::BadShape { index });
            }
            match board.index_of(cell) {
                Ok(i) => order.push(i as u32),
                Err(_) => return Err(Violation::OutOfBounds { index }),
            }
        }
        Tour::from_indices(board, moves, order, closed)
    }

    pub fn board(&self) -> &BoardSpec {
        &self.board
    }

    pub fn moves(&self) -> MoveParams {
        self.moves
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Linear cell indices in visiting order.
    pub fn order(&self) -> &[u32] {
        &self.order
    }

    #[inline]
    pub(crate) fn at(&self, pos: usize) -> usize {
        self.order[pos] as usize
    }

    /// Index of the cell after position `pos`, wrapping for closed tours.
    #[inline]
    pub(crate) fn next_pos(&self, pos: usize) -> usize {
        if pos + 1 == self.order.len() {
            0
        } else {
            pos + 1
        }
    }

    pub fn cell(&self, pos: usize) -> Cell {
        self.board.cell_at(self.at(pos))
    }

    pub fn cells(&self) -> Vec<Cell> {
        self.order.iter().map(|&i| self.board.cell_at(i as usize)).collect()
    }

    pub fn first(&self) -> Option<Cell> {
        self.order.first().map(|&i| self.board.cell_at(i as usize))
    }

    pub fn last(&self) -> Option<Cell> {
        self.order.last().map(|&i| self.board.cell_at(i as usize))
    }

    /// Whether every cell of the board is visited.
    pub fn covers_board(&self) -> bool {
        self.order.len() == self.board.cell_count()
    }

    /// Position of every cell in the tour, `u32::MAX` for unvisited cells.
    pub fn positions(&self) -> Vec<u32> {
        let mut pos = vec![u32::MAX; self.board.cell_count()];
        for (p, &i) in self.order.iter().enumerate() {
            pos[i as usize] = p as u32;
        }
        pos
    }

    /// Number of tour edges, counting the closing edge of a closed tour.
    pub fn edge_count(&self) -> usize {
        match (self.closed, self.order.len()) {
            (_, 0) => 0,
            (true, n) => n,
            (false, n) => n - 1,
        }
    }

    /// Edges as `(a, b)` index pairs in visiting order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.edge_count()).map(move |p| (self.at(p), self.at(self.next_pos(p))))
    }

    /// Whether `{a, b}` is an edge of the tour, given the position table.
    pub(crate) fn has_edge_with(&self, positions: &[u32], a: usize, b: usize) -> bool {
        let (pa, pb) = (positions[a], positions[b]);
        if pa == u32::MAX || pb == u32::MAX {
            return false;
        }
        let n = self.order.len() as u32;
        let (lo, hi) = (pa.min(pb), pa.max(pb));
        hi - lo == 1 || (self.closed && n > 2 && lo == 0 && hi == n - 1)
    }

    pub fn has_edge(&self, a: &Cell, b: &Cell) -> bool {
        match (self.board.index_of(a), self.board.index_of(b)) {
            (Ok(a), Ok(b)) => self.has_edge_with(&self.positions(), a, b),
            _ => false,
        }
    }

    pub fn verify(&self) -> Result<(), Violation> {
        let cells = self.board.cell_count();
        let mut seen = vec![u32::MAX; cells];
        for (index, &i) in self.order.iter().enumerate() {
            let i = i as usize;
            if i >= cells {
                return Err(Violation::OutOfBounds { index });
            }
            if seen[i] != u32::MAX {
                return Err(Violation::DuplicateCell {
                    index,
                    first: seen[i] as usize,
                });
            }
            seen[i] = index as u32;
        }
        for index in 1..self.order.len() {
            if !adjacent(&self.board, self.moves, self.at(index - 1), self.at(index)) {
                return Err(Violation::NonKnightStep { index: index - 1 });
            }
        }
        if self.closed {
            let n = self.order.len();
            if n < 3 || !adjacent(&self.board, self.moves, self.at(n - 1), self.at(0)) {
                return Err(Violation::NotClosed);
            }
            if n != cells {
                return Err(Violation::IncompleteCoverage { visited: n, cells });
            }
        }
        Ok(())
    }

    pub fn reversed(&self) -> Tour {
        let mut order = self.order.clone();
        order.reverse();
        Tour { order, ..self.clone() }
    }

    /// Closed tour started at position `start`.
    pub fn rotated(&self, start: usize) -> Tour {
        let mut order = self.order.clone();
        let shift = start % order.len().max(1);
        order.rotate_left(shift);
        Tour { order, ..self.clone() }
    }

    /// Canonical representative: closed tours start at their smallest cell and
    /// continue toward the smaller of its two neighbours; open tours start at
    /// the smaller endpoint.
    pub fn canonical(&self) -> Tour {
        let n = self.order.len();
        if n < 2 {
            return self.clone();
        }
        if !self.closed {
            return if self.order[n - 1] < self.order[0] {
                self.reversed()
            } else {
                self.clone()
            };
        }
        let start = (0..n).min_by_key(|&p| self.order[p]).unwrap();
        let mut order = self.order.clone();
        order.rotate_left(start);
        if order[n - 1] < order[1] {
            order[1..].reverse();
        }
        Tour { order, ..self.clone() }
    }

    /// Same cycle or path up to rotation and direction.
    pub fn same_cycle(&self, other: &Tour) -> bool {
        self.board == other.board && self.closed == other.closed && self.canonical().order == other.canonical().order
    }

    /// Tour on the board whose axis `i` is this board's axis `perm[i]`.
    pub fn permute_axes(&self, perm: &Permutation) -> Tour {
        let board = self.board.permuted(perm);
        let map = perm.as_slice();
        let mut buf = vec![0usize; map.len()];
        let order = self
            .order
            .iter()
            .map(|&i| {
                for (axis, &src) in map.iter().enumerate() {
                    buf[axis] = self.board.coord(i as usize, src);
                }
                board.index_from_zero_based(&buf) as u32
            })
            .collect();
        Tour {
            board,
            moves: self.moves,
            order,
            closed: self.closed,
        }
    }

    /// Swaps the two axes of a 2D tour.
    pub fn transposed(&self) -> Result<Tour> {
        if self.board.rank() != 2 {
            return Err(Error::Unsupported(format!(
                "transpose needs a 2D board, got {}",
                self.board
            )));
        }
        Ok(self.permute_axes(&Permutation::new(vec![1, 0])?))
    }

    /// The same cells placed inside `target`, shifted by `offset` (0-based) per axis.
    pub fn translated(&self, target: &BoardSpec, offset: &[usize]) -> Result<Tour> {
        let k = self.board.rank();
        if target.rank() != k || offset.len() != k {
            return Err(Error::Shape {
                expected: k,
                found: target.rank(),
            });
        }
        for axis in 0..k {
            if offset[axis] + self.board.dims()[axis] > target.dims()[axis] {
                return Err(Error::InvalidBoard(format!(
                    "{} shifted by {offset:?} does not fit in {target}",
                    self.board
                )));
            }
        }
        let base: usize = (0..k).map(|a| offset[a] * target.stride(a)).sum();
        let order = self
            .order
            .iter()
            .map(|&i| {
                let i = i as usize;
                let rel: usize = (0..k).map(|a| self.board.coord(i, a) * target.stride(a)).sum();
                (base + rel) as u32
            })
            .collect();
        Ok(Tour {
            board: target.clone(),
            moves: self.moves,
            order,
            closed: self.closed,
        })
    }

    pub(crate) fn into_parts(self) -> (BoardSpec, MoveParams, Vec<u32>, bool) {
        (self.board, self.moves, self.order, self.closed)
    }
}

/// Verifies a tour; see [`Tour::verify`].
pub fn verify(t: &Tour) -> Result<(), Violation> {
    t.verify()
}


#[cfg(test)]
mod tests {
    use super::fixtures::six_by_six;
    use super::*;

    #[test]
    fn fixture_is_a_closed_tour() {
        let t = six_by_six();
        assert_eq!(t.len(), 36);
        assert!(t.verify().is_ok());
        assert!(t.covers_board());
    }

    #[test]
    fn duplicate_cell_is_reported() {
        let t = six_by_six();
        let mut cells = t.cells();
        cells[20] = cells[10].clone();
        let err = Tour::from_cells(t.board().clone(), t.moves(), &cells, true).unwrap_err();
        assert_eq!(err, Violation::DuplicateCell { index: 20, first: 10 });
    }

    #[test]
    fn open_path_marked_closed() {
        let t = six_by_six();
        // Dropping the last cell leaves a valid path whose ends do not attack.
        let cells = &t.cells()[..35];
        let path = Tour::from_cells(t.board().clone(), t.moves(), cells, false).unwrap();
        assert!(!path.is_closed());
        let err = Tour::from_cells(t.board().clone(), t.moves(), cells, true).unwrap_err();
        assert_eq!(err, Violation::NotClosed);
    }

    #[test]
    fn other_violations() {
        let board = BoardSpec::new(vec![3, 4]).unwrap();
        let mp = MoveParams::CLASSICAL;
        let bad = [Cell::from([1, 1]), Cell::from([4, 1])];
        assert_eq!(
            Tour::from_cells(board.clone(), mp, &bad, false).unwrap_err(),
            Violation::OutOfBounds { index: 1 }
        );
        let bad = [Cell::from([1, 1]), Cell::from([1, 2])];
        assert_eq!(
            Tour::from_cells(board.clone(), mp, &bad, false).unwrap_err(),
            Violation::NonKnightStep { index: 0 }
        );
        let bad = [Cell::from([1, 1, 1])];
        assert_eq!(
            Tour::from_cells(board.clone(), mp, &bad, false).unwrap_err(),
            Violation::BadShape { index: 0 }
        );
    }

    #[test]
    fn canonical_form_ignores_rotation_and_direction() {
        let t = six_by_six();
        let c = t.canonical();
        assert_eq!(c.order()[0], 0);
        assert_eq!(t.rotated(7).canonical(), c);
        assert_eq!(t.reversed().rotated(3).canonical(), c);
        assert!(t.same_cycle(&t.reversed()));
    }

    #[test]
    fn permuting_axes_keeps_validity() {
        let t = six_by_six();
        let tt = t.transposed().unwrap();
        assert!(tt.verify().is_ok());
        assert_eq!(tt.cell(0), Cell::from([1, 1]));
        assert_eq!(tt.cell(1), Cell::from([2, 3]));
        assert_eq!(tt.transposed().unwrap(), t);
    }

    #[test]
    fn translation_into_larger_board() {
        let t = six_by_six();
        let big = BoardSpec::new(vec![12, 6]).unwrap();
        let moved = t.translated(&big, &[6, 0]).unwrap();
        assert_eq!(moved.cell(0), Cell::from([7, 1]));
        assert!(t.translated(&big, &[7, 0]).is_err());
    }

    #[test]
    fn edge_queries() {
        let t = six_by_six();
        assert!(t.has_edge(&Cell::from([1, 1]), &Cell::from([3, 2])));
        // closing edge 36 -> 1
        assert!(t.has_edge(&Cell::from([2, 3]), &Cell::from([1, 1])));
        assert!(!t.has_edge(&Cell::from([1, 1]), &Cell::from([1, 2])));
        assert_eq!(t.edges().count(), 36);
    }
}
