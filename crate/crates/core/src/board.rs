//! Boards, generalized knight moves and the move graph.
//!
//! Cells are 1-based at every public boundary. Internally a cell is a
//! row-major linear index with the last axis varying fastest, so ordering by
//! index is the same as lexicographic ordering by coordinates.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Side lengths of an n-dimensional rectangular board.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoardSpec {
    dims: Vec<usize>,
    strides: Vec<usize>,
    cells: usize,
}

impl BoardSpec {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidBoard("no axes".into()));
        }
        if let Some(axis) = dims.iter().position(|&d| d == 0) {
            return Err(Error::InvalidBoard(format!("axis {axis} has length 0")));
        }
        let mut strides = vec![1usize; dims.len()];
        let mut cells = 1usize;
        for axis in (0..dims.len()).rev() {
            strides[axis] = cells;
            cells = cells
                .checked_mul(dims[axis])
                .ok_or_else(|| Error::InvalidBoard(format!("cell count of {dims:?} overflows")))?;
        }
        // Linear indices are stored as u32 in the hot paths.
        if cells > u32::MAX as usize {
            return Err(Error::InvalidBoard(format!("{dims:?} has more than 2^32 cells")));
        }
        Ok(BoardSpec { dims, strides, cells })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of axes.
    pub fn rank(&self) -> usize {
        self.dims.len()
    }

    pub fn cell_count(&self) -> usize {
        self.cells
    }

    pub(crate) fn stride(&self, axis: usize) -> usize {
        self.strides[axis]
    }

    /// 0-based coordinate of a linear index along one axis.
    #[inline]
    pub(crate) fn coord(&self, index: usize, axis: usize) -> usize {
        (index / self.strides[axis]) % self.dims[axis]
    }

    /// Moves `index` by `delta` along `axis`, or `None` when it leaves the board.
    #[inline]
    pub(crate) fn shift(&self, index: usize, axis: usize, delta: i64) -> Option<usize> {
        let c = self.coord(index, axis) as i64 + delta;
        if c < 0 || c >= self.dims[axis] as i64 {
            return None;
        }
        Some((index as i64 + delta * self.strides[axis] as i64) as usize)
    }

    pub(crate) fn index_from_zero_based(&self, coords: &[usize]) -> usize {
        coords.iter().zip(&self.strides).map(|(c, s)| c * s).sum()
    }

    pub fn contains(&self, cell: &Cell) -> bool {
        cell.0.len() == self.rank()
            && cell.0.iter().zip(&self.dims).all(|(&c, &d)| c >= 1 && c <= d)
    }

    pub fn index_of(&self, cell: &Cell) -> Result<usize> {
        if cell.0.len() != self.rank() {
            return Err(Error::Shape {
                expected: self.rank(),
                found: cell.0.len(),
            });
        }
        if !self.contains(cell) {
            return Err(Error::OutOfBounds(cell.0.clone()));
        }
        Ok(cell
            .0
            .iter()
            .zip(&self.strides)
            .map(|(c, s)| (c - 1) * s)
            .sum())
    }

    pub fn cell_at(&self, index: usize) -> Cell {
        Cell((0..self.rank()).map(|axis| self.coord(index, axis) + 1).collect())
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.cells).map(|i| self.cell_at(i))
    }

    /// Signed per-axis difference `a - b` of two linear indices.
    pub(crate) fn delta(&self, a: usize, b: usize) -> Vec<i64> {
        (0..self.rank())
            .map(|axis| self.coord(a, axis) as i64 - self.coord(b, axis) as i64)
            .collect()
    }

    /// Whether `a - b` is `magnitude` times a unit vector; returns the axis and sign.
    pub(crate) fn axis_offset(&self, a: usize, b: usize, magnitude: usize) -> Option<(usize, i64)> {
        let mut found = None;
        for axis in 0..self.rank() {
            let d = self.coord(a, axis) as i64 - self.coord(b, axis) as i64;
            if d == 0 {
                continue;
            }
            if found.is_some() || d.unsigned_abs() as usize != magnitude {
                return None;
            }
            found = Some((axis, d.signum()));
        }
        found
    }

    /// Board with one extra axis of length `layers` appended.
    pub fn with_layers(&self, layers: usize) -> Result<BoardSpec> {
        let mut dims = self.dims.clone();
        dims.push(layers);
        BoardSpec::new(dims)
    }

    pub fn permuted(&self, perm: &Permutation) -> BoardSpec {
        BoardSpec::new(perm.apply(&self.dims)).expect("permutation keeps a valid board")
    }
}

impl fmt::Display for BoardSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        f.write_str(&parts.join("x"))
    }
}

/// The `(alpha, beta)` pair of a generalized knight; stored with `alpha > beta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoveParams {
    alpha: usize,
    beta: usize,
}

impl MoveParams {
    pub const CLASSICAL: MoveParams = MoveParams { alpha: 2, beta: 1 };

    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::InvalidMoves {
                alpha: a,
                beta: b,
                reason: "components must be positive",
            });
        }
        if a == b {
            return Err(Error::InvalidMoves {
                alpha: a,
                beta: b,
                reason: "components must differ",
            });
        }
        Ok(MoveParams {
            alpha: a.max(b),
            beta: a.min(b),
        })
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    pub fn is_classical(&self) -> bool {
        *self == Self::CLASSICAL
    }

    /// Whether a displacement is one knight move.
    pub fn is_move(&self, delta: &[i64]) -> bool {
        let (mut a, mut b) = (0, 0);
        for &d in delta {
            let m = d.unsigned_abs() as usize;
            if m == 0 {
                continue;
            }
            if m == self.alpha {
                a += 1;
            } else if m == self.beta {
                b += 1;
            } else {
                return false;
            }
        }
        a == 1 && b == 1
    }
}

impl Default for MoveParams {
    fn default() -> Self {
        Self::CLASSICAL
    }
}

impl fmt::Display for MoveParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.alpha, self.beta)
    }
}

/// One lattice point, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cell(pub Vec<usize>);

impl Cell {
    pub fn new(coords: impl Into<Vec<usize>>) -> Self {
        Cell(coords.into())
    }

    pub fn coords(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl From<&[usize]> for Cell {
    fn from(c: &[usize]) -> Self {
        Cell(c.to_vec())
    }
}

impl<const N: usize> From<[usize; N]> for Cell {
    fn from(c: [usize; N]) -> Self {
        Cell(c.to_vec())
    }
}

/// A displacement with one `±alpha` entry, one `±beta` entry and zeros elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MoveVector(pub Vec<i64>);

impl MoveVector {
    pub fn delta(&self) -> &[i64] {
        &self.0
    }
}

/// Compact form of a move: `da` along axis `a`, `db` along axis `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Step {
    pub a: usize,
    pub da: i64,
    pub b: usize,
    pub db: i64,
}

impl Step {
    #[inline]
    pub fn apply(&self, board: &BoardSpec, index: usize) -> Option<usize> {
        let i = board.shift(index, self.a, self.da)?;
        board.shift(i, self.b, self.db)
    }
}

/// All moves in `k` dimensions, sorted lexicographically by delta vector.
pub fn move_set(k: usize, mp: MoveParams) -> Result<Vec<MoveVector>> {
    Ok(steps(k, mp)?
        .into_iter()
        .map(|s| {
            let mut v = vec![0i64; k];
            v[s.a] = s.da;
            v[s.b] = s.db;
            MoveVector(v)
        })
        .collect())
}

pub(crate) fn steps(k: usize, mp: MoveParams) -> Result<Vec<Step>> {
    if k < 2 {
        return Err(Error::DimensionTooSmall(k));
    }
    let (alpha, beta) = (mp.alpha as i64, mp.beta as i64);
    let mut out = Vec::with_capacity(4 * k * (k - 1));
    for a in 0..k {
        for b in 0..k {
            if a == b {
                continue;
            }
            for sa in [-1, 1] {
                for sb in [-1, 1] {
                    out.push(Step {
                        a,
                        da: sa * alpha,
                        b,
                        db: sb * beta,
                    });
                }
            }
        }
    }
    let key = |s: &Step| {
        let mut v = vec![0i64; k];
        v[s.a] = s.da;
        v[s.b] = s.db;
        v
    };
    out.sort_by_key(key);
    Ok(out)
}

/// Moves usable on `board`; empty for single-axis boards.
pub(crate) fn board_steps(board: &BoardSpec, mp: MoveParams) -> Vec<Step> {
    steps(board.rank(), mp).unwrap_or_default()
}

pub(crate) fn neighbor_indices(board: &BoardSpec, steps: &[Step], index: usize, out: &mut Vec<usize>) {
    out.clear();
    out.extend(steps.iter().filter_map(|s| s.apply(board, index)));
}

#[inline]
pub(crate) fn adjacent(board: &BoardSpec, mp: MoveParams, a: usize, b: usize) -> bool {
    let (mut na, mut nb) = (0, 0);
    for axis in 0..board.rank() {
        let d = board.coord(a, axis).abs_diff(board.coord(b, axis));
        if d == 0 {
            continue;
        }
        if d == mp.alpha {
            na += 1;
        } else if d == mp.beta {
            nb += 1;
        } else {
            return false;
        }
    }
    na == 1 && nb == 1
}

fn check_cell(board: &BoardSpec, cell: &Cell) -> Result<usize> {
    board.index_of(cell)
}

/// Whether `a` and `c` are joined by a single move.
pub fn is_edge(board: &BoardSpec, a: &Cell, c: &Cell, mp: MoveParams) -> Result<bool> {
    let ia = check_cell(board, a)?;
    let ic = check_cell(board, c)?;
    Ok(adjacent(board, mp, ia, ic))
}

/// In-bounds cells one move away from `a`, in move-set order.
pub fn neighbors(board: &BoardSpec, a: &Cell, mp: MoveParams) -> Result<Vec<Cell>> {
    let index = check_cell(board, a)?;
    let steps = board_steps(board, mp);
    let mut out = Vec::new();
    neighbor_indices(board, &steps, index, &mut out);
    Ok(out.into_iter().map(|i| board.cell_at(i)).collect())
}

/// Two-coloring of the board: `-1` on the class of `(1,…,1)`, `+1` on the other.
///
/// The classes are the parity classes of the coordinate sum, so every move
/// with `alpha + beta` odd (the classical knight included) changes color.
pub fn color(a: &Cell) -> i8 {
    let shifted: usize = a.0.iter().map(|c| c.saturating_sub(1)).sum();
    if shifted % 2 == 0 {
        -1
    } else {
        1
    }
}

/// `(-1)^(a_1 * … * a_k)`: `-1` exactly when every coordinate is odd.
///
/// Agrees with [`color`] on 2D boards only on some cells and is not a proper
/// coloring: `(2,2)` and `(4,3)` are a knight move apart yet both map to `+1`.
pub fn product_color(a: &Cell) -> i8 {
    if a.0.iter().all(|c| c % 2 == 1) {
        -1
    } else {
        1
    }
}

/// Breadth-first labelling of move-graph components; returns the component count.
pub(crate) fn components(board: &BoardSpec, mp: MoveParams) -> (usize, Vec<u32>) {
    let steps = board_steps(board, mp);
    let mut label = vec![u32::MAX; board.cell_count()];
    let mut queue = VecDeque::new();
    let mut count = 0u32;
    let mut buf = Vec::new();
    for root in 0..board.cell_count() {
        if label[root] != u32::MAX {
            continue;
        }
        label[root] = count;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            neighbor_indices(board, &steps, u, &mut buf);
            for &v in &buf {
                if label[v] == u32::MAX {
                    label[v] = count;
                    queue.push_back(v);
                }
            }
        }
        count += 1;
    }
    (count as usize, label)
}

/// Whether the move graph on all cells is a single component.
pub fn is_connected(board: &BoardSpec, mp: MoveParams) -> bool {
    components(board, mp).0 == 1
}

/// Axis permutation: position `i` of the permuted board holds original axis `self[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &m in &map {
            if m >= map.len() || std::mem::replace(&mut seen[m], true) {
                return Err(Error::InvalidBoard(format!("{map:?} is not a permutation")));
            }
        }
        Ok(Permutation(map))
    }

    pub fn identity(k: usize) -> Self {
        Permutation((0..k).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &m)| i == m)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &m) in self.0.iter().enumerate() {
            inv[m] = i;
        }
        Permutation(inv)
    }

    pub fn apply<T: Clone>(&self, values: &[T]) -> Vec<T> {
        self.0.iter().map(|&m| values[m].clone()).collect()
    }
}

/// Sorts the side lengths ascending; the permutation maps sorted axes back to
/// the original ones (`sorted[i] == original[perm[i]]`).
pub fn canonicalize(board: &BoardSpec) -> (BoardSpec, Permutation) {
    let mut order: Vec<usize> = (0..board.rank()).collect();
    order.sort_by_key(|&axis| board.dims[axis]);
    let perm = Permutation(order);
    (board.permuted(&perm), perm)
}
