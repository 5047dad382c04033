//! Seeded 2D tours, extenders and four-row growth.
//!
//! On an `n x m` board the seed edges are `(1,m-2)-(2,m)` and
//! `(n-2,1)-(n,2)`. An extender is an open path on `4 x m` from `(4,m)` to
//! `(4,m-1)` holding the seeds `(1,m-2)-(2,m)` and `(2,1)-(4,2)`.

use std::sync::OnceLock;

use crate::board::{adjacent, BoardSpec, Cell, MoveParams};
use crate::error::{Error, Result};
use crate::oracle::SearchConstraints;
use crate::tour::Tour;

/// The two seed edges of an `n x m` board.
pub fn seed_edges(n: usize, m: usize) -> [(Cell, Cell); 2] {
    [
        (Cell::from([1, m - 2]), Cell::from([2, m])),
        (Cell::from([n - 2, 1]), Cell::from([n, 2])),
    ]
}

fn dims2(t: &Tour) -> Result<(usize, usize)> {
    match *t.board().dims() {
        [n, m] if n >= 3 && m >= 3 => Ok((n, m)),
        _ => Err(Error::NotSeeded(format!("{} is not a 2D board with sides >= 3", t.board()))),
    }
}

/// Whether `t` is a 2D tour holding both seed edges.
pub fn is_seeded(t: &Tour) -> bool {
    let Ok((n, m)) = dims2(t) else { return false };
    t.moves().is_classical() && seed_edges(n, m).iter().all(|(a, b)| t.has_edge(a, b))
}

/// A seeded 2D tour or path.
#[derive(Clone, Debug)]
pub struct SeededTour {
    tour: Tour,
}

impl SeededTour {
    pub fn new(tour: Tour) -> Result<Self> {
        if !is_seeded(&tour) {
            return Err(Error::NotSeeded(format!("seed edges missing on {}", tour.board())));
        }
        Ok(SeededTour { tour })
    }

    pub fn tour(&self) -> &Tour {
        &self.tour
    }

    pub fn into_tour(self) -> Tour {
        self.tour
    }

    pub fn seed_edges(&self) -> [(Cell, Cell); 2] {
        let d = self.tour.board().dims();
        seed_edges(d[0], d[1])
    }
}

/// Search constraints for a seeded closed tour on `n x m`.
pub fn seeded_closed_constraints(n: usize, m: usize) -> SearchConstraints {
    let [(a, b), (c, d)] = seed_edges(n, m);
    SearchConstraints::closed().require(a, b).require(c, d)
}

/// Search constraints for a seeded open tour on `n x m` from `(n,m)` to `(n,m-2)`.
pub fn seeded_open_constraints(n: usize, m: usize) -> SearchConstraints {
    let [(a, b), (c, d)] = seed_edges(n, m);
    SearchConstraints::open()
        .with_start([n, m])
        .with_end([n, m - 2])
        .require(a, b)
        .require(c, d)
}

/// Search constraints for a `4 x m` extender.
pub fn extender_constraints(m: usize) -> SearchConstraints {
    SearchConstraints::open()
        .with_start([4, m])
        .with_end([4, m - 1])
        .require([1, m - 2], [2, m])
        .require([2, 1], [4, 2])
}

/// Whether `t` satisfies the extender contract for its width.
pub fn is_extender(t: &Tour) -> bool {
    let [4, m] = *t.board().dims() else { return false };
    m >= 3 && !t.is_closed() && extender_constraints(m).accepts(t) && t.verify().is_ok()
}

/// A seeded open path on `4 x m` from `(4,m)` to `(4,m-1)`.
#[derive(Clone, Debug)]
pub struct Extender {
    tour: Tour,
}

impl Extender {
    pub fn new(tour: Tour) -> Result<Self> {
        if !is_extender(&tour) {
            return Err(Error::Endpoint(format!("not a 4 x m extender on {}", tour.board())));
        }
        Ok(Extender { tour })
    }

    pub fn width(&self) -> usize {
        self.tour.board().dims()[1]
    }

    pub fn tour(&self) -> &Tour {
        &self.tour
    }

    pub fn into_tour(self) -> Tour {
        self.tour
    }
}

/// The 4x3 extending pattern: a path from local `(4,3)` to `(4,2)` using the
/// seed `(1,1)-(2,3)` and the joining edge `(2,1)-(3,1)`, which is later
/// replaced by a whole extender. Cells are 0-based `(row, col)`.
fn extending_pattern() -> &'static [(usize, usize)] {
    static PATTERN: OnceLock<Vec<(usize, usize)>> = OnceLock::new();
    PATTERN.get_or_init(|| {
        let cells: Vec<(usize, usize)> = (0..4).flat_map(|r| (0..3).map(move |c| (r, c))).collect();
        let joining = [(1, 0), (2, 0)];
        let seed = [(0, 0), (1, 2)];
        let linked = |a: (usize, usize), b: (usize, usize)| {
            let (dr, dc) = (a.0.abs_diff(b.0), a.1.abs_diff(b.1));
            matches!((dr, dc), (1, 2) | (2, 1)) || (joining.contains(&a) && joining.contains(&b) && a != b)
        };
        let has = |path: &[(usize, usize)], e: [(usize, usize); 2]| {
            path.windows(2).any(|w| (w[0] == e[0] && w[1] == e[1]) || (w[0] == e[1] && w[1] == e[0]))
        };
        fn dfs(
            path: &mut Vec<(usize, usize)>,
            cells: &[(usize, usize)],
            linked: &dyn Fn((usize, usize), (usize, usize)) -> bool,
            done: &dyn Fn(&[(usize, usize)]) -> bool,
        ) -> bool {
            if path.len() == cells.len() {
                return done(path);
            }
            let head = *path.last().unwrap();
            for &c in cells {
                if !path.contains(&c) && linked(head, c) {
                    path.push(c);
                    if dfs(path, cells, linked, done) {
                        return true;
                    }
                    path.pop();
                }
            }
            false
        }
        let done = |p: &[(usize, usize)]| p[p.len() - 1] == (3, 1) && has(p, joining) && has(p, seed);
        let mut path = vec![(3, 2)];
        assert!(dfs(&mut path, &cells, &linked, &done), "extending pattern exists");
        path
    })
}

/// Grows an extender from width `m` to `m + 3`.
fn grow_extender(e: &Tour) -> Result<Tour> {
    let m = e.board().dims()[1];
    let board = BoardSpec::new(vec![4, m + 3])?;
    let at = |r: usize, c: usize| board.index_from_zero_based(&[r, c]) as u32;
    let old = e.board();
    let ext: Vec<u32> = e
        .order()
        .iter()
        .map(|&i| at(old.coord(i as usize, 0), old.coord(i as usize, 1)))
        .collect();
    let mut order = Vec::with_capacity(4 * (m + 3));
    let pattern = extending_pattern();
    for (i, &(r, c)) in pattern.iter().enumerate() {
        order.push(at(r, m + c));
        let Some(&next) = pattern.get(i + 1) else { break };
        if c == 0 && next.1 == 0 && r.abs_diff(next.0) == 1 {
            // Replace the joining edge by the whole extender, entering at whichever end is a move.
            let (first, last) = (ext[0], ext[ext.len() - 1]);
            let here = at(r, m);
            if adjacent(&board, MoveParams::CLASSICAL, here as usize, first as usize) {
                order.extend_from_slice(&ext);
            } else {
                debug_assert!(adjacent(&board, MoveParams::CLASSICAL, here as usize, last as usize));
                order.extend(ext.iter().rev());
            }
        }
    }
    let t = Tour::from_raw(board, MoveParams::CLASSICAL, order, false);
    t.verify().map_err(Error::Verification)?;
    Ok(t)
}

/// A `4 x m` extender: the library supplies widths 3, 5 and 7; wider ones grow by three columns at a time.
pub fn build_extender(m: usize, base: &dyn Fn(usize) -> Result<Tour>) -> Result<Extender> {
    match m {
        0..=2 | 4 => Err(Error::NoExtender(m)),
        3 | 5 | 7 => Extender::new(base(m)?),
        _ => {
            let smaller = build_extender(m - 3, base)?;
            Extender::new(grow_extender(smaller.tour())?)
        }
    }
}

/// Extends a seeded tour (closed, or open from `(n,m)` to `(n,m-2)`) by four
/// along `axis`: rows for axis 0, columns for axis 1.
pub fn extend_seeded(t: &Tour, ext: &Extender, axis: usize) -> Result<Tour> {
    match axis {
        0 => extend_rows(t, ext),
        1 => extend_rows(&t.transposed()?, ext)?.transposed(),
        _ => Err(Error::Unsupported(format!("axis {axis} on a 2D board"))),
    }
}

fn extend_rows(t: &Tour, ext: &Extender) -> Result<Tour> {
    let (n, m) = dims2(t)?;
    if !is_seeded(t) {
        return Err(Error::NotSeeded(format!("seed edges missing on {}", t.board())));
    }
    if ext.width() != m {
        return Err(Error::Endpoint(format!("extender width {} does not match {m} columns", ext.width())));
    }
    let board = BoardSpec::new(vec![n + 4, m])?;
    let shifted = t.translated(&board, &[4, 0])?;
    let e = ext.tour().translated(&board, &[0, 0])?;
    let idx = |r: usize, c: usize| board.index_from_zero_based(&[r - 1, c - 1]) as u32;
    // The shifted top seed is removed; its ends meet the extender's ends.
    let (x, y) = (idx(5, m - 2), idx(6, m));
    debug_assert_eq!(e.order()[0], idx(4, m));
    let ord = shifted.order();
    let len = ord.len();
    let px = ord.iter().position(|&c| c == x).expect("shifted tour covers x");
    let order: Vec<u32> = if t.is_closed() {
        // E from (4,m) to (4,m-1), then (6,m) around to (5,m-2).
        let py = ord.iter().position(|&c| c == y).expect("shifted tour covers y");
        let step = if (px + 1) % len == py { 1 } else { len - 1 };
        let mut out = e.order().to_vec();
        out.extend((0..len).map(|i| ord[(py + i * step) % len]));
        out
    } else {
        let py = ord.iter().position(|&c| c == y).expect("shifted tour covers y");
        if py.abs_diff(px) != 1 {
            return Err(Error::NotSeeded("top seed is not a path edge".into()));
        }
        let mut out = Vec::with_capacity(len + e.len());
        let cut = px.min(py) + 1;
        out.extend_from_slice(&ord[..cut]);
        if px < py {
            out.extend_from_slice(e.order());
        } else {
            out.extend(e.order().iter().rev());
        }
        out.extend_from_slice(&ord[cut..]);
        out
    };
    let out = Tour::from_raw(board, t.moves(), order, t.is_closed());
    out.verify().map_err(Error::Verification)?;
    Ok(out)
}

/// Closed tour on `n x m x 2` from two copies of an open tour running
/// between `(n,m)` and `(n,m-2)`.
pub fn stack_open_pair(t: &Tour) -> Result<Tour> {
    if t.is_closed() {
        return Err(Error::Endpoint("stacking needs an open tour".into()));
    }
    let [n, m] = *t.board().dims() else {
        return Err(Error::Endpoint(format!("{} is not 2D", t.board())));
    };
    if m < 3 {
        return Err(Error::Endpoint(format!("{} is too narrow", t.board())));
    }
    let (s, e) = (Cell::from([n, m]), Cell::from([n, m - 2]));
    let (first, last) = (t.first(), t.last());
    let path = if first.as_ref() == Some(&s) && last.as_ref() == Some(&e) {
        t.reversed()
    } else if first.as_ref() == Some(&e) && last.as_ref() == Some(&s) {
        t.clone()
    } else {
        return Err(Error::Endpoint(format!("open tour must run between {s} and {e}")));
    };
    // Both layers walk (n,m-2) ... (n,m); (n,m) in one layer meets (n,m-2) in the other.
    let board = t.board().with_layers(2)?;
    let order: Vec<u32> = (0..2)
        .flat_map(|layer| path.order().iter().map(move |&c| (c as usize * 2 + layer) as u32))
        .collect();
    let out = Tour::from_raw(board, t.moves(), order, true);
    out.verify().map_err(Error::Verification)?;
    Ok(out)
}
