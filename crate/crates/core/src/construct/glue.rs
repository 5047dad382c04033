//! Joining two closed tours on adjacent boxes into one.
//!
//! An edge `u-v` of the first tour and an edge `x-y` of the second are
//! replaced by `u-x` and `v-y`. Both new edges cross the shared face.

use std::collections::HashSet;

use crate::board::{adjacent, board_steps, BoardSpec};
use crate::error::{Error, Result};
use crate::tour::Tour;

/// Glues `b` onto `a` along `axis`; `b` starts at 0-based coordinate
/// `offset = a.dims[axis]` on that axis.
pub fn glue(a: &Tour, b: &Tour, axis: usize, offset: usize) -> Result<Tour> {
    glue_protected(a, b, axis, offset, &HashSet::new())
}

/// [`glue`] that leaves the given edges (linear index pairs on the output
/// board, smaller index first) untouched.
pub fn glue_protected(
    a: &Tour,
    b: &Tour,
    axis: usize,
    offset: usize,
    protected: &HashSet<(usize, usize)>,
) -> Result<Tour> {
    let (da, db) = (a.board().dims(), b.board().dims());
    if da.len() != db.len() || axis >= da.len() {
        return Err(Error::NotGluable(format!("ranks {} and {} along axis {axis}", da.len(), db.len())));
    }
    if offset != da[axis] {
        return Err(Error::NotGluable(format!("offset {offset} is not the extent {}", da[axis])));
    }
    if (0..da.len()).any(|i| i != axis && da[i] != db[i]) {
        return Err(Error::NotGluable(format!("{} and {} differ off axis {axis}", a.board(), b.board())));
    }
    if !a.is_closed() || !b.is_closed() {
        return Err(Error::NotGluable("both tours must be closed".into()));
    }
    if a.moves() != b.moves() {
        return Err(Error::NotGluable("move parameters differ".into()));
    }
    let mut dims = da.to_vec();
    dims[axis] += db[axis];
    let target = BoardSpec::new(dims)?;
    let mut off_a = vec![0; da.len()];
    let ta = a.translated(&target, &off_a)?;
    off_a[axis] = offset;
    let tb = b.translated(&target, &off_a)?;

    let mp = a.moves();
    let steps = board_steps(&target, mp);
    let mut pos_b = vec![u32::MAX; target.cell_count()];
    for (p, &c) in tb.order().iter().enumerate() {
        pos_b[c as usize] = p as u32;
    }
    let key = |x: usize, y: usize| (x.min(y), x.max(y));
    let nb = tb.len();
    let mut best: Option<(usize, usize, bool, usize, usize)> = None;
    'scan: for pa in 0..ta.len() {
        let u0 = ta.at(pa);
        let v0 = ta.at(ta.next_pos(pa));
        if protected.contains(&key(u0, v0)) {
            continue;
        }
        // Either end of the A edge may be the one that steps into B.
        for (u, v, forward) in [(u0, v0, true), (v0, u0, false)] {
            for s in &steps {
                let Some(x) = s.apply(&target, u) else { continue };
                let px = pos_b[x];
                if px == u32::MAX {
                    continue;
                }
                let px = px as usize;
                for py in [(px + nb - 1) % nb, (px + 1) % nb] {
                    let y = tb.at(py);
                    if protected.contains(&key(x, y)) || !adjacent(&target, mp, v, y) {
                        continue;
                    }
                    let edge_pos = if py == (px + 1) % nb { px } else { py };
                    if best.is_none_or(|b| edge_pos < b.0) {
                        best = Some((edge_pos, pa, forward, px, py));
                    }
                }
            }
        }
        if best.is_some() {
            break 'scan;
        }
    }
    let (_, pa, forward, px, py) =
        best.ok_or_else(|| Error::NotGluable("no crossing pair of edges".into()))?;

    // v ... u along A (leaving v away from u), then x ... y along B.
    let na = ta.len();
    let (pu, pv) = if forward { (pa, ta.next_pos(pa)) } else { (ta.next_pos(pa), pa) };
    let walk = |t: &Tour, from: usize, avoid: usize, n: usize| -> Vec<u32> {
        let step = if (from + 1) % n == avoid { n - 1 } else { 1 };
        (0..n).map(|i| t.order()[(from + i * step) % n]).collect()
    };
    let mut out = walk(&ta, pv, pu, na);
    out.extend(walk(&tb, px, py, nb));
    let (board, moves, _, _) = ta.into_parts();
    let t = Tour::from_raw(board, moves, out, true);
    debug_assert!(t.verify().is_ok(), "glue produced an invalid tour");
    Ok(t)
}
