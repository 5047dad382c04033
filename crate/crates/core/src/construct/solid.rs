//! 3D boards. A tourable face is lifted; the remaining shapes are glued
//! from small derived blocks or stacked from open 2D tours.

use crate::error::{Error, Result};
use crate::feasibility::{classify_2d, classify_3d};
use crate::sites::is_bisited;
use crate::tour::Tour;

use super::blocks::BlockTag;
use super::glue::glue;
use super::lift::lift;
use super::seeded::stack_open_pair;
use super::{arrange, Constructor};

/// Fewest parts from `parts` summing to `total`, largest parts first.
fn split(total: usize, parts: &[usize]) -> Option<Vec<usize>> {
    let mut best: Vec<Option<Vec<usize>>> = vec![None; total + 1];
    best[0] = Some(Vec::new());
    for t in 1..=total {
        for &p in parts.iter().rev() {
            if p <= t {
                if let Some(prev) = &best[t - p] {
                    if best[t].as_ref().is_none_or(|b| prev.len() + 1 < b.len()) {
                        let mut v = prev.clone();
                        v.push(p);
                        best[t] = Some(v);
                    }
                }
            }
        }
    }
    best.swap_remove(total).map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    })
}

impl Constructor<'_> {
    /// Bi-sited closed tour on `m x n x p`.
    pub fn construct_3d(&mut self, m: usize, n: usize, p: usize) -> Result<Tour> {
        let verdict = classify_3d(m, n, p)?;
        if !verdict.tourable {
            return Err(Error::NotTourable(verdict));
        }
        let target = [m, n, p];
        let mut s = target;
        s.sort_unstable();
        if s[0] == 1 {
            let t = self.construct_2d(s[1], s[2])?;
            let (_, mp, order, closed) = t.into_parts();
            let flat = crate::board::BoardSpec::new(vec![1, s[1], s[2]])?;
            return arrange(&Tour::from_raw(flat, mp, order, closed), &target);
        }
        let t = self.solid_sorted(s)?;
        if !is_bisited(&t)? {
            return Err(Error::MissingSites(format!("{} came out without two disjoint sites", t.board())));
        }
        arrange(&t, &target)
    }

    fn solid_sorted(&mut self, s: [usize; 3]) -> Result<Tour> {
        let [m, n, p] = s;
        // Largest tourable face first, lifted by the remaining side.
        for (i, j, k) in [(1, 2, 0), (0, 2, 1), (0, 1, 2)] {
            if classify_2d(s[i], s[j]).tourable {
                let face = self.construct_2d(s[i], s[j])?;
                self.note(format!("lift {}x{} by {}", s[i], s[j], s[k]));
                return lift(&face, s[k]);
            }
        }
        let odd5 = |x: usize| x >= 5 && x % 2 == 1;
        if matches!(m, 2 | 4) && odd5(n) && odd5(p) {
            let open = self.open_seeded(n, p)?;
            let pair = stack_open_pair(&open)?;
            self.note(format!("stack open {n}x{p} pair"));
            return if m == 2 { Ok(pair) } else { glue(&pair, &pair, 2, 2) };
        }
        match s {
            [4, 4, _] => self.chain(&[4, 4], 2, p, &[2, 3]),
            [3, 4, _] => self.chain(&[4, 3], 2, p, &[2, 3]),
            [3, 3, 4] => self.chain(&[4, 3], 2, 3, &[3]),
            [2, 4, _] => self.chain(&[4, 2], 1, p, &[3, 4, 5]),
            [2, 3, _] => self.chain(&[3, 2], 2, p, &[4, 5, 6, 7]),
            [3, 3, 6] => Ok(self.lib.tour(&[3, 3, 6], BlockTag::Bisited)?.clone()),
            [3, 3, 8] => {
                let b = self.lib.tour(&[4, 3, 3], BlockTag::Bisited)?.clone();
                self.note("glue 4x3x3 twice".into());
                glue(&b, &b, 0, 4)
            }
            _ => Err(Error::Unsupported(format!("no 3D recipe for {m}x{n}x{p}"))),
        }
    }

    /// Glues library blocks with fixed sides `fixed` (in axis order, skipping
    /// `axis`) and extents from `parts` along `axis` until it reaches `total`.
    fn chain(&mut self, fixed: &[usize; 2], axis: usize, total: usize, parts: &[usize]) -> Result<Tour> {
        let pieces = split(total, parts)
            .ok_or_else(|| Error::Unsupported(format!("{total} is not a sum of {parts:?}")))?;
        let dims_of = |e: usize| {
            let mut d = fixed.to_vec();
            d.insert(axis, e);
            d
        };
        let mut acc: Option<Tour> = None;
        for &e in &pieces {
            let block = self.lib.tour(&dims_of(e), BlockTag::Bisited)?.clone();
            acc = Some(match acc {
                None => block,
                Some(a) => {
                    let off = a.board().dims()[axis];
                    glue(&a, &block, axis, off)?
                }
            });
        }
        let d = dims_of(total);
        self.note(format!("glue {pieces:?} along axis {axis} into {d:?}"));
        acc.ok_or_else(|| Error::Unsupported("empty chain".into()))
    }
}
