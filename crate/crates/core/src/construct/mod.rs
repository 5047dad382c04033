//! Tour construction: seeded growth in 2D, block stacking in 3D and layer
//! lifting beyond.

pub mod blocks;
pub mod glue;
pub mod lift;
pub mod seeded;

mod planar;
mod solid;

use std::collections::HashMap;

use crate::board::{BoardSpec, Permutation};
use crate::error::{Error, Result};
use crate::feasibility::{classify_nd, reduced_dims};
use crate::sites::Site;
use crate::tour::Tour;

pub use blocks::{BlockLibrary, BlockTag};
pub use glue::{glue, glue_protected};
pub use lift::{lift, lift_detailed, lift_generalized, lift_generalized_with, lift_with_sites, residue_schedule, Lifted};
pub use seeded::{build_extender, extend_seeded, is_seeded, seed_edges, stack_open_pair, Extender, SeededTour};

/// A built tour with two disjoint alpha-sites when they are already known.
#[derive(Clone, Debug)]
struct Built {
    tour: Tour,
    sites: Option<[Site; 2]>,
}

/// Builds tours and memoizes intermediate results by sorted side lengths.
pub struct Constructor<'l> {
    lib: &'l BlockLibrary,
    memo: HashMap<Vec<usize>, Built>,
    extenders: HashMap<usize, Extender>,
    trace: Vec<String>,
}

impl Default for Constructor<'static> {
    fn default() -> Self {
        Constructor::new(BlockLibrary::global())
    }
}

impl<'l> Constructor<'l> {
    pub fn new(lib: &'l BlockLibrary) -> Self {
        Constructor {
            lib,
            memo: HashMap::new(),
            extenders: HashMap::new(),
            trace: Vec::new(),
        }
    }

    pub fn library(&self) -> &'l BlockLibrary {
        self.lib
    }

    /// Steps taken so far, in order.
    pub fn trace(&self) -> &[String] {
        &self.trace
    }

    fn note(&mut self, step: String) {
        self.trace.push(step);
    }

    /// Closed tour on any tourable board.
    pub fn construct(&mut self, board: &BoardSpec) -> Result<Tour> {
        let verdict = classify_nd(board);
        if !verdict.tourable {
            return Err(Error::NotTourable(verdict));
        }
        let dims = board.dims();
        let reduced: Vec<usize> = dims.iter().copied().filter(|&d| d > 1).collect();
        let built = self.sorted(&reduced_dims(board))?;
        let t = arrange(&built.tour, &reduced)?;
        // Unit axes leave every linear index unchanged.
        let (_, mp, order, closed) = t.into_parts();
        let out = Tour::from_raw(board.clone(), mp, order, closed);
        out.verify().map_err(Error::Verification)?;
        Ok(out)
    }

    /// Tour on the board with ascending sides `s`, in whatever axis order its construction produced.
    fn sorted(&mut self, s: &[usize]) -> Result<Built> {
        if let Some(b) = self.memo.get(s) {
            return Ok(b.clone());
        }
        let built = match s.len() {
            2 => Built {
                tour: self.construct_2d(s[0], s[1])?,
                sites: None,
            },
            3 => Built {
                tour: self.construct_3d(s[0], s[1], s[2])?,
                sites: None,
            },
            _ => self.lifted(s)?,
        };
        self.memo.insert(s.to_vec(), built.clone());
        Ok(built)
    }

    /// Drops one side, builds the rest, and lifts by the dropped side.
    fn lifted(&mut self, s: &[usize]) -> Result<Built> {
        let evens = s.iter().filter(|&&d| d % 2 == 0).count();
        // With a single even side the rest must keep it, so an odd side goes.
        let drop = if evens == 1 {
            s.iter().position(|&d| d % 2 == 1).expect("an odd side exists")
        } else {
            0
        };
        let mut rest = s.to_vec();
        let k = rest.remove(drop);
        let inner = self.sorted(&rest)?;
        let (s1, s2) = match inner.sites {
            Some([a, b]) => (a, b),
            None => lift::bisite_pair(&inner.tour)?,
        };
        let lifted = lift_with_sites(&inner.tour, &s1, &s2, k)?;
        self.note(format!("lift {} by {k}", inner.tour.board()));
        let [(a, _), (b, _)] = lifted.sites;
        Ok(Built {
            tour: lifted.tour,
            sites: Some([a, b]),
        })
    }

    fn extender(&mut self, m: usize) -> Result<Extender> {
        if let Some(e) = self.extenders.get(&m) {
            return Ok(e.clone());
        }
        let lib = self.lib;
        let e = build_extender(m, &|w| Ok(lib.tour(&[4, w], BlockTag::Extender)?.clone()))?;
        self.extenders.insert(m, e.clone());
        Ok(e)
    }
}

/// Closed tour on `board` with a fresh [`Constructor`] over the global block library.
pub fn construct_nd(board: &BoardSpec) -> Result<Tour> {
    Constructor::default().construct(board)
}

pub fn construct_2d(m: usize, n: usize) -> Result<Tour> {
    Constructor::default().construct_2d(m, n)
}

pub fn construct_3d(m: usize, n: usize, p: usize) -> Result<Tour> {
    Constructor::default().construct_3d(m, n, p)
}

/// Reorders the axes of `t` so that its sides read `target`.
pub(crate) fn arrange(t: &Tour, target: &[usize]) -> Result<Tour> {
    let have = t.board().dims();
    if have == target {
        return Ok(t.clone());
    }
    let mut used = vec![false; have.len()];
    let mut map = Vec::with_capacity(target.len());
    for &d in target {
        let i = (0..have.len())
            .find(|&i| !used[i] && have[i] == d)
            .ok_or_else(|| Error::InvalidBoard(format!("{} cannot be arranged as {target:?}", t.board())))?;
        used[i] = true;
        map.push(i);
    }
    if map.len() != have.len() {
        return Err(Error::Shape {
            expected: have.len(),
            found: target.len(),
        });
    }
    Ok(t.permute_axes(&Permutation::new(map)?))
}
