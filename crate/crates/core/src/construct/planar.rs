//! 2D boards: a seeded base with matching residues mod 4, grown four rows
//! or columns at a time.

use crate::error::{Error, Result};
use crate::feasibility::classify_2d;
use crate::tour::Tour;

use super::blocks::BlockTag;
use super::seeded::extend_seeded;
use super::Constructor;

/// Seeded closed bases; each also serves transposed.
const CLOSED_BASES: [(usize, usize); 9] = [(3, 10), (3, 12), (5, 6), (5, 8), (6, 6), (6, 7), (6, 8), (7, 8), (8, 8)];
/// Seeded open bases from `(n,m)` to `(n,m-2)`.
const OPEN_BASES: [(usize, usize); 4] = [(5, 5), (5, 7), (7, 5), (7, 7)];

fn pick(bases: &[(usize, usize)], m: usize, n: usize, transposes: bool) -> Option<(usize, usize)> {
    let fits = |(r, c): (usize, usize)| r <= m && c <= n && r % 4 == m % 4 && c % 4 == n % 4;
    bases
        .iter()
        .flat_map(|&(r, c)| if transposes { vec![(r, c), (c, r)] } else { vec![(r, c)] })
        .find(|&b| fits(b))
}

impl Constructor<'_> {
    /// Seeded, bi-sited closed tour on `m x n`.
    pub fn construct_2d(&mut self, m: usize, n: usize) -> Result<Tour> {
        let verdict = classify_2d(m, n);
        if !verdict.tourable {
            return Err(Error::NotTourable(verdict));
        }
        let (r, c) = pick(&CLOSED_BASES, m, n, true)
            .ok_or_else(|| Error::Block(format!("no seeded base matches {m} x {n}")))?;
        let base = self.lib.tour(&[r, c], BlockTag::SeededClosed)?.clone();
        self.note(format!("seeded base {r}x{c}"));
        self.grow(base, m, n)
    }

    /// Seeded open tour on `n x m` (both odd, at least 5) from `(n,m)` to `(n,m-2)`.
    pub fn open_seeded(&mut self, n: usize, m: usize) -> Result<Tour> {
        if n < 5 || m < 5 || n % 2 == 0 || m % 2 == 0 {
            return Err(Error::Unsupported(format!("open seeded tours need odd sides >= 5, got {n} x {m}")));
        }
        let (r, c) = pick(&OPEN_BASES, n, m, false).expect("odd residues are covered");
        let base = self.lib.tour(&[r, c], BlockTag::SeededOpen)?.clone();
        self.note(format!("open seeded base {r}x{c}"));
        self.grow(base, n, m)
    }

    fn grow(&mut self, mut t: Tour, m: usize, n: usize) -> Result<Tour> {
        while t.board().dims()[0] < m {
            let e = self.extender(t.board().dims()[1])?;
            t = extend_seeded(&t, &e, 0)?;
        }
        while t.board().dims()[1] < n {
            let e = self.extender(t.board().dims()[0])?;
            t = extend_seeded(&t, &e, 1)?;
        }
        if t.board().dims() != [m, n] {
            return Err(Error::Block(format!("growth overshot to {}", t.board())));
        }
        self.note(format!("extended to {m}x{n}"));
        Ok(t)
    }
}
