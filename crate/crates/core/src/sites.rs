//! Sites: pairs of tour edges whose endpoints line up along one axis.
//!
//! For edges `a^n -> a^{n+1}` and `a^m -> a^{m+1}` of a closed tour, the pair
//! is a *well-oriented* site of magnitude `mu` when `a^n - a^{m+1}` and
//! `a^{n+1} - a^m` are both `±mu·e_i` for one axis `i`, and *non-well-oriented*
//! when `a^n - a^m` and `a^{n+1} - a^{m+1}` are. Either way the two copies of
//! the tour in layers one move apart can be merged through the site.

use std::fmt;

use serde::Serialize;

use crate::board::MoveVector;
use crate::error::{Error, Result};
use crate::tour::Tour;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SiteKind {
    /// Classical magnitude-2 site whose edges are translates (up to direction).
    ParallelPattern,
    /// Classical magnitude-2 site whose second edge is the flipped first edge.
    CrossPattern,
    AlphaSite,
    BetaSite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Orientation {
    Well,
    NonWell,
}

impl Orientation {
    pub fn toggled(self) -> Self {
        match self {
            Orientation::Well => Orientation::NonWell,
            Orientation::NonWell => Orientation::Well,
        }
    }
}

/// A site of a closed tour, identified by the tour positions of its edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Site {
    pub kind: SiteKind,
    pub orientation: Orientation,
    /// Position of `a^n`; the first edge is `a^n -> a^{n+1}`.
    pub pos_n: usize,
    /// Position of `a^m`; `pos_n < pos_m`.
    pub pos_m: usize,
    pub axis: usize,
    pub magnitude: usize,
    /// Positions `[n, n+1, m, m+1]`, wrapped.
    pub support: [usize; 4],
}

impl Site {
    /// Short tag: `wopp`, `nwopp`, `wocp`, `nwocp`, or `alpha`/`beta` with an orientation prefix.
    pub fn label(&self) -> String {
        let o = match self.orientation {
            Orientation::Well => "w",
            Orientation::NonWell => "nw",
        };
        match self.kind {
            SiteKind::ParallelPattern => format!("{o}opp"),
            SiteKind::CrossPattern => format!("{o}ocp"),
            SiteKind::AlphaSite => format!("{o}-alpha"),
            SiteKind::BetaSite => format!("{o}-beta"),
        }
    }

    pub fn is_disjoint(&self, other: &Site) -> bool {
        self.support.iter().all(|p| !other.support.contains(p))
    }

    /// Linear indices of `a^n, a^{n+1}, a^m, a^{m+1}`.
    pub(crate) fn cell_indices(&self, t: &Tour) -> [usize; 4] {
        self.support.map(|p| t.at(p))
    }

    /// Edges `(a^n, a^{n+1})` and `(a^m, a^{m+1})` as linear indices.
    pub(crate) fn edges(&self, t: &Tour) -> [(usize, usize); 2] {
        let [x1, y1, x2, y2] = self.cell_indices(t);
        [(x1, y1), (x2, y2)]
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at ({}, {}) axis {} magnitude {}",
            self.label(),
            self.pos_n,
            self.pos_m,
            self.axis,
            self.magnitude
        )
    }
}

/// Negates the smaller-magnitude component of a move.
pub fn flip_move(c: &MoveVector) -> Result<MoveVector> {
    let nz: Vec<usize> = (0..c.0.len()).filter(|&i| c.0[i] != 0).collect();
    if nz.len() != 2 || c.0[nz[0]].abs() == c.0[nz[1]].abs() {
        return Err(Error::MalformedMove(c.0.clone()));
    }
    let small = if c.0[nz[0]].abs() < c.0[nz[1]].abs() { nz[0] } else { nz[1] };
    let mut out = c.0.clone();
    out[small] = -out[small];
    Ok(MoveVector(out))
}

/// Classifies edges at positions `n` and `m` as a site of magnitude `mu`.
pub(crate) fn classify_pair(t: &Tour, n: usize, m: usize, mu: usize) -> Option<Site> {
    if n == m {
        return None;
    }
    let (n, m) = (n.min(m), n.max(m));
    let b = t.board();
    let (x1, y1) = (t.at(n), t.at(t.next_pos(n)));
    let (x2, y2) = (t.at(m), t.at(t.next_pos(m)));
    let orientation = match (b.axis_offset(x1, y2, mu), b.axis_offset(y1, x2, mu)) {
        (Some((i, _)), Some((j, _))) if i == j => Some((Orientation::Well, i)),
        _ => match (b.axis_offset(x1, x2, mu), b.axis_offset(y1, y2, mu)) {
            (Some((i, _)), Some((j, _))) if i == j => Some((Orientation::NonWell, i)),
            _ => None,
        },
    };
    let (orientation, axis) = orientation?;
    Some(make_site(t, n, m, mu, orientation, axis))
}

fn make_site(t: &Tour, n: usize, m: usize, mu: usize, orientation: Orientation, axis: usize) -> Site {
    let b = t.board();
    let mp = t.moves();
    let c = b.delta(t.at(t.next_pos(n)), t.at(n));
    let d = b.delta(t.at(t.next_pos(m)), t.at(m));
    let parallel = match orientation {
        Orientation::Well => c.iter().zip(&d).all(|(x, y)| *x == -*y),
        Orientation::NonWell => c == d,
    };
    let kind = if mu == mp.beta() {
        SiteKind::BetaSite
    } else if !mp.is_classical() {
        SiteKind::AlphaSite
    } else if parallel {
        SiteKind::ParallelPattern
    } else {
        SiteKind::CrossPattern
    };
    Site {
        kind,
        orientation,
        pos_n: n,
        pos_m: m,
        axis,
        magnitude: mu,
        support: [n, t.next_pos(n), m, t.next_pos(m)],
    }
}

/// Position of the tour edge `{a, b}` as `a^p -> a^{p+1}`, if present.
pub(crate) fn edge_position(t: &Tour, positions: &[u32], a: usize, b: usize) -> Option<usize> {
    let (pa, pb) = (positions[a], positions[b]);
    if pa == u32::MAX || pb == u32::MAX {
        return None;
    }
    let (pa, pb) = (pa as usize, pb as usize);
    if t.next_pos(pa) == pb {
        Some(pa)
    } else if t.next_pos(pb) == pa {
        Some(pb)
    } else {
        None
    }
}

/// Re-detects the site formed by two cell pairs, whatever their current orientation.
pub(crate) fn site_on_edges(
    t: &Tour,
    positions: &[u32],
    e1: (usize, usize),
    e2: (usize, usize),
    mu: usize,
) -> Option<Site> {
    let n = edge_position(t, positions, e1.0, e1.1)?;
    let m = edge_position(t, positions, e2.0, e2.1)?;
    classify_pair(t, n, m, mu)
}

/// All sites of the given magnitudes, ordered by `(pos_n, pos_m)`, then magnitude.
pub(crate) fn scan_sites(t: &Tour, positions: &[u32], magnitudes: &[usize]) -> Vec<Site> {
    let b = t.board();
    let len = t.len();
    let mut out = Vec::new();
    for n in 0..len {
        let x1 = t.at(n);
        let y1 = t.at(t.next_pos(n));
        for &mu in magnitudes {
            for axis in 0..b.rank() {
                for sign in [-1i64, 1] {
                    let Some(w) = b.shift(x1, axis, sign * mu as i64) else {
                        continue;
                    };
                    let pw = positions[w];
                    if pw == u32::MAX {
                        continue;
                    }
                    let pw = pw as usize;
                    // Well-oriented: w = a^{m+1}.
                    let m = if pw == 0 { len - 1 } else { pw - 1 };
                    if m > n && b.axis_offset(y1, t.at(m), mu).is_some_and(|(i, _)| i == axis) {
                        out.push(make_site(t, n, m, mu, Orientation::Well, axis));
                    }
                    // Non-well-oriented: w = a^m.
                    let m = pw;
                    if m > n && b.axis_offset(y1, t.at(t.next_pos(m)), mu).is_some_and(|(i, _)| i == axis) {
                        out.push(make_site(t, n, m, mu, Orientation::NonWell, axis));
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| {
        (a.pos_n, a.pos_m, std::cmp::Reverse(a.magnitude), a.orientation)
            .cmp(&(b.pos_n, b.pos_m, std::cmp::Reverse(b.magnitude), b.orientation))
    });
    out
}

fn require_closed(t: &Tour) -> Result<()> {
    if !t.is_closed() {
        return Err(Error::Unsupported("site detection needs a closed tour".into()));
    }
    Ok(())
}

fn both_magnitudes(t: &Tour) -> Vec<usize> {
    vec![t.moves().alpha(), t.moves().beta()]
}

/// Every alpha- and beta-site of a closed tour, ordered by `(pos_n, pos_m)`.
pub fn find_sites(t: &Tour) -> Result<Vec<Site>> {
    require_closed(t)?;
    Ok(scan_sites(t, &t.positions(), &both_magnitudes(t)))
}

/// Sites of magnitude alpha only; these are the ones that merge layers one `beta` apart.
pub fn find_alpha_sites(t: &Tour) -> Result<Vec<Site>> {
    require_closed(t)?;
    Ok(scan_sites(t, &t.positions(), &[t.moves().alpha()]))
}

/// First pair of sites, in list order, with pairwise distinct endpoints.
pub fn disjoint_site_pair(sites: &[Site]) -> Option<(Site, Site)> {
    for (i, s) in sites.iter().enumerate() {
        if let Some(o) = sites[i + 1..].iter().find(|o| s.is_disjoint(o)) {
            return Some((s.clone(), o.clone()));
        }
    }
    None
}

/// Whether the tour has two alpha-sites with disjoint support.
pub fn is_bisited(t: &Tour) -> Result<bool> {
    Ok(disjoint_site_pair(&find_alpha_sites(t)?).is_some())
}

/// Pairwise disjoint sites feeding a generalized lift: two alpha-sites and,
/// when `beta > 1`, two beta-sites.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SiteInventory {
    pub alpha: [Site; 2],
    pub beta: Option<[Site; 2]>,
}

impl SiteInventory {
    fn all(&self) -> impl Iterator<Item = &Site> {
        self.alpha.iter().chain(self.beta.iter().flatten())
    }

    pub fn is_pairwise_disjoint(&self) -> bool {
        let v: Vec<&Site> = self.all().collect();
        (0..v.len()).all(|i| (i + 1..v.len()).all(|j| v[i].is_disjoint(v[j])))
    }
}

/// Searches for a site inventory; bounded so that dense site lists stay cheap.
pub fn find_inventory(t: &Tour) -> Result<Option<SiteInventory>> {
    require_closed(t)?;
    let mp = t.moves();
    let positions = t.positions();
    let alphas = scan_sites(t, &positions, &[mp.alpha()]);
    if mp.beta() == 1 {
        return Ok(disjoint_site_pair(&alphas).map(|(a, b)| SiteInventory {
            alpha: [a, b],
            beta: None,
        }));
    }
    let betas = scan_sites(t, &positions, &[mp.beta()]);
    let mut budget = 1_000_000usize;
    for (i, a1) in alphas.iter().enumerate() {
        for a2 in alphas[i + 1..].iter().filter(|s| a1.is_disjoint(s)) {
            let free: Vec<&Site> = betas
                .iter()
                .filter(|s| s.is_disjoint(a1) && s.is_disjoint(a2))
                .collect();
            for (j, b1) in free.iter().enumerate() {
                for b2 in &free[j + 1..] {
                    budget = budget.saturating_sub(1);
                    if budget == 0 {
                        return Ok(None);
                    }
                    if b1.is_disjoint(b2) {
                        return Ok(Some(SiteInventory {
                            alpha: [a1.clone(), a2.clone()],
                            beta: Some([(*b1).clone(), (*b2).clone()]),
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}
