//! Gaining a dimension: `k` stacked copies of a tour merged through sites.
//!
//! Every copy starts as its own cycle. Merging two copies through a site
//! deletes one site edge in each copy and adds the two cross edges, so the
//! copies stay a single cycle as long as the merges form a tree over the
//! layers and no layer loses the same edge twice.

use serde::Serialize;

use crate::board::MoveParams;
use crate::error::{Error, Result};
use crate::feasibility::gcd;
use crate::sites::{disjoint_site_pair, find_inventory, scan_sites, site_on_edges, Orientation, Site, SiteInventory};
use crate::tour::Tour;

/// A lifted tour together with the sites left untouched by the merges.
#[derive(Clone, Debug)]
pub struct Lifted {
    pub tour: Tour,
    /// Two disjoint alpha-sites of the output and the layers (0-based) holding them.
    pub sites: [(Site, usize); 2],
}

/// Per-node neighbour pairs of the `k`-layer stack; node id = `cell * k + layer`.
struct Stack<'t> {
    base: &'t Tour,
    k: usize,
    nbr: Vec<[u32; 2]>,
}

impl<'t> Stack<'t> {
    fn new(base: &'t Tour, k: usize) -> Result<Self> {
        let n = base.len();
        let total = n
            .checked_mul(k)
            .filter(|&t| t <= u32::MAX as usize)
            .ok_or_else(|| Error::InvalidBoard(format!("{} x {k} is too large", base.board())))?;
        let mut nbr = vec![[0u32; 2]; total];
        for p in 0..n {
            let prev = base.at(if p == 0 { n - 1 } else { p - 1 });
            let cur = base.at(p);
            let next = base.at(base.next_pos(p));
            for layer in 0..k {
                nbr[cur * k + layer] = [(prev * k + layer) as u32, (next * k + layer) as u32];
            }
        }
        Ok(Stack { base, k, nbr })
    }

    fn node(&self, cell: usize, layer: usize) -> u32 {
        (cell * self.k + layer) as u32
    }

    fn relink(&mut self, node: u32, old: u32, new: u32) -> Result<()> {
        let slot = self.nbr[node as usize]
            .iter()
            .position(|&x| x == old)
            .ok_or_else(|| Error::MissingSites("site edge already consumed".into()))?;
        self.nbr[node as usize][slot] = new;
        Ok(())
    }

    /// Merges layer `la` (first site edge) with layer `lb` (second site edge).
    fn join(&mut self, site: &Site, la: usize, lb: usize) -> Result<()> {
        let [x1, y1, x2, y2] = site.cell_indices(self.base);
        let (ax, ay) = (self.node(x1, la), self.node(y1, la));
        let (bx, by) = (self.node(x2, lb), self.node(y2, lb));
        let (px, py) = match site.orientation {
            Orientation::Well => (by, bx),
            Orientation::NonWell => (bx, by),
        };
        // a^n meets px, a^{n+1} meets py.
        self.relink(ax, ay, px)?;
        self.relink(ay, ax, py)?;
        self.relink(bx, by, if px == bx { ax } else { ay })?;
        self.relink(by, bx, if py == by { ay } else { ax })?;
        Ok(())
    }

    fn into_tour(self, start: u32) -> Result<Tour> {
        let total = self.nbr.len();
        let board = self.base.board().with_layers(self.k)?;
        let first = self.nbr[start as usize];
        // Leave through the cross edge when the start has one.
        let same_layer = |a: u32, b: u32| a as usize % self.k == b as usize % self.k;
        let mut cur = if same_layer(start, first[0]) { first[1] } else { first[0] };
        let mut prev = start;
        let mut order = Vec::with_capacity(total);
        order.push(start);
        while cur != start {
            if order.len() == total {
                return Err(Error::MissingSites("merged layers do not form one cycle".into()));
            }
            order.push(cur);
            let [a, b] = self.nbr[cur as usize];
            let next = if a == prev { b } else { a };
            prev = cur;
            cur = next;
        }
        if order.len() != total {
            return Err(Error::MissingSites("merged layers do not form one cycle".into()));
        }
        Ok(Tour::from_raw(board, self.base.moves(), order, true))
    }
}

/// Finds the output copy of `site` from layer `layer`.
fn redetect(base: &Tour, out: &Tour, positions: &[u32], site: &Site, layer: usize, k: usize) -> Result<Site> {
    let [(x1, y1), (x2, y2)] = site.edges(base);
    let n = |c: usize| c * k + layer;
    site_on_edges(out, positions, (n(x1), n(y1)), (n(x2), n(y2)), site.magnitude)
        .ok_or_else(|| Error::MissingSites(format!("free site lost in layer {layer}")))
}

/// Two disjoint alpha-sites, first in canonical order.
pub fn bisite_pair(t: &Tour) -> Result<(Site, Site)> {
    if !t.is_closed() {
        return Err(Error::Unsupported("lifting needs a closed tour".into()));
    }
    let sites = scan_sites(t, &t.positions(), &[t.moves().alpha()]);
    disjoint_site_pair(&sites).ok_or_else(|| Error::MissingSites("tour is not bi-sited".into()))
}

/// Lifts a bi-sited closed tour on `dims` to one on `(dims, k)`.
pub fn lift(t: &Tour, k: usize) -> Result<Tour> {
    Ok(lift_detailed(t, k)?.tour)
}

/// [`lift`] returning the free sites of the output as well.
pub fn lift_detailed(t: &Tour, k: usize) -> Result<Lifted> {
    if k < 2 {
        return Err(Error::InvalidLayers { min: 2, got: k });
    }
    let (s1, s2) = bisite_pair(t)?;
    lift_with_sites(t, &s1, &s2, k)
}

/// Zig-zag lift through the given disjoint alpha-sites.
///
/// The merge between layers `j` and `j+1` uses `s1` for even `j` and `s2`
/// for odd `j`. The free sites are `s2` in layers `0` and `k-1` when `k` is
/// even, and `s2` in layer `0` with `s1` in layer `k-1` when `k` is odd.
pub fn lift_with_sites(t: &Tour, s1: &Site, s2: &Site, k: usize) -> Result<Lifted> {
    if k < 2 {
        return Err(Error::InvalidLayers { min: 2, got: k });
    }
    if t.moves().beta() != 1 {
        return Err(Error::Unsupported(
            "the zig-zag lift joins adjacent layers; use lift_generalized".into(),
        ));
    }
    if !s1.is_disjoint(s2) {
        return Err(Error::MissingSites("sites overlap".into()));
    }
    let alpha = t.moves().alpha();
    if s1.magnitude != alpha || s2.magnitude != alpha {
        return Err(Error::MissingSites("lift needs alpha-sites".into()));
    }
    let mut stack = Stack::new(t, k)?;
    for j in 0..k - 1 {
        stack.join(if j % 2 == 0 { s1 } else { s2 }, j, j + 1)?;
    }
    let start = stack.node(t.at(s1.pos_n), 0);
    let out = stack.into_tour(start)?;
    let positions = out.positions();
    let last = if k % 2 == 0 { s2 } else { s1 };
    let a = redetect(t, &out, &positions, s2, 0, k)?;
    let b = redetect(t, &out, &positions, last, k - 1, k)?;
    Ok(Lifted {
        tour: out,
        sites: [(a, 0), (b, k - 1)],
    })
}

/// Layers (1-based) where beta-sites merge residue chains: `d_i = i·alpha mod beta`
/// with representatives in `[1, beta]`, for `i = 1..=beta`. Only the first
/// `beta - 1` entries are used; all of them stay below `beta`, so `k >= alpha + beta - 1`
/// layers suffice.
pub fn residue_schedule(mp: MoveParams) -> Vec<usize> {
    let (a, b) = (mp.alpha(), mp.beta());
    (1..=b).map(|i| (i * a - 1) % b + 1).collect()
}

/// Output of [`lift_generalized`].
#[derive(Clone, Debug, Serialize)]
pub struct LiftedGeneral {
    #[serde(skip)]
    pub tour: Tour,
    /// A fresh pairwise disjoint inventory of the output.
    pub inventory: SiteInventory,
}

/// Lifts a closed `(alpha, beta)`-tour to `k >= alpha + beta - 1` layers,
/// finding the site inventory itself.
pub fn lift_generalized(t: &Tour, k: usize) -> Result<Tour> {
    let inv = find_inventory(t)?.ok_or_else(|| {
        Error::MissingSites("need two alpha-sites and two beta-sites, pairwise disjoint".into())
    })?;
    Ok(lift_generalized_with(t, &inv, k)?.tour)
}

/// Generalized lift: layers in each residue class mod `beta` form a chain
/// merged by alternating alpha-sites; the chains are merged by the first
/// beta-site at the layers of [`residue_schedule`].
pub fn lift_generalized_with(t: &Tour, inv: &SiteInventory, k: usize) -> Result<LiftedGeneral> {
    let mp = t.moves();
    let (alpha, beta) = (mp.alpha(), mp.beta());
    if gcd(alpha, beta) != 1 {
        return Err(Error::NotCoprime(alpha, beta));
    }
    let min = (alpha + beta - 1).max(2);
    if k < min {
        return Err(Error::InvalidLayers { min, got: k });
    }
    if !inv.is_pairwise_disjoint() || inv.alpha.iter().any(|s| s.magnitude != alpha) {
        return Err(Error::MissingSites("inventory is not a disjoint set of alpha-sites".into()));
    }
    let betas = match (&inv.beta, beta) {
        (_, 1) => None,
        (Some(b), _) if b.iter().all(|s| s.magnitude == beta) => Some(b),
        _ => return Err(Error::MissingSites("two beta-sites are required".into())),
    };
    let [a1, a2] = &inv.alpha;
    let mut stack = Stack::new(t, k)?;
    for r in 0..beta.min(k) {
        let chain: Vec<usize> = (r..k).step_by(beta).collect();
        for (i, w) in chain.windows(2).enumerate() {
            stack.join(if i % 2 == 0 { a1 } else { a2 }, w[0], w[1])?;
        }
    }
    if let Some([b1, _]) = betas {
        for d in residue_schedule(mp).into_iter().take(beta - 1) {
            stack.join(b1, d - 1, d - 1 + alpha)?;
        }
    }
    let start = stack.node(t.at(a1.pos_n), 0);
    let out = stack.into_tour(start)?;
    let positions = out.positions();

    // Class 0 chain: layers 0, beta, 2·beta, ...
    let len0 = (k - 1) / beta + 1;
    let last0 = (len0 - 1) * beta;
    let (first_free, last_free) = if len0 == 1 {
        (a1, a2)
    } else if (len0 - 2) % 2 == 0 {
        (a2, a2)
    } else {
        (a2, a1)
    };
    let alpha_out = [
        redetect(t, &out, &positions, first_free, 0, k)?,
        redetect(t, &out, &positions, last_free, last0, k)?,
    ];
    let beta_out = match betas {
        Some([_, b2]) => Some([
            redetect(t, &out, &positions, b2, 0, k)?,
            redetect(t, &out, &positions, b2, k - 1, k)?,
        ]),
        None => None,
    };
    Ok(LiftedGeneral {
        tour: out,
        inventory: SiteInventory {
            alpha: alpha_out,
            beta: beta_out,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sites::is_bisited;
    use crate::tour::fixtures::six_by_six;

    #[test]
    fn six_by_six_by_two() {
        let t = six_by_six();
        let out = lift(&t, 2).unwrap();
        assert_eq!(out.len(), 72);
        assert_eq!(out.board().dims(), &[6, 6, 2]);
        assert!(out.verify().is_ok());
        assert!(is_bisited(&out).unwrap());
    }

    #[test]
    fn layer_counts() {
        let t = six_by_six();
        for k in 2..=6 {
            let l = lift_detailed(&t, k).unwrap();
            assert_eq!(l.tour.len(), 36 * k);
            assert!(l.tour.verify().is_ok());
            assert!(l.sites[0].0.is_disjoint(&l.sites[1].0));
        }
        assert!(matches!(lift(&t, 1), Err(Error::InvalidLayers { .. })));
    }

    #[test]
    fn schedules() {
        assert_eq!(residue_schedule(MoveParams::new(3, 2).unwrap()), vec![1, 2]);
        assert_eq!(residue_schedule(MoveParams::CLASSICAL), vec![1]);
        assert_eq!(residue_schedule(MoveParams::new(5, 3).unwrap()), vec![2, 1, 3]);
    }

    #[test]
    fn generalized_matches_classical() {
        let t = six_by_six();
        for k in 2..=5 {
            let a = lift(&t, k).unwrap();
            let b = lift_generalized(&t, k).unwrap();
            assert!(a.same_cycle(&b));
        }
    }
}
