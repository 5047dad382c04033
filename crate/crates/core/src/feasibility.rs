//! Shape-only tourability: which boards carry a closed tour.
//!
//! Axes of length 1 never take part in a move, so every board is first
//! reduced by dropping them. A board that reduces to fewer than two axes is
//! reported as a thin 2D board (a `1 x n` strip).

use std::fmt;

use serde::Serialize;

use crate::board::{BoardSpec, MoveParams};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Reason {
    AllOdd,
    /// Shorter side in {1, 2, 4}.
    ThinRows2D,
    /// `3 x n` with n in {4, 6, 8}.
    Small3xN,
    MeqNeq2_3D,
    M2N3P3_3D,
    SecondLargestIs2,
    LargestIs3,
    OK,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Theorem {
    Schwenk2D,
    DeMaioMathew3D,
    MainND,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Verdict {
    pub tourable: bool,
    pub reason: Reason,
    pub theorem: Theorem,
}

impl Verdict {
    fn yes(theorem: Theorem) -> Self {
        Verdict {
            tourable: true,
            reason: Reason::OK,
            theorem,
        }
    }

    fn no(reason: Reason, theorem: Theorem) -> Self {
        Verdict {
            tourable: false,
            reason,
            theorem,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tourable {
            write!(f, "tourable ({:?})", self.theorem)
        } else {
            write!(f, "not tourable: {:?} ({:?})", self.reason, self.theorem)
        }
    }
}

pub fn classify_2d(m: usize, n: usize) -> Verdict {
    let (m, n) = (m.min(n), m.max(n));
    let t = Theorem::Schwenk2D;
    if m % 2 == 1 && n % 2 == 1 {
        Verdict::no(Reason::AllOdd, t)
    } else if matches!(m, 1 | 2 | 4) {
        Verdict::no(Reason::ThinRows2D, t)
    } else if m == 3 && matches!(n, 4 | 6 | 8) {
        Verdict::no(Reason::Small3xN, t)
    } else {
        Verdict::yes(t)
    }
}

pub fn classify_3d(m: usize, n: usize, p: usize) -> Result<Verdict> {
    let mut sides = [m, n, p];
    if sides.contains(&0) {
        return Err(Error::InvalidBoard(format!("side of length 0 in {sides:?}")));
    }
    sides.sort_unstable();
    if sides[0] == 1 {
        return Ok(classify_2d(sides[1], sides[2]));
    }
    let [m, n, p] = sides;
    let t = Theorem::DeMaioMathew3D;
    Ok(if sides.iter().all(|s| s % 2 == 1) {
        Verdict::no(Reason::AllOdd, t)
    } else if m == 2 && n == 2 {
        Verdict::no(Reason::MeqNeq2_3D, t)
    } else if m == 2 && n == 3 && p == 3 {
        Verdict::no(Reason::M2N3P3_3D, t)
    } else {
        Verdict::yes(t)
    })
}

/// Side lengths with unit axes removed, sorted ascending.
pub fn reduced_dims(board: &BoardSpec) -> Vec<usize> {
    let mut dims: Vec<usize> = board.dims().iter().copied().filter(|&d| d > 1).collect();
    dims.sort_unstable();
    dims
}

pub fn classify_nd(board: &BoardSpec) -> Verdict {
    let dims = reduced_dims(board);
    match dims.len() {
        0 | 1 => Verdict::no(Reason::ThinRows2D, Theorem::Schwenk2D),
        2 => classify_2d(dims[0], dims[1]),
        3 => classify_3d(dims[0], dims[1], dims[2]).expect("reduced sides are positive"),
        k => {
            let t = Theorem::MainND;
            if dims.iter().all(|d| d % 2 == 1) {
                Verdict::no(Reason::AllOdd, t)
            } else if dims[k - 2] == 2 {
                Verdict::no(Reason::SecondLargestIs2, t)
            } else if dims[k - 1] == 3 {
                Verdict::no(Reason::LargestIs3, t)
            } else {
                Verdict::yes(t)
            }
        }
    }
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Closed-form connectivity of the `(alpha, beta)` move graph on an `m x n` board.
///
/// Connected exactly when `gcd(alpha+beta, alpha-beta) = 1`, the longer side
/// is at least `2 alpha` and the shorter side at least `alpha + beta`.
pub fn knuth_connectivity_2d(m: usize, n: usize, mp: MoveParams) -> bool {
    let (short, long) = (m.min(n), m.max(n));
    let (a, b) = (mp.alpha(), mp.beta());
    gcd(a + b, a - b) == 1 && long >= 2 * a && short >= a + b
}

/// Necessary condition for any `(alpha, beta)` tour: the two steps are coprime.
pub fn coprime_necessity(mp: MoveParams) -> bool {
    gcd(mp.alpha(), mp.beta()) == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nd(d: &[usize]) -> Verdict {
        classify_nd(&BoardSpec::new(d.to_vec()).unwrap())
    }

    #[test]
    fn schwenk_cases() {
        assert_eq!(classify_2d(3, 8).reason, Reason::Small3xN);
        assert_eq!(classify_2d(4, 9).reason, Reason::ThinRows2D);
        assert!(classify_2d(6, 6).tourable);
        assert_eq!(classify_2d(9, 4).reason, Reason::ThinRows2D);
        assert_eq!(classify_2d(5, 7).reason, Reason::AllOdd);
        assert!(classify_2d(3, 10).tourable);
        assert!(!classify_2d(1, 1).tourable);
    }

    #[test]
    fn demaio_mathew_cases() {
        assert_eq!(classify_3d(2, 3, 3).unwrap().reason, Reason::M2N3P3_3D);
        assert_eq!(classify_3d(2, 2, 7).unwrap().reason, Reason::MeqNeq2_3D);
        assert!(classify_3d(2, 3, 4).unwrap().tourable);
        assert!(classify_3d(4, 3, 2).unwrap().tourable);
        assert_eq!(classify_3d(1, 3, 8).unwrap(), classify_2d(3, 8));
        assert!(classify_3d(0, 3, 8).is_err());
    }

    #[test]
    fn higher_dimensional_cases() {
        assert_eq!(nd(&[3, 3, 5, 7]).reason, Reason::AllOdd);
        assert_eq!(nd(&[2, 2, 2, 5]).reason, Reason::SecondLargestIs2);
        assert_eq!(nd(&[2, 3, 3, 3]).reason, Reason::LargestIs3);
        assert!(nd(&[2, 3, 4, 5]).tourable);
        assert_eq!(nd(&[5, 4, 3, 2]).theorem, Theorem::MainND);
    }

    #[test]
    fn unit_axes_reduce() {
        assert_eq!(nd(&[1, 6, 6]), classify_2d(6, 6));
        assert_eq!(nd(&[1, 1, 2, 3, 4]), nd(&[2, 3, 4]));
        assert_eq!(nd(&[1]).reason, Reason::ThinRows2D);
        assert_eq!(nd(&[7]).reason, Reason::ThinRows2D);
        assert!(!nd(&[1, 1]).tourable);
    }

    #[test]
    fn knuth_examples() {
        let mp = MoveParams::new(3, 2).unwrap();
        assert!(knuth_connectivity_2d(6, 5, mp));
        assert!(!knuth_connectivity_2d(5, 5, mp));
        assert!(!knuth_connectivity_2d(10, 10, MoveParams::new(4, 2).unwrap()));
    }

    #[test]
    fn coprimality() {
        assert!(coprime_necessity(MoveParams::CLASSICAL));
        assert!(!coprime_necessity(MoveParams::new(4, 2).unwrap()));
        assert!(coprime_necessity(MoveParams::new(3, 2).unwrap()));
    }
}
