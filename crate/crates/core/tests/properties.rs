use std::collections::HashSet;

use proptest::prelude::*;

use ktour::board::{color, is_edge, move_set};
use ktour::construct::{glue, lift, lift_detailed, lift_generalized, Constructor};
use ktour::oracle::{solve, Outcome, SearchBudget, SearchConstraints};
use ktour::{export_json, flip_move, import_json, BoardSpec, Cell, MoveParams, MoveVector, Permutation, Tour};

fn tourable_2d() -> impl Strategy<Value = (usize, usize)> {
    (3usize..=14, 3usize..=14).prop_filter("tourable", |&(m, n)| ktour::classify_2d(m, n).tourable)
}

fn built(m: usize, n: usize) -> Tour {
    Constructor::default().construct_2d(m, n).unwrap()
}

fn edge_set(t: &Tour) -> HashSet<(Cell, Cell)> {
    t.edges()
        .map(|(a, b)| {
            let (a, b) = (t.board().cell_at(a), t.board().cell_at(b));
            if a < b { (a, b) } else { (b, a) }
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn knight_edges_join_opposite_colours(m in 1usize..=7, n in 1usize..=7, p in 1usize..=4) {
        let b = BoardSpec::new(vec![m, n, p]).unwrap();
        for a in b.cells() {
            for c in ktour::neighbors(&b, &a, MoveParams::CLASSICAL).unwrap() {
                prop_assert_ne!(color(&a), color(&c));
                prop_assert!(is_edge(&b, &a, &c, MoveParams::CLASSICAL).unwrap());
            }
        }
    }

    #[test]
    fn flip_is_an_involution(k in 2usize..=5, alpha in 2usize..=4, pick in 0usize..1000) {
        let mp = MoveParams::new(alpha, 1).unwrap();
        let moves = move_set(k, mp).unwrap();
        let c = &moves[pick % moves.len()];
        let f = flip_move(c).unwrap();
        prop_assert!(moves.contains(&f));
        prop_assert_eq!(&flip_move(&f).unwrap(), c);
        prop_assert!(flip_move(&MoveVector(vec![1, 1])).is_err());
    }

    #[test]
    fn canonical_form_is_invariant((m, n) in tourable_2d(), shift in 0usize..400, rev in any::<bool>()) {
        let t = built(m, n);
        let mut u = t.rotated(shift);
        if rev {
            u = u.reversed();
        }
        prop_assert!(t.same_cycle(&u));
        let (ct, cu) = (t.canonical(), u.canonical());
        prop_assert_eq!(ct.order(), cu.order());
    }

    #[test]
    fn axis_permutation_keeps_tours((m, n) in tourable_2d(), k in 2usize..=4) {
        let t = lift(&built(m, n), k).unwrap();
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        let u = t.permute_axes(&p);
        prop_assert!(u.verify().is_ok());
        prop_assert_eq!(u.board().dims(), &[k, m, n][..]);
        prop_assert!(u.permute_axes(&p.inverse()).same_cycle(&t));
    }

    #[test]
    fn lift_layers_and_designated_sites((m, n) in tourable_2d(), k in 2usize..=6) {
        let t = built(m, n);
        let l = lift_detailed(&t, k).unwrap();
        prop_assert_eq!(l.tour.len(), k * t.len());
        prop_assert!(l.tour.verify().is_ok());
        let b = l.tour.board();
        for layer in 0..k {
            let cells: HashSet<Vec<usize>> = l.tour.cells().into_iter()
                .filter(|c| c.0[2] == layer + 1)
                .map(|c| c.0[..2].to_vec())
                .collect();
            prop_assert_eq!(cells.len(), t.len());
        }
        let layers: Vec<usize> = l.sites.iter().map(|s| s.1).collect();
        prop_assert_eq!(layers, vec![0, k - 1]);
        for (site, layer) in &l.sites {
            for p in site.support {
                prop_assert_eq!(b.cell_at(l.tour.order()[p] as usize).0[2], layer + 1);
            }
        }
        prop_assert!(l.sites[0].0.is_disjoint(&l.sites[1].0));
    }

    #[test]
    fn generalized_lift_with_classical_moves_is_the_plain_lift((m, n) in tourable_2d(), k in 2usize..=5) {
        let t = built(m, n);
        prop_assert!(lift(&t, k).unwrap().same_cycle(&lift_generalized(&t, k).unwrap()));
    }

    #[test]
    fn glue_swaps_exactly_two_edges((m, n) in tourable_2d(), axis in 0usize..2) {
        let t = built(m, n);
        let off = t.board().dims()[axis];
        let face = t.board().dims()[1 - axis];
        let g = match glue(&t, &t, axis, off) {
            Ok(g) => g,
            // Narrow faces may offer no crossing pair.
            Err(ktour::Error::NotGluable(_)) if face < 5 => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert!(g.verify().is_ok());
        let mut offs = vec![0, 0];
        let a = t.translated(g.board(), &offs).unwrap();
        offs[axis] = off;
        let b = t.translated(g.board(), &offs).unwrap();
        let before: HashSet<_> = edge_set(&a).union(&edge_set(&b)).cloned().collect();
        let after = edge_set(&g);
        prop_assert_eq!(before.difference(&after).count(), 2);
        prop_assert_eq!(after.difference(&before).count(), 2);
    }

    #[test]
    fn json_round_trip((m, n) in tourable_2d(), k in 1usize..=3) {
        let t = if k == 1 { built(m, n) } else { lift(&built(m, n), k).unwrap() };
        let back = import_json(&export_json(&t, Default::default()).unwrap()).unwrap();
        prop_assert!(back.same_cycle(&t));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_answers_are_sound(m in 3usize..=6, n in 3usize..=6, seed in any::<u64>(), closed in any::<bool>()) {
        let b = BoardSpec::new(vec![m, n]).unwrap();
        let c = if closed { SearchConstraints::closed() } else { SearchConstraints::open() };
        let budget = SearchBudget::default().with_seed(seed);
        match solve(&b, MoveParams::CLASSICAL, &c, &budget).unwrap() {
            Outcome::Found(t) => {
                prop_assert!(t.verify().is_ok());
                prop_assert!(c.accepts(&t));
                if closed {
                    prop_assert!(ktour::classify_2d(m, n).tourable);
                }
            }
            Outcome::ProvedNone(_) => {
                if closed {
                    prop_assert!(!ktour::classify_2d(m, n).tourable);
                }
            }
            Outcome::Exhausted(s) => prop_assert!(false, "exhausted at desk scale: {:?}", s),
        }
        let first = solve(&b, MoveParams::CLASSICAL, &c, &budget).unwrap();
        let again = solve(&b, MoveParams::CLASSICAL, &c, &budget).unwrap();
        prop_assert_eq!(first.tour().map(|t| t.order().to_vec()), again.tour().map(|t| t.order().to_vec()));
    }
}
