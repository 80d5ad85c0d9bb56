use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use qstr::calculi;
use qstr::network::{enforce_pc, enumerate_scenarios, is_path_consistent, random_qcn, realize_solution, Qcn, Scenario};
use qstr::sparse::{enforce_ppc, triangulate, verify_chordal, ConstraintGraph, Heuristic};
use qstr::subalgebra::{closure, named_subalgebra};
use qstr::{Calculus, RelationSet};

struct Pools {
    cases: Vec<(Arc<Calculus>, RelationSet)>,
}

fn pools() -> &'static Pools {
    static P: OnceLock<Pools> = OnceLock::new();
    P.get_or_init(|| {
        let mut cases = Vec::new();
        for (calc, names) in [
            (calculi::pa(), &["ALL", "CPA", "SPA"][..]),
            (calculi::ia(), &["ALL", "CIA", "SIA"][..]),
            (calculi::rcc5(), &["ALL", "D514"][..]),
            (calculi::rcc8(), &["ALL", "D841"][..]),
            (calculi::cra(), &["BHAT", "MAX0"][..]),
        ] {
            for name in names {
                cases.push((calc.clone(), named_subalgebra(&calc, name).unwrap()));
            }
        }
        Pools { cases }
    })
}

fn network() -> impl Strategy<Value = Qcn> {
    (0..pools().cases.len(), 2usize..8, 0.0f64..=1.0, any::<u64>()).prop_map(|(k, n, d, seed)| {
        let (calc, pool) = &pools().cases[k];
        random_qcn(calc, n, d, pool, seed).unwrap()
    })
}

fn permute(q: &Qcn, perm: &[usize]) -> Qcn {
    let mut p = Qcn::new(q.calculus().clone(), q.n());
    for (i, j) in q.pairs() {
        p.set(perm[i], perm[j], q.get(i, j)).unwrap();
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pc_refines_and_is_idempotent(q in network()) {
        let out = enforce_pc(&q);
        if let Some(r) = out.refined {
            prop_assert!(r.refines(&q));
            prop_assert!(is_path_consistent(&r));
            prop_assert_eq!(enforce_pc(&r).refined, Some(r));
        }
    }

    #[test]
    fn pc_result_ignores_variable_order(q in network(), rot in 0usize..8) {
        let n = q.n();
        let perm: Vec<usize> = (0..n).map(|i| (i + rot) % n).rev().collect();
        let a = enforce_pc(&q).refined;
        let b = enforce_pc(&permute(&q, &perm)).refined;
        match (a, b) {
            (None, None) => {}
            (Some(a), Some(b)) => prop_assert_eq!(permute(&a, &perm), b),
            _ => prop_assert!(false, "verdict depends on variable order"),
        }
    }

    #[test]
    fn pc_keeps_entries_in_their_subalgebra(k in 0..pools().cases.len(), n in 2usize..9, seed in any::<u64>()) {
        let (calc, pool) = &pools().cases[k];
        let q = random_qcn(calc, n, 0.7, pool, seed).unwrap();
        if let Some(r) = enforce_pc(&q).refined {
            prop_assert!(r.entries_in(pool));
        }
    }

    #[test]
    fn ppc_on_complete_cover_is_pc(q in network()) {
        let complete = ConstraintGraph::from_edges(q.n(), q.pairs());
        let cs = triangulate(&complete, Heuristic::MinDegree);
        prop_assert_eq!(cs.fill_edges, 0);
        prop_assert_eq!(enforce_ppc(&q, &cs).unwrap().refined, enforce_pc(&q).refined);
    }

    #[test]
    fn triangulations_are_chordal(n in 1usize..30, edges in proptest::collection::vec((0usize..30, 0usize..30), 0..80), md in any::<bool>()) {
        let g = ConstraintGraph::from_edges(n, edges.into_iter().filter(|&(a, b)| a < n && b < n && a != b));
        let h = if md { Heuristic::MinDegree } else { Heuristic::MinFill };
        let cs = triangulate(&g, h);
        prop_assert!(verify_chordal(&cs.graph, &cs.peo));
        prop_assert_eq!(cs.graph.edge_count(), g.edge_count() + cs.fill_edges);
        for (a, b) in g.edges() {
            prop_assert!(cs.graph.has_edge(a, b));
        }
    }

    #[test]
    fn text_round_trip(q in network()) {
        prop_assert_eq!(Qcn::parse(&q.to_text()).unwrap(), q);
    }

    #[test]
    fn closure_is_a_fixpoint(bits in 1u64..(1 << 13), extra in 1u64..(1 << 13)) {
        let ia = calculi::ia();
        let seed: RelationSet = [qstr::Relation::from_u64(bits), qstr::Relation::from_u64(extra)].into_iter().collect();
        let Ok(s) = closure(&ia, &seed, Some(400)) else { return Ok(()) };
        prop_assert!(seed.is_subset(&s));
        prop_assert_eq!(closure(&ia, &s, None).unwrap(), s.clone());
        for r in s.iter() {
            prop_assert!(s.contains(&ia.converse(r)));
        }
    }
}

#[test]
fn realizations_of_enumerated_scenarios() {
    let cases = [(calculi::pa(), 4), (calculi::ia(), 3), (calculi::cra(), 3)];
    for (calc, n) in cases {
        let mut realized = 0;
        for seed in 0..10 {
            let q = random_qcn(&calc, n, 0.5, &RelationSet::all(&calc).unwrap(), seed).unwrap();
            for s in enumerate_scenarios(&q, Some(50)).unwrap() {
                assert!(!realize_solution(&s).unwrap().to_text().is_empty());
                realized += 1;
            }
        }
        assert!(realized > 0, "{}", calc.name());
    }
}

#[test]
fn scenarios_are_path_consistent() {
    let rcc8 = calculi::rcc8();
    let q = random_qcn(&rcc8, 4, 0.6, &RelationSet::all(&rcc8).unwrap(), 4).unwrap();
    for s in enumerate_scenarios(&q, None).unwrap() {
        assert!(is_path_consistent(s.as_qcn()));
        assert!(s.as_qcn().refines(&q));
        assert_eq!(Scenario::new(s.as_qcn().clone()).unwrap(), s);
    }
}
