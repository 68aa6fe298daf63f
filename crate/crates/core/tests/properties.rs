mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stp_sweep::netlist::{
    is_in_tfo, parse_blif, remove_dead, substitute_node, topo_order, write_blif, Network, NodeId,
};
use stp_sweep::sat::{solve, Cnf, Lit, SatOutcome};
use stp_sweep::sim::{gen_random_patterns, simulate_all, simulate_specified};
use stp_sweep::stp::{canonical_form_with, BoolExpr, LogicMatrix, Operator, Strategy};

fn net_from(seed: u64, max_pis: usize, max_luts: usize) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_pis = rng.random_range(1..=max_pis);
    let n_luts = rng.random_range(1..=max_luts);
    random_net(&mut rng, n_pis, n_luts, 4)
}

fn sorted(mut v: Vec<NodeId>) -> Vec<NodeId> {
    v.sort_unstable();
    v
}

/// Acyclic, fanout lists consistent with fanins, POs driven by live nodes.
fn assert_well_formed(net: &Network) {
    topo_order(net).expect("acyclic");
    let recount = net.recount_fanouts();
    for id in net.node_ids() {
        let node = net.node(id);
        if node.is_dead() {
            continue;
        }
        assert_eq!(sorted(node.fanouts().to_vec()), sorted(recount[id.index()].clone()), "{id}");
        for f in node.fanins() {
            assert!(!net.node(*f).is_dead(), "{id} reads dead {f}");
        }
    }
    for po in net.pos() {
        assert!(!net.node(po.driver).is_dead());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn blif_round_trip_keeps_outputs(seed in any::<u64>()) {
        let net = net_from(seed, 12, 60);
        let text = write_blif(&net);
        let back = parse_blif(&text).unwrap();
        prop_assert_eq!(back.pis().len(), net.pis().len());
        prop_assert_eq!(po_table(&back), po_table(&net));
        prop_assert_eq!(write_blif(&back), text);
    }

    #[test]
    fn random_substitutions_keep_structure(seed in any::<u64>(), edits in 1usize..20) {
        let mut net = net_from(seed, 10, 80);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for _ in 0..edits {
            let live: Vec<NodeId> = net.node_ids().filter(|&i| !net.node(i).is_dead()).collect();
            let old = live[rng.random_range(0..live.len())];
            let new = live[rng.random_range(0..live.len())];
            if net.is_pi(old) || old == new || is_in_tfo(&net, old, new) {
                continue;
            }
            substitute_node(&mut net, old, new, rng.random()).unwrap();
            assert_well_formed(&net);
        }
        remove_dead(&mut net);
        assert_well_formed(&net);
        prop_assert!(net.nodes().iter().all(|n| !n.is_dead()));
    }

    #[test]
    fn merging_a_copy_keeps_outputs(seed in any::<u64>(), inverted in any::<bool>()) {
        let mut net = net_from(seed, 10, 40);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let luts: Vec<NodeId> = net.node_ids().filter(|&i| !net.is_pi(i)).collect();
        let root = luts[rng.random_range(0..luts.len())];
        let tt = net.node(root).tt().unwrap().clone();
        let copy = copy_cone(&mut net, root, if inverted { tt.complement() } else { tt });
        net.add_po(copy, false, "copy");
        let before = po_table(&net);
        substitute_node(&mut net, copy, root, inverted).unwrap();
        assert_well_formed(&net);
        remove_dead(&mut net);
        prop_assert_eq!(po_table(&net), before);
    }

    #[test]
    fn specified_matches_all(seed in any::<u64>(), n_pat in 1usize..700) {
        let net = net_from(seed, 16, 120);
        let p = gen_random_patterns(net.pis().len(), n_pat, seed);
        let targets: Vec<NodeId> = net.node_ids().filter(|id| id.0 % 3 == 0).collect();
        let all = simulate_all(&net, &p).unwrap();
        let spec = simulate_specified(&net, &p, &targets).unwrap();
        for (s, t) in spec.iter().zip(&targets) {
            prop_assert_eq!(s.words(), all[t.index()].words());
        }
    }

    #[test]
    fn signatures_match_scalar_evaluation(seed in any::<u64>()) {
        let net = net_from(seed, 8, 40);
        let p = gen_random_patterns(net.pis().len(), 100, seed);
        let sigs = simulate_all(&net, &p).unwrap();
        for j in 0..p.n_patterns() {
            let vals = brute_eval(&net, &p.pattern(j));
            for id in net.node_ids() {
                prop_assert_eq!(sigs[id.index()].bit(j), vals[id.index()]);
            }
        }
    }

    #[test]
    fn solver_matches_enumeration(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=10u32);
        let mut cnf = Cnf::new();
        for _ in 0..n {
            cnf.new_var();
        }
        for _ in 0..rng.random_range(1..=5 * n) {
            let lits: Vec<Lit> = (0..rng.random_range(1..=3))
                .map(|_| Lit::new(rng.random_range(0..n), rng.random()))
                .collect();
            cnf.add_clause(&lits);
        }
        let holds = |a: u32| {
            cnf.clauses()
                .iter()
                .all(|c| c.iter().any(|l| ((a >> l.var()) & 1 == 1) != l.is_negated()))
        };
        let brute = (0..1u32 << n).any(holds);
        match solve(&cnf, &[], 0) {
            SatOutcome::Sat(m) => {
                let a = (0..n).fold(0, |acc, v| acc | ((m[v as usize] as u32) << v));
                prop_assert!(holds(a));
            }
            SatOutcome::Unsat => prop_assert!(!brute),
            SatOutcome::Undet => prop_assert!(false, "Undet without a limit"),
        }
        let back = Cnf::parse_dimacs(&cnf.to_dimacs()).unwrap();
        prop_assert_eq!(back.clauses(), cnf.clauses());
    }

    #[test]
    fn canonical_strategies_agree(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=4);
        let e = random_expr(&mut rng, n, 4);
        let a = canonical_form_with(&e, n, Strategy::Enumerate).unwrap();
        let b = canonical_form_with(&e, n, Strategy::DenseStp).unwrap();
        let c = canonical_form_with(&e, n, Strategy::Composition).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(&a, &c);
    }
}

fn random_expr(rng: &mut ChaCha8Rng, n: usize, depth: usize) -> BoolExpr {
    if depth == 0 || rng.random_bool(0.25) {
        return BoolExpr::var(rng.random_range(1..=n));
    }
    match rng.random_range(0..4) {
        0 => BoolExpr::not(random_expr(rng, n, depth - 1)),
        1 => {
            let k = rng.random_range(1..=3);
            let tt = LogicMatrix::from_fn(k, |_| rng.random()).unwrap();
            let cs = (0..k).map(|_| random_expr(rng, n, depth - 1)).collect();
            BoolExpr::Lut(tt, cs)
        }
        _ => {
            let ops = [
                Operator::And,
                Operator::Or,
                Operator::Xor,
                Operator::Implies,
                Operator::Iff,
            ];
            let op = ops[rng.random_range(0..ops.len())];
            BoolExpr::binary(op, random_expr(rng, n, depth - 1), random_expr(rng, n, depth - 1))
        }
    }
}
