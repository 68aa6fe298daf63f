//! SAT-guided pattern generation and constant propagation.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::SweepConfig;
use crate::netlist::{remove_dead, substitute_node, topo_order, Network, NodeId};
use crate::sat::{encode_cone, Cnf, Lit, SatOutcome, Solver};
use crate::sim::{gen_random_patterns, simulate_all, PatternSet, SimError};

/// Patterns and proven constants from [`sat_guided_patterns`].
#[derive(Clone, Debug)]
pub struct GuidedPatterns {
    pub patterns: PatternSet,
    /// `(node, value)` pairs proven constant.
    pub constants: Vec<(NodeId, bool)>,
    /// SAT calls spent generating patterns.
    pub sat_calls: usize,
}

struct Oracle {
    cnf: Cnf,
    solver: Solver,
}

impl Oracle {
    fn new(net: &Network) -> Self {
        let roots: Vec<NodeId> = net.node_ids().filter(|&i| !net.node(i).is_dead()).collect();
        let cnf = encode_cone(net, &roots);
        let solver = Solver::from_cnf(&cnf);
        Oracle { cnf, solver }
    }

    /// A PI pattern making `node` equal `value`, if any.
    fn force(
        &mut self,
        net: &Network,
        node: NodeId,
        value: bool,
        limit: u64,
        rng: &mut ChaCha8Rng,
    ) -> SatOutcome<Vec<bool>> {
        let v = self.cnf.var_of(node).expect("live nodes are encoded");
        match self.solver.solve(&[Lit::new(v, !value)], limit) {
            SatOutcome::Sat(model) => SatOutcome::Sat(
                net.pis()
                    .iter()
                    .map(|&p| match self.cnf.var_of(p) {
                        Some(pv) => model[pv as usize],
                        None => rng.random(),
                    })
                    .collect(),
            ),
            SatOutcome::Unsat => SatOutcome::Unsat,
            SatOutcome::Undet => SatOutcome::Undet,
        }
    }
}

/// Two rounds of pattern enrichment on top of `cfg.n_base_patterns` random
/// patterns.
///
/// Round one queries every node whose signature is constant for the
/// opposite value: unsatisfiable means a true constant, otherwise the model
/// becomes a new pattern. Round two asks for the minority value of every
/// node whose toggle rate is below `τ` or above `1 − τ`.
pub fn sat_guided_patterns(
    net: &Network,
    cfg: &SweepConfig,
    rng: &mut ChaCha8Rng,
) -> Result<GuidedPatterns, SimError> {
    let n_pi = net.pis().len();
    let mut patterns = gen_random_patterns(n_pi, cfg.n_base_patterns.max(1), rng.random());
    let sigs = simulate_all(net, &patterns)?;
    let order = topo_order(net)?;
    let mut oracle = Oracle::new(net);
    let mut sat_calls = 0;
    let mut constants = Vec::new();

    // Values observed so far at each node: bit 0 for false, bit 1 for true.
    let mut seen: Vec<u8> = sigs
        .iter()
        .map(|s| match s.constant_value() {
            Some(false) => 1,
            Some(true) => 2,
            None => 3,
        })
        .collect();
    let observe = |pattern: &[bool], seen: &mut [u8]| {
        let values = net.eval_scalar(pattern);
        for (s, v) in seen.iter_mut().zip(values) {
            *s |= if v { 2 } else { 1 };
        }
    };

    for &id in &order {
        let node = net.node(id);
        if node.is_pi() || node.is_dead() || node.is_constant() || seen[id.index()] == 3 {
            continue;
        }
        let value = seen[id.index()] == 2;
        sat_calls += 1;
        match oracle.force(net, id, !value, cfg.conflict_limit, rng) {
            SatOutcome::Unsat => constants.push((id, value)),
            SatOutcome::Sat(p) => {
                observe(&p, &mut seen);
                patterns.push_pattern(&p);
            }
            SatOutcome::Undet => {}
        }
    }

    let sigs = simulate_all(net, &patterns)?;
    let tau = cfg.toggle_threshold;
    for &id in &order {
        let node = net.node(id);
        if node.is_pi() || node.is_dead() || node.is_constant() {
            continue;
        }
        let s = &sigs[id.index()];
        if s.constant_value().is_some() {
            continue;
        }
        let rate = s.toggle_rate();
        if rate >= tau && rate <= 1.0 - tau {
            continue;
        }
        let minority = 2 * s.count_ones() < s.len();
        sat_calls += 1;
        if let SatOutcome::Sat(p) = oracle.force(net, id, minority, cfg.conflict_limit, rng) {
            patterns.push_pattern(&p);
        }
    }

    Ok(GuidedPatterns {
        patterns,
        constants,
        sat_calls,
    })
}

/// Replaces every proven constant by the constant node (complemented for
/// constant 1) and removes the dead logic. Returns the number of
/// substitutions.
pub fn constant_prop(net: &mut Network, constants: &[(NodeId, bool)]) -> usize {
    if constants.is_empty() {
        return 0;
    }
    let zero = net.constant_node();
    let mut merged = 0;
    for &(id, value) in constants {
        if id == zero || net.node(id).is_dead() {
            continue;
        }
        substitute_node(net, id, zero, value).expect("the constant node has no fanins");
        merged += 1;
    }
    remove_dead(net);
    merged
}
