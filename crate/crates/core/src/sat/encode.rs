//! CNF encoding of LUT cones and equivalence queries.

use super::{Cnf, Lit, SatOutcome, Solver};
use crate::netlist::{cone, structural_support, Network, NodeId, NodeKind};

/// Clauses for every node in the cones of `roots`.
///
/// A LUT of arity `k` contributes one clause per input assignment: if the
/// inputs take that assignment, the output equals the table entry.
/// Assignments that repeat a fanin with two values give tautologies and are
/// skipped.
pub fn encode_cone(net: &Network, roots: &[NodeId]) -> Cnf {
    let mut cnf = Cnf::new();
    let mut clause = Vec::new();
    for id in cone(net, roots) {
        let y = cnf.node_var(id);
        let node = net.node(id);
        let NodeKind::Lut(tt) = &node.kind else {
            continue;
        };
        let ins: Vec<u32> = node.fanins().iter().map(|&f| cnf.node_var(f)).collect();
        let k = ins.len();
        'rows: for a in 0..tt.columns() {
            clause.clear();
            for (j, &x) in ins.iter().enumerate() {
                let bit = (a >> (k - 1 - j)) & 1 == 1;
                // The literal that is false under this assignment.
                let lit = Lit::new(x, bit);
                if clause.contains(&!lit) {
                    continue 'rows;
                }
                if !clause.contains(&lit) {
                    clause.push(lit);
                }
            }
            clause.push(Lit::new(y, !tt.value(a)));
            cnf.add_clause(&clause);
        }
    }
    cnf
}

/// The CNF of "`a` differs from `b` (from `¬b` when `inverted`)" plus the
/// two output variables.
pub fn equiv_query(net: &Network, a: NodeId, b: NodeId, inverted: bool) -> (Cnf, u32, u32) {
    let mut cnf = encode_cone(net, &[a, b]);
    let ya = cnf.node_var(a);
    let yb = cnf.node_var(b);
    // XOR(ya, yb ^ inverted) as two clauses.
    cnf.add_clause(&[Lit::pos(ya), Lit::new(yb, inverted)]);
    cnf.add_clause(&[Lit::neg(ya), Lit::new(yb, !inverted)]);
    (cnf, ya, yb)
}

/// PI values witnessing a difference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    /// `(pi, value)` for every PI in the queried support, ascending ids.
    pub values: Vec<(NodeId, bool)>,
}

impl Counterexample {
    pub fn get(&self, pi: NodeId) -> Option<bool> {
        self.values
            .binary_search_by_key(&pi, |&(n, _)| n)
            .ok()
            .map(|i| self.values[i].1)
    }

    /// A full PI pattern: support PIs from the counterexample, the others
    /// from `fill`.
    pub fn to_pattern(&self, net: &Network, mut fill: impl FnMut() -> bool) -> Vec<bool> {
        net.pis()
            .iter()
            .map(|&p| self.get(p).unwrap_or_else(&mut fill))
            .collect()
    }

    /// `name=value` pairs.
    pub fn describe(&self, net: &Network) -> String {
        self.values
            .iter()
            .map(|&(p, v)| format!("{}={}", net.display_name(p), v as u8))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Asks whether `a` and `b` (complemented when `inverted`) can differ.
/// `Unsat` proves equivalence; `Sat` carries a counterexample over the
/// structural support of both nodes.
pub fn prove_equiv(
    net: &Network,
    a: NodeId,
    b: NodeId,
    inverted: bool,
    conflict_limit: u64,
) -> SatOutcome<Counterexample> {
    let (cnf, _, _) = equiv_query(net, a, b, inverted);
    let mut solver = Solver::from_cnf(&cnf);
    match solver.solve(&[], conflict_limit) {
        SatOutcome::Unsat => SatOutcome::Unsat,
        SatOutcome::Undet => SatOutcome::Undet,
        SatOutcome::Sat(model) => {
            let values = structural_support(net, &[a, b])
                .into_iter()
                .map(|p| {
                    let v = cnf.var_of(p).expect("support PIs are encoded");
                    (p, model[v as usize])
                })
                .collect();
            SatOutcome::Sat(Counterexample { values })
        }
    }
}
