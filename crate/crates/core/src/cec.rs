//! Combinational equivalence checking of two networks.

use std::collections::HashMap;

use thiserror::Error;

use crate::netlist::{topo_order, NetlistError, Network, NodeId, NodeKind};
use crate::sat::{prove_equiv, SatOutcome};
use crate::sim::{simulate_all, PatternSet, SimError};

/// Networks with at most this many PIs are compared exhaustively.
pub const EXHAUSTIVE_PI_LIMIT: usize = 14;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CecError {
    #[error("interface mismatch: {0}")]
    Interface(String),
    #[error(transparent)]
    Netlist(#[from] NetlistError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CecResult {
    Equivalent,
    /// `po` differs under the PI assignment `ce` (names of the first
    /// network).
    Inequivalent { po: String, ce: Vec<(String, bool)> },
    /// The solver gave up on `po`.
    Undecided { po: String },
}

/// Pairs `a[i]` with `b[map[i]]`, by name when both name sets agree,
/// otherwise by position.
fn match_by_name(what: &str, a: &[String], b: &[String]) -> Result<Vec<usize>, CecError> {
    if a.len() != b.len() {
        return Err(CecError::Interface(format!(
            "{} {what}s versus {}",
            a.len(),
            b.len()
        )));
    }
    let index: HashMap<&str, usize> = b.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    if index.len() == b.len() && a.iter().all(|n| index.contains_key(n.as_str())) {
        return Ok(a.iter().map(|n| index[n.as_str()]).collect());
    }
    Ok((0..a.len()).collect())
}

/// Builds a network holding both circuits over shared PIs. Returns it with
/// the PO pairs `(driver_a, driver_b, inverted)`.
fn miter(a: &Network, b: &Network, pi_map: &[usize], po_map: &[usize]) -> (Network, Vec<(NodeId, NodeId, bool)>) {
    let mut net = Network::new("miter");
    let mut map_a = vec![NodeId(0); a.len()];
    for &p in a.pis() {
        map_a[p.index()] = net.add_pi(a.display_name(p));
    }
    let shared: Vec<NodeId> = a.pis().iter().map(|p| map_a[p.index()]).collect();
    let mut map_b = vec![NodeId(0); b.len()];
    for (i, &j) in pi_map.iter().enumerate() {
        map_b[b.pis()[j].index()] = shared[i];
    }
    for (src, map) in [(a, &mut map_a), (b, &mut map_b)] {
        for id in topo_order(src).expect("network is acyclic") {
            let node = src.node(id);
            if let NodeKind::Lut(tt) = &node.kind {
                if node.is_dead() {
                    continue;
                }
                let fanins: Vec<NodeId> = node.fanins().iter().map(|f| map[f.index()]).collect();
                map[id.index()] = net.add_lut(&fanins, tt.clone()).expect("copied LUT is valid");
            }
        }
    }
    let pairs = a
        .pos()
        .iter()
        .zip(po_map)
        .map(|(pa, &j)| {
            let pb = &b.pos()[j];
            (map_a[pa.driver.index()], map_b[pb.driver.index()], pa.inverted ^ pb.inverted)
        })
        .collect();
    (net, pairs)
}

/// Checks that `a` and `b` compute the same PO functions.
pub fn cec(a: &Network, b: &Network) -> Result<CecResult, CecError> {
    let names = |n: &Network| -> Vec<String> { n.pis().iter().map(|&p| n.display_name(p)).collect() };
    let pi_map = match_by_name("PI", &names(a), &names(b))?;
    let po_names = |n: &Network| -> Vec<String> { n.pos().iter().map(|p| p.name.clone()).collect() };
    let po_map = match_by_name("PO", &po_names(a), &po_names(b))?;
    let (net, pairs) = miter(a, b, &pi_map, &po_map);
    let n = net.pis().len();

    if n <= EXHAUSTIVE_PI_LIMIT {
        // Pattern j assigns bit (n-1-i) of j to PI i.
        let total = 1usize << n;
        let mut p = PatternSet::zeros(n, 0);
        for j in 0..total {
            let v: Vec<bool> = (0..n).map(|i| (j >> (n - 1 - i)) & 1 == 1).collect();
            p.push_pattern(&v);
        }
        let sigs = simulate_all(&net, &p)?;
        for (k, &(da, db, inv)) in pairs.iter().enumerate() {
            let (sa, sb) = (&sigs[da.index()], &sigs[db.index()]);
            let diff = (0..total).find(|&j| sa.bit(j) != (sb.bit(j) ^ inv));
            if let Some(j) = diff {
                let ce = p
                    .pattern(j)
                    .into_iter()
                    .enumerate()
                    .map(|(i, v)| (net.display_name(net.pis()[i]), v))
                    .collect();
                return Ok(CecResult::Inequivalent {
                    po: a.pos()[k].name.clone(),
                    ce,
                });
            }
        }
        return Ok(CecResult::Equivalent);
    }

    for (k, &(da, db, inv)) in pairs.iter().enumerate() {
        let po = a.pos()[k].name.clone();
        if da == db && !inv {
            continue;
        }
        match prove_equiv(&net, da, db, inv, 0) {
            SatOutcome::Unsat => {}
            SatOutcome::Undet => return Ok(CecResult::Undecided { po }),
            SatOutcome::Sat(ce) => {
                let ce = ce
                    .values
                    .iter()
                    .map(|&(pi, v)| (net.display_name(pi), v))
                    .collect();
                return Ok(CecResult::Inequivalent { po, ce });
            }
        }
    }
    Ok(CecResult::Equivalent)
}
