//! Exhaustive simulation over a small set of window leaves.

use super::{SimError, Signature};
use crate::netlist::{cone, structural_support, Network, NodeId};
use crate::stp::{LogicMatrix, LutEval};

/// Truth tables of a few targets over their shared leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    /// Ascending node ids; the first leaf is the most significant variable.
    pub leaves: Vec<NodeId>,
    pub targets: Vec<NodeId>,
    /// One table per target, same order as `targets`.
    pub rows: Vec<LogicMatrix>,
}

impl Window {
    /// Target `i`'s outputs under all `2^m` leaf patterns, pattern `a`
    /// being the binary expansion of `a` over the leaves.
    ///
    /// This is the truth row read in the opposite direction.
    pub fn signature(&self, i: usize) -> Signature {
        let tt = &self.rows[i];
        Signature::new(self.targets[i], tt.columns(), tt.words().to_vec())
    }
}

/// Simulates all `2^m` assignments of the targets' PI support.
///
/// Fails with [`SimError::WindowTooLarge`] when the support has more than
/// `window_cap` inputs; callers then fall back to pattern simulation.
pub fn exhaustive_window_sim(
    net: &Network,
    targets: &[NodeId],
    window_cap: usize,
) -> Result<Window, SimError> {
    if targets.is_empty() {
        return Err(SimError::NoTargets);
    }
    let leaves = structural_support(net, targets);
    let m = leaves.len();
    if m > window_cap {
        return Err(SimError::WindowTooLarge {
            leaves: m,
            cap: window_cap,
        });
    }
    let mut rows: Vec<Option<LogicMatrix>> = vec![None; net.len()];
    for (j, l) in leaves.iter().enumerate() {
        rows[l.index()] = Some(LogicMatrix::projection(m, j)?);
    }
    let words = rows_len(m);
    let mut eval = LutEval::default();
    let mut inputs = Vec::new();
    for id in cone(net, targets) {
        if rows[id.index()].is_some() {
            continue;
        }
        let node = net.node(id);
        let tt = node.tt().expect("PIs are leaves");
        let fanin_rows: Vec<&LogicMatrix> = node
            .fanins()
            .iter()
            .map(|f| rows[f.index()].as_ref().expect("fanins come first"))
            .collect();
        let out: Vec<u64> = (0..words)
            .map(|w| {
                inputs.clear();
                inputs.extend(fanin_rows.iter().map(|r| r.words()[w]));
                eval.word(tt, &inputs)
            })
            .collect();
        rows[id.index()] = Some(LogicMatrix::from_words(m, out)?);
    }
    let out_rows = targets
        .iter()
        .map(|t| rows[t.index()].clone().expect("targets are in the cone"))
        .collect();
    Ok(Window {
        leaves,
        targets: targets.to_vec(),
        rows: out_rows,
    })
}

fn rows_len(m: usize) -> usize {
    (1usize << m).div_ceil(64)
}

/// Exhaustive signature of one node over its own PI support.
pub fn support_signature(
    net: &Network,
    target: NodeId,
    window_cap: usize,
) -> Result<Signature, SimError> {
    Ok(exhaustive_window_sim(net, &[target], window_cap)?.signature(0))
}
