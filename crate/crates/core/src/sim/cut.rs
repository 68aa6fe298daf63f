//! Tree cuts and cut-based simulation of selected nodes.

use super::{check_pis, last_mask, PatternSet, SimError, Signature};
use crate::netlist::{cone, Network, NodeId, NodeKind};
use crate::stp::{canonical_form, BoolExpr, LogicMatrix, LutEval};

/// Leaf bound for a simulation run over `n_patterns` patterns:
/// `floor(log2 n)`, clamped to `[1, 16]`.
pub fn cut_limit(n_patterns: usize) -> usize {
    if n_patterns < 2 {
        return 1;
    }
    (n_patterns.ilog2() as usize).clamp(1, 16)
}

/// One tree cut: `root` computes a function of `leaves` through `members`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    pub root: NodeId,
    /// Ascending node ids; the first leaf is the most significant variable.
    pub leaves: Vec<NodeId>,
    /// Interior nodes including the root, ascending ids.
    pub members: Vec<NodeId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutSet {
    pub limit: usize,
    /// Cuts in topological order of their roots.
    pub cuts: Vec<Cut>,
}

impl CutSet {
    pub fn roots(&self) -> Vec<NodeId> {
        self.cuts.iter().map(|c| c.root).collect()
    }
}

/// Partitions the cones of `targets` into tree cuts.
///
/// Nodes are visited outputs-first. Targets, PO drivers and nodes with more
/// than one consumer inside the cone start their own cut; any other node
/// joins its consumer's cut as long as the leaf count stays within `limit`.
/// A cut made of a single LUT keeps all of that LUT's fanins, so leaves are
/// bounded by `max(limit, arity)`.
pub fn circuit_cut(net: &Network, limit: usize, targets: &[NodeId]) -> CutSet {
    build_cuts(net, limit, targets, false)
}

/// Like [`circuit_cut`], but covers the cones of every PO as well, with PO
/// drivers as extra roots.
pub fn circuit_cut_network(net: &Network, limit: usize, targets: &[NodeId]) -> CutSet {
    build_cuts(net, limit, targets, true)
}

fn build_cuts(net: &Network, limit: usize, targets: &[NodeId], whole: bool) -> CutSet {
    let limit = limit.max(1);
    let mut roots_in: Vec<NodeId> = targets.to_vec();
    if whole {
        roots_in.extend(net.pos().iter().map(|p| p.driver));
    }
    // `cone` is a topological order of the relevant nodes.
    let order = cone(net, &roots_in);
    let n = net.len();
    let mut in_cone = vec![false; n];
    for &id in &order {
        in_cone[id.index()] = true;
    }
    let mut forced = vec![false; n];
    for &t in &roots_in {
        forced[t.index()] = true;
    }
    for p in net.pos() {
        forced[p.driver.index()] = true;
    }

    let mut owner: Vec<Option<NodeId>> = vec![None; n];
    // Leaves of each root while cuts grow, kept sorted.
    let mut leaves: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    let mut consumers: Vec<NodeId> = Vec::new();
    for &id in order.iter().rev() {
        let node = net.node(id);
        if node.is_pi() {
            continue;
        }
        consumers.clear();
        consumers.extend(
            node.fanouts()
                .iter()
                .copied()
                .filter(|c| in_cone[c.index()] && !net.node(*c).is_dead()),
        );
        consumers.sort_unstable();
        consumers.dedup();
        let mut own: Vec<NodeId> = node.fanins().to_vec();
        own.sort_unstable();
        own.dedup();

        let joined = if !forced[id.index()] && consumers.len() == 1 {
            let r = owner[consumers[0].index()].expect("consumers are visited first");
            let mut merged: Vec<NodeId> = leaves[r.index()]
                .iter()
                .copied()
                .filter(|&l| l != id)
                .chain(own.iter().copied())
                .collect();
            merged.sort_unstable();
            merged.dedup();
            if merged.len() <= limit {
                leaves[r.index()] = merged;
                owner[id.index()] = Some(r);
                true
            } else {
                false
            }
        } else {
            false
        };
        if !joined {
            owner[id.index()] = Some(id);
            leaves[id.index()] = own;
        }
    }

    let mut members: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    let mut roots_topo = Vec::new();
    for &id in &order {
        if let Some(r) = owner[id.index()] {
            members[r.index()].push(id);
            if r == id {
                roots_topo.push(id);
            }
        }
    }
    let cuts = roots_topo
        .into_iter()
        .map(|r| {
            let mut m = std::mem::take(&mut members[r.index()]);
            m.sort_unstable();
            Cut {
                root: r,
                leaves: std::mem::take(&mut leaves[r.index()]),
                members: m,
            }
        })
        .collect();
    CutSet { limit, cuts }
}

/// The cut interior as an expression over the cut's leaves (variable `i+1` is
/// `leaves[i]`).
fn cut_expr(net: &Network, cut: &Cut, id: NodeId) -> BoolExpr {
    if let Ok(pos) = cut.leaves.binary_search(&id) {
        return BoolExpr::Var(pos + 1);
    }
    debug_assert!(cut.members.binary_search(&id).is_ok());
    let node = net.node(id);
    let NodeKind::Lut(tt) = &node.kind else {
        unreachable!("PIs are always leaves")
    };
    BoolExpr::Lut(
        tt.clone(),
        node.fanins().iter().map(|&f| cut_expr(net, cut, f)).collect(),
    )
}

/// Truth table of each cut's root over its leaves, one per cut, computed as
/// the canonical form of the cut tree.
pub fn cut_truth_tables(net: &Network, cuts: &CutSet) -> Result<Vec<LogicMatrix>, SimError> {
    cuts.cuts
        .iter()
        .map(|c| {
            let e = cut_expr(net, c, c.root);
            Ok(canonical_form(&e, c.leaves.len())?)
        })
        .collect()
}

/// Evaluates `tt` over packed leaf rows.
pub(crate) fn eval_table(
    eval: &mut LutEval,
    tt: &LogicMatrix,
    leaf_rows: &[&[u64]],
    n_patterns: usize,
) -> Vec<u64> {
    let words = n_patterns.div_ceil(64);
    let m = leaf_rows.len();
    let mut out = vec![0u64; words];
    if m <= 8 {
        let mut inputs = vec![0u64; m];
        for (w, slot) in out.iter_mut().enumerate() {
            for (i, r) in leaf_rows.iter().enumerate() {
                inputs[i] = r[w];
            }
            *slot = eval.word(tt, &inputs);
        }
    } else {
        // Wide tables: look each pattern up directly.
        for (w, slot) in out.iter_mut().enumerate() {
            let mut word = 0u64;
            for b in 0..64 {
                let mut a = 0usize;
                for r in leaf_rows {
                    a = (a << 1) | ((r[w] >> b) & 1) as usize;
                }
                word |= (tt.value(a) as u64) << b;
            }
            *slot = word;
        }
    }
    if let Some(last) = out.last_mut() {
        *last &= last_mask(n_patterns);
    }
    out
}

/// Signatures of `targets` only, in the given order.
///
/// The targets' cones are partitioned with [`circuit_cut`] at
/// [`cut_limit`]`(n_patterns)`; every cut root is then evaluated once from
/// its truth table. The result equals [`super::simulate_all`] restricted to
/// the targets.
pub fn simulate_specified(
    net: &Network,
    p: &PatternSet,
    targets: &[NodeId],
) -> Result<Vec<Signature>, SimError> {
    check_pis(net, p)?;
    let cuts = circuit_cut(net, cut_limit(p.n_patterns()), targets);
    let tables = cut_truth_tables(net, &cuts)?;
    let n = p.n_patterns();
    let mut rows: Vec<Option<Vec<u64>>> = vec![None; net.len()];
    for (k, &pi) in net.pis().iter().enumerate() {
        rows[pi.index()] = Some(p.row(k).to_vec());
    }
    let mut eval = LutEval::default();
    for (cut, tt) in cuts.cuts.iter().zip(&tables) {
        let leaf_rows: Vec<&[u64]> = cut
            .leaves
            .iter()
            .map(|l| rows[l.index()].as_deref().expect("leaves are evaluated first"))
            .collect();
        let out = eval_table(&mut eval, tt, &leaf_rows, n);
        rows[cut.root.index()] = Some(out);
    }
    Ok(targets
        .iter()
        .map(|&t| Signature::new(t, n, rows[t.index()].clone().expect("targets are roots")))
        .collect())
}
