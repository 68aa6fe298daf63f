use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use super::{NetlistError, Network, NodeId};

/// Topological order over every node (fanins first). Ties are broken by the
/// smaller [`NodeId`], so the order is unique.
pub fn topo_order(net: &Network) -> Result<Vec<NodeId>, NetlistError> {
    let n = net.len();
    let mut pending = vec![0usize; n];
    let mut succ: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for id in net.node_ids() {
        let node = net.node(id);
        pending[id.index()] = node.fanins.len();
        for &f in &node.fanins {
            succ[f.index()].push(id);
        }
    }
    let mut ready: BinaryHeap<Reverse<NodeId>> = net
        .node_ids()
        .filter(|id| pending[id.index()] == 0)
        .map(Reverse)
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(id)) = ready.pop() {
        order.push(id);
        for &s in &succ[id.index()] {
            pending[s.index()] -= 1;
            if pending[s.index()] == 0 {
                ready.push(Reverse(s));
            }
        }
    }
    if order.len() != n {
        let stuck = net
            .node_ids()
            .find(|id| pending[id.index()] > 0)
            .expect("some node is left over");
        return Err(NetlistError::Cycle(net.display_name(stuck)));
    }
    Ok(order)
}

/// Outputs first: the reverse of [`topo_order`].
pub fn reverse_topo_order(net: &Network) -> Result<Vec<NodeId>, NetlistError> {
    let mut order = topo_order(net)?;
    order.reverse();
    Ok(order)
}

/// Logic level of every node (PIs and constants are level 0).
pub fn levels(net: &Network) -> Vec<u32> {
    let mut level = vec![0u32; net.len()];
    for id in topo_order(net).expect("network is acyclic") {
        let node = net.node(id);
        if let Some(m) = node.fanins.iter().map(|f| level[f.index()]).max() {
            level[id.index()] = m + 1;
        }
    }
    level
}

/// Every node in the transitive fanin of `roots`, roots and PIs included, in
/// a topological order (DFS post-order from the roots in the given order).
pub fn cone(net: &Network, roots: &[NodeId]) -> Vec<NodeId> {
    let mut seen = vec![false; net.len()];
    let mut out = Vec::new();
    let mut stack: Vec<(NodeId, usize)> = Vec::new();
    for &r in roots {
        if seen[r.index()] {
            continue;
        }
        seen[r.index()] = true;
        stack.push((r, 0));
        while let Some(top) = stack.last_mut() {
            let (id, next) = *top;
            let fanins = &net.node(id).fanins;
            if next < fanins.len() {
                top.1 += 1;
                let f = fanins[next];
                if !seen[f.index()] {
                    seen[f.index()] = true;
                    stack.push((f, 0));
                }
            } else {
                out.push(id);
                stack.pop();
            }
        }
    }
    out
}

/// Primary inputs in the transitive fanin of `roots`, by ascending id.
pub fn structural_support(net: &Network, roots: &[NodeId]) -> Vec<NodeId> {
    let mut pis: Vec<NodeId> = cone(net, roots)
        .into_iter()
        .filter(|&id| net.is_pi(id))
        .collect();
    pis.sort_unstable();
    pis
}

/// Breadth-first transitive fanin of `node`, the node itself first, primary
/// inputs skipped, truncated after `bound` nodes.
pub fn transitive_fanin(net: &Network, node: NodeId, bound: usize) -> Vec<NodeId> {
    let mut out = Vec::new();
    if bound == 0 || net.is_pi(node) {
        return out;
    }
    let mut seen = vec![false; net.len()];
    let mut queue = VecDeque::from([node]);
    seen[node.index()] = true;
    while let Some(id) = queue.pop_front() {
        out.push(id);
        if out.len() == bound {
            break;
        }
        for &f in &net.node(id).fanins {
            if !seen[f.index()] && !net.is_pi(f) {
                seen[f.index()] = true;
                queue.push_back(f);
            }
        }
    }
    out
}

/// Whether `b` is reachable from `a` along fanout edges (`a` reaches itself).
pub fn is_in_tfo(net: &Network, a: NodeId, b: NodeId) -> bool {
    if a == b {
        return true;
    }
    let mut seen = vec![false; net.len()];
    let mut stack = vec![a];
    seen[a.index()] = true;
    while let Some(id) = stack.pop() {
        for &s in &net.node(id).fanouts {
            if s == b {
                return true;
            }
            if !seen[s.index()] {
                seen[s.index()] = true;
                stack.push(s);
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::super::tests::lm;
    use super::*;

    fn chain() -> (Network, [NodeId; 4]) {
        let mut net = Network::new("chain");
        let x = net.add_pi("x");
        let a = net.add_lut(&[x], lm("01")).unwrap();
        let b = net.add_lut(&[a], lm("01")).unwrap();
        let c = net.add_lut(&[b], lm("01")).unwrap();
        net.add_po(c, false, "y");
        (net, [x, a, b, c])
    }

    #[test]
    fn chain_orders() {
        let (net, [x, a, b, c]) = chain();
        assert_eq!(topo_order(&net).unwrap(), [x, a, b, c]);
        assert_eq!(reverse_topo_order(&net).unwrap(), [c, b, a, x]);
        assert_eq!(levels(&net), [0, 1, 2, 3]);
    }

    #[test]
    fn diamond_tie_break() {
        let mut net = Network::new("diamond");
        let x = net.add_pi("x");
        let l = net.add_lut(&[x], lm("01")).unwrap();
        let r = net.add_lut(&[x], lm("10")).unwrap();
        let j = net.add_lut(&[r, l], lm("1000")).unwrap();
        assert_eq!(topo_order(&net).unwrap(), [x, l, r, j]);
    }

    #[test]
    fn tfi_bounds() {
        let (net, [x, a, b, c]) = chain();
        assert!(transitive_fanin(&net, x, 10).is_empty());
        assert!(transitive_fanin(&net, c, 0).is_empty());
        assert_eq!(transitive_fanin(&net, c, 10), [c, b, a]);
        assert_eq!(transitive_fanin(&net, c, 2), [c, b]);
    }

    #[test]
    fn tfo_queries() {
        let (net, [x, a, _b, c]) = chain();
        assert!(is_in_tfo(&net, a, a));
        assert!(is_in_tfo(&net, a, c));
        assert!(is_in_tfo(&net, x, c));
        assert!(!is_in_tfo(&net, c, a));
    }

    #[test]
    fn cone_and_support() {
        let (net, [x, a, b, _c]) = chain();
        assert_eq!(cone(&net, &[b]), [x, a, b]);
        assert_eq!(structural_support(&net, &[b]), [x]);
    }
}
