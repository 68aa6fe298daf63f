use super::{is_in_tfo, LutNode, NetlistError, Network, NodeId, NodeKind};

/// Replaces every use of `old` by `new`, complemented when `inverted`.
///
/// Consumers re-point their fanin; with `inverted` set their table is
/// complemented in that variable so the consumer's function is unchanged. POs
/// re-point with their phase flipped. `old` and any part of its cone that is
/// left without users is marked dead.
pub fn substitute_node(
    net: &mut Network,
    old: NodeId,
    new: NodeId,
    inverted: bool,
) -> Result<(), NetlistError> {
    for id in [old, new] {
        if id.index() >= net.len() {
            return Err(NetlistError::UnknownNode(id));
        }
    }
    let invalid = |reason| NetlistError::InvalidSubstitution { old, new, reason };
    if old == new {
        return Err(invalid("a node cannot replace itself"));
    }
    if net.is_pi(old) {
        return Err(invalid("primary inputs cannot be replaced"));
    }
    if net.node(new).dead {
        return Err(invalid("the replacement is dead"));
    }
    if is_in_tfo(net, old, new) {
        return Err(NetlistError::CyclicSubstitution { old, new });
    }

    let consumers = std::mem::take(&mut net.nodes[old.index()].fanouts);
    let mut done = consumers.clone();
    done.sort_unstable();
    done.dedup();
    for c in done {
        let node = &mut net.nodes[c.index()];
        for pos in 0..node.fanins.len() {
            if node.fanins[pos] != old {
                continue;
            }
            node.fanins[pos] = new;
            if inverted {
                if let NodeKind::Lut(tt) = &mut node.kind {
                    *tt = tt.negate_input(pos);
                }
            }
        }
    }
    net.nodes[new.index()].fanouts.extend(consumers);
    for po in net.pos.iter_mut().filter(|p| p.driver == old) {
        po.driver = new;
        po.inverted ^= inverted;
    }
    kill_unused(net, old);
    Ok(())
}

/// Marks `id` dead if nothing uses it, then walks into its fanins.
fn kill_unused(net: &mut Network, id: NodeId) {
    let mut stack = vec![id];
    while let Some(id) = stack.pop() {
        let node = &net.nodes[id.index()];
        if node.dead || node.is_pi() || !node.fanouts.is_empty() || net.is_po_driver(id) {
            continue;
        }
        net.nodes[id.index()].dead = true;
        let fanins = net.nodes[id.index()].fanins.clone();
        for f in fanins {
            let fo = &mut net.nodes[f.index()].fanouts;
            if let Some(p) = fo.iter().position(|&c| c == id) {
                fo.swap_remove(p);
            }
            stack.push(f);
        }
    }
}

/// Deletes every node not reachable from a PO (PIs are always kept) and
/// returns how many were removed.
pub fn remove_dead(net: &mut Network) -> usize {
    let before = net.len();
    remove_dead_with_map(net);
    before - net.len()
}

/// Like [`remove_dead`], returning the old-to-new id map.
pub fn remove_dead_with_map(net: &mut Network) -> Vec<Option<NodeId>> {
    let n = net.len();
    let mut live = vec![false; n];
    let mut stack: Vec<NodeId> = net.pos.iter().map(|p| p.driver).collect();
    while let Some(id) = stack.pop() {
        if live[id.index()] {
            continue;
        }
        live[id.index()] = true;
        stack.extend(net.nodes[id.index()].fanins.iter().copied());
    }
    for &p in &net.pis {
        live[p.index()] = true;
    }

    let mut map = vec![None; n];
    let mut next = 0usize;
    for (i, &l) in live.iter().enumerate() {
        if l {
            map[i] = Some(NodeId::from(next));
            next += 1;
        }
    }
    let old_nodes = std::mem::take(&mut net.nodes);
    let mut nodes: Vec<LutNode> = Vec::with_capacity(next);
    for (i, mut node) in old_nodes.into_iter().enumerate() {
        if map[i].is_none() {
            continue;
        }
        node.fanins = node
            .fanins
            .iter()
            .map(|f| map[f.index()].expect("fanins of live nodes are live"))
            .collect();
        node.fanouts.clear();
        node.dead = false;
        nodes.push(node);
    }
    for i in 0..nodes.len() {
        for f in nodes[i].fanins.clone() {
            nodes[f.index()].fanouts.push(NodeId::from(i));
        }
    }
    net.nodes = nodes;
    net.pis = net.pis.iter().map(|p| map[p.index()].unwrap()).collect();
    for po in &mut net.pos {
        po.driver = map[po.driver.index()].unwrap();
    }
    map
}
