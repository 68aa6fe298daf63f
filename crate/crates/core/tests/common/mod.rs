//! Random network generators and brute-force oracles shared by the
//! integration tests.

#![allow(dead_code)]

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use stp_sweep::netlist::{cone, Network, NodeId};
use stp_sweep::stp::LogicMatrix;

pub fn random_tt(rng: &mut ChaCha8Rng, k: usize) -> LogicMatrix {
    LogicMatrix::from_fn(k, |_| rng.random()).unwrap()
}

/// `n` distinct picks from `pool`, favouring its tail.
fn pick_recent(rng: &mut ChaCha8Rng, pool: &[NodeId], n: usize, window: usize) -> Vec<NodeId> {
    let n = n.min(pool.len());
    let lo = pool.len().saturating_sub(window.max(n));
    let span = &pool[lo..];
    sample(rng, span.len(), n).into_iter().map(|i| span[i]).collect()
}

/// Random k-LUT DAG. Every node without fanout drives a PO.
pub fn random_net(rng: &mut ChaCha8Rng, n_pis: usize, n_luts: usize, max_k: usize) -> Network {
    let mut net = Network::new("rand");
    let mut pool: Vec<NodeId> = (0..n_pis).map(|i| net.add_pi(format!("i{i}"))).collect();
    for _ in 0..n_luts {
        let k = rng.random_range(1..=max_k.min(pool.len()));
        // Mostly recent nodes, sometimes anything.
        let fanins = if rng.random_bool(0.7) {
            pick_recent(rng, &pool, k, 3 * max_k + 4)
        } else {
            pick_recent(rng, &pool, k, pool.len())
        };
        let tt = random_tt(rng, fanins.len());
        let id = net.add_lut(&fanins, tt).unwrap();
        pool.push(id);
    }
    add_sink_pos(&mut net);
    net
}

pub fn add_sink_pos(net: &mut Network) {
    let sinks: Vec<NodeId> = net
        .node_ids()
        .filter(|&id| !net.is_pi(id) && net.node(id).fanout_count() == 0 && !net.is_po_driver(id))
        .collect();
    for (i, s) in sinks.into_iter().enumerate() {
        net.add_po(s, false, format!("o{i}"));
    }
}

/// Wide, shallow network made of independent blocks, each reading its own
/// slice of the PIs. Cones stay inside one block.
pub fn blocky_net(
    rng: &mut ChaCha8Rng,
    blocks: usize,
    block_size: usize,
    n_pis: usize,
    pis_per_block: usize,
    k: usize,
) -> Network {
    let mut net = Network::new("blocks");
    let pis: Vec<NodeId> = (0..n_pis).map(|i| net.add_pi(format!("i{i}"))).collect();
    for _ in 0..blocks {
        let local: Vec<NodeId> = sample(rng, n_pis, pis_per_block)
            .into_iter()
            .map(|i| pis[i])
            .collect();
        let mut pool = local.clone();
        for _ in 0..block_size {
            let fanins = pick_recent(rng, &pool, k, 4 * k + pis_per_block);
            let tt = random_tt(rng, fanins.len());
            pool.push(net.add_lut(&fanins, tt).unwrap());
        }
    }
    add_sink_pos(&mut net);
    net
}

/// Copies the LUT cone of `root` onto the same PIs with `root_tt` for the
/// copy of the root. Returns the copy of the root.
pub fn copy_cone(net: &mut Network, root: NodeId, root_tt: LogicMatrix) -> NodeId {
    let order = cone(net, &[root]);
    let mut map: Vec<Option<NodeId>> = vec![None; net.len()];
    let mut last = root;
    for id in order {
        if net.is_pi(id) {
            map[id.index()] = Some(id);
            continue;
        }
        let node = net.node(id);
        let fanins: Vec<NodeId> = node.fanins().iter().map(|f| map[f.index()].unwrap()).collect();
        let tt = if id == root { root_tt.clone() } else { node.tt().unwrap().clone() };
        last = net.add_lut(&fanins, tt).unwrap();
        map[id.index()] = Some(last);
    }
    last
}

/// Values of every node under every PI assignment (PI `i` is bit `n-1-i`
/// of the assignment index).
pub fn exhaustive_values(net: &Network) -> Vec<Vec<bool>> {
    let n = net.pis().len();
    (0..1usize << n)
        .map(|a| {
            let v: Vec<bool> = (0..n).map(|i| (a >> (n - 1 - i)) & 1 == 1).collect();
            brute_eval(net, &v)
        })
        .collect()
}

/// Reference evaluator: repeated relaxation until every node is known.
/// Independent of the library's topological sort.
pub fn brute_eval(net: &Network, pi_values: &[bool]) -> Vec<bool> {
    let mut val: Vec<Option<bool>> = vec![None; net.len()];
    for (&p, &v) in net.pis().iter().zip(pi_values) {
        val[p.index()] = Some(v);
    }
    loop {
        let mut changed = false;
        for id in net.node_ids() {
            if val[id.index()].is_some() {
                continue;
            }
            let node = net.node(id);
            let ins: Option<Vec<bool>> = node.fanins().iter().map(|f| val[f.index()]).collect();
            if let Some(ins) = ins {
                let tt = node.tt().unwrap();
                // Truth-row convention: column p holds assignment 2^k-1-p.
                let a = ins.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
                let row = tt.truth_row().into_bytes();
                val[id.index()] = Some(row[row.len() - 1 - a] == b'1');
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    val.into_iter().map(|v| v.unwrap_or(false)).collect()
}

/// PO values for every assignment.
pub fn po_table(net: &Network) -> Vec<Vec<bool>> {
    exhaustive_values(net)
        .into_iter()
        .map(|vals| {
            net.pos()
                .iter()
                .map(|p| vals[p.driver.index()] ^ p.inverted)
                .collect()
        })
        .collect()
}

/// `f ⊕ m` for a random minterm `m` over 13 of the PIs.
///
/// `m` is accumulated as `x ⊕ m'` through a chain of LUTs, with `x` the
/// remaining PI, so every new node has a balanced signature and the
/// minterm is never a node of its own.
pub fn near_duplicate(net: &mut Network, f: NodeId, rng: &mut ChaCha8Rng) -> NodeId {
    let pis = net.pis().to_vec();
    let order: Vec<NodeId> = sample(rng, pis.len(), 14).into_iter().map(|i| pis[i]).collect();
    let x = order[0];
    let mut acc: Option<NodeId> = None;
    for group in order[1..].chunks(5).map(|c| c.to_vec()) {
        let polarity: Vec<bool> = group.iter().map(|_| rng.random()).collect();
        let mut fanins = vec![x];
        fanins.extend(acc);
        fanins.extend(&group);
        let k = fanins.len();
        let has_acc = acc.is_some();
        let tt = LogicMatrix::from_fn(k, |a| {
            let bit = |j: usize| (a >> (k - 1 - j)) & 1 == 1;
            let xv = bit(0);
            let prev = if has_acc { bit(1) ^ xv } else { true };
            let off = if has_acc { 2 } else { 1 };
            let lits = (0..group.len()).all(|j| bit(off + j) == polarity[j]);
            xv ^ (prev && lits)
        })
        .unwrap();
        acc = Some(net.add_lut(&fanins, tt).unwrap());
    }
    net.add_lut(&[f, acc.unwrap(), x], "10010110".parse().unwrap()).unwrap()
}

/// A sweep fixture: a random base network on 14 PIs plus exact
/// duplicates, complemented duplicates, near-duplicates that differ on a
/// single minterm, and hidden constants.
pub fn sweep_fixture(rng: &mut ChaCha8Rng) -> Network {
    let n_pis = 14;
    let n_luts = rng.random_range(30..=60);
    let mut net = random_net(rng, n_pis, n_luts, 4);
    let luts: Vec<NodeId> = net.node_ids().filter(|&i| !net.is_pi(i)).collect();

    // Exact and complemented copies.
    for _ in 0..rng.random_range(1..=3) {
        let r = luts[rng.random_range(luts.len() / 2..luts.len())];
        let tt = net.node(r).tt().unwrap().clone();
        let tt = if rng.random_bool(0.5) { tt.complement() } else { tt };
        let c = copy_cone(&mut net, r, tt);
        net.add_po(c, false, format!("dup{}", c.0));
    }

    // Near-duplicates of random nodes.
    for _ in 0..4 {
        let f = luts[rng.random_range(0..luts.len())];
        let g = near_duplicate(&mut net, f, rng);
        net.add_po(g, false, format!("near{}", g.0));
    }

    // Hidden constants: g AND NOT g, optionally complemented, feeding an OR.
    for _ in 0..rng.random_range(1..=2) {
        let g = luts[rng.random_range(0..luts.len())];
        let inv = net.add_lut(&[g], "01".parse().unwrap()).unwrap();
        let tt = if rng.random_bool(0.5) { "1000" } else { "0111" };
        let k = net.add_lut(&[g, inv], tt.parse().unwrap()).unwrap();
        let other = luts[rng.random_range(0..luts.len())];
        let o = net.add_lut(&[k, other], "0110".parse().unwrap()).unwrap();
        net.add_po(o, false, format!("k{}", o.0));
    }
    net
}
