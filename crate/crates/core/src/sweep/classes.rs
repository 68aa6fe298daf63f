//! Candidate equivalence classes.

use std::collections::HashMap;

use crate::netlist::{topo_order, Network, NodeId};
use crate::sim::{exhaustive_window_sim, SimError, Signature};

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, Default)]
struct Class {
    members: Vec<NodeId>,
    /// Members' full functions were compared on an exhaustive window.
    exhaustive_done: bool,
}

/// Nodes grouped by polarity-normalized signature.
///
/// `phase(n)` is set when `n`'s signature was complemented to normalize it,
/// so two members `a`, `b` of one class are candidates for
/// `a = b ⊕ (phase(a) ⊕ phase(b))`. Members are kept in topological order
/// and classes never hold fewer than two nodes.
#[derive(Clone, Debug)]
pub struct ClassManager {
    class_of: Vec<u32>,
    phase: Vec<bool>,
    rank: Vec<u32>,
    classes: Vec<Class>,
}

fn normalized(sig: &Signature) -> (Vec<u64>, bool) {
    let flip = !sig.is_empty() && sig.bit(0);
    let mut words = sig.words().to_vec();
    if flip {
        for w in &mut words {
            *w = !*w;
        }
        let tail = sig.len() % 64;
        if tail != 0 {
            *words.last_mut().unwrap() &= (1u64 << tail) - 1;
        }
    }
    (words, flip)
}

/// Groups live nodes (PIs and the constant node included) whose signatures
/// match up to complement. `sigs` is indexed by node id.
pub fn init_equiv_classes(net: &Network, sigs: &[Signature]) -> ClassManager {
    let order = topo_order(net).expect("network is acyclic");
    let n = net.len();
    let mut rank = vec![0u32; n];
    for (i, id) in order.iter().enumerate() {
        rank[id.index()] = i as u32;
    }
    let mut phase = vec![false; n];
    let mut by_key: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut groups: Vec<Vec<NodeId>> = Vec::new();
    for &id in &order {
        if net.node(id).is_dead() {
            continue;
        }
        let (key, flip) = normalized(&sigs[id.index()]);
        phase[id.index()] = flip;
        let g = *by_key.entry(key).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(id);
    }
    let mut mgr = ClassManager {
        class_of: vec![NONE; n],
        phase,
        rank,
        classes: Vec::new(),
    };
    for members in groups.into_iter().filter(|g| g.len() > 1) {
        mgr.push_class(members, false);
    }
    mgr
}

impl ClassManager {
    fn push_class(&mut self, members: Vec<NodeId>, exhaustive_done: bool) {
        let c = self.classes.len() as u32;
        for m in &members {
            self.class_of[m.index()] = c;
        }
        self.classes.push(Class {
            members,
            exhaustive_done,
        });
    }

    pub fn class_of(&self, id: NodeId) -> Option<u32> {
        match self.class_of[id.index()] {
            NONE => None,
            c => Some(c),
        }
    }

    pub fn phase(&self, id: NodeId) -> bool {
        self.phase[id.index()]
    }

    /// Members of class `c` in topological order (empty once dissolved).
    pub fn members(&self, c: u32) -> &[NodeId] {
        &self.classes[c as usize].members
    }

    pub fn same_class(&self, a: NodeId, b: NodeId) -> bool {
        self.class_of(a).is_some() && self.class_of(a) == self.class_of(b)
    }

    /// Non-empty classes.
    pub fn classes(&self) -> impl Iterator<Item = &[NodeId]> + '_ {
        self.classes
            .iter()
            .filter(|c| !c.members.is_empty())
            .map(|c| c.members.as_slice())
    }

    pub fn class_count(&self) -> usize {
        self.classes().count()
    }

    /// Drops `id` from its class, dissolving the class if one member is
    /// left.
    pub fn remove(&mut self, id: NodeId) {
        let Some(c) = self.class_of(id) else {
            return;
        };
        self.class_of[id.index()] = NONE;
        let members = &mut self.classes[c as usize].members;
        members.retain(|&m| m != id);
        if members.len() == 1 {
            let last = members.pop().unwrap();
            self.class_of[last.index()] = NONE;
        }
    }

    /// Drops dead nodes from every class.
    pub fn prune_dead(&mut self, net: &Network) {
        let dead: Vec<NodeId> = self
            .classes()
            .flatten()
            .copied()
            .filter(|&m| net.node(m).is_dead())
            .collect();
        for d in dead {
            self.remove(d);
        }
    }

    /// Every member of every class, in class order.
    pub fn all_members(&self) -> Vec<NodeId> {
        self.classes().flatten().copied().collect()
    }

    /// Splits every class whose members disagree under `key` (member,
    /// phase-adjusted). Returns the number of classes that were split.
    fn split_by<K: Eq + std::hash::Hash>(
        &mut self,
        only: Option<&[u32]>,
        mut key: impl FnMut(NodeId, bool) -> K,
    ) -> usize {
        let ids: Vec<u32> = match only {
            Some(list) => list.to_vec(),
            None => (0..self.classes.len() as u32).collect(),
        };
        let mut splits = 0;
        for c in ids {
            let members = std::mem::take(&mut self.classes[c as usize].members);
            if members.is_empty() {
                continue;
            }
            let done = self.classes[c as usize].exhaustive_done;
            let mut index: HashMap<K, usize> = HashMap::new();
            let mut groups: Vec<Vec<NodeId>> = Vec::new();
            for &m in &members {
                let k = key(m, self.phase[m.index()]);
                let g = *index.entry(k).or_insert_with(|| {
                    groups.push(Vec::new());
                    groups.len() - 1
                });
                groups[g].push(m);
            }
            if groups.len() > 1 {
                splits += 1;
            }
            for m in &members {
                self.class_of[m.index()] = NONE;
            }
            let mut first = true;
            for g in groups {
                if g.len() < 2 {
                    continue;
                }
                if first {
                    for m in &g {
                        self.class_of[m.index()] = c;
                    }
                    self.classes[c as usize].members = g;
                    first = false;
                } else {
                    self.push_class(g, done);
                }
            }
        }
        splits
    }

    /// Splits classes by fresh signatures (phase-adjusted). `sigs` need
    /// only cover the class members.
    pub fn refine_with_signatures(&mut self, sigs: &[Signature]) -> usize {
        let by_node: HashMap<NodeId, &Signature> = sigs.iter().map(|s| (s.node, s)).collect();
        self.split_by(None, |m, ph| {
            let s = by_node[&m];
            let mut words = s.words().to_vec();
            if ph {
                for w in &mut words {
                    *w = !*w;
                }
                let tail = s.len() % 64;
                if tail != 0 {
                    *words.last_mut().unwrap() &= (1u64 << tail) - 1;
                }
            }
            words
        })
    }

    /// Compares full truth tables for every class not yet checked whose PI
    /// support has at most `cap` inputs. Returns the number of splits.
    pub fn refine_exhaustive(&mut self, net: &Network, cap: usize) -> usize {
        let pending: Vec<u32> = (0..self.classes.len() as u32)
            .filter(|&c| {
                let cl = &self.classes[c as usize];
                !cl.exhaustive_done && !cl.members.is_empty()
            })
            .collect();
        let mut splits = 0;
        for c in pending {
            self.classes[c as usize].exhaustive_done = true;
            let members = self.classes[c as usize].members.clone();
            let window = match exhaustive_window_sim(net, &members, cap) {
                Ok(w) => w,
                Err(SimError::WindowTooLarge { .. }) => continue,
                Err(e) => panic!("window simulation failed: {e}"),
            };
            let rows: HashMap<NodeId, usize> =
                members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
            splits += self.split_by(Some(&[c]), |m, ph| {
                let row = &window.rows[rows[&m]];
                if ph {
                    row.complement()
                } else {
                    row.clone()
                }
            });
        }
        splits
    }

    /// Topological rank used to order members.
    pub fn rank(&self, id: NodeId) -> u32 {
        self.rank[id.index()]
    }
}
