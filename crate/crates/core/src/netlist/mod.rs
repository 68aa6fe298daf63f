//! k-LUT networks.
//!
//! A [`Network`] is a DAG of nodes. Primary inputs are nodes without a truth
//! table; every other node is a lookup table whose [`LogicMatrix`] is indexed
//! by its fanins in order (first fanin = first variable). Primary outputs are
//! `(driver, inverted)` pairs.
//!
//! Node ids are dense indices. Edits never reuse ids; [`remove_dead`]
//! compacts the array and renumbers in order.

mod aiger;
mod blif;
mod edit;
mod traverse;

use std::fmt;

use thiserror::Error;

use crate::stp::LogicMatrix;

pub use aiger::parse_aiger_ascii;
pub use blif::{parse_blif, parse_blif_with, write_blif, BlifOptions, DEFAULT_MAX_FANIN};
pub use edit::{remove_dead, remove_dead_with_map, substitute_node};
pub use traverse::{
    cone, is_in_tfo, levels, reverse_topo_order, structural_support, topo_order,
    transitive_fanin,
};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum NetlistError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: `{signal}` has {arity} fanins, more than the limit of {max}")]
    FaninLimit {
        line: usize,
        signal: String,
        arity: usize,
        max: usize,
    },
    #[error("combinational cycle through `{0}`")]
    Cycle(String),
    #[error("sequential elements are not supported ({0} latches)")]
    Latches(usize),
    #[error("node {0} does not exist")]
    UnknownNode(NodeId),
    #[error("truth table of arity {tt} given for {fanins} fanins")]
    ArityMismatch { tt: usize, fanins: usize },
    #[error("substituting {old} by {new} would create a cycle")]
    CyclicSubstitution { old: NodeId, new: NodeId },
    #[error("cannot substitute {old} by {new}: {reason}")]
    InvalidSubstitution {
        old: NodeId,
        new: NodeId,
        reason: &'static str,
    },
}

/// Dense node index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(i as u32)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Pi,
    Lut(LogicMatrix),
}

#[derive(Clone, Debug)]
pub struct LutNode {
    pub(crate) kind: NodeKind,
    pub(crate) fanins: Vec<NodeId>,
    /// Live consumers, one entry per fanin edge.
    pub(crate) fanouts: Vec<NodeId>,
    pub(crate) name: Option<String>,
    pub(crate) dont_touch: bool,
    pub(crate) dead: bool,
}

impl LutNode {
    pub fn is_pi(&self) -> bool {
        matches!(self.kind, NodeKind::Pi)
    }

    /// Truth table, `None` for primary inputs.
    pub fn tt(&self) -> Option<&LogicMatrix> {
        match &self.kind {
            NodeKind::Pi => None,
            NodeKind::Lut(tt) => Some(tt),
        }
    }

    pub fn fanins(&self) -> &[NodeId] {
        &self.fanins
    }

    pub fn fanouts(&self) -> &[NodeId] {
        &self.fanouts
    }

    pub fn fanout_count(&self) -> usize {
        self.fanouts.len()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn is_dead(&self) -> bool {
        self.dead
    }

    pub fn is_dont_touch(&self) -> bool {
        self.dont_touch
    }

    /// An arity-0 table.
    pub fn is_constant(&self) -> bool {
        matches!(&self.kind, NodeKind::Lut(tt) if tt.arity() == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Po {
    pub driver: NodeId,
    pub inverted: bool,
    pub name: String,
}

#[derive(Clone, Debug, Default)]
pub struct Network {
    name: String,
    nodes: Vec<LutNode>,
    pis: Vec<NodeId>,
    pos: Vec<Po>,
}

impl Network {
    pub fn new(name: impl Into<String>) -> Self {
        Network {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn add_pi(&mut self, name: impl Into<String>) -> NodeId {
        let id = NodeId::from(self.nodes.len());
        self.nodes.push(LutNode {
            kind: NodeKind::Pi,
            fanins: Vec::new(),
            fanouts: Vec::new(),
            name: Some(name.into()),
            dont_touch: false,
            dead: false,
        });
        self.pis.push(id);
        id
    }

    /// Adds a LUT over `fanins`. Fanins must already exist, which keeps the
    /// network acyclic by construction.
    pub fn add_lut(&mut self, fanins: &[NodeId], tt: LogicMatrix) -> Result<NodeId, NetlistError> {
        if tt.arity() != fanins.len() {
            return Err(NetlistError::ArityMismatch {
                tt: tt.arity(),
                fanins: fanins.len(),
            });
        }
        let id = NodeId::from(self.nodes.len());
        for &f in fanins {
            if f.index() >= self.nodes.len() {
                return Err(NetlistError::UnknownNode(f));
            }
        }
        for &f in fanins {
            self.nodes[f.index()].fanouts.push(id);
        }
        self.nodes.push(LutNode {
            kind: NodeKind::Lut(tt),
            fanins: fanins.to_vec(),
            fanouts: Vec::new(),
            name: None,
            dont_touch: false,
            dead: false,
        });
        Ok(id)
    }

    pub fn add_named_lut(
        &mut self,
        name: impl Into<String>,
        fanins: &[NodeId],
        tt: LogicMatrix,
    ) -> Result<NodeId, NetlistError> {
        let id = self.add_lut(fanins, tt)?;
        self.nodes[id.index()].name = Some(name.into());
        Ok(id)
    }

    pub fn add_po(&mut self, driver: NodeId, inverted: bool, name: impl Into<String>) {
        assert!(driver.index() < self.nodes.len(), "PO driver must exist");
        self.pos.push(Po {
            driver,
            inverted,
            name: name.into(),
        });
    }

    /// The live constant-0 node, created on first use.
    pub fn constant_node(&mut self) -> NodeId {
        if let Some(i) = self.nodes.iter().position(|n| {
            !n.dead && matches!(&n.kind, NodeKind::Lut(tt) if tt.arity() == 0 && !tt.value(0))
        }) {
            return NodeId::from(i);
        }
        self.add_lut(&[], LogicMatrix::constant(false)).unwrap()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &LutNode {
        &self.nodes[id.index()]
    }

    pub fn nodes(&self) -> &[LutNode] {
        &self.nodes
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).map(NodeId::from)
    }

    pub fn pis(&self) -> &[NodeId] {
        &self.pis
    }

    pub fn pos(&self) -> &[Po] {
        &self.pos
    }

    pub fn is_pi(&self, id: NodeId) -> bool {
        self.nodes[id.index()].is_pi()
    }

    pub fn is_po_driver(&self, id: NodeId) -> bool {
        self.pos.iter().any(|p| p.driver == id)
    }

    pub fn set_dont_touch(&mut self, id: NodeId) {
        self.nodes[id.index()].dont_touch = true;
    }

    pub fn set_name(&mut self, id: NodeId, name: impl Into<String>) {
        self.nodes[id.index()].name = Some(name.into());
    }

    /// Display name: the node's own name, else `n<id>`.
    pub fn display_name(&self, id: NodeId) -> String {
        self.nodes[id.index()]
            .name
            .clone()
            .unwrap_or_else(|| id.to_string())
    }

    /// Looks a node up by name, then by `n<id>` / plain index.
    pub fn find(&self, name: &str) -> Option<NodeId> {
        if let Some(i) = self.nodes.iter().position(|n| n.name.as_deref() == Some(name)) {
            return Some(NodeId::from(i));
        }
        let digits = name.strip_prefix('n').unwrap_or(name);
        digits
            .parse::<usize>()
            .ok()
            .filter(|&i| i < self.nodes.len())
            .map(NodeId::from)
    }

    /// Live non-constant LUTs.
    pub fn lut_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| !n.dead && !n.is_pi() && !n.is_constant())
            .count()
    }

    /// Position of each PI in [`Network::pis`], `None` for other nodes.
    pub fn pi_positions(&self) -> Vec<Option<usize>> {
        let mut pos = vec![None; self.nodes.len()];
        for (i, &p) in self.pis.iter().enumerate() {
            pos[p.index()] = Some(i);
        }
        pos
    }

    /// One-pattern reference evaluation. `pi_values[i]` drives `pis()[i]`;
    /// returns the value of every node.
    pub fn eval_scalar(&self, pi_values: &[bool]) -> Vec<bool> {
        assert_eq!(pi_values.len(), self.pis.len(), "one value per PI");
        let order = topo_order(self).expect("network is acyclic");
        let mut values = vec![false; self.nodes.len()];
        for (&p, &v) in self.pis.iter().zip(pi_values) {
            values[p.index()] = v;
        }
        let mut inputs = Vec::new();
        for id in order {
            let node = &self.nodes[id.index()];
            if let NodeKind::Lut(tt) = &node.kind {
                inputs.clear();
                inputs.extend(node.fanins.iter().map(|f| values[f.index()]));
                values[id.index()] = tt.eval(&inputs);
            }
        }
        values
    }

    /// PO values for one pattern.
    pub fn eval_outputs(&self, pi_values: &[bool]) -> Vec<bool> {
        let values = self.eval_scalar(pi_values);
        self.pos
            .iter()
            .map(|p| values[p.driver.index()] ^ p.inverted)
            .collect()
    }

    /// Recomputed fanout lists; equals the stored ones after every edit.
    pub fn recount_fanouts(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            if n.dead {
                continue;
            }
            for &f in &n.fanins {
                out[f.index()].push(NodeId::from(i));
            }
        }
        out
    }
}
