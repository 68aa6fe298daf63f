//! Bit-parallel simulation.
//!
//! A [`PatternSet`] holds one packed row per PI: bit `b` of word `w` is the
//! PI's value in pattern `64·w + b`. Simulating a node yields a
//! [`Signature`] with the same layout. Padding bits past the last pattern are
//! always zero.

mod cut;
mod window;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::netlist::{topo_order, NetlistError, Network, NodeId, NodeKind};
use crate::stp::{LutEval, StpError};

pub use cut::{
    circuit_cut, circuit_cut_network, cut_limit, cut_truth_tables, simulate_specified, Cut, CutSet,
};
pub use window::{exhaustive_window_sim, support_signature, Window};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SimError {
    #[error("pattern line {line}: {msg}")]
    PatternParse { line: usize, msg: String },
    #[error("pattern set has {got} rows but the network has {expected} PIs")]
    PiMismatch { expected: usize, got: usize },
    #[error("window has {leaves} leaves, more than the cap of {cap}")]
    WindowTooLarge { leaves: usize, cap: usize },
    #[error("no target nodes given")]
    NoTargets,
    #[error(transparent)]
    Netlist(#[from] NetlistError),
    #[error(transparent)]
    Stp(#[from] StpError),
}

pub(crate) fn words_for(n_patterns: usize) -> usize {
    n_patterns.div_ceil(64)
}

/// Mask of the valid bits in the last word.
pub(crate) fn last_mask(n_patterns: usize) -> u64 {
    match n_patterns % 64 {
        0 => !0,
        r => (1u64 << r) - 1,
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct PatternSet {
    n_patterns: usize,
    rows: Vec<Vec<u64>>,
}

impl PatternSet {
    /// `n_pi` rows of `n_patterns` zero bits.
    pub fn zeros(n_pi: usize, n_patterns: usize) -> Self {
        PatternSet {
            n_patterns,
            rows: vec![vec![0; words_for(n_patterns)]; n_pi],
        }
    }

    /// Builds a set from explicit patterns, each one value per PI.
    pub fn from_patterns(n_pi: usize, patterns: &[Vec<bool>]) -> Self {
        let mut set = PatternSet::zeros(n_pi, 0);
        for p in patterns {
            set.push_pattern(p);
        }
        set
    }

    pub fn n_patterns(&self) -> usize {
        self.n_patterns
    }

    pub fn n_pis(&self) -> usize {
        self.rows.len()
    }

    pub fn words(&self) -> usize {
        words_for(self.n_patterns)
    }

    /// Packed row of PI `i`.
    pub fn row(&self, i: usize) -> &[u64] {
        &self.rows[i]
    }

    pub fn bit(&self, pi: usize, pattern: usize) -> bool {
        (self.rows[pi][pattern >> 6] >> (pattern & 63)) & 1 == 1
    }

    /// Pattern `j` as one value per PI.
    pub fn pattern(&self, j: usize) -> Vec<bool> {
        (0..self.n_pis()).map(|i| self.bit(i, j)).collect()
    }

    pub fn push_pattern(&mut self, values: &[bool]) {
        assert_eq!(values.len(), self.n_pis(), "one value per PI");
        let j = self.n_patterns;
        self.n_patterns += 1;
        for (row, &v) in self.rows.iter_mut().zip(values) {
            if j & 63 == 0 {
                row.push(0);
            }
            if v {
                row[j >> 6] |= 1 << (j & 63);
            }
        }
    }

    /// Appends every pattern of `other`.
    pub fn extend(&mut self, other: &PatternSet) {
        assert_eq!(other.n_pis(), self.n_pis(), "PI counts differ");
        for j in 0..other.n_patterns {
            self.push_pattern(&other.pattern(j));
        }
    }

    /// One `0`/`1` line per PI.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n_pis() {
            for j in 0..self.n_patterns {
                out.push(if self.bit(i, j) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for PatternSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PatternSet({} PIs x {} patterns)", self.n_pis(), self.n_patterns)
    }
}

/// Uniform random patterns, reproducible for a fixed seed.
pub fn gen_random_patterns(n_pi: usize, n_patterns: usize, seed: u64) -> PatternSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = words_for(n_patterns);
    let mask = last_mask(n_patterns);
    let rows = (0..n_pi)
        .map(|_| {
            let mut row: Vec<u64> = (0..words).map(|_| rng.random()).collect();
            if let Some(last) = row.last_mut() {
                *last &= mask;
            }
            row
        })
        .collect();
    PatternSet { n_patterns, rows }
}

/// Reads one bit row per PI; pattern `j` is column `j`. Blank lines are
/// skipped.
pub fn parse_patterns(text: &str, n_pi: usize) -> Result<PatternSet, SimError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    if lines.len() != n_pi {
        return Err(SimError::PiMismatch {
            expected: n_pi,
            got: lines.len(),
        });
    }
    let n_patterns = lines.first().map_or(0, |(_, l)| l.len());
    let mut set = PatternSet::zeros(n_pi, n_patterns);
    for (i, (line, l)) in lines.into_iter().enumerate() {
        if l.len() != n_patterns {
            return Err(SimError::PatternParse {
                line,
                msg: format!("expected {n_patterns} bits, found {}", l.len()),
            });
        }
        for (j, c) in l.chars().enumerate() {
            match c {
                '0' => {}
                '1' => set.rows[i][j >> 6] |= 1 << (j & 63),
                _ => {
                    return Err(SimError::PatternParse {
                        line,
                        msg: format!("unexpected character `{c}`"),
                    })
                }
            }
        }
    }
    Ok(set)
}

/// Packed output bits of one node, one per pattern.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    pub node: NodeId,
    len: usize,
    words: Vec<u64>,
}

impl Signature {
    /// Wraps packed words; padding bits are cleared.
    pub fn new(node: NodeId, len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        if let Some(last) = words.last_mut() {
            *last &= last_mask(len);
        }
        Signature { node, len, words }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn bit(&self, i: usize) -> bool {
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `Some(v)` when every bit equals `v`.
    pub fn constant_value(&self) -> Option<bool> {
        match self.count_ones() {
            0 => Some(false),
            n if n == self.len => Some(true),
            _ => None,
        }
    }

    /// Adjacent bit changes divided by the length.
    pub fn toggle_rate(&self) -> f64 {
        if self.len < 2 {
            return 0.0;
        }
        let toggles = (1..self.len).filter(|&i| self.bit(i) != self.bit(i - 1)).count();
        toggles as f64 / self.len as f64
    }

    /// Bits in pattern order.
    pub fn to_bit_string(&self) -> String {
        (0..self.len)
            .map(|i| if self.bit(i) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Signature({}: {})", self.node, self.to_bit_string())
    }
}

/// `name<TAB>bits` per signature.
pub fn format_signatures(net: &Network, sigs: &[Signature]) -> String {
    let mut out = String::new();
    for s in sigs {
        out.push_str(&net.display_name(s.node));
        out.push('\t');
        out.push_str(&s.to_bit_string());
        out.push('\n');
    }
    out
}

fn check_pis(net: &Network, p: &PatternSet) -> Result<(), SimError> {
    if p.n_pis() != net.pis().len() {
        return Err(SimError::PiMismatch {
            expected: net.pis().len(),
            got: p.n_pis(),
        });
    }
    Ok(())
}

/// Evaluates one LUT over all words of its fanin rows.
pub(crate) fn eval_node_words(
    eval: &mut LutEval,
    kind: &NodeKind,
    fanin_rows: &[&[u64]],
    words: usize,
    mask: u64,
    out: &mut [u64],
) {
    let NodeKind::Lut(tt) = kind else {
        unreachable!("PIs are copied, not evaluated")
    };
    let mut inputs = vec![0u64; fanin_rows.len()];
    for (w, slot) in out.iter_mut().enumerate().take(words) {
        for (i, r) in fanin_rows.iter().enumerate() {
            inputs[i] = r[w];
        }
        *slot = eval.word(tt, &inputs);
    }
    if let Some(last) = out[..words].last_mut() {
        *last &= mask;
    }
}

/// Signatures of every node (indexed by node id), visiting nodes in
/// topological order.
pub fn simulate_all(net: &Network, p: &PatternSet) -> Result<Vec<Signature>, SimError> {
    check_pis(net, p)?;
    let words = p.words();
    let mask = last_mask(p.n_patterns());
    let mut table = vec![0u64; net.len() * words];
    let pi_pos = net.pi_positions();
    let mut eval = LutEval::default();
    let mut out = vec![0u64; words];
    for id in topo_order(net)? {
        let i = id.index();
        if let Some(k) = pi_pos[i] {
            table[i * words..(i + 1) * words].copy_from_slice(p.row(k));
            continue;
        }
        let node = net.node(id);
        let fanin_rows: Vec<&[u64]> = node
            .fanins()
            .iter()
            .map(|f| &table[f.index() * words..(f.index() + 1) * words])
            .collect();
        eval_node_words(&mut eval, &node.kind, &fanin_rows, words, mask, &mut out);
        table[i * words..(i + 1) * words].copy_from_slice(&out);
    }
    let n = p.n_patterns();
    Ok(net
        .node_ids()
        .map(|id| {
            let i = id.index();
            Signature::new(id, n, table[i * words..(i + 1) * words].to_vec())
        })
        .collect())
}
