//! CNF formulas, a CDCL solver and the LUT-cone encoding used for
//! equivalence queries.

mod encode;
mod solver;

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::ops::Not;

use thiserror::Error;

use crate::netlist::NodeId;

pub use encode::{encode_cone, equiv_query, prove_equiv, Counterexample};
pub use solver::{solve, Solver, SolverStats};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SatError {
    #[error("line {line}: {msg}")]
    Dimacs { line: usize, msg: String },
}

/// Literal `2·var + negated`. Variables are 0-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: u32, negated: bool) -> Lit {
        Lit(var << 1 | negated as u32)
    }

    pub fn pos(var: u32) -> Lit {
        Lit::new(var, false)
    }

    pub fn neg(var: u32) -> Lit {
        Lit::new(var, true)
    }

    pub fn var(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_negated(self) -> bool {
        self.0 & 1 == 1
    }

    pub(crate) fn index(self) -> usize {
        self.0 as usize
    }

    /// DIMACS form: variable `v` is `v+1`, negative when negated.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var() as i64 + 1;
        if self.is_negated() {
            -v
        } else {
            v
        }
    }

    pub fn from_dimacs(x: i64) -> Lit {
        assert_ne!(x, 0, "0 terminates DIMACS clauses");
        Lit::new((x.unsigned_abs() - 1) as u32, x < 0)
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A clause list with an optional node for each variable.
#[derive(Clone, Debug, Default)]
pub struct Cnf {
    num_vars: u32,
    clauses: Vec<Vec<Lit>>,
    nodes: Vec<Option<NodeId>>,
    index: HashMap<NodeId, u32>,
}

impl Cnf {
    pub fn new() -> Self {
        Cnf::default()
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn new_var(&mut self) -> u32 {
        self.nodes.push(None);
        self.num_vars += 1;
        self.num_vars - 1
    }

    /// The variable of `node`, created on first use.
    pub fn node_var(&mut self, node: NodeId) -> u32 {
        if let Some(&v) = self.index.get(&node) {
            return v;
        }
        let v = self.new_var();
        self.nodes[v as usize] = Some(node);
        self.index.insert(node, v);
        v
    }

    pub fn var_of(&self, node: NodeId) -> Option<u32> {
        self.index.get(&node).copied()
    }

    pub fn node_of(&self, var: u32) -> Option<NodeId> {
        self.nodes.get(var as usize).copied().flatten()
    }

    /// Adds a clause. Panics on an empty clause or an undeclared variable.
    pub fn add_clause(&mut self, lits: &[Lit]) {
        assert!(!lits.is_empty(), "empty clauses are not representable");
        assert!(
            lits.iter().all(|l| l.var() < self.num_vars),
            "clause uses an undeclared variable"
        );
        self.clauses.push(lits.to_vec());
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let _ = write!(out, "{} ", l.to_dimacs());
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn parse_dimacs(text: &str) -> Result<Cnf, SatError> {
        let mut cnf = Cnf::new();
        let mut current = Vec::new();
        let mut header = false;
        for (i, line) in text.lines().enumerate() {
            let err = |msg: String| SatError::Dimacs { line: i + 1, msg };
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let f: Vec<&str> = rest.split_whitespace().collect();
                let vars = match f.as_slice() {
                    ["cnf", v, _] => v.parse::<u32>().map_err(|e| err(e.to_string()))?,
                    _ => return Err(err("malformed header".into())),
                };
                for _ in 0..vars {
                    cnf.new_var();
                }
                header = true;
                continue;
            }
            if !header {
                return Err(err("clause before the header".into()));
            }
            for w in line.split_whitespace() {
                let x: i64 = w.parse().map_err(|_| err(format!("`{w}` is not a literal")))?;
                if x == 0 {
                    if current.is_empty() {
                        return Err(err("empty clause".into()));
                    }
                    let lits: Vec<Lit> = std::mem::take(&mut current);
                    if lits.iter().any(|l: &Lit| l.var() >= cnf.num_vars) {
                        return Err(err("literal exceeds the declared variables".into()));
                    }
                    cnf.clauses.push(lits);
                } else {
                    current.push(Lit::from_dimacs(x));
                }
            }
        }
        Ok(cnf)
    }
}

/// Result of a query. `M` is the model type: a full assignment for raw
/// solving, a [`Counterexample`] for equivalence queries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatOutcome<M = Vec<bool>> {
    Unsat,
    Sat(M),
    /// The conflict limit was reached first.
    Undet,
}

impl<M> SatOutcome<M> {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatOutcome::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SatOutcome::Unsat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals() {
        let a = Lit::pos(3);
        assert_eq!(a.var(), 3);
        assert!(!a.is_negated());
        assert!((!a).is_negated());
        assert_eq!(!!a, a);
        assert_eq!((!a).to_dimacs(), -4);
        assert_eq!(Lit::from_dimacs(-4), !a);
    }

    #[test]
    fn dimacs_round_trip() {
        let mut cnf = Cnf::new();
        let x = cnf.new_var();
        let y = cnf.node_var(NodeId(7));
        cnf.add_clause(&[Lit::pos(x), Lit::neg(y)]);
        cnf.add_clause(&[Lit::pos(y)]);
        let text = cnf.to_dimacs();
        assert_eq!(text, "p cnf 2 2\n1 -2 0\n2 0\n");
        let back = Cnf::parse_dimacs(&format!("c hi\n{text}")).unwrap();
        assert_eq!(back.clauses(), cnf.clauses());
        assert_eq!(cnf.node_of(y), Some(NodeId(7)));
        assert_eq!(cnf.var_of(NodeId(7)), Some(y));
        assert!(Cnf::parse_dimacs("p cnf 1 1\n2 0\n").is_err());
    }
}
