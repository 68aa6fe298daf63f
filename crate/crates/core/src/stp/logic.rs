//! Boolean vectors, logic matrices and the structural matrices of the basic
//! operators.
//!
//! A logic matrix of arity `k` is a `2 x 2^k` 0/1 matrix whose every column is
//! a Boolean vector. Only the top row carries information, so it is stored as
//! a `2^k`-bit table.
//!
//! # Column order
//!
//! Columns are read **right to left** with respect to the usual truth-table
//! enumeration: the leftmost column is the assignment where every input is
//! true, the rightmost is the all-false assignment. The first variable is the
//! most significant one. The two-input NAND therefore prints as `0111`
//! (columns `11, 10, 01, 00`). Most EDA tools print the opposite order.
//!
//! Internally the table is kept in ascending assignment order (bit `a` holds
//! the value for the assignment whose unsigned value is `a`), which is the
//! column at position `2^k - 1 - a`.

use std::fmt;
use std::str::FromStr;

use super::{IntMatrix, StpError};

/// Largest supported arity (a 16 MiB table).
pub const MAX_ARITY: usize = 24;

/// A Boolean value in vector form: `True = (1, 0)ᵀ`, `False = (0, 1)ᵀ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoolVec {
    True,
    False,
}

impl BoolVec {
    pub fn value(self) -> bool {
        self == BoolVec::True
    }

    /// The `2 x 1` column realization.
    pub fn to_matrix(self) -> IntMatrix {
        match self {
            BoolVec::True => IntMatrix::column(&[1, 0]).unwrap(),
            BoolVec::False => IntMatrix::column(&[0, 1]).unwrap(),
        }
    }

    pub fn try_from_matrix(m: &IntMatrix) -> Result<BoolVec, StpError> {
        if m.rows() != 2 || m.cols() != 1 {
            return Err(StpError::NotLogic(0));
        }
        match (m.get(0, 0), m.get(1, 0)) {
            (1, 0) => Ok(BoolVec::True),
            (0, 1) => Ok(BoolVec::False),
            _ => Err(StpError::NotLogic(0)),
        }
    }
}

impl From<bool> for BoolVec {
    fn from(b: bool) -> Self {
        if b {
            BoolVec::True
        } else {
            BoolVec::False
        }
    }
}

impl std::ops::Not for BoolVec {
    type Output = BoolVec;

    fn not(self) -> BoolVec {
        BoolVec::from(!self.value())
    }
}

/// Operators with a fixed structural matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operator {
    Not,
    And,
    Or,
    Xor,
    Implies,
    Iff,
}

impl Operator {
    pub fn arity(self) -> usize {
        match self {
            Operator::Not => 1,
            _ => 2,
        }
    }

    /// Evaluates the operator on plain booleans (`b` ignored for `Not`).
    pub fn eval(self, a: bool, b: bool) -> bool {
        match self {
            Operator::Not => !a,
            Operator::And => a && b,
            Operator::Or => a || b,
            Operator::Xor => a != b,
            Operator::Implies => !a || b,
            Operator::Iff => a == b,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Operator::Not => "~",
            Operator::And => "&",
            Operator::Or => "|",
            Operator::Xor => "^",
            Operator::Implies => "->",
            Operator::Iff => "<->",
        }
    }
}

impl FromStr for Operator {
    type Err = StpError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "~" | "!" | "not" => Operator::Not,
            "&" | "and" => Operator::And,
            "|" | "or" => Operator::Or,
            "^" | "xor" => Operator::Xor,
            "->" | "implies" => Operator::Implies,
            "<->" | "iff" | "xnor" => Operator::Iff,
            _ => return Err(StpError::UnknownOperator(s.to_string())),
        })
    }
}

/// The structural matrix of `op`.
///
/// `M_¬ = [[0,1],[1,0]]`; binary operators have their columns ordered
/// `ab = 11, 10, 01, 00` from left to right, e.g. `M_∨` is `1110`.
pub fn structural_matrix(op: Operator) -> LogicMatrix {
    match op {
        Operator::Not => LogicMatrix::from_fn(1, |a| op.eval(a == 1, false)).unwrap(),
        _ => LogicMatrix::from_fn(2, |a| op.eval(a & 2 != 0, a & 1 != 0)).unwrap(),
    }
}

/// A `2 x 2^k` logic matrix stored as its top row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LogicMatrix {
    arity: u8,
    words: Vec<u64>,
}

fn word_count(arity: usize) -> usize {
    if arity <= 6 {
        1
    } else {
        1 << (arity - 6)
    }
}

fn tail_mask(arity: usize) -> u64 {
    if arity >= 6 {
        !0
    } else {
        (1u64 << (1 << arity)) - 1
    }
}

/// Bit pattern of the projection on assignment bit `s` (`s < 6`) within a word.
const PROJECTION_WORDS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

impl LogicMatrix {
    fn check_arity(arity: usize) -> Result<(), StpError> {
        if arity > MAX_ARITY {
            Err(StpError::ArityTooLarge(arity))
        } else {
            Ok(())
        }
    }

    /// Builds the matrix whose value on assignment `a` (first variable most
    /// significant) is `f(a)`.
    pub fn from_fn(arity: usize, mut f: impl FnMut(usize) -> bool) -> Result<Self, StpError> {
        Self::check_arity(arity)?;
        let mut words = vec![0u64; word_count(arity)];
        for a in 0..(1usize << arity) {
            if f(a) {
                words[a >> 6] |= 1 << (a & 63);
            }
        }
        Ok(LogicMatrix {
            arity: arity as u8,
            words,
        })
    }

    /// Wraps a table in ascending assignment order. Bits past `2^arity` are
    /// cleared.
    pub fn from_words(arity: usize, mut words: Vec<u64>) -> Result<Self, StpError> {
        Self::check_arity(arity)?;
        let n = word_count(arity);
        words.resize(n, 0);
        words[n - 1] &= tail_mask(arity);
        if arity < 6 {
            words[0] &= tail_mask(arity);
        }
        Ok(LogicMatrix {
            arity: arity as u8,
            words,
        })
    }

    /// Arity-0 matrix: the Boolean vector of `value`.
    pub fn constant(value: bool) -> Self {
        LogicMatrix {
            arity: 0,
            words: vec![value as u64],
        }
    }

    /// The canonical form of `x_var` (0-based) over `n` variables.
    pub fn projection(n: usize, var: usize) -> Result<Self, StpError> {
        Self::check_arity(n)?;
        assert!(var < n, "projection variable out of range");
        let shift = n - 1 - var;
        let mut words = vec![0u64; word_count(n)];
        if shift < 6 {
            words.iter_mut().for_each(|w| *w = PROJECTION_WORDS[shift]);
        } else {
            let block = 1usize << (shift - 6);
            for (i, w) in words.iter_mut().enumerate() {
                if (i / block) & 1 == 1 {
                    *w = !0;
                }
            }
        }
        LogicMatrix::from_words(n, words)
    }

    /// The identity logic matrix `I_2`, i.e. the canonical form of `x_1`.
    pub fn identity() -> Self {
        LogicMatrix::projection(1, 0).unwrap()
    }

    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    pub fn columns(&self) -> usize {
        1 << self.arity
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Value on assignment `a` (ascending order, first variable MSB).
    pub fn value(&self, a: usize) -> bool {
        (self.words[a >> 6] >> (a & 63)) & 1 == 1
    }

    /// Column `p`, counted from the left.
    pub fn column(&self, p: usize) -> BoolVec {
        BoolVec::from(self.value(self.columns() - 1 - p))
    }

    /// Evaluates on explicit input values, first variable first.
    pub fn eval(&self, inputs: &[bool]) -> bool {
        assert_eq!(inputs.len(), self.arity(), "input count must match arity");
        let a = inputs.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        self.value(a)
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_constant(&self) -> Option<bool> {
        match self.count_ones() {
            0 => Some(false),
            n if n == self.columns() as u64 => Some(true),
            _ => None,
        }
    }

    /// `M_¬ ⋉ self`.
    pub fn complement(&self) -> LogicMatrix {
        let words = self.words.iter().map(|w| !w).collect();
        LogicMatrix::from_words(self.arity(), words).unwrap()
    }

    /// Complements input `var` (0-based): `g(.., x, ..) = f(.., ¬x, ..)`.
    pub fn negate_input(&self, var: usize) -> LogicMatrix {
        assert!(var < self.arity(), "input out of range");
        let bit = 1usize << (self.arity() - 1 - var);
        LogicMatrix::from_fn(self.arity(), |a| self.value(a ^ bit)).unwrap()
    }

    /// `self ⋉ v`: `True` keeps the left half of the columns, `False` the
    /// right half.
    pub fn apply(&self, v: BoolVec) -> Result<LogicMatrix, StpError> {
        let k = self.arity();
        if k == 0 {
            return Err(StpError::ZeroArity);
        }
        let half = 1usize << (k - 1);
        let offset = if v.value() { half } else { 0 };
        if k > 6 {
            let start = offset >> 6;
            let words = self.words[start..start + (half >> 6)].to_vec();
            LogicMatrix::from_words(k - 1, words)
        } else {
            LogicMatrix::from_words(k - 1, vec![self.words[0] >> offset])
        }
    }

    /// Folds `self ⋉ v_1 ⋉ … ⋉ v_k` down to a single Boolean vector.
    pub fn apply_all(&self, values: &[BoolVec]) -> Result<BoolVec, StpError> {
        if values.len() != self.arity() {
            return Err(StpError::LutArity {
                expected: self.arity(),
                got: values.len(),
            });
        }
        let mut m = self.clone();
        for &v in values {
            m = m.apply(v)?;
        }
        Ok(BoolVec::from(m.value(0)))
    }

    /// Dense `2 x 2^k` realization.
    pub fn to_dense(&self) -> IntMatrix {
        let cols = self.columns();
        let mut m = IntMatrix::zeros(2, cols);
        for p in 0..cols {
            let top = self.column(p).value();
            m.set(0, p, top as i64);
            m.set(1, p, !top as i64);
        }
        m
    }

    /// Parses a dense `2 x 2^k` matrix; every column must be a Boolean vector.
    pub fn try_from_dense(m: &IntMatrix) -> Result<Self, StpError> {
        if m.rows() != 2 || !m.cols().is_power_of_two() {
            return Err(StpError::BadRowLength(m.cols()));
        }
        let arity = m.cols().trailing_zeros() as usize;
        for p in 0..m.cols() {
            match (m.get(0, p), m.get(1, p)) {
                (1, 0) | (0, 1) => {}
                _ => return Err(StpError::NotLogic(p)),
            }
        }
        let cols = m.cols();
        LogicMatrix::from_fn(arity, |a| m.get(0, cols - 1 - a) == 1)
    }

    /// The top row as a 0/1 string, leftmost column first.
    pub fn truth_row(&self) -> String {
        (0..self.columns())
            .map(|p| if self.column(p).value() { '1' } else { '0' })
            .collect()
    }

    /// The composition `self ⋉ (c_1 ∗ c_2 ∗ … ∗ c_k)` where `∗` is the
    /// column-wise Khatri–Rao product and every child shares the same
    /// variables.
    ///
    /// For a shared variable vector `x`, `(M_1 x)(M_2 x) = (M_1 ∗ M_2) x`, so
    /// this is the canonical form of `σ(g_1(x), …, g_k(x))`. Column `j` of the
    /// result is `self` applied to the `j`-th columns of the children, which
    /// makes the product a word-parallel table lookup.
    pub fn compose(&self, children: &[&LogicMatrix]) -> Result<LogicMatrix, StpError> {
        if children.len() != self.arity() {
            return Err(StpError::LutArity {
                expected: self.arity(),
                got: children.len(),
            });
        }
        let Some(first) = children.first() else {
            return Ok(self.clone());
        };
        let n = first.arity();
        if children.iter().any(|c| c.arity() != n) {
            return Err(StpError::LutArity {
                expected: n,
                got: children.iter().map(|c| c.arity()).max().unwrap_or(0),
            });
        }
        let mut eval = LutEval::default();
        let mut inputs = vec![0u64; children.len()];
        let words = (0..first.words.len())
            .map(|w| {
                for (slot, c) in inputs.iter_mut().zip(children) {
                    *slot = c.words[w];
                }
                eval.word(self, &inputs)
            })
            .collect();
        LogicMatrix::from_words(n, words)
    }
}

/// Dense Khatri–Rao (column-wise Kronecker) product of logic matrices with a
/// common arity.
pub fn khatri_rao(factors: &[&LogicMatrix]) -> IntMatrix {
    assert!(!factors.is_empty(), "need at least one factor");
    let cols = factors[0].columns();
    let rows = 1usize << factors.len();
    let mut out = IntMatrix::zeros(rows, cols);
    for p in 0..cols {
        // Kronecker of Boolean vectors: a single 1 at the row indexing the
        // falses, first factor most significant.
        let row = factors.iter().fold(0usize, |acc, f| {
            (acc << 1) | (!f.column(p).value()) as usize
        });
        out.set(row, p, 1);
    }
    out
}

impl fmt::Display for LogicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.truth_row())
    }
}

impl fmt::Debug for LogicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arity() <= 8 {
            write!(f, "LogicMatrix({})", self.truth_row())
        } else {
            write!(f, "LogicMatrix(arity {})", self.arity())
        }
    }
}

impl FromStr for LogicMatrix {
    type Err = StpError;

    /// Parses a truth row, leftmost column first (`"0111"` is NAND).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || !s.len().is_power_of_two() {
            return Err(StpError::BadRowLength(s.len()));
        }
        if let Some(c) = s.chars().find(|c| *c != '0' && *c != '1') {
            return Err(StpError::BadRowChar(c));
        }
        let bytes = s.as_bytes();
        let cols = bytes.len();
        LogicMatrix::from_fn(cols.trailing_zeros() as usize, |a| bytes[cols - 1 - a] == b'1')
    }
}

/// Word-parallel evaluation of a truth table on packed input words.
///
/// Keeps a scratch buffer so repeated calls do not allocate.
#[derive(Default, Debug, Clone)]
pub struct LutEval {
    scratch: Vec<u64>,
}

impl LutEval {
    /// Output word of `tt` for the packed input words (one per variable,
    /// first variable first).
    pub fn word(&mut self, tt: &LogicMatrix, inputs: &[u64]) -> u64 {
        let k = inputs.len();
        debug_assert_eq!(k, tt.arity());
        match k {
            0 => {
                if tt.value(0) {
                    !0
                } else {
                    0
                }
            }
            1 => match tt.words[0] & 3 {
                0 => 0,
                1 => !inputs[0],
                2 => inputs[0],
                _ => !0,
            },
            2 => {
                let (a, b) = (inputs[0], inputs[1]);
                let t = tt.words[0];
                let mut out = 0;
                if t & 1 != 0 {
                    out |= !a & !b;
                }
                if t & 2 != 0 {
                    out |= !a & b;
                }
                if t & 4 != 0 {
                    out |= a & !b;
                }
                if t & 8 != 0 {
                    out |= a & b;
                }
                out
            }
            _ => {
                // Shannon fold from the least significant variable upwards.
                let n = 1usize << k;
                self.scratch.clear();
                let last = inputs[k - 1];
                for pair in 0..n / 2 {
                    let lo = tt.value(2 * pair);
                    let hi = tt.value(2 * pair + 1);
                    self.scratch.push(match (lo, hi) {
                        (false, false) => 0,
                        (true, true) => !0,
                        (false, true) => last,
                        (true, false) => !last,
                    });
                }
                let mut len = n / 2;
                for var in (0..k - 1).rev() {
                    let x = inputs[var];
                    for i in 0..len / 2 {
                        let lo = self.scratch[2 * i];
                        let hi = self.scratch[2 * i + 1];
                        self.scratch[i] = (x & hi) | (!x & lo);
                    }
                    len /= 2;
                }
                self.scratch[0]
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::stp;
    use super::*;

    fn lm(s: &str) -> LogicMatrix {
        s.parse().unwrap()
    }

    #[test]
    fn structural_matrices() {
        assert_eq!(structural_matrix(Operator::Or).truth_row(), "1110");
        assert_eq!(structural_matrix(Operator::And).truth_row(), "1000");
        assert_eq!(structural_matrix(Operator::Implies).truth_row(), "1011");
        assert_eq!(structural_matrix(Operator::Iff).truth_row(), "1001");
        assert_eq!(structural_matrix(Operator::Xor).truth_row(), "0110");
        assert_eq!(
            structural_matrix(Operator::Not).to_dense(),
            IntMatrix::from_rows(&[[0, 1], [1, 0]]).unwrap()
        );
    }

    #[test]
    fn operator_symbols() {
        assert_eq!("->".parse::<Operator>().unwrap(), Operator::Implies);
        assert_eq!("AND".parse::<Operator>().unwrap(), Operator::And);
        assert!(matches!(
            "nand?".parse::<Operator>(),
            Err(StpError::UnknownOperator(_))
        ));
    }

    #[test]
    fn truth_row_round_trip() {
        for s in ["0", "1", "10", "0111", "11110001", "0110100110010110"] {
            assert_eq!(lm(s).truth_row(), s);
        }
        assert!(matches!(
            "011".parse::<LogicMatrix>(),
            Err(StpError::BadRowLength(3))
        ));
        assert!(matches!(
            "01x1".parse::<LogicMatrix>(),
            Err(StpError::BadRowChar('x'))
        ));
    }

    #[test]
    fn nand_columns_follow_right_to_left_order() {
        let nand = lm("0111");
        assert!(!nand.eval(&[true, true]));
        assert!(nand.eval(&[true, false]));
        assert!(nand.eval(&[false, true]));
        assert!(nand.eval(&[false, false]));
    }

    #[test]
    fn apply_selects_halves() {
        let liar = lm("00000100");
        let step = liar.apply(BoolVec::False).unwrap();
        assert_eq!(step.truth_row(), "0100");
        let step = step.apply(BoolVec::True).unwrap();
        assert_eq!(step.truth_row(), "01");
        let step = step.apply(BoolVec::False).unwrap();
        assert_eq!(step.truth_row(), "1");
        assert_eq!(
            structural_matrix(Operator::Not).apply(BoolVec::True).unwrap(),
            LogicMatrix::constant(false)
        );
        assert!(matches!(
            LogicMatrix::constant(true).apply(BoolVec::True),
            Err(StpError::ZeroArity)
        ));
    }

    #[test]
    fn apply_on_wide_tables() {
        let m = LogicMatrix::from_fn(9, |a| a % 7 == 3).unwrap();
        for v in [BoolVec::True, BoolVec::False] {
            let dense = stp(&m.to_dense(), &v.to_matrix());
            assert_eq!(m.apply(v).unwrap().to_dense(), dense);
        }
    }

    #[test]
    fn dense_round_trip_and_errors() {
        let m = lm("10110010");
        assert_eq!(LogicMatrix::try_from_dense(&m.to_dense()).unwrap(), m);
        let bad = IntMatrix::from_rows(&[[1, 1], [1, 0]]).unwrap();
        assert!(matches!(
            LogicMatrix::try_from_dense(&bad),
            Err(StpError::NotLogic(0))
        ));
    }

    #[test]
    fn projections() {
        assert_eq!(LogicMatrix::identity().truth_row(), "10");
        assert_eq!(LogicMatrix::projection(2, 0).unwrap().truth_row(), "1100");
        assert_eq!(LogicMatrix::projection(2, 1).unwrap().truth_row(), "1010");
        let p = LogicMatrix::projection(8, 1).unwrap();
        for a in 0..256 {
            assert_eq!(p.value(a), a & 0x40 != 0);
        }
    }

    #[test]
    fn negate_input_and_complement() {
        let and = structural_matrix(Operator::And);
        // a & ¬b : true only at a=1, b=0
        assert_eq!(and.negate_input(1).truth_row(), "0100");
        assert_eq!(and.complement().truth_row(), "0111");
    }

    #[test]
    fn arity_cap() {
        assert!(matches!(
            LogicMatrix::from_fn(MAX_ARITY + 1, |_| false),
            Err(StpError::ArityTooLarge(_))
        ));
    }

    #[test]
    fn khatri_rao_of_projections_is_identity() {
        let x1 = LogicMatrix::projection(2, 0).unwrap();
        let x2 = LogicMatrix::projection(2, 1).unwrap();
        assert_eq!(khatri_rao(&[&x1, &x2]), IntMatrix::identity(4));
    }

    #[test]
    fn lut_eval_matches_scalar() {
        let mut eval = LutEval::default();
        for k in 0..=7usize {
            let tt = LogicMatrix::from_fn(k, |a| (a * 2654435761usize) >> 7 & 1 == 1).unwrap();
            let inputs: Vec<u64> = (0..k)
                .map(|i| 0x9E37_79B9_7F4A_7C15u64.rotate_left(i as u32 * 11) ^ (i as u64 * 77))
                .collect();
            let out = eval.word(&tt, &inputs);
            for bit in 0..64 {
                let vals: Vec<bool> = inputs.iter().map(|w| (w >> bit) & 1 == 1).collect();
                assert_eq!((out >> bit) & 1 == 1, tt.eval(&vals), "k={k} bit={bit}");
            }
        }
    }
}
