//! Boolean expression trees and a small infix parser.
//!
//! Grammar, loosest binding first: `<->`, `->` (right associative), `|`,
//! `^`, `&`, prefix `~`. Variables are single letters or `x<k>`; `0` and `1`
//! are constants.

use std::collections::BTreeSet;
use std::fmt;

use super::{LogicMatrix, Operator, StpError};

/// An expression over variables `x_1..x_n` (indices are 1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoolExpr {
    Var(usize),
    Const(bool),
    Not(Box<BoolExpr>),
    Binary(Operator, Box<BoolExpr>, Box<BoolExpr>),
    /// A lookup table applied to its children; the table's first input is the
    /// first child.
    Lut(LogicMatrix, Vec<BoolExpr>),
}

impl BoolExpr {
    pub fn var(i: usize) -> BoolExpr {
        BoolExpr::Var(i)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: BoolExpr) -> BoolExpr {
        BoolExpr::Not(Box::new(e))
    }

    pub fn binary(op: Operator, a: BoolExpr, b: BoolExpr) -> BoolExpr {
        assert_ne!(op, Operator::Not, "`not` is unary");
        BoolExpr::Binary(op, Box::new(a), Box::new(b))
    }

    pub fn and(a: BoolExpr, b: BoolExpr) -> BoolExpr {
        BoolExpr::binary(Operator::And, a, b)
    }

    pub fn or(a: BoolExpr, b: BoolExpr) -> BoolExpr {
        BoolExpr::binary(Operator::Or, a, b)
    }

    pub fn xor(a: BoolExpr, b: BoolExpr) -> BoolExpr {
        BoolExpr::binary(Operator::Xor, a, b)
    }

    pub fn implies(a: BoolExpr, b: BoolExpr) -> BoolExpr {
        BoolExpr::binary(Operator::Implies, a, b)
    }

    pub fn iff(a: BoolExpr, b: BoolExpr) -> BoolExpr {
        BoolExpr::binary(Operator::Iff, a, b)
    }

    /// Largest variable index used, 0 for a closed expression.
    pub fn max_var(&self) -> usize {
        match self {
            BoolExpr::Var(i) => *i,
            BoolExpr::Const(_) => 0,
            BoolExpr::Not(e) => e.max_var(),
            BoolExpr::Binary(_, a, b) => a.max_var().max(b.max_var()),
            BoolExpr::Lut(_, cs) => cs.iter().map(BoolExpr::max_var).max().unwrap_or(0),
        }
    }

    /// Checks variable ranges and LUT arities against `n` variables.
    pub fn validate(&self, n: usize) -> Result<(), StpError> {
        match self {
            BoolExpr::Var(i) => {
                if *i == 0 || *i > n {
                    Err(StpError::VarOutOfRange { index: *i, n })
                } else {
                    Ok(())
                }
            }
            BoolExpr::Const(_) => Ok(()),
            BoolExpr::Not(e) => e.validate(n),
            BoolExpr::Binary(_, a, b) => {
                a.validate(n)?;
                b.validate(n)
            }
            BoolExpr::Lut(tt, cs) => {
                if tt.arity() != cs.len() {
                    return Err(StpError::LutArity {
                        expected: tt.arity(),
                        got: cs.len(),
                    });
                }
                cs.iter().try_for_each(|c| c.validate(n))
            }
        }
    }

    /// Evaluates under `values[i - 1] = x_i`.
    pub fn eval(&self, values: &[bool]) -> bool {
        match self {
            BoolExpr::Var(i) => values[*i - 1],
            BoolExpr::Const(b) => *b,
            BoolExpr::Not(e) => !e.eval(values),
            BoolExpr::Binary(op, a, b) => op.eval(a.eval(values), b.eval(values)),
            BoolExpr::Lut(tt, cs) => {
                let inputs: Vec<bool> = cs.iter().map(|c| c.eval(values)).collect();
                tt.eval(&inputs)
            }
        }
    }

    /// Parses one expression; variables are numbered by their sorted names.
    pub fn parse(text: &str) -> Result<(BoolExpr, Vec<String>), StpError> {
        let (mut exprs, names) = BoolExpr::parse_many(&[text])?;
        Ok((exprs.remove(0), names))
    }

    /// Parses several expressions over one shared variable table. Names are
    /// ordered alphabetically, with `x<k>` names ordered by `k`.
    pub fn parse_many(texts: &[&str]) -> Result<(Vec<BoolExpr>, Vec<String>), StpError> {
        let mut token_lists = Vec::with_capacity(texts.len());
        let mut names = BTreeSet::new();
        for text in texts {
            let tokens = tokenize(text)?;
            for (tok, _) in &tokens {
                if let Token::Ident(name) = tok {
                    names.insert(VarName(name.clone()));
                }
            }
            token_lists.push(tokens);
        }
        let names: Vec<String> = names.into_iter().map(|n| n.0).collect();
        let exprs = token_lists
            .into_iter()
            .map(|tokens| {
                let mut p = Parser {
                    tokens,
                    pos: 0,
                    names: &names,
                };
                let e = p.iff()?;
                match p.tokens.get(p.pos) {
                    None => Ok(e),
                    Some((_, at)) => Err(StpError::Parse {
                        pos: *at,
                        msg: "unexpected trailing input".into(),
                    }),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok((exprs, names))
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoolExpr::Var(i) => write!(f, "x{i}"),
            BoolExpr::Const(b) => write!(f, "{}", *b as u8),
            BoolExpr::Not(e) => write!(f, "~{e}"),
            BoolExpr::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            BoolExpr::Lut(tt, cs) => {
                write!(f, "lut[{tt}](")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(PartialEq, Eq)]
struct VarName(String);

impl VarName {
    fn key(&self) -> (u8, u64, &str) {
        match self.0.strip_prefix('x').and_then(|d| d.parse::<u64>().ok()) {
            Some(k) => (1, k, ""),
            None => (0, 0, &self.0),
        }
    }
}

impl PartialOrd for VarName {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VarName {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Ident(String),
    Const(bool),
    Not,
    And,
    Or,
    Xor,
    Implies,
    Iff,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, StpError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '~' | '!' => Token::Not,
            '&' => Token::And,
            '|' => Token::Or,
            '^' => Token::Xor,
            '(' => Token::LParen,
            ')' => Token::RParen,
            '0' => Token::Const(false),
            '1' => Token::Const(true),
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Token::Implies
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                i += 2;
                Token::Iff
            }
            'x' if chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) => {
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let name: String = chars[i..j].iter().collect();
                i = j - 1;
                Token::Ident(name)
            }
            c if c.is_ascii_alphabetic() => Token::Ident(c.to_string()),
            other => {
                return Err(StpError::Parse {
                    pos: i,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map_or_else(|| self.tokens.last().map_or(0, |(_, p)| p + 1), |(_, p)| *p)
    }

    fn eat(&mut self, tok: &Token) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<BoolExpr, StpError> {
        let mut lhs = self.implies()?;
        while self.eat(&Token::Iff) {
            let rhs = self.implies()?;
            lhs = BoolExpr::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<BoolExpr, StpError> {
        let lhs = self.or()?;
        if self.eat(&Token::Implies) {
            let rhs = self.implies()?;
            return Ok(BoolExpr::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<BoolExpr, StpError> {
        let mut lhs = self.xor()?;
        while self.eat(&Token::Or) {
            let rhs = self.xor()?;
            lhs = BoolExpr::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn xor(&mut self) -> Result<BoolExpr, StpError> {
        let mut lhs = self.and()?;
        while self.eat(&Token::Xor) {
            let rhs = self.and()?;
            lhs = BoolExpr::xor(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<BoolExpr, StpError> {
        let mut lhs = self.unary()?;
        while self.eat(&Token::And) {
            let rhs = self.unary()?;
            lhs = BoolExpr::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<BoolExpr, StpError> {
        if self.eat(&Token::Not) {
            return Ok(BoolExpr::not(self.unary()?));
        }
        let at = self.here();
        match self.tokens.get(self.pos).map(|(t, _)| t.clone()) {
            Some(Token::LParen) => {
                self.pos += 1;
                let e = self.iff()?;
                if !self.eat(&Token::RParen) {
                    return Err(StpError::Parse {
                        pos: self.here(),
                        msg: "expected `)`".into(),
                    });
                }
                Ok(e)
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                let idx = self.names.iter().position(|n| *n == name).unwrap();
                Ok(BoolExpr::Var(idx + 1))
            }
            Some(Token::Const(b)) => {
                self.pos += 1;
                Ok(BoolExpr::Const(b))
            }
            _ => Err(StpError::Parse {
                pos: at,
                msg: "expected a variable, constant, `~` or `(`".into(),
            }),
        }
    }
}
