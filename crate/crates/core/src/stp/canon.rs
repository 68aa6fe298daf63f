//! Canonical forms `Φ(x_1, …, x_n) = M_Φ x_1 ⋯ x_n`.
//!
//! Three independent routes produce the same matrix:
//!
//! * [`Strategy::Enumerate`] evaluates the expression on all `2^n`
//!   assignments.
//! * [`Strategy::DenseStp`] works purely in the matrix algebra. Each
//!   subterm is a pair `(M, [x_i, …])`. Operands are pulled to the front with
//!   the swap rule `Z ⋉ A = (I_t ⊗ A) ⋉ Z`. Variables are then sorted with
//!   the swap matrix `W`, repeats are collapsed with the power-reducing
//!   matrix `M_r` (`x ⋉ x = M_r ⋉ x`), and absent variables are introduced
//!   with the dummy matrix `E_d` (`E_d ⋉ x ⋉ y = y`). Only usable for small
//!   `n`.
//! * [`Strategy::Composition`] keeps every subterm over the full variable
//!   set and combines operands with the Khatri–Rao product, which on logic
//!   matrices reduces to word-parallel table lookups. This is the route used
//!   by the simulator.

use super::{
    kronecker, stp, structural_matrix, BoolVec, BoolExpr, IntMatrix, LogicMatrix, Operator,
    StpError, MAX_ARITY,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    Enumerate,
    DenseStp,
    #[default]
    Composition,
}

/// Canonical form of `e` over `n` variables using [`Strategy::Composition`].
pub fn canonical_form(e: &BoolExpr, n: usize) -> Result<LogicMatrix, StpError> {
    canonical_form_with(e, n, Strategy::Composition)
}

pub fn canonical_form_with(
    e: &BoolExpr,
    n: usize,
    strategy: Strategy,
) -> Result<LogicMatrix, StpError> {
    if n > MAX_ARITY {
        return Err(StpError::ArityTooLarge(n));
    }
    e.validate(n)?;
    match strategy {
        Strategy::Enumerate => enumerate(e, n),
        Strategy::DenseStp => dense::canonical(e, n),
        Strategy::Composition => compose(e, n),
    }
}

fn enumerate(e: &BoolExpr, n: usize) -> Result<LogicMatrix, StpError> {
    let mut values = vec![false; n];
    LogicMatrix::from_fn(n, |a| {
        for (i, v) in values.iter_mut().enumerate() {
            *v = (a >> (n - 1 - i)) & 1 == 1;
        }
        e.eval(&values)
    })
}

fn compose(e: &BoolExpr, n: usize) -> Result<LogicMatrix, StpError> {
    match e {
        BoolExpr::Var(i) => LogicMatrix::projection(n, i - 1),
        BoolExpr::Const(b) => LogicMatrix::from_fn(n, |_| *b),
        BoolExpr::Not(c) => Ok(compose(c, n)?.complement()),
        BoolExpr::Binary(op, a, b) => {
            let (a, b) = (compose(a, n)?, compose(b, n)?);
            structural_matrix(*op).compose(&[&a, &b])
        }
        BoolExpr::Lut(tt, cs) if cs.is_empty() => {
            if tt.arity() != 0 {
                return Err(StpError::LutArity {
                    expected: tt.arity(),
                    got: 0,
                });
            }
            LogicMatrix::from_fn(n, |_| tt.value(0))
        }
        BoolExpr::Lut(tt, cs) => {
            let children = cs
                .iter()
                .map(|c| compose(c, n))
                .collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&LogicMatrix> = children.iter().collect();
            tt.compose(&refs)
        }
    }
}

/// Folds the variable vectors of one assignment through a canonical form.
/// `assignment[i]` is the value of `x_{i+1}`.
pub fn evaluate(m: &LogicMatrix, assignment: &[bool]) -> Result<bool, StpError> {
    let vecs: Vec<BoolVec> = assignment.iter().map(|&b| BoolVec::from(b)).collect();
    Ok(m.apply_all(&vecs)?.value())
}

/// The dense helper matrices used by the pure-algebra route.
pub mod dense {
    use super::*;

    /// Swap matrix `W_[2,2]`: `W ⋉ x ⋉ y = y ⋉ x`.
    pub fn swap_matrix() -> IntMatrix {
        IntMatrix::from_rows(&[[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]).unwrap()
    }

    /// Power-reducing matrix `M_r`: `x ⋉ x = M_r ⋉ x`.
    pub fn power_reducing_matrix() -> IntMatrix {
        IntMatrix::from_rows(&[[1, 0], [0, 0], [0, 0], [0, 1]]).unwrap()
    }

    /// Dummy matrix `E_d`: `E_d ⋉ x ⋉ y = y`.
    pub fn dummy_matrix() -> IntMatrix {
        IntMatrix::from_rows(&[[1, 0, 1, 0], [0, 1, 0, 1]]).unwrap()
    }

    fn checked(m: IntMatrix) -> IntMatrix {
        debug_assert!(m.is_binary(), "logic product left {{0,1}}: {m:?}");
        m
    }

    /// `m ⋉ (I_{2^pos} ⊗ a)`.
    fn at(m: &IntMatrix, pos: usize, a: &IntMatrix) -> IntMatrix {
        checked(stp(m, &kronecker(&IntMatrix::identity(1 << pos), a)))
    }

    struct Term {
        m: IntMatrix,
        vars: Vec<usize>,
    }

    fn term(e: &BoolExpr) -> Term {
        match e {
            BoolExpr::Var(i) => Term {
                m: IntMatrix::identity(2),
                vars: vec![*i],
            },
            BoolExpr::Const(b) => Term {
                m: BoolVec::from(*b).to_matrix(),
                vars: vec![],
            },
            BoolExpr::Not(c) => apply(structural_matrix(Operator::Not).to_dense(), &[c]),
            BoolExpr::Binary(op, a, b) => apply(structural_matrix(*op).to_dense(), &[a, b]),
            BoolExpr::Lut(tt, cs) => {
                let refs: Vec<&BoolExpr> = cs.iter().collect();
                apply(tt.to_dense(), &refs)
            }
        }
    }

    /// `M_σ ⋉ (M_1 X_1) ⋉ (M_2 X_2) ⋯`, moving each `M_i` in front of the
    /// variables already collected: `X ⋉ M = (I ⊗ M) ⋉ X`.
    fn apply(op: IntMatrix, children: &[&BoolExpr]) -> Term {
        let mut m = op;
        let mut vars = Vec::new();
        for child in children {
            let t = term(child);
            m = at(&m, vars.len(), &t.m);
            vars.extend(t.vars);
        }
        normalize(Term { m, vars })
    }

    /// Sorts the variable list with `W` and merges repeats with `M_r`.
    fn normalize(mut t: Term) -> Term {
        let w = swap_matrix();
        let len = t.vars.len();
        for pass in 0..len {
            for j in 0..len.saturating_sub(1 + pass) {
                if t.vars[j] > t.vars[j + 1] {
                    t.m = at(&t.m, j, &w);
                    t.vars.swap(j, j + 1);
                }
            }
        }
        let r = power_reducing_matrix();
        let mut j = 0;
        while j + 1 < t.vars.len() {
            if t.vars[j] == t.vars[j + 1] {
                t.m = at(&t.m, j, &r);
                t.vars.remove(j + 1);
            } else {
                j += 1;
            }
        }
        t
    }

    pub(super) fn canonical(e: &BoolExpr, n: usize) -> Result<LogicMatrix, StpError> {
        let mut t = term(e);
        let ed = dummy_matrix();
        for v in 1..=n {
            let pos = t.vars.partition_point(|&x| x < v);
            if t.vars.get(pos) == Some(&v) {
                continue;
            }
            t.m = if pos < t.vars.len() {
                at(&t.m, pos, &ed)
            } else {
                kronecker(&t.m, &IntMatrix::row(&[1, 1]).unwrap())
            };
            t.vars.insert(pos, v);
        }
        LogicMatrix::try_from_dense(&t.m)
    }
}
