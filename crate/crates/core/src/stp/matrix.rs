//! Dense integer matrices with the Kronecker and semi-tensor products.
//!
//! These are the reference realizations of the algebra. Everything that has
//! to be fast works on [`LogicMatrix`](super::LogicMatrix) instead and is
//! checked against the dense forms in tests.

use std::fmt;

use super::StpError;

/// A dense `rows x cols` integer matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Result<Self, StpError> {
        if rows == 0 || cols == 0 {
            return Err(StpError::EmptyMatrix { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(StpError::EntryCount {
                rows,
                cols,
                got: data.len(),
            });
        }
        Ok(IntMatrix { rows, cols, data })
    }

    /// Builds a matrix from row slices. All rows must have the same length.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, StpError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(StpError::EntryCount {
                    rows: rows.len(),
                    cols,
                    got: data.len() + r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        IntMatrix::new(rows.len(), cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// The `n x n` identity.
    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// A column vector.
    pub fn column(entries: &[i64]) -> Result<Self, StpError> {
        IntMatrix::new(entries.len(), 1, entries.to_vec())
    }

    /// A row vector.
    pub fn row(entries: &[i64]) -> Result<Self, StpError> {
        IntMatrix::new(1, entries.len(), entries.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: i64) {
        self.data[row * self.cols + col] = value;
    }

    pub fn entries(&self) -> &[i64] {
        &self.data
    }

    pub fn is_binary(&self) -> bool {
        self.data.iter().all(|&v| v == 0 || v == 1)
    }

    /// Ordinary matrix product; the inner dimensions must agree.
    pub fn product(&self, rhs: &IntMatrix) -> Result<IntMatrix, StpError> {
        if self.cols != rhs.rows {
            return Err(StpError::DimensionMismatch {
                left: self.cols,
                right: rhs.rows,
            });
        }
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// Kronecker product: block `(i, j)` of the result is `a[i, j] * b`.
pub fn kronecker(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = IntMatrix::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let s = a.get(i, j);
            if s == 0 {
                continue;
            }
            for p in 0..b.rows {
                let base = (i * b.rows + p) * cols + j * b.cols;
                for q in 0..b.cols {
                    out.data[base + q] = s * b.get(p, q);
                }
            }
        }
    }
    out
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Semi-tensor product `(a ⊗ I_{t/n}) · (b ⊗ I_{t/p})` with `t = lcm(n, p)`,
/// `n = a.cols()`, `p = b.rows()`.
///
/// Total for any pair of shapes. When `n == p` it is the ordinary product.
pub fn stp(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let t = lcm(a.cols, b.rows);
    let left = if t == a.cols {
        a.clone()
    } else {
        kronecker(a, &IntMatrix::identity(t / a.cols))
    };
    let right = if t == b.rows {
        b.clone()
    } else {
        kronecker(b, &IntMatrix::identity(t / b.rows))
    };
    left.product(&right)
        .expect("inner dimensions agree after expansion to the lcm")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn identity_kron_identity() {
        assert_eq!(
            kronecker(&IntMatrix::identity(2), &IntMatrix::identity(2)),
            IntMatrix::identity(4)
        );
    }

    #[test]
    fn true_vector_kron_identity() {
        let t = IntMatrix::column(&[1, 0]).unwrap();
        let k = kronecker(&t, &IntMatrix::identity(2));
        assert_eq!(k, m(&[&[1, 0], &[0, 1], &[0, 0], &[0, 0]]));
    }

    #[test]
    fn unit_factor_is_neutral() {
        let not = m(&[&[0, 1], &[1, 0]]);
        let one = IntMatrix::new(1, 1, vec![1]).unwrap();
        assert_eq!(kronecker(&not, &one), not);
        assert_eq!(kronecker(&one, &not), not);
    }

    #[test]
    fn stp_matches_product_when_dims_agree() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[0, 1], &[1, 1]]);
        assert_eq!(stp(&a, &b), a.product(&b).unwrap());
    }

    #[test]
    fn stp_or_not_is_implies() {
        let or = m(&[&[1, 1, 1, 0], &[0, 0, 0, 1]]);
        let not = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(stp(&or, &not), m(&[&[1, 0, 1, 1], &[0, 1, 0, 0]]));
    }

    #[test]
    fn stp_identity_with_vector() {
        for v in [[1, 0], [0, 1]] {
            let v = IntMatrix::column(&v).unwrap();
            assert_eq!(stp(&IntMatrix::identity(2), &v), v);
        }
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(
            IntMatrix::new(0, 2, vec![]),
            Err(StpError::EmptyMatrix { .. })
        ));
        assert!(matches!(
            IntMatrix::new(2, 2, vec![1]),
            Err(StpError::EntryCount { .. })
        ));
        let a = IntMatrix::identity(2);
        let b = IntMatrix::identity(3);
        assert!(matches!(
            a.product(&b),
            Err(StpError::DimensionMismatch { left: 2, right: 3 })
        ));
    }
}
