use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::AbelianGroup;
use crate::error::{Error, Result};

/// Dense integer matrix with unbounded entries, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::NotRectangular { rows, cols });
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::from(1);
        }
        m
    }

    /// Builds a matrix from rows; all rows must have equal length.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::NotRectangular { rows: rows.len(), cols });
        }
        let entries = rows.iter().flat_map(|r| r.iter().cloned().map(Into::into)).collect();
        Ok(IntMatrix { rows: rows.len(), cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        self.entries.chunks(self.cols.max(1)).take(self.rows).map(<[BigInt]>::to_vec).collect()
    }
}

impl FromStr for IntMatrix {
    type Err = Error;

    /// Row-major, `;` between rows, whitespace between entries: `"2 0; 0 3"`.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Ok(IntMatrix::zeros(0, 0));
        }
        let rows = s
            .split(';')
            .map(|row| {
                row.split_whitespace()
                    .map(|tok| tok.parse::<BigInt>().map_err(|_| Error::MatrixSyntax(format!("bad entry `{tok}`"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.iter().any(Vec::is_empty) {
            return Err(Error::MatrixSyntax("empty row".into()));
        }
        IntMatrix::from_rows(&rows)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .row_vecs()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        f.write_str(&rows.join("; "))
    }
}

/// Invariant factors `d_1 | d_2 | ... | d_r`, `r = min(rows, cols)`, of an
/// integer matrix. Zeros (if any) come last.
///
/// Each elimination round pivots on the nonzero entry of least absolute
/// value in the trailing submatrix, so the pivot strictly shrinks until it
/// divides its row, its column and the rest of the submatrix.
pub fn smith_normal_form(m: &IntMatrix) -> Vec<BigInt> {
    let (rows, cols) = (m.rows, m.cols);
    let r = rows.min(cols);
    let mut a = m.row_vecs();
    let mut diag = Vec::with_capacity(r);

    for t in 0..r {
        loop {
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by(|&(i, j), &(k, l)| a[i][j].magnitude().cmp(a[k][l].magnitude()));
            let Some((pi, pj)) = pivot else {
                diag.resize(r, BigInt::zero());
                return diag;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }

            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = &a[i][t] / &p;
                if !q.is_zero() {
                    for j in t..cols {
                        let delta = &q * &a[t][j];
                        a[i][j] -= delta;
                    }
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = &a[t][j] / &p;
                if !q.is_zero() {
                    for row in a.iter_mut().skip(t) {
                        let delta = &q * &row[t];
                        row[j] -= delta;
                    }
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }

            // the pivot must divide the whole trailing block
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

/// `Z^generators` modulo the row span of `relations`, in canonical form.
pub fn group_from_relations(generators: usize, relations: &IntMatrix) -> Result<AbelianGroup> {
    if relations.rows > 0 && relations.cols != generators {
        return Err(Error::ColumnMismatch { expected: generators, found: relations.cols });
    }
    let factors = if relations.rows == 0 { Vec::new() } else { smith_normal_form(relations) };
    let nonzero: Vec<BigUint> =
        factors.iter().filter(|d| !d.is_zero()).map(|d| d.magnitude().clone()).collect();
    let free_rank = (generators - nonzero.len()) as u64;
    AbelianGroup::from_big_invariants(free_rank, &nonzero)
}
