//! Sublattices of `Z^d` in Hermite normal form.

use std::fmt;

use crate::error::{Error, Result};

/// A sublattice of `Z^d`, stored as the row-style Hermite normal form of a
/// generating set: rows are linearly independent, each row's leading entry
/// (its pivot) is positive and lies strictly right of the previous row's,
/// and entries above a pivot lie in `[0, pivot)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntLattice {
    dim: usize,
    basis: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl fmt::Debug for IntLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntLattice(dim {}, {:?})", self.dim, self.basis)
    }
}

fn checked(x: Option<i128>) -> Result<i128> {
    x.ok_or(Error::Overflow("Hermite normal form"))
}

/// `row_a -= q · row_b`.
fn sub_mul(rows: &mut [Vec<i128>], a: usize, b: usize, q: i128) -> Result<()> {
    if q == 0 {
        return Ok(());
    }
    for j in 0..rows[a].len() {
        let t = checked(rows[b][j].checked_mul(q))?;
        rows[a][j] = checked(rows[a][j].checked_sub(t))?;
    }
    Ok(())
}

impl IntLattice {
    /// The zero lattice of `Z^dim`.
    pub fn zero(dim: usize) -> Self {
        IntLattice { dim, basis: Vec::new(), pivots: Vec::new() }
    }

    /// `span_Z` of `vectors`, each of length `dim`.
    pub fn span(dim: usize, vectors: &[Vec<i64>]) -> Result<Self> {
        let mut rows: Vec<Vec<i128>> = Vec::with_capacity(vectors.len());
        for v in vectors {
            if v.len() != dim {
                return Err(Error::InvalidArgument(format!("vector of length {} in dimension {dim}", v.len())));
            }
            if v.iter().any(|&x| x != 0) {
                rows.push(v.iter().map(|&x| x as i128).collect());
            }
        }
        let mut top = 0;
        let mut pivots = Vec::new();
        for col in 0..dim {
            if top == rows.len() {
                break;
            }
            // Euclid on column `col` among rows top.. until one nonzero entry remains
            loop {
                let mut best: Option<usize> = None;
                for r in top..rows.len() {
                    if rows[r][col] != 0 && best.is_none_or(|b| rows[r][col].abs() < rows[b][col].abs()) {
                        best = Some(r);
                    }
                }
                let Some(b) = best else { break };
                rows.swap(top, b);
                let mut done = true;
                for r in top + 1..rows.len() {
                    if rows[r][col] != 0 {
                        let q = rows[r][col] / rows[top][col];
                        sub_mul(&mut rows, r, top, q)?;
                        done &= rows[r][col] == 0;
                    }
                }
                if done {
                    break;
                }
            }
            if rows[top][col] == 0 {
                continue;
            }
            if rows[top][col] < 0 {
                for x in rows[top].iter_mut() {
                    *x = -*x;
                }
            }
            let p = rows[top][col];
            for r in 0..top {
                let q = rows[r][col].div_euclid(p);
                sub_mul(&mut rows, r, top, q)?;
            }
            pivots.push(col);
            top += 1;
        }
        rows.truncate(top);
        let basis = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| i64::try_from(x).map_err(|_| Error::Overflow("Hermite normal form"))).collect())
            .collect::<Result<Vec<Vec<i64>>>>()?;
        Ok(IntLattice { dim, basis, pivots })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Hermite normal form rows.
    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    /// Index `[Z^d : Λ]` for a full-rank lattice, `None` otherwise.
    pub fn index(&self) -> Option<u128> {
        (self.rank() == self.dim).then(|| self.basis.iter().zip(&self.pivots).map(|(r, &c)| r[c] as u128).product())
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        if v.len() != self.dim {
            return false;
        }
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        let mut next = 0;
        for col in 0..self.dim {
            if next < self.pivots.len() && self.pivots[next] == col {
                let row = &self.basis[next];
                let p = row[col] as i128;
                if w[col] % p != 0 {
                    return false;
                }
                let q = w[col] / p;
                for j in col..self.dim {
                    w[j] -= q * row[j] as i128;
                }
                next += 1;
            } else if w[col] != 0 {
                return false;
            }
        }
        true
    }

    /// `self ⊆ other`.
    pub fn is_sublattice_of(&self, other: &IntLattice) -> bool {
        self.dim == other.dim && self.basis.iter().all(|r| other.contains(r))
    }

    /// All lattice points with every coordinate in `(-n, n)`.
    pub fn points_in_box(&self, n: i64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let mut acc = vec![0i128; self.dim];
        self.enumerate(0, n, &mut acc, &mut out);
        out
    }

    fn enumerate(&self, i: usize, n: i64, acc: &mut Vec<i128>, out: &mut Vec<Vec<i64>>) {
        let n = n as i128;
        if i == self.basis.len() {
            if acc.iter().all(|x| x.abs() < n) {
                out.push(acc.iter().map(|&x| x as i64).collect());
            }
            return;
        }
        let row = &self.basis[i];
        let c = self.pivots[i];
        let p = row[c] as i128;
        // columns left of the pivot are fixed by earlier rows
        if acc[..c].iter().any(|x| x.abs() >= n) {
            return;
        }
        let base = acc[c];
        let lo = (-(n - 1) - base).div_euclid(p) + i128::from((-(n - 1) - base).rem_euclid(p) != 0);
        let hi = (n - 1 - base).div_euclid(p);
        for k in lo..=hi {
            for j in c..self.dim {
                acc[j] += k * row[j] as i128;
            }
            self.enumerate(i + 1, n as i64, acc, out);
            for j in c..self.dim {
                acc[j] -= k * row[j] as i128;
            }
        }
    }
}
