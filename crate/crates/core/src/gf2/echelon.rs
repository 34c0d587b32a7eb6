//! Row reduction over GF(2) and the systematic-form machinery built on it.

use super::matrix::BitMatrix;
use crate::error::{Error, Result};

/// Reduced row-echelon form of a matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon {
    pub reduced: BitMatrix,
    pub rank: usize,
    /// Pivot column of each of the first `rank` rows, ascending.
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan elimination. Pivots are taken leftmost-first; within a
/// column the lowest-index remaining row wins.
pub fn rref(m: &BitMatrix) -> Echelon {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols() {
        if row == a.rows() {
            break;
        }
        let Some(p) = (row..a.rows()).find(|&r| a.get(r, col)) else {
            continue;
        };
        a.swap_rows(row, p);
        for r in 0..a.rows() {
            if r != row && a.get(r, col) {
                a.add_row(row, r);
            }
        }
        pivots.push(col);
        row += 1;
    }
    Echelon {
        reduced: a,
        rank: pivots.len(),
        pivots,
    }
}

pub fn rank(m: &BitMatrix) -> usize {
    rref(m).rank
}

/// A generator in `[I_k | P]` form together with the column permutation
/// that produced it: column `j` of `generator` is column `perm[j]` of the
/// input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Systematic {
    pub generator: BitMatrix,
    pub perm: Vec<usize>,
}

impl Systematic {
    pub fn is_identity_perm(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }
}

/// Brings a full-row-rank generator to `[I_k | P]`.
///
/// The pivot columns of the reduced form are moved to the front in order;
/// the remaining columns follow in their original order.
pub fn systematic_form(g: &BitMatrix) -> Result<Systematic> {
    let e = rref(g);
    if e.rank < g.rows() {
        return Err(Error::NotAGenerator {
            rank: e.rank,
            rows: g.rows(),
        });
    }
    let mut perm = e.pivots.clone();
    perm.extend((0..g.cols()).filter(|c| !e.pivots.contains(c)));
    let generator = e.reduced.select_columns(&perm)?;
    Ok(Systematic { generator, perm })
}

pub fn is_systematic(g: &BitMatrix) -> bool {
    let k = g.rows();
    k <= g.cols() && (0..k).all(|r| (0..k).all(|c| g.get(r, c) == (r == c)))
}

/// `H = [P^T | I_{n-k}]` for a systematic `G = [I_k | P]`.
pub fn parity_check_from_generator(gsys: &BitMatrix) -> Result<BitMatrix> {
    let (k, n) = (gsys.rows(), gsys.cols());
    if !is_systematic(gsys) {
        return Err(Error::NotSystematic);
    }
    if k >= n {
        return Err(Error::InvalidCode(format!(
            "k = {k} leaves no parity columns (n = {n})"
        )));
    }
    let m = n - k;
    let mut h = BitMatrix::zeros(m, n)?;
    for j in 0..m {
        for i in 0..k {
            if gsys.get(i, k + j) {
                h.set(j, i, true);
            }
        }
        h.set(j, k + j, true);
    }
    Ok(h)
}
