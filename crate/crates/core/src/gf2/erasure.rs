//! Erasure decoding at known positions.
//!
//! The parity-check matrix restricted to the erased columns is eliminated
//! with the known columns carried along as an augmented block. Each pivot
//! row then reads `x_e = sum of known symbols`, which is both the decoder
//! and an exact count of the XORs a receiver has to perform.

use super::matrix::{BitMatrix, CodewordVector};
use crate::error::{Error, Result};

/// How to rebuild every erased symbol from the surviving ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErasurePlan {
    n: usize,
    erased: Vec<usize>,
    /// `sources[i]` lists the known positions whose sum is `erased[i]`.
    sources: Vec<Vec<usize>>,
    /// Leftover parity checks involving known positions only.
    checks: Vec<Vec<usize>>,
}

impl ErasurePlan {
    /// Fails with [`Error::UnrecoverableErasure`] when the erased columns of
    /// `h` are linearly dependent.
    pub fn new(h: &BitMatrix, erased: &[usize]) -> Result<Self> {
        let n = h.cols();
        let mut erased = erased.to_vec();
        erased.sort_unstable();
        erased.dedup();
        if let Some(&bad) = erased.iter().find(|&&e| e >= n) {
            return Err(Error::DimensionMismatch(format!(
                "erased position {bad} outside length {n}"
            )));
        }
        let known: Vec<usize> = (0..n).filter(|p| erased.binary_search(p).is_err()).collect();
        if erased.is_empty() {
            let checks = (0..h.rows())
                .map(|r| known.iter().copied().filter(|&p| h.get(r, p)).collect())
                .collect();
            return Ok(Self {
                n,
                erased,
                sources: Vec::new(),
                checks,
            });
        }
        if erased.len() > h.rows() {
            return Err(Error::UnrecoverableErasure { positions: erased });
        }

        let mut order = erased.clone();
        order.extend(&known);
        let mut a = h.select_columns(&order)?;
        let t = erased.len();
        let mut pivot_rows = Vec::with_capacity(t);
        let mut row = 0;
        for col in 0..t {
            let Some(p) = (row..a.rows()).find(|&r| a.get(r, col)) else {
                return Err(Error::UnrecoverableErasure { positions: erased });
            };
            a.swap_rows(row, p);
            for r in 0..a.rows() {
                if r != row && a.get(r, col) {
                    a.add_row(row, r);
                }
            }
            pivot_rows.push(row);
            row += 1;
        }
        let known_part = |r: usize| -> Vec<usize> {
            (0..known.len())
                .filter(|&j| a.get(r, t + j))
                .map(|j| known[j])
                .collect()
        };
        let sources = pivot_rows.iter().map(|&r| known_part(r)).collect();
        let checks = (t..a.rows()).map(known_part).filter(|c: &Vec<usize>| !c.is_empty()).collect();
        Ok(Self {
            n,
            erased,
            sources,
            checks,
        })
    }

    pub fn erased(&self) -> &[usize] {
        &self.erased
    }

    /// Known positions summed to rebuild `erased()[i]`.
    pub fn sources(&self, i: usize) -> &[usize] {
        &self.sources[i]
    }

    /// XOR operations needed to rebuild `erased()[i]`.
    pub fn xor_count(&self, i: usize) -> usize {
        self.sources[i].len().saturating_sub(1)
    }

    /// Rebuilds erased symbols of any XOR-able width in place.
    ///
    /// Returns [`Error::InconsistentReceived`] when the surviving symbols
    /// violate a parity check that does not involve an erasure.
    pub fn apply<T>(&self, symbols: &mut [T]) -> Result<()>
    where
        T: Copy + Default + PartialEq + std::ops::BitXor<Output = T>,
    {
        if symbols.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{} symbols for length {}",
                symbols.len(),
                self.n
            )));
        }
        let sum = |positions: &[usize]| {
            positions
                .iter()
                .fold(T::default(), |acc, &p| acc ^ symbols[p])
        };
        if self.checks.iter().any(|c| sum(c) != T::default()) {
            return Err(Error::InconsistentReceived);
        }
        let values: Vec<T> = self.sources.iter().map(|s| sum(s)).collect();
        for (&e, v) in self.erased.iter().zip(values) {
            symbols[e] = v;
        }
        Ok(())
    }
}

/// Returns the unique codeword that agrees with `received` outside
/// `erased`. Bits of `received` at erased positions are ignored.
pub fn solve_erasures(
    h: &BitMatrix,
    received: &CodewordVector,
    erased: &[usize],
) -> Result<CodewordVector> {
    if received.len() != h.cols() {
        return Err(Error::DimensionMismatch(format!(
            "received length {} for code length {}",
            received.len(),
            h.cols()
        )));
    }
    let plan = ErasurePlan::new(h, erased)?;
    let mut bits: Vec<u8> = received.to_bits();
    for &e in plan.erased() {
        bits[e] = 0;
    }
    plan.apply(&mut bits)?;
    Ok(CodewordVector::from_bits(&bits))
}
