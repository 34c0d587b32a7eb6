//! Minimum-distance computation.
//!
//! Two independent routes: enumerate all `2^k` codewords from the generator
//! (Gray-code order, one row XOR per step), or search for the lightest set
//! of linearly dependent parity-check columns.

use std::fmt;

use super::echelon::{parity_check_from_generator, systematic_form};
use super::matrix::BitMatrix;
use crate::error::Result;

/// Codeword enumeration is used up to this dimension.
pub const ENUMERATION_MAX_K: usize = 20;

/// Either an exact minimum distance or a proven lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MinDistance {
    Exact(usize),
    AtLeast(usize),
}

impl MinDistance {
    /// The exact value, or the bound.
    pub fn value(self) -> usize {
        match self {
            MinDistance::Exact(d) | MinDistance::AtLeast(d) => d,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, MinDistance::Exact(_))
    }
}

impl fmt::Display for MinDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinDistance::Exact(d) => write!(f, "{d}"),
            MinDistance::AtLeast(d) => write!(f, ">={d}"),
        }
    }
}

/// Exact minimum distance by walking every nonzero codeword.
///
/// Returns `None` when the dimension is above [`ENUMERATION_MAX_K`].
/// A generator whose rows are dependent yields distance 0.
pub fn min_distance_by_codewords(g: &BitMatrix) -> Option<usize> {
    let k = g.rows();
    if k > ENUMERATION_MAX_K {
        return None;
    }
    let stride = g.row_words(0).len();
    let mut acc = vec![0u64; stride];
    let mut best = usize::MAX;
    for i in 1u64..(1u64 << k) {
        let flip = i.trailing_zeros() as usize;
        for (a, w) in acc.iter_mut().zip(g.row_words(flip)) {
            *a ^= w;
        }
        let weight: usize = acc.iter().map(|w| w.count_ones() as usize).sum();
        best = best.min(weight);
        if best == 0 {
            break;
        }
    }
    Some(best)
}

/// Searches error patterns of weight `1..=search_cap` for a set of
/// parity-check columns summing to zero.
///
/// The first weight at which one is found is the exact distance; if none
/// exists up to the cap the result is `AtLeast(search_cap + 1)`. The search
/// stops early, also returning a lower bound, once `pattern_budget`
/// patterns have been examined.
pub fn min_distance_by_parity(
    h: &BitMatrix,
    search_cap: usize,
    pattern_budget: u64,
) -> MinDistance {
    let n = h.cols();
    let columns: Vec<Vec<u64>> = {
        let t = h.transpose();
        (0..n).map(|c| t.row_words(c).to_vec()).collect()
    };
    let stride = columns.first().map_or(1, Vec::len);
    let mut budget = pattern_budget;
    for w in 1..=search_cap.min(n) {
        let mut acc = vec![0u64; stride];
        match dependent_set(&columns, w, 0, &mut acc, &mut budget) {
            Search::Found => return MinDistance::Exact(w),
            Search::Exhausted => return MinDistance::AtLeast(w),
            Search::None => {}
        }
    }
    MinDistance::AtLeast(search_cap.min(n) + 1)
}

enum Search {
    Found,
    None,
    Exhausted,
}

fn dependent_set(
    columns: &[Vec<u64>],
    remaining: usize,
    start: usize,
    acc: &mut [u64],
    budget: &mut u64,
) -> Search {
    let n = columns.len();
    if remaining == 0 {
        if *budget == 0 {
            return Search::Exhausted;
        }
        *budget -= 1;
        return if acc.iter().all(|&w| w == 0) {
            Search::Found
        } else {
            Search::None
        };
    }
    for c in start..=(n - remaining) {
        xor_into(acc, &columns[c]);
        let r = dependent_set(columns, remaining - 1, c + 1, acc, budget);
        xor_into(acc, &columns[c]);
        match r {
            Search::None => {}
            other => return other,
        }
    }
    Search::None
}

#[inline]
fn xor_into(acc: &mut [u64], w: &[u64]) {
    for (a, b) in acc.iter_mut().zip(w) {
        *a ^= b;
    }
}

/// Minimum distance of the code generated by `g`.
///
/// Enumerates codewords when `k <= 20`; otherwise runs the bounded-weight
/// parity-check search up to `search_cap`.
pub fn min_distance(g: &BitMatrix, search_cap: usize) -> Result<MinDistance> {
    if let Some(d) = min_distance_by_codewords(g) {
        return Ok(MinDistance::Exact(d));
    }
    let sys = systematic_form(g)?;
    let h = parity_check_from_generator(&sys.generator)?;
    Ok(min_distance_by_parity(&h, search_cap, u64::MAX))
}
