//! The network protection code type.

use std::fmt;

use super::bch::is_primitive_length;
use super::field::format_polynomial;
use crate::error::{Error, Result};
use crate::gf2::{
    min_distance_by_codewords, min_distance_by_parity, parity_check_from_generator,
    systematic_form, BitMatrix, CodewordVector, MinDistance,
};

/// Pattern budget for the parity-check distance search used when a code
/// is too large for codeword enumeration.
pub const DISTANCE_PATTERN_BUDGET: u64 = 3_000_000;

/// Where a code came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// `[n, n-1, 2]` single-failure code: one protection path carrying the
    /// XOR of every working path.
    SingleParity,
    /// Narrow-sense BCH code.
    Bch {
        designed_distance: usize,
        field_polynomial: u32,
    },
    /// Obtained from `parent` by a propagation rule at `position`.
    Derived {
        rule: super::derive::Rule,
        position: usize,
        parent: String,
    },
    /// Supplied as an explicit generator matrix.
    Explicit(String),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::SingleParity => write!(f, "single-parity"),
            Provenance::Bch {
                designed_distance,
                field_polynomial,
            } => write!(
                f,
                "bch(d={designed_distance}, field {})",
                format_polynomial(u64::from(*field_polynomial))
            ),
            Provenance::Derived {
                rule,
                position,
                parent,
            } => write!(f, "{rule}@{position}({parent})"),
            Provenance::Explicit(label) => write!(f, "{label}"),
        }
    }
}

/// An `[n, k, d_min]` binary code whose coordinates are the `n` connections:
/// the first `k` carry plain data, the last `m = n - k` carry encoded data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    generator: BitMatrix,
    parity: BitMatrix,
    column_map: Vec<usize>,
    d_min: MinDistance,
    provenance: Provenance,
}

impl LinearCode {
    /// Assembles a code from a systematic generator and matching parity
    /// check. `column_map[j]` is the column of the caller's original
    /// matrix that ended up at position `j`.
    pub fn from_parts(
        generator: BitMatrix,
        parity: BitMatrix,
        column_map: Vec<usize>,
        d_min: MinDistance,
        provenance: Provenance,
    ) -> Result<Self> {
        let (k, n) = (generator.rows(), generator.cols());
        if parity.cols() != n || parity.rows() != n - k || column_map.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "generator {k}x{n}, parity {}x{}, column map of {}",
                parity.rows(),
                parity.cols(),
                column_map.len()
            )));
        }
        if !generator.mul(&parity.transpose())?.is_zero() {
            return Err(Error::InvalidCode("G·H^T is not zero".into()));
        }
        Ok(Self {
            generator,
            parity,
            column_map,
            d_min,
            provenance,
        })
    }

    /// Builds a code from any full-rank generator, bringing it to
    /// systematic form and computing its distance.
    pub fn from_generator(g: &BitMatrix, provenance: Provenance) -> Result<Self> {
        Self::from_generator_with_bound(g, provenance, 1)
    }

    /// Like [`LinearCode::from_generator`], with a known lower bound on the
    /// distance used when the distance cannot be pinned exactly.
    pub fn from_generator_with_bound(
        g: &BitMatrix,
        provenance: Provenance,
        lower_bound: usize,
    ) -> Result<Self> {
        let sys = systematic_form(g)?;
        let parity = parity_check_from_generator(&sys.generator)?;
        let d_min = distance_of(&sys.generator, &parity, lower_bound);
        Self::from_parts(sys.generator, parity, sys.perm, d_min, provenance)
    }

    /// The `[n, n-1, 2]` single-failure code.
    pub fn single_parity(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidCode(format!(
                "single-parity code needs n >= 2 (got {n})"
            )));
        }
        let mut g = BitMatrix::zeros(n - 1, n)?;
        for i in 0..n - 1 {
            g.set(i, i, true);
            g.set(i, n - 1, true);
        }
        let parity = parity_check_from_generator(&g)?;
        Self::from_parts(
            g,
            parity,
            (0..n).collect(),
            MinDistance::Exact(2),
            Provenance::SingleParity,
        )
    }

    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    /// Number of protection paths, `n - k`.
    pub fn m(&self) -> usize {
        self.n() - self.k()
    }

    pub fn d_min(&self) -> MinDistance {
        self.d_min
    }

    /// Largest failure count the code is guaranteed to survive, `d_min - 1`.
    pub fn t_max(&self) -> usize {
        self.d_min.value().saturating_sub(1)
    }

    /// Systematic generator `[I_k | P]`.
    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    /// Parity check `[P^T | I_m]`.
    pub fn parity(&self) -> &BitMatrix {
        &self.parity
    }

    /// The `k × m` block `P`.
    pub fn p_block(&self) -> BitMatrix {
        let cols: Vec<usize> = (self.k()..self.n()).collect();
        self.generator
            .select_columns(&cols)
            .expect("parity columns are in range")
    }

    pub fn column_map(&self) -> &[usize] {
        &self.column_map
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Short family label: `hamming`, `bch`, `single-parity`, `derived` or
    /// the explicit label.
    pub fn label(&self) -> String {
        match &self.provenance {
            Provenance::Bch {
                designed_distance: 3,
                ..
            } if is_primitive_length(self.n()) => "hamming".into(),
            Provenance::Bch { .. } => "bch".into(),
            Provenance::SingleParity => "single-parity".into(),
            Provenance::Derived { .. } => "derived".into(),
            Provenance::Explicit(l) => l.clone(),
        }
    }

    /// `[n,k,d]` with `>=d` when only a bound is known.
    pub fn parameters(&self) -> String {
        format!("[{},{},{}]", self.n(), self.k(), self.d_min)
    }

    /// Codeword for a `k`-bit message.
    pub fn encode(&self, message: &CodewordVector) -> Result<CodewordVector> {
        self.generator.encode(message)
    }

    pub fn is_codeword(&self, word: &CodewordVector) -> Result<bool> {
        Ok(self.parity.syndrome(word)?.is_zero())
    }
}

impl fmt::Display for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.parameters(), self.provenance)
    }
}

/// Exact distance by enumeration when `k <= 20`, else a bounded parity
/// search combined with `lower_bound`.
pub(crate) fn distance_of(g: &BitMatrix, h: &BitMatrix, lower_bound: usize) -> MinDistance {
    if let Some(d) = min_distance_by_codewords(g) {
        return MinDistance::Exact(d);
    }
    let cap = h.rows() + 1;
    match min_distance_by_parity(h, cap, DISTANCE_PATTERN_BUDGET) {
        MinDistance::Exact(d) => MinDistance::Exact(d),
        MinDistance::AtLeast(d) => MinDistance::AtLeast(d.max(lower_bound)),
    }
}
