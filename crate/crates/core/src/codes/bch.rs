//! Narrow-sense binary BCH codes.
//!
//! The generator polynomial is the least common multiple of the minimal
//! polynomials of `α, α^2, …, α^{d-1}`, with one minimal polynomial per
//! distinct cyclotomic coset. For a nonprimitive length `n` the root `α` is
//! `β^{(2^μ-1)/n}`, `β` being the primitive element of the bundled field.
//!
//! Generator rows are laid out systematically: message position `i` holds
//! the coefficient of `x^{m+i}` and the last `m = n - k` positions hold the
//! remainder `x^{m+i} mod g(x)`, lowest degree first.

use super::field::GaloisField;
use super::linear::{LinearCode, Provenance};
use crate::error::{Error, Result};
use crate::gf2::{min_distance_by_codewords, min_distance_by_parity, BitMatrix, MinDistance};

/// Weight patterns examined when verifying the BCH bound of a code too
/// large for codeword enumeration.
pub const VERIFY_PATTERN_BUDGET: u64 = 3_000_000;

fn check_odd(n: usize) -> Result<()> {
    if n == 0 || n % 2 == 0 {
        return Err(Error::EvenLength(n));
    }
    Ok(())
}

/// Smallest `μ ≥ 1` with `2^μ ≡ 1 (mod n)`.
pub fn multiplicative_order(n: usize) -> Result<u32> {
    check_odd(n)?;
    if n == 1 {
        return Ok(1);
    }
    let mut x = 2 % n;
    let mut mu = 1;
    while x != 1 {
        x = (x * 2) % n;
        mu += 1;
    }
    Ok(mu)
}

/// Partition of `{0, …, n-1}` into orbits under doubling mod `n`.
///
/// Cosets are ordered by their smallest element; each lists its orbit
/// starting from that element.
pub fn cyclotomic_cosets(n: usize) -> Result<Vec<Vec<usize>>> {
    check_odd(n)?;
    let mut seen = vec![false; n];
    let mut cosets = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut coset = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            coset.push(x);
            x = (x * 2) % n;
        }
        cosets.push(coset);
    }
    Ok(cosets)
}

/// Largest designed distance covered by the closed-form dimension.
pub fn closed_form_max_distance(n: usize, mu: u32) -> usize {
    let num = (n as u128) << mu.div_ceil(2);
    let den = (1u128 << mu) - 1;
    ((num / den) as usize).min(n)
}

/// Dimension `n - μ·⌈(d-1)/2⌉` of a narrow-sense binary BCH code, valid for
/// `2^{⌊μ/2⌋} < n ≤ 2^μ - 1` and `2 ≤ d ≤ min(⌊n·2^{⌈μ/2⌉}/(2^μ-1)⌋, n)`.
pub fn bch_dimension(n: usize, d: usize, mu: u32) -> Result<usize> {
    check_odd(n)?;
    let order = multiplicative_order(n)?;
    if mu != order {
        return Err(Error::InvalidCode(format!(
            "μ = {mu} is not the multiplicative order of 2 mod {n} (which is {order})"
        )));
    }
    if mu >= 63 {
        return Err(Error::UnsupportedDegree(mu));
    }
    let lower = 1usize << (mu / 2);
    let upper = (1usize << mu) - 1;
    if n <= lower || n > upper {
        return Err(Error::DesignedDistanceRange(format!(
            "length {n} outside ({lower}, {upper}]"
        )));
    }
    let d_max = closed_form_max_distance(n, mu);
    if d < 2 || d > d_max {
        return Err(Error::DesignedDistanceRange(format!(
            "d = {d} outside [2, {d_max}] for n = {n}"
        )));
    }
    Ok(n - mu as usize * (d - 1).div_ceil(2))
}

/// Generator polynomial and the bookkeeping behind it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BchPolynomial {
    pub n: usize,
    pub designed_distance: usize,
    pub mu: u32,
    /// Primitive polynomial of GF(2^μ) as a bit mask.
    pub field_polynomial: u32,
    /// Cosets whose minimal polynomials divide `g(x)`.
    pub cosets: Vec<Vec<usize>>,
    /// Binary coefficients of `g(x)`, lowest degree first.
    pub coefficients: Vec<u8>,
}

impl BchPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }
}

/// Builds `g(x)` for the narrow-sense BCH code of length `n` and designed
/// distance `d`.
pub fn bch_generator_polynomial(n: usize, d: usize) -> Result<BchPolynomial> {
    check_odd(n)?;
    if n < 3 || d < 2 || d > n {
        return Err(Error::InvalidCode(format!(
            "need n >= 3 and 2 <= d <= n (got n = {n}, d = {d})"
        )));
    }
    let mu = multiplicative_order(n)?;
    let field = GaloisField::new(mu)?;
    let step = (field.order() / n) as i64;
    let all = cyclotomic_cosets(n)?;
    let cosets: Vec<Vec<usize>> = all
        .into_iter()
        .filter(|c| c.iter().any(|&j| (1..d).contains(&j)))
        .collect();

    let mut g: Vec<u8> = vec![1];
    for coset in &cosets {
        let mut minimal = vec![field.one()];
        for &j in coset {
            let root = field.alpha_pow(step * j as i64);
            minimal = field.poly_mul(&minimal, &[root, field.one()]);
        }
        let binary: Vec<u8> = minimal
            .iter()
            .map(|c| match c.bits() {
                0 => Ok(0),
                1 => Ok(1),
                _ => Err(Error::InvalidCode(format!(
                    "minimal polynomial of coset {coset:?} is not binary"
                ))),
            })
            .collect::<Result<_>>()?;
        g = binary_poly_mul(&g, &binary);
    }
    if g.len() - 1 >= n {
        return Err(Error::InvalidCode(format!(
            "designed distance {d} leaves no information symbols at length {n}"
        )));
    }
    Ok(BchPolynomial {
        n,
        designed_distance: d,
        mu,
        field_polynomial: field.polynomial(),
        cosets,
        coefficients: g,
    })
}

fn binary_poly_mul(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 1 {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] ^= y;
            }
        }
    }
    out
}

/// Systematic generator of the cyclic code generated by `g`.
pub fn cyclic_systematic_generator(n: usize, g: &[u8]) -> Result<BitMatrix> {
    let m = g.len() - 1;
    if m == 0 || m >= n || g[m] != 1 || g[0] != 1 {
        return Err(Error::InvalidCode(format!(
            "g(x) of degree {m} does not generate a proper cyclic code of length {n}"
        )));
    }
    let k = n - m;
    let mut rows = BitMatrix::zeros(k, n)?;
    // remainder of x^m mod g is g(x) - x^m
    let mut rem: Vec<u8> = g[..m].to_vec();
    for i in 0..k {
        rows.set(i, i, true);
        for (j, &b) in rem.iter().enumerate() {
            if b == 1 {
                rows.set(i, k + j, true);
            }
        }
        // rem <- x * rem mod g
        let carry = rem[m - 1];
        for j in (1..m).rev() {
            rem[j] = rem[j - 1];
        }
        rem[0] = 0;
        if carry == 1 {
            for j in 0..m {
                rem[j] ^= g[j];
            }
        }
    }
    Ok(rows)
}

/// Checks that the code has no codeword lighter than `designed` and, when
/// affordable, pins the exact distance.
fn verify_distance(generator: &BitMatrix, parity: &BitMatrix, designed: usize) -> Result<MinDistance> {
    if let Some(d) = min_distance_by_codewords(generator) {
        if d < designed {
            return Err(Error::InvalidCode(format!(
                "codeword of weight {d} below designed distance {designed}"
            )));
        }
        return Ok(MinDistance::Exact(d));
    }
    match min_distance_by_parity(parity, designed, VERIFY_PATTERN_BUDGET) {
        MinDistance::Exact(w) if w < designed => Err(Error::InvalidCode(format!(
            "codeword of weight {w} below designed distance {designed}"
        ))),
        MinDistance::Exact(w) => Ok(MinDistance::Exact(w)),
        MinDistance::AtLeast(w) => Ok(MinDistance::AtLeast(w.max(designed))),
    }
}

/// Narrow-sense binary BCH code of length `n` and designed distance `d`.
pub fn construct_bch(n: usize, d: usize) -> Result<LinearCode> {
    let poly = bch_generator_polynomial(n, d)?;
    let generator = cyclic_systematic_generator(n, &poly.coefficients)?;
    let k = generator.rows();
    if let Ok(closed) = bch_dimension(n, d, poly.mu) {
        if closed != k {
            return Err(Error::InvalidCode(format!(
                "coset count gives k = {k} but the closed form gives {closed}"
            )));
        }
    }
    let parity = crate::gf2::parity_check_from_generator(&generator)?;
    let d_min = verify_distance(&generator, &parity, d)?;
    LinearCode::from_parts(
        generator,
        parity,
        (0..n).collect(),
        d_min,
        Provenance::Bch {
            designed_distance: d,
            field_polynomial: poly.field_polynomial,
        },
    )
}

pub(crate) fn is_primitive_length(n: usize) -> bool {
    (n + 1).is_power_of_two() && n >= 3
}
