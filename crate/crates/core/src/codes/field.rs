//! GF(2^μ) arithmetic with log/antilog tables.

use std::fmt;

use crate::error::{Error, Result};

/// Primitive polynomials used for each extension degree, bit `i` holding
/// the coefficient of `x^i`.
pub const PRIMITIVE_POLYNOMIALS: [(u32, u32); 9] = [
    (2, 0b111),            // x^2 + x + 1
    (3, 0b1011),           // x^3 + x + 1
    (4, 0b1_0011),         // x^4 + x + 1
    (5, 0b10_0101),        // x^5 + x^2 + 1
    (6, 0b100_0011),       // x^6 + x + 1
    (7, 0b1000_1001),      // x^7 + x^3 + 1
    (8, 0b1_0001_1101),    // x^8 + x^4 + x^3 + x^2 + 1
    (9, 0b10_0001_0001),   // x^9 + x^4 + 1
    (10, 0b100_0000_1001), // x^10 + x^3 + 1
];

pub fn primitive_polynomial(degree: u32) -> Result<u32> {
    PRIMITIVE_POLYNOMIALS
        .iter()
        .find(|(d, _)| *d == degree)
        .map(|&(_, p)| p)
        .ok_or(Error::UnsupportedDegree(degree))
}

/// Renders a binary polynomial given as a bit mask, highest degree first.
pub fn format_polynomial(bits: u64) -> String {
    if bits == 0 {
        return "0".into();
    }
    let mut terms = Vec::new();
    for i in (0..64).rev() {
        if (bits >> i) & 1 == 1 {
            terms.push(match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            });
        }
    }
    terms.join(" + ")
}

/// An element of GF(2^μ) in polynomial basis.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    degree: u32,
    bits: u16,
}

impl FieldElement {
    pub fn degree(self) -> u32 {
        self.degree
    }

    pub fn bits(self) -> u16 {
        self.bits
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{})[{:#b}]", self.degree, self.bits)
    }
}

/// The field GF(2^μ) defined by the bundled primitive polynomial.
#[derive(Debug, Clone)]
pub struct GaloisField {
    degree: u32,
    poly: u32,
    exp: Vec<u16>,
    log: Vec<u16>,
}

impl GaloisField {
    pub fn new(degree: u32) -> Result<Self> {
        let poly = primitive_polynomial(degree)?;
        let order = (1usize << degree) - 1;
        let mut exp = vec![0u16; 2 * order];
        let mut log = vec![0u16; order + 1];
        let mut x: u32 = 1;
        for (i, slot) in exp.iter_mut().enumerate().take(order) {
            *slot = x as u16;
            log[x as usize] = i as u16;
            x <<= 1;
            if x & (1 << degree) != 0 {
                x ^= poly;
            }
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Ok(Self {
            degree,
            poly,
            exp,
            log,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn polynomial(&self) -> u32 {
        self.poly
    }

    /// Size of the multiplicative group, `2^μ - 1`.
    pub fn order(&self) -> usize {
        (1usize << self.degree) - 1
    }

    pub fn element(&self, bits: u16) -> Result<FieldElement> {
        if u32::from(bits) >> self.degree != 0 {
            return Err(Error::DimensionMismatch(format!(
                "{bits:#b} does not fit GF(2^{})",
                self.degree
            )));
        }
        Ok(FieldElement {
            degree: self.degree,
            bits,
        })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            degree: self.degree,
            bits: 0,
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            degree: self.degree,
            bits: 1,
        }
    }

    /// The primitive element `x`.
    pub fn alpha(&self) -> FieldElement {
        self.alpha_pow(1)
    }

    /// `α^e` for any integer exponent.
    pub fn alpha_pow(&self, e: i64) -> FieldElement {
        let e = e.rem_euclid(self.order() as i64) as usize;
        FieldElement {
            degree: self.degree,
            bits: self.exp[e],
        }
    }

    /// Discrete logarithm base `α`; `None` for zero.
    pub fn log(&self, a: FieldElement) -> Option<usize> {
        (!a.is_zero()).then(|| usize::from(self.log[usize::from(a.bits)]))
    }

    fn check(&self, a: FieldElement) -> Result<()> {
        if a.degree != self.degree {
            return Err(Error::FieldMismatch {
                left: self.degree,
                right: a.degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(FieldElement {
            degree: self.degree,
            bits: a.bits ^ b.bits,
        })
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    fn mul_unchecked(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let bits = if a.is_zero() || b.is_zero() {
            0
        } else {
            self.exp[usize::from(self.log[usize::from(a.bits)])
                + usize::from(self.log[usize::from(b.bits)])]
        };
        FieldElement {
            degree: self.degree,
            bits,
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        if a.is_zero() {
            return Err(Error::ZeroInverse {
                degree: self.degree,
            });
        }
        let l = usize::from(self.log[usize::from(a.bits)]);
        Ok(self.alpha_pow(-(l as i64)))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> Result<FieldElement> {
        self.check(a)?;
        if a.is_zero() {
            return Ok(if e == 0 { self.one() } else { self.zero() });
        }
        let l = u64::from(self.log[usize::from(a.bits)]);
        let order = self.order() as u64;
        Ok(self.alpha_pow(((l * (e % order)) % order) as i64))
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: FieldElement) -> Result<usize> {
        self.check(a)?;
        let l = self.log(a).ok_or(Error::ZeroInverse {
            degree: self.degree,
        })?;
        Ok(self.order() / gcd(self.order(), l))
    }

    /// Multiplies polynomials whose coefficients lie in this field
    /// (lowest degree first).
    pub(crate) fn poly_mul(&self, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
        let mut out = vec![self.zero(); a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                let p = self.mul_unchecked(x, y);
                out[i + j].bits ^= p.bits;
            }
        }
        out
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defining_relation_in_gf16() {
        let f = GaloisField::new(4).unwrap();
        let a = f.alpha();
        let a4 = f.pow(a, 4).unwrap();
        assert_eq!(a4, f.add(a, f.one()).unwrap());
        assert_eq!(f.pow(a, 15).unwrap(), f.one());
    }

    #[test]
    fn inverse_matches_log_table_oracle() {
        // oracle: powers of alpha by repeated multiplication
        let f = GaloisField::new(4).unwrap();
        let mut powers = vec![f.one()];
        for _ in 1..15 {
            let last = *powers.last().unwrap();
            powers.push(f.mul(last, f.alpha()).unwrap());
        }
        assert_eq!(f.mul(powers[5], powers[10]).unwrap(), f.one());
        assert_eq!(f.inv(powers[5]).unwrap(), powers[10]);
        for (i, p) in powers.iter().enumerate() {
            assert_eq!(f.alpha_pow(i as i64), *p);
        }
    }

    #[test]
    fn every_bundled_polynomial_is_primitive() {
        for (degree, _) in PRIMITIVE_POLYNOMIALS {
            let f = GaloisField::new(degree).unwrap();
            assert_eq!(f.element_order(f.alpha()).unwrap(), f.order());
            // the antilog table visits every nonzero element once
            let mut seen = vec![false; f.order() + 1];
            for e in 0..f.order() {
                let b = usize::from(f.alpha_pow(e as i64).bits());
                assert!(!seen[b]);
                seen[b] = true;
            }
        }
    }

    #[test]
    fn zero_has_no_inverse() {
        let f = GaloisField::new(3).unwrap();
        assert_eq!(f.inv(f.zero()), Err(Error::ZeroInverse { degree: 3 }));
    }

    #[test]
    fn mixed_fields_rejected() {
        let f3 = GaloisField::new(3).unwrap();
        let f4 = GaloisField::new(4).unwrap();
        assert!(matches!(
            f4.mul(f3.alpha(), f4.alpha()),
            Err(Error::FieldMismatch { .. })
        ));
        assert!(GaloisField::new(11).is_err());
    }
}
