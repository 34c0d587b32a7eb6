//! Singleton and Hamming bounds on code parameters.

use num_bigint::BigUint;
use num_traits::One;

/// Outcome of checking `[n, k, d]` against the classical bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    /// `d - 1 <= n - k`.
    pub singleton_ok: bool,
    /// `Σ_{i <= ⌊(d-1)/2⌋} C(n,i) <= 2^{n-k}`.
    pub hamming_ok: bool,
    /// The Hamming inequality holds with equality (perfect code).
    pub hamming_tight: bool,
    /// Smallest `m` allowed by both bounds.
    pub min_m_required: usize,
}

/// Volume of the Hamming ball of radius `r` in `{0,1}^n`.
pub fn hamming_ball(n: usize, r: usize) -> BigUint {
    let mut sum = BigUint::one();
    let mut term = BigUint::one();
    for i in 1..=r.min(n) {
        term = term * BigUint::from(n - i + 1) / BigUint::from(i);
        sum += &term;
    }
    sum
}

/// Checks parameters directly, without needing a generator matrix.
pub fn check_parameters(n: usize, k: usize, d: usize) -> BoundReport {
    let m = n - k;
    let t = d.saturating_sub(1);
    let ball = hamming_ball(n, t / 2);
    let capacity = BigUint::one() << m;
    // ⌈log2 ball⌉ is the bit length of ball - 1
    let log_ceil = (ball.clone() - BigUint::one()).bits() as usize;
    BoundReport {
        singleton_ok: t <= m,
        hamming_ok: ball <= capacity,
        hamming_tight: ball == capacity,
        min_m_required: t.max(log_ceil),
    }
}

pub fn check_bounds(code: &super::LinearCode) -> BoundReport {
    check_parameters(code.n(), code.k(), code.d_min().value())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamming_seven_is_perfect() {
        let r = check_parameters(7, 4, 3);
        assert!(r.singleton_ok && r.hamming_ok && r.hamming_tight);
        assert_eq!(r.min_m_required, 3);
    }

    #[test]
    fn single_parity_meets_singleton() {
        for n in 2..20 {
            let r = check_parameters(n, n - 1, 2);
            assert!(r.singleton_ok);
            assert_eq!(r.min_m_required, 1);
        }
    }

    #[test]
    fn fifteen_eight_five() {
        // 1 + 15 + 105 = 121 needs 7 bits
        assert_eq!(hamming_ball(15, 2), BigUint::from(121u32));
        let r = check_parameters(15, 8, 5);
        assert_eq!(r.min_m_required, 7);
        assert!(r.hamming_ok && !r.hamming_tight);
    }

    #[test]
    fn violations_are_detected() {
        // [16,12,3]: 1 + 16 = 17 > 16
        assert!(!check_parameters(16, 12, 3).hamming_ok);
        // [127,77,27]: ball of radius 13 exceeds 2^50
        assert!(!check_parameters(127, 77, 27).hamming_ok);
        assert!(!check_parameters(5, 4, 3).singleton_ok);
    }
}
