//! Propagation rules producing new codes from known ones.
//!
//! * shorten `[n,k,d] -> [n-1,k-1,>=d]`: keep codewords that are zero at a
//!   coordinate, then delete it.
//! * puncture `[n,k,d] -> [n-1,k,>=d-1]`: delete a coordinate.
//! * append `[n,k,d] -> [n+1,k,d or d+1]`: add an overall parity bit.
//! * extend `[n,k,d] -> [n+1,k+1,min(d,ρ+1)]`: lengthen by the word
//!   `[u | 1]` where `u` is a heaviest coset leader, `ρ` being the covering
//!   radius.

use std::fmt;
use std::str::FromStr;

use super::linear::{LinearCode, Provenance};
use crate::error::{Error, Result};
use crate::gf2::{rref, BitMatrix, CodewordVector};

/// Largest redundancy for which [`Rule::Extend`] tabulates coset leaders.
pub const EXTEND_MAX_REDUNDANCY: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Shorten,
    Puncture,
    Append,
    Extend,
}

impl Rule {
    pub const ALL: [Rule; 4] = [Rule::Shorten, Rule::Puncture, Rule::Append, Rule::Extend];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Shorten => "shorten",
            Rule::Puncture => "puncture",
            Rule::Append => "append",
            Rule::Extend => "extend",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::InapplicableRule {
                rule: s.to_string(),
                reason: "unknown rule (expected shorten, puncture, append or extend)".into(),
            })
    }
}

fn inapplicable(rule: Rule, reason: impl Into<String>) -> Error {
    Error::InapplicableRule {
        rule: rule.name().into(),
        reason: reason.into(),
    }
}

/// Applies `rule` at the last coordinate.
pub fn derive(code: &LinearCode, rule: Rule) -> Result<LinearCode> {
    derive_at(code, rule, None)
}

/// Applies `rule`; `position` selects the coordinate for shorten and
/// puncture (default: the last one) and is ignored by append and extend.
pub fn derive_at(code: &LinearCode, rule: Rule, position: Option<usize>) -> Result<LinearCode> {
    let (n, k) = (code.n(), code.k());
    let d = code.d_min().value();
    let pos = position.unwrap_or(n - 1);
    if matches!(rule, Rule::Shorten | Rule::Puncture) && pos >= n {
        return Err(inapplicable(rule, format!("position {pos} outside length {n}")));
    }
    let provenance = Provenance::Derived {
        rule,
        position: match rule {
            Rule::Shorten | Rule::Puncture => pos,
            Rule::Append | Rule::Extend => n,
        },
        parent: code.parameters(),
    };
    let g = code.generator();
    match rule {
        Rule::Shorten => {
            if k < 2 {
                return Err(inapplicable(rule, "needs k >= 2"));
            }
            let mut rows = g.clone();
            let pivot = (0..k).find(|&r| rows.get(r, pos));
            let keep: Vec<usize> = match pivot {
                Some(p) => {
                    for r in 0..k {
                        if r != p && rows.get(r, pos) {
                            rows.add_row(p, r);
                        }
                    }
                    (0..k).filter(|&r| r != p).collect()
                }
                None => {
                    return Err(inapplicable(
                        rule,
                        format!("coordinate {pos} is zero in every codeword"),
                    ))
                }
            };
            let cols: Vec<usize> = (0..n).filter(|&c| c != pos).collect();
            let sub = rows.select_rows(&keep)?.select_columns(&cols)?;
            LinearCode::from_generator_with_bound(&sub, provenance, d)
        }
        Rule::Puncture => {
            if n < 2 {
                return Err(inapplicable(rule, "needs n >= 2"));
            }
            let cols: Vec<usize> = (0..n).filter(|&c| c != pos).collect();
            let sub = g.select_columns(&cols)?;
            let ech = rref(&sub);
            if ech.rank == 0 || ech.rank == n - 1 {
                return Err(inapplicable(
                    rule,
                    "result would have no protection coordinate left",
                ));
            }
            let independent = ech.reduced.select_rows(&(0..ech.rank).collect::<Vec<_>>())?;
            LinearCode::from_generator_with_bound(&independent, provenance, d.saturating_sub(1))
        }
        Rule::Append => {
            let mut ext = BitMatrix::zeros(k, n + 1)?;
            for r in 0..k {
                let mut parity = false;
                for c in 0..n {
                    let b = g.get(r, c);
                    ext.set(r, c, b);
                    parity ^= b;
                }
                ext.set(r, n, parity);
            }
            LinearCode::from_generator_with_bound(&ext, provenance, d)
        }
        Rule::Extend => {
            let m = n - k;
            if m > EXTEND_MAX_REDUNDANCY {
                return Err(inapplicable(
                    rule,
                    format!("n - k = {m} exceeds {EXTEND_MAX_REDUNDANCY}"),
                ));
            }
            let (leader, radius) = heaviest_coset_leader(code.parity());
            let mut ext = BitMatrix::zeros(k + 1, n + 1)?;
            for r in 0..k {
                for c in 0..n {
                    ext.set(r, c, g.get(r, c));
                }
            }
            for c in leader.support() {
                ext.set(k, c, true);
            }
            ext.set(k, n, true);
            LinearCode::from_generator_with_bound(&ext, provenance, d.min(radius + 1))
        }
    }
}

/// A minimum-weight word in a coset of largest leader weight, and that
/// weight (the covering radius). Among such cosets the one with the
/// smallest syndrome is chosen.
pub fn heaviest_coset_leader(h: &BitMatrix) -> (CodewordVector, usize) {
    let (m, n) = (h.rows(), h.cols());
    assert!(m <= EXTEND_MAX_REDUNDANCY, "syndrome table too large");
    let column_syndrome: Vec<usize> = (0..n)
        .map(|c| (0..m).fold(0usize, |acc, r| acc | (usize::from(h.get(r, c)) << r)))
        .collect();
    let size = 1usize << m;
    const UNSEEN: u32 = u32::MAX;
    let mut dist = vec![UNSEEN; size];
    let mut via: Vec<(usize, usize)> = vec![(0, 0); size];
    dist[0] = 0;
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &s in &frontier {
            for (c, &cs) in column_syndrome.iter().enumerate() {
                let t = s ^ cs;
                if dist[t] == UNSEEN {
                    dist[t] = dist[s] + 1;
                    via[t] = (s, c);
                    next.push(t);
                }
            }
        }
        frontier = next;
    }
    let radius = dist.iter().filter(|&&d| d != UNSEEN).max().copied().unwrap_or(0);
    let target = dist.iter().position(|&d| d == radius).unwrap_or(0);
    let mut word = CodewordVector::zeros(n);
    let mut s = target;
    while s != 0 {
        let (prev, c) = via[s];
        word.set(c, !word.get(c));
        s = prev;
    }
    (word, radius as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::construct_bch;
    use crate::gf2::MinDistance;

    #[test]
    fn hamming_fifteen_rules() {
        let c = construct_bch(15, 3).unwrap();
        assert_eq!(derive(&c, Rule::Shorten).unwrap().parameters(), "[14,10,3]");
        assert_eq!(derive(&c, Rule::Puncture).unwrap().parameters(), "[14,11,2]");
        assert_eq!(derive(&c, Rule::Append).unwrap().parameters(), "[16,11,4]");
        // a perfect code has covering radius 1, so lengthening drops to d = 2
        assert_eq!(derive(&c, Rule::Extend).unwrap().parameters(), "[16,12,2]");
    }

    #[test]
    fn extend_gains_dimension_when_radius_allows() {
        // [7,1,7] repetition code has covering radius 3
        let g: BitMatrix = "1111111".parse().unwrap();
        let c = LinearCode::from_generator(&g, Provenance::Explicit("rep".into())).unwrap();
        let (leader, radius) = heaviest_coset_leader(c.parity());
        assert_eq!(radius, 3);
        assert_eq!(leader.weight(), 3);
        let e = derive(&c, Rule::Extend).unwrap();
        assert_eq!((e.n(), e.k(), e.d_min()), (8, 2, MinDistance::Exact(4)));
    }

    #[test]
    fn shorten_at_position() {
        let c = construct_bch(7, 3).unwrap();
        let s = derive_at(&c, Rule::Shorten, Some(0)).unwrap();
        assert_eq!(s.parameters(), "[6,3,3]");
        assert!(derive_at(&c, Rule::Shorten, Some(7)).is_err());
    }

    #[test]
    fn inapplicable_rules() {
        let g: BitMatrix = "11".parse().unwrap();
        let c = LinearCode::from_generator(&g, Provenance::Explicit("rep2".into())).unwrap();
        assert!(matches!(
            derive(&c, Rule::Shorten),
            Err(Error::InapplicableRule { .. })
        ));
        assert!(matches!(
            derive(&c, Rule::Puncture),
            Err(Error::InapplicableRule { .. })
        ));
        assert!("stretch".parse::<Rule>().is_err());
        assert_eq!("append".parse::<Rule>().unwrap(), Rule::Append);
    }
}
