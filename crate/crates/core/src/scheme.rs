//! The rotating encoded-transmission discipline.
//!
//! Time is split into cycles of `n` rounds. In round `r` of a cycle the `m`
//! connections `r, r+1, …, r+m-1 (mod n)` carry encoded data and the other
//! `k = n - m` carry their own plain data, so over a cycle every connection
//! is a protection path exactly `m` times.
//!
//! Connections are numbered from 1. Within a round the codeword coordinates
//! are the plain connections in ascending order followed by the protection
//! connections in rotation order.

use std::fmt;

use num_rational::Ratio;

use crate::codes::LinearCode;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Plain,
    Encoded,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Plain => "plain",
            Role::Encoded => "encoded",
        })
    }
}

/// Role assignment for one round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundPlan {
    n: usize,
    cycle: usize,
    round: usize,
    protection: Vec<usize>,
    plain: Vec<usize>,
}

/// Plans global round `round` (counted from 1 across cycles).
pub fn plan_round(n: usize, m: usize, round: usize) -> Result<RoundPlan> {
    if m == 0 || m >= n {
        return Err(Error::InvalidPlan(format!("need 1 <= m < n (got n = {n}, m = {m})")));
    }
    if round == 0 {
        return Err(Error::InvalidPlan("rounds are counted from 1".into()));
    }
    let cycle = (round - 1) / n + 1;
    let r = (round - 1) % n + 1;
    let protection: Vec<usize> = (0..m).map(|i| (r - 1 + i) % n + 1).collect();
    let plain = (1..=n).filter(|c| !protection.contains(c)).collect();
    Ok(RoundPlan {
        n,
        cycle,
        round: r,
        protection,
        plain,
    })
}

impl RoundPlan {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.protection.len()
    }

    pub fn k(&self) -> usize {
        self.plain.len()
    }

    pub fn cycle(&self) -> usize {
        self.cycle
    }

    /// Round within the cycle, `1..=n`.
    pub fn round(&self) -> usize {
        self.round
    }

    /// Round counted from 1 across cycles.
    pub fn global_round(&self) -> usize {
        (self.cycle - 1) * self.n + self.round
    }

    /// Protection connections in rotation order.
    pub fn protection_set(&self) -> &[usize] {
        &self.protection
    }

    /// Plain connections, ascending.
    pub fn plain_set(&self) -> &[usize] {
        &self.plain
    }

    /// Connection at each codeword coordinate.
    pub fn role_order(&self) -> Vec<usize> {
        self.plain.iter().chain(&self.protection).copied().collect()
    }

    /// Codeword coordinate of a connection.
    pub fn position_of(&self, conn: usize) -> Option<usize> {
        self.plain
            .iter()
            .chain(&self.protection)
            .position(|&c| c == conn)
    }

    pub fn role_of(&self, conn: usize) -> Option<Role> {
        if self.protection.contains(&conn) {
            Some(Role::Encoded)
        } else if self.plain.contains(&conn) {
            Some(Role::Plain)
        } else {
            None
        }
    }

    /// Sequence number of the plain message `conn` sends this round: one
    /// more than the plain messages it sent in earlier rounds.
    pub fn message_index(&self, conn: usize) -> Option<usize> {
        if self.role_of(conn) != Some(Role::Plain) {
            return None;
        }
        let m = self.m();
        let in_cycle = (1..=self.round)
            .filter(|&r| (0..m).any(|i| (r - 1 + i) % self.n + 1 == conn))
            .count();
        let encoded_before = (self.cycle - 1) * m + in_cycle;
        Some(self.global_round() - encoded_before)
    }
}

/// One transmission on one connection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Packet {
    /// Sending connection, from 1.
    pub source: usize,
    /// A block of bits; a single-bit symbol is 0 or 1.
    pub payload: u64,
    /// Global round.
    pub round: usize,
    pub encoded: bool,
}

fn check_code(code: &LinearCode, plan: &RoundPlan) -> Result<()> {
    if code.n() != plan.n() || code.m() != plan.m() {
        return Err(Error::DimensionMismatch(format!(
            "code {} does not fit a round with n = {}, m = {}",
            code.parameters(),
            plan.n(),
            plan.m()
        )));
    }
    Ok(())
}

/// Produces the `n` packets of a round, indexed by connection (`packets[i]`
/// is sent on connection `i + 1`). `data` holds the plain symbols in plain
/// connection order.
pub fn encode_round(code: &LinearCode, plan: &RoundPlan, data: &[u64]) -> Result<Vec<Packet>> {
    check_code(code, plan)?;
    if data.len() != code.k() {
        return Err(Error::DimensionMismatch(format!(
            "{} data symbols for k = {}",
            data.len(),
            code.k()
        )));
    }
    let k = code.k();
    let g = code.generator();
    let round = plan.global_round();
    let mut packets = vec![
        Packet {
            source: 0,
            payload: 0,
            round,
            encoded: false,
        };
        plan.n()
    ];
    for (&conn, &x) in plan.plain_set().iter().zip(data) {
        packets[conn - 1] = Packet {
            source: conn,
            payload: x,
            round,
            encoded: false,
        };
    }
    for (j, &conn) in plan.protection_set().iter().enumerate() {
        let y = (0..k)
            .filter(|&l| g.get(l, k + j))
            .fold(0u64, |acc, l| acc ^ data[l]);
        packets[conn - 1] = Packet {
            source: conn,
            payload: y,
            round,
            encoded: true,
        };
    }
    Ok(packets)
}

/// Average normalized capacity `(n - m)/n`.
pub fn capacity(n: usize, m: usize) -> Result<Ratio<u64>> {
    if n == 0 || m > n {
        return Err(Error::InvalidPlan(format!("need n >= 1 and m <= n (got n = {n}, m = {m})")));
    }
    Ok(Ratio::new((n - m) as u64, n as u64))
}

/// Rounds in which each connection carried plain data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapacityLedger {
    rounds: usize,
    active: Vec<usize>,
}

impl CapacityLedger {
    /// Replays `rounds` rounds starting at global round 1.
    pub fn simulate(n: usize, m: usize, rounds: usize) -> Result<Self> {
        let mut active = vec![0; n];
        if m == 0 {
            active.iter_mut().for_each(|a| *a = rounds);
        } else {
            for r in 1..=rounds {
                for c in plan_round(n, m, r)?.plain_set() {
                    active[c - 1] += 1;
                }
            }
        }
        Ok(Self { rounds, active })
    }

    /// Plain-data rounds per connection.
    pub fn active(&self) -> &[usize] {
        &self.active
    }

    /// Encoded-data rounds per connection.
    pub fn encoded(&self) -> Vec<usize> {
        self.active.iter().map(|a| self.rounds - a).collect()
    }

    /// `(1/n) Σ c_i` with `c_i` the active fraction of connection `i`.
    pub fn normalized(&self) -> Ratio<u64> {
        let n = self.active.len() as u64;
        let total: u64 = self.active.iter().map(|&a| a as u64).sum();
        Ratio::new(total, n * self.rounds as u64)
    }
}

/// One line of a round ledger.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerRow {
    pub cycle: usize,
    pub round: usize,
    pub conn: usize,
    pub role: Role,
    pub payload: String,
}

impl fmt::Display for LedgerRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {}",
            self.cycle, self.round, self.conn, self.role, self.payload
        )
    }
}

/// Symbolic ledger of the first `rounds` global rounds.
///
/// Plain symbols are written `x<conn>^<seq>`. An encoded symbol is named
/// `y<round>` when `m = 1` and `y<round>.<j>` for the `j`-th protection
/// connection otherwise, followed by `=` and the plain symbols it sums.
pub fn symbolic_ledger(code: &LinearCode, rounds: usize) -> Result<Vec<LedgerRow>> {
    let (n, m, k) = (code.n(), code.m(), code.k());
    let g = code.generator();
    let mut rows = Vec::with_capacity(rounds * n);
    for r in 1..=rounds {
        let plan = plan_round(n, m, r)?;
        let names: Vec<String> = plan
            .plain_set()
            .iter()
            .map(|&c| format!("x{c}^{}", plan.message_index(c).unwrap_or(0)))
            .collect();
        let mut payload = vec![String::new(); n];
        for (&c, name) in plan.plain_set().iter().zip(&names) {
            payload[c - 1] = name.clone();
        }
        for (j, &c) in plan.protection_set().iter().enumerate() {
            let terms: Vec<&str> = (0..k)
                .filter(|&l| g.get(l, k + j))
                .map(|l| names[l].as_str())
                .collect();
            let label = if m == 1 {
                format!("y{}", plan.round())
            } else {
                format!("y{}.{}", plan.round(), j + 1)
            };
            payload[c - 1] = format!("{label}={}", terms.join("+"));
        }
        for (i, p) in payload.into_iter().enumerate() {
            let conn = i + 1;
            rows.push(LedgerRow {
                cycle: plan.cycle(),
                round: plan.round(),
                conn,
                role: plan.role_of(conn).expect("every connection has a role"),
                payload: p,
            });
        }
    }
    Ok(rows)
}

/// Value ledger of the first `rounds` global rounds; `message(conn, seq)`
/// supplies the plain symbol a connection sends for its `seq`-th message.
pub fn value_ledger(
    code: &LinearCode,
    rounds: usize,
    message: impl Fn(usize, usize) -> u64,
) -> Result<Vec<LedgerRow>> {
    let (n, m) = (code.n(), code.m());
    let mut rows = Vec::with_capacity(rounds * n);
    for r in 1..=rounds {
        let plan = plan_round(n, m, r)?;
        let data: Vec<u64> = plan
            .plain_set()
            .iter()
            .map(|&c| message(c, plan.message_index(c).unwrap_or(0)))
            .collect();
        for p in encode_round(code, &plan, &data)? {
            rows.push(LedgerRow {
                cycle: plan.cycle(),
                round: plan.round(),
                conn: p.source,
                role: if p.encoded { Role::Encoded } else { Role::Plain },
                payload: p.payload.to_string(),
            });
        }
    }
    Ok(rows)
}

/// Renders ledger rows, one per line.
pub fn ledger_text(rows: &[LedgerRow]) -> String {
    rows.iter().map(|r| format!("{r}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::CodewordVector;

    #[test]
    fn single_protection_rotation() {
        assert_eq!(plan_round(5, 1, 2).unwrap().protection_set(), &[2]);
        assert_eq!(plan_round(5, 1, 1).unwrap().protection_set(), &[1]);
        let p = plan_round(5, 1, 7).unwrap();
        assert_eq!((p.cycle(), p.round(), p.protection_set()), (2, 2, &[2][..]));
    }

    #[test]
    fn block_rotation_wraps() {
        let p = plan_round(7, 3, 6).unwrap();
        assert_eq!(p.protection_set(), &[6, 7, 1]);
        assert_eq!(p.plain_set(), &[2, 3, 4, 5]);
        assert_eq!(p.role_order(), vec![2, 3, 4, 5, 6, 7, 1]);
        assert_eq!(p.position_of(1), Some(6));
    }

    #[test]
    fn invalid_plans() {
        assert!(plan_round(5, 5, 1).is_err());
        assert!(plan_round(5, 0, 1).is_err());
        assert!(plan_round(5, 1, 0).is_err());
    }

    #[test]
    fn three_connection_parity_round() {
        let code = LinearCode::single_parity(3).unwrap();
        let plan = plan_round(3, 1, 3).unwrap();
        let packets = encode_round(&code, &plan, &[1, 0]).unwrap();
        let payloads: Vec<u64> = packets.iter().map(|p| p.payload).collect();
        assert_eq!(payloads, vec![1, 0, 1]);
        assert!(packets[2].encoded);
    }

    #[test]
    fn zero_data_gives_zero_packets() {
        let code = crate::codes::construct_bch(7, 3).unwrap();
        for r in 1..=7 {
            let plan = plan_round(7, 3, r).unwrap();
            let p = encode_round(&code, &plan, &[0; 4]).unwrap();
            assert!(p.iter().all(|p| p.payload == 0));
        }
    }

    #[test]
    fn hamming_round_matches_generator() {
        let code = crate::codes::construct_bch(7, 3).unwrap();
        let plan = plan_round(7, 3, 1).unwrap();
        let packets = encode_round(&code, &plan, &[1, 0, 1, 1]).unwrap();
        let word = code.encode(&"1011".parse::<CodewordVector>().unwrap()).unwrap();
        for (pos, conn) in plan.role_order().into_iter().enumerate() {
            assert_eq!(packets[conn - 1].payload, u64::from(word.get(pos)));
        }
    }

    #[test]
    fn capacity_values() {
        assert_eq!(capacity(9, 0).unwrap(), Ratio::from_integer(1));
        assert_eq!(capacity(5, 1).unwrap(), Ratio::new(4, 5));
        assert_eq!(capacity(15, 4).unwrap(), Ratio::new(11, 15));
        assert!(capacity(3, 4).is_err());
    }

    #[test]
    fn message_indices_skip_encoded_rounds() {
        // connection 1 is encoded in round 1, so its first plain message goes out in round 2
        assert_eq!(plan_round(5, 1, 2).unwrap().message_index(1), Some(1));
        assert_eq!(plan_round(5, 1, 2).unwrap().message_index(3), Some(2));
        assert_eq!(plan_round(5, 1, 6).unwrap().message_index(2), Some(5));
        assert_eq!(plan_round(5, 1, 6).unwrap().message_index(1), None);
    }

    #[test]
    fn mismatched_code_rejected() {
        let code = LinearCode::single_parity(4).unwrap();
        let plan = plan_round(5, 1, 1).unwrap();
        assert!(encode_round(&code, &plan, &[0; 3]).is_err());
        let plan = plan_round(4, 1, 1).unwrap();
        assert!(encode_round(&code, &plan, &[0; 2]).is_err());
    }
}
