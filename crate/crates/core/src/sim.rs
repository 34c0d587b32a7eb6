//! Failure injection and recovery.
//!
//! Failed connections are erasures at known positions. Recovery follows
//! three cases: only encoded packets lost (nothing to do), only plain
//! packets lost, or a mix. Lost plain symbols are rebuilt by the erasure
//! decoder, which also yields the number of XORs each receiver performs.
//!
//! Query accounting:
//! * single-protection codes (`m = 1`): the receiver of the lost plain
//!   packet queries the other `n - 1` receivers;
//! * only plain packets lost, `m > 1`: the lowest-indexed encoded receiver
//!   sends `n - m - 1` queries, then one unicast per failed receiver;
//! * mixed losses: the lowest-indexed surviving encoded receiver queries
//!   every other surviving receiver, then one unicast per failed plain
//!   receiver.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::gf2::ErasurePlan;
use crate::scheme::{encode_round, plan_round, Packet, RoundPlan};

/// Connections that fail in a round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureScenario {
    failed: Vec<usize>,
    round: usize,
}

impl FailureScenario {
    pub fn new(failed: &[usize], round: usize) -> Self {
        let mut failed = failed.to_vec();
        failed.sort_unstable();
        failed.dedup();
        Self { failed, round }
    }

    /// Failed connections, ascending, from 1.
    pub fn failed(&self) -> &[usize] {
        &self.failed
    }

    pub fn round(&self) -> usize {
        self.round
    }
}

/// A round as seen by the receivers: `None` marks an erased packet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReceivedRound {
    pub round: usize,
    pub symbols: Vec<Option<u64>>,
}

impl ReceivedRound {
    pub fn erased(&self) -> Vec<usize> {
        (1..=self.symbols.len())
            .filter(|&c| self.symbols[c - 1].is_none())
            .collect()
    }
}

/// Erases the packets of the failed connections.
pub fn inject(packets: &[Packet], scenario: &FailureScenario) -> Result<ReceivedRound> {
    let n = packets.len();
    if let Some(&bad) = scenario.failed.iter().find(|&&c| c == 0 || c > n) {
        return Err(Error::InvalidScenario { index: bad, n });
    }
    let symbols = packets
        .iter()
        .enumerate()
        .map(|(i, p)| (scenario.failed.binary_search(&(i + 1)).is_err()).then_some(p.payload))
        .collect();
    Ok(ReceivedRound {
        round: packets.first().map_or(scenario.round, |p| p.round),
        symbols,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FailureCase {
    NoFailure,
    EncodedOnly,
    PlainOnly,
    Mixed,
}

impl fmt::Display for FailureCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureCase::NoFailure => "none",
            FailureCase::EncodedOnly => "encoded-only",
            FailureCase::PlainOnly => "plain-only",
            FailureCase::Mixed => "mixed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoveryStats {
    pub case: FailureCase,
    pub xor_ops: usize,
    pub queries: usize,
    /// Recovered symbols forwarded by the designated decoder.
    pub unicasts: usize,
    /// Receiver that performs the decoding, if any.
    pub decoder: Option<usize>,
    pub recovered: bool,
}

/// Decoding work for one failure pattern in one round, reusable across
/// payloads.
#[derive(Debug, Clone)]
pub struct RecoveryPlan {
    plan: RoundPlan,
    failed: Vec<usize>,
    erasure: Option<ErasurePlan>,
    stats: RecoveryStats,
}

impl RecoveryPlan {
    pub fn new(code: &LinearCode, plan: &RoundPlan, failed: &[usize]) -> Result<Self> {
        let n = code.n();
        if code.n() != plan.n() || code.m() != plan.m() {
            return Err(Error::DimensionMismatch(format!(
                "code {} does not fit a round with n = {}, m = {}",
                code.parameters(),
                plan.n(),
                plan.m()
            )));
        }
        let scenario = FailureScenario::new(failed, plan.global_round());
        if let Some(&bad) = scenario.failed.iter().find(|&&c| c == 0 || c > n) {
            return Err(Error::InvalidScenario { index: bad, n });
        }
        let failed = scenario.failed;
        let is_plain = |c: &usize| plan.plain_set().contains(c);
        let plain_lost = failed.iter().filter(|c| is_plain(c)).count();
        let encoded_lost = failed.len() - plain_lost;
        let case = match (plain_lost, encoded_lost) {
            (0, 0) => FailureCase::NoFailure,
            (0, _) => FailureCase::EncodedOnly,
            (_, 0) => FailureCase::PlainOnly,
            _ => FailureCase::Mixed,
        };
        if plain_lost == 0 {
            return Ok(Self {
                plan: plan.clone(),
                failed,
                erasure: None,
                stats: RecoveryStats {
                    case,
                    xor_ops: 0,
                    queries: 0,
                    unicasts: 0,
                    decoder: None,
                    recovered: true,
                },
            });
        }
        let positions: Vec<usize> = failed
            .iter()
            .map(|&c| plan.position_of(c).expect("connection in plan"))
            .collect();
        let erasure = ErasurePlan::new(code.parity(), &positions).map_err(|e| match e {
            Error::UnrecoverableErasure { .. } => Error::UnrecoverableErasure {
                positions: failed.clone(),
            },
            other => other,
        })?;
        let k = code.k();
        let xor_ops = erasure
            .erased()
            .iter()
            .enumerate()
            .filter(|&(_, &p)| p < k)
            .map(|(i, _)| erasure.xor_count(i))
            .sum();
        let survivors = n - failed.len();
        let first_live_encoded = plan
            .protection_set()
            .iter()
            .copied()
            .filter(|c| failed.binary_search(c).is_err())
            .min();
        let (queries, unicasts, decoder) = if code.m() == 1 {
            (n - 1, 0, failed.iter().copied().find(|c| is_plain(c)))
        } else if case == FailureCase::PlainOnly {
            (n - code.m() - 1, plain_lost, first_live_encoded)
        } else {
            (survivors.saturating_sub(1), plain_lost, first_live_encoded)
        };
        Ok(Self {
            plan: plan.clone(),
            failed,
            erasure: Some(erasure),
            stats: RecoveryStats {
                case,
                xor_ops,
                queries,
                unicasts,
                decoder,
                recovered: true,
            },
        })
    }

    pub fn failed(&self) -> &[usize] {
        &self.failed
    }

    pub fn stats(&self) -> &RecoveryStats {
        &self.stats
    }

    /// Plain data of the round in plain-connection order.
    pub fn apply(&self, received: &ReceivedRound) -> Result<Vec<u64>> {
        let n = self.plan.n();
        if received.symbols.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} symbols for n = {n}",
                received.symbols.len()
            )));
        }
        if received.erased() != self.failed {
            return Err(Error::DimensionMismatch(
                "erasure mask differs from the planned failures".into(),
            ));
        }
        let mut word: Vec<u64> = self
            .plan
            .role_order()
            .iter()
            .map(|&c| received.symbols[c - 1].unwrap_or(0))
            .collect();
        if let Some(e) = &self.erasure {
            e.apply(&mut word)?;
        }
        word.truncate(self.plan.k());
        Ok(word)
    }
}

/// Restores the plain data of a received round.
pub fn recover(
    received: &ReceivedRound,
    code: &LinearCode,
    plan: &RoundPlan,
) -> Result<(Vec<u64>, RecoveryStats)> {
    let rp = RecoveryPlan::new(code, plan, &received.erased())?;
    let data = rp.apply(received)?;
    Ok((data, rp.stats))
}

/// Limits for [`exhaustive_validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidateOptions {
    /// Failure patterns enumerated exhaustively up to this count, sampled
    /// above it.
    pub pattern_cap: u64,
    /// All `2^k` messages are tried when they fit this cap, otherwise this
    /// many sampled messages.
    pub codeword_cap: u64,
    pub seed: u64,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            pattern_cap: 100_000,
            codeword_cap: 100,
            seed: 0,
        }
    }
}

/// Recovery statistics aggregated per failure case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaseSummary {
    pub patterns: u64,
    pub xor_min: usize,
    pub xor_max: usize,
    pub queries_min: usize,
    pub queries_max: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub code: String,
    pub n: usize,
    pub k: usize,
    pub d: String,
    pub t: usize,
    pub patterns_tested: u64,
    pub codewords_per_pattern: u64,
    pub exhaustive: bool,
    /// First failing pattern (connections, from 1) in enumeration order.
    pub witness: Option<Vec<usize>>,
    pub cases: BTreeMap<FailureCase, CaseSummary>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }

    fn witness_text(&self) -> String {
        self.witness.as_ref().map_or_else(String::new, |w| {
            w.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
        })
    }

    /// `code n k d t patterns_tested pass|fail [witness]`
    pub fn line(&self) -> String {
        let mut s = format!(
            "{} {} {} {} {} {} {}",
            self.code,
            self.n,
            self.k,
            self.d,
            self.t,
            self.patterns_tested,
            if self.passed() { "pass" } else { "fail" }
        );
        if self.witness.is_some() {
            s.push(' ');
            s.push_str(&self.witness_text());
        }
        s
    }

    pub const CSV_HEADER: &'static str = "code,n,k,d,t,patterns_tested,result,witness";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.code,
            self.n,
            self.k,
            self.d,
            self.t,
            self.patterns_tested,
            if self.passed() { "pass" } else { "fail" },
            self.witness_text().replace(',', " ")
        )
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * u128::from(n - i) / u128::from(i + 1);
        if r > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    r as u64
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let s = c.len();
    for i in (0..s).rev() {
        if c[i] < n - s + i + 1 {
            c[i] += 1;
            for j in i + 1..s {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Every failure pattern of size `1..=t`, or a sample when there are more
/// than `cap`.
fn failure_patterns(n: usize, t: usize, cap: u64, rng: &mut ChaCha8Rng) -> (Vec<Vec<usize>>, bool) {
    let t = t.min(n);
    let total = (1..=t).fold(0u64, |acc, s| acc.saturating_add(binomial(n as u64, s as u64)));
    if total <= cap {
        let mut out = Vec::with_capacity(total as usize);
        for s in 1..=t {
            let mut c: Vec<usize> = (1..=s).collect();
            loop {
                out.push(c.clone());
                if !next_combination(&mut c, n) {
                    break;
                }
            }
        }
        (out, true)
    } else {
        let out = (0..cap)
            .map(|i| {
                let s = (i as usize % t) + 1;
                let mut p: Vec<usize> = sample(rng, n, s).into_iter().map(|x| x + 1).collect();
                p.sort_unstable();
                p
            })
            .collect();
        (out, false)
    }
}

/// Message batches as bit-sliced plain symbols: lane `b` of `batch[i]`
/// is bit `i` of one message.
fn message_batches(k: usize, cap: u64, rng: &mut ChaCha8Rng) -> (Vec<Vec<u64>>, u64) {
    let messages: Vec<Vec<bool>> = if k < 63 && (1u64 << k) <= cap {
        (0..1u64 << k)
            .map(|v| (0..k).map(|i| (v >> i) & 1 == 1).collect())
            .collect()
    } else {
        (0..cap)
            .map(|_| (0..k).map(|_| rng.random::<bool>()).collect())
            .collect()
    };
    let count = messages.len() as u64;
    let batches = messages
        .chunks(64)
        .map(|chunk| {
            (0..k)
                .map(|i| {
                    chunk
                        .iter()
                        .enumerate()
                        .fold(0u64, |acc, (lane, msg)| acc | (u64::from(msg[i]) << lane))
                })
                .collect()
        })
        .collect();
    (batches, count)
}

/// Pushes messages through encode, inject and recover for every failure
/// pattern of up to `t` connections in round 1.
pub fn exhaustive_validate(
    code: &LinearCode,
    t: usize,
    options: &ValidateOptions,
) -> Result<ValidationReport> {
    let (n, k) = (code.n(), code.k());
    let plan = plan_round(n, code.m(), 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let (patterns, exhaustive) = failure_patterns(n, t, options.pattern_cap, &mut rng);
    let (batches, codewords) = message_batches(k, options.codeword_cap, &mut rng);
    let packets: Vec<Vec<Packet>> = batches
        .iter()
        .map(|data| encode_round(code, &plan, data))
        .collect::<Result<_>>()?;

    let mut witness = None;
    let mut cases: BTreeMap<FailureCase, CaseSummary> = BTreeMap::new();
    let mut tested = 0u64;
    'patterns: for pattern in &patterns {
        tested += 1;
        let rp = match RecoveryPlan::new(code, &plan, pattern) {
            Ok(rp) => rp,
            Err(Error::UnrecoverableErasure { .. }) => {
                witness = Some(pattern.clone());
                break;
            }
            Err(e) => return Err(e),
        };
        let s = rp.stats();
        cases
            .entry(s.case)
            .and_modify(|c| {
                c.patterns += 1;
                c.xor_min = c.xor_min.min(s.xor_ops);
                c.xor_max = c.xor_max.max(s.xor_ops);
                c.queries_min = c.queries_min.min(s.queries);
                c.queries_max = c.queries_max.max(s.queries);
            })
            .or_insert(CaseSummary {
                patterns: 1,
                xor_min: s.xor_ops,
                xor_max: s.xor_ops,
                queries_min: s.queries,
                queries_max: s.queries,
            });
        let scenario = FailureScenario::new(pattern, 1);
        for (data, sent) in batches.iter().zip(&packets) {
            let received = inject(sent, &scenario)?;
            match rp.apply(&received) {
                Ok(restored) if &restored == data => {}
                _ => {
                    witness = Some(pattern.clone());
                    break 'patterns;
                }
            }
        }
    }
    Ok(ValidationReport {
        code: code.parameters(),
        n,
        k,
        d: code.d_min().to_string(),
        t,
        patterns_tested: tested,
        codewords_per_pattern: codewords,
        exhaustive,
        witness,
        cases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::construct_bch;

    fn round(code: &LinearCode, r: usize, data: &[u64]) -> (RoundPlan, Vec<Packet>) {
        let plan = plan_round(code.n(), code.m(), r).unwrap();
        let packets = encode_round(code, &plan, data).unwrap();
        (plan, packets)
    }

    #[test]
    fn inject_marks_erasures() {
        let code = LinearCode::single_parity(5).unwrap();
        let (_, packets) = round(&code, 1, &[1, 0, 1, 1]);
        let r = inject(&packets, &FailureScenario::new(&[], 1)).unwrap();
        assert_eq!(r.erased(), Vec::<usize>::new());
        let r = inject(&packets, &FailureScenario::new(&[3], 1)).unwrap();
        assert_eq!(r.erased(), vec![3]);
        let r = inject(&packets, &FailureScenario::new(&[1, 2, 3, 4, 5], 1)).unwrap();
        assert_eq!(r.erased().len(), 5);
        assert!(recover(&r, &code, &plan_round(5, 1, 1).unwrap()).is_err());
        assert!(inject(&packets, &FailureScenario::new(&[6], 1)).is_err());
    }

    #[test]
    fn single_failure_counts() {
        let code = LinearCode::single_parity(5).unwrap();
        let (plan, packets) = round(&code, 1, &[1, 0, 1, 1]);
        let r = inject(&packets, &FailureScenario::new(&[1], 1)).unwrap();
        let (data, s) = recover(&r, &code, &plan).unwrap();
        assert_eq!(data, vec![1, 0, 1, 1]);
        assert_eq!((s.case, s.xor_ops, s.queries), (FailureCase::EncodedOnly, 0, 0));
        let r = inject(&packets, &FailureScenario::new(&[4], 1)).unwrap();
        let (data, s) = recover(&r, &code, &plan).unwrap();
        assert_eq!(data, vec![1, 0, 1, 1]);
        assert_eq!((s.case, s.xor_ops, s.queries), (FailureCase::PlainOnly, 3, 4));
        assert_eq!(s.decoder, Some(4));
    }

    #[test]
    fn multi_failure_cases() {
        let code = construct_bch(7, 3).unwrap();
        let (plan, packets) = round(&code, 1, &[1, 1, 0, 1]);
        // round 1: connections 1..=3 encoded, 4..=7 plain
        let r = inject(&packets, &FailureScenario::new(&[4, 6], 1)).unwrap();
        let (data, s) = recover(&r, &code, &plan).unwrap();
        assert_eq!(data, vec![1, 1, 0, 1]);
        assert_eq!(s.case, FailureCase::PlainOnly);
        assert_eq!((s.queries, s.unicasts, s.decoder), (3, 2, Some(1)));
        let r = inject(&packets, &FailureScenario::new(&[1, 5], 1)).unwrap();
        let (data, s) = recover(&r, &code, &plan).unwrap();
        assert_eq!(data, vec![1, 1, 0, 1]);
        assert_eq!(s.case, FailureCase::Mixed);
        assert_eq!((s.queries, s.unicasts, s.decoder), (4, 1, Some(2)));
        // all protection paths lost: nothing to decode even beyond t
        let r = inject(&packets, &FailureScenario::new(&[1, 2, 3], 1)).unwrap();
        assert_eq!(recover(&r, &code, &plan).unwrap().1.xor_ops, 0);
    }

    #[test]
    fn dependent_pattern_reports_connections() {
        let code = construct_bch(7, 3).unwrap();
        let plan = plan_round(7, 3, 1).unwrap();
        let report = exhaustive_validate(&code, 3, &ValidateOptions::default()).unwrap();
        let w = report.witness.clone().unwrap();
        assert_eq!(w.len(), 3);
        match RecoveryPlan::new(&code, &plan, &w) {
            Err(Error::UnrecoverableErasure { positions }) => assert_eq!(positions, w),
            other => panic!("{other:?}"),
        }
        assert!(report.line().ends_with(&format!(
            "fail {}",
            w.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
        )));
    }

    #[test]
    fn hamming_passes_two_failures() {
        let code = construct_bch(7, 3).unwrap();
        let report = exhaustive_validate(&code, 2, &ValidateOptions::default()).unwrap();
        assert!(report.passed());
        assert_eq!(report.patterns_tested, 7 + 21);
        assert_eq!(report.codewords_per_pattern, 16);
        assert_eq!(report.line(), "[7,4,3] 7 4 3 2 28 pass");
    }

    #[test]
    fn sampling_above_cap_is_seeded() {
        let code = construct_bch(15, 5).unwrap();
        let opts = ValidateOptions {
            pattern_cap: 50,
            codeword_cap: 10,
            seed: 7,
        };
        let a = exhaustive_validate(&code, 4, &opts).unwrap();
        let b = exhaustive_validate(&code, 4, &opts).unwrap();
        assert_eq!(a, b);
        assert!(!a.exhaustive && a.passed());
        assert_eq!(a.patterns_tested, 50);
    }

    #[test]
    fn combinations_in_order() {
        let mut c = vec![1, 2];
        let mut all = vec![c.clone()];
        while next_combination(&mut c, 4) {
            all.push(c.clone());
        }
        assert_eq!(
            all,
            vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]]
        );
        assert_eq!(binomial(15, 2), 105);
    }
}
