//! Rotating transmission scheme: golden ledger, capacity and fairness.

use npc_core::codes::{construct_bch, LinearCode};
use npc_core::scheme::{
    capacity, encode_round, ledger_text, plan_round, symbolic_ledger, value_ledger,
    CapacityLedger, Role,
};
use num_rational::Ratio;
use proptest::prelude::*;

#[test]
fn five_connection_ledger_matches_golden() {
    let code = LinearCode::single_parity(5).unwrap();
    let text = ledger_text(&symbolic_ledger(&code, 5).unwrap());
    assert_eq!(text, include_str!("golden/single_parity_5_rounds.txt"));
}

/// Encoded symbol of round `j` computed directly from the closed form
/// `y_j = Σ_{i<j} x_i^{j-1} + Σ_{i>j} x_i^j`.
fn closed_form(j: usize, x: impl Fn(usize, usize) -> u64) -> u64 {
    let below = (1..j).fold(0, |acc, i| acc ^ x(i, j - 1));
    (j + 1..=5).fold(below, |acc, i| acc ^ x(i, j))
}

#[test]
fn value_ledger_matches_closed_form() {
    let code = LinearCode::single_parity(5).unwrap();
    let x = |c: usize, seq: usize| (c as u64) * 1_000 + (seq as u64) * 7 + 3;
    let rows = value_ledger(&code, 5, x).unwrap();
    for row in rows.iter().filter(|r| r.role == Role::Encoded) {
        assert_eq!(row.conn, row.round);
        assert_eq!(row.payload, closed_form(row.round, x).to_string());
    }
}

#[test]
fn capacity_examples() {
    for (n, m) in [(5, 1), (15, 4), (31, 10)] {
        let expected = Ratio::new((n - m) as u64, n as u64);
        assert_eq!(capacity(n, m).unwrap(), expected);
        assert_eq!(CapacityLedger::simulate(n, m, n).unwrap().normalized(), expected);
        assert_eq!(CapacityLedger::simulate(n, m, 3 * n).unwrap().normalized(), expected);
    }
}

#[test]
fn rounds_send_n_packets() {
    let code = construct_bch(15, 3).unwrap();
    for r in 1..=30 {
        let plan = plan_round(15, 4, r).unwrap();
        let data: Vec<u64> = (0..11).map(|i| i as u64).collect();
        let packets = encode_round(&code, &plan, &data).unwrap();
        assert_eq!(packets.len(), 15);
        assert_eq!(packets.iter().filter(|p| p.encoded).count(), 4);
    }
}

#[test]
fn invalid_plans() {
    assert!(plan_round(5, 0, 1).is_err());
    assert!(plan_round(5, 5, 1).is_err());
    assert!(plan_round(5, 1, 0).is_err());
}

proptest! {
    #[test]
    fn each_connection_encodes_m_times_per_cycle(n in 2usize..=32, m_frac in 0.0f64..1.0, cycles in 1usize..3) {
        let m = 1 + ((n - 1) as f64 * m_frac) as usize;
        prop_assume!(m < n);
        let ledger = CapacityLedger::simulate(n, m, cycles * n).unwrap();
        prop_assert!(ledger.encoded().iter().all(|&e| e == cycles * m));
        prop_assert_eq!(ledger.normalized(), capacity(n, m).unwrap());
    }

    #[test]
    fn plan_partitions_connections(n in 2usize..40, m_frac in 0.0f64..1.0, round in 1usize..200) {
        let m = 1 + ((n - 1) as f64 * m_frac) as usize;
        prop_assume!(m < n);
        let plan = plan_round(n, m, round).unwrap();
        let mut all: Vec<usize> = plan.protection_set().iter().chain(plan.plain_set()).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (1..=n).collect::<Vec<_>>());
        prop_assert_eq!(plan.protection_set().len(), m);
    }
}
