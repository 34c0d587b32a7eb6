//! Cost comparison between coded protection and 1+1 protection.

use num_rational::Rational64;

use super::bnb::{BnbLimits, BnbStatus};
use super::model::format_number;
use super::solution::{disjoint_pairs, provision, ProvisionResult};
use super::topology::{ConnectionSet, Topology};
use crate::error::Result;

pub const CSV_HEADER: &str = "instance,scheme,total,working,spare";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostRow {
    pub total: Rational64,
    pub working: Rational64,
    pub spare: Rational64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostComparison {
    pub one_plus_one: CostRow,
    pub npc: CostRow,
    pub npc_status: BnbStatus,
    pub provisioning: ProvisionResult,
}

impl CostComparison {
    /// Two CSV rows; the coded row is labelled `npc-capped` when a search
    /// cap stopped the solver.
    pub fn csv_rows(&self, instance: &str) -> String {
        let scheme = match self.npc_status {
            BnbStatus::Optimal => "npc",
            BnbStatus::CapExceeded => "npc-capped",
        };
        let row = |name: &str, r: &CostRow| {
            format!(
                "{instance},{name},{},{},{}\n",
                format_number(r.total),
                format_number(r.working),
                format_number(r.spare)
            )
        };
        row("1+1", &self.one_plus_one) + &row(scheme, &self.npc)
    }
}

/// 1+1 costs from Bhandari pairs, the shorter path of each pair working.
pub fn one_plus_one_costs(t: &Topology, c: &ConnectionSet) -> Result<CostRow> {
    let pairs = disjoint_pairs(t, c)?;
    let working: u64 = pairs.iter().map(|p| p.working_cost).sum();
    let spare: u64 = pairs.iter().map(|p| p.spare_cost).sum();
    Ok(CostRow {
        total: Rational64::from_integer((working + spare) as i64),
        working: Rational64::from_integer(working as i64),
        spare: Rational64::from_integer(spare as i64),
    })
}

pub fn compare_costs(t: &Topology, c: &ConnectionSet, limits: &BnbLimits) -> Result<CostComparison> {
    let one_plus_one = one_plus_one_costs(t, c)?;
    let r = provision(t, c, limits)?;
    Ok(CostComparison {
        one_plus_one,
        npc: CostRow {
            total: r.total,
            working: r.working,
            spare: r.spare,
        },
        npc_status: r.status,
        provisioning: r,
    })
}
