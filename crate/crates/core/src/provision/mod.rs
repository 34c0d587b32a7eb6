//! Provisioning of working paths, secondary paths and S/R circuits.

pub mod bhandari;
pub mod bnb;
pub mod build;
pub mod compare;
pub mod model;
pub mod solution;
pub mod topology;

pub use bhandari::{bhandari_pair, shortest_path, DisjointPair};
pub use bnb::{solve_bnb, solve_bnb_from, BnbLimits, BnbSolution, BnbStatus};
pub use compare::{compare_costs, one_plus_one_costs, CostComparison, CostRow, CSV_HEADER};
pub use build::{build_ilp, ProvisionIlp, VarIndex};
pub use model::{Constraint, IlpModel, Sense, VarId};
pub use topology::{
    load_topology, read_topology, topology_text, Connection, ConnectionSet, Edge, Topology,
};
pub use solution::{
    check_disjointness, decode, disjoint_pairs, one_plus_one_assignment, provision, replay,
    ConnectionPlan, ProtectionGroup, ProvisionResult,
};
