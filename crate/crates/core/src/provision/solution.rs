//! Decoding solver assignments into paths, groups and circuits, and
//! independent checks on the result.

use num_rational::Rational64;

use super::bhandari::{bhandari_pair, DisjointPair};
use super::bnb::{solve_bnb_from, BnbLimits, BnbStatus};
use super::build::{build_ilp, ProvisionIlp};
use super::topology::{ConnectionSet, Topology};
use crate::error::{Error, Result};

/// Provisioning of one connection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionPlan {
    pub working: Vec<usize>,
    /// Paid 1+1 secondary path; `None` when the connection is grouped.
    pub secondary: Option<Vec<usize>>,
    pub group: usize,
}

/// Connections protected together and the arcs of their circuits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtectionGroup {
    pub members: Vec<usize>,
    pub s_arcs: Vec<usize>,
    pub r_arcs: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProvisionResult {
    pub total: Rational64,
    pub working: Rational64,
    pub spare: Rational64,
    pub connections: Vec<ConnectionPlan>,
    pub groups: Vec<ProtectionGroup>,
    pub status: BnbStatus,
    pub nodes: u64,
}

/// Assignment provisioning every connection alone with its Bhandari pair.
pub fn one_plus_one_assignment(
    ilp: &ProvisionIlp,
    pairs: &[DisjointPair],
) -> Vec<bool> {
    let mut values = vec![false; ilp.model.var_count()];
    for (h, pair) in pairs.iter().enumerate() {
        for &a in &pair.working {
            values[ilp.vars.z[h][a]] = true;
        }
        for &a in &pair.spare {
            values[ilp.vars.b[h][a]] = true;
            values[ilp.vars.beta[h][a]] = true;
        }
    }
    values
}

/// Bhandari pairs for every connection, in connection order.
pub fn disjoint_pairs(t: &Topology, c: &ConnectionSet) -> Result<Vec<DisjointPair>> {
    c.iter().map(|conn| bhandari_pair(t, conn.source, conn.dest)).collect()
}

/// Follows the arcs selected in `x` from `s` to `r`, lowest arc first.
fn walk(t: &Topology, selected: &[bool], s: usize, r: usize) -> Result<Vec<usize>> {
    let mut used = vec![false; selected.len()];
    let mut path = Vec::new();
    let mut v = s;
    while v != r {
        let a = t
            .out_arcs(v)
            .iter()
            .copied()
            .find(|&a| selected[a] && !used[a])
            .ok_or_else(|| Error::Solver(format!("path broken at node {}", t.name(v))))?;
        used[a] = true;
        path.push(a);
        v = t.arc(a).1;
    }
    Ok(path)
}

fn group_ids(ilp: &ProvisionIlp, values: &[bool]) -> Vec<usize> {
    let nc = ilp.vars.connections();
    let mut parent: Vec<usize> = (0..nc).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (h, l) in ilp.vars.pairs() {
        if values[ilp.vars.together(h, l)] {
            let (a, b) = (find(&mut parent, h), find(&mut parent, l));
            parent[a.max(b)] = a.min(b);
        }
    }
    (0..nc).map(|h| find(&mut parent, h)).collect()
}

/// Decodes an assignment of a provisioning model.
pub fn decode(
    t: &Topology,
    c: &ConnectionSet,
    ilp: &ProvisionIlp,
    values: &[bool],
    status: BnbStatus,
    nodes: u64,
) -> Result<ProvisionResult> {
    let v = &ilp.vars;
    let roots = group_ids(ilp, values);
    let mut group_of_root: Vec<Option<usize>> = vec![None; c.len()];
    let mut groups: Vec<ProtectionGroup> = Vec::new();
    let mut connections = Vec::new();
    let arcs = t.arc_count();
    for h in 0..c.len() {
        let g = *group_of_root[roots[h]].get_or_insert_with(|| {
            groups.push(ProtectionGroup {
                members: Vec::new(),
                s_arcs: Vec::new(),
                r_arcs: Vec::new(),
            });
            groups.len() - 1
        });
        groups[g].members.push(h);
        let conn = c.get(h);
        let z: Vec<bool> = (0..arcs).map(|a| values[v.z[h][a]]).collect();
        let working = walk(t, &z, conn.source, conn.dest)?;
        let paid = (0..arcs).any(|a| values[v.beta[h][a]]);
        let mut plan = ConnectionPlan {
            working,
            secondary: None,
            group: g,
        };
        if paid {
            let b: Vec<bool> = (0..arcs).map(|a| values[v.b[h][a]]).collect();
            let mut secondary = walk(t, &b, conn.source, conn.dest)?;
            // the two paths of a 1+1 pair cost the same in the objective;
            // report the cheaper one as working
            if t.path_cost(&secondary) < t.path_cost(&plan.working) {
                std::mem::swap(&mut secondary, &mut plan.working);
            }
            plan.secondary = Some(secondary);
        }
        connections.push(plan);
    }
    for g in &mut groups {
        for a in 0..arcs {
            if g.members.iter().any(|&h| values[v.p[h][a]]) {
                g.s_arcs.push(a);
            }
            if g.members.iter().any(|&h| values[v.q[h][a]]) {
                g.r_arcs.push(a);
            }
        }
    }
    let total = ilp.model.objective_value(values);
    let working: Rational64 = connections
        .iter()
        .map(|p| Rational64::from_integer(t.path_cost(&p.working) as i64))
        .sum();
    Ok(ProvisionResult {
        total,
        working,
        spare: total - working,
        connections,
        groups,
        status,
        nodes,
    })
}

/// Names of violated constraints when `values` is replayed against the model.
pub fn replay(ilp: &ProvisionIlp, values: &[bool]) -> Vec<String> {
    ilp.model
        .violations(values)
        .into_iter()
        .map(str::to_string)
        .collect()
}

/// Checks on the graph itself: every working path is a simple path of its
/// connection, and working paths within a group share no span.
pub fn check_disjointness(t: &Topology, c: &ConnectionSet, r: &ProvisionResult) -> Result<()> {
    let fail = |msg: String| Err(Error::Solver(msg));
    for (h, plan) in r.connections.iter().enumerate() {
        let conn = c.get(h);
        let nodes = t.path_nodes(&plan.working);
        if nodes.first() != Some(&conn.source) || nodes.last() != Some(&conn.dest) {
            return fail(format!("working path of connection {h} has wrong endpoints"));
        }
        let mut seen = nodes.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != nodes.len() {
            return fail(format!("working path of connection {h} revisits a node"));
        }
    }
    for g in &r.groups {
        for (i, &h) in g.members.iter().enumerate() {
            for &l in &g.members[i + 1..] {
                let span = |a: usize| a / 2;
                let shared = r.connections[h]
                    .working
                    .iter()
                    .any(|&a| r.connections[l].working.iter().any(|&b| span(a) == span(b)));
                if shared {
                    return fail(format!("working paths of {h} and {l} share a span"));
                }
            }
        }
    }
    Ok(())
}

/// Builds and solves the provisioning model, seeded with 1+1 provisioning.
pub fn provision(t: &Topology, c: &ConnectionSet, limits: &BnbLimits) -> Result<ProvisionResult> {
    let ilp = build_ilp(t, c)?;
    let pairs = disjoint_pairs(t, c)?;
    let warm = one_plus_one_assignment(&ilp, &pairs);
    let sol = solve_bnb_from(&ilp.model, limits, Some(&warm))?;
    decode(t, c, &ilp, &sol.values, sol.status, sol.nodes)
}
