//! Minimum-cost pair of link-disjoint paths.
//!
//! Shortest path first; then, with that path's spans replaced by single
//! reversed arcs of negated cost, a second shortest path by Bellman-Ford.
//! Spans traversed by both paths in opposite directions cancel, and the
//! remaining arcs split into two disjoint paths.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::topology::Topology;
use crate::error::{Error, Result};

/// Two link-disjoint paths as arc lists, the cheaper one first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjointPair {
    pub working: Vec<usize>,
    pub spare: Vec<usize>,
    pub working_cost: u64,
    pub spare_cost: u64,
}

impl DisjointPair {
    pub fn total(&self) -> u64 {
        self.working_cost + self.spare_cost
    }
}

/// Dijkstra over arcs allowed by `usable`; ties go to the lower node and
/// the earlier arc.
pub fn shortest_path(
    t: &Topology,
    s: usize,
    r: usize,
    usable: impl Fn(usize) -> bool,
) -> Option<(Vec<usize>, u64)> {
    let n = t.node_count();
    let mut dist = vec![u64::MAX; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[s] = 0;
    heap.push(Reverse((0u64, s)));
    while let Some(Reverse((d, v))) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for &a in t.out_arcs(v) {
            if !usable(a) {
                continue;
            }
            let w = t.arc(a).1;
            let nd = d + t.arc_cost(a);
            if nd < dist[w] {
                dist[w] = nd;
                pred[w] = Some(a);
                heap.push(Reverse((nd, w)));
            }
        }
    }
    if dist[r] == u64::MAX {
        return None;
    }
    let mut arcs = Vec::new();
    let mut v = r;
    while v != s {
        let a = pred[v].expect("reachable node has a predecessor");
        arcs.push(a);
        v = t.arc(a).0;
    }
    arcs.reverse();
    Some((arcs, dist[r]))
}

/// Minimum total cost pair of link-disjoint `s -> r` paths.
pub fn bhandari_pair(t: &Topology, s: usize, r: usize) -> Result<DisjointPair> {
    let not_connected = || Error::NotTwoConnected {
        source_node: t.name(s).to_string(),
        target: t.name(r).to_string(),
    };
    let (first, _) = shortest_path(t, s, r, |_| true).ok_or_else(not_connected)?;
    let m = t.arc_count();
    let mut on_first = vec![false; m];
    for &a in &first {
        on_first[a] = true;
    }
    // arc weights in the modified graph; None marks a removed arc
    let weight = |a: usize| -> Option<i64> {
        let rev = Topology::reverse(a);
        if on_first[a] {
            None
        } else if on_first[rev] {
            Some(-(t.arc_cost(a) as i64))
        } else {
            Some(t.arc_cost(a) as i64)
        }
    };
    let n = t.node_count();
    let mut dist = vec![i64::MAX; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    dist[s] = 0;
    for _ in 0..n {
        let mut changed = false;
        for a in 0..m {
            let Some(w) = weight(a) else { continue };
            let (u, v) = t.arc(a);
            if dist[u] == i64::MAX || v == s {
                continue;
            }
            if dist[u] + w < dist[v] {
                dist[v] = dist[u] + w;
                pred[v] = Some(a);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if dist[r] == i64::MAX {
        return Err(not_connected());
    }
    let mut second = Vec::new();
    let mut v = r;
    while v != s {
        let a = pred[v].expect("reachable node has a predecessor");
        second.push(a);
        v = t.arc(a).0;
    }

    let mut used = vec![false; m];
    for &a in first.iter().chain(&second) {
        used[a] = true;
    }
    for a in 0..m {
        let rev = Topology::reverse(a);
        if used[a] && used[rev] {
            used[a] = false;
            used[rev] = false;
        }
    }
    let mut walk = || {
        let mut path = Vec::new();
        let mut v = s;
        while v != r {
            let a = t.out_arcs(v).iter().copied().filter(|&a| used[a]).min()?;
            used[a] = false;
            path.push(a);
            v = t.arc(a).1;
        }
        Some(path)
    };
    let p1 = walk().ok_or_else(not_connected)?;
    let p2 = walk().ok_or_else(not_connected)?;
    let (c1, c2) = (t.path_cost(&p1), t.path_cost(&p2));
    Ok(if c2 < c1 {
        DisjointPair {
            working: p2,
            spare: p1,
            working_cost: c2,
            spare_cost: c1,
        }
    } else {
        DisjointPair {
            working: p1,
            spare: p2,
            working_cost: c1,
            spare_cost: c2,
        }
    })
}
