//! Exhaustive provisioning oracle, independent of the ILP encoding.
//!
//! Costs are returned doubled so that half-cost circuit arcs stay integral.
//! Arc sets are `u64` masks (at most 64 arcs).

#![allow(dead_code)]

use std::collections::HashMap;

use npc_core::provision::{ConnectionSet, Topology};

fn mask_cost(t: &Topology, mask: u64) -> u64 {
    (0..t.arc_count())
        .filter(|a| mask >> a & 1 == 1)
        .map(|a| t.arc_cost(a))
        .sum()
}

fn span_mask(mask: u64) -> u64 {
    // both arcs of every span touched by `mask`
    let even = 0x5555_5555_5555_5555u64;
    let spans = (mask | (mask >> 1)) & even;
    spans | (spans << 1)
}

/// All simple `s -> r` paths as arc masks.
pub fn simple_paths(t: &Topology, s: usize, r: usize) -> Vec<u64> {
    fn go(t: &Topology, v: usize, r: usize, seen: &mut Vec<bool>, mask: u64, out: &mut Vec<u64>) {
        if v == r {
            out.push(mask);
            return;
        }
        for a in 0..t.arc_count() {
            let (u, w) = t.arc(a);
            if u == v && !seen[w] {
                seen[w] = true;
                go(t, w, r, seen, mask | 1 << a, out);
                seen[w] = false;
            }
        }
    }
    let mut seen = vec![false; t.node_count()];
    seen[s] = true;
    let mut out = Vec::new();
    go(t, s, r, &mut seen, 0, &mut out);
    out
}

/// Minimum `c(W) + c(B)` over simple paths sharing no directed arc.
pub fn one_plus_one_cost(t: &Topology, s: usize, r: usize) -> Option<u64> {
    let paths = simple_paths(t, s, r);
    let mut best = None;
    for &w in &paths {
        for &b in &paths {
            if w & b == 0 {
                let c = mask_cost(t, w) + mask_cost(t, b);
                best = Some(best.map_or(c, |x: u64| x.min(c)));
            }
        }
    }
    best
}

/// Every set partition of `0..n`, as group lists.
pub fn partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(i: usize, n: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for g in 0..cur.len() {
            cur[g].push(i);
            go(i + 1, n, cur, out);
            cur[g].pop();
        }
        cur.push(vec![i]);
        go(i + 1, n, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

struct Circuits<'a> {
    t: &'a Topology,
    /// balanced arc sets within an allowed mask, keyed by that mask
    cache: HashMap<u64, Vec<u64>>,
}

impl Circuits<'_> {
    fn balanced(&mut self, allowed: u64) -> &Vec<u64> {
        let t = self.t;
        self.cache.entry(allowed).or_insert_with(|| {
            let arcs: Vec<usize> = (0..t.arc_count()).filter(|a| allowed >> a & 1 == 1).collect();
            let mut out = Vec::new();
            for sub in 0u64..(1u64 << arcs.len()) {
                let mut bal = vec![0i32; t.node_count()];
                let mut mask = 0u64;
                for (k, &a) in arcs.iter().enumerate() {
                    if sub >> k & 1 == 1 {
                        let (u, v) = t.arc(a);
                        bal[u] -= 1;
                        bal[v] += 1;
                        mask |= 1 << a;
                    }
                }
                if bal.iter().all(|&b| b == 0) {
                    out.push(mask);
                }
            }
            out
        })
    }

    /// Circulations with exactly one arc leaving and one entering `anchor`.
    fn through(&mut self, allowed: u64, anchor: usize) -> Vec<u64> {
        let t = self.t;
        let out_mask: u64 = t.out_arcs(anchor).iter().map(|&a| 1u64 << a).sum();
        self.balanced(allowed)
            .iter()
            .copied()
            .filter(|m| (m & out_mask).count_ones() == 1)
            .collect()
    }
}

fn indegree(t: &Topology, mask: u64, j: usize) -> u32 {
    t.in_arcs(j).iter().filter(|&&a| mask >> a & 1 == 1).count() as u32
}

/// Cheapest doubled circuit cost for one group, or `None` if impossible.
fn circuit_cost(
    t: &Topology,
    circuits: &mut Circuits,
    members: &[usize],
    anchor: &dyn Fn(usize) -> usize,
    forbidden: u64,
) -> Option<u64> {
    let needing: Vec<usize> = members
        .iter()
        .copied()
        .filter(|&h| members.iter().any(|&l| anchor(l) != anchor(h)))
        .collect();
    if needing.is_empty() {
        return Some(0);
    }
    let allowed = !forbidden & ((1u64 << t.arc_count()) - 1);
    let options: Vec<Vec<u64>> = needing
        .iter()
        .map(|&h| circuits.through(allowed, anchor(h)))
        .collect();
    let mut best: Option<u64> = None;
    let mut pick = vec![0u64; needing.len()];
    fn search(
        t: &Topology,
        needing: &[usize],
        anchor: &dyn Fn(usize) -> usize,
        options: &[Vec<u64>],
        k: usize,
        union: u64,
        pick: &mut Vec<u64>,
        best: &mut Option<u64>,
    ) {
        let cost = mask_cost(t, union);
        if best.is_some_and(|b| cost >= b) {
            return;
        }
        if k == needing.len() {
            for i in 0..needing.len() {
                for j in i + 1..needing.len() {
                    if anchor(needing[i]) == anchor(needing[j]) {
                        continue;
                    }
                    let meet = (0..t.node_count())
                        .any(|v| indegree(t, pick[i], v) + indegree(t, pick[j], v) >= 2);
                    if !meet {
                        return;
                    }
                }
            }
            *best = Some(cost);
            return;
        }
        for &c in &options[k] {
            pick[k] = c;
            search(t, needing, anchor, options, k + 1, union | c, pick, best);
        }
    }
    search(t, &needing, anchor, &options, 0, 0, &mut pick, &mut best);
    best
}

/// Doubled cost of the cheapest provisioning of one group.
fn group_cost(t: &Topology, c: &ConnectionSet, circuits: &mut Circuits, members: &[usize]) -> Option<u64> {
    if let [h] = members {
        let conn = c.get(*h);
        return one_plus_one_cost(t, conn.source, conn.dest).map(|x| 2 * x);
    }
    let paths: Vec<Vec<u64>> = members
        .iter()
        .map(|&h| simple_paths(t, c.get(h).source, c.get(h).dest))
        .collect();
    let source = |h: usize| c.get(h).source;
    let dest = |h: usize| c.get(h).dest;
    let mut best: Option<u64> = None;
    let mut idx = vec![0usize; members.len()];
    loop {
        let chosen: Vec<u64> = idx.iter().zip(&paths).map(|(&i, p)| p[i]).collect();
        let disjoint = (0..chosen.len()).all(|i| {
            (i + 1..chosen.len()).all(|j| span_mask(chosen[i]) & span_mask(chosen[j]) == 0)
        });
        if disjoint {
            let working: u64 = chosen.iter().map(|&m| mask_cost(t, m)).sum::<u64>() * 2;
            let forbidden = chosen.iter().fold(0, |acc, &m| acc | span_mask(m));
            if best.is_none_or(|b| working < b) {
                let s = circuit_cost(t, circuits, members, &source, forbidden);
                let r = s.and_then(|_| circuit_cost(t, circuits, members, &dest, forbidden));
                if let (Some(s), Some(r)) = (s, r) {
                    let total = working + s + r;
                    best = Some(best.map_or(total, |b| b.min(total)));
                }
            }
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return best;
            }
            idx[k] += 1;
            if idx[k] < paths[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Optimal doubled objective and a partition attaining it.
pub fn optimum(t: &Topology, c: &ConnectionSet) -> Option<(u64, Vec<Vec<usize>>)> {
    let mut circuits = Circuits {
        t,
        cache: HashMap::new(),
    };
    let mut group_memo: HashMap<Vec<usize>, Option<u64>> = HashMap::new();
    let mut best: Option<(u64, Vec<Vec<usize>>)> = None;
    for part in partitions(c.len()) {
        let mut total = Some(0u64);
        for g in &part {
            let cost = *group_memo
                .entry(g.clone())
                .or_insert_with(|| group_cost(t, c, &mut circuits, g));
            total = total.zip(cost).map(|(a, b)| a + b);
        }
        if let Some(total) = total {
            if best.as_ref().is_none_or(|(b, _)| total < *b) {
                best = Some((total, part));
            }
        }
    }
    best
}
