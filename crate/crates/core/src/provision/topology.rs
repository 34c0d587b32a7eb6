//! Network topologies and connection demands.
//!
//! Document grammar (`#` starts a comment, blank lines are ignored):
//!
//! ```text
//! [nodes]
//! a b c d            # whitespace-separated node names, any number of lines
//! [edges]
//! a b                # undirected span, cost 1 per direction
//! b c 3              # explicit positive integer cost
//! [connections]
//! a c                # demand from source to destination
//! ```
//!
//! Every edge `e = {u, v}` yields two arcs: `2e` for `u -> v` and `2e + 1`
//! for `v -> u`, each carrying the edge cost.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub cost: u64,
}

/// A simple undirected graph whose spans are used in both directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    names: Vec<String>,
    edges: Vec<Edge>,
    out_arcs: Vec<Vec<usize>>,
    in_arcs: Vec<Vec<usize>>,
}

impl Topology {
    pub fn new(names: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let n = names.len();
        let mut seen = HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            if e.u >= n || e.v >= n {
                return Err(Error::Topology {
                    line: 0,
                    reason: format!("edge {i} references a missing node"),
                });
            }
            if e.u == e.v {
                return Err(Error::Topology {
                    line: 0,
                    reason: format!("edge {i} is a self-loop"),
                });
            }
            if e.cost == 0 {
                return Err(Error::Topology {
                    line: 0,
                    reason: format!("edge {i} has zero cost"),
                });
            }
            if seen.insert((e.u.min(e.v), e.u.max(e.v)), i).is_some() {
                return Err(Error::Topology {
                    line: 0,
                    reason: format!("edge {i} duplicates an earlier edge"),
                });
            }
        }
        let mut out_arcs = vec![Vec::new(); n];
        let mut in_arcs = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            out_arcs[e.u].push(2 * i);
            in_arcs[e.v].push(2 * i);
            out_arcs[e.v].push(2 * i + 1);
            in_arcs[e.u].push(2 * i + 1);
        }
        Ok(Self {
            names,
            edges,
            out_arcs,
            in_arcs,
        })
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn arc_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn name(&self, node: usize) -> &str {
        &self.names[node]
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `(tail, head)` of an arc.
    pub fn arc(&self, a: usize) -> (usize, usize) {
        let e = self.edges[a / 2];
        if a % 2 == 0 {
            (e.u, e.v)
        } else {
            (e.v, e.u)
        }
    }

    pub fn arc_cost(&self, a: usize) -> u64 {
        self.edges[a / 2].cost
    }

    /// The same span traversed the other way.
    pub fn reverse(a: usize) -> usize {
        a ^ 1
    }

    pub fn out_arcs(&self, v: usize) -> &[usize] {
        &self.out_arcs[v]
    }

    pub fn in_arcs(&self, v: usize) -> &[usize] {
        &self.in_arcs[v]
    }

    pub fn find_arc(&self, u: usize, v: usize) -> Option<usize> {
        self.out_arcs[u].iter().copied().find(|&a| self.arc(a).1 == v)
    }

    /// Node sequence of a path given as arcs.
    pub fn path_nodes(&self, arcs: &[usize]) -> Vec<usize> {
        let mut nodes = Vec::with_capacity(arcs.len() + 1);
        if let Some(&first) = arcs.first() {
            nodes.push(self.arc(first).0);
        }
        nodes.extend(arcs.iter().map(|&a| self.arc(a).1));
        nodes
    }

    pub fn path_cost(&self, arcs: &[usize]) -> u64 {
        arcs.iter().map(|&a| self.arc_cost(a)).sum()
    }

    pub fn format_path(&self, arcs: &[usize]) -> String {
        self.path_nodes(arcs)
            .iter()
            .map(|&v| self.name(v))
            .collect::<Vec<_>>()
            .join("-")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Connection {
    pub source: usize,
    pub dest: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConnectionSet {
    conns: Vec<Connection>,
}

impl ConnectionSet {
    pub fn new(conns: Vec<Connection>) -> Result<Self> {
        if let Some(i) = conns.iter().position(|c| c.source == c.dest) {
            return Err(Error::Topology {
                line: 0,
                reason: format!("connection {i} has equal source and destination"),
            });
        }
        Ok(Self { conns })
    }

    pub fn len(&self) -> usize {
        self.conns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conns.is_empty()
    }

    pub fn get(&self, h: usize) -> Connection {
        self.conns[h]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Connection> {
        self.conns.iter()
    }

    /// 1 when `h` and `l` share a source.
    pub fn gamma(&self, h: usize, l: usize) -> u8 {
        u8::from(self.conns[h].source == self.conns[l].source)
    }

    /// 1 when `h` and `l` share a destination.
    pub fn delta(&self, h: usize, l: usize) -> u8 {
        u8::from(self.conns[h].dest == self.conns[l].dest)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Nodes,
    Edges,
    Connections,
}

/// Parses a topology document.
pub fn load_topology(text: &str) -> Result<(Topology, ConnectionSet)> {
    let err = |line: usize, reason: String| Error::Topology { line, reason };
    let mut section = None;
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut spans: HashMap<(usize, usize), usize> = HashMap::new();
    let mut conns = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| err(line_no, format!("malformed section header `{line}`")))?
                .trim();
            section = Some(match name {
                "nodes" => Section::Nodes,
                "edges" => Section::Edges,
                "connections" => Section::Connections,
                other => return Err(err(line_no, format!("unknown section `{other}`"))),
            });
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let node = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| err(line_no, format!("unknown node `{name}`")))
        };
        match section {
            None => return Err(err(line_no, "content before the first section".into())),
            Some(Section::Nodes) => {
                for t in tokens {
                    if !t
                        .chars()
                        .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
                    {
                        return Err(err(line_no, format!("invalid node name `{t}`")));
                    }
                    if index.insert(t.to_string(), names.len()).is_some() {
                        return Err(err(line_no, format!("duplicate node `{t}`")));
                    }
                    names.push(t.to_string());
                }
            }
            Some(Section::Edges) => {
                if !(2..=3).contains(&tokens.len()) {
                    return Err(err(line_no, "expected `u v [cost]`".into()));
                }
                let (u, v) = (node(tokens[0])?, node(tokens[1])?);
                if u == v {
                    return Err(err(line_no, format!("self-loop at `{}`", tokens[0])));
                }
                let cost = match tokens.get(2) {
                    None => 1,
                    Some(c) => match c.parse::<u64>() {
                        Ok(c) if c > 0 => c,
                        _ => return Err(err(line_no, format!("cost `{c}` is not a positive integer"))),
                    },
                };
                if let Some(prev) = spans.insert((u.min(v), u.max(v)), line_no) {
                    return Err(err(
                        line_no,
                        format!("duplicate edge {} {} (first on line {prev})", tokens[0], tokens[1]),
                    ));
                }
                edges.push(Edge { u, v, cost });
            }
            Some(Section::Connections) => {
                if tokens.len() != 2 {
                    return Err(err(line_no, "expected `source destination`".into()));
                }
                let (s, r) = (node(tokens[0])?, node(tokens[1])?);
                if s == r {
                    return Err(err(line_no, format!("source equals destination `{}`", tokens[0])));
                }
                conns.push(Connection { source: s, dest: r });
            }
        }
    }
    let topo = Topology::new(names, edges)?;
    Ok((topo, ConnectionSet { conns }))
}

pub fn read_topology(path: &Path) -> Result<(Topology, ConnectionSet)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    load_topology(&text)
}

/// Canonical document for a topology and its demands.
pub fn topology_text(t: &Topology, c: &ConnectionSet) -> String {
    let mut s = String::from("[nodes]\n");
    s.push_str(&t.names.join(" "));
    s.push_str("\n[edges]\n");
    for e in &t.edges {
        let _ = writeln!(s, "{} {} {}", t.name(e.u), t.name(e.v), e.cost);
    }
    s.push_str("[connections]\n");
    for conn in c.iter() {
        let _ = writeln!(s, "{} {}", t.name(conn.source), t.name(conn.dest));
    }
    s
}
