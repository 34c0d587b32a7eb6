//! The joint-protection provisioning ILP.
//!
//! Variable names use connection indices `h`, `l` and node indices `i`,
//! `j` (all zero-based); an arc variable `z_h_i_j` refers to the directed
//! use of span `{i, j}` from `i` to `j`.
//!
//! | name            | meaning                                                   |
//! |-----------------|-----------------------------------------------------------|
//! | `n_h_l`         | `h` and `l` are protected together (`h < l`)              |
//! | `z_h_i_j`       | working path of `h` uses arc `i -> j`                     |
//! | `Ph_h`, `Qh_h`  | `h` needs an S circuit, an R circuit                      |
//! | `Pj_h_l_j`      | S circuits of `h` and `l` meet at node `j`                |
//! | `Qj_h_l_j`      | R circuits of `h` and `l` meet at node `j`                |
//! | `p_h_i_j`       | S circuit of `h` uses arc `i -> j`                        |
//! | `q_h_i_j`       | R circuit of `h` uses arc `i -> j`                        |
//! | `b_h_i_j`       | secondary path of `h` uses arc `i -> j`                   |
//! | `beta_h_i_j`    | that use is paid for (`h` is not jointly protected)       |
//! | `sP_h_l_i_j`    | `h` and `l` are grouped and share arc `i -> j` on S       |
//! | `sQ_h_l_i_j`    | `h` and `l` are grouped and share arc `i -> j` on R       |
//! | `pi_h_i_j`      | `h` is the lowest group member paying S arc `i -> j`      |
//! | `theta_h_i_j`   | `h` is the lowest group member paying R arc `i -> j`      |
//!
//! Minimize `Σ c(z + beta + pi/2 + theta/2)`. Declaration order is `n`, `z`,
//! `Ph`, `Qh`, `Pj`, `Qj`, `p`, `q`, `b`, `beta`, `sP`, `sQ`, `pi`, `theta`.

use num_rational::Rational64;

use super::model::{IlpModel, Sense, VarId};
use super::topology::{ConnectionSet, Topology};
use crate::error::Result;

/// Variable ids of a provisioning model, indexed by connection and arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarIndex {
    conns: usize,
    /// `n[pair(h, l)]` for `h < l`.
    pub n: Vec<VarId>,
    pub z: Vec<Vec<VarId>>,
    pub ph: Vec<VarId>,
    pub qh: Vec<VarId>,
    /// `pj[pair][node]`.
    pub pj: Vec<Vec<VarId>>,
    pub qj: Vec<Vec<VarId>>,
    pub p: Vec<Vec<VarId>>,
    pub q: Vec<Vec<VarId>>,
    pub b: Vec<Vec<VarId>>,
    pub beta: Vec<Vec<VarId>>,
    /// `sp[pair][arc]`.
    pub sp: Vec<Vec<VarId>>,
    pub sq: Vec<Vec<VarId>>,
    pub pi: Vec<Vec<VarId>>,
    pub theta: Vec<Vec<VarId>>,
}

impl VarIndex {
    /// Position of the unordered pair `{h, l}` in the pair lists.
    pub fn pair(&self, h: usize, l: usize) -> usize {
        pair_index(self.conns, h, l)
    }

    /// Pairs `(h, l)` with `h < l` in pair-list order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        pairs(self.conns)
    }

    pub fn connections(&self) -> usize {
        self.conns
    }

    /// `n` variable of `{h, l}`.
    pub fn together(&self, h: usize, l: usize) -> VarId {
        self.n[self.pair(h, l)]
    }
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|h| (h + 1..n).map(move |l| (h, l)))
        .collect()
}

fn pair_index(n: usize, h: usize, l: usize) -> usize {
    assert!(h != l && h < n && l < n, "invalid connection pair ({h}, {l})");
    let (a, b) = (h.min(l), h.max(l));
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

/// A provisioning model together with its variable index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProvisionIlp {
    pub model: IlpModel,
    pub vars: VarIndex,
}

fn one() -> Rational64 {
    Rational64::from_integer(1)
}

fn int(x: i64) -> Rational64 {
    Rational64::from_integer(x)
}

struct Builder<'a> {
    t: &'a Topology,
    m: IlpModel,
}

impl Builder<'_> {
    fn arc_vars(&mut self, prefix: &str, h: usize) -> Result<Vec<VarId>> {
        (0..self.t.arc_count())
            .map(|a| {
                let (i, j) = self.t.arc(a);
                self.m.add_binary(format!("{prefix}_{h}_{i}_{j}"))
            })
            .collect()
    }

    fn arc_name(&self, a: usize) -> String {
        let (i, j) = self.t.arc(a);
        format!("{i}_{j}")
    }

    fn sum(vars: impl IntoIterator<Item = VarId>, coef: i64) -> Vec<(VarId, Rational64)> {
        vars.into_iter().map(|v| (v, int(coef))).collect()
    }

    /// Source/sink/conservation constraints of a unit `s -> r` path.
    fn path_family(&mut self, tag: &str, h: usize, x: &[VarId], s: usize, r: usize) -> Result<()> {
        let t = self.t;
        for &a in t.in_arcs(s) {
            let name = format!("{tag}_in_src_{h}_{}", self.arc_name(a));
            self.m.add_constraint(name, vec![(x[a], one())], Sense::Eq, int(0))?;
        }
        for &a in t.out_arcs(r) {
            let name = format!("{tag}_out_dst_{h}_{}", self.arc_name(a));
            self.m.add_constraint(name, vec![(x[a], one())], Sense::Eq, int(0))?;
        }
        let out_s = Self::sum(t.out_arcs(s).iter().map(|&a| x[a]), 1);
        self.m.add_constraint(format!("{tag}_src_{h}"), out_s, Sense::Eq, one())?;
        let in_r = Self::sum(t.in_arcs(r).iter().map(|&a| x[a]), 1);
        self.m.add_constraint(format!("{tag}_dst_{h}"), in_r, Sense::Eq, one())?;
        for j in 0..t.node_count() {
            if j == s || j == r {
                continue;
            }
            self.conservation(&format!("{tag}_flow_{h}_{j}"), x, j)?;
        }
        Ok(())
    }

    fn conservation(&mut self, name: &str, x: &[VarId], j: usize) -> Result<()> {
        let mut terms = Self::sum(self.t.in_arcs(j).iter().map(|&a| x[a]), 1);
        terms.extend(Self::sum(self.t.out_arcs(j).iter().map(|&a| x[a]), -1));
        self.m.add_constraint(name, terms, Sense::Eq, int(0))
    }
}

/// Builds the joint-protection ILP for `c` on `t`.
pub fn build_ilp(t: &Topology, c: &ConnectionSet) -> Result<ProvisionIlp> {
    let nc = c.len();
    let arcs = t.arc_count();
    let nodes = t.node_count();
    let pair_list = pairs(nc);
    let mut bld = Builder {
        t,
        m: IlpModel::new(),
    };

    let n = pair_list
        .iter()
        .map(|&(h, l)| bld.m.add_binary(format!("n_{h}_{l}")))
        .collect::<Result<Vec<_>>>()?;
    let z = (0..nc).map(|h| bld.arc_vars("z", h)).collect::<Result<Vec<_>>>()?;
    let ph = (0..nc)
        .map(|h| bld.m.add_binary(format!("Ph_{h}")))
        .collect::<Result<Vec<_>>>()?;
    let qh = (0..nc)
        .map(|h| bld.m.add_binary(format!("Qh_{h}")))
        .collect::<Result<Vec<_>>>()?;
    let node_vars = |bld: &mut Builder, prefix: &str| -> Result<Vec<Vec<VarId>>> {
        pair_list
            .iter()
            .map(|&(h, l)| {
                (0..nodes)
                    .map(|j| bld.m.add_binary(format!("{prefix}_{h}_{l}_{j}")))
                    .collect()
            })
            .collect()
    };
    let pj = node_vars(&mut bld, "Pj")?;
    let qj = node_vars(&mut bld, "Qj")?;
    let p = (0..nc).map(|h| bld.arc_vars("p", h)).collect::<Result<Vec<_>>>()?;
    let q = (0..nc).map(|h| bld.arc_vars("q", h)).collect::<Result<Vec<_>>>()?;
    let b = (0..nc).map(|h| bld.arc_vars("b", h)).collect::<Result<Vec<_>>>()?;
    let beta = (0..nc)
        .map(|h| bld.arc_vars("beta", h))
        .collect::<Result<Vec<_>>>()?;
    let shared_vars = |bld: &mut Builder, prefix: &str| -> Result<Vec<Vec<VarId>>> {
        pair_list
            .iter()
            .map(|&(h, l)| {
                (0..arcs)
                    .map(|a| {
                        let (i, j) = t.arc(a);
                        bld.m.add_binary(format!("{prefix}_{h}_{l}_{i}_{j}"))
                    })
                    .collect()
            })
            .collect()
    };
    let sp = shared_vars(&mut bld, "sP")?;
    let sq = shared_vars(&mut bld, "sQ")?;
    let pi = (0..nc).map(|h| bld.arc_vars("pi", h)).collect::<Result<Vec<_>>>()?;
    let theta = (0..nc)
        .map(|h| bld.arc_vars("theta", h))
        .collect::<Result<Vec<_>>>()?;

    let vars = VarIndex {
        conns: nc,
        n,
        z,
        ph,
        qh,
        pj,
        qj,
        p,
        q,
        b,
        beta,
        sp,
        sq,
        pi,
        theta,
    };

    let half = Rational64::new(1, 2);
    for h in 0..nc {
        for a in 0..arcs {
            let cost = int(t.arc_cost(a) as i64);
            bld.m.set_objective(vars.z[h][a], cost);
            bld.m.set_objective(vars.beta[h][a], cost);
            bld.m.set_objective(vars.pi[h][a], cost * half);
            bld.m.set_objective(vars.theta[h][a], cost * half);
        }
    }

    // I: working paths
    for h in 0..nc {
        let conn = c.get(h);
        bld.path_family("w", h, &vars.z[h], conn.source, conn.dest)?;
    }
    for (k, &(h, l)) in pair_list.iter().enumerate() {
        for e in 0..t.edge_count() {
            let (f, r) = (2 * e, 2 * e + 1);
            let terms = vec![
                (vars.z[h][f], one()),
                (vars.z[h][r], one()),
                (vars.z[l][f], one()),
                (vars.z[l][r], one()),
                (vars.n[k], one()),
            ];
            let name = format!("w_joint_{h}_{l}_{}", bld.arc_name(f));
            bld.m.add_constraint(name, terms, Sense::Le, int(2))?;
        }
    }

    // II: secondary paths
    for h in 0..nc {
        let conn = c.get(h);
        bld.path_family("b", h, &vars.b[h], conn.source, conn.dest)?;
        for a in 0..arcs {
            let mut terms = vec![(vars.beta[h][a], one()), (vars.b[h][a], -one())];
            terms.extend((0..nc).filter(|&l| l != h).map(|l| (vars.together(h, l), one())));
            let name = format!("b_paid_{h}_{}", bld.arc_name(a));
            bld.m.add_constraint(name, terms, Sense::Ge, int(0))?;
            let name = format!("b_disjoint_{h}_{}", bld.arc_name(a));
            let terms = vec![(vars.beta[h][a], one()), (vars.z[h][a], one())];
            bld.m.add_constraint(name, terms, Sense::Le, one())?;
        }
    }

    // III and IV: S and R circuits
    let circuit_sets = [
        ("s", &vars.p, &vars.ph, &vars.pj),
        ("r", &vars.q, &vars.qh, &vars.qj),
    ];
    for (tag, x, need, joint) in circuit_sets {
        let shares = |h: usize, l: usize| -> i64 {
            if tag == "s" {
                i64::from(c.gamma(h, l))
            } else {
                i64::from(c.delta(h, l))
            }
        };
        for h in 0..nc {
            let conn = c.get(h);
            let anchor = if tag == "s" { conn.source } else { conn.dest };
            for l in (0..nc).filter(|&l| l != h) {
                let terms = vec![(need[h], one()), (vars.together(h, l), -one())];
                let name = format!("{tag}_need_{h}_{l}");
                bld.m.add_constraint(name, terms, Sense::Ge, int(-shares(h, l)))?;
            }
            let mut out = Builder::sum(t.out_arcs(anchor).iter().map(|&a| x[h][a]), 1);
            out.push((need[h], -one()));
            bld.m.add_constraint(format!("{tag}_leave_{h}"), out, Sense::Eq, int(0))?;
            let mut inn = Builder::sum(t.in_arcs(anchor).iter().map(|&a| x[h][a]), 1);
            inn.push((need[h], -one()));
            bld.m.add_constraint(format!("{tag}_enter_{h}"), inn, Sense::Eq, int(0))?;
            for j in 0..nodes {
                bld.conservation(&format!("{tag}_flow_{h}_{j}"), &x[h], j)?;
            }
            for a in 0..arcs {
                let rev = Topology::reverse(a);
                let terms = vec![(vars.z[h][a], int(2)), (x[h][a], one()), (x[h][rev], one())];
                let name = format!("{tag}_own_{h}_{}", bld.arc_name(a));
                bld.m.add_constraint(name, terms, Sense::Le, int(2))?;
            }
            for l in (0..nc).filter(|&l| l != h) {
                for a in 0..arcs {
                    let rev = Topology::reverse(a);
                    let terms = vec![
                        (vars.z[h][a], int(2)),
                        (x[l][a], one()),
                        (x[l][rev], one()),
                        (vars.together(h, l), int(2)),
                    ];
                    let name = format!("{tag}_other_{h}_{l}_{}", bld.arc_name(a));
                    bld.m.add_constraint(name, terms, Sense::Le, int(4))?;
                }
            }
        }
        for (k, &(h, l)) in pair_list.iter().enumerate() {
            for j in 0..nodes {
                let mut head: Vec<(VarId, Rational64)> = Vec::new();
                let mut tail: Vec<(VarId, Rational64)> = Vec::new();
                for who in [h, l] {
                    head.extend(t.in_arcs(j).iter().map(|&a| (x[who][a], one())));
                    tail.extend(t.out_arcs(j).iter().map(|&a| (x[who][a], one())));
                }
                head.push((joint[k][j], int(-2)));
                tail.push((joint[k][j], int(-2)));
                bld.m.add_constraint(format!("{tag}_meet_in_{h}_{l}_{j}"), head, Sense::Ge, int(0))?;
                bld.m.add_constraint(format!("{tag}_meet_out_{h}_{l}_{j}"), tail, Sense::Ge, int(0))?;
            }
            let mut terms = Builder::sum(joint[k].iter().copied(), 1);
            terms.push((vars.n[k], -one()));
            let name = format!("{tag}_meet_{h}_{l}");
            bld.m.add_constraint(name, terms, Sense::Ge, int(-shares(h, l)))?;
        }
    }

    // joint protection is transitive
    for h in 0..nc {
        for l in h + 1..nc {
            for m in l + 1..nc {
                let (hl, lm, hm) = (vars.together(h, l), vars.together(l, m), vars.together(h, m));
                for (name, x, y, w) in [
                    (format!("trans_{h}_{l}_{m}"), hl, lm, hm),
                    (format!("trans_{l}_{h}_{m}"), hl, hm, lm),
                    (format!("trans_{h}_{m}_{l}"), hm, lm, hl),
                ] {
                    let terms = vec![(x, one()), (y, one()), (w, -one())];
                    bld.m.add_constraint(name, terms, Sense::Le, one())?;
                }
            }
        }
    }

    // V: circuit cost
    for (tag, x, shared, pay) in [
        ("s", &vars.p, &vars.sp, &vars.pi),
        ("r", &vars.q, &vars.sq, &vars.theta),
    ] {
        for (k, &(h, l)) in pair_list.iter().enumerate() {
            for a in 0..arcs {
                let terms = vec![
                    (shared[k][a], int(3)),
                    (x[h][a], -one()),
                    (x[l][a], -one()),
                    (vars.n[k], -one()),
                ];
                let name = format!("{tag}_shared_{h}_{l}_{}", bld.arc_name(a));
                bld.m.add_constraint(name, terms, Sense::Le, int(0))?;
            }
        }
        for l in 0..nc {
            for a in 0..arcs {
                let mut terms = vec![(pay[l][a], one()), (x[l][a], -one())];
                terms.extend((0..l).map(|h| (shared[pair_index(nc, h, l)][a], one())));
                let name = format!("{tag}_pay_{l}_{}", bld.arc_name(a));
                bld.m.add_constraint(name, terms, Sense::Ge, int(0))?;
            }
        }
    }

    Ok(ProvisionIlp { model: bld.m, vars })
}
