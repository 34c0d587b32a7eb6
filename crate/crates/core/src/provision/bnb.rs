//! Depth-first branch-and-bound for binary linear programs.
//!
//! Small models are searched with constraint propagation alone: variables
//! are assigned in declaration order, 0 before 1, so the first optimum
//! found is the lexicographically smallest one. Larger models are bounded
//! by their linear relaxation, solved with a warm-started dual simplex,
//! and branch on the first fractional variable in declaration order.

use std::time::{Duration, Instant};

use microlp::{ComparisonOp, OptimizationDirection, Problem, Solution, Variable};
use num_integer::Integer;
use num_rational::Rational64;

use super::model::{IlpModel, Sense};
use crate::error::{Error, Result};

/// Search limits. Node caps are deterministic; a time cap is not.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BnbLimits {
    pub max_nodes: u64,
    pub max_seconds: Option<f64>,
    /// Models with fewer variables use propagation-only search.
    pub propagation_threshold: usize,
}

impl Default for BnbLimits {
    fn default() -> Self {
        Self {
            max_nodes: 2_000_000,
            max_seconds: None,
            propagation_threshold: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BnbStatus {
    /// The search finished; the assignment is optimal.
    Optimal,
    /// A cap stopped the search; the assignment is the best one found.
    CapExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BnbSolution {
    pub values: Vec<bool>,
    pub objective: Rational64,
    pub status: BnbStatus,
    pub nodes: u64,
}

impl BnbSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == BnbStatus::Optimal
    }
}

/// Solves `m` to optimality within `limits`.
pub fn solve_bnb(m: &IlpModel, limits: &BnbLimits) -> Result<BnbSolution> {
    solve_bnb_from(m, limits, None)
}

/// Like [`solve_bnb`], seeding the incumbent with a feasible assignment.
pub fn solve_bnb_from(
    m: &IlpModel,
    limits: &BnbLimits,
    warm: Option<&[bool]>,
) -> Result<BnbSolution> {
    let incumbent = match warm {
        Some(values) => {
            if values.len() != m.var_count() {
                return Err(Error::Solver(format!(
                    "warm start has {} values for {} variables",
                    values.len(),
                    m.var_count()
                )));
            }
            let bad = m.violations(values);
            if let Some(name) = bad.first() {
                return Err(Error::Solver(format!("warm start violates `{name}`")));
            }
            Some((values.to_vec(), m.objective_value(values)))
        }
        None => None,
    };
    let mut search = Search {
        limits: *limits,
        started: Instant::now(),
        nodes: 0,
        capped: false,
        incumbent,
        found_by_search: false,
    };
    if m.var_count() < limits.propagation_threshold {
        Propagator::new(m).run(&mut search);
    } else {
        run_relaxation(m, &mut search)?;
    }
    let status = if search.capped {
        BnbStatus::CapExceeded
    } else {
        BnbStatus::Optimal
    };
    match search.incumbent {
        Some((values, objective)) => Ok(BnbSolution {
            values,
            objective,
            status,
            nodes: search.nodes,
        }),
        None if search.capped => Err(Error::Solver(
            "search cap reached before any feasible assignment".into(),
        )),
        None => Err(Error::Infeasible),
    }
}

struct Search {
    limits: BnbLimits,
    started: Instant,
    nodes: u64,
    capped: bool,
    incumbent: Option<(Vec<bool>, Rational64)>,
    found_by_search: bool,
}

impl Search {
    /// Counts a node; false once a cap is hit.
    fn enter(&mut self) -> bool {
        if self.capped {
            return false;
        }
        self.nodes += 1;
        let over_time = self
            .limits
            .max_seconds
            .is_some_and(|s| self.started.elapsed() > Duration::from_secs_f64(s));
        if self.nodes > self.limits.max_nodes || over_time {
            self.capped = true;
            return false;
        }
        true
    }
}

fn lcm_of_denominators<'a>(coefs: impl IntoIterator<Item = &'a Rational64>) -> i64 {
    coefs.into_iter().fold(1i64, |acc, c| acc.lcm(c.denom()))
}

/// Constraint rows scaled to integers, with activity bounds `lo..=hi`.
struct IntRow {
    terms: Vec<(usize, i64)>,
    lo: i64,
    hi: i64,
}

fn integer_rows(m: &IlpModel) -> Vec<IntRow> {
    m.constraints()
        .iter()
        .map(|c| {
            let scale = Rational64::from_integer(lcm_of_denominators(
                c.terms.iter().map(|(_, x)| x).chain([&c.rhs]),
            ));
            let terms = c
                .terms
                .iter()
                .map(|(v, x)| (*v, (*x * scale).to_integer()))
                .collect();
            let rhs = (c.rhs * scale).to_integer();
            let (lo, hi) = match c.sense {
                Sense::Le => (i64::MIN, rhs),
                Sense::Ge => (rhs, i64::MAX),
                Sense::Eq => (rhs, rhs),
            };
            IntRow { terms, lo, hi }
        })
        .collect()
}

struct Propagator<'a> {
    m: &'a IlpModel,
    rows: Vec<IntRow>,
    watch: Vec<Vec<usize>>,
    obj: Vec<i64>,
    obj_scale: i64,
    value: Vec<i8>,
    trail: Vec<usize>,
}

impl<'a> Propagator<'a> {
    fn new(m: &'a IlpModel) -> Self {
        let rows = integer_rows(m);
        let mut watch = vec![Vec::new(); m.var_count()];
        for (r, row) in rows.iter().enumerate() {
            for &(v, _) in &row.terms {
                watch[v].push(r);
            }
        }
        let obj_scale = lcm_of_denominators(m.objective());
        let obj = m
            .objective()
            .iter()
            .map(|c| (*c * Rational64::from_integer(obj_scale)).to_integer())
            .collect();
        Self {
            m,
            rows,
            watch,
            obj,
            obj_scale,
            value: vec![-1; m.var_count()],
            trail: Vec::new(),
        }
    }

    fn assign(&mut self, v: usize, x: i8) {
        self.value[v] = x;
        self.trail.push(v);
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().expect("trail is non-empty");
            self.value[v] = -1;
        }
    }

    /// Fixpoint propagation from `start`; false on a conflict.
    fn propagate(&mut self, start: usize) -> bool {
        let mut queue = vec![start];
        while let Some(v) = queue.pop() {
            for k in 0..self.watch[v].len() {
                let r = self.watch[v][k];
                let row = &self.rows[r];
                let (mut fixed, mut min_u, mut max_u) = (0i64, 0i64, 0i64);
                for &(w, c) in &row.terms {
                    match self.value[w] {
                        -1 => {
                            min_u += c.min(0);
                            max_u += c.max(0);
                        }
                        x => fixed += c * i64::from(x),
                    }
                }
                if fixed + min_u > row.hi || fixed + max_u < row.lo {
                    return false;
                }
                let mut forced = Vec::new();
                for &(w, c) in &row.terms {
                    if self.value[w] != -1 {
                        continue;
                    }
                    let ok = |x: i64| {
                        let lo = fixed + min_u - c.min(0) + c * x;
                        let hi = fixed + max_u - c.max(0) + c * x;
                        lo <= row.hi && hi >= row.lo
                    };
                    match (ok(0), ok(1)) {
                        (true, true) => {}
                        (true, false) => forced.push((w, 0)),
                        (false, true) => forced.push((w, 1)),
                        (false, false) => return false,
                    }
                }
                for (w, x) in forced {
                    if self.value[w] == -1 {
                        self.assign(w, x);
                        queue.push(w);
                    }
                }
            }
        }
        true
    }

    /// Objective lower bound of the current partial assignment, scaled.
    fn bound(&self) -> i64 {
        self.obj
            .iter()
            .zip(&self.value)
            .map(|(&c, &x)| if x == -1 { c.min(0) } else { c * i64::from(x) })
            .sum()
    }

    fn run(mut self, search: &mut Search) {
        // rows without variables are decided up front
        if self
            .rows
            .iter()
            .any(|r| r.terms.is_empty() && (r.lo > 0 || r.hi < 0))
        {
            return;
        }
        let mut initial = Vec::new();
        for v in 0..self.value.len() {
            initial.push(v);
        }
        // seed propagation on every row once
        for v in initial {
            if self.value[v] == -1 && !self.watch[v].is_empty() && !self.propagate(v) {
                return;
            }
        }
        self.dfs(0, search);
    }

    fn prune(&self, search: &Search) -> bool {
        let Some((_, best)) = &search.incumbent else {
            return false;
        };
        let best = (*best * Rational64::from_integer(self.obj_scale)).to_integer();
        let bound = self.bound();
        bound > best || (bound == best && search.found_by_search)
    }

    fn dfs(&mut self, from: usize, search: &mut Search) {
        if !search.enter() || self.prune(search) {
            return;
        }
        let Some(v) = (from..self.value.len()).find(|&v| self.value[v] == -1) else {
            let values: Vec<bool> = self.value.iter().map(|&x| x == 1).collect();
            debug_assert!(self.m.violations(&values).is_empty());
            let objective = self.m.objective_value(&values);
            let better = search
                .incumbent
                .as_ref()
                .is_none_or(|(_, best)| objective < *best || !search.found_by_search);
            if better {
                search.incumbent = Some((values, objective));
                search.found_by_search = true;
            }
            return;
        };
        for x in [0, 1] {
            let mark = self.trail.len();
            self.assign(v, x);
            if self.propagate(v) {
                self.dfs(v + 1, search);
            }
            self.undo(mark);
            if search.capped {
                return;
            }
        }
    }
}

const INTEGRALITY_TOL: f64 = 1e-6;

type Term = (usize, f64);

/// Two-variable inequalities implied by single rows: fixing one variable
/// of a row forces another. They hold at every binary point and tighten
/// the relaxation of rows such as `3x <= y1 + y2 + y3`.
fn implication_cuts(rows: &[IntRow]) -> Vec<(Term, Term, Sense, f64)> {
    let mut seen = std::collections::BTreeSet::new();
    for row in rows.iter().filter(|r| r.terms.len() > 2) {
        let min_u: i64 = row.terms.iter().map(|&(_, c)| c.min(0)).sum();
        let max_u: i64 = row.terms.iter().map(|&(_, c)| c.max(0)).sum();
        for &(x, cx) in &row.terms {
            for vx in [0i64, 1] {
                let lo = min_u - cx.min(0) + cx * vx;
                let hi = max_u - cx.max(0) + cx * vx;
                for &(y, cy) in &row.terms {
                    if y == x {
                        continue;
                    }
                    let ok = |vy: i64| {
                        let l = lo - cy.min(0) + cy * vy;
                        let h = hi - cy.max(0) + cy * vy;
                        l <= row.hi && h >= row.lo
                    };
                    let forced = match (ok(0), ok(1)) {
                        (true, false) => 0,
                        (false, true) => 1,
                        _ => continue,
                    };
                    // x = vx implies y = forced
                    seen.insert((x, vx, y, forced));
                }
            }
        }
    }
    seen.into_iter()
        .map(|(x, vx, y, vy)| match (vx, vy) {
            (1, 1) => ((x, 1.0), (y, -1.0), Sense::Le, 0.0),
            (1, 0) => ((x, 1.0), (y, 1.0), Sense::Le, 1.0),
            (0, 1) => ((x, 1.0), (y, 1.0), Sense::Ge, 1.0),
            _ => ((y, 1.0), (x, -1.0), Sense::Le, 0.0),
        })
        .collect()
}

struct Relaxation<'a> {
    m: &'a IlpModel,
    vars: Vec<Variable>,
    obj_scale: i64,
}

fn run_relaxation(m: &IlpModel, search: &mut Search) -> Result<()> {
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<Variable> = m
        .objective()
        .iter()
        .map(|c| problem.add_var(to_f64(*c), (0.0, 1.0)))
        .collect();
    for c in m.constraints() {
        if c.terms.is_empty() {
            if !c.is_satisfied(&[]) {
                return Ok(());
            }
            continue;
        }
        let expr: Vec<(Variable, f64)> = c.terms.iter().map(|(v, x)| (vars[*v], to_f64(*x))).collect();
        let op = match c.sense {
            Sense::Le => ComparisonOp::Le,
            Sense::Ge => ComparisonOp::Ge,
            Sense::Eq => ComparisonOp::Eq,
        };
        problem.add_constraint(expr, op, to_f64(c.rhs));
    }
    for (x, y, sense, rhs) in implication_cuts(&integer_rows(m)) {
        let op = if sense == Sense::Le { ComparisonOp::Le } else { ComparisonOp::Ge };
        problem.add_constraint(vec![(vars[x.0], x.1), (vars[y.0], y.1)], op, rhs);
    }
    let relax = Relaxation {
        m,
        vars,
        obj_scale: lcm_of_denominators(m.objective()),
    };
    let root = match problem.solve() {
        Ok(outcome) => outcome.into_solution().map_err(|_| lp_interrupted())?,
        Err(microlp::Error::Infeasible) => return Ok(()),
        Err(e) => return Err(Error::Solver(e.to_string())),
    };
    relax.dfs(root, search)
}

fn lp_interrupted() -> Error {
    Error::Solver("linear relaxation was interrupted".into())
}

fn to_f64(x: Rational64) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

impl Relaxation<'_> {
    fn pruned(&self, lp: f64, search: &Search) -> bool {
        let Some((_, best)) = &search.incumbent else {
            return false;
        };
        let scale = self.obj_scale as f64;
        let bound = (lp * scale - INTEGRALITY_TOL).ceil() as i64;
        let best = (*best * Rational64::from_integer(self.obj_scale)).to_integer();
        bound >= best
    }

    fn dfs(&self, sol: Solution, search: &mut Search) -> Result<()> {
        if !search.enter() || self.pruned(sol.objective(), search) {
            return Ok(());
        }
        let values: Vec<f64> = self.vars.iter().map(|&v| sol.var_value_raw(v)).collect();
        let fractional = values
            .iter()
            .position(|x| (x - x.round()).abs() > INTEGRALITY_TOL);
        let Some(v) = fractional else {
            let rounded: Vec<bool> = values.iter().map(|x| *x > 0.5).collect();
            if self.m.violations(&rounded).is_empty() {
                let objective = self.m.objective_value(&rounded);
                if search.incumbent.as_ref().is_none_or(|(_, best)| objective < *best) {
                    search.incumbent = Some((rounded, objective));
                    search.found_by_search = true;
                }
            }
            return Ok(());
        };
        let near = if values[v] > 0.5 { 1.0 } else { 0.0 };
        let first = sol.clone();
        self.child(first, v, near, search)?;
        if search.capped {
            return Ok(());
        }
        self.child(sol, v, 1.0 - near, search)
    }

    fn child(&self, sol: Solution, v: usize, x: f64, search: &mut Search) -> Result<()> {
        match sol.fix_var(self.vars[v], x) {
            Ok(outcome) => {
                let next = outcome.into_solution().map_err(|_| lp_interrupted())?;
                self.dfs(next, search)
            }
            Err(microlp::Error::Infeasible) => Ok(()),
            Err(e) => Err(Error::Solver(e.to_string())),
        }
    }
}
