//! Solver-agnostic binary linear programs and their LP-format export.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type VarId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(VarId, Rational64)>,
    pub sense: Sense,
    pub rhs: Rational64,
}

impl Constraint {
    pub fn activity(&self, values: &[bool]) -> Rational64 {
        self.terms
            .iter()
            .filter(|(v, _)| values[*v])
            .map(|(_, c)| *c)
            .sum()
    }

    pub fn is_satisfied(&self, values: &[bool]) -> bool {
        let a = self.activity(values);
        match self.sense {
            Sense::Le => a <= self.rhs,
            Sense::Ge => a >= self.rhs,
            Sense::Eq => a == self.rhs,
        }
    }
}

/// Minimize `objective · x` over binary `x` subject to linear constraints.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IlpModel {
    names: Vec<String>,
    index: HashMap<String, VarId>,
    objective: Vec<Rational64>,
    constraints: Vec<Constraint>,
}

impl IlpModel {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a binary variable; declaration order is branching order.
    pub fn add_binary(&mut self, name: impl Into<String>) -> Result<VarId> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(Error::Solver(format!("variable `{name}` declared twice")));
        }
        let id = self.names.len();
        self.index.insert(name.clone(), id);
        self.names.push(name);
        self.objective.push(Rational64::zero());
        Ok(id)
    }

    pub fn set_objective(&mut self, var: VarId, coef: Rational64) {
        self.objective[var] = coef;
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(VarId, Rational64)>,
        sense: Sense,
        rhs: Rational64,
    ) -> Result<()> {
        let name = name.into();
        if let Some((v, _)) = terms.iter().find(|(v, _)| *v >= self.names.len()) {
            return Err(Error::Solver(format!(
                "constraint `{name}` references undeclared variable {v}"
            )));
        }
        let mut merged: Vec<(VarId, Rational64)> = Vec::with_capacity(terms.len());
        for (v, c) in terms {
            match merged.iter_mut().find(|(w, _)| *w == v) {
                Some((_, acc)) => *acc += c,
                None => merged.push((v, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        self.constraints.push(Constraint {
            name,
            terms: merged,
            sense,
            rhs,
        });
        Ok(())
    }

    pub fn var_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, var: VarId) -> &str {
        &self.names[var]
    }

    pub fn var(&self, name: &str) -> Option<VarId> {
        self.index.get(name).copied()
    }

    pub fn objective(&self) -> &[Rational64] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective_value(&self, values: &[bool]) -> Rational64 {
        self.objective
            .iter()
            .zip(values)
            .filter(|(_, &x)| x)
            .map(|(c, _)| *c)
            .sum()
    }

    /// Names of the constraints violated by `values`.
    pub fn violations(&self, values: &[bool]) -> Vec<&str> {
        self.constraints
            .iter()
            .filter(|c| !c.is_satisfied(values))
            .map(|c| c.name.as_str())
            .collect()
    }

    /// LP-format text: objective, constraints, binaries.
    pub fn export_lp(&self) -> String {
        let mut out = String::from("\\ binary linear program\nMinimize\n");
        let obj: Vec<(VarId, Rational64)> = self
            .objective
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(v, c)| (v, *c))
            .collect();
        write_expression(&mut out, " obj:", &obj, &self.names);
        out.push('\n');
        out.push_str("Subject To\n");
        for c in &self.constraints {
            write_expression(&mut out, &format!(" {}:", c.name), &c.terms, &self.names);
            let _ = writeln!(out, " {} {}", c.sense, format_number(c.rhs));
        }
        out.push_str("Binaries\n");
        let mut line = String::new();
        for name in &self.names {
            if line.len() + name.len() + 1 > 78 {
                let _ = writeln!(out, "{line}");
                line.clear();
            }
            line.push(' ');
            line.push_str(name);
        }
        if !line.is_empty() {
            let _ = writeln!(out, "{line}");
        }
        out.push_str("End\n");
        out
    }
}

fn write_expression(out: &mut String, label: &str, terms: &[(VarId, Rational64)], names: &[String]) {
    let mut line = label.to_string();
    if terms.is_empty() {
        line.push_str(" 0");
    }
    for (i, (v, c)) in terms.iter().enumerate() {
        let sign = if c.is_negative() { "-" } else { "+" };
        let mag = c.abs();
        let term = if mag.is_one() {
            format!("{sign} {}", names[*v])
        } else {
            format!("{sign} {} {}", format_number(mag), names[*v])
        };
        let term = if i == 0 && sign == "+" {
            term[2..].to_string()
        } else {
            term
        };
        if line.len() + term.len() + 1 > 78 {
            let _ = writeln!(out, "{line}");
            line = String::from("  ");
        } else {
            line.push(' ');
        }
        line.push_str(&term);
    }
    out.push_str(&line);
}

/// Exact decimal when the denominator allows one, else a 17-digit float.
pub fn format_number(x: Rational64) -> String {
    if x.is_integer() {
        return x.to_integer().to_string();
    }
    let mut d = *x.denom();
    let mut digits = 0;
    while d % 2 == 0 || d % 5 == 0 {
        if d % 2 == 0 {
            d /= 2;
        }
        if d % 5 == 0 {
            d /= 5;
        }
        digits += 1;
    }
    if d == 1 {
        let scale = 10i64.pow(digits);
        let scaled = (x * Rational64::from_integer(scale)).to_integer();
        let sign = if scaled < 0 { "-" } else { "" };
        let a = scaled.abs();
        return format!(
            "{sign}{}.{:0width$}",
            a / scale,
            a % scale,
            width = digits as usize
        );
    }
    format!("{:.17}", *x.numer() as f64 / *x.denom() as f64)
}
