//! Command-line front end: code construction, catalog tables, recovery
//! validation and topology provisioning.
//!
//! [`run`] returns the complete report so that output is a pure function
//! of the arguments and input files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::codes::{construct_bch, derive, Catalog, CatalogQuery, LinearCode, Provenance, Rule, Source};
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::provision::{
    build_ilp, compare_costs, disjoint_pairs, provision, BnbLimits, BnbStatus,
    ConnectionSet, CostRow, ProvisionResult, Topology, CSV_HEADER,
};
use crate::provision::model::format_number;
use crate::sim::{exhaustive_validate, ValidateOptions, ValidationReport};

#[derive(Debug, Parser)]
#[command(name = "npc", version, about = "Network protection codes toolkit")]
pub struct Cli {
    /// Emit machine-readable CSV instead of tables.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Seed for sampled validation.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Code catalog file replacing the bundled one.
    #[arg(long, global = true, value_name = "PATH")]
    pub catalog: Option<PathBuf>,
    /// Solver caps as `nodes,seconds`; 0 seconds means no time cap.
    #[arg(long, global = true, value_name = "NODES,SECONDS", value_parser = parse_caps)]
    pub caps: Option<Caps>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Caps {
    pub nodes: u64,
    pub seconds: Option<f64>,
}

fn parse_caps(s: &str) -> std::result::Result<Caps, String> {
    let (nodes, secs) = s
        .split_once(',')
        .ok_or_else(|| "expected `nodes,seconds`".to_string())?;
    let nodes: u64 = nodes.trim().parse().map_err(|_| format!("bad node cap `{nodes}`"))?;
    let secs: f64 = secs.trim().parse().map_err(|_| format!("bad time cap `{secs}`"))?;
    if nodes == 0 || !secs.is_finite() || secs < 0.0 {
        return Err("caps must be positive".into());
    }
    Ok(Caps {
        nodes,
        seconds: (secs > 0.0).then_some(secs),
    })
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a code and print its parameters and generator.
    Construct {
        #[command(flatten)]
        code: CodeSpec,
        /// Propagation rules applied in order.
        #[arg(long = "then", value_name = "RULE")]
        then: Vec<Rule>,
    },
    /// Print the code catalog, optionally filtered.
    Tables {
        #[arg(long)]
        n: Option<usize>,
        /// Failures survived, `d_min - 1`.
        #[arg(long)]
        t: Option<usize>,
        /// Code family, such as `hamming` or `bch`.
        #[arg(long = "type", value_name = "TYPE")]
        kind: Option<String>,
    },
    /// Validate recovery from every failure pattern of up to `t` connections.
    Simulate {
        #[command(flatten)]
        code: CodeSpec,
        /// Failures per pattern; defaults to `d_min - 1`.
        #[arg(long)]
        t: Option<usize>,
        /// Enumerate every pattern and up to 4096 codewords.
        #[arg(long)]
        exhaustive: bool,
        /// Pattern budget before sampling.
        #[arg(long, conflicts_with = "exhaustive")]
        trials: Option<u64>,
    },
    /// Provision a topology with coded or 1+1 protection.
    Provision {
        topology: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Npc)]
        mode: Mode,
        /// Write the ILP in LP format to this path.
        #[arg(long, value_name = "PATH")]
        export_lp: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Npc,
    OnePlusOne,
    Compare,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct CodeSpec {
    /// BCH code of length N and designed distance D.
    #[arg(long, num_args = 2, value_names = ["N", "D"])]
    pub bch: Option<Vec<usize>>,
    /// Single-parity `[N, N-1, 2]` code.
    #[arg(long, value_name = "N")]
    pub parity: Option<usize>,
    /// Generator matrix file, one row of 0/1 characters per line.
    #[arg(long, value_name = "PATH")]
    pub matrix: Option<PathBuf>,
}

impl CodeSpec {
    fn build(&self) -> Result<LinearCode> {
        if let Some(nd) = &self.bch {
            return construct_bch(nd[0], nd[1]);
        }
        if let Some(n) = self.parity {
            return LinearCode::single_parity(n);
        }
        let path = self.matrix.as_ref().expect("one code source is required");
        let text = read_file(path)?;
        let g = BitMatrix::from_text(&text)?;
        let label = path
            .file_stem()
            .map_or_else(|| "explicit".to_string(), |s| s.to_string_lossy().into_owned());
        LinearCode::from_generator(&g, Provenance::Explicit(label))
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Executes a parsed command line and returns its report.
pub fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Construct { code, then } => construct(cli, code, then),
        Command::Tables { n, t, kind } => tables(cli, *n, *t, kind.clone()),
        Command::Simulate {
            code,
            t,
            exhaustive,
            trials,
        } => simulate(cli, code, *t, *exhaustive, *trials),
        Command::Provision {
            topology,
            mode,
            export_lp,
        } => provision_cmd(cli, topology, *mode, export_lp.as_deref()),
    }
}

fn construct(cli: &Cli, spec: &CodeSpec, then: &[Rule]) -> Result<String> {
    let mut code = spec.build()?;
    for &rule in then {
        code = derive(&code, rule)?;
    }
    let mut out = String::new();
    if cli.csv {
        out.push_str("code,n,k,d,label,provenance,generator\n");
        let rows = code.generator().to_text();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            code.parameters(),
            code.n(),
            code.k(),
            code.d_min(),
            csv_field(&code.label()),
            csv_field(&code.provenance().to_string()),
            rows.trim_end().replace('\n', " ")
        );
    } else {
        let _ = writeln!(out, "{} {}", code.parameters(), code.label());
        let _ = writeln!(out, "provenance: {}", code.provenance());
        out.push_str("generator:\n");
        out.push_str(&code.generator().to_text());
    }
    Ok(out)
}

fn load_catalog(cli: &Cli) -> Result<std::borrow::Cow<'static, Catalog>> {
    Ok(match &cli.catalog {
        Some(path) => std::borrow::Cow::Owned(Catalog::load(path)?),
        None => std::borrow::Cow::Borrowed(Catalog::bundled()),
    })
}

fn tables(cli: &Cli, n: Option<usize>, t: Option<usize>, kind: Option<String>) -> Result<String> {
    let catalog = load_catalog(cli)?;
    let rows = catalog.query(&CatalogQuery { n, t, kind });
    let mut out = String::new();
    if cli.csv {
        out.push_str("n,k,d,m,t,type,tables,source,note\n");
    } else {
        let _ = writeln!(
            out,
            "{:>4} {:>4} {:>3} {:>3} {:>3}  {:<12} {:<8} {:<7} note",
            "n", "k", "d", "m", "t", "type", "tables", "source"
        );
    }
    for e in rows {
        let source = match e.source {
            Source::Bch => "bch",
            Source::ParametersOnly => "-",
            Source::Matrix(_) => "matrix",
        };
        let note = e.note.as_deref().unwrap_or("");
        let tabs = e.tables.join(" ");
        if cli.csv {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                e.n,
                e.k,
                e.d,
                e.m(),
                e.t(),
                csv_field(&e.kind),
                csv_field(&tabs),
                source,
                csv_field(note)
            );
        } else {
            let line = format!(
                "{:>4} {:>4} {:>3} {:>3} {:>3}  {:<12} {:<8} {:<7} {}",
                e.n,
                e.k,
                e.d,
                e.m(),
                e.t(),
                e.kind,
                tabs,
                source,
                note
            );
            let _ = writeln!(out, "{}", line.trim_end());
        }
    }
    Ok(out)
}

fn simulate(
    cli: &Cli,
    spec: &CodeSpec,
    t: Option<usize>,
    exhaustive: bool,
    trials: Option<u64>,
) -> Result<String> {
    let code = spec.build()?;
    let t = t.unwrap_or_else(|| code.t_max());
    let mut options = ValidateOptions {
        seed: cli.seed,
        ..ValidateOptions::default()
    };
    if exhaustive {
        options.pattern_cap = u64::MAX;
        options.codeword_cap = 4096;
    }
    if let Some(n) = trials {
        options.pattern_cap = n;
    }
    let report = exhaustive_validate(&code, t, &options)?;
    Ok(if cli.csv {
        format!("{}\n{}\n", ValidationReport::CSV_HEADER, report.csv_row())
    } else {
        simulation_text(&report)
    })
}

fn range(lo: usize, hi: usize) -> String {
    if lo == hi {
        lo.to_string()
    } else {
        format!("{lo}-{hi}")
    }
}

fn simulation_text(r: &ValidationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", r.line());
    let _ = writeln!(
        out,
        "patterns {} ({}), codewords per pattern {}",
        r.patterns_tested,
        if r.exhaustive { "exhaustive" } else { "sampled" },
        r.codewords_per_pattern
    );
    let _ = writeln!(out, "{:<13} {:>9} {:>8} {:>8}", "case", "patterns", "xor", "queries");
    for (case, s) in &r.cases {
        let _ = writeln!(
            out,
            "{:<13} {:>9} {:>8} {:>8}",
            case.to_string(),
            s.patterns,
            range(s.xor_min, s.xor_max),
            range(s.queries_min, s.queries_max)
        );
    }
    out
}

fn limits(cli: &Cli) -> BnbLimits {
    let mut l = BnbLimits::default();
    if let Some(c) = cli.caps {
        l.max_nodes = c.nodes;
        l.max_seconds = c.seconds;
    }
    l
}

fn cost_csv(instance: &str, scheme: &str, r: &CostRow) -> String {
    format!(
        "{},{scheme},{},{},{}\n",
        csv_field(instance),
        format_number(r.total),
        format_number(r.working),
        format_number(r.spare)
    )
}

fn arc_text(t: &Topology, a: usize) -> String {
    let (u, v) = t.arc(a);
    format!("{}->{}", t.name(u), t.name(v))
}

fn conn_text(t: &Topology, c: &ConnectionSet, h: usize) -> String {
    let conn = c.get(h);
    format!("{}->{}", t.name(conn.source), t.name(conn.dest))
}

fn status_text(status: BnbStatus, nodes: u64) -> String {
    match status {
        BnbStatus::Optimal => format!("optimal after {nodes} nodes"),
        BnbStatus::CapExceeded => {
            format!("CAP REACHED after {nodes} nodes; best solution found, optimality not proven")
        }
    }
}

fn npc_text(t: &Topology, c: &ConnectionSet, r: &ProvisionResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "solver: {}", status_text(r.status, r.nodes));
    let _ = writeln!(
        out,
        "cost: total {} working {} spare {}",
        format_number(r.total),
        format_number(r.working),
        format_number(r.spare)
    );
    for (g, group) in r.groups.iter().enumerate() {
        let members: Vec<String> = group
            .members
            .iter()
            .map(|&h| format!("{h}:{}", conn_text(t, c, h)))
            .collect();
        let _ = writeln!(out, "group {g}: {}", members.join(" "));
        if group.members.len() > 1 {
            for (label, arcs) in [("S", &group.s_arcs), ("R", &group.r_arcs)] {
                let list: Vec<String> = arcs.iter().map(|&a| arc_text(t, a)).collect();
                let shown = if list.is_empty() { "-".to_string() } else { list.join(" ") };
                let _ = writeln!(out, "  {label} circuit: {shown}");
            }
        }
    }
    for (h, plan) in r.connections.iter().enumerate() {
        let _ = write!(
            out,
            "connection {h} {}: working {}",
            conn_text(t, c, h),
            t.format_path(&plan.working)
        );
        match &plan.secondary {
            Some(p) => {
                let _ = writeln!(out, ", secondary {}", t.format_path(p));
            }
            None => out.push('\n'),
        }
    }
    out
}

fn provision_cmd(cli: &Cli, path: &Path, mode: Mode, export: Option<&Path>) -> Result<String> {
    let text = read_file(path)?;
    let (t, c) = crate::provision::load_topology(&text)?;
    let instance = path
        .file_stem()
        .map_or_else(|| "instance".to_string(), |s| s.to_string_lossy().into_owned());
    let mut out = String::new();
    if let Some(lp) = export {
        let ilp = build_ilp(&t, &c)?;
        std::fs::write(lp, ilp.model.export_lp()).map_err(|e| Error::Io {
            path: lp.display().to_string(),
            reason: e.to_string(),
        })?;
        if !cli.csv {
            let _ = writeln!(
                out,
                "wrote {} ({} variables, {} constraints)",
                lp.display(),
                ilp.model.var_count(),
                ilp.model.constraints().len()
            );
        }
    }
    if !cli.csv {
        let _ = writeln!(
            out,
            "instance {instance}: {} nodes, {} spans, {} connections",
            t.node_count(),
            t.edge_count(),
            c.len()
        );
    }
    match mode {
        Mode::Npc => {
            let r = provision(&t, &c, &limits(cli))?;
            if cli.csv {
                let scheme = if r.status == BnbStatus::Optimal { "npc" } else { "npc-capped" };
                let row = CostRow {
                    total: r.total,
                    working: r.working,
                    spare: r.spare,
                };
                out.push_str(CSV_HEADER);
                out.push('\n');
                out.push_str(&cost_csv(&instance, scheme, &row));
            } else {
                out.push_str(&npc_text(&t, &c, &r));
            }
        }
        Mode::OnePlusOne => {
            let pairs = disjoint_pairs(&t, &c)?;
            let row = crate::provision::one_plus_one_costs(&t, &c)?;
            if cli.csv {
                out.push_str(CSV_HEADER);
                out.push('\n');
                out.push_str(&cost_csv(&instance, "1+1", &row));
            } else {
                let _ = writeln!(
                    out,
                    "cost: total {} working {} spare {}",
                    format_number(row.total),
                    format_number(row.working),
                    format_number(row.spare)
                );
                for (h, p) in pairs.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "connection {h} {}: working {} ({}), spare {} ({})",
                        conn_text(&t, &c, h),
                        t.format_path(&p.working),
                        p.working_cost,
                        t.format_path(&p.spare),
                        p.spare_cost
                    );
                }
            }
        }
        Mode::Compare => {
            let cmp = compare_costs(&t, &c, &limits(cli))?;
            if cli.csv {
                out.push_str(CSV_HEADER);
                out.push('\n');
                out.push_str(&cmp.csv_rows(&instance));
            } else {
                let _ = writeln!(out, "solver: {}", status_text(cmp.npc_status, cmp.provisioning.nodes));
                let _ = writeln!(out, "{:<8} {:>7} {:>8} {:>7}", "scheme", "total", "working", "spare");
                for (name, row) in [("1+1", &cmp.one_plus_one), ("npc", &cmp.npc)] {
                    let _ = writeln!(
                        out,
                        "{:<8} {:>7} {:>8} {:>7}",
                        name,
                        format_number(row.total),
                        format_number(row.working),
                        format_number(row.spare)
                    );
                }
            }
        }
    }
    Ok(out)
}
