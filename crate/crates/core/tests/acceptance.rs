//! Acceptance suite: one line per criterion, non-zero exit if any fails.

mod common;

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use common::oracle;
use npc_core::codes::{
    bch_dimension, check_bounds, check_parameters, construct_bch, cyclotomic_cosets, derive,
    Catalog, LinearCode, Provenance, Rule, BCH_15_11_GENERATOR, CODE_15_8_GENERATOR,
};
use npc_core::gf2::{min_distance_by_codewords, BitMatrix};
use npc_core::provision::{
    build_ilp, check_disjointness, compare_costs, decode, disjoint_pairs,
    one_plus_one_assignment, read_topology, replay, solve_bnb, BnbLimits, BnbStatus,
};
use npc_core::scheme::{capacity, plan_round, CapacityLedger};
use npc_core::sim::{exhaustive_validate, FailureCase, RecoveryPlan, ValidateOptions};
use num_rational::{Ratio, Rational64};

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn samples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../samples")
}

fn topology_files(dir: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "top"))
        .collect();
    v.sort();
    v
}

/// Exact code dimension from the union of cyclotomic cosets of `1..d`.
fn coset_dimension(n: usize, d: usize) -> usize {
    let mut covered = vec![false; n];
    for i in 1..d {
        let mut x = i % n;
        while !covered[x] {
            covered[x] = true;
            x = x * 2 % n;
        }
    }
    n - covered.iter().filter(|&&c| c).count()
}

fn bch_dimensions() -> Check {
    for (n, d, mu, k) in [
        (15, 3, 4, 11),
        (31, 3, 5, 26),
        (31, 5, 5, 21),
        (63, 3, 6, 57),
        (127, 3, 7, 120),
    ] {
        let got = bch_dimension(n, d, mu).map_err(|e| e.to_string())?;
        ensure(got == k, || format!("bch_dimension({n},{d},{mu}) = {got}, want {k}"))?;
        let by_cosets = coset_dimension(n, d);
        ensure(by_cosets == k, || format!("coset count for ({n},{d}) gives {by_cosets}"))?;
        let cosets = cyclotomic_cosets(n).map_err(|e| e.to_string())?;
        let degree: usize = cosets
            .iter()
            .filter(|c| c.iter().any(|&x| (1..d).contains(&x)))
            .map(Vec::len)
            .sum();
        let closed = mu as usize * (d - 1).div_ceil(2);
        ensure(degree == closed, || format!("coset degree {degree} mod {n}, closed form {closed}"))?;
        let code = construct_bch(n, d).map_err(|e| e.to_string())?;
        ensure(code.k() == k, || format!("constructed BCH({n},{d}) has k = {}", code.k()))?;
    }
    Ok("5 (n,d,mu) triples".into())
}

fn explicit_matrices() -> Check {
    for (text, n, k, d) in [(BCH_15_11_GENERATOR, 15, 11, 3), (CODE_15_8_GENERATOR, 15, 8, 4)] {
        let g: BitMatrix = text.parse().map_err(|e: npc_core::Error| e.to_string())?;
        ensure(g.rows() == k && g.cols() == n, || format!("[{n},{k}] matrix has wrong shape"))?;
        let dist = min_distance_by_codewords(&g);
        ensure(dist == Some(d), || format!("[{n},{k}] exhaustive d_min = {dist:?}, want {d}"))?;
        let code = LinearCode::from_generator(&g, Provenance::Explicit(format!("[{n},{k}]")))
            .map_err(|e| e.to_string())?;
        let product = g.mul(&code.parity().transpose()).map_err(|e| e.to_string())?;
        ensure(product.is_zero(), || format!("[{n},{k}] G H^T is not zero"))?;
    }
    Ok("[15,11,3] and [15,8,4]".into())
}

fn erasure_recovery() -> Check {
    let mut checked = Vec::new();
    for (entry, code) in Catalog::bundled().codes().filter(|(e, _)| e.n <= 16) {
        let d = code.d_min().value();
        let opts = ValidateOptions {
            pattern_cap: u64::MAX,
            codeword_cap: if code.k() <= 12 { 1 << code.k() } else { 100 },
            seed: 0,
        };
        let ok = exhaustive_validate(code, d - 1, &opts).map_err(|e| e.to_string())?;
        ensure(ok.passed() && ok.exhaustive, || format!("{} t={}: {}", entry.parameters(), d - 1, ok.line()))?;
        let over = exhaustive_validate(code, d, &opts).map_err(|e| e.to_string())?;
        ensure(over.witness.is_some(), || format!("{} t={d}: no witness", entry.parameters()))?;
        checked.push(entry.parameters());
    }
    ensure(checked.len() >= 4, || format!("only {} small catalog codes", checked.len()))?;
    Ok(checked.join(" "))
}

fn single_failure_counts() -> Check {
    for n in 3..=16 {
        let code = LinearCode::single_parity(n).map_err(|e| e.to_string())?;
        let plan = plan_round(n, 1, 1).map_err(|e| e.to_string())?;
        ensure(plan.protection_set().len() + plan.plain_set().len() == n, || {
            format!("n={n}: round does not carry n transmissions")
        })?;
        for failed in 1..=n {
            let rp = RecoveryPlan::new(&code, &plan, &[failed]).map_err(|e| e.to_string())?;
            let s = rp.stats();
            let (xor, queries) = match s.case {
                FailureCase::PlainOnly => (n - 2, n - 1),
                FailureCase::EncodedOnly => (0, 0),
                other => return Err(format!("n={n} failed={failed}: case {other}")),
            };
            ensure(s.recovered && s.xor_ops == xor && s.queries == queries, || {
                format!("n={n} failed={failed}: {s:?}")
            })?;
        }
    }
    Ok("n = 3..16".into())
}

fn capacity_lemmas() -> Check {
    for (n, m) in [(5usize, 1usize), (15, 4), (31, 10)] {
        let want = Ratio::new((n - m) as u64, n as u64);
        let got = CapacityLedger::simulate(n, m, n).map_err(|e| e.to_string())?.normalized();
        ensure(got == want, || format!("({n},{m}): simulated {got}, want {want}"))?;
        ensure(capacity(n, m).ok() == Some(want), || format!("({n},{m}): closed form differs"))?;
    }
    for n in 2..=32 {
        for m in 1..n {
            let ledger = CapacityLedger::simulate(n, m, n).map_err(|e| e.to_string())?;
            ensure(ledger.encoded().iter().all(|&e| e == m), || {
                format!("({n},{m}): encoded counts {:?}", ledger.encoded())
            })?;
        }
    }
    Ok("3 capacities, fairness for n <= 32".into())
}

fn bounds() -> Check {
    let catalog = Catalog::bundled();
    for e in catalog.entries() {
        let r = check_parameters(e.n, e.k, e.d);
        ensure(r.singleton_ok && r.hamming_ok, || format!("{} violates a bound", e.parameters()))?;
    }
    for (_, code) in catalog.codes() {
        let r = check_bounds(code);
        ensure(r.singleton_ok && r.hamming_ok, || format!("{} violates a bound", code.parameters()))?;
    }
    let hamming = construct_bch(7, 3).map_err(|e| e.to_string())?;
    let r = check_bounds(&hamming);
    ensure(r.hamming_tight, || "[7,4,3] is not perfect".into())?;
    Ok(format!("{} entries, [7,4,3] perfect", catalog.entries().len()))
}

fn propagation_rules() -> Check {
    let base = construct_bch(15, 3).map_err(|e| e.to_string())?;
    for (rule, n, k, d) in [
        (Rule::Shorten, 14, 10, 3),
        (Rule::Puncture, 14, 11, 2),
        (Rule::Append, 16, 11, 4),
    ] {
        let code = derive(&base, rule).map_err(|e| e.to_string())?;
        let dist = min_distance_by_codewords(code.generator());
        ensure(code.n() == n && code.k() == k && dist == Some(d), || {
            format!("{rule}: got [{},{},{dist:?}], want [{n},{k},{d}]", code.n(), code.k())
        })?;
    }
    Ok("[14,10,3] [14,11,2] [16,11,4]".into())
}

fn ilp_against_oracle() -> Check {
    let files = topology_files(&samples().join("tiny"));
    ensure(files.len() >= 5, || format!("only {} tiny instances", files.len()))?;
    let mut summary = Vec::new();
    for path in &files {
        let name = path.file_stem().unwrap().to_string_lossy().into_owned();
        let (t, c) = read_topology(path).map_err(|e| e.to_string())?;
        ensure(t.node_count() <= 6 && c.len() <= 3, || format!("{name} is not desk scale"))?;
        let (doubled, _) = oracle::optimum(&t, &c).ok_or(format!("{name}: oracle infeasible"))?;
        let ilp = build_ilp(&t, &c).map_err(|e| e.to_string())?;
        let sol = solve_bnb(&ilp.model, &BnbLimits::default()).map_err(|e| e.to_string())?;
        let want = Rational64::new(doubled as i64, 2);
        ensure(sol.status == BnbStatus::Optimal && sol.objective == want, || {
            format!("{name}: solver {} ({:?}), oracle {want}", sol.objective, sol.status)
        })?;
        let broken = replay(&ilp, &sol.values);
        ensure(broken.is_empty(), || format!("{name}: violates {broken:?}"))?;
        let r = decode(&t, &c, &ilp, &sol.values, sol.status, sol.nodes).map_err(|e| e.to_string())?;
        check_disjointness(&t, &c, &r).map_err(|e| format!("{name}: {e}"))?;
        summary.push(format!("{name}={want}"));
    }
    Ok(summary.join(" "))
}

fn npc_dominates() -> Check {
    let mut files = topology_files(&samples());
    files.extend(topology_files(&samples().join("tiny")));
    let mut summary = Vec::new();
    for path in &files {
        let name = path.file_stem().unwrap().to_string_lossy().into_owned();
        let (t, c) = read_topology(path).map_err(|e| e.to_string())?;
        let ilp = build_ilp(&t, &c).map_err(|e| e.to_string())?;
        let pairs = disjoint_pairs(&t, &c).map_err(|e| e.to_string())?;
        let warm = one_plus_one_assignment(&ilp, &pairs);
        let broken = replay(&ilp, &warm);
        ensure(broken.is_empty(), || format!("{name}: 1+1 injection violates {broken:?}"))?;
        let cmp = compare_costs(&t, &c, &BnbLimits::default()).map_err(|e| e.to_string())?;
        ensure(cmp.npc.total <= cmp.one_plus_one.total, || {
            format!("{name}: npc {} > 1+1 {}", cmp.npc.total, cmp.one_plus_one.total)
        })?;
        check_disjointness(&t, &c, &cmp.provisioning).map_err(|e| format!("{name}: {e}"))?;
        summary.push(format!("{name}={}/{}", cmp.npc.total, cmp.one_plus_one.total));
    }
    Ok(summary.join(" "))
}

fn run_cli(args: &[&str]) -> std::result::Result<(Vec<u8>, Vec<u8>, Option<i32>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_npc"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.stdout, out.stderr, out.status.code()))
}

fn cli_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let v6 = samples().join("v6e9.top");
    let v6 = v6.to_str().unwrap();
    let lp = |i: usize| dir.path().join(format!("model{i}.lp"));
    let (lp0, lp1) = (lp(0), lp(1));
    let commands: Vec<Vec<&str>> = vec![
        vec!["construct", "--bch", "15", "3", "--then", "shorten", "--then", "append"],
        vec!["--csv", "construct", "--parity", "5"],
        vec!["tables"],
        vec!["--csv", "tables", "--t", "2"],
        vec!["simulate", "--bch", "15", "3", "--exhaustive"],
        vec!["--csv", "--seed", "7", "simulate", "--bch", "31", "5", "--trials", "200"],
        vec!["provision", v6, "--mode", "one-plus-one"],
        vec!["provision", v6, "--mode", "npc"],
        vec!["--csv", "provision", v6, "--mode", "compare"],
    ];
    for args in &commands {
        let first = run_cli(args)?;
        let second = run_cli(args)?;
        ensure(first.2 == Some(0), || format!("{args:?} exited with {:?}", first.2))?;
        ensure(first == second, || format!("{args:?} differs between runs"))?;
    }
    for path in [&lp0, &lp1] {
        let status = run_cli(&["provision", v6, "--export-lp", path.to_str().unwrap()])?;
        ensure(status.2 == Some(0), || "export-lp failed".into())?;
    }
    let a = std::fs::read(&lp0).map_err(|e| e.to_string())?;
    let b = std::fs::read(&lp1).map_err(|e| e.to_string())?;
    ensure(!a.is_empty() && a == b, || "exported LP files differ".into())?;
    Ok(format!("{} commands and LP export", commands.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check, Duration); 10] = [
        ("BCH dimension", bch_dimensions, Duration::from_secs(1)),
        ("explicit matrices", explicit_matrices, Duration::from_secs(1)),
        ("erasure recovery", erasure_recovery, Duration::from_secs(60)),
        ("single-failure counts", single_failure_counts, Duration::from_secs(60)),
        ("capacity and fairness", capacity_lemmas, Duration::from_secs(60)),
        ("bounds", bounds, Duration::from_secs(60)),
        ("propagation rules", propagation_rules, Duration::from_secs(5)),
        ("ILP vs oracle", ilp_against_oracle, Duration::from_secs(300)),
        ("NPC <= 1+1", npc_dominates, Duration::from_secs(300)),
        ("CLI determinism", cli_determinism, Duration::from_secs(300)),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let outcome = match result {
            Ok(detail) if elapsed <= budget => format!("PASS {name}: {detail}"),
            Ok(_) => format!("FAIL {name}: took {elapsed:.2?}, budget {budget:?}"),
            Err(e) => format!("FAIL {name}: {e}"),
        };
        if outcome.starts_with("FAIL") {
            failed += 1;
        }
        println!("criterion {}: {outcome} [{elapsed:.2?}]", i + 1);
    }
    println!("acceptance: {} of 10 passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
