use std::fmt::Display;

use juggle_core::chains::{
    check_doubly_stochastic, closed_form, closed_form_standard, closed_form_tl, matrix_for,
    matrix_standard, matrix_tl, stationary_exact, stationary_power, validate, verify_lumpability,
    StationaryDistribution,
};
use juggle_core::combinatorics::{
    enumerate_partitions, partition_to_tl, stirling2, tl_to_partition,
};
use juggle_core::graphs::{
    build_add_drop, build_annihilation, build_standard, build_tl, GraphKind,
};
use juggle_core::montecarlo::{tv_distance, Walker};
use juggle_core::serialize::{distribution_to_csv, distribution_to_json, format_rational};
use juggle_core::states::{enumerate_landing_states, enumerate_tl_states};
use juggle_core::{BigUint, Error, Result};
use num_traits::ToPrimitive;
use serde_json::json;

use crate::{GraphFormat, ListFormat, Method, Model, ModelArgs, TableFormat};

pub enum Outcome {
    Success,
    VerificationFailed,
}

pub struct SolveOptions {
    pub steps: u64,
    pub seed: u64,
    pub tol: f64,
    pub max_iter: usize,
}

const MAX_H_STANDARD: usize = 16;
const MAX_H_TL: usize = 10;
const MAX_H_ALL_F: usize = 12;
const MAX_DENSE_STATES: u64 = 4096;
const POWER_WARN: f64 = 1e-9;
const TV_WARN: f64 = 0.01;

fn kind(model: Model) -> GraphKind {
    match model {
        Model::Standard => GraphKind::Standard,
        Model::Tl => GraphKind::Tl,
        Model::Adddrop => GraphKind::AddDrop,
        Model::Annihilation => GraphKind::Annihilation,
    }
}

fn too_large(what: &'static str, value: usize, allowed: String) -> Error {
    Error::Range {
        what,
        value,
        allowed: format!("{allowed}; pass --force to override"),
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

fn state_count(kind: GraphKind, h: usize, f: Option<usize>) -> u64 {
    let f = f.unwrap_or(0);
    match kind {
        GraphKind::Standard => binomial(h, f),
        GraphKind::Tl => stirling2(h + 1, f + 1).to_u64().unwrap_or(u64::MAX),
        GraphKind::AddDrop | GraphKind::Annihilation => 1u64 << h.min(63),
    }
}

/// Validate `(h, f)` and apply the default bounds. `dense` adds the limit on
/// the number of states for commands that build a full matrix.
fn check_bounds(
    kind: GraphKind,
    h: usize,
    f: Option<usize>,
    force: bool,
    dense: bool,
) -> Result<Option<usize>> {
    validate(kind, h, f)?;
    let f = if kind.spans_all_f() {
        if f.is_some() {
            eprintln!("warning: --f is ignored for the {kind} model");
        }
        None
    } else {
        f
    };
    if force {
        return Ok(f);
    }
    let max_h = match kind {
        GraphKind::Standard => MAX_H_STANDARD,
        GraphKind::Tl => MAX_H_TL,
        GraphKind::AddDrop | GraphKind::Annihilation => MAX_H_ALL_F,
    };
    if h > max_h {
        return Err(too_large(
            "h",
            h,
            format!("h <= {max_h} for the {kind} model"),
        ));
    }
    let n = state_count(kind, h, f);
    if dense && n > MAX_DENSE_STATES {
        return Err(too_large(
            "states",
            n as usize,
            format!("at most {MAX_DENSE_STATES} states for a dense matrix"),
        ));
    }
    Ok(f)
}

pub fn states(h: usize, f: usize, tl: bool, format: ListFormat, force: bool) -> Result<Outcome> {
    let kind = if tl {
        GraphKind::Tl
    } else {
        GraphKind::Standard
    };
    check_bounds(kind, h, Some(f), force, false)?;
    if tl {
        let list = enumerate_tl_states(h, f)?;
        match format {
            ListFormat::Text => {
                for s in &list {
                    println!("{s}\t{}", s.project());
                }
            }
            ListFormat::Json => {
                let rows: Vec<_> = list
                    .iter()
                    .map(|s| json!({"state": s.to_string(), "projection": s.project().to_string()}))
                    .collect();
                println!("{}", serde_json::to_string_pretty(&rows).expect("json"));
            }
        }
    } else {
        let list = enumerate_landing_states(h, f)?;
        match format {
            ListFormat::Text => {
                for s in &list {
                    println!("{s}\t{}", s.weight());
                }
            }
            ListFormat::Json => {
                let rows: Vec<_> = list
                    .iter()
                    .map(|s| json!({"state": s.to_string(), "weight": s.weight().to_string()}))
                    .collect();
                println!("{}", serde_json::to_string_pretty(&rows).expect("json"));
            }
        }
    }
    Ok(Outcome::Success)
}

pub fn graph(args: &ModelArgs, format: GraphFormat) -> Result<Outcome> {
    let kind = kind(args.model);
    let f = check_bounds(kind, args.h, args.f, args.force, false)?;
    let h = args.h;
    let (dot, value) = match kind {
        GraphKind::Standard => {
            let g = build_standard(h, f.expect("validated"))?;
            (g.export_dot(), g.to_json())
        }
        GraphKind::Tl => {
            let g = build_tl(h, f.expect("validated"))?;
            (g.export_dot(), g.to_json())
        }
        GraphKind::AddDrop => {
            let g = build_add_drop(h)?;
            (g.export_dot(), g.to_json())
        }
        GraphKind::Annihilation => {
            let g = build_annihilation(h)?;
            (g.export_dot(), g.to_json())
        }
    };
    match format {
        GraphFormat::Dot => print!("{dot}"),
        GraphFormat::Json => println!("{}", serde_json::to_string_pretty(&value).expect("json")),
    }
    Ok(Outcome::Success)
}

fn print_exact(d: &StationaryDistribution<String>, format: TableFormat) {
    match format {
        TableFormat::Table => {
            for (s, p) in d.states.iter().zip(&d.probs) {
                println!(
                    "{s}\t{}\t{:.12}",
                    format_rational(p),
                    juggle_core::chains::rational_to_f64(p)
                );
            }
        }
        TableFormat::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(&distribution_to_json(d)).expect("json")
            )
        }
        TableFormat::Csv => print!("{}", distribution_to_csv(d)),
    }
}

fn print_float(states: &[String], probs: &[f64], format: TableFormat) {
    match format {
        TableFormat::Table => {
            for (s, p) in states.iter().zip(probs) {
                println!("{s}\t{p:.12}");
            }
        }
        TableFormat::Json => {
            let v = json!({"states": states, "probs": probs});
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
        TableFormat::Csv => {
            println!("state,decimal");
            for (s, p) in states.iter().zip(probs) {
                println!("{s},{p:.12}");
            }
        }
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn stationary(
    args: &ModelArgs,
    method: Method,
    opts: SolveOptions,
    format: TableFormat,
) -> Result<Outcome> {
    let kind = kind(args.model);
    let dense = method != Method::Closed;
    let f = check_bounds(kind, args.h, args.f, args.force, dense)?;
    let h = args.h;
    match method {
        Method::Closed => print_exact(&closed_form(kind, h, f)?, format),
        Method::Exact => print_exact(&stationary_exact(&matrix_for(kind, h, f)?)?, format),
        Method::Power => {
            let m = matrix_for(kind, h, f)?;
            let it = stationary_power(&m, opts.tol, opts.max_iter)?;
            eprintln!(
                "power iteration: {} iterations, residual {:e}",
                it.iterations, it.residual
            );
            print_float(&m.states, &it.probs, format);
        }
        Method::Simulate => {
            let m = matrix_for(kind, h, f)?;
            let report = Walker::new(&m)?.walk(0, opts.steps, opts.seed)?;
            eprintln!(
                "simulation: {} steps, tv distance {:.6}",
                report.steps, report.tv_distance
            );
            print_float(&report.states, &report.empirical, format);
        }
        Method::All => {
            let closed = closed_form(kind, h, f)?;
            let m = matrix_for(kind, h, f)?;
            let exact = stationary_exact(&m)?;
            if closed != exact {
                let i = (0..exact.states.len())
                    .find(|&i| {
                        closed.states[i] != exact.states[i] || closed.probs[i] != exact.probs[i]
                    })
                    .unwrap_or(0);
                eprintln!(
                    "error: closed form and exact solve disagree at {}: {} vs {}",
                    exact.states[i],
                    format_rational(&closed.probs[i]),
                    format_rational(&exact.probs[i])
                );
                return Ok(Outcome::VerificationFailed);
            }
            let reference = exact.to_f64();
            match stationary_power(&m, opts.tol, opts.max_iter) {
                Ok(it) => {
                    let d = max_abs_diff(&it.probs, &reference);
                    if d > POWER_WARN {
                        eprintln!("warning: power iteration differs from exact by {d:e}");
                    }
                }
                Err(e) => eprintln!("warning: power iteration failed: {e}"),
            }
            let report =
                Walker::with_reference(&m, reference.clone())?.walk(0, opts.steps, opts.seed)?;
            let tv = tv_distance(&report.empirical, &reference)?;
            if tv > TV_WARN {
                eprintln!("warning: simulation tv distance {tv:.6} exceeds {TV_WARN}");
            }
            print_exact(&exact, format);
        }
    }
    Ok(Outcome::Success)
}

const CHECKS: [&str; 5] = ["lump", "doubly", "count", "bijection", "closedform"];

fn report<D: Display>(name: &str, pass: bool, detail: D) -> bool {
    println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}

pub fn verify(h: usize, f: usize, checks: &[String], force: bool) -> Result<Outcome> {
    check_bounds(GraphKind::Tl, h, Some(f), force, true)?;
    let mut selected: Vec<&str> = Vec::new();
    for c in checks {
        let c = c.trim();
        if c == "all" {
            selected.extend(CHECKS);
        } else if let Some(&known) = CHECKS.iter().find(|&&k| k == c) {
            selected.push(known);
        } else {
            return Err(Error::Parse {
                input: c.to_string(),
                reason: format!(
                    "unknown check; expected one of {} or all",
                    CHECKS.join(", ")
                ),
            });
        }
    }
    selected.dedup();
    let mut ok = true;
    for check in selected {
        ok &= match check {
            "lump" => check_lump(h, f)?,
            "doubly" => check_doubly(h, f)?,
            "count" => check_count(h, f)?,
            "bijection" => check_bijection(h, f)?,
            _ => check_closed_form(h, f)?,
        };
    }
    Ok(if ok {
        Outcome::Success
    } else {
        Outcome::VerificationFailed
    })
}

fn check_lump(h: usize, f: usize) -> Result<bool> {
    let r = verify_lumpability(h, f)?;
    let p = matrix_standard(h, f)?;
    Ok(match &r.witness {
        Some(w) => report(
            "lump",
            false,
            format!(
                "from {} (in the fiber of {}) into the fiber of {}: expected {}, found {}",
                w.tl_source,
                w.source,
                w.target,
                format_rational(&w.expected),
                format_rational(&w.found)
            ),
        ),
        None if r.lumped.entries != p.entries => {
            report("lump", false, "lumped chain differs from the landing chain")
        }
        None => report(
            "lump",
            true,
            format!(
                "{} landing states, lumped chain equals the landing chain",
                p.len()
            ),
        ),
    })
}

fn check_doubly(h: usize, f: usize) -> Result<bool> {
    let m = matrix_tl(h, f)?;
    let c = check_doubly_stochastic(&m);
    Ok(match &c.first_failure {
        Some((j, s)) => report(
            "doubly",
            false,
            format!("column {} sums to {}", m.states[*j], format_rational(s)),
        ),
        None => report("doubly", true, format!("all {} columns sum to 1", m.len())),
    })
}

fn check_count(h: usize, f: usize) -> Result<bool> {
    let tl = enumerate_tl_states(h, f)?.len();
    let weights: BigUint = enumerate_landing_states(h, f)?
        .iter()
        .map(|s| s.weight())
        .sum();
    let s = stirling2(h + 1, f + 1);
    let pass = BigUint::from(tl) == s && weights == s;
    Ok(report(
        "count",
        pass,
        format!(
            "{tl} TL-states, weight sum {weights}, S({}, {}) = {s}",
            h + 1,
            f + 1
        ),
    ))
}

fn check_bijection(h: usize, f: usize) -> Result<bool> {
    let states = enumerate_tl_states(h, f)?;
    for s in &states {
        let p = tl_to_partition(s);
        if p.block_count() != f + 1 || partition_to_tl(&p).as_ref() != Ok(s) {
            return Ok(report(
                "bijection",
                false,
                format!("{s} maps to {p}, which does not map back"),
            ));
        }
    }
    let partitions = enumerate_partitions(h + 1, f + 1)?;
    for p in &partitions {
        let s = partition_to_tl(p)?;
        if tl_to_partition(&s) != *p {
            return Ok(report(
                "bijection",
                false,
                format!("{p} maps to {s}, which does not map back"),
            ));
        }
    }
    if states.len() != partitions.len() {
        return Ok(report(
            "bijection",
            false,
            format!(
                "{} TL-states but {} partitions",
                states.len(),
                partitions.len()
            ),
        ));
    }
    Ok(report(
        "bijection",
        true,
        format!(
            "{} TL-states <-> {} partitions",
            states.len(),
            partitions.len()
        ),
    ))
}

fn check_closed_form(h: usize, f: usize) -> Result<bool> {
    let exact = stationary_exact(&matrix_standard(h, f)?)?;
    let closed = closed_form_standard(h, f)?;
    if let Some(i) = (0..exact.probs.len()).find(|&i| exact.probs[i] != closed.probs[i]) {
        return Ok(report(
            "closedform",
            false,
            format!(
                "standard chain at {}: exact {}, closed form {}",
                exact.states[i],
                format_rational(&exact.probs[i]),
                format_rational(&closed.probs[i])
            ),
        ));
    }
    let tl_exact = stationary_exact(&matrix_tl(h, f)?)?;
    let tl_closed = closed_form_tl(h, f)?;
    if let Some(i) = (0..tl_exact.probs.len()).find(|&i| tl_exact.probs[i] != tl_closed.probs[i]) {
        return Ok(report(
            "closedform",
            false,
            format!(
                "TL chain at {}: exact {}, uniform {}",
                tl_exact.states[i],
                format_rational(&tl_exact.probs[i]),
                format_rational(&tl_closed.probs[i])
            ),
        ));
    }
    Ok(report(
        "closedform",
        true,
        format!(
            "exact solve matches on {} landing states and {} TL-states",
            exact.probs.len(),
            tl_exact.probs.len()
        ),
    ))
}

pub fn simulate(args: &ModelArgs, steps: u64, seed: u64, start: Option<&str>) -> Result<Outcome> {
    let kind = kind(args.model);
    let f = check_bounds(kind, args.h, args.f, args.force, true)?;
    let m = matrix_for(kind, args.h, f)?;
    let walker = Walker::new(&m)?;
    let start = match start {
        Some(s) => walker.index_of(s)?,
        None => 0,
    };
    let report = walker.walk(start, steps, seed)?;
    println!("{}", report.to_json());
    Ok(Outcome::Success)
}

pub fn partitions(h: usize, f: usize, roundtrip: bool, force: bool) -> Result<Outcome> {
    check_bounds(GraphKind::Tl, h, Some(f), force, false)?;
    if roundtrip {
        return Ok(if check_bijection(h, f)? {
            Outcome::Success
        } else {
            Outcome::VerificationFailed
        });
    }
    for s in enumerate_tl_states(h, f)? {
        println!("{s}\t{}", tl_to_partition(&s));
    }
    Ok(Outcome::Success)
}
