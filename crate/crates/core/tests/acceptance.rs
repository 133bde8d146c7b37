//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use juggle_core::chains::{
    check_doubly_stochastic, closed_form, closed_form_add_drop, closed_form_annihilation,
    closed_form_standard, matrix_add_drop, matrix_annihilation, matrix_for, matrix_power,
    matrix_standard, matrix_tl, stationary_exact, stationary_power, verify_lumpability,
};
use juggle_core::combinatorics::{
    bell, enumerate_partitions, partition_to_tl, stirling2, tl_to_partition, SetPartition,
};
use juggle_core::graphs::GraphKind;
use juggle_core::montecarlo::Walker;
use juggle_core::serialize::{format_rational, parse_rational};
use juggle_core::states::{
    enumerate_all_landing_states, enumerate_tl_states, fiber, JugglingState, LandingState, TlState,
};
use juggle_core::{BigRational, BigUint};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn q(s: &str) -> BigRational {
    if s.is_empty() {
        return parse_rational("0").unwrap();
    }
    parse_rational(s).unwrap()
}

fn grid(rows: &[&[&str]]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| r.iter().map(|s| q(s)).collect())
        .collect()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn states_are(actual: &[LandingState], expected: &[&str]) -> Result<(), String> {
    let got: Vec<String> = actual.iter().map(|s| s.to_string()).collect();
    check(got == expected, || {
        format!("state order {got:?}, expected {expected:?}")
    })
}

fn c1_fixture_4_1() -> Outcome {
    let order = ["xxx-", "xx-x", "x-xx", "-xxx"];
    let p = matrix_standard(4, 1).map_err(|e| e.to_string())?;
    states_are(&p.states, &order)?;
    let printed_p = grid(&[
        &["1/2", "1/2", "", ""],
        &["1/2", "", "1/2", ""],
        &["1/2", "", "", "1/2"],
        &["1", "", "", ""],
    ]);
    let printed_p2 = grid(&[
        &["1/2", "1/4", "1/4", ""],
        &["1/2", "1/4", "", "1/4"],
        &["3/4", "1/4", "", ""],
        &["1/2", "1/2", "", ""],
    ]);
    let printed_p5 = grid(&[
        &["17/32", "9/32", "1/8", "1/16"],
        &["17/32", "1/4", "5/32", "1/16"],
        &["17/32", "1/4", "1/8", "3/32"],
        &["9/16", "1/4", "1/8", "1/16"],
    ]);
    check(p.entries == printed_p, || {
        "P differs from the printed matrix".into()
    })?;
    for (l, printed) in [(2, &printed_p2), (5, &printed_p5)] {
        let pl = matrix_power(&p, l).map_err(|e| e.to_string())?;
        check(pl.entries == *printed, || {
            format!("P^{l} differs from the printed matrix")
        })?;
    }
    Ok("P, P^2, P^5 match all 48 printed entries exactly".into())
}

fn c2_fixture_5_2() -> Outcome {
    let m = matrix_standard(5, 2).map_err(|e| e.to_string())?;
    let exact = stationary_exact(&m).map_err(|e| e.to_string())?;
    let expected: Vec<BigRational> = [27, 18, 9, 12, 6, 3, 8, 4, 2, 1]
        .iter()
        .map(|n| q(&format!("{n}/90")))
        .collect();
    check(exact.probs == expected, || {
        format!(
            "got {:?}",
            exact.probs.iter().map(format_rational).collect::<Vec<_>>()
        )
    })?;
    let closed = closed_form(GraphKind::Standard, 5, Some(2)).map_err(|e| e.to_string())?;
    check(closed == exact.relabel(|s| s.to_string()), || {
        "closed form differs".into()
    })?;
    Ok("alpha = (27,18,9,12,6,3,8,4,2,1)/90 = closed form".into())
}

fn c3_sweep() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for h in 1..=7 {
        for f in 0..=h {
            let exact = stationary_exact(&matrix_standard(h, f).map_err(|e| e.to_string())?)
                .map_err(|e| format!("({h},{f}): {e}"))?;
            let closed = closed_form_standard(h, f).map_err(|e| e.to_string())?;
            check(exact == closed, || format!("mismatch at (h,f) = ({h},{f})"))?;
            cases += 1;
        }
    }
    let took = start.elapsed();
    check(took < Duration::from_secs(60), || {
        format!("sweep took {took:?}")
    })?;
    Ok(format!(
        "{cases} (h,f) pairs with h <= 7, exact = closed form, {took:.2?}"
    ))
}

fn c4_counting() -> Outcome {
    let table: [&[u32]; 6] = [
        &[1],
        &[1, 1],
        &[1, 3, 1],
        &[1, 7, 6, 1],
        &[1, 15, 25, 10, 1],
        &[1, 31, 90, 65, 15, 1],
    ];
    let mut entries = 0;
    for (a, row) in table.iter().enumerate() {
        for (b, &v) in row.iter().enumerate() {
            let s = stirling2(a + 1, b + 1);
            check(s == BigUint::from(v), || {
                format!("S({},{}) = {s}, table has {v}", a + 1, b + 1)
            })?;
            entries += 1;
        }
    }
    check(entries == 21, || format!("{entries} table entries"))?;
    for h in 1..=8 {
        for f in 0..=h {
            let n = enumerate_tl_states(h, f).map_err(|e| e.to_string())?.len();
            let s = stirling2(h + 1, f + 1);
            check(BigUint::from(n) == s, || {
                format!("|TL({h},{f})| = {n}, S = {s}")
            })?;
        }
    }
    Ok("21 table entries; |TL(h,f)| = S(h+1,f+1) for h <= 8".into())
}

fn c5_doubly_stochastic() -> Outcome {
    for h in 1..=6 {
        for f in 0..=h {
            let m = matrix_tl(h, f).map_err(|e| e.to_string())?;
            let c = check_doubly_stochastic(&m);
            check(c.holds(), || {
                let (j, s) = c.first_failure.clone().unwrap();
                format!(
                    "({h},{f}) column {} sums to {}",
                    m.states[j],
                    format_rational(&s)
                )
            })?;
        }
    }
    Ok("TL matrices doubly stochastic for h <= 6".into())
}

fn c6_lumping() -> Outcome {
    for h in 1..=6 {
        for f in 0..=h {
            let r = verify_lumpability(h, f).map_err(|e| e.to_string())?;
            check(r.holds(), || format!("({h},{f}) witness {:?}", r.witness))?;
            let p = matrix_standard(h, f).map_err(|e| e.to_string())?;
            check(r.lumped == p, || format!("({h},{f}) lumped matrix differs"))?;
        }
    }
    let mut checked = 0;
    for h in 1..=7 {
        for nu in enumerate_all_landing_states(h).map_err(|e| e.to_string())? {
            let n = fiber(&nu).len();
            check(BigUint::from(n) == nu.weight(), || {
                format!("|fiber({nu})| = {n}, weight {}", nu.weight())
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "lumpable and lumped = P for h <= 6; |fiber| = weight on {checked} states"
    ))
}

fn c7_add_drop() -> Outcome {
    let m = matrix_add_drop(3).map_err(|e| e.to_string())?;
    states_are(
        &m.states,
        &["xxx", "xx-", "x-x", "-xx", "x--", "-x-", "--x", "---"],
    )?;
    let printed = grid(&[
        &["1/2", "1/2", "", "", "", "", "", ""],
        &["", "1/3", "1/3", "", "1/3", "", "", ""],
        &["", "1/3", "", "1/3", "", "1/3", "", ""],
        &["1/2", "1/2", "", "", "", "", "", ""],
        &["", "", "", "", "1/4", "1/4", "1/4", "1/4"],
        &["", "1/3", "1/3", "", "1/3", "", "", ""],
        &["", "1/3", "", "1/3", "", "1/3", "", ""],
        &["", "", "", "", "1/4", "1/4", "1/4", "1/4"],
    ]);
    check(m.entries == printed, || {
        "matrix differs from the printed 8x8 example".into()
    })?;
    let exact = stationary_exact(&m).map_err(|e| e.to_string())?;
    let expected: Vec<BigRational> = [1, 4, 2, 1, 3, 2, 1, 1]
        .iter()
        .map(|n| q(&format!("{n}/15")))
        .collect();
    check(exact.probs == expected, || {
        "alpha differs from (1,4,2,1,3,2,1,1)/15".into()
    })?;
    check(
        exact == closed_form_add_drop(3).map_err(|e| e.to_string())?,
        || "closed form differs".into(),
    )?;
    for h in 1..=7 {
        let total: BigUint = enumerate_all_landing_states(h)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|s| s.weight())
            .sum();
        check(total == bell(h + 1), || {
            format!("h = {h}: weight sum {total}, B = {}", bell(h + 1))
        })?;
    }
    Ok("8x8 matrix and alpha match; weight sums = B(h+1) for h <= 7".into())
}

fn c8_annihilation() -> Outcome {
    for h in 1..=5 {
        let exact = stationary_exact(&matrix_annihilation(h).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let closed = closed_form_annihilation(h).map_err(|e| e.to_string())?;
        check(exact == closed, || {
            format!("h = {h}: exact differs from closed form")
        })?;
    }
    for h in 1..=8 {
        let closed = closed_form_annihilation(h).map_err(|e| e.to_string())?;
        check(closed.total() == q("1"), || {
            format!("h = {h}: total {}", format_rational(&closed.total()))
        })?;
        let mut lhs = BigUint::from(0u32);
        for s in enumerate_all_landing_states(h).map_err(|e| e.to_string())? {
            let f = s.empty_count();
            let falling: BigUint = (h - f + 1..=h).map(BigUint::from).product();
            lhs += falling * s.weight();
        }
        let rhs = BigUint::from(h + 1).pow(h as u32);
        check(lhs == rhs, || {
            format!("h = {h}: sum {lhs}, (h+1)^h = {rhs}")
        })?;
    }
    Ok("exact = closed form for h <= 5; normalisation exact for h <= 8".into())
}

fn c9_bijection() -> Outcome {
    let mut pairs = 0;
    for h in 1..=7 {
        for f in 0..=h {
            let states = enumerate_tl_states(h, f).map_err(|e| e.to_string())?;
            for s in &states {
                let p = tl_to_partition(s);
                check(partition_to_tl(&p).as_ref() == Ok(s), || {
                    format!("{s} -> {p} does not return")
                })?;
            }
            let parts = enumerate_partitions(h + 1, f + 1).map_err(|e| e.to_string())?;
            for p in &parts {
                let s = partition_to_tl(p).map_err(|e| e.to_string())?;
                check(tl_to_partition(&s) == *p, || {
                    format!("{p} -> {s} does not return")
                })?;
            }
            check(states.len() == parts.len(), || {
                format!("({h},{f}) sizes differ")
            })?;
            pairs += states.len();
        }
    }
    let state: TlState = "6-46--7"
        .parse()
        .map_err(|e: juggle_core::Error| e.to_string())?;
    let partition: SetPartition = "{1,3,7,8}|{4,6}|{2}|{5}"
        .parse()
        .map_err(|e: juggle_core::Error| e.to_string())?;
    check(tl_to_partition(&state) == partition, || {
        "figure state does not give the figure partition".into()
    })?;
    check(partition_to_tl(&partition).as_ref() == Ok(&state), || {
        "figure partition does not give the figure state".into()
    })?;
    Ok(format!(
        "{pairs} TL-states round trip for h <= 7; figure pair reproduced"
    ))
}

fn c10_simulation() -> Outcome {
    let fixtures: [(GraphKind, usize, Option<usize>); 4] = [
        (GraphKind::Standard, 4, Some(1)),
        (GraphKind::Standard, 5, Some(2)),
        (GraphKind::AddDrop, 3, None),
        (GraphKind::Annihilation, 3, None),
    ];
    let seeds: Vec<u64> = (1..=10).collect();
    let mut summary = Vec::new();
    for (kind, h, f) in fixtures {
        let start = Instant::now();
        let m = matrix_for(kind, h, f).map_err(|e| e.to_string())?;
        let walker = Walker::new(&m).map_err(|e| e.to_string())?;
        let reports = walker
            .walk_many(0, 1_000_000, &seeds)
            .map_err(|e| e.to_string())?;
        let took = start.elapsed();
        let good = reports.iter().filter(|r| r.tv_distance < 0.01).count();
        let worst = reports.iter().map(|r| r.tv_distance).fold(0.0, f64::max);
        check(good >= 9, || {
            format!("{kind} h={h}: only {good}/10 seeds below 0.01")
        })?;
        check(took < Duration::from_secs(60), || {
            format!("{kind} h={h}: took {took:?}")
        })?;
        summary.push(format!(
            "{kind}({h}{}) {good}/10 max tv {worst:.4}",
            f.map(|f| format!(",{f}")).unwrap_or_default()
        ));
    }
    Ok(summary.join("; "))
}

fn c11_power_iteration() -> Outcome {
    let fixtures: [(GraphKind, usize, Option<usize>); 7] = [
        (GraphKind::Standard, 4, Some(1)),
        (GraphKind::Standard, 5, Some(2)),
        (GraphKind::Tl, 3, Some(1)),
        (GraphKind::Tl, 4, Some(1)),
        (GraphKind::Tl, 5, Some(2)),
        (GraphKind::AddDrop, 3, None),
        (GraphKind::Annihilation, 3, None),
    ];
    let mut worst = 0.0f64;
    for (kind, h, f) in fixtures {
        let m = matrix_for(kind, h, f).map_err(|e| e.to_string())?;
        let exact = stationary_exact(&m).map_err(|e| e.to_string())?.to_f64();
        let it =
            stationary_power(&m, 1e-12, 1_000_000).map_err(|e| format!("{kind} h={h}: {e}"))?;
        let d = it
            .probs
            .iter()
            .zip(&exact)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        check(d <= 1e-10, || format!("{kind} h={h}: max-norm error {d:e}"))?;
        worst = worst.max(d);
    }
    Ok(format!(
        "{} fixtures within 1e-10 (worst {worst:.2e})",
        fixtures.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("fixture (4,1): P, P^2, P^5", c1_fixture_4_1),
        ("fixture (5,2): stationary distribution", c2_fixture_5_2),
        ("standard sweep h <= 7", c3_sweep),
        ("counting and Stirling table", c4_counting),
        ("doubly stochastic TL chain", c5_doubly_stochastic),
        ("lumping and fiber sizes", c6_lumping),
        ("add-drop fixture and Bell sums", c7_add_drop),
        ("annihilation chain", c8_annihilation),
        ("partition bijection", c9_bijection),
        ("simulation sanity", c10_simulation),
        ("power iteration", c11_power_iteration),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match run() {
            Ok(detail) => println!(
                "PASS criterion {:>2} {name}: {detail} [{:.2?}]",
                i + 1,
                start.elapsed()
            ),
            Err(why) => {
                failed += 1;
                println!(
                    "FAIL criterion {:>2} {name}: {why} [{:.2?}]",
                    i + 1,
                    start.elapsed()
                );
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
