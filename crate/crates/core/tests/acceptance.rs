//! Acceptance checks, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines come out in order; exits non-zero on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ds_core::ackermann::{ack, ack_geq, alpha, check_s_bounds, DEFAULT_BIT_BUDGET};
use ds_core::chains::{enumerate_chains, eta_exact, zeta_exact, SolverLimits};
use ds_core::constructions::{
    build_g, build_xs, ratio_violations, recurrences, s2_within_bounds, verify_annotated,
};
use ds_core::oracle::{max_letters_alt, max_letters_formation, witness, SearchLimits};
use ds_core::seq::{avoids_alternation, occurrence_profile};
use ds_core::text::format_sequence;
use ds_core::transforms::{chains_to_seq, seq_to_chains, LabeledChainCollection};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn binom(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn xs_grid() -> Outcome {
    let started = Instant::now();
    let mut n = 0;
    for s in 2..=7usize {
        for m in s + 1..=s + 8 {
            let x = build_xs(s, m).map_err(|e| format!("X_{s}({m}): {e}"))?;
            let want = binom(m - s.div_ceil(2), s / 2);
            ensure(x.letter_count() as u64 == want, || {
                format!("X_{s}({m}) has {} letters, expected {want}", x.letter_count())
            })?;
            ensure(x.block_count() == m, || format!("X_{s}({m}) has {} blocks", x.block_count()))?;
            ensure(occurrence_profile(&x).all_exactly(s), || {
                format!("X_{s}({m}) has a letter not occurring {s} times")
            })?;
            ensure(avoids_alternation(&x, s + 1), || {
                format!("X_{s}({m}) contains an alternation of length {}", s + 1)
            })?;
            n += 1;
        }
    }
    let took = started.elapsed();
    ensure(took < Duration::from_secs(60), || format!("took {took:?}"))?;
    Ok(format!("{n} instances in {took:.2?}"))
}

fn oracle_matches_xs() -> Outcome {
    let limits = SearchLimits::default();
    let mut seen = Vec::new();
    for (s, m) in [(2, 3), (2, 4), (2, 5), (3, 4), (3, 5)] {
        let res = max_letters_alt(s + 1, s, m, &limits);
        let got = res
            .proven_value()
            .ok_or_else(|| format!("A({},{s},{m}) not proven: {:?}", s + 1, res.status))?;
        let want = build_xs(s, m).map_err(|e| e.to_string())?.letter_count() as u64;
        ensure(got == want, || format!("A({},{s},{m}) = {got}, X_{s}({m}) has {want}", s + 1))?;
        seen.push(format!("A({},{s},{m})={got}", s + 1));
    }
    Ok(seen.join(" "))
}

fn zeta_closed_form() -> Outcome {
    let limits = SolverLimits::default();
    let mut n = 0;
    for s in 1..=3usize {
        for m in s..=9 {
            let got = zeta_exact(s, s, m as u32, &limits)
                .map_err(|e| format!("zeta({s},{s},{m}): {e}"))?
                .value;
            let want = binom(m - s / 2, s.div_ceil(2));
            ensure(got.finite() == Some(want), || format!("zeta({s},{s},{m}) = {got}, expected {want}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} values"))
}

const EQUALITY_GRID: [(usize, usize, usize); 4] = [(2, 1, 1), (2, 1, 2), (2, 2, 2), (3, 1, 1)];

fn eta_equals_formation() -> Outcome {
    let solver = SolverLimits::default();
    let oracle = SearchLimits::default();
    let mut n = 0;
    for (r, s, k) in EQUALITY_GRID {
        for m in k..=5 {
            let eta = eta_exact(r, s, k, m as u32, &solver)
                .map_err(|e| format!("eta({r},{s},{k},{m}): {e}"))?
                .value;
            let f = max_letters_formation(r, s + 1, k + 1, m + 1, &oracle);
            ensure(f.is_proven(), || format!("F({r},{},{},{}) not proven", s + 1, k + 1, m + 1))?;
            ensure(eta.finite().is_some() && f.value.finite() == eta.finite(), || {
                format!("eta({r},{s},{k},{m}) = {eta} but F({r},{},{},{}) = {}", s + 1, k + 1, m + 1, f.value)
            })?;
            n += 1;
        }
    }
    Ok(format!("{n} instances"))
}

fn random_collection(rng: &mut ChaCha8Rng) -> LabeledChainCollection {
    let m = rng.gen_range(1..=8u32);
    let k = rng.gen_range(1..=(m as usize).min(4));
    let all = enumerate_chains(m, k);
    let count = rng.gen_range(0..=6);
    let mut labels: Vec<u32> = Vec::new();
    while labels.len() < count {
        let l = rng.gen_range(0..50);
        if !labels.contains(&l) {
            labels.push(l);
        }
    }
    let entries = labels
        .into_iter()
        .map(|l| (l, all[rng.gen_range(0..all.len())].clone()))
        .collect();
    LabeledChainCollection::new(m, k, entries).expect("valid collection")
}

fn round_trips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for i in 0..1000 {
        let coll = random_collection(&mut rng);
        let seq = chains_to_seq(&coll);
        let (m, k) = (coll.domain(), coll.order());
        ensure(seq.block_count() == m as usize + 1, || {
            format!("case {i}: {} blocks for m={m}", seq.block_count())
        })?;
        ensure(occurrence_profile(&seq).all_exactly(k + 1), || {
            format!("case {i}: {seq} has a letter not occurring {} times", k + 1)
        })?;
        let back = seq_to_chains(&seq, k).map_err(|e| format!("case {i}: {e}"))?;
        ensure(back == coll, || format!("case {i}: {seq} does not map back"))?;
    }
    Ok("1000 collections".into())
}

fn g_suite() -> Outcome {
    let started = Instant::now();
    let mut cases: Vec<(usize, usize)> = (1..=16).map(|m| (1, m)).collect();
    cases.extend([(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (4, 1), (4, 2), (5, 2)]);
    let mut longest = 0;
    for &(d, m) in &cases {
        let g = build_g(d, m).map_err(|e| format!("G_{d}({m}): {e}"))?;
        let report = verify_annotated(&g, d, m);
        ensure(report.passed(), || format!("G_{d}({m}):\n{report}"))?;
        longest = longest.max(g.seq.len());
    }
    let took = started.elapsed();
    ensure(took < Duration::from_secs(120), || format!("took {took:?}"))?;
    Ok(format!("{} instances, longest {longest}, in {took:.2?}", cases.len()))
}

fn recurrence_ratios() -> Outcome {
    let table = recurrences(5, 6, 1_000_000);
    let bad = ratio_violations(&table);
    ensure(bad.is_empty(), || format!("ratio violations at {bad:?}"))?;
    for m in 1..=4 {
        let s = &table.get(2, m).ok_or_else(|| format!("S(2,{m}) not computed"))?.special;
        ensure(s2_within_bounds(m, s), || format!("S(2,{m}) = {s} out of bounds"))?;
    }
    Ok(format!("{} cells computed", table.computed().count()))
}

fn hierarchy_bounds() -> Outcome {
    let table = recurrences(6, 3, 1_000_000);
    let checks = check_s_bounds(&table);
    let required = [(3, 1), (3, 2), (3, 3), (4, 2), (5, 2), (6, 2)];
    for (d, m) in required {
        ensure(checks.iter().any(|c| c.d == d && c.m == m), || format!("S({d},{m}) not checked"))?;
    }
    if let Some(c) = checks.iter().find(|c| !c.holds) {
        return Err(c.to_string());
    }
    for n in 0..=20u64 {
        let v = ack(2, n, DEFAULT_BIT_BUDGET);
        ensure(v.exact() == Some(&(BigUint::from(1u32) << n)), || format!("A_2({n}) = {v}"))?;
    }
    for k in 1..=3u32 {
        for n in 1..=4u64 {
            let v = ack(k, n, DEFAULT_BIT_BUDGET);
            let x = v.exact().ok_or_else(|| format!("A_{k}({n}) saturated"))?;
            ensure(ack_geq(k, n, x), || format!("A_{k}({n}) >= itself fails"))?;
            let a = alpha(k, x);
            ensure(a == n, || format!("alpha_{k}(A_{k}({n})) = {a}"))?;
        }
    }
    Ok(format!("{} bound checks", checks.len()))
}

fn inequality_chain() -> Outcome {
    let solver = SolverLimits::default();
    let oracle = SearchLimits::default();
    let mut cases: Vec<(usize, usize)> = EQUALITY_GRID.iter().map(|&(_, s, k)| (s, k)).collect();
    cases.sort_unstable();
    cases.dedup();
    let mut n = 0;
    for (s, k) in cases {
        for m in k..=5 {
            let z = zeta_exact(s, k, m as u32, &solver).map_err(|e| e.to_string())?.value;
            let e = eta_exact(2, s, k, m as u32, &solver).map_err(|e| e.to_string())?.value;
            let a = max_letters_alt(s + 2, k + 1, m + 1, &oracle);
            let (Some(z), Some(e), Some(a)) = (z.finite(), e.finite(), a.proven_value()) else {
                continue;
            };
            ensure(a <= z, || format!("A({},{},{}) = {a} > zeta({s},{k},{m}) = {z}", s + 2, k + 1, m + 1))?;
            ensure(e <= z, || format!("eta(2,{s},{k},{m}) = {e} > zeta({s},{k},{m}) = {z}"))?;
            n += 1;
        }
    }
    ensure(n > 0, || "no instance was fully proven".into())?;
    Ok(format!("{n} instances"))
}

/// Every generator and solver, rendered to text.
fn snapshot(threads: usize) -> Result<String, String> {
    let solver = SolverLimits {
        threads,
        ..SolverLimits::default()
    };
    let oracle = SearchLimits::default();
    let mut out = String::new();
    for (s, m) in [(3, 7), (4, 8), (5, 9)] {
        out += &format_sequence(&build_xs(s, m).map_err(|e| e.to_string())?);
        out.push('\n');
    }
    for (d, m) in [(1, 4), (2, 3), (3, 2)] {
        out += &build_g(d, m).map_err(|e| e.to_string())?.to_string();
        out.push('\n');
    }
    out += &recurrences(4, 5, 100_000).to_csv();
    for (s, k, m) in [(2, 2, 6), (2, 3, 6), (3, 3, 7)] {
        out += &format!("{:?}\n", zeta_exact(s, k, m, &solver).map_err(|e| e.to_string())?);
    }
    for (r, s, k, m) in [(2, 1, 2, 5), (2, 2, 2, 5), (3, 1, 1, 4)] {
        out += &format!("{:?}\n", eta_exact(r, s, k, m, &solver).map_err(|e| e.to_string())?);
    }
    let a = max_letters_alt(4, 3, 5, &oracle);
    let f = max_letters_formation(2, 2, 3, 5, &oracle);
    for res in [&a, &f] {
        out += &format!("{} {:?} {:?}\n", res.value, res.status, witness(res).map(format_sequence));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        out += &format_sequence(&chains_to_seq(&random_collection(&mut rng)));
        out.push('\n');
    }
    Ok(out)
}

fn determinism() -> Outcome {
    let base = snapshot(1)?;
    for threads in [1, 2, 4, 2] {
        ensure(snapshot(threads)? == base, || format!("output differs with {threads} threads"))?;
    }
    Ok(format!("{} bytes identical over 5 runs", base.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("X_s letter counts and avoidance", xs_grid),
        ("oracle agrees with X_s", oracle_matches_xs),
        ("zeta closed form", zeta_closed_form),
        ("eta equals formation maximum", eta_equals_formation),
        ("chain round trips", round_trips),
        ("G_d structure", g_suite),
        ("recurrence ratios", recurrence_ratios),
        ("hierarchy bounds", hierarchy_bounds),
        ("inequality chain", inequality_chain),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
