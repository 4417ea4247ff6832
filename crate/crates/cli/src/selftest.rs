//! The acceptance checks on small grids. With a directory, the generated
//! sequences are written there on first use and later runs verify the stored
//! copies, so an edited file shows up as a failing check.

use std::path::Path;

use num_bigint::BigUint;

use ds_core::ackermann::{ack, alpha, check_s_bounds};
use ds_core::chains::{enumerate_chains, eta_exact, zeta_exact, SolverLimits};
use ds_core::constructions::{
    build_g, build_xs, ratio_violations, recurrences, s2_within_bounds, verify_annotated,
    AnnotatedSequence,
};
use ds_core::oracle::{max_letters_alt, max_letters_formation, SearchLimits};
use ds_core::seq::{avoids_alternation, occurrence_profile, Sequence};
use ds_core::text::parse_annotated;
use ds_core::transforms::{chains_to_seq, seq_to_chains, LabeledChainCollection};

type Outcome = Result<String, String>;

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

/// The generated object, or its stored copy when a directory is given.
fn stored(dir: Option<&Path>, name: &str, fresh: &AnnotatedSequence) -> Result<AnnotatedSequence, String> {
    let Some(dir) = dir else {
        return Ok(fresh.clone());
    };
    let path = dir.join(name);
    if !path.exists() {
        std::fs::write(&path, format!("{fresh}\n")).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let (seq, special) = parse_annotated(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let back = AnnotatedSequence::new(seq, special).map_err(|e| format!("{}: {e}", path.display()))?;
    ensure(back == *fresh, || format!("{} differs from the generator", path.display()))?;
    Ok(back)
}

fn xs_grid(dir: Option<&Path>) -> Outcome {
    let mut n = 0;
    for s in 2..=5usize {
        for m in s + 1..=s + 4 {
            let fresh = build_xs(s, m).map_err(|e| e.to_string())?;
            let flags = vec![false; fresh.block_count()];
            let plain = AnnotatedSequence::new(fresh, flags).map_err(|e| e.to_string())?;
            let x = stored(dir, &format!("xs_{s}_{m}.seq"), &plain)?.seq;
            let want = binom(m - s.div_ceil(2), s / 2);
            ensure(x.letter_count() as u64 == want, || format!("X_{s}({m}) has {} letters", x.letter_count()))?;
            ensure(x.block_count() == m, || format!("X_{s}({m}) has {} blocks", x.block_count()))?;
            ensure(occurrence_profile(&x).all_exactly(s), || format!("X_{s}({m}) occurrence counts"))?;
            ensure(avoids_alternation(&x, s + 1), || format!("X_{s}({m}) alternation"))?;
            n += 1;
        }
    }
    Ok(format!("{n} instances"))
}

fn oracle_matches_xs() -> Outcome {
    let limits = SearchLimits::default();
    for (s, m) in [(2, 3), (2, 4), (3, 4)] {
        let got = max_letters_alt(s + 1, s, m, &limits).proven_value();
        let want = build_xs(s, m).map_err(|e| e.to_string())?.letter_count() as u64;
        ensure(got == Some(want), || format!("A({},{s},{m}) = {got:?}, expected {want}", s + 1))?;
    }
    Ok("3 instances".into())
}

fn zeta_closed_form(limits: &SolverLimits) -> Outcome {
    for s in 1..=3usize {
        for m in s..=7 {
            let got = zeta_exact(s, s, m as u32, limits).map_err(|e| e.to_string())?.value;
            let want = binom(m - s / 2, s.div_ceil(2));
            ensure(got.finite() == Some(want), || format!("zeta({s},{s},{m}) = {got}, expected {want}"))?;
        }
    }
    Ok("s <= 3, m <= 7".into())
}

fn eta_equals_formation(limits: &SolverLimits) -> Outcome {
    let oracle = SearchLimits::default();
    for (r, s, k) in [(2, 1, 1), (2, 1, 2), (2, 2, 2), (3, 1, 1)] {
        for m in k..=4 {
            let eta = eta_exact(r, s, k, m as u32, limits).map_err(|e| e.to_string())?.value;
            let f = max_letters_formation(r, s + 1, k + 1, m + 1, &oracle);
            ensure(f.is_proven() && f.value.finite().is_some() && f.value.finite() == eta.finite(), || {
                format!("eta({r},{s},{k},{m}) = {eta}, F = {}", f.value)
            })?;
        }
    }
    Ok("m <= 4".into())
}

/// Every collection of up to two chains on small domains.
fn round_trips() -> Outcome {
    let mut n = 0;
    for m in 1..=4u32 {
        for k in 1..=(m as usize).min(3) {
            let all = enumerate_chains(m, k);
            let mut cases = vec![vec![]];
            cases.extend(all.iter().map(|c| vec![c.clone()]));
            for (i, a) in all.iter().enumerate() {
                for b in &all[i..] {
                    cases.push(vec![a.clone(), b.clone()]);
                }
            }
            for chains in cases {
                let entries = chains.into_iter().enumerate().map(|(i, c)| (i as u32 * 3, c)).collect();
                let coll = LabeledChainCollection::new(m, k, entries).map_err(|e| e.to_string())?;
                let seq = chains_to_seq(&coll);
                ensure(seq.block_count() == m as usize + 1, || format!("{seq}: block count"))?;
                ensure(occurrence_profile(&seq).all_exactly(k + 1), || format!("{seq}: occurrences"))?;
                let back = seq_to_chains(&seq, k).map_err(|e| e.to_string())?;
                ensure(back == coll, || format!("{seq} does not map back"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} collections"))
}

fn g_suite(dir: Option<&Path>) -> Outcome {
    let mut cases: Vec<(usize, usize)> = (1..=8).map(|m| (1, m)).collect();
    cases.extend([(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (4, 1)]);
    for &(d, m) in &cases {
        let fresh = build_g(d, m).map_err(|e| e.to_string())?;
        let g = stored(dir, &format!("g_{d}_{m}.seq"), &fresh)?;
        let report = verify_annotated(&g, d, m);
        ensure(report.passed(), || format!("G_{d}({m}):\n{report}"))?;
    }
    Ok(format!("{} instances", cases.len()))
}

fn recurrence_ratios() -> Outcome {
    let table = recurrences(4, 4, 100_000);
    let bad = ratio_violations(&table);
    ensure(bad.is_empty(), || format!("ratio violations at {bad:?}"))?;
    for m in 1..=3 {
        let s = &table.get(2, m).ok_or("S(2,m) missing")?.special;
        ensure(s2_within_bounds(m, s), || format!("S(2,{m}) = {s}"))?;
    }
    Ok(format!("{} cells", table.computed().count()))
}

fn hierarchy_bounds() -> Outcome {
    let checks = check_s_bounds(&recurrences(5, 2, 100_000));
    if let Some(c) = checks.iter().find(|c| !c.holds) {
        return Err(c.to_string());
    }
    for n in 0..=10u64 {
        ensure(ack(2, n, 64).exact() == Some(&(BigUint::from(1u32) << n)), || format!("A_2({n})"))?;
    }
    for k in 1..=3u32 {
        for n in 1..=3u64 {
            let x = ack(k, n, 1 << 20).exact().cloned().ok_or("saturated")?;
            ensure(alpha(k, &x) == n, || format!("alpha_{k}(A_{k}({n}))"))?;
        }
    }
    Ok(format!("{} bound checks", checks.len()))
}

fn inequality_chain(limits: &SolverLimits) -> Outcome {
    let oracle = SearchLimits::default();
    let mut n = 0;
    for (s, k) in [(1, 1), (1, 2), (2, 2)] {
        for m in k..=4 {
            let z = zeta_exact(s, k, m as u32, limits).map_err(|e| e.to_string())?.value.finite();
            let e = eta_exact(2, s, k, m as u32, limits).map_err(|e| e.to_string())?.value.finite();
            let a = max_letters_alt(s + 2, k + 1, m + 1, &oracle).proven_value();
            if let (Some(z), Some(e), Some(a)) = (z, e, a) {
                ensure(a <= z && e <= z, || format!("s={s} k={k} m={m}: A={a} eta={e} zeta={z}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} instances"))
}

fn snapshot(threads: usize) -> Result<String, String> {
    let limits = SolverLimits {
        threads,
        ..SolverLimits::default()
    };
    let mut out = String::new();
    let xs: Sequence = build_xs(4, 7).map_err(|e| e.to_string())?;
    out += &format!("{xs}\n{}\n", build_g(2, 2).map_err(|e| e.to_string())?);
    out += &recurrences(3, 3, 10_000).to_csv();
    out += &format!("{:?}\n", zeta_exact(2, 3, 6, &limits).map_err(|e| e.to_string())?);
    out += &format!("{:?}\n", eta_exact(2, 2, 2, 5, &limits).map_err(|e| e.to_string())?);
    Ok(out)
}

fn determinism() -> Outcome {
    let base = snapshot(1)?;
    for threads in [2, 1, 3] {
        ensure(snapshot(threads)? == base, || format!("output differs with {threads} threads"))?;
    }
    Ok("identical over 4 runs".into())
}

/// Prints one line per check; true when all pass.
pub fn run(dir: Option<&Path>, threads: usize) -> bool {
    if let Some(d) = dir {
        if let Err(e) = std::fs::create_dir_all(d) {
            println!("FAIL cannot use {}: {e}", d.display());
            return false;
        }
    }
    let limits = SolverLimits {
        threads,
        ..SolverLimits::default()
    };
    let results: Vec<(&str, Outcome)> = vec![
        ("X_s letter counts and avoidance", xs_grid(dir)),
        ("oracle agrees with X_s", oracle_matches_xs()),
        ("zeta closed form", zeta_closed_form(&limits)),
        ("eta equals formation maximum", eta_equals_formation(&limits)),
        ("chain round trips", round_trips()),
        ("G_d structure", g_suite(dir)),
        ("recurrence ratios", recurrence_ratios()),
        ("hierarchy bounds", hierarchy_bounds()),
        ("inequality chain", inequality_chain(&limits)),
        ("determinism", determinism()),
    ];
    let mut ok = true;
    for (i, (name, res)) in results.iter().enumerate() {
        match res {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                ok = false;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    ok
}
