//! WebAssembly bindings for the demo page in `www/`. Every export returns a
//! JSON string; errors come back as `{"error": "..."}`.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use ds_core::chains::{eta_exact, zeta_exact, SolverLimits};
use ds_core::constructions::{build_g_with_budget, build_xs, verify_annotated, AnnotatedSequence};
use ds_core::seq::{max_alternation, occurrence_profile};
use ds_core::text::{format_chains, parse_annotated};
use ds_core::Sequence;

/// Anything longer would make the page sluggish.
const MAX_LENGTH: u64 = 50_000;

#[derive(Serialize)]
struct Check {
    name: String,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct SequenceView {
    text: String,
    blocks: Vec<Vec<u32>>,
    special: Vec<bool>,
    letters: usize,
    length: usize,
    max_alternation: usize,
    /// Smallest and largest occurrence count over the letters.
    occurrences: Option<(usize, usize)>,
    checks: Vec<Check>,
}

#[derive(Serialize)]
struct StabView {
    zeta: String,
    cover: Vec<String>,
    eta: String,
    packing: String,
}

fn view(seq: &Sequence, special: Vec<bool>, checks: Vec<Check>) -> SequenceView {
    let profile = occurrence_profile(seq);
    let counts: Vec<usize> = profile.letters().map(|x| profile.count(x)).collect();
    let text = AnnotatedSequence::new(seq.clone(), special.clone())
        .map(|a| a.to_string())
        .unwrap_or_else(|_| seq.to_string());
    SequenceView {
        text,
        blocks: seq.blocks().iter().map(|b| b.letters().to_vec()).collect(),
        special,
        letters: seq.letter_count(),
        length: seq.len(),
        max_alternation: max_alternation(seq),
        occurrences: counts.iter().min().zip(counts.iter().max()).map(|(a, b)| (*a, *b)),
        checks,
    }
}

fn to_json<T: Serialize>(r: Result<T, String>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v).expect("plain data serializes"),
        Err(e) => serde_json::json!({ "error": e }).to_string(),
    }
}

/// `X_s(m)` when `family` is `"xs"` (with `a = s`), `G_d(m)` when it is `"g"`
/// (with `a = d`), together with its structural checks.
pub fn generate_view(family: &str, a: usize, m: usize) -> Result<String, String> {
    let out = match family {
        "xs" => {
            let x = build_xs(a, m).map_err(|e| e.to_string())?;
            let profile = occurrence_profile(&x);
            let checks = vec![
                Check {
                    name: "occurrences".into(),
                    passed: profile.all_exactly(a),
                    detail: format!("every letter occurs {a} times"),
                },
                Check {
                    name: "alternation".into(),
                    passed: max_alternation(&x) <= a,
                    detail: format!("no alternation of length {}", a + 1),
                },
            ];
            let special = vec![false; x.block_count()];
            view(&x, special, checks)
        }
        "g" => {
            let g = build_g_with_budget(a, m, MAX_LENGTH).map_err(|e| e.to_string())?;
            let checks = verify_annotated(&g, a, m)
                .checks
                .into_iter()
                .map(|c| Check {
                    name: c.name.into(),
                    passed: c.passed,
                    detail: c.detail,
                })
                .collect();
            view(&g.seq, g.special, checks)
        }
        other => return Err(format!("unknown family `{other}`")),
    };
    Ok(to_json(Ok(out)))
}

/// Parses a sequence in the text format and reports its shape.
pub fn inspect_view(text: &str) -> Result<String, String> {
    let (seq, special) = parse_annotated(text).map_err(|e| e.to_string())?;
    if seq.len() > MAX_LENGTH as usize {
        return Err(format!("sequences longer than {MAX_LENGTH} are not shown"));
    }
    Ok(to_json(Ok(view(&seq, special, Vec::new()))))
}

/// `zeta(s, k, m)` with a minimum stabbing collection and `eta(r, s, k, m)`
/// with a maximum chain collection.
pub fn stab_view(r: usize, s: usize, k: usize, m: u32) -> Result<String, String> {
    if m > 12 {
        return Err("m is limited to 12 here".into());
    }
    let limits = SolverLimits {
        node_budget: 5_000_000,
        ..SolverLimits::default()
    };
    let z = zeta_exact(s, k, m, &limits).map_err(|e| e.to_string())?;
    let e = eta_exact(r, s, k, m, &limits).map_err(|e| e.to_string())?;
    Ok(to_json(Ok(StabView {
        zeta: z.value.to_string(),
        cover: z.cover.iter().map(|t| t.to_string()).collect(),
        eta: e.value.to_string(),
        packing: e.collection.as_ref().map(format_chains).unwrap_or_default(),
    })))
}

#[wasm_bindgen]
pub fn generate(family: &str, a: usize, m: usize) -> String {
    generate_view(family, a, m).unwrap_or_else(|e| to_json::<()>(Err(e)))
}

#[wasm_bindgen]
pub fn inspect(text: &str) -> String {
    inspect_view(text).unwrap_or_else(|e| to_json::<()>(Err(e)))
}

#[wasm_bindgen]
pub fn stab(r: usize, s: usize, k: usize, m: u32) -> String {
    stab_view(r, s, k, m).unwrap_or_else(|e| to_json::<()>(Err(e)))
}
