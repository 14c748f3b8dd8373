//! Browser bindings. Every export takes plain numbers or strings and
//! returns a JSON document: the result, or `{"error": "..."}`.

use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

use matlen::bounds::{analyze, general_bound, AnalysisOptions};
use matlen::exact_linalg::{FieldSpec, SquareMatrix};
use matlen::pbw::{check_pbw_with_cap, default_up_to, PbwVerdict};
use matlen::span_engine::{filtration, GeneratorSet};
use matlen::witnesses::{is_lie_closed, random_set, sl2_irrep_in, QuantumPlaneSpec};
use matlen::words::verify_census_with_cap;

/// Keeps browser calls interactive.
const MAX_N: usize = 8;
const PBW_CAP: u128 = 1 << 16;
const CENSUS_CAP: u128 = 1 << 22;

fn respond<T: Serialize>(r: Result<T, String>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v).unwrap_or_else(|e| json!({ "error": e.to_string() }).to_string()),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn rows(m: &SquareMatrix) -> Vec<Vec<String>> {
    (0..m.n())
        .map(|i| (0..m.n()).map(|j| m.get(i, j).to_string()).collect())
        .collect()
}

fn check_n(n: usize) -> Result<(), String> {
    if (2..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(format!("n must be between 2 and {MAX_N}"))
    }
}

#[derive(Serialize)]
struct Summary {
    n: usize,
    t: usize,
    field: String,
    generators: Vec<Vec<Vec<String>>>,
    ranks: Vec<usize>,
    c: usize,
    r_star: usize,
    full_algebra: bool,
    bound_2n_minus_2: usize,
    bound_2n_minus_3: usize,
    general_bound: usize,
    ordered_rewriting: &'static str,
    commutator_closed: bool,
    consistent: bool,
}

fn summarize(g: &GeneratorSet) -> Result<Summary, String> {
    let f = filtration(g);
    let n = g.n();
    let pbw = check_pbw_with_cap(g, default_up_to(g), &f, PBW_CAP).map_err(|e| e.to_string())?;
    let pbw_holds = match pbw.verdict {
        PbwVerdict::Holds => Some(true),
        PbwVerdict::Fails => Some(false),
        PbwVerdict::Truncated => None,
    };
    let lie = is_lie_closed(g).map_err(|e| e.to_string())?;
    let report = analyze(
        &f,
        AnalysisOptions {
            pbw_holds,
            claim_proper_subalgebra: None,
            lie_closed: Some(lie),
        },
    )
    .map_err(|e| e.to_string())?;
    Ok(Summary {
        n,
        t: g.t(),
        field: g.field().to_string(),
        generators: g.mats().iter().map(rows).collect(),
        ranks: f.ranks().to_vec(),
        c: f.length(),
        r_star: f.r_star(),
        full_algebra: f.generates_full_algebra(),
        bound_2n_minus_2: 2 * n - 2,
        bound_2n_minus_3: 2 * n - 3,
        general_bound: general_bound(n),
        ordered_rewriting: match pbw.verdict {
            PbwVerdict::Holds => "holds",
            PbwVerdict::Fails => "fails",
            PbwVerdict::Truncated => "undecided",
        },
        commutator_closed: lie,
        consistent: report.consistent,
    })
}

/// Quantum plane pair over `F_p`; `p = 0` picks the default prime.
#[wasm_bindgen]
pub fn quantum_plane(n: usize, p: u64) -> String {
    respond((|| {
        check_n(n)?;
        let spec = QuantumPlaneSpec::new(n, (p != 0).then_some(p)).map_err(|e| e.to_string())?;
        let g = spec.generators().map_err(|e| e.to_string())?;
        let summary = summarize(&g)?;
        Ok(json!({ "p": spec.p, "q": spec.q, "summary": summary }))
    })())
}

/// `family` is `"random"` or `"sl2"`. `p = 0` means the rationals.
#[wasm_bindgen]
pub fn family(family: &str, n: usize, t: usize, seed: u64, p: u64) -> String {
    respond((|| {
        check_n(n)?;
        let field = if p == 0 {
            FieldSpec::rational()
        } else {
            FieldSpec::prime(p).map_err(|e| e.to_string())?
        };
        let g = match family {
            "random" => {
                if !(1..=4).contains(&t) {
                    return Err("t must be between 1 and 4".into());
                }
                random_set(n, t, field, seed)
            }
            "sl2" => sl2_irrep_in(field, n),
            other => return Err(format!("unknown family {other:?}")),
        }
        .map_err(|e| e.to_string())?;
        summarize(&g)
    })())
}

/// Distinct-subword census of ordered words of length `2n-1`.
#[wasm_bindgen]
pub fn census(n: usize, t: usize) -> String {
    respond(verify_census_with_cap(n, t, CENSUS_CAP).map_err(|e| e.to_string()))
}
