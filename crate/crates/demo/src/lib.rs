//! Browser bindings. Each export takes and returns JSON text so the page
//! can show documents verbatim.

use qpencil::algebra::Fq;
use qpencil::gen::{generate, parse_blocks, Plant};
use qpencil::io::{emit_descriptor, emit_pencil, emit_solution, parse_pencil, Solution};
use qpencil::ip2s::ip2s_solve;
use qpencil::regular::{canonicalize, ip1s_solve};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn doc(text: String) -> Value {
    serde_json::from_str(&text).expect("library emits valid JSON")
}

/// `{"A": pencil, "B": pencil?, "secret": solution?}`.
pub fn generate_doc(q: u64, n: usize, seed: u64, blocks: &str, plant: &str) -> Result<String, String> {
    let f = Fq::with_order(q).map_err(|e| e.to_string())?;
    let blocks = if blocks.trim().is_empty() { Vec::new() } else { parse_blocks(&f, blocks).map_err(|e| e.to_string())? };
    let plant = match plant {
        "ip1s" => Plant::Ip1s,
        "ip2s" => Plant::Ip2s,
        "" | "none" => Plant::None,
        other => return Err(format!("unknown plant '{other}'")),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = generate(&f, n, &blocks, plant, &mut rng).map_err(|e| e.to_string())?;
    let mut out = json!({ "A": doc(emit_pencil(&inst.a)) });
    if let (Some(b), Some(s)) = (&inst.b, &inst.s) {
        out["B"] = doc(emit_pencil(b));
        out["secret"] = doc(emit_solution(&f, &Solution { s: s.matrix().clone(), gamma: inst.gamma.clone() }));
    }
    Ok(out.to_string())
}

pub fn canonical_doc(pencil: &str) -> Result<String, String> {
    let p = parse_pencil(pencil).map_err(|e| e.to_string())?;
    let d = canonicalize(&p).map_err(|e| e.to_string())?;
    Ok(emit_descriptor(p.field(), &d))
}

/// Solution document, or `null` when the pencils are not equivalent.
pub fn solve_doc(a: &str, b: &str, projective: bool) -> Result<String, String> {
    let a = parse_pencil(a).map_err(|e| e.to_string())?;
    let b = parse_pencil(b).map_err(|e| e.to_string())?;
    let sol = if projective {
        ip2s_solve(&a, &b).map_err(|e| e.to_string())?.map(|(s, g)| Solution { s: s.matrix().clone(), gamma: Some(g) })
    } else {
        ip1s_solve(&a, &b).map_err(|e| e.to_string())?.map(|s| Solution { s: s.matrix().clone(), gamma: None })
    };
    Ok(match sol {
        Some(s) => emit_solution(a.field(), &s),
        None => "null".into(),
    })
}

#[wasm_bindgen]
pub fn generate_instance(q: u32, n: u32, seed: u32, blocks: &str, plant: &str) -> Result<String, JsError> {
    generate_doc(q.into(), n as usize, seed.into(), blocks, plant).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn canonical_form(pencil: &str) -> Result<String, JsError> {
    canonical_doc(pencil).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn solve(a: &str, b: &str, projective: bool) -> Result<String, JsError> {
    solve_doc(a, b, projective).map_err(|e| JsError::new(&e))
}
