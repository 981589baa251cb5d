//! Browser bindings for the demo page in `www/`.
//!
//! Each export returns a JSON string. The `*_json` functions hold the logic
//! and are plain Rust so they run under `cargo test`.

use std::sync::Arc;

use qdouble::doubles::Multiplicities;
use qdouble::group_core::{catalog as groups, Subgroup, Transversal};
use qdouble::quasihopf::{axiom_suite, catalog};
use qdouble::surgery::{proportional_residual, Surgery, SurgeryOp};
use qdouble::{Error, Result, TOL};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn find_all(g: &qdouble::group_core::FiniteGroup, list: &str) -> Result<Vec<usize>> {
    list.split(',')
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| g.find(l).ok_or_else(|| Error::Config(format!("no element labelled {l:?} in {}", g.name().unwrap_or("G")))))
        .collect()
}

pub fn catalog_json() -> String {
    json!({ "transversals": catalog::names(), "ops": SurgeryOp::ALL.map(|o| o.name()) }).to_string()
}

pub fn multiplicity_table_json(transversal: &str) -> Result<String> {
    let td = Arc::new(catalog::by_name(transversal)?);
    let t = Multiplicities::new(td)?.table()?;
    Ok(serde_json::to_string(&t).expect("table serializes"))
}

pub fn surgery_map_json(group: &str, op: &str) -> Result<String> {
    let g = Arc::new(groups::by_name(group).ok_or_else(|| Error::Config(format!("unknown group {group}")))?);
    if g.order() > 6 {
        return Err(Error::Budget(format!("|G| = {} is too large for the browser demo", g.order())));
    }
    let op = SurgeryOp::parse(op).ok_or_else(|| Error::Config(format!("unknown op {op}")))?;
    let s = Surgery::minimal(g.clone(), op)?;
    let (m, leak) = s.logical_map(|x| s.apply(x))?;
    let (scale, res) = proportional_residual(&m, &s.reference(None));
    let label = |code: &qdouble::surgery::PatchCode, i: usize| {
        code.labels_of(i).iter().map(|&h| g.label(h)).collect::<Vec<_>>().join("⊗")
    };
    let entries: Vec<Vec<f64>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| ((m[(i, j)] / scale).re * 1e9).round() / 1e9).collect())
        .collect();
    Ok(json!({
        "op": op.name(),
        "hopf_map": op.hopf_map(),
        "rows": (0..m.nrows()).map(|i| label(&s.target, i)).collect::<Vec<_>>(),
        "cols": (0..m.ncols()).map(|j| label(&s.source, j)).collect::<Vec<_>>(),
        "entries": entries,
        "residual": res,
        "leak": leak,
        "pass": res < TOL && leak < TOL,
    })
    .to_string())
}

/// Matched-pair data and every axiom suite for a user-chosen transversal.
pub fn verify_transversal_json(group: &str, subgroup_gens: &str, reps: &str) -> Result<String> {
    let g = Arc::new(groups::by_name(group).ok_or_else(|| Error::Config(format!("unknown group {group}")))?);
    if g.order() > 24 {
        return Err(Error::Budget(format!("|G| = {} is too large for the browser demo", g.order())));
    }
    let k = Subgroup::generated(g.clone(), &find_all(&g, subgroup_gens)?)?;
    let reps = find_all(&g, reps)?;
    let td = Arc::new(Transversal::new(g, k, &reps)?);
    let mut rep = td.verify_matched_pair();
    rep.extend(axiom_suite(td.clone()));
    Ok(json!({
        "regular": td.regular,
        "reps": (0..td.nr()).map(|r| td.r_label(r).to_string()).collect::<Vec<_>>(),
        "k": (0..td.nk()).map(|x| td.k_label(x).to_string()).collect::<Vec<_>>(),
        "pass": rep.all_pass(),
        "report": rep,
    })
    .to_string())
}

fn js(r: Result<String>) -> std::result::Result<String, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn catalog() -> String {
    catalog_json()
}

#[wasm_bindgen]
pub fn multiplicity_table(transversal: &str) -> std::result::Result<String, JsError> {
    js(multiplicity_table_json(transversal))
}

#[wasm_bindgen]
pub fn surgery_map(group: &str, op: &str) -> std::result::Result<String, JsError> {
    js(surgery_map_json(group, op))
}

#[wasm_bindgen]
pub fn verify_transversal(group: &str, subgroup_gens: &str, reps: &str) -> std::result::Result<String, JsError> {
    js(verify_transversal_json(group, subgroup_gens, reps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn table_for_standard_s3() {
        let v: Value = serde_json::from_str(&multiplicity_table_json("s3/standard").unwrap()).unwrap();
        assert_eq!(v["entries"][2], json!([0, 0, 0, 1, 1, 1, 1, 1]));
    }

    #[test]
    fn surgery_maps_pass() {
        for op in SurgeryOp::ALL {
            let v: Value = serde_json::from_str(&surgery_map_json("z3", op.name()).unwrap()).unwrap();
            assert_eq!(v["pass"], true, "{}", op.name());
        }
        assert!(matches!(surgery_map_json("s4", "antipode"), Err(Error::Budget(_))));
    }

    #[test]
    fn verifier_accepts_t3_and_rejects_non_transversal() {
        let v: Value = serde_json::from_str(&verify_transversal_json("s3", "u", "e,uv,v").unwrap()).unwrap();
        assert_eq!(v["pass"], true);
        assert_eq!(v["regular"], false);
        assert!(verify_transversal_json("s3", "u", "e,u,v").is_err());
    }
}
