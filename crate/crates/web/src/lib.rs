//! Browser bindings for the demo page in `www/`.
//!
//! Each exported function takes plain strings and numbers and returns a JSON
//! string, so the page needs no generated TypeScript types. The `*_json`
//! functions hold the logic and are tested natively.

use gmrep_core::boundary::sample_densities;
use gmrep_core::means::check_off_cut;
use gmrep_core::{
    am_gm_gap, arithmetic_mean, evaluate, geometric_mean, segments, Complex64, QuadratureSpec,
    Sequence,
};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_GRID_STEPS: usize = 200;
const MAX_PER_SEGMENT: usize = 2000;

fn parse_sequence(text: &str) -> Result<Sequence, String> {
    text.parse::<Sequence>().map_err(|e| e.to_string())
}

/// Segment metadata and sampled densities for plotting.
pub fn density_curve_json(a: &str, per_segment: usize) -> Result<String, String> {
    let a = parse_sequence(a)?;
    let per_segment = per_segment.clamp(1, MAX_PER_SEGMENT);
    let segs: Vec<Value> = segments(&a)
        .iter()
        .map(|s| json!({ "index": s.index, "lo": s.lo, "hi": s.hi, "weight": s.weight }))
        .collect();
    let samples: Vec<Value> = sample_densities(&a, per_segment)
        .iter()
        .map(|s| json!({ "t": s.t, "density": s.density, "weighted": s.weighted_density, "segment": s.segment_index }))
        .collect();
    Ok(json!({ "sequence": a.values(), "segments": segs, "samples": samples }).to_string())
}

/// `log10 |repr - direct|` over a grid; `null` on the cut, `-17` for exact
/// agreement.
pub fn error_grid_json(
    a: &str,
    re_lo: f64,
    re_hi: f64,
    im_lo: f64,
    im_hi: f64,
    steps: usize,
) -> Result<String, String> {
    let a = parse_sequence(a)?;
    if !(re_lo < re_hi && im_lo < im_hi) {
        return Err("grid ranges need lo < hi".into());
    }
    let steps = steps.clamp(2, MAX_GRID_STEPS);
    let axis = |lo: f64, hi: f64| -> Vec<f64> {
        (0..steps)
            .map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64)
            .collect()
    };
    let (re, im) = (axis(re_lo, re_hi), axis(im_lo, im_hi));
    let quad = QuadratureSpec::default();
    let mut rows = Vec::with_capacity(steps);
    let mut worst = 0.0f64;
    for &y in &im {
        let mut row = Vec::with_capacity(steps);
        for &x in &re {
            let z = Complex64::new(x, y);
            if check_off_cut(z, -a.min()).is_err() {
                row.push(Value::Null);
                continue;
            }
            let err = evaluate(&a, z, &quad).map_err(|e| e.to_string())?.abs_error;
            worst = worst.max(err);
            row.push(json!(if err > 0.0 { err.log10() } else { -17.0 }));
        }
        rows.push(Value::Array(row));
    }
    Ok(json!({ "re": re, "im": im, "log10_error": rows, "max_error": worst }).to_string())
}

/// Direct and representation values of `A_n - G_n`.
pub fn am_gm_json(a: &str) -> Result<String, String> {
    let a = parse_sequence(a)?;
    let (am, gm) = (arithmetic_mean(&a), geometric_mean(&a));
    let repr = am_gm_gap(&a, &QuadratureSpec::default()).map_err(|e| e.to_string())?;
    Ok(json!({
        "sequence": a.values(),
        "A": am,
        "G": gm,
        "gap_direct": am - gm,
        "gap_repr": repr,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn density_curve(a: &str, per_segment: usize) -> Result<String, JsValue> {
    density_curve_json(a, per_segment).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn error_grid(
    a: &str,
    re_lo: f64,
    re_hi: f64,
    im_lo: f64,
    im_hi: f64,
    steps: usize,
) -> Result<String, JsValue> {
    error_grid_json(a, re_lo, re_hi, im_lo, im_hi, steps).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn am_gm(a: &str) -> Result<String, JsValue> {
    am_gm_json(a).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn density_curve_shape() {
        let v = parse(&density_curve_json("4,1,2", 5).unwrap());
        assert_eq!(v["sequence"], json!([1.0, 2.0, 4.0]));
        assert_eq!(v["segments"].as_array().unwrap().len(), 2);
        assert_eq!(v["samples"].as_array().unwrap().len(), 10);
        assert!(v["samples"]
            .as_array()
            .unwrap()
            .iter()
            .all(|s| s["density"].as_f64().unwrap() > 0.0));
        let v = parse(&density_curve_json("3,3", 5).unwrap());
        assert!(v["samples"].as_array().unwrap().is_empty());
        assert!(density_curve_json("1,x", 5).is_err());
    }

    #[test]
    fn error_grid_marks_cut_and_stays_small() {
        let v = parse(&error_grid_json("1,2,3", -3.0, 1.0, -1.0, 1.0, 5).unwrap());
        let rows = v["log10_error"].as_array().unwrap();
        assert_eq!(rows.len(), 5);
        let nulls = rows
            .iter()
            .flat_map(|r| r.as_array().unwrap())
            .filter(|c| c.is_null())
            .count();
        assert_eq!(nulls, 3);
        assert!(v["max_error"].as_f64().unwrap() <= 1e-8);
        assert!(error_grid_json("1,2", 1.0, 0.0, -1.0, 1.0, 5).is_err());
    }

    #[test]
    fn am_gm_matches_closed_form() {
        let v = parse(&am_gm_json("1,2").unwrap());
        let direct = v["gap_direct"].as_f64().unwrap();
        assert!((direct - (1.5 - 2f64.sqrt())).abs() < 1e-15);
        assert!((v["gap_repr"].as_f64().unwrap() - direct).abs() < 1e-9);
    }
}
