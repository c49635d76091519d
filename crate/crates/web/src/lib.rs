//! Browser bindings: a lifting profile, a multiplier study and the index
//! predicate. Every export returns a JSON string.

use serde_json::{json, Value};
use torus_bessel::conditions::strichartz_case_numbers;
use torus_bessel::grid::default_points;
use torus_bessel::multiplier::ReportOptions;
use torus_bessel::{
    apply_j, equivalence_report_with, gen_distribution, hs_norm, synthesize, DistributionKind,
    Lattice, MultiplierProblem, Number, SpaceIndex,
};
use wasm_bindgen::prelude::*;

const PROFILE_POINTS: usize = 256;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn number(text: &str) -> Result<Number, String> {
    text.parse().map_err(err)
}

/// Samples of a real generated field `u` on `[-π, π)` before and after
/// applying `J_s`, with their `H^0_2` norms.
pub fn lift_profile_json(
    kind: &str,
    alpha: f64,
    seed: u64,
    radius: usize,
    s: f64,
) -> Result<String, String> {
    let kind = DistributionKind::parse(kind, alpha).map_err(err)?;
    let lattice = Lattice::new(1, radius).map_err(err)?;
    let u = gen_distribution(&lattice, kind, seed, true).map_err(err)?;
    let lifted = apply_j(s, &u);
    let points = PROFILE_POINTS.max(default_points(radius));
    let before = synthesize(&u, points).map_err(err)?;
    let after = synthesize(&lifted, points).map_err(err)?;
    let re =
        |g: &torus_bessel::GridFunction| g.samples().iter().map(|z| z.re).collect::<Vec<f64>>();
    let x: Vec<f64> = (0..points).map(|j| before.node(j)[0]).collect();
    let l2 = SpaceIndex::new(0.0, 2.0);
    Ok(json!({
        "x": x,
        "before": re(&before),
        "after": re(&after),
        "norm_before": hs_norm(&u, l2, points).map_err(err)?,
        "norm_after": hs_norm(&lifted, l2, points).map_err(err)?,
        "norm_hs": hs_norm(&u, SpaceIndex::new(s, 2.0), points).map_err(err)?,
    })
    .to_string())
}

/// Multiplier report for a generated `u` in dimension one at `radius`,
/// refined at `2·radius`.
#[allow(clippy::too_many_arguments)]
pub fn multiplier_study_json(
    kind: &str,
    alpha: f64,
    seed: u64,
    radius: usize,
    s: &str,
    t: &str,
    p: &str,
    q: &str,
) -> Result<String, String> {
    let (s, t, p, q) = (number(s)?, number(t)?, number(p)?, number(q)?);
    let kind = DistributionKind::parse(kind, alpha).map_err(err)?;
    let lattice = Lattice::new(1, radius).map_err(err)?;
    let u = gen_distribution(&lattice, kind, seed, false).map_err(err)?;
    let (verdict, _) = strichartz_case_numbers(s, t, p, q, 1).map_err(err)?;
    let prob =
        MultiplierProblem::new(u, s.to_f64(), p.to_f64(), t.to_f64(), q.to_f64()).map_err(err)?;
    let report = equivalence_report_with(&prob, &[2 * radius], &ReportOptions::default(), verdict)
        .map_err(err)?;
    serde_json::to_string(&report).map_err(err)
}

/// Strichartz-type hypotheses on `(s, t, p, q)` in dimension `n`; accepts
/// fractions such as `4/3`.
pub fn strichartz_verdict_json(
    s: &str,
    t: &str,
    p: &str,
    q: &str,
    n: usize,
) -> Result<String, String> {
    let (verdict, exact) =
        strichartz_case_numbers(number(s)?, number(t)?, number(p)?, number(q)?, n).map_err(err)?;
    let mut value: Value = serde_json::to_value(&verdict).map_err(err)?;
    value["exact"] = Value::Bool(exact);
    Ok(value.to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn lift_profile(
    kind: &str,
    alpha: f64,
    seed: u32,
    radius: usize,
    s: f64,
) -> Result<String, JsValue> {
    js(lift_profile_json(kind, alpha, seed.into(), radius, s))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn multiplier_study(
    kind: &str,
    alpha: f64,
    seed: u32,
    radius: usize,
    s: &str,
    t: &str,
    p: &str,
    q: &str,
) -> Result<String, JsValue> {
    js(multiplier_study_json(
        kind,
        alpha,
        seed.into(),
        radius,
        s,
        t,
        p,
        q,
    ))
}

#[wasm_bindgen]
pub fn strichartz_verdict(s: &str, t: &str, p: &str, q: &str, n: usize) -> Result<String, JsValue> {
    js(strichartz_verdict_json(s, t, p, q, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Value {
        serde_json::from_str(text).unwrap()
    }

    #[test]
    fn lift_profile_preserves_lifted_norm() {
        let v = parse(&lift_profile_json("power-decay", 2.0, 3, 12, 1.5).unwrap());
        assert_eq!(v["x"].as_array().unwrap().len(), PROFILE_POINTS);
        let (after, hs) = (
            v["norm_after"].as_f64().unwrap(),
            v["norm_hs"].as_f64().unwrap(),
        );
        assert!((after - hs).abs() <= 1e-12 * hs);
    }

    #[test]
    fn multiplier_study_ratio_is_bounded() {
        let v =
            parse(&multiplier_study_json("power-decay", 3.0, 0, 8, "1", "1", "2", "2").unwrap());
        let ratio = v["ratio"].as_f64().unwrap();
        assert!(ratio > 0.05 && ratio < 20.0);
        assert_eq!(v["refinement"][0]["radius"], 16);
    }

    #[test]
    fn multiplier_study_refuses_failed_hypotheses() {
        assert!(multiplier_study_json("dirac", 0.0, 0, 4, "1/2", "0", "2", "2").is_err());
    }

    #[test]
    fn verdict_is_exact_for_fractions() {
        let v = parse(&strichartz_verdict_json("2", "0", "4", "2", 3).unwrap());
        assert_eq!(v["holds"], true);
        assert_eq!(v["case_tag"], "strich-2");
        assert_eq!(v["exact"], true);
        let v = parse(&strichartz_verdict_json("3/4", "0", "4", "2", 3).unwrap());
        assert_eq!(v["holds"], false);
    }

    #[test]
    fn bad_number_is_an_error() {
        assert!(strichartz_verdict_json("x", "0", "2", "2", 1).is_err());
    }
}
