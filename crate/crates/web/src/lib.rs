//! Browser bindings: generation curves, waiting-time histograms and the
//! Euler-product constants, each returned as a JSON string.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use genwait::cli::parse_spec;
use genwait::lattice::SubgroupLattice;
use genwait::numseries;
use genwait::probgen::{self, ratio_to_f64};
use genwait::structure;

/// Largest group the page will put through the subgroup lattice.
pub const EXACT_CAP: usize = 720;
pub const MAX_TRIALS: u64 = 1_000_000;
pub const MAX_PRIME_BOUND: u64 = 10_000_000;

fn text(v: Value) -> String {
    v.to_string()
}

/// `P_G(k)` for `k = 0..=k_max` and the exact `e(G)`.
pub fn generation_curve_json(spec: &str, k_max: u32) -> Result<String, String> {
    let spec = parse_spec(spec).map_err(|e| format!("group spec {e}"))?;
    let group = spec.build().map_err(|e| e.to_string())?;
    if group.is_trivial() {
        return Err("the trivial group needs no generators".into());
    }
    let lattice = SubgroupLattice::enumerate(&group, EXACT_CAP).map_err(|e| e.to_string())?;
    let moebius = lattice.moebius();
    let poly = probgen::hall_polynomial(&lattice, &moebius);
    let e = probgen::expected_exact(&lattice, &moebius).map_err(|e| e.to_string())?;
    let profile = structure::profile(&lattice).map_err(|e| e.to_string())?;
    let points: Vec<Value> = (0..=k_max.min(64))
        .map(|k| {
            let p = poly.eval(k);
            json!({ "k": k, "p": ratio_to_f64(&p), "exact": p.to_string() })
        })
        .collect();
    Ok(text(json!({
        "spec": spec.to_string(),
        "order": group.order().to_string(),
        "subgroups": lattice.len(),
        "d": profile.d,
        "e": e.value.to_string(),
        "e_decimal": e.decimal(9),
        "points": points,
    })))
}

/// Monte Carlo draws of `τ_G` on a single thread.
pub fn tau_histogram_json(spec: &str, trials: u64, seed: u64) -> Result<String, String> {
    let spec = parse_spec(spec).map_err(|e| format!("group spec {e}"))?;
    let group = spec.build().map_err(|e| e.to_string())?;
    if trials == 0 || trials > MAX_TRIALS {
        return Err(format!("trials must be between 1 and {MAX_TRIALS}"));
    }
    let cap = 10 * (spec.degree() as u64 / 2 + 3);
    let est = probgen::montecarlo_e(&group, trials, seed, 1, cap).map_err(|e| e.to_string())?;
    let bins: Vec<Value> = est
        .histogram
        .iter()
        .map(|(tau, count)| json!({ "tau": tau, "count": count }))
        .collect();
    Ok(text(json!({
        "spec": spec.to_string(),
        "order": group.order().to_string(),
        "mean": est.mean,
        "stderr": est.stderr,
        "trials": est.trials,
        "seed": est.seed,
        "overflow": est.overflow,
        "bins": bins,
    })))
}

/// `η`, the abelian limit for rank `d`, the `d → ∞` excess, and the
/// dihedral-type products at `k = d + 1, d + 2` along powers of ten.
pub fn constants_json(prime_bound: u64, d: u32) -> Result<String, String> {
    if !(10..=MAX_PRIME_BOUND).contains(&prime_bound) {
        return Err(format!("prime bound must be between 10 and {MAX_PRIME_BOUND}"));
    }
    if !(1..=8).contains(&d) {
        return Err("d must be between 1 and 8".into());
    }
    let eta = numseries::eta(prime_bound).map_err(|e| e.to_string())?;
    let sigma = numseries::sigma_limit(d, prime_bound, 60).map_err(|e| e.to_string())?;
    let sigma_inf = numseries::sigma_infinite(prime_bound, 80).map_err(|e| e.to_string())?;
    let mut n = 10;
    let mut gd = Vec::new();
    while n <= prime_bound {
        gd.push(json!({
            "n": n,
            "at_d_plus_1": numseries::gd_p(d, d + 1, n),
            "at_d_plus_2": numseries::gd_p(d, d + 2, n),
        }));
        n *= 10;
    }
    let iv = |i: numseries::Interval| json!({ "lower": i.lower, "upper": i.upper });
    Ok(text(json!({
        "prime_bound": prime_bound,
        "d": d,
        "eta": iv(eta),
        "abelian_limit": iv(sigma),
        "excess_d": iv(sigma.shift(-(d as f64))),
        "excess_infinite": iv(sigma_inf),
        "gd": gd,
    })))
}

#[wasm_bindgen]
pub fn generation_curve(spec: &str, k_max: u32) -> Result<String, JsValue> {
    generation_curve_json(spec, k_max).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn tau_histogram(spec: &str, trials: u32, seed: u32) -> Result<String, JsValue> {
    tau_histogram_json(spec, trials as u64, seed as u64).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn constants(prime_bound: u32, d: u32) -> Result<String, JsValue> {
    constants_json(prime_bound as u64, d).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn curve_for_s3() {
        let v = parse(&generation_curve_json("S3", 4).unwrap());
        assert_eq!(v["e"], "29/10");
        assert_eq!(v["points"][2]["exact"], "1/2");
        assert_eq!(v["points"].as_array().unwrap().len(), 5);
        assert!(generation_curve_json("S7", 3).is_err());
        assert!(generation_curve_json("C1", 3).is_err());
        assert!(generation_curve_json("X", 3).unwrap_err().contains("column 1"));
    }

    #[test]
    fn histogram_counts_add_up() {
        let v = parse(&tau_histogram_json("E(2,2)", 2000, 3).unwrap());
        let total: u64 = v["bins"]
            .as_array()
            .unwrap()
            .iter()
            .map(|b| b["count"].as_u64().unwrap())
            .sum();
        assert_eq!(total + v["overflow"].as_u64().unwrap(), 2000);
        assert_eq!(tau_histogram_json("E(2,2)", 2000, 3), tau_histogram_json("E(2,2)", 2000, 3));
        assert!(tau_histogram_json("S3", 0, 1).is_err());
    }

    #[test]
    fn constants_bracket() {
        let v = parse(&constants_json(100_000, 1).unwrap());
        let lo = v["eta"]["lower"].as_f64().unwrap();
        let hi = v["eta"]["upper"].as_f64().unwrap();
        assert!(lo < 2.875065 && 2.875065 < hi);
        let gd = v["gd"].as_array().unwrap();
        assert_eq!(gd.len(), 5);
        let first = gd[0]["at_d_plus_1"].as_f64().unwrap();
        let last = gd[4]["at_d_plus_1"].as_f64().unwrap();
        assert!(last < first);
        assert!(constants_json(5, 1).is_err());
        assert!(constants_json(1000, 0).is_err());
    }
}
