//! Report rendering: JSON with a fixed schema and a plain-text form.

use serde_json::{json, Map, Value};

use crate::coefficient::McorReport;
use crate::linalg::SymmetricMatrix;
use crate::sim::MonteCarloSummary;

/// Rounds to 12 significant digits; the JSON writer then emits the shortest form.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    // no negative zero in reports
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    json!(rounded)
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

pub fn matrix_json(m: &SymmetricMatrix) -> Value {
    Value::Array((0..m.dim()).map(|i| nums(m.row(i))).collect())
}

pub fn report_json(r: &McorReport) -> Value {
    json!({
        "d": r.d,
        "mcor": num(r.mcor),
        "eigenvalues": nums(&r.eigenvalues),
        "min_eigenvalue": num(r.min_eigenvalue),
        "sphericity": num(r.sphericity),
        "rescaled_sphericity": num(r.rescaled_sphericity),
        "sweeps_used": r.sweeps_used,
        "correlation_matrix": matrix_json(&r.correlation),
    })
}

pub fn summary_json(s: &MonteCarloSummary) -> Value {
    json!({
        "mcor_mean": num(s.mcor_mean),
        "mcor_sd": num(s.mcor_sd),
        "mcor_min": num(s.mcor_min),
        "mcor_max": num(s.mcor_max),
        "population_mcor": num(s.scenario.population_mcor()),
    })
}

/// Top-level document: `kind`, `inputs`, `result`, `warnings`.
pub fn envelope(kind: &str, inputs: Value, result: Value, warnings: &[String]) -> String {
    let mut doc = Map::new();
    doc.insert("kind".into(), json!(kind));
    doc.insert("inputs".into(), inputs);
    doc.insert("result".into(), result);
    doc.insert("warnings".into(), json!(warnings));
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("json values serialize");
    s.push('\n');
    s
}

fn fmt4(xs: &[f64]) -> String {
    xs.iter()
        .map(|v| format!("{v:.4}"))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn report_text(label: &str, r: &McorReport) -> String {
    let mut s = String::new();
    if !label.is_empty() {
        s.push_str(&format!("{label}\n"));
    }
    s.push_str(&format!("  variables:           {}\n", r.d));
    s.push_str(&format!(
        "  eigenvalues:         {}\n",
        fmt4(&r.eigenvalues)
    ));
    s.push_str(&format!("  mcor:                {:.4}\n", r.mcor));
    s.push_str(&format!("  sphericity:          {:.4}\n", r.sphericity));
    s.push_str(&format!(
        "  rescaled sphericity: {:.4}\n",
        r.rescaled_sphericity
    ));
    s
}

pub fn warnings_text(warnings: &[String]) -> String {
    warnings.iter().map(|w| format!("warning: {w}\n")).collect()
}

pub fn summary_text(s: &MonteCarloSummary) -> String {
    format!(
        "scenario: {} ({})\n  n = {}, replicates = {}, seed = {}\n  mcor mean: {:.4}\n  mcor sd:   {:.4}\n  mcor min:  {:.4}\n  mcor max:  {:.4}\n  population mcor: {:.4}\n",
        s.scenario,
        s.scenario.description(),
        s.n_obs,
        s.replicates,
        s.seed,
        s.mcor_mean,
        s.mcor_sd,
        s.mcor_min,
        s.mcor_max,
        s.scenario.population_mcor(),
    )
}
