//! Browser bindings. Each exported function takes the configuration as JSON
//! (same schema as the CLI's TOML, missing keys take defaults) and returns
//! JSON for plotting.

use serde::Serialize;
use spinbeam::{linear_frequencies, Config, Metrics, ScenarioKind};
use wasm_bindgen::prelude::*;

#[derive(Debug, Serialize)]
pub struct ModeShapes {
    pub x: Vec<f64>,
    /// `flexural[j][k]` is `phi_j` at `x[k]`.
    pub flexural: Vec<Vec<f64>>,
    pub torsional: Vec<Vec<f64>>,
    pub patch: [f64; 2],
}

#[derive(Debug, Serialize)]
pub struct Series {
    pub t: Vec<f64>,
    pub w_tip: Vec<f64>,
    pub theta_tip: Vec<f64>,
    pub v_p: Vec<f64>,
    pub metrics: Metrics,
    /// Uncontrolled tip deflection for a controlled disturbance run.
    pub reference_w_tip: Option<Vec<f64>>,
}

#[derive(Debug, Serialize)]
pub struct Sweep {
    pub omega: Vec<f64>,
    /// `flexural[j][k]` is mode `j` at `omega[k]`, rad/s; `None` once spin
    /// has destabilized the linearized plant.
    pub flexural: Vec<Vec<Option<f64>>>,
    pub torsional: Vec<Vec<Option<f64>>>,
}

pub fn parse_config(json: &str) -> Result<Config, String> {
    let text = if json.trim().is_empty() { "{}" } else { json };
    let config: Config = serde_json::from_str(text).map_err(|e| format!("invalid configuration: {e}"))?;
    config.validate().map_err(|e| e.to_string())?;
    Ok(config)
}

pub fn mode_shapes(config: &Config, samples: usize) -> Result<ModeShapes, String> {
    let prepared = config.prepare().map_err(|e| e.to_string())?;
    let basis = &prepared.basis;
    let samples = samples.max(2);
    let length = basis.length();
    let x: Vec<f64> = (0..samples).map(|k| length * k as f64 / (samples - 1) as f64).collect();
    let mut flexural = Vec::new();
    let mut torsional = Vec::new();
    for j in 0..basis.modes() {
        flexural.push(
            x.iter()
                .map(|x| basis.flexural(j, *x).map(|f| f.phi))
                .collect::<spinbeam::Result<Vec<_>>>()
                .map_err(|e| e.to_string())?,
        );
        torsional.push(
            x.iter()
                .map(|x| basis.torsional(j, *x).map(|t| t.0))
                .collect::<spinbeam::Result<Vec<_>>>()
                .map_err(|e| e.to_string())?,
        );
    }
    Ok(ModeShapes {
        x,
        flexural,
        torsional,
        patch: [config.piezo.start, config.piezo.end],
    })
}

fn decimate(values: &[f64], stride: usize) -> Vec<f64> {
    values.iter().step_by(stride).copied().collect()
}

pub fn simulate(config: &Config, scenario: &str, controlled: bool, max_points: usize) -> Result<Series, String> {
    let kind: ScenarioKind = scenario.parse().map_err(|e: spinbeam::Error| e.to_string())?;
    let prepared = config.prepare().map_err(|e| e.to_string())?;
    let run = spinbeam::scenario::run_scenario(config, &prepared, kind, controlled).map_err(|e| e.to_string())?;
    let traj = run.trajectory;
    let stride = traj.len().div_ceil(max_points.max(2)).max(1);
    Ok(Series {
        t: decimate(&traj.times, stride),
        w_tip: decimate(&traj.tip_w, stride),
        theta_tip: decimate(&traj.tip_theta, stride),
        v_p: decimate(&traj.voltage, stride),
        metrics: traj.metrics,
        reference_w_tip: run.reference.map(|r| decimate(&r.tip_w, stride)),
    })
}

pub fn frequency_sweep(config: &Config, omega_max: f64, points: usize) -> Result<Sweep, String> {
    let prepared = config.prepare().map_err(|e| e.to_string())?;
    let n = prepared.matrices.n;
    let points = points.max(2);
    let omega: Vec<f64> = (0..points).map(|k| omega_max * k as f64 / (points - 1) as f64).collect();
    let mut flexural = vec![Vec::with_capacity(points); n];
    let mut torsional = vec![Vec::with_capacity(points); n];
    for w in &omega {
        let freqs = linear_frequencies(&prepared.matrices, *w).ok();
        for j in 0..n {
            flexural[j].push(freqs.as_ref().map(|f| f.0[j]));
            torsional[j].push(freqs.as_ref().map(|f| f.1[j]));
        }
    }
    Ok(Sweep {
        omega,
        flexural,
        torsional,
    })
}

fn to_json<T: Serialize>(value: Result<T, String>) -> Result<String, JsValue> {
    value
        .and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsValue::from_str(&e))
}

/// Mode shapes sampled at `samples` points along the beam.
#[wasm_bindgen(js_name = modeShapes)]
pub fn mode_shapes_js(config_json: &str, samples: usize) -> Result<String, JsValue> {
    to_json(parse_config(config_json).and_then(|c| mode_shapes(&c, samples)))
}

/// Runs `"free"` or `"disturbance"` and returns at most `max_points` samples.
#[wasm_bindgen(js_name = simulate)]
pub fn simulate_js(config_json: &str, scenario: &str, controlled: bool, max_points: usize) -> Result<String, JsValue> {
    to_json(parse_config(config_json).and_then(|c| simulate(&c, scenario, controlled, max_points)))
}

/// Linearized natural frequencies for base rates `0..=omega_max`.
#[wasm_bindgen(js_name = frequencySweep)]
pub fn frequency_sweep_js(config_json: &str, omega_max: f64, points: usize) -> Result<String, JsValue> {
    to_json(parse_config(config_json).and_then(|c| frequency_sweep(&c, omega_max, points)))
}
