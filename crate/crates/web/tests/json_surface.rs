use serde_json::Value;
use spinbeam_web::{frequency_sweep_js, mode_shapes_js, simulate_js};

#[test]
fn exported_functions_return_plot_ready_json() {
    let shapes: Value = serde_json::from_str(&mode_shapes_js("{}", 21).unwrap()).unwrap();
    assert_eq!(shapes["x"].as_array().unwrap().len(), 21);
    assert_eq!(shapes["patch"], serde_json::json!([0.01, 0.06]));

    let cfg = r#"{"sim": {"t_final": 0.05}}"#;
    let run: Value = serde_json::from_str(&simulate_js(cfg, "free", true, 100).unwrap()).unwrap();
    let t = run["t"].as_array().unwrap();
    assert!(t.len() <= 100);
    assert_eq!(run["w_tip"][0].as_f64(), Some(5e-3));
    assert!(run["metrics"]["peak_voltage_V"].as_f64().unwrap() > 0.0);
    assert!(run["reference_w_tip"].is_null());

    let sweep: Value = serde_json::from_str(&frequency_sweep_js("{}", 50.0, 6).unwrap()).unwrap();
    assert_eq!(sweep["omega"].as_array().unwrap().len(), 6);
    assert_eq!(sweep["torsional"].as_array().unwrap().len(), 2);
}
