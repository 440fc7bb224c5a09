//! Full run configuration, the two canned scenarios, and CSV output.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::assembly::{assemble, linear_frequencies, SystemMatrices};
use crate::basis::ModalBasis;
use crate::control::{design_gains, ControllerConfig, FeedbackLinearization};
use crate::dynamics::{simulate, Disturbance, NoControl, SimConfig, State, Trajectory};
use crate::error::{Error, Result};
use crate::metrics::attenuation_db;
use crate::section::{BeamSpec, PiezoSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ControllerSettings {
    /// Closed-loop natural frequency (rad/s); when absent,
    /// `omega_cl_factor` times the first flexural frequency at rest.
    pub omega_cl: Option<f64>,
    pub omega_cl_factor: f64,
    pub zeta_cl: f64,
    /// Clip the voltage to `±piezo.voltage_limit`.
    pub saturate: bool,
    pub authority_tolerance: f64,
}

impl Default for ControllerSettings {
    fn default() -> Self {
        Self {
            omega_cl: None,
            omega_cl_factor: 4.0,
            zeta_cl: 0.8,
            saturate: true,
            authority_tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimSettings {
    /// Base rotation rate (rad/s).
    pub omega: f64,
    /// Time step (s).
    pub dt: f64,
    /// Final time (s).
    pub t_final: f64,
    /// Modes per field.
    pub modes: usize,
    /// Initial tip deflection of the free-release scenario (m).
    pub initial_tip: f64,
    pub disturbance_amplitude: f64,
    /// Disturbance frequency (Hz).
    pub disturbance_frequency: f64,
    /// 0-based flexural equation receiving the disturbance.
    pub disturbance_target: usize,
}

impl Default for SimSettings {
    fn default() -> Self {
        Self {
            omega: 20.0,
            dt: 2e-5,
            t_final: 2.0,
            modes: 2,
            initial_tip: 5e-3,
            disturbance_amplitude: 1e-3,
            disturbance_frequency: 24.0,
            disturbance_target: 0,
        }
    }
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub beam: BeamSpec,
    pub piezo: PiezoSpec,
    pub controller: ControllerSettings,
    pub sim: SimSettings,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    /// Release from a deflected tip.
    Free,
    /// Harmonic force on one flexural equation, starting at rest.
    Disturbance,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 2] = [ScenarioKind::Free, ScenarioKind::Disturbance];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Free => "free",
            ScenarioKind::Disturbance => "disturbance",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(ScenarioKind::Free),
            "disturbance" => Ok(ScenarioKind::Disturbance),
            other => Err(Error::config("scenario", format!("unknown scenario `{other}`"))),
        }
    }
}

/// Basis and matrices derived from a [`Config`].
#[derive(Debug, Clone)]
pub struct Prepared {
    pub basis: ModalBasis,
    pub matrices: SystemMatrices,
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        self.beam.validate()?;
        self.piezo.validate(&self.beam)?;
        let c = &self.controller;
        if let Some(w) = c.omega_cl {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::config("controller.omega_cl", "must be finite and > 0"));
            }
        }
        if !(c.omega_cl_factor.is_finite() && c.omega_cl_factor > 0.0) {
            return Err(Error::config("controller.omega_cl_factor", "must be finite and > 0"));
        }
        if !(c.zeta_cl.is_finite() && c.zeta_cl > 0.0) {
            return Err(Error::config("controller.zeta_cl", "must be finite and > 0"));
        }
        if !(c.authority_tolerance.is_finite() && c.authority_tolerance >= 0.0) {
            return Err(Error::config("controller.authority_tolerance", "must be finite and >= 0"));
        }
        let s = &self.sim;
        if s.modes == 0 {
            return Err(Error::config("sim.modes", "must be >= 1"));
        }
        if !s.omega.is_finite() {
            return Err(Error::config("sim.omega", "must be finite"));
        }
        if !(s.dt.is_finite() && s.dt > 0.0) {
            return Err(Error::config("sim.dt", "must be finite and > 0"));
        }
        if !(s.t_final.is_finite() && s.t_final >= 0.0) {
            return Err(Error::config("sim.t_final", "must be finite and >= 0"));
        }
        if !s.initial_tip.is_finite() {
            return Err(Error::config("sim.initial_tip", "must be finite"));
        }
        self.disturbance().validate(s.modes)?;
        Ok(())
    }

    pub fn disturbance(&self) -> Disturbance {
        Disturbance {
            amplitude: self.sim.disturbance_amplitude,
            frequency: self.sim.disturbance_frequency,
            target: self.sim.disturbance_target,
        }
    }

    /// Validates, builds the basis, assembles, and checks that `dt` resolves
    /// the highest retained linear frequency (`dt <= 1 / (20 f_max)`).
    pub fn prepare(&self) -> Result<Prepared> {
        self.validate()?;
        let basis = ModalBasis::new(self.sim.modes, self.beam.length)?;
        let matrices = assemble(&self.beam, &self.piezo, &basis)?;
        let (wf, wt) = linear_frequencies(&matrices, self.sim.omega)?;
        let f_max = wf.iter().chain(&wt).fold(0.0f64, |m, w| m.max(*w)) / (2.0 * std::f64::consts::PI);
        let dt_max = 1.0 / (20.0 * f_max);
        if self.sim.dt > dt_max {
            return Err(Error::config(
                "sim.dt",
                format!("{} s does not resolve {f_max:.1} Hz; need dt <= {dt_max:e} s", self.sim.dt),
            ));
        }
        Ok(Prepared { basis, matrices })
    }

    /// Initial state and forcing for `kind`.
    pub fn sim_config(&self, kind: ScenarioKind, basis: &ModalBasis) -> SimConfig {
        let n = basis.modes();
        let mut initial = State::zeros(n);
        let disturbance = match kind {
            ScenarioKind::Free => {
                let mut x = initial.into_vector();
                x[0] = self.sim.initial_tip / basis.flexural_tip()[0];
                initial = State::from_vector(x).expect("4n-long state");
                None
            }
            ScenarioKind::Disturbance => Some(self.disturbance()),
        };
        SimConfig {
            omega: self.sim.omega,
            dt: self.sim.dt,
            t_final: self.sim.t_final,
            initial,
            disturbance,
        }
    }

    /// Resolved controller gains for the prepared system.
    pub fn controller_config(&self, prepared: &Prepared) -> Result<ControllerConfig> {
        let omega_cl = match self.controller.omega_cl {
            Some(w) => w,
            None => {
                let (wf, _) = linear_frequencies(&prepared.matrices, 0.0)?;
                self.controller.omega_cl_factor * wf[0]
            }
        };
        let (k0, k1) = design_gains(omega_cl, self.controller.zeta_cl)?;
        Ok(ControllerConfig {
            k0,
            k1,
            output_weights: prepared.basis.flexural_tip(),
            v_max: self.controller.saturate.then_some(self.piezo.voltage_limit),
            authority_tolerance: self.controller.authority_tolerance,
        })
    }

    /// Simulates `kind` with the controller on or off.
    pub fn simulate(&self, prepared: &Prepared, kind: ScenarioKind, controlled: bool) -> Result<Trajectory> {
        let sim = self.sim_config(kind, &prepared.basis);
        if controlled {
            let ctl = FeedbackLinearization::new(self.controller_config(prepared)?, &prepared.matrices, self.sim.omega)?;
            simulate(&sim, &prepared.matrices, &prepared.basis, &ctl)
        } else {
            simulate(&sim, &prepared.matrices, &prepared.basis, &NoControl)
        }
    }
}

/// Result of one scenario run.
#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub trajectory: Trajectory,
    /// Uncontrolled companion run of a controlled disturbance scenario.
    pub reference: Option<Trajectory>,
}

/// Runs a scenario. A controlled disturbance run is paired with an
/// uncontrolled reference and its metrics carry the attenuation.
pub fn run_scenario(config: &Config, prepared: &Prepared, kind: ScenarioKind, controlled: bool) -> Result<ScenarioRun> {
    let mut trajectory = config.simulate(prepared, kind, controlled)?;
    let reference = if kind == ScenarioKind::Disturbance && controlled {
        let reference = config.simulate(prepared, kind, false)?;
        trajectory.metrics.attenuation_db = Some(attenuation_db(
            reference.metrics.rms_tip_after_transient_m,
            trajectory.metrics.rms_tip_after_transient_m,
        ));
        Some(reference)
    } else {
        None
    };
    Ok(ScenarioRun { trajectory, reference })
}

/// CSV header: `t, p1..pn, q1..qn, dp1..dpn, dq1..dqn, w_tip, theta_tip, v_p`.
pub fn csv_header(n: usize) -> String {
    let mut cols = vec!["t".to_string()];
    for prefix in ["p", "q", "dp", "dq"] {
        cols.extend((1..=n).map(|j| format!("{prefix}{j}")));
    }
    cols.extend(["w_tip", "theta_tip", "v_p"].map(String::from));
    cols.join(",")
}

/// Writes one row per sample with shortest round-trip float formatting.
pub fn write_csv<W: Write>(trajectory: &Trajectory, mut out: W) -> io::Result<()> {
    writeln!(out, "{}", csv_header(trajectory.modes()))?;
    let mut line = String::new();
    for k in 0..trajectory.len() {
        line.clear();
        push_value(&mut line, trajectory.times[k]);
        for v in trajectory.states[k].as_slice() {
            line.push(',');
            push_value(&mut line, *v);
        }
        for v in [trajectory.tip_w[k], trajectory.tip_theta[k], trajectory.voltage[k]] {
            line.push(',');
            push_value(&mut line, v);
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

fn push_value(line: &mut String, v: f64) {
    use std::fmt::Write as _;
    let _ = write!(line, "{v:e}");
}
