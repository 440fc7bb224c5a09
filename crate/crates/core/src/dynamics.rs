//! Time-domain model: right-hand side, RK4 stepping, energy and trajectories.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, DVectorView};
use serde::{Deserialize, Serialize};

use crate::assembly::{linear_frequencies, SystemMatrices};
use crate::basis::ModalBasis;
use crate::error::{Error, Result};
use crate::metrics::Metrics;

/// Stacked modal state `x = [p; q; p'; q']`, length `4n`.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    n: usize,
    x: DVector<f64>,
}

impl State {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            x: DVector::zeros(4 * n),
        }
    }

    /// Wraps a stacked vector; its length must be a multiple of four.
    pub fn from_vector(x: DVector<f64>) -> Result<Self> {
        if !x.len().is_multiple_of(4) || x.is_empty() {
            return Err(Error::Domain(format!("state length {} is not 4n with n >= 1", x.len())));
        }
        Ok(Self { n: x.len() / 4, x })
    }

    pub fn from_parts(p: &[f64], q: &[f64], pdot: &[f64], qdot: &[f64]) -> Result<Self> {
        let n = p.len();
        if q.len() != n || pdot.len() != n || qdot.len() != n || n == 0 {
            return Err(Error::Domain("state parts must share a nonzero length".into()));
        }
        let x = DVector::from_iterator(4 * n, p.iter().chain(q).chain(pdot).chain(qdot).copied());
        Ok(Self { n, x })
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.x
    }

    pub fn into_vector(self) -> DVector<f64> {
        self.x
    }

    pub fn as_slice(&self) -> &[f64] {
        self.x.as_slice()
    }

    pub fn p(&self) -> DVectorView<'_, f64> {
        self.x.rows(0, self.n)
    }

    pub fn q(&self) -> DVectorView<'_, f64> {
        self.x.rows(self.n, self.n)
    }

    pub fn pdot(&self) -> DVectorView<'_, f64> {
        self.x.rows(2 * self.n, self.n)
    }

    pub fn qdot(&self) -> DVectorView<'_, f64> {
        self.x.rows(3 * self.n, self.n)
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().all(|v| v.is_finite())
    }
}

/// Harmonic generalized force `amplitude * sin(2 pi f t)` on one flexural
/// modal equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disturbance {
    pub amplitude: f64,
    /// Frequency (Hz).
    pub frequency: f64,
    /// 0-based flexural equation index.
    pub target: usize,
}

impl Disturbance {
    pub fn force(&self, t: f64) -> f64 {
        self.amplitude * (2.0 * PI * self.frequency * t).sin()
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.amplitude.is_finite() && self.amplitude >= 0.0) {
            return Err(Error::config("sim.disturbance_amplitude", "must be finite and >= 0"));
        }
        if !(self.frequency.is_finite() && self.frequency > 0.0) {
            return Err(Error::config("sim.disturbance_frequency", "must be finite and > 0"));
        }
        if self.target >= n {
            return Err(Error::config(
                "sim.disturbance_target",
                format!("equation {} does not exist for {n} modes", self.target),
            ));
        }
        Ok(())
    }
}

/// Fixed-step simulation settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Base rotation rate (rad/s).
    pub omega: f64,
    pub dt: f64,
    pub t_final: f64,
    pub initial: State,
    pub disturbance: Option<Disturbance>,
}

impl SimConfig {
    /// Number of steps: `floor(t_final / dt)`.
    pub fn steps(&self) -> usize {
        // Absorb the rounding of t_final/dt for exact multiples.
        ((self.t_final / self.dt) * (1.0 + 1e-12)).floor() as usize
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::config("sim.dt", "must be finite and > 0"));
        }
        if !(self.t_final.is_finite() && self.t_final >= 0.0) {
            return Err(Error::config("sim.t_final", "must be finite and >= 0"));
        }
        if !self.omega.is_finite() {
            return Err(Error::config("sim.omega", "must be finite"));
        }
        if self.initial.modes() != n {
            return Err(Error::config("sim.initial", "initial state has the wrong number of modes"));
        }
        if !self.initial.is_finite() {
            return Err(Error::config("sim.initial", "initial state must be finite"));
        }
        if let Some(d) = &self.disturbance {
            d.validate(n)?;
        }
        Ok(())
    }
}

/// `g_i = sum_{jkl} G1_ijkl p_j p_k p_l`.
pub fn cubic_force(matrices: &SystemMatrices, p: &[f64]) -> DVector<f64> {
    matrices.g1.contract3(p)
}

/// Mechanical energy of the modal state: kinetic plus quadratic and quartic
/// strain energy. Rotation-dependent terms are not included.
pub fn energy(state: &State, matrices: &SystemMatrices) -> f64 {
    let p = state.p();
    let q = state.q();
    let pd = state.pdot();
    let qd = state.qdot();
    let quad = |m: &DMatrix<f64>, v: &DVectorView<'_, f64>| v.dot(&(m * v));
    let p_owned: Vec<f64> = p.iter().copied().collect();
    0.5 * quad(&matrices.m1, &pd)
        + 0.5 * quad(&matrices.m2, &qd)
        + 0.5 * quad(&matrices.k1, &p)
        + 0.5 * quad(&matrices.k2, &q)
        + 0.25 * matrices.g1.contract4(&p_owned)
}

/// Non-input generalized forces of the flexural block:
/// `-CB p' - Omega C1 q' - (K1 + Omega^2 D1) p - g(p)`.
pub fn flexural_forces(matrices: &SystemMatrices, state: &State, omega: f64) -> DVector<f64> {
    let p = state.p();
    let p_owned: Vec<f64> = p.iter().copied().collect();
    -(&matrices.cb * state.pdot())
        - omega * (&matrices.c1 * state.qdot())
        - (&matrices.k1 * p + omega * omega * (&matrices.d1 * p))
        - matrices.g1.contract3(&p_owned)
}

/// Voltage law evaluated at every RK stage.
pub trait InputPolicy {
    fn voltage(&self, state: &State, t: f64) -> f64;
}

/// Zero voltage.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoControl;

impl InputPolicy for NoControl {
    fn voltage(&self, _state: &State, _t: f64) -> f64 {
        0.0
    }
}

impl<F: Fn(&State, f64) -> f64> InputPolicy for F {
    fn voltage(&self, state: &State, t: f64) -> f64 {
        self(state, t)
    }
}

/// Modal plant with pre-inverted inertia matrices.
#[derive(Debug, Clone)]
pub struct Plant<'a> {
    matrices: &'a SystemMatrices,
    omega: f64,
    disturbance: Option<Disturbance>,
    m1_inv: DMatrix<f64>,
    m2_inv: DMatrix<f64>,
}

impl<'a> Plant<'a> {
    pub fn new(matrices: &'a SystemMatrices, omega: f64, disturbance: Option<Disturbance>) -> Result<Self> {
        let m1_inv = matrices
            .m1
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::config("matrices.M1", "singular flexural mass matrix"))?;
        let m2_inv = matrices
            .m2
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::config("matrices.M2", "singular torsional mass matrix"))?;
        Ok(Self {
            matrices,
            omega,
            disturbance,
            m1_inv,
            m2_inv,
        })
    }

    pub fn matrices(&self) -> &SystemMatrices {
        self.matrices
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// State derivative at time `t` under patch voltage `v`.
    pub fn rhs(&self, state: &State, t: f64, v: f64) -> State {
        let m = self.matrices;
        let n = m.n;
        let mut flex = flexural_forces(m, state, self.omega) + &m.f1 * v;
        if let Some(d) = &self.disturbance {
            flex[d.target] += d.force(t);
        }
        let tors = -(&m.ct * state.qdot()) - self.omega * (&m.c2 * state.pdot()) - &m.k2 * state.q();
        let pdd = &self.m1_inv * flex;
        let qdd = &self.m2_inv * tors;

        let mut dx = DVector::zeros(4 * n);
        dx.rows_mut(0, n).copy_from(&state.pdot());
        dx.rows_mut(n, n).copy_from(&state.qdot());
        dx.rows_mut(2 * n, n).copy_from(&pdd);
        dx.rows_mut(3 * n, n).copy_from(&qdd);
        State { n, x: dx }
    }
}

/// One classical fourth-order Runge-Kutta step of `x' = f(t, x)`.
pub fn rk4_step<F>(mut f: F, t: f64, x: &DVector<f64>, dt: f64) -> DVector<f64>
where
    F: FnMut(f64, &DVector<f64>) -> DVector<f64>,
{
    let half = 0.5 * dt;
    let k1 = f(t, x);
    let k2 = f(t + half, &(x + half * &k1));
    let k3 = f(t + half, &(x + half * &k2));
    let k4 = f(t + dt, &(x + dt * &k3));
    x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

/// Advances the plant by one RK4 step, evaluating the input at every stage.
pub fn step<P: InputPolicy + ?Sized>(plant: &Plant<'_>, policy: &P, state: &State, t: f64, dt: f64) -> Result<State> {
    let n = state.n;
    let next = rk4_step(
        |tau, x| {
            let s = State { n, x: x.clone() };
            let v = policy.voltage(&s, tau);
            plant.rhs(&s, tau, v).x
        },
        t,
        &state.x,
        dt,
    );
    let next = State { n, x: next };
    if next.is_finite() {
        Ok(next)
    } else {
        Err(Error::BlowUp { time: t + dt })
    }
}

/// Sampled simulation output.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State>,
    /// `w(L, t) = sum phi_j(L) p_j` (m).
    pub tip_w: Vec<f64>,
    /// `theta(L, t) = sum psi_j(L) q_j` (rad).
    pub tip_theta: Vec<f64>,
    /// Applied patch voltage at each sample (V).
    pub voltage: Vec<f64>,
    pub metrics: Metrics,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn modes(&self) -> usize {
        self.states.first().map_or(0, State::modes)
    }

    /// One modal coordinate over time; `index` addresses the stacked state.
    pub fn coordinate(&self, index: usize) -> Vec<f64> {
        self.states.iter().map(|s| s.x[index]).collect()
    }
}

/// Integrates `config` with a fixed step and records every sample.
pub fn simulate<P: InputPolicy + ?Sized>(
    config: &SimConfig,
    matrices: &SystemMatrices,
    basis: &ModalBasis,
    policy: &P,
) -> Result<Trajectory> {
    let n = matrices.n;
    if basis.modes() != n {
        return Err(Error::config("modes", "basis and matrices disagree on the mode count"));
    }
    config.validate(n)?;
    let plant = Plant::new(matrices, config.omega, config.disturbance)?;
    let phi_tip = DVector::from_vec(basis.flexural_tip());
    let psi_tip = DVector::from_vec(basis.torsional_tip());
    let (wf, _) = linear_frequencies(matrices, 0.0)?;
    let first_period = 2.0 * PI / wf[0];

    let steps = config.steps();
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut tip_w = Vec::with_capacity(steps + 1);
    let mut tip_theta = Vec::with_capacity(steps + 1);
    let mut voltage = Vec::with_capacity(steps + 1);

    let mut record = |t: f64, s: State| {
        tip_w.push(phi_tip.dot(&s.p()));
        tip_theta.push(psi_tip.dot(&s.q()));
        voltage.push(policy.voltage(&s, t));
        times.push(t);
        states.push(s);
    };

    let mut state = config.initial.clone();
    record(0.0, state.clone());
    for k in 0..steps {
        let t = k as f64 * config.dt;
        state = step(&plant, policy, &state, t, config.dt)?;
        record((k + 1) as f64 * config.dt, state.clone());
    }

    let metrics = Metrics::compute(&times, &tip_w, &voltage, first_period);
    Ok(Trajectory {
        times,
        states,
        tip_w,
        tip_theta,
        voltage,
        metrics,
    })
}
