//! Feedback linearization of the tip deflection through the patch voltage.
//!
//! The regulated output is `y = c^T p` with `c_j = phi_j(L)`. Differentiating
//! twice gives `y'' = c^T M1^-1 h(x) + beta v` where `h` collects every
//! non-input flexural force and `beta = c^T M1^-1 F1` is constant. Choosing
//!
//! ```text
//! v = (-k0 y - k1 y' - c^T M1^-1 h(x)) / beta
//! ```
//!
//! leaves `y'' + k1 y' + k0 y = c^T M1^-1 d(t)`, with `d` any unmodelled
//! disturbance.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::assembly::SystemMatrices;
use crate::dynamics::{flexural_forces, InputPolicy, State};
use crate::error::{Error, Result};

/// Coefficients of `s^2 + k1 s + k0` with roots at natural frequency
/// `omega_cl` and damping ratio `zeta_cl`.
pub fn design_gains(omega_cl: f64, zeta_cl: f64) -> Result<(f64, f64)> {
    if !(omega_cl.is_finite() && omega_cl > 0.0) {
        return Err(Error::config("controller.omega_cl", format!("must be > 0, got {omega_cl}")));
    }
    if !(zeta_cl.is_finite() && zeta_cl > 0.0) {
        return Err(Error::config("controller.zeta_cl", format!("must be > 0, got {zeta_cl}")));
    }
    Ok((omega_cl * omega_cl, 2.0 * zeta_cl * omega_cl))
}

/// Tip output `(y, y')` for weights `c`.
pub fn output(state: &State, weights: &[f64]) -> (f64, f64) {
    let y = state.p().iter().zip(weights).map(|(p, c)| p * c).sum();
    let yd = state.pdot().iter().zip(weights).map(|(p, c)| p * c).sum();
    (y, yd)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControllerConfig {
    pub k0: f64,
    pub k1: f64,
    /// Output weights, normally the flexural tip values `phi_j(L)`.
    pub output_weights: Vec<f64>,
    /// Symmetric voltage clip; `None` leaves the law unsaturated.
    pub v_max: Option<f64>,
    /// Smallest admissible `|beta|` (1/(V s^2) in output units).
    pub authority_tolerance: f64,
}

impl ControllerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.k0 > 0.0 && self.k1 > 0.0 && self.k0.is_finite() && self.k1.is_finite()) {
            return Err(Error::config("controller", "s^2 + k1 s + k0 must be Hurwitz (k0 > 0, k1 > 0)"));
        }
        if self.output_weights.iter().all(|c| *c == 0.0) {
            return Err(Error::config("controller.output_weights", "must not all be zero"));
        }
        if let Some(v) = self.v_max {
            if !(v > 0.0) {
                return Err(Error::config("controller.v_max", "must be > 0"));
            }
        }
        Ok(())
    }
}

/// The voltage law bound to one set of system matrices and base rate.
#[derive(Debug, Clone)]
pub struct FeedbackLinearization<'a> {
    config: ControllerConfig,
    matrices: &'a SystemMatrices,
    omega: f64,
    /// `c^T M1^-1` as a row.
    projection: DVector<f64>,
    beta: f64,
}

impl<'a> FeedbackLinearization<'a> {
    /// Fails with [`Error::AuthorityLoss`] if `|c^T M1^-1 F1|` is below the
    /// configured tolerance.
    pub fn new(config: ControllerConfig, matrices: &'a SystemMatrices, omega: f64) -> Result<Self> {
        config.validate()?;
        if config.output_weights.len() != matrices.n {
            return Err(Error::config("controller.output_weights", "length must equal the mode count"));
        }
        let m1_inv: DMatrix<f64> = matrices
            .m1
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::config("matrices.M1", "singular flexural mass matrix"))?;
        let c = DVector::from_column_slice(&config.output_weights);
        let projection = m1_inv.transpose() * c;
        let beta = projection.dot(&matrices.f1);
        if !(beta.abs() >= config.authority_tolerance) {
            return Err(Error::AuthorityLoss {
                gain: beta.abs(),
                tolerance: config.authority_tolerance,
            });
        }
        Ok(Self {
            config,
            matrices,
            omega,
            projection,
            beta,
        })
    }

    pub fn config(&self) -> &ControllerConfig {
        &self.config
    }

    /// The decoupling gain `beta = c^T M1^-1 F1`.
    pub fn decoupling_gain(&self) -> f64 {
        self.beta
    }

    /// The linearizing voltage before saturation.
    pub fn unsaturated_voltage(&self, state: &State) -> f64 {
        let (y, yd) = output(state, &self.config.output_weights);
        let drift = self.projection.dot(&flexural_forces(self.matrices, state, self.omega));
        (-self.config.k0 * y - self.config.k1 * yd - drift) / self.beta
    }

    /// The applied voltage, clipped to `±v_max` when configured.
    pub fn control_voltage(&self, state: &State) -> f64 {
        let v = self.unsaturated_voltage(state);
        match self.config.v_max {
            Some(limit) => v.clamp(-limit, limit),
            None => v,
        }
    }
}

impl InputPolicy for FeedbackLinearization<'_> {
    fn voltage(&self, state: &State, _t: f64) -> f64 {
        self.control_voltage(state)
    }
}
