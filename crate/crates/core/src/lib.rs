//! Coupled nonlinear flexural-torsional vibration of a rotating cantilever
//! beam carrying a surface-bonded piezoelectric patch.
//!
//! The crate is organized bottom-up:
//!
//! - [`quadrature`]: Gauss-Legendre rules used for every modal integral.
//! - [`basis`]: clamped-free flexural and fixed-free torsional admissible
//!   functions.
//! - [`section`] and [`assembly`]: piecewise section properties and the
//!   reduced-order coefficient matrices.
//! - [`dynamics`]: right-hand side, RK4 stepping, energy and trajectories.
//! - [`control`]: tip-deflection feedback linearization through the patch
//!   voltage.
//! - [`scenario`]: full run configuration, the two canned scenarios and
//!   CSV/metrics output.

pub mod assembly;
pub mod basis;
pub mod control;
pub mod dynamics;
mod error;
pub mod metrics;
pub mod quadrature;
pub mod scenario;
pub mod section;

pub use assembly::{assemble, assemble_with, damping_matrices, linear_frequencies, CubicTensor, SystemMatrices};
pub use basis::{flexural_eigenvalues, FlexuralValue, ModalBasis};
pub use control::{design_gains, output, ControllerConfig, FeedbackLinearization};
pub use dynamics::{
    cubic_force, energy, simulate, step, Disturbance, InputPolicy, NoControl, Plant, SimConfig, State,
    Trajectory,
};
pub use error::{Error, Result};
pub use metrics::Metrics;
pub use scenario::{Config, ScenarioKind};
pub use section::{section_properties, BeamSpec, PiezoSpec, SectionProperties};
