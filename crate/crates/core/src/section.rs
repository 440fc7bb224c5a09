//! Beam and patch parameters and the piecewise section properties along the span.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Substrate beam geometry, material and modal damping ratios (SI units).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BeamSpec {
    /// Length `L` (m).
    pub length: f64,
    /// Thickness `t_b` (m).
    pub thickness: f64,
    /// Width `b` (m).
    pub width: f64,
    /// Density (kg/m^3).
    pub density: f64,
    /// Young's modulus (Pa).
    pub elastic_modulus: f64,
    /// Shear modulus (Pa).
    pub shear_modulus: f64,
    /// Flexural modal damping ratios, one per retained mode.
    pub zeta_flex: Vec<f64>,
    /// Torsional modal damping ratios, one per retained mode.
    pub zeta_tors: Vec<f64>,
}

impl Default for BeamSpec {
    fn default() -> Self {
        Self {
            length: 0.15,
            thickness: 0.8e-3,
            width: 1.5e-2,
            density: 3960.0,
            elastic_modulus: 70e9,
            shear_modulus: 30e9,
            zeta_flex: vec![0.01, 0.0016],
            zeta_tors: vec![0.01, 0.0033],
        }
    }
}

impl BeamSpec {
    pub fn validate(&self) -> Result<()> {
        positive("beam.length", self.length)?;
        positive("beam.thickness", self.thickness)?;
        positive("beam.width", self.width)?;
        positive("beam.density", self.density)?;
        positive("beam.elastic_modulus", self.elastic_modulus)?;
        positive("beam.shear_modulus", self.shear_modulus)?;
        for (name, list) in [("beam.zeta_flex", &self.zeta_flex), ("beam.zeta_tors", &self.zeta_tors)] {
            if let Some(z) = list.iter().find(|z| !(**z >= 0.0 && **z < 1.0)) {
                return Err(Error::config(name, format!("damping ratio out of [0,1): {z}")));
            }
        }
        Ok(())
    }

    /// Bending stiffness `E b t^3 / 12` (N m^2).
    pub fn bending_stiffness(&self) -> f64 {
        self.elastic_modulus * self.width * self.thickness.powi(3) / 12.0
    }

    /// Mass per unit length (kg/m).
    pub fn mass_per_length(&self) -> f64 {
        self.density * self.width * self.thickness
    }

    /// Axial stiffness `E b t` (N).
    pub fn axial_stiffness(&self) -> f64 {
        self.elastic_modulus * self.width * self.thickness
    }

    /// Saint-Venant stiffness `G J` of the thin rectangle (N m^2).
    pub fn torsional_stiffness(&self) -> f64 {
        self.shear_modulus * thin_rectangle_torsion_constant(self.width, self.thickness)
    }

    /// Polar mass moment of inertia per unit length (kg m).
    pub fn torsional_inertia(&self) -> f64 {
        self.mass_per_length() * (self.width.powi(2) + self.thickness.powi(2)) / 12.0
    }
}

/// Surface-bonded piezoelectric patch occupying `start <= x <= end`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PiezoSpec {
    /// Patch start `l1` (m from the root).
    pub start: f64,
    /// Patch end `l2` (m from the root).
    pub end: f64,
    /// Thickness `t_p` (m).
    pub thickness: f64,
    /// Width `w_p` (m).
    pub width: f64,
    /// Young's modulus (Pa).
    pub elastic_modulus: f64,
    /// Shear modulus (Pa).
    pub shear_modulus: f64,
    /// Density (kg/m^3).
    pub density: f64,
    /// Transverse strain constant `d31` (m/V).
    pub d31: f64,
    /// Actuator voltage limit (V), applied when the controller saturates.
    pub voltage_limit: f64,
}

impl Default for PiezoSpec {
    fn default() -> Self {
        Self {
            start: 0.01,
            end: 0.06,
            thickness: 0.4e-3,
            width: 1.5e-2,
            elastic_modulus: 62e9,
            shear_modulus: 23e9,
            density: 7500.0,
            d31: -320e-12,
            voltage_limit: 200.0,
        }
    }
}

impl PiezoSpec {
    pub fn validate(&self, beam: &BeamSpec) -> Result<()> {
        if !(self.start >= 0.0 && self.start <= self.end && self.end <= beam.length) {
            return Err(Error::config(
                "piezo.start/piezo.end",
                format!(
                    "require 0 <= start <= end <= L, got start = {}, end = {}, L = {}",
                    self.start, self.end, beam.length
                ),
            ));
        }
        positive("piezo.thickness", self.thickness)?;
        positive("piezo.width", self.width)?;
        positive("piezo.elastic_modulus", self.elastic_modulus)?;
        positive("piezo.density", self.density)?;
        if !(self.shear_modulus.is_finite() && self.shear_modulus >= 0.0) {
            return Err(Error::config("piezo.shear_modulus", "must be finite and >= 0"));
        }
        if !self.d31.is_finite() {
            return Err(Error::config("piezo.d31", "must be finite"));
        }
        positive("piezo.voltage_limit", self.voltage_limit)?;
        Ok(())
    }

    /// Whether `x` lies on the bonded region (the indicator `S(x)`).
    pub fn covers(&self, x: f64) -> bool {
        self.start < self.end && x >= self.start && x <= self.end
    }

    /// Actuation moment per volt `Mp0 = -b E_p d31 (t_b + t_p) / 2` (N m/V).
    pub fn moment_per_volt(&self, beam: &BeamSpec) -> f64 {
        -0.5 * beam.width * self.elastic_modulus * self.d31 * (beam.thickness + self.thickness)
    }

    /// Neutral-axis offset of the bonded section from the substrate midplane (m).
    pub fn neutral_axis_offset(&self, beam: &BeamSpec) -> f64 {
        let eb = beam.elastic_modulus * beam.width * beam.thickness;
        let ep = self.elastic_modulus * self.width * self.thickness;
        ep * 0.5 * (beam.thickness + self.thickness) / (eb + ep)
    }
}

fn positive(field: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::config(field, format!("must be finite and > 0, got {value}")))
    }
}

/// `b t^3 (1/3 - 0.21 (t/b) (1 - t^4 / (12 b^4)))`, valid for `t <= b`.
pub fn thin_rectangle_torsion_constant(width: f64, thickness: f64) -> f64 {
    let (b, t) = (width.max(thickness), width.min(thickness));
    b * t.powi(3) * (1.0 / 3.0 - 0.21 * (t / b) * (1.0 - t.powi(4) / (12.0 * b.powi(4))))
}

/// Distributed section properties at one station.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionProperties {
    /// Mass per length (kg/m).
    pub rho_a: f64,
    /// Torsional mass moment of inertia per length (kg m).
    pub ix: f64,
    /// Bending stiffness about the section neutral axis (N m^2).
    pub ei: f64,
    /// Torsional stiffness (N m^2).
    pub gj: f64,
    /// Axial stiffness (N).
    pub ea: f64,
    /// Neutral-axis offset from the substrate midplane (m).
    pub zn: f64,
}

impl SectionProperties {
    pub fn bare(beam: &BeamSpec) -> Self {
        Self {
            rho_a: beam.mass_per_length(),
            ix: beam.torsional_inertia(),
            ei: beam.bending_stiffness(),
            gj: beam.torsional_stiffness(),
            ea: beam.axial_stiffness(),
            zn: 0.0,
        }
    }

    /// Two-layer substrate + patch section.
    pub fn bonded(beam: &BeamSpec, piezo: &PiezoSpec) -> Self {
        let bare = Self::bare(beam);
        let (tb, tp, wp) = (beam.thickness, piezo.thickness, piezo.width);
        let zn = piezo.neutral_axis_offset(beam);
        let centroid = 0.5 * (tb + tp);
        let patch_area = wp * tp;

        let substrate_ei = beam.elastic_modulus * beam.width * (tb.powi(3) / 12.0 + tb * zn * zn);
        let patch_ei = piezo.elastic_modulus * wp * (tp.powi(3) / 12.0 + tp * (centroid - zn).powi(2));
        let patch_ix =
            piezo.density * patch_area * ((wp * wp + tp * tp) / 12.0 + centroid * centroid);

        Self {
            rho_a: bare.rho_a + piezo.density * patch_area,
            ix: bare.ix + patch_ix,
            ei: substrate_ei + patch_ei,
            gj: bare.gj + piezo.shear_modulus * thin_rectangle_torsion_constant(wp, tp),
            ea: bare.ea + piezo.elastic_modulus * patch_area,
            zn,
        }
    }
}

/// Section properties at `x`: bonded values on the patch, bare values elsewhere.
pub fn section_properties(x: f64, beam: &BeamSpec, piezo: &PiezoSpec) -> Result<SectionProperties> {
    if !(x >= 0.0 && x <= beam.length) {
        return Err(Error::Domain(format!("x = {x} outside [0, {}]", beam.length)));
    }
    Ok(if piezo.covers(x) {
        SectionProperties::bonded(beam, piezo)
    } else {
        SectionProperties::bare(beam)
    })
}
