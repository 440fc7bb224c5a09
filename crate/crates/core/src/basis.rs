//! Admissible functions for the assumed-mode expansion.
//!
//! Transverse deflection uses the clamped-free Euler-Bernoulli eigenfunctions
//! of the bare beam,
//!
//! ```text
//! phi_j(x) = cosh(b x) - cos(b x) - sigma_j (sinh(b x) - sin(b x)),  b = lambda_j / L
//! ```
//!
//! and twist uses the fixed-free rod shapes `psi_j(x) = sin((2j - 1) pi x / 2L)`.
//! Both families satisfy every geometric boundary condition at the root.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ROOT_TOLERANCE: f64 = 1e-12;

fn characteristic(lambda: f64) -> f64 {
    1.0 + lambda.cos() * lambda.cosh()
}

fn characteristic_slope(lambda: f64) -> f64 {
    lambda.cos() * lambda.sinh() - lambda.sin() * lambda.cosh()
}

/// The first `n` roots of `1 + cos(lambda) cosh(lambda) = 0`, ascending.
///
/// Root `j` (1-based) is the unique sign change inside `[(j - 1) pi, j pi]`;
/// it is isolated by bisection and polished with Newton steps.
pub fn flexural_eigenvalues(n: usize) -> Vec<f64> {
    (1..=n).map(|j| characteristic_root(j as f64)).collect()
}

fn characteristic_root(j: f64) -> f64 {
    let (mut lo, mut hi) = ((j - 1.0) * PI, j * PI);
    let mut f_lo = characteristic(lo);
    // Bisect until Newton is safe: the bracket is small relative to the
    // curvature scale of cosh.
    while hi - lo > 1e-3 {
        let mid = 0.5 * (lo + hi);
        let f_mid = characteristic(mid);
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..50 {
        let dx = characteristic(x) / characteristic_slope(x);
        let next = x - dx;
        // Fall back to the bracket if Newton escapes it.
        x = if next <= lo || next >= hi { 0.5 * (lo + hi) } else { next };
        if characteristic(x).signum() == f_lo.signum() {
            lo = x;
        } else {
            hi = x;
        }
        if dx.abs() < ROOT_TOLERANCE {
            break;
        }
    }
    x
}

/// Flexural shape value and its first two spatial derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlexuralValue {
    pub phi: f64,
    pub slope: f64,
    pub curvature: f64,
}

/// Flexural and torsional admissible functions on a beam of given length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModalBasis {
    n: usize,
    length: f64,
    flexural_roots: Vec<f64>,
    sigma: Vec<f64>,
    /// `1 - sigma_j`, evaluated without cancellation.
    one_minus_sigma: Vec<f64>,
}

impl ModalBasis {
    /// Basis with `n` modes per field on a beam of length `length`.
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::config("modes", "at least one mode per field is required"));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::config("beam.length", "must be finite and > 0"));
        }
        let flexural_roots = flexural_eigenvalues(n);
        let mut sigma = Vec::with_capacity(n);
        let mut one_minus_sigma = Vec::with_capacity(n);
        for &lam in &flexural_roots {
            let denom = lam.sinh() + lam.sin();
            sigma.push((lam.cosh() + lam.cos()) / denom);
            // sinh - cosh = -exp(-lam)
            one_minus_sigma.push((lam.sin() - lam.cos() - (-lam).exp()) / denom);
        }
        Ok(Self {
            n,
            length,
            flexural_roots,
            sigma,
            one_minus_sigma,
        })
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn flexural_roots(&self) -> &[f64] {
        &self.flexural_roots
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    fn check(&self, index: usize, x: f64) -> Result<()> {
        if index >= self.n {
            return Err(Error::Domain(format!(
                "mode index {index} out of range for a {}-mode basis",
                self.n
            )));
        }
        // Allow rounding noise from callers that compute x = L exactly.
        let slack = 1e-12 * self.length;
        if !(x >= -slack && x <= self.length + slack) {
            return Err(Error::Domain(format!("x = {x} outside [0, {}]", self.length)));
        }
        Ok(())
    }

    /// `phi_j`, `phi_j'` and `phi_j''` at `x` for 0-based mode `index`.
    pub fn flexural(&self, index: usize, x: f64) -> Result<FlexuralValue> {
        self.check(index, x)?;
        Ok(self.flexural_unchecked(index, x))
    }

    pub(crate) fn flexural_unchecked(&self, index: usize, x: f64) -> FlexuralValue {
        let beta = self.flexural_roots[index] / self.length;
        let s = self.sigma[index];
        let oms = self.one_minus_sigma[index];
        let u = beta * x;
        let (eu, emu) = (u.exp(), (-u).exp());
        // cosh u - s sinh u and sinh u - s cosh u, rewritten in exponentials
        // so the growing parts cancel analytically.
        let ch = 0.5 * (oms * eu + (1.0 + s) * emu);
        let sh = 0.5 * (oms * eu - (1.0 + s) * emu);
        let (sin, cos) = u.sin_cos();
        FlexuralValue {
            phi: ch - cos + s * sin,
            slope: beta * (sh + sin + s * cos),
            curvature: beta * beta * (ch + cos - s * sin),
        }
    }

    /// `(psi_j, psi_j')` at `x` for 0-based mode `index`.
    pub fn torsional(&self, index: usize, x: f64) -> Result<(f64, f64)> {
        self.check(index, x)?;
        Ok(self.torsional_unchecked(index, x))
    }

    pub(crate) fn torsional_unchecked(&self, index: usize, x: f64) -> (f64, f64) {
        let k = (2 * index + 1) as f64 * PI / (2.0 * self.length);
        let (s, c) = (k * x).sin_cos();
        (s, k * c)
    }

    /// Tip values `phi_j(L)` for every mode.
    pub fn flexural_tip(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.flexural_unchecked(j, self.length).phi).collect()
    }

    /// Tip values `psi_j(L)` for every mode.
    pub fn torsional_tip(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.torsional_unchecked(j, self.length).0).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const L: f64 = 0.15;

    fn trapezoid<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let inner: f64 = (1..n).map(|k| f(a + k as f64 * h)).sum();
        h * (0.5 * (f(a) + f(b)) + inner)
    }

    #[test]
    fn no_roots_requested() {
        assert!(flexural_eigenvalues(0).is_empty());
    }

    #[test]
    fn first_two_roots() {
        let roots = flexural_eigenvalues(2);
        // 50-digit reference values
        assert_relative_eq!(roots[0], 1.875_104_068_711_961_2, epsilon = 1e-12);
        assert_relative_eq!(roots[1], 4.694_091_132_974_174_6, epsilon = 1e-12);
    }

    #[test]
    fn roots_satisfy_characteristic_equation() {
        let roots = flexural_eigenvalues(5);
        assert!(roots[0] > 1.8 && roots[0] < 1.9);
        for w in roots.windows(2) {
            assert!(w[1] > w[0]);
        }
        for &lam in &roots {
            assert!(characteristic(lam).abs() < 1e-9, "residual at {lam}");
        }
        let reference = [
            1.875_104_068_711_961_2,
            4.694_091_132_974_174_6,
            7.854_757_438_237_612_6,
            10.995_540_734_875_467,
            14.137_168_391_046_471,
        ];
        for (got, want) in roots.iter().zip(reference) {
            assert_relative_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn clamped_root_conditions() {
        let basis = ModalBasis::new(5, L).unwrap();
        for j in 0..5 {
            let v = basis.flexural(j, 0.0).unwrap();
            assert!(v.phi.abs() < 1e-12);
            assert!(v.slope.abs() < 1e-10);
            let (psi, _) = basis.torsional(j, 0.0).unwrap();
            assert_eq!(psi, 0.0);
        }
    }

    #[test]
    fn tip_value_and_free_end_conditions() {
        let basis = ModalBasis::new(5, L).unwrap();
        assert_relative_eq!(basis.flexural(0, L).unwrap().phi, 2.0, epsilon = 1e-12);
        for j in 0..5 {
            let max_curv = (0..=1000)
                .map(|k| basis.flexural(j, L * k as f64 / 1000.0).unwrap().curvature.abs())
                .fold(0.0, f64::max);
            let tip = basis.flexural(j, L).unwrap();
            assert!(tip.curvature.abs() < 1e-6 * max_curv, "mode {j}: {}", tip.curvature);
            let (_, dpsi) = basis.torsional(j, L).unwrap();
            assert!(dpsi.abs() < 1e-12 * (2 * j + 1) as f64 * PI / (2.0 * L));
        }
    }

    #[test]
    fn torsional_examples() {
        let basis = ModalBasis::new(2, L).unwrap();
        assert_relative_eq!(basis.torsional(0, L).unwrap().0, 1.0, epsilon = 1e-15);
        assert_relative_eq!(basis.torsional(1, L / 3.0).unwrap().0, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn unit_mean_square_normalization() {
        let basis = ModalBasis::new(1, L).unwrap();
        let integral = trapezoid(|x| basis.flexural(0, x).unwrap().phi.powi(2), 0.0, L, 20_000);
        assert_relative_eq!(integral, L, max_relative = 1e-7);
    }

    #[test]
    fn orthogonality() {
        let basis = ModalBasis::new(4, L).unwrap();
        for i in 0..4 {
            for j in 0..i {
                let ff = trapezoid(
                    |x| basis.flexural(i, x).unwrap().phi * basis.flexural(j, x).unwrap().phi,
                    0.0,
                    L,
                    200_000,
                );
                assert!(ff.abs() / L < 1e-8, "flexural {i},{j}: {ff}");
                let tt = trapezoid(
                    |x| basis.torsional(i, x).unwrap().0 * basis.torsional(j, x).unwrap().0,
                    0.0,
                    L,
                    20_000,
                );
                assert!(tt.abs() / L < 1e-12, "torsional {i},{j}: {tt}");
            }
        }
    }

    #[test]
    fn fifth_mode_against_high_precision_values() {
        // phi_5, phi_5', phi_5'' evaluated in 50-digit arithmetic.
        let reference = [
            (0.03, 1.319_249_580_751_211_3, -66.085_673_954_328_55, -10_667.135_319_351_943),
            (0.075, 0.001_702_874_216_624_587_1, 133.286_405_189_029_64, 15.126_028_479_227_1),
            (0.12, -1.200_896_172_152_260_7, -54.935_746_133_458_34, 11_718.426_725_143_424),
        ];
        let basis = ModalBasis::new(5, L).unwrap();
        for (x, phi, slope, curv) in reference {
            let v = basis.flexural(4, x).unwrap();
            assert_relative_eq!(v.phi, phi, max_relative = 1e-8);
            assert_relative_eq!(v.slope, slope, max_relative = 1e-8);
            assert_relative_eq!(v.curvature, curv, max_relative = 1e-8);
        }
        let tip = basis.flexural(4, L).unwrap();
        assert_relative_eq!(tip.phi, 2.0, max_relative = 1e-8);
        assert_relative_eq!(tip.slope, 188.495_305_249_177_44, max_relative = 1e-8);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let basis = ModalBasis::new(3, L).unwrap();
        let h = 1e-6;
        for j in 0..3 {
            for x in [0.02, 0.07, 0.11] {
                let v = basis.flexural(j, x).unwrap();
                let p = basis.flexural(j, x + h).unwrap();
                let m = basis.flexural(j, x - h).unwrap();
                assert_relative_eq!(v.slope, (p.phi - m.phi) / (2.0 * h), max_relative = 1e-6);
                assert_relative_eq!(v.curvature, (p.slope - m.slope) / (2.0 * h), max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn domain_errors() {
        let basis = ModalBasis::new(2, L).unwrap();
        assert!(matches!(basis.flexural(2, 0.1), Err(Error::Domain(_))));
        assert!(matches!(basis.flexural(0, -0.01), Err(Error::Domain(_))));
        assert!(matches!(basis.torsional(0, 0.2), Err(Error::Domain(_))));
        assert!(ModalBasis::new(0, L).is_err());
    }
}
