//! Reduced-order coefficient matrices of the coupled flexural-torsional model.
//!
//! With `w = sum phi_j p_j` and `theta = sum psi_j q_j` the modal equations are
//!
//! ```text
//! M1 p'' + CB p' + Omega C1 q' + (K1 + Omega^2 D1) p + G1[p, p, p] = F1 v
//! M2 q'' + CT q' + Omega C2 p' + K2 q = 0
//! ```
//!
//! Every integral is evaluated with Gauss-Legendre panels split at the patch
//! edges, so no integrand crosses a jump in the section properties.

use std::io::{self, Write};

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::basis::{FlexuralValue, ModalBasis};
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::section::{BeamSpec, PiezoSpec, SectionProperties};

/// Gauss points per panel used by [`assemble`].
pub const DEFAULT_GAUSS_POINTS: usize = 32;

/// Dense rank-4 tensor of the cubic membrane stiffness, `n^4` entries in
/// `[i][j][k][l]` row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicTensor {
    n: usize,
    data: Vec<f64>,
}

impl CubicTensor {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n.pow(4)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.n + k) * self.n + l
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.data[self.offset(i, j, k, l)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, value: f64) {
        let o = self.offset(i, j, k, l);
        self.data[o] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// `g_i = sum_{jkl} G_ijkl p_j p_k p_l`.
    pub fn contract3(&self, p: &[f64]) -> DVector<f64> {
        let n = self.n;
        let mut out = DVector::zeros(n);
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                for k in 0..n {
                    let pjk = p[j] * p[k];
                    let base = self.offset(i, j, k, 0);
                    let row = &self.data[base..base + n];
                    acc += pjk * row.iter().zip(p).map(|(g, pl)| g * pl).sum::<f64>();
                }
            }
            out[i] = acc;
        }
        out
    }

    /// `sum_{ijkl} G_ijkl p_i p_j p_k p_l`.
    pub fn contract4(&self, p: &[f64]) -> f64 {
        self.contract3(p).iter().zip(p).map(|(g, pi)| g * pi).sum()
    }
}

/// All modal coefficient matrices for one beam/patch/basis combination.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemMatrices {
    pub n: usize,
    /// Flexural modal mass.
    pub m1: DMatrix<f64>,
    /// Torsional modal inertia.
    pub m2: DMatrix<f64>,
    /// Flexural modal damping (diagonal).
    pub cb: DMatrix<f64>,
    /// Torsional modal damping (diagonal).
    pub ct: DMatrix<f64>,
    /// Gyroscopic coupling of twist rate into the flexural equations.
    pub c1: DMatrix<f64>,
    /// Gyroscopic coupling of deflection rate into the torsional equations.
    pub c2: DMatrix<f64>,
    /// Flexural stiffness.
    pub k1: DMatrix<f64>,
    /// Torsional stiffness.
    pub k2: DMatrix<f64>,
    /// Rotation stiffness term, multiplied by `Omega^2`.
    pub d1: DMatrix<f64>,
    /// Cubic membrane stiffness.
    pub g1: CubicTensor,
    /// Generalized flexural force per volt of patch voltage.
    pub f1: DVector<f64>,
    /// Patch moment per volt (N m/V).
    pub mp0: f64,
}

impl SystemMatrices {
    /// Every stored value in a fixed order, for checksums and comparisons.
    pub fn flat_values(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for m in self.named_matrices() {
            out.extend(m.1.iter());
        }
        out.extend(self.g1.as_slice());
        out.extend(self.f1.iter());
        out.push(self.mp0);
        out
    }

    pub fn named_matrices(&self) -> [(&'static str, &DMatrix<f64>); 9] {
        [
            ("M1", &self.m1),
            ("M2", &self.m2),
            ("CB", &self.cb),
            ("CT", &self.ct),
            ("C1", &self.c1),
            ("C2", &self.c2),
            ("K1", &self.k1),
            ("K2", &self.k2),
            ("D1", &self.d1),
        ]
    }

    /// Writes the matrices as plain text, row-major, one block per quantity.
    pub fn write_text<W: Write>(&self, mut out: W) -> io::Result<()> {
        let n = self.n;
        writeln!(out, "# spinbeam system matrices")?;
        writeln!(out, "# n = {n}")?;
        writeln!(out, "# units (SI): M1 kg, M2 kg m^2, CB kg/s, CT kg m^2/s, C1 C2 kg m,")?;
        writeln!(out, "#   K1 N/m, K2 N m, D1 kg m (times Omega^2), G1 N/m^3, F1 N/V, Mp0 N m/V")?;
        writeln!(out, "# flexural coordinates are in metres, torsional in radians")?;
        writeln!(out, "# blocks: NAME dims..., then rows; G1 rows are indexed by (i, j, k), columns by l")?;
        for (name, m) in self.named_matrices() {
            writeln!(out, "{name} {n} {n}")?;
            for r in 0..n {
                write_row(&mut out, (0..n).map(|c| m[(r, c)]))?;
            }
        }
        writeln!(out, "G1 {n} {n} {n} {n}")?;
        for row in self.g1.as_slice().chunks(n) {
            write_row(&mut out, row.iter().copied())?;
        }
        writeln!(out, "F1 {n}")?;
        write_row(&mut out, self.f1.iter().copied())?;
        writeln!(out, "Mp0 1")?;
        write_row(&mut out, std::iter::once(self.mp0))?;
        Ok(())
    }
}

fn write_row<W: Write>(out: &mut W, values: impl Iterator<Item = f64>) -> io::Result<()> {
    let line: Vec<String> = values.map(|v| format!("{v:e}")).collect();
    writeln!(out, "{}", line.join(" "))
}

/// Assembles with [`DEFAULT_GAUSS_POINTS`] per panel.
pub fn assemble(beam: &BeamSpec, piezo: &PiezoSpec, basis: &ModalBasis) -> Result<SystemMatrices> {
    assemble_with(beam, piezo, basis, DEFAULT_GAUSS_POINTS)
}

/// Assembles every coefficient matrix using `points` Gauss nodes per panel,
/// then fills the modal damping from the `Omega = 0` frequencies.
pub fn assemble_with(
    beam: &BeamSpec,
    piezo: &PiezoSpec,
    basis: &ModalBasis,
    points: usize,
) -> Result<SystemMatrices> {
    beam.validate()?;
    piezo.validate(beam)?;
    if (basis.length() - beam.length).abs() > 1e-12 * beam.length {
        return Err(Error::config(
            "modes",
            format!("basis length {} does not match beam length {}", basis.length(), beam.length),
        ));
    }
    let n = basis.modes();
    let rule = GaussLegendre::new(points);

    let mut m1 = DMatrix::zeros(n, n);
    let mut m2 = DMatrix::zeros(n, n);
    let mut c1 = DMatrix::zeros(n, n);
    let mut c2 = DMatrix::zeros(n, n);
    let mut k1 = DMatrix::zeros(n, n);
    let mut k2 = DMatrix::zeros(n, n);
    let mut d1 = DMatrix::zeros(n, n);
    let mut g1 = CubicTensor::zeros(n);

    let bare = SectionProperties::bare(beam);
    let bonded = SectionProperties::bonded(beam, piezo);
    let panels = [
        (0.0, piezo.start, &bare),
        (piezo.start, piezo.end, &bonded),
        (piezo.end, beam.length, &bare),
    ];

    let mut flex = vec![
        FlexuralValue {
            phi: 0.0,
            slope: 0.0,
            curvature: 0.0
        };
        n
    ];
    let mut tors = vec![(0.0, 0.0); n];
    for (a, b, sec) in panels {
        if b <= a {
            continue;
        }
        for (x, w) in rule.mapped(a, b) {
            for j in 0..n {
                flex[j] = basis.flexural_unchecked(j, x);
                tors[j] = basis.torsional_unchecked(j, x);
            }
            for i in 0..n {
                for j in 0..n {
                    m1[(i, j)] += w * sec.rho_a * flex[i].phi * flex[j].phi;
                    k1[(i, j)] += w * sec.ei * flex[i].curvature * flex[j].curvature;
                    d1[(i, j)] += w * sec.ix * flex[i].phi * flex[j].curvature;
                    c1[(i, j)] += w * sec.ix * flex[i].phi * tors[j].1;
                    c2[(i, j)] += w * sec.ix * tors[i].0 * flex[j].slope;
                    m2[(i, j)] += w * sec.ix * tors[i].0 * tors[j].0;
                    k2[(i, j)] += w * sec.gj * tors[i].1 * tors[j].1;
                }
            }
            let half_ea = 0.5 * w * sec.ea;
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let s = half_ea * flex[i].slope * flex[j].slope * flex[k].slope;
                        for l in 0..n {
                            let o = g1.offset(i, j, k, l);
                            g1.data[o] += s * flex[l].slope;
                        }
                    }
                }
            }
        }
    }

    let mp0 = piezo.moment_per_volt(beam);
    let f1 = DVector::from_iterator(
        n,
        (0..n).map(|i| {
            mp0 * (basis.flexural_unchecked(i, piezo.end).slope
                - basis.flexural_unchecked(i, piezo.start).slope)
        }),
    );

    if m1.clone().cholesky().is_none() {
        return Err(Error::Consistency("assembled M1 is not positive definite".into()));
    }
    if m2.clone().cholesky().is_none() {
        return Err(Error::Consistency("assembled M2 is not positive definite".into()));
    }

    let mut matrices = SystemMatrices {
        n,
        m1,
        m2,
        cb: DMatrix::zeros(n, n),
        ct: DMatrix::zeros(n, n),
        c1,
        c2,
        k1,
        k2,
        d1,
        g1,
        f1,
        mp0,
    };
    let (cb, ct) = damping_matrices(&matrices, beam)?;
    matrices.cb = cb;
    matrices.ct = ct;
    Ok(matrices)
}

/// Ascending eigenvalues of the symmetric-definite pencil `(k, m)`.
pub(crate) fn generalized_eigenvalues(k: &DMatrix<f64>, m: &DMatrix<f64>) -> Result<Vec<f64>> {
    let chol = m
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Consistency("mass matrix is not positive definite".into()))?;
    let l = chol.l();
    let x = l
        .solve_lower_triangular(k)
        .ok_or_else(|| Error::Consistency("singular Cholesky factor".into()))?;
    let a = l
        .solve_lower_triangular(&x.transpose())
        .ok_or_else(|| Error::Consistency("singular Cholesky factor".into()))?;
    let a = 0.5 * (&a + a.transpose());
    let mut values: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Linear natural frequencies (rad/s) at base rate `omega`, flexural then
/// torsional, each ascending.
///
/// The flexural pencil is `(K1 + Omega^2 sym(D1), M1)`; the torsional pencil
/// `(K2, M2)` does not depend on the rotation.
pub fn linear_frequencies(matrices: &SystemMatrices, omega: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let d1_sym = 0.5 * (&matrices.d1 + matrices.d1.transpose());
    let k_eff = &matrices.k1 + omega * omega * d1_sym;
    let to_freq = |values: Vec<f64>| -> Result<Vec<f64>> {
        if let Some(&bad) = values.iter().find(|v| **v < 0.0) {
            return Err(Error::SpinDestabilized { eigenvalue: bad });
        }
        Ok(values.into_iter().map(f64::sqrt).collect())
    };
    let flex = to_freq(generalized_eigenvalues(&k_eff, &matrices.m1)?)?;
    let tors = to_freq(generalized_eigenvalues(&matrices.k2, &matrices.m2)?)?;
    Ok((flex, tors))
}

/// Diagonal modal damping `C_ii = 2 zeta_i omega_i M_ii`, frequencies taken at
/// `Omega = 0`.
pub fn damping_matrices(matrices: &SystemMatrices, beam: &BeamSpec) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let n = matrices.n;
    for (name, list) in [("beam.zeta_flex", &beam.zeta_flex), ("beam.zeta_tors", &beam.zeta_tors)] {
        if list.len() < n {
            return Err(Error::config(
                name,
                format!("{} damping ratios given for {n} modes", list.len()),
            ));
        }
    }
    let (wf, wt) = linear_frequencies(matrices, 0.0)?;
    let cb = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            2.0 * beam.zeta_flex[i] * wf[i] * matrices.m1[(i, i)]
        } else {
            0.0
        }
    });
    let ct = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            2.0 * beam.zeta_tors[i] * wt[i] * matrices.m2[(i, i)]
        } else {
            0.0
        }
    });
    Ok((cb, ct))
}
