//! Test-only oracles, kept independent of the library's quadrature and
//! contraction code paths.
#![allow(dead_code)]

use std::f64::consts::PI;

use spinbeam::{section_properties, BeamSpec, ModalBasis, PiezoSpec, SectionProperties};

/// Brute-force coefficient matrices from composite trapezoid sums.
pub struct TrapezoidOracle {
    pub m1: Vec<f64>,
    pub m2: Vec<f64>,
    pub c1: Vec<f64>,
    pub c2: Vec<f64>,
    pub k1: Vec<f64>,
    pub k2: Vec<f64>,
    pub d1: Vec<f64>,
    pub g1: Vec<f64>,
}

/// Composite trapezoid with `total` intervals shared across the three panels
/// `[0, l1]`, `[l1, l2]`, `[l2, L]` in proportion to their lengths. Each panel
/// takes its section properties from its midpoint, so the Heaviside jumps
/// never fall inside a trapezoid.
pub fn trapezoid_oracle(beam: &BeamSpec, piezo: &PiezoSpec, basis: &ModalBasis, total: usize) -> TrapezoidOracle {
    let n = basis.modes();
    let mut out = TrapezoidOracle {
        m1: vec![0.0; n * n],
        m2: vec![0.0; n * n],
        c1: vec![0.0; n * n],
        c2: vec![0.0; n * n],
        k1: vec![0.0; n * n],
        k2: vec![0.0; n * n],
        d1: vec![0.0; n * n],
        g1: vec![0.0; n.pow(4)],
    };
    let edges = [0.0, piezo.start, piezo.end, beam.length];
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let intervals = ((total as f64) * (b - a) / beam.length).round().max(1.0) as usize;
        let sec: SectionProperties = section_properties(0.5 * (a + b), beam, piezo).unwrap();
        let h = (b - a) / intervals as f64;
        for k in 0..=intervals {
            let x = if k == intervals { b } else { a + k as f64 * h };
            let weight = if k == 0 || k == intervals { 0.5 * h } else { h };
            let f: Vec<_> = (0..n).map(|j| basis.flexural(j, x).unwrap()).collect();
            let t: Vec<_> = (0..n).map(|j| basis.torsional(j, x).unwrap()).collect();
            for i in 0..n {
                for j in 0..n {
                    let o = i * n + j;
                    out.m1[o] += weight * sec.rho_a * f[i].phi * f[j].phi;
                    out.k1[o] += weight * sec.ei * f[i].curvature * f[j].curvature;
                    out.d1[o] += weight * sec.ix * f[i].phi * f[j].curvature;
                    out.c1[o] += weight * sec.ix * f[i].phi * t[j].1;
                    out.c2[o] += weight * sec.ix * t[i].0 * f[j].slope;
                    out.m2[o] += weight * sec.ix * t[i].0 * t[j].0;
                    out.k2[o] += weight * sec.gj * t[i].1 * t[j].1;
                    for k in 0..n {
                        for l in 0..n {
                            out.g1[((i * n + j) * n + k) * n + l] +=
                                weight * 0.5 * sec.ea * f[i].slope * f[j].slope * f[k].slope * f[l].slope;
                        }
                    }
                }
            }
        }
    }
    out
}

/// `||a - b||_F / ||b||_F`.
pub fn relative_frobenius(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    (num / den).sqrt()
}

/// Frequency (Hz) of the largest Hann-windowed DFT magnitude of `signal`
/// over `[f_lo, f_hi]`, scanned on a grid of spacing `df`.
pub fn dft_peak(times: &[f64], signal: &[f64], f_lo: f64, f_hi: f64, df: f64) -> f64 {
    let t0 = times[0];
    let span = times[times.len() - 1] - t0;
    let windowed: Vec<f64> = times
        .iter()
        .zip(signal)
        .map(|(t, s)| s * 0.5 * (1.0 - (2.0 * PI * (t - t0) / span).cos()))
        .collect();
    let mut best = (f_lo, 0.0);
    let steps = ((f_hi - f_lo) / df).round() as usize;
    for k in 0..=steps {
        let f = f_lo + k as f64 * df;
        let w = 2.0 * PI * f;
        let (mut re, mut im) = (0.0, 0.0);
        for (t, s) in times.iter().zip(&windowed) {
            let (sn, cs) = (w * t).sin_cos();
            re += s * cs;
            im -= s * sn;
        }
        let mag = re * re + im * im;
        if mag > best.1 {
            best = (f, mag);
        }
    }
    best.0
}

/// Period of a near-sinusoid from linearly interpolated upward zero crossings.
pub fn zero_crossing_period(times: &[f64], signal: &[f64]) -> f64 {
    let mut crossings = Vec::new();
    for k in 1..signal.len() {
        if signal[k - 1] < 0.0 && signal[k] >= 0.0 {
            let frac = -signal[k - 1] / (signal[k] - signal[k - 1]);
            crossings.push(times[k - 1] + frac * (times[k] - times[k - 1]));
        }
    }
    (crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64
}
