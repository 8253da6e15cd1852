//! Directional derivative of the solution operator along the translation
//! family `U(t, x, a) = u(t, x − a t) + a`.
//!
//! Differentiating in `a_m` at `a = 0` gives the field
//! `e_m + Σ_k (−i k_m t) u_k e^{ik·x}`. Summed over both axes its squared
//! `Hⁿ` norm is `d (2π)^d + t² (‖u‖²_{n+1} − ‖u‖²₀)`, which is infinite at any
//! `t > 0` once `u` leaves `H^{n+1}`. Truncation scans make that divergence
//! observable: the squared norm keeps growing with `K` instead of settling.
//!
//! The identity holds for any field at a fixed time, so scans use static
//! coefficient profiles rather than evolved rough solutions.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::spectral::{NormConvention, SpectralField, WaveVector};

const DIM: usize = 2;

/// `∂U/∂a_m` at `a = 0`, for axis `m ∈ {0, 1}`.
pub fn translation_derivative(u: &SpectralField, t: f64, m: usize) -> Result<SpectralField> {
    u.require_vector()?;
    if m >= DIM {
        return Err(Error::InvalidArgument(format!("axis {m} out of range")));
    }
    let mut out = SpectralField::zeros_vector(u.k_max());
    for (i, k) in u.modes() {
        let factor = Complex64::new(0.0, -(k.0[m] as f64) * t);
        for c in 0..DIM {
            out.component_mut(c)[i] = factor * u.component(c)[i];
        }
    }
    let origin = out.index(WaveVector::new(0, 0)).unwrap();
    out.component_mut(m)[origin] = Complex64::new(1.0, 0.0);
    Ok(out)
}

/// Closed form `d (2π)^d + t² (‖u‖²_{n+1} − ‖u‖²₀)`.
pub fn translation_derivative_normsq_total(u: &SpectralField, n: u32, t: f64) -> Result<f64> {
    u.require_vector()?;
    Ok(DIM as f64 * NormConvention::BOX_MEASURE
        + t * t * (u.sobolev_norm_sq(n + 1) - u.sobolev_norm_sq(0)))
}

/// `Σ_m ‖∂U/∂a_m‖²ₙ` summed from the derivative fields themselves.
pub fn translation_derivative_normsq_direct(u: &SpectralField, n: u32, t: f64) -> Result<f64> {
    (0..DIM)
        .map(|m| translation_derivative(u, t, m).map(|d| d.sobolev_norm_sq(n)))
        .sum()
}

/// Coefficient profile `|u_k| = A (1 + |k|²)^{−s/2}` with seeded phases.
///
/// In two dimensions the field lies in `Hⁿ` iff `s > n + 1` and fails
/// `H^{n+1}` iff `s ≤ n + 2`; `s = n + 2` is the borderline case where the
/// `H^{n+1}` norm diverges logarithmically in `K`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailSpectrumSpec {
    pub decay: f64,
    pub amplitude: f64,
    pub seed: u64,
}

impl TailSpectrumSpec {
    /// Decay `s = n + 1 + d/2`: in `Hⁿ`, not in `H^{n+1}`.
    pub fn borderline(n: u32, seed: u64) -> Self {
        TailSpectrumSpec {
            decay: n as f64 + 1.0 + DIM as f64 / 2.0,
            amplitude: 1.0,
            seed,
        }
    }

    /// Decay `s = n + 2 + d/2`: in `H^{n+1}`, so scans converge.
    pub fn convergent(n: u32, seed: u64) -> Self {
        TailSpectrumSpec {
            decay: n as f64 + 2.0 + DIM as f64 / 2.0,
            amplitude: 1.0,
            seed,
        }
    }

    /// Vector field realizing the profile on the `K` truncation. Phases are
    /// drawn once per mode, so fields at different `K` agree on shared modes
    /// when generated from the same largest truncation.
    pub fn field(&self, k_max: usize) -> SpectralField {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut f = SpectralField::zeros_vector(k_max);
        for c in 0..DIM {
            for (i, k) in SpectralField::mode_iter(k_max) {
                let mag = self.amplitude * (1.0 + k.norm_sq()).powf(-self.decay / 2.0);
                let phase: f64 = rng.gen_range(0.0..2.0 * PI);
                f.component_mut(c)[i] = Complex64::from_polar(mag, phase);
            }
        }
        // keep |u_k| exact: pair each mode with the conjugate of its mirror
        let len = f.component(0).len();
        for c in 0..DIM {
            let comp = f.component_mut(c);
            for i in 0..len / 2 {
                comp[len - 1 - i] = comp[i].conj();
            }
            let mid = len / 2;
            comp[mid] = Complex64::new(comp[mid].norm(), 0.0);
        }
        f
    }
}

/// One row of a truncation scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanRow {
    pub k_max: usize,
    pub norm_total: f64,
    /// `(N²(K_i) − N²(K_{i−1})) / ln(K_i / K_{i−1})`; absent on the first row.
    pub norm_sq_increment_per_ln_k: Option<f64>,
}

/// Total translation-derivative norm for each truncation in `k_list`.
pub fn divergence_scan(
    spec: &TailSpectrumSpec,
    n: u32,
    t: f64,
    k_list: &[usize],
) -> Result<Vec<ScanRow>> {
    if k_list.is_empty() {
        return Err(Error::InvalidArgument("empty truncation list".into()));
    }
    if k_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "truncation list must be strictly increasing".into(),
        ));
    }
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("time {t} is not finite")));
    }
    let full = spec.field(*k_list.last().unwrap());
    let sq: Vec<f64> = k_list
        .par_iter()
        .map(|&k| {
            let u = full.with_truncation(k);
            translation_derivative_normsq_total(&u, n, t).unwrap()
        })
        .collect();
    let mut rows = Vec::with_capacity(k_list.len());
    for (i, &k) in k_list.iter().enumerate() {
        let inc = (i > 0)
            .then(|| (sq[i] - sq[i - 1]) / (k as f64 / k_list[i - 1] as f64).ln());
        rows.push(ScanRow {
            k_max: k,
            norm_total: sq[i].sqrt(),
            norm_sq_increment_per_ln_k: inc,
        });
    }
    Ok(rows)
}
