//! Linearization at the shear `u = (x₂, 0)` on `𝕋 × ℝ`:
//! `dω_t + x₂ ∂₁dω = (1/Re) Δdω`.
//!
//! Streamwise modes are written `dω_n = dΩ_n e^{−inx₂t}` and `dΩ_n` is
//! represented by samples of its Fourier transform on a truncated uniform
//! `ξ` window, `dΩ_n(x₂) = ∫ dΩ_{nξ} e^{iξx₂} dξ`.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::solver::Reynolds;
use crate::spectral::NormConvention;

/// Window adequacy: amplitudes at `|ξ| = Ξ` must fall below this.
pub const WINDOW_TOLERANCE: f64 = 1e-12;

/// Uniform samples on `[0, 2π) × [−L, L)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneGrid {
    pub n1: usize,
    pub n2: usize,
    pub half_width: f64,
}

impl PlaneGrid {
    pub fn new(n1: usize, n2: usize, half_width: f64) -> Result<Self> {
        if n1 == 0 || n2 == 0 || !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "bad plane grid {n1}x{n2} on half width {half_width}"
            )));
        }
        Ok(PlaneGrid {
            n1,
            n2,
            half_width,
        })
    }

    pub fn x1(&self, i: usize) -> f64 {
        2.0 * PI * i as f64 / self.n1 as f64
    }

    pub fn x2(&self, j: usize) -> f64 {
        -self.half_width + 2.0 * self.half_width * j as f64 / self.n2 as f64
    }

    pub fn cell_area(&self) -> f64 {
        (2.0 * PI / self.n1 as f64) * (2.0 * self.half_width / self.n2 as f64)
    }
}

/// Real samples on a [`PlaneGrid`], stored with `x₁` outer.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneField {
    pub grid: PlaneGrid,
    pub values: Vec<f64>,
}

impl PlaneField {
    pub fn from_fn(grid: PlaneGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.n1 * grid.n2);
        for i in 0..grid.n1 {
            for j in 0..grid.n2 {
                values.push(f(grid.x1(i), grid.x2(j)));
            }
        }
        PlaneField { grid, values }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.n2 + j]
    }

    /// `∫∫ f²` by the rectangle rule (spectrally accurate for periodic or
    /// rapidly decaying integrands).
    pub fn h0_norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>() * self.grid.cell_area()
    }

    /// Graded `Hᵏ` norm from the discrete Fourier transform of the samples,
    /// treating the `x₂` window as one period.
    pub fn sobolev_norm_sq(&self, k: u32) -> f64 {
        let g = self.grid;
        let spec = fft2(g, self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect());
        let area = 2.0 * PI * 2.0 * g.half_width;
        let scale = 1.0 / (g.n1 * g.n2) as f64;
        let mut sum = 0.0;
        for i in 0..g.n1 {
            let n = signed_index(i, g.n1) as f64;
            for j in 0..g.n2 {
                let xi = signed_index(j, g.n2) as f64 * PI / g.half_width;
                let c = spec[i * g.n2 + j] * scale;
                sum += c.norm_sqr() * NormConvention::grading(n * n + xi * xi, k);
            }
        }
        area * sum
    }

    pub fn sobolev_norm(&self, k: u32) -> f64 {
        self.sobolev_norm_sq(k).sqrt()
    }
}

fn signed_index(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

fn fft2(g: PlaneGrid, mut data: Vec<Complex64>) -> Vec<Complex64> {
    let mut planner = FftPlanner::new();
    let f2 = planner.plan_fft_forward(g.n2);
    f2.process(&mut data);
    let f1 = planner.plan_fft_forward(g.n1);
    let mut col = vec![Complex64::default(); g.n1];
    for j in 0..g.n2 {
        for i in 0..g.n1 {
            col[i] = data[i * g.n2 + j];
        }
        f1.process(&mut col);
        for i in 0..g.n1 {
            data[i * g.n2 + j] = col[i];
        }
    }
    data
}

/// `dω(t, x₁, x₂) = dω(0, x₁ − x₂t, x₂)` for an initial field given as a
/// function.
pub fn couette_inviscid_evolve<F>(dw0: F, t: f64) -> impl Fn(f64, f64) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    move |x1, x2| dw0(x1 - x2 * t, x2)
}

/// Inviscid evolution of sampled data: each `x₂` row is shifted in `x₁` by
/// `x₂ t` through its streamwise Fourier series, which is exact for data
/// band-limited in `x₁`.
pub fn couette_inviscid_evolve_sampled(dw0: &PlaneField, t: f64) -> PlaneField {
    let g = dw0.grid;
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(g.n1);
    let inv = planner.plan_fft_inverse(g.n1);
    let mut out = dw0.clone();
    let mut row = vec![Complex64::default(); g.n1];
    for j in 0..g.n2 {
        let shift = g.x2(j) * t;
        for i in 0..g.n1 {
            row[i] = Complex64::new(dw0.get(i, j), 0.0);
        }
        fwd.process(&mut row);
        for (i, z) in row.iter_mut().enumerate() {
            let n = signed_index(i, g.n1);
            // the Nyquist mode of an even grid has no sign; keep it real
            let phase = if g.n1 % 2 == 0 && i == g.n1 / 2 {
                Complex64::new((n as f64 * shift).cos(), 0.0)
            } else {
                Complex64::from_polar(1.0, -(n as f64) * shift)
            };
            *z *= phase / g.n1 as f64;
        }
        inv.process(&mut row);
        for i in 0..g.n1 {
            out.values[i * g.n2 + j] = row[i].re;
        }
    }
    out
}

/// Samples of `dΩ_{nξ}` on the symmetric window `ξ_j = −Ξ + j h`,
/// `j = 0..count`, `h = 2Ξ/(count − 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CouetteModal {
    pub n: i64,
    pub xi_max: f64,
    pub amplitudes: Vec<Complex64>,
}

impl CouetteModal {
    pub fn from_spectrum(
        n: i64,
        xi_max: f64,
        count: usize,
        f: impl Fn(f64) -> Complex64,
    ) -> Result<Self> {
        if count < 3 || !(xi_max > 0.0 && xi_max.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "bad xi window: {count} samples on ±{xi_max}"
            )));
        }
        let mut m = CouetteModal {
            n,
            xi_max,
            amplitudes: vec![Complex64::default(); count],
        };
        for j in 0..count {
            m.amplitudes[j] = f(m.xi(j));
        }
        Ok(m)
    }

    /// Transform of a streamwise profile `dω_n(0, x₂)` by quadrature over
    /// `[−L, L]` with `samples` points: `dΩ_{nξ} = (1/2π) ∫ dω_n e^{−iξx₂} dx₂`.
    pub fn from_profile(
        n: i64,
        xi_max: f64,
        count: usize,
        half_width: f64,
        samples: usize,
        profile: impl Fn(f64) -> Complex64,
    ) -> Result<Self> {
        if samples < 2 {
            return Err(Error::InvalidArgument("too few profile samples".into()));
        }
        let dx = 2.0 * half_width / samples as f64;
        let pts: Vec<(f64, Complex64)> = (0..samples)
            .map(|j| {
                let x = -half_width + j as f64 * dx;
                (x, profile(x))
            })
            .collect();
        Self::from_spectrum(n, xi_max, count, |xi| {
            pts.iter()
                .map(|&(x, v)| v * Complex64::from_polar(1.0, -xi * x))
                .sum::<Complex64>()
                * (dx / (2.0 * PI))
        })
    }

    pub fn count(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.xi_max / (self.count() - 1) as f64
    }

    pub fn xi(&self, j: usize) -> f64 {
        -self.xi_max + j as f64 * self.spacing()
    }

    /// Largest amplitude on the window edge.
    pub fn window_defect(&self) -> f64 {
        let last = self.count() - 1;
        self.amplitudes[0].norm().max(self.amplitudes[last].norm())
    }

    pub fn window_adequate(&self) -> bool {
        self.window_defect() < WINDOW_TOLERANCE
    }

    /// The mode `−n`: `dΩ_{(−n)ξ} = conj(dΩ_{n(−ξ)})`, the reflection that
    /// keeps the reconstructed field real and commutes with the viscous factor.
    pub fn conjugate(&self) -> Self {
        CouetteModal {
            n: -self.n,
            xi_max: self.xi_max,
            amplitudes: self.amplitudes.iter().rev().map(|z| z.conj()).collect(),
        }
    }

    fn trapezoid(&self, mut f: impl FnMut(usize) -> f64) -> f64 {
        let last = self.count() - 1;
        let inner: f64 = (1..last).map(&mut f).sum();
        (inner + 0.5 * (f(0) + f(last))) * self.spacing()
    }
}

/// `exp(−(t/Re)[(ξ − nt/2)² + n²(t²/12 + 1)])`.
pub fn couette_viscous_factor(n: i64, xi: f64, t: f64, reynolds: Reynolds) -> f64 {
    let n = n as f64;
    let shifted = xi - 0.5 * n * t;
    (-t * reynolds.viscosity() * (shifted * shifted + n * n * (t * t / 12.0 + 1.0))).exp()
}

/// Multiplies each sample by [`couette_viscous_factor`]; `Re = ∞` is the
/// identity.
pub fn couette_viscous_evolve(modal: &CouetteModal, t: f64, reynolds: Reynolds) -> CouetteModal {
    let mut out = modal.clone();
    if reynolds.is_infinite() {
        return out;
    }
    for (j, a) in out.amplitudes.iter_mut().enumerate() {
        *a *= couette_viscous_factor(modal.n, modal.xi(j), t, reynolds);
    }
    out
}

/// Sampled field with the quadrature's window diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    pub field: PlaneField,
    /// Largest window-edge amplitude over all modes; a rough bound on the
    /// truncation error relative to the peak amplitude.
    pub window_defect: f64,
    /// Largest imaginary part discarded when taking the real field.
    pub imaginary_residue: f64,
}

fn check_closed(modals: &[CouetteModal]) -> Result<()> {
    for m in modals {
        let partner = modals.iter().find(|o| o.n == -m.n);
        let ok = match partner {
            Some(p) => {
                p.count() == m.count()
                    && p.xi_max == m.xi_max
                    && p
                        .amplitudes
                        .iter()
                        .zip(m.conjugate().amplitudes.iter())
                        .all(|(a, b)| (a - b).norm() <= 1e-14 * (1.0 + b.norm()))
            }
            None => false,
        };
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "modal set is not closed under conjugation at n = {}",
                m.n
            )));
        }
    }
    Ok(())
}

/// Evaluates `Σ_n e^{inx₁} e^{−inx₂t} ∫ dΩ_{nξ}(t) e^{iξx₂} dξ` on `grid`,
/// where the amplitudes passed in are `dΩ_{nξ}(t)` (already evolved).
pub fn couette_reconstruct(
    modals: &[CouetteModal],
    t: f64,
    grid: PlaneGrid,
) -> Result<Reconstruction> {
    check_closed(modals)?;
    let mut acc = vec![Complex64::default(); grid.n1 * grid.n2];
    let mut window_defect: f64 = 0.0;
    for m in modals {
        window_defect = window_defect.max(m.window_defect());
        let h = m.spacing();
        let last = m.count() - 1;
        let profile: Vec<Complex64> = (0..grid.n2)
            .map(|j| {
                let x2 = grid.x2(j);
                let mut s = Complex64::default();
                for (l, a) in m.amplitudes.iter().enumerate() {
                    let w = if l == 0 || l == last { 0.5 } else { 1.0 };
                    s += a * w * Complex64::from_polar(1.0, m.xi(l) * x2);
                }
                s * h * Complex64::from_polar(1.0, -(m.n as f64) * x2 * t)
            })
            .collect();
        for i in 0..grid.n1 {
            let e = Complex64::from_polar(1.0, m.n as f64 * grid.x1(i));
            for j in 0..grid.n2 {
                acc[i * grid.n2 + j] += e * profile[j];
            }
        }
    }
    if window_defect >= WINDOW_TOLERANCE {
        log::warn!("xi window truncates amplitudes of size {window_defect:e}");
    }
    let imaginary_residue = acc.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    Ok(Reconstruction {
        field: PlaneField {
            grid,
            values: acc.iter().map(|z| z.re).collect(),
        },
        window_defect,
        imaginary_residue,
    })
}

/// `4π² Σ_n ∫ |dΩ_{nξ}(0)|² e^{−(2t/Re)[…]} dξ` by the trapezoid rule.
pub fn couette_h0_identity(modals: &[CouetteModal], t: f64, reynolds: Reynolds) -> f64 {
    let sum: f64 = modals
        .iter()
        .map(|m| {
            m.trapezoid(|j| {
                m.amplitudes[j].norm_sqr()
                    * couette_viscous_factor(m.n, m.xi(j), t, reynolds).powi(2)
            })
        })
        .sum();
    4.0 * PI * PI * sum
}
