//! Truncated Fourier representation of fields on the periodic box `[0, 2π]²`.
//!
//! A [`SpectralField`] stores the full `(2K+1)²` coefficient square per
//! component, ordered row-major with `k₁` outer and `k₂` inner. Real fields
//! keep the conjugate pairing `c(−k) = conj(c(k))`; every operation in this
//! module preserves it.
//!
//! Sobolev norms follow one convention throughout the crate:
//!
//! ```text
//! ‖u‖²ₙ = (2π)² Σ_k (Σ_{j=0..n} |k|^{2j}) Σ_c |u_k^{(c)}|²
//! ```
//!
//! With this grading the translation-derivative identity in
//! [`crate::theorem`] holds exactly rather than up to equivalence constants.

mod transform;

pub use transform::{fft_friendly_at_least, GridValues, Transformer};

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Integer wave vector `(k₁, k₂)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WaveVector(pub [i64; 2]);

impl WaveVector {
    pub fn new(k1: i64, k2: i64) -> Self {
        WaveVector([k1, k2])
    }

    pub fn norm_sq(&self) -> f64 {
        let [a, b] = self.0;
        (a * a + b * b) as f64
    }

    pub fn neg(&self) -> Self {
        WaveVector([-self.0[0], -self.0[1]])
    }

    /// Largest absolute component, the quantity bounded by the truncation.
    pub fn max_abs(&self) -> u64 {
        self.0[0].unsigned_abs().max(self.0[1].unsigned_abs())
    }
}

/// Norm bookkeeping shared by every module.
pub struct NormConvention;

impl NormConvention {
    /// Box measure `(2π)^d` for `d = 2`.
    pub const BOX_MEASURE: f64 = 4.0 * PI * PI;

    /// Inhomogeneous grading `Σ_{j=0..n} |k|^{2j}`; equals 1 at `k = 0`.
    pub fn grading(k_sq: f64, n: u32) -> f64 {
        let mut acc = 1.0;
        let mut pow = 1.0;
        for _ in 0..n {
            pow *= k_sq;
            acc += pow;
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Scalar,
    Vector,
}

/// Truncated Fourier coefficients of a scalar or 2-vector field.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    k_max: usize,
    components: Vec<Vec<Complex64>>,
}

impl SpectralField {
    pub fn zeros(k_max: usize, kind: FieldKind) -> Self {
        let side = 2 * k_max + 1;
        let n = match kind {
            FieldKind::Scalar => 1,
            FieldKind::Vector => 2,
        };
        SpectralField {
            k_max,
            components: vec![vec![Complex64::new(0.0, 0.0); side * side]; n],
        }
    }

    pub fn zeros_scalar(k_max: usize) -> Self {
        Self::zeros(k_max, FieldKind::Scalar)
    }

    pub fn zeros_vector(k_max: usize) -> Self {
        Self::zeros(k_max, FieldKind::Vector)
    }

    /// Builds a field from raw component arrays (1 or 2 of them, each `(2K+1)²` long).
    pub fn from_components(k_max: usize, components: Vec<Vec<Complex64>>) -> Result<Self> {
        let side = 2 * k_max + 1;
        if components.is_empty() || components.len() > 2 {
            return Err(Error::InvalidArgument(format!(
                "expected 1 or 2 components, got {}",
                components.len()
            )));
        }
        if let Some(c) = components.iter().find(|c| c.len() != side * side) {
            return Err(Error::InvalidArgument(format!(
                "component has {} coefficients, expected {}",
                c.len(),
                side * side
            )));
        }
        Ok(SpectralField { k_max, components })
    }

    /// Builds a real field from a callback giving the coefficient of each
    /// mode; the result is symmetrized.
    pub fn from_fn(
        k_max: usize,
        kind: FieldKind,
        mut coeff: impl FnMut(usize, WaveVector) -> Complex64,
    ) -> Self {
        let mut f = Self::zeros(k_max, kind);
        for c in 0..f.num_components() {
            for (i, k) in Self::mode_iter(k_max) {
                f.components[c][i] = coeff(c, k);
            }
        }
        f.symmetrize();
        f
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Coefficients per axis, `2K + 1`.
    pub fn side(&self) -> usize {
        2 * self.k_max + 1
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn kind(&self) -> FieldKind {
        if self.components.len() == 1 {
            FieldKind::Scalar
        } else {
            FieldKind::Vector
        }
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.components[c]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        &mut self.components[c]
    }

    pub fn components(&self) -> &[Vec<Complex64>] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Vec<Complex64>> {
        self.components
    }

    /// Flat index of `k` or `None` when outside the truncation.
    pub fn index(&self, k: WaveVector) -> Option<usize> {
        index_of(self.k_max, k)
    }

    pub fn wave_vector(&self, idx: usize) -> WaveVector {
        wave_vector_of(self.k_max, idx)
    }

    /// Iterates `(flat index, wave vector)` over a `K` truncation.
    pub fn mode_iter(k_max: usize) -> impl Iterator<Item = (usize, WaveVector)> {
        let side = 2 * k_max + 1;
        (0..side * side).map(move |i| (i, wave_vector_of(k_max, i)))
    }

    pub fn modes(&self) -> impl Iterator<Item = (usize, WaveVector)> {
        Self::mode_iter(self.k_max)
    }

    pub fn get(&self, c: usize, k: WaveVector) -> Complex64 {
        self.index(k)
            .map(|i| self.components[c][i])
            .unwrap_or_default()
    }

    /// Sets the coefficient at `k` and its conjugate partner at `−k`.
    pub fn set_pair(&mut self, c: usize, k: WaveVector, value: Complex64) {
        let i = self.index(k).expect("wave vector outside truncation");
        let j = self.index(k.neg()).unwrap();
        if i == j {
            self.components[c][i] = Complex64::new(value.re, 0.0);
        } else {
            self.components[c][i] = value;
            self.components[c][j] = value.conj();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.iter().all(|z| z.re == 0.0 && z.im == 0.0))
    }

    pub fn is_finite(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
    }

    /// Largest `|c(−k) − conj(c(k))|` over all modes and components.
    pub fn reality_defect(&self) -> f64 {
        let n = self.components[0].len();
        let mut worst: f64 = 0.0;
        for comp in &self.components {
            for i in 0..n {
                // the mirror of flat index i is n-1-i in this layout
                let d = (comp[n - 1 - i] - comp[i].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Projects onto real fields: `c(k) ← (c(k) + conj(c(−k)))/2`.
    pub fn symmetrize(&mut self) {
        let n = self.components[0].len();
        for comp in &mut self.components {
            for i in 0..n / 2 {
                let j = n - 1 - i;
                let avg = (comp[i] + comp[j].conj()) * 0.5;
                comp[i] = avg;
                comp[j] = avg.conj();
            }
            let mid = n / 2;
            comp[mid] = Complex64::new(comp[mid].re, 0.0);
        }
    }

    pub fn scale(&mut self, alpha: f64) {
        for comp in &mut self.components {
            comp.iter_mut().for_each(|z| *z *= alpha);
        }
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        let mut out = self.clone();
        out.scale(alpha);
        out
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.k_max != other.k_max {
            return Err(Error::TruncationMismatch {
                left: self.k_max,
                right: other.k_max,
            });
        }
        if self.components.len() != other.components.len() {
            return Err(Error::InvalidArgument(
                "scalar and vector fields cannot be combined".into(),
            ));
        }
        Ok(())
    }

    /// `self += alpha · other`.
    pub fn axpy(&mut self, alpha: f64, other: &Self) -> Result<()> {
        self.check_compatible(other)?;
        for (a, b) in self.components.iter_mut().zip(&other.components) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y * alpha;
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.axpy(1.0, other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.axpy(-1.0, other)?;
        Ok(out)
    }

    /// Largest coefficient-wise difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self
            .components
            .iter()
            .zip(&other.components)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.components
            .iter()
            .flat_map(|c| c.iter().map(|z| z.norm()))
            .fold(0.0, f64::max)
    }

    /// Re-truncates to `k_new`, dropping or zero-padding modes.
    pub fn with_truncation(&self, k_new: usize) -> Self {
        let mut out = Self::zeros(k_new, self.kind());
        let kmin = self.k_max.min(k_new) as i64;
        for c in 0..self.num_components() {
            for k1 in -kmin..=kmin {
                for k2 in -kmin..=kmin {
                    let k = WaveVector::new(k1, k2);
                    let src = self.index(k).unwrap();
                    let dst = out.index(k).unwrap();
                    out.components[c][dst] = self.components[c][src];
                }
            }
        }
        out
    }

    /// L² inner product `(2π)² Σ_k Σ_c Re(a_k conj(b_k))`.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        let s: f64 = self
            .components
            .iter()
            .zip(&other.components)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x * y.conj()).re))
            .sum();
        Ok(NormConvention::BOX_MEASURE * s)
    }

    /// Squared Sobolev norm under the crate-wide convention.
    pub fn sobolev_norm_sq(&self, n: u32) -> f64 {
        let mut acc = 0.0;
        for (i, k) in self.modes() {
            let energy: f64 = self.components.iter().map(|c| c[i].norm_sqr()).sum();
            if energy != 0.0 {
                acc += NormConvention::grading(k.norm_sq(), n) * energy;
            }
        }
        NormConvention::BOX_MEASURE * acc
    }

    pub fn sobolev_norm(&self, n: u32) -> f64 {
        self.sobolev_norm_sq(n).sqrt()
    }

    /// Multiplies each coefficient by `f(k)`, a real even symbol.
    pub fn apply_symbol(&mut self, mut f: impl FnMut(WaveVector) -> f64) {
        for (i, k) in Self::mode_iter(self.k_max) {
            let m = f(k);
            for comp in &mut self.components {
                comp[i] *= m;
            }
        }
    }

    /// Divergence `Σ_m i k_m u_k^{(m)}` of a vector field.
    pub fn divergence(&self) -> Result<Self> {
        self.require_vector()?;
        let mut out = Self::zeros_scalar(self.k_max);
        for (i, k) in self.modes() {
            let [k1, k2] = k.0;
            out.components[0][i] = Complex64::i()
                * (self.components[0][i] * k1 as f64 + self.components[1][i] * k2 as f64);
        }
        Ok(out)
    }

    /// Largest `|k · u_k|`; zero for divergence-free fields.
    pub fn divergence_defect(&self) -> Result<f64> {
        Ok(self.divergence()?.max_abs())
    }

    /// Gradient `(i k₁ f, i k₂ f)` of a scalar field.
    pub fn gradient(&self) -> Result<Self> {
        self.require_scalar()?;
        let mut out = Self::zeros_vector(self.k_max);
        for (i, k) in self.modes() {
            let [k1, k2] = k.0;
            let ik = self.components[0][i] * Complex64::i();
            out.components[0][i] = ik * k1 as f64;
            out.components[1][i] = ik * k2 as f64;
        }
        Ok(out)
    }

    pub(crate) fn require_vector(&self) -> Result<()> {
        if self.kind() != FieldKind::Vector {
            return Err(Error::InvalidArgument("expected a vector field".into()));
        }
        Ok(())
    }

    pub(crate) fn require_scalar(&self) -> Result<()> {
        if self.kind() != FieldKind::Scalar {
            return Err(Error::InvalidArgument("expected a scalar field".into()));
        }
        Ok(())
    }

    /// Mean value (k = 0 coefficient) of each component.
    pub fn mean(&self) -> Vec<f64> {
        let mid = self.components[0].len() / 2;
        self.components.iter().map(|c| c[mid].re).collect()
    }
}

fn index_of(k_max: usize, k: WaveVector) -> Option<usize> {
    let km = k_max as i64;
    let [k1, k2] = k.0;
    if k1.abs() > km || k2.abs() > km {
        return None;
    }
    let side = 2 * km + 1;
    Some(((k1 + km) * side + (k2 + km)) as usize)
}

fn wave_vector_of(k_max: usize, idx: usize) -> WaveVector {
    let side = 2 * k_max + 1;
    let km = k_max as i64;
    WaveVector::new((idx / side) as i64 - km, (idx % side) as i64 - km)
}

/// Sobolev `Hⁿ` norm of a field under the crate-wide convention.
pub fn sobolev_norm(field: &SpectralField, n: u32) -> f64 {
    field.sobolev_norm(n)
}

/// Biot–Savart inversion: `ψ_k = ω_k/|k|²`, `u = (∂₂ψ, −∂₁ψ)`.
///
/// The torus admits no streamfunction for a nonzero mean vorticity, so the
/// k = 0 coefficient of `omega` must vanish. The k = 0 velocity coefficient
/// is the optional uniform `mean_flow`.
pub fn velocity_from_vorticity(
    omega: &SpectralField,
    mean_flow: Option<[f64; 2]>,
) -> Result<SpectralField> {
    omega.require_scalar()?;
    let mid = omega.components[0].len() / 2;
    let mean = omega.components[0][mid].norm();
    let scale = omega.max_abs().max(1.0);
    if mean > 1e-13 * scale {
        return Err(Error::NonzeroMeanVorticity(mean));
    }
    let mut u = SpectralField::zeros_vector(omega.k_max);
    let (first, rest) = u.components.split_at_mut(1);
    biot_savart_into(omega.k_max, &omega.components[0], &mut first[0], &mut rest[0]);
    if let Some([a, b]) = mean_flow {
        u.components[0][mid] = Complex64::new(a, 0.0);
        u.components[1][mid] = Complex64::new(b, 0.0);
    }
    Ok(u)
}

/// Velocity coefficients of a zero-mean vorticity, written into two slices.
pub(crate) fn biot_savart_into(
    k_max: usize,
    omega: &[Complex64],
    u1: &mut [Complex64],
    u2: &mut [Complex64],
) {
    for (i, k) in SpectralField::mode_iter(k_max) {
        let ksq = k.norm_sq();
        if ksq == 0.0 {
            u1[i] = Complex64::new(0.0, 0.0);
            u2[i] = Complex64::new(0.0, 0.0);
            continue;
        }
        let [k1, k2] = k.0;
        let ipsi = omega[i] * Complex64::i() / ksq;
        u1[i] = ipsi * k2 as f64;
        u2[i] = -ipsi * k1 as f64;
    }
}

/// Scalar vorticity `∂₁u₂ − ∂₂u₁` of a vector field.
pub fn vorticity_of(u: &SpectralField) -> Result<SpectralField> {
    u.require_vector()?;
    let mut w = SpectralField::zeros_scalar(u.k_max);
    for (i, k) in u.modes() {
        let [k1, k2] = k.0;
        w.components[0][i] =
            Complex64::i() * (u.components[1][i] * k1 as f64 - u.components[0][i] * k2 as f64);
    }
    Ok(w)
}

/// Leray projection `g − k (k·g)/|k|²`; the k = 0 mode passes through.
pub fn leray_project(g: &SpectralField) -> Result<SpectralField> {
    g.require_vector()?;
    let mut out = g.clone();
    for (i, k) in g.modes() {
        let ksq = k.norm_sq();
        if ksq == 0.0 {
            continue;
        }
        let [k1, k2] = k.0;
        let (k1, k2) = (k1 as f64, k2 as f64);
        let kdotg = g.components[0][i] * k1 + g.components[1][i] * k2;
        out.components[0][i] -= kdotg * (k1 / ksq);
        out.components[1][i] -= kdotg * (k2 / ksq);
    }
    Ok(out)
}

/// Dealiased advection `u·∇ω`, truncated back to `K`.
pub fn nonlinear_term(omega: &SpectralField, u: &SpectralField) -> Result<SpectralField> {
    omega.require_scalar()?;
    u.require_vector()?;
    if omega.k_max != u.k_max {
        return Err(Error::TruncationMismatch {
            left: omega.k_max,
            right: u.k_max,
        });
    }
    let mut tr = Transformer::dealiased(omega.k_max);
    tr.advection(u, omega)
}

/// Galilean translation family: `u(x − a t) + a`.
pub fn shift_and_boost(u: &SpectralField, a: [f64; 2], t: f64) -> Result<SpectralField> {
    u.require_vector()?;
    let mut out = u.clone();
    for (i, k) in u.modes() {
        let [k1, k2] = k.0;
        let phase = -(k1 as f64 * a[0] + k2 as f64 * a[1]) * t;
        let rot = Complex64::from_polar(1.0, phase);
        for comp in &mut out.components {
            comp[i] *= rot;
        }
    }
    let mid = out.components[0].len() / 2;
    out.components[0][mid] += a[0];
    out.components[1][mid] += a[1];
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sin_x2_velocity(k_max: usize) -> SpectralField {
        // u = (sin x2, 0): coefficient at (0, 1) is 1/(2i)
        let mut u = SpectralField::zeros_vector(k_max);
        u.set_pair(0, WaveVector::new(0, 1), Complex64::new(0.0, -0.5));
        u
    }

    #[test]
    fn sobolev_norm_examples() {
        let z = SpectralField::zeros_vector(4);
        assert_eq!(z.sobolev_norm(3), 0.0);

        let u = sin_x2_velocity(4);
        assert_abs_diff_eq!(u.sobolev_norm(0), 2f64.sqrt() * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(u.sobolev_norm(0), 4.442883, epsilon = 1e-6);
        assert_abs_diff_eq!(u.sobolev_norm(1), 2.0 * PI, epsilon = 1e-12);

        let mut c = SpectralField::zeros_vector(4);
        c.set_pair(0, WaveVector::new(0, 0), Complex64::new(1.0, 0.0));
        for n in 0..5 {
            assert_abs_diff_eq!(c.sobolev_norm(n), 2.0 * PI, epsilon = 1e-12);
        }
    }

    #[test]
    fn sobolev_norm_matches_grid_quadrature() {
        let u = sin_x2_velocity(4);
        let mut tr = Transformer::new(4, 16).unwrap();
        let g = tr.grid_evaluate(&u);
        let h = 2.0 * PI / 16.0;
        let quad: f64 = g
            .components
            .iter()
            .flat_map(|c| c.iter().map(|v| v * v))
            .sum::<f64>()
            * h
            * h;
        assert_abs_diff_eq!(quad, u.sobolev_norm_sq(0), epsilon = 1e-10);
    }

    #[test]
    fn grading_is_one_at_origin() {
        for n in 0..6 {
            assert_eq!(NormConvention::grading(0.0, n), 1.0);
        }
        assert_eq!(NormConvention::grading(2.0, 2), 1.0 + 2.0 + 4.0);
    }

    #[test]
    fn velocity_from_sin_and_cos_vorticity() {
        let mut w = SpectralField::zeros_scalar(3);
        w.set_pair(0, WaveVector::new(0, 1), Complex64::new(0.0, -0.5));
        let u = velocity_from_vorticity(&w, None).unwrap();
        // u1 = cos x2 -> coefficient 1/2 at (0, ±1); u2 = 0
        assert_abs_diff_eq!(u.get(0, WaveVector::new(0, 1)).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(u.get(0, WaveVector::new(0, 1)).im, 0.0, epsilon = 1e-15);
        assert_eq!(u.component(1).iter().map(|z| z.norm()).sum::<f64>(), 0.0);

        let mut w = SpectralField::zeros_scalar(3);
        w.set_pair(0, WaveVector::new(1, 0), Complex64::new(0.5, 0.0));
        let u = velocity_from_vorticity(&w, None).unwrap();
        // u = (0, sin x1)
        assert_abs_diff_eq!(u.get(1, WaveVector::new(1, 0)).im, -0.5, epsilon = 1e-15);
        assert_eq!(u.component(0).iter().map(|z| z.norm()).sum::<f64>(), 0.0);
        let back = vorticity_of(&u).unwrap();
        assert!(back.max_abs_diff(&w).unwrap() < 1e-15);
    }

    #[test]
    fn velocity_of_zero_is_zero() {
        let u = velocity_from_vorticity(&SpectralField::zeros_scalar(5), None).unwrap();
        assert!(u.is_zero());
    }

    #[test]
    fn nonzero_mean_vorticity_rejected() {
        let mut w = SpectralField::zeros_scalar(2);
        w.set_pair(0, WaveVector::new(0, 0), Complex64::new(0.3, 0.0));
        assert!(matches!(
            velocity_from_vorticity(&w, None),
            Err(Error::NonzeroMeanVorticity(_))
        ));
    }

    #[test]
    fn mean_flow_supplement_sets_zero_mode() {
        let w = SpectralField::zeros_scalar(2);
        let u = velocity_from_vorticity(&w, Some([0.0, 0.5])).unwrap();
        assert_eq!(u.mean(), vec![0.0, 0.5]);
    }

    #[test]
    fn leray_examples() {
        // pure gradient of sin x1 sin x2 is annihilated
        let mut phi = SpectralField::zeros_scalar(3);
        // sin x1 sin x2 = -(e^{i(x1+x2)} - e^{i(x1-x2)} - ...)/4
        phi.set_pair(0, WaveVector::new(1, 1), Complex64::new(-0.25, 0.0));
        phi.set_pair(0, WaveVector::new(1, -1), Complex64::new(0.25, 0.0));
        let g = phi.gradient().unwrap();
        let p = leray_project(&g).unwrap();
        assert!(p.max_abs() < 1e-16);

        // (sin x1, 0) is a gradient too: divergence removed entirely
        let mut g = SpectralField::zeros_vector(3);
        g.set_pair(0, WaveVector::new(1, 0), Complex64::new(0.0, -0.5));
        let p = leray_project(&g).unwrap();
        assert!(p.divergence_defect().unwrap() < 1e-15);
        assert!(p.max_abs() < 1e-16);

        // divergence-free input untouched
        let u = sin_x2_velocity(3);
        assert_eq!(leray_project(&u).unwrap(), u);
    }

    #[test]
    fn shift_and_boost_example() {
        let u = sin_x2_velocity(3);
        assert_eq!(shift_and_boost(&u, [0.0, 0.0], 2.0).unwrap(), u);
        let s = shift_and_boost(&u, [0.0, 1.0], PI).unwrap();
        // expected (-sin x2, 1)
        let mut expect = u.scaled(-1.0);
        expect.set_pair(1, WaveVector::new(0, 0), Complex64::new(1.0, 0.0));
        assert!(s.max_abs_diff(&expect).unwrap() < 1e-15);
    }

    #[test]
    fn nonlinear_term_vanishes_for_parallel_shear() {
        // u = (cos x2, 0), ω = sin x2
        let mut u = SpectralField::zeros_vector(4);
        u.set_pair(0, WaveVector::new(0, 1), Complex64::new(0.5, 0.0));
        let mut w = SpectralField::zeros_scalar(4);
        w.set_pair(0, WaveVector::new(0, 1), Complex64::new(0.0, -0.5));
        let n = nonlinear_term(&w, &u).unwrap();
        assert!(n.max_abs() < 1e-16);
    }

    #[test]
    fn nonlinear_term_rejects_mismatch() {
        let u = SpectralField::zeros_vector(4);
        let w = SpectralField::zeros_scalar(5);
        assert!(matches!(
            nonlinear_term(&w, &u),
            Err(Error::TruncationMismatch { .. })
        ));
    }

    #[test]
    fn truncation_change_round_trips() {
        let u = sin_x2_velocity(3);
        let big = u.with_truncation(6);
        assert_eq!(big.with_truncation(3), u);
        assert_abs_diff_eq!(big.sobolev_norm(2), u.sobolev_norm(2), epsilon = 1e-14);
    }
}
