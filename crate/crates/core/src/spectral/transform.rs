//! Synthesis and analysis between truncated coefficients and collocation grids.
//!
//! Real fields travel in pairs: two real grids `a`, `b` share one complex
//! transform as `a + i b`, and the pair is split again on the way back using
//! the conjugate symmetry of each half. Internally grids are stored with
//! `x₂` as the outer index, which saves one transpose per direction.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

use super::{FieldKind, SpectralField};
use crate::error::{Error, Result};

/// Smallest even `2^a 3^b 5^c` that is at least `m`.
pub fn fft_friendly_at_least(m: usize) -> usize {
    let mut n = m.max(2);
    loop {
        if n % 2 == 0 {
            let mut r = n;
            for p in [2, 3, 5] {
                while r % p == 0 {
                    r /= p;
                }
            }
            if r == 1 {
                return n;
            }
        }
        n += 1;
    }
}

/// Real samples on the `n × n` grid `x_i = 2π i/n`, indexed `[i₁ * n + i₂]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridValues {
    pub n: usize,
    pub components: Vec<Vec<f64>>,
}

impl GridValues {
    pub fn get(&self, c: usize, i1: usize, i2: usize) -> f64 {
        self.components[c][i1 * self.n + i2]
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        2.0 * PI * i as f64 / self.n as f64
    }
}

/// FFT plans and work buffers for one `(K, n)` pair.
#[derive(Clone)]
pub struct Transformer {
    k_max: usize,
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    work: Vec<Complex64>,
}

impl Transformer {
    /// Grid of `n` points per axis; `n` must be at least `2K + 2`.
    pub fn new(k_max: usize, n: usize) -> Result<Self> {
        let required = 2 * k_max + 2;
        if n < required {
            return Err(Error::GridTooSmall {
                grid: n,
                k_max,
                required,
            });
        }
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let scratch_len = fwd
            .get_inplace_scratch_len()
            .max(inv.get_inplace_scratch_len());
        Ok(Transformer {
            k_max,
            n,
            fwd,
            inv,
            scratch: vec![Complex64::default(); scratch_len],
            work: vec![Complex64::default(); n * n],
        })
    }

    /// Grid on which quadratic products of `K`-truncated fields are computed
    /// without aliasing into the retained band (2/3 rule: `K < n/3`).
    pub fn dealiased(k_max: usize) -> Self {
        Self::new(k_max, fft_friendly_at_least(3 * k_max + 1)).unwrap()
    }

    /// Smallest admissible grid; products alias.
    pub fn minimal(k_max: usize) -> Self {
        Self::new(k_max, fft_friendly_at_least(2 * k_max + 2)).unwrap()
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn grid_size(&self) -> usize {
        self.n
    }

    pub fn grid_len(&self) -> usize {
        self.n * self.n
    }

    fn wrap(&self, k: i64) -> usize {
        k.rem_euclid(self.n as i64) as usize
    }

    /// Runs `fft` over the rows that can carry `|k₁| ≤ K`.
    fn process_band_rows(
        fft: &Arc<dyn Fft<f64>>,
        buf: &mut [Complex64],
        scratch: &mut [Complex64],
        n: usize,
        k_max: usize,
    ) {
        let (head, tail) = buf.split_at_mut((n - k_max) * n);
        fft.process_with_scratch(&mut head[..(k_max + 1) * n], scratch);
        if k_max > 0 {
            fft.process_with_scratch(tail, scratch);
        }
    }

    /// Writes `a + i b` on the grid (x₂-outer layout) into `out`.
    pub(crate) fn synthesize_pair(
        &mut self,
        a: &[Complex64],
        b: Option<&[Complex64]>,
        out: &mut [Complex64],
    ) {
        let n = self.n;
        let km = self.k_max as i64;
        let side = 2 * self.k_max + 1;
        self.work.iter_mut().for_each(|z| *z = Complex64::default());
        for k1 in -km..=km {
            let r1 = self.wrap(k1);
            let src_row = (k1 + km) as usize * side;
            for k2 in -km..=km {
                let i = src_row + (k2 + km) as usize;
                let v = match b {
                    Some(b) => a[i] + Complex64::i() * b[i],
                    None => a[i],
                };
                let r2 = self.wrap(k2);
                self.work[r1 * n + r2] = v;
            }
        }
        Self::process_band_rows(&self.inv, &mut self.work, &mut self.scratch, n, self.k_max);
        transpose::transpose(&self.work, out, n, n);
        self.inv.process_with_scratch(out, &mut self.scratch);
    }

    /// Inverse of [`Self::synthesize_pair`]: splits the complex grid into
    /// the coefficients of its real and imaginary parts. `grid` is consumed
    /// as scratch. When `b` is `None` the imaginary part is discarded.
    pub(crate) fn analyze_pair(
        &mut self,
        grid: &mut [Complex64],
        a: &mut [Complex64],
        b: Option<&mut [Complex64]>,
    ) {
        let n = self.n;
        let km = self.k_max as i64;
        let side = 2 * self.k_max + 1;
        self.fwd.process_with_scratch(grid, &mut self.scratch);
        transpose::transpose(grid, &mut self.work, n, n);
        Self::process_band_rows(&self.fwd, &mut self.work, &mut self.scratch, n, self.k_max);
        let norm = 1.0 / (n * n) as f64;
        let z = |s: &Self, k1: i64, k2: i64| s.work[s.wrap(k1) * n + s.wrap(k2)] * norm;
        match b {
            Some(b) => {
                for k1 in -km..=km {
                    for k2 in -km..=km {
                        let i = (k1 + km) as usize * side + (k2 + km) as usize;
                        let zk = z(self, k1, k2);
                        let zm = z(self, -k1, -k2).conj();
                        a[i] = (zk + zm) * 0.5;
                        b[i] = (zk - zm) * Complex64::new(0.0, -0.5);
                    }
                }
            }
            None => {
                for k1 in -km..=km {
                    for k2 in -km..=km {
                        let i = (k1 + km) as usize * side + (k2 + km) as usize;
                        a[i] = (z(self, k1, k2) + z(self, -k1, -k2).conj()) * 0.5;
                    }
                }
            }
        }
    }

    fn check_field(&self, f: &SpectralField) -> Result<()> {
        if f.k_max() != self.k_max {
            return Err(Error::TruncationMismatch {
                left: f.k_max(),
                right: self.k_max,
            });
        }
        Ok(())
    }

    /// Samples every component on the collocation grid.
    pub fn grid_evaluate(&mut self, field: &SpectralField) -> GridValues {
        assert_eq!(field.k_max(), self.k_max, "truncation mismatch");
        let n = self.n;
        let mut grid = vec![Complex64::default(); n * n];
        let mut x1_major = vec![Complex64::default(); n * n];
        let comps = field.components();
        let (a, b) = (&comps[0], comps.get(1));
        self.synthesize_pair(a, b.map(|v| v.as_slice()), &mut grid);
        transpose::transpose(&grid, &mut x1_major, n, n);
        let mut out = vec![x1_major.iter().map(|z| z.re).collect::<Vec<_>>()];
        if b.is_some() {
            out.push(x1_major.iter().map(|z| z.im).collect());
        }
        GridValues { n, components: out }
    }

    /// Projects grid samples onto the `K` truncation.
    pub fn grid_analyze(&mut self, values: &GridValues) -> Result<SpectralField> {
        if values.n != self.n {
            return Err(Error::InvalidArgument(format!(
                "grid has {} points per axis, transformer expects {}",
                values.n, self.n
            )));
        }
        let ncomp = values.components.len();
        if ncomp == 0 || ncomp > 2 {
            return Err(Error::InvalidArgument("expected 1 or 2 components".into()));
        }
        let n = self.n;
        let mut packed = vec![Complex64::default(); n * n];
        for (i, z) in packed.iter_mut().enumerate() {
            let im = if ncomp == 2 { values.components[1][i] } else { 0.0 };
            *z = Complex64::new(values.components[0][i], im);
        }
        let mut grid = vec![Complex64::default(); n * n];
        transpose::transpose(&packed, &mut grid, n, n);
        let kind = if ncomp == 2 {
            FieldKind::Vector
        } else {
            FieldKind::Scalar
        };
        let mut comps = SpectralField::zeros(self.k_max, kind).into_components();
        if ncomp == 2 {
            let (first, rest) = comps.split_at_mut(1);
            self.analyze_pair(&mut grid, &mut first[0], Some(&mut rest[0]));
        } else {
            self.analyze_pair(&mut grid, &mut comps[0], None);
        }
        SpectralField::from_components(self.k_max, comps)
    }

    /// `u·∇ω` with `u` given explicitly (mean flow included).
    pub fn advection(&mut self, u: &SpectralField, omega: &SpectralField) -> Result<SpectralField> {
        self.check_field(u)?;
        self.check_field(omega)?;
        u.require_vector()?;
        omega.require_scalar()?;
        let grad = omega.gradient()?;
        let len = self.grid_len();
        let mut gu = vec![Complex64::default(); len];
        let mut gg = vec![Complex64::default(); len];
        self.synthesize_pair(u.component(0), Some(u.component(1)), &mut gu);
        self.synthesize_pair(grad.component(0), Some(grad.component(1)), &mut gg);
        for (p, q) in gu.iter_mut().zip(&gg) {
            *p = Complex64::new(p.re * q.re + p.im * q.im, 0.0);
        }
        let mut out = SpectralField::zeros_scalar(self.k_max);
        self.analyze_pair(&mut gu, out.component_mut(0), None);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::WaveVector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(k_max: usize, kind: FieldKind, seed: u64) -> SpectralField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SpectralField::from_fn(k_max, kind, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    #[test]
    fn friendly_sizes() {
        assert_eq!(fft_friendly_at_least(193), 200);
        assert_eq!(fft_friendly_at_least(385), 400);
        assert_eq!(fft_friendly_at_least(7), 8);
        assert_eq!(fft_friendly_at_least(1), 2);
    }

    #[test]
    fn grid_too_small_rejected() {
        assert!(matches!(
            Transformer::new(8, 17),
            Err(Error::GridTooSmall { required: 18, .. })
        ));
        assert!(Transformer::new(8, 18).is_ok());
    }

    #[test]
    fn round_trip_band_limited() {
        for (seed, (k, n, kind)) in [
            (4, 10, FieldKind::Scalar),
            (7, 24, FieldKind::Vector),
            (12, 26, FieldKind::Vector),
        ]
        .into_iter()
        .enumerate()
        {
            let f = random_field(k, kind, seed as u64);
            let mut tr = Transformer::new(k, n).unwrap();
            let g = tr.grid_evaluate(&f);
            let back = tr.grid_analyze(&g).unwrap();
            let err = back.max_abs_diff(&f).unwrap();
            assert!(err < 1e-13, "round trip error {err}");
        }
    }

    #[test]
    fn grid_values_are_point_evaluations() {
        let mut f = SpectralField::zeros_scalar(3);
        // cos(x1 + 2 x2)
        f.set_pair(0, WaveVector::new(1, 2), Complex64::new(0.5, 0.0));
        let mut tr = Transformer::new(3, 8).unwrap();
        let g = tr.grid_evaluate(&f);
        for i1 in 0..8 {
            for i2 in 0..8 {
                let x1 = g.coordinate(i1);
                let x2 = g.coordinate(i2);
                assert!((g.get(0, i1, i2) - (x1 + 2.0 * x2).cos()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn analysis_is_exactly_real_symmetric() {
        let f = random_field(6, FieldKind::Vector, 3);
        let mut tr = Transformer::dealiased(6);
        let g = tr.grid_evaluate(&f);
        let back = tr.grid_analyze(&g).unwrap();
        assert_eq!(back.reality_defect(), 0.0);
    }
}
