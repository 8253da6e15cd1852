//! Seeded random fields used as base flows and perturbation directions.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::spectral::{velocity_from_vorticity, FieldKind, NormConvention, SpectralField};

fn normal_pair(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Gaussian coefficients on every mode of the truncation.
pub fn random_band_limited(k_max: usize, kind: FieldKind, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SpectralField::from_fn(k_max, kind, |_, _| normal_pair(&mut rng))
}

/// Root-mean-square speed `sqrt(⟨|u|²⟩)` over the box.
pub fn rms_velocity(u: &SpectralField) -> f64 {
    (u.sobolev_norm_sq(0) / NormConvention::BOX_MEASURE).sqrt()
}

/// Smooth zero-mean vorticity with a Gaussian envelope `exp(−|k|²/k_p²)`,
/// scaled so the induced velocity has the requested rms speed.
pub fn random_smooth_vorticity(
    k_max: usize,
    seed: u64,
    peak_wavenumber: f64,
    u_rms: f64,
) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = SpectralField::from_fn(k_max, FieldKind::Scalar, |_, k| {
        let z = normal_pair(&mut rng);
        if k.norm_sq() == 0.0 {
            return Complex64::default();
        }
        z * (-k.norm_sq() / (peak_wavenumber * peak_wavenumber)).exp()
    });
    let u = velocity_from_vorticity(&w, None).expect("zero mean by construction");
    let rms = rms_velocity(&u);
    if rms > 0.0 {
        w.scale(u_rms / rms);
    }
    w
}

/// Zero-mean vorticity with Gaussian coefficients on the disc
/// `0 < |k| ≤ cutoff` and nothing beyond.
pub fn band_vorticity(k_max: usize, seed: u64, cutoff: f64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SpectralField::from_fn(k_max, FieldKind::Scalar, |_, k| {
        let z = normal_pair(&mut rng);
        let ksq = k.norm_sq();
        if ksq == 0.0 || ksq > cutoff * cutoff {
            Complex64::default()
        } else {
            z
        }
    })
}

/// Zero-mean vorticity whose velocity follows the profile
/// `|u_k| ∝ (1 + |k|²)^{−decay/2}` on `0 < |k| ≤ cutoff`, with Gaussian
/// coefficients. Modes are drawn for the whole truncation before the cutoff
/// is applied, so different cutoffs of one seed are nested truncations of a
/// single field. For `decay = n + 2` the untruncated velocity lies in `Hⁿ`
/// but not `H^{n+1}`.
pub fn rough_vorticity(k_max: usize, seed: u64, decay: f64, cutoff: f64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SpectralField::from_fn(k_max, FieldKind::Scalar, |_, k| {
        let z = normal_pair(&mut rng);
        let ksq = k.norm_sq();
        if ksq == 0.0 || ksq > cutoff * cutoff {
            Complex64::default()
        } else {
            z * ksq.sqrt() * (1.0 + ksq).powf(-decay / 2.0)
        }
    })
}

/// Rescales a perturbation vorticity so its velocity has unit `Hⁿ` norm.
pub fn normalize_velocity_norm(w: &mut SpectralField, n: u32) {
    let u = velocity_from_vorticity(w, None).expect("perturbations carry no mean vorticity");
    let norm = u.sobolev_norm(n);
    if norm > 0.0 {
        w.scale(1.0 / norm);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_vorticity_has_requested_rms() {
        let w = random_smooth_vorticity(16, 7, 4.0, 1.3);
        let u = velocity_from_vorticity(&w, None).unwrap();
        assert!((rms_velocity(&u) - 1.3).abs() < 1e-12);
        assert_eq!(w.mean()[0], 0.0);
        assert!(w.reality_defect() < 1e-15);
    }

    #[test]
    fn band_vorticity_respects_cutoff() {
        let w = band_vorticity(10, 1, 4.0);
        for (i, k) in w.modes() {
            if k.norm_sq() > 16.0 {
                assert_eq!(w.component(0)[i].norm(), 0.0);
            }
        }
        let mut w = w;
        normalize_velocity_norm(&mut w, 3);
        let u = velocity_from_vorticity(&w, None).unwrap();
        assert!((u.sobolev_norm(3) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rough_cutoffs_are_nested_truncations() {
        let full = rough_vorticity(12, 4, 5.0, 12.0);
        let cut = rough_vorticity(12, 4, 5.0, 5.0);
        assert_eq!(cut.mean()[0], 0.0);
        for (i, k) in cut.modes() {
            let expect = if k.norm_sq() <= 25.0 { full.component(0)[i] } else { Complex64::default() };
            assert_eq!(cut.component(0)[i], expect);
        }
        // the next norm index up keeps growing with the cutoff
        let norm = |c: f64, n: u32| {
            velocity_from_vorticity(&rough_vorticity(12, 4, 5.0, c), None).unwrap().sobolev_norm(n)
        };
        assert!(norm(12.0, 4) > 1.2 * norm(6.0, 4));
        assert!(norm(12.0, 2) < 1.01 * norm(6.0, 2));
    }

    #[test]
    fn seeds_are_reproducible() {
        assert_eq!(
            random_band_limited(5, FieldKind::Vector, 11),
            random_band_limited(5, FieldKind::Vector, 11)
        );
        assert_ne!(
            random_band_limited(5, FieldKind::Vector, 11),
            random_band_limited(5, FieldKind::Vector, 12)
        );
    }
}
