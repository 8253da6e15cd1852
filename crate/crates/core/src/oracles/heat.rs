use crate::solver::Reynolds;
use crate::spectral::SpectralField;

/// `e^{(t/Re)Δ} du0`: each coefficient decays by `e^{−|k|² t/Re}`.
pub fn heat_semigroup(du0: &SpectralField, t: f64, reynolds: Reynolds) -> SpectralField {
    let mut out = du0.clone();
    let nu = reynolds.viscosity();
    if nu > 0.0 && t != 0.0 {
        out.apply_symbol(|k| (-k.norm_sq() * t * nu).exp());
    }
    out
}

/// Constant in `‖e^{(t/Re)Δ} u‖ₙ ≤ C ‖u‖ₙ₋₁`, `C = √(Re/t)/√(2e) + 1`.
pub fn heat_smoothing_constant(t: f64, reynolds: Reynolds) -> f64 {
    (reynolds.value() / t).sqrt() / (2.0 * std::f64::consts::E).sqrt() + 1.0
}
