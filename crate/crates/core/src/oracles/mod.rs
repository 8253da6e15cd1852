//! Closed-form solution families used as ground truth.
//!
//! * [`heat`]: linearization at the rest state, `du(t) = e^{(t/Re)Δ} du(0)`.
//! * [`couette`]: linearization at the shear `u = (x₂, 0)`, in streamwise
//!   Fourier modes and a Fourier transform in `x₂`.
//! * [`exact_family`]: the shear family `u₁ = Σ n^{−(3+γ)} e^{−n²t/Re}
//!   sin(n(x₂ − σt))`, `u₂ = σ`, and its derivative in `σ`.

pub mod couette;
pub mod exact_family;
pub mod heat;

pub use couette::{
    couette_h0_identity, couette_inviscid_evolve, couette_inviscid_evolve_sampled,
    couette_reconstruct, couette_viscous_evolve, couette_viscous_factor, CouetteModal,
    PlaneGrid, PlaneField, Reconstruction,
};
pub use exact_family::{
    dsigma_h3_norm, dsigma_sobolev_norm, exact_family_dsigma, exact_family_lower_bound,
    exact_family_velocity, exact_family_vorticity, ExactFamilyParams, SeriesNorm,
};
pub use heat::{heat_semigroup, heat_smoothing_constant};
