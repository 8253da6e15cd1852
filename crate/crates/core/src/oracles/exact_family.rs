use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::solver::Reynolds;
use crate::spectral::{vorticity_of, NormConvention, SpectralField, WaveVector};

/// Parameters of the shear family
/// `u₁ = Σ_{n≤N} n^{−(3+γ)} e^{−n²t/Re} sin(n(x₂ − σt))`, `u₂ = σ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExactFamilyParams {
    pub gamma: f64,
    pub sigma: f64,
    pub reynolds: Reynolds,
    pub n_trunc: usize,
}

impl ExactFamilyParams {
    pub fn new(gamma: f64, sigma: f64, reynolds: Reynolds, n_trunc: usize) -> Result<Self> {
        let p = ExactFamilyParams {
            gamma,
            sigma,
            reynolds,
            n_trunc,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.5 && self.gamma <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "gamma {} outside (1/2, 1]",
                self.gamma
            )));
        }
        if !self.sigma.is_finite() {
            return Err(Error::InvalidArgument("sigma must be finite".into()));
        }
        if self.n_trunc == 0 {
            return Err(Error::InvalidArgument("series truncation must be >= 1".into()));
        }
        if let Reynolds::Finite(re) = self.reynolds {
            if !(re > 0.0 && re.is_finite()) {
                return Err(Error::InvalidArgument(format!("Reynolds number {re}")));
            }
        }
        Ok(())
    }

    /// `n^{−(3+γ)} e^{−n²t/Re}`.
    fn amplitude(&self, n: usize, t: f64) -> f64 {
        let nf = n as f64;
        nf.powf(-(3.0 + self.gamma)) * (-nf * nf * t * self.reynolds.viscosity()).exp()
    }

    fn check_fits(&self, k_max: usize) -> Result<()> {
        self.validate()?;
        if self.n_trunc > k_max {
            return Err(Error::InvalidArgument(format!(
                "series truncation {} exceeds field truncation {k_max}",
                self.n_trunc
            )));
        }
        Ok(())
    }
}

/// The family's velocity at time `t` on the `k_max` truncation.
pub fn exact_family_velocity(p: &ExactFamilyParams, t: f64, k_max: usize) -> Result<SpectralField> {
    p.check_fits(k_max)?;
    let mut u = SpectralField::zeros_vector(k_max);
    for n in 1..=p.n_trunc {
        // sin θ = (e^{iθ} − e^{−iθ}) / 2i with θ = n x₂ − nσt
        let c = Complex64::from_polar(p.amplitude(n, t), -(n as f64) * p.sigma * t)
            / Complex64::new(0.0, 2.0);
        u.set_pair(0, WaveVector::new(0, n as i64), c);
    }
    u.set_pair(1, WaveVector::new(0, 0), Complex64::new(p.sigma, 0.0));
    Ok(u)
}

/// Scalar vorticity of [`exact_family_velocity`]; its mean flow is `(0, σ)`.
pub fn exact_family_vorticity(p: &ExactFamilyParams, t: f64, k_max: usize) -> Result<SpectralField> {
    vorticity_of(&exact_family_velocity(p, t, k_max)?)
}

/// `∂_σ u`: coefficients `(−ik₂t) u_k` plus the unit boost `e₂`.
pub fn exact_family_dsigma(p: &ExactFamilyParams, t: f64, k_max: usize) -> Result<SpectralField> {
    let u = exact_family_velocity(p, t, k_max)?;
    let mut d = SpectralField::zeros_vector(k_max);
    for n in 1..=p.n_trunc {
        let k = WaveVector::new(0, n as i64);
        let c = Complex64::new(0.0, -(n as f64) * t) * u.get(0, k);
        d.set_pair(0, k, c);
    }
    d.set_pair(1, WaveVector::new(0, 0), Complex64::new(1.0, 0.0));
    Ok(d)
}

/// A norm of an infinite series: either a value with a certified bound on
/// the neglected tail, or divergent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SeriesNorm {
    Finite { value: f64, remainder_bound: f64 },
    Divergent,
}

impl SeriesNorm {
    pub fn value(&self) -> Option<f64> {
        match self {
            SeriesNorm::Finite { value, .. } => Some(*value),
            SeriesNorm::Divergent => None,
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, SeriesNorm::Divergent)
    }
}

const MAX_TERMS: usize = 50_000_000;

/// `‖∂_σ u(t)‖ₘ` of the untruncated family (`n_trunc` is ignored).
///
/// The squared norm is `4π² [1 + (t²/2) Σ n^{−4−2γ} e^{−2n²t/Re} Σ_{j≤m} n^{2j}]`.
/// Summation stops once a geometric bound on the tail falls below roundoff.
pub fn dsigma_sobolev_norm(p: &ExactFamilyParams, t: f64, m: u32) -> Result<SeriesNorm> {
    p.validate()?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("time {t}")));
    }
    let boost = NormConvention::BOX_MEASURE.sqrt();
    if t == 0.0 {
        return Ok(SeriesNorm::Finite {
            value: boost,
            remainder_bound: 0.0,
        });
    }
    let q = 2.0 * m as f64 - 4.0 - 2.0 * p.gamma;
    let c = 2.0 * t * p.reynolds.viscosity();
    if c == 0.0 && q >= -1.0 {
        return Ok(SeriesNorm::Divergent);
    }
    let term = |n: usize| {
        let nf = n as f64;
        let g = NormConvention::grading(nf * nf, m);
        nf.powf(-4.0 - 2.0 * p.gamma) * (-c * nf * nf).exp() * g
    };
    // for n ≥ N the terms are bounded by (m+1) n^q e^{−cn²}
    let tail = |n: usize| -> f64 {
        let nf = n as f64;
        let lead = (m as f64 + 1.0) * nf.powf(q) * (-c * nf * nf).exp();
        if c > 0.0 {
            let ratio = (1.0 + 1.0 / nf).powf(q.max(0.0)) * (-c * (2.0 * nf + 1.0)).exp();
            if ratio < 1.0 {
                return lead * ratio / (1.0 - ratio);
            }
            f64::INFINITY
        } else {
            // Σ_{k>N} k^q ≤ ∫_N^∞ x^q dx for q < −1
            (m as f64 + 1.0) * nf.powf(q + 1.0) / (-q - 1.0)
        }
    };
    let mut sum = 0.0;
    let mut n = 1;
    let mut bound = f64::INFINITY;
    while n <= MAX_TERMS {
        sum += term(n);
        if n % 16 == 0 || n == MAX_TERMS {
            bound = tail(n);
            if bound <= 1e-17 * sum {
                break;
            }
        }
        n += 1;
    }
    if !bound.is_finite() {
        return Err(Error::Numerical {
            t,
            reason: "series tail could not be bounded".into(),
        });
    }
    let scale = t * t / 2.0;
    let value = boost * (1.0 + scale * sum).sqrt();
    let upper = boost * (1.0 + scale * (sum + bound)).sqrt();
    Ok(SeriesNorm::Finite {
        value,
        remainder_bound: upper - value,
    })
}

/// `‖∂_σ u(t)‖_{H³}`; divergent for `Re = ∞`, `t > 0`.
pub fn dsigma_h3_norm(p: &ExactFamilyParams, t: f64) -> Result<SeriesNorm> {
    dsigma_sobolev_norm(p, t, 3)
}

/// `√2 π + (π/√e) t^γ (√t √Re / (2√2))^{1−γ}`.
pub fn exact_family_lower_bound(gamma: f64, t: f64, reynolds: Reynolds) -> Result<f64> {
    let re = match reynolds {
        Reynolds::Finite(re) if re > 0.0 && re.is_finite() => re,
        _ => {
            return Err(Error::InvalidArgument(
                "lower bound needs a finite Reynolds number".into(),
            ))
        }
    };
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("time {t} must be positive")));
    }
    let inner = t.sqrt() * re.sqrt() / (2.0 * 2f64.sqrt());
    Ok(2f64.sqrt() * PI + PI / std::f64::consts::E.sqrt() * t.powf(gamma) * inner.powf(1.0 - gamma))
}
