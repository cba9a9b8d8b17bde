//! Finite-activity Lévy characteristics `(b, σ, ν)` with `ν = Σ λ_j δ_{x_j}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    /// Jump size `x ≠ 0`.
    pub size: f64,
    /// Intensity `λ > 0`.
    pub intensity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevyModel {
    drift: f64,
    sigma: f64,
    atoms: Vec<Atom>,
    horizon: f64,
}

impl LevyModel {
    pub fn new(drift: f64, sigma: f64, atoms: Vec<Atom>, horizon: f64) -> Result<Self> {
        if !drift.is_finite() {
            return Err(Error::InvalidModel("drift must be finite".into()));
        }
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::InvalidModel(format!(
                "sigma must be finite and >= 0, got {sigma}"
            )));
        }
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::InvalidModel(format!(
                "horizon must be > 0, got {horizon}"
            )));
        }
        for (j, a) in atoms.iter().enumerate() {
            if !(a.size.is_finite() && a.size != 0.0) {
                return Err(Error::InvalidModel(format!(
                    "atom {j}: size must be finite and non-zero"
                )));
            }
            if !(a.intensity.is_finite() && a.intensity > 0.0) {
                return Err(Error::InvalidModel(format!(
                    "atom {j}: intensity must be > 0"
                )));
            }
            if atoms[..j].iter().any(|b| b.size == a.size) {
                return Err(Error::InvalidModel(format!(
                    "atom {j}: duplicate size {}",
                    a.size
                )));
            }
        }
        Ok(LevyModel {
            drift,
            sigma,
            atoms,
            horizon,
        })
    }

    /// `σ = 1`, no jumps.
    pub fn brownian(horizon: f64) -> Result<Self> {
        Self::new(0.0, 1.0, Vec::new(), horizon)
    }

    /// Poisson process of intensity `λ`: `σ = 0`, one atom at `x = 1`.
    pub fn poisson(lambda: f64, horizon: f64) -> Result<Self> {
        Self::new(
            0.0,
            0.0,
            vec![Atom {
                size: 1.0,
                intensity: lambda,
            }],
            horizon,
        )
    }

    pub fn drift(&self) -> f64 {
        self.drift
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn total_intensity(&self) -> f64 {
        self.atoms.iter().map(|a| a.intensity).sum()
    }

    pub fn is_pure_jump(&self) -> bool {
        self.sigma == 0.0
    }

    /// `η(u) = -ibu + σ²u²/2 + Σ λ (1 - e^{iux} + iux 1_{|x|<1})`.
    pub fn symbol(&self, u: f64) -> Complex64 {
        let i = Complex64::i();
        let mut eta = -i * self.drift * u + 0.5 * self.sigma * self.sigma * u * u;
        for a in &self.atoms {
            let small = if a.size.abs() < 1.0 {
                i * u * a.size
            } else {
                Complex64::new(0.0, 0.0)
            };
            eta += a.intensity * (1.0 - (i * u * a.size).exp() + small);
        }
        eta
    }

    /// Drift of the path representation `X(t) = b't + σB(t) + Σ x N_x(t)`,
    /// `b' = b - Σ_{|x|<1} λx` (the small jumps are compensated).
    pub fn path_drift(&self) -> f64 {
        self.drift
            - self
                .atoms
                .iter()
                .filter(|a| a.size.abs() < 1.0)
                .map(|a| a.intensity * a.size)
                .sum::<f64>()
    }

    /// `E[X(t)] = (b + Σ_{|x|≥1} λx) t`.
    pub fn mean(&self, t: f64) -> f64 {
        let large: f64 = self
            .atoms
            .iter()
            .filter(|a| a.size.abs() >= 1.0)
            .map(|a| a.intensity * a.size)
            .sum();
        (self.drift + large) * t
    }
}

/// Named model and grid configurations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Preset {
    Brownian,
    Poisson { lambda: f64 },
}

impl Preset {
    pub fn name(&self) -> String {
        match self {
            Preset::Brownian => "brownian".into(),
            Preset::Poisson { lambda } => format!("poisson({lambda})"),
        }
    }

    pub fn model(&self, horizon: f64) -> Result<LevyModel> {
        match *self {
            Preset::Brownian => LevyModel::brownian(horizon),
            Preset::Poisson { lambda } => LevyModel::poisson(lambda, horizon),
        }
    }
}

/// The standard presets: `brownian` and `poisson(1)`.
pub fn presets() -> Vec<Preset> {
    vec![Preset::Brownian, Preset::Poisson { lambda: 1.0 }]
}
