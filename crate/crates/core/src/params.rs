//! Model parameters and the spin bookkeeping shared by every module.
//!
//! Conventions used throughout the crate (spin units, ħ = 1):
//!
//! * `S_A`, `S_B` are the sublattice spins, `S = S_A + S_B`, `N = S_A - S_B`.
//! * The collective Hamiltonian is `H = (J / n_spins) S² + h N^z`.
//! * `n^z = 2 (S_A^z - S_B^z) / n_spins` and `s^z = 2 S^z / n_spins`, so both
//!   lie in `[-1, 1]` and the Néel state `|↑…⟩_A ⊗ |↓…⟩_B` has `n^z = +1`.
//! * Only the maximal sublattice-spin manifold `S_A = S_B = j = n_spins / 4`
//!   is simulated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical couplings and system size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Exchange energy `J > 0`.
    #[serde(rename = "J")]
    pub exchange: f64,
    /// Staggered field `h >= 0`.
    #[serde(rename = "h")]
    pub field: f64,
    /// Power-law exponent in `[0, 1)`. Only the lattice model uses it; the
    /// collective Hamiltonian is the `alpha = 0` limit.
    #[serde(default)]
    pub alpha: f64,
    /// Total number of spin-1/2 particles (even, at least 4).
    pub n_spins: usize,
}

impl ModelParams {
    pub fn new(exchange: f64, field: f64, n_spins: usize) -> Result<Self> {
        let p = ModelParams {
            exchange,
            field,
            alpha: 0.0,
            n_spins,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        self.alpha = alpha;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        // J = 0 is allowed as a degenerate test limit of the field-only model.
        if !(self.exchange.is_finite() && self.exchange >= 0.0) {
            return Err(Error::param("J", "must be finite and non-negative"));
        }
        if !(self.field.is_finite() && self.field >= 0.0) {
            return Err(Error::param("h", "must be finite and non-negative"));
        }
        if !(0.0..1.0).contains(&self.alpha) {
            return Err(Error::param("alpha", "must lie in [0, 1)"));
        }
        if self.n_spins < 4 || self.n_spins % 2 != 0 {
            return Err(Error::param("n_spins", "must be an even integer >= 4"));
        }
        Ok(())
    }

    /// Sublattice spin of the simulated manifold.
    pub fn spin(&self) -> Spin {
        Spin::from_twice(self.n_spins / 2)
    }

    /// Coupling in front of `S²`.
    pub fn s2_coupling(&self) -> f64 {
        self.exchange / self.n_spins as f64
    }

    /// Small-oscillation frequency of the mean-field pendulum, `sqrt(J h)`.
    pub fn pendulum_frequency(&self) -> f64 {
        (self.exchange * self.field).sqrt()
    }
}

/// A spin quantum number `j`, stored as the integer `2j` so half-integers are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Spin {
    twice: usize,
}

impl Spin {
    pub fn from_twice(twice: usize) -> Self {
        Spin { twice }
    }

    /// Parses a floating-point `j`; fails unless `2j` is a non-negative integer.
    pub fn from_f64(j: f64) -> Result<Self> {
        let t = 2.0 * j;
        if !(t.is_finite() && t >= 0.0 && (t - t.round()).abs() < 1e-9) {
            return Err(Error::Domain(format!("{j} is not a valid spin")));
        }
        Ok(Spin {
            twice: t.round() as usize,
        })
    }

    pub fn twice(self) -> usize {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// Dimension `2j + 1` of the irreducible representation.
    pub fn dim(self) -> usize {
        self.twice + 1
    }

    /// Magnetization `m` of the `k`-th basis state, `k = 0` being `m = -j`.
    pub fn m(self, k: usize) -> f64 {
        k as f64 - self.value()
    }

    /// `j (j + 1)`.
    pub fn casimir(self) -> f64 {
        let j = self.value();
        j * (j + 1.0)
    }
}
