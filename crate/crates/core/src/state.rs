//! Scalar parameters of a bound state of the hydrogen-like atom.

use serde::Serialize;

use crate::constants::Constants;
use crate::error::{Error, Result};

/// Nuclear charge and principal number of a spherically symmetric state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct AtomSpec {
    pub z: u32,
    pub n: u32,
}

impl AtomSpec {
    pub fn new(z: u32, n: u32) -> Result<Self> {
        if z == 0 || n == 0 {
            return Err(Error::InvalidAtom { z, n });
        }
        Ok(AtomSpec { z, n })
    }

    pub fn hydrogen(n: u32) -> Result<Self> {
        Self::new(1, n)
    }
}

/// Derived scalars of a state. The energy fixes everything else:
///
/// * `beta0_sq = −2E/m`, `alpha = 2Ze²/m`
/// * `omega = 2|E|/ħ`, `k_o = ω/β₀`
/// * `r_o = α/β₀² = Ze²/|E|`
/// * `beta1 = k₀²α/β₀²`
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StateParams {
    pub energy: f64,
    pub r_o: f64,
    pub k_o: f64,
    pub omega: f64,
    pub beta0_sq: f64,
    pub alpha: f64,
    pub beta1: f64,
    #[serde(skip)]
    pub constants: Constants,
}

impl StateParams {
    /// Parameters of the radial equation at an arbitrary negative energy.
    ///
    /// The sign of ω follows the bound-state convention ω = 2|E|/ħ; only ω²
    /// enters the radial equation.
    pub fn from_energy(energy: f64, z: u32, c: Constants) -> Result<Self> {
        if !(energy < 0.0) || !energy.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "bound-state energy must be negative and finite, got {energy}"
            )));
        }
        let beta0_sq = -2.0 * energy / c.m_e;
        let alpha = 2.0 * f64::from(z) * c.e2() / c.m_e;
        let omega = 2.0 * energy.abs() / c.hbar;
        let k_o = (omega * omega / beta0_sq).sqrt();
        let beta1 = k_o * k_o * alpha / beta0_sq;
        Ok(StateParams {
            energy,
            r_o: alpha / beta0_sq,
            k_o,
            omega,
            beta0_sq,
            alpha,
            beta1,
            constants: c,
        })
    }

    /// `β₁/(2k₀)`; the series terminates when this is a positive integer.
    pub fn quantum_ratio(&self) -> f64 {
        self.beta1 / (2.0 * self.k_o)
    }

    /// The pole part `k₀²α/(α − β₀²r)` of the radial coefficient.
    pub fn pole_coefficient(&self, r: f64) -> f64 {
        self.k_o * self.k_o * self.alpha / (self.alpha - self.beta0_sq * r)
    }

    /// Full coefficient `q(r)` of `u'' + q u = 0`.
    pub fn radial_coefficient(&self, r: f64) -> f64 {
        self.pole_coefficient(r) - self.k_o * self.k_o
    }
}

/// `E_n = −Z²e⁴m/(2ħ²n²)`.
pub fn level_energy(atom: AtomSpec, c: Constants) -> f64 {
    let z = f64::from(atom.z);
    let n = f64::from(atom.n);
    -(z * z * c.e2() * c.e2() * c.m_e) / (2.0 * c.hbar * c.hbar) / (n * n)
}

/// `r_{o,n} = 2ħ²n²/(Ze²m)`.
pub fn level_radius(atom: AtomSpec, c: Constants) -> f64 {
    let z = f64::from(atom.z);
    let n = f64::from(atom.n);
    2.0 * c.hbar * c.hbar * n * n / (z * c.e2() * c.m_e)
}

pub fn derive_state(atom: AtomSpec, c: Constants) -> StateParams {
    StateParams::from_energy(level_energy(atom, c), atom.z, c).expect("level energies are negative for valid atoms")
}

/// Ratio of the trajectory radius to the textbook Bohr radius `n²ħ²/(Ze²m)`.
pub fn bohr_ratio(state: &StateParams, atom: AtomSpec) -> f64 {
    let c = state.constants;
    let n = f64::from(atom.n);
    let bohr = n * n * c.hbar * c.hbar / (f64::from(atom.z) * c.e2() * c.m_e);
    state.r_o / bohr
}
