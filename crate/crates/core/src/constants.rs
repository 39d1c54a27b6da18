//! Physical constants. Everything is computed in Hartree atomic units;
//! SI factors only exist for reporting.

use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitSystem {
    Atomic,
    SiReport,
}

/// CODATA 2018 conversion factors from atomic units to SI (and eV).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SiFactors {
    pub hartree_ev: f64,
    pub hartree_joule: f64,
    pub bohr_meter: f64,
    pub time_second: f64,
    pub hbar_joule_second: f64,
    pub electron_mass_kg: f64,
    pub elementary_charge_coulomb: f64,
}

impl SiFactors {
    pub const CODATA_2018: SiFactors = SiFactors {
        hartree_ev: 27.211_386_245_988,
        hartree_joule: 4.359_744_722_207_1e-18,
        bohr_meter: 5.291_772_109_03e-11,
        time_second: 2.418_884_326_585_7e-17,
        hbar_joule_second: 1.054_571_817e-34,
        electron_mass_kg: 9.109_383_701_5e-31,
        elementary_charge_coulomb: 1.602_176_634e-19,
    };

    pub fn energy_ev(&self, hartree: f64) -> f64 {
        hartree * self.hartree_ev
    }

    pub fn length_m(&self, bohr: f64) -> f64 {
        bohr * self.bohr_meter
    }

    /// Angular frequency in rad/s from atomic units (1/t_au).
    pub fn angular_frequency_per_s(&self, omega_au: f64) -> f64 {
        omega_au / self.time_second
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    pub hbar: f64,
    pub m_e: f64,
    pub e_charge: f64,
    pub h: f64,
    pub si: Option<SiFactors>,
}

impl Constants {
    pub const ATOMIC: Constants = Constants {
        hbar: 1.0,
        m_e: 1.0,
        e_charge: 1.0,
        h: 2.0 * PI,
        si: None,
    };

    /// `e²`, the Coulomb coupling in Gaussian form.
    pub fn e2(&self) -> f64 {
        self.e_charge * self.e_charge
    }
}

impl Default for Constants {
    fn default() -> Self {
        Constants::ATOMIC
    }
}

pub fn constants(unit_system: UnitSystem) -> Constants {
    match unit_system {
        UnitSystem::Atomic => Constants::ATOMIC,
        UnitSystem::SiReport => Constants {
            si: Some(SiFactors::CODATA_2018),
            ..Constants::ATOMIC
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_units_are_exact() {
        let c = constants(UnitSystem::Atomic);
        assert_eq!(c.hbar, 1.0);
        assert_eq!(c.m_e, 1.0);
        assert_eq!(c.e_charge, 1.0);
        assert_eq!(c.h, 2.0 * PI);
        assert!(c.si.is_none());
    }

    #[test]
    fn si_report_keeps_atomic_internals() {
        let c = constants(UnitSystem::SiReport);
        assert_eq!(c.hbar, 1.0);
        let si = c.si.unwrap();
        // hartree / (e * 1 V) = 27.211386245988 eV
        let ev = si.hartree_joule / si.elementary_charge_coulomb;
        assert!((ev - si.hartree_ev).abs() / si.hartree_ev < 1e-10);
        assert!((si.energy_ev(-0.5) + 13.605_693_122_994).abs() < 1e-9);
    }
}
