//! Hartree atomic units (hbar = 1) with cm^-1 input conversion.

use serde::{Deserialize, Serialize};

pub const HBAR: f64 = 1.0;

/// 1 hartree in cm^-1.
pub const HARTREE_IN_CM1: f64 = 219474.6305;

pub fn cm1_to_hartree(e: f64) -> f64 {
    e / HARTREE_IN_CM1
}

pub fn hartree_to_cm1(e: f64) -> f64 {
    e * HARTREE_IN_CM1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum EnergyUnit {
    #[serde(rename = "cm-1")]
    Cm1,
    #[default]
    #[serde(rename = "hartree")]
    Hartree,
}

impl EnergyUnit {
    pub fn to_hartree(self, value: f64) -> f64 {
        match self {
            EnergyUnit::Cm1 => cm1_to_hartree(value),
            EnergyUnit::Hartree => value,
        }
    }
}

/// An energy as written in a config file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Energy {
    pub value: f64,
    pub unit: EnergyUnit,
}

impl Energy {
    pub fn cm1(value: f64) -> Self {
        Self {
            value,
            unit: EnergyUnit::Cm1,
        }
    }

    pub fn hartree(value: f64) -> Self {
        Self {
            value,
            unit: EnergyUnit::Hartree,
        }
    }

    pub fn to_hartree(self) -> f64 {
        self.unit.to_hartree(self.value)
    }
}
