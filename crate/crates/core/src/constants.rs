//! CODATA 2018 constants and the Hartree atomic unit system derived from them.

use std::f64::consts::PI;

pub const E_CHARGE: f64 = 1.602_176_634e-19;
pub const M_E: f64 = 9.109_383_701_5e-31;
pub const H_PLANCK: f64 = 6.626_070_15e-34;
pub const HBAR: f64 = H_PLANCK / (2.0 * PI);
pub const EPS0: f64 = 8.854_187_812_8e-12;
pub const C_LIGHT: f64 = 299_792_458.0;
pub const AMU: f64 = 1.660_539_066_60e-27;

/// Bohr radius, 4πε₀ħ²/(mₑe²).
pub const A0: f64 = 4.0 * PI * EPS0 * HBAR * HBAR / (M_E * E_CHARGE * E_CHARGE);
/// Hartree energy, ħ²/(mₑa₀²).
pub const HARTREE: f64 = HBAR * HBAR / (M_E * A0 * A0);
/// Atomic unit of magnetic flux density, ħ/(e a₀²).
pub const B_AU: f64 = HBAR / (E_CHARGE * A0 * A0);
/// Atomic unit of electric field gradient, E_h/(e a₀²).
pub const GRAD_AU: f64 = HARTREE / (E_CHARGE * A0 * A0);
/// Speed of light in atomic units (inverse fine-structure constant).
pub const C_AU: f64 = C_LIGHT * HBAR / (HARTREE * A0);
/// Electron spin g-factor magnitude.
pub const G_S: f64 = 2.002_319_304_362_56;
pub const ELECTRON_VOLT: f64 = E_CHARGE;

/// Coulomb constant e²/(4πε₀) in J·m.
pub const COULOMB_K: f64 = E_CHARGE * E_CHARGE / (4.0 * PI * EPS0);

/// Bundle of the constants above, for callers that prefer a value over paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub e: f64,
    pub m_e: f64,
    pub hbar: f64,
    pub eps0: f64,
    pub a0: f64,
    pub hartree: f64,
    pub c: f64,
    pub b_au: f64,
    pub grad_au: f64,
}

impl PhysicalConstants {
    pub const CODATA2018: PhysicalConstants = PhysicalConstants {
        e: E_CHARGE,
        m_e: M_E,
        hbar: HBAR,
        eps0: EPS0,
        a0: A0,
        hartree: HARTREE,
        c: C_LIGHT,
        b_au: B_AU,
        grad_au: GRAD_AU,
    };

    /// Largest relative violation among the defining identities.
    pub fn consistency_error(&self) -> f64 {
        let rel = |a: f64, b: f64| ((a - b) / b).abs();
        let hartree = self.hbar * self.hbar / (self.m_e * self.a0 * self.a0);
        let b_au = self.hbar / (self.e * self.a0 * self.a0);
        let a0 = 4.0 * PI * self.eps0 * self.hbar * self.hbar / (self.m_e * self.e * self.e);
        rel(hartree, self.hartree)
            .max(rel(b_au, self.b_au))
            .max(rel(a0, self.a0))
            .max(rel(self.hartree / (self.e * self.a0 * self.a0), self.grad_au))
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA2018
    }
}
