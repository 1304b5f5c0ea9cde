use crate::constants::{B_AU, E_CHARGE, EPS0, HARTREE, M_E};
use std::f64::consts::PI;

/// Field above which the diamagnetic term dominates the n-manifold spacing:
/// B > (ħ/(e a₀²)) √(384/(5n⁷)).
pub fn landau_threshold_field(n: u32) -> f64 {
    B_AU * (384.0 / (5.0 * (n as f64).powi(7))).sqrt()
}

/// Smallest n for which `b_tesla` exceeds [`landau_threshold_field`].
pub fn landau_threshold_n(b_tesla: f64) -> u32 {
    assert!(b_tesla > 0.0, "B must be positive");
    let b = b_tesla / B_AU;
    let n_star = (384.0 / (5.0 * b * b)).powf(1.0 / 7.0);
    let mut n = (n_star.floor() as u32).max(1);
    while n > 1 && landau_threshold_field(n - 1) < b_tesla {
        n -= 1;
    }
    while landau_threshold_field(n) >= b_tesla {
        n += 1;
    }
    n
}

/// Saddle depth (3/2)(e⁵β/(π²ε₀²))^{1/3} of −2e²/(4πε₀|z|) − 2eβz², in J.
pub fn saddle_depth(beta: f64) -> f64 {
    1.5 * (E_CHARGE.powi(5) * beta / (PI * PI * EPS0 * EPS0)).cbrt()
}

/// Gradient at which the saddle drops to the binding energy 2E_h/n².
pub fn ionization_gradient(n: u32) -> f64 {
    let e_bind = 2.0 * HARTREE / (n as f64).powi(2);
    (e_bind / 1.5).powi(3) * PI * PI * EPS0 * EPS0 / E_CHARGE.powi(5)
}

/// Continuous n at which `beta` equals the ionization gradient.
pub fn ionization_n_continuous(beta: f64) -> f64 {
    (2.0 * HARTREE / saddle_depth(beta)).sqrt()
}

/// Principal quantum number reached at gradient `beta` (continuous value rounded down).
pub fn ionization_n(beta: f64) -> u32 {
    ionization_n_continuous(beta).floor() as u32
}

/// Gradient where eβ equals the diamagnetic coefficient e²B²/(8mₑ): β_max = eB²/(8mₑ).
pub fn quadrupole_dominance_gradient(b_tesla: f64) -> f64 {
    E_CHARGE * b_tesla * b_tesla / (8.0 * M_E)
}
