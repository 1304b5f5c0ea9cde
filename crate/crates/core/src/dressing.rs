//! Microwave-dressed S/P pairs, the resulting two-level description and the
//! dipole–dipole, charge–dipole and charge–quadrupole couplings between ions.

use crate::angular::UncoupledLabel;
use crate::constants::{A0, COULOMB_K, E_CHARGE, HBAR};
use crate::crystal::{triangle_side, Equilibrium, PLANAR_RATIO_N3};
use crate::internal::{dipole_element, AdiabaticTrack, InternalError, InternalModel};
use crate::trap::wr_for_ratio;
use nalgebra::{DMatrix, Matrix2, SymmetricEigen};
use std::f64::consts::PI;
use std::io::Write;

#[derive(Debug, thiserror::Error)]
pub enum DressingError {
    #[error("Δ_MW and Ω_MW both zero: dressed basis undefined")]
    Degenerate,
    #[error("separation must be positive, got {0}")]
    Domain(f64),
    #[error(transparent)]
    Internal(#[from] InternalError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveParams {
    pub omega_mw: f64,
    pub omega_l: f64,
    pub delta_mw: f64,
    pub delta_l: f64,
}

/// Eigenpair of Δ_L|S⟩⟨S| + (Δ_L + Δ_MW)|P⟩⟨P| − (Ω_MW/2)(|S⟩⟨P| + h.c.).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedPair {
    pub c_plus: f64,
    pub c_minus: f64,
    pub delta_plus: f64,
    pub delta_minus: f64,
    /// (S, P) amplitudes; |±⟩ = (c_± |P⟩ ± c_∓ |S⟩)/√2.
    pub plus: [f64; 2],
    pub minus: [f64; 2],
}

impl DressedPair {
    /// ⟨−|z|−⟩ / ⟨S|z|P⟩.
    pub fn dipole_factor(&self) -> f64 {
        2.0 * self.minus[0] * self.minus[1]
    }
}

pub fn dressed_states(delta_l: f64, delta_mw: f64, omega_mw: f64) -> Result<DressedPair, DressingError> {
    let w = delta_mw.hypot(omega_mw);
    if w == 0.0 {
        return Err(DressingError::Degenerate);
    }
    let x = delta_mw / w;
    let c_plus = (1.0 + x).sqrt();
    let c_minus = -(1.0 - x).max(0.0).sqrt();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Ok(DressedPair {
        c_plus,
        c_minus,
        delta_plus: delta_l + 0.5 * (delta_mw + w),
        delta_minus: delta_l + 0.5 * (delta_mw - w),
        plus: [s * c_minus, s * c_plus],
        minus: [-s * c_plus, s * c_minus],
    })
}

/// The Rydberg-manifold block as an explicit matrix in (S, P).
pub fn rydberg_block(delta_l: f64, delta_mw: f64, omega_mw: f64) -> Matrix2<f64> {
    Matrix2::new(delta_l, -0.5 * omega_mw, -0.5 * omega_mw, delta_l + delta_mw)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevel {
    /// Δ = Δ₋.
    pub delta: f64,
    /// Ω = Ω_L/(2√2).
    pub omega: f64,
    pub dressed: DressedPair,
}

pub fn two_level(drive: &DriveParams) -> Result<TwoLevel, DressingError> {
    let dressed = dressed_states(drive.delta_l, drive.delta_mw, drive.omega_mw)?;
    Ok(TwoLevel { delta: dressed.delta_minus, omega: drive.omega_l / (2.0 * std::f64::consts::SQRT_2), dressed })
}

pub fn angular_factor(theta: f64) -> f64 {
    1.0 - 3.0 * theta.cos().powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairInteraction {
    pub pair: (usize, usize),
    pub r: f64,
    pub theta: f64,
    /// ⟨S|z|P⟩ in metres.
    pub d: f64,
    pub angular: f64,
    /// Joules.
    pub energy: f64,
    /// V/ħ in rad/s.
    pub omega: f64,
    /// V/h in Hz.
    pub nu: f64,
}

/// V = e²d²(1 − 3cos²θ)/(4πε₀R³); the factor is 1 in the plane.
pub fn pair_interaction(pair: (usize, usize), d_m: f64, r: f64, theta: f64) -> Result<PairInteraction, DressingError> {
    if !(r > 0.0) {
        return Err(DressingError::Domain(r));
    }
    let angular = angular_factor(theta);
    let energy = COULOMB_K * d_m * d_m / r.powi(3) * angular;
    Ok(PairInteraction {
        pair,
        r,
        theta,
        d: d_m,
        angular,
        energy,
        omega: energy / HBAR,
        nu: energy / (2.0 * PI * HBAR),
    })
}

/// Pairwise couplings for every ion pair of an equilibrium.
pub fn crystal_couplings(eq: &Equilibrium, d_m: f64) -> Result<Vec<PairInteraction>, DressingError> {
    let n = eq.n();
    let mut out = vec![];
    for i in 0..n {
        for j in i + 1..n {
            out.push(pair_interaction((i, j), d_m, eq.distances[(i, j)], eq.theta[(i, j)])?);
        }
    }
    Ok(out)
}

/// e²d cosθ_ij/(4πε₀R_ij²) for each ordered pair (J); antisymmetric.
pub fn charge_dipole_coefficients(eq: &Equilibrium, d_m: f64) -> DMatrix<f64> {
    let n = eq.n();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            COULOMB_K * d_m * eq.theta[(i, j)].cos() / eq.distances[(i, j)].powi(2)
        }
    })
}

/// δβ = e/(4πε₀R₀³).
pub fn quadrupole_gradient_shift(r0: f64) -> f64 {
    COULOMB_K / E_CHARGE / r0.powi(3)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct V0Point {
    pub b_tesla: f64,
    pub n: u32,
    pub wz_over_wr: f64,
    pub wr: f64,
    pub r0: f64,
    /// |⟨E_S|z|E_P⟩| in Bohr.
    pub d_bohr: f64,
    pub energy: f64,
    pub omega: f64,
    pub nu: f64,
    pub planar_ok: bool,
}

/// V₀(B) for the planar three-ion crystal with ω_z/ω_ρ held at `ratio`.
pub fn v0_of_b(
    model: &InternalModel,
    track: &AdiabaticTrack,
    s: &UncoupledLabel,
    p: &UncoupledLabel,
    b_values: &[f64],
    ratio: f64,
    mass_kg: f64,
) -> Result<Vec<V0Point>, DressingError> {
    b_values
        .iter()
        .map(|&b| {
            let d = dipole_element(model, track, s, p, b)?.abs();
            let wr = wr_for_ratio(b, mass_kg, ratio);
            let r0 = triangle_side(mass_kg, wr);
            let v = pair_interaction((0, 1), d * A0, r0, PI / 2.0)?;
            Ok(V0Point {
                b_tesla: b,
                n: s.n,
                wz_over_wr: ratio,
                wr,
                r0,
                d_bohr: d,
                energy: v.energy,
                omega: v.omega,
                nu: v.nu,
                planar_ok: ratio >= PLANAR_RATIO_N3,
            })
        })
        .collect()
}

pub const V0_HEADER: &str = "B_tesla,n,wz_over_wr,V0_MHz,planar_ok,V0_over_hbar_1e6_per_s,d_bohr";

pub fn write_v0_rows(w: &mut impl Write, pts: &[V0Point]) -> std::io::Result<()> {
    for p in pts {
        writeln!(
            w,
            "{},{},{},{:.9},{},{:.9},{:.6}",
            p.b_tesla,
            p.n,
            p.wz_over_wr,
            p.nu / 1e6,
            p.planar_ok,
            p.omega / 1e6,
            p.d_bohr
        )?;
    }
    Ok(())
}

/// Eigen-decomposition of [`rydberg_block`], ascending.
pub fn rydberg_block_eigen(delta_l: f64, delta_mw: f64, omega_mw: f64) -> ([f64; 2], Matrix2<f64>) {
    let e = SymmetricEigen::new(rydberg_block(delta_l, delta_mw, omega_mw));
    if e.eigenvalues[0] <= e.eigenvalues[1] {
        ([e.eigenvalues[0], e.eigenvalues[1]], e.eigenvectors)
    } else {
        let v = e.eigenvectors;
        ([e.eigenvalues[1], e.eigenvalues[0]], Matrix2::from_columns(&[v.column(1), v.column(0)]))
    }
}
