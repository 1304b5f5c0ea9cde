//! Single-ion Penning-trap motion and its state-dependent corrections from
//! the internal–external coupling.

use crate::angular::UncoupledLabel;
use crate::constants::{A0, E_CHARGE, HARTREE};
use crate::internal::{AdiabaticTrack, InternalError, InternalModel};
use crate::radial::radial_integral;
use std::io::Write;

#[derive(Debug, thiserror::Error)]
pub enum CouplingError {
    #[error(transparent)]
    Internal(#[from] InternalError),
    #[error("nearest-state corrections need an S target, got {0}")]
    NotS(UncoupledLabel),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapConfig {
    pub b_tesla: f64,
    pub beta: f64,
    pub mass_kg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapFrequencies {
    pub wz: f64,
    pub wc: f64,
    /// Zero when unstable.
    pub wr: f64,
    pub stable: bool,
}

pub fn confinement_frequencies(trap: &TrapConfig) -> TrapFrequencies {
    let wz = (4.0 * E_CHARGE * trap.beta / trap.mass_kg).sqrt();
    let wc = E_CHARGE * trap.b_tesla / trap.mass_kg;
    let disc = wc * wc - 2.0 * wz * wz;
    // rounding at the boundary must not report a vanishing ω_ρ as stable
    let stable = disc > 1e-12 * wc * wc;
    TrapFrequencies { wz, wc, wr: if stable { 0.5 * disc.sqrt() } else { 0.0 }, stable }
}

/// Gradient giving ω_z/ω_ρ = `ratio` at field `b_tesla`.
pub fn beta_for_ratio(b_tesla: f64, mass_kg: f64, ratio: f64) -> f64 {
    let wc = E_CHARGE * b_tesla / mass_kg;
    let wr = wc / (4.0 + 2.0 * ratio * ratio).sqrt();
    let wz = ratio * wr;
    mass_kg * wz * wz / (4.0 * E_CHARGE)
}

/// ω_ρ at field `b_tesla` when ω_z/ω_ρ is held at `ratio`.
pub fn wr_for_ratio(b_tesla: f64, mass_kg: f64, ratio: f64) -> f64 {
    E_CHARGE * b_tesla / mass_kg / (4.0 + 2.0 * ratio * ratio).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingMode {
    /// Only the n' = n P manifold.
    NearestState,
    /// Every dipole-connected state of the basis.
    FullSum,
}

impl CouplingMode {
    pub fn name(self) -> &'static str {
        match self {
            CouplingMode::NearestState => "nearest",
            CouplingMode::FullSum => "full",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingCorrections {
    pub m_tilde: f64,
    pub wr2_tilde: f64,
    pub wz2_tilde: f64,
    /// Coefficient of L_z/2 and of Y P_x.
    pub wc_tilde: f64,
    pub d_wr: f64,
    pub d_wz: f64,
    pub d_wc: f64,
    pub d_m: f64,
    pub rel_wr: f64,
    pub rel_wz: f64,
    pub rel_wc: f64,
    pub rel_m: f64,
    /// Terms dropped for near-degenerate denominators, as (label, ΔE in J).
    pub excluded: Vec<(UncoupledLabel, f64)>,
}

/// Σ |⟨L|r|L'⟩|²/(E_L' − E_L) over the selected partners (SI: m²/J), split
/// into Δm_l = ±1 (averaged over the available sign) and Δm_l = 0 parts.
fn susceptibilities(
    model: &InternalModel,
    track: &AdiabaticTrack,
    target: &UncoupledLabel,
    b_tesla: f64,
    mode: CouplingMode,
    excluded: &mut Vec<(UncoupledLabel, f64)>,
) -> Result<(f64, f64), InternalError> {
    let e_l = track.energy(target, b_tesla)?;
    let rad_l = model
        .radial
        .get(&(target.n, target.l, 2 * target.l + 1))
        .ok_or_else(|| InternalError::UnknownLabel(target.to_string()))?;
    let mut channels: Vec<(u32, u32)> = model
        .basis
        .states
        .iter()
        .map(|s| (s.n, s.l))
        .filter(|&(n, l)| l.abs_diff(target.l) == 1 && (mode == CouplingMode::FullSum || (n == target.n && l == 1)))
        .collect();
    channels.sort();
    channels.dedup();
    let (mut chi_pm, mut chi_0) = (0.0, 0.0);
    for (n, l) in channels {
        let rad = &model.radial[&(n, l, 2 * l + 1)];
        let r = radial_integral(rad_l, rad, 1)? * A0;
        let term = |ml: i32, excluded: &mut Vec<(UncoupledLabel, f64)>| -> Result<Option<f64>, InternalError> {
            let Some(lab) = UncoupledLabel::new(n, l, ml, target.ms2) else { return Ok(None) };
            let de = (track.energy(&lab, b_tesla)? - e_l) * HARTREE;
            if de.abs() < 1e-6 * (e_l * HARTREE).abs() {
                excluded.push((lab, de));
                return Ok(None);
            }
            Ok(Some(r * r / de))
        };
        if let Some(v) = term(target.ml, excluded)? {
            chi_0 += v;
        }
        let side: Vec<f64> = [target.ml - 1, target.ml + 1]
            .into_iter()
            .filter_map(|ml| term(ml, excluded).transpose())
            .collect::<Result<_, _>>()?;
        if !side.is_empty() {
            chi_pm += side.iter().sum::<f64>() / side.len() as f64;
        }
    }
    Ok((chi_pm, chi_0))
}

/// Mass and frequency modifications for internal state `target`. Both modes
/// share the closed forms; they differ only in which partners enter χ.
pub fn coupling_corrections(
    model: &InternalModel,
    track: &AdiabaticTrack,
    target: &UncoupledLabel,
    trap: &TrapConfig,
    mode: CouplingMode,
) -> Result<CouplingCorrections, CouplingError> {
    if mode == CouplingMode::NearestState && target.l != 0 {
        return Err(CouplingError::NotS(*target));
    }
    let mut excluded = Vec::new();
    let (chi_pm, chi_0) = susceptibilities(model, track, target, trap.b_tesla, mode, &mut excluded)?;
    let (e, b, beta, m) = (E_CHARGE, trap.b_tesla, trap.beta, trap.mass_kg);
    let k_rho = 2.0 * e * beta - e * e * b * b / (2.0 * m);
    let m_tilde = if chi_pm != 0.0 { -3.0 * m * m / (e * e * b * b) / chi_pm } else { f64::INFINITY };
    let wr2_tilde = -k_rho * k_rho / (3.0 * m) * chi_pm;
    let wz2_tilde = -32.0 * e * e * beta * beta / (3.0 * m) * chi_0;
    let wc_tilde = -2.0 * e * b / (3.0 * m) * (4.0 * e * beta - e * e * b * b / m) * chi_pm;
    let f = confinement_frequencies(trap);
    let d_wr = if f.wr > 0.0 { wr2_tilde / (2.0 * f.wr) } else { f64::NAN };
    let d_wz = if f.wz > 0.0 { wz2_tilde / (2.0 * f.wz) } else { f64::NAN };
    let d_wc = wc_tilde;
    let d_m = if m_tilde.is_finite() { m * m / (m + m_tilde) } else { 0.0 };
    Ok(CouplingCorrections {
        m_tilde,
        wr2_tilde,
        wz2_tilde,
        wc_tilde,
        d_wr,
        d_wz,
        d_wc,
        d_m,
        rel_wr: d_wr / f.wr,
        rel_wz: d_wz / f.wz,
        rel_wc: d_wc / f.wc,
        rel_m: d_m / m,
        excluded,
    })
}

pub const CORRECTIONS_HEADER: &str = "n,B_tesla,beta,dwr_rel,dwz_rel,dwc_rel,dM_rel,mode";

pub fn write_corrections_row(
    w: &mut impl Write,
    n: u32,
    trap: &TrapConfig,
    c: &CouplingCorrections,
    mode: CouplingMode,
) -> std::io::Result<()> {
    writeln!(
        w,
        "{n},{},{:e},{:e},{:e},{:e},{:e},{}",
        trap.b_tesla,
        trap.beta,
        c.rel_wr,
        c.rel_wz,
        c.rel_wc,
        c.rel_m,
        mode.name()
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::AMU;
    use std::f64::consts::PI;

    #[test]
    fn zero_gradient_limit() {
        let f = confinement_frequencies(&TrapConfig { b_tesla: 1.0, beta: 0.0, mass_kg: 40.0 * AMU });
        assert_eq!(f.wz, 0.0);
        assert!((f.wr - f.wc / 2.0).abs() < 1e-9 * f.wc);
        assert!(f.stable);
    }

    #[test]
    fn stability_boundary() {
        let m = 40.0 * AMU;
        let b = 1.0;
        let wc = E_CHARGE * b / m;
        // ω_c = √2 ω_z  ⇔  β = M ω_c² / (8e)
        let beta = m * wc * wc / (8.0 * E_CHARGE);
        let f = confinement_frequencies(&TrapConfig { b_tesla: b, beta, mass_kg: m });
        assert!(!f.stable);
        assert_eq!(f.wr, 0.0);
    }

    #[test]
    fn ratio_helpers() {
        let m = 40.0 * AMU;
        let beta = beta_for_ratio(2.0, m, 2.0);
        let f = confinement_frequencies(&TrapConfig { b_tesla: 2.0, beta, mass_kg: m });
        assert!((f.wz / f.wr - 2.0).abs() < 1e-9);
        assert!((f.wr - wr_for_ratio(2.0, m, 2.0)).abs() < 1e-6);
        assert!((f.wz / (2.0 * PI) / 440e3 - 1.0).abs() < 0.02);
    }
}
