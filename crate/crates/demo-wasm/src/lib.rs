//! wasm-bindgen entry points for `www/index.html`. Every function takes plain
//! numbers and returns a flat `Float64Array` so the page needs no glue types.
//! The `calc` functions carry the logic and are what native tests exercise;
//! `JsError` cannot be built off wasm.

use rydberg_penning::constants::AMU;
use rydberg_penning::crystal::{align_triangle, normal_modes, solve_equilibrium, CrystalConfig, DimensionPolicy, SeedPolicy};
use rydberg_penning::spin::{facilitation_v0, spectrum, SpinModelParams};
use rydberg_penning::trap::{confinement_frequencies, TrapConfig};
use std::f64::consts::PI;
use wasm_bindgen::prelude::*;

/// `[ν_z, ν_c, ν_ρ]` in kHz (ω/2π) and a stability flag (1 or 0).
pub fn calc_trap(b_tesla: f64, beta: f64, mass_amu: f64) -> Result<Vec<f64>, String> {
    if !(b_tesla >= 0.0 && beta >= 0.0 && mass_amu > 0.0) {
        return Err("B, beta must be non-negative and the mass positive".into());
    }
    let f = confinement_frequencies(&TrapConfig { b_tesla, beta, mass_kg: mass_amu * AMU });
    let khz = |w: f64| w / (2.0 * PI) / 1e3;
    Ok(vec![khz(f.wz), khz(f.wc), khz(f.wr), if f.stable { 1.0 } else { 0.0 }])
}

/// Planar three-ion crystal: six ω_α/ω_ρ, then (x, y) in μm for each ion,
/// then the triangle side in μm.
pub fn calc_triangle(wr_khz: f64, wz_over_wr: f64, anisotropy: f64, mass_amu: f64) -> Result<Vec<f64>, String> {
    if !(wr_khz > 0.0 && mass_amu > 0.0 && anisotropy.abs() < 0.5) {
        return Err("need ω_ρ > 0, mass > 0 and |anisotropy| < 0.5".into());
    }
    let wr = 2.0 * PI * wr_khz * 1e3;
    let cfg = CrystalConfig {
        n_ions: 3,
        wx: wr * (1.0 + anisotropy),
        wy: wr * (1.0 - anisotropy),
        wz: wz_over_wr * wr,
        mass_kg: mass_amu * AMU,
        policy: DimensionPolicy::Planar,
    };
    let err = |e: rydberg_penning::crystal::CrystalError| e.to_string();
    let mut eq = solve_equilibrium(&cfg, SeedPolicy::default()).map_err(err)?;
    if anisotropy == 0.0 {
        eq = align_triangle(&eq, &cfg).map_err(err)?;
    }
    let modes = normal_modes(&eq, &cfg).map_err(err)?;
    let mut out: Vec<f64> = modes.omega.iter().map(|w| w / cfg.w_ref()).collect();
    for p in &eq.positions {
        out.extend([p[0] * 1e6, p[1] * 1e6]);
    }
    out.push(eq.distances[(0, 1)] * 1e6);
    Ok(out)
}

/// Eight ascending eigenvalues (units of Δ) of the facilitated triangle at Ω/Δ.
pub fn calc_spin(omega_over_delta: f64) -> Result<Vec<f64>, String> {
    if !omega_over_delta.is_finite() {
        return Err("Ω/Δ must be finite".into());
    }
    let p = SpinModelParams::uniform(3, omega_over_delta, 1.0, facilitation_v0(1.0));
    spectrum(&p).map(|s| s.energies).map_err(|e| e.to_string())
}

fn js<T>(r: Result<T, String>) -> Result<T, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn trap_frequencies(b_tesla: f64, beta: f64, mass_amu: f64) -> Result<Vec<f64>, JsError> {
    js(calc_trap(b_tesla, beta, mass_amu))
}

#[wasm_bindgen]
pub fn triangle_modes(wr_khz: f64, wz_over_wr: f64, anisotropy: f64, mass_amu: f64) -> Result<Vec<f64>, JsError> {
    js(calc_triangle(wr_khz, wz_over_wr, anisotropy, mass_amu))
}

#[wasm_bindgen]
pub fn spin_levels(omega_over_delta: f64) -> Result<Vec<f64>, JsError> {
    js(calc_spin(omega_over_delta))
}
