//! Coulomb crystals in the rotating-frame harmonic potential: equilibria,
//! planarity, normal modes and linear spin–phonon couplings.
//!
//! Internally lengths are measured in ℓ₀ = (e²/(4πε₀Mω²))^{1/3} and energies in
//! Mω²ℓ₀², with ω the mean radial frequency.

use crate::constants::{COULOMB_K, HBAR};
use crate::trap::TrapFrequencies;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::io::Write;

/// Critical ω_z/ω_ρ for a planar three-ion crystal, the literature value used
/// as the operating criterion.
pub const PLANAR_RATIO_N3: f64 = 1.84;
pub const MAX_IONS: usize = 7;

#[derive(Debug, thiserror::Error)]
pub enum CrystalError {
    #[error("trap is not radially confining (ω_ρ = {0})")]
    Unstable(f64),
    #[error("N = {0} outside 1..={MAX_IONS}")]
    IonCount(usize),
    #[error("planar policy requested but configuration is not planar (ω_z/ω_ρ = {ratio:.3}, critical {critical:.3})")]
    NotPlanar { ratio: f64, critical: f64 },
    #[error("equilibrium search did not converge: gradient {grad:e} after {iters} iterations")]
    NoConvergence { iters: usize, grad: f64, last: Vec<[f64; 3]> },
    #[error("stationary point is a saddle (lowest Hessian eigenvalue {0:e})")]
    Saddle(f64),
    #[error("spin–phonon couplings need N = 3 planar modes")]
    Unsupported,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimensionPolicy {
    Planar,
    Full3D,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrystalConfig {
    pub n_ions: usize,
    pub wx: f64,
    pub wy: f64,
    pub wz: f64,
    pub mass_kg: f64,
    pub policy: DimensionPolicy,
}

impl CrystalConfig {
    pub fn from_trap(n_ions: usize, f: &TrapFrequencies, mass_kg: f64, policy: DimensionPolicy) -> Self {
        Self { n_ions, wx: f.wr, wy: f.wr, wz: f.wz, mass_kg, policy }
    }

    pub fn isotropic(n_ions: usize, wr: f64, wz: f64, mass_kg: f64, policy: DimensionPolicy) -> Self {
        Self { n_ions, wx: wr, wy: wr, wz, mass_kg, policy }
    }

    pub fn w_ref(&self) -> f64 {
        (0.5 * (self.wx * self.wx + self.wy * self.wy)).sqrt()
    }

    pub fn length_unit(&self) -> f64 {
        (COULOMB_K / (self.mass_kg * self.w_ref().powi(2))).cbrt()
    }

    fn curvatures(&self) -> [f64; 3] {
        let w2 = self.w_ref().powi(2);
        [self.wx * self.wx / w2, self.wy * self.wy / w2, self.wz * self.wz / w2]
    }

    fn dims(&self) -> usize {
        match self.policy {
            DimensionPolicy::Planar => 2,
            DimensionPolicy::Full3D => 3,
        }
    }
}

/// Side of the equilateral three-ion crystal, (3e²/(4πε₀Mω_ρ²))^{1/3}.
pub fn triangle_side(mass_kg: f64, wr: f64) -> f64 {
    (3.0 * COULOMB_K / (mass_kg * wr * wr)).cbrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Equilibrium {
    /// Positions in metres.
    pub positions: Vec<[f64; 3]>,
    /// |∇V| in newtons.
    pub grad_norm: f64,
    /// Potential energy in joules.
    pub energy: f64,
    pub distances: DMatrix<f64>,
    /// Angle between the pair axis and z.
    pub theta: DMatrix<f64>,
    pub phi: DMatrix<f64>,
    pub min_hessian_eig: f64,
}

impl Equilibrium {
    pub fn n(&self) -> usize {
        self.positions.len()
    }

    fn from_scaled(cfg: &CrystalConfig, q: &[[f64; 3]]) -> Self {
        let l0 = cfg.length_unit();
        let e0 = cfg.mass_kg * cfg.w_ref().powi(2) * l0 * l0;
        let n = q.len();
        let g = gradient(cfg, q);
        let h = hessian(cfg, q);
        let min_eig = SymmetricEigen::new(h).eigenvalues.min();
        let mut distances = DMatrix::zeros(n, n);
        let mut theta = DMatrix::zeros(n, n);
        let mut phi = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let d = sub(&q[i], &q[j]);
                let r = norm(&d);
                distances[(i, j)] = r * l0;
                theta[(i, j)] = (d[2] / r).clamp(-1.0, 1.0).acos();
                phi[(i, j)] = d[1].atan2(d[0]);
            }
        }
        Self {
            positions: q.iter().map(|p| [p[0] * l0, p[1] * l0, p[2] * l0]).collect(),
            grad_norm: g.norm() * e0 / l0,
            energy: energy(cfg, q) * e0,
            distances,
            theta,
            phi,
            min_hessian_eig: min_eig,
        }
    }

    fn scaled(&self, cfg: &CrystalConfig) -> Vec<[f64; 3]> {
        let l0 = cfg.length_unit();
        self.positions.iter().map(|p| [p[0] / l0, p[1] / l0, p[2] / l0]).collect()
    }

    /// Positions in micrometres, one row per ion.
    pub fn write_positions(&self, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(w, "ion,x_um,y_um,z_um")?;
        for (i, p) in self.positions.iter().enumerate() {
            writeln!(w, "{},{:.9},{:.9},{:.9}", i + 1, p[0] * 1e6, p[1] * 1e6, p[2] * 1e6)?;
        }
        Ok(())
    }
}

fn sub(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn norm(a: &[f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

fn energy(cfg: &CrystalConfig, q: &[[f64; 3]]) -> f64 {
    let k = cfg.curvatures();
    let mut e = 0.0;
    for (i, p) in q.iter().enumerate() {
        e += 0.5 * (k[0] * p[0] * p[0] + k[1] * p[1] * p[1] + k[2] * p[2] * p[2]);
        for pj in &q[..i] {
            e += 1.0 / norm(&sub(p, pj));
        }
    }
    e
}

/// Coordinate ordering: all x, then all y (then all z).
fn gradient(cfg: &CrystalConfig, q: &[[f64; 3]]) -> DVector<f64> {
    let (n, dm) = (q.len(), cfg.dims());
    let k = cfg.curvatures();
    let mut g = DVector::zeros(dm * n);
    for i in 0..n {
        for c in 0..dm {
            g[c * n + i] += k[c] * q[i][c];
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = sub(&q[i], &q[j]);
            let r3 = norm(&d).powi(3);
            for c in 0..dm {
                g[c * n + i] -= d[c] / r3;
            }
        }
    }
    g
}

/// Hessian of the scaled potential in the policy's coordinates.
fn hessian(cfg: &CrystalConfig, q: &[[f64; 3]]) -> DMatrix<f64> {
    hessian_dims(cfg, q, cfg.dims())
}

fn hessian_dims(cfg: &CrystalConfig, q: &[[f64; 3]], dm: usize) -> DMatrix<f64> {
    let n = q.len();
    let k = cfg.curvatures();
    let mut h = DMatrix::zeros(dm * n, dm * n);
    for i in 0..n {
        for c in 0..dm {
            h[(c * n + i, c * n + i)] += k[c];
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = sub(&q[i], &q[j]);
            let r = norm(&d);
            let (r3, r5) = (r.powi(3), r.powi(5));
            for a in 0..dm {
                for b in 0..dm {
                    // ∂²(1/r)/∂d_a∂d_b
                    let t = 3.0 * d[a] * d[b] / r5 - if a == b { 1.0 / r3 } else { 0.0 };
                    h[(a * n + i, b * n + i)] += t;
                    h[(a * n + i, b * n + j)] -= t;
                }
            }
        }
    }
    h
}

fn unpack(cfg: &CrystalConfig, v: &DVector<f64>) -> Vec<[f64; 3]> {
    let n = cfg.n_ions;
    (0..n)
        .map(|i| {
            let mut p = [0.0; 3];
            for (c, pc) in p.iter_mut().enumerate().take(cfg.dims()) {
                *pc = v[c * n + i];
            }
            p
        })
        .collect()
}

fn pack(cfg: &CrystalConfig, q: &[[f64; 3]]) -> DVector<f64> {
    let n = q.len();
    let dm = cfg.dims();
    DVector::from_fn(dm * n, |k, _| q[k % n][k / n])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedPolicy {
    pub seed: u64,
    pub restarts: usize,
    pub max_iters: usize,
}

impl Default for SeedPolicy {
    fn default() -> Self {
        Self { seed: 0x5eed, restarts: 8, max_iters: 500 }
    }
}

/// Levenberg-damped Newton descent from one start; returns scaled positions.
fn relax(cfg: &CrystalConfig, start: Vec<[f64; 3]>, max_iters: usize, tol: f64) -> Result<Vec<[f64; 3]>, CrystalError> {
    let mut x = pack(cfg, &start);
    let mut q = start;
    let mut e = energy(cfg, &q);
    let mut lambda = 1e-3;
    for it in 0..max_iters {
        let g = gradient(cfg, &q);
        if g.norm() < tol {
            return Ok(q);
        }
        let mut h = hessian(cfg, &q);
        let mut accepted = false;
        for _ in 0..60 {
            for d in 0..h.nrows() {
                h[(d, d)] += lambda;
            }
            let step = h.clone().cholesky().map(|c| c.solve(&(-&g)));
            for d in 0..h.nrows() {
                h[(d, d)] -= lambda;
            }
            if let Some(step) = step {
                let xn = &x + &step;
                let qn = unpack(cfg, &xn);
                let en = energy(cfg, &qn);
                if en <= e + 1e-14 * e.abs() && en.is_finite() {
                    x = xn;
                    q = qn;
                    e = en;
                    lambda = (lambda * 0.1).max(1e-14);
                    accepted = true;
                    break;
                }
            }
            lambda *= 10.0;
        }
        if !accepted {
            return Err(CrystalError::NoConvergence { iters: it, grad: g.norm(), last: q });
        }
    }
    let grad = gradient(cfg, &q).norm();
    if grad < tol {
        Ok(q)
    } else {
        Err(CrystalError::NoConvergence { iters: max_iters, grad, last: q })
    }
}

fn check_config(cfg: &CrystalConfig) -> Result<(), CrystalError> {
    if cfg.n_ions == 0 || cfg.n_ions > MAX_IONS {
        return Err(CrystalError::IonCount(cfg.n_ions));
    }
    if !(cfg.wx > 0.0 && cfg.wy > 0.0) {
        return Err(CrystalError::Unstable(cfg.wx.min(cfg.wy)));
    }
    Ok(())
}

/// Lowest-energy local minimum over seeded restarts.
pub fn solve_equilibrium(cfg: &CrystalConfig, seeds: SeedPolicy) -> Result<Equilibrium, CrystalError> {
    check_config(cfg)?;
    if cfg.policy == DimensionPolicy::Planar {
        let pc = planarity_check(cfg);
        if !pc.planar {
            return Err(CrystalError::NotPlanar { ratio: pc.ratio, critical: pc.critical });
        }
    }
    let q = solve_scaled(cfg, seeds)?;
    let eq = Equilibrium::from_scaled(cfg, &q);
    if eq.min_hessian_eig < -1e-8 {
        return Err(CrystalError::Saddle(eq.min_hessian_eig));
    }
    Ok(eq)
}

fn solve_scaled(cfg: &CrystalConfig, seeds: SeedPolicy) -> Result<Vec<[f64; 3]>, CrystalError> {
    let n = cfg.n_ions;
    if n == 1 {
        return Ok(vec![[0.0; 3]]);
    }
    // Force scale Mω²R₀ in reduced units is R₀/ℓ₀ ~ N^{1/3}.
    let tol = 1e-10 * (n as f64).cbrt();
    let radius = 0.8 * (n as f64).cbrt();
    let results: Vec<_> = (0..seeds.restarts.max(1))
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seeds.seed.wrapping_add(k as u64));
            let start: Vec<[f64; 3]> = (0..n)
                .map(|i| {
                    let a = 2.0 * PI * i as f64 / n as f64;
                    let mut p = [radius * a.cos(), radius * a.sin(), 0.0];
                    for c in p.iter_mut().take(cfg.dims()) {
                        *c += 0.3 * rng.random_range(-1.0..1.0);
                    }
                    p
                })
                .collect();
            relax(cfg, start, seeds.max_iters, tol)
        })
        .collect();
    let mut best: Option<(f64, Vec<[f64; 3]>)> = None;
    let mut last_err = None;
    for r in results {
        match r {
            Ok(q) => {
                let e = energy(cfg, &q);
                if best.as_ref().is_none_or(|(eb, _)| e < eb - 1e-12 * eb.abs()) {
                    best = Some((e, q));
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    best.map(|(_, q)| q).ok_or_else(|| last_err.expect("at least one restart"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Planarity {
    pub planar: bool,
    pub ratio: f64,
    pub critical: f64,
    /// Lowest out-of-plane Hessian eigenvalue at the planar equilibrium, in units of ω².
    pub min_out_of_plane: f64,
}

/// Out-of-plane stability of the planar equilibrium. For N = 3 the decision
/// uses [`PLANAR_RATIO_N3`]; other N use the sign of the out-of-plane curvature.
pub fn planarity_check(cfg: &CrystalConfig) -> Planarity {
    let ratio = cfg.wz / cfg.w_ref();
    let planar_cfg = CrystalConfig { policy: DimensionPolicy::Planar, ..*cfg };
    let min_oop = solve_scaled(&planar_cfg, SeedPolicy::default())
        .map(|q| out_of_plane_min(cfg, &q))
        .unwrap_or(f64::NAN);
    // the z block scales as ω_z² minus a geometry term: zero crossing gives the numeric ratio
    let numeric_critical = (ratio * ratio - min_oop).max(0.0).sqrt();
    let (planar, critical) = if cfg.n_ions == 3 {
        (ratio >= PLANAR_RATIO_N3, PLANAR_RATIO_N3)
    } else if cfg.n_ions == 1 {
        (true, 0.0)
    } else {
        (min_oop > 0.0, numeric_critical)
    };
    Planarity { planar, ratio, critical, min_out_of_plane: min_oop }
}

fn out_of_plane_min(cfg: &CrystalConfig, q: &[[f64; 3]]) -> f64 {
    let h3 = hessian_dims(cfg, q, 3);
    let n = q.len();
    let hz = h3.view((2 * n, 2 * n), (n, n)).into_owned();
    SymmetricEigen::new(hz).eigenvalues.min()
}

/// ω_z/ω_ρ at which the lowest out-of-plane curvature of the planar crystal vanishes.
pub fn numeric_planar_crossover(n_ions: usize) -> f64 {
    let cfg = CrystalConfig { n_ions, wx: 1.0, wy: 1.0, wz: 0.0, mass_kg: 1.0, policy: DimensionPolicy::Planar };
    let p = planarity_check(&cfg);
    (-p.min_out_of_plane).max(0.0).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeDecomposition {
    /// M⁻¹∇∇V in s⁻², coordinates ordered x₁..x_N, y₁..y_N (, z₁..z_N).
    pub k: DMatrix<f64>,
    /// Orthonormal eigenvectors as columns, ascending frequency.
    pub modes: DMatrix<f64>,
    pub omega: Vec<f64>,
    /// √(ħ/(2Mω)); `None` for zero modes.
    pub lengths: Vec<Option<f64>>,
    pub zero_modes: Vec<usize>,
    pub classes: Vec<&'static str>,
    pub w_ref: f64,
}

impl ModeDecomposition {
    pub fn write_table(&self, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(w, "alpha,freq_over_wr,class_label")?;
        for (a, (om, cl)) in self.omega.iter().zip(&self.classes).enumerate() {
            writeln!(w, "{a},{:.12},{cl}", om / self.w_ref)?;
        }
        Ok(())
    }
}

pub fn normal_modes(eq: &Equilibrium, cfg: &CrystalConfig) -> Result<ModeDecomposition, CrystalError> {
    let q = eq.scaled(cfg);
    let w2 = cfg.w_ref().powi(2);
    let h = hessian(cfg, &q);
    let se = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let scale = se.eigenvalues.amax().max(1.0);
    let n = q.len();
    let dm = cfg.dims();
    let mut modes = DMatrix::zeros(dm * n, dm * n);
    let (mut omega, mut lengths, mut zero_modes, mut classes) = (vec![], vec![], vec![], vec![]);
    for (c, &k) in order.iter().enumerate() {
        let lam = se.eigenvalues[k];
        if lam < -1e-9 * scale {
            return Err(CrystalError::Saddle(lam));
        }
        let mut v = se.eigenvectors.column(k).into_owned();
        // deterministic sign: largest component positive
        if v[v.iamax()] < 0.0 {
            v = -v;
        }
        modes.set_column(c, &v);
        let is_zero = lam.abs() < 1e-9 * scale;
        let om = if is_zero { 0.0 } else { (lam * w2).sqrt() };
        if is_zero {
            zero_modes.push(c);
        }
        omega.push(om);
        lengths.push((!is_zero).then(|| (HBAR / (2.0 * cfg.mass_kg * om)).sqrt()));
        classes.push(classify(&q, dm, v.as_slice(), is_zero));
    }
    Ok(ModeDecomposition { k: h * w2, modes, omega, lengths, zero_modes, classes, w_ref: cfg.w_ref() })
}

fn classify(q: &[[f64; 3]], dm: usize, v: &[f64], is_zero: bool) -> &'static str {
    let n = q.len();
    let proj = |u: &dyn Fn(usize, usize) -> f64| {
        let nu: f64 = (0..dm * n).map(|k| u(k % n, k / n).powi(2)).sum::<f64>().sqrt();
        if nu == 0.0 {
            return 0.0;
        }
        ((0..dm * n).map(|k| u(k % n, k / n) * v[k]).sum::<f64>() / nu).powi(2)
    };
    let com: f64 = (0..dm).map(|d| proj(&|_, c| if c == d { 1.0 } else { 0.0 })).sum();
    let rot = proj(&|i, c| match c {
        0 => -q[i][1],
        1 => q[i][0],
        _ => 0.0,
    });
    let breathe = proj(&|i, c| if c < 2 { q[i][c] } else { 0.0 });
    let axial: f64 = (0..n).filter(|_| dm == 3).map(|i| v[2 * n + i].powi(2)).sum();
    if com > 0.99 {
        "center-of-mass"
    } else if is_zero || rot > 0.99 {
        "rotation"
    } else if breathe > 0.99 {
        "breathing"
    } else if axial > 0.99 {
        "axial"
    } else {
        "rocking"
    }
}

/// Rigid rotation and reordering of a planar three-ion equilibrium into the
/// reference frame: ion 1 on the −x axis, ions 1→2→3 counter-clockwise.
pub fn align_triangle(eq: &Equilibrium, cfg: &CrystalConfig) -> Result<Equilibrium, CrystalError> {
    if eq.n() != 3 || cfg.policy != DimensionPolicy::Planar {
        return Err(CrystalError::Unsupported);
    }
    let q = eq.scaled(cfg);
    let c = [(q[0][0] + q[1][0] + q[2][0]) / 3.0, (q[0][1] + q[1][1] + q[2][1]) / 3.0];
    let ang = |p: &[f64; 3]| (p[1] - c[1]).atan2(p[0] - c[0]);
    let rot = PI - ang(&q[0]);
    let (s, co) = rot.sin_cos();
    let mut r: Vec<[f64; 3]> = q
        .iter()
        .map(|p| {
            let (x, y) = (p[0] - c[0], p[1] - c[1]);
            [co * x - s * y, s * x + co * y, 0.0]
        })
        .collect();
    let ccw = |p: &[f64; 3]| (p[1].atan2(p[0]) - PI).rem_euclid(2.0 * PI);
    if ccw(&r[1]) > ccw(&r[2]) {
        r.swap(1, 2);
    }
    Ok(Equilibrium::from_scaled(cfg, &r))
}

/// Explicit mass-scaled Hessian of the planar triangle, in units of ω_ρ².
pub fn reference_triangle_k() -> DMatrix<f64> {
    let s = 3f64.sqrt() / 4.0;
    DMatrix::from_row_slice(
        6,
        6,
        &[
            11.0 / 6.0, -5.0 / 12.0, -5.0 / 12.0, 0.0, s, -s, //
            -5.0 / 12.0, 13.0 / 12.0, 1.0 / 3.0, s, -s, 0.0, //
            -5.0 / 12.0, 1.0 / 3.0, 13.0 / 12.0, -s, 0.0, s, //
            0.0, s, -s, 5.0 / 6.0, 1.0 / 12.0, 1.0 / 12.0, //
            s, -s, 0.0, 1.0 / 12.0, 19.0 / 12.0, -2.0 / 3.0, //
            -s, 0.0, s, 1.0 / 12.0, -2.0 / 3.0, 19.0 / 12.0,
        ],
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinPhonon {
    pub pairs: Vec<(usize, usize)>,
    /// `w[alpha][pair]` in the energy units of `v0`; `None` for zero modes.
    pub w: Vec<Option<Vec<f64>>>,
    pub excluded: Vec<usize>,
}

impl SpinPhonon {
    pub fn max_ratio(&self, v0: f64) -> f64 {
        self.w.iter().flatten().flatten().fold(0.0, |m, x| m.max((x / v0).abs()))
    }

    pub fn write_table(&self, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(w, "alpha,i,j,W")?;
        for (a, row) in self.w.iter().enumerate() {
            if let Some(row) = row {
                for (&(i, j), x) in self.pairs.iter().zip(row) {
                    writeln!(w, "{a},{},{},{:e}", i + 1, j + 1, x)?;
                }
            }
        }
        Ok(())
    }
}

/// Linear coefficients of V_ij = v0 (R_ref/R_ij)³ along each mode, with R_ref
/// the shortest pair distance: W^α_ij = −3 V_ij/R_ij · n̂_ij·(u_i − u_j) ℓ_α.
pub fn spin_phonon_couplings(v0: f64, eq: &Equilibrium, modes: &ModeDecomposition) -> SpinPhonon {
    let n = eq.n();
    let dm = modes.k.nrows() / n.max(1);
    let r_ref = (0..n)
        .flat_map(|i| (0..i).map(move |j| (i, j)))
        .map(|(i, j)| eq.distances[(i, j)])
        .fold(f64::INFINITY, f64::min);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut excluded = vec![];
    let w = (0..modes.omega.len())
        .map(|a| {
            let Some(ell) = modes.lengths[a] else {
                excluded.push(a);
                return None;
            };
            let u = modes.modes.column(a);
            Some(
                pairs
                    .iter()
                    .map(|&(i, j)| {
                        let r = eq.distances[(i, j)];
                        let vij = v0 * (r_ref / r).powi(3);
                        let d = sub(&eq.positions[i], &eq.positions[j]);
                        let proj: f64 = (0..dm).map(|c| d[c] / r * (u[c * n + i] - u[c * n + j])).sum();
                        -3.0 * vij / r * proj * ell
                    })
                    .collect(),
            )
        })
        .collect();
    SpinPhonon { pairs, w, excluded }
}
