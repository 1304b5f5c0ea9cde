//! Field-free radial problem for the core model potential.
//!
//! The reduced radial function u(r) = r R(r) is represented on a grid that
//! is uniform in x = √r through w(x) = x^{-1/2} u(x²), which obeys
//! w'' = [8x²(V_eff − E) + 3/(4x²)] w and is integrated with Numerov.
//! Eigenvalues are located by Sturm node counting, eigenvectors by an
//! outward/inward shoot matched at the outer classical turning point.

use crate::constants::C_AU;
use crate::species::{SpeciesError, SpeciesParams};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::{BufRead, Write};
use std::path::Path;
use std::sync::{Arc, RwLock};

#[derive(Debug, thiserror::Error)]
pub enum RadialError {
    #[error("radius must be positive, got {0}")]
    Domain(f64),
    #[error("invalid quantum numbers n={n} l={l} 2j={j2}")]
    QuantumNumbers { n: u32, l: u32, j2: u32 },
    #[error(transparent)]
    Species(#[from] SpeciesError),
    #[error("no bracket for n={n} l={l} 2j={j2}: node counts {nodes_lo}..{nodes_hi} over E in [{e_lo:e}, {e_hi:e}] (want {want})")]
    NoBracket { n: u32, l: u32, j2: u32, e_lo: f64, e_hi: f64, nodes_lo: usize, nodes_hi: usize, want: usize },
    #[error("grid too small for n={n}: r_max={r_max:.1} below 2n(n+15)")]
    GridTooSmall { n: u32, r_max: f64 },
    #[error("grids incompatible: {0}")]
    Grid(String),
    #[error("cache: {0}")]
    Cache(String),
}

/// ⟨l·s⟩ for s = 1/2 and j = j2/2.
pub fn l_dot_s(l: u32, j2: u32) -> f64 {
    let j = j2 as f64 / 2.0;
    let l = l as f64;
    0.5 * (j * (j + 1.0) - l * (l + 1.0) - 0.75)
}

fn central_parts(sp: &SpeciesParams, l: usize, r: f64) -> Result<(f64, f64), SpeciesError> {
    let row = sp.row(l)?;
    let z = sp.z_nuc as f64;
    let e1 = (-row.alpha1 * r).exp();
    let e3 = (-row.alpha3 * r).exp();
    let bracket = 2.0 + (z - 2.0) * e1 + row.alpha2 * e3;
    let vc = -bracket / r;
    let dvc = bracket / (r * r) + ((z - 2.0) * row.alpha1 * e1 + row.alpha2 * row.alpha3 * e3) / r;
    let (vp, dvp) = if sp.alpha_cp > 0.0 {
        let a = sp.alpha_cp;
        let s = (r / row.r_c).powi(6);
        let ex = (-s).exp();
        let one_minus = -(-s).exp_m1();
        let r4 = r.powi(4);
        (-a / (2.0 * r4) * one_minus, 2.0 * a / (r4 * r) * one_minus - 3.0 * a * s * ex / r)
    } else {
        (0.0, 0.0)
    };
    Ok((vc + vp, dvc + dvp))
}

/// Model potential V_c + V_p + V_so in Hartree at radius `r` (Bohr).
pub fn model_potential(sp: &SpeciesParams, l: u32, j2: u32, r: f64) -> Result<f64, RadialError> {
    if !(r > 0.0) {
        return Err(RadialError::Domain(r));
    }
    if j2 != 2 * l + 1 && (l == 0 || j2 != 2 * l - 1) {
        return Err(RadialError::QuantumNumbers { n: 0, l, j2 });
    }
    let (v, dv) = central_parts(sp, l as usize, r)?;
    if l == 0 || !sp.spin_orbit {
        return Ok(v);
    }
    let c2 = C_AU * C_AU;
    let reg = 1.0 - v / (2.0 * c2);
    Ok(v + l_dot_s(l, j2) / (2.0 * c2 * r) * dv / (reg * reg))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPolicy {
    /// Largest principal quantum number the grid must hold.
    pub n_max: u32,
    /// Points per shortest local wavelength (set by the bare nuclear charge near the origin).
    pub points_per_wavelength: f64,
}

impl GridPolicy {
    pub const DEFAULT_PPW: f64 = 320.0;

    pub fn for_n(n_max: u32) -> Self {
        Self { n_max, points_per_wavelength: Self::DEFAULT_PPW }
    }

    pub fn refined(&self) -> Self {
        Self { points_per_wavelength: 2.0 * self.points_per_wavelength, ..*self }
    }

    pub fn r_max(&self) -> f64 {
        let n = self.n_max.max(1) as f64;
        2.0 * n * (n + 15.0)
    }

    pub fn build(&self, sp: &SpeciesParams) -> RadialGrid {
        let z0 = sp.z_nuc as f64 + sp.rows.iter().map(|r| r.alpha2.max(0.0)).fold(0.0, f64::max);
        let k = (8.0 * z0).sqrt();
        let h_target = 2.0 * PI / k / self.points_per_wavelength;
        let x_max = self.r_max().sqrt();
        let n = (x_max / h_target).ceil() as usize;
        RadialGrid::new(x_max / n as f64, n)
    }
}

/// Nodes x_i = (i+1)·h, i = 0..len, with r = x².
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    pub h: f64,
    pub x: Vec<f64>,
}

impl RadialGrid {
    pub fn new(h: f64, len: usize) -> Self {
        Self { h, x: (1..=len).map(|i| i as f64 * h).collect() }
    }
    pub fn len(&self) -> usize {
        self.x.len()
    }
    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
    pub fn r_min(&self) -> f64 {
        self.x[0] * self.x[0]
    }
    pub fn r_max(&self) -> f64 {
        let x = self.x[self.x.len() - 1];
        x * x
    }
    pub fn r(&self, i: usize) -> f64 {
        self.x[i] * self.x[i]
    }
    pub fn same_as(&self, other: &RadialGrid) -> bool {
        self.len() == other.len() && self.h == other.h
    }
}

#[derive(Debug, Clone)]
pub struct RadialState {
    pub n: u32,
    pub l: u32,
    pub j2: u32,
    /// Hartree.
    pub energy: f64,
    pub grid: Arc<RadialGrid>,
    /// w(x) = x^{-1/2} u(x²), normalised so ∫u² dr = 1.
    pub w: Vec<f64>,
    pub nodes: usize,
}

impl RadialState {
    pub fn j(&self) -> f64 {
        self.j2 as f64 / 2.0
    }

    /// Reduced radial function u(r) on the grid.
    pub fn u(&self) -> Vec<f64> {
        self.grid.x.iter().zip(&self.w).map(|(x, w)| x.sqrt() * w).collect()
    }

    pub fn quantum_defect(&self) -> f64 {
        self.n as f64 - (2.0 / -self.energy).sqrt()
    }

    pub fn norm(&self) -> f64 {
        integrate(&self.grid, &self.w, &self.w, 0)
    }
}

fn integrate(grid: &RadialGrid, a: &[f64], b: &[f64], k: i32) -> f64 {
    // ∫ u_a u_b r^k dr = ∫ 2 x^{2k+2} w_a w_b dx; both ends vanish, so trapezoid.
    let mut s = 0.0;
    for i in 0..grid.len() {
        let x = grid.x[i];
        s += x.powi(2 * k + 2) * a[i] * b[i];
    }
    2.0 * grid.h * s
}

/// Fine substeps per grid step inside the start segment.
const START_REFINE: usize = 32;
/// The start segment covers x < START_X; the regular solution's x^{2l+3/2}
/// behaviour spoils Numerov's order there on the coarse grid.
const START_X: f64 = 0.6;

/// Precomputed E-independent part of Numerov's g(x) for one (l, j) channel.
struct Channel {
    a: Vec<f64>,
    x8: Vec<f64>,
    fine_a: Vec<f64>,
    fine_x8: Vec<f64>,
    fine_start: [f64; 2],
    /// Coarse index where the start segment ends.
    k_start: usize,
    h: f64,
}

impl Channel {
    fn new(sp: &SpeciesParams, grid: &RadialGrid, l: u32, j2: u32) -> Result<Self, RadialError> {
        let cent = 4.0 * (l * (l + 1)) as f64 + 0.75;
        let g0 = |x: f64| -> Result<(f64, f64), RadialError> {
            let v = model_potential(sp, l, j2, x * x)?;
            Ok((8.0 * x * x * v + cent / (x * x), 8.0 * x * x))
        };
        let mut a = Vec::with_capacity(grid.len());
        let mut x8 = Vec::with_capacity(grid.len());
        for &x in &grid.x {
            let (ai, xi) = g0(x)?;
            a.push(ai);
            x8.push(xi);
        }
        let k_start = ((START_X / grid.h).ceil() as usize).clamp(2, grid.len() - 3);
        let hf = grid.h / START_REFINE as f64;
        let mut fine_a = Vec::new();
        let mut fine_x8 = Vec::new();
        // fine nodes j·hf, j = 1..=(k_start+1)·START_REFINE; coarse node i sits at j = (i+1)·START_REFINE
        for j in 1..=(k_start + 1) * START_REFINE {
            let (ai, xi) = g0(j as f64 * hf)?;
            fine_a.push(ai);
            fine_x8.push(xi);
        }
        let z0 = sp.z_nuc as f64 + sp.row(l as usize)?.alpha2;
        let reg = |x: f64| x.powf(2.0 * l as f64 + 1.5) * (1.0 - z0 * x * x / (l as f64 + 1.0));
        Ok(Self { a, x8, fine_a, fine_x8, fine_start: [reg(hf), reg(2.0 * hf)], k_start, h: grid.h })
    }

    /// Regular solution at coarse nodes 0..=k_start from the fine start segment.
    fn start_values(&self, e: f64) -> Vec<f64> {
        let hf = self.h / START_REFINE as f64;
        let h2 = hf * hf;
        let nf = self.fine_a.len();
        let f = |j: usize| 1.0 - h2 * (self.fine_a[j] - self.fine_x8[j] * e) / 12.0;
        let mut out = Vec::with_capacity(self.k_start + 1);
        let (mut w0, mut w1) = (self.fine_start[0], self.fine_start[1]);
        let (mut f0, mut f1) = (f(0), f(1));
        for j in 2..nf {
            let f2 = f(j);
            let w2 = ((12.0 - 10.0 * f1) * w1 - f0 * w0) / f2;
            w0 = w1;
            w1 = w2;
            f0 = f1;
            f1 = f2;
            if w1.abs() > 1e100 {
                w0 *= 1e-100;
                w1 *= 1e-100;
                for v in &mut out {
                    *v *= 1e-100;
                }
            }
            if (j + 1) % START_REFINE == 0 {
                out.push(w1);
            }
        }
        out
    }

    fn g(&self, i: usize, e: f64) -> f64 {
        self.a[i] - self.x8[i] * e
    }

    /// Sign changes of the outward solution over the whole grid, with w(x_max) = 0 imposed.
    /// Past the outer turning point a growing solution cannot turn back, so
    /// integration stops there; this also keeps Numerov away from the deeply
    /// forbidden region where it would break down for very negative E.
    fn outward_nodes(&self, e: f64, h2: f64) -> usize {
        let n = self.a.len();
        let last_allowed = (0..n).rev().find(|&i| self.g(i, e) < 0.0).unwrap_or(0);
        let sv = self.start_values(e);
        let k = self.k_start;
        let mut nodes = count_nodes_raw(&sv);
        let (mut w0, mut w1) = (sv[k - 1], sv[k]);
        let mut f0 = 1.0 - h2 * self.g(k - 1, e) / 12.0;
        let mut f1 = 1.0 - h2 * self.g(k, e) / 12.0;
        for i in k + 1..n {
            let f2 = 1.0 - h2 * self.g(i, e) / 12.0;
            let mut w2 = ((12.0 - 10.0 * f1) * w1 - f0 * w0) / f2;
            if w2 == 0.0 {
                w2 = -w1 * 1e-300;
            }
            if w2.signum() != w1.signum() {
                nodes += 1;
            } else if i > last_allowed && w2.abs() > w1.abs() {
                break;
            }
            if w2.abs() > 1e100 {
                w1 *= 1e-100;
                w2 *= 1e-100;
            }
            w0 = w1;
            w1 = w2;
            f0 = f1;
            f1 = f2;
        }
        nodes
    }

    fn eigenvector(&self, e: f64, h2: f64) -> Vec<f64> {
        let n = self.a.len();
        let f: Vec<f64> = (0..n).map(|i| 1.0 - h2 * self.g(i, e) / 12.0).collect();
        // outermost classically allowed point
        let mut m = (0..n).rev().find(|&i| self.g(i, e) < 0.0).unwrap_or(n / 2);
        m = m.clamp(2, n - 3);
        m = m.max(self.k_start + 2);
        let mut out = vec![0.0; n];
        let sv = self.start_values(e);
        out[..sv.len()].copy_from_slice(&sv);
        for i in sv.len()..=m + 1 {
            out[i] = ((12.0 - 10.0 * f[i - 1]) * out[i - 1] - f[i - 2] * out[i - 2]) / f[i];
            if out[i].abs() > 1e100 {
                for v in out.iter_mut().take(i + 1) {
                    *v *= 1e-100;
                }
            }
        }
        let mut inw = vec![0.0; n];
        inw[n - 1] = 0.0;
        inw[n - 2] = 1e-200;
        for i in (m - 1..n - 2).rev() {
            inw[i] = ((12.0 - 10.0 * f[i + 1]) * inw[i + 1] - f[i + 2] * inw[i + 2]) / f[i];
            if inw[i].abs() > 1e100 {
                for v in inw.iter_mut().skip(i) {
                    *v *= 1e-100;
                }
            }
        }
        let scale = out[m] / inw[m];
        for i in m + 1..n {
            out[i] = inw[i] * scale;
        }
        out
    }
}

fn count_nodes_raw(w: &[f64]) -> usize {
    w.windows(2).filter(|p| p[0] != 0.0 && p[1] != 0.0 && p[0].signum() != p[1].signum()).count()
}

fn count_nodes(w: &[f64]) -> usize {
    let peak = w.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
    let tiny = peak * 1e-12;
    let mut last = 0.0;
    let mut nodes = 0;
    for &v in w {
        if v.abs() <= tiny {
            continue;
        }
        if last != 0.0 && v.signum() != last {
            nodes += 1;
        }
        last = v.signum();
    }
    nodes
}

/// Bound state (n, l, j) of the model potential on `grid`.
pub fn solve_bound_state(
    sp: &SpeciesParams,
    n: u32,
    l: u32,
    j2: u32,
    grid: &Arc<RadialGrid>,
) -> Result<RadialState, RadialError> {
    if l >= n || (j2 != 2 * l + 1 && (l == 0 || j2 != 2 * l - 1)) {
        return Err(RadialError::QuantumNumbers { n, l, j2 });
    }
    let nf = n as f64;
    if grid.r_max() < 2.0 * nf * (nf + 15.0) * (1.0 - 1e-12) {
        return Err(RadialError::GridTooSmall { n, r_max: grid.r_max() });
    }
    let ch = Channel::new(sp, grid, l, j2)?;
    let h2 = grid.h * grid.h;
    let want = (n - l - 1) as usize;

    // quantum-defect ansatz, widened until the node counts straddle `want`
    let e_of = |nstar: f64| -2.0 / (nstar * nstar);
    let e_floor = (0..grid.len()).map(|i| ch.a[i] / ch.x8[i]).fold(f64::INFINITY, f64::min);
    let mut lo_star = nf - 0.5;
    let mut hi_star = nf + 0.5;
    let mut e_lo;
    let mut e_hi;
    loop {
        e_lo = if lo_star > 0.05 { e_of(lo_star).max(e_floor) } else { e_floor };
        e_hi = e_of(hi_star);
        let n_lo = ch.outward_nodes(e_lo, h2);
        let n_hi = ch.outward_nodes(e_hi, h2);
        if n_lo <= want && n_hi > want {
            break;
        }
        if n_lo > want {
            if e_lo <= e_floor {
                return Err(RadialError::NoBracket { n, l, j2, e_lo, e_hi, nodes_lo: n_lo, nodes_hi: n_hi, want });
            }
            lo_star -= 1.0;
        }
        if n_hi <= want {
            hi_star += 1.0;
            if hi_star > 4.0 * nf + 20.0 {
                return Err(RadialError::NoBracket { n, l, j2, e_lo, e_hi, nodes_lo: n_lo, nodes_hi: n_hi, want });
            }
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (e_lo + e_hi);
        if mid <= e_lo || mid >= e_hi {
            break;
        }
        if ch.outward_nodes(mid, h2) > want {
            e_hi = mid;
        } else {
            e_lo = mid;
        }
    }
    let energy = 0.5 * (e_lo + e_hi);
    let mut w = ch.eigenvector(energy, h2);
    let norm = integrate(grid, &w, &w, 0).sqrt();
    let sign = w.iter().find(|v| v.abs() > 0.0).map_or(1.0, |v| v.signum());
    for v in &mut w {
        *v *= sign / norm;
    }
    let nodes = count_nodes(&w);
    Ok(RadialState { n, l, j2, energy, grid: grid.clone(), w, nodes })
}

fn catmull_rom(grid: &RadialGrid, w: &[f64], x: f64) -> f64 {
    let t = x / grid.h - 1.0;
    if t < 0.0 {
        // below the first node: regular solution goes to zero at the origin
        return w[0] * (x / grid.x[0]).powi(2);
    }
    let i = t.floor() as isize;
    let s = t - i as f64;
    let get = |k: isize| -> f64 {
        if k < 0 || k as usize >= w.len() {
            0.0
        } else {
            w[k as usize]
        }
    };
    let (p0, p1, p2, p3) = (get(i - 1), get(i), get(i + 1), get(i + 2));
    0.5 * ((2.0 * p1)
        + (-p0 + p2) * s
        + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * s * s
        + (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * s * s * s)
}

fn resample(from: &RadialState, onto: &RadialGrid) -> Result<Vec<f64>, RadialError> {
    let tail: f64 = {
        // probability beyond the target grid must be negligible
        let xm = onto.x[onto.len() - 1];
        let mut s = 0.0;
        for (i, &x) in from.grid.x.iter().enumerate() {
            if x > xm {
                s += 2.0 * from.grid.h * x * x * from.w[i] * from.w[i];
            }
        }
        s
    };
    if tail > 1e-10 {
        return Err(RadialError::Grid(format!("state n={} l={} extends beyond target grid (tail weight {tail:e})", from.n, from.l)));
    }
    if from.grid.h > 4.0 * onto.h {
        return Err(RadialError::Grid(format!("source step {} too coarse for target step {}", from.grid.h, onto.h)));
    }
    Ok(onto.x.iter().map(|&x| catmull_rom(&from.grid, &from.w, x)).collect())
}

/// ⟨a| r^k |b⟩ = ∫ u_a u_b r^k dr in Bohr^k. States on different grids are
/// interpolated onto the finer of the two.
pub fn radial_integral(a: &RadialState, b: &RadialState, k: i32) -> Result<f64, RadialError> {
    if a.grid.same_as(&b.grid) {
        return Ok(integrate(&a.grid, &a.w, &b.w, k));
    }
    let a_finer = (a.grid.h, -a.grid.r_max()) < (b.grid.h, -b.grid.r_max());
    let (fine, coarse) = if a_finer { (a, b) } else { (b, a) };
    let wc = resample(coarse, &fine.grid)?;
    Ok(integrate(&fine.grid, &fine.w, &wc, k))
}

/// Solved states keyed by (n, l, 2j) on one shared grid.
pub struct RadialCache {
    pub species: SpeciesParams,
    pub grid: Arc<RadialGrid>,
    states: RwLock<HashMap<(u32, u32, u32), Arc<RadialState>>>,
}

pub const CACHE_FORMAT_VERSION: u32 = 1;

impl RadialCache {
    pub fn new(species: SpeciesParams, policy: GridPolicy) -> Self {
        let grid = Arc::new(policy.build(&species));
        Self { species, grid, states: RwLock::new(HashMap::new()) }
    }

    pub fn get(&self, n: u32, l: u32, j2: u32) -> Result<Arc<RadialState>, RadialError> {
        if let Some(s) = self.states.read().unwrap().get(&(n, l, j2)) {
            return Ok(s.clone());
        }
        let s = Arc::new(solve_bound_state(&self.species, n, l, j2, &self.grid)?);
        self.states.write().unwrap().insert((n, l, j2), s.clone());
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.states.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Text layout: a version line, the species fingerprint, the grid
    /// (`grid h len`), then per state `state n l 2j energy` followed by one w value per line.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), RadialError> {
        let io = |e: std::io::Error| RadialError::Cache(e.to_string());
        let mut f = std::io::BufWriter::new(std::fs::File::create(path).map_err(io)?);
        writeln!(f, "rydpen-radial-cache {CACHE_FORMAT_VERSION}").map_err(io)?;
        writeln!(f, "species {}", self.species.fingerprint()).map_err(io)?;
        writeln!(f, "grid {:e} {}", self.grid.h, self.grid.len()).map_err(io)?;
        let states = self.states.read().unwrap();
        let mut keys: Vec<_> = states.keys().copied().collect();
        keys.sort();
        for k in keys {
            let s = &states[&k];
            writeln!(f, "state {} {} {} {:e}", s.n, s.l, s.j2, s.energy).map_err(io)?;
            for v in &s.w {
                writeln!(f, "{v:e}").map_err(io)?;
            }
        }
        Ok(())
    }

    pub fn load(species: SpeciesParams, path: impl AsRef<Path>) -> Result<Self, RadialError> {
        let bad = |m: &str| RadialError::Cache(m.to_string());
        let f = std::fs::File::open(path).map_err(|e| RadialError::Cache(e.to_string()))?;
        let mut lines = std::io::BufReader::new(f).lines().map_while(Result::ok);
        let ver = lines.next().ok_or_else(|| bad("empty cache"))?;
        if ver != format!("rydpen-radial-cache {CACHE_FORMAT_VERSION}") {
            return Err(bad("unsupported cache version"));
        }
        let sp = lines.next().ok_or_else(|| bad("missing species line"))?;
        if sp != format!("species {}", species.fingerprint()) {
            return Err(bad("cache belongs to a different species table"));
        }
        let g = lines.next().ok_or_else(|| bad("missing grid line"))?;
        let gf: Vec<&str> = g.split_whitespace().collect();
        if gf.len() != 3 || gf[0] != "grid" {
            return Err(bad("malformed grid line"));
        }
        let h: f64 = gf[1].parse().map_err(|_| bad("grid step"))?;
        let len: usize = gf[2].parse().map_err(|_| bad("grid length"))?;
        let grid = Arc::new(RadialGrid::new(h, len));
        let mut map = HashMap::new();
        while let Some(head) = lines.next() {
            let p: Vec<&str> = head.split_whitespace().collect();
            if p.len() != 5 || p[0] != "state" {
                return Err(bad("malformed state header"));
            }
            let num = |s: &str| s.parse::<u32>().map_err(|_| bad("state quantum number"));
            let (n, l, j2) = (num(p[1])?, num(p[2])?, num(p[3])?);
            let energy: f64 = p[4].parse().map_err(|_| bad("state energy"))?;
            let mut w = Vec::with_capacity(len);
            for _ in 0..len {
                let v = lines.next().ok_or_else(|| bad("truncated state"))?;
                w.push(v.trim().parse::<f64>().map_err(|_| bad("wavefunction value"))?);
            }
            let nodes = count_nodes(&w);
            map.insert((n, l, j2), Arc::new(RadialState { n, l, j2, energy, grid: grid.clone(), w, nodes }));
        }
        Ok(Self { species, grid, states: RwLock::new(map) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::species::species_by_name;

    #[test]
    fn coulomb_potential_values() {
        let h = species_by_name("hydrogenic").unwrap();
        assert!((model_potential(&h, 0, 1, 1.0).unwrap() + 2.0).abs() < 1e-15);
        assert!(model_potential(&h, 0, 1, 0.0).is_err());
        let ca = species_by_name("ca40").unwrap();
        let r = 1e4;
        assert!((model_potential(&ca, 2, 5, r).unwrap() * r + 2.0).abs() < 1e-6);
    }

    #[test]
    fn ls_values() {
        assert_eq!(l_dot_s(1, 1), -1.0);
        assert_eq!(l_dot_s(1, 3), 0.5);
        assert_eq!(l_dot_s(0, 1), 0.0);
    }

    #[test]
    fn hydrogenic_low_n() {
        let h = species_by_name("hydrogenic").unwrap();
        let grid = Arc::new(GridPolicy::for_n(10).build(&h));
        for n in 1..=6 {
            for l in 0..n {
                let s = solve_bound_state(&h, n, l, 2 * l + 1, &grid).unwrap();
                let exact = -2.0 / (n * n) as f64;
                assert!((s.energy / exact - 1.0).abs() < 1e-8, "n={n} l={l} E={}", s.energy);
                assert_eq!(s.nodes as u32, n - l - 1);
            }
        }
    }
}
