//! `rydpen` command-line front end. All subcommands write `#`-prefixed header
//! lines (version, schema, config hash) followed by comma-separated rows.

use crate::angular::UncoupledLabel;
use crate::constants::{AMU, HBAR};
use crate::crystal::{
    align_triangle, normal_modes, planarity_check, solve_equilibrium, spin_phonon_couplings, triangle_side, CrystalConfig, CrystalError,
    DimensionPolicy, SeedPolicy,
};
use crate::dressing::{pair_interaction, quadrupole_gradient_shift, v0_of_b, write_v0_rows, DressingError, V0_HEADER};
use crate::internal::{
    build_basis_lmax, ionization_gradient, ionization_n, landau_threshold_field, landau_threshold_n,
    quadrupole_dominance_gradient, sweep_and_track, InternalError, InternalModel, TrackOptions,
};
use crate::radial::{GridPolicy, RadialCache, RadialError};
use crate::species::{species_by_name, SpeciesError, SpeciesParams};
use crate::spin::{facilitation_v0, ground_state_report, write_omega_sweep, SpinModelParams, SPIN_HEADER};
use crate::trap::{
    confinement_frequencies, coupling_corrections, write_corrections_row, CouplingError, CouplingMode, TrapConfig,
    CORRECTIONS_HEADER,
};
use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};
use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;

pub const SCHEMA_VERSION: u32 = 1;

pub mod exit {
    pub const OK: i32 = 0;
    pub const CONFIG: i32 = 1;
    pub const PHYSICAL: i32 = 2;
    pub const NUMERICAL: i32 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Physical(String),
    #[error("{0}")]
    Numerical(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => exit::CONFIG,
            CliError::Physical(_) => exit::PHYSICAL,
            CliError::Numerical(_) => exit::NUMERICAL,
        }
    }
}

impl From<SpeciesError> for CliError {
    fn from(e: SpeciesError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<RadialError> for CliError {
    fn from(e: RadialError) -> Self {
        match e {
            RadialError::Species(s) => s.into(),
            RadialError::QuantumNumbers { .. } | RadialError::Domain(_) => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<InternalError> for CliError {
    fn from(e: InternalError) -> Self {
        match e {
            InternalError::Radial(r) => r.into(),
            InternalError::Species(s) => s.into(),
            InternalError::Tracking { .. } | InternalError::Grid => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<CrystalError> for CliError {
    fn from(e: CrystalError) -> Self {
        match e {
            CrystalError::NotPlanar { .. } | CrystalError::Unstable(_) | CrystalError::Saddle(_) => {
                CliError::Physical(e.to_string())
            }
            CrystalError::NoConvergence { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<DressingError> for CliError {
    fn from(e: DressingError) -> Self {
        match e {
            DressingError::Internal(i) => i.into(),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<CouplingError> for CliError {
    fn from(e: CouplingError) -> Self {
        match e {
            CouplingError::Internal(i) => i.into(),
            _ => CliError::Config(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "rydpen", version, about = "Rydberg ions in Penning traps")]
struct Cli {
    /// `key = value` file; keys are long flag names, command-line flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (default: standard output).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Single-ion motional frequencies.
    Trap(TrapArgs),
    /// Tracked internal spectrum over a B sweep.
    Spectrum(SpectrumArgs),
    /// State-dependent corrections to the trap frequencies and mass.
    Corrections(CorrectionsArgs),
    /// Dipole–dipole strength V₀(B) in a planar three-ion crystal.
    V0(V0Args),
    /// Crystal equilibrium, normal modes and spin–phonon couplings.
    Modes(ModesArgs),
    /// Three-site spin model spectra.
    Spin(SpinArgs),
    /// Field limits: Landau threshold, ionization gradient, quadrupole dominance.
    Limits(LimitsArgs),
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct SpeciesArg {
    /// Bundled name (ca40, hydrogenic) or path to a species file.
    #[arg(long, default_value = "ca40")]
    species: String,
    /// Override the ion mass (amu).
    #[arg(long)]
    mass_amu: Option<f64>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct TrapArgs {
    #[command(flatten)]
    sp: SpeciesArg,
    #[arg(long = "B", value_parser = parse_field)]
    b: f64,
    #[arg(long, value_parser = parse_gradient)]
    beta: f64,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct SpectrumArgs {
    #[command(flatten)]
    sp: SpeciesArg,
    #[arg(long)]
    n: u32,
    /// start:stop:count in tesla.
    #[arg(long = "B", value_parser = parse_field_grid)]
    b: Grid,
    #[arg(long, default_value = "0", value_parser = parse_gradient)]
    beta: f64,
    #[arg(long, default_value_t = 5)]
    lmax: u32,
    /// Export only this m_j block (e.g. 0.5, -1.5).
    #[arg(long, allow_negative_numbers = true)]
    block_mj: Option<f64>,
    /// Directory for solved radial states.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct CorrectionsArgs {
    #[command(flatten)]
    sp: SpeciesArg,
    /// Comma-separated principal quantum numbers.
    #[arg(long, value_delimiter = ',', default_values_t = [30u32, 40, 50])]
    n: Vec<u32>,
    #[arg(long = "B", value_parser = parse_field_grid)]
    b: Grid,
    /// Fixed ω_z/ω_ρ; β follows B.
    #[arg(long, default_value_t = 2.0)]
    ratio: f64,
    /// nearest | full | both
    #[arg(long, default_value = "both")]
    mode: String,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct V0Args {
    #[command(flatten)]
    sp: SpeciesArg,
    #[arg(long, value_delimiter = ',', default_values_t = [45u32])]
    n: Vec<u32>,
    #[arg(long = "B", value_parser = parse_field_grid)]
    b: Grid,
    #[arg(long, default_value_t = 2.0)]
    ratio: f64,
    /// Spin projection of the S/P pair (+1 or -1, in units of 1/2).
    #[arg(long, default_value_t = -1, allow_negative_numbers = true)]
    ms2: i32,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct ModesArgs {
    #[command(flatten)]
    sp: SpeciesArg,
    #[arg(long = "N", default_value_t = 3)]
    n_ions: usize,
    /// Radial frequency with unit, e.g. 2pi*220kHz.
    #[arg(long, value_parser = parse_angular)]
    wr: f64,
    /// Axial frequency; defaults to `ratio`·ω_ρ.
    #[arg(long, value_parser = parse_angular)]
    wz: Option<f64>,
    #[arg(long, default_value_t = 2.0)]
    ratio: f64,
    /// Relative x/y splitting of the radial frequency.
    #[arg(long, default_value_t = 0.0)]
    anisotropy: f64,
    /// planar | 3d
    #[arg(long, default_value = "planar")]
    policy: String,
    /// Dipole–dipole energy for the W table, as a frequency (e.g. 1MHz).
    #[arg(long, value_parser = parse_angular)]
    v0: Option<f64>,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct SpinArgs {
    /// start:stop:count for Ω/Δ.
    #[arg(long = "Omega-sweep", value_parser = parse_grid)]
    omega_sweep: Option<Grid>,
    /// Impose the facilitation condition on V₀.
    #[arg(long)]
    facilitation: bool,
    #[arg(long = "Delta", default_value_t = 1.0, allow_negative_numbers = true)]
    delta: f64,
    #[arg(long = "Omega", default_value_t = 0.05, allow_negative_numbers = true)]
    omega: f64,
    #[arg(long = "V0", allow_negative_numbers = true)]
    v0: Option<f64>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct LimitsArgs {
    #[arg(long)]
    n: Option<u32>,
    #[arg(long = "B", value_parser = parse_field)]
    b: Option<f64>,
    #[arg(long, value_parser = parse_gradient)]
    beta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        (0..self.count)
            .map(|i| self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64)
            .collect()
    }
}

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    grid_with(s, |v| v.trim().parse::<f64>().ok())
}

/// Like [`parse_grid`] but each endpoint may carry a `T` suffix.
pub fn parse_field_grid(s: &str) -> Result<Grid, String> {
    grid_with(s, |v| parse_field(v).ok())
}

fn grid_with(s: &str, value: impl Fn(&str) -> Option<f64>) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || format!("grid `{s}` is not start:stop:count");
    match parts.as_slice() {
        [a] => {
            let v = value(a).ok_or_else(bad)?;
            Ok(Grid { start: v, stop: v, count: 1 })
        }
        [a, b, c] => {
            let start = value(a).ok_or_else(bad)?;
            let stop = value(b).ok_or_else(bad)?;
            let count = c.trim().parse::<usize>().map_err(|_| bad())?;
            if count == 0 || (count > 1 && stop <= start) {
                return Err(format!("grid `{s}` must be non-empty and increasing"));
            }
            Ok(Grid { start, stop, count })
        }
        _ => Err(bad()),
    }
}

fn split_suffix<'a>(s: &'a str, suffixes: &[&'a str]) -> (&'a str, Option<&'a str>) {
    let t = s.trim();
    for suf in suffixes {
        if let Some(v) = t.strip_suffix(suf) {
            return (v.trim(), Some(suf));
        }
    }
    (t, None)
}

fn num(s: &str) -> Result<f64, String> {
    s.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| format!("`{s}` is not a number"))
}

pub fn parse_field(s: &str) -> Result<f64, String> {
    let (v, _) = split_suffix(s, &["T"]);
    num(v)
}

pub fn parse_gradient(s: &str) -> Result<f64, String> {
    let (v, _) = split_suffix(s, &["V/m^2", "V/m2"]);
    num(v)
}

/// Angular frequency in rad/s from `2pi*220kHz`, `220kHz` (cyclic, ×2π) or `1.4e6rad/s`.
pub fn parse_angular(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let (body, explicit_2pi) = match t.strip_prefix("2pi*").or_else(|| t.strip_prefix("2π*")) {
        Some(rest) => (rest, true),
        None => (t, false),
    };
    let (v, suf) = split_suffix(body, &["rad/s", "GHz", "MHz", "kHz", "Hz"]);
    let x = num(v)?;
    let scale = match suf {
        Some("rad/s") if !explicit_2pi => return Ok(x),
        Some("GHz") => 1e9,
        Some("MHz") => 1e6,
        Some("kHz") => 1e3,
        Some("Hz") => 1.0,
        _ => return Err(format!("frequency `{s}` needs a unit: Hz, kHz, MHz, GHz (optionally 2pi*) or rad/s")),
    };
    Ok(2.0 * PI * x * scale)
}

/// `key = value` lines → `--key value` tokens; `true`/`false` toggle flags.
fn config_tokens(path: &PathBuf) -> Result<Vec<String>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let mut out = vec![];
    for (k, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, val) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("{}:{}: expected key = value", path.display(), k + 1)))?;
        let (key, val) = (key.trim(), val.trim());
        match val {
            "true" => out.push(format!("--{key}")),
            "false" => {}
            _ => out.push(format!("--{key}={val}")),
        }
    }
    Ok(out)
}

fn expand_config(args: Vec<String>) -> Result<Vec<String>, CliError> {
    let mut cfg = None;
    let mut rest = vec![];
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            cfg = Some(PathBuf::from(it.next().ok_or_else(|| CliError::Config("--config needs a path".into()))?));
        } else if let Some(p) = a.strip_prefix("--config=") {
            cfg = Some(PathBuf::from(p));
        } else {
            rest.push(a);
        }
    }
    let Some(path) = cfg else { return Ok(rest) };
    let tokens = config_tokens(&path)?;
    // insert right after the subcommand so later command-line flags override
    let sub = rest.iter().skip(1).position(|a| !a.starts_with('-')).map(|p| p + 2).unwrap_or(rest.len());
    let mut merged = rest[..sub].to_vec();
    merged.extend(tokens);
    merged.extend_from_slice(&rest[sub..]);
    Ok(merged)
}

fn header(w: &mut dyn Write, command: &str, argv: &[String], schema: &str) -> std::io::Result<()> {
    let canonical = argv.iter().skip(1).filter(|a| !a.starts_with("--out")).cloned().collect::<Vec<_>>().join(" ");
    let hash = Sha256::digest(canonical.as_bytes());
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    writeln!(w, "# rydpen {} schema {SCHEMA_VERSION} command {command}", env!("CARGO_PKG_VERSION"))?;
    writeln!(w, "# config {canonical}")?;
    writeln!(w, "# config-sha256 {hex}")?;
    writeln!(w, "{schema}")
}

fn species(a: &SpeciesArg) -> Result<SpeciesParams, CliError> {
    let mut sp = species_by_name(&a.species)?;
    if let Some(m) = a.mass_amu {
        if !(m > 0.0) {
            return Err(CliError::Config(format!("mass {m} amu must be positive")));
        }
        sp.mass_amu = m;
    }
    Ok(sp)
}

fn cache_for(sp: &SpeciesParams, n: u32, dir: Option<&PathBuf>, log: &mut dyn Write) -> Result<RadialCache, CliError> {
    let policy = GridPolicy::for_n(n);
    let Some(dir) = dir else { return Ok(RadialCache::new(sp.clone(), policy)) };
    let key: String = Sha256::digest(sp.fingerprint().as_bytes()).iter().take(8).map(|b| format!("{b:02x}")).collect();
    let path = dir.join(format!("{key}-n{n}-ppw{}.radial", policy.points_per_wavelength));
    if let Ok(c) = RadialCache::load(sp.clone(), &path) {
        if c.grid.same_as(&policy.build(sp)) {
            return Ok(c);
        }
        writeln!(log, "warning: ignoring cache {} built on another grid", path.display())?;
    }
    std::fs::create_dir_all(dir)?;
    Ok(RadialCache::new(sp.clone(), policy))
}

fn persist(cache: &RadialCache, dir: Option<&PathBuf>, n: u32, log: &mut dyn Write) -> Result<(), CliError> {
    if let Some(dir) = dir {
        let key: String =
            Sha256::digest(cache.species.fingerprint().as_bytes()).iter().take(8).map(|b| format!("{b:02x}")).collect();
        let ppw = GridPolicy::for_n(n).points_per_wavelength;
        if let Err(e) = cache.save(dir.join(format!("{key}-n{n}-ppw{ppw}.radial"))) {
            writeln!(log, "warning: cache not written: {e}")?;
        }
    }
    Ok(())
}

fn warn_landau(n: u32, b_max: f64, log: &mut dyn Write) -> std::io::Result<()> {
    if b_max > 0.0 && n >= landau_threshold_n(b_max) {
        writeln!(
            log,
            "warning: n = {n} is past the diamagnetic threshold at B = {b_max} T (onset {:.3} T); the truncated basis is qualitative there",
            landau_threshold_field(n)
        )?;
    }
    Ok(())
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn run(argv: Vec<String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let argv = match expand_config(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.code();
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::CONFIG } else { exit::OK };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    let mut buf: Vec<u8> = vec![];
    let res = dispatch(&cli, &argv, &mut buf, stderr);
    let written = match &cli.out {
        Some(p) if !buf.is_empty() => std::fs::write(p, &buf).map_err(CliError::from),
        _ => stdout.write_all(&buf).map_err(CliError::from),
    };
    match written.and(res) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.code()
        }
    }
}

fn dispatch(cli: &Cli, argv: &[String], w: &mut Vec<u8>, log: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.cmd {
        Command::Trap(a) => cmd_trap(a, argv, w),
        Command::Spectrum(a) => cmd_spectrum(a, argv, w, log),
        Command::Corrections(a) => cmd_corrections(a, argv, w, log),
        Command::V0(a) => cmd_v0(a, argv, w, log),
        Command::Modes(a) => cmd_modes(a, argv, w),
        Command::Spin(a) => cmd_spin(a, argv, w),
        Command::Limits(a) => cmd_limits(a, argv, w),
    }
}

fn cmd_trap(a: &TrapArgs, argv: &[String], w: &mut Vec<u8>) -> Result<i32, CliError> {
    let sp = species(&a.sp)?;
    if a.b < 0.0 || a.beta < 0.0 {
        return Err(CliError::Config("B and beta must be non-negative".into()));
    }
    let trap = TrapConfig { b_tesla: a.b, beta: a.beta, mass_kg: sp.mass_kg() };
    let f = confinement_frequencies(&trap);
    header(w, "trap", argv, "quantity,rad_per_s,kHz_over_2pi")?;
    for (name, v) in [("omega_z", f.wz), ("omega_c", f.wc), ("omega_rho", f.wr)] {
        writeln!(w, "{name},{v:.6e},{:.6}", v / (2.0 * PI) / 1e3)?;
    }
    writeln!(w, "stable,{},", f.stable)?;
    if !f.stable {
        return Err(CliError::Physical(format!(
            "unstable: ω_c = 2π×{:.1} kHz ≤ √2 ω_z = 2π×{:.1} kHz",
            f.wc / 2e3 / PI,
            2f64.sqrt() * f.wz / 2e3 / PI
        )));
    }
    Ok(exit::OK)
}

fn cmd_spectrum(a: &SpectrumArgs, argv: &[String], w: &mut Vec<u8>, log: &mut dyn Write) -> Result<i32, CliError> {
    let sp = species(&a.sp)?;
    let grid = a.b.values();
    if grid[0] < 0.0 {
        return Err(CliError::Config("B grid must be non-negative".into()));
    }
    warn_landau(a.n, *grid.last().unwrap(), log)?;
    let cache = cache_for(&sp, a.n, a.cache_dir.as_ref(), log)?;
    let model = InternalModel::new(build_basis_lmax(a.n, a.lmax, &sp)?, &cache)?;
    persist(&cache, a.cache_dir.as_ref(), a.n, log)?;
    let only = match a.block_mj {
        Some(m) => {
            let mj2 = (2.0 * m).round() as i32;
            if ((2.0 * m) - mj2 as f64).abs() > 1e-9 || model.block_of(mj2).is_none() {
                return Err(CliError::Config(format!("no m_j = {m} block in this basis")));
            }
            Some(mj2)
        }
        None => None,
    };
    let track = sweep_and_track(&model, &grid, a.beta, TrackOptions::default())?;
    header(w, "spectrum", argv, "B_tesla,block_mj,track_label,energy_GHz,overlap_prev")?;
    let mut rows = vec![];
    track.write_csv(&mut rows, only)?;
    // drop the column line the track writer emits; the header already has it
    let text = String::from_utf8_lossy(&rows);
    for line in text.lines().skip(1) {
        writeln!(w, "{line}")?;
    }
    Ok(exit::OK)
}

fn cmd_corrections(a: &CorrectionsArgs, argv: &[String], w: &mut Vec<u8>, log: &mut dyn Write) -> Result<i32, CliError> {
    let sp = species(&a.sp)?;
    let modes = match a.mode.as_str() {
        "nearest" => vec![CouplingMode::NearestState],
        "full" => vec![CouplingMode::FullSum],
        "both" => vec![CouplingMode::NearestState, CouplingMode::FullSum],
        m => return Err(CliError::Config(format!("unknown mode `{m}`"))),
    };
    let fields = a.b.values();
    header(w, "corrections", argv, CORRECTIONS_HEADER)?;
    for &n in &a.n {
        let cache = cache_for(&sp, n, a.cache_dir.as_ref(), log)?;
        let model = InternalModel::new(build_basis_lmax(n, 5, &sp)?, &cache)?;
        persist(&cache, a.cache_dir.as_ref(), n, log)?;
        let mut grid = fields.clone();
        if grid[0] > 0.0 {
            grid.insert(0, 0.0);
        }
        let track = sweep_and_track(&model, &grid, 0.0, TrackOptions::default())?;
        let s = UncoupledLabel::new(n, 0, 0, -1).expect("valid S label");
        for &b in &fields {
            if b <= 0.0 {
                continue;
            }
            let beta = crate::trap::beta_for_ratio(b, sp.mass_kg(), a.ratio);
            let trap = TrapConfig { b_tesla: b, beta, mass_kg: sp.mass_kg() };
            for &m in &modes {
                let c = coupling_corrections(&model, &track, &s, &trap, m)?;
                for (lab, de) in &c.excluded {
                    writeln!(log, "warning: n={n} B={b}: dropped near-degenerate partner {lab} (ΔE = {de:e} J)")?;
                }
                write_corrections_row(w, n, &trap, &c, m)?;
            }
        }
    }
    Ok(exit::OK)
}

fn cmd_v0(a: &V0Args, argv: &[String], w: &mut Vec<u8>, log: &mut dyn Write) -> Result<i32, CliError> {
    let sp = species(&a.sp)?;
    let fields = a.b.values();
    header(w, "v0", argv, V0_HEADER)?;
    let mut any_nonplanar = false;
    for &n in &a.n {
        warn_landau(n, *fields.last().unwrap(), log)?;
        let cache = cache_for(&sp, n, a.cache_dir.as_ref(), log)?;
        let model = InternalModel::new(build_basis_lmax(n, 5, &sp)?, &cache)?;
        persist(&cache, a.cache_dir.as_ref(), n, log)?;
        let mut grid = fields.clone();
        if grid[0] > 0.0 {
            grid.insert(0, 0.0);
        }
        let track = sweep_and_track(&model, &grid, 0.0, TrackOptions::default())?;
        let (s, p) = (
            UncoupledLabel::new(n, 0, 0, a.ms2).ok_or_else(|| CliError::Config("ms2 must be ±1".into()))?,
            UncoupledLabel::new(n, 1, 0, a.ms2).expect("valid P label"),
        );
        let pts: Vec<f64> = fields.iter().copied().filter(|&b| b > 0.0).collect();
        let rows = v0_of_b(&model, &track, &s, &p, &pts, a.ratio, sp.mass_kg())?;
        any_nonplanar |= rows.iter().any(|r| !r.planar_ok);
        write_v0_rows(w, &rows)?;
    }
    if any_nonplanar {
        writeln!(log, "warning: ω_z/ω_ρ = {} is below the planar threshold; rows flagged planar_ok=false", a.ratio)?;
        return Ok(exit::PHYSICAL);
    }
    Ok(exit::OK)
}

fn cmd_modes(a: &ModesArgs, argv: &[String], w: &mut Vec<u8>) -> Result<i32, CliError> {
    let sp = species(&a.sp)?;
    let policy = match a.policy.as_str() {
        "planar" => DimensionPolicy::Planar,
        "3d" => DimensionPolicy::Full3D,
        p => return Err(CliError::Config(format!("unknown policy `{p}`"))),
    };
    let wz = a.wz.unwrap_or(a.ratio * a.wr);
    let cfg = CrystalConfig {
        n_ions: a.n_ions,
        wx: a.wr * (1.0 + a.anisotropy),
        wy: a.wr * (1.0 - a.anisotropy),
        wz,
        mass_kg: sp.mass_kg(),
        policy,
    };
    let pc = planarity_check(&cfg);
    let mut eq = solve_equilibrium(&cfg, SeedPolicy { seed: a.seed, ..SeedPolicy::default() })?;
    if a.n_ions == 3 && policy == DimensionPolicy::Planar && a.anisotropy == 0.0 {
        eq = align_triangle(&eq, &cfg)?;
    }
    let modes = normal_modes(&eq, &cfg)?;
    header(w, "modes", argv, "alpha,freq_over_wr,class_label,zero_mode,length_nm")?;
    for (k, om) in modes.omega.iter().enumerate() {
        let zero = modes.zero_modes.contains(&k);
        let len = modes.lengths[k].map(|l| format!("{:.6}", l * 1e9)).unwrap_or_default();
        writeln!(w, "{k},{:.12},{},{zero},{len}", om / modes.w_ref, modes.classes[k])?;
    }
    writeln!(w, "# planar ratio {:.4} critical {:.4} planar {}", pc.ratio, pc.critical, pc.planar)?;
    writeln!(w, "# equilibrium (um)")?;
    for (i, p) in eq.positions.iter().enumerate() {
        writeln!(w, "# ion {} {:.6} {:.6} {:.6}", i + 1, p[0] * 1e6, p[1] * 1e6, p[2] * 1e6)?;
    }
    if a.n_ions == 3 && policy == DimensionPolicy::Planar {
        writeln!(w, "# R0 {:.6} um", triangle_side(cfg.mass_kg, cfg.w_ref()) * 1e6)?;
    }
    if let Some(v0w) = a.v0 {
        let v0 = v0w * HBAR;
        let sp = spin_phonon_couplings(v0, &eq, &modes);
        writeln!(w, "# spin-phonon W/V0")?;
        for (al, row) in sp.w.iter().enumerate() {
            if let Some(row) = row {
                let cells: Vec<String> =
                    sp.pairs.iter().zip(row).map(|(&(i, j), x)| format!("W{}{}={:.4e}", i + 1, j + 1, x / v0)).collect();
                writeln!(w, "# alpha {al} {}", cells.join(" "))?;
            }
        }
        writeln!(w, "# max |W|/V0 {:.4e}", sp.max_ratio(v0))?;
    }
    Ok(exit::OK)
}

fn cmd_spin(a: &SpinArgs, argv: &[String], w: &mut Vec<u8>) -> Result<i32, CliError> {
    if a.delta == 0.0 {
        return Err(CliError::Config("Delta must be non-zero".into()));
    }
    let v0 = match (a.facilitation, a.v0) {
        (true, _) => facilitation_v0(a.delta),
        (false, Some(v)) => v,
        (false, None) => return Err(CliError::Config("give --V0 or --facilitation".into())),
    };
    if let Some(g) = &a.omega_sweep {
        if !a.facilitation {
            return Err(CliError::Config("--Omega-sweep runs at facilitation; add --facilitation".into()));
        }
        header(w, "spin", argv, SPIN_HEADER)?;
        write_omega_sweep(w, a.delta, &g.values())?;
        return Ok(exit::OK);
    }
    let p = SpinModelParams::uniform(3, a.omega, a.delta, v0);
    let r = ground_state_report(&p).map_err(|e| CliError::Config(e.to_string()))?;
    header(w, "spin", argv, "quantity,value")?;
    writeln!(w, "ground_energy_over_Delta,{:.12}", r.energy / a.delta)?;
    writeln!(w, "degeneracy,{}", r.degeneracy)?;
    writeln!(w, "overlap_S_plus,{:.12}", r.overlap_s_plus.unwrap_or(f64::NAN))?;
    writeln!(w, "overlap_S_minus,{:.12}", r.overlap_s_minus.unwrap_or(f64::NAN))?;
    writeln!(w, "entropy_site1,{:.12}", r.entropy)?;
    Ok(exit::OK)
}

fn cmd_limits(a: &LimitsArgs, argv: &[String], w: &mut Vec<u8>) -> Result<i32, CliError> {
    if a.n.is_none() && a.b.is_none() && a.beta.is_none() {
        return Err(CliError::Config("give at least one of --n, --B, --beta".into()));
    }
    header(w, "limits", argv, "quantity,value,unit")?;
    if let Some(n) = a.n {
        if n == 0 {
            return Err(CliError::Config("n must be positive".into()));
        }
        writeln!(w, "ionization_gradient,{:.6e},V/m^2", ionization_gradient(n))?;
        writeln!(w, "landau_threshold_field,{:.6e},T", landau_threshold_field(n))?;
    }
    if let Some(b) = a.b {
        if !(b > 0.0) {
            return Err(CliError::Config("B must be positive".into()));
        }
        writeln!(w, "landau_threshold_n,{},1", landau_threshold_n(b))?;
        writeln!(w, "quadrupole_dominance_gradient,{:.6e},V/m^2", quadrupole_dominance_gradient(b))?;
    }
    if let Some(beta) = a.beta {
        if !(beta > 0.0) {
            return Err(CliError::Config("beta must be positive".into()));
        }
        writeln!(w, "ionization_n,{},1", ionization_n(beta))?;
        writeln!(w, "quadrupole_gradient_shift_R0_10um,{:.6e},V/m^2", quadrupole_gradient_shift(10e-6))?;
    }
    Ok(exit::OK)
}

/// ν = V/h for a dipole (Bohr) at separation (m), used by the browser demo as well.
pub fn coupling_hz(d_bohr: f64, r: f64) -> f64 {
    pair_interaction((0, 1), d_bohr * crate::constants::A0, r, PI / 2.0).map(|p| p.nu).unwrap_or(f64::NAN)
}

#[doc(hidden)]
pub fn amu_to_kg(m: f64) -> f64 {
    m * AMU
}
