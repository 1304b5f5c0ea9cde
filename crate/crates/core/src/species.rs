//! Species parameter files.
//!
//! Line-oriented text; `#` starts a comment. The first data line is the
//! header `label Z_nuc mass_amu alpha_cp`, every following line is one
//! model-potential row `l alpha1 alpha2 alpha3 r_c` (atomic units).
//! A line `@spin_orbit off` drops the spin-orbit term for the species.

use crate::constants::AMU;
use std::path::Path;

pub const CA40_FILE: &str = include_str!("../data/ca40.species");
pub const HYDROGENIC_FILE: &str = include_str!("../data/hydrogenic.species");

#[derive(Debug, thiserror::Error)]
pub enum SpeciesError {
    #[error("cannot read species file {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("species file has no header line")]
    MissingHeader,
    #[error("line {line}: expected {expected} fields, found {found}")]
    FieldCount { line: usize, expected: usize, found: usize },
    #[error("line {line}: field `{field}` is not a number")]
    NonNumeric { line: usize, field: String },
    #[error("line {line}: {reason}")]
    Invalid { line: usize, reason: String },
    #[error("species `{species}` has no model-potential row for l = {l}")]
    MissingRow { species: String, l: usize },
    #[error("unknown species `{0}` (bundled: ca40, hydrogenic)")]
    Unknown(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LRow {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub r_c: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesParams {
    pub label: String,
    pub z_nuc: u32,
    pub mass_amu: f64,
    pub alpha_cp: f64,
    pub rows: Vec<LRow>,
    pub spin_orbit: bool,
}

impl SpeciesParams {
    pub fn mass_kg(&self) -> f64 {
        self.mass_amu * AMU
    }

    pub fn l_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, l: usize) -> Result<&LRow, SpeciesError> {
        self.rows.get(l).ok_or_else(|| SpeciesError::MissingRow { species: self.label.clone(), l })
    }

    /// Rows are contiguous, so the first missing one is `rows.len()`.
    pub fn require_lmax(&self, l_max: usize) -> Result<(), SpeciesError> {
        if l_max < self.rows.len() {
            Ok(())
        } else {
            Err(SpeciesError::MissingRow { species: self.label.clone(), l: self.rows.len() })
        }
    }

    /// Stable fingerprint of the numeric content, used for cache keys.
    pub fn fingerprint(&self) -> String {
        let mut s = format!("{}|{}|{:e}|{:e}|{}", self.label, self.z_nuc, self.mass_amu, self.alpha_cp, self.spin_orbit);
        for r in &self.rows {
            s.push_str(&format!("|{:e},{:e},{:e},{:e}", r.alpha1, r.alpha2, r.alpha3, r.r_c));
        }
        s
    }
}

fn num(line: usize, field: &str) -> Result<f64, SpeciesError> {
    field
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| SpeciesError::NonNumeric { line, field: field.to_string() })
}

pub fn parse_species(text: &str) -> Result<SpeciesParams, SpeciesError> {
    let mut header: Option<(String, u32, f64, f64)> = None;
    let mut rows: Vec<Option<LRow>> = Vec::new();
    let mut spin_orbit = true;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let f: Vec<&str> = content.split_whitespace().collect();
        if let Some(key) = f[0].strip_prefix('@') {
            match (key, f.get(1).copied()) {
                ("spin_orbit", Some("off")) if f.len() == 2 => spin_orbit = false,
                ("spin_orbit", Some("on")) if f.len() == 2 => spin_orbit = true,
                _ => return Err(SpeciesError::Invalid { line, reason: format!("unknown directive `{content}`") }),
            }
            continue;
        }
        if header.is_none() {
            if f.len() != 4 {
                return Err(SpeciesError::FieldCount { line, expected: 4, found: f.len() });
            }
            let z = num(line, f[1])?;
            if z.fract() != 0.0 || z < 2.0 {
                return Err(SpeciesError::Invalid { line, reason: format!("Z_nuc must be an integer >= 2, got {}", f[1]) });
            }
            let mass = num(line, f[2])?;
            let alpha_cp = num(line, f[3])?;
            if mass <= 0.0 || alpha_cp < 0.0 {
                return Err(SpeciesError::Invalid { line, reason: "mass must be positive and alpha_cp non-negative".into() });
            }
            header = Some((f[0].to_string(), z as u32, mass, alpha_cp));
            continue;
        }
        if f.len() != 5 {
            return Err(SpeciesError::FieldCount { line, expected: 5, found: f.len() });
        }
        let l = f[0]
            .parse::<usize>()
            .map_err(|_| SpeciesError::NonNumeric { line, field: f[0].to_string() })?;
        let vals = [num(line, f[1])?, num(line, f[2])?, num(line, f[3])?, num(line, f[4])?];
        if vals[3] <= 0.0 {
            return Err(SpeciesError::Invalid { line, reason: "r_c must be positive".into() });
        }
        if vals[0] < 0.0 || vals[2] < 0.0 {
            return Err(SpeciesError::Invalid { line, reason: "screening exponents must be non-negative".into() });
        }
        if rows.len() <= l {
            rows.resize(l + 1, None);
        }
        if rows[l].is_some() {
            return Err(SpeciesError::Invalid { line, reason: format!("duplicate row for l = {l}") });
        }
        rows[l] = Some(LRow { alpha1: vals[0], alpha2: vals[1], alpha3: vals[2], r_c: vals[3] });
    }
    let (label, z_nuc, mass_amu, alpha_cp) = header.ok_or(SpeciesError::MissingHeader)?;
    let mut out = Vec::with_capacity(rows.len());
    for (l, r) in rows.into_iter().enumerate() {
        out.push(r.ok_or_else(|| SpeciesError::MissingRow { species: label.clone(), l })?);
    }
    if out.is_empty() {
        return Err(SpeciesError::MissingRow { species: label, l: 0 });
    }
    Ok(SpeciesParams { label, z_nuc, mass_amu, alpha_cp, rows: out, spin_orbit })
}

pub fn load_species(path: impl AsRef<Path>) -> Result<SpeciesParams, SpeciesError> {
    let p = path.as_ref();
    let text = std::fs::read_to_string(p)
        .map_err(|source| SpeciesError::Io { path: p.display().to_string(), source })?;
    parse_species(&text)
}

/// Bundled species by name, or a file path if the argument names an existing file.
pub fn species_by_name(name: &str) -> Result<SpeciesParams, SpeciesError> {
    match name.to_ascii_lowercase().as_str() {
        "ca40" | "ca+" | "40ca+" => parse_species(CA40_FILE),
        "hydrogenic" | "h2" | "coulomb" => parse_species(HYDROGENIC_FILE),
        _ if Path::new(name).is_file() || name.contains(['/', '.']) => load_species(name),
        _ => Err(SpeciesError::Unknown(name.to_string())),
    }
}
