//! Internal (electronic) Hamiltonian of a Rydberg ion in the Penning-trap
//! fields: truncated basis, assembly, m_j-block diagonalization, adiabatic
//! tracking along a magnetic-field sweep and closed-form field limits.
//!
//! In Hartree units with B and β converted to atomic units,
//! H = diag(E_nlj) + (B/2)(l_z + g_s s_z) + (B²/8) r² sin²θ + β r²(1 − 3cos²θ).

mod limits;
mod track;

pub use limits::*;
pub use track::*;

use crate::angular::{angular_element, clebsch_gordan, AngularOp, CoupledLabel, UncoupledLabel};
use crate::constants::{B_AU, GRAD_AU, G_S, HARTREE, H_PLANCK};
use crate::radial::{radial_integral, RadialCache, RadialError, RadialState};
use crate::species::SpeciesError;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum InternalError {
    #[error("basis needs n >= 7, got {0}")]
    SmallN(u32),
    #[error(transparent)]
    Species(#[from] SpeciesError),
    #[error(transparent)]
    Radial(#[from] RadialError),
    #[error("invalid field point B={b} T, beta={beta} V/m^2")]
    Field { b: f64, beta: f64 },
    #[error("tracking failed in block 2mj={mj2} between B={b_lo} T and B={b_hi} T: {reason}")]
    Tracking { mj2: i32, b_lo: f64, b_hi: f64, reason: String },
    #[error("label {0} is not tracked")]
    UnknownLabel(String),
    #[error("B={0} T is not on the tracked grid")]
    OffGrid(f64),
    #[error("B grid must be non-empty and ascending")]
    Grid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisSet {
    pub n_ref: u32,
    pub l_max: u32,
    pub states: Vec<CoupledLabel>,
}

impl BasisSet {
    pub fn len(&self) -> usize {
        self.states.len()
    }
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
    /// Distinct m_j values (doubled), ascending.
    pub fn mj_values(&self) -> Vec<i32> {
        let mut v: Vec<i32> = self.states.iter().map(|s| s.mj2).collect();
        v.sort();
        v.dedup();
        v
    }
    pub fn block_indices(&self, mj2: i32) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.states[i].mj2 == mj2).collect()
    }
}

fn push_manifold(out: &mut Vec<CoupledLabel>, n: u32, ls: impl Iterator<Item = u32>) {
    for l in ls {
        let mut j2s = vec![];
        if l > 0 {
            j2s.push(2 * l - 1);
        }
        j2s.push(2 * l + 1);
        for j2 in j2s {
            for mj2 in (-(j2 as i32)..=j2 as i32).step_by(2) {
                out.push(CoupledLabel { n, l, j2, mj2 });
            }
        }
    }
}

/// Neighbouring-manifold truncation: (n−2) F,G,H; (n−1) D,F,G,H; n S,P,
/// with every l above `l_max` dropped.
pub fn build_basis_lmax(n: u32, l_max: u32, species: &crate::species::SpeciesParams) -> Result<BasisSet, InternalError> {
    if n < 7 {
        return Err(InternalError::SmallN(n));
    }
    let top = l_max.min(5);
    species.require_lmax(top as usize)?;
    let mut states = Vec::new();
    push_manifold(&mut states, n - 2, 3..=top);
    push_manifold(&mut states, n - 1, 2..=top);
    push_manifold(&mut states, n, 0..=top.min(1));
    Ok(BasisSet { n_ref: n, l_max: top, states })
}

pub fn build_basis(n: u32, species: &crate::species::SpeciesParams) -> Result<BasisSet, InternalError> {
    build_basis_lmax(n, 5, species)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPoint {
    pub b_tesla: f64,
    pub beta: f64,
}

impl FieldPoint {
    pub fn new(b_tesla: f64, beta: f64) -> Result<Self, InternalError> {
        if !(b_tesla >= 0.0 && beta >= 0.0 && b_tesla.is_finite() && beta.is_finite()) {
            return Err(InternalError::Field { b: b_tesla, beta });
        }
        Ok(Self { b_tesla, beta })
    }
}

/// Hartree → GHz.
pub fn hartree_to_ghz(e: f64) -> f64 {
    e * HARTREE / H_PLANCK * 1e-9
}

#[derive(Debug, Clone)]
pub struct Block {
    pub mj2: i32,
    pub idx: Vec<usize>,
}

/// Field-independent pieces of the internal Hamiltonian over one basis.
pub struct InternalModel {
    pub basis: BasisSet,
    pub e0: Vec<f64>,
    /// (l_z + g_s s_z)/2 per unit atomic B.
    pub zeeman: DMatrix<f64>,
    /// r² sin²θ / 8.
    pub dia: DMatrix<f64>,
    /// r² (1 − 3cos²θ).
    pub quad: DMatrix<f64>,
    /// r cosθ.
    pub dip_z: DMatrix<f64>,
    pub blocks: Vec<Block>,
    pub radial: HashMap<(u32, u32, u32), Arc<RadialState>>,
}

fn angular_coupled(op: AngularOp, a: &CoupledLabel, b: &CoupledLabel) -> f64 {
    if a.mj2 != b.mj2 {
        return 0.0;
    }
    let mut s = 0.0;
    for ms2 in [-1, 1] {
        let ml2 = a.mj2 - ms2;
        if ml2 % 2 != 0 {
            continue;
        }
        let ml = ml2 / 2;
        if ml.unsigned_abs() > a.l || ml.unsigned_abs() > b.l {
            continue;
        }
        let ca = clebsch_gordan(a.l, ml, ms2, a.j2, a.mj2);
        let cb = clebsch_gordan(b.l, ml, ms2, b.j2, b.mj2);
        if ca != 0.0 && cb != 0.0 {
            s += ca * cb * angular_element(op, a.l, ml, b.l, ml);
        }
    }
    s
}

fn zeeman_coupled(a: &CoupledLabel, b: &CoupledLabel) -> f64 {
    if a.mj2 != b.mj2 || a.l != b.l || a.n != b.n {
        return 0.0;
    }
    let mut s = 0.0;
    for ms2 in [-1, 1] {
        let ml2 = a.mj2 - ms2;
        let ml = ml2 / 2;
        if ml.unsigned_abs() > a.l {
            continue;
        }
        s += clebsch_gordan(a.l, ml, ms2, a.j2, a.mj2)
            * clebsch_gordan(b.l, ml, ms2, b.j2, b.mj2)
            * (ml as f64 + G_S * ms2 as f64 / 2.0);
    }
    0.5 * s
}

impl InternalModel {
    pub fn new(basis: BasisSet, cache: &RadialCache) -> Result<Self, InternalError> {
        let mut keys: Vec<(u32, u32, u32)> = basis.states.iter().map(|s| (s.n, s.l, s.j2)).collect();
        keys.sort();
        keys.dedup();
        let solved: Vec<_> = keys.par_iter().map(|&(n, l, j2)| cache.get(n, l, j2)).collect();
        let mut radial = HashMap::new();
        for (k, s) in keys.iter().zip(solved) {
            radial.insert(*k, s?);
        }
        let key = |s: &CoupledLabel| (s.n, s.l, s.j2);
        let mut r_int: HashMap<((u32, u32, u32), (u32, u32, u32), i32), f64> = HashMap::new();
        for a in &keys {
            for b in &keys {
                if a > b {
                    continue;
                }
                for k in [0, 1, 2] {
                    let v = radial_integral(&radial[a], &radial[b], k)?;
                    r_int.insert((*a, *b, k), v);
                    r_int.insert((*b, *a, k), v);
                }
            }
        }
        let d = basis.len();
        let mut zeeman = DMatrix::zeros(d, d);
        let mut dia = DMatrix::zeros(d, d);
        let mut quad = DMatrix::zeros(d, d);
        let mut dip_z = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in i..d {
                let (a, b) = (&basis.states[i], &basis.states[j]);
                if a.mj2 != b.mj2 {
                    continue;
                }
                let (ka, kb) = (key(a), key(b));
                let z = zeeman_coupled(a, b) * if ka == kb { 1.0 } else { r_int[&(ka, kb, 0)] };
                let r2 = r_int[&(ka, kb, 2)];
                let dd = r2 * angular_coupled(AngularOp::Sin2Theta, a, b) / 8.0;
                let qq = r2 * angular_coupled(AngularOp::Quadrupole, a, b);
                let pz = r_int[&(ka, kb, 1)] * angular_coupled(AngularOp::CosTheta, a, b);
                for (m, v) in [(&mut zeeman, z), (&mut dia, dd), (&mut quad, qq), (&mut dip_z, pz)] {
                    m[(i, j)] = v;
                    m[(j, i)] = v;
                }
            }
        }
        let e0 = basis.states.iter().map(|s| radial[&key(s)].energy).collect();
        let blocks = basis.mj_values().into_iter().map(|mj2| Block { mj2, idx: basis.block_indices(mj2) }).collect();
        Ok(Self { basis, e0, zeeman, dia, quad, dip_z, blocks, radial })
    }

    fn coefficients(field: FieldPoint) -> (f64, f64, f64) {
        let b = field.b_tesla / B_AU;
        (b, b * b, field.beta / GRAD_AU)
    }

    /// Full Hamiltonian in Hartree.
    pub fn assemble(&self, field: FieldPoint) -> DMatrix<f64> {
        let (cz, cd, cq) = Self::coefficients(field);
        let mut h = &self.zeeman * cz + &self.dia * cd + &self.quad * cq;
        for i in 0..self.basis.len() {
            h[(i, i)] += self.e0[i];
        }
        h
    }

    /// Same as [`assemble`](Self::assemble) but allowing signed B (used by perturbative checks).
    pub fn assemble_signed(&self, b_tesla: f64, beta: f64) -> DMatrix<f64> {
        let b = b_tesla / B_AU;
        let mut h = &self.zeeman * b + &self.dia * (b * b) + &self.quad * (beta / GRAD_AU);
        for i in 0..self.basis.len() {
            h[(i, i)] += self.e0[i];
        }
        h
    }

    pub fn block_matrix(&self, block: &Block, field: FieldPoint) -> DMatrix<f64> {
        let (cz, cd, cq) = Self::coefficients(field);
        let k = block.idx.len();
        DMatrix::from_fn(k, k, |a, b| {
            let (i, j) = (block.idx[a], block.idx[b]);
            let mut v = cz * self.zeeman[(i, j)] + cd * self.dia[(i, j)] + cq * self.quad[(i, j)];
            if i == j {
                v += self.e0[i];
            }
            v
        })
    }

    pub fn diagonalize_block(&self, block: &Block, field: FieldPoint) -> (Vec<f64>, DMatrix<f64>) {
        sorted_eigen(self.block_matrix(block, field))
    }

    pub fn spectrum(&self, field: FieldPoint) -> Vec<(Vec<f64>, DMatrix<f64>)> {
        self.blocks.iter().map(|b| self.diagonalize_block(b, field)).collect()
    }

    /// Uncoupled labels spanning a block, in a fixed order.
    pub fn uncoupled_labels(&self, block: &Block) -> Vec<UncoupledLabel> {
        let mut out = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for &i in &block.idx {
            let s = self.basis.states[i];
            if seen.insert((s.n, s.l)) {
                for ms2 in [1, -1] {
                    let ml2 = s.mj2 - ms2;
                    if let Some(u) = UncoupledLabel::new(s.n, s.l, ml2 / 2, ms2) {
                        out.push(u);
                    }
                }
            }
        }
        out
    }

    /// Amplitudes of a block vector on the uncoupled states returned by [`uncoupled_labels`](Self::uncoupled_labels).
    pub fn to_uncoupled(&self, block: &Block, v: &[f64]) -> Vec<f64> {
        self.uncoupled_labels(block)
            .iter()
            .map(|u| {
                block
                    .idx
                    .iter()
                    .zip(v)
                    .filter(|(&i, _)| self.basis.states[i].n == u.n && self.basis.states[i].l == u.l)
                    .map(|(&i, c)| {
                        let s = self.basis.states[i];
                        c * clebsch_gordan(s.l, u.ml, u.ms2, s.j2, s.mj2)
                    })
                    .sum()
            })
            .collect()
    }

    /// ⟨a| r cosθ |b⟩ for block vectors of the same block, in Bohr.
    pub fn dipole_z(&self, block: &Block, a: &[f64], b: &[f64]) -> f64 {
        let mut s = 0.0;
        for (p, &i) in block.idx.iter().enumerate() {
            for (q, &j) in block.idx.iter().enumerate() {
                s += a[p] * self.dip_z[(i, j)] * b[q];
            }
        }
        s
    }

    pub fn block_of(&self, mj2: i32) -> Option<&Block> {
        self.blocks.iter().find(|b| b.mj2 == mj2)
    }
}

pub fn sorted_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let cols: Vec<DVector<f64>> = order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect();
    (vals, DMatrix::from_columns(&cols))
}

/// Assemble the internal Hamiltonian for `basis` at `field` using solved states from `cache`.
pub fn assemble(basis: &BasisSet, field: FieldPoint, cache: &RadialCache) -> Result<DMatrix<f64>, InternalError> {
    Ok(InternalModel::new(basis.clone(), cache)?.assemble(field))
}
