//! Facilitated transverse-field Ising model on a few sites:
//! H = Ω Σσˣ − Δ ΣP↑ + Σ_{i<j} V_ij P↑_i P↑_j.
//!
//! Product states are indexed by bit masks, bit i set when site i is ↑.
//! With this sign of Δ the facilitated point is V = +Δ (see [`facilitation_v0`]).

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use std::f64::consts::PI;
use std::io::Write;

pub const MAX_SITES: usize = 12;

type C64 = Complex<f64>;
pub type StateVec = DVector<C64>;

#[derive(Debug, thiserror::Error)]
pub enum SpinError {
    #[error("N = {0} exceeds the exact-diagonalization limit of {MAX_SITES}")]
    Capacity(usize),
    #[error("coupling matrix must be symmetric N×N with zero diagonal")]
    Couplings,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinModelParams {
    pub n: usize,
    pub omega: f64,
    pub delta: f64,
    pub v: DMatrix<f64>,
}

impl SpinModelParams {
    pub fn uniform(n: usize, omega: f64, delta: f64, v0: f64) -> Self {
        let v = DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { v0 });
        Self { n, omega, delta, v }
    }

    fn validate(&self) -> Result<(), SpinError> {
        if self.n > MAX_SITES {
            return Err(SpinError::Capacity(self.n));
        }
        if self.v.nrows() != self.n || self.v.ncols() != self.n {
            return Err(SpinError::Couplings);
        }
        for i in 0..self.n {
            if self.v[(i, i)] != 0.0 {
                return Err(SpinError::Couplings);
            }
            for j in 0..i {
                if self.v[(i, j)] != self.v[(j, i)] {
                    return Err(SpinError::Couplings);
                }
            }
        }
        Ok(())
    }
}

/// Interaction that makes a second excitation resonant: V₀ = Δ here, which
/// is the condition written as V₀ = −Δ when the detuning enters with + sign.
pub fn facilitation_v0(delta: f64) -> f64 {
    delta
}

pub fn diagonal_energy(p: &SpinModelParams, s: usize) -> f64 {
    let mut e = 0.0;
    for i in 0..p.n {
        if s >> i & 1 == 1 {
            e -= p.delta;
            for j in i + 1..p.n {
                if s >> j & 1 == 1 {
                    e += p.v[(i, j)];
                }
            }
        }
    }
    e
}

pub fn build_hamiltonian(p: &SpinModelParams) -> Result<DMatrix<f64>, SpinError> {
    p.validate()?;
    let dim = 1usize << p.n;
    let mut h = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        h[(s, s)] = diagonal_energy(p, s);
        for i in 0..p.n {
            h[(s ^ (1 << i), s)] += p.omega;
        }
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinSpectrum {
    pub energies: Vec<f64>,
    /// Columns are eigenvectors in the product basis.
    pub vectors: DMatrix<f64>,
    /// Index ranges of degenerate groups.
    pub groups: Vec<std::ops::Range<usize>>,
}

pub fn spectrum(p: &SpinModelParams) -> Result<SpinSpectrum, SpinError> {
    let h = build_hamiltonian(p)?;
    let dim = h.nrows();
    let se = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let energies: Vec<f64> = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(dim, dim, |r, c| se.eigenvectors[(r, order[c])]);
    let tol = 1e-9 * energies.iter().fold(0.0f64, |m, e| m.max(e.abs())).max(f64::MIN_POSITIVE);
    let mut groups = vec![];
    let mut start = 0;
    for k in 1..=dim {
        if k == dim || energies[k] - energies[k - 1] > tol {
            groups.push(start..k);
            start = k;
        }
    }
    Ok(SpinSpectrum { energies, vectors, groups })
}

fn ket(bits: &[u8]) -> usize {
    bits.iter().enumerate().map(|(i, &b)| (b as usize) << i).sum()
}

fn combo(terms: &[(usize, C64)]) -> StateVec {
    let mut v = StateVec::zeros(8);
    for &(k, c) in terms {
        v[k] += c;
    }
    v
}

/// Three-site symmetry-adapted states.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryStates {
    pub s1: StateVec,
    pub s2: StateVec,
    /// Index 0 ↔ r = +1, index 1 ↔ r = −1.
    pub c1: [StateVec; 2],
    pub c2: [StateVec; 2],
    pub s_plus: StateVec,
    pub s_minus: StateVec,
    /// (C^r₁ ± C^r₂)/√2 as written with the single-r pairing.
    pub c_plus: [StateVec; 2],
    pub c_minus: [StateVec; 2],
    /// First-order eigenstates within the C sector: C^r₁ paired with C^{−r}₂,
    /// `[r][0]` raised by +Ω, `[r][1]` lowered by −Ω.
    pub c_first_order: [[StateVec; 2]; 2],
}

pub fn symmetry_states() -> SymmetryStates {
    let k = 1.0 / 3f64.sqrt();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let singles = [ket(&[1, 0, 0]), ket(&[0, 1, 0]), ket(&[0, 0, 1])];
    let doubles = [ket(&[1, 1, 0]), ket(&[1, 0, 1]), ket(&[0, 1, 1])];
    let phase = |r: i32, m: i32| C64::from_polar(k, 2.0 * PI * (r * m) as f64 / 3.0);
    let sym = |set: &[usize; 3], r: i32| combo(&[(set[0], phase(r, 0)), (set[1], phase(r, 1)), (set[2], phase(r, 2))]);
    let s1 = sym(&singles, 0);
    let s2 = sym(&doubles, 0);
    let c1 = [sym(&singles, 1), sym(&singles, -1)];
    let c2 = [sym(&doubles, 1), sym(&doubles, -1)];
    let mix = |a: &StateVec, b: &StateVec, s: f64| (a + b * C64::new(s, 0.0)) * C64::new(h, 0.0);
    let t = flip_operator(3).map(|x| C64::new(x, 0.0));
    let c_first_order = [0usize, 1].map(|r| {
        let other = &c2[1 - r];
        let m = c1[r].dotc(&(&t * other));
        let ph = m.conj() / m.norm();
        [(&c1[r] + other * ph) * C64::new(h, 0.0), (&c1[r] - other * ph) * C64::new(h, 0.0)]
    });
    SymmetryStates {
        s_plus: mix(&s1, &s2, 1.0),
        s_minus: mix(&s1, &s2, -1.0),
        c_plus: [mix(&c1[0], &c2[0], 1.0), mix(&c1[1], &c2[1], 1.0)],
        c_minus: [mix(&c1[0], &c2[0], -1.0), mix(&c1[1], &c2[1], -1.0)],
        s1,
        s2,
        c1,
        c2,
        c_first_order,
    }
}

/// Σσˣ on N sites.
pub fn flip_operator(n: usize) -> DMatrix<f64> {
    let dim = 1usize << n;
    let mut t = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        for i in 0..n {
            t[(s ^ (1 << i), s)] += 1.0;
        }
    }
    t
}

/// Cyclic site permutation: the state of site i moves to site i+1.
pub fn cyclic_permutation(n: usize) -> DMatrix<f64> {
    let dim = 1usize << n;
    let mut p = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        let t = ((s << 1) | (s >> (n - 1))) & (dim - 1);
        p[(t, s)] = 1.0;
    }
    p
}

/// Exchange of sites a and b.
pub fn site_swap(n: usize, a: usize, b: usize) -> DMatrix<f64> {
    let dim = 1usize << n;
    let mut p = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        let (ba, bb) = (s >> a & 1, s >> b & 1);
        let t = (s & !(1 << a) & !(1 << b)) | (ba << b) | (bb << a);
        p[(t, s)] = 1.0;
    }
    p
}

#[derive(Debug, Clone, PartialEq)]
pub struct PtLevel {
    pub energy: f64,
    pub slope: i32,
    pub label: &'static str,
    pub states: Vec<StateVec>,
}

/// First-order levels of the facilitated triangle, ascending for Ω > 0.
pub fn perturbative_energies(omega: f64, delta: f64) -> Vec<PtLevel> {
    let st = symmetry_states();
    let mut levels = vec![
        PtLevel { energy: -delta + 2.0 * omega, slope: 2, label: "S+", states: vec![st.s_plus.clone()] },
        PtLevel { energy: -delta - 2.0 * omega, slope: -2, label: "S-", states: vec![st.s_minus.clone()] },
        PtLevel {
            energy: -delta + omega,
            slope: 1,
            label: "C+",
            states: vec![st.c_first_order[0][0].clone(), st.c_first_order[1][0].clone()],
        },
        PtLevel {
            energy: -delta - omega,
            slope: -1,
            label: "C-",
            states: vec![st.c_first_order[0][1].clone(), st.c_first_order[1][1].clone()],
        },
    ];
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    levels
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundStateReport {
    pub energy: f64,
    pub degeneracy: usize,
    /// ⟨S₊|P_GS|S₊⟩ and ⟨S₋|P_GS|S₋⟩ (three sites only).
    pub overlap_s_plus: Option<f64>,
    pub overlap_s_minus: Option<f64>,
    /// Weight of the ground space inside the six one- and two-excitation states.
    pub manifold_weight: Option<f64>,
    /// Von Neumann entropy (nats) of site 1 in the canonical ground vector.
    pub entropy: f64,
    pub vector: DVector<f64>,
}

fn projector_weight(basis: &DMatrix<f64>, v: &StateVec) -> f64 {
    (0..basis.ncols())
        .map(|c| basis.column(c).map(|x| C64::new(x, 0.0)).dotc(v).norm_sqr())
        .sum()
}

pub fn ground_state_report(p: &SpinModelParams) -> Result<GroundStateReport, SpinError> {
    let sp = spectrum(p)?;
    let g = sp.groups[0].clone();
    let basis = sp.vectors.columns(g.start, g.len()).into_owned();
    let mut v = basis.column(0).into_owned();
    let (ovp, ovm, manifold) = if p.n == 3 {
        let st = symmetry_states();
        let ov1 = st.s1.map(|x| x.re).dot(&v);
        if ov1 < 0.0 {
            v = -v;
        }
        let proj = basis.clone();
        let six: f64 = [&st.s1, &st.s2, &st.c1[0], &st.c1[1], &st.c2[0], &st.c2[1]]
            .iter()
            .map(|s| projector_weight(&proj, s))
            .sum::<f64>()
            / g.len() as f64;
        (Some(projector_weight(&proj, &st.s_plus)), Some(projector_weight(&proj, &st.s_minus)), Some(six))
    } else {
        (None, None, None)
    };
    // reduced density matrix of site 0
    let (mut p00, mut p11, mut p01) = (0.0, 0.0, 0.0);
    for s in 0..v.len() {
        if s & 1 == 0 {
            p00 += v[s] * v[s];
            p01 += v[s] * v[s | 1];
        } else {
            p11 += v[s] * v[s];
        }
    }
    let rho = nalgebra::Matrix2::new(p00, p01, p01, p11);
    let entropy = SymmetricEigen::new(rho)
        .eigenvalues
        .iter()
        .filter(|&&l| l > 1e-15)
        .map(|&l| -l * l.ln())
        .sum();
    Ok(GroundStateReport {
        energy: sp.energies[0],
        degeneracy: g.len(),
        overlap_s_plus: ovp,
        overlap_s_minus: ovm,
        manifold_weight: manifold,
        entropy,
        vector: v,
    })
}

/// Dominant symmetry content of a three-site eigenvector.
pub fn symmetry_label(v: &DVector<f64>) -> &'static str {
    let st = symmetry_states();
    let c = v.map(|x| C64::new(x, 0.0));
    let w = |s: &StateVec| s.dotc(&c).norm_sqr();
    let cands = [
        ("S+", w(&st.s_plus)),
        ("S-", w(&st.s_minus)),
        ("C+", w(&st.c_first_order[0][0]) + w(&st.c_first_order[1][0])),
        ("C-", w(&st.c_first_order[0][1]) + w(&st.c_first_order[1][1])),
        ("E0", c[0].norm_sqr() + c[7].norm_sqr()),
    ];
    cands.iter().max_by(|a, b| a.1.total_cmp(&b.1)).map(|x| x.0).unwrap()
}

pub const SPIN_HEADER: &str = "Omega_over_Delta,level_index,energy_over_Delta,symmetry_label";

/// Spectrum rows for a sweep of Ω/Δ at facilitation.
pub fn write_omega_sweep(w: &mut impl Write, delta: f64, omegas_over_delta: &[f64]) -> std::io::Result<()> {
    for &x in omegas_over_delta {
        let p = SpinModelParams::uniform(3, x * delta, delta, facilitation_v0(delta));
        let sp = spectrum(&p).expect("three sites");
        for (k, e) in sp.energies.iter().enumerate() {
            let v = sp.vectors.column(k).into_owned();
            writeln!(w, "{x},{k},{:.12},{}", e / delta, symmetry_label(&v))?;
        }
    }
    Ok(())
}
