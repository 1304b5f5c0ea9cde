use super::{hartree_to_ghz, sorted_eigen, FieldPoint, InternalError, InternalModel};
use crate::angular::UncoupledLabel;
use nalgebra::DMatrix;
use rayon::prelude::*;
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackOptions {
    /// Bisect an interval when any assigned overlap falls below this.
    pub refine_below: f64,
    /// Give up when an overlap is still below this after refining.
    pub fail_below: f64,
    pub max_depth: u32,
}

impl Default for TrackOptions {
    fn default() -> Self {
        Self { refine_below: 0.9, fail_below: 0.5, max_depth: 12 }
    }
}

#[derive(Debug, Clone)]
pub struct TrackedBlock {
    pub mj2: i32,
    pub idx: Vec<usize>,
    pub labels: Vec<UncoupledLabel>,
    /// [point][track], Hartree.
    pub energies: Vec<Vec<f64>>,
    /// [point], columns are tracks in block coordinates.
    pub vectors: Vec<DMatrix<f64>>,
    /// [point][track], |⟨v_k|v_{k+1}⟩| with the previous point (1 at the first).
    pub overlaps: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct AdiabaticTrack {
    /// Ascending, including points inserted by refinement.
    pub b_grid: Vec<f64>,
    /// Whether each point was part of the requested grid.
    pub requested: Vec<bool>,
    pub beta: f64,
    pub blocks: Vec<TrackedBlock>,
}

type PointSpectrum = Vec<(Vec<f64>, DMatrix<f64>)>;

fn has_degeneracy(vals: &[f64]) -> bool {
    vals.windows(2).any(|w| (w[1] - w[0]).abs() <= 1e-12 * w[0].abs().max(1e-300))
}

/// Greedy maximal-overlap matching of previous tracks onto current eigenvectors.
fn assign(prev: &DMatrix<f64>, cur: &DMatrix<f64>) -> (Vec<usize>, Vec<f64>) {
    let k = prev.ncols();
    let o = prev.transpose() * cur;
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(k * k);
    for t in 0..k {
        for c in 0..k {
            pairs.push((o[(t, c)].abs(), t, c));
        }
    }
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut col_of = vec![usize::MAX; k];
    let mut used = vec![false; k];
    let mut ov = vec![0.0; k];
    for (v, t, c) in pairs {
        if col_of[t] == usize::MAX && !used[c] {
            col_of[t] = c;
            used[c] = true;
            ov[t] = v;
        }
    }
    (col_of, ov)
}

fn validate_grid(b_grid: &[f64]) -> Result<(), InternalError> {
    if b_grid.is_empty() || b_grid.iter().any(|b| !(*b >= 0.0) || !b.is_finite()) {
        return Err(InternalError::Grid);
    }
    if b_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(InternalError::Grid);
    }
    Ok(())
}

/// Diagonalize on `b_grid` and follow every eigenvector continuously.
pub fn sweep_and_track(
    model: &InternalModel,
    b_grid: &[f64],
    beta: f64,
    opts: TrackOptions,
) -> Result<AdiabaticTrack, InternalError> {
    validate_grid(b_grid)?;
    FieldPoint::new(0.0, beta)?;
    let spec_at = |b: f64| -> PointSpectrum { model.spectrum(FieldPoint { b_tesla: b, beta }) };
    let raw: Vec<PointSpectrum> = b_grid.par_iter().map(|&b| spec_at(b)).collect();
    let mut pts: Vec<(f64, bool, PointSpectrum)> =
        b_grid.iter().zip(raw).map(|(&b, s)| (b, true, s)).collect();
    let span = (b_grid[b_grid.len() - 1] - b_grid[0]).max(1e-6);
    let nb = model.blocks.len();

    // tracked state at the current point
    let first = &pts[0].2;
    let mut cur: Vec<(Vec<f64>, DMatrix<f64>)> = Vec::with_capacity(nb);
    for (bi, (vals, vecs)) in first.iter().enumerate() {
        if has_degeneracy(vals) {
            // pick the basis inside degenerate clusters that the field selects
            let probe = pts[0].0 + 1e-9 * span;
            let (_, v) = model.diagonalize_block(&model.blocks[bi], FieldPoint { b_tesla: probe, beta });
            cur.push((vals.clone(), v));
        } else {
            cur.push((vals.clone(), vecs.clone()));
        }
    }
    let mut out_e: Vec<Vec<Vec<f64>>> = (0..nb).map(|b| vec![cur[b].0.clone()]).collect();
    let mut out_v: Vec<Vec<DMatrix<f64>>> = (0..nb).map(|b| vec![cur[b].1.clone()]).collect();
    let mut out_o: Vec<Vec<Vec<f64>>> = (0..nb).map(|b| vec![vec![1.0; cur[b].0.len()]]).collect();
    let mut grid_out = vec![pts[0].0];
    let mut req_out = vec![pts[0].1];

    let mut k = 0;
    let mut depth = vec![0u32; pts.len()];
    while k + 1 < pts.len() {
        let mut results = Vec::with_capacity(nb);
        let mut worst = (1.0_f64, 0usize);
        for bi in 0..nb {
            let (vals, vecs) = &pts[k + 1].2[bi];
            let (col_of, ov) = assign(&cur[bi].1, vecs);
            let m = ov.iter().cloned().fold(1.0, f64::min);
            if m < worst.0 {
                worst = (m, bi);
            }
            results.push((col_of, ov, vals, vecs));
        }
        if worst.0 < opts.refine_below && depth[k + 1] < opts.max_depth {
            let mid = 0.5 * (pts[k].0 + pts[k + 1].0);
            let d = depth[k + 1] + 1;
            drop(results);
            pts.insert(k + 1, (mid, false, spec_at(mid)));
            depth.insert(k + 1, d);
            depth[k + 2] = d;
            continue;
        }
        if worst.0 < opts.fail_below {
            return Err(InternalError::Tracking {
                mj2: model.blocks[worst.1].mj2,
                b_lo: pts[k].0,
                b_hi: pts[k + 1].0,
                reason: format!("best overlap {:.3} after refinement", worst.0),
            });
        }
        let mut next = Vec::with_capacity(nb);
        for (bi, (col_of, ov, vals, vecs)) in results.into_iter().enumerate() {
            let kk = col_of.len();
            let mut e = vec![0.0; kk];
            let mut v = DMatrix::zeros(vecs.nrows(), kk);
            for t in 0..kk {
                let c = col_of[t];
                e[t] = vals[c];
                let col = vecs.column(c);
                let sign = if cur[bi].1.column(t).dot(&col) < 0.0 { -1.0 } else { 1.0 };
                v.set_column(t, &(col * sign));
            }
            out_e[bi].push(e.clone());
            out_v[bi].push(v.clone());
            out_o[bi].push(ov);
            next.push((e, v));
        }
        cur = next;
        grid_out.push(pts[k + 1].0);
        req_out.push(pts[k + 1].1);
        k += 1;
    }

    let mut blocks = Vec::with_capacity(nb);
    for (bi, block) in model.blocks.iter().enumerate() {
        // Each track is labeled where it is purest along the sweep: at low B the
        // fine structure mixes m_l and m_s, at high B the diamagnetic term mixes l.
        let ulabels = model.uncoupled_labels(block);
        let kk = ulabels.len();
        let mut wm = DMatrix::<f64>::zeros(kk, kk);
        for vecs in &out_v[bi] {
            for t in 0..kk {
                let col: Vec<f64> = vecs.column(t).iter().copied().collect();
                for (u, a) in model.to_uncoupled(block, &col).iter().enumerate() {
                    wm[(t, u)] = wm[(t, u)].max(a * a);
                }
            }
        }
        let (lab_of, _) = assign(&DMatrix::identity(kk, kk), &wm);
        blocks.push(TrackedBlock {
            mj2: block.mj2,
            idx: block.idx.clone(),
            labels: lab_of.iter().map(|&u| ulabels[u]).collect(),
            energies: std::mem::take(&mut out_e[bi]),
            vectors: std::mem::take(&mut out_v[bi]),
            overlaps: std::mem::take(&mut out_o[bi]),
        });
    }
    Ok(AdiabaticTrack { b_grid: grid_out, requested: req_out, beta, blocks })
}

impl AdiabaticTrack {
    pub fn n_tracks(&self) -> usize {
        self.blocks.iter().map(|b| b.labels.len()).sum()
    }

    pub fn find(&self, label: &UncoupledLabel) -> Option<(usize, usize)> {
        self.blocks.iter().enumerate().find_map(|(bi, b)| b.labels.iter().position(|l| l == label).map(|t| (bi, t)))
    }

    pub fn point_index(&self, b_tesla: f64) -> Result<usize, InternalError> {
        let tol = 1e-9 * b_tesla.abs().max(1e-3);
        self.b_grid
            .iter()
            .position(|&b| (b - b_tesla).abs() <= tol)
            .ok_or(InternalError::OffGrid(b_tesla))
    }

    pub fn energy(&self, label: &UncoupledLabel, b_tesla: f64) -> Result<f64, InternalError> {
        let (bi, t) = self.find(label).ok_or_else(|| InternalError::UnknownLabel(label.to_string()))?;
        Ok(self.blocks[bi].energies[self.point_index(b_tesla)?][t])
    }

    /// Energies (Hartree) of one track over the whole grid.
    pub fn curve(&self, label: &UncoupledLabel) -> Result<Vec<f64>, InternalError> {
        let (bi, t) = self.find(label).ok_or_else(|| InternalError::UnknownLabel(label.to_string()))?;
        Ok(self.blocks[bi].energies.iter().map(|e| e[t]).collect())
    }

    pub fn min_overlap(&self) -> f64 {
        self.blocks.iter().flat_map(|b| b.overlaps.iter().flatten()).cloned().fold(1.0, f64::min)
    }

    /// Rows `B_tesla,block_mj,track_label,energy_GHz,overlap_prev` for requested points.
    pub fn write_csv(&self, w: &mut impl Write, only_mj2: Option<i32>) -> std::io::Result<()> {
        writeln!(w, "B_tesla,block_mj,track_label,energy_GHz,overlap_prev")?;
        for (p, &b) in self.b_grid.iter().enumerate() {
            if !self.requested[p] {
                continue;
            }
            for blk in &self.blocks {
                if only_mj2.is_some_and(|m| m != blk.mj2) {
                    continue;
                }
                for (t, lab) in blk.labels.iter().enumerate() {
                    writeln!(
                        w,
                        "{:.6},{}/2,\"{}\",{:.6},{:.6}",
                        b,
                        blk.mj2,
                        lab,
                        hartree_to_ghz(blk.energies[p][t]),
                        blk.overlaps[p][t]
                    )?;
                }
            }
        }
        Ok(())
    }
}

/// ⟨E_a(B)| r cosθ |E_b(B)⟩ in Bohr; zero across m_j blocks.
pub fn dipole_element(
    model: &InternalModel,
    track: &AdiabaticTrack,
    a: &UncoupledLabel,
    b: &UncoupledLabel,
    b_tesla: f64,
) -> Result<f64, InternalError> {
    let (ba, ta) = track.find(a).ok_or_else(|| InternalError::UnknownLabel(a.to_string()))?;
    let (bb, tb) = track.find(b).ok_or_else(|| InternalError::UnknownLabel(b.to_string()))?;
    let p = track.point_index(b_tesla)?;
    if ba != bb {
        return Ok(0.0);
    }
    let blk = &track.blocks[ba];
    let block = model.block_of(blk.mj2).expect("track built from this model");
    let va: Vec<f64> = blk.vectors[p].column(ta).iter().copied().collect();
    let vb: Vec<f64> = blk.vectors[p].column(tb).iter().copied().collect();
    Ok(model.dipole_z(block, &va, &vb))
}

/// Plain per-block eigen-decomposition without tracking, for a single field point.
pub fn block_eigen(model: &InternalModel, mj2: i32, field: FieldPoint) -> Option<(Vec<f64>, DMatrix<f64>)> {
    model.block_of(mj2).map(|b| sorted_eigen(model.block_matrix(b, field)))
}
