//! Angular momentum coupling for one electron (s = 1/2) and the angular
//! matrix elements of cosθ, sin²θ and 1 − 3cos²θ between spherical harmonics.
//!
//! Condon–Shortley phases throughout. Half-integer quantum numbers are
//! stored doubled (`j2 = 2j`, `mj2 = 2m_j`, `ms2 = ±1`).

use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoupledLabel {
    pub n: u32,
    pub l: u32,
    pub j2: u32,
    pub mj2: i32,
}

impl CoupledLabel {
    pub fn new(n: u32, l: u32, j2: u32, mj2: i32) -> Option<Self> {
        let ok_j = j2 == 2 * l + 1 || (l > 0 && j2 == 2 * l - 1);
        let ok_m = mj2.unsigned_abs() <= j2 && (mj2 - j2 as i32) % 2 == 0;
        (ok_j && ok_m && l < n).then_some(Self { n, l, j2, mj2 })
    }
    pub fn j(&self) -> f64 {
        self.j2 as f64 / 2.0
    }
    pub fn mj(&self) -> f64 {
        self.mj2 as f64 / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UncoupledLabel {
    pub n: u32,
    pub l: u32,
    pub ml: i32,
    pub ms2: i32,
}

impl UncoupledLabel {
    pub fn new(n: u32, l: u32, ml: i32, ms2: i32) -> Option<Self> {
        (ml.unsigned_abs() <= l && (ms2 == 1 || ms2 == -1) && l < n).then_some(Self { n, l, ml, ms2 })
    }
    pub fn mj2(&self) -> i32 {
        2 * self.ml + self.ms2
    }
}

pub const L_LETTERS: [char; 8] = ['S', 'P', 'D', 'F', 'G', 'H', 'I', 'K'];

pub fn l_letter(l: u32) -> char {
    L_LETTERS.get(l as usize).copied().unwrap_or('?')
}

impl std::fmt::Display for UncoupledLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = if self.ms2 > 0 { '+' } else { '-' };
        write!(f, "{}{}(ml={},ms={}1/2)", self.n, l_letter(self.l), self.ml, s)
    }
}

impl std::fmt::Display for CoupledLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{}{}/2(mj={}/2)", self.n, l_letter(self.l), self.j2, self.mj2)
    }
}

/// ⟨l m_l; ½ m_s | j m_j⟩ for s = 1/2, zero when the labels are not coupled.
pub fn clebsch_gordan(l: u32, ml: i32, ms2: i32, j2: u32, mj2: i32) -> f64 {
    if (ms2 != 1 && ms2 != -1) || 2 * ml + ms2 != mj2 || ml.unsigned_abs() > l || mj2.unsigned_abs() > j2 {
        return 0.0;
    }
    let lf = l as f64;
    let m = mj2 as f64 / 2.0;
    let d = 2.0 * lf + 1.0;
    if j2 == 2 * l + 1 {
        if ms2 == 1 {
            ((lf + m + 0.5) / d).sqrt()
        } else {
            ((lf - m + 0.5) / d).sqrt()
        }
    } else if l > 0 && j2 == 2 * l - 1 {
        if ms2 == 1 {
            -((lf - m + 0.5) / d).sqrt()
        } else {
            ((lf + m + 0.5) / d).sqrt()
        }
    } else {
        0.0
    }
}

fn ln_fact(n: i64) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// Wigner 3j symbol with doubled arguments (Racah formula).
pub fn wigner_3j(j1: i32, j2: i32, j3: i32, m1: i32, m2: i32, m3: i32) -> f64 {
    if m1 + m2 + m3 != 0 || m1.abs() > j1 || m2.abs() > j2 || m3.abs() > j3 {
        return 0.0;
    }
    if j3 > j1 + j2 || j3 < (j1 - j2).abs() || (j1 + j2 + j3) % 2 != 0 {
        return 0.0;
    }
    if (j1 + m1) % 2 != 0 || (j2 + m2) % 2 != 0 || (j3 + m3) % 2 != 0 {
        return 0.0;
    }
    let h = |x: i32| (x / 2) as i64;
    let (a, b, c) = (h(j1 + j2 - j3), h(j1 - j2 + j3), h(-j1 + j2 + j3));
    let tri = ln_fact(a) + ln_fact(b) + ln_fact(c) - ln_fact(h(j1 + j2 + j3) + 1);
    let pre = 0.5
        * (tri
            + ln_fact(h(j1 + m1))
            + ln_fact(h(j1 - m1))
            + ln_fact(h(j2 + m2))
            + ln_fact(h(j2 - m2))
            + ln_fact(h(j3 + m3))
            + ln_fact(h(j3 - m3)));
    let kmin = 0.max(h(j2 - j3 - m1)).max(h(j1 - j3 + m2));
    let kmax = a.min(h(j1 - m1)).min(h(j2 + m2));
    let mut sum = 0.0;
    for k in kmin..=kmax {
        let den = ln_fact(k)
            + ln_fact(a - k)
            + ln_fact(h(j1 - m1) - k)
            + ln_fact(h(j2 + m2) - k)
            + ln_fact(h(j3 - j2 + m1) + k)
            + ln_fact(h(j3 - j1 - m2) + k);
        let sgn = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sgn * (pre - den).exp();
    }
    let phase = if h(j1 - j2 - m3).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    phase * sum
}

/// ∫ Y*_{l1 m1} Y_{k q} Y_{l2 m2} dΩ.
pub fn gaunt(l1: u32, m1: i32, k: u32, q: i32, l2: u32, m2: i32) -> f64 {
    let (l1i, ki, l2i) = (l1 as i32, k as i32, l2 as i32);
    let phase = if m1.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let norm = (((2 * l1 + 1) * (2 * k + 1) * (2 * l2 + 1)) as f64 / (4.0 * PI)).sqrt();
    phase
        * norm
        * wigner_3j(2 * l1i, 2 * ki, 2 * l2i, 0, 0, 0)
        * wigner_3j(2 * l1i, 2 * ki, 2 * l2i, -2 * m1, 2 * q, 2 * m2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AngularOp {
    CosTheta,
    Sin2Theta,
    /// 1 − 3cos²θ.
    Quadrupole,
    Identity,
}

/// ⟨l m| op |l' m'⟩ over the unit sphere.
pub fn angular_element(op: AngularOp, l: u32, m: i32, lp: u32, mp: i32) -> f64 {
    if m != mp || m.unsigned_abs() > l || mp.unsigned_abs() > lp {
        return 0.0;
    }
    let y10 = (4.0 * PI / 3.0).sqrt();
    let y20 = (4.0 * PI / 5.0).sqrt();
    let delta = if l == lp { 1.0 } else { 0.0 };
    // cos²θ = 1/3 + (2/3) √(4π/5) Y₂₀
    let cos2 = || delta / 3.0 + (2.0 / 3.0) * y20 * gaunt(l, m, 2, 0, lp, mp);
    match op {
        AngularOp::Identity => delta,
        AngularOp::CosTheta => y10 * gaunt(l, m, 1, 0, lp, mp),
        AngularOp::Sin2Theta => delta - cos2(),
        AngularOp::Quadrupole => delta - 3.0 * cos2(),
    }
}
