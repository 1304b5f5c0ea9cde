#![allow(dead_code)]

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            loop {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    return (x, 2.0 / ((1.0 - x * x) * dp * dp));
                }
            }
        })
        .collect()
}

/// Normalised θ-part of Y_lm: ∫ |f|² 2π dx = 1.
pub fn theta_part(l: u32, m: i32, x: f64) -> f64 {
    let ma = m.unsigned_abs();
    // associated Legendre by upward recursion
    let mut pmm = 1.0;
    let s = (1.0 - x * x).sqrt();
    for k in 1..=ma {
        pmm *= -((2 * k - 1) as f64) * s;
    }
    let p = if l == ma {
        pmm
    } else {
        let mut a = pmm;
        let mut b = x * (2 * ma + 1) as f64 * pmm;
        for ll in ma + 2..=l {
            let c = (x * (2 * ll - 1) as f64 * b - (ll + ma - 1) as f64 * a) / (ll - ma) as f64;
            a = b;
            b = c;
        }
        b
    };
    let fact = |k: u32| (1..=k).map(|v| v as f64).product::<f64>();
    let norm = ((2 * l + 1) as f64 / (4.0 * PI) * fact(l - ma) / fact(l + ma)).sqrt();
    norm * p
}

pub fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a / b - 1.0).abs()
    }
}
