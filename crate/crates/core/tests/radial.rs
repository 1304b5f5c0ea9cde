mod common;

use common::rel;
use proptest::prelude::*;
use rydberg_penning::radial::*;
use rydberg_penning::species::species_by_name;
use std::sync::Arc;

fn hydrogenic_grid(n: u32) -> Arc<RadialGrid> {
    Arc::new(GridPolicy::for_n(n).build(&species_by_name("hydrogenic").unwrap()))
}

#[test]
fn hydrogenic_energies_and_nodes_up_to_60() {
    let sp = species_by_name("hydrogenic").unwrap();
    let grid = hydrogenic_grid(60);
    for n in (1..=60u32).step_by(1) {
        for l in 0..=5u32 {
            if l >= n {
                continue;
            }
            let s = solve_bound_state(&sp, n, l, 2 * l + 1, &grid).unwrap();
            assert!(rel(s.energy, -2.0 / (n * n) as f64) < 1e-8, "n={n} l={l}: {}", s.energy);
            assert_eq!(s.nodes as u32, n - l - 1, "n={n} l={l}");
            assert!((s.norm() - 1.0).abs() < 1e-10);
        }
    }
}

/// Z = 2: ⟨r⟩ = (3n² − l(l+1))/4, ⟨r²⟩ = n²(5n² + 1 − 3l(l+1))/8.
#[test]
fn hydrogenic_moments() {
    let cache = RadialCache::new(species_by_name("hydrogenic").unwrap(), GridPolicy::for_n(45));
    for (n, l) in [(30u32, 0u32), (45, 0), (45, 1), (45, 5), (6, 5)] {
        let s = cache.get(n, l, 2 * l + 1).unwrap();
        let (nf, ll) = (n as f64, (l * (l + 1)) as f64);
        assert!(rel(radial_integral(&s, &s, 1).unwrap(), (3.0 * nf * nf - ll) / 4.0) < 1e-8);
        assert!(rel(radial_integral(&s, &s, 2).unwrap(), nf * nf * (5.0 * nf * nf + 1.0 - 3.0 * ll) / 8.0) < 1e-8);
    }
}

#[test]
fn rho_squared_scaling_at_45() {
    let cache = RadialCache::new(species_by_name("hydrogenic").unwrap(), GridPolicy::for_n(45));
    let s = cache.get(45, 0, 1).unwrap();
    let rho2 = radial_integral(&s, &s, 2).unwrap() * 2.0 / 3.0;
    assert!(rel(rho2, 5.0 * 45f64.powi(4) / 12.0) < 0.02);
}

/// Same-n dipole: |⟨n l| r |n l−1⟩| = (3n/2Z)√(n² − l²).
#[test]
fn hydrogenic_dipole_closed_form() {
    let cache = RadialCache::new(species_by_name("hydrogenic").unwrap(), GridPolicy::for_n(50));
    for n in [10u32, 30, 50] {
        for l in 1..6u32 {
            let a = cache.get(n, l, 2 * l + 1).unwrap();
            let b = cache.get(n, l - 1, 2 * l - 1).unwrap();
            let want = 0.75 * n as f64 * ((n * n - l * l) as f64).sqrt();
            assert!(rel(radial_integral(&a, &b, 1).unwrap().abs(), want) < 1e-7, "n={n} l={l}");
        }
    }
}

#[test]
fn orthogonality_within_l() {
    let cache = RadialCache::new(species_by_name("ca40").unwrap(), GridPolicy::for_n(46));
    for l in [0u32, 1, 3] {
        for (n1, n2) in [(44u32, 45u32), (45, 46), (30, 45)] {
            let a = cache.get(n1, l, 2 * l + 1).unwrap();
            let b = cache.get(n2, l, 2 * l + 1).unwrap();
            assert!(radial_integral(&a, &b, 0).unwrap().abs() < 1e-7, "l={l} {n1},{n2}");
        }
    }
}

#[test]
fn calcium_defects_are_nearly_constant() {
    let cache = RadialCache::new(species_by_name("ca40").unwrap(), GridPolicy::for_n(50));
    let want = [(0u32, 1.802), (2, 0.622), (3, 0.030)];
    for (l, d) in want {
        for n in [35u32, 45, 50] {
            let s = cache.get(n, l, 2 * l + 1).unwrap();
            assert!((s.quantum_defect() - d).abs() < 5e-3, "l={l} n={n}: {}", s.quantum_defect());
        }
    }
    let p_avg = {
        let a = cache.get(45, 1, 1).unwrap().quantum_defect();
        let b = cache.get(45, 1, 3).unwrap().quantum_defect();
        (a + 2.0 * b) / 3.0
    };
    assert!((p_avg - 1.440).abs() < 5e-3);
}

#[test]
fn invalid_quantum_numbers_rejected() {
    let sp = species_by_name("hydrogenic").unwrap();
    let g = hydrogenic_grid(10);
    assert!(matches!(solve_bound_state(&sp, 3, 3, 7, &g), Err(RadialError::QuantumNumbers { .. })));
    assert!(matches!(solve_bound_state(&sp, 3, 0, 3, &g), Err(RadialError::QuantumNumbers { .. })));
}

#[test]
fn cache_round_trip() {
    let sp = species_by_name("ca40").unwrap();
    let cache = RadialCache::new(sp.clone(), GridPolicy::for_n(20));
    let s = cache.get(20, 1, 3).unwrap();
    let dir = std::env::temp_dir().join(format!("rydpen-cache-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c.radial");
    cache.save(&path).unwrap();
    let back = RadialCache::load(sp, &path).unwrap();
    assert_eq!(back.len(), 1);
    let t = back.get(20, 1, 3).unwrap();
    assert_eq!(t.energy, s.energy);
    assert_eq!(t.nodes, s.nodes);
    assert!(back.load_mismatch_is_rejected(&path));
    std::fs::remove_dir_all(dir).ok();
}

trait Mismatch {
    fn load_mismatch_is_rejected(&self, path: &std::path::Path) -> bool;
}

impl Mismatch for RadialCache {
    fn load_mismatch_is_rejected(&self, path: &std::path::Path) -> bool {
        RadialCache::load(species_by_name("hydrogenic").unwrap(), path).is_err()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn hydrogenic_energy_any_state(n in 1u32..40, frac in 0.0f64..1.0) {
        let l = (((n.min(6)) as f64) * frac) as u32 % n.min(6);
        let sp = species_by_name("hydrogenic").unwrap();
        let s = solve_bound_state(&sp, n, l, 2 * l + 1, &hydrogenic_grid(40)).unwrap();
        prop_assert!(rel(s.energy, -2.0 / (n * n) as f64) < 1e-8);
        prop_assert_eq!(s.nodes as u32, n - l - 1);
    }
}
