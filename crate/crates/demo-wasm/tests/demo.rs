use rydpen_demo::{calc_spin, calc_trap, calc_triangle};

#[test]
fn trap_matches_closed_form() {
    let v = calc_trap(2.0, 8e5, 40.0).unwrap();
    let (z, c, r) = (v[0], v[1], v[2]);
    assert_eq!(v[3], 1.0);
    assert!(((c * c - 2.0 * z * z).sqrt() / 2.0 - r).abs() < 1e-9 * c);
    assert_eq!(calc_trap(2.0, 4.5e7, 40.0).unwrap()[3], 0.0);
    assert!(calc_trap(1.0, 1e6, 0.0).is_err());
}

#[test]
fn triangle_layout() {
    let v = calc_triangle(200.0, 2.0, 0.0, 40.0).unwrap();
    assert_eq!(v.len(), 13);
    let expect = [0.0, 1.0, 1.0, 1.5f64.sqrt(), 1.5f64.sqrt(), 3f64.sqrt()];
    for (a, b) in v[..6].iter().zip(expect) {
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
    let d01 = ((v[6] - v[8]).powi(2) + (v[7] - v[9]).powi(2)).sqrt();
    assert!((d01 - v[12]).abs() < 1e-9 * v[12]);
    assert!(calc_triangle(200.0, 1.0, 0.0, 40.0).unwrap_err().contains("planar"));
    assert!(calc_triangle(-1.0, 2.0, 0.0, 40.0).is_err());
}

#[test]
fn lifted_rotation_mode() {
    let v = calc_triangle(200.0, 2.0, 0.03, 40.0).unwrap();
    assert!(v[0] > 1e-3);
}

#[test]
fn spin_levels_sorted_and_even() {
    let a = calc_spin(0.2).unwrap();
    let b = calc_spin(-0.2).unwrap();
    assert_eq!(a.len(), 8);
    assert!(a.windows(2).all(|w| w[0] <= w[1]));
    assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-12));
    assert!(calc_spin(f64::NAN).is_err());
}
