use proptest::prelude::*;
use rydberg_penning::constants::*;
use rydberg_penning::units::{convert, Quantity, Unit};

const ENERGY_LIKE: [Unit; 9] = [
    Unit::Joule,
    Unit::Hartree,
    Unit::ElectronVolt,
    Unit::Hertz,
    Unit::Kilohertz,
    Unit::Megahertz,
    Unit::Gigahertz,
    Unit::RadPerSecond,
    Unit::AtomicAngularFrequency,
];

proptest! {
    #[test]
    fn energy_like_round_trip(v in -1e6f64..1e6, a in 0usize..9, b in 0usize..9) {
        let q = Quantity::new(v, ENERGY_LIKE[a]);
        let back = convert(convert(q, ENERGY_LIKE[b]).unwrap(), ENERGY_LIKE[a]).unwrap();
        prop_assert!((back.value - v).abs() <= 1e-12 * v.abs().max(1e-300));
    }

    #[test]
    fn lengths_round_trip(v in 1e-3f64..1e3) {
        for u in [Unit::Micrometer, Unit::Bohr] {
            let back = Quantity::new(v, Unit::Meter).convert(u).unwrap().convert(Unit::Meter).unwrap();
            prop_assert!((back.value / v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn addition_respects_units(a in -10.0f64..10.0, b in -10.0f64..10.0) {
        let s = Quantity::new(a, Unit::Megahertz).try_add(Quantity::new(b, Unit::Kilohertz)).unwrap();
        prop_assert!((s.value - (a + b * 1e-3)).abs() < 1e-12);
    }
}

#[test]
fn mismatched_dimensions_fail() {
    assert!(Quantity::new(1.0, Unit::Tesla).convert(Unit::Hertz).is_err());
    assert!(Quantity::new(1.0, Unit::Meter).try_add(Quantity::new(1.0, Unit::Joule)).is_err());
}

#[test]
fn frequency_and_angular_frequency_differ_by_two_pi() {
    let w = Quantity::new(1.0, Unit::Megahertz).convert(Unit::RadPerSecond).unwrap();
    assert!((w.value / (2.0 * std::f64::consts::PI * 1e6) - 1.0).abs() < 1e-14);
}

#[test]
fn atomic_units_are_consistent() {
    assert!(PhysicalConstants::CODATA2018.consistency_error() < 1e-12);
    // Hartree = 2 Rydberg; R∞ c = 3.2898419602508e15 Hz
    assert!((HARTREE / H_PLANCK / 2.0 / 3.289_841_960_250_8e15 - 1.0).abs() < 1e-9);
    assert!((A0 / 5.291_772_109_03e-11 - 1.0).abs() < 1e-9);
    assert!((B_AU / 2.350_517_567_58e5 - 1.0).abs() < 1e-8);
}
