//! Tagged quantities and conversions between SI and Hartree atomic units.

use crate::constants::*;
use std::f64::consts::PI;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    Energy,
    Length,
    Frequency,
    AngularFrequency,
    MagneticField,
    FieldGradient,
    Dimensionless,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Unit {
    Joule,
    Hartree,
    ElectronVolt,
    Meter,
    Micrometer,
    Bohr,
    Hertz,
    Kilohertz,
    Megahertz,
    Gigahertz,
    RadPerSecond,
    AtomicAngularFrequency,
    Tesla,
    AtomicMagneticField,
    VoltPerMeter2,
    AtomicFieldGradient,
    One,
}

impl Unit {
    pub fn dimension(self) -> Dimension {
        use Unit::*;
        match self {
            Joule | Hartree | ElectronVolt => Dimension::Energy,
            Meter | Micrometer | Bohr => Dimension::Length,
            Hertz | Kilohertz | Megahertz | Gigahertz => Dimension::Frequency,
            RadPerSecond | AtomicAngularFrequency => Dimension::AngularFrequency,
            Tesla | AtomicMagneticField => Dimension::MagneticField,
            VoltPerMeter2 | AtomicFieldGradient => Dimension::FieldGradient,
            One => Dimension::Dimensionless,
        }
    }

    /// Size of one of this unit in the SI unit of its dimension.
    pub fn si_scale(self) -> f64 {
        use Unit::*;
        match self {
            Joule => 1.0,
            Hartree => HARTREE,
            ElectronVolt => ELECTRON_VOLT,
            Meter => 1.0,
            Micrometer => 1e-6,
            Bohr => A0,
            Hertz => 1.0,
            Kilohertz => 1e3,
            Megahertz => 1e6,
            Gigahertz => 1e9,
            RadPerSecond => 1.0,
            AtomicAngularFrequency => HARTREE / HBAR,
            Tesla => 1.0,
            AtomicMagneticField => B_AU,
            VoltPerMeter2 => 1.0,
            AtomicFieldGradient => GRAD_AU,
            One => 1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        use Unit::*;
        match self {
            Joule => "J",
            Hartree => "Eh",
            ElectronVolt => "eV",
            Meter => "m",
            Micrometer => "um",
            Bohr => "a0",
            Hertz => "Hz",
            Kilohertz => "kHz",
            Megahertz => "MHz",
            Gigahertz => "GHz",
            RadPerSecond => "rad/s",
            AtomicAngularFrequency => "Eh/hbar",
            Tesla => "T",
            AtomicMagneticField => "B_au",
            VoltPerMeter2 => "V/m^2",
            AtomicFieldGradient => "grad_au",
            One => "1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum UnitError {
    #[error("no conversion from {from:?} to {to:?}")]
    Incompatible { from: Dimension, to: Dimension },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub unit: Unit,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.value, self.unit.symbol())
    }
}

// SI value of the energy-like dimensions, expressed as joules.
fn to_joule(dim: Dimension, si: f64) -> Option<f64> {
    match dim {
        Dimension::Energy => Some(si),
        Dimension::Frequency => Some(si * H_PLANCK),
        Dimension::AngularFrequency => Some(si * HBAR),
        _ => None,
    }
}

fn from_joule(dim: Dimension, joule: f64) -> Option<f64> {
    match dim {
        Dimension::Energy => Some(joule),
        Dimension::Frequency => Some(joule / H_PLANCK),
        Dimension::AngularFrequency => Some(joule / HBAR),
        _ => None,
    }
}

impl Quantity {
    pub fn new(value: f64, unit: Unit) -> Self {
        Self { value, unit }
    }

    pub fn dimension(&self) -> Dimension {
        self.unit.dimension()
    }

    pub fn si(&self) -> f64 {
        self.value * self.unit.si_scale()
    }

    pub fn convert(&self, target: Unit) -> Result<Quantity, UnitError> {
        convert(*self, target)
    }

    pub fn try_add(self, rhs: Quantity) -> Result<Quantity, UnitError> {
        if self.dimension() != rhs.dimension() {
            return Err(UnitError::Incompatible { from: rhs.dimension(), to: self.dimension() });
        }
        let r = convert(rhs, self.unit)?;
        Ok(Quantity::new(self.value + r.value, self.unit))
    }

    pub fn try_sub(self, rhs: Quantity) -> Result<Quantity, UnitError> {
        self.try_add(Quantity::new(-rhs.value, rhs.unit))
    }

    pub fn scale(self, k: f64) -> Quantity {
        Quantity::new(self.value * k, self.unit)
    }
}

/// Energy, frequency and angular frequency interconvert through h and ħ;
/// every other dimension converts only to itself.
pub fn convert(q: Quantity, target: Unit) -> Result<Quantity, UnitError> {
    let (from, to) = (q.dimension(), target.dimension());
    let si = q.si();
    let si_target = if from == to {
        si
    } else {
        match to_joule(from, si).and_then(|j| from_joule(to, j)) {
            Some(v) => v,
            None => return Err(UnitError::Incompatible { from, to }),
        }
    };
    Ok(Quantity::new(si_target / target.si_scale(), target))
}

/// Angular frequency of an ordinary frequency ν.
pub fn two_pi(nu: f64) -> f64 {
    2.0 * PI * nu
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hartree_in_joule() {
        let q = convert(Quantity::new(1.0, Unit::Hartree), Unit::Joule).unwrap();
        assert!((q.value / 4.3597e-18 - 1.0).abs() < 1e-4);
    }

    #[test]
    fn atomic_field_in_tesla() {
        let q = convert(Quantity::new(1.0, Unit::AtomicMagneticField), Unit::Tesla).unwrap();
        assert!((q.value / 2.3505e5 - 1.0).abs() < 1e-4);
    }

    #[test]
    fn one_megahertz_angular_in_ev() {
        let q = Quantity::new(two_pi(1e6), Unit::RadPerSecond);
        let e = convert(q, Unit::ElectronVolt).unwrap();
        assert!((e.value / 4.1357e-9 - 1.0).abs() < 1e-4);
    }

    #[test]
    fn mismatched_tags_rejected() {
        let b = Quantity::new(1.0, Unit::Tesla);
        assert!(convert(b, Unit::Meter).is_err());
        assert!(b.try_add(Quantity::new(1.0, Unit::Hertz)).is_err());
        let s = Quantity::new(1.0, Unit::Micrometer).try_add(Quantity::new(1.0, Unit::Meter)).unwrap();
        assert!((s.value - 1_000_001.0).abs() < 1e-6);
    }
}
