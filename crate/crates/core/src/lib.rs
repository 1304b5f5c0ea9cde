//! Rydberg ions in Penning traps: internal structure in strong magnetic
//! fields, trap and crystal mechanics, microwave-dressed interactions and
//! the resulting spin model.

pub mod angular;
pub mod cli;
pub mod constants;
pub mod crystal;
pub mod dressing;
pub mod internal;
pub mod radial;
pub mod species;
pub mod spin;
pub mod trap;
pub mod units;
