//! Exact arithmetic in the Nottingham group over a prime field F_p and the
//! classification of characters `U₁ → Z/p²Z` of break type `<2,m>` up to
//! weak and strict equivalence.

pub mod characters;
pub mod cli;
pub mod equivalence;
pub mod error;
pub mod fpseries;
pub mod modular;
pub mod nottingham;
pub mod units;
pub mod verify;

pub use characters::{
    act, break_sequence, evaluate, indicator, BreakSequence, Character, Indicator,
};
pub use error::{Error, Result};
pub use fpseries::FpSeries;
pub use nottingham::{Depth, NottinghamElement, PhiImage};
pub use units::UnitExponents;
