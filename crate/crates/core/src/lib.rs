//! Linear codes over finite chain rings, their Galois extensions and finite
//! principal ideal rings.
//!
//! The crate evaluates the classical counting formulas for free codes with
//! prescribed subring-subcode rank and checks each of them against
//! exhaustive enumeration at small sizes.

pub mod codes;
pub mod counting;
pub mod enumerate;
pub mod error;
pub mod modlin;
pub mod notation;
pub mod pir;
pub mod ring;
pub mod verify;

pub use error::{Error, Result};
pub use ring::{Arithmetic, ChainRing, Elem, Family, GaloisExtension, RingElement, RingSpec};
