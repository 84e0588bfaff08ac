use std::fmt;

use super::{ChainRing, Elem};
use crate::error::{Error, Result};

/// An element bundled with its ring handle.
///
/// Binary operations check that both operands live in the same ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    ring: ChainRing,
    value: Elem,
}

/// Result of [`RingElement::arithmetic`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arithmetic {
    pub sum: RingElement,
    pub difference: RingElement,
    pub product: RingElement,
}

impl RingElement {
    pub fn new(ring: ChainRing, value: Elem) -> Self {
        assert!(
            ring.contains(value),
            "element index out of range for {ring}"
        );
        RingElement { ring, value }
    }

    pub fn ring(&self) -> &ChainRing {
        &self.ring
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn coefficients(&self) -> Vec<Elem> {
        self.ring.coefficients(self.value)
    }

    fn same_ring(&self, other: &RingElement) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!(
                "{} and {}",
                self.ring.label(),
                other.ring.label()
            )));
        }
        Ok(())
    }

    fn wrap(&self, value: Elem) -> RingElement {
        RingElement {
            ring: self.ring.clone(),
            value,
        }
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.same_ring(other)?;
        Ok(self.wrap(self.ring.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement> {
        self.same_ring(other)?;
        Ok(self.wrap(self.ring.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement> {
        self.same_ring(other)?;
        Ok(self.wrap(self.ring.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> RingElement {
        self.wrap(self.ring.neg(self.value))
    }

    /// Sum, difference and product in one call.
    pub fn arithmetic(&self, other: &RingElement) -> Result<Arithmetic> {
        Ok(Arithmetic {
            sum: self.add(other)?,
            difference: self.sub(other)?,
            product: self.mul(other)?,
        })
    }

    pub fn valuation(&self) -> u32 {
        self.ring.valuation(self.value)
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(self.value)
    }

    pub fn invert(&self) -> Result<RingElement> {
        self.ring
            .inverse(self.value)
            .map(|v| self.wrap(v))
            .ok_or_else(|| Error::NotAUnit(self.to_string()))
    }

    /// Image under `π` in the residue field.
    pub fn residue(&self) -> RingElement {
        RingElement {
            ring: self.ring.residue_ring(),
            value: self.ring.residue(self.value),
        }
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.ring.label())
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::notation::format_element(&self.ring, self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Family;

    #[test]
    fn f4_counterexample_identities() {
        let f4 = ChainRing::new(Family::GaloisRing, 2, 1, 2).unwrap();
        let alpha = f4.element(f4.generator().unwrap());
        let beta = alpha.mul(&alpha).unwrap();
        let one = f4.element(f4.one());
        let arith = alpha.arithmetic(&beta).unwrap();
        assert_eq!(arith.product, one);
        assert_eq!(arith.sum, one);
        assert_eq!(alpha.invert().unwrap(), beta);
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let z4 = ChainRing::new(Family::GaloisRing, 2, 2, 1).unwrap();
        let f4 = ChainRing::new(Family::GaloisRing, 2, 1, 2).unwrap();
        let a = z4.element(z4.one());
        let b = f4.element(f4.one());
        assert!(matches!(a.add(&b), Err(Error::RingMismatch(_))));
        assert!(matches!(a.arithmetic(&b), Err(Error::RingMismatch(_))));
    }

    #[test]
    fn non_unit_inversion_fails() {
        let z4 = ChainRing::new(Family::GaloisRing, 2, 2, 1).unwrap();
        let two = z4.element(z4.from_int(2));
        assert!(matches!(two.invert(), Err(Error::NotAUnit(_))));
        let three = z4.element(z4.from_int(3));
        assert_eq!(three.invert().unwrap(), three);
    }

    #[test]
    fn residue_examples() {
        let gr = ChainRing::new(Family::GaloisRing, 2, 2, 2).unwrap();
        let xi = gr.generator().unwrap();
        let x = gr.element(gr.add(gr.one(), gr.mul(gr.from_int(2), xi)));
        assert_eq!(x.residue().value(), gr.residue_ring().one());
        assert_eq!(x.residue().ring().q(), 4);
    }
}
