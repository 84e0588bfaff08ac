use std::fmt;
use std::sync::Arc;

use super::{poly, ChainRing, Elem, RingElement};
use crate::error::{Error, Result};

/// Largest extension ring for which the Frobenius and trace maps are
/// tabulated in full.
const MAP_LIMIT: u32 = 1 << 16;

struct Inner {
    base: ChainRing,
    ring: ChainRing,
    degree: usize,
    modulus: Vec<Elem>,
    xi: Elem,
    sigma_table: Vec<Elem>,
    sigma_map: Option<Vec<Elem>>,
    trace_map: Option<Vec<Elem>>,
    residue: Option<GaloisExtension>,
}

/// The degree-`m` Galois extension `S = R[X]/(f)` of a chain ring `R`.
///
/// `f` is the digit-wise lift of the smallest monic irreducible polynomial
/// of degree `m` over the residue field. The generator `σ` of `Aut_R(S)` is
/// the lift of the residue Frobenius: `σ(ξ)` is the root of `f` congruent to
/// `ξ^q`, found by Newton iteration.
#[derive(Clone)]
pub struct GaloisExtension(Arc<Inner>);

impl fmt::Debug for GaloisExtension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GaloisExtension({} | {}, m={})",
            self.0.ring, self.0.base, self.0.degree
        )
    }
}

impl PartialEq for GaloisExtension {
    fn eq(&self, other: &Self) -> bool {
        self.0.base == other.0.base && self.0.ring == other.0.ring
    }
}

impl Eq for GaloisExtension {}

impl GaloisExtension {
    pub fn new(base: &ChainRing, degree: usize) -> Result<GaloisExtension> {
        if degree == 0 {
            return Err(Error::InvalidParameter(
                "extension degree must be at least 1".into(),
            ));
        }
        let modulus = if degree == 1 {
            vec![Elem::ZERO, base.one()]
        } else {
            let field = base.residue_ring();
            poly::smallest_irreducible(&field, degree)
                .into_iter()
                .map(|c| base.lift_residue(c))
                .collect()
        };
        let ring = if degree == 1 {
            base.clone()
        } else {
            ChainRing::quotient(base, modulus.clone())
        };
        Self::assemble(base.clone(), ring, modulus)
    }

    fn assemble(base: ChainRing, ring: ChainRing, modulus: Vec<Elem>) -> Result<GaloisExtension> {
        let degree = modulus.len() - 1;
        let residue = if base.is_field() {
            None
        } else {
            let rbase = base.residue_ring();
            let rmod: Vec<Elem> = modulus.iter().map(|&c| base.residue(c)).collect();
            Some(Self::assemble(rbase, ring.residue_ring(), rmod)?)
        };
        let (xi, sigma_table) = if degree == 1 {
            (Elem::ZERO, vec![ring.one()])
        } else {
            let xi = ring.generator().expect("quotient layer has a generator");
            let root = frobenius_root(&ring, &modulus, xi, base.q())?;
            let mut table = Vec::with_capacity(degree);
            let mut acc = ring.one();
            for _ in 0..degree {
                table.push(acc);
                acc = ring.mul(acc, root);
            }
            (xi, table)
        };
        let mut ext = Inner {
            base,
            ring,
            degree,
            modulus,
            xi,
            sigma_table,
            sigma_map: None,
            trace_map: None,
            residue,
        };
        if ext.ring.size() <= MAP_LIMIT {
            let sigma: Vec<Elem> = ext.ring.elements().map(|x| ext.sigma_direct(x)).collect();
            let trace: Vec<Elem> = ext
                .ring
                .elements()
                .map(|x| {
                    let mut acc = Elem::ZERO;
                    let mut y = x;
                    for _ in 0..degree {
                        acc = ext.ring.add(acc, y);
                        y = sigma[y.index()];
                    }
                    acc
                })
                .collect();
            ext.sigma_map = Some(sigma);
            ext.trace_map = Some(trace);
        }
        Ok(GaloisExtension(Arc::new(ext)))
    }

    pub fn base(&self) -> &ChainRing {
        &self.0.base
    }

    /// The extension ring `S`.
    pub fn ring(&self) -> &ChainRing {
        &self.0.ring
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// The defining polynomial `f` over `R`, low degree first, monic.
    pub fn modulus(&self) -> &[Elem] {
        &self.0.modulus
    }

    /// The image `ξ` of `X` in `S`.
    pub fn xi(&self) -> Elem {
        self.0.xi
    }

    /// `σ(ξ^j)` for `j < m`, as elements of `S`.
    pub fn sigma_table(&self) -> &[Elem] {
        &self.0.sigma_table
    }

    /// Free `R`-basis `{1, ξ, …, ξ^(m-1)}` of `S`.
    pub fn basis(&self) -> Vec<Elem> {
        let ring = self.ring();
        let mut out = Vec::with_capacity(self.degree());
        let mut acc = ring.one();
        for _ in 0..self.degree() {
            out.push(acc);
            acc = ring.mul(acc, self.xi());
        }
        out
    }

    /// The extension of residue fields `F_{q^m} | F_q`; `self` when `R` is a
    /// field.
    pub fn residue_extension(&self) -> GaloisExtension {
        self.0.residue.clone().unwrap_or_else(|| self.clone())
    }

    /// Embeds `r ∈ R` into `S`.
    pub fn embed(&self, r: Elem) -> Elem {
        // S = R[X]/(f) encodes r as the constant coefficient, same index.
        r
    }

    /// Whether `x ∈ S` lies in the image of `R`.
    pub fn in_base(&self, x: Elem) -> bool {
        x.0 < self.base().size()
    }

    /// Coordinates of `x` on the basis `{ξ^i}`.
    pub fn coordinates(&self, x: Elem) -> Vec<Elem> {
        if self.degree() == 1 {
            vec![x]
        } else {
            self.ring().coefficients(x)
        }
    }

    pub fn from_coordinates(&self, coords: &[Elem]) -> Elem {
        if self.degree() == 1 {
            coords[0]
        } else {
            self.ring().from_coefficients(coords)
        }
    }

    /// The generator `σ` of `Aut_R(S)`.
    pub fn frobenius(&self, x: Elem) -> Elem {
        match &self.0.sigma_map {
            Some(map) => map[x.index()],
            None => self.0.sigma_direct(x),
        }
    }

    pub fn frobenius_pow(&self, x: Elem, times: usize) -> Elem {
        (0..times % self.degree()).fold(x, |y, _| self.frobenius(y))
    }

    /// `Tr(x) = Σ_ρ ρ(x)` over `Aut_R(S)`, returned as an element of `R`.
    pub fn trace(&self, x: Elem) -> Elem {
        let t = match &self.0.trace_map {
            Some(map) => map[x.index()],
            None => {
                let mut acc = Elem::ZERO;
                let mut y = x;
                for _ in 0..self.degree() {
                    acc = self.ring().add(acc, y);
                    y = self.frobenius(y);
                }
                acc
            }
        };
        debug_assert!(self.in_base(t), "trace left the base ring");
        t
    }

    /// The residue map `π̃ : S → F_{q^m}`.
    pub fn residue(&self, x: Elem) -> Elem {
        self.ring().residue(x)
    }

    fn check(&self, x: &RingElement) -> Result<()> {
        if x.ring() != self.ring() {
            return Err(Error::RingMismatch(format!(
                "element of {} is not in the extension ring {}",
                x.ring(),
                self.ring()
            )));
        }
        Ok(())
    }

    pub fn frobenius_element(&self, x: &RingElement) -> Result<RingElement> {
        self.check(x)?;
        Ok(self.ring().element(self.frobenius(x.value())))
    }

    pub fn trace_element(&self, x: &RingElement) -> Result<RingElement> {
        self.check(x)?;
        Ok(self.base().element(self.trace(x.value())))
    }
}

impl Inner {
    fn sigma_direct(&self, x: Elem) -> Elem {
        if self.degree == 1 {
            return x;
        }
        let coords = self.ring.coefficients(x);
        coords
            .iter()
            .zip(&self.sigma_table)
            .fold(Elem::ZERO, |acc, (&c, &t)| {
                self.ring.add(acc, self.ring.mul(c, t))
            })
    }
}

/// Newton-lifts `ξ^q` to an exact root of `f` in `S`.
fn frobenius_root(ring: &ChainRing, modulus: &[Elem], xi: Elem, q: u64) -> Result<Elem> {
    let deriv = poly::derivative(ring, modulus);
    let mut z = ring.pow(xi, q);
    for _ in 0..=2 * ring.s() + 1 {
        let fz = poly::eval(ring, modulus, z);
        if fz.is_zero() {
            return Ok(z);
        }
        let dz = poly::eval(ring, &deriv, z);
        let inv = ring.inverse(dz).ok_or_else(|| {
            Error::CrossCheck("f'(σ(ξ)) is not a unit; f is not separable".into())
        })?;
        z = ring.sub(z, ring.mul(fz, inv));
    }
    Err(Error::CrossCheck(
        "Newton iteration for the Frobenius root did not converge".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Family;

    fn ext(p: u32, s: u32, n: u32, m: usize) -> GaloisExtension {
        let base = ChainRing::new(Family::GaloisRing, p, s, n).unwrap();
        GaloisExtension::new(&base, m).unwrap()
    }

    #[test]
    fn f4_over_f2() {
        let e = ext(2, 1, 1, 2);
        assert_eq!(e.modulus(), &[Elem(1), Elem(1), Elem(1)]);
        let s = e.ring();
        let alpha = e.xi();
        let beta = s.mul(alpha, alpha);
        assert_eq!(e.frobenius(alpha), beta);
        assert_eq!(e.trace(alpha), Elem(1));
        assert_eq!(e.trace(s.one()), Elem(0));
        assert_eq!(e.trace(Elem::ZERO), Elem::ZERO);
        // Same presentation as gf:4.
        assert_eq!(s, &ChainRing::from_spec("gf:4").unwrap());
    }

    #[test]
    fn degree_one_is_identity() {
        let e = ext(2, 2, 1, 1);
        assert_eq!(e.ring(), e.base());
        for x in e.ring().elements() {
            assert_eq!(e.frobenius(x), x);
            assert_eq!(e.trace(x), x);
        }
    }

    #[test]
    fn zero_degree_rejected() {
        let base = ChainRing::from_spec("gf:2").unwrap();
        assert!(GaloisExtension::new(&base, 0).is_err());
    }

    #[test]
    fn galois_ring_over_z4() {
        let e = ext(2, 2, 1, 2);
        assert_eq!(e.ring(), &ChainRing::from_spec("gr:2:2:2").unwrap());
        let f = e.modulus();
        let res: Vec<Elem> = f.iter().map(|&c| e.base().residue(c)).collect();
        assert!(poly::is_irreducible(&e.base().residue_ring(), &res));
        let root = e.frobenius(e.xi());
        assert!(poly::eval(e.ring(), f, root).is_zero());
    }

    /// σ automorphism, order m, fixes R; trace invariance and the residue
    /// compatibility square, checked on every element.
    #[test]
    fn automorphism_and_trace_properties() {
        let cases = [
            ext(2, 1, 1, 2),
            ext(2, 1, 1, 3),
            ext(3, 1, 1, 2),
            ext(2, 2, 1, 2),
            ext(2, 1, 2, 2),
            ext(3, 2, 1, 2),
            ext(2, 3, 1, 2),
            ext(2, 2, 2, 2),
            {
                let tp = ChainRing::from_spec("tp:2:2").unwrap();
                GaloisExtension::new(&tp, 2).unwrap()
            },
        ];
        for e in cases {
            let s = e.ring();
            assert!(s.size() <= 256);
            let m = e.degree();
            let mut image: Vec<Elem> = s.elements().map(|x| e.frobenius(x)).collect();
            for x in s.elements() {
                assert_eq!(e.frobenius_pow(x, m), x);
                let mut y = x;
                for _ in 0..m {
                    y = e.frobenius(y);
                }
                assert_eq!(y, x, "σ^m = id in {s:?}");
                for z in s.elements() {
                    assert_eq!(
                        e.frobenius(s.mul(x, z)),
                        s.mul(e.frobenius(x), e.frobenius(z))
                    );
                    assert_eq!(
                        e.frobenius(s.add(x, z)),
                        s.add(e.frobenius(x), e.frobenius(z))
                    );
                }
                assert_eq!(e.trace(e.frobenius(x)), e.trace(x));
                let re = e.residue_extension();
                assert_eq!(e.base().residue(e.trace(x)), re.trace(e.residue(x)));
                // Residue Frobenius is the q-th power map.
                assert_eq!(
                    s.residue(e.frobenius(x)),
                    re.ring().pow(s.residue(x), e.base().q())
                );
            }
            for r in e.base().elements() {
                assert_eq!(e.frobenius(e.embed(r)), e.embed(r));
            }
            image.sort();
            image.dedup();
            assert_eq!(image.len(), s.size() as usize, "σ bijective");
            // Trace is onto R.
            let mut traces: Vec<Elem> = s.elements().map(|x| e.trace(x)).collect();
            traces.sort();
            traces.dedup();
            assert_eq!(traces.len(), e.base().size() as usize);
        }
    }

    #[test]
    fn order_of_sigma_is_exactly_m() {
        let e = ext(2, 1, 1, 3);
        let xi = e.xi();
        assert_ne!(e.frobenius(xi), xi);
        assert_ne!(e.frobenius_pow(xi, 2), xi);
    }

    #[test]
    fn large_extension_without_tables() {
        // GR(4, 8): 65536 elements sits at the tabulation limit; GR(8,6) does not.
        let base = ChainRing::from_spec("zps:2:3").unwrap();
        let e = GaloisExtension::new(&base, 6).unwrap();
        assert!(e.ring().size() > MAP_LIMIT);
        let x = e.ring().add(e.xi(), e.ring().from_int(3));
        let mut y = x;
        for _ in 0..6 {
            y = e.frobenius(y);
        }
        assert_eq!(y, x);
        assert!(e.in_base(e.trace(x)));
    }
}
