//! Linear codes over a chain ring and the code-level maps between a ring
//! `R` and a Galois extension `S`: trace codes, subring subcodes,
//! extension codes and the `B = B0 ⊕ B1` splitting of non-invariant codes.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modlin::{self, standard_form, Pivot, RingMatrix, StandardForm};
use crate::ring::{ChainRing, Elem, GaloisExtension};

/// A submodule of `ring^length`, held by its canonical generator matrix.
///
/// Equality, hashing and ordering go through the canonical form, so two
/// codes compare equal exactly when they have the same codewords.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearCode {
    form: StandardForm,
}

impl LinearCode {
    pub fn from_generators(ring: &ChainRing, length: usize, rows: &[Vec<Elem>]) -> Result<Self> {
        let m = RingMatrix::from_rows(ring, length, rows)?;
        Ok(Self::from_matrix(&m))
    }

    pub fn from_matrix(m: &RingMatrix) -> Self {
        LinearCode {
            form: standard_form(m),
        }
    }

    /// Wraps a form that is already canonical.
    pub(crate) fn from_form(form: StandardForm) -> Self {
        LinearCode { form }
    }

    pub fn zero(ring: &ChainRing, length: usize) -> Self {
        Self::from_matrix(&RingMatrix::zeros(ring, 0, length))
    }

    pub fn full(ring: &ChainRing, length: usize) -> Self {
        Self::from_matrix(&RingMatrix::identity(ring, length))
    }

    pub fn ring(&self) -> &ChainRing {
        self.form.matrix().ring()
    }

    pub fn length(&self) -> usize {
        self.form.matrix().cols()
    }

    pub fn rank(&self) -> usize {
        self.form.rank()
    }

    pub fn is_free(&self) -> bool {
        self.form.is_free()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn pivots(&self) -> &[Pivot] {
        self.form.pivots()
    }

    pub fn form(&self) -> &StandardForm {
        &self.form
    }

    pub fn generator_matrix(&self) -> &RingMatrix {
        self.form.matrix()
    }

    pub fn generators(&self) -> Vec<Vec<Elem>> {
        self.form.matrix().row_vecs()
    }

    /// Number of codewords, `∏ q^(s − a_i)`.
    pub fn size(&self) -> BigUint {
        BigUint::from(self.ring().q()).pow(self.form.log_q_size() as u32)
    }

    pub fn contains(&self, word: &[Elem]) -> Result<bool> {
        modlin::in_span(self.form.matrix(), word)
    }

    fn check_compatible(&self, other: &LinearCode) -> Result<()> {
        if self.ring() != other.ring() {
            return Err(Error::RingMismatch(format!(
                "{} and {}",
                self.ring(),
                other.ring()
            )));
        }
        if self.length() != other.length() {
            return Err(Error::Dimension(format!(
                "codes of length {} and {}",
                self.length(),
                other.length()
            )));
        }
        Ok(())
    }

    pub fn is_subcode_of(&self, other: &LinearCode) -> Result<bool> {
        self.check_compatible(other)?;
        for g in self.generators() {
            if !other.contains(&g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every codeword, each exactly once.
    pub fn codewords(&self) -> Vec<Vec<Elem>> {
        let r = self.ring();
        let s = r.s();
        let g = self.form.matrix();
        let choices: Vec<Vec<Elem>> = self
            .pivots()
            .iter()
            .map(|p| {
                r.elements()
                    .filter(|&c| r.mod_theta_pow(c, s - p.exp) == c)
                    .collect()
            })
            .collect();
        let mut out = vec![vec![Elem::ZERO; self.length()]];
        for (i, cs) in choices.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * cs.len());
            for w in &out {
                for &c in cs {
                    let mut v = w.clone();
                    modlin::axpy(r, &mut v, c, g.row(i));
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    /// `B^⊥` under the standard dot product.
    pub fn dual(&self) -> LinearCode {
        Self::from_matrix(&modlin::kernel(self.form.matrix()))
    }

    pub fn sum(&self, other: &LinearCode) -> Result<LinearCode> {
        self.check_compatible(other)?;
        let m = self.form.matrix().stack(other.form.matrix())?;
        Ok(Self::from_matrix(&m))
    }

    pub fn intersection(&self, other: &LinearCode) -> Result<LinearCode> {
        Ok(self.dual().sum(&other.dual())?.dual())
    }

    /// Entrywise image of the generators under `f`, as a code over `ring`.
    pub fn map_entries(&self, ring: &ChainRing, f: impl Fn(Elem) -> Elem) -> LinearCode {
        Self::from_matrix(&self.form.matrix().map(ring, f))
    }

    pub fn to_record(&self) -> CodeRecord {
        let (spec, degree) = ring_descriptor(self.ring());
        let r = self.ring();
        CodeRecord {
            ring: spec,
            degree,
            length: self.length(),
            rows: self
                .generators()
                .iter()
                .map(|row| row.iter().map(|&x| r.digits(x)).collect())
                .collect(),
        }
    }

    pub fn from_record(rec: &CodeRecord) -> Result<LinearCode> {
        let ring = ring_from_descriptor(&rec.ring, rec.degree)?;
        Self::from_record_in(&ring, rec)
    }

    /// Decodes a record whose ring is already built.
    pub fn from_record_in(ring: &ChainRing, rec: &CodeRecord) -> Result<LinearCode> {
        let (spec, degree) = ring_descriptor(ring);
        if spec != rec.ring || degree != rec.degree {
            return Err(Error::RingMismatch(format!(
                "record over {}^{} read into {}^{}",
                rec.ring, rec.degree, spec, degree
            )));
        }
        let rows = rec
            .rows
            .iter()
            .map(|row| row.iter().map(|d| ring.from_digits(d)).collect())
            .collect::<Result<Vec<Vec<Elem>>>>()?;
        Self::from_generators(ring, rec.length, &rows)
    }
}

impl PartialOrd for LinearCode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LinearCode {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ring()
            .key()
            .cmp(other.ring().key())
            .then(self.length().cmp(&other.length()))
            .then_with(|| self.pivots().cmp(other.pivots()))
            .then_with(|| self.form.matrix().data().cmp(other.form.matrix().data()))
    }
}

impl fmt::Display for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.form.matrix();
        let rows: Vec<String> = (0..m.rows())
            .map(|i| crate::notation::format_vector(self.ring(), m.row(i)))
            .collect();
        write!(f, "<{}>", rows.join(","))
    }
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over {}^{}", self.ring(), self.length())
    }
}

/// Serialized code: ring spec, extension degree, length and generator rows
/// with each entry given by its little-endian digit list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeRecord {
    pub ring: String,
    pub degree: usize,
    pub length: usize,
    pub rows: Vec<Vec<Vec<u32>>>,
}

/// `(spec, degree)` naming a ring: extensions are named by their base.
pub fn ring_descriptor(ring: &ChainRing) -> (String, usize) {
    match ring.extension_of() {
        Some((base, m)) => (base.label().to_string(), m),
        None => (ring.label().to_string(), 1),
    }
}

pub fn ring_from_descriptor(spec: &str, degree: usize) -> Result<ChainRing> {
    let base = ChainRing::from_spec(spec)?;
    if degree == 1 {
        return Ok(base);
    }
    Ok(GaloisExtension::new(&base, degree)?.ring().clone())
}

fn require_over(ring: &ChainRing, code: &LinearCode, what: &str) -> Result<()> {
    if code.ring() != ring {
        return Err(Error::RingMismatch(format!(
            "{what} expects a code over {}, got one over {}",
            ring,
            code.ring()
        )));
    }
    Ok(())
}

/// `Tr(B)`: the `R`-code generated by `Tr(α_i · g_j)` for the basis `α_i`
/// of `S` over `R` and the generators `g_j` of `B`.
pub fn trace_code(ext: &GaloisExtension, b: &LinearCode) -> Result<LinearCode> {
    require_over(ext.ring(), b, "trace_code")?;
    let s = ext.ring();
    let mut rows = Vec::new();
    for g in b.generators() {
        for alpha in ext.basis() {
            rows.push(
                g.iter()
                    .map(|&x| ext.trace(s.mul(alpha, x)))
                    .collect::<Vec<Elem>>(),
            );
        }
    }
    LinearCode::from_generators(ext.base(), b.length(), &rows)
}

/// `Tr(B)` as the literal image of all codewords.
pub fn trace_image(ext: &GaloisExtension, b: &LinearCode) -> Result<LinearCode> {
    require_over(ext.ring(), b, "trace_image")?;
    let rows: Vec<Vec<Elem>> = b
        .codewords()
        .into_iter()
        .map(|w| w.into_iter().map(|x| ext.trace(x)).collect())
        .collect();
    let code = LinearCode::from_generators(ext.base(), b.length(), &rows)?;
    debug_assert_eq!(code.size(), {
        let mut set: Vec<Vec<Elem>> = rows.clone();
        set.sort();
        set.dedup();
        BigUint::from(set.len())
    });
    Ok(code)
}

/// `B ∩ R^ℓ` as the intersection of `B`, viewed as an `R`-module inside
/// `R^(mℓ)`, with the first-coordinate copy of `R^ℓ`.
pub fn restriction_by_intersection(ext: &GaloisExtension, b: &LinearCode) -> Result<LinearCode> {
    require_over(ext.ring(), b, "restriction")?;
    let (s, r) = (ext.ring(), ext.base());
    let (m, len) = (ext.degree(), b.length());
    let mut rows = Vec::new();
    for g in b.generators() {
        for alpha in ext.basis() {
            let row: Vec<Elem> = g
                .iter()
                .flat_map(|&x| ext.coordinates(s.mul(alpha, x)))
                .collect();
            rows.push(row);
        }
    }
    let big = RingMatrix::from_rows(r, m * len, &rows)?;
    let h = modlin::kernel(&big);
    let h0: Vec<Vec<Elem>> = h
        .row_vecs()
        .into_iter()
        .map(|row| (0..len).map(|c| row[c * m]).collect())
        .collect();
    let h0 = RingMatrix::from_rows(r, len, &h0)?;
    Ok(LinearCode::from_matrix(&modlin::kernel(&h0)))
}

/// `B ∩ R^ℓ` through duality: `Tr(B^⊥)^⊥`.
pub fn restriction_by_duality(ext: &GaloisExtension, b: &LinearCode) -> Result<LinearCode> {
    Ok(trace_code(ext, &b.dual())?.dual())
}

/// `Res_R(B) = B ∩ R^ℓ`, computed both ways and cross-checked.
pub fn restriction(ext: &GaloisExtension, b: &LinearCode) -> Result<LinearCode> {
    let direct = restriction_by_intersection(ext, b)?;
    let dual = restriction_by_duality(ext, b)?;
    if direct != dual {
        return Err(Error::CrossCheck(format!(
            "restriction of {b:?}: intersection gives {direct:?}, duality gives {dual:?}"
        )));
    }
    Ok(direct)
}

/// `Ext_S(C)`: the `S`-span of an `R`-code.
pub fn extension(ext: &GaloisExtension, c: &LinearCode) -> Result<LinearCode> {
    require_over(ext.base(), c, "extension")?;
    Ok(c.map_entries(ext.ring(), |x| ext.embed(x)))
}

/// `σ(B)`, coordinatewise.
pub fn conjugate(ext: &GaloisExtension, b: &LinearCode) -> Result<LinearCode> {
    require_over(ext.ring(), b, "conjugate")?;
    Ok(b.map_entries(ext.ring(), |x| ext.frobenius(x)))
}

pub fn is_galois_invariant(ext: &GaloisExtension, b: &LinearCode) -> Result<bool> {
    Ok(&conjugate(ext, b)? == b)
}

pub fn sum_codes(b: &LinearCode, d: &LinearCode) -> Result<LinearCode> {
    b.sum(d)
}

/// Splits a free, non-Galois-invariant `B` as `B0 ⊕ B1` with
/// `B0 = Ext(Res(B))` and `Res(B1) = 0`. Over a non-field base `Res(B)`
/// can fail to be free, which is rejected.
///
/// `B1` is built greedily: codewords of `B` are scanned in lexicographic
/// order of their coefficient vectors over the canonical generators, and
/// the first one whose residue is independent of the current span is
/// adjoined.
pub fn decompose(ext: &GaloisExtension, b: &LinearCode) -> Result<(LinearCode, LinearCode)> {
    require_over(ext.ring(), b, "decompose")?;
    if !b.is_free() {
        return Err(Error::Precondition(format!("{b:?} is not free")));
    }
    if is_galois_invariant(ext, b)? {
        return Err(Error::Precondition(format!("{b:?} is Galois invariant")));
    }
    let s = ext.ring();
    let res = s.residue_ring();
    let res_b = restriction(ext, b)?;
    if !res_b.is_free() {
        return Err(Error::Precondition(format!(
            "Res(B) = {res_b:?} is not free, so Ext(Res(B)) has no free complement in {b:?}"
        )));
    }
    let b0 = extension(ext, &res_b)?;

    let residue_rank = |rows: &[Vec<Elem>]| -> Result<usize> {
        let reduced: Vec<Vec<Elem>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| s.residue(x)).collect())
            .collect();
        Ok(standard_form(&RingMatrix::from_rows(&res, b.length(), &reduced)?).rank())
    };

    let gens = b.generators();
    let k = gens.len();
    let size = s.size() as u128;
    let mut span = b0.generators();
    let mut span_rank = residue_rank(&span)?;
    let mut chosen = Vec::new();
    let total = size
        .checked_pow(k as u32)
        .ok_or_else(|| Error::GuardExceeded {
            estimated: format!("{}^{k}", s.size()),
            guard: u128::MAX,
        })?;
    let mut idx: u128 = 1;
    while span_rank < k {
        if idx >= total {
            return Err(Error::CrossCheck(format!(
                "no complement found for {b0:?} inside {b:?}"
            )));
        }
        let mut rest = idx;
        let mut coeffs = vec![Elem::ZERO; k];
        for c in coeffs.iter_mut().rev() {
            *c = Elem((rest % size) as u32);
            rest /= size;
        }
        idx += 1;
        let y = RingMatrix::from_rows(s, k, &[coeffs])?
            .mul(b.generator_matrix())?
            .row(0)
            .to_vec();
        span.push(y.clone());
        let rank = residue_rank(&span)?;
        if rank > span_rank {
            span_rank = rank;
            chosen.push(y);
        } else {
            span.pop();
        }
    }
    let b1 = LinearCode::from_generators(s, b.length(), &chosen)?;
    Ok((b0, b1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_rows;

    fn f4_ext() -> GaloisExtension {
        GaloisExtension::new(&ChainRing::from_spec("gf:2").unwrap(), 2).unwrap()
    }

    fn code(ring: &ChainRing, text: &str) -> LinearCode {
        let rows = parse_rows(ring, text).unwrap();
        let len = rows[0].len();
        LinearCode::from_generators(ring, len, &rows).unwrap()
    }

    #[test]
    fn counterexample_code() {
        let ext = f4_ext();
        let c = code(ext.ring(), "(1,0,a);(0,1,b)");
        assert_eq!((c.rank(), c.is_free()), (2, true));
        assert_eq!(c.codewords().len(), 16);
        let res = restriction(&ext, &c).unwrap();
        assert_eq!(res, code(ext.base(), "(1,1,1)"));
        assert_eq!(c.dual(), code(ext.ring(), "(a,b,1)"));
        assert!(!is_galois_invariant(&ext, &c).unwrap());
        let (b0, b1) = decompose(&ext, &c).unwrap();
        assert_eq!(b0, code(ext.ring(), "(1,1,1)"));
        assert_eq!(b1.rank(), 1);
        assert!(restriction(&ext, &b1).unwrap().is_zero());
        assert_eq!(b0.sum(&b1).unwrap(), c);
    }

    #[test]
    fn trace_codes_over_f4() {
        let ext = f4_ext();
        let f2 = ext.base();
        let b = code(ext.ring(), "(1,a)");
        assert_eq!(trace_code(&ext, &b).unwrap(), LinearCode::full(f2, 2));
        let b = code(ext.ring(), "(1,1)");
        assert_eq!(trace_code(&ext, &b).unwrap(), code(f2, "(1,1)"));
        assert_eq!(trace_image(&ext, &b).unwrap(), code(f2, "(1,1)"));
        assert!(restriction(&ext, &code(ext.ring(), "(1,a)"))
            .unwrap()
            .is_zero());
        let zero = LinearCode::zero(ext.ring(), 2);
        assert!(trace_code(&ext, &zero).unwrap().is_zero());
    }

    #[test]
    fn non_free_and_zero_codes() {
        let z4 = ChainRing::from_spec("zps:2:2").unwrap();
        let c = code(&z4, "(2,0);(0,2)");
        assert_eq!((c.rank(), c.is_free()), (2, false));
        assert_eq!(c.size(), BigUint::from(4u32));
        assert_eq!(c.dual(), c);
        let zero = LinearCode::zero(&z4, 3);
        assert_eq!(zero.dual(), LinearCode::full(&z4, 3));
        assert_eq!(LinearCode::full(&z4, 3).dual(), zero);
    }

    #[test]
    fn sums_and_preconditions() {
        let ext = f4_ext();
        let s = ext.ring();
        let a = code(s, "(1,a)");
        let b = code(s, "(1,b)");
        assert_eq!(a.sum(&b).unwrap(), LinearCode::full(s, 2));
        assert_eq!(a.sum(&a).unwrap(), a);
        let e = extension(&ext, &code(ext.base(), "(1,1,1)")).unwrap();
        assert!(is_galois_invariant(&ext, &e).unwrap());
        assert!(matches!(decompose(&ext, &e), Err(Error::Precondition(_))));
        let (b0, b1) = decompose(&ext, &a).unwrap();
        assert!(b0.is_zero());
        assert_eq!(b1, a);
        assert!(matches!(
            trace_code(&ext, &code(ext.base(), "(1,1)")),
            Err(Error::RingMismatch(_))
        ));
    }

    #[test]
    fn records_round_trip() {
        let ext = f4_ext();
        let c = code(ext.ring(), "(1,0,a);(0,1,b)");
        let rec = c.to_record();
        assert_eq!((rec.ring.as_str(), rec.degree, rec.length), ("gf:2", 2, 3));
        let json = serde_json::to_string(&rec).unwrap();
        let back: CodeRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(LinearCode::from_record(&back).unwrap(), c);
    }
}
