//! Finite chain rings.
//!
//! Every ring is presented as a tower of layers over a base `Z/p^s`:
//!
//! * `Zmod`: `Z/p^s` itself, uniformizer `p`;
//! * `Truncated`: `F_q[u]/(u^s)` over a field layer, uniformizer `u`;
//! * `Quotient`: `B[X]/(f)` for a monic basic irreducible `f` over a chain
//!   ring `B`; the uniformizer is inherited from `B`.
//!
//! Elements are small integers: the mixed-radix encoding of the canonical
//! coefficient vector, so equality of elements is equality of coefficient
//! vectors. Every layer is additively a sum of copies of one cyclic group
//! `Z/M` (`M = p^s` for Galois rings, `M = p` for truncated rings), which
//! makes the flattened "digit" vector of an element a base-`M` expansion of
//! its index. Rings with at most 256 elements cache full operation tables.

mod element;
mod extension;
pub mod poly;
mod spec;

pub use element::{Arithmetic, RingElement};
pub use extension::GaloisExtension;
pub use spec::RingSpec;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest ring for which full operation tables are cached.
const TABLE_LIMIT: u32 = 256;
/// Largest ring the element encoding accepts.
const SIZE_LIMIT: u64 = 1 << 28;

/// An element of a [`ChainRing`], encoded as the index of its coefficient
/// vector. The encoding only has meaning together with its ring.
#[derive(
    Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The two supported families of finite chain rings.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `GR(p^s, n)`: includes every `F_q` (s = 1) and every `Z/p^s` (n = 1).
    GaloisRing,
    /// `F_q[u]/(u^s)`.
    TruncatedPoly,
}

pub(crate) enum Layer {
    Zmod { modulus: u32 },
    Truncated { field: ChainRing },
    Quotient { base: ChainRing, modulus: Vec<Elem> },
}

struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

const NO_INVERSE: u16 = u16::MAX;

struct Inner {
    family: Family,
    p: u32,
    s: u32,
    n: u32,
    q: u64,
    size: u32,
    layer: Layer,
    residue: Option<ChainRing>,
    theta: Elem,
    key: String,
    label: String,
    extension_of: Option<(ChainRing, usize)>,
    digit_modulus: u32,
    digit_count: u32,
    tables: OnceLock<Option<Tables>>,
}

/// Handle to an immutable finite chain ring with invariants `(q, s)`.
///
/// Handles are cheap to clone and safe to share between threads. Two handles
/// compare equal when they present the same ring (same tower, same moduli).
#[derive(Clone)]
pub struct ChainRing(Arc<Inner>);

impl PartialEq for ChainRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.key == other.0.key
    }
}

impl Eq for ChainRing {}

impl Hash for ChainRing {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.key.hash(state);
    }
}

impl fmt::Debug for ChainRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainRing({})", self.0.label)
    }
}

impl fmt::Display for ChainRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.label)
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

fn spec_label(family: Family, p: u32, s: u32, n: u32) -> String {
    let q = (p as u64).pow(n);
    match family {
        Family::GaloisRing if s == 1 => format!("gf:{q}"),
        Family::GaloisRing if n == 1 => format!("zps:{p}:{s}"),
        Family::GaloisRing => format!("gr:{p}:{s}:{n}"),
        Family::TruncatedPoly => format!("tp:{q}:{s}"),
    }
}

impl ChainRing {
    /// Builds `GR(p^s, n)` or `F_{p^n}[u]/(u^s)`.
    ///
    /// The defining polynomial of degree `n` is the smallest monic
    /// polynomial (coefficients compared from the top degree down) whose
    /// residue is irreducible; for Galois rings it is the digit-wise lift of
    /// the smallest irreducible polynomial over `F_p`.
    pub fn new(family: Family, p: u32, s: u32, n: u32) -> Result<ChainRing> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        if s == 0 || n == 0 {
            return Err(Error::InvalidParameter(
                "chain length s and residue degree n must be at least 1".into(),
            ));
        }
        let total = checked_pow(p as u64, s.saturating_mul(n))
            .filter(|&t| t <= SIZE_LIMIT)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "ring with {p}^({s}*{n}) elements exceeds the supported size"
                ))
            })?;
        debug_assert!(total <= SIZE_LIMIT);
        let label = spec_label(family, p, s, n);
        match family {
            Family::GaloisRing => {
                let base = ChainRing::zmod(p, s, family);
                if n == 1 {
                    return Ok(base.relabel(label));
                }
                let ext = GaloisExtension::new(&base, n as usize)?;
                Ok(ext.ring().relabel_root(label))
            }
            Family::TruncatedPoly => {
                let field = ChainRing::new(Family::GaloisRing, p, 1, n)?;
                if s == 1 {
                    return Ok(field.with_family(Family::TruncatedPoly, label));
                }
                Ok(ChainRing::truncated(field, s, label))
            }
        }
    }

    /// Parses a ring specification (`gf:q`, `zps:p:s`, `gr:p:s:n`, `tp:q:s`).
    pub fn from_spec(spec: &str) -> Result<ChainRing> {
        let spec: RingSpec = spec.parse()?;
        spec.build()
    }

    fn zmod(p: u32, s: u32, family: Family) -> ChainRing {
        let modulus = p.pow(s);
        let residue = (s > 1).then(|| ChainRing::zmod(p, 1, Family::GaloisRing));
        ChainRing(Arc::new(Inner {
            family,
            p,
            s,
            n: 1,
            q: p as u64,
            size: modulus,
            layer: Layer::Zmod { modulus },
            residue,
            theta: Elem(p % modulus),
            key: format!("Z{modulus}"),
            label: spec_label(Family::GaloisRing, p, s, 1),
            extension_of: None,
            digit_modulus: modulus,
            digit_count: 1,
            tables: OnceLock::new(),
        }))
    }

    fn truncated(field: ChainRing, s: u32, label: String) -> ChainRing {
        let size = field.size().pow(s);
        ChainRing(Arc::new(Inner {
            family: Family::TruncatedPoly,
            p: field.p(),
            s,
            n: field.n(),
            q: field.q(),
            size,
            theta: Elem(field.size()),
            key: format!("{}[u]/(u^{s})", field.key()),
            label,
            extension_of: None,
            digit_modulus: field.digit_modulus(),
            digit_count: field.digit_count() * s,
            residue: Some(field.clone()),
            layer: Layer::Truncated { field },
            tables: OnceLock::new(),
        }))
    }

    /// `base[X]/(modulus)` for a monic `modulus` whose residue is irreducible.
    pub(crate) fn quotient(base: &ChainRing, modulus: Vec<Elem>) -> ChainRing {
        let degree = modulus.len() - 1;
        debug_assert!(degree >= 1);
        debug_assert_eq!(modulus[degree], base.one());
        let residue = (base.s() > 1).then(|| {
            let rbase = base.residue_ring();
            let rmod = modulus.iter().map(|&c| base.residue(c)).collect();
            ChainRing::quotient(&rbase, rmod)
        });
        let coeffs: Vec<String> = modulus.iter().map(|c| c.0.to_string()).collect();
        let key = format!("{}[X]/({})", base.key(), coeffs.join(","));
        let label = format!("ext({},{})", base.label(), degree);
        ChainRing(Arc::new(Inner {
            family: base.family(),
            p: base.p(),
            s: base.s(),
            n: base.n() * degree as u32,
            q: base.q().pow(degree as u32),
            size: base.size().pow(degree as u32),
            theta: base.theta(),
            key,
            label,
            extension_of: Some((base.clone(), degree)),
            digit_modulus: base.digit_modulus(),
            digit_count: base.digit_count() * degree as u32,
            residue,
            layer: Layer::Quotient {
                base: base.clone(),
                modulus,
            },
            tables: OnceLock::new(),
        }))
    }

    fn rebuild(&self, family: Family, label: String, keep_extension: bool) -> ChainRing {
        let inner = &self.0;
        let layer = match &inner.layer {
            Layer::Zmod { modulus } => Layer::Zmod { modulus: *modulus },
            Layer::Truncated { field } => Layer::Truncated {
                field: field.clone(),
            },
            Layer::Quotient { base, modulus } => Layer::Quotient {
                base: base.clone(),
                modulus: modulus.clone(),
            },
        };
        ChainRing(Arc::new(Inner {
            family,
            p: inner.p,
            s: inner.s,
            n: inner.n,
            q: inner.q,
            size: inner.size,
            layer,
            residue: inner.residue.clone(),
            theta: inner.theta,
            key: inner.key.clone(),
            label,
            extension_of: if keep_extension {
                inner.extension_of.clone()
            } else {
                None
            },
            digit_modulus: inner.digit_modulus,
            digit_count: inner.digit_count,
            tables: OnceLock::new(),
        }))
    }

    fn relabel(&self, label: String) -> ChainRing {
        self.rebuild(self.family(), label, true)
    }

    /// A named ring is a root: it is not reported as an extension of its
    /// presentation base.
    fn relabel_root(&self, label: String) -> ChainRing {
        let ring = self.rebuild(self.family(), label, false);
        match ring.0.residue.clone() {
            Some(res) if res.extension_of().is_some() => {
                let res_label = spec_label(Family::GaloisRing, ring.p(), 1, ring.n());
                let res = res.relabel_root(res_label);
                let mut inner = Arc::try_unwrap(ring.0).ok().expect("fresh handle");
                inner.residue = Some(res);
                ChainRing(Arc::new(inner))
            }
            _ => ring,
        }
    }

    fn with_family(&self, family: Family, label: String) -> ChainRing {
        self.rebuild(family, label, false)
    }

    pub(crate) fn layer(&self) -> &Layer {
        &self.0.layer
    }

    pub fn family(&self) -> Family {
        self.0.family
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    /// Nilpotency index of the maximal ideal.
    pub fn s(&self) -> u32 {
        self.0.s
    }

    /// Degree of the residue field over `F_p`.
    pub fn n(&self) -> u32 {
        self.0.n
    }

    /// Residue field size.
    pub fn q(&self) -> u64 {
        self.0.q
    }

    pub fn size(&self) -> u32 {
        self.0.size
    }

    pub fn is_field(&self) -> bool {
        self.0.s == 1
    }

    /// Structural identity of the presentation.
    pub fn key(&self) -> &str {
        &self.0.key
    }

    /// Ring specification string, or `ext(<base>,<m>)` for extension rings.
    pub fn label(&self) -> &str {
        &self.0.label
    }

    /// `(R, m)` when this ring was built as the degree-`m` Galois extension
    /// of `R`.
    pub fn extension_of(&self) -> Option<(&ChainRing, usize)> {
        self.0.extension_of.as_ref().map(|(r, m)| (r, *m))
    }

    pub fn digit_modulus(&self) -> u32 {
        self.0.digit_modulus
    }

    pub fn digit_count(&self) -> u32 {
        self.0.digit_count
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.size()).map(Elem)
    }

    pub fn element(&self, value: Elem) -> RingElement {
        RingElement::new(self.clone(), value)
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        self.from_int(1)
    }

    /// The distinguished uniformizer `θ`; zero in a field.
    pub fn theta(&self) -> Elem {
        self.0.theta
    }

    pub fn contains(&self, x: Elem) -> bool {
        x.0 < self.size()
    }

    pub fn from_int(&self, value: i64) -> Elem {
        match &self.0.layer {
            Layer::Zmod { modulus } => Elem(value.rem_euclid(*modulus as i64) as u32),
            Layer::Truncated { field } => field.from_int(value),
            Layer::Quotient { base, .. } => base.from_int(value),
        }
    }

    /// Generator of the top layer: `X` for a quotient layer, `u` for a
    /// truncated layer, `None` for `Z/p^s`.
    pub fn generator(&self) -> Option<Elem> {
        match &self.0.layer {
            Layer::Zmod { .. } => None,
            Layer::Truncated { field } => Some(Elem(field.size())),
            Layer::Quotient { base, .. } => Some(Elem(base.size())),
        }
    }

    /// Coefficients of `x` in the top layer (over the layer base).
    pub fn coefficients(&self, x: Elem) -> Vec<Elem> {
        match &self.0.layer {
            Layer::Zmod { .. } => vec![x],
            Layer::Truncated { field } => split_radix(x.0, field.size(), self.s() as usize),
            Layer::Quotient { base, modulus } => split_radix(x.0, base.size(), modulus.len() - 1),
        }
    }

    pub fn from_coefficients(&self, coeffs: &[Elem]) -> Elem {
        match &self.0.layer {
            Layer::Zmod { .. } => coeffs[0],
            Layer::Truncated { field } => join_radix(coeffs, field.size()),
            Layer::Quotient { base, .. } => join_radix(coeffs, base.size()),
        }
    }

    /// Little-endian base-`digit_modulus` digits of `x`.
    pub fn digits(&self, x: Elem) -> Vec<u32> {
        let m = self.digit_modulus();
        let mut v = x.0;
        (0..self.digit_count())
            .map(|_| {
                let d = v % m;
                v /= m;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<Elem> {
        let m = self.digit_modulus();
        if digits.len() != self.digit_count() as usize || digits.iter().any(|&d| d >= m) {
            return Err(Error::Parse(format!(
                "expected {} digits below {m} for an element of {}",
                self.digit_count(),
                self.label()
            )));
        }
        let mut v: u32 = 0;
        for &d in digits.iter().rev() {
            v = v * m + d;
        }
        Ok(Elem(v))
    }

    fn tables(&self) -> Option<&Tables> {
        self.0
            .tables
            .get_or_init(|| (self.size() <= TABLE_LIMIT).then(|| self.build_tables()))
            .as_ref()
    }

    fn build_tables(&self) -> Tables {
        let n = self.size() as usize;
        let mut add = vec![0u16; n * n];
        let mut mul = vec![0u16; n * n];
        let mut neg = vec![0u16; n];
        let mut inv = vec![NO_INVERSE; n];
        let one = self.one();
        for a in 0..n {
            neg[a] = self.neg_slow(Elem(a as u32)).0 as u16;
            for b in 0..n {
                add[a * n + b] = self.add_slow(Elem(a as u32), Elem(b as u32)).0 as u16;
                let prod = self.mul_slow(Elem(a as u32), Elem(b as u32));
                mul[a * n + b] = prod.0 as u16;
                if prod == one {
                    inv[a] = b as u16;
                }
            }
        }
        Tables { add, mul, neg, inv }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match self.tables() {
            Some(t) => Elem(t.add[a.index() * self.size() as usize + b.index()] as u32),
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        match self.tables() {
            Some(t) => Elem(t.neg[a.index()] as u32),
            None => self.neg_slow(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match self.tables() {
            Some(t) => Elem(t.mul[a.index() * self.size() as usize + b.index()] as u32),
            None => self.mul_slow(a, b),
        }
    }

    pub fn pow(&self, x: Elem, mut e: u64) -> Elem {
        let mut acc = self.one();
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn add_slow(&self, a: Elem, b: Elem) -> Elem {
        if let Layer::Zmod { modulus } = self.0.layer {
            return Elem((a.0 + b.0) % modulus);
        }
        let m = self.digit_modulus();
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        for i in 0..self.digit_count() {
            out += ((x % m + y % m) % m) * place;
            x /= m;
            y /= m;
            if i + 1 < self.digit_count() {
                place *= m;
            }
        }
        Elem(out)
    }

    pub(crate) fn neg_slow(&self, a: Elem) -> Elem {
        let m = self.digit_modulus();
        let (mut x, mut out, mut place) = (a.0, 0u32, 1u32);
        for i in 0..self.digit_count() {
            out += ((m - x % m) % m) * place;
            x /= m;
            if i + 1 < self.digit_count() {
                place *= m;
            }
        }
        Elem(out)
    }

    pub(crate) fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.layer {
            Layer::Zmod { modulus } => Elem(((a.0 as u64 * b.0 as u64) % *modulus as u64) as u32),
            Layer::Truncated { field } => {
                let s = self.s() as usize;
                let x = self.coefficients(a);
                let y = self.coefficients(b);
                let mut out = vec![Elem::ZERO; s];
                for i in 0..s {
                    if x[i].is_zero() {
                        continue;
                    }
                    for j in 0..s - i {
                        out[i + j] = field.add(out[i + j], field.mul(x[i], y[j]));
                    }
                }
                self.from_coefficients(&out)
            }
            Layer::Quotient { base, modulus } => {
                let x = self.coefficients(a);
                let y = self.coefficients(b);
                let prod = poly::mul(base, &x, &y);
                let mut r = poly::rem_monic(base, &prod, modulus);
                r.resize(modulus.len() - 1, Elem::ZERO);
                self.from_coefficients(&r)
            }
        }
    }

    /// Largest `i` with `x ∈ (θ^i)`; `valuation(0) = s`.
    pub fn valuation(&self, x: Elem) -> u32 {
        if x.is_zero() {
            return self.s();
        }
        match &self.0.layer {
            Layer::Zmod { .. } => {
                let p = self.p();
                let (mut v, mut k) = (x.0, 0);
                while v % p == 0 {
                    v /= p;
                    k += 1;
                }
                k
            }
            Layer::Truncated { .. } => self
                .coefficients(x)
                .iter()
                .position(|c| !c.is_zero())
                .map_or(self.s(), |i| i as u32),
            Layer::Quotient { base, .. } => self
                .coefficients(x)
                .into_iter()
                .map(|c| base.valuation(c))
                .min()
                .unwrap_or(self.s()),
        }
    }

    pub fn is_unit(&self, x: Elem) -> bool {
        self.valuation(x) == 0
    }

    pub fn inverse(&self, x: Elem) -> Option<Elem> {
        if let Some(t) = self.tables() {
            let v = t.inv[x.index()];
            return (v != NO_INVERSE).then_some(Elem(v as u32));
        }
        if !self.is_unit(x) {
            return None;
        }
        if let Layer::Zmod { modulus } = self.0.layer {
            return Some(Elem(mod_inverse(x.0 as i64, modulus as i64) as u32));
        }
        let q = self.q();
        let order = q.pow(self.s() - 1) * (q - 1);
        Some(self.pow(x, order - 1))
    }

    /// `θ^a`; zero once `a ≥ s`.
    pub fn theta_pow(&self, a: u32) -> Elem {
        if a >= self.s() {
            return Elem::ZERO;
        }
        match &self.0.layer {
            Layer::Zmod { .. } => Elem(self.p().pow(a)),
            Layer::Truncated { field } => Elem(field.size().pow(a)),
            Layer::Quotient { base, .. } => base.theta_pow(a),
        }
    }

    /// The canonical `w` with `θ^a · w = x`, for `x` of valuation at least
    /// `a`. The result is reduced below `θ^(s-a)`.
    pub fn div_theta_pow(&self, x: Elem, a: u32) -> Elem {
        if a == 0 {
            return x;
        }
        debug_assert!(self.valuation(x) >= a);
        if a >= self.s() {
            return Elem::ZERO;
        }
        match &self.0.layer {
            Layer::Zmod { .. } => Elem(x.0 / self.p().pow(a)),
            Layer::Truncated { .. } => {
                let c = self.coefficients(x);
                let s = self.s() as usize;
                let shifted: Vec<Elem> = (0..s)
                    .map(|i| c.get(i + a as usize).copied().unwrap_or(Elem::ZERO))
                    .collect();
                self.from_coefficients(&shifted)
            }
            Layer::Quotient { base, .. } => {
                let c: Vec<Elem> = self
                    .coefficients(x)
                    .into_iter()
                    .map(|c| base.div_theta_pow(c, a))
                    .collect();
                self.from_coefficients(&c)
            }
        }
    }

    /// Canonical representative of `x` modulo `θ^a`.
    pub fn mod_theta_pow(&self, x: Elem, a: u32) -> Elem {
        if a >= self.s() {
            return x;
        }
        match &self.0.layer {
            Layer::Zmod { .. } => Elem(x.0 % self.p().pow(a)),
            Layer::Truncated { .. } => {
                let mut c = self.coefficients(x);
                for v in c.iter_mut().skip(a as usize) {
                    *v = Elem::ZERO;
                }
                self.from_coefficients(&c)
            }
            Layer::Quotient { base, .. } => {
                let c: Vec<Elem> = self
                    .coefficients(x)
                    .into_iter()
                    .map(|c| base.mod_theta_pow(c, a))
                    .collect();
                self.from_coefficients(&c)
            }
        }
    }

    /// The residue field `R/(θ)`.
    pub fn residue_ring(&self) -> ChainRing {
        self.0.residue.clone().unwrap_or_else(|| self.clone())
    }

    /// The canonical projection `π` onto the residue field.
    pub fn residue(&self, x: Elem) -> Elem {
        if self.is_field() {
            return x;
        }
        match &self.0.layer {
            Layer::Zmod { .. } => Elem(x.0 % self.p()),
            Layer::Truncated { field } => Elem(x.0 % field.size()),
            Layer::Quotient { base, .. } => {
                let c: Vec<Elem> = self
                    .coefficients(x)
                    .into_iter()
                    .map(|c| base.residue(c))
                    .collect();
                self.residue_ring().from_coefficients(&c)
            }
        }
    }

    /// Digit-wise section of `π`: the smallest-index element with residue `y`.
    pub fn lift_residue(&self, y: Elem) -> Elem {
        if self.is_field() {
            return y;
        }
        match &self.0.layer {
            Layer::Zmod { .. } | Layer::Truncated { .. } => y,
            Layer::Quotient { base, .. } => {
                let c: Vec<Elem> = self
                    .residue_ring()
                    .coefficients(y)
                    .into_iter()
                    .map(|c| base.lift_residue(c))
                    .collect();
                self.from_coefficients(&c)
            }
        }
    }

    /// Elements of the ideal `(θ^a)`, in increasing index order.
    pub fn ideal_elements(&self, a: u32) -> Vec<Elem> {
        self.elements()
            .filter(|&x| self.valuation(x) >= a)
            .collect()
    }
}

fn split_radix(mut v: u32, radix: u32, len: usize) -> Vec<Elem> {
    (0..len)
        .map(|_| {
            let d = v % radix;
            v /= radix;
            Elem(d)
        })
        .collect()
}

fn join_radix(coeffs: &[Elem], radix: u32) -> Elem {
    let mut v: u32 = 0;
    for c in coeffs.iter().rev() {
        v = v * radix + c.0;
    }
    Elem(v)
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    let (mut old_r, mut r) = (a, m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gr(p: u32, s: u32, n: u32) -> ChainRing {
        ChainRing::new(Family::GaloisRing, p, s, n).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert!(ChainRing::new(Family::GaloisRing, 4, 1, 1).is_err());
        assert!(ChainRing::new(Family::GaloisRing, 2, 0, 1).is_err());
        assert!(ChainRing::new(Family::TruncatedPoly, 3, 1, 0).is_err());
        assert!(ChainRing::new(Family::GaloisRing, 2, 40, 1).is_err());
    }

    #[test]
    fn small_rings_have_expected_sizes() {
        let f4 = gr(2, 1, 2);
        assert_eq!((f4.q(), f4.s(), f4.size()), (4, 1, 4));
        assert_eq!(f4.label(), "gf:4");
        let z4 = gr(2, 2, 1);
        assert_eq!((z4.size(), z4.theta()), (4, Elem(2)));
        assert_eq!(z4.label(), "zps:2:2");
        let gr42 = gr(2, 2, 2);
        assert_eq!(gr42.size(), 16);
        assert_eq!(gr42.residue_ring().size(), 4);
        assert_eq!(gr42.label(), "gr:2:2:2");
    }

    #[test]
    fn theta_chain_by_enumeration() {
        for ring in [
            gr(2, 2, 2),
            gr(3, 2, 1),
            gr(2, 3, 1),
            ChainRing::new(Family::TruncatedPoly, 2, 3, 1).unwrap(),
            ChainRing::new(Family::TruncatedPoly, 2, 2, 2).unwrap(),
        ] {
            let s = ring.s();
            let q = ring.q() as usize;
            let theta = ring.theta();
            assert!(ring.pow(theta, s as u64).is_zero());
            assert!(!ring.pow(theta, s as u64 - 1).is_zero());
            for i in 0..=s {
                // The ideal generated by θ^i, as the set of multiples.
                let t = ring.theta_pow(i);
                let mut ideal: Vec<Elem> = ring.elements().map(|x| ring.mul(x, t)).collect();
                ideal.sort();
                ideal.dedup();
                assert_eq!(ideal.len(), q.pow(s - i), "{ring} ideal θ^{i}");
                assert_eq!(ideal, ring.ideal_elements(i));
            }
        }
    }

    #[test]
    fn z4_arithmetic() {
        let z4 = gr(2, 2, 1);
        let two = Elem(2);
        assert_eq!(z4.add(two, two), Elem(0));
        assert_eq!(z4.mul(two, two), Elem(0));
        assert_eq!(z4.inverse(Elem(3)), Some(Elem(3)));
        assert_eq!(z4.inverse(two), None);
        assert_eq!(z4.valuation(two), 1);
        assert_eq!(z4.valuation(Elem(0)), 2);
        assert_eq!(z4.residue(Elem(3)), Elem(1));
        assert_eq!(z4.residue(two), Elem(0));
    }

    #[test]
    fn gr42_examples() {
        let r = gr(2, 2, 2);
        let xi = r.generator().unwrap();
        let two = r.from_int(2);
        let two_xi = r.mul(two, xi);
        assert_eq!(r.valuation(two_xi), 1);
        assert_eq!(r.mul(r.theta(), r.theta()), Elem::ZERO);
        let u = r.add(r.one(), two_xi);
        assert_eq!(r.inverse(u), Some(u));
        assert_eq!(r.mul(u, u), r.one());
        assert_eq!(r.residue(u), r.residue_ring().one());
    }

    #[test]
    fn tables_agree_with_structural_arithmetic() {
        let r = ChainRing::new(Family::TruncatedPoly, 2, 2, 2).unwrap();
        for a in r.elements() {
            for b in r.elements() {
                assert_eq!(r.add(a, b), r.add_slow(a, b));
                assert_eq!(r.mul(a, b), r.mul_slow(a, b));
            }
            assert_eq!(r.neg(a), r.neg_slow(a));
        }
    }

    #[test]
    fn unit_iff_nonzero_residue() {
        for ring in [gr(2, 2, 2), gr(3, 2, 1), gr(2, 3, 1)] {
            for x in ring.elements() {
                let unit = ring.inverse(x).is_some();
                assert_eq!(unit, !ring.residue(x).is_zero());
                if let Some(y) = ring.inverse(x) {
                    assert_eq!(ring.mul(x, y), ring.one());
                }
            }
        }
    }

    #[test]
    fn untabled_inverse_uses_unit_group_order() {
        // 4096 elements: no tables.
        let r = gr(2, 3, 4);
        assert!(r.size() > TABLE_LIMIT);
        let x = r.add(r.one(), r.generator().unwrap());
        let y = r.inverse(x).unwrap();
        assert_eq!(r.mul(x, y), r.one());
        assert_eq!(r.inverse(r.theta()), None);
    }

    #[test]
    fn theta_division_and_reduction() {
        let r = gr(2, 3, 1);
        assert_eq!(r.div_theta_pow(Elem(4), 2), Elem(1));
        assert_eq!(r.mod_theta_pow(Elem(7), 2), Elem(3));
        let t = ChainRing::new(Family::TruncatedPoly, 3, 3, 1).unwrap();
        let u = t.theta();
        let x = t.add(t.mul(u, u), t.mul(t.from_int(2), u));
        assert_eq!(t.valuation(x), 1);
        let w = t.div_theta_pow(x, 1);
        assert_eq!(t.mul(u, w), x);
        assert_eq!(t.mod_theta_pow(x, 2), t.mul(t.from_int(2), u));
    }

    #[test]
    fn digits_round_trip() {
        let r = gr(3, 2, 2);
        for x in r.elements() {
            assert_eq!(r.from_digits(&r.digits(x)).unwrap(), x);
        }
        assert!(r.from_digits(&[9, 0]).is_err());
    }
}
