//! Finite principal ideal rings as Chinese products `R_1 × … × R_u` of
//! chain rings, with codes handled componentwise.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::codes::{restriction, LinearCode};
use crate::counting::{chain_binomial, omega_bruteforce, omega_formula, AlephSource, Options};
use crate::enumerate::EnumerationPlan;
use crate::error::{Error, Result};
use crate::notation::split_top_level;
use crate::ring::{ChainRing, Elem, GaloisExtension, Layer};

/// An element of a PIR: one coordinate per component.
pub type PirElem = Vec<Elem>;

#[derive(Clone, PartialEq, Eq)]
pub struct PirRing {
    components: Vec<ChainRing>,
    /// `N` when the ring is `Z/N` with one `Z/p^s` component per prime.
    modulus: Option<u64>,
}

impl fmt::Debug for PirRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PirRing({self})")
    }
}

impl fmt::Display for PirRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.len() == 1 {
            return write!(f, "{}", self.components[0]);
        }
        let parts: Vec<&str> = self.components.iter().map(|c| c.label()).collect();
        write!(f, "crt:({})", parts.join(","))
    }
}

fn zmod_modulus(r: &ChainRing) -> Option<u64> {
    match r.layer() {
        Layer::Zmod { modulus } => Some(*modulus as u64),
        _ => None,
    }
}

impl PirRing {
    pub fn new(components: Vec<ChainRing>) -> Result<PirRing> {
        if components.is_empty() {
            return Err(Error::InvalidParameter(
                "a PIR needs at least one component".into(),
            ));
        }
        let mut primes: Vec<u32> = components.iter().map(|c| c.p()).collect();
        primes.sort();
        primes.dedup();
        let modulus = if primes.len() == components.len() {
            components
                .iter()
                .map(zmod_modulus)
                .try_fold(1u64, |acc, m| m.and_then(|m| acc.checked_mul(m)))
        } else {
            None
        };
        Ok(PirRing {
            components,
            modulus,
        })
    }

    pub fn components(&self) -> &[ChainRing] {
        &self.components
    }

    pub fn size(&self) -> BigUint {
        self.components
            .iter()
            .map(|c| BigUint::from(c.size()))
            .product()
    }

    /// `N` for an integer model `Z/N`.
    pub fn integer_modulus(&self) -> Option<u64> {
        self.modulus
    }

    /// `Φ(n) = (n mod m_1, …, n mod m_u)` on the integer model.
    pub fn phi(&self, n: u64) -> Result<PirElem> {
        let big_n = self.require_model()?;
        let n = n % big_n;
        Ok(self
            .components
            .iter()
            .map(|c| c.from_int((n % zmod_modulus(c).expect("integer model")) as i64))
            .collect())
    }

    /// `Φ^{-1}` by the Chinese remainder theorem.
    pub fn phi_inv(&self, x: &[Elem]) -> Result<u64> {
        let big_n = self.require_model()?;
        if x.len() != self.components.len() {
            return Err(Error::Dimension(format!(
                "{} coordinates for {} components",
                x.len(),
                self.components.len()
            )));
        }
        let mut acc: u128 = 0;
        for (c, v) in self.components.iter().zip(x) {
            let m = zmod_modulus(c).expect("integer model") as u128;
            let rest = big_n as u128 / m;
            let inv = mod_inverse((rest % m) as i128, m as i128) as u128;
            acc = (acc + v.0 as u128 * rest % big_n as u128 * inv) % big_n as u128;
        }
        Ok(acc as u64)
    }

    fn require_model(&self) -> Result<u64> {
        self.modulus
            .ok_or_else(|| Error::Precondition(format!("{self} has no integer model Z/N")))
    }
}

fn mod_inverse(a: i128, m: i128) -> i128 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(m)
}

impl FromStr for PirRing {
    type Err = Error;

    /// `crt:(<spec>,<spec>,…)` or a single chain-ring spec.
    fn from_str(text: &str) -> Result<PirRing> {
        let t = text.trim();
        let Some(rest) = t.strip_prefix("crt:") else {
            return PirRing::new(vec![ChainRing::from_spec(t)?]);
        };
        let inner = rest
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected crt:(<spec>,…), got `{t}`")))?;
        let comps = split_top_level(inner, ',')
            .into_iter()
            .map(|s| ChainRing::from_spec(s.trim()))
            .collect::<Result<Vec<_>>>()?;
        PirRing::new(comps)
    }
}

/// `C = CRT(C_1, …, C_u)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PirCode {
    components: Vec<LinearCode>,
}

impl PirCode {
    pub fn components(&self) -> &[LinearCode] {
        &self.components
    }

    pub fn length(&self) -> usize {
        self.components[0].length()
    }

    /// `max_t rank(C_t)`.
    pub fn rank(&self) -> usize {
        self.components.iter().map(|c| c.rank()).max().unwrap_or(0)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.rank()).collect()
    }

    pub fn size(&self) -> BigUint {
        self.components.iter().map(|c| c.size()).product()
    }

    /// All codewords in the integer model, via `Φ^{-1}` coordinatewise.
    pub fn integer_codewords(&self, pir: &PirRing) -> Result<Vec<Vec<u64>>> {
        let mut words: Vec<Vec<PirElem>> = vec![vec![Vec::new(); self.length()]];
        for comp in &self.components {
            let cws = comp.codewords();
            let mut next = Vec::with_capacity(words.len() * cws.len());
            for w in &words {
                for cw in &cws {
                    let mut v = w.clone();
                    for (coord, &x) in v.iter_mut().zip(cw) {
                        coord.push(x);
                    }
                    next.push(v);
                }
            }
            words = next;
        }
        words
            .iter()
            .map(|w| w.iter().map(|x| pir.phi_inv(x)).collect())
            .collect()
    }
}

pub fn crt_combine(pir: &PirRing, components: Vec<LinearCode>) -> Result<PirCode> {
    if components.len() != pir.components.len() {
        return Err(Error::Dimension(format!(
            "{} component codes for {} component rings",
            components.len(),
            pir.components.len()
        )));
    }
    let len = components[0].length();
    for (c, r) in components.iter().zip(&pir.components) {
        if c.ring() != r {
            return Err(Error::RingMismatch(format!(
                "component code over {} for {}",
                c.ring(),
                r
            )));
        }
        if c.length() != len {
            return Err(Error::Dimension(format!(
                "component lengths {} and {len} differ",
                c.length()
            )));
        }
    }
    Ok(PirCode { components })
}

pub fn crt_split(c: &PirCode) -> Vec<LinearCode> {
    c.components.clone()
}

/// The code generated by integer vectors over `Z/N`.
pub fn code_from_integer_rows(pir: &PirRing, length: usize, rows: &[Vec<u64>]) -> Result<PirCode> {
    pir.require_model()?;
    let mut comps = Vec::new();
    for (t, ring) in pir.components.iter().enumerate() {
        let comp_rows = rows
            .iter()
            .map(|row| {
                if row.len() != length {
                    return Err(Error::Dimension(format!(
                        "row of length {} for length {length}",
                        row.len()
                    )));
                }
                row.iter().map(|&n| Ok(pir.phi(n)?[t])).collect()
            })
            .collect::<Result<Vec<Vec<Elem>>>>()?;
        comps.push(LinearCode::from_generators(ring, length, &comp_rows)?);
    }
    crt_combine(pir, comps)
}

/// Free iff every component is free and all ranks agree; returns that rank.
pub fn is_free_pir_code(c: &PirCode) -> (bool, Option<usize>) {
    let ranks = c.ranks();
    let free = c.components.iter().all(|x| x.is_free()) && ranks.windows(2).all(|w| w[0] == w[1]);
    (free, free.then(|| ranks.first().copied().unwrap_or(0)))
}

/// `∏_t [|k k'|]_(q_t, s_t)`.
pub fn pir_chain_binomial(pir: &PirRing, k: u64, kp: u64) -> Result<BigUint> {
    let mut acc = BigUint::one();
    for r in &pir.components {
        acc *= chain_binomial(k, kp, &BigUint::from(r.q()), r.s())?;
    }
    Ok(acc)
}

/// Componentwise Galois extensions of a common degree.
#[derive(Clone, Debug)]
pub struct PirExtension {
    pub pir: PirRing,
    pub degree: usize,
    pub components: Vec<GaloisExtension>,
}

impl PirExtension {
    /// Coefficients of the combined defining polynomial over `Z/N`, low
    /// degree first: the CRT of the component polynomials.
    pub fn integer_modulus_polynomial(&self) -> Result<Vec<u64>> {
        (0..=self.degree)
            .map(|i| {
                let coeffs: Vec<Elem> = self.components.iter().map(|e| e.modulus()[i]).collect();
                self.pir.phi_inv(&coeffs)
            })
            .collect()
    }

    pub fn frobenius(&self, x: &[Elem]) -> PirElem {
        self.components
            .iter()
            .zip(x)
            .map(|(e, &v)| e.frobenius(v))
            .collect()
    }

    pub fn trace(&self, x: &[Elem]) -> PirElem {
        self.components
            .iter()
            .zip(x)
            .map(|(e, &v)| e.trace(v))
            .collect()
    }
}

pub fn pir_galois_extension(pir: &PirRing, m: usize) -> Result<PirExtension> {
    let components = pir
        .components
        .iter()
        .map(|r| GaloisExtension::new(r, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(PirExtension {
        pir: pir.clone(),
        degree: m,
        components,
    })
}

/// `Ω̂ = ∏_t Ω_{R_t}(ℓ, m, k, k')` with its factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaHat {
    #[serde(serialize_with = "as_string")]
    pub value: BigInt,
    #[serde(serialize_with = "vec_as_strings")]
    pub factors: Vec<BigInt>,
    pub source: AlephSource,
}

fn as_string<S: serde::Serializer, T: fmt::Display>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn vec_as_strings<S: serde::Serializer, T: fmt::Display>(
    v: &[T],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

pub fn omega_hat(
    ext: &PirExtension,
    length: usize,
    k: usize,
    kp: usize,
    source: AlephSource,
    opts: &Options,
) -> Result<OmegaHat> {
    let factors = ext
        .components
        .iter()
        .map(|e| omega_formula(e, length, k, kp, source, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(OmegaHat {
        value: factors.iter().product(),
        factors,
        source,
    })
}

/// Histograms of restriction ranks over all free rank-`k` PIR codes.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PirOmega {
    /// Keyed by the PIR rank `max_t rank(Res(B_t))`.
    pub by_max_rank: BTreeMap<usize, BigUint>,
    /// Codes whose restriction is free, keyed by its rank.
    pub by_free_rank: BTreeMap<usize, BigUint>,
    /// Keyed by the tuple of component restriction ranks.
    pub by_rank_tuple: BTreeMap<Vec<usize>, BigUint>,
    pub total: BigUint,
}

/// Iterates every tuple of free rank-`k` component codes (the free PIR
/// codes) and classifies the restriction of each.
pub fn pir_omega_bruteforce(
    ext: &PirExtension,
    length: usize,
    k: usize,
    opts: &Options,
) -> Result<PirOmega> {
    let mut lists: Vec<Vec<LinearCode>> = Vec::new();
    let mut tuples: u128 = 1;
    for e in &ext.components {
        let plan = EnumerationPlan::free_codes(e.ring(), length, k)?.with_guard(opts.guard);
        let res = plan
            .stream()?
            .map(|b| restriction(e, &b))
            .collect::<Result<Vec<_>>>()?;
        tuples = tuples.saturating_mul(res.len() as u128);
        lists.push(res);
    }
    if tuples > opts.guard {
        return Err(Error::GuardExceeded {
            estimated: tuples.to_string(),
            guard: opts.guard,
        });
    }
    let rest = &lists[1..];
    let classify = |first: &LinearCode| {
        let mut local = PirOmega::default();
        let mut idx = vec![0usize; rest.len()];
        loop {
            let mut comps = vec![first.clone()];
            comps.extend(idx.iter().zip(rest).map(|(&i, l)| l[i].clone()));
            let code = crt_combine(&ext.pir, comps).expect("component rings agree");
            let one = BigUint::one();
            *local.by_max_rank.entry(code.rank()).or_default() += &one;
            if let (true, Some(r)) = is_free_pir_code(&code) {
                *local.by_free_rank.entry(r).or_default() += &one;
            }
            *local.by_rank_tuple.entry(code.ranks()).or_default() += &one;
            local.total += one;
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    return local;
                }
                idx[pos] += 1;
                if idx[pos] < rest[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    };
    let merge = |mut a: PirOmega, b: PirOmega| {
        for (k, v) in b.by_max_rank {
            *a.by_max_rank.entry(k).or_default() += v;
        }
        for (k, v) in b.by_free_rank {
            *a.by_free_rank.entry(k).or_default() += v;
        }
        for (k, v) in b.by_rank_tuple {
            *a.by_rank_tuple.entry(k).or_default() += v;
        }
        a.total += b.total;
        a
    };
    let run = || {
        lists[0]
            .par_iter()
            .map(classify)
            .reduce(PirOmega::default, merge)
    };
    if opts.jobs == 0 {
        Ok(run())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
        Ok(pool.install(run))
    }
}

/// Combines per-component restriction-rank histograms into the PIR
/// histogram under the max-rank rule.
pub fn convolve_max_rank(hists: &[BTreeMap<usize, BigUint>]) -> BTreeMap<usize, BigUint> {
    let mut acc: BTreeMap<usize, BigUint> = BTreeMap::from([(0, BigUint::one())]);
    for h in hists {
        let mut next: BTreeMap<usize, BigUint> = BTreeMap::new();
        for (a, x) in &acc {
            for (b, y) in h {
                *next.entry(*a.max(b)).or_default() += x * y;
            }
        }
        acc = next;
    }
    acc
}

/// Per-component histograms of [`omega_bruteforce`].
pub fn component_histograms(
    ext: &PirExtension,
    length: usize,
    k: usize,
    opts: &Options,
) -> Result<Vec<BTreeMap<usize, BigUint>>> {
    ext.components
        .iter()
        .map(|e| omega_bruteforce(e, length, k, opts))
        .collect()
}
