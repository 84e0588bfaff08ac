//! Dense univariate polynomials over a [`ChainRing`], low degree first.
//!
//! Only what ring construction needs: products, reduction by monic
//! polynomials, and irreducibility testing over finite fields.

use super::{ChainRing, Elem};

pub fn trim(mut a: Vec<Elem>) -> Vec<Elem> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

/// Degree, with `None` for the zero polynomial.
pub fn degree(a: &[Elem]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

pub fn add(ring: &ChainRing, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(Elem::ZERO);
            let y = b.get(i).copied().unwrap_or(Elem::ZERO);
            ring.add(x, y)
        })
        .collect();
    trim(out)
}

pub fn sub(ring: &ChainRing, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let neg: Vec<Elem> = b.iter().map(|&c| ring.neg(c)).collect();
    add(ring, a, &neg)
}

pub fn mul(ring: &ChainRing, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Elem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ring.add(out[i + j], ring.mul(x, y));
        }
    }
    trim(out)
}

/// Remainder modulo a monic polynomial.
pub fn rem_monic(ring: &ChainRing, a: &[Elem], modulus: &[Elem]) -> Vec<Elem> {
    let d = modulus.len() - 1;
    let mut r = a.to_vec();
    while r.len() > d {
        let top = r.len() - 1;
        let c = r[top];
        if !c.is_zero() {
            for (j, &m) in modulus.iter().enumerate() {
                let idx = top - d + j;
                r[idx] = ring.sub(r[idx], ring.mul(c, m));
            }
        }
        r.pop();
    }
    trim(r)
}

/// Remainder over a field, for any nonzero divisor.
pub fn rem_field(field: &ChainRing, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = field.inverse(b[db]).expect("field leading coefficient");
    let monic: Vec<Elem> = b[..=db].iter().map(|&c| field.mul(c, lead_inv)).collect();
    rem_monic(field, a, &monic)
}

pub fn gcd_field(field: &ChainRing, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem_field(field, &x, &y);
        x = y;
        y = r;
    }
    x
}

pub fn mulmod(ring: &ChainRing, a: &[Elem], b: &[Elem], modulus: &[Elem]) -> Vec<Elem> {
    rem_monic(ring, &mul(ring, a, b), modulus)
}

pub fn powmod(ring: &ChainRing, a: &[Elem], mut e: u64, modulus: &[Elem]) -> Vec<Elem> {
    let mut acc = vec![ring.one()];
    let mut base = rem_monic(ring, a, modulus);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(ring, &acc, &base, modulus);
        }
        base = mulmod(ring, &base, &base, modulus);
        e >>= 1;
    }
    trim(acc)
}

pub fn derivative(ring: &ChainRing, a: &[Elem]) -> Vec<Elem> {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| ring.mul(ring.from_int(i as i64), c))
        .collect();
    trim(out)
}

/// Horner evaluation; coefficients and point are elements of `ring`.
pub fn eval(ring: &ChainRing, a: &[Elem], x: Elem) -> Elem {
    a.iter()
        .rev()
        .fold(Elem::ZERO, |acc, &c| ring.add(ring.mul(acc, x), c))
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic polynomial over a finite field.
pub fn is_irreducible(field: &ChainRing, f: &[Elem]) -> bool {
    debug_assert!(field.is_field());
    let Some(d) = degree(f) else { return false };
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let q = field.q();
    let x = vec![Elem::ZERO, field.one()];
    // frob[i] = X^(q^i) mod f
    let mut frob = vec![rem_monic(field, &x, f)];
    for i in 1..=d {
        let next = powmod(field, &frob[i - 1], q, f);
        frob.push(next);
    }
    if frob[d] != rem_monic(field, &x, f) {
        return false;
    }
    prime_divisors(d).into_iter().all(|r| {
        let h = sub(field, &frob[d / r], &x);
        let g = gcd_field(field, f, &h);
        degree(&g) == Some(0)
    })
}

/// Monic polynomials of degree `d` over `ring` in increasing order of their
/// lower coefficients, compared from `X^(d-1)` down to the constant term.
pub fn monic_polynomials(ring: &ChainRing, d: usize) -> impl Iterator<Item = Vec<Elem>> + '_ {
    let n = ring.size() as u64;
    let total = n
        .checked_pow(d as u32)
        .expect("polynomial search space overflow");
    (0..total).map(move |mut idx| {
        let mut coeffs: Vec<Elem> = (0..d)
            .map(|_| {
                let c = Elem((idx % n) as u32);
                idx /= n;
                c
            })
            .collect();
        coeffs.push(ring.one());
        coeffs
    })
}

/// The first monic irreducible polynomial of degree `d` over a field, in
/// the order of [`monic_polynomials`].
pub fn smallest_irreducible(field: &ChainRing, d: usize) -> Vec<Elem> {
    monic_polynomials(field, d)
        .find(|f| is_irreducible(field, f))
        .expect("irreducible polynomials exist in every degree")
}
