use std::fmt;
use std::str::FromStr;

use super::{is_prime, ChainRing, Family};
use crate::error::{Error, Result};

/// Parsed chain-ring specification:
/// `gf:<q>` | `zps:<p>:<s>` | `gr:<p>:<s>:<n>` | `tp:<q>:<s>`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingSpec {
    pub family: Family,
    pub p: u32,
    pub s: u32,
    pub n: u32,
}

impl RingSpec {
    pub fn build(&self) -> Result<ChainRing> {
        ChainRing::new(self.family, self.p, self.s, self.n)
    }
}

/// Splits a prime power `q` into `(p, n)`.
pub(crate) fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    if !is_prime(p) {
        return None;
    }
    let (mut rest, mut n) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        n += 1;
    }
    (rest == 1).then_some((p as u32, n))
}

fn number(field: &str, what: &str, spec: &str) -> Result<u64> {
    field
        .trim()
        .parse::<u64>()
        .map_err(|_| Error::Parse(format!("bad {what} `{field}` in ring spec `{spec}`")))
}

fn small(v: u64, what: &str) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::Parse(format!("{what} {v} is too large")))
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(spec: &str) -> Result<RingSpec> {
        let parts: Vec<&str> = spec.trim().split(':').collect();
        let not_prime_power =
            |q: u64| Error::Parse(format!("{q} is not a prime power in ring spec `{spec}`"));
        match parts.as_slice() {
            ["gf", q] => {
                let q = number(q, "field size", spec)?;
                let (p, n) = prime_power(q).ok_or_else(|| not_prime_power(q))?;
                Ok(RingSpec {
                    family: Family::GaloisRing,
                    p,
                    s: 1,
                    n,
                })
            }
            ["zps", p, s] => Ok(RingSpec {
                family: Family::GaloisRing,
                p: small(number(p, "prime", spec)?, "prime")?,
                s: small(number(s, "chain length", spec)?, "chain length")?,
                n: 1,
            }),
            ["gr", p, s, n] => Ok(RingSpec {
                family: Family::GaloisRing,
                p: small(number(p, "prime", spec)?, "prime")?,
                s: small(number(s, "chain length", spec)?, "chain length")?,
                n: small(number(n, "degree", spec)?, "degree")?,
            }),
            ["tp", q, s] => {
                let q = number(q, "field size", spec)?;
                let (p, n) = prime_power(q).ok_or_else(|| not_prime_power(q))?;
                Ok(RingSpec {
                    family: Family::TruncatedPoly,
                    p,
                    s: small(number(s, "chain length", spec)?, "chain length")?,
                    n,
                })
            }
            _ => Err(Error::Parse(format!(
                "unrecognised ring spec `{spec}` (expected gf:<q>, zps:<p>:<s>, gr:<p>:<s>:<n> or tp:<q>:<s>)"
            ))),
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::spec_label(self.family, self.p, self.s, self.n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        let gf: RingSpec = "gf:9".parse().unwrap();
        assert_eq!((gf.p, gf.s, gf.n), (3, 1, 2));
        let z: RingSpec = "zps:2:3".parse().unwrap();
        assert_eq!((z.p, z.s, z.n), (2, 3, 1));
        let gr: RingSpec = "gr:2:2:2".parse().unwrap();
        assert_eq!(gr.to_string(), "gr:2:2:2");
        let tp: RingSpec = "tp:4:2".parse().unwrap();
        assert_eq!(
            (tp.family, tp.p, tp.s, tp.n),
            (Family::TruncatedPoly, 2, 2, 2)
        );
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in ["gf:6", "gf:1", "zps:2", "gr:2:2", "foo:1", "tp:x:2", ""] {
            assert!(bad.parse::<RingSpec>().is_err(), "{bad}");
        }
        assert!("zps:4:2".parse::<RingSpec>().unwrap().build().is_err());
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
    }
}
