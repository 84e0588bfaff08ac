//! Invariants of codes over Galois extensions, on random generator sets.

use std::collections::HashSet;

use num_bigint::BigUint;
use proptest::prelude::*;
use ringcount::codes::{
    conjugate, decompose, extension, is_galois_invariant, restriction, restriction_by_duality,
    restriction_by_intersection, trace_code, trace_image, LinearCode,
};
use ringcount::enumerate::{enum_free_codes, read_cache, write_cache, EnumerationPlan};
use ringcount::{ChainRing, Elem, Error, GaloisExtension};

const EXTENSIONS: [(&str, usize); 6] = [
    ("gf:2", 2),
    ("gf:2", 3),
    ("gf:3", 2),
    ("zps:2:2", 2),
    ("tp:2:2", 2),
    ("gf:4", 2),
];

fn ext(i: usize) -> GaloisExtension {
    let (spec, m) = EXTENSIONS[i];
    GaloisExtension::new(&ChainRing::from_spec(spec).unwrap(), m).unwrap()
}

fn rows(ring: &ChainRing, raw: &[Vec<u32>]) -> Vec<Vec<Elem>> {
    let n = ring.size();
    raw.iter()
        .map(|r| r.iter().map(|&x| Elem(x % n)).collect())
        .collect()
}

fn setup() -> impl Strategy<Value = (usize, usize, Vec<Vec<u32>>)> {
    (0..EXTENSIONS.len(), 1usize..=3).prop_flat_map(|(e, len)| {
        (
            Just(e),
            Just(len),
            prop::collection::vec(prop::collection::vec(any::<u32>(), len), 0..=3),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn frobenius_and_trace((e, _len, raw) in setup()) {
        let ext = ext(e);
        let s = ext.ring();
        for x in raw.iter().flatten().map(|&x| Elem(x % s.size())) {
            prop_assert_eq!(ext.frobenius_pow(x, ext.degree()), x);
            prop_assert!(ext.in_base(ext.trace(x)));
            let y = ext.frobenius(s.add(x, s.one()));
            prop_assert_eq!(y, s.add(ext.frobenius(x), s.one()));
            prop_assert_eq!(ext.from_coordinates(&ext.coordinates(x)), x);
        }
    }

    #[test]
    fn duality_and_sizes((e, len, raw) in setup()) {
        let ext = ext(e);
        let s = ext.ring();
        let b = LinearCode::from_generators(s, len, &rows(s, &raw)).unwrap();
        let d = b.dual();
        prop_assert_eq!(d.dual(), b.clone());
        prop_assert_eq!(
            b.size() * d.size(),
            BigUint::from(s.size()).pow(len as u32)
        );
        for g in b.generators() {
            prop_assert!(b.contains(&g).unwrap());
        }
    }

    #[test]
    fn restriction_routes_agree((e, len, raw) in setup()) {
        let ext = ext(e);
        let s = ext.ring();
        let b = LinearCode::from_generators(s, len, &rows(s, &raw)).unwrap();
        let res = restriction(&ext, &b).unwrap();
        prop_assert_eq!(&res, &restriction_by_intersection(&ext, &b).unwrap());
        prop_assert_eq!(&res, &restriction_by_duality(&ext, &b).unwrap());
        prop_assert!(extension(&ext, &res).unwrap().is_subcode_of(&b).unwrap());
        prop_assert_eq!(trace_code(&ext, &b).unwrap().dual(), restriction(&ext, &b.dual()).unwrap());
        if b.size() <= BigUint::from(2048u32) {
            prop_assert_eq!(trace_code(&ext, &b).unwrap(), trace_image(&ext, &b).unwrap());
            let embedded: HashSet<Vec<Elem>> = res
                .codewords()
                .into_iter()
                .map(|w| w.into_iter().map(|x| ext.embed(x)).collect())
                .collect();
            let in_base: HashSet<Vec<Elem>> = b
                .codewords()
                .into_iter()
                .filter(|w| w.iter().all(|&x| ext.in_base(x)))
                .collect();
            prop_assert_eq!(embedded, in_base);
        }
    }

    #[test]
    fn extension_then_restriction((e, len, raw) in setup()) {
        let ext = ext(e);
        let r = ext.base();
        let c = LinearCode::from_generators(r, len, &rows(r, &raw)).unwrap();
        let lifted = extension(&ext, &c).unwrap();
        prop_assert_eq!(restriction(&ext, &lifted).unwrap(), c.clone());
        prop_assert_eq!(lifted.rank(), c.rank());
        prop_assert!(is_galois_invariant(&ext, &lifted).unwrap());
        prop_assert_eq!(trace_code(&ext, &lifted).unwrap(), c);
    }

    #[test]
    fn conjugation_and_decomposition((e, len, raw) in setup()) {
        let ext = ext(e);
        let s = ext.ring();
        let b = LinearCode::from_generators(s, len, &rows(s, &raw)).unwrap();
        let mut c = b.clone();
        for _ in 0..ext.degree() {
            c = conjugate(&ext, &c).unwrap();
        }
        prop_assert_eq!(&c, &b);
        if b.is_free() && !is_galois_invariant(&ext, &b).unwrap() {
            if !restriction(&ext, &b).unwrap().is_free() {
                prop_assert!(!ext.base().is_field());
                prop_assert!(matches!(decompose(&ext, &b), Err(Error::Precondition(_))));
                return Ok(());
            }
            let (b0, b1) = decompose(&ext, &b).unwrap();
            prop_assert_eq!(&b0, &extension(&ext, &restriction(&ext, &b).unwrap()).unwrap());
            prop_assert_eq!(b0.rank() + b1.rank(), b.rank());
            prop_assert!(b1.is_free());
            prop_assert_eq!(b0.sum(&b1).unwrap(), b.clone());
            prop_assert!(b0.intersection(&b1).unwrap().is_zero());
            prop_assert!(restriction(&ext, &b1).unwrap().is_zero());
        }
    }
}

#[test]
fn enumeration_is_canonical_and_complete() {
    for (spec, m) in EXTENSIONS {
        let ring = GaloisExtension::new(&ChainRing::from_spec(spec).unwrap(), m)
            .unwrap()
            .ring()
            .clone();
        for len in 0..=2usize {
            for k in 0..=len {
                let plan = EnumerationPlan::free_codes(&ring, len, k).unwrap();
                let codes: Vec<LinearCode> = enum_free_codes(&ring, len, k).unwrap().collect();
                assert_eq!(codes.len() as u128, plan.len());
                let distinct: HashSet<&LinearCode> = codes.iter().collect();
                assert_eq!(distinct.len(), codes.len(), "{ring} {len} {k}");
                for c in &codes {
                    assert!(c.is_free() && c.rank() == k);
                    let again = LinearCode::from_generators(&ring, len, &c.generators()).unwrap();
                    assert_eq!(&again, c);
                }
                let pieces: Vec<LinearCode> = plan
                    .split(3)
                    .iter()
                    .flat_map(|p| p.stream().unwrap())
                    .collect();
                assert_eq!(pieces, codes);
            }
        }
    }
}

#[test]
fn cache_round_trip() {
    let ring = GaloisExtension::new(&ChainRing::from_spec("zps:2:2").unwrap(), 2)
        .unwrap()
        .ring()
        .clone();
    let dir = tempfile::tempdir().unwrap();
    let plan = EnumerationPlan::free_codes(&ring, 2, 1).unwrap();
    let path = write_cache(dir.path(), &plan).unwrap();
    let (header, codes) = read_cache(&path).unwrap();
    assert_eq!(header.count, plan.len());
    let direct: Vec<LinearCode> = plan.stream().unwrap().collect();
    assert_eq!(codes, direct);
}
