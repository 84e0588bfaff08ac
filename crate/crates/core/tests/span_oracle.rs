//! Canonical forms and the submodule enumeration against brute-force
//! closure of generating sets.

use std::collections::{BTreeSet, HashSet};

use proptest::prelude::*;
use ringcount::enumerate::enum_all_submodules;
use ringcount::modlin::{smith_form, standard_form, RingMatrix};
use ringcount::{ChainRing, Elem};

fn closure(ring: &ChainRing, len: usize, gens: &[Vec<Elem>]) -> BTreeSet<Vec<Elem>> {
    let mut seen: BTreeSet<Vec<Elem>> = BTreeSet::new();
    let zero = vec![Elem::ZERO; len];
    seen.insert(zero.clone());
    let mut frontier = vec![zero];
    while let Some(v) = frontier.pop() {
        for g in gens {
            for c in ring.elements() {
                let w: Vec<Elem> = v
                    .iter()
                    .zip(g)
                    .map(|(&a, &b)| ring.add(a, ring.mul(c, b)))
                    .collect();
                if seen.insert(w.clone()) {
                    frontier.push(w);
                }
            }
        }
    }
    seen
}

fn vectors(ring: &ChainRing, len: usize) -> Vec<Vec<Elem>> {
    let n = ring.size() as usize;
    (0..n.pow(len as u32))
        .map(|mut i| {
            (0..len)
                .map(|_| {
                    let d = i % n;
                    i /= n;
                    Elem(d as u32)
                })
                .collect()
        })
        .collect()
}

const SMALL: [&str; 6] = ["gf:2", "gf:3", "gf:4", "zps:2:2", "zps:3:2", "tp:2:2"];

#[test]
fn enumeration_equals_spans_of_generator_tuples() {
    for (spec, len) in [
        ("gf:2", 3),
        ("gf:3", 2),
        ("gf:4", 2),
        ("zps:2:2", 2),
        ("zps:2:3", 2),
        ("zps:3:2", 2),
        ("tp:2:2", 2),
        ("gr:2:2:2", 1),
        ("zps:2:2", 3),
    ] {
        let ring = ChainRing::from_spec(spec).unwrap();
        let vs = vectors(&ring, len);
        let mut spans = HashSet::new();
        // every submodule of R^len is generated by at most len vectors
        let tuples: Vec<Vec<Vec<Elem>>> = match len {
            1 => vs.iter().map(|a| vec![a.clone()]).collect(),
            2 => vs
                .iter()
                .flat_map(|a| vs.iter().map(move |b| vec![a.clone(), b.clone()]))
                .collect(),
            _ => {
                let mut out = Vec::new();
                for a in &vs {
                    for b in &vs {
                        for c in &vs {
                            out.push(vec![a.clone(), b.clone(), c.clone()]);
                        }
                    }
                }
                out
            }
        };
        for t in tuples {
            let m = RingMatrix::from_rows(&ring, len, &t).unwrap();
            spans.insert(standard_form(&m));
        }
        let listed: Vec<_> = enum_all_submodules(&ring, len)
            .unwrap()
            .map(|c| c.form().clone())
            .collect();
        let unique: HashSet<_> = listed.iter().cloned().collect();
        assert_eq!(unique.len(), listed.len(), "{spec}: duplicates");
        assert_eq!(unique, spans, "{spec}^{len}");
    }
}

fn ring_and_matrix() -> impl Strategy<Value = (ChainRing, RingMatrix)> {
    (0..SMALL.len(), 1usize..=3, 1usize..=3).prop_flat_map(|(i, rows, cols)| {
        let ring = ChainRing::from_spec(SMALL[i]).unwrap();
        let n = ring.size();
        prop::collection::vec(0..n, rows * cols).prop_map(move |entries| {
            let data: Vec<Vec<Elem>> = entries
                .chunks(cols)
                .map(|c| c.iter().map(|&x| Elem(x)).collect())
                .collect();
            let m = RingMatrix::from_rows(&ring, cols, &data).unwrap();
            (ring.clone(), m)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn standard_form_spans_and_is_idempotent((ring, m) in ring_and_matrix()) {
        let sf = standard_form(&m);
        let a = closure(&ring, m.cols(), &m.row_vecs());
        let b = closure(&ring, m.cols(), &sf.matrix().row_vecs());
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(&standard_form(sf.matrix()), &sf);
        prop_assert_eq!(a.len() as u64, ring.q().pow(sf.log_q_size() as u32));
    }

    #[test]
    fn free_rank_is_residue_rank((ring, m) in ring_and_matrix()) {
        let res = ring.residue_ring();
        let reduced = m.map(&res, |x| ring.residue(x));
        prop_assert_eq!(standard_form(&m).free_rank(), standard_form(&reduced).rank());
    }

    #[test]
    fn smith_matches_standard_form((_ring, m) in ring_and_matrix()) {
        let sm = smith_form(&m);
        prop_assert_eq!(sm.u.mul(&m).unwrap().mul(&sm.v).unwrap(), sm.d.clone());
        let mut a = sm.exponents.clone();
        let mut b: Vec<u32> = standard_form(&m).pivots().iter().map(|p| p.exp).collect();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
        // U and V are invertible: their standard forms are the identity
        prop_assert_eq!(standard_form(&sm.u).free_rank(), m.rows());
        prop_assert_eq!(standard_form(&sm.v).free_rank(), m.cols());
    }

    #[test]
    fn kernel_and_solve((ring, m) in ring_and_matrix(), pick in any::<prop::sample::Index>()) {
        let k = ringcount::modlin::kernel(&m);
        let span = closure(&ring, m.cols(), &m.row_vecs());
        let all = vectors(&ring, m.cols());
        let dot = |x: &[Elem], y: &[Elem]| x.iter().zip(y).fold(Elem::ZERO, |acc, (&a, &b)| ring.add(acc, ring.mul(a, b)));
        let expected: BTreeSet<Vec<Elem>> = all
            .iter()
            .filter(|x| m.row_vecs().iter().all(|r| dot(x, r).is_zero()))
            .cloned()
            .collect();
        prop_assert_eq!(closure(&ring, m.cols(), &k.row_vecs()), expected);
        let b = &all[pick.index(all.len())];
        let sol = ringcount::modlin::solve(&m, b).unwrap();
        prop_assert_eq!(sol.is_some(), span.contains(b));
        if let Some(x) = sol {
            prop_assert_eq!(&m.left_mul(&x).unwrap(), b);
        }
    }
}
