//! The verification suites: each criterion recomputes its claims from
//! scratch and reports pass or fail with a short log.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::time::Instant;

use num_bigint::{BigInt, BigUint};

use crate::codes::{
    decompose, extension, is_galois_invariant, restriction, restriction_by_duality,
    restriction_by_intersection, trace_code, trace_image, LinearCode,
};
use crate::counting::{
    chain_binomial, comparison_report, gaussian_binomial, kappa, minimal_full_trace_codes,
    minimal_full_trace_exhaustive, omega_bruteforce, AlephSource, CountReport, Options, Verdict,
};
use crate::enumerate::{enum_free_subcodes, EnumerationPlan};
use crate::error::{Error, Result};
use crate::modlin::standard_form;
use crate::notation::parse_rows;
use crate::pir::{
    code_from_integer_rows, component_histograms, convolve_max_rank, crt_combine, crt_split,
    is_free_pir_code, omega_hat, pir_chain_binomial, pir_galois_extension, pir_omega_bruteforce,
    PirRing,
};
use crate::ring::{poly, ChainRing, Elem, GaloisExtension};

/// Outcome of one criterion.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub log: Vec<String>,
    pub seconds: f64,
}

pub const CRITERIA: [(u8, &str); 9] = [
    (1, "counterexample reproduction"),
    (2, "subcode-count theorem"),
    (3, "Delsarte identity"),
    (4, "minimality theorems"),
    (5, "decomposition theorem"),
    (6, "histogram partition identity"),
    (7, "Lyle refutation detected"),
    (8, "formula-vs-oracle report matrix"),
    (9, "CRT/PIR layer"),
];

/// Collects checks; a criterion passes when every check holds.
struct Log {
    lines: Vec<String>,
    ok: bool,
}

impl Log {
    fn new() -> Self {
        Log {
            lines: Vec::new(),
            ok: true,
        }
    }

    fn check(&mut self, cond: bool, what: impl Into<String>) {
        let what = what.into();
        if cond {
            self.lines.push(format!("ok    {what}"));
        } else {
            self.ok = false;
            self.lines.push(format!("FAIL  {what}"));
        }
    }

    fn info(&mut self, what: impl Into<String>) {
        self.lines.push(format!("info  {}", what.into()));
    }
}

fn ext(spec: &str, m: usize) -> Result<GaloisExtension> {
    GaloisExtension::new(&ChainRing::from_spec(spec)?, m)
}

fn free_codes(ring: &ChainRing, len: usize, k: usize, opts: &Options) -> Result<Vec<LinearCode>> {
    Ok(EnumerationPlan::free_codes(ring, len, k)?
        .with_guard(opts.guard)
        .stream()?
        .collect())
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

pub fn run(id: u8, opts: &Options) -> Result<Outcome> {
    let (_, title) = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .copied()
        .ok_or_else(|| Error::InvalidParameter(format!("no criterion {id}")))?;
    let start = Instant::now();
    let mut log = Log::new();
    match id {
        1 => criterion_counterexample(&mut log)?,
        2 => criterion_subcode_count(&mut log, opts)?,
        3 => criterion_delsarte(&mut log, opts)?,
        4 => criterion_minimality(&mut log, opts)?,
        5 => criterion_decomposition(&mut log, opts)?,
        6 => criterion_partition(&mut log, opts)?,
        7 => criterion_lyle(&mut log, opts)?,
        8 => criterion_report_matrix(&mut log, opts)?,
        _ => criterion_pir(&mut log, opts)?,
    }
    Ok(Outcome {
        id,
        title,
        passed: log.ok,
        log: log.lines,
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn run_all(opts: &Options) -> Result<Vec<Outcome>> {
    CRITERIA.iter().map(|(id, _)| run(*id, opts)).collect()
}

fn criterion_counterexample(log: &mut Log) -> Result<()> {
    let g = gaussian_binomial(3, 2, &big(4))?;
    log.check(g == big(21), format!("[3 2]_4 = {g}"));
    let e = ext("gf:2", 2)?;
    let s = e.ring();
    let c = LinearCode::from_generators(s, 3, &parse_rows(s, "(1,0,a);(0,1,b)")?)?;
    let res = restriction(&e, &c)?;
    let words: BTreeSet<Vec<Elem>> = res.codewords().into_iter().collect();
    let expected: BTreeSet<Vec<Elem>> = [vec![Elem(0); 3], vec![Elem(1); 3]].into_iter().collect();
    log.check(
        words == expected,
        format!("Res(C) = {res} has codewords {{000, 111}}"),
    );
    let all = c.codewords();
    let in_base: BTreeSet<Vec<Elem>> = all
        .iter()
        .filter(|w| w.iter().all(|&x| e.in_base(x)))
        .cloned()
        .collect();
    log.check(all.len() == 16, format!("C has {} codewords", all.len()));
    log.check(
        in_base == expected,
        "scan of all 16 codewords finds exactly 000 and 111",
    );
    Ok(())
}

const THEOREM_RINGS: [&str; 8] = [
    "gf:2", "gf:3", "gf:4", "zps:2:2", "zps:2:3", "zps:3:2", "gr:2:2:2", "tp:2:2",
];

fn criterion_subcode_count(log: &mut Log, opts: &Options) -> Result<()> {
    for spec in THEOREM_RINGS {
        let ring = ChainRing::from_spec(spec)?;
        let (q, s) = (big(ring.q()), ring.s());
        let mut checked = 0usize;
        let mut bad = Vec::new();
        for len in 0..=3usize {
            for k in 0..=len {
                let plan = EnumerationPlan::free_codes(&ring, len, k)?.with_guard(opts.guard);
                let expected = chain_binomial(len as u64, k as u64, &q, s)?;
                if BigUint::from(plan.len()) != expected {
                    bad.push(format!(
                        "R^{len} rank {k}: {} codes vs {expected}",
                        plan.len()
                    ));
                }
                let mut stream = plan.stream()?;
                let first = stream.next();
                let last = plan.split(1)[0].stream()?.last();
                let mut picks: Vec<LinearCode> = first.into_iter().chain(last).collect();
                picks.dedup();
                for c in picks {
                    for kp in 0..=k {
                        let expected = chain_binomial(k as u64, kp as u64, &q, s)?;
                        let mut seen = HashSet::new();
                        for d in enum_free_subcodes(&c, kp)? {
                            if !(d.is_free() && d.rank() == kp && d.is_subcode_of(&c)?) {
                                bad.push(format!("{d:?} is not a free rank-{kp} subcode of {c:?}"));
                            }
                            seen.insert(d);
                        }
                        if BigUint::from(seen.len()) != expected {
                            bad.push(format!(
                                "{c:?}: {} distinct rank-{kp} subcodes vs {expected}",
                                seen.len()
                            ));
                        }
                        checked += 1;
                    }
                }
            }
        }
        log.check(
            bad.is_empty(),
            format!("{spec}: {checked} (C, k') cases, subcode counts equal [|k k'|]_(q,s)"),
        );
        for b in bad.iter().take(5) {
            log.info(b.clone());
        }
    }
    Ok(())
}

fn delsarte_for(log: &mut Log, e: &GaloisExtension, len: usize, opts: &Options) -> Result<()> {
    let mut count = 0usize;
    let mut bad = Vec::new();
    for k in 0..=len {
        for b in free_codes(e.ring(), len, k, opts)? {
            let lhs = trace_code(e, &b)?.dual();
            let dual = b.dual();
            let by_kernel = restriction_by_intersection(e, &dual)?;
            let by_duality = restriction_by_duality(e, &dual)?;
            if lhs != by_kernel || by_kernel != by_duality {
                bad.push(format!("{b:?}"));
            }
            if b.size() <= big(4096) && trace_code(e, &b)? != trace_image(e, &b)? {
                bad.push(format!("trace generating set differs from image for {b:?}"));
            }
            count += 1;
        }
    }
    log.check(
        bad.is_empty(),
        format!(
            "{} | {}, length {len}: Tr(B)^perp = Res(B^perp) for all {count} free codes",
            e.ring(),
            e.base()
        ),
    );
    for b in bad.iter().take(5) {
        log.info(b.clone());
    }
    Ok(())
}

fn criterion_delsarte(log: &mut Log, opts: &Options) -> Result<()> {
    let f4 = ext("gf:2", 2)?;
    for len in 1..=3 {
        delsarte_for(log, &f4, len, opts)?;
    }
    delsarte_for(log, &ext("zps:2:2", 2)?, 2, opts)?;
    Ok(())
}

fn criterion_minimality(log: &mut Log, opts: &Options) -> Result<()> {
    for (spec, lens) in [("gf:2", vec![2, 3, 4]), ("gf:3", vec![2, 3])] {
        let e = ext(spec, 2)?;
        for len in lens {
            let kap = kappa(len, 2);
            let set = minimal_full_trace_codes(&e, len, opts)?;
            let exhaustive = minimal_full_trace_exhaustive(&e, len, opts)?;
            let all_free = exhaustive.iter().all(|c| c.is_free() && c.rank() == kap);
            log.check(
                all_free,
                format!(
                    "{} | {spec}, length {len}: all {} minimal members of E are free of rank {kap}",
                    e.ring(),
                    exhaustive.len()
                ),
            );
            log.check(
                exhaustive == set.members,
                "exhaustive minimal set equals the filtered free rank-kappa set",
            );
        }
    }
    Ok(())
}

fn criterion_decomposition(log: &mut Log, opts: &Options) -> Result<()> {
    let e = ext("gf:2", 2)?;
    let mut count = 0usize;
    let mut bad = Vec::new();
    for k in 0..=3 {
        for b in free_codes(e.ring(), 3, k, opts)? {
            if is_galois_invariant(&e, &b)? {
                continue;
            }
            count += 1;
            let (b0, b1) = decompose(&e, &b)?;
            let expected_b0 = extension(&e, &restriction(&e, &b)?)?;
            let stacked = standard_form(&b0.generator_matrix().stack(b1.generator_matrix())?);
            let ok = b0 == expected_b0
                && b0.rank() + b1.rank() == b.rank()
                && stacked.rank() == b.rank()
                && b0.intersection(&b1)?.is_zero()
                && restriction(&e, &b1)?.is_zero()
                && b0.sum(&b1)? == b
                && b1.is_free();
            if !ok {
                bad.push(format!("{b:?} -> {b0:?} + {b1:?}"));
            }
        }
    }
    log.check(
        bad.is_empty() && count > 0,
        format!(
            "{count} non-invariant free codes over F4, length 3: B = Ext(Res(B)) + B1, Res(B1) = 0"
        ),
    );
    for b in bad.iter().take(5) {
        log.info(b.clone());
    }
    Ok(())
}

fn format_hist(h: &BTreeMap<usize, BigUint>) -> String {
    let parts: Vec<String> = h.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn criterion_partition(log: &mut Log, opts: &Options) -> Result<()> {
    let cases = [
        ("gf:2", 1usize),
        ("gf:2", 2),
        ("gf:2", 3),
        ("gf:3", 2),
        ("zps:2:2", 2),
    ];
    for (spec, len) in cases {
        let e = ext(spec, 2)?;
        for k in 0..=len {
            let hist = omega_bruteforce(&e, len, k, opts)?;
            let total: BigUint = hist.values().sum();
            let expected = chain_binomial(len as u64, k as u64, &big(e.ring().q()), e.ring().s())?;
            log.check(
                total == expected,
                format!(
                    "{} | {spec}, length {len}, k = {k}: histogram {} sums to {expected}",
                    e.ring(),
                    format_hist(&hist)
                ),
            );
        }
    }
    let e = ext("gf:2", 2)?;
    let anchor = omega_bruteforce(&e, 3, 2, opts)?;
    let expected = BTreeMap::from([(1, big(14)), (2, big(7))]);
    log.check(
        anchor == expected,
        format!("anchor F4 | F2, length 3, k = 2: {}", format_hist(&anchor)),
    );
    Ok(())
}

fn verdicts_consistent(reports: &[CountReport]) -> bool {
    reports
        .iter()
        .all(|r| (r.verdict == Verdict::Match) == (r.formula_value == r.oracle_value))
}

fn criterion_lyle(log: &mut Log, opts: &Options) -> Result<()> {
    let e = ext("gf:2", 2)?;
    let mut mismatches = 0;
    let mut matches = 0;
    let mut all = Vec::new();
    for kp in 0..=2 {
        let reports = comparison_report(&e, 3, 2, kp, opts)?;
        for r in &reports {
            if r.formula == "lyle" {
                log.info(format!(
                    "lyle k' = {kp}: formula {} vs oracle {} ({:?})",
                    r.formula_value, r.oracle_value, r.verdict
                ));
                if r.verdict == Verdict::Mismatch {
                    mismatches += 1;
                }
            }
            if r.verdict == Verdict::Match {
                matches += 1;
            }
        }
        all.extend(reports);
    }
    log.check(
        mismatches > 0,
        format!("lyle mismatches flagged for {mismatches} values of k'"),
    );
    let k1 = all
        .iter()
        .find(|r| r.formula == "lyle" && r.params.kp == Some(1));
    log.check(
        k1.is_some_and(|r| {
            r.formula_value == BigInt::from(5) && r.oracle_value == BigInt::from(14)
        }),
        "k' = 1: lyle 5 vs observed 14",
    );
    log.check(matches > 0, format!("{matches} comparisons report match"));
    log.check(
        verdicts_consistent(&all),
        "verdict = match exactly when the values agree",
    );
    Ok(())
}

fn criterion_report_matrix(log: &mut Log, opts: &Options) -> Result<()> {
    let cases = [("gf:2", 2usize), ("gf:2", 3), ("gf:3", 2), ("zps:2:2", 2)];
    let mut total = 0usize;
    let mut tally: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for (spec, len) in cases {
        let e = ext(spec, 2)?;
        let kap = kappa(len, 2);
        for k in 0..=len {
            for kp in 0..=k {
                let reports = comparison_report(&e, len, k, kp, opts)?;
                let has = |name: &str| reports.iter().any(|r| r.formula == name);
                let mut complete = has("omega[aleph=oracle]") && has("omega[aleph=formula]");
                complete &= !(k >= kap) || has("aleph");
                complete &= e.base().s() > 1 || has("lyle");
                complete &= has("corollary_fixed_subcode");
                complete &= k < kap || has("supercodes");
                if !complete || !verdicts_consistent(&reports) {
                    log.check(
                        false,
                        format!("{spec} len {len} k {k} k' {kp}: incomplete report"),
                    );
                }
                for r in &reports {
                    let entry = tally.entry(r.formula.clone()).or_default();
                    match r.verdict {
                        Verdict::Match => entry.0 += 1,
                        Verdict::Mismatch => entry.1 += 1,
                    }
                }
                total += reports.len();
            }
        }
    }
    log.check(
        total > 0,
        format!("{total} comparisons produced across the parameter matrix"),
    );
    for (name, (m, x)) in &tally {
        log.info(format!("{name}: {m} match, {x} mismatch"));
    }
    let e = ext("gf:2", 2)?;
    let a = comparison_report(&e, 3, 2, 1, opts)?;
    let b = comparison_report(&e, 3, 2, 1, opts)?;
    log.check(
        serde_json::to_string(&a)? == serde_json::to_string(&b)?,
        "reruns serialize identically",
    );
    Ok(())
}

/// Span of integer vectors over `Z/n`, by closure.
fn integer_span(n: u64, len: usize, gens: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
    let mut seen = BTreeSet::from([vec![0; len]]);
    let mut frontier = vec![vec![0; len]];
    while let Some(v) = frontier.pop() {
        for g in gens {
            let w: Vec<u64> = v.iter().zip(g).map(|(a, b)| (a + b) % n).collect();
            if seen.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    seen
}

/// Minimum number of generators of an integer code, by search.
fn integer_min_generators(n: u64, len: usize, words: &BTreeSet<Vec<u64>>) -> usize {
    let list: Vec<&Vec<u64>> = words.iter().collect();
    if words.len() == 1 {
        return 0;
    }
    if list
        .iter()
        .any(|w| integer_span(n, len, &[(*w).clone()]) == *words)
    {
        return 1;
    }
    for (i, a) in list.iter().enumerate() {
        for b in &list[i + 1..] {
            if integer_span(n, len, &[(*a).clone(), (*b).clone()]) == *words {
                return 2;
            }
        }
    }
    3
}

fn criterion_pir(log: &mut Log, opts: &Options) -> Result<()> {
    let pir: PirRing = "crt:(zps:2:1,zps:3:1)".parse()?;
    let n = pir.integer_modulus().expect("Z6 has an integer model");
    let pext = pir_galois_extension(&pir, 2)?;
    let f = pext.integer_modulus_polynomial()?;
    log.check(
        f == vec![1, 3, 1],
        format!("combined f has coefficients {f:?} (X^2+3X+1)"),
    );
    for (t, e) in pext.components.iter().enumerate() {
        let field = e.base();
        let reduced: Vec<Elem> = f.iter().map(|&c| field.from_int(c as i64)).collect();
        log.check(
            reduced == e.modulus() && poly::is_irreducible(field, &reduced),
            format!(
                "f mod {} is the irreducible component polynomial {:?}",
                field.p(),
                e.modulus()
            ),
        );
        let _ = t;
    }
    let round_trip = (0..n).all(|x| pir.phi_inv(&pir.phi(x).unwrap()).unwrap() == x);
    log.check(round_trip, "Phi^-1(Phi(x)) = x on all of Z6");

    // codes: every one- and two-generator integer code of length 2
    let vectors: Vec<Vec<u64>> = (0..n * n).map(|i| vec![i % n, i / n]).collect();
    let mut by_lemma_vs_direct = true;
    let mut code_trip = true;
    let mut seen_codes = HashSet::new();
    let mut free_rank1 = HashSet::new();
    for (i, a) in vectors.iter().enumerate() {
        for b in &vectors[i..] {
            let gens = vec![a.clone(), b.clone()];
            let code = code_from_integer_rows(&pir, 2, &gens)?;
            let words: BTreeSet<Vec<u64>> = code.integer_codewords(&pir)?.into_iter().collect();
            code_trip &= words == integer_span(n, 2, &gens);
            code_trip &= crt_combine(&pir, crt_split(&code))? == code;
            if !seen_codes.insert(code.clone()) {
                continue;
            }
            let r = integer_min_generators(n, 2, &words);
            let size = words.len() as u64;
            let direct_free = size == n.pow(r as u32);
            let (lemma_free, lemma_rank) = is_free_pir_code(&code);
            by_lemma_vs_direct &= lemma_free == direct_free;
            by_lemma_vs_direct &= !lemma_free || lemma_rank == Some(r);
            by_lemma_vs_direct &= code.rank() == r;
            if direct_free && r == 1 {
                free_rank1.insert(code);
            }
        }
    }
    log.check(
        code_trip,
        "integer codewords of CRT codes equal direct spans over Z6; split/combine round-trips",
    );
    log.check(
        by_lemma_vs_direct,
        format!(
            "componentwise freeness criterion agrees with minimal generators for all {} codes in Z6^2",
            seen_codes.len()
        ),
    );
    let predicted = pir_chain_binomial(&pir, 2, 1)?;
    log.check(
        predicted == big(12) && BigUint::from(free_rank1.len()) == predicted,
        format!(
            "free rank-1 codes in Z6^2: {} enumerated, formula {predicted}",
            free_rank1.len()
        ),
    );

    let brute = pir_omega_bruteforce(&pext, 2, 1, opts)?;
    let product: BigUint = pext
        .components
        .iter()
        .map(|e| chain_binomial(2, 1, &big(e.ring().q()), e.ring().s()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .product();
    log.check(
        brute.total == product,
        format!("{} free rank-1 codes over Z6[X]/(f), length 2", brute.total),
    );
    for kp in 0..=1usize {
        let hat = omega_hat(&pext, 2, 1, kp, AlephSource::Oracle, opts)?;
        let observed = brute.by_free_rank.get(&kp).cloned().unwrap_or_default();
        log.check(
            hat.value == BigInt::from(observed.clone()),
            format!(
                "k' = {kp}: omega-hat {} (factors {:?}) vs codes with free rank-{kp} restriction {observed}",
                hat.value,
                hat.factors.iter().map(|f| f.to_string()).collect::<Vec<_>>()
            ),
        );
    }
    let hists = component_histograms(&pext, 2, 1, opts)?;
    log.check(
        convolve_max_rank(&hists) == brute.by_max_rank,
        "tuple iteration equals the max-rank convolution of component histograms",
    );
    log.info(format!(
        "max-rank histogram {} (mixed restriction ranks counted at their max)",
        format_hist(&brute.by_max_rank)
    ));
    Ok(())
}
