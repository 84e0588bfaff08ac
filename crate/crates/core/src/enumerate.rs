//! Duplicate-free enumeration of codes through canonical generator
//! matrices.
//!
//! A *pattern* fixes the pivot descriptors `(col, exp)` of a canonical
//! matrix; the remaining entries are free *slots*, each ranging over a
//! fixed set of ring elements. Patterns are ordered by pivot set (colex,
//! i.e. by bitmask) and then by exponent assignment (first pivot fastest).
//! Inside a pattern, codes are numbered in mixed radix with slot 0 the
//! fastest digit and slots laid out row by row. Concatenating the patterns
//! gives one global index space, which plans cut into ranges.

use std::collections::HashMap;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{ring_descriptor, CodeRecord, LinearCode};
use crate::error::{Error, Result};
use crate::modlin::{Pivot, RingMatrix, StandardForm};
use crate::ring::{ChainRing, Elem};

/// Default cap on the number of codes a plan may emit.
pub const DEFAULT_GUARD: u128 = 10_000_000;

/// What a plan enumerates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    /// Free codes of rank `k` in `R^ℓ`.
    FreeCodes { k: usize },
    /// Every submodule of `R^ℓ`.
    AllSubmodules,
    /// Free rank-`k` subcodes of a fixed free code.
    FreeSubcodes { code: LinearCode, k: usize },
}

impl Target {
    pub fn label(&self) -> String {
        match self {
            Target::FreeCodes { k } => format!("free:{k}"),
            Target::AllSubmodules => "all".to_string(),
            Target::FreeSubcodes { k, .. } => format!("free-subcodes:{k}"),
        }
    }
}

struct Slot {
    row: usize,
    col: usize,
    values: Arc<Vec<Elem>>,
}

struct Pattern {
    pivots: Vec<Pivot>,
    template: RingMatrix,
    slots: Vec<Slot>,
    size: u128,
}

/// Patterns of canonical `rows × len` matrices over `ring`. With
/// `free_only`, only rank-`rank` patterns with all exponents zero.
struct PatternSet {
    ring: ChainRing,
    patterns: Vec<Pattern>,
    offsets: Vec<u128>,
    total: u128,
}

impl PatternSet {
    fn build(ring: &ChainRing, len: usize, rank: Option<usize>) -> Result<PatternSet> {
        let s = ring.s();
        let mut cache: HashMap<(u32, u32), Arc<Vec<Elem>>> = HashMap::new();
        let mut values = |min_val: u32, reduce: u32| -> Arc<Vec<Elem>> {
            cache
                .entry((min_val, reduce))
                .or_insert_with(|| {
                    Arc::new(
                        ring.elements()
                            .filter(|&x| {
                                ring.valuation(x) >= min_val && ring.mod_theta_pow(x, reduce) == x
                            })
                            .collect(),
                    )
                })
                .clone()
        };
        let mut patterns = Vec::new();
        if len >= 128 {
            return Err(Error::InvalidParameter(format!(
                "length {len} is too large"
            )));
        }
        for mask in 0u128..(1u128 << len) {
            let cols: Vec<usize> = (0..len).filter(|&c| mask >> c & 1 == 1).collect();
            if let Some(k) = rank {
                if cols.len() != k {
                    continue;
                }
            }
            let layers: u32 = if rank.is_some() { 1 } else { s };
            let assignments = (layers as u128)
                .checked_pow(cols.len() as u32)
                .ok_or_else(|| Error::InvalidParameter("too many pivot patterns".into()))?;
            for mut a in 0..assignments {
                let mut pivots: Vec<Pivot> = cols
                    .iter()
                    .map(|&col| {
                        let exp = (a % layers as u128) as u32;
                        a /= layers as u128;
                        Pivot { col, exp }
                    })
                    .collect();
                pivots.sort_by_key(|p| (p.exp, p.col));
                let mut layer_of = vec![None; len];
                for p in &pivots {
                    layer_of[p.col] = Some(p.exp);
                }
                let mut template = RingMatrix::zeros(ring, pivots.len(), len);
                let mut slots = Vec::new();
                let mut size: u128 = 1;
                for (row, p) in pivots.iter().enumerate() {
                    template.set(row, p.col, ring.theta_pow(p.exp));
                    for (col, layer) in layer_of.iter().enumerate() {
                        if col == p.col {
                            continue;
                        }
                        let min_val = p.exp + u32::from(col < p.col);
                        let vals = match *layer {
                            Some(e) if e <= p.exp => continue,
                            Some(e) => values(min_val, e),
                            None => values(min_val, s),
                        };
                        if vals.len() > 1 {
                            size = size.checked_mul(vals.len() as u128).ok_or_else(|| {
                                Error::GuardExceeded {
                                    estimated: "more than 2^128".into(),
                                    guard: DEFAULT_GUARD,
                                }
                            })?;
                            slots.push(Slot {
                                row,
                                col,
                                values: vals,
                            });
                        }
                    }
                }
                patterns.push(Pattern {
                    pivots,
                    template,
                    slots,
                    size,
                });
            }
        }
        let mut offsets = Vec::with_capacity(patterns.len());
        let mut total: u128 = 0;
        for p in &patterns {
            offsets.push(total);
            total = total
                .checked_add(p.size)
                .ok_or_else(|| Error::GuardExceeded {
                    estimated: "more than 2^128".into(),
                    guard: DEFAULT_GUARD,
                })?;
        }
        Ok(PatternSet {
            ring: ring.clone(),
            patterns,
            offsets,
            total,
        })
    }

    /// Patterns meeting `[start, end)`, with the overlap in local indices.
    fn segments(&self, start: u128, end: u128) -> Vec<(usize, u128, u128)> {
        let mut out = Vec::new();
        for (i, p) in self.patterns.iter().enumerate() {
            let (lo, hi) = (self.offsets[i], self.offsets[i] + p.size);
            let (a, b) = (start.max(lo), end.min(hi));
            if a < b {
                out.push((i, a - lo, b - lo));
            }
        }
        out
    }
}

/// A contiguous range of one enumeration.
#[derive(Clone)]
pub struct EnumerationPlan {
    length: usize,
    target: Target,
    guard: u128,
    start: u128,
    end: u128,
    patterns: Arc<PatternSet>,
}

impl std::fmt::Debug for EnumerationPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "EnumerationPlan({} over {}^{}, [{}, {}))",
            self.target.label(),
            self.patterns.ring,
            self.length,
            self.start,
            self.end
        )
    }
}

impl EnumerationPlan {
    fn with_patterns(length: usize, target: Target, patterns: PatternSet) -> Self {
        let total = patterns.total;
        EnumerationPlan {
            length,
            target,
            guard: DEFAULT_GUARD,
            start: 0,
            end: total,
            patterns: Arc::new(patterns),
        }
    }

    pub fn free_codes(ring: &ChainRing, length: usize, k: usize) -> Result<Self> {
        if k > length {
            return Err(Error::InvalidParameter(format!(
                "rank {k} exceeds length {length}"
            )));
        }
        let ps = PatternSet::build(ring, length, Some(k))?;
        Ok(Self::with_patterns(length, Target::FreeCodes { k }, ps))
    }

    pub fn all_submodules(ring: &ChainRing, length: usize) -> Result<Self> {
        let ps = PatternSet::build(ring, length, None)?;
        Ok(Self::with_patterns(length, Target::AllSubmodules, ps))
    }

    pub fn free_subcodes(code: &LinearCode, k: usize) -> Result<Self> {
        if !code.is_free() {
            return Err(Error::Precondition(format!("{code:?} is not free")));
        }
        if k > code.rank() {
            return Err(Error::InvalidParameter(format!(
                "subcode rank {k} exceeds code rank {}",
                code.rank()
            )));
        }
        let ps = PatternSet::build(code.ring(), code.rank(), Some(k))?;
        Ok(Self::with_patterns(
            code.length(),
            Target::FreeSubcodes {
                code: code.clone(),
                k,
            },
            ps,
        ))
    }

    pub fn with_guard(mut self, guard: u128) -> Self {
        self.guard = guard;
        self
    }

    pub fn ring(&self) -> &ChainRing {
        &self.patterns.ring
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    pub fn guard(&self) -> u128 {
        self.guard
    }

    pub fn range(&self) -> (u128, u128) {
        (self.start, self.end)
    }

    /// Number of codes this plan emits.
    pub fn len(&self) -> u128 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn check_guard(&self) -> Result<()> {
        if self.len() > self.guard {
            return Err(Error::GuardExceeded {
                estimated: self.len().to_string(),
                guard: self.guard,
            });
        }
        Ok(())
    }

    /// Disjoint sub-plans covering this one, cut at pattern boundaries
    /// when there are at least `ways` patterns and into near-equal index
    /// ranges otherwise.
    pub fn split(&self, ways: usize) -> Vec<EnumerationPlan> {
        let ways = ways.max(1) as u128;
        let segs = self.patterns.segments(self.start, self.end);
        let sub = |a: u128, b: u128| EnumerationPlan {
            start: a,
            end: b,
            ..self.clone()
        };
        if ways == 1 || self.len() <= 1 {
            return vec![self.clone()];
        }
        if segs.len() as u128 >= ways {
            let ways = ways as usize;
            let mut cuts = vec![self.start];
            let mut acc: u128 = 0;
            let len = self.len();
            for (n, (i, a, b)) in segs.iter().enumerate() {
                acc += b - a;
                let groups_left = ways - cuts.len();
                let segs_left = segs.len() - n - 1;
                if groups_left == 0 || segs_left == 0 {
                    continue;
                }
                let due = len * cuts.len() as u128 / ways as u128;
                if acc >= due || segs_left == groups_left {
                    cuts.push(self.patterns.offsets[*i] + b);
                }
            }
            cuts.push(self.end);
            return cuts.windows(2).map(|w| sub(w[0], w[1])).collect();
        }
        let ways = ways.min(self.len());
        let (q, r) = (self.len() / ways, self.len() % ways);
        let mut out = Vec::new();
        let mut a = self.start;
        for i in 0..ways {
            let b = a + q + u128::from(i < r);
            out.push(sub(a, b));
            a = b;
        }
        out
    }

    /// The codes of this plan in order. Fails when the guard is exceeded.
    pub fn stream(&self) -> Result<CodeStream> {
        self.check_guard()?;
        Ok(self.stream_unchecked())
    }

    fn stream_unchecked(&self) -> CodeStream {
        let mut segs = self.patterns.segments(self.start, self.end);
        segs.reverse();
        CodeStream {
            patterns: self.patterns.clone(),
            target: self.target.clone(),
            segments: segs,
            current: None,
        }
    }

    /// Parallel fold over all codes of the plan.
    ///
    /// `jobs = 0` uses the global thread pool.
    pub fn par_fold<T, I, F, G>(&self, jobs: usize, init: I, fold: F, reduce: G) -> Result<T>
    where
        T: Send,
        I: Fn() -> T + Sync + Send,
        F: Fn(T, LinearCode) -> T + Sync + Send,
        G: Fn(T, T) -> T + Sync + Send,
    {
        self.check_guard()?;
        let threads = if jobs == 0 {
            rayon::current_num_threads()
        } else {
            jobs
        };
        let parts = self.split(threads * 4);
        let run = || {
            parts
                .par_iter()
                .map(|p| p.stream_unchecked().fold(init(), &fold))
                .reduce(&init, &reduce)
        };
        if jobs == 0 {
            Ok(run())
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(run))
        }
    }

    /// Parallel fallible fold; the first error wins.
    pub fn try_par_fold<T, I, F, G>(&self, jobs: usize, init: I, fold: F, reduce: G) -> Result<T>
    where
        T: Send,
        I: Fn() -> T + Sync + Send,
        F: Fn(T, LinearCode) -> Result<T> + Sync + Send,
        G: Fn(T, T) -> T + Sync + Send,
    {
        self.par_fold(
            jobs,
            || Ok(init()),
            |acc: Result<T>, c| acc.and_then(|a| fold(a, c)),
            |a, b| match (a, b) {
                (Ok(x), Ok(y)) => Ok(reduce(x, y)),
                (Err(e), _) | (_, Err(e)) => Err(e),
            },
        )?
    }

    /// Counts codes satisfying `pred`, in parallel.
    pub fn par_count<P>(&self, jobs: usize, pred: P) -> Result<u128>
    where
        P: Fn(&LinearCode) -> Result<bool> + Sync + Send,
    {
        self.try_par_fold(
            jobs,
            || 0u128,
            |n, c| Ok(n + u128::from(pred(&c)?)),
            |a, b| a + b,
        )
    }
}

/// Pull-based stream of codes.
pub struct CodeStream {
    patterns: Arc<PatternSet>,
    target: Target,
    /// Remaining `(pattern, local start, local end)`, last one first.
    segments: Vec<(usize, u128, u128)>,
    current: Option<Cursor>,
}

struct Cursor {
    pattern: usize,
    digits: Vec<usize>,
    remaining: u128,
}

impl CodeStream {
    fn emit(&self, pattern: &Pattern, digits: &[usize]) -> LinearCode {
        let mut m = pattern.template.clone();
        for (slot, &d) in pattern.slots.iter().zip(digits) {
            m.set(slot.row, slot.col, slot.values[d]);
        }
        match &self.target {
            Target::FreeSubcodes { code, .. } => {
                let image = m.mul(code.generator_matrix()).expect("shapes agree");
                LinearCode::from_matrix(&image)
            }
            _ => LinearCode::from_form(StandardForm::from_parts(m, pattern.pivots.clone())),
        }
    }
}

impl Iterator for CodeStream {
    type Item = LinearCode;

    fn next(&mut self) -> Option<LinearCode> {
        loop {
            if let Some(cur) = &mut self.current {
                if cur.remaining > 0 {
                    let pattern = &self.patterns.patterns[cur.pattern];
                    let digits = cur.digits.clone();
                    cur.remaining -= 1;
                    for (d, slot) in cur.digits.iter_mut().zip(&pattern.slots) {
                        *d += 1;
                        if *d < slot.values.len() {
                            break;
                        }
                        *d = 0;
                    }
                    return Some(self.emit(pattern, &digits));
                }
            }
            let (p, a, b) = self.segments.pop()?;
            let pattern = &self.patterns.patterns[p];
            let mut rest = a;
            let digits = pattern
                .slots
                .iter()
                .map(|slot| {
                    let n = slot.values.len() as u128;
                    let d = rest % n;
                    rest /= n;
                    d as usize
                })
                .collect();
            self.current = Some(Cursor {
                pattern: p,
                digits,
                remaining: b - a,
            });
        }
    }
}

fn check_rank(length: usize, k: usize) -> Result<()> {
    if k > length {
        return Err(Error::InvalidParameter(format!(
            "rank {k} exceeds length {length}"
        )));
    }
    Ok(())
}

/// Every free rank-`k` code in `ring^length`, once each.
pub fn enum_free_codes(ring: &ChainRing, length: usize, k: usize) -> Result<CodeStream> {
    check_rank(length, k)?;
    EnumerationPlan::free_codes(ring, length, k)?.stream()
}

/// Every free rank-`k` subcode of the free code `code`, once each.
pub fn enum_free_subcodes(code: &LinearCode, k: usize) -> Result<CodeStream> {
    EnumerationPlan::free_subcodes(code, k)?.stream()
}

/// Every submodule of `ring^length`, once each.
pub fn enum_all_submodules(ring: &ChainRing, length: usize) -> Result<CodeStream> {
    EnumerationPlan::all_submodules(ring, length)?.stream()
}

/// Every submodule of a free code, as the images of the submodules of
/// `R^k` under its generator matrix.
pub fn enum_submodules_of(code: &LinearCode) -> Result<impl Iterator<Item = LinearCode>> {
    if !code.is_free() {
        return Err(Error::Precondition(format!("{code:?} is not free")));
    }
    let g = code.generator_matrix().clone();
    let stream = enum_all_submodules(code.ring(), code.rank())?;
    Ok(stream.map(move |c| {
        LinearCode::from_matrix(&c.generator_matrix().mul(&g).expect("shapes agree"))
    }))
}

/// First line of a cache file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheHeader {
    pub ring: String,
    pub degree: usize,
    pub length: usize,
    pub target: String,
    pub count: u128,
}

fn cache_name(h: &CacheHeader) -> String {
    let clean = |s: &str| s.replace([':', '(', ')', ',', '/'], "_");
    format!(
        "{}_m{}_n{}_{}.jsonl",
        clean(&h.ring),
        h.degree,
        h.length,
        clean(&h.target)
    )
}

/// Writes the plan's codes to `dir`, returning the file path.
pub fn write_cache(dir: &Path, plan: &EnumerationPlan) -> Result<PathBuf> {
    let (ring, degree) = ring_descriptor(plan.ring());
    let header = CacheHeader {
        ring,
        degree,
        length: plan.length(),
        target: plan.target().label(),
        count: plan.len(),
    };
    fs::create_dir_all(dir)?;
    let path = dir.join(cache_name(&header));
    let mut out = BufWriter::new(fs::File::create(&path)?);
    serde_json::to_writer(&mut out, &header)?;
    out.write_all(b"\n")?;
    for code in plan.stream()? {
        serde_json::to_writer(&mut out, &code.to_record())?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(path)
}

/// Reads a cache file written by [`write_cache`].
pub fn read_cache(path: &Path) -> Result<(CacheHeader, Vec<LinearCode>)> {
    let mut lines = BufReader::new(fs::File::open(path)?).lines();
    let first = lines
        .next()
        .ok_or_else(|| Error::Parse(format!("{} is empty", path.display())))??;
    let header: CacheHeader = serde_json::from_str(&first)?;
    let ring = crate::codes::ring_from_descriptor(&header.ring, header.degree)?;
    let mut codes = Vec::new();
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: CodeRecord = serde_json::from_str(&line)?;
        codes.push(LinearCode::from_record_in(&ring, &rec)?);
    }
    if codes.len() as u128 != header.count {
        return Err(Error::Parse(format!(
            "{} declares {} codes but holds {}",
            path.display(),
            header.count,
            codes.len()
        )));
    }
    Ok((header, codes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modlin::standard_form;

    #[test]
    fn free_code_counts() {
        let f4 = ChainRing::from_spec("gf:4").unwrap();
        assert_eq!(enum_free_codes(&f4, 3, 2).unwrap().count(), 21);
        let z4 = ChainRing::from_spec("zps:2:2").unwrap();
        assert_eq!(enum_free_codes(&z4, 2, 1).unwrap().count(), 6);
        let zero: Vec<_> = enum_free_codes(&z4, 3, 0).unwrap().collect();
        assert_eq!(zero, vec![LinearCode::zero(&z4, 3)]);
        assert!(enum_free_codes(&z4, 2, 3).is_err());
    }

    #[test]
    fn submodule_counts() {
        let cases = [("gf:2", 2, 5), ("zps:2:2", 1, 3), ("gf:4", 2, 7)];
        for (spec, len, expected) in cases {
            let r = ChainRing::from_spec(spec).unwrap();
            assert_eq!(
                enum_all_submodules(&r, len).unwrap().count(),
                expected,
                "{spec}"
            );
        }
    }

    #[test]
    fn emitted_forms_are_canonical() {
        let z4 = ChainRing::from_spec("zps:2:2").unwrap();
        for c in enum_all_submodules(&z4, 2).unwrap() {
            assert_eq!(&standard_form(c.generator_matrix()), c.form());
        }
    }

    #[test]
    fn split_by_pivot_set() {
        let f4 = ChainRing::from_spec("gf:4").unwrap();
        let plan = EnumerationPlan::free_codes(&f4, 3, 2).unwrap();
        let sizes: Vec<u128> = plan.split(3).iter().map(|p| p.len()).collect();
        assert_eq!(sizes, vec![16, 4, 1]);
        assert_eq!(plan.split(1).len(), 1);
        let mut all: Vec<LinearCode> = plan
            .split(7)
            .iter()
            .flat_map(|p| p.stream().unwrap())
            .collect();
        let mut direct: Vec<LinearCode> = plan.stream().unwrap().collect();
        assert_eq!(all, direct);
        all.sort();
        all.dedup();
        direct.sort();
        assert_eq!(all, direct);
    }

    #[test]
    fn guard_is_enforced() {
        let f4 = ChainRing::from_spec("gf:4").unwrap();
        let plan = EnumerationPlan::free_codes(&f4, 3, 2)
            .unwrap()
            .with_guard(20);
        assert!(matches!(plan.stream(), Err(Error::GuardExceeded { .. })));
        assert_eq!(plan.with_guard(21).stream().unwrap().count(), 21);
    }

    #[test]
    fn parallel_count_matches() {
        let z4 = ChainRing::from_spec("zps:2:2").unwrap();
        let plan = EnumerationPlan::all_submodules(&z4, 3).unwrap();
        let serial = plan.stream().unwrap().filter(|c| c.is_free()).count() as u128;
        assert_eq!(plan.par_count(3, |c| Ok(c.is_free())).unwrap(), serial);
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let f4 = ChainRing::from_spec("gf:4").unwrap();
        let plan = EnumerationPlan::free_codes(&f4, 3, 2).unwrap();
        let path = write_cache(dir.path(), &plan).unwrap();
        let (header, codes) = read_cache(&path).unwrap();
        assert_eq!(header.count, 21);
        assert_eq!(codes, plan.stream().unwrap().collect::<Vec<_>>());
    }
}
