//! Exact linear algebra over finite chain rings.
//!
//! Vectors are rows; a matrix generates the submodule spanned by its rows.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{ChainRing, Elem};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingMatrix {
    ring: ChainRing,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl RingMatrix {
    pub fn zeros(ring: &ChainRing, rows: usize, cols: usize) -> RingMatrix {
        RingMatrix {
            ring: ring.clone(),
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn identity(ring: &ChainRing, n: usize) -> RingMatrix {
        let mut m = RingMatrix::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    /// Builds a `rows.len() × cols` matrix, checking lengths and entries.
    pub fn from_rows(ring: &ChainRing, cols: usize, rows: &[Vec<Elem>]) -> Result<RingMatrix> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has length {}, expected {cols}",
                    r.len()
                )));
            }
            if let Some(x) = r.iter().find(|&&x| !ring.contains(x)) {
                return Err(Error::InvalidParameter(format!(
                    "entry index {} is not an element of {}",
                    x.0,
                    ring.label()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(RingMatrix {
            ring: ring.clone(),
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn ring(&self) -> &ChainRing {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Elem) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> RingMatrix {
        let mut t = RingMatrix::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &RingMatrix) -> Result<RingMatrix> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!(
                "{} and {}",
                self.ring, other.ring
            )));
        }
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}×{} by {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let r = &self.ring;
        let mut out = RingMatrix::zeros(r, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = r.add(out.get(i, j), r.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// The row vector `x · M`.
    pub fn left_mul(&self, x: &[Elem]) -> Result<Vec<Elem>> {
        if x.len() != self.rows {
            return Err(Error::Dimension(format!(
                "vector of length {} times {}×{} matrix",
                x.len(),
                self.rows,
                self.cols
            )));
        }
        let r = &self.ring;
        let mut out = vec![Elem::ZERO; self.cols];
        for (i, &c) in x.iter().enumerate() {
            if !c.is_zero() {
                axpy(r, &mut out, c, self.row(i));
            }
        }
        Ok(out)
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &RingMatrix) -> Result<RingMatrix> {
        if self.ring != other.ring || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "cannot stack {}×{} over {} with {}×{} over {}",
                self.rows, self.cols, self.ring, other.rows, other.cols, other.ring
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(RingMatrix {
            ring: self.ring.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Applies `f` entrywise, keeping the shape; the result lives in `ring`.
    pub fn map(&self, ring: &ChainRing, f: impl Fn(Elem) -> Elem) -> RingMatrix {
        RingMatrix {
            ring: ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub(crate) fn data(&self) -> &[Elem] {
        &self.data
    }
}

impl fmt::Debug for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| crate::notation::format_vector(&self.ring, self.row(i)))
            .collect();
        write!(f, "[{}] over {}", rows.join("; "), self.ring)
    }
}

/// `y ← y + c·x`.
pub(crate) fn axpy(ring: &ChainRing, y: &mut [Elem], c: Elem, x: &[Elem]) {
    for (a, &b) in y.iter_mut().zip(x) {
        if !b.is_zero() {
            *a = ring.add(*a, ring.mul(c, b));
        }
    }
}

fn scale(ring: &ChainRing, x: &mut [Elem], c: Elem) {
    for a in x.iter_mut() {
        *a = ring.mul(c, *a);
    }
}

/// Column and `θ`-exponent of one row of a [`StandardForm`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pivot {
    pub col: usize,
    pub exp: u32,
}

/// Canonical generator matrix of a submodule.
///
/// Rows are sorted by `(exp, col)` of their pivots. Row `i` has entry
/// exactly `θ^exp` at its pivot column. Pivot columns of rows with exponent
/// at most `exp` (other than its own) are zero in row `i`; pivot columns of
/// rows with larger exponent `e` carry representatives reduced modulo
/// `θ^e`. Every entry of row `i` has valuation at least `exp`, and at
/// least `exp + 1` left of the pivot. Two matrices have equal forms iff
/// their row spans are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StandardForm {
    matrix: RingMatrix,
    pivots: Vec<Pivot>,
}

impl StandardForm {
    pub fn matrix(&self) -> &RingMatrix {
        &self.matrix
    }

    pub fn pivots(&self) -> &[Pivot] {
        &self.pivots
    }

    /// Minimum number of generators.
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_rank(&self) -> usize {
        self.pivots.iter().filter(|p| p.exp == 0).count()
    }

    pub fn is_free(&self) -> bool {
        self.pivots.iter().all(|p| p.exp == 0)
    }

    /// `log_q` of the size of the span: `Σ (s − exp)`.
    pub fn log_q_size(&self) -> u64 {
        let s = self.matrix.ring.s();
        self.pivots.iter().map(|p| (s - p.exp) as u64).sum()
    }

    pub fn into_matrix(self) -> RingMatrix {
        self.matrix
    }

    /// Wraps a matrix already known to be in standard form.
    pub(crate) fn from_parts(matrix: RingMatrix, pivots: Vec<Pivot>) -> StandardForm {
        debug_assert_eq!(matrix.rows, pivots.len());
        StandardForm { matrix, pivots }
    }
}

impl fmt::Debug for StandardForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "StandardForm({:?}, pivots {:?})",
            self.matrix, self.pivots
        )
    }
}

/// Canonical form of the row span of `m`.
pub fn standard_form(m: &RingMatrix) -> StandardForm {
    let r = &m.ring;
    let s = r.s();
    let mut remaining: Vec<Vec<Elem>> = m
        .row_vecs()
        .into_iter()
        .filter(|row| row.iter().any(|x| !x.is_zero()))
        .collect();
    let mut done: Vec<(Vec<Elem>, Pivot)> = Vec::new();

    loop {
        // global minimum of (valuation, column, row)
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in remaining.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let v = r.valuation(x);
                if best.is_none_or(|(bv, bj, _)| (v, j) < (bv, bj)) {
                    best = Some((v, j, i));
                }
            }
        }
        let Some((a, j, i)) = best else { break };
        let mut pivot_row = remaining.swap_remove(i);
        let unit = r.div_theta_pow(pivot_row[j], a);
        let inv = r.inverse(unit).expect("pivot cofactor is a unit");
        scale(r, &mut pivot_row, inv);
        debug_assert_eq!(pivot_row[j], r.theta_pow(a));

        for row in remaining.iter_mut() {
            if !row[j].is_zero() {
                let t = r.div_theta_pow(row[j], a);
                axpy(r, row, r.neg(t), &pivot_row);
            }
        }
        remaining.retain(|row| row.iter().any(|x| !x.is_zero()));

        for (row, _) in done.iter_mut() {
            let x = row[j];
            let excess = r.sub(x, r.mod_theta_pow(x, a));
            if !excess.is_zero() {
                let t = r.div_theta_pow(excess, a);
                axpy(r, row, r.neg(t), &pivot_row);
            }
        }
        done.push((pivot_row, Pivot { col: j, exp: a }));
        debug_assert!(a < s);
    }

    let pivots: Vec<Pivot> = done.iter().map(|(_, p)| *p).collect();
    let rows: Vec<Vec<Elem>> = done.into_iter().map(|(row, _)| row).collect();
    let matrix = RingMatrix::from_rows(r, m.cols, &rows).expect("shape preserved");
    StandardForm { matrix, pivots }
}

/// `U · M · V = D` with `U`, `V` invertible and `D` diagonal.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: RingMatrix,
    pub d: RingMatrix,
    pub v: RingMatrix,
    /// Exponents of the nonzero diagonal entries, nondecreasing.
    pub exponents: Vec<u32>,
}

pub fn smith_form(m: &RingMatrix) -> SmithForm {
    let r = &m.ring;
    let (nr, nc) = (m.rows, m.cols);
    let mut d = m.row_vecs();
    let mut u = RingMatrix::identity(r, nr).row_vecs();
    // V is tracked by its transpose so that column operations are row operations.
    let mut vt = RingMatrix::identity(r, nc).row_vecs();
    let mut exponents = Vec::new();

    for t in 0..nr.min(nc) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in d.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x.is_zero() {
                    continue;
                }
                let v = r.valuation(x);
                if best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((a, i, j)) = best else { break };
        d.swap(t, i);
        u.swap(t, i);
        for row in d.iter_mut() {
            row.swap(t, j);
        }
        vt.swap(t, j);

        let inv = r
            .inverse(r.div_theta_pow(d[t][t], a))
            .expect("unit cofactor");
        scale(r, &mut d[t], inv);
        scale(r, &mut u[t], inv);

        let (head, tail) = d.split_at_mut(t + 1);
        let (uhead, utail) = u.split_at_mut(t + 1);
        for (row, urow) in tail.iter_mut().zip(utail.iter_mut()) {
            if !row[t].is_zero() {
                let f = r.neg(r.div_theta_pow(row[t], a));
                axpy(r, row, f, &head[t]);
                axpy(r, urow, f, &uhead[t]);
            }
        }
        let (vhead, vtail) = vt.split_at_mut(t + 1);
        for (jj, vrow) in vtail.iter_mut().enumerate() {
            let col = t + 1 + jj;
            let x = d[t][col];
            if x.is_zero() {
                continue;
            }
            let f = r.neg(r.div_theta_pow(x, a));
            for row in d.iter_mut() {
                let add = r.mul(f, row[t]);
                row[col] = r.add(row[col], add);
            }
            axpy(r, vrow, f, &vhead[t]);
        }
        exponents.push(a);
    }

    SmithForm {
        u: RingMatrix::from_rows(r, nr, &u).expect("square"),
        d: RingMatrix::from_rows(r, nc, &d).expect("shape"),
        v: RingMatrix::from_rows(r, nc, &vt)
            .expect("square")
            .transpose(),
        exponents,
    }
}

/// Generators of `{x : x · Mᵀ = 0}`, in standard form.
pub fn kernel(m: &RingMatrix) -> RingMatrix {
    let r = &m.ring;
    let s = r.s();
    let sm = smith_form(m);
    let mut gens = Vec::new();
    for i in 0..m.cols {
        let col = sm.v.column(i);
        match sm.exponents.get(i) {
            Some(&0) => {}
            Some(&d) => {
                let t = r.theta_pow(s - d);
                gens.push(col.iter().map(|&x| r.mul(t, x)).collect());
            }
            None => gens.push(col),
        }
    }
    let g = RingMatrix::from_rows(r, m.cols, &gens).expect("shape");
    standard_form(&g).into_matrix()
}

/// Some `x` with `x · M = b`, or `None` when `b` is not in the row span.
pub fn solve(m: &RingMatrix, b: &[Elem]) -> Result<Option<Vec<Elem>>> {
    if b.len() != m.cols {
        return Err(Error::Dimension(format!(
            "right-hand side has length {}, matrix has {} columns",
            b.len(),
            m.cols
        )));
    }
    let r = &m.ring;
    let sm = smith_form(m);
    let bv = sm.v.transpose().left_mul_transposed(b);
    let mut z = vec![Elem::ZERO; m.rows];
    for (j, &y) in bv.iter().enumerate() {
        match sm.exponents.get(j) {
            Some(&d) => {
                if r.valuation(y) < d {
                    return Ok(None);
                }
                z[j] = r.div_theta_pow(y, d);
            }
            None => {
                if !y.is_zero() {
                    return Ok(None);
                }
            }
        }
    }
    let x = sm.u.left_mul(&z)?;
    debug_assert_eq!(m.left_mul(&x)?, b);
    Ok(Some(x))
}

impl RingMatrix {
    /// `b · Mᵀ` for a row vector `b` of length `cols`.
    fn left_mul_transposed(&self, b: &[Elem]) -> Vec<Elem> {
        let r = &self.ring;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(b)
                    .fold(Elem::ZERO, |acc, (&x, &y)| r.add(acc, r.mul(x, y)))
            })
            .collect()
    }
}

/// Whether `x` lies in the row span of `m`.
pub fn in_span(m: &RingMatrix, x: &[Elem]) -> Result<bool> {
    Ok(solve(m, x)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_rows;

    fn mat(ring: &ChainRing, text: &str) -> RingMatrix {
        let rows = parse_rows(ring, text).unwrap();
        let cols = rows.first().map_or(0, |r| r.len());
        RingMatrix::from_rows(ring, cols, &rows).unwrap()
    }

    #[test]
    fn z4_examples() {
        let z4 = ChainRing::from_spec("zps:2:2").unwrap();
        let id = RingMatrix::identity(&z4, 2);
        let sf = standard_form(&id);
        assert_eq!(sf.matrix(), &id);
        assert_eq!((sf.rank(), sf.free_rank()), (2, 2));

        let m = mat(&z4, "(2,0);(0,1)");
        let sf = standard_form(&m);
        assert_eq!(
            sf.pivots(),
            &[Pivot { col: 1, exp: 0 }, Pivot { col: 0, exp: 1 }]
        );
        assert_eq!((sf.rank(), sf.free_rank()), (2, 1));

        let sm = smith_form(&m);
        assert_eq!(sm.exponents, vec![0, 1]);
        assert_eq!(sm.u.mul(&m).unwrap().mul(&sm.v).unwrap(), sm.d);
    }

    #[test]
    fn f4_counterexample() {
        let f4 = ChainRing::from_spec("gf:4").unwrap();
        let m = mat(&f4, "(1,0,a);(0,1,b)");
        let sf = standard_form(&m);
        assert_eq!(sf.matrix(), &m);
        assert_eq!(sf.rank(), 2);
        assert_eq!(kernel(&m), mat(&f4, "(1,a,b)"));
        let ones = parse_rows(&f4, "(1,1,1)").unwrap().remove(0);
        let x = solve(&m, &ones).unwrap().unwrap();
        assert_eq!(x, vec![f4.one(), f4.one()]);
    }

    #[test]
    fn kernel_and_solve_over_z4() {
        let z4 = ChainRing::from_spec("zps:2:2").unwrap();
        let two = mat(&z4, "(2)");
        assert_eq!(kernel(&two), mat(&z4, "(2)"));
        assert_eq!(solve(&two, &[z4.one()]).unwrap(), None);
        assert_eq!(solve(&two, &[Elem::ZERO]).unwrap(), Some(vec![Elem::ZERO]));
        assert!(solve(&two, &[Elem::ZERO, Elem::ZERO]).is_err());
        let f4 = ChainRing::from_spec("gf:4").unwrap();
        assert_eq!(kernel(&RingMatrix::identity(&f4, 3)).rows(), 0);
    }

    #[test]
    fn zero_matrix_smith() {
        let z4 = ChainRing::from_spec("zps:2:2").unwrap();
        let z = RingMatrix::zeros(&z4, 2, 3);
        let sm = smith_form(&z);
        assert!(sm.d.is_zero());
        assert!(sm.exponents.is_empty());
        assert_eq!(standard_form(&z).rank(), 0);
    }
}
