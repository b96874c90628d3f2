//! Exact integer and rational matrix arithmetic.
//!
//! Matrices are row-major with a single positive common denominator kept in
//! lowest terms, so two equal matrices are structurally equal. The integer
//! engine is an incremental Hermite reduction: rows are inserted one at a time
//! and combined with the existing pivot rows by 2x2 unimodular steps, which
//! makes transformation tracking and integer kernels fall out of the same code.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numtheory::ext_gcd;

/// A rational matrix stored as integer numerators over one common
/// denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    nums: Vec<BigInt>,
    den: BigInt,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, nums: Vec<BigInt>, den: BigInt) -> Result<Self> {
        if nums.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {}x{} matrix",
                nums.len(),
                rows,
                cols
            )));
        }
        if den.is_zero() {
            return Err(Error::Dimension("zero denominator".into()));
        }
        let mut m = RatMatrix {
            rows,
            cols,
            nums,
            den,
        };
        m.canonicalize();
        Ok(m)
    }

    fn canonicalize(&mut self) {
        if self.den.is_negative() {
            self.den = -core::mem::take(&mut self.den);
            for x in self.nums.iter_mut() {
                *x = -core::mem::take(x);
            }
        }
        let mut g = self.den.clone();
        for x in &self.nums {
            if g.is_one() {
                break;
            }
            g = g.gcd(x);
        }
        if self.nums.iter().all(|x| x.is_zero()) {
            g = self.den.clone();
        }
        if !g.is_one() {
            self.den /= &g;
            for x in self.nums.iter_mut() {
                *x /= &g;
            }
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            nums: vec![BigInt::zero(); rows * cols],
            den: BigInt::one(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.nums[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_int_rows(rows: &[Vec<BigInt>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_int_rows_with_cols(rows, cols, BigInt::one())
    }

    pub fn from_int_rows_with_cols(rows: &[Vec<BigInt>], cols: usize, den: BigInt) -> Result<Self> {
        let mut nums = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!("row {} has length {}", i, r.len())));
            }
            nums.extend(r.iter().cloned());
        }
        Self::new(rows.len(), cols, nums, den)
    }

    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::from_int_rows(&rows)
    }

    pub fn from_rat_rows(rows: &[Vec<BigRational>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rat_rows_with_cols(rows, cols)
    }

    pub fn from_rat_rows_with_cols(rows: &[Vec<BigRational>], cols: usize) -> Result<Self> {
        let mut den = BigInt::one();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!("row {} has length {}", i, r.len())));
            }
            for x in r {
                den = den.lcm(x.denom());
            }
        }
        let mut nums = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            for x in r {
                nums.push(x.numer() * (&den / x.denom()));
            }
        }
        Self::new(rows.len(), cols, nums, den)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn num(&self, i: usize, j: usize) -> &BigInt {
        &self.nums[i * self.cols + j]
    }

    pub fn get(&self, i: usize, j: usize) -> BigRational {
        BigRational::new(self.num(i, j).clone(), self.den.clone())
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// Numerator rows (the matrix times its denominator).
    pub fn int_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| self.nums[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn rat_row(&self, i: usize) -> Vec<BigRational> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    pub fn to_rat_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|i| self.rat_row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut nums = Vec::with_capacity(self.nums.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                nums.push(self.num(i, j).clone());
            }
        }
        RatMatrix {
            rows: self.cols,
            cols: self.rows,
            nums,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, rhs: &RatMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut nums = vec![BigInt::zero(); self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.num(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.num(k, j);
                    if !b.is_zero() {
                        nums[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Self::new(self.rows, rhs.cols, nums, &self.den * &rhs.den)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let nums = self.nums.iter().map(|x| x * c.numer()).collect();
        Self::new(self.rows, self.cols, nums, &self.den * c.denom()).expect("nonzero denominator")
    }

    pub fn det(&self) -> Result<BigRational> {
        det(self)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        solve_left(self, &RatMatrix::identity(self.rows))
    }
}

/// Row-style Hermite normal form `h = u * m` of an integer matrix of full row
/// rank, with `u` unimodular.
///
/// `h` is upper triangular in the echelon sense: pivots are positive, pivot
/// columns strictly increase down the rows, and every entry above a pivot lies
/// in `[0, pivot)`.
pub fn hnf(m: &RatMatrix) -> Result<(RatMatrix, RatMatrix)> {
    if !m.is_integral() {
        return Err(Error::Dimension("hnf needs an integer matrix".into()));
    }
    let (r, c) = (m.rows(), m.cols());
    let mut ech = Echelon::new(c + r, c);
    for (i, row) in m.int_rows().into_iter().enumerate() {
        let mut v = row;
        v.extend((0..r).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
        ech.insert(v);
        if let Some((idx, _)) = ech.leftovers.first() {
            return Err(Error::DependentRow { row: *idx });
        }
    }
    ech.reduce();
    let h: Vec<Vec<BigInt>> = ech.rows.iter().map(|v| v[..c].to_vec()).collect();
    let u: Vec<Vec<BigInt>> = ech.rows.iter().map(|v| v[c..].to_vec()).collect();
    Ok((
        RatMatrix::from_int_rows_with_cols(&h, c, BigInt::one())?,
        RatMatrix::from_int_rows_with_cols(&u, r, BigInt::one())?,
    ))
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &RatMatrix) -> Result<BigRational> {
    if m.rows() != m.cols() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let d = bareiss_det(m.int_rows());
    Ok(BigRational::new(d, num_traits::pow(m.den().clone(), n)))
}

/// Solves `x * a = b` exactly for `a` of full row rank.
pub fn solve_left(a: &RatMatrix, b: &RatMatrix) -> Result<RatMatrix> {
    if a.cols() != b.cols() {
        return Err(Error::Dimension(format!(
            "a has {} columns, b has {}",
            a.cols(),
            b.cols()
        )));
    }
    let (r, c) = (a.rows(), a.cols());
    let mut ech = Echelon::new(c + r, c);
    for (i, row) in a.int_rows().into_iter().enumerate() {
        let mut v = row;
        v.extend((0..r).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
        ech.insert(v);
        if let Some((idx, _)) = ech.leftovers.first() {
            return Err(Error::DependentRow { row: *idx });
        }
    }
    ech.reduce();
    let h: Vec<Vec<BigInt>> = ech.rows.iter().map(|v| v[..c].to_vec()).collect();
    let u: Vec<Vec<BigRational>> = ech
        .rows
        .iter()
        .map(|v| v[c..].iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    // x * A/da = b  <=>  y * H = da * b with x = y * U.
    let scale = BigRational::from_integer(a.den().clone());
    let mut out = Vec::with_capacity(b.rows());
    for i in 0..b.rows() {
        let w: Vec<BigRational> = b.rat_row(i).into_iter().map(|x| x * &scale).collect();
        let y = solve_echelon(&h, &ech.pivots, &w).ok_or(Error::Inconsistent { row: i })?;
        let mut x = vec![BigRational::zero(); r];
        for (k, yk) in y.iter().enumerate() {
            if yk.is_zero() {
                continue;
            }
            for j in 0..r {
                if !u[k][j].is_zero() {
                    x[j] += yk * &u[k][j];
                }
            }
        }
        out.push(x);
    }
    RatMatrix::from_rat_rows_with_cols(&out, r)
}

/// Solves `y * h = w` over the rationals for `h` in echelon form with the
/// given pivot columns; `None` if `w` is not in the row span.
pub(crate) fn solve_echelon(
    h: &[Vec<BigInt>],
    pivots: &[usize],
    w: &[BigRational],
) -> Option<Vec<BigRational>> {
    let mut rest: Vec<BigRational> = w.to_vec();
    let mut y = Vec::with_capacity(h.len());
    for (k, row) in h.iter().enumerate() {
        let p = pivots[k];
        let coef = &rest[p] / BigRational::from_integer(row[p].clone());
        if !coef.is_zero() {
            for (j, x) in row.iter().enumerate().skip(p) {
                if !x.is_zero() {
                    rest[j] -= &coef * BigRational::from_integer(x.clone());
                }
            }
        }
        y.push(coef);
    }
    if rest.iter().all(|x| x.is_zero()) {
        Some(y)
    } else {
        None
    }
}

/// Integer coordinates of `w` against echelon rows `h`, or `None` when `w` is
/// not an integer combination of them.
pub(crate) fn reduce_echelon_int(
    h: &[Vec<BigInt>],
    pivots: &[usize],
    w: &[BigInt],
) -> Option<Vec<BigInt>> {
    let mut rest = w.to_vec();
    let mut y = Vec::with_capacity(h.len());
    for (k, row) in h.iter().enumerate() {
        let p = pivots[k];
        if rest[..p].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let (q, r) = rest[p].div_rem(&row[p]);
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for (j, x) in row.iter().enumerate().skip(p) {
                if !x.is_zero() {
                    rest[j] -= &q * x;
                }
            }
        }
        y.push(q);
    }
    if rest.iter().all(|x| x.is_zero()) {
        Some(y)
    } else {
        None
    }
}

pub(crate) fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Incremental Hermite reduction of integer rows.
///
/// Only the first `pivot_width` columns take part in pivoting; any further
/// columns are carried along, which is how transforms and kernels are
/// recorded. Rows that vanish on the pivot part are set aside in `leftovers`
/// with their insertion index.
#[derive(Debug, Clone)]
pub(crate) struct Echelon {
    pub width: usize,
    pub pivot_width: usize,
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    pub leftovers: Vec<(usize, Vec<BigInt>)>,
    inserted: usize,
}

impl Echelon {
    pub fn new(width: usize, pivot_width: usize) -> Self {
        Echelon {
            width,
            pivot_width,
            rows: Vec::new(),
            pivots: Vec::new(),
            leftovers: Vec::new(),
            inserted: 0,
        }
    }

    pub fn insert(&mut self, mut v: Vec<BigInt>) {
        debug_assert_eq!(v.len(), self.width);
        let idx = self.inserted;
        self.inserted += 1;
        loop {
            let j = match v[..self.pivot_width].iter().position(|x| !x.is_zero()) {
                Some(j) => j,
                None => {
                    self.leftovers.push((idx, v));
                    return;
                }
            };
            match self.pivots.binary_search(&j) {
                Err(pos) => {
                    if v[j].is_negative() {
                        for x in v.iter_mut() {
                            *x = -core::mem::take(x);
                        }
                    }
                    self.rows.insert(pos, v);
                    self.pivots.insert(pos, j);
                    return;
                }
                Ok(k) => {
                    let h = &self.rows[k];
                    let a = h[j].clone();
                    let q = v[j].div_floor(&a);
                    if !q.is_zero() {
                        for (x, y) in v.iter_mut().zip(h.iter()).skip(j) {
                            if !y.is_zero() {
                                *x -= &q * y;
                            }
                        }
                    }
                    if v[j].is_zero() {
                        continue;
                    }
                    let b = v[j].clone();
                    let (g, s, t) = ext_gcd(&a, &b);
                    let (ag, bg) = (&a / &g, &b / &g);
                    let mut new_h = Vec::with_capacity(self.width);
                    let mut new_v = Vec::with_capacity(self.width);
                    for (x, y) in h.iter().zip(v.iter()) {
                        new_h.push(&s * x + &t * y);
                        new_v.push(&bg * x - &ag * y);
                    }
                    self.rows[k] = new_h;
                    v = new_v;
                }
            }
        }
    }

    /// Brings every entry above a pivot into `[0, pivot)`.
    pub fn reduce(&mut self) {
        for k in 0..self.rows.len() {
            let p = self.pivots[k];
            let (upper, lower) = self.rows.split_at_mut(k);
            let pivot_row = &lower[0];
            let piv = &pivot_row[p];
            for row in upper.iter_mut() {
                let q = row[p].div_floor(piv);
                if !q.is_zero() {
                    for (x, y) in row.iter_mut().zip(pivot_row.iter()).skip(p) {
                        if !y.is_zero() {
                            *x -= &q * y;
                        }
                    }
                }
            }
        }
    }
}

/// Hermite basis of the integer row span of `gens`; returns rows and pivots.
pub(crate) fn int_span_hnf(gens: &[Vec<BigInt>], width: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut ech = Echelon::new(width, width);
    for g in gens {
        ech.insert(g.clone());
    }
    ech.reduce();
    (ech.rows, ech.pivots)
}

/// Basis of `{c in Z^r : c * m = 0 (mod modulus)}` for an `r x k` integer
/// matrix `m`, returned in Hermite form.
pub(crate) fn int_kernel_mod(m: &[Vec<BigInt>], k: usize, modulus: &BigInt) -> Vec<Vec<BigInt>> {
    let r = m.len();
    let mut ech = Echelon::new(k + r, k);
    for j in 0..k {
        let mut v = vec![BigInt::zero(); k + r];
        v[j] = modulus.clone();
        ech.insert(v);
    }
    for (i, row) in m.iter().enumerate() {
        let mut v: Vec<BigInt> = row.iter().map(|x| x.mod_floor(modulus)).collect();
        v.extend((0..r).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
        ech.insert(v);
        // Keep the carried transform small: the kernel always contains
        // modulus * Z^r, so the tail can be reduced through extra rows.
        if ech.rows.len() == k {
            for row in ech.rows.iter_mut() {
                for x in row[k..].iter_mut() {
                    *x = x.mod_floor(modulus);
                }
            }
        }
    }
    let mut gens: Vec<Vec<BigInt>> = ech.leftovers.into_iter().map(|(_, v)| v[k..].to_vec()).collect();
    for i in 0..r {
        let mut v = vec![BigInt::zero(); r];
        v[i] = modulus.clone();
        gens.push(v);
    }
    int_span_hnf(&gens, r).0
}
