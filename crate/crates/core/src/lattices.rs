//! Lattices in `Q^n`, generalized module indices, and the over/sub-lattice
//! operators attached to an acting order.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{int_kernel_mod, int_span_hnf, reduce_echelon_int, solve_echelon, RatMatrix};
use crate::numtheory::{factor_biguint, to_bigint};

/// A lattice `(1/den) * H` where `H` is the Hermite basis of an integer
/// lattice and `den` is minimal, so equal lattices compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZLattice {
    ambient_dim: usize,
    den: BigInt,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl ZLattice {
    fn canonical(ambient_dim: usize, gens: &[Vec<BigInt>], den: BigInt) -> Self {
        let (mut rows, pivots) = int_span_hnf(gens, ambient_dim);
        let mut g = den.clone();
        for r in &rows {
            for x in r {
                if g.is_one() {
                    break;
                }
                g = g.gcd(x);
            }
        }
        let den = if rows.is_empty() {
            BigInt::one()
        } else if g.is_one() {
            den
        } else {
            for r in rows.iter_mut() {
                for x in r.iter_mut() {
                    *x /= &g;
                }
            }
            den / &g
        };
        ZLattice {
            ambient_dim,
            den,
            rows,
            pivots,
        }
    }

    /// The lattice spanned by the rows of `gens`, which need not be
    /// independent.
    pub fn from_generators(gens: &RatMatrix) -> Self {
        Self::canonical(gens.cols(), &gens.int_rows(), gens.den().clone())
    }

    pub fn from_rat_vectors(ambient_dim: usize, vecs: &[Vec<BigRational>]) -> Result<Self> {
        Ok(Self::from_generators(&RatMatrix::from_rat_rows_with_cols(vecs, ambient_dim)?))
    }

    /// The lattice with the given basis; the rows must be independent.
    pub fn from_basis(basis: &RatMatrix) -> Result<Self> {
        let l = Self::from_generators(basis);
        if l.rank() != basis.rows() {
            // Name the first row that adds nothing new.
            let rows = basis.int_rows();
            for i in 0..rows.len() {
                if int_span_hnf(&rows[..=i], basis.cols()).0.len() <= i {
                    return Err(Error::DependentRow { row: i });
                }
            }
        }
        Ok(l)
    }

    pub fn standard(n: usize) -> Self {
        Self::from_generators(&RatMatrix::identity(n))
    }

    pub fn zero(n: usize) -> Self {
        Self::from_generators(&RatMatrix::zeros(0, n))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ambient_dim
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    /// Integer Hermite rows; the basis is these over [`Self::den`].
    pub fn int_rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis(&self) -> RatMatrix {
        RatMatrix::from_int_rows_with_cols(&self.rows, self.ambient_dim, self.den.clone()).expect("consistent")
    }

    pub fn basis_vectors(&self) -> Vec<Vec<BigRational>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| BigRational::new(x.clone(), self.den.clone())).collect())
            .collect()
    }

    /// Rational coordinates of `v` in the basis, if `v` lies in the span.
    pub fn coords(&self, v: &[BigRational]) -> Option<Vec<BigRational>> {
        if v.len() != self.ambient_dim {
            return None;
        }
        let d = BigRational::from_integer(self.den.clone());
        let w: Vec<BigRational> = v.iter().map(|x| x * &d).collect();
        solve_echelon(&self.rows, &self.pivots, &w)
    }

    /// Integer coordinates of `v`, if `v` lies in the lattice.
    pub fn int_coords(&self, v: &[BigRational]) -> Option<Vec<BigInt>> {
        if v.len() != self.ambient_dim {
            return None;
        }
        let mut w = Vec::with_capacity(v.len());
        for x in v {
            let y = x * BigRational::from_integer(self.den.clone());
            if !y.is_integer() {
                return None;
            }
            w.push(y.to_integer());
        }
        reduce_echelon_int(&self.rows, &self.pivots, &w)
    }

    pub fn contains_vec(&self, v: &[BigRational]) -> bool {
        self.int_coords(v).is_some()
    }

    pub fn in_span(&self, v: &[BigRational]) -> bool {
        self.coords(v).is_some()
    }

    /// `other` is a sublattice of `self`.
    pub fn contains(&self, other: &ZLattice) -> bool {
        self.ambient_dim == other.ambient_dim
            && other.basis_vectors().iter().all(|v| self.contains_vec(v))
    }

    pub fn same_span(&self, other: &ZLattice) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.pivots == other.pivots
            && other.basis_vectors().iter().all(|v| self.in_span(v))
    }

    pub fn sum(&self, other: &ZLattice) -> Result<ZLattice> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::Dimension("lattice sum across ambient spaces".into()));
        }
        let den = self.den.lcm(&other.den);
        let (fa, fb) = (&den / &self.den, &den / &other.den);
        let mut gens: Vec<Vec<BigInt>> = self.rows.iter().map(|r| r.iter().map(|x| x * &fa).collect()).collect();
        gens.extend(other.rows.iter().map(|r| r.iter().map(|x| x * &fb).collect::<Vec<_>>()));
        Ok(Self::canonical(self.ambient_dim, &gens, den))
    }

    /// Intersection, through the integer kernel of `[A | A ; -B | 0]` on
    /// bases scaled to a common denominator.
    pub fn intersect(&self, other: &ZLattice) -> Result<ZLattice> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::Dimension("lattice intersection across ambient spaces".into()));
        }
        let n = self.ambient_dim;
        let den = self.den.lcm(&other.den);
        let (fa, fb) = (&den / &self.den, &den / &other.den);
        let a: Vec<Vec<BigInt>> = self.rows.iter().map(|r| r.iter().map(|x| x * &fa).collect()).collect();
        let b: Vec<Vec<BigInt>> = other.rows.iter().map(|r| r.iter().map(|x| x * &fb).collect()).collect();
        let mut ech = crate::exactlin::Echelon::new(2 * n, n);
        for r in &a {
            let mut v = r.clone();
            v.extend(r.iter().cloned());
            ech.insert(v);
        }
        for r in &b {
            let mut v: Vec<BigInt> = r.iter().map(|x| -x).collect();
            v.extend((0..n).map(|_| BigInt::zero()));
            ech.insert(v);
        }
        let gens: Vec<Vec<BigInt>> = ech.leftovers.into_iter().map(|(_, v)| v[n..].to_vec()).collect();
        Ok(Self::canonical(n, &gens, den))
    }

    pub fn scale(&self, c: &BigRational) -> ZLattice {
        let gens: Vec<Vec<BigInt>> = self.rows.iter().map(|r| r.iter().map(|x| x * c.numer()).collect()).collect();
        Self::canonical(self.ambient_dim, &gens, &self.den * c.denom())
    }

    /// The image `{v * m : v in self}`, possibly of smaller rank.
    pub fn image(&self, m: &RatMatrix) -> Result<ZLattice> {
        Ok(Self::from_generators(&self.basis().mul(m)?))
    }

    /// `{v in self : v * r in target for every r in maps}`.
    ///
    /// Every `v * r` must lie in the span of `target`. Each map cuts the
    /// current lattice down to the solutions of a congruence system on its
    /// coordinates.
    pub fn preimage_intersection(&self, maps: &[RatMatrix], target: &ZLattice) -> Result<ZLattice> {
        let mut cur = self.clone();
        for r in maps {
            if r.rows() != self.ambient_dim || r.cols() != target.ambient_dim {
                return Err(Error::ActionMismatch);
            }
            let imgs = cur.basis().mul(r)?;
            let mut coords = Vec::with_capacity(imgs.rows());
            for i in 0..imgs.rows() {
                coords.push(target.coords(&imgs.rat_row(i)).ok_or(Error::ActionMismatch)?);
            }
            let k = target.rank();
            let c = RatMatrix::from_rat_rows_with_cols(&coords, k)?;
            if c.is_integral() {
                continue;
            }
            let kernel = int_kernel_mod(&c.int_rows(), k, c.den());
            let kmat = RatMatrix::from_int_rows_with_cols(&kernel, cur.rank(), BigInt::one())?;
            cur = Self::from_generators(&kmat.mul(&cur.basis())?);
        }
        Ok(cur)
    }

    /// Dual lattice under the standard pairing; full lattices only.
    pub fn dual(&self) -> Result<ZLattice> {
        if !self.is_full() {
            return Err(Error::NotFull);
        }
        let inv = self.basis().inverse()?;
        Ok(Self::from_generators(&inv.transpose()))
    }

    /// Stacks the lattices into the direct sum in the product space.
    pub fn direct_sum(parts: &[ZLattice]) -> ZLattice {
        let total: usize = parts.iter().map(|p| p.ambient_dim).sum();
        let den = parts.iter().fold(BigInt::one(), |acc, p| acc.lcm(&p.den));
        let mut gens = Vec::new();
        let mut offset = 0;
        for p in parts {
            let f = &den / &p.den;
            for r in &p.rows {
                let mut v = vec![BigInt::zero(); total];
                for (j, x) in r.iter().enumerate() {
                    v[offset + j] = x * &f;
                }
                gens.push(v);
            }
            offset += p.ambient_dim;
        }
        Self::canonical(total, &gens, den)
    }
}

/// `[m : n]`: the absolute determinant of the map carrying a basis of `m` to
/// a basis of `n`. Both must span the same subspace.
pub fn module_index(m: &ZLattice, n: &ZLattice) -> Result<ModuleIndex> {
    if !m.same_span(n) {
        return Err(Error::DifferentSpans);
    }
    // Equal spans give equal pivot columns, so the transition matrix
    // between the two Hermite bases is triangular.
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (k, &p) in m.pivots.iter().enumerate() {
        num *= &n.rows[k][p];
        den *= &m.rows[k][p];
    }
    let r = m.rank();
    num *= num_traits::pow(m.den.clone(), r);
    den *= num_traits::pow(n.den.clone(), r);
    ModuleIndex::from_rational(BigRational::new(num, den))
}

/// A positive rational with its prime factorization.
#[derive(Debug, Clone)]
pub struct ModuleIndex {
    value: BigRational,
    factors: BTreeMap<BigUint, i64>,
}

impl PartialEq for ModuleIndex {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Eq for ModuleIndex {}

impl ModuleIndex {
    pub fn one() -> Self {
        ModuleIndex {
            value: BigRational::one(),
            factors: BTreeMap::new(),
        }
    }

    pub fn from_rational(value: BigRational) -> Result<Self> {
        if !value.is_positive() {
            return Err(Error::Formula(format!("index must be positive, got {value}")));
        }
        let mut factors = factor_biguint(value.numer().magnitude());
        for (p, k) in factor_biguint(value.denom().magnitude()) {
            *factors.entry(p).or_insert(0) -= k;
        }
        factors.retain(|_, k| *k != 0);
        Ok(ModuleIndex { value, factors })
    }

    pub fn from_integer(n: u64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n.max(1)))).expect("positive")
    }

    /// Builds the value from prime powers; exponents may be negative.
    pub fn from_factors(factors: BTreeMap<BigUint, i64>) -> Self {
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (p, &k) in &factors {
            if k > 0 {
                num *= num_traits::pow(p.clone(), k as usize);
            } else if k < 0 {
                den *= num_traits::pow(p.clone(), (-k) as usize);
            }
        }
        let mut factors = factors;
        factors.retain(|_, k| *k != 0);
        ModuleIndex {
            value: BigRational::new(to_bigint(num), to_bigint(den)),
            factors,
        }
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn factors(&self) -> &BTreeMap<BigUint, i64> {
        &self.factors
    }

    pub fn is_integral(&self) -> bool {
        self.value.is_integer()
    }

    pub fn to_u64(&self) -> Option<u64> {
        if self.is_integral() {
            self.value.to_integer().to_u64()
        } else {
            None
        }
    }

    /// `self` divides `other`: the quotient `other / self` is an integer.
    pub fn divides(&self, other: &ModuleIndex) -> bool {
        (&other.value / &self.value).is_integer()
    }

    pub fn mul(&self, other: &ModuleIndex) -> ModuleIndex {
        let mut factors = self.factors.clone();
        for (p, k) in &other.factors {
            *factors.entry(p.clone()).or_insert(0) += k;
        }
        factors.retain(|_, k| *k != 0);
        ModuleIndex {
            value: &self.value * &other.value,
            factors,
        }
    }

    pub fn div(&self, other: &ModuleIndex) -> ModuleIndex {
        self.mul(&other.pow(-1))
    }

    pub fn pow(&self, k: i64) -> ModuleIndex {
        let factors = self.factors.iter().map(|(p, e)| (p.clone(), e * k)).collect();
        Self::from_factors(factors)
    }

    /// Exact square root, when every exponent is even.
    pub fn sqrt(&self) -> Option<ModuleIndex> {
        if self.factors.values().any(|k| k % 2 != 0) {
            return None;
        }
        let r = Self::from_factors(self.factors.iter().map(|(p, k)| (p.clone(), k / 2)).collect());
        (&r.value * &r.value == self.value).then_some(r)
    }

    /// Decimal rendering of the rational value.
    pub fn to_decimal(&self) -> String {
        format!("{}", self.value)
    }
}

impl fmt::Display for ModuleIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// The action of an order on an ambient space, given by the matrices of a
/// `Z`-basis of the order (rows act as `v -> v * m`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleAction {
    ambient_dim: usize,
    generators: Vec<RatMatrix>,
}

impl ModuleAction {
    pub fn new(ambient_dim: usize, generators: Vec<RatMatrix>) -> Result<Self> {
        for m in &generators {
            if m.rows() != ambient_dim || m.cols() != ambient_dim {
                return Err(Error::ActionMismatch);
            }
        }
        Ok(ModuleAction {
            ambient_dim,
            generators,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[RatMatrix] {
        &self.generators
    }

    /// The same action repeated on each of `n` copies of the space.
    pub fn diagonal(&self, n: usize) -> ModuleAction {
        let d = self.ambient_dim;
        let generators = self
            .generators
            .iter()
            .map(|m| {
                let mut rows = vec![vec![BigRational::zero(); d * n]; d * n];
                for c in 0..n {
                    for i in 0..d {
                        for j in 0..d {
                            rows[c * d + i][c * d + j] = m.get(i, j);
                        }
                    }
                }
                RatMatrix::from_rat_rows_with_cols(&rows, d * n).expect("square")
            })
            .collect();
        ModuleAction {
            ambient_dim: d * n,
            generators,
        }
    }

    /// The contragredient action on the dual space.
    pub fn transpose(&self) -> ModuleAction {
        ModuleAction {
            ambient_dim: self.ambient_dim,
            generators: self.generators.iter().map(|m| m.transpose()).collect(),
        }
    }
}

/// `Gamma X`: the smallest lattice containing `x` and stable under the
/// action.
pub fn min_overlattice(act: &ModuleAction, x: &ZLattice) -> Result<ZLattice> {
    if act.ambient_dim != x.ambient_dim() {
        return Err(Error::ActionMismatch);
    }
    let mut cur = x.clone();
    loop {
        let mut next = cur.clone();
        let b = cur.basis();
        for m in &act.generators {
            next = next.sum(&ZLattice::from_generators(&b.mul(m)?))?;
        }
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
}

/// `^Gamma X`: the largest stable sublattice of `x`.
///
/// Realized as `{v in x : v * g in x for each basis element g}`. This set is
/// contained in `x`, is a lattice, and is stable: for `g, h` in the order,
/// `(v * g) * h = v * (gh)` and `gh` is an integral combination of the basis,
/// so `v * g` again satisfies the condition. Any stable sublattice satisfies
/// the condition elementwise, hence lies inside it.
pub fn max_sublattice(act: &ModuleAction, x: &ZLattice) -> Result<ZLattice> {
    if act.ambient_dim != x.ambient_dim() {
        return Err(Error::ActionMismatch);
    }
    x.preimage_intersection(&act.generators, x)
}
