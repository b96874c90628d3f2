//! Orders in `Q[G]` and in its subalgebras `e Q[G]` for central idempotents
//! `e`: group rings, maximal orders, discriminants and conductors.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactlin::RatMatrix;
use crate::grouprings::{abelian_wedderburn, trace_idempotent, GroupRingElement};
use crate::groups::FinGroup;
use crate::lattices::{max_sublattice, module_index, ModuleAction, ModuleIndex, ZLattice};
use crate::numtheory::factor_biguint;

/// An order: a full lattice in the algebra `unit * Q[G]` that contains
/// `unit` and is closed under multiplication. Coordinates are always those
/// of `Q[G]`, so orders in a proper subalgebra are non-full lattices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderDesc {
    group: Arc<FinGroup>,
    lattice: ZLattice,
    unit: GroupRingElement,
}

impl OrderDesc {
    pub fn new(group: &Arc<FinGroup>, lattice: ZLattice, unit: GroupRingElement) -> Result<Self> {
        if lattice.ambient_dim() != group.size() {
            return Err(Error::Dimension("order lattice must live in Q[G]".into()));
        }
        if unit.mul(&unit)? != unit || !unit.is_central() {
            return Err(Error::NotAnOrder("unit is not a central idempotent".into()));
        }
        let dim = crate::grouprings::idempotent_dimension(&unit) as usize;
        if lattice.rank() != dim {
            return Err(Error::NotAnOrder(format!(
                "rank {} is not the algebra dimension {}",
                lattice.rank(),
                dim
            )));
        }
        if !lattice.contains_vec(unit.coeffs()) {
            return Err(Error::NotAnOrder("unit not in lattice".into()));
        }
        let o = OrderDesc {
            group: group.clone(),
            lattice,
            unit,
        };
        let basis = o.basis_elements();
        for a in &basis {
            if a.mul(&o.unit)? != *a {
                return Err(Error::NotAnOrder("lattice leaves the subalgebra".into()));
            }
            for b in &basis {
                if !o.lattice.contains_vec(a.mul(b)?.coeffs()) {
                    return Err(Error::NotAnOrder("not closed under multiplication".into()));
                }
            }
        }
        Ok(o)
    }

    pub fn group(&self) -> &Arc<FinGroup> {
        &self.group
    }

    pub fn lattice(&self) -> &ZLattice {
        &self.lattice
    }

    pub fn unit(&self) -> &GroupRingElement {
        &self.unit
    }

    pub fn algebra_dim(&self) -> usize {
        self.lattice.rank()
    }

    /// Structure constants of the ambient `Q[G]` on standard coordinates:
    /// `g_i * g_j = g_{table[i][j]}`.
    pub fn mul_tensor(&self) -> Vec<Vec<usize>> {
        self.group.table()
    }

    pub fn basis_elements(&self) -> Vec<GroupRingElement> {
        self.lattice
            .basis_vectors()
            .into_iter()
            .map(|v| GroupRingElement::new(&self.group, v).expect("length |G|"))
            .collect()
    }

    /// The order acting on `Q[G]` by left multiplication.
    pub fn left_action(&self) -> ModuleAction {
        let gens = self.basis_elements().iter().map(|b| b.left_mul_matrix()).collect();
        ModuleAction::new(self.group.size(), gens).expect("square")
    }

    /// The order acting on `Q[G]` by right multiplication.
    pub fn right_action(&self) -> ModuleAction {
        let gens = self.basis_elements().iter().map(|b| b.right_mul_matrix()).collect();
        ModuleAction::new(self.group.size(), gens).expect("square")
    }

    pub fn contains(&self, other: &OrderDesc) -> bool {
        self.lattice.contains(&other.lattice)
    }

    /// Integer coordinates of `b_i * b_j` in the order's own basis.
    fn structure_constants(&self) -> Result<Vec<Vec<Vec<BigInt>>>> {
        let basis = self.basis_elements();
        let mut out = Vec::with_capacity(basis.len());
        for a in &basis {
            let mut row = Vec::with_capacity(basis.len());
            for b in &basis {
                let p = a.mul(b)?;
                row.push(
                    self.lattice
                        .int_coords(p.coeffs())
                        .ok_or_else(|| Error::NotAnOrder("not closed under multiplication".into()))?,
                );
            }
            out.push(row);
        }
        Ok(out)
    }
}

/// `Z[G]` on the group-element basis.
pub fn group_ring_order(group: &Arc<FinGroup>) -> OrderDesc {
    OrderDesc {
        group: group.clone(),
        lattice: ZLattice::standard(group.size()),
        unit: GroupRingElement::one(group),
    }
}

/// The maximal order of `Q[G]` for abelian `G`: in each cyclotomic component
/// the span of the powers of the chosen primitive root of unity.
pub fn maximal_order_abelian(group: &Arc<FinGroup>) -> Result<OrderDesc> {
    let w = abelian_wedderburn(group)?;
    let mut gens = Vec::new();
    for c in &w.components {
        let mut x = c.idempotent.clone();
        for _ in 0..c.degree {
            gens.push(x.coeffs().to_vec());
            x = x.mul(&c.generator_image)?;
        }
    }
    let lattice = ZLattice::from_rat_vectors(group.size(), &gens)?;
    OrderDesc::new(group, lattice, GroupRingElement::one(group))
}

/// Absolute discriminant under the regular trace form `(x, y) -> Tr(xy)`.
pub fn discriminant(o: &OrderDesc) -> Result<BigUint> {
    let basis = o.basis_elements();
    let r = basis.len();
    let mut gram = vec![vec![BigRational::zero(); r]; r];
    for i in 0..r {
        for j in i..r {
            let t = basis[i].mul(&basis[j])?.regular_trace();
            gram[i][j] = t.clone();
            gram[j][i] = t;
        }
    }
    let d = RatMatrix::from_rat_rows_with_cols(&gram, r)?.det()?;
    if !d.is_integer() {
        return Err(Error::Internal("non-integral discriminant".into()));
    }
    Ok(d.to_integer().magnitude().clone())
}

/// `^Gamma Lambda = {x : Gamma x in Lambda}` for `small` inside `big`.
pub fn conductor(big: &OrderDesc, small: &OrderDesc) -> Result<ZLattice> {
    if !big.contains(small) {
        return Err(Error::NotContained("small order", "big order"));
    }
    max_sublattice(&big.left_action(), &small.lattice)
}

/// `{x : x Gamma in Lambda}`.
pub fn right_conductor(big: &OrderDesc, small: &OrderDesc) -> Result<ZLattice> {
    if !big.contains(small) {
        return Err(Error::NotContained("small order", "big order"));
    }
    max_sublattice(&big.right_action(), &small.lattice)
}

/// The projection `o e` of an order into `e Q[G]`, `e = 1 - |G|^{-1} Tr_G`.
pub fn trace_quotient_order(o: &OrderDesc) -> Result<OrderDesc> {
    project_order(o, &trace_idempotent(&o.group))
}

/// `o * eps` as an order of `eps Q[G]` for a central idempotent `eps`.
pub fn project_order(o: &OrderDesc, eps: &GroupRingElement) -> Result<OrderDesc> {
    let lattice = o.lattice.image(&eps.right_mul_matrix())?;
    let unit = o.unit.mul(eps)?;
    OrderDesc::new(&o.group, lattice, unit)
}

/// `Z[G] + eps Z[G]` for a central idempotent `eps`.
pub fn idempotent_extension(group: &Arc<FinGroup>, eps: &GroupRingElement) -> Result<OrderDesc> {
    let zg = ZLattice::standard(group.size());
    let lattice = zg.sum(&zg.image(&eps.right_mul_matrix())?)?;
    OrderDesc::new(group, lattice, GroupRingElement::one(group))
}

/// Primes dividing the discriminant, ascending.
pub fn bad_primes(o: &OrderDesc) -> Result<Vec<u64>> {
    let d = discriminant(o)?;
    let mut out = Vec::new();
    for p in factor_biguint(&d).into_keys() {
        out.push(
            p.to_u64()
                .ok_or_else(|| Error::Unsupported(format!("prime {p} too large for the radical step")))?,
        );
    }
    Ok(out)
}

/// A maximal order containing `start`, by repeated enlargement at each bad
/// prime in ascending order.
pub fn maximal_order_idealizer(start: &OrderDesc) -> Result<OrderDesc> {
    let primes = bad_primes(start)?;
    maximal_order_idealizer_with_primes(start, &primes)
}

/// As [`maximal_order_idealizer`], processing primes in the given order.
///
/// At a prime `p` the order is replaced by the left or right idealizer of
/// its `p`-radical while that grows; once the radical is stable, the
/// idealizers of the maximal two-sided ideals over `p` are tried. An order
/// where all of these coincide with itself is `p`-maximal.
pub fn maximal_order_idealizer_with_primes(start: &OrderDesc, primes: &[u64]) -> Result<OrderDesc> {
    let mut cur = start.clone();
    let all = bad_primes(start)?;
    for p in &all {
        if !primes.contains(p) {
            return Err(Error::Formula(format!("prime list misses bad prime {p}")));
        }
    }
    loop {
        let mut grew = false;
        for &p in primes {
            while let Some(bigger) = enlarge_at(&cur, p)? {
                cur = bigger;
                grew = true;
            }
        }
        if !grew {
            return Ok(cur);
        }
    }
}

fn enlarge_at(o: &OrderDesc, p: u64) -> Result<Option<OrderDesc>> {
    let r = o.algebra_dim();
    let consts = o.structure_constants()?;
    let fp = FpAlgebra::new(&consts, p);
    let rad = radical_mod_p(&consts, r, p);
    let j = lift_ideal(o, &rad, p)?;
    if let Some(b) = try_idealizers(o, &j, p)? {
        return Ok(Some(b));
    }
    for m in fp.maximal_ideals_over(&rad) {
        let ideal = lift_ideal(o, &m, p)?;
        if let Some(b) = try_idealizers(o, &ideal, p)? {
            return Ok(Some(b));
        }
    }
    Ok(None)
}

/// The lattice spanned by `p * o` and lifts of the given residues.
fn lift_ideal(o: &OrderDesc, residues: &[Vec<u64>], p: u64) -> Result<ZLattice> {
    let r = o.algebra_dim();
    let mut gens: Vec<Vec<BigInt>> = residues
        .iter()
        .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    for k in 0..r {
        let mut v = vec![BigInt::zero(); r];
        v[k] = BigInt::from(p);
        gens.push(v);
    }
    let coords = RatMatrix::from_int_rows_with_cols(&gens, r, BigInt::one())?;
    ZLattice::from_generators(&coords).image(&o.lattice.basis())
}

fn try_idealizers(o: &OrderDesc, ideal: &ZLattice, p: u64) -> Result<Option<OrderDesc>> {
    let source = o.lattice.scale(&BigRational::new(BigInt::one(), BigInt::from(p)));
    let elems: Vec<GroupRingElement> = ideal
        .basis_vectors()
        .into_iter()
        .map(|v| GroupRingElement::new(&o.group, v).expect("length |G|"))
        .collect();
    let right: Vec<RatMatrix> = elems.iter().map(|x| x.right_mul_matrix()).collect();
    let left_idealizer = source.preimage_intersection(&right, ideal)?;
    if left_idealizer != o.lattice {
        return Ok(Some(OrderDesc::new(&o.group, left_idealizer, o.unit.clone())?));
    }
    let left: Vec<RatMatrix> = elems.iter().map(|x| x.left_mul_matrix()).collect();
    let right_idealizer = source.preimage_intersection(&left, ideal)?;
    if right_idealizer != o.lattice {
        return Ok(Some(OrderDesc::new(&o.group, right_idealizer, o.unit.clone())?));
    }
    Ok(None)
}

/// The maximal order of `Q[G]`: closed form for abelian groups, otherwise
/// the idealizer refinement of `Z[G]`.
pub fn maximal_order(group: &Arc<FinGroup>) -> Result<OrderDesc> {
    if group.is_abelian() {
        maximal_order_abelian(group)
    } else {
        maximal_order_idealizer(&group_ring_order(group))
    }
}

/// `[big : small]` for two orders of the same algebra.
pub fn order_index(big: &OrderDesc, small: &OrderDesc) -> Result<ModuleIndex> {
    module_index(&big.lattice, &small.lattice)
}

/// `sum_i |G| n_i^{-1} D_i^{-1}`, where `D_i^{-1}` is the inverse different
/// of the component `m eps_i` under `tr_i = Tr / n_i`, the regular trace of
/// `Q[G]` rescaled to the reduced trace of the component.
pub fn jacobinski_lattice(m: &OrderDesc, components: &[(GroupRingElement, u64)]) -> Result<ZLattice> {
    let g = m.group.size() as i64;
    let mut total = ZLattice::zero(m.group.size());
    for (eps, n_i) in components {
        if *n_i == 0 {
            return Err(Error::Formula("matrix degree must be positive".into()));
        }
        let ni = BigRational::from_integer(BigInt::from(*n_i));
        let mi = m.lattice.image(&eps.right_mul_matrix())?;
        let basis: Vec<GroupRingElement> = mi
            .basis_vectors()
            .into_iter()
            .map(|v| GroupRingElement::new(&m.group, v).expect("length |G|"))
            .collect();
        let k = basis.len();
        let mut gram = vec![vec![BigRational::zero(); k]; k];
        for a in 0..k {
            for b in 0..k {
                gram[a][b] = basis[a].mul(&basis[b])?.regular_trace() / &ni;
            }
        }
        let ginv = RatMatrix::from_rat_rows_with_cols(&gram, k)?.inverse()?;
        let inv_diff = ZLattice::from_generators(&ginv.mul(&mi.basis())?);
        let scaled = inv_diff.scale(&(BigRational::from_integer(BigInt::from(g)) / ni));
        total = total.sum(&scaled)?;
    }
    Ok(total)
}

/// Structure constants reduced mod `p`, with products and linear algebra
/// over the field with `p` elements.
struct FpAlgebra {
    p: u64,
    r: usize,
    c: Vec<Vec<Vec<u64>>>,
}

impl FpAlgebra {
    fn new(consts: &[Vec<Vec<BigInt>>], p: u64) -> Self {
        let bp = BigInt::from(p);
        let c = consts
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.iter().map(|x| x.mod_floor(&bp).to_u64().expect("small")).collect())
                    .collect()
            })
            .collect();
        FpAlgebra { p, r: consts.len(), c }
    }

    fn mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.r];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let ab = a * b % self.p;
                for (o, &c) in out.iter_mut().zip(&self.c[i][j]) {
                    *o = (*o + ab * c) % self.p;
                }
            }
        }
        out
    }

    fn unit_vec(&self, k: usize) -> Vec<u64> {
        let mut v = vec![0; self.r];
        v[k] = 1;
        v
    }

    fn sub(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).map(|(a, b)| (a + self.p - b) % self.p).collect()
    }

    fn scale(&self, x: &[u64], c: u64) -> Vec<u64> {
        x.iter().map(|a| a * c % self.p).collect()
    }

    /// The identity, found as the solution of `1 * b_k = b_k`.
    fn one(&self) -> Vec<u64> {
        // Columns: coordinates of x * b_k for all k, flattened.
        let rows: Vec<Vec<u64>> = (0..self.r)
            .map(|i| {
                let ei = self.unit_vec(i);
                (0..self.r).flat_map(|k| self.mul(&ei, &self.unit_vec(k))).collect()
            })
            .collect();
        let target: Vec<u64> = (0..self.r).flat_map(|k| self.unit_vec(k)).collect();
        fp_solve(&rows, &target, self.p).expect("algebra has a unit")
    }

    /// Maximal two-sided ideals containing `p` as residue subspaces, given
    /// the radical. Found from the primitive idempotents of the centre of
    /// the semisimple quotient.
    fn maximal_ideals_over(&self, rad: &[Vec<u64>]) -> Vec<Vec<Vec<u64>>> {
        let p = self.p;
        let rad = fp_rref(rad.to_vec(), p);
        let reduce = |v: &[u64]| fp_reduce(&rad, v, p);
        // Centre of the quotient: z with z b_k - b_k z in the radical.
        let rows: Vec<Vec<u64>> = (0..self.r)
            .map(|i| {
                let z = self.unit_vec(i);
                (0..self.r)
                    .flat_map(|k| {
                        let b = self.unit_vec(k);
                        reduce(&self.sub(&self.mul(&z, &b), &self.mul(&b, &z)))
                    })
                    .collect()
            })
            .collect();
        let centre = quotient_basis(&fp_left_kernel(&rows, p), &rad, p);
        // Frobenius-fixed part: z^p = z.
        let frob_rows: Vec<Vec<u64>> = centre
            .iter()
            .map(|z| {
                let mut zp = z.clone();
                for _ in 1..p {
                    zp = self.mul(&zp, z);
                }
                reduce(&self.sub(&zp, z))
            })
            .collect();
        let fixed: Vec<Vec<u64>> = fp_left_kernel(&frob_rows, p)
            .iter()
            .map(|c| fp_combine(c, &centre, p))
            .collect();
        let fixed = quotient_basis(&fixed, &rad, p);
        if fixed.len() <= 1 {
            return Vec::new();
        }
        let one = reduce(&self.one());
        let mut idems = vec![one.clone()];
        for y in &fixed {
            let mut next = Vec::new();
            for e in &idems {
                let ye = reduce(&self.mul(y, e));
                let span_e: Vec<Vec<u64>> = fixed.iter().map(|f| reduce(&self.mul(e, f))).collect();
                let dim_e = fp_rref(span_e, p).len();
                let eigen: Vec<u64> = (0..p)
                    .filter(|&lam| {
                        let t = self.sub(&ye, &self.scale(e, lam));
                        let span: Vec<Vec<u64>> = fixed.iter().map(|f| reduce(&self.mul(&t, f))).collect();
                        fp_rref(span, p).len() < dim_e
                    })
                    .collect();
                for &lam in &eigen {
                    let mut q = e.clone();
                    for &mu in eigen.iter().filter(|&&mu| mu != lam) {
                        let t = self.sub(&ye, &self.scale(e, mu));
                        let inv = fp_inv((lam + p - mu) % p, p);
                        q = reduce(&self.scale(&self.mul(&q, &t), inv));
                    }
                    next.push(q);
                }
            }
            idems = next;
        }
        idems
            .iter()
            .map(|e| {
                let comp = self.sub(&one, e);
                let mut gens = rad.clone();
                gens.extend((0..self.r).map(|k| self.mul(&comp, &self.unit_vec(k))));
                fp_rref(gens, p)
            })
            .collect()
    }
}

/// Radical of `o / p o` in the order's coordinates, by the trace criterion
/// with `p`-power lifts: `I_i = {a in I_{i-1} : g_i(ab) = 0 for all b}`
/// with `g_i(a) = (Tr(L_a^{p^i}) mod p^{i+1}) / p^i`, down to `i = log_p r`.
fn radical_mod_p(consts: &[Vec<Vec<BigInt>>], r: usize, p: u64) -> Vec<Vec<u64>> {
    let mut l = 0u32;
    while (p as u128).pow(l + 1) <= r as u128 {
        l += 1;
    }
    let fp = FpAlgebra::new(consts, p);
    let mut ideal: Vec<Vec<u64>> = (0..r).map(|k| fp.unit_vec(k)).collect();
    for i in 0..=l {
        let pi = p.pow(i);
        let q = pi * p;
        let bq = BigInt::from(q);
        let cq: Vec<Vec<Vec<u64>>> = consts
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.iter().map(|x| x.mod_floor(&bq).to_u64().expect("small")).collect())
                    .collect()
            })
            .collect();
        let g = |a: &[u64]| -> u64 {
            // L_a[j][k] = sum_i a_i c[i][j][k]
            let mut m = vec![vec![0u64; r]; r];
            for (ii, &ai) in a.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                for (j, row) in m.iter_mut().enumerate() {
                    for (k, x) in row.iter_mut().enumerate() {
                        *x = (*x + ai * cq[ii][j][k]) % q;
                    }
                }
            }
            let t = mat_pow_trace(&m, pi, q);
            (t % q) / pi
        };
        let rows: Vec<Vec<u64>> = ideal
            .iter()
            .map(|a| (0..r).map(|k| g(&fp.mul(a, &fp.unit_vec(k))) % p).collect())
            .collect();
        let kernel = fp_left_kernel(&rows, p);
        ideal = fp_rref(kernel.iter().map(|c| fp_combine(c, &ideal, p)).collect(), p);
        if ideal.is_empty() {
            break;
        }
    }
    ideal
}

fn mat_pow_trace(m: &[Vec<u64>], e: u64, q: u64) -> u64 {
    let r = m.len();
    let mul = |a: &[Vec<u64>], b: &[Vec<u64>]| -> Vec<Vec<u64>> {
        let mut out = vec![vec![0u64; r]; r];
        for i in 0..r {
            for k in 0..r {
                let x = a[i][k];
                if x == 0 {
                    continue;
                }
                for j in 0..r {
                    out[i][j] = (out[i][j] + x * b[k][j]) % q;
                }
            }
        }
        out
    };
    let mut result: Vec<Vec<u64>> = (0..r).map(|i| (0..r).map(|j| u64::from(i == j)).collect()).collect();
    let mut base = m.to_vec();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = mul(&result, &base);
        }
        base = mul(&base, &base);
        e >>= 1;
    }
    (0..r).fold(0, |acc, i| (acc + result[i][i]) % q)
}

fn fp_inv(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Reduced row echelon basis of the span, zero rows dropped.
fn fp_rref(mut rows: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let w = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..w {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = fp_inv(rows[rank][col], p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != rank && rows[i][col] != 0 {
                let f = rows[i][col];
                let (a, b) = if i < rank {
                    let (lo, hi) = rows.split_at_mut(rank);
                    (&mut lo[i], &hi[0])
                } else {
                    let (lo, hi) = rows.split_at_mut(i);
                    (&mut hi[0], &lo[rank])
                };
                for (x, y) in a.iter_mut().zip(b.iter()) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

/// Reduces `v` modulo the span of an RREF basis.
fn fp_reduce(rref: &[Vec<u64>], v: &[u64], p: u64) -> Vec<u64> {
    let mut v = v.to_vec();
    for row in rref {
        let col = row.iter().position(|&x| x != 0).expect("nonzero row");
        let f = v[col];
        if f != 0 {
            for (x, y) in v.iter_mut().zip(row) {
                *x = (*x + p - f * y % p) % p;
            }
        }
    }
    v
}

/// Basis of the image of `vecs` in the quotient by `rad`, as reduced
/// representatives.
fn quotient_basis(vecs: &[Vec<u64>], rad: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let reduced: Vec<Vec<u64>> = vecs.iter().map(|v| fp_reduce(rad, v, p)).collect();
    fp_rref(reduced, p)
        .into_iter()
        .map(|v| fp_reduce(rad, &v, p))
        .collect()
}

fn fp_combine(c: &[u64], vecs: &[Vec<u64>], p: u64) -> Vec<u64> {
    let w = vecs.first().map_or(0, |v| v.len());
    let mut out = vec![0u64; w];
    for (ci, v) in c.iter().zip(vecs) {
        if *ci == 0 {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o = (*o + ci * x) % p;
        }
    }
    out
}

/// Basis of `{c : c * m = 0}` over the field with `p` elements.
fn fp_left_kernel(m: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let s = m.len();
    let k = m.first().map_or(0, |r| r.len());
    let aug: Vec<Vec<u64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut v = row.clone();
            v.extend((0..s).map(|j| u64::from(i == j)));
            v
        })
        .collect();
    // Gaussian elimination restricted to the first k columns.
    let mut rows = aug;
    let mut rank = 0;
    for col in 0..k {
        let Some(piv) = (rank..s).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = fp_inv(rows[rank][col], p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[col] != 0 {
                let f = row[col];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    rows[rank..].iter().map(|r| r[k..].to_vec()).collect()
}

fn fp_solve(rows: &[Vec<u64>], target: &[u64], p: u64) -> Option<Vec<u64>> {
    // c * rows = target  <=>  (c, -1) in the left kernel of [rows; target].
    let mut m = rows.to_vec();
    m.push(target.to_vec());
    let s = rows.len();
    let ker = fp_left_kernel(&m, p);
    let v = ker.into_iter().find(|c| c[s] != 0)?;
    let f = fp_inv(p - v[s], p);
    Some(v[..s].iter().map(|x| x * f % p).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::parse_group_spec;

    fn grp(s: &str) -> Arc<FinGroup> {
        Arc::new(parse_group_spec(s).unwrap())
    }

    fn s3() -> Arc<FinGroup> {
        Arc::new(FinGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]).unwrap())
    }

    #[test]
    fn group_ring_basics() {
        let o = group_ring_order(&grp("C2"));
        assert_eq!(o.algebra_dim(), 2);
        let s = s3();
        let z = group_ring_order(&s);
        let checked = OrderDesc::new(&s, z.lattice().clone(), z.unit().clone()).unwrap();
        assert_eq!(checked.algebra_dim(), 6);
    }

    #[test]
    fn cyclic_maximal_orders() {
        for (spec, idx) in [("C2", 2u64), ("C4", 8), ("C2xC2", 16)] {
            let g = grp(spec);
            let m = maximal_order_abelian(&g).unwrap();
            let i = order_index(&m, &group_ring_order(&g)).unwrap();
            assert_eq!(i.to_u64(), Some(idx), "{spec}");
        }
    }

    #[test]
    fn discriminant_c2() {
        let g = grp("C2");
        assert_eq!(discriminant(&group_ring_order(&g)).unwrap(), BigUint::from(4u32));
        assert_eq!(discriminant(&maximal_order_abelian(&g).unwrap()).unwrap(), BigUint::one());
    }

    #[test]
    fn conductor_c2() {
        let g = grp("C2");
        let m = maximal_order_abelian(&g).unwrap();
        let z = group_ring_order(&g);
        let f = conductor(&m, &z).unwrap();
        let expected = RatMatrix::from_i64(&[[1, 1], [1, -1]]).unwrap();
        assert_eq!(f, ZLattice::from_generators(&expected));
        assert_eq!(module_index(m.lattice(), &f).unwrap().to_u64(), Some(4));
        assert_eq!(module_index(z.lattice(), &f).unwrap().to_u64(), Some(2));
        assert_eq!(conductor(&z, &z).unwrap(), *z.lattice());
        assert!(conductor(&z, &m).is_err());
    }

    #[test]
    fn idealizer_small() {
        let g = grp("C2");
        let z = group_ring_order(&g);
        let m = maximal_order_idealizer(&z).unwrap();
        assert_eq!(order_index(&m, &z).unwrap().to_u64(), Some(2));
        assert_eq!(maximal_order_idealizer(&m).unwrap(), m);
    }

    #[test]
    fn idealizer_s3() {
        let s = s3();
        let z = group_ring_order(&s);
        let m = maximal_order_idealizer(&z).unwrap();
        assert_eq!(order_index(&m, &z).unwrap().to_u64(), Some(54));
    }

    #[test]
    fn trace_quotient_c2() {
        let g = grp("C2");
        let ze = trace_quotient_order(&group_ring_order(&g)).unwrap();
        assert_eq!(ze.algebra_dim(), 1);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        assert_eq!(ze.lattice().basis_vectors(), vec![vec![half.clone(), -half]]);
    }

    #[test]
    fn fp_kernel() {
        let m = vec![vec![1, 1], vec![1, 1], vec![0, 1]];
        let k = fp_left_kernel(&m, 2);
        assert_eq!(k.len(), 1);
        assert_eq!(fp_combine(&k[0], &m, 2), vec![0, 0]);
    }
}
