//! Free sublattices of bounded index: the chain `Z <= Y <= ^M X <= X` with a
//! divisibility certificate, and the generator search behind it.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::s_value;
use crate::error::{Error, Result};
use crate::exactlin::{reduce_echelon_int, Echelon, RatMatrix};
use crate::grouprings::{rational_central_idempotents, trace_idempotent, GroupRingElement};
use crate::groups::FinGroup;
use crate::lattices::{max_sublattice, min_overlattice, module_index, ModuleAction, ModuleIndex, ZLattice};
use crate::orders::{group_ring_order, order_index, trace_quotient_order, OrderDesc};

pub const DEFAULT_HEIGHT_CAP: u64 = 8;

/// `Z[G]` acting diagonally on `Q[G]^n` by left multiplication.
pub fn group_action(group: &Arc<FinGroup>, n: usize) -> ModuleAction {
    let gens = (0..group.size())
        .map(|g| GroupRingElement::basis(group, g).left_mul_matrix())
        .collect();
    ModuleAction::new(group.size(), gens).expect("square").diagonal(n)
}

/// `Z[G]^n + Z[G] v_1 + ... + Z[G] v_n` for seeded random `v_j` in
/// `(1/denom) Z[G]^n`. Stable under `Z[G]`, between `denom Z[G]^n` and
/// `(1/denom) Z[G]^n`, with rational span `Q[G]^n`.
pub fn random_stable_lattice(group: &Arc<FinGroup>, n: usize, denom: u64, seed: u64) -> Result<ZLattice> {
    if n == 0 || denom == 0 {
        return Err(Error::Formula("rank and denominator must be positive".into()));
    }
    let dim = n * group.size();
    if denom == 1 {
        return Ok(ZLattice::standard(dim));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = BigInt::from(denom);
    let mut gens: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { m.clone() } else { BigInt::zero() }).collect())
        .collect();
    let act = group_action(group, n);
    for _ in 0..n {
        let v: Vec<BigInt> = (0..dim).map(|_| BigInt::from(rng.next_u64() % denom)).collect();
        let vm = RatMatrix::from_int_rows_with_cols(&[v], dim, BigInt::one())?;
        for g in act.generators() {
            gens.extend(vm.mul(g)?.int_rows());
        }
    }
    Ok(ZLattice::from_generators(&RatMatrix::from_int_rows_with_cols(&gens, dim, m)?))
}

/// A seeded `Z[G]/(Tr_G)`-lattice: the projection of
/// [`random_stable_lattice`] to `(e Q[G])^n`.
pub fn random_trace_quotient_lattice(group: &Arc<FinGroup>, n: usize, denom: u64, seed: u64) -> Result<ZLattice> {
    let x = random_stable_lattice(group, n, denom, seed)?;
    let e = ModuleAction::new(group.size(), vec![trace_idempotent(group).right_mul_matrix()])?.diagonal(n);
    x.image(&e.generators()[0])
}

/// A generator found by [`find_free_generator`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoundGenerator {
    pub element: GroupRingElement,
    /// `[l : M eps]`.
    pub index: ModuleIndex,
    pub candidates_tried: u64,
    /// Largest coordinate height searched.
    pub height: u64,
}

/// Search statistics accumulated over components and pieces.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub candidates_tried: u64,
    pub max_height: u64,
}

fn coprime(index: &ModuleIndex, k: u64) -> bool {
    if k <= 1 {
        return true;
    }
    let v = index.value();
    let bk = BigInt::from(k);
    v.numer().gcd(&bk).is_one() && v.denom().gcd(&bk).is_one()
}

/// The central idempotents used to split the search: primitive central
/// idempotents of `Q[G]` falling inside the order's algebra, or just its
/// unit when these are not available.
fn search_components(m: &OrderDesc) -> Vec<GroupRingElement> {
    let unit = m.unit();
    match rational_central_idempotents(m.group()) {
        Some(idems) => {
            let mut out: Vec<GroupRingElement> = Vec::new();
            for e in idems {
                let p = e.mul(unit).expect("same group");
                if !p.is_zero() && !out.contains(&p) {
                    out.push(p);
                }
            }
            out
        }
        None => vec![unit.clone()],
    }
}

/// `M beta` as a lattice in `Q[G]`.
fn order_times(m_basis: &[GroupRingElement], beta: &GroupRingElement) -> ZLattice {
    let rows: Vec<Vec<BigRational>> = m_basis
        .iter()
        .map(|b| b.mul(beta).expect("same group").into_coeffs())
        .collect();
    ZLattice::from_rat_vectors(beta.group().size(), &rows).expect("consistent")
}

/// Coordinate value at position `k` in the order 0, 1, -1, 2, -2, ...
fn zigzag(k: u64) -> i64 {
    if k % 2 == 1 {
        (k as i64 + 1) / 2
    } else {
        -(k as i64) / 2
    }
}

fn height_schedule(cap: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut h = 1;
    while h < cap {
        out.push(h);
        h *= 2;
    }
    out.push(cap.max(1));
    out
}

/// Best generator of the component lattice `l` over `m_basis`, searching
/// integer coordinate vectors by height.
fn search_component(
    m_basis: &[GroupRingElement],
    l: &ZLattice,
    unit: &GroupRingElement,
    coprime_to: u64,
    height_cap: u64,
    stats: &mut SearchStats,
) -> Option<(GroupRingElement, ModuleIndex)> {
    let group = unit.group();
    let rank = l.rank();
    let try_candidate = |beta: &GroupRingElement| -> Option<ModuleIndex> {
        let mb = order_times(m_basis, beta);
        if mb.rank() != rank {
            return None;
        }
        let idx = module_index(l, &mb).ok()?;
        coprime(&idx, coprime_to).then_some(idx)
    };
    if l.contains_vec(unit.coeffs()) {
        stats.candidates_tried += 1;
        if let Some(idx) = try_candidate(unit) {
            if idx.value().is_one() {
                return Some((unit.clone(), idx));
            }
        }
    }
    let basis = l.basis_vectors();
    let mut prev = 0u64;
    for h in height_schedule(height_cap) {
        stats.max_height = stats.max_height.max(h);
        let mut best: Option<(GroupRingElement, ModuleIndex)> = None;
        let mut key = vec![0u64; rank];
        'enumerate: loop {
            let coords: Vec<i64> = key.iter().map(|&k| zigzag(k)).collect();
            let norm = coords.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0);
            if norm > prev {
                let mut v = vec![BigRational::zero(); group.size()];
                for (c, b) in coords.iter().zip(&basis) {
                    if *c != 0 {
                        let c = BigRational::from_integer(BigInt::from(*c));
                        for (x, y) in v.iter_mut().zip(b) {
                            *x += &c * y;
                        }
                    }
                }
                let beta = GroupRingElement::new(group, v).expect("length |G|");
                stats.candidates_tried += 1;
                if let Some(idx) = try_candidate(&beta) {
                    let better = best.as_ref().is_none_or(|(_, b)| idx.value() < b.value());
                    if better {
                        let done = idx.value().is_one();
                        best = Some((beta, idx));
                        if done {
                            break 'enumerate;
                        }
                    }
                }
            }
            // Next key in lexicographic order over [0, 2h]^rank.
            let mut pos = rank;
            loop {
                if pos == 0 {
                    break 'enumerate;
                }
                pos -= 1;
                if key[pos] < 2 * h {
                    key[pos] += 1;
                    for k in key.iter_mut().skip(pos + 1) {
                        *k = 0;
                    }
                    break;
                }
            }
        }
        if best.is_some() {
            return best;
        }
        prev = h;
    }
    None
}

/// Searches for `eps` in an `M`-stable lattice `l` spanning the algebra of
/// `m_order`, minimizing `[l : M eps]` subject to coprimality with
/// `coprime_to`. The search runs separately in each central component
/// `e_i l`; the returned element is the sum of the component winners.
pub fn find_free_generator(
    m_order: &OrderDesc,
    l: &ZLattice,
    coprime_to: u64,
    height_cap: u64,
) -> Result<Option<FoundGenerator>> {
    if !l.same_span(m_order.lattice()) {
        return Err(Error::DifferentSpans);
    }
    if min_overlattice(&m_order.left_action(), l)? != *l {
        return Err(Error::NotContained("M l", "l"));
    }
    let mut stats = SearchStats::default();
    Ok(find_in_components(m_order, l, coprime_to, height_cap, &mut stats)?.map(|(element, index)| {
        FoundGenerator {
            element,
            index,
            candidates_tried: stats.candidates_tried,
            height: stats.max_height,
        }
    }))
}

fn find_in_components(
    m_order: &OrderDesc,
    l: &ZLattice,
    coprime_to: u64,
    height_cap: u64,
    stats: &mut SearchStats,
) -> Result<Option<(GroupRingElement, ModuleIndex)>> {
    let group = m_order.group();
    let m_basis = m_order.basis_elements();
    let mut total = GroupRingElement::zero(group);
    let mut index = ModuleIndex::one();
    for eps in search_components(m_order) {
        let li = l.image(&eps.right_mul_matrix())?;
        match search_component(&m_basis, &li, &eps, coprime_to, height_cap, stats) {
            Some((beta, idx)) => {
                total = total.add(&beta)?;
                index = index.mul(&idx);
            }
            None => return Ok(None),
        }
    }
    Ok(Some((total, index)))
}

/// Splits `w`, an `M`-stable lattice spanning `(unit Q[G])^n`, as
/// `M w_1 + ... + M w_n` inside `w` and returns the `w_k` and the product of
/// the piece indices, which equals `[w : sum M w_k]`.
///
/// The first piece is a generator of the projection of `w` to the first
/// copy, lifted back into `w`; the rest comes from the kernel of that
/// projection.
fn decompose(
    m_order: &OrderDesc,
    w: &ZLattice,
    n: usize,
    coprime_to: u64,
    height_cap: u64,
    stats: &mut SearchStats,
) -> Result<Option<(Vec<Vec<BigRational>>, ModuleIndex)>> {
    let d = m_order.group().size();
    if n == 1 {
        return Ok(find_in_components(m_order, w, coprime_to, height_cap, stats)?
            .map(|(beta, idx)| (vec![beta.into_coeffs()], idx)));
    }
    let rows = w.int_rows();
    let r = rows.len();
    let mut ech = Echelon::new(d + r, d);
    for (k, row) in rows.iter().enumerate() {
        let mut v = row[..d].to_vec();
        v.extend((0..r).map(|j| if j == k { BigInt::one() } else { BigInt::zero() }));
        ech.insert(v);
    }
    ech.reduce();
    let proj_rows: Vec<Vec<BigInt>> = ech.rows.iter().map(|v| v[..d].to_vec()).collect();
    let proj = ZLattice::from_generators(&RatMatrix::from_int_rows_with_cols(&proj_rows, d, w.den().clone())?);
    let Some((beta, idx)) = find_in_components(m_order, &proj, coprime_to, height_cap, stats)? else {
        return Ok(None);
    };
    let den = BigRational::from_integer(w.den().clone());
    let scaled: Vec<BigInt> = beta
        .coeffs()
        .iter()
        .map(|x| (x * &den).to_integer())
        .collect();
    let y = reduce_echelon_int(&proj_rows, &ech.pivots, &scaled)
        .ok_or_else(|| Error::Internal("generator not in projection".into()))?;
    let combine = |c: &[BigInt]| -> Vec<BigRational> {
        let mut out = vec![BigInt::zero(); d * n];
        for (ck, row) in c.iter().zip(rows) {
            if !ck.is_zero() {
                for (o, x) in out.iter_mut().zip(row) {
                    *o += ck * x;
                }
            }
        }
        out.into_iter().map(|x| BigRational::new(x, w.den().clone())).collect()
    };
    let mut lift_c = vec![BigInt::zero(); r];
    for (yk, row) in y.iter().zip(&ech.rows) {
        for (o, t) in lift_c.iter_mut().zip(&row[d..]) {
            *o += yk * t;
        }
    }
    let w1 = combine(&lift_c);
    let rest: Vec<Vec<BigRational>> = ech
        .leftovers
        .iter()
        .map(|(_, v)| combine(&v[d..])[d..].to_vec())
        .collect();
    let w_rest = ZLattice::from_rat_vectors(d * (n - 1), &rest)?;
    let Some((tail, tail_idx)) = decompose(m_order, &w_rest, n - 1, coprime_to, height_cap, stats)? else {
        return Ok(None);
    };
    let mut gens = vec![w1];
    for t in tail {
        let mut v = vec![BigRational::zero(); d];
        v.extend(t);
        gens.push(v);
    }
    Ok(Some((gens, idx.mul(&tail_idx))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    True,
    False,
    Incomplete,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Incomplete => "incomplete",
        }
    }
}

/// Record of one run of the free-sublattice construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeSubCertificate {
    pub input_hash: u64,
    pub n: usize,
    pub s: u32,
    /// `w_k` in coordinates of `Q[G]^n`.
    pub generators: Vec<Vec<BigRational>>,
    /// `[X : ^M X]`.
    pub index_x_mx: ModuleIndex,
    /// `[^M X : Y]`, the ideal factor found by the search.
    pub index_mx_y: Option<ModuleIndex>,
    /// `[Y : Z]`.
    pub index_y_z: Option<ModuleIndex>,
    /// `[X : Z]`.
    pub total_index: Option<ModuleIndex>,
    /// `[M : Lambda]` for the orders used.
    pub order_index: ModuleIndex,
    /// The bound without its ideal factor.
    pub explicit_bound: ModuleIndex,
    /// Ideal factor times explicit bound.
    pub claimed_bound: Option<ModuleIndex>,
    pub verdict: Verdict,
    pub coprime_to: u64,
    pub coprimality_achieved: bool,
    pub stats: SearchStats,
}

impl FreeSubCertificate {
    pub fn i_factor(&self) -> Option<&ModuleIndex> {
        self.index_mx_y.as_ref()
    }
}

/// FNV-1a over the canonical form, for labelling certificates.
pub fn lattice_hash(x: &ZLattice) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |bytes: &[u8]| {
        for b in bytes {
            h ^= u64::from(*b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    };
    feed(&(x.ambient_dim() as u64).to_le_bytes());
    feed(&x.den().to_signed_bytes_le());
    for row in x.int_rows() {
        feed(b"|");
        for v in row {
            feed(&v.to_signed_bytes_le());
            feed(b",");
        }
    }
    h
}

struct Pipeline<'a> {
    lambda: &'a OrderDesc,
    m: &'a OrderDesc,
    n: usize,
    s: u32,
    explicit_bound: ModuleIndex,
    coprime_to: u64,
    height_cap: u64,
}

impl Pipeline<'_> {
    fn run(&self, x: &ZLattice) -> Result<FreeSubCertificate> {
        let n = self.n;
        let lam_act = self.lambda.left_action().diagonal(n);
        if min_overlattice(&lam_act, x)? != *x {
            return Err(Error::NotContained("Lambda X", "X"));
        }
        let span = ZLattice::direct_sum(&vec![self.m.lattice().clone(); n]);
        if !x.same_span(&span) {
            return Err(Error::DifferentSpans);
        }
        let m_act = self.m.left_action().diagonal(n);
        let mx = max_sublattice(&m_act, x)?;
        let index_x_mx = module_index(x, &mx)?;
        let order_idx = order_index(self.m, self.lambda)?;
        let mut stats = SearchStats::default();
        let found = decompose(self.m, &mx, n, self.coprime_to, self.height_cap, &mut stats)?;
        let mut cert = FreeSubCertificate {
            input_hash: lattice_hash(x),
            n,
            s: self.s,
            generators: Vec::new(),
            index_x_mx,
            index_mx_y: None,
            index_y_z: None,
            total_index: None,
            order_index: order_idx,
            explicit_bound: self.explicit_bound.clone(),
            claimed_bound: None,
            verdict: Verdict::Incomplete,
            coprime_to: self.coprime_to,
            coprimality_achieved: false,
            stats,
        };
        let Some((gens, i_factor)) = found else {
            return Ok(cert);
        };
        let span_of = |act: &ModuleAction| -> Result<ZLattice> {
            let mut rows = Vec::new();
            for w in &gens {
                let wm = RatMatrix::from_rat_rows_with_cols(core::slice::from_ref(w), w.len())?;
                for g in act.generators() {
                    rows.extend(wm.mul(g)?.to_rat_rows());
                }
            }
            ZLattice::from_rat_vectors(x.ambient_dim(), &rows)
        };
        let y = span_of(&m_act)?;
        let z = span_of(&lam_act)?;
        let index_mx_y = module_index(&mx, &y)?;
        if index_mx_y != i_factor {
            return Err(Error::Internal("piece indices do not multiply to [^M X : Y]".into()));
        }
        let index_y_z = module_index(&y, &z)?;
        let total = module_index(x, &z)?;
        let claimed = i_factor.mul(&self.explicit_bound);
        cert.verdict = if total.divides(&claimed) {
            Verdict::True
        } else {
            Verdict::False
        };
        cert.coprimality_achieved = coprime(&i_factor, self.coprime_to);
        cert.generators = gens;
        cert.index_mx_y = Some(index_mx_y);
        cert.index_y_z = Some(index_y_z);
        cert.total_index = Some(total);
        cert.claimed_bound = Some(claimed);
        Ok(cert)
    }
}

/// Runs the construction for a `Z[G]`-lattice `x` spanning `Q[G]^n` against
/// the bound `I [M : Z[G]]^{sn}`.
pub fn free_sublattice(
    group: &Arc<FinGroup>,
    m_order: &OrderDesc,
    x: &ZLattice,
    n: usize,
    coprime_to: u64,
    height_cap: u64,
) -> Result<FreeSubCertificate> {
    if n == 0 || x.ambient_dim() != n * group.size() {
        return Err(Error::Dimension("lattice must live in Q[G]^n".into()));
    }
    let lambda = group_ring_order(group);
    let s = s_value(group);
    let m_index = order_index(m_order, &lambda)?;
    Pipeline {
        lambda: &lambda,
        m: m_order,
        n,
        s,
        explicit_bound: m_index.pow(i64::from(s) * n as i64),
        coprime_to,
        height_cap,
    }
    .run(x)
}

/// Runs the construction for a `Z[G]/(Tr_G)`-lattice in `(e Q[G])^n` with
/// orders `Lambda_e <= M_e`, against `I |G|^{-2n} [M : Z[G]]^{sn}`.
pub fn trace_quotient_free_sublattice(
    group: &Arc<FinGroup>,
    m_order: &OrderDesc,
    x: &ZLattice,
    n: usize,
    coprime_to: u64,
    height_cap: u64,
) -> Result<FreeSubCertificate> {
    if n == 0 || x.ambient_dim() != n * group.size() {
        return Err(Error::Dimension("lattice must live in Q[G]^n".into()));
    }
    let lambda = group_ring_order(group);
    let lambda_e = trace_quotient_order(&lambda)?;
    let m_e = trace_quotient_order(m_order)?;
    let s = s_value(group);
    let m_index = order_index(m_order, &lambda)?;
    let g = ModuleIndex::from_integer(group.size() as u64);
    let explicit = g.pow(-2 * n as i64).mul(&m_index.pow(i64::from(s) * n as i64));
    Pipeline {
        lambda: &lambda_e,
        m: &m_e,
        n,
        s,
        explicit_bound: explicit,
        coprime_to,
        height_cap,
    }
    .run(x)
}

/// Total index of a verdict-true certificate as an integer, when it fits.
pub fn total_as_u64(c: &FreeSubCertificate) -> Option<u64> {
    c.total_index.as_ref().and_then(|t| t.value().to_integer().to_u64())
}
