//! Closed-form index formulas, theorem bounds, and the class-group tables.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::grouprings::{abelian_wedderburn, central_components, GroupRingElement};
use crate::groups::FinGroup;
use crate::lattices::ModuleIndex;
use crate::numtheory::{divisors, euler_phi, factor_biguint, factor_u64, prime_divisors};

/// Exponents `e` for which every cyclotomic ring `Z[zeta_d]`, `d | e`, has
/// trivial class group.
pub const SIGMA: [u64; 46] = [
    1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 24, 25, 26, 27, 28, 30,
    32, 33, 34, 35, 36, 38, 40, 42, 44, 45, 48, 50, 54, 60, 66, 70, 84, 90,
];

pub fn sigma_membership(e: u64) -> bool {
    SIGMA.binary_search(&e).is_ok()
}

/// Every divisor of a member of [`SIGMA`] is a member.
pub fn sigma_is_divisor_closed() -> bool {
    SIGMA.iter().all(|&e| divisors(e).into_iter().all(sigma_membership))
}

/// A yes/no/unknown answer from a hardcoded table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tri {
    True,
    False,
    Unknown,
}

impl Tri {
    pub fn as_str(self) -> &'static str {
        match self {
            Tri::True => "true",
            Tri::False => "false",
            Tri::Unknown => "unknown",
        }
    }
}

/// Small nonabelian groups recognized by order and element-order counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KnownGroup {
    S3,
    D4,
    Q8,
    A4,
    S4,
    A5,
}

pub fn recognize(g: &FinGroup) -> Option<KnownGroup> {
    if g.is_abelian() {
        return None;
    }
    let stats: Vec<(u64, u64)> = g.order_statistics().into_iter().collect();
    match (g.size(), stats.as_slice()) {
        (6, _) => Some(KnownGroup::S3),
        (8, [(1, 1), (2, 5), (4, 2)]) => Some(KnownGroup::D4),
        (8, [(1, 1), (2, 1), (4, 6)]) => Some(KnownGroup::Q8),
        (12, [(1, 1), (2, 3), (3, 8)]) => Some(KnownGroup::A4),
        (24, [(1, 1), (2, 9), (3, 8), (4, 6)]) => Some(KnownGroup::S4),
        (60, [(1, 1), (2, 15), (3, 20), (5, 24)]) => Some(KnownGroup::A5),
        _ => None,
    }
}

/// Whether `Cl(Z[G])` is trivial, from the published classifications:
/// abelian groups by the cyclic/Klein list, nonabelian non-dihedral groups
/// by `{A4, S4, A5}`. Dihedral groups are open.
pub fn trivial_class_group_zg(g: &FinGroup) -> Tri {
    if g.is_abelian() {
        let n = g.size() as u64;
        let cyclic = g.exponent() == n;
        let klein = n == 4 && g.exponent() == 2;
        let listed = cyclic && ((1..=11).contains(&n) || [13, 14, 17, 19].contains(&n));
        return if klein || listed { Tri::True } else { Tri::False };
    }
    if g.is_dihedral() {
        return Tri::Unknown;
    }
    match recognize(g) {
        Some(KnownGroup::A4 | KnownGroup::S4 | KnownGroup::A5) => Tri::True,
        _ => Tri::False,
    }
}

/// Whether every locally free lattice over the maximal order is free.
/// Abelian: exponent in [`SIGMA`]. Nonabelian: true for the recognized
/// groups (rational representations, or character fields of class number
/// one without quaternion factors, or the `Q8` exception); otherwise
/// unknown.
pub fn locally_free_implies_free(g: &FinGroup) -> Tri {
    if g.is_abelian() {
        return if sigma_membership(g.exponent()) { Tri::True } else { Tri::False };
    }
    match recognize(g) {
        Some(_) => Tri::True,
        None => Tri::Unknown,
    }
}

fn add_factor(map: &mut BTreeMap<BigUint, i64>, p: u64, k: i64) {
    let e = map.entry(BigUint::from(p)).or_insert(0);
    *e += k;
}

fn halve(mut twice: BTreeMap<BigUint, i64>) -> Result<ModuleIndex> {
    twice.retain(|_, k| *k != 0);
    if let Some((p, k)) = twice.iter().find(|(_, k)| **k % 2 != 0) {
        return Err(Error::Internal(format!("odd exponent {k} at {p}: no exact square root")));
    }
    Ok(ModuleIndex::from_factors(twice.into_iter().map(|(p, k)| (p, k / 2)).collect()))
}

/// `|disc Q(zeta_d)| = d^{phi(d)} / prod_{p | d} p^{phi(d)/(p-1)}` in
/// factored form.
pub fn cyclotomic_discriminant(d: u64) -> ModuleIndex {
    let phi = euler_phi(d) as i64;
    let mut f = BTreeMap::new();
    for (p, k) in factor_u64(d) {
        add_factor(&mut f, p, phi * k as i64 - phi / (p as i64 - 1));
    }
    f.retain(|_, k| *k != 0);
    ModuleIndex::from_factors(f)
}

/// `[M : Z[G]]` for abelian `G` from the cyclic subgroup counts.
pub fn index_formula_abelian(g: &FinGroup) -> Result<ModuleIndex> {
    if !g.is_abelian() {
        return Err(Error::NonAbelian);
    }
    let n = g.size() as u64;
    let mut twice = BTreeMap::new();
    for (p, k) in factor_u64(n) {
        add_factor(&mut twice, p, n as i64 * k as i64);
    }
    for (d, t) in g.cyclic_subgroup_counts() {
        let phi = euler_phi(d) as i64;
        for (p, k) in factor_u64(d) {
            add_factor(&mut twice, p, -(phi * k as i64) * t as i64);
        }
        for p in prime_divisors(d) {
            add_factor(&mut twice, p, phi / (p as i64 - 1) * t as i64);
        }
    }
    halve(twice)
}

/// `[M : Z[G]]` when every component is a full matrix algebra over `Q`.
pub fn index_formula_rational_split(g_size: u64, n_list: &[u64]) -> Result<ModuleIndex> {
    let comps: Vec<SplitComponent> = n_list
        .iter()
        .map(|&n_i| SplitComponent {
            n_i,
            k_deg: 1,
            inv_diff_index: BigUint::one(),
        })
        .collect();
    index_formula_general(g_size, &comps)
}

/// Data for one simple component `A_i`: `dim_{K_i} A_i = n_i^2`,
/// `k_deg = [K_i : Q]`, and the index of the component of the maximal
/// order in its inverse different.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitComponent {
    pub n_i: u64,
    pub k_deg: u64,
    pub inv_diff_index: BigUint,
}

/// `( |G|^{|G|} prod_i (n_i^{k_i n_i^2} [D_i^{-1} : M_i])^{-1} )^{1/2}`.
pub fn index_formula_general(g_size: u64, comps: &[SplitComponent]) -> Result<ModuleIndex> {
    if g_size == 0 {
        return Err(Error::Formula("group order must be positive".into()));
    }
    let dim: u64 = comps.iter().map(|c| c.k_deg * c.n_i * c.n_i).sum();
    if dim != g_size {
        return Err(Error::Formula(format!("component dimensions sum to {dim}, not {g_size}")));
    }
    let mut twice = BTreeMap::new();
    for (p, k) in factor_u64(g_size) {
        add_factor(&mut twice, p, (g_size * k as u64) as i64);
    }
    for c in comps {
        if c.n_i == 0 || c.k_deg == 0 || c.inv_diff_index.is_zero() {
            return Err(Error::Formula("component data must be positive".into()));
        }
        for (p, k) in factor_u64(c.n_i) {
            add_factor(&mut twice, p, -((c.k_deg * c.n_i * c.n_i) as i64) * k as i64);
        }
        for (p, k) in factor_biguint(&c.inv_diff_index) {
            *twice.entry(p).or_insert(0) -= k;
        }
    }
    halve(twice).map_err(|e| match e {
        Error::Internal(s) => Error::Formula(s),
        other => other,
    })
}

/// Pairs split data with the simple components of `Q[G]`, matching on
/// `(n_i, k_deg)`. Returns each component's idempotent with its `n_i`.
pub fn match_split_data(group: &Arc<FinGroup>, comps: &[SplitComponent]) -> Result<Vec<(GroupRingElement, u64)>> {
    let found = central_components(group)
        .ok_or_else(|| Error::Unsupported("centre of Q[G] is not split over Q".into()))?;
    let mut want: Vec<(u64, u64)> = comps.iter().map(|c| (c.n_i, c.k_deg)).collect();
    let mut have: Vec<(u64, u64)> = found.iter().map(|c| (c.matrix_degree, c.center_degree)).collect();
    want.sort_unstable();
    have.sort_unstable();
    if want != have {
        return Err(Error::Formula(format!(
            "split data {want:?} does not match the components {have:?}"
        )));
    }
    Ok(found.into_iter().map(|c| (c.idempotent, c.matrix_degree)).collect())
}

/// Components for the conductor formula of an abelian group: every
/// cyclotomic component with `n_i = 1`.
pub fn abelian_components(group: &Arc<FinGroup>) -> Result<Vec<(GroupRingElement, u64)>> {
    Ok(abelian_wedderburn(group)?.idempotents().into_iter().map(|e| (e, 1)).collect())
}

/// Which theorem's bound to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundMode {
    /// `I [M : Z[G]]^{sn}` for lattices over `Z[G]`.
    Lattice,
    /// `I |G|^{-2n} [M : Z[G]]^{sn}` for lattices over `Z[G]/(Tr_G)`.
    TraceQuotient,
    /// `i |G|^{-2} [M : Z[G]]^s` for unit lattices, rank one.
    Minkowski,
    /// `I [M : Z[G]]^s` for rings of integers, rank one.
    Nib,
}

impl BoundMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "lattice" => Ok(BoundMode::Lattice),
            "trace_quotient" | "trace-quotient" => Ok(BoundMode::TraceQuotient),
            "minkowski" => Ok(BoundMode::Minkowski),
            "nib" => Ok(BoundMode::Nib),
            other => Err(Error::Formula(format!("unknown bound mode {other:?}"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BoundMode::Lattice => "lattice",
            BoundMode::TraceQuotient => "trace_quotient",
            BoundMode::Minkowski => "minkowski",
            BoundMode::Nib => "nib",
        }
    }
}

/// Whether the ideal factor of a bound is known to be trivial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IFactor {
    /// Locally free lattices over the maximal order are free, so the factor
    /// is 1.
    Certified,
    /// No table certifies it; a per-instance certificate is needed.
    Uncertified,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub group_size: u64,
    pub abelian: bool,
    pub n: u32,
    pub s: u32,
    pub mode: BoundMode,
    pub m_index: ModuleIndex,
    /// The explicit part of the bound; the full bound is `I` times this.
    pub bound: ModuleIndex,
    pub crude_bound: ModuleIndex,
    pub exponent_in_sigma: Option<bool>,
    pub trivial_class_group: Tri,
    pub locally_free_implies_free: Tri,
    pub i_factor: IFactor,
    pub formulas: BTreeMap<String, ModuleIndex>,
}

pub fn s_value(g: &FinGroup) -> u32 {
    if g.is_abelian() {
        2
    } else {
        3
    }
}

/// Evaluates the bound for `mode` from `m_index = [M : Z[G]]` and checks it
/// divides the crude power-of-`|G|` bound.
pub fn theorem_bounds(g: &FinGroup, n: u32, mode: BoundMode, m_index: &ModuleIndex) -> Result<BoundReport> {
    if n == 0 {
        return Err(Error::Formula("rank must be positive".into()));
    }
    if matches!(mode, BoundMode::Minkowski | BoundMode::Nib) && n != 1 {
        return Err(Error::Formula(format!("mode {} is stated for rank 1 only", mode.as_str())));
    }
    let s = s_value(g);
    let size = g.size() as u64;
    let gi = ModuleIndex::from_integer(size);
    let half_ceil = (s as i64 * size as i64 + 1) / 2;
    let (bound, crude) = match mode {
        BoundMode::Lattice | BoundMode::Nib => (
            m_index.pow((s * n) as i64),
            gi.pow(half_ceil * n as i64),
        ),
        BoundMode::TraceQuotient | BoundMode::Minkowski => (
            gi.pow(-2 * n as i64).mul(&m_index.pow((s * n) as i64)),
            gi.pow((half_ceil - 2) * n as i64),
        ),
    };
    if !bound.divides(&crude) {
        return Err(Error::Internal(format!("bound {bound} does not divide crude bound {crude}")));
    }
    let lfif = locally_free_implies_free(g);
    let mut formulas = BTreeMap::new();
    formulas.insert(String::from("m_index"), m_index.clone());
    if g.is_abelian() {
        formulas.insert(String::from("abelian_formula"), index_formula_abelian(g)?);
    }
    Ok(BoundReport {
        group_size: size,
        abelian: g.is_abelian(),
        n,
        s,
        mode,
        m_index: m_index.clone(),
        bound,
        crude_bound: crude,
        exponent_in_sigma: g.is_abelian().then(|| sigma_membership(g.exponent())),
        trivial_class_group: trivial_class_group_zg(g),
        locally_free_implies_free: lfif,
        i_factor: if lfif == Tri::True {
            IFactor::Certified
        } else {
            IFactor::Uncertified
        },
        formulas,
    })
}
