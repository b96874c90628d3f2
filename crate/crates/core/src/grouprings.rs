//! Arithmetic in the rational group algebra and its Wedderburn components.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{bareiss_det, RatMatrix};
use crate::groups::FinGroup;
use crate::numtheory::{euler_phi, gcd_u64, ramanujan_sum};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// An element of `Q[G]` as a coefficient vector over the group elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    group: Arc<FinGroup>,
    coeffs: Vec<BigRational>,
}

impl GroupRingElement {
    pub fn new(group: &Arc<FinGroup>, coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.len() != group.size() {
            return Err(Error::Dimension(format!(
                "{} coefficients for a group of order {}",
                coeffs.len(),
                group.size()
            )));
        }
        Ok(GroupRingElement {
            group: group.clone(),
            coeffs,
        })
    }

    pub fn from_i64(group: &Arc<FinGroup>, coeffs: &[i64]) -> Result<Self> {
        Self::new(group, coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero(group: &Arc<FinGroup>) -> Self {
        GroupRingElement {
            group: group.clone(),
            coeffs: vec![BigRational::zero(); group.size()],
        }
    }

    pub fn one(group: &Arc<FinGroup>) -> Self {
        Self::basis(group, 0)
    }

    /// The group element `g` itself.
    pub fn basis(group: &Arc<FinGroup>, g: usize) -> Self {
        let mut x = Self::zero(group);
        x.coeffs[g] = BigRational::one();
        x
    }

    /// `Tr_G`, the sum of all group elements.
    pub fn trace_element(group: &Arc<FinGroup>) -> Self {
        GroupRingElement {
            group: group.clone(),
            coeffs: vec![BigRational::one(); group.size()],
        }
    }

    pub fn group(&self) -> &Arc<FinGroup> {
        &self.group
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigRational> {
        self.coeffs
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.group, &other.group) || self.group == other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let g = &self.group;
        let mut out = vec![BigRational::zero(); g.size()];
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in other.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    out[g.mul(a, b)] += x * y;
                }
            }
        }
        Ok(GroupRingElement {
            group: g.clone(),
            coeffs: out,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(GroupRingElement {
            group: self.group.clone(),
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(GroupRingElement {
            group: self.group.clone(),
            coeffs,
        })
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        GroupRingElement {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// `sum a_g g  ->  sum a_g g^{-1}`.
    pub fn involution(&self) -> Self {
        let g = &self.group;
        let mut coeffs = vec![BigRational::zero(); g.size()];
        for (a, x) in self.coeffs.iter().enumerate() {
            coeffs[g.inv(a)] = x.clone();
        }
        GroupRingElement {
            group: g.clone(),
            coeffs,
        }
    }

    pub fn augmentation(&self) -> BigRational {
        self.coeffs.iter().fold(BigRational::zero(), |acc, x| acc + x)
    }

    /// Trace of the regular representation: `|G|` times the coefficient of 1.
    pub fn regular_trace(&self) -> BigRational {
        &self.coeffs[0] * rat(self.group.size() as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|x| x.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|x| x.is_integer())
    }

    pub fn is_central(&self) -> bool {
        (0..self.group.size()).all(|g| {
            let b = Self::basis(&self.group, g);
            self.mul(&b).expect("same group") == b.mul(self).expect("same group")
        })
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut out = Self::one(&self.group);
        for _ in 0..k {
            out = out.mul(self).expect("same group");
        }
        out
    }

    /// Matrix of `v -> self * v` on row vectors: row `i` is `self * g_i`.
    pub fn left_mul_matrix(&self) -> RatMatrix {
        let g = &self.group;
        let n = g.size();
        let mut rows = vec![vec![BigRational::zero(); n]; n];
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, row) in rows.iter_mut().enumerate() {
                row[g.mul(a, i)] += x;
            }
        }
        RatMatrix::from_rat_rows_with_cols(&rows, n).expect("square")
    }

    /// Matrix of `v -> v * self` on row vectors: row `i` is `g_i * self`.
    pub fn right_mul_matrix(&self) -> RatMatrix {
        let g = &self.group;
        let n = g.size();
        let mut rows = vec![vec![BigRational::zero(); n]; n];
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, row) in rows.iter_mut().enumerate() {
                row[g.mul(i, a)] += x;
            }
        }
        RatMatrix::from_rat_rows_with_cols(&rows, n).expect("square")
    }
}

/// `e = 1 - |G|^{-1} Tr_G`, the central idempotent complementary to the
/// trivial representation.
pub fn trace_idempotent(group: &Arc<FinGroup>) -> GroupRingElement {
    let n = group.size() as i64;
    let t = GroupRingElement::trace_element(group).scale(&BigRational::new(BigInt::one(), BigInt::from(n)));
    GroupRingElement::one(group).sub(&t).expect("same group")
}

/// `|N|^{-1} sum_{h in N} h` for a normal subgroup `N`; central idempotent.
pub fn subgroup_idempotent(group: &Arc<FinGroup>, subgroup: &[usize]) -> Result<GroupRingElement> {
    if !group.is_normal(subgroup) {
        return Err(Error::GroupSpec("subgroup is not normal".into()));
    }
    let c = BigRational::new(BigInt::one(), BigInt::from(subgroup.len()));
    let mut x = GroupRingElement::zero(group);
    for &h in subgroup {
        x.coeffs[h] = c.clone();
    }
    Ok(x)
}

/// One simple component of `Q[G]` for abelian `G`, isomorphic to the `d`-th
/// cyclotomic field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedderburnComponent {
    pub d: u64,
    /// Indices into [`WedderburnData::characters`].
    pub orbit: Vec<usize>,
    pub idempotent: GroupRingElement,
    pub degree: u64,
    /// Group element `h` whose character value has exact order `d`.
    pub generator: usize,
    /// `idempotent * h`, a primitive `d`-th root of unity in the component.
    pub generator_image: GroupRingElement,
}

/// Rational Wedderburn decomposition of an abelian group algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedderburnData {
    pub exponent: u64,
    /// Each character as exponents: `chi(g) = zeta_e^{c[g]}`.
    pub characters: Vec<Vec<u64>>,
    pub components: Vec<WedderburnComponent>,
}

impl WedderburnData {
    pub fn idempotents(&self) -> Vec<GroupRingElement> {
        self.components.iter().map(|c| c.idempotent.clone()).collect()
    }
}

/// All characters `G -> Z/e`, enumerated by extending along a greedy
/// generating set and keeping the consistent assignments.
fn abelian_characters(g: &FinGroup) -> Vec<Vec<u64>> {
    let n = g.size();
    let e = g.exponent();
    let mut gens = Vec::new();
    let mut span = vec![0usize];
    for x in 0..n {
        if !span.contains(&x) {
            gens.push(x);
            span = g.generated_subgroup(&gens);
        }
    }
    let mut partial: Vec<Vec<Option<u64>>> = vec![{
        let mut v = vec![None; n];
        v[0] = Some(0);
        v
    }];
    let mut sub = vec![0usize];
    for (k, &x) in gens.iter().enumerate() {
        let step = e / g.element_order(x);
        let mut next = Vec::new();
        for chi in &partial {
            for c in 0..g.element_order(x) {
                let cx = c * step;
                let mut ext = chi.clone();
                let mut ok = true;
                'outer: for j in 0..g.element_order(x) {
                    let xj = g.pow(x, j);
                    for &h in &sub {
                        let y = g.mul(xj, h);
                        let val = (cx * j + chi[h].expect("assigned")) % e;
                        match ext[y] {
                            Some(v) if v != val => {
                                ok = false;
                                break 'outer;
                            }
                            _ => ext[y] = Some(val),
                        }
                    }
                }
                if ok {
                    next.push(ext);
                }
            }
        }
        partial = next;
        sub = g.generated_subgroup(&gens[..=k]);
    }
    let mut out: Vec<Vec<u64>> = partial
        .into_iter()
        .map(|v| v.into_iter().map(|x| x.expect("total")).collect())
        .collect();
    out.sort();
    out
}

/// Decomposes `Q[G]`, `G` abelian, into cyclotomic components, one per
/// Galois orbit of complex characters.
pub fn abelian_wedderburn(group: &Arc<FinGroup>) -> Result<WedderburnData> {
    if !group.is_abelian() {
        return Err(Error::NonAbelian);
    }
    let n = group.size();
    let e = group.exponent();
    let characters = abelian_characters(group);
    if characters.len() != n {
        return Err(Error::Internal(format!("found {} characters for order {}", characters.len(), n)));
    }
    let char_order = |c: &[u64]| -> u64 { c.iter().fold(e, |acc, &x| gcd_u64(acc, x)) };
    let mut assigned = vec![false; n];
    let mut components = Vec::new();
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let chi = &characters[i];
        let d = e / char_order(chi);
        let mut orbit = Vec::new();
        for k in (1..=d).filter(|&k| gcd_u64(k, d) == 1) {
            let twisted: Vec<u64> = chi.iter().map(|&c| (c * k) % e).collect();
            let j = characters.binary_search(&twisted).map_err(|_| Error::Internal("orbit escapes".into()))?;
            if !assigned[j] {
                assigned[j] = true;
                orbit.push(j);
            }
        }
        orbit.sort_unstable();
        // Orbit sum of chi(g^{-1}) is the Ramanujan sum c_d(a) where
        // chi(g^{-1}) = zeta_d^a.
        let scale = e / d;
        let coeffs: Vec<BigRational> = (0..n)
            .map(|g| {
                let a = ((e - chi[g] % e) % e) / scale;
                BigRational::new(BigInt::from(ramanujan_sum(d, a)), BigInt::from(n))
            })
            .collect();
        let idempotent = GroupRingElement::new(group, coeffs)?;
        let generator = (0..n)
            .find(|&h| gcd_u64(chi[h] / scale, d) == 1 || d == 1)
            .ok_or_else(|| Error::Internal("no generator for component".into()))?;
        let generator_image = idempotent.mul(&GroupRingElement::basis(group, generator))?;
        components.push(WedderburnComponent {
            d,
            orbit,
            idempotent,
            degree: euler_phi(d),
            generator,
            generator_image,
        });
    }
    Ok(WedderburnData {
        exponent: e,
        characters,
        components,
    })
}

/// Primitive central idempotents of `Q[G]` when the centre splits as a
/// product of copies of `Q`, found from the integer eigenvalues of the class
/// sums. Abelian groups use the cyclotomic decomposition instead. Returns
/// `None` when some class sum has an irrational eigenvalue.
pub fn rational_central_idempotents(group: &Arc<FinGroup>) -> Option<Vec<GroupRingElement>> {
    if group.is_abelian() {
        return abelian_wedderburn(group).ok().map(|w| w.idempotents());
    }
    let classes = group.conjugacy_classes();
    let h = classes.len();
    let class_sums: Vec<GroupRingElement> = classes
        .iter()
        .map(|cls| {
            let mut x = GroupRingElement::zero(group);
            for &g in cls {
                x.coeffs[g] = BigRational::one();
            }
            x
        })
        .collect();
    // Matrix of multiplication by a class sum in the class-sum basis.
    let class_matrix = |c: &GroupRingElement| -> Vec<Vec<BigInt>> {
        class_sums
            .iter()
            .map(|s| {
                let p = c.mul(s).expect("same group");
                (0..h)
                    .map(|k| p.coeffs[classes[k][0]].to_integer())
                    .collect()
            })
            .collect()
    };
    let mut idems = vec![GroupRingElement::one(group)];
    for (k, c) in class_sums.iter().enumerate() {
        let m = class_matrix(c);
        let bound = classes[k].len() as i64;
        let mut eigen = Vec::new();
        let mut total = 0usize;
        for lam in -bound..=bound {
            let shifted: Vec<Vec<BigInt>> = m
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(j, x)| if i == j { x - BigInt::from(lam) } else { x.clone() })
                        .collect()
                })
                .collect();
            let nullity = h - rank_int(&shifted);
            if nullity > 0 {
                eigen.push(lam);
                total += nullity;
            }
        }
        if total != h {
            return None;
        }
        let mut refined = Vec::new();
        for &lam in &eigen {
            let mut p = GroupRingElement::one(group);
            for &mu in eigen.iter().filter(|&&mu| mu != lam) {
                let f = c.sub(&GroupRingElement::one(group).scale(&rat(mu))).expect("same group");
                p = p.mul(&f).expect("same group").scale(&BigRational::new(BigInt::one(), BigInt::from(lam - mu)));
            }
            for e in &idems {
                let q = e.mul(&p).expect("same group");
                if !q.is_zero() {
                    refined.push(q);
                }
            }
        }
        idems = refined;
    }
    if idems.len() != h {
        return None;
    }
    idems.sort_by_key(|e| {
        let dim = e.coeffs[0].clone() * rat(group.size() as i64);
        dim.to_integer().to_i64().unwrap_or(0)
    });
    Some(idems)
}

/// A simple component `e Q[G]` with the degree of its centre over `Q` and
/// its reduced degree, so that `dim = center_degree * matrix_degree^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralComponent {
    pub idempotent: GroupRingElement,
    pub center_degree: u64,
    pub matrix_degree: u64,
}

/// The simple components of `Q[G]` when [`rational_central_idempotents`]
/// finds them.
pub fn central_components(group: &Arc<FinGroup>) -> Option<Vec<CentralComponent>> {
    let idems = rational_central_idempotents(group)?;
    let classes = group.conjugacy_classes();
    let scale = rat(group.size() as i64);
    let mut out = Vec::new();
    for e in idems {
        let dim = idempotent_dimension(&e);
        let rows: Vec<Vec<BigInt>> = classes
            .iter()
            .map(|cls| {
                let mut c = GroupRingElement::zero(group);
                for &g in cls {
                    c.coeffs[g] = BigRational::one();
                }
                c.mul(&e)
                    .expect("same group")
                    .coeffs
                    .iter()
                    .map(|x| (x * &scale).to_integer())
                    .collect()
            })
            .collect();
        let center_degree = rank_int(&rows) as u64;
        if center_degree == 0 || !dim.is_multiple_of(center_degree) {
            return None;
        }
        let sq = dim / center_degree;
        let n = num_integer::Roots::sqrt(&sq);
        if n * n != sq {
            return None;
        }
        out.push(CentralComponent {
            idempotent: e,
            center_degree,
            matrix_degree: n,
        });
    }
    Some(out)
}

/// `Q`-dimension of the ideal `e Q[G]` for an idempotent `e`.
pub fn idempotent_dimension(e: &GroupRingElement) -> u64 {
    e.regular_trace().to_integer().abs().to_u64().unwrap_or(0)
}

fn rank_int(m: &[Vec<BigInt>]) -> usize {
    let w = m.first().map_or(0, |r| r.len());
    crate::exactlin::int_span_hnf(m, w).0.len()
}

/// Number of components per `d`; equals `t_d` of the group.
pub fn component_counts(w: &WedderburnData) -> BTreeMap<u64, u64> {
    let mut out = BTreeMap::new();
    for c in &w.components {
        *out.entry(c.d).or_insert(0) += 1;
    }
    out
}

/// `det` of the character matrix of an abelian group over the integers when
/// all characters take values `+-1` (exponent 2 groups), else `None`.
pub fn sign_character_det(w: &WedderburnData) -> Option<BigInt> {
    if w.exponent > 2 {
        return None;
    }
    let rows: Vec<Vec<BigInt>> = w
        .characters
        .iter()
        .map(|c| c.iter().map(|&x| if x == 0 { BigInt::one() } else { -BigInt::one() }).collect())
        .collect();
    Some(bareiss_det(rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::parse_group_spec;

    fn grp(s: &str) -> Arc<FinGroup> {
        Arc::new(parse_group_spec(s).unwrap())
    }

    fn half(n: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(2))
    }

    #[test]
    fn s3_components() {
        let g = Arc::new(FinGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]).unwrap());
        let c = central_components(&g).unwrap();
        let degs: Vec<(u64, u64)> = c.iter().map(|c| (c.center_degree, c.matrix_degree)).collect();
        assert_eq!(degs, vec![(1, 1), (1, 1), (1, 2)]);
        let c5 = central_components(&grp("C5")).unwrap();
        let degs: Vec<(u64, u64)> = c5.iter().map(|c| (c.center_degree, c.matrix_degree)).collect();
        assert_eq!(degs, vec![(1, 1), (4, 1)]);
    }

    #[test]
    fn c2_annihilation() {
        let g = grp("C2");
        let a = GroupRingElement::from_i64(&g, &[1, 1]).unwrap();
        let b = GroupRingElement::from_i64(&g, &[1, -1]).unwrap();
        assert!(a.mul(&b).unwrap().is_zero());
        let one = GroupRingElement::one(&g);
        assert_eq!(one.mul(&a).unwrap(), a);
    }

    #[test]
    fn involution_of_generator() {
        let g = grp("C4");
        let x = GroupRingElement::basis(&g, 1);
        assert_eq!(x.involution(), GroupRingElement::basis(&g, 3));
        assert_eq!(GroupRingElement::one(&g).involution(), GroupRingElement::one(&g));
    }

    #[test]
    fn trace_idempotent_c2() {
        let g = grp("C2");
        let e = trace_idempotent(&g);
        assert_eq!(e.coeffs(), &[half(1), half(-1)]);
        assert_eq!(e.mul(&e).unwrap(), e);
        assert!(e.mul(&GroupRingElement::trace_element(&g)).unwrap().is_zero());
    }

    #[test]
    fn mismatched_groups() {
        let a = GroupRingElement::one(&grp("C2"));
        let b = GroupRingElement::one(&grp("C3"));
        assert_eq!(a.mul(&b).unwrap_err(), Error::GroupMismatch);
    }

    #[test]
    fn wedderburn_c2_c3() {
        let w = abelian_wedderburn(&grp("C2")).unwrap();
        let ds: Vec<u64> = w.components.iter().map(|c| c.d).collect();
        assert_eq!(ds, vec![1, 2]);
        assert_eq!(w.components[0].idempotent.coeffs(), &[half(1), half(1)]);
        assert_eq!(w.components[1].idempotent.coeffs(), &[half(1), half(-1)]);
        let w3 = abelian_wedderburn(&grp("C3")).unwrap();
        let shape: Vec<(u64, u64, usize)> = w3.components.iter().map(|c| (c.d, c.degree, c.orbit.len())).collect();
        assert_eq!(shape, vec![(1, 1, 1), (3, 2, 2)]);
    }

    #[test]
    fn wedderburn_klein() {
        let g = grp("C2xC2");
        let w = abelian_wedderburn(&g).unwrap();
        assert_eq!(w.components.len(), 4);
        assert!(w.components.iter().all(|c| c.degree == 1 && c.d <= 2));
        // (1 +- a)(1 +- b)/4 with a = (0,1), b = (1,0)
        let mut expected = Vec::new();
        for sa in [1i64, -1] {
            for sb in [1i64, -1] {
                let coeffs: Vec<BigRational> = [1, sa, sb, sa * sb]
                    .iter()
                    .map(|&c| BigRational::new(BigInt::from(c), BigInt::from(4)))
                    .collect();
                expected.push(GroupRingElement::new(&g, coeffs).unwrap());
            }
        }
        for c in &w.components {
            assert!(expected.contains(&c.idempotent));
        }
        assert_eq!(sign_character_det(&w).unwrap().abs(), BigInt::from(16));
    }

    #[test]
    fn nonabelian_wedderburn_refused() {
        let s3 = Arc::new(FinGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]).unwrap());
        assert_eq!(abelian_wedderburn(&s3).unwrap_err(), Error::NonAbelian);
        let idems = rational_central_idempotents(&s3).unwrap();
        let dims: Vec<u64> = idems.iter().map(idempotent_dimension).collect();
        assert_eq!(dims, vec![1, 1, 4]);
    }
}
