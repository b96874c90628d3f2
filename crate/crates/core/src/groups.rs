//! Finite groups as explicit multiplication tables.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numtheory::{euler_phi, lcm_u64};

/// Tables larger than this skip the cubic associativity check.
pub const AXIOM_CHECK_LIMIT: usize = 128;

/// A finite group on the elements `0..size`, with `0` the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinGroup {
    size: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    names: Vec<String>,
    orders: Vec<u64>,
    abelian: bool,
    exponent: u64,
}

impl FinGroup {
    /// Validates a multiplication table and builds the group.
    pub fn from_table(mul: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<Self> {
        let n = mul.len();
        if n == 0 {
            return Err(Error::GroupSpec("empty table".into()));
        }
        for (i, row) in mul.iter().enumerate() {
            if row.len() != n {
                return Err(Error::GroupSpec(format!("row {} has length {}", i, row.len())));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::GroupSpec(format!("entry {} out of range in row {}", x, i)));
            }
        }
        let names = match names {
            Some(v) if v.len() != n => {
                return Err(Error::GroupSpec(format!("{} names for {} elements", v.len(), n)))
            }
            Some(v) => v,
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        for a in 0..n {
            if mul[0][a] != a || mul[a][0] != a {
                return Err(Error::GroupAxiom(format!("identity: 0*{a} or {a}*0 is not {a}")));
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| mul[a][b] == 0) {
                Some(b) if mul[b][a] == 0 => inv[a] = b,
                _ => return Err(Error::GroupAxiom(format!("inverse: element {a} has no two-sided inverse"))),
            }
        }
        for (a, row) in mul.iter().enumerate() {
            let mut seen = vec![false; n];
            for &x in row {
                if seen[x] {
                    return Err(Error::GroupAxiom(format!("latin square: row {a} repeats {x}")));
                }
                seen[x] = true;
            }
        }
        if n <= AXIOM_CHECK_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = mul[a][b];
                    for c in 0..n {
                        if mul[ab][c] != mul[a][mul[b][c]] {
                            return Err(Error::GroupAxiom(format!(
                                "associativity: ({a}*{b})*{c} != {a}*({b}*{c})"
                            )));
                        }
                    }
                }
            }
        }
        let flat: Vec<usize> = mul.into_iter().flatten().collect();
        let mut orders = vec![0u64; n];
        for (a, o) in orders.iter_mut().enumerate() {
            let mut x = a;
            let mut k = 1;
            while x != 0 {
                x = flat[x * n + a];
                k += 1;
            }
            *o = k;
        }
        let abelian = (0..n).all(|a| (0..n).all(|b| flat[a * n + b] == flat[b * n + a]));
        let exponent = orders.iter().fold(1, |acc, &o| lcm_u64(acc, o));
        Ok(FinGroup {
            size: n,
            mul: flat,
            inv,
            names,
            orders,
            abelian,
            exponent,
        })
    }

    /// `C_{n_1} x ... x C_{n_k}` with elements ordered lexicographically by
    /// their exponent tuples.
    pub fn abelian_product(factors: &[u64]) -> Result<Self> {
        if factors.is_empty() || factors.contains(&0) {
            return Err(Error::GroupSpec("cyclic factors must be positive".into()));
        }
        let size: u64 = factors.iter().product();
        if size > 1 << 16 {
            return Err(Error::GroupSpec(format!("group of order {size} is too large")));
        }
        let size = size as usize;
        let decode = |mut i: usize| -> Vec<u64> {
            let mut t = vec![0u64; factors.len()];
            for (k, &f) in factors.iter().enumerate().rev() {
                t[k] = (i as u64) % f;
                i /= f as usize;
            }
            t
        };
        let encode = |t: &[u64]| -> usize {
            t.iter()
                .zip(factors)
                .fold(0usize, |acc, (&x, &f)| acc * f as usize + x as usize)
        };
        let tuples: Vec<Vec<u64>> = (0..size).map(decode).collect();
        let mut mul = vec![vec![0usize; size]; size];
        for a in 0..size {
            for b in 0..size {
                let s: Vec<u64> = tuples[a]
                    .iter()
                    .zip(&tuples[b])
                    .zip(factors)
                    .map(|((x, y), f)| (x + y) % f)
                    .collect();
                mul[a][b] = encode(&s);
            }
        }
        let names = tuples
            .iter()
            .map(|t| {
                let parts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        Self::from_table(mul, Some(names))
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::abelian_product(&[n])
    }

    /// The permutation group generated by `gens` (images of `0..d`), with
    /// elements in breadth-first order from the identity and named by their
    /// image lists.
    pub fn from_permutations(gens: &[Vec<usize>]) -> Result<Self> {
        let d = gens.first().map_or(0, |g| g.len());
        for g in gens {
            let mut seen = vec![false; d];
            if g.len() != d || g.iter().any(|&x| x >= d || core::mem::replace(&mut seen[x], true)) {
                return Err(Error::GroupSpec("generators must be permutations of one set".into()));
            }
        }
        let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { q.iter().map(|&x| p[x]).collect() };
        let mut elems: Vec<Vec<usize>> = vec![(0..d).collect()];
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let y = compose(&elems[i], g);
                if !elems.contains(&y) {
                    elems.push(y);
                }
                if elems.len() > 1 << 12 {
                    return Err(Error::GroupSpec("permutation group too large".into()));
                }
            }
            i += 1;
        }
        let n = elems.len();
        let mut mul = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                let ab = compose(&elems[a], &elems[b]);
                mul[a][b] = elems.iter().position(|x| *x == ab).expect("closed");
            }
        }
        let names = elems
            .iter()
            .map(|p| {
                let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                format!("[{}]", parts.join(" "))
            })
            .collect();
        Self::from_table(mul, Some(names))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn element_order(&self, a: usize) -> u64 {
        self.orders[a]
    }

    pub fn pow(&self, a: usize, k: u64) -> usize {
        let mut x = 0;
        for _ in 0..k % self.orders[a] {
            x = self.mul(x, a);
        }
        x
    }

    /// Number of elements of each order.
    pub fn order_statistics(&self) -> BTreeMap<u64, u64> {
        let mut out = BTreeMap::new();
        for &o in &self.orders {
            *out.entry(o).or_insert(0) += 1;
        }
        out
    }

    /// `t_d`: the number of cyclic subgroups of order `d`, for each divisor
    /// `d` of the exponent that occurs.
    pub fn cyclic_subgroup_counts(&self) -> BTreeMap<u64, u64> {
        self.order_statistics()
            .into_iter()
            .map(|(d, c)| (d, c / euler_phi(d)))
            .collect()
    }

    /// Conjugacy classes, each sorted, listed by smallest element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.size];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for a in 0..self.size {
            if class_of[a] != usize::MAX {
                continue;
            }
            let mut cls: Vec<usize> = (0..self.size)
                .map(|g| self.mul(self.mul(g, a), self.inv(g)))
                .collect();
            cls.sort_unstable();
            cls.dedup();
            for &x in &cls {
                class_of[x] = classes.len();
            }
            classes.push(cls);
        }
        classes
    }

    pub fn is_normal(&self, subgroup: &[usize]) -> bool {
        let mut mem = vec![false; self.size];
        for &h in subgroup {
            mem[h] = true;
        }
        (0..self.size).all(|g| subgroup.iter().all(|&h| mem[self.mul(self.mul(g, h), self.inv(g))]))
    }

    /// Subgroup generated by the given elements, sorted.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut mem = vec![false; self.size];
        mem[0] = true;
        let mut elems = vec![0usize];
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !mem[y] {
                    mem[y] = true;
                    elems.push(y);
                }
            }
            i += 1;
        }
        elems.sort_unstable();
        elems
    }

    /// All normal subgroups, each as a sorted element list. Every normal
    /// subgroup is a union of classes generated by those classes, so closing
    /// unions of class-generated subgroups finds them all.
    pub fn normal_subgroups(&self) -> Vec<Vec<usize>> {
        let classes = self.conjugacy_classes();
        let mut found: Vec<Vec<usize>> = vec![vec![0]];
        let mut i = 0;
        while i < found.len() {
            for cls in &classes {
                let mut gens = found[i].clone();
                gens.extend_from_slice(cls);
                let h = self.generated_subgroup(&gens);
                if !found.contains(&h) {
                    found.push(h);
                }
            }
            i += 1;
        }
        found.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        found
    }

    /// Dihedral of order `2m` with `m >= 3`: an element of order `m` whose
    /// cyclic subgroup has only involutions outside it.
    pub fn is_dihedral(&self) -> bool {
        if self.abelian || !self.size.is_multiple_of(2) {
            return false;
        }
        let m = (self.size / 2) as u64;
        (0..self.size).filter(|&r| self.orders[r] == m).any(|r| {
            let c = self.generated_subgroup(&[r]);
            (0..self.size)
                .filter(|x| c.binary_search(x).is_err())
                .all(|x| self.orders[x] == 2)
        })
    }
}

/// Parses `C<n>` or `C<n>xC<m>x...`. Table files are handled by callers that
/// can do IO.
pub fn parse_group_spec(spec: &str) -> Result<FinGroup> {
    let spec = spec.trim();
    if spec.starts_with("table:") {
        return Err(Error::Unsupported(
            "table specs need a file loader; use the std front end".into(),
        ));
    }
    let mut factors = Vec::new();
    for part in spec.split(['x', 'X']) {
        let part = part.trim();
        let digits = part
            .strip_prefix('C')
            .or_else(|| part.strip_prefix('c'))
            .ok_or_else(|| Error::GroupSpec(format!("expected C<n>, got {part:?}")))?;
        let n: u64 = digits
            .parse()
            .map_err(|_| Error::GroupSpec(format!("bad cyclic order {digits:?}")))?;
        factors.push(n);
    }
    FinGroup::abelian_product(&factors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let c2 = parse_group_spec("C2").unwrap();
        assert_eq!((c2.size(), c2.exponent(), c2.is_abelian()), (2, 2, true));
        let g = parse_group_spec("C2xC4").unwrap();
        assert_eq!((g.size(), g.exponent(), g.is_abelian()), (8, 4, true));
        assert!(parse_group_spec("D4").is_err());
        assert!(parse_group_spec("C0").is_err());
        assert!(parse_group_spec("Cx").is_err());
    }

    #[test]
    fn cyclic_counts() {
        let c2 = FinGroup::cyclic(2).unwrap();
        assert_eq!(c2.cyclic_subgroup_counts(), BTreeMap::from([(1, 1), (2, 1)]));
        let g = parse_group_spec("C2xC4").unwrap();
        assert_eq!(g.cyclic_subgroup_counts(), BTreeMap::from([(1, 1), (2, 3), (4, 2)]));
        let v = parse_group_spec("C2xC2").unwrap();
        assert_eq!(v.cyclic_subgroup_counts(), BTreeMap::from([(1, 1), (2, 3)]));
    }

    #[test]
    fn rejects_broken_table() {
        // Latin square with identity 0 that is not associative.
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FinGroup::from_table(t, None).unwrap_err();
        assert!(matches!(err, Error::GroupAxiom(ref s) if s.starts_with("associativity")));
        let t = vec![vec![0, 1], vec![1, 1]];
        assert!(FinGroup::from_table(t, None).is_err());
    }

    #[test]
    fn normal_subgroups_of_cyclic() {
        let c6 = FinGroup::cyclic(6).unwrap();
        assert_eq!(c6.normal_subgroups().len(), 4);
        assert!(!c6.is_dihedral());
    }
}
