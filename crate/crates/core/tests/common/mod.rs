#![allow(dead_code)]

use std::sync::Arc;

use freelat_core::groups::{parse_group_spec, FinGroup};

pub fn grp(spec: &str) -> Arc<FinGroup> {
    Arc::new(parse_group_spec(spec).unwrap())
}

pub fn perm_group(gens: &[&[usize]]) -> Arc<FinGroup> {
    let gens: Vec<Vec<usize>> = gens.iter().map(|g| g.to_vec()).collect();
    Arc::new(FinGroup::from_permutations(&gens).unwrap())
}

pub fn s3() -> Arc<FinGroup> {
    perm_group(&[&[1, 0, 2], &[1, 2, 0]])
}

pub fn d4() -> Arc<FinGroup> {
    perm_group(&[&[1, 2, 3, 0], &[0, 3, 2, 1]])
}

pub fn a4() -> Arc<FinGroup> {
    perm_group(&[&[1, 2, 0, 3], &[1, 0, 3, 2]])
}

pub fn s4() -> Arc<FinGroup> {
    perm_group(&[&[1, 0, 2, 3], &[1, 2, 3, 0]])
}

pub fn a5() -> Arc<FinGroup> {
    perm_group(&[&[1, 2, 0, 3, 4], &[1, 2, 3, 4, 0]])
}

/// Quaternion units `±1, ±i, ±j, ±k` encoded as `4 * sign + unit`.
pub fn q8() -> Arc<FinGroup> {
    // unit products: (sign, unit) for 1, i, j, k
    let t: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let mul = (0..8)
        .map(|a| {
            (0..8)
                .map(|b| {
                    let (s, u) = t[a % 4][b % 4];
                    4 * ((a / 4 + b / 4 + s) % 2) + u
                })
                .collect()
        })
        .collect();
    Arc::new(FinGroup::from_table(mul, None).unwrap())
}

/// All abelian groups of order at most `bound`, one per isomorphism type,
/// as invariant-factor specs.
pub fn abelian_specs(bound: u64) -> Vec<String> {
    fn parts(n: u64, max_first: u64, out: &mut Vec<Vec<u64>>, cur: &mut Vec<u64>) {
        // invariant factors d_1 | d_2 | ... with product n, listed largest first
        if n == 1 {
            out.push(cur.clone());
            return;
        }
        for d in (2..=n.min(max_first)).rev() {
            if n.is_multiple_of(d) && cur.last().is_none_or(|&l| l % d == 0) {
                cur.push(d);
                parts(n / d, d, out, cur);
                cur.pop();
            }
        }
    }
    let mut specs = Vec::new();
    for n in 1..=bound {
        let mut out = Vec::new();
        parts(n, n, &mut out, &mut Vec::new());
        for mut f in out {
            if f.is_empty() {
                f.push(1);
            }
            f.reverse();
            specs.push(f.iter().map(|d| format!("C{d}")).collect::<Vec<_>>().join("x"));
        }
    }
    specs
}

pub fn q(n: i64) -> num_rational::BigRational {
    num_rational::BigRational::from_integer(n.into())
}
