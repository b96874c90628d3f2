mod common;

use std::sync::Arc;

use common::*;
use freelat_core::bounds::{abelian_components, match_split_data, SplitComponent};
use freelat_core::grouprings::{rational_central_idempotents, subgroup_idempotent, GroupRingElement};
use freelat_core::lattices::module_index;
use freelat_core::orders::*;
use freelat_core::FinGroup;
use num_bigint::BigUint;

fn split(parts: &[(u64, u64, u64)]) -> Vec<SplitComponent> {
    parts
        .iter()
        .map(|&(n_i, k_deg, d)| SplitComponent { n_i, k_deg, inv_diff_index: BigUint::from(d) })
        .collect()
}

#[test]
fn jacobinski_abelian_to_12() {
    for spec in abelian_specs(12) {
        let g = grp(&spec);
        let m = maximal_order_abelian(&g).unwrap();
        let direct = conductor(&m, &group_ring_order(&g)).unwrap();
        let formula = jacobinski_lattice(&m, &abelian_components(&g).unwrap()).unwrap();
        assert_eq!(direct, formula, "{spec}");
    }
}

#[test]
fn jacobinski_s3_with_split_data() {
    let g = s3();
    let m = maximal_order(&g).unwrap();
    let comps = match_split_data(&g, &split(&[(1, 1, 1), (1, 1, 1), (2, 1, 1)])).unwrap();
    let direct = conductor(&m, &group_ring_order(&g)).unwrap();
    assert_eq!(direct, jacobinski_lattice(&m, &comps).unwrap());
    assert_eq!(direct, right_conductor(&m, &group_ring_order(&g)).unwrap());
    assert!(match_split_data(&g, &split(&[(1, 1, 1), (1, 1, 1), (1, 4, 1)])).is_err());
}

#[test]
fn jacobinski_d4_with_split_data() {
    let g = d4();
    let m = maximal_order(&g).unwrap();
    let comps = match_split_data(&g, &split(&[(1, 1, 1), (1, 1, 1), (1, 1, 1), (1, 1, 1), (2, 1, 1)])).unwrap();
    let direct = conductor(&m, &group_ring_order(&g)).unwrap();
    assert_eq!(direct, jacobinski_lattice(&m, &comps).unwrap());
}

/// `Z[G] + eps Z[G]` for each primitive central idempotent and each
/// normal-subgroup idempotent, skipping the trivial ones.
fn intermediate_orders(g: &Arc<FinGroup>) -> Vec<OrderDesc> {
    let mut idems: Vec<GroupRingElement> = rational_central_idempotents(g).unwrap_or_default();
    for n in g.normal_subgroups() {
        idems.push(subgroup_idempotent(g, &n).unwrap());
    }
    let z = group_ring_order(g);
    let mut out: Vec<OrderDesc> = Vec::new();
    for e in idems {
        let o = idempotent_extension(g, &e).unwrap();
        if o.lattice() != z.lattice() && !out.iter().any(|x| x.lattice() == o.lattice()) {
            out.push(o);
        }
    }
    out
}

fn check_symmetry(g: &Arc<FinGroup>, gamma: &OrderDesc, label: &str) {
    let z = group_ring_order(g);
    let f = conductor(gamma, &z).unwrap();
    let up = order_index(gamma, &z).unwrap();
    let down = module_index(z.lattice(), &f).unwrap();
    assert_eq!(up, down, "{label}");
    let whole = module_index(gamma.lattice(), &f).unwrap();
    assert_eq!(whole.sqrt(), Some(up), "{label}");
}

#[test]
fn conductor_index_symmetry_all_fixtures() {
    let mut groups: Vec<(String, Arc<FinGroup>)> = abelian_specs(12).into_iter().map(|s| (s.clone(), grp(&s))).collect();
    groups.push(("S3".into(), s3()));
    groups.push(("D4".into(), d4()));
    groups.push(("Q8".into(), q8()));
    groups.push(("A4".into(), a4()));
    for (name, g) in groups {
        let m = maximal_order(&g).unwrap();
        check_symmetry(&g, &m, &name);
        let mids = intermediate_orders(&g);
        if g.size() > 1 {
            assert!(!mids.is_empty(), "{name}");
        }
        for o in mids {
            assert!(m.contains(&o));
            check_symmetry(&g, &o, &name);
        }
    }
}
