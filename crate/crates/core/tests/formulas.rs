mod common;

use common::*;
use freelat_core::bounds::*;
use freelat_core::lattices::module_index;
use freelat_core::orders::*;
use num_bigint::BigUint;
use num_traits::One;

fn closed_form_cyclic(p: u64, k: u32) -> u64 {
    // p^(1 + p + ... + p^(k-1))
    let e: u32 = (0..k).map(|i| p.pow(i) as u32).sum();
    p.pow(e)
}

#[test]
fn abelian_index_formula_all_types_to_16() {
    let specs = abelian_specs(16);
    assert_eq!(specs.len(), 25);
    for spec in specs {
        let g = grp(&spec);
        let m = maximal_order_abelian(&g).unwrap();
        let direct = order_index(&m, &group_ring_order(&g)).unwrap();
        assert_eq!(direct, index_formula_abelian(&g).unwrap(), "{spec}");
    }
}

#[test]
fn cyclic_prime_power_index() {
    for (p, k) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
        let g = grp(&format!("C{}", p.pow(k)));
        let m = maximal_order_abelian(&g).unwrap();
        let idx = order_index(&m, &group_ring_order(&g)).unwrap();
        assert_eq!(idx.to_u64(), Some(closed_form_cyclic(p, k)), "C{}", p.pow(k));
    }
}

#[test]
fn idealizer_matches_abelian_closed_form() {
    for spec in abelian_specs(12) {
        let g = grp(&spec);
        let a = maximal_order_abelian(&g).unwrap();
        let b = maximal_order_idealizer(&group_ring_order(&g)).unwrap();
        assert_eq!(a.lattice(), b.lattice(), "{spec}");
    }
}

#[test]
fn idealizer_prime_order_does_not_matter() {
    let g = grp("C6");
    let z = group_ring_order(&g);
    let a = maximal_order_idealizer_with_primes(&z, &[2, 3]).unwrap();
    let b = maximal_order_idealizer_with_primes(&z, &[3, 2]).unwrap();
    assert_eq!(a.lattice(), b.lattice());
    assert!(maximal_order_idealizer_with_primes(&z, &[2]).is_err());
}

fn comp(n_i: u64, k_deg: u64, inv_diff: u64) -> SplitComponent {
    SplitComponent { n_i, k_deg, inv_diff_index: BigUint::from(inv_diff) }
}

#[test]
fn s3_idealizer_against_rational_split_formula() {
    let g = s3();
    let m = maximal_order_idealizer(&group_ring_order(&g)).unwrap();
    let idx = order_index(&m, &group_ring_order(&g)).unwrap();
    assert_eq!(idx, index_formula_rational_split(6, &[1, 1, 2]).unwrap());
    assert_eq!(idx.to_u64(), Some(54));
}

#[test]
fn nonabelian_idealizer_indices() {
    let zg = |g: &std::sync::Arc<freelat_core::FinGroup>| group_ring_order(g);
    let d4g = d4();
    let m = maximal_order(&d4g).unwrap();
    assert_eq!(
        order_index(&m, &zg(&d4g)).unwrap(),
        index_formula_rational_split(8, &[1, 1, 1, 1, 2]).unwrap()
    );
    let q = q8();
    let m = maximal_order(&q).unwrap();
    let comps = [comp(1, 1, 1), comp(1, 1, 1), comp(1, 1, 1), comp(1, 1, 1), comp(2, 1, 4)];
    assert_eq!(order_index(&m, &zg(&q)).unwrap(), index_formula_general(8, &comps).unwrap());
    let a = a4();
    let m = maximal_order(&a).unwrap();
    let comps = [comp(1, 1, 1), comp(1, 2, 3), comp(3, 1, 1)];
    assert_eq!(order_index(&m, &zg(&a)).unwrap(), index_formula_general(12, &comps).unwrap());
}

#[test]
fn s4_idealizer_index() {
    let g = s4();
    let m = maximal_order(&g).unwrap();
    let idx = order_index(&m, &group_ring_order(&g)).unwrap();
    assert_eq!(idx, index_formula_rational_split(24, &[1, 1, 2, 3, 3]).unwrap());
}

#[test]
fn idealizer_output_is_a_fixed_point() {
    for g in [s3(), q8()] {
        let m = maximal_order(&g).unwrap();
        let again = maximal_order_idealizer(&m).unwrap();
        assert_eq!(m.lattice(), again.lattice());
        assert!(m.contains(&group_ring_order(&g)));
    }
}

#[test]
fn discriminant_relation_examples() {
    for spec in ["C2", "C3", "C4", "C2xC2", "C6"] {
        let g = grp(spec);
        let m = maximal_order_abelian(&g).unwrap();
        let z = group_ring_order(&g);
        let lhs = discriminant(&z).unwrap();
        let idx = order_index(&m, &z).unwrap().to_u64().unwrap();
        assert_eq!(lhs, BigUint::from(idx * idx) * discriminant(&m).unwrap(), "{spec}");
        // |G|^|G| under the regular trace
        let n = g.size() as u64;
        assert_eq!(lhs, BigUint::from(n).pow(n as u32));
    }
}

#[test]
fn sigma_and_predicates() {
    for e in [90, 84] {
        assert!(sigma_membership(e));
    }
    for e in [23, 29] {
        assert!(!sigma_membership(e));
    }
    assert!(sigma_is_divisor_closed());
    assert_eq!(trivial_class_group_zg(&grp("C7")), Tri::True);
    assert_eq!(trivial_class_group_zg(&grp("C12")), Tri::False);
    assert_eq!(trivial_class_group_zg(&d4()), Tri::Unknown);
    assert_eq!(recognize(&q8()), Some(KnownGroup::Q8));
    assert_eq!(recognize(&d4()), Some(KnownGroup::D4));
    assert_eq!(recognize(&a5()), Some(KnownGroup::A5));
}

#[test]
fn general_formula_reduces_to_rational_split() {
    let comps = [comp(1, 1, 1), comp(1, 1, 1), comp(2, 1, 1)];
    assert_eq!(
        index_formula_general(6, &comps).unwrap(),
        index_formula_rational_split(6, &[1, 1, 2]).unwrap()
    );
}

#[test]
fn trace_quotient_indices_abelian() {
    for spec in abelian_specs(12).into_iter().skip(1) {
        let g = grp(&spec);
        let m = maximal_order_abelian(&g).unwrap();
        let z = group_ring_order(&g);
        let me = trace_quotient_order(&m).unwrap();
        let ze = trace_quotient_order(&z).unwrap();
        let mz = order_index(&m, &z).unwrap();
        let gi = freelat_core::ModuleIndex::from_integer(g.size() as u64);
        assert_eq!(order_index(&me, &ze).unwrap(), mz.div(&gi), "{spec}");
        let je = conductor(&m, &z).unwrap().image(&freelat_core::grouprings::trace_idempotent(&g).right_mul_matrix()).unwrap();
        assert_eq!(module_index(ze.lattice(), &je).unwrap(), mz, "{spec}");
    }
    let g = grp("C1");
    assert!(index_formula_abelian(&g).unwrap().value().is_one());
}
