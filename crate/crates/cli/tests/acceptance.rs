//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines always reach the output.

use std::sync::Arc;
use std::time::{Duration, Instant};

use freelat::catalog::{group_set, NamedGroup};
use freelat::verify::{self, Check, HarnessSize};
use freelat_core::exactlin::RatMatrix;
use freelat_core::freesub::random_stable_lattice;
use freelat_core::grouprings::trace_idempotent;
use freelat_core::lattices::{max_sublattice, min_overlattice, module_index, ModuleAction};
use freelat_core::orders::{
    conductor, discriminant, group_ring_order, maximal_order, order_index, trace_quotient_order, OrderDesc,
};
use freelat_core::{BigInt, BigRational, BigUint, FinGroup, ModuleIndex, ZLattice};
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

struct Outcome {
    pass: bool,
    detail: String,
}

fn checks_outcome<'a>(checks: impl IntoIterator<Item = &'a Check>) -> Outcome {
    let mut total = 0;
    let mut failed = Vec::new();
    for c in checks {
        total += 1;
        if !c.pass {
            failed.push(format!("{} {} ({})", c.name, c.group, c.detail));
        }
    }
    Outcome {
        pass: total > 0 && failed.is_empty(),
        detail: match failed.first() {
            None => format!("{total} checks"),
            Some(f) => format!("{} of {total} failed, first: {f}", failed.len()),
        },
    }
}

fn groups(set: &str) -> Vec<NamedGroup> {
    group_set(set).expect("known group set")
}

fn criterion_1() -> Outcome {
    let gs = groups("abelian16");
    let checks = verify::formulas(&gs);
    let mut o = checks_outcome(checks.iter().filter(|c| c.name == "abelian_index_formula"));
    o.detail = format!("{} groups, {}", gs.len(), o.detail);
    o
}

fn criterion_2() -> Outcome {
    let checks = verify::formulas(&groups("cyclic-prime-power"));
    checks_outcome(checks.iter().filter(|c| c.name == "cyclic_prime_power"))
}

fn criterion_3() -> Outcome {
    let mut gs = groups("abelian12");
    gs.extend(groups("S3"));
    let checks = verify::formulas(&gs);
    checks_outcome(
        checks
            .iter()
            .filter(|c| c.name == "idealizer_equals_closed_form" || c.name == "idealizer_index_formula"),
    )
}

fn criterion_4() -> Outcome {
    let mut gs = groups("abelian12");
    gs.extend(groups("S3"));
    let checks = verify::conductors(&gs);
    checks_outcome(checks.iter().filter(|c| c.name == "jacobinski"))
}

fn criterion_5() -> Outcome {
    let checks = verify::conductors(&groups("all"));
    checks_outcome(checks.iter().filter(|c| c.name.starts_with("conductor_symmetry")))
}

fn criterion_6() -> Outcome {
    let mut detail = Vec::new();
    let mut pass = true;
    for NamedGroup { spec, group } in groups("harness") {
        let t = verify::lattice_harness(&group, HarnessSize::default());
        pass &= t.instances >= 100 && t.failures.is_empty() && t.i_factor_one == t.instances;
        detail.push(format!("{spec} {}/{}", t.verdict_true, t.instances));
        if let Some(f) = t.failures.first() {
            detail.push(format!("first failure {f}"));
        }
    }
    Outcome { pass, detail: detail.join(", ") }
}

fn criterion_7() -> Outcome {
    let mut detail = Vec::new();
    let mut pass = true;
    for NamedGroup { spec, group } in groups("trace-quotient") {
        let t = verify::trace_quotient_harness(&group, HarnessSize::default());
        pass &= t.instances >= 50 && t.failures.is_empty() && t.i_factor_one == t.instances;
        if spec != "C2" {
            pass &= t.bound_one == t.instances && t.index_one == t.instances;
        }
        detail.push(format!("{spec} {}/{} (index 1: {})", t.verdict_true, t.instances, t.index_one));
    }
    Outcome { pass, detail: detail.join(", ") }
}

fn criterion_9() -> Outcome {
    checks_outcome(verify::tables().iter())
}

// Property suites.

struct Fixture {
    group: Arc<FinGroup>,
    m: OrderDesc,
    z: OrderDesc,
    orders: Vec<OrderDesc>,
}

fn fixtures() -> Vec<Fixture> {
    groups("C2,C3,C4,C2xC2,C5,C6,C8,C2xC4,S3,D4,Q8")
        .into_iter()
        .map(|NamedGroup { group, .. }| {
            let m = maximal_order(&group).expect("maximal order");
            let z = group_ring_order(&group);
            let mut orders = vec![z.clone(), m.clone()];
            orders.extend(verify::intermediate_orders(&group));
            Fixture { group, m, z, orders }
        })
        .collect()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn full_lattice(dim: usize) -> impl Strategy<Value = ZLattice> {
    (
        prop::collection::vec(prop::collection::vec(-5i64..=5, dim), 0..=dim + 1),
        1i64..=6,
        1i64..=4,
    )
        .prop_map(move |(rows, k, den)| {
            let mut gens: Vec<Vec<BigRational>> =
                rows.iter().map(|r| r.iter().map(|&x| rat(x, den)).collect()).collect();
            for i in 0..dim {
                let mut v = vec![BigRational::zero(); dim];
                v[i] = rat(k, den);
                gens.push(v);
            }
            ZLattice::from_rat_vectors(dim, &gens).expect("consistent dims")
        })
}

fn idx(a: &ZLattice, b: &ZLattice) -> ModuleIndex {
    module_index(a, b).expect("same span")
}

fn glued(m1: &ZLattice, m3: &ZLattice, t: &RatMatrix) -> ZLattice {
    let b = m3.ambient_dim();
    let mut gens = Vec::new();
    for mut v in m1.basis_vectors() {
        v.extend(vec![BigRational::zero(); b]);
        gens.push(v);
    }
    let lifted = m3.basis().mul(t).expect("dims");
    for (i, v) in m3.basis_vectors().into_iter().enumerate() {
        let mut w = lifted.rat_row(i);
        w.extend(v);
        gens.push(w);
    }
    ZLattice::from_rat_vectors(m1.ambient_dim() + b, &gens).expect("dims")
}

fn run_property<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

fn criterion_8() -> Outcome {
    let fx = fixtures();
    let fx = &fx;
    let abelian = fx.iter().filter(|f| f.group.is_abelian()).count();
    let mut results = Vec::new();

    results.push(run_property(
        "index multiplicativity",
        (full_lattice(3), full_lattice(3), full_lattice(3)),
        |(l1, a, b)| {
            let l2 = l1.intersect(&a).unwrap();
            let l3 = l2.intersect(&b).unwrap();
            prop_assert_eq!(idx(&l1, &l3), idx(&l1, &l2).mul(&idx(&l2, &l3)));
            Ok(())
        },
    ));
    results.push(run_property(
        "block form",
        (full_lattice(2), full_lattice(2), full_lattice(2), full_lattice(2), prop::collection::vec(-3i64..=3, 8)),
        |(m1, n1, m3, n3, t)| {
            let tm = RatMatrix::from_i64(&[[t[0], t[1]], [t[2], t[3]]]).unwrap();
            let um = RatMatrix::from_i64(&[[t[4], t[5]], [t[6], t[7]]]).unwrap();
            prop_assert_eq!(idx(&glued(&m1, &m3, &tm), &glued(&n1, &n3, &um)), idx(&m1, &n1).mul(&idx(&m3, &n3)));
            Ok(())
        },
    ));
    results.push(run_property("dual reversal", (full_lattice(3), full_lattice(3)), |(m, n)| {
        prop_assert_eq!(idx(&m, &n), idx(&n.dual().unwrap(), &m.dual().unwrap()));
        Ok(())
    }));
    results.push(run_property(
        "dual of overlattice",
        (0..fx.len(), 0usize..16, prop::collection::vec(-4i64..=4, 0..=16), 1i64..=4, 1i64..=3),
        |(fi, oi, entries, k, den)| {
            let f = &fx[fi];
            let gamma = &f.orders[oi % f.orders.len()];
            let d = f.group.size();
            let mut gens: Vec<Vec<BigRational>> = entries
                .chunks(d)
                .filter(|c| c.len() == d)
                .map(|c| c.iter().map(|&x| rat(x, den)).collect())
                .collect();
            for i in 0..d {
                let mut v = vec![BigRational::zero(); d];
                v[i] = rat(k, den);
                gens.push(v);
            }
            let x = ZLattice::from_rat_vectors(d, &gens).unwrap();
            let act = gamma.left_action();
            let gx = min_overlattice(&act, &x).unwrap();
            let xd = x.dual().unwrap();
            let inv = ModuleAction::new(
                d,
                gamma.basis_elements().iter().map(|b| b.involution().left_mul_matrix()).collect(),
            )
            .unwrap();
            let sub = max_sublattice(&inv, &xd).unwrap();
            prop_assert_eq!(gx.dual().unwrap(), sub.clone());
            prop_assert_eq!(idx(&gx, &x), idx(&xd, &sub));
            Ok(())
        },
    ));
    results.push(run_property(
        "bounded by conductor",
        (0..fx.len(), 1usize..=2, 2u64..=4, any::<u64>()),
        |(fi, n, denom, seed)| {
            let f = &fx[fi];
            let x = random_stable_lattice(&f.group, n, denom, seed).unwrap();
            let act = f.m.left_action().diagonal(n);
            let j = conductor(&f.m, &f.z).unwrap();
            let ratio = idx(&min_overlattice(&act, &x).unwrap(), &max_sublattice(&act, &x).unwrap());
            prop_assert!(ratio.divides(&idx(f.m.lattice(), &j).pow(n as i64)));
            Ok(())
        },
    ));
    results.push(run_property(
        "commutative bound",
        (0..abelian, 1usize..=2, 2u64..=4, any::<u64>()),
        |(fi, n, denom, seed)| {
            let f = &fx[fi];
            let x = random_stable_lattice(&f.group, n, denom, seed).unwrap();
            let down = max_sublattice(&f.m.left_action().diagonal(n), &x).unwrap();
            prop_assert!(idx(&x, &down).divides(&order_index(&f.m, &f.z).unwrap().pow(n as i64)));
            Ok(())
        },
    ));
    results.push(run_property("trace quotient indices", 0..abelian, |fi| {
        let f = &fx[fi];
        let mz = order_index(&f.m, &f.z).unwrap();
        let me = trace_quotient_order(&f.m).unwrap();
        let ze = trace_quotient_order(&f.z).unwrap();
        let gi = ModuleIndex::from_integer(f.group.size() as u64);
        prop_assert_eq!(order_index(&me, &ze).unwrap(), mz.div(&gi));
        let e = trace_idempotent(&f.group).right_mul_matrix();
        let je = conductor(&f.m, &f.z).unwrap().image(&e).unwrap();
        prop_assert_eq!(idx(ze.lattice(), &je), mz);
        Ok(())
    }));
    results.push(run_property("discriminant relation", (0..fx.len(), 0usize..16), |(fi, oi)| {
        let f = &fx[fi];
        let gamma = &f.orders[oi % f.orders.len()];
        let k = order_index(gamma, &f.z).unwrap();
        prop_assert!(k.is_integral());
        let k: BigUint = k.value().to_integer().magnitude().clone();
        prop_assert_eq!(discriminant(&f.z).unwrap(), &k * &k * discriminant(gamma).unwrap());
        Ok(())
    }));

    let failed: Vec<String> = results.iter().filter_map(|r| r.clone().err()).collect();
    Outcome {
        pass: failed.is_empty(),
        detail: match failed.first() {
            None => format!("{} suites x 1000 cases", results.len()),
            Some(f) => format!("{} suites failed, first: {f}", failed.len()),
        },
    }
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("abelian index formula, all abelian groups of order <= 16", Duration::from_secs(60), criterion_1),
        ("cyclic prime-power index", Duration::from_secs(5), criterion_2),
        ("idealizer cross-validation", Duration::from_secs(60), criterion_3),
        ("conductor equals the Jacobinski lattice", Duration::from_secs(60), criterion_4),
        ("conductor index symmetry", Duration::from_secs(30), criterion_5),
        ("free sublattice bound over Z[G]", Duration::from_secs(600), criterion_6),
        ("free sublattice bound over Z[G]/(Tr)", Duration::from_secs(600), criterion_7),
        ("property suites", Duration::from_secs(600), criterion_8),
        ("Sigma and class-group tables", Duration::from_secs(1), criterion_9),
    ];
    let mut all = true;
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let took = start.elapsed();
        // Budgets are stated for optimized builds; report overruns without
        // failing on them.
        let note = if took > *budget { " (over time budget)" } else { "" };
        println!(
            "criterion {}: {} - {name} [{:.2?}{note}] {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            took,
            o.detail
        );
        all &= o.pass;
    }
    if !all {
        std::process::exit(1);
    }
}
