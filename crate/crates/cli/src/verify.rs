//! Batteries behind `verify`: each identity is computed two ways and the
//! outcome recorded per group.

use std::sync::Arc;

use freelat_core::bounds::{
    abelian_components, index_formula_abelian, index_formula_general, match_split_data, sigma_is_divisor_closed,
    sigma_membership, trivial_class_group_zg, Tri,
};
use freelat_core::freesub::{
    free_sublattice, random_stable_lattice, random_trace_quotient_lattice, trace_quotient_free_sublattice, Verdict,
    DEFAULT_HEIGHT_CAP,
};
use freelat_core::grouprings::{rational_central_idempotents, subgroup_idempotent};
use freelat_core::lattices::module_index;
use freelat_core::orders::{
    conductor, group_ring_order, idempotent_extension, jacobinski_lattice, maximal_order, maximal_order_abelian,
    maximal_order_idealizer, order_index, right_conductor, OrderDesc,
};
use freelat_core::{FinGroup, ModuleIndex};
use num_traits::One;
use serde_json::{json, Value};

use crate::catalog::{builtin_split, named_group, NamedGroup};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub group: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, group: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            group: group.to_string(),
            pass,
            detail: detail.into(),
        }
    }

    fn from_result(name: &str, group: &str, r: Result<(bool, String), freelat_core::Error>) -> Self {
        match r {
            Ok((pass, detail)) => Check::new(name, group, pass, detail),
            Err(e) => Check::new(name, group, false, format!("error: {e}")),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "check": self.name, "group": self.group, "pass": self.pass, "detail": self.detail })
    }
}

fn prime_power(n: u64) -> Option<(u64, u32)> {
    let p = (2..=n).find(|p| n.is_multiple_of(*p))?;
    let mut m = n;
    let mut k = 0;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

fn is_cyclic(g: &FinGroup) -> bool {
    g.exponent() == g.size() as u64
}

/// `[M : Z[G]]` against the closed forms.
pub fn formulas(groups: &[NamedGroup]) -> Vec<Check> {
    let mut out = Vec::new();
    for NamedGroup { spec, group: g } in groups {
        let z = group_ring_order(g);
        if g.is_abelian() {
            out.push(Check::from_result("abelian_index_formula", spec, (|| {
                let direct = order_index(&maximal_order_abelian(g)?, &z)?;
                let formula = index_formula_abelian(g)?;
                Ok((direct == formula, format!("direct {direct}, formula {formula}")))
            })()));
            if is_cyclic(g) {
                if let Some((p, k)) = prime_power(g.size() as u64) {
                    out.push(Check::from_result("cyclic_prime_power", spec, (|| {
                        let direct = order_index(&maximal_order_abelian(g)?, &z)?;
                        let e: i64 = (0..k).map(|i| p.pow(i) as i64).sum();
                        let closed = ModuleIndex::from_integer(p).pow(e);
                        Ok((direct == closed, format!("direct {direct}, {p}^{e}")))
                    })()));
                }
            }
            if g.size() <= 12 {
                out.push(Check::from_result("idealizer_equals_closed_form", spec, (|| {
                    let a = maximal_order_abelian(g)?;
                    let b = maximal_order_idealizer(&z)?;
                    Ok((a.lattice() == b.lattice(), format!("index {}", order_index(&b, &z)?)))
                })()));
            }
        } else if let Some(split) = builtin_split(g) {
            out.push(Check::from_result("idealizer_index_formula", spec, (|| {
                let direct = order_index(&maximal_order_idealizer(&z)?, &z)?;
                let formula = index_formula_general(g.size() as u64, &split)?;
                Ok((direct == formula, format!("idealizer {direct}, formula {formula}")))
            })()));
        }
    }
    out
}

/// `Sigma` membership, divisor closure and the class-group predicate table.
pub fn tables() -> Vec<Check> {
    let mut out = Vec::new();
    for (e, want) in [(90, true), (84, true), (23, false), (29, false)] {
        out.push(Check::new("sigma_membership", &e.to_string(), sigma_membership(e) == want, format!("expected {want}")));
    }
    out.push(Check::new("sigma_divisor_closed", "-", sigma_is_divisor_closed(), ""));
    let cases: [(&str, Tri); 3] = [("C7", Tri::True), ("C12", Tri::False), ("D4", Tri::Unknown)];
    for (spec, want) in cases {
        let g = named_group(spec).unwrap_or_else(|| freelat_core::groups::parse_group_spec(spec).expect("valid spec"));
        let got = trivial_class_group_zg(&g);
        out.push(Check::new("trivial_class_group", spec, got == want, format!("got {}", got.as_str())));
    }
    out
}

/// `Z[G] + eps Z[G]` for primitive central and normal-subgroup idempotents.
pub fn intermediate_orders(g: &Arc<FinGroup>) -> Vec<OrderDesc> {
    let mut idems = rational_central_idempotents(g).unwrap_or_default();
    for n in g.normal_subgroups() {
        if let Ok(e) = subgroup_idempotent(g, &n) {
            idems.push(e);
        }
    }
    let z = group_ring_order(g);
    let mut out: Vec<OrderDesc> = Vec::new();
    for e in idems {
        if let Ok(o) = idempotent_extension(g, &e) {
            if o.lattice() != z.lattice() && !out.iter().any(|x| x.lattice() == o.lattice()) {
                out.push(o);
            }
        }
    }
    out
}

fn symmetry(g: &Arc<FinGroup>, gamma: &OrderDesc) -> Result<(bool, String), freelat_core::Error> {
    let z = group_ring_order(g);
    let f = conductor(gamma, &z)?;
    let up = order_index(gamma, &z)?;
    let down = module_index(z.lattice(), &f)?;
    let whole = module_index(gamma.lattice(), &f)?;
    let pass = up == down && whole.sqrt().as_ref() == Some(&up);
    Ok((pass, format!("[Gamma:Z[G]] = {up}, [Z[G]:f] = {down}, [Gamma:f] = {whole}")))
}

/// Jacobinski's formula and the conductor index symmetry.
pub fn conductors(groups: &[NamedGroup]) -> Vec<Check> {
    let mut out = Vec::new();
    for NamedGroup { spec, group: g } in groups {
        let z = group_ring_order(g);
        let m = match maximal_order(g) {
            Ok(m) => m,
            Err(e) => {
                out.push(Check::new("maximal_order", spec, false, format!("error: {e}")));
                continue;
            }
        };
        let comps = if g.is_abelian() {
            abelian_components(g).ok()
        } else {
            builtin_split(g).and_then(|s| match_split_data(g, &s).ok())
        };
        if let Some(comps) = comps {
            out.push(Check::from_result("jacobinski", spec, (|| {
                let direct = conductor(&m, &z)?;
                let formula = jacobinski_lattice(&m, &comps)?;
                let right = right_conductor(&m, &z)?;
                Ok((direct == formula && direct == right, format!("[Z[G]:f] = {}", module_index(z.lattice(), &direct)?)))
            })()));
        }
        out.push(Check::from_result("conductor_symmetry_maximal", spec, symmetry(g, &m)));
        for (k, o) in intermediate_orders(g).iter().enumerate() {
            out.push(Check::from_result(&format!("conductor_symmetry_intermediate_{k}"), spec, symmetry(g, o)));
        }
    }
    out
}

/// How many seeded instances the theorem harnesses run.
#[derive(Debug, Clone, Copy)]
pub struct HarnessSize {
    pub seeds_per_cell: u64,
    pub height_cap: u64,
}

impl Default for HarnessSize {
    fn default() -> Self {
        HarnessSize {
            seeds_per_cell: 17,
            height_cap: DEFAULT_HEIGHT_CAP,
        }
    }
}

/// Outcome of a seeded harness on one group.
#[derive(Debug, Clone, Default)]
pub struct HarnessTally {
    pub instances: u64,
    pub verdict_true: u64,
    pub i_factor_one: u64,
    pub index_one: u64,
    pub bound_one: u64,
    pub failures: Vec<String>,
}

/// Free sublattices of seeded `Z[G]`-lattices, rank 1 and 2, denominators
/// 2 to 4, against `[M : Z[G]]^{sn}`.
pub fn lattice_harness(g: &Arc<FinGroup>, size: HarnessSize) -> HarnessTally {
    let mut t = HarnessTally::default();
    let m = match maximal_order(g) {
        Ok(m) => m,
        Err(e) => {
            t.failures.push(format!("maximal order: {e}"));
            return t;
        }
    };
    for n in 1..=2usize {
        for denom in 2..=4u64 {
            for seed in 0..size.seeds_per_cell {
                t.instances += 1;
                let run = random_stable_lattice(g, n, denom, seed)
                    .and_then(|x| free_sublattice(g, &m, &x, n, 1, size.height_cap));
                tally(&mut t, run, &format!("n={n} denom={denom} seed={seed}"));
            }
        }
    }
    t
}

/// The same over `Z[G]/(Tr_G)` against `|G|^{-2n} [M : Z[G]]^{sn}`.
pub fn trace_quotient_harness(g: &Arc<FinGroup>, size: HarnessSize) -> HarnessTally {
    let mut t = HarnessTally::default();
    let m = match maximal_order(g) {
        Ok(m) => m,
        Err(e) => {
            t.failures.push(format!("maximal order: {e}"));
            return t;
        }
    };
    for n in 1..=2usize {
        for denom in 2..=4u64 {
            for seed in 0..size.seeds_per_cell.div_ceil(2) {
                t.instances += 1;
                let run = random_trace_quotient_lattice(g, n, denom, seed)
                    .and_then(|x| trace_quotient_free_sublattice(g, &m, &x, n, 1, size.height_cap));
                tally(&mut t, run, &format!("n={n} denom={denom} seed={seed}"));
            }
        }
    }
    t
}

fn tally(
    t: &mut HarnessTally,
    run: Result<freelat_core::freesub::FreeSubCertificate, freelat_core::Error>,
    label: &str,
) {
    match run {
        Ok(c) => {
            if c.verdict == Verdict::True {
                t.verdict_true += 1;
            } else {
                t.failures.push(format!("{label}: verdict {}", c.verdict.as_str()));
            }
            if c.index_mx_y.as_ref().is_some_and(|i| i.value().is_one()) {
                t.i_factor_one += 1;
            }
            if c.total_index.as_ref().is_some_and(|i| i.value().is_one()) {
                t.index_one += 1;
            }
            if c.explicit_bound.value().is_one() {
                t.bound_one += 1;
            }
        }
        Err(e) => t.failures.push(format!("{label}: {e}")),
    }
}

/// Both harnesses on every abelian group of the set.
pub fn theorems(groups: &[NamedGroup], size: HarnessSize) -> Vec<Check> {
    let mut out = Vec::new();
    for NamedGroup { spec, group: g } in groups {
        if !g.is_abelian() || g.size() < 2 {
            continue;
        }
        let t = lattice_harness(g, size);
        let pass = t.failures.is_empty() && t.i_factor_one == t.instances;
        out.push(Check::new("lattice_bound", spec, pass, harness_detail(&t)));
        let t = trace_quotient_harness(g, size);
        let strong = t.bound_one == 0 || t.index_one == t.bound_one;
        let pass = t.failures.is_empty() && t.i_factor_one == t.instances && strong;
        out.push(Check::new("trace_quotient_bound", spec, pass, harness_detail(&t)));
    }
    out
}

fn harness_detail(t: &HarnessTally) -> String {
    let mut s = format!(
        "{} instances, {} verdict true, {} with I-factor 1, {} with index 1",
        t.instances, t.verdict_true, t.i_factor_one, t.index_one
    );
    if let Some(f) = t.failures.first() {
        s.push_str(&format!("; first failure {f}"));
    }
    s
}
