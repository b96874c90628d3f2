//! JSON formats for lattices, groups, orders, split data and factored
//! values.

use std::collections::BTreeMap;

use freelat_core::bounds::{BoundReport, SplitComponent};
use freelat_core::freesub::FreeSubCertificate;
use freelat_core::grouprings::GroupRingElement;
use freelat_core::orders::OrderDesc;
use freelat_core::{BigInt, BigRational, BigUint, FinGroup, ModuleIndex, RatMatrix, ZLattice};
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::CliError;

fn bad(what: &str, msg: impl Into<String>) -> CliError {
    CliError::Format(format!("{what}: {}", msg.into()))
}

/// Integers become JSON numbers when they fit `i64`, strings otherwise.
pub fn int_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn parse_int(v: &Value, what: &str) -> Result<BigInt, CliError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| bad(what, format!("{n} is not an integer"))),
        Value::String(s) => s.trim().parse().map_err(|_| bad(what, format!("{s:?} is not an integer"))),
        _ => Err(bad(what, "expected an integer")),
    }
}

pub fn rational_string(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(v: &Value, what: &str) -> Result<BigRational, CliError> {
    if let Value::String(s) = v {
        if let Some((a, b)) = s.split_once('/') {
            let a: BigInt = a.trim().parse().map_err(|_| bad(what, format!("bad numerator in {s:?}")))?;
            let b: BigInt = b.trim().parse().map_err(|_| bad(what, format!("bad denominator in {s:?}")))?;
            if b.is_zero() {
                return Err(bad(what, "zero denominator"));
            }
            return Ok(BigRational::new(a, b));
        }
    }
    Ok(BigRational::from_integer(parse_int(v, what)?))
}

pub fn usize_field(obj: &Map<String, Value>, key: &str, what: &str) -> Result<usize, CliError> {
    obj.get(key)
        .and_then(Value::as_u64)
        .and_then(|v| usize::try_from(v).ok())
        .ok_or_else(|| bad(what, format!("missing or invalid {key:?}")))
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, CliError> {
    v.as_object().ok_or_else(|| bad(what, "expected a JSON object"))
}

pub fn lattice_to_json(x: &ZLattice) -> Value {
    json!({
        "ambient_dim": x.ambient_dim(),
        "rank": x.rank(),
        "denominator": int_value(x.den()),
        "rows": x.int_rows().iter().map(|r| r.iter().map(int_value).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

/// Reads lattice JSON. The rows may be any generating set; the result is
/// canonicalized, and a stated rank must match it.
pub fn lattice_from_json(v: &Value) -> Result<ZLattice, CliError> {
    let obj = object(v, "lattice")?;
    let dim = usize_field(obj, "ambient_dim", "lattice")?;
    let den = match obj.get("denominator") {
        Some(d) => parse_int(d, "lattice denominator")?,
        None => BigInt::from(1),
    };
    if den <= BigInt::zero() {
        return Err(bad("lattice", "denominator must be positive"));
    }
    let rows = obj
        .get("rows")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("lattice", "missing \"rows\""))?;
    let mut ints = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        let r = r.as_array().ok_or_else(|| bad("lattice", format!("row {i} is not an array")))?;
        if r.len() != dim {
            return Err(bad("lattice", format!("row {i} has {} entries, expected {dim}", r.len())));
        }
        ints.push(r.iter().map(|x| parse_int(x, "lattice entry")).collect::<Result<Vec<_>, _>>()?);
    }
    let gens = RatMatrix::from_int_rows_with_cols(&ints, dim, den)?;
    let x = ZLattice::from_generators(&gens);
    if let Some(r) = obj.get("rank") {
        let r = r.as_u64().ok_or_else(|| bad("lattice", "rank must be a non-negative integer"))?;
        if r as usize != x.rank() {
            return Err(bad("lattice", format!("stated rank {r} but the rows span rank {}", x.rank())));
        }
    }
    Ok(x)
}

pub fn group_to_json(g: &FinGroup) -> Value {
    json!({ "size": g.size(), "mul": g.table(), "names": g.names() })
}

pub fn group_from_json(v: &Value) -> Result<FinGroup, CliError> {
    let obj = object(v, "group")?;
    let size = usize_field(obj, "size", "group")?;
    let mul: Vec<Vec<usize>> = serde_json::from_value(obj.get("mul").cloned().unwrap_or(Value::Null))
        .map_err(|e| bad("group", format!("\"mul\" must be a table of indices: {e}")))?;
    if mul.len() != size {
        return Err(bad("group", format!("size is {size} but the table has {} rows", mul.len())));
    }
    let names: Option<Vec<String>> = match obj.get("names") {
        Some(n) => Some(serde_json::from_value(n.clone()).map_err(|e| bad("group", format!("bad \"names\": {e}")))?),
        None => None,
    };
    FinGroup::from_table(mul, names).map_err(|e| bad("group", e.to_string()))
}

pub fn split_from_json(v: &Value) -> Result<Vec<SplitComponent>, CliError> {
    let obj = object(v, "split data")?;
    let comps = obj
        .get("components")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("split data", "missing \"components\""))?;
    comps
        .iter()
        .map(|c| {
            let c = object(c, "split component")?;
            let inv = match c.get("inv_diff_index") {
                Some(v) => parse_int(v, "inv_diff_index")?,
                None => BigInt::from(1),
            };
            let inv: BigUint = inv
                .to_biguint()
                .filter(|x| !x.is_zero())
                .ok_or_else(|| bad("split component", "inv_diff_index must be positive"))?;
            Ok(SplitComponent {
                n_i: usize_field(c, "n_i", "split component")? as u64,
                k_deg: usize_field(c, "k_deg", "split component")? as u64,
                inv_diff_index: inv,
            })
        })
        .collect()
}

pub fn split_to_json(comps: &[SplitComponent]) -> Value {
    json!({
        "components": comps.iter().map(|c| json!({
            "n_i": c.n_i,
            "k_deg": c.k_deg,
            "inv_diff_index": c.inv_diff_index.to_string(),
        })).collect::<Vec<_>>()
    })
}

pub fn element_to_json(x: &GroupRingElement) -> Value {
    json!(x.coeffs().iter().map(rational_string).collect::<Vec<_>>())
}

pub fn order_to_json(o: &OrderDesc) -> Value {
    let mut v = lattice_to_json(o.lattice());
    v["unit"] = element_to_json(o.unit());
    v["mul_tensor"] = json!(o.mul_tensor());
    v
}

/// `{"decimal": "...", "factors": {"p": k}}`, with the decimal string only
/// when numerator and denominator fit in 64 bits.
pub fn index_to_json(x: &ModuleIndex) -> Value {
    let factors: BTreeMap<String, i64> = x.factors().iter().map(|(p, k)| (p.to_string(), *k)).collect();
    let mut out = json!({ "factors": factors });
    if let Some(d) = small_decimal(x) {
        out["decimal"] = json!(d);
    }
    out
}

pub fn small_decimal(x: &ModuleIndex) -> Option<String> {
    let v = x.value();
    (v.numer().to_u64().is_some() && v.denom().to_u64().is_some()).then(|| rational_string(v))
}

pub fn bound_report_to_json(r: &BoundReport) -> Value {
    json!({
        "group_size": r.group_size,
        "abelian": r.abelian,
        "rank": r.n,
        "s": r.s,
        "mode": r.mode.as_str(),
        "m_index": index_to_json(&r.m_index),
        "bound": index_to_json(&r.bound),
        "crude_bound": index_to_json(&r.crude_bound),
        "exponent_in_sigma": r.exponent_in_sigma,
        "trivial_class_group": r.trivial_class_group.as_str(),
        "locally_free_implies_free": r.locally_free_implies_free.as_str(),
        "i_factor": match r.i_factor {
            freelat_core::bounds::IFactor::Certified => "certified_1",
            freelat_core::bounds::IFactor::Uncertified => "uncertified",
        },
        "formulas": r.formulas.iter().map(|(k, v)| (k.clone(), index_to_json(v))).collect::<Map<_, _>>(),
    })
}

fn opt_index(x: &Option<ModuleIndex>) -> Value {
    x.as_ref().map_or(Value::Null, index_to_json)
}

pub fn certificate_to_json(c: &FreeSubCertificate) -> Value {
    json!({
        "input_hash": format!("{:016x}", c.input_hash),
        "rank": c.n,
        "s": c.s,
        "generators": c.generators.iter().map(|g| g.iter().map(rational_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "index_x_mx": index_to_json(&c.index_x_mx),
        "index_mx_y": opt_index(&c.index_mx_y),
        "index_y_z": opt_index(&c.index_y_z),
        "total_index": opt_index(&c.total_index),
        "order_index": index_to_json(&c.order_index),
        "i_factor": opt_index(&c.index_mx_y),
        "explicit_bound": index_to_json(&c.explicit_bound),
        "claimed_bound": opt_index(&c.claimed_bound),
        "verdict": c.verdict.as_str(),
        "coprime_to": c.coprime_to,
        "coprimality_achieved": c.coprimality_achieved,
        "search": {
            "candidates_tried": c.stats.candidates_tried,
            "max_height": c.stats.max_height,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use freelat_core::groups::parse_group_spec;

    #[test]
    fn lattice_round_trip() {
        let v = json!({"ambient_dim": 3, "rows": [[2, 4, 0], [0, 6, 3], [4, 2, 3]], "denominator": 4});
        let x = lattice_from_json(&v).unwrap();
        let back = lattice_from_json(&lattice_to_json(&x)).unwrap();
        assert_eq!(x, back);
        assert_eq!(lattice_to_json(&x), lattice_to_json(&back));
    }

    #[test]
    fn lattice_rank_mismatch() {
        let v = json!({"ambient_dim": 2, "rank": 2, "rows": [[1, 1], [2, 2]], "denominator": 1});
        assert!(lattice_from_json(&v).is_err());
        let v = json!({"ambient_dim": 2, "rows": [[1]], "denominator": 1});
        assert!(lattice_from_json(&v).is_err());
    }

    #[test]
    fn big_entries_as_strings() {
        let v = json!({"ambient_dim": 1, "rows": [["123456789012345678901234567890"]]});
        let x = lattice_from_json(&v).unwrap();
        let out = lattice_to_json(&x);
        assert_eq!(out["rows"][0][0], json!("123456789012345678901234567890"));
    }

    #[test]
    fn group_round_trip() {
        let g = parse_group_spec("C2xC3").unwrap();
        let h = group_from_json(&group_to_json(&g)).unwrap();
        assert_eq!(g.table(), h.table());
        let broken = json!({"size": 2, "mul": [[0, 1], [1, 1]]});
        assert!(group_from_json(&broken).is_err());
    }

    #[test]
    fn factored_index() {
        let x = ModuleIndex::from_integer(54);
        assert_eq!(index_to_json(&x), json!({"decimal": "54", "factors": {"2": 1, "3": 3}}));
        let big = ModuleIndex::from_integer(1 << 40).pow(3);
        assert!(index_to_json(&big).get("decimal").is_none());
    }

    #[test]
    fn split_round_trip() {
        let v = json!({"components": [{"n_i": 2, "k_deg": 1, "inv_diff_index": "4"}, {"n_i": 1, "k_deg": 1}]});
        let s = split_from_json(&v).unwrap();
        assert_eq!(s[0].inv_diff_index, BigUint::from(4u32));
        assert_eq!(split_from_json(&split_to_json(&s)).unwrap(), s);
    }
}
