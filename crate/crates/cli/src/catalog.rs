//! Group specs, named groups, built-in split data and group sets.

use std::path::Path;
use std::sync::Arc;

use freelat_core::bounds::{recognize, KnownGroup, SplitComponent};
use freelat_core::groups::parse_group_spec;
use freelat_core::{BigUint, FinGroup};

use crate::formats::{group_from_json, split_from_json};
use crate::CliError;

/// A group together with the spec it was loaded from.
#[derive(Debug, Clone)]
pub struct NamedGroup {
    pub spec: String,
    pub group: Arc<FinGroup>,
}

fn perms(gens: &[&[usize]]) -> FinGroup {
    let gens: Vec<Vec<usize>> = gens.iter().map(|g| g.to_vec()).collect();
    FinGroup::from_permutations(&gens).expect("valid permutations")
}

fn quaternion() -> FinGroup {
    // i and j acting on Q8 by left multiplication, elements ordered
    // 1, i, j, k, -1, -i, -j, -k
    perms(&[&[1, 4, 3, 6, 5, 0, 7, 2], &[2, 7, 4, 1, 6, 3, 0, 5]])
}

/// `S3`, `D4`, `Q8`, `A4`, `S4`, `A5` by name.
pub fn named_group(name: &str) -> Option<FinGroup> {
    Some(match name.to_ascii_uppercase().as_str() {
        "S3" => perms(&[&[1, 0, 2], &[1, 2, 0]]),
        "D4" => perms(&[&[1, 2, 3, 0], &[0, 3, 2, 1]]),
        "Q8" => quaternion(),
        "A4" => perms(&[&[1, 2, 0, 3], &[1, 0, 3, 2]]),
        "S4" => perms(&[&[1, 0, 2, 3], &[1, 2, 3, 0]]),
        "A5" => perms(&[&[1, 2, 0, 3, 4], &[1, 2, 3, 4, 0]]),
        _ => return None,
    })
}

pub fn read_json(path: &Path) -> Result<serde_json::Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

/// `C<n>x...`, `table:<path>`, or a name accepted by [`named_group`].
pub fn load_group(spec: &str) -> Result<NamedGroup, CliError> {
    let spec = spec.trim();
    let group = if let Some(path) = spec.strip_prefix("table:") {
        let v = read_json(Path::new(path))?;
        group_from_json(&v).map_err(|e| match e {
            CliError::Format(m) => CliError::Format(format!("{path}: {m}")),
            other => other,
        })?
    } else if let Some(g) = named_group(spec) {
        g
    } else {
        parse_group_spec(spec).map_err(|e| {
            CliError::Usage(format!("{e}; expected C<n>xC<m>..., table:<path>, or one of S3, D4, Q8, A4, S4, A5"))
        })?
    };
    Ok(NamedGroup {
        spec: spec.to_string(),
        group: Arc::new(group),
    })
}

pub fn load_split(path: &Path) -> Result<Vec<SplitComponent>, CliError> {
    split_from_json(&read_json(path)?).map_err(|e| match e {
        CliError::Format(m) => CliError::Format(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn comp(n_i: u64, k_deg: u64, inv_diff: u32) -> SplitComponent {
    SplitComponent {
        n_i,
        k_deg,
        inv_diff_index: BigUint::from(inv_diff),
    }
}

/// Split data for the recognized nonabelian groups whose components are
/// known: matrix algebras over `Q`, the quaternion component of `Q8`
/// (inverse different of index 4) and the `Q(zeta_3)` component of `A4`.
pub fn builtin_split(g: &FinGroup) -> Option<Vec<SplitComponent>> {
    Some(match recognize(g)? {
        KnownGroup::S3 => vec![comp(1, 1, 1), comp(1, 1, 1), comp(2, 1, 1)],
        KnownGroup::D4 => vec![comp(1, 1, 1), comp(1, 1, 1), comp(1, 1, 1), comp(1, 1, 1), comp(2, 1, 1)],
        KnownGroup::Q8 => vec![comp(1, 1, 1), comp(1, 1, 1), comp(1, 1, 1), comp(1, 1, 1), comp(2, 1, 4)],
        KnownGroup::A4 => vec![comp(1, 1, 1), comp(1, 2, 3), comp(3, 1, 1)],
        KnownGroup::S4 => vec![comp(1, 1, 1), comp(1, 1, 1), comp(2, 1, 1), comp(3, 1, 1), comp(3, 1, 1)],
        KnownGroup::A5 => return None,
    })
}

/// Invariant-factor specs of every abelian group of order at most `bound`.
pub fn abelian_specs(bound: u64) -> Vec<String> {
    fn walk(n: u64, out: &mut Vec<Vec<u64>>, cur: &mut Vec<u64>) {
        if n == 1 {
            out.push(cur.clone());
            return;
        }
        // factors listed largest first, each dividing the previous one
        let top = cur.last().copied().unwrap_or(n).min(n);
        for d in (2..=top).rev() {
            if n.is_multiple_of(d) && cur.last().is_none_or(|&l| l % d == 0) {
                cur.push(d);
                walk(n / d, out, cur);
                cur.pop();
            }
        }
    }
    let mut specs = Vec::new();
    for n in 1..=bound {
        let mut found = Vec::new();
        walk(n, &mut found, &mut Vec::new());
        for mut f in found {
            if f.is_empty() {
                f.push(1);
            }
            f.reverse();
            specs.push(f.iter().map(|d| format!("C{d}")).collect::<Vec<_>>().join("x"));
        }
    }
    specs
}

pub const GROUP_SETS: [&str; 7] = [
    "abelian16",
    "abelian12",
    "cyclic-prime-power",
    "harness",
    "trace-quotient",
    "nonabelian",
    "all",
];

/// A named set, or a comma-separated list of group specs.
pub fn group_set(name: &str) -> Result<Vec<NamedGroup>, CliError> {
    let specs: Vec<String> = match name {
        "abelian16" => abelian_specs(16),
        "abelian12" => abelian_specs(12),
        "cyclic-prime-power" => ["C2", "C3", "C4", "C5", "C7", "C8", "C9"].map(String::from).to_vec(),
        "harness" => ["C2", "C3", "C4", "C6", "C2xC2"].map(String::from).to_vec(),
        "trace-quotient" => ["C2", "C3", "C5"].map(String::from).to_vec(),
        "nonabelian" => ["S3", "D4", "Q8", "A4"].map(String::from).to_vec(),
        "all" => {
            let mut v = abelian_specs(12);
            v.extend(["S3", "D4", "Q8", "A4"].map(String::from));
            v
        }
        list if list.contains(',') || !list.is_empty() && !GROUP_SETS.contains(&list) => {
            list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
        }
        _ => return Err(CliError::Usage(format!("unknown group set {name:?}"))),
    };
    specs.iter().map(|s| load_group(s)).collect()
}
