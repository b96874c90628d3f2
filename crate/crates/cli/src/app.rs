//! Argument parsing and the subcommands.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use freelat_core::bounds::{index_formula_abelian, index_formula_general, theorem_bounds, BoundMode};
use freelat_core::freesub::{
    free_sublattice, random_stable_lattice, random_trace_quotient_lattice, trace_quotient_free_sublattice, Verdict,
    DEFAULT_HEIGHT_CAP,
};
use freelat_core::lattices::module_index;
use freelat_core::orders::{
    conductor, discriminant, group_ring_order, jacobinski_lattice, maximal_order_abelian, maximal_order_idealizer,
    order_index, right_conductor, OrderDesc,
};
use freelat_core::{ModuleIndex, ZLattice};
use serde_json::{json, Map, Value};

use crate::catalog::{builtin_split, load_group, load_split, read_json, group_set, NamedGroup, GROUP_SETS};
use crate::formats::{
    bound_report_to_json, certificate_to_json, group_to_json, index_to_json, lattice_from_json, lattice_to_json,
    order_to_json, small_decimal, split_to_json,
};
use crate::verify::{self, HarnessSize};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "freelat", version, about = "Lattices over integral group rings: indices, maximal orders, conductors, free sublattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    Abelian,
    Idealizer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Formulas,
    Conductor,
    Theorems,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Lattice,
    TraceQuotient,
    Minkowski,
    Nib,
}

impl From<Mode> for BoundMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Lattice => BoundMode::Lattice,
            Mode::TraceQuotient => BoundMode::TraceQuotient,
            Mode::Minkowski => BoundMode::Minkowski,
            Mode::Nib => BoundMode::Nib,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generalized index [A : B] of two lattice files with the same span.
    Index { a: PathBuf, b: PathBuf },
    /// Maximal order of Q[G] and its index over Z[G].
    Maxorder {
        #[arg(long)]
        group: String,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Split data JSON for the index formula of a nonabelian group.
        #[arg(long)]
        split: Option<PathBuf>,
    },
    /// Conductor of the maximal order into Z[G].
    Conductor {
        #[arg(long)]
        group: String,
        #[arg(long)]
        split: Option<PathBuf>,
    },
    /// Index bounds of the free-sublattice theorems.
    Bounds {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 1)]
        rank: u32,
        #[arg(long, value_enum, default_value_t = Mode::Lattice)]
        mode: Mode,
        /// Split data; [M : Z[G]] then comes from the index formula.
        #[arg(long)]
        split: Option<PathBuf>,
    },
    /// Free sublattice certificate for a seeded or supplied lattice.
    Freesub {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 1)]
        rank: usize,
        #[arg(long, default_value_t = 2)]
        denom: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        coprime_to: u64,
        #[arg(long, default_value_t = DEFAULT_HEIGHT_CAP)]
        height_cap: u64,
        /// Work over Z[G]/(Tr_G) inside (e Q[G])^n.
        #[arg(long)]
        trace_quotient: bool,
        /// Lattice JSON to use instead of a seeded one.
        #[arg(long)]
        lattice: Option<PathBuf>,
    },
    /// Run a verification battery.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// One of abelian16, abelian12, cyclic-prime-power, harness,
        /// trace-quotient, nonabelian, all, or a comma-separated list.
        #[arg(long, default_value = "abelian12")]
        group_set: String,
        /// Seeds per (rank, denominator) cell for the theorem harnesses.
        #[arg(long, default_value_t = 17)]
        seeds: u64,
    },
    /// Print the multiplication table JSON of a group.
    Group {
        #[arg(long)]
        group: String,
    },
}

struct Report {
    json: Value,
    table: Option<String>,
    exit: i32,
}

impl Report {
    fn ok(json: Value) -> Self {
        Report { json, table: None, exit: 0 }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(report) => {
            let text = match cli.common.format {
                Format::Json => serde_json::to_string_pretty(&report.json).expect("serializable") + "\n",
                Format::Table => report.table.clone().unwrap_or_else(|| render_table(&report.json)),
            };
            let written = match &cli.common.output {
                Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
                None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return 2;
            }
            report.exit
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Usage(_) | CliError::Io { .. } | CliError::Format(_) => 2,
                CliError::Core(_) => 1,
            }
        }
    }
}

fn execute(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Index { a, b } => {
            let x = lattice_from_json(&read_json(a)?).map_err(|e| with_path(e, a))?;
            let y = lattice_from_json(&read_json(b)?).map_err(|e| with_path(e, b))?;
            if x.ambient_dim() != y.ambient_dim() {
                return Err(CliError::Usage(format!(
                    "lattices live in dimensions {} and {}",
                    x.ambient_dim(),
                    y.ambient_dim()
                )));
            }
            let idx = module_index(&x, &y)?;
            Ok(Report::ok(indexed("index", &idx, Map::new())))
        }
        Command::Maxorder { group, method, split } => maxorder(group, *method, split.as_ref()),
        Command::Conductor { group, split } => conductor_cmd(group, split.as_ref()),
        Command::Bounds { group, rank, mode, split } => {
            let g = load_group(group)?;
            let m_index = m_index_for(&g, split.as_ref())?;
            let report = theorem_bounds(&g.group, *rank, (*mode).into(), &m_index)?;
            let mut v = bound_report_to_json(&report);
            v["group"] = json!(g.spec);
            Ok(Report::ok(v))
        }
        Command::Freesub {
            group,
            rank,
            denom,
            seed,
            coprime_to,
            height_cap,
            trace_quotient,
            lattice,
        } => {
            let g = load_group(group)?;
            if *rank == 0 || *denom == 0 || *height_cap == 0 {
                return Err(CliError::Usage("--rank, --denom and --height-cap must be positive".into()));
            }
            let m = maximal_order_for(&g, Method::Auto)?;
            let x = match lattice {
                Some(p) => lattice_from_json(&read_json(p)?).map_err(|e| with_path(e, p))?,
                None if *trace_quotient => random_trace_quotient_lattice(&g.group, *rank, *denom, *seed)?,
                None => random_stable_lattice(&g.group, *rank, *denom, *seed)?,
            };
            let cert = if *trace_quotient {
                trace_quotient_free_sublattice(&g.group, &m, &x, *rank, *coprime_to, *height_cap)?
            } else {
                free_sublattice(&g.group, &m, &x, *rank, *coprime_to, *height_cap)?
            };
            let mut v = certificate_to_json(&cert);
            v["group"] = json!(g.spec);
            v["trace_quotient"] = json!(trace_quotient);
            match lattice {
                Some(p) => v["lattice_file"] = json!(p.display().to_string()),
                None => {
                    v["seed"] = json!(seed);
                    v["denom"] = json!(denom);
                }
            }
            v["lattice"] = lattice_to_json(&x);
            let exit = if cert.verdict == Verdict::True { 0 } else { 1 };
            Ok(Report { json: v, table: None, exit })
        }
        Command::Verify { suite, group_set: set, seeds } => verify_cmd(*suite, set, *seeds),
        Command::Group { group } => {
            let g = load_group(group)?;
            Ok(Report::ok(group_to_json(&g.group)))
        }
    }
}

fn with_path(e: CliError, p: &std::path::Path) -> CliError {
    match e {
        CliError::Format(m) => CliError::Format(format!("{}: {m}", p.display())),
        other => other,
    }
}

/// `{"<key>": "<decimal>", "<key>_factors": {...}}` plus `extra`.
fn indexed(key: &str, idx: &ModuleIndex, mut extra: Map<String, Value>) -> Value {
    let mut out = Map::new();
    out.insert(key.to_string(), json!(small_decimal(idx)));
    out.insert(format!("{key}_factors"), index_to_json(idx)["factors"].clone());
    out.append(&mut extra);
    Value::Object(out)
}

fn maximal_order_for(g: &NamedGroup, method: Method) -> Result<OrderDesc, CliError> {
    let z = group_ring_order(&g.group);
    Ok(match method {
        Method::Abelian => maximal_order_abelian(&g.group)?,
        Method::Idealizer => maximal_order_idealizer(&z)?,
        Method::Auto if g.group.is_abelian() => maximal_order_abelian(&g.group)?,
        Method::Auto => maximal_order_idealizer(&z)?,
    })
}

fn m_index_for(g: &NamedGroup, split: Option<&PathBuf>) -> Result<ModuleIndex, CliError> {
    if let Some(p) = split {
        return Ok(index_formula_general(g.group.size() as u64, &load_split(p)?)?);
    }
    if g.group.is_abelian() {
        return Ok(index_formula_abelian(&g.group)?);
    }
    let m = maximal_order_for(g, Method::Idealizer)?;
    Ok(order_index(&m, &group_ring_order(&g.group))?)
}

fn maxorder(spec: &str, method: Method, split: Option<&PathBuf>) -> Result<Report, CliError> {
    let g = load_group(spec)?;
    let m = maximal_order_for(&g, method)?;
    let z = group_ring_order(&g.group);
    let idx = order_index(&m, &z)?;
    let mut extra = Map::new();
    extra.insert("group".into(), json!(g.spec));
    extra.insert("size".into(), json!(g.group.size()));
    let used = match method {
        Method::Auto if g.group.is_abelian() => "abelian",
        Method::Auto | Method::Idealizer => "idealizer",
        Method::Abelian => "abelian",
    };
    extra.insert("method".into(), json!(used));
    let split_data = match split {
        Some(p) => Some(load_split(p)?),
        None => builtin_split(&g.group),
    };
    let formula = if g.group.is_abelian() {
        Some(index_formula_abelian(&g.group)?)
    } else if let Some(s) = &split_data {
        extra.insert("split".into(), split_to_json(s));
        Some(index_formula_general(g.group.size() as u64, s)?)
    } else {
        None
    };
    if let Some(f) = &formula {
        extra.insert("formula_index".into(), index_to_json(f));
        extra.insert("formula_matches".into(), json!(f == &idx));
    }
    let disc = ModuleIndex::from_rational(freelat_core::BigRational::from_integer(discriminant(&m)?.into()))?;
    extra.insert("discriminant_regular_trace".into(), index_to_json(&disc));
    extra.insert("order".into(), order_to_json(&m));
    let exit = if formula.as_ref().is_some_and(|f| f != &idx) { 1 } else { 0 };
    Ok(Report {
        json: indexed("index_over_group_ring", &idx, extra),
        table: None,
        exit,
    })
}

fn conductor_cmd(spec: &str, split: Option<&PathBuf>) -> Result<Report, CliError> {
    let g = load_group(spec)?;
    let m = maximal_order_for(&g, Method::Auto)?;
    let z = group_ring_order(&g.group);
    let f = conductor(&m, &z)?;
    let right = right_conductor(&m, &z)?;
    let mut out = Map::new();
    out.insert("group".into(), json!(g.spec));
    out.insert("conductor".into(), lattice_to_json(&f));
    out.insert("index_in_maximal_order".into(), index_to_json(&module_index(m.lattice(), &f)?));
    out.insert("index_in_group_ring".into(), index_to_json(&module_index(z.lattice(), &f)?));
    out.insert("left_equals_right".into(), json!(f == right));
    let comps = if g.group.is_abelian() {
        Some(freelat_core::bounds::abelian_components(&g.group)?)
    } else {
        let s = match split {
            Some(p) => Some(load_split(p)?),
            None => builtin_split(&g.group),
        };
        match s {
            Some(s) => Some(freelat_core::bounds::match_split_data(&g.group, &s)?),
            None => None,
        }
    };
    let mut exit = 0;
    if let Some(c) = comps {
        let j: ZLattice = jacobinski_lattice(&m, &c)?;
        out.insert("jacobinski_matches".into(), json!(j == f));
        if j != f {
            exit = 1;
        }
    }
    Ok(Report {
        json: Value::Object(out),
        table: None,
        exit,
    })
}

fn verify_cmd(suite: Suite, set: &str, seeds: u64) -> Result<Report, CliError> {
    if set.is_empty() {
        return Err(CliError::Usage(format!("empty group set; try one of {}", GROUP_SETS.join(", "))));
    }
    let groups = group_set(set)?;
    let checks = match suite {
        Suite::Formulas => {
            let mut c = verify::formulas(&groups);
            c.extend(verify::tables());
            c
        }
        Suite::Conductor => verify::conductors(&groups),
        Suite::Theorems => verify::theorems(
            &groups,
            HarnessSize {
                seeds_per_cell: seeds.max(1),
                height_cap: DEFAULT_HEIGHT_CAP,
            },
        ),
    };
    let passed = checks.iter().filter(|c| c.pass).count();
    let failed = checks.len() - passed;
    let suite_name = match suite {
        Suite::Formulas => "formulas",
        Suite::Conductor => "conductor",
        Suite::Theorems => "theorems",
    };
    let json = json!({
        "suite": suite_name,
        "group_set": set,
        "passed": passed,
        "failed": failed,
        "all_pass": failed == 0,
        "checks": checks.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
    });
    let mut table = String::new();
    for c in &checks {
        table.push_str(&format!(
            "{:<4}  {:<36}  {:<14}  {}\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.group,
            c.detail
        ));
    }
    table.push_str(&format!("{suite_name} on {set}: {passed} passed, {failed} failed\n"));
    Ok(Report {
        json,
        table: Some(table),
        exit: if failed == 0 { 0 } else { 1 },
    })
}

/// Two-column rendering of a report. Factored values print as products of
/// prime powers.
pub fn render_table(v: &Value) -> String {
    let mut rows: Vec<(String, String)> = Vec::new();
    flatten("", v, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.into_iter()
        .map(|(k, val)| format!("{k:<width$}  {val}\n"))
        .collect()
}

fn factored_string(factors: &Map<String, Value>) -> String {
    if factors.is_empty() {
        return "1".into();
    }
    factors
        .iter()
        .map(|(p, k)| match k.as_i64() {
            Some(1) => p.clone(),
            _ => format!("{p}^{k}"),
        })
        .collect::<Vec<_>>()
        .join(" * ")
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) if map.contains_key("factors") && map.len() <= 2 => {
            let f = map["factors"].as_object().cloned().unwrap_or_default();
            let s = match map.get("decimal").and_then(Value::as_str) {
                Some(d) if f.is_empty() => d.to_string(),
                Some(d) => format!("{d} = {}", factored_string(&f)),
                None => factored_string(&f),
            };
            out.push((prefix.to_string(), s));
        }
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                if k.ends_with("_factors") {
                    let f = x.as_object().cloned().unwrap_or_default();
                    out.push((key, factored_string(&f)));
                } else {
                    flatten(&key, x, out);
                }
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}
