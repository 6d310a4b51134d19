//! Command-line front end. `run` is pure apart from reading the named
//! files: it returns the exit code and both output streams.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::buildings::{self, Building, PunctureId, Site};
use crate::degeneration::{classify_stable_limit, enumerate_limits, validate_nice, NiceVerdict, StableVerdict, Taxonomy, Violation};
use crate::error::{Error, Result};
use crate::index::{self, IndexReport};
use crate::io;
use crate::orbits::OrbitRef;
use crate::par::Execution;
use crate::spectral::SpectralTable;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "holo", version, about = "Index calculus and degeneration checks for holomorphic buildings")]
struct Cli {
    /// One of error, warn, info, debug, trace.
    #[arg(long, global = true, default_value = "warn")]
    log_level: log::LevelFilter,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Op {
    Augment,
    Core,
    Node,
    Glue,
    Union,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Theorem {
    Stable,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Spectrum of the asymptotic operator of one orbit cover.
    Spectrum {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        orbit: String,
        #[arg(long, default_value_t = 1)]
        cover: u32,
        #[arg(long)]
        window: f64,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Index, normal Chern number and genus of a building.
    Index {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        building: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Checks that a building is nicely embedded.
    Validate {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        building: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Applies one surgery operation and prints the resulting building.
    Surgery {
        #[arg(long)]
        building: PathBuf,
        #[arg(long, value_enum)]
        op: Op,
        /// External puncture `COMPONENT:INDEX` for augment.
        #[arg(long)]
        puncture: Option<String>,
        /// Breaking pair position for augment.
        #[arg(long)]
        pair: Option<usize>,
        /// First component of a new node.
        #[arg(long)]
        a: Option<String>,
        /// Second component of a new node.
        #[arg(long)]
        b: Option<String>,
        /// Positive puncture `COMPONENT:INDEX` for glue.
        #[arg(long)]
        pos: Option<String>,
        /// Negative puncture `COMPONENT:INDEX` for glue.
        #[arg(long)]
        neg: Option<String>,
        /// Second building for union.
        #[arg(long)]
        other: Option<PathBuf>,
    },
    /// Lists the broken limits of a stable curve with given asymptotics.
    Enumerate {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        asymptotics: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Classifies a building against a degeneration theorem.
    Check {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        building: PathBuf,
        #[arg(long, value_enum)]
        theorem: Theorem,
        #[arg(long)]
        json: bool,
    },
}

/// Exit code and output streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(code: i32, stdout: String) -> Self {
        Output { code, stdout, stderr: String::new() }
    }
}

/// Runs one command line; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK { Output::ok(code, text) } else { Output { code, stdout: String::new(), stderr: text } };
        }
    };
    let _ = env_logger::Builder::new().filter_level(cli.log_level).is_test(cfg!(test)).try_init();
    log::info!("dispatching {:?}", cli.cmd);
    match dispatch(cli.cmd) {
        Ok(out) => out,
        Err(e) => Output { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error[{}]: {e}\n", e.code()) },
    }
}

fn dispatch(cmd: Cmd) -> Result<Output> {
    match cmd {
        Cmd::Spectrum { catalog, orbit, cover, window, grid, json } => spectrum(&catalog, &orbit, cover, window, grid, json),
        Cmd::Index { catalog, building, json } => index_cmd(&catalog, &building, json),
        Cmd::Validate { catalog, building, json } => validate(&catalog, &building, json),
        Cmd::Surgery { building, op, puncture, pair, a, b, pos, neg, other } => {
            surgery(&building, op, SurgeryArgs { puncture, pair, a, b, pos, neg, other })
        }
        Cmd::Enumerate { catalog, asymptotics, json } => enumerate(&catalog, &asymptotics, json),
        Cmd::Check { catalog, building, theorem: Theorem::Stable, json } => check_stable(&catalog, &building, json),
    }
}

fn table_value(t: &SpectralTable) -> Value {
    let entries: Vec<Value> = t
        .entries()
        .iter()
        .map(|e| json!({"eigenvalue": e.eigenvalue, "winding": e.winding, "multiplicity": e.multiplicity}))
        .collect();
    json!({"window": t.window(), "grid": t.grid(), "entries": entries})
}

fn spectrum(catalog: &Path, orbit: &str, cover: u32, window: f64, grid: Option<usize>, as_json: bool) -> Result<Output> {
    let cat = io::load_catalog(catalog)?;
    let r = OrbitRef::new(orbit, cover);
    let t = match grid {
        Some(n) => cat.spectrum_with_grid(&r, window, n)?,
        None => cat.spectrum_of(&r, window)?,
    };
    if as_json {
        let v = json!({"format": io::FORMAT, "orbit": {"simple": orbit, "k": cover}, "spectrum": table_value(&t)});
        return Ok(Output::ok(EXIT_OK, io::to_stable_string(&v)));
    }
    let mut s = format!("orbit {r} window {} grid {}\n", t.window(), t.grid());
    for e in t.entries() {
        writeln!(s, "{:>22.12} winding {:>4} multiplicity {}", e.eigenvalue, e.winding, e.multiplicity).unwrap();
    }
    Ok(Output::ok(EXIT_OK, s))
}

fn ids(v: &[PunctureId]) -> Vec<String> {
    v.iter().map(|z| z.to_string()).collect()
}

fn report_value(b: &Building, r: &IndexReport) -> Result<Value> {
    let mut punctures = Vec::new();
    for d in &r.punctures {
        let p = b.puncture(&d.id)?;
        punctures.push(json!({
            "id": d.id.to_string(),
            "sign": p.sign.symbol(),
            "orbit": p.orbit.to_string(),
            "constraint": d.constraint,
            "alpha_minus": d.summary.alpha_minus,
            "alpha_plus": d.summary.alpha_plus,
            "parity": d.summary.parity,
            "mu_cz": d.summary.mu_cz,
        }));
    }
    let components: Vec<Value> = r
        .per_component
        .iter()
        .map(|c| {
            json!({
                "id": c.component,
                "index": c.index,
                "c_n": c.c_n,
                "defect": c.defect.as_ref().map(|d| d.total),
                "wind_pi": c.wind_pi,
                "wind_pi_consistent": c.wind_pi_consistent,
            })
        })
        .collect();
    let a = &r.additivity;
    Ok(json!({
        "chi": r.chi,
        "genus": r.genus,
        "c1_total": r.c1_total,
        "mu_total": r.mu_total,
        "index": r.index,
        "c_n": r.c_n,
        "gamma0": ids(&r.gamma0),
        "gamma1": ids(&r.gamma1),
        "punctures": punctures,
        "components": components,
        "additivity": {
            "index_components": a.index_components,
            "c_n_components": a.c_n_components,
            "breaking_parity": a.breaking_parity,
            "nodal_points": a.nodal_points,
        },
    }))
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn report_text(b: &Building, r: &IndexReport) -> Result<String> {
    let mut s = String::new();
    writeln!(s, "chi {}", r.chi).unwrap();
    writeln!(s, "genus {}", opt(r.genus)).unwrap();
    writeln!(s, "c1_total {}", r.c1_total).unwrap();
    writeln!(s, "mu_total {}", r.mu_total).unwrap();
    writeln!(s, "index {}", r.index).unwrap();
    writeln!(s, "c_n {}", r.c_n).unwrap();
    writeln!(s, "gamma0 [{}]", ids(&r.gamma0).join(", ")).unwrap();
    writeln!(s, "gamma1 [{}]", ids(&r.gamma1).join(", ")).unwrap();
    for d in &r.punctures {
        let p = b.puncture(&d.id)?;
        writeln!(
            s,
            "puncture {} {}{} constraint {} alpha_minus {} alpha_plus {} parity {} mu_cz {}",
            d.id, p.sign.symbol(), p.orbit, d.constraint, d.summary.alpha_minus, d.summary.alpha_plus, d.summary.parity, d.summary.mu_cz
        )
        .unwrap();
    }
    for c in &r.per_component {
        writeln!(
            s,
            "component {} index {} c_n {} defect {} wind_pi {}",
            c.component,
            c.index,
            c.c_n,
            opt(c.defect.as_ref().map(|d| d.total)),
            opt(c.wind_pi)
        )
        .unwrap();
    }
    let a = &r.additivity;
    writeln!(s, "additivity index {} = {} + {}", a.index, a.index_components, a.nodal_points).unwrap();
    writeln!(s, "additivity c_n {} = {} + {} + {}", a.c_n, a.c_n_components, a.breaking_parity, a.nodal_points).unwrap();
    Ok(s)
}

fn index_cmd(catalog: &Path, building: &Path, as_json: bool) -> Result<Output> {
    let cat = io::load_catalog(catalog)?;
    let b = io::load_building(building)?;
    let r = index::index_report(&cat, &b, &b.constraints())?;
    let out = if as_json { io::to_stable_string(&report_value(&b, &r)?) } else { report_text(&b, &r)? };
    Ok(Output::ok(EXIT_OK, out))
}

fn violations_value(v: &[Violation]) -> Value {
    Value::Array(v.iter().map(|x| json!({"code": x.code.as_str(), "location": x.location, "message": x.message})).collect())
}

fn nice_value(n: &NiceVerdict) -> Value {
    json!({"ok": n.ok, "violations": violations_value(&n.violations), "assumptions": n.assumptions})
}

fn verdict_code(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_VIOLATIONS
    }
}

fn validate(catalog: &Path, building: &Path, as_json: bool) -> Result<Output> {
    let cat = io::load_catalog(catalog)?;
    let b = io::load_building(building)?;
    let n = validate_nice(&cat, &b)?;
    if as_json {
        return Ok(Output::ok(verdict_code(n.ok), io::to_stable_string(&nice_value(&n))));
    }
    let mut s = String::from(if n.ok { "NICE\n" } else { "NOT_NICE\n" });
    for v in &n.violations {
        writeln!(s, "{v}").unwrap();
    }
    for a in &n.assumptions {
        writeln!(s, "assumption {a}").unwrap();
    }
    Ok(Output::ok(verdict_code(n.ok), s))
}

struct SurgeryArgs {
    puncture: Option<String>,
    pair: Option<usize>,
    a: Option<String>,
    b: Option<String>,
    pos: Option<String>,
    neg: Option<String>,
    other: Option<PathBuf>,
}

fn puncture_ref(flag: &str, v: Option<String>) -> Result<PunctureId> {
    let v = v.ok_or_else(|| Error::Surgery(format!("--{flag} COMPONENT:INDEX is required")))?;
    let (c, i) = v
        .rsplit_once(':')
        .and_then(|(c, i)| i.parse::<usize>().ok().map(|i| (c, i)))
        .ok_or_else(|| Error::Surgery(format!("--{flag} expects COMPONENT:INDEX, got {v:?}")))?;
    Ok(PunctureId::new(c, i))
}

fn required<T>(flag: &str, v: Option<T>) -> Result<T> {
    v.ok_or_else(|| Error::Surgery(format!("--{flag} is required")))
}

fn surgery(building: &Path, op: Op, args: SurgeryArgs) -> Result<Output> {
    let b = io::load_building(building)?;
    let out = match op {
        Op::Augment => {
            let site = match (args.puncture, args.pair) {
                (Some(p), None) => Site::Puncture(puncture_ref("puncture", Some(p))?),
                (None, Some(i)) => Site::Pair(i),
                _ => return Err(Error::Surgery("augment needs exactly one of --puncture and --pair".into())),
            };
            buildings::augment(&b, &site)?
        }
        Op::Core => buildings::core(&b)?,
        Op::Node => buildings::add_node(&b, &required("a", args.a)?, &required("b", args.b)?)?,
        Op::Glue => buildings::glue_punctures(&b, &puncture_ref("pos", args.pos)?, &puncture_ref("neg", args.neg)?)?,
        Op::Union => buildings::disjoint_union(&b, &io::load_building(&required("other", args.other)?)?),
    };
    Ok(Output::ok(EXIT_OK, io::building_to_json(&out)))
}

fn enumerate(catalog: &Path, asymptotics: &Path, as_json: bool) -> Result<Output> {
    let cat = io::load_catalog(catalog)?;
    let ps = io::load_asymptotics(asymptotics)?;
    let limits = enumerate_limits(&cat, &ps, Execution::default())?;
    if as_json {
        let v: Vec<Value> = limits
            .iter()
            .map(|l| {
                json!({
                    "top": l.top,
                    "bottom": l.bottom,
                    "breaking_orbit": {"simple": l.breaking_orbit.simple, "k": l.breaking_orbit.k},
                    "top_index": l.top_index,
                    "bottom_index": l.bottom_index,
                    "top_c_n": l.top_c_n,
                    "bottom_c_n": l.bottom_c_n,
                })
            })
            .collect();
        return Ok(Output::ok(EXIT_OK, io::to_stable_string(&json!({"format": io::FORMAT, "limits": v}))));
    }
    let mut s = format!("{} limit types\n", limits.len());
    for l in &limits {
        writeln!(
            s,
            "top {:?} bottom {:?} breaking_orbit {} index {}/{} c_n {}/{}",
            l.top, l.bottom, l.breaking_orbit, l.top_index, l.bottom_index, l.top_c_n, l.bottom_c_n
        )
        .unwrap();
    }
    Ok(Output::ok(EXIT_OK, s))
}

fn taxonomy_value(t: &Option<Taxonomy>) -> Value {
    match t {
        None => Value::Null,
        Some(Taxonomy::Smooth { component }) => json!({"kind": "SMOOTH", "component": component}),
        Some(Taxonomy::BrokenPair { top, bottom, breaking_orbit }) => json!({
            "kind": "BROKEN_PAIR",
            "top": top,
            "bottom": bottom,
            "breaking_orbit": breaking_orbit.to_string(),
        }),
    }
}

fn stable_value(v: &StableVerdict) -> Value {
    json!({
        "ok": v.ok,
        "taxonomy": taxonomy_value(&v.taxonomy),
        "violations": violations_value(&v.violations),
        "nice": nice_value(&v.nice),
        "index": v.index,
        "c_n": v.c_n,
        "genus": v.genus,
    })
}

fn check_stable(catalog: &Path, building: &Path, as_json: bool) -> Result<Output> {
    let cat = io::load_catalog(catalog)?;
    let b = io::load_building(building)?;
    let v = classify_stable_limit(&cat, &b, &b.constraints())?;
    if as_json {
        return Ok(Output::ok(verdict_code(v.ok), io::to_stable_string(&stable_value(&v))));
    }
    let mut s = match &v.taxonomy {
        Some(Taxonomy::Smooth { component }) => format!("SMOOTH component {component}\n"),
        Some(Taxonomy::BrokenPair { top, bottom, breaking_orbit }) => {
            format!("BROKEN_PAIR top {top} bottom {bottom} breaking_orbit {breaking_orbit}\n")
        }
        None => "REJECTED\n".to_string(),
    };
    writeln!(s, "index {} c_n {} genus {}", opt(v.index), opt(v.c_n), opt(v.genus)).unwrap();
    for x in &v.violations {
        writeln!(s, "{x}").unwrap();
    }
    Ok(Output::ok(verdict_code(v.ok), s))
}
