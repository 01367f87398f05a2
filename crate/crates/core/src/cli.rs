//! Command-line front end. Every command writes one JSON object to stdout
//! and a one-line summary to stderr.
//!
//! Exit codes: 0 when a report was produced (whatever the answers), 1 for
//! invalid input, 2 when two independent computations disagree.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::bundle::{BundleData, SubsheafBound};
use crate::error::Error;
use crate::gallery::{self, GalleryParams};
use crate::hn::{hn_polygon, is_strictly_concave, tensor_hn, validate_hn, HnProfile};
use crate::hodge::{criteria_verdict, total_slope, HodgeSystem, ThetaMode};
use crate::inequalities::hodge_sum_sweep;
use crate::oper::{connection_verdict, graded_verdict, is_generalized_oper, oper_hn_profile, oper_semistability, ConnectionPair, GriffithsFiltration};
use crate::search::{check_declared, max_slope_profile, mode_discrepancy, search_verdict, ConstraintMode, SearchOptions, DEFAULT_BUDGET, PROV_DECLARED};
use crate::verdict::{Answer, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INCONSISTENT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "hodge-stability", version, about = "Slope stability of systems of Hodge bundles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply the stability criteria to a `hodge_system` document.
    CheckSystem {
        document: PathBuf,
        #[command(flatten)]
        search: SearchFlags,
    },
    /// Exhaustive θ-invariant profile search on a `hodge_system` document.
    Search {
        document: PathBuf,
        #[command(flatten)]
        search: SearchFlags,
    },
    /// Generalized-oper check and semistability of a `griffiths_filtration`.
    CheckOper { document: PathBuf },
    /// Stability of a `connection_pair`.
    CheckConnection { document: PathBuf },
    /// Tensor an HN profile by a semistable bundle (`hn_request`).
    HnTensor { document: PathBuf },
    /// Exhaustive check of the power-sum inequality.
    VerifyInequalities {
        #[arg(long, default_value_t = 6)]
        d_max: u64,
        #[arg(long, default_value_t = 14)]
        n_max: usize,
    },
    /// Build a worked example and recompute its verdict.
    Gallery {
        #[arg(value_parser = gallery::FAMILIES)]
        name: String,
        #[arg(long)]
        g: Option<u64>,
        #[arg(long)]
        d: Option<i64>,
        #[arg(long)]
        d0: Option<i64>,
        #[command(flatten)]
        search: SearchFlags,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Paper,
    Conservative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SubsheafArg {
    Semistable,
    Stable,
}

/// Flags override the document's `search` section, which overrides defaults.
#[derive(Clone, Copy, Debug, Default, Args)]
pub struct SearchFlags {
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, value_enum)]
    pub subsheaf: Option<SubsheafArg>,
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSection {
    pub constraint_mode: Option<ConstraintMode>,
    pub subsheaf_mode: Option<SubsheafBound>,
    pub budget: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HnRequest {
    pub profile: HnProfile,
    pub tensor_with: BundleData,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    HodgeSystem(HodgeSystem),
    GriffithsFiltration(GriffithsFiltration),
    ConnectionPair(ConnectionPair),
    HnRequest(HnRequest),
}

impl Instance {
    fn key(&self) -> &'static str {
        match self {
            Instance::HodgeSystem(_) => "hodge_system",
            Instance::GriffithsFiltration(_) => "griffiths_filtration",
            Instance::ConnectionPair(_) => "connection_pair",
            Instance::HnRequest(_) => "hn_request",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceDocument {
    pub instance: Instance,
    pub search: SearchSection,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    hodge_system: Option<HodgeSystem>,
    griffiths_filtration: Option<GriffithsFiltration>,
    connection_pair: Option<ConnectionPair>,
    hn_request: Option<HnRequest>,
    search: Option<SearchSection>,
}

pub fn parse_document(text: &str) -> Result<InstanceDocument, String> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| format!("invalid document: {e}"))?;
    let mut found = Vec::new();
    if let Some(x) = raw.hodge_system {
        found.push(Instance::HodgeSystem(x));
    }
    if let Some(x) = raw.griffiths_filtration {
        found.push(Instance::GriffithsFiltration(x));
    }
    if let Some(x) = raw.connection_pair {
        found.push(Instance::ConnectionPair(x));
    }
    if let Some(x) = raw.hn_request {
        found.push(Instance::HnRequest(x));
    }
    if found.len() != 1 {
        return Err(format!(
            "invalid document: expected exactly one of hodge_system, griffiths_filtration, connection_pair, hn_request; found {}",
            found.len()
        ));
    }
    Ok(InstanceDocument {
        instance: found.pop().expect("one instance"),
        search: raw.search.unwrap_or_default(),
    })
}

/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    code: i32,
    body: Value,
    summary: String,
}

impl Report {
    fn ok(body: Value, summary: String) -> Self {
        Report { code: EXIT_OK, body, summary }
    }
}

type CmdResult = Result<Report, String>;

fn invalid(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn render(body: &Value) -> String {
    let mut s = serde_json::to_string_pretty(body).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Parse `args` (including the program name) and execute.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INVALID,
            };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome {
                    code,
                    stdout: render(&json!({ "error": text.trim_end() })),
                    stderr: text,
                }
            };
        }
    };
    execute(&cli.command)
}

pub fn execute(command: &Command) -> Outcome {
    match dispatch(command) {
        Ok(r) => Outcome {
            code: r.code,
            stdout: render(&r.body),
            stderr: format!("{}\n", r.summary),
        },
        Err(msg) => Outcome {
            code: EXIT_INVALID,
            stdout: render(&json!({ "error": msg })),
            stderr: format!("error: {msg}\n"),
        },
    }
}

fn dispatch(command: &Command) -> CmdResult {
    match command {
        Command::CheckSystem { document, search } => {
            let doc = load(document)?;
            let sys = expect_system(&doc, "check-system")?;
            check_system(sys, &options(search, &doc.search))
        }
        Command::Search { document, search } => {
            let doc = load(document)?;
            let sys = expect_system(&doc, "search")?;
            search_cmd(sys, &options(search, &doc.search), subsheaf(search, &doc.search))
        }
        Command::CheckOper { document } => match load(document)?.instance {
            Instance::GriffithsFiltration(f) => check_oper(&f),
            other => Err(wrong_instance("check-oper", "griffiths_filtration", &other)),
        },
        Command::CheckConnection { document } => match load(document)?.instance {
            Instance::ConnectionPair(p) => check_connection(&p),
            other => Err(wrong_instance("check-connection", "connection_pair", &other)),
        },
        Command::HnTensor { document } => match load(document)?.instance {
            Instance::HnRequest(r) => hn_tensor(&r),
            other => Err(wrong_instance("hn-tensor", "hn_request", &other)),
        },
        Command::VerifyInequalities { d_max, n_max } => verify_inequalities(*d_max, *n_max),
        Command::Gallery { name, g, d, d0, search } => {
            let params = GalleryParams { g: *g, d: *d, d0: *d0 };
            gallery_cmd(name, params, &options(search, &SearchSection::default()))
        }
    }
}

fn load(path: &PathBuf) -> Result<InstanceDocument, String> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(invalid)?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?
    };
    parse_document(&text)
}

fn wrong_instance(cmd: &str, want: &str, got: &Instance) -> String {
    format!("{cmd} requires a {want} document, got {}", got.key())
}

fn expect_system<'a>(doc: &'a InstanceDocument, cmd: &str) -> Result<&'a HodgeSystem, String> {
    match &doc.instance {
        Instance::HodgeSystem(s) => Ok(s),
        other => Err(wrong_instance(cmd, "hodge_system", other)),
    }
}

fn options(flags: &SearchFlags, doc: &SearchSection) -> SearchOptions {
    let mode = match flags.mode {
        Some(ModeArg::Paper) => ConstraintMode::PaperMonotone,
        Some(ModeArg::Conservative) => ConstraintMode::Conservative,
        None => doc.constraint_mode.unwrap_or_default(),
    };
    SearchOptions {
        mode,
        budget: flags.budget.or(doc.budget).unwrap_or(DEFAULT_BUDGET),
        parallel: flags.parallel,
    }
}

fn subsheaf(flags: &SearchFlags, doc: &SearchSection) -> SubsheafBound {
    match flags.subsheaf {
        Some(SubsheafArg::Semistable) => SubsheafBound::Semistable,
        Some(SubsheafArg::Stable) => SubsheafBound::Stable,
        None => doc.subsheaf_mode.unwrap_or(SubsheafBound::Semistable),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

/// Verdict fields at the top level, followed by `extra`.
fn verdict_body(command: &str, v: &Verdict, extra: Vec<(&str, Value)>) -> Value {
    let mut map = match to_value(v) {
        Value::Object(m) => m,
        _ => Map::new(),
    };
    map.insert("command".into(), json!(command));
    for (k, x) in extra {
        map.insert(k.into(), x);
    }
    Value::Object(map)
}

fn summary(v: &Verdict) -> String {
    let mut s = format!("semistable: {}, stable: {} [{}]", v.semistable, v.stable, v.provenance);
    if let Some(c) = &v.certificate {
        s.push_str(&format!("; certificate {} of slope {} vs μ(E) = {}", c.profile, c.slope, c.mu_total));
    }
    s
}

/// Combine the verdicts of every declared subobject: the steepest
/// destabilizer wins, then the first equal-slope subobject.
fn declared_verdict(sys: &HodgeSystem) -> Result<(Verdict, Vec<Verdict>), String> {
    let ThetaMode::Declared(profiles) = sys.theta() else {
        return Err("system does not declare subobjects".into());
    };
    let per = profiles
        .iter()
        .map(|p| check_declared(sys, p))
        .collect::<Result<Vec<_>, Error>>()
        .map_err(invalid)?;
    let steepest = per
        .iter()
        .filter(|v| v.semistable == Answer::No)
        .fold(None::<&Verdict>, |best, v| match best {
            Some(b) if b.certificate.as_ref().map(|c| &c.slope) >= v.certificate.as_ref().map(|c| &c.slope) => Some(b),
            _ => Some(v),
        });
    let combined = steepest
        .or_else(|| per.iter().find(|v| v.stable == Answer::No))
        .cloned()
        .unwrap_or_else(|| Verdict::unknown(PROV_DECLARED));
    Ok((combined, per))
}

fn all_flagged_semistable(sys: &HodgeSystem) -> bool {
    sys.components().iter().all(BundleData::is_flagged_semistable)
}

fn check_system(sys: &HodgeSystem, opts: &SearchOptions) -> CmdResult {
    let mu = to_value(&total_slope(sys));
    if !sys.is_isomorphisms() {
        let (v, per) = declared_verdict(sys)?;
        let body = verdict_body("check-system", &v, vec![("mu_total", mu), ("declared", to_value(&per))]);
        return Ok(Report::ok(body, summary(&v)));
    }
    let criteria = criteria_verdict(sys).map_err(invalid)?;
    let mut extra = vec![("mu_total", mu)];
    let mut code = EXIT_OK;
    let mut note = String::new();
    if all_flagged_semistable(sys) {
        match search_verdict(sys, opts) {
            Ok(report) => {
                if criteria.conflicts_with(&report.verdict) {
                    code = EXIT_INCONSISTENT;
                    note = format!("; criterion and oracle disagree: oracle says {}", summary(&report.verdict));
                }
                extra.push(("oracle", to_value(&report.verdict)));
            }
            Err(e @ Error::BudgetExceeded { .. }) => extra.push(("oracle_skipped", json!(e.to_string()))),
            Err(e) => return Err(invalid(e)),
        }
    }
    extra.push(("consistent", json!(code == EXIT_OK)));
    Ok(Report {
        code,
        body: verdict_body("check-system", &criteria, extra),
        summary: format!("{}{note}", summary(&criteria)),
    })
}

fn best_value(best: &Option<(crate::profile::SubsystemProfile, crate::rational::Rational)>) -> Value {
    match best {
        Some((p, s)) => json!({ "profile": to_value(p), "slope": to_value(s) }),
        None => Value::Null,
    }
}

fn search_cmd(sys: &HodgeSystem, opts: &SearchOptions, sub: SubsheafBound) -> CmdResult {
    let mu = total_slope(sys);
    if !sys.is_isomorphisms() {
        let (v, per) = declared_verdict(sys)?;
        let body = verdict_body("search", &v, vec![("mu_total", to_value(&mu)), ("declared", to_value(&per))]);
        return Ok(Report::ok(body, summary(&v)));
    }
    let report = search_verdict(sys, opts).map_err(invalid)?;
    let max = match sub {
        SubsheafBound::Semistable => report.semistable_search.clone(),
        SubsheafBound::Stable => max_slope_profile(sys, sub, opts).map_err(invalid)?,
    };
    let mut extra = vec![
        ("mu_total", to_value(&mu)),
        ("constraint_mode", json!(opts.mode.as_str())),
        ("subsheaf_mode", json!(sub.as_str())),
        ("examined", json!(max.examined)),
        ("max_slope", best_value(&max.best)),
    ];
    if opts.mode == ConstraintMode::Conservative {
        let disc = mode_discrepancy(sys, sub, opts).map_err(invalid)?;
        extra.push((
            "discrepancy",
            match disc {
                Some(d) => json!({ "conservative": to_value(&d.conservative), "monotone_max": to_value(&d.monotone_max) }),
                None => Value::Null,
            },
        ));
    }
    let s = summary(&report.verdict);
    Ok(Report::ok(verdict_body("search", &report.verdict, extra), s))
}

fn check_oper(f: &GriffithsFiltration) -> CmdResult {
    let check = is_generalized_oper(f);
    let (verdict, summary_line) = if check.generalized_oper {
        let v = oper_semistability(f).map_err(invalid)?;
        let s = summary(&v);
        (to_value(&v), s)
    } else {
        (Value::Null, format!("not a generalized oper: {}", check.reasons.join("; ")))
    };
    let hn = match oper_hn_profile(f) {
        Ok(p) => to_value(&p),
        Err(_) => Value::Null,
    };
    let body = json!({
        "command": "check-oper",
        "generalized_oper": check.generalized_oper,
        "classical_oper": check.classical_oper,
        "reasons": check.reasons,
        "verdict": verdict,
        "hn_profile": hn,
    });
    Ok(Report::ok(body, summary_line))
}

fn check_connection(p: &ConnectionPair) -> CmdResult {
    let graded = match p.filtration() {
        Some(f) => graded_verdict(f).map_err(invalid)?,
        None => None,
    };
    let v = connection_verdict(p, graded.as_ref());
    let body = verdict_body("check-connection", &v, vec![("graded", to_value(&graded))]);
    Ok(Report::ok(body, summary(&v)))
}

fn hn_tensor(r: &HnRequest) -> CmdResult {
    let validation = validate_hn(&r.profile);
    let t = tensor_hn(&r.profile, &r.tensor_with).map_err(invalid)?;
    let polygon = hn_polygon(&t).map_err(invalid)?;
    let body = json!({
        "command": "hn-tensor",
        "validation": to_value(&validation),
        "tensor": to_value(&t),
        "polygon": to_value(&polygon),
        "concave": is_strictly_concave(&polygon),
    });
    let s = format!("tensor profile with {} quotients, polygon ends at {:?}", t.quotients().len(), polygon.last());
    Ok(Report::ok(body, s))
}

fn verify_inequalities(d_max: u64, n_max: usize) -> CmdResult {
    if d_max == 0 {
        return Err("--d-max must be at least 1".into());
    }
    let rows = hodge_sum_sweep(d_max, n_max).map_err(invalid)?;
    let all_pass = rows.iter().all(|r| r.all_pass());
    let checked: u64 = rows.iter().map(|r| r.checked).sum();
    let body = json!({
        "command": "verify-inequalities",
        "d_max": d_max,
        "n_max": n_max,
        "rows": rows.iter().map(|r| json!({
            "d": r.d,
            "checked": r.checked,
            "passed": r.passed,
            "first_failure": r.first_failure,
            "status": if r.all_pass() { "pass" } else { "fail" },
        })).collect::<Vec<_>>(),
        "all_pass": all_pass,
    });
    Ok(Report {
        code: if all_pass { EXIT_OK } else { EXIT_INCONSISTENT },
        body,
        summary: format!("{checked} cases, {}", if all_pass { "all pass" } else { "FAILURES" }),
    })
}

fn gallery_cmd(name: &str, params: GalleryParams, opts: &SearchOptions) -> CmdResult {
    let entry = gallery::by_name(name, params).map_err(invalid)?;
    let got = gallery::recompute(&entry, opts).map_err(invalid)?;
    let ok = gallery::reproduces(&entry.expected, &got);
    let mut body = json!({
        "command": "gallery",
        "entry": to_value(&entry),
        "recomputed": to_value(&got),
        "reproduces": ok,
    });
    if name == "unstable-component" {
        let hn = gallery::unstable_component_hn(params.g.unwrap_or(2), params.d0.unwrap_or(1)).map_err(invalid)?;
        body["e1_hn_profile"] = to_value(&hn);
    }
    Ok(Report {
        code: if ok { EXIT_OK } else { EXIT_INCONSISTENT },
        body,
        summary: format!("{}: {}{}", entry.name, summary(&got), if ok { "" } else { "; does not reproduce" }),
    })
}
