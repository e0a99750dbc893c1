//! Command-line driver and the JSON report it emits.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::dsl::{parse_tower, TowerSpec};
use crate::homology::bar::verify_lifting;
use crate::homology::cochain::{verify_cocycle_transfer, verify_eta_theta, CochainBounds};
use crate::homology::ses::verify_ses;
use crate::homology::{build_resolution, ext_top, verify_resolution, HomologyError, Perturbation};
use crate::nakayama::{nakayama_full, GeneratorImage, Method, NakayamaError, NakayamaResult, Strategy};
use crate::ore::{GenMap, OreTower};
use crate::report::{Check, VerificationReport};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_UNDETERMINED: i32 = 3;

/// Arity and degree bounds for the bar-level checks; the SES and resolution use the full cap.
const LIFTING_ARITY: usize = 2;
const COCHAIN_ARITY: usize = 2;
const BAR_CAP: u32 = 4;

#[derive(Parser, Debug)]
#[command(name = "ore-nakayama", version, about = "Nakayama automorphisms of iterated Ore extensions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the tower data, the stated relations and the homological identities.
    Verify(FileArgs),
    /// Compute the Nakayama automorphism and compare it with the file's expect block.
    Nakayama {
        #[command(flatten)]
        file: FileArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Read the twist off the top Ext group of the whole tower.
    Ext(FileArgs),
    /// Run selected homological checks only.
    Homology {
        #[command(flatten)]
        file: FileArgs,
        #[arg(long = "check", value_enum, default_values_t = vec![HomologyCheck::All])]
        checks: Vec<HomologyCheck>,
    },
    /// Replay the bundled example algebras against their stated answers.
    Reproduce {
        #[arg(long, value_enum, default_value_t = CaseArg::All)]
        case: CaseArg,
        #[arg(long, default_value_t = 8)]
        degree_cap: u32,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct FileArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = 8)]
    pub degree_cap: u32,
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Corrupt one homological formula on purpose (negative controls).
    #[arg(long, value_enum, hide = true)]
    pub inject: Option<Injection>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Propagate,
    Ext,
}

impl MethodArg {
    fn strategy(self) -> Strategy {
        match self {
            MethodArg::Auto => Strategy::Auto,
            MethodArg::Propagate => Strategy::Propagate,
            MethodArg::Ext => Strategy::Ext,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Injection {
    RhoSign,
    F3Sum,
    PsiDeltaSign,
}

impl Injection {
    fn perturbation(inject: Option<Injection>) -> Perturbation {
        let mut p = Perturbation::default();
        match inject {
            Some(Injection::RhoSign) => p.rho_sign = true,
            Some(Injection::F3Sum) => p.f3_sum = true,
            Some(Injection::PsiDeltaSign) => p.psi_delta_sign = true,
            None => {}
        }
        p
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HomologyCheck {
    Ses,
    Lifting,
    EtaTheta,
    Transfer,
    Resolution,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    QuantumPlane,
    QuantumAffine,
    Weyl,
    Jordan,
    Dim3,
    #[value(name = "D")]
    D,
    #[value(name = "G")]
    G,
    All,
}

/// A bundled `.ore` resource.
pub struct BundledCase {
    pub name: &'static str,
    pub files: &'static [(&'static str, &'static str)],
}

macro_rules! bundled {
    ($name:literal) => {
        ($name, include_str!(concat!("../cases/", $name, ".ore")))
    };
}

pub const CASES: &[BundledCase] = &[
    BundledCase { name: "quantum-plane", files: &[bundled!("quantum-plane")] },
    BundledCase { name: "quantum-affine", files: &[bundled!("quantum-affine")] },
    BundledCase { name: "weyl", files: &[bundled!("weyl")] },
    BundledCase { name: "jordan", files: &[bundled!("jordan")] },
    BundledCase { name: "dim3", files: &[bundled!("dim3")] },
    BundledCase { name: "D", files: &[bundled!("D"), bundled!("D-symbolic")] },
    BundledCase { name: "G", files: &[bundled!("G")] },
];

pub const NEGATIVE_CASES: &[(&str, &str)] = &[bundled!("bad-sigma-inverse"), bundled!("bad-delta")];

#[derive(Clone, Debug, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct InputInfo {
    pub label: String,
    pub sha256: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Ok,
    Fail,
    Undetermined,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Ok => EXIT_OK,
            Outcome::Fail => EXIT_FAIL,
            Outcome::Undetermined => EXIT_UNDETERMINED,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NakayamaSection {
    pub images: Vec<GeneratorImage>,
    pub calabi_yau: bool,
    pub dimension: usize,
    pub caveats: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub command: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<InputInfo>,
    pub degree_cap: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    pub outcome: Outcome,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nakayama: Option<NakayamaSection>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cases: Vec<Report>,
    /// Wall-clock milliseconds per stage; the only nondeterministic part.
    pub timings_ms: BTreeMap<String, f64>,
}

impl Report {
    fn new(command: &str, degree_cap: u32) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool: ToolInfo { name: env!("CARGO_PKG_NAME"), version: env!("CARGO_PKG_VERSION") },
            command: command.to_string(),
            inputs: Vec::new(),
            degree_cap,
            method: None,
            outcome: Outcome::Ok,
            checks: Vec::new(),
            nakayama: None,
            cases: Vec::new(),
            timings_ms: BTreeMap::new(),
        }
    }

    fn add_input(&mut self, label: &str, text: &str) {
        let sha256 = hex::encode(Sha256::digest(text.as_bytes()));
        self.inputs.push(InputInfo { label: label.to_string(), sha256 });
    }

    fn extend(&mut self, r: VerificationReport) {
        self.checks.extend(r.checks);
    }

    fn time(&mut self, stage: &str, start: Instant) {
        self.timings_ms.insert(stage.to_string(), start.elapsed().as_secs_f64() * 1000.0);
    }

    /// `Fail` if any check failed, else `Ok`; an undetermined verdict is kept.
    fn settle(&mut self) {
        let failed = self.checks.iter().any(|c| !c.passed()) || self.cases.iter().any(|c| c.outcome != Outcome::Ok);
        if failed {
            self.outcome = Outcome::Fail;
        } else if self.outcome != Outcome::Undetermined {
            self.outcome = Outcome::Ok;
        }
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Ok
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Plain-text rendering, generator images in `x ↦ image` form.
    pub fn render_human(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, "");
        out
    }

    fn render_into(&self, out: &mut String, indent: &str) {
        use std::fmt::Write;
        for i in &self.inputs {
            let _ = writeln!(out, "{indent}input {} sha256:{}", i.label, &i.sha256[..16]);
        }
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            let _ = write!(out, "{indent}{status} {}", c.name);
            if let Some([lo, hi]) = c.verified_range {
                let _ = write!(out, " [{lo}, {hi}]");
            }
            if let Some(n) = &c.note {
                let _ = write!(out, " ({n})");
            }
            if let Some(w) = &c.witness {
                let _ = write!(out, "\n{indent}     witness: {w}");
            }
            out.push('\n');
        }
        if let Some(n) = &self.nakayama {
            let width = n.images.iter().map(|g| g.generator.chars().count() + g.image.chars().count()).max().unwrap_or(0);
            for g in &n.images {
                let pad = width - g.generator.chars().count() - g.image.chars().count();
                let _ =
                    writeln!(out, "{indent}ν({}) = {}{}   [{}]", g.generator, g.image, " ".repeat(pad), g.method.as_str());
            }
            let _ = writeln!(out, "{indent}dimension {}, Calabi-Yau: {}", n.dimension, if n.calabi_yau { "yes" } else { "no" });
            for c in &n.caveats {
                let _ = writeln!(out, "{indent}caveat: {c}");
            }
        }
        for c in &self.cases {
            let _ = writeln!(out, "{indent}case {}: {}", c.command, outcome_word(c.outcome));
            c.render_into(out, &format!("{indent}  "));
        }
        if indent.is_empty() {
            let _ = writeln!(out, "{}", outcome_word(self.outcome));
        }
    }
}

fn outcome_word(o: Outcome) -> &'static str {
    match o {
        Outcome::Ok => "ok",
        Outcome::Fail => "FAIL",
        Outcome::Undetermined => "undetermined",
    }
}

/// Outcome of a command: a report, or a parse failure with its message.
pub enum Run {
    Report(Report),
    ParseError(String),
}

impl Run {
    pub fn exit_code(&self) -> i32 {
        match self {
            Run::Report(r) => r.outcome.exit_code(),
            Run::ParseError(_) => EXIT_PARSE,
        }
    }
}

fn load(file: &FileArgs) -> Result<(String, TowerSpec), String> {
    let text = std::fs::read_to_string(&file.file).map_err(|e| format!("{}: {e}", file.file.display()))?;
    let spec = parse_tower(&text).map_err(|e| format!("{}:{e}", file.file.display()))?;
    Ok((text, spec))
}

/// Tower axioms plus the file's own relations and side conditions.
fn tower_checks(spec: &TowerSpec) -> VerificationReport {
    let mut r = spec.tower.verify();
    for real in &spec.realizations {
        for c in real.tower.verify().checks {
            r.push(Check { name: format!("{}: {}", real.label, c.name), ..c });
        }
    }
    for (name, value) in &spec.relations {
        let res = if value.is_zero() { Ok(()) } else { Err(format!("reduces to {}", spec.tower.render(value))) };
        r.push(Check::from_result(format!("relation {name} = 0"), res));
    }
    for c in &spec.checks {
        let (want, word) = if c.nonzero { (false, "≠") } else { (true, "=") };
        let res = if c.value.is_zero() == want { Ok(()) } else { Err(format!("{} evaluates to {}", c.text, spec.tower.render(&c.value))) };
        r.push(Check::from_result(format!("side condition {} {word} 0", c.text), res));
    }
    r
}

fn homology_error(name: &str, e: HomologyError) -> VerificationReport {
    let mut r = VerificationReport::new();
    r.push(Check::fail(format!("homology: {name}"), e.to_string()));
    r
}

/// Run the selected homological checks, each with its own timing.
pub fn homology_checks(
    t: &Arc<OreTower>,
    cap: u32,
    perturb: Perturbation,
    which: &[HomologyCheck],
    report: &mut Report,
) {
    let wants = |c: HomologyCheck| which.contains(&c) || which.contains(&HomologyCheck::All);
    let bar_cap = cap.min(BAR_CAP);
    let bounds = CochainBounds { arity_max: COCHAIN_ARITY, cap: bar_cap, lk_max: 1 };
    type Step<'a> = (&'a str, HomologyCheck, Box<dyn Fn() -> Result<VerificationReport, HomologyError> + 'a>);
    let steps: Vec<Step> = vec![
        ("ses", HomologyCheck::Ses, Box::new(|| verify_ses(t, cap, perturb))),
        ("lifting", HomologyCheck::Lifting, Box::new(|| verify_lifting(t, LIFTING_ARITY, bar_cap, perturb))),
        ("eta-theta", HomologyCheck::EtaTheta, Box::new(|| verify_eta_theta(t, bounds, perturb))),
        ("transfer", HomologyCheck::Transfer, Box::new(|| verify_cocycle_transfer(t, bounds, perturb))),
        ("resolution", HomologyCheck::Resolution, Box::new(|| build_resolution(t).map(|c| verify_resolution(&c, cap)))),
    ];
    for (name, kind, run) in steps {
        if !wants(kind) {
            continue;
        }
        let start = Instant::now();
        let r = run().unwrap_or_else(|e| homology_error(name, e));
        report.extend(r);
        report.time(name, start);
    }
}

fn section(t: &OreTower, r: &NakayamaResult) -> NakayamaSection {
    NakayamaSection {
        images: r.images(t),
        calabi_yau: r.is_calabi_yau,
        dimension: r.cy_dimension,
        caveats: r.caveats.clone(),
    }
}

/// Compare a computed map with the file's expect block.
fn expectation_checks(spec: &TowerSpec, map: &GenMap, dimension: usize, calabi_yau: bool) -> VerificationReport {
    let t = &spec.tower;
    let mut r = VerificationReport::new();
    if let Some(expected) = &spec.expect.nakayama {
        let mut res = Ok(());
        for (g, want) in expected {
            if map.images[*g] != *want {
                res = Err(format!(
                    "ν({}) = {} but expected {}",
                    t.names()[*g],
                    t.render(&map.images[*g]),
                    t.render(want)
                ));
                break;
            }
        }
        r.push(Check::from_result("expect: nakayama", res));
    }
    if let Some(want) = spec.expect.dimension {
        let res = if want == dimension { Ok(()) } else { Err(format!("dimension {dimension}, expected {want}")) };
        r.push(Check::from_result("expect: dimension", res));
    }
    if let Some(want) = spec.expect.calabi_yau {
        let res = if want == calabi_yau { Ok(()) } else { Err(format!("Calabi-Yau {calabi_yau}, expected {want}")) };
        r.push(Check::from_result("expect: calabi_yau", res));
    }
    r
}

/// Nakayama computation on a parsed spec, recorded into `report`.
fn run_nakayama(spec: &TowerSpec, strategy: Strategy, cap: u32, report: &mut Report) -> Option<NakayamaResult> {
    let t = &spec.tower;
    let start = Instant::now();
    let res = nakayama_full(t, &spec.realizations, strategy, cap);
    report.time("nakayama", start);
    match res {
        Ok(r) => {
            report.extend(r.report.clone());
            report.extend(expectation_checks(spec, &r.automorphism, r.cy_dimension, r.is_calabi_yau));
            report.nakayama = Some(section(t, &r));
            Some(r)
        }
        Err(e @ NakayamaError::Undetermined { .. }) => {
            report.outcome = Outcome::Undetermined;
            report.checks.push(Check::pass("nakayama: determined").with_note(format!("undetermined: {e}")));
            None
        }
        Err(e) => {
            report.checks.push(Check::fail("nakayama: computed", e.to_string()));
            None
        }
    }
}

fn cmd_verify(file: &FileArgs) -> Run {
    let (text, spec) = match load(file) {
        Ok(v) => v,
        Err(e) => return Run::ParseError(e),
    };
    let mut report = Report::new("verify", file.degree_cap);
    report.add_input(&file.file.display().to_string(), &text);
    let start = Instant::now();
    report.extend(tower_checks(&spec));
    report.time("tower", start);
    if report.checks.iter().all(Check::passed) {
        homology_checks(&spec.tower, file.degree_cap, Injection::perturbation(file.inject), &[HomologyCheck::All], &mut report);
    }
    report.settle();
    Run::Report(report)
}

fn cmd_homology(file: &FileArgs, which: &[HomologyCheck]) -> Run {
    let (text, spec) = match load(file) {
        Ok(v) => v,
        Err(e) => return Run::ParseError(e),
    };
    let mut report = Report::new("homology", file.degree_cap);
    report.add_input(&file.file.display().to_string(), &text);
    homology_checks(&spec.tower, file.degree_cap, Injection::perturbation(file.inject), which, &mut report);
    report.settle();
    Run::Report(report)
}

fn cmd_nakayama(file: &FileArgs, method: MethodArg) -> Run {
    let (text, spec) = match load(file) {
        Ok(v) => v,
        Err(e) => return Run::ParseError(e),
    };
    let mut report = Report::new("nakayama", file.degree_cap);
    report.method = Some(format!("{method:?}").to_lowercase());
    report.add_input(&file.file.display().to_string(), &text);
    report.extend(tower_checks(&spec));
    if report.checks.iter().all(Check::passed) {
        run_nakayama(&spec, method.strategy(), file.degree_cap, &mut report);
    }
    report.settle();
    Run::Report(report)
}

fn cmd_ext(file: &FileArgs) -> Run {
    let (text, spec) = match load(file) {
        Ok(v) => v,
        Err(e) => return Run::ParseError(e),
    };
    let t = &spec.tower;
    let mut report = Report::new("ext", file.degree_cap);
    report.add_input(&file.file.display().to_string(), &text);
    let start = Instant::now();
    let res = build_resolution(t).and_then(|c| ext_top(&c, file.degree_cap));
    report.time("ext", start);
    match res {
        Ok(r) => {
            let identity = (0..t.num_gens()).all(|g| r.twist.images[g] == t.gen(g));
            report.extend(r.report);
            report.extend(expectation_checks(&spec, &r.twist, r.dimension, identity));
            let images = (0..t.num_gens())
                .map(|g| GeneratorImage { generator: t.names()[g].clone(), image: t.render(&r.twist.images[g]), method: Method::Ext })
                .collect();
            let caveats = vec![format!(
                "Ext vanishing certified in internal degrees 0..={}; higher degrees rest on the smoothness theorem",
                file.degree_cap
            )];
            report.nakayama = Some(NakayamaSection { images, calabi_yau: identity, dimension: r.dimension, caveats });
        }
        Err(e) => report.checks.push(Check::fail("ext: computed", e.to_string())),
    }
    report.settle();
    Run::Report(report)
}

/// One bundled file: tower checks, the auto pipeline, and for graded towers a cross-check
/// against the Ext engine on the whole tower.
fn reproduce_file(label: &str, text: &str, cap: u32) -> Report {
    let mut report = Report::new(label, cap);
    report.add_input(label, text);
    let spec = match parse_tower(text) {
        Ok(s) => s,
        Err(e) => {
            report.checks.push(Check::fail("parse", e.to_string()));
            report.settle();
            return report;
        }
    };
    report.extend(tower_checks(&spec));
    if !report.checks.iter().all(Check::passed) {
        report.settle();
        return report;
    }
    let auto = run_nakayama(&spec, Strategy::Auto, cap, &mut report);
    if report.outcome == Outcome::Undetermined {
        report.checks.push(Check::fail("reproduce: determined", "the auto pipeline left a generator open"));
        report.outcome = Outcome::Fail;
    }
    let t = &spec.tower;
    if let Some(auto) = &auto {
        if !t.graded() {
            let res = if auto.caveats.iter().any(|c| c.contains("inner")) {
                Ok(())
            } else {
                Err("missing the up-to-inner caveat".to_string())
            };
            report.checks.push(Check::from_result("reproduce: ungraded caveat", res));
        } else if t.field().params().is_empty() {
            let start = Instant::now();
            let res = build_resolution(t).and_then(|c| ext_top(&c, cap));
            report.time("ext cross-check", start);
            let check = match res {
                Ok(r) => {
                    let mut agree = Ok(());
                    for g in 0..t.num_gens() {
                        if r.twist.images[g] != auto.automorphism.images[g] {
                            agree = Err(format!(
                                "ν({}): auto gives {} but Ext gives {}",
                                t.names()[g],
                                t.render(&auto.automorphism.images[g]),
                                t.render(&r.twist.images[g])
                            ));
                            break;
                        }
                    }
                    if agree.is_ok() && r.dimension != auto.cy_dimension {
                        agree = Err(format!("Ext dimension {} vs {}", r.dimension, auto.cy_dimension));
                    }
                    Check::from_result("reproduce: full-tower Ext agrees", agree).with_range(0, cap)
                }
                Err(e) => Check::fail("reproduce: full-tower Ext agrees", e.to_string()),
            };
            report.checks.push(check);
        }
    }
    report.settle();
    report
}

pub fn reproduce_case(case: &BundledCase, cap: u32) -> Report {
    let mut report = Report::new(case.name, cap);
    let start = Instant::now();
    for (label, text) in case.files {
        report.cases.push(reproduce_file(&format!("{label}.ore"), text, cap));
    }
    report.time("total", start);
    report.settle();
    report
}

fn cmd_reproduce(which: CaseArg, cap: u32) -> Run {
    let pick: Vec<&BundledCase> = match which {
        CaseArg::All => CASES.iter().collect(),
        one => {
            let name = one.to_possible_value().expect("not skipped").get_name().to_string();
            CASES.iter().filter(|c| c.name == name).collect()
        }
    };
    let mut report = Report::new("reproduce", cap);
    let start = Instant::now();
    let cases: Vec<Report> = std::thread::scope(|s| {
        let handles: Vec<_> = pick.iter().map(|c| s.spawn(move || reproduce_case(c, cap))).collect();
        handles.into_iter().map(|h| h.join().expect("case thread panicked")).collect()
    });
    report.cases = cases;
    report.time("total", start);
    report.settle();
    Run::Report(report)
}

pub fn execute(cli: &Cli) -> Run {
    match &cli.command {
        Command::Verify(f) => cmd_verify(f),
        Command::Nakayama { file, method } => cmd_nakayama(file, *method),
        Command::Ext(f) => cmd_ext(f),
        Command::Homology { file, checks } => cmd_homology(file, checks),
        Command::Reproduce { case, degree_cap, .. } => cmd_reproduce(*case, *degree_cap),
    }
}

fn json_path(cli: &Cli) -> Option<&PathBuf> {
    match &cli.command {
        Command::Verify(f) | Command::Ext(f) => f.json.as_ref(),
        Command::Nakayama { file, .. } | Command::Homology { file, .. } => file.json.as_ref(),
        Command::Reproduce { json, .. } => json.as_ref(),
    }
}

/// Parse arguments, run, print, write the JSON report; returns the exit code.
pub fn main_with(args: impl IntoIterator<Item = std::ffi::OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
        }
    };
    let run = execute(&cli);
    match &run {
        Run::ParseError(msg) => eprintln!("parse error: {msg}"),
        Run::Report(r) => {
            print!("{}", r.render_human());
            if let Some(path) = json_path(&cli) {
                if let Err(e) = std::fs::write(path, r.to_json() + "\n") {
                    eprintln!("cannot write {}: {e}", path.display());
                    return EXIT_FAIL;
                }
            }
        }
    }
    run.exit_code()
}
