//! Session configuration, command dispatch and corpus runs.
//!
//! Every command yields a list of [`CheckReport`]s: check commands one per
//! directive, computation commands (`gb`, `ext`, ...) a single report whose
//! evidence is the computed data.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::budget;
use crate::error::{Error, Result};
use crate::field::FieldDesc;
use crate::fuzz;
use crate::groebner::ModuleElement;
use crate::homalg::{self, ExtDims, FPModule, Mode};
use crate::pid::{self, InjectiveModel};
use crate::poly::BaseOrder;
use crate::rees::{self, Filtration, FiltrationDesc};
use crate::report::{emit_report, Format};
use crate::task::{self, CheckDirective, Overrides, TaskFile, Workspace};
use crate::verify::{self, dim_value, table, CheckConfig, CheckReport, JumpTarget, Status};

/// Corpus files shipped with the crate; every check in them passes.
pub const BUNDLED: &[(&str, &str)] = &[
    ("kt", include_str!("../corpus/kt.task")),
    ("kx", include_str!("../corpus/kx.task")),
    ("kxy", include_str!("../corpus/kxy.task")),
    ("kxy12", include_str!("../corpus/kxy12.task")),
    ("gf2", include_str!("../corpus/gf2.task")),
];

/// Negative controls: every check or parse in them must fail.
pub const NEGATIVE: &[(&str, &str)] = &[
    ("corrupted", include_str!("../corpus/negative/corrupted.task")),
    ("swap", include_str!("../corpus/negative/swap.task")),
    ("lemma1", include_str!("../corpus/negative/lemma1.task")),
    ("lemma1xy", include_str!("../corpus/negative/lemma1xy.task")),
];

/// Work units granted to each check (one unit per reduction step).
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Number of mutated files generated from `--seed`.
pub const FUZZ_FILES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckFamily {
    Lemma1,
    Lemma2,
    Lemma3,
    Jump,
    Example15,
    All,
}

impl CheckFamily {
    fn selects(self, d: &CheckDirective) -> bool {
        self == CheckFamily::All || d.command() == self.command()
    }

    pub fn command(self) -> &'static str {
        match self {
            CheckFamily::Lemma1 => "check:lemma1",
            CheckFamily::Lemma2 => "check:lemma2",
            CheckFamily::Lemma3 => "check:lemma3",
            CheckFamily::Jump => "check:jump",
            CheckFamily::Example15 => "check:example15",
            CheckFamily::All => "check:all",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Gb(String),
    Resolve(String),
    Ext { q: i64, m: String, n: String },
    Rees(String),
    Sp0(String),
    Sp1(String),
    Lsp0(String),
    Check(CheckFamily),
}

pub const COMMANDS: [&str; 13] = [
    "gb",
    "resolve",
    "ext",
    "rees",
    "sp0",
    "sp1",
    "lsp0",
    "check:lemma1",
    "check:lemma2",
    "check:lemma3",
    "check:jump",
    "check:example15",
    "check:all",
];

impl Command {
    /// Builds a command from its name, module arguments and `--q`.
    pub fn parse(name: &str, args: &[String], q: Option<i64>) -> Result<Command> {
        let arity = |k: usize| -> Result<()> {
            if args.len() == k {
                Ok(())
            } else {
                Err(Error::Usage(format!("`{name}` takes {k} module name(s), got {}", args.len())))
            }
        };
        if q.is_some() && name != "ext" {
            return Err(Error::Usage("--q only applies to `ext`".into()));
        }
        let one = |f: fn(String) -> Command| -> Result<Command> {
            arity(1)?;
            Ok(f(args[0].clone()))
        };
        let check = |f: CheckFamily| -> Result<Command> {
            arity(0)?;
            Ok(Command::Check(f))
        };
        match name {
            "gb" => one(Command::Gb),
            "resolve" => one(Command::Resolve),
            "rees" => one(Command::Rees),
            "sp0" => one(Command::Sp0),
            "sp1" => one(Command::Sp1),
            "lsp0" => one(Command::Lsp0),
            "ext" => {
                arity(2)?;
                let q = q.ok_or_else(|| Error::Usage("`ext` requires --q".into()))?;
                if q < 0 {
                    return Err(Error::Usage(format!("Ext index {q} is negative")));
                }
                Ok(Command::Ext { q, m: args[0].clone(), n: args[1].clone() })
            }
            "check:lemma1" => check(CheckFamily::Lemma1),
            "check:lemma2" => check(CheckFamily::Lemma2),
            "check:lemma3" => check(CheckFamily::Lemma3),
            "check:jump" => check(CheckFamily::Jump),
            "check:example15" => check(CheckFamily::Example15),
            "check:all" => check(CheckFamily::All),
            _ => Err(Error::Usage(format!("unknown command `{name}`; expected one of {}", COMMANDS.join(", ")))),
        }
    }
}

/// Parses `QQ` or `Fp=<p>`.
pub fn parse_field(s: &str) -> Result<FieldDesc> {
    if s == "QQ" {
        return Ok(FieldDesc::Rationals);
    }
    let p = s
        .strip_prefix("Fp=")
        .and_then(|p| p.parse::<u32>().ok())
        .ok_or_else(|| Error::Usage(format!("unknown field `{s}`, expected QQ or Fp=<p>")))?;
    FieldDesc::prime(p)
}

pub fn parse_order(s: &str) -> Result<BaseOrder> {
    match s {
        "grevlex" => Ok(BaseOrder::DegRevLex),
        "lex" => Ok(BaseOrder::Lex),
        _ => Err(Error::Usage(format!("unknown order `{s}`, expected grevlex or lex"))),
    }
}

/// Parses `lo:hi`.
pub fn parse_window(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::Usage(format!("window `{s}` is not of the form lo:hi"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo = i64::from_str(lo.trim()).map_err(|_| bad())?;
    let hi = i64::from_str(hi.trim()).map_err(|_| bad())?;
    Ok((lo, hi))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SessionConfig {
    /// Overrides the field of the task's ring declaration.
    pub field: Option<FieldDesc>,
    /// Overrides the order of the task's ring declaration.
    pub order: Option<BaseOrder>,
    pub window: (i64, i64),
    pub qmax: i64,
    pub format: Format,
    pub command: Command,
    /// A task file or a directory of them; the bundled corpus when absent.
    pub input: Option<PathBuf>,
    /// Replaces the input by mutated copies of the bundled corpus.
    pub seed: Option<u64>,
    /// When false every `millis` is written as 0, making reports
    /// byte-identical across runs.
    pub timing: bool,
    pub budget: u64,
}

impl SessionConfig {
    pub fn new(command: Command) -> Self {
        SessionConfig {
            field: None,
            order: None,
            window: homalg::DEFAULT_WINDOW,
            qmax: 4,
            format: Format::Json,
            command,
            input: None,
            seed: None,
            timing: true,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.window.0 > self.window.1 {
            return Err(Error::Usage(format!("window {}:{} is empty", self.window.0, self.window.1)));
        }
        if !(0..=8).contains(&self.qmax) {
            return Err(Error::Usage(format!("--max-q must lie in 0..=8, got {}", self.qmax)));
        }
        Ok(())
    }

    pub fn check_config(&self) -> CheckConfig {
        CheckConfig { window: self.window, qmax: self.qmax }
    }

    pub fn overrides(&self) -> Overrides {
        Overrides { field: self.field, order: self.order }
    }
}

/// Reports plus the worst error met while producing them.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub reports: Vec<CheckReport>,
    /// Exit code of the most severe error folded into a failing report.
    pub error_code: Option<i32>,
}

impl Outcome {
    fn push(&mut self, name: &str, r: Result<CheckReport>) {
        match r {
            Ok(rep) => self.reports.push(rep),
            Err(e) => {
                self.reports.push(CheckReport::from_error(name, &e));
                if e.exit_code() == 3 {
                    self.error_code = Some(3);
                }
            }
        }
    }

    /// 0 iff every report passed; 1 on failures; 3 after an internal error.
    pub fn exit_code(&self) -> i32 {
        match self.error_code {
            Some(c) => c,
            None if self.reports.iter().all(|r| r.passed()) => 0,
            None => 1,
        }
    }

    fn strip_timing(&mut self) {
        for r in &mut self.reports {
            r.millis = 0;
        }
    }
}

fn directive_name(d: &CheckDirective) -> String {
    match d {
        CheckDirective::Lemma3(m) | CheckDirective::Jump(m) => m.clone(),
        CheckDirective::Lemma1(m, n) | CheckDirective::Lemma2(m, n) => format!("{m},{n}"),
        CheckDirective::Example15 => String::new(),
        CheckDirective::Baer(m) => m.clone(),
    }
}

fn prefix(d: &CheckDirective) -> &'static str {
    match d {
        CheckDirective::Lemma3(_) => "lemma3",
        CheckDirective::Lemma1(..) => "lemma1",
        CheckDirective::Lemma2(..) => "lemma2",
        CheckDirective::Jump(_) => "jump",
        CheckDirective::Example15 => "example15",
        CheckDirective::Baer(_) => "baer",
    }
}

fn baer_report(label: &str, model: InjectiveModel, cfg: &CheckConfig) -> Result<CheckReport> {
    verify::timed(format!("baer:{label}:{}", model.name()), || {
        let out = pid::graded_baer_check(model, 8, cfg.window)?;
        let mut ev =
            json!({ "model": model.name(), "nmax": 8, "window": [cfg.window.0, cfg.window.1], "pass": out.pass });
        if let Some((n, d)) = out.failure {
            ev["counterexample"] = json!({ "instance": model.name(), "n": n, "degree": d });
        }
        Ok((out.pass, ev))
    })
}

fn run_directive(ws: &Workspace, label: &str, d: &CheckDirective, cfg: &CheckConfig) -> Result<CheckReport> {
    let name = format!("{label}:{}", directive_name(d));
    match d {
        CheckDirective::Lemma3(m) => verify::check_lemma3(&ws.rees, &name, ws.rees_module(m)?, cfg),
        CheckDirective::Lemma1(m, n) => {
            verify::check_lemma1(&ws.rees, &name, ws.rees_module(m)?, ws.base_module(n)?, cfg)
        }
        CheckDirective::Lemma2(m, n) => {
            verify::check_lemma2(&ws.rees, &name, ws.rees_module(m)?, ws.rees_module(n)?, cfg)
        }
        CheckDirective::Jump(n) => {
            let target = match task::reserved_model(n) {
                Some(model) => JumpTarget::Model(model),
                None => JumpTarget::Module(ws.base_module(n)?.clone()),
            };
            verify::check_dimension_jump(&name, &ws.ring, &target, &ws.graded_probes, &ws.ungraded_probes, cfg)
        }
        CheckDirective::Example15 => verify::check_example15(ws.ring.field()),
        CheckDirective::Baer(n) => {
            let model = task::reserved_model(n).ok_or_else(|| Error::UnknownIdentifier(n.clone()))?;
            baer_report(label, model, cfg)
        }
    }
}

fn with_label(mut r: CheckReport, label: &str) -> CheckReport {
    // Checks that do not depend on a task still carry their file in the name.
    if !r.name.contains(label) {
        r.name = format!("{}:{label}", r.name);
    }
    r
}

/// Runs the check directives of `ws` selected by `family`, concurrently,
/// keeping declaration order in the output.
fn run_checks(ws: &Workspace, label: &str, family: CheckFamily, config: &SessionConfig) -> Outcome {
    let cfg = config.check_config();
    let jobs: Vec<&CheckDirective> = ws.checks.iter().map(|(d, _, _)| d).filter(|d| family.selects(d)).collect();
    let results: Vec<(String, Result<CheckReport>)> = jobs
        .par_iter()
        .map(|d| {
            let name = format!("{}:{label}:{}", prefix(d), directive_name(d));
            let r = budget::with_budget(config.budget, || run_directive(ws, label, d, &cfg));
            (name, r.map(|r| with_label(r, label)))
        })
        .collect();
    let mut out = Outcome::default();
    for (name, r) in results {
        out.push(&name, r);
    }
    out
}

fn has_directive(ws: &Workspace, family: CheckFamily) -> bool {
    ws.checks.iter().any(|(d, _, _)| family.selects(d))
}

fn presentation_evidence(m: &FPModule) -> Value {
    let p = m.presentation();
    json!({
        "generators": p.target().twists(),
        "relations": p.columns().iter().map(|c| c.display(p.target())).collect::<Vec<_>>(),
    })
}

fn size_evidence(m: &FPModule, window: (i64, i64)) -> Result<Value> {
    Ok(match m.mode() {
        Mode::Graded => json!({ "hilbert": table(window.0, &m.hilbert_profile(window.0, window.1)?) }),
        Mode::Ungraded => json!({ "dimension": dim_value(m.dimension()?) }),
    })
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(x), Value::Object(y)) = (&mut a, b) {
        x.extend(y);
    }
    a
}

fn computation(ws: &Workspace, label: &str, cmd: &Command, config: &SessionConfig) -> Result<CheckReport> {
    let window = config.window;
    let module = |name: &str| ws.module(name).map(|e| &e.module);
    let (name, evidence) = match cmd {
        Command::Gb(m) => {
            let md = module(m)?;
            let p = md.presentation();
            let gb = md.gb()?;
            let basis: Vec<String> = gb.generators().iter().map(|g: &ModuleElement| g.display(p.target())).collect();
            let ev = json!({ "module": m, "ring": md.ring().to_string(), "size": basis.len(), "basis": basis });
            (format!("gb:{label}:{m}"), merge(ev, size_evidence(md, window)?))
        }
        Command::Resolve(m) => {
            let md = module(m)?;
            let res = homalg::free_resolution(md, homalg::default_max_len(md.ring()))?;
            let terms: Vec<Value> = (res.lo()..=res.hi())
                .rev()
                .filter_map(|q| res.term(q).map(|f| json!({ "q": q, "rank": f.rank(), "degrees": f.twists() })))
                .collect();
            (format!("resolve:{label}:{m}"), json!({ "module": m, "length": res.length(), "terms": terms }))
        }
        Command::Ext { q, m, n } => {
            let prof = homalg::ext_profile(module(m)?, module(n)?, *q, window)?;
            let dims = match &prof.dims {
                ExtDims::Graded { lo, values } => table(*lo, values),
                ExtDims::Ungraded(d) => dim_value(*d),
            };
            let mode = if matches!(prof.dims, ExtDims::Graded { .. }) { "graded" } else { "ungraded" };
            (
                format!("ext:{label}:{m},{n}:{q}"),
                json!({ "q": q, "mode": mode, "window": [window.0, window.1], "vanishes": prof.vanishes, "dims": dims }),
            )
        }
        Command::Rees(m) => {
            let md = ws.base_module(m)?;
            let filt = match md.mode() {
                Mode::Graded => Filtration::CanonicalGraded,
                Mode::Ungraded => {
                    Filtration::Good(FiltrationDesc { generator_degrees: vec![0; md.generators().rank()] })
                }
            };
            let data = rees::rees_module(&ws.rees, md, &filt)?;
            let kind = match data.kind {
                rees::ReesKind::GradedRs => "graded",
                rees::ReesKind::GoodFiltrationRs => "good-filtration",
            };
            let ev = json!({
                "module": m,
                "ring": ws.rees.total().to_string(),
                "kind": kind,
                "t_regular": rees::t_regular(&ws.rees, &data.tilde)?,
                "presentation": presentation_evidence(&data.tilde),
            });
            (format!("rees:{label}:{m}"), merge(ev, size_evidence(&data.tilde, window)?))
        }
        Command::Sp0(m) | Command::Sp1(m) => {
            let mt = ws.rees_module(m)?;
            let (tag, s) = match cmd {
                Command::Sp0(_) => ("sp0", rees::sp0(&ws.rees, mt)?),
                _ => ("sp1", rees::sp1(&ws.rees, mt)?),
            };
            let ev = json!({ "module": m, "presentation": presentation_evidence(&s) });
            (format!("{tag}:{label}:{m}"), merge(ev, size_evidence(&s, window)?))
        }
        Command::Lsp0(m) => {
            let mt = ws.rees_module(m)?;
            let (hm1, h0) = rees::lsp0(&ws.rees, mt)?;
            (
                format!("lsp0:{label}:{m}"),
                json!({
                    "module": m,
                    "t_regular": rees::t_regular(&ws.rees, mt)?,
                    "-1": table(window.0, &hm1.hilbert_profile(window.0, window.1)?),
                    "0": table(window.0, &h0.hilbert_profile(window.0, window.1)?),
                }),
            )
        }
        Command::Check(_) => return Err(Error::internal("computation called with a check command")),
    };
    Ok(CheckReport { name, status: Status::Pass, evidence, millis: 0 })
}

/// Runs the configured command on one parsed task. Mismatches between task
/// and command (a check family without directives, an unknown module) are
/// errors.
pub fn dispatch(config: &SessionConfig, task: &TaskFile, label: &str) -> Result<Outcome> {
    config.validate()?;
    let ws = task.instantiate()?;
    let mut out = match &config.command {
        Command::Check(family) => {
            if !has_directive(&ws, *family) {
                if *family == CheckFamily::Example15 {
                    // The example lives over k[t] whatever ring the task declares.
                    let mut out = Outcome::default();
                    let r = budget::with_budget(config.budget, || verify::check_example15(ws.ring.field()));
                    out.push("example15", r);
                    out
                } else {
                    return Err(Error::Usage(format!("the task has no directive for `{}`", family.command())));
                }
            } else {
                run_checks(&ws, label, *family, config)
            }
        }
        cmd => {
            let start = std::time::Instant::now();
            let mut r = budget::with_budget(config.budget, || computation(&ws, label, cmd, config))?;
            r.millis = start.elapsed().as_millis() as u64;
            Outcome { reports: vec![r], error_code: None }
        }
    };
    if !config.timing {
        out.strip_timing();
    }
    Ok(out)
}

/// Runs a check family over several task files. Files that fail to parse
/// become failing reports carrying the located diagnostic; files without a
/// matching directive are skipped. Report order follows file order.
pub fn run_corpus(config: &SessionConfig, files: &[(String, String)]) -> Result<Outcome> {
    config.validate()?;
    let Command::Check(family) = config.command else {
        return Err(Error::Usage("corpus runs accept check commands only".into()));
    };
    let parts: Vec<Outcome> = files
        .par_iter()
        .map(|(label, text)| {
            let parsed = budget::with_budget(config.budget, || {
                task::parse_task(text, &config.overrides()).and_then(|t| Ok((t.instantiate()?, t)))
            });
            match parsed {
                Err(e) => {
                    let mut out = Outcome::default();
                    out.reports.push(CheckReport {
                        name: format!("parse:{label}"),
                        status: Status::Fail,
                        evidence: json!({ "file": label, "error": e.to_string(), "counterexample": { "instance": label } }),
                        millis: 0,
                    });
                    if e.exit_code() == 3 {
                        out.error_code = Some(3);
                    }
                    out
                }
                Ok((ws, _)) => run_checks(&ws, label, family, config),
            }
        })
        .collect();
    let mut out = Outcome::default();
    for p in parts {
        out.reports.extend(p.reports);
        out.error_code = out.error_code.max(p.error_code);
    }
    if family == CheckFamily::Example15 && out.reports.is_empty() && !files.is_empty() {
        let r = budget::with_budget(config.budget, || {
            verify::check_example15(config.field.unwrap_or(FieldDesc::Rationals))
        });
        out.push("example15", r);
    }
    if !config.timing {
        out.strip_timing();
    }
    Ok(out)
}

pub fn bundled_corpus() -> Vec<(String, String)> {
    BUNDLED.iter().map(|(n, t)| (n.to_string(), t.to_string())).collect()
}

pub fn negative_corpus() -> Vec<(String, String)> {
    NEGATIVE.iter().map(|(n, t)| (n.to_string(), t.to_string())).collect()
}

/// What a session writes and how it exits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl RunOutput {
    fn error(e: &Error, context: &str) -> Self {
        RunOutput { stdout: String::new(), stderr: format!("error: {context}{e}\n"), code: e.exit_code() }
    }
}

fn label_of(path: &Path) -> String {
    path.file_stem().map_or_else(|| "input".to_string(), |s| s.to_string_lossy().into_owned())
}

fn read_dir_corpus(dir: &Path) -> Result<Vec<(String, String)>> {
    let io = |e: std::io::Error| Error::Usage(format!("{}: {e}", dir.display()));
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "task"))
        .collect();
    paths.sort();
    paths.iter().map(|p| std::fs::read_to_string(p).map(|t| (label_of(p), t)).map_err(io)).collect()
}

/// Runs a whole session: reads the input, dispatches, renders the report.
pub fn run(config: &SessionConfig) -> RunOutput {
    if let Err(e) = config.validate() {
        return RunOutput::error(&e, "");
    }
    let outcome = match (&config.input, config.seed) {
        (_, Some(seed)) => {
            let files = fuzz::fuzzed_corpus(seed, FUZZ_FILES, BUNDLED);
            match config.command {
                Command::Check(_) => run_corpus(config, &files),
                _ => Err(Error::Usage("--seed applies to check commands only".into())),
            }
        }
        (None, None) => match config.command {
            Command::Check(_) => run_corpus(config, &bundled_corpus()),
            _ => Err(Error::Usage("this command needs a task file (--input)".into())),
        },
        (Some(path), None) if path.is_dir() => match read_dir_corpus(path) {
            Ok(files) => match config.command {
                Command::Check(_) => run_corpus(config, &files),
                _ => Err(Error::Usage("computation commands need a single task file".into())),
            },
            Err(e) => Err(e),
        },
        (Some(path), None) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => return RunOutput::error(&Error::Usage(format!("{e}")), &format!("{}: ", path.display())),
            };
            match task::parse_task(&text, &config.overrides()) {
                Ok(t) => dispatch(config, &t, &label_of(path)),
                Err(e) => return RunOutput::error(&e, &format!("{}:", path.display())),
            }
        }
    };
    match outcome {
        Ok(out) => {
            let code = out.exit_code();
            let stderr = out.reports.iter().filter(|r| !r.passed()).map(|r| format!("fail: {}\n", r.name)).collect();
            RunOutput { stdout: emit_report(&out.reports, config.format), stderr, code }
        }
        Err(e) => RunOutput::error(&e, ""),
    }
}
