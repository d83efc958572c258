//! Task files: one ring, named modules, probe families and check
//! directives.
//!
//! ```text
//! ring QQ[x:1, y:2] order grevlex
//! module M = coker [[x^2 - y]] twists [0]
//! module P ungraded = quotient (x - 1, y - 1)
//! rmodule Mt = rees M
//! rmodule Kt = quotient (T)
//! probes graded (x, y), (x)
//! probes ungraded (x - 1)
//! check lemma3 Mt
//! check lemma1 Mt M
//! check jump M
//! ```
//!
//! Matrices list one row per generator; `rmodule` polynomials live in the
//! Rees ring, whose variables are the upper-cased base variables and `T`.
//! Reserved target names `J`, `Izero` and `Kt` denote `k[t, t⁻¹]`,
//! `k[t, t⁻¹]/k[t]` and `k[t]` over a ring in one variable.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::field::FieldDesc;
use crate::groebner::{FreeModuleDesc, ModuleElement};
use crate::homalg::{self, FPModule, GradedMatrix, Mode};
use crate::parse::{tokenize, Cursor, Tok};
use crate::pid::InjectiveModel;
use crate::poly::{BaseOrder, GradedRingDesc, Polynomial, RingRef};
use crate::rees::{self, Filtration, FiltrationDesc, ReesRingDesc};
use crate::verify::Probe;

/// Names that refer to the intensional modules over `k[t]`.
pub const RESERVED: [&str; 3] = ["J", "Izero", "Kt"];

pub fn reserved_model(name: &str) -> Option<InjectiveModel> {
    match name {
        "J" => Some(InjectiveModel::J),
        "Izero" => Some(InjectiveModel::TorsionAtZero),
        "Kt" => Some(InjectiveModel::PolynomialControl),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleDef {
    Coker { rows: Vec<Vec<Polynomial>>, twists: Option<Vec<i64>>, sources: Option<Vec<i64>> },
    Free(Vec<i64>),
    Quotient(Vec<Polynomial>),
    Rees { of: String, filtration: Option<Vec<i64>> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckDirective {
    Lemma3(String),
    Lemma1(String, String),
    Lemma2(String, String),
    Jump(String),
    Example15,
    Baer(String),
}

impl CheckDirective {
    /// Command family this directive belongs to, e.g. `check:lemma1`.
    pub fn command(&self) -> &'static str {
        match self {
            CheckDirective::Lemma3(_) => "check:lemma3",
            CheckDirective::Lemma1(..) => "check:lemma1",
            CheckDirective::Lemma2(..) => "check:lemma2",
            CheckDirective::Jump(_) => "check:jump",
            CheckDirective::Example15 | CheckDirective::Baer(_) => "check:example15",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StmtKind {
    Module { name: String, over_rees: bool, ungraded: bool, def: ModuleDef },
    Probes { graded: bool, ideals: Vec<Vec<Polynomial>> },
    Check(CheckDirective),
}

/// A statement and the position of its first token.
#[derive(Clone, Debug)]
pub struct Stmt {
    pub kind: StmtKind,
    pub line: usize,
    pub column: usize,
}

impl PartialEq for Stmt {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TaskFile {
    pub ring: RingRef,
    pub rees: ReesRingDesc,
    pub stmts: Vec<Stmt>,
}

impl PartialEq for ReesRingDesc {
    fn eq(&self, other: &Self) -> bool {
        self.total() == other.total()
    }
}

/// Command-line overrides for the ring declaration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Overrides {
    pub field: Option<FieldDesc>,
    pub order: Option<BaseOrder>,
}

/// Parses and validates a task file.
pub fn parse_task(text: &str, overrides: &Overrides) -> Result<TaskFile> {
    let task = parse_syntax(text, overrides)?;
    task.instantiate()?;
    Ok(task)
}

/// Parses without building the modules.
pub fn parse_syntax(text: &str, overrides: &Overrides) -> Result<TaskFile> {
    let toks = tokenize(text)?;
    let mut c = Cursor::new(&toks);
    skip_newlines(&mut c);
    let (kw, at) = c.expect_ident()?;
    if kw != "ring" {
        return c.error_at(&at, format!("expected `ring` declaration, found `{kw}`"));
    }
    let ring = ring_decl(&mut c, overrides)?;
    end_statement(&mut c)?;
    let rees = rees::rees_ring(&ring)?;
    let mut stmts = Vec::new();
    loop {
        skip_newlines(&mut c);
        if *c.peek_tok() == Tok::Eof {
            break;
        }
        let start = c.peek().clone();
        let (kw, at) = c.expect_ident()?;
        let kind = match kw.as_str() {
            "module" | "rmodule" => module_stmt(&mut c, &ring, &rees, kw == "rmodule")?,
            "probes" => {
                let (mode, mt) = c.expect_ident()?;
                let graded = match mode.as_str() {
                    "graded" => true,
                    "ungraded" => false,
                    _ => return c.error_at(&mt, format!("expected `graded` or `ungraded`, found `{mode}`")),
                };
                let mut ideals = vec![ideal(&mut c, &ring)?];
                while c.eat(&Tok::Comma) {
                    ideals.push(ideal(&mut c, &ring)?);
                }
                StmtKind::Probes { graded, ideals }
            }
            "check" => StmtKind::Check(check_directive(&mut c)?),
            "ring" => return c.error_at(&at, "only one ring declaration is allowed".into()),
            _ => return c.error_at(&at, format!("expected `module`, `rmodule`, `probes` or `check`, found `{kw}`")),
        };
        end_statement(&mut c)?;
        stmts.push(Stmt { kind, line: start.line, column: start.column });
    }
    Ok(TaskFile { ring, rees, stmts })
}

fn skip_newlines(c: &mut Cursor) {
    while c.eat(&Tok::Newline) {}
}

fn end_statement(c: &mut Cursor) -> Result<()> {
    if c.at_end_of_statement() {
        c.eat(&Tok::Newline);
        Ok(())
    } else {
        c.error("end of line")
    }
}

fn ring_decl(c: &mut Cursor, overrides: &Overrides) -> Result<RingRef> {
    let (fname, ft) = c.expect_ident()?;
    let field = match fname.as_str() {
        "QQ" => FieldDesc::Rationals,
        "GF" => {
            c.expect(&Tok::LParen)?;
            let (p, pt) = c.expect_nat()?;
            c.expect(&Tok::RParen)?;
            let p = u32::try_from(&p).map_err(|_| Error::Parse {
                line: pt.line,
                column: pt.column,
                message: format!("{p} is not a prime below 2^31"),
            })?;
            FieldDesc::prime(p).map_err(|e| e.at(pt.line, pt.column))?
        }
        _ => return c.error_at(&ft, format!("expected `QQ` or `GF(p)`, found `{fname}`")),
    };
    c.expect(&Tok::LBracket)?;
    let mut vars = Vec::new();
    if !c.eat(&Tok::RBracket) {
        loop {
            let (name, _) = c.expect_ident()?;
            let weight = if c.eat(&Tok::Colon) {
                let (w, wt) = c.expect_nat()?;
                match u32::try_from(&w) {
                    Ok(w) if (1..=64).contains(&w) => w,
                    _ => return c.error_at(&wt, format!("weight {w} must lie in 1..=64")),
                }
            } else {
                1
            };
            vars.push((name, weight));
            if c.eat(&Tok::RBracket) {
                break;
            }
            c.expect(&Tok::Comma)?;
        }
    }
    let mut order = BaseOrder::DegRevLex;
    if let Tok::Ident(s) = c.peek_tok() {
        if s == "order" {
            c.bump();
            let (o, ot) = c.expect_ident()?;
            order = match o.as_str() {
                "grevlex" => BaseOrder::DegRevLex,
                "lex" => BaseOrder::Lex,
                _ => return c.error_at(&ot, format!("expected `grevlex` or `lex`, found `{o}`")),
            };
        }
    }
    let field = overrides.field.unwrap_or(field);
    let order = overrides.order.unwrap_or(order);
    GradedRingDesc::new(field, vars, order).map_err(|e| e.at(ft.line, ft.column))
}

fn int_list(c: &mut Cursor) -> Result<Vec<i64>> {
    c.expect(&Tok::LBracket)?;
    let mut out = Vec::new();
    if c.eat(&Tok::RBracket) {
        return Ok(out);
    }
    loop {
        out.push(c.expect_int()?);
        if c.eat(&Tok::RBracket) {
            return Ok(out);
        }
        c.expect(&Tok::Comma)?;
    }
}

fn ideal(c: &mut Cursor, ring: &RingRef) -> Result<Vec<Polynomial>> {
    c.expect(&Tok::LParen)?;
    let mut out = Vec::new();
    if c.eat(&Tok::RParen) {
        return Ok(out);
    }
    loop {
        out.push(c.polynomial(ring)?);
        if c.eat(&Tok::RParen) {
            return Ok(out);
        }
        c.expect(&Tok::Comma)?;
    }
}

fn matrix(c: &mut Cursor, ring: &RingRef) -> Result<Vec<Vec<Polynomial>>> {
    c.expect(&Tok::LBracket)?;
    let mut rows: Vec<Vec<Polynomial>> = Vec::new();
    if c.eat(&Tok::RBracket) {
        return Ok(rows);
    }
    loop {
        let at = c.expect(&Tok::LBracket)?;
        let mut row = Vec::new();
        if !c.eat(&Tok::RBracket) {
            loop {
                row.push(c.polynomial(ring)?);
                if c.eat(&Tok::RBracket) {
                    break;
                }
                c.expect(&Tok::Comma)?;
            }
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return c.error_at(&at, format!("row has {} entries, expected {}", row.len(), first.len()));
            }
        }
        rows.push(row);
        if c.eat(&Tok::RBracket) {
            return Ok(rows);
        }
        c.expect(&Tok::Comma)?;
    }
}

fn module_stmt(c: &mut Cursor, ring: &RingRef, rees: &ReesRingDesc, over_rees: bool) -> Result<StmtKind> {
    let (name, nt) = c.expect_ident()?;
    if RESERVED.contains(&name.as_str()) {
        return c.error_at(&nt, format!("`{name}` is a reserved name"));
    }
    let mut ungraded = false;
    if let Tok::Ident(s) = c.peek_tok() {
        if s == "ungraded" && !over_rees {
            c.bump();
            ungraded = true;
        }
    }
    c.expect(&Tok::Equals)?;
    let r = if over_rees { rees.total() } else { ring };
    let (kind, kt) = c.expect_ident()?;
    let def = match kind.as_str() {
        "coker" => {
            let rows = matrix(c, r)?;
            let mut twists = None;
            let mut sources = None;
            while let Tok::Ident(s) = c.peek_tok().clone() {
                let t = c.bump();
                match s.as_str() {
                    "twists" if twists.is_none() => twists = Some(int_list(c)?),
                    "sources" if sources.is_none() => sources = Some(int_list(c)?),
                    _ => return c.error_at(&t, format!("expected `twists`, `sources` or end of line, found `{s}`")),
                }
            }
            ModuleDef::Coker { rows, twists, sources }
        }
        "free" => ModuleDef::Free(int_list(c)?),
        "quotient" => ModuleDef::Quotient(ideal(c, r)?),
        "rees" if over_rees => {
            let (of, _) = c.expect_ident()?;
            let mut filtration = None;
            if let Tok::Ident(s) = c.peek_tok() {
                if s == "filtration" {
                    c.bump();
                    filtration = Some(int_list(c)?);
                }
            }
            ModuleDef::Rees { of, filtration }
        }
        _ => {
            let allowed =
                if over_rees { "`coker`, `free`, `quotient` or `rees`" } else { "`coker`, `free` or `quotient`" };
            return c.error_at(&kt, format!("expected {allowed}, found `{kind}`"));
        }
    };
    Ok(StmtKind::Module { name, over_rees, ungraded, def })
}

fn check_directive(c: &mut Cursor) -> Result<CheckDirective> {
    let (kind, kt) = c.expect_ident()?;
    let mut name = || c.expect_ident().map(|(n, _)| n);
    Ok(match kind.as_str() {
        "lemma3" => CheckDirective::Lemma3(name()?),
        "lemma1" => CheckDirective::Lemma1(name()?, name()?),
        "lemma2" => CheckDirective::Lemma2(name()?, name()?),
        "jump" => CheckDirective::Jump(name()?),
        "example15" => CheckDirective::Example15,
        "baer" => CheckDirective::Baer(name()?),
        _ => {
            return c.error_at(
                &kt,
                format!("expected `lemma1`, `lemma2`, `lemma3`, `jump`, `example15` or `baer`, found `{kind}`"),
            )
        }
    })
}

/// A module of the task together with the ring it lives over.
#[derive(Clone, Debug)]
pub struct ModuleEntry {
    pub over_rees: bool,
    pub module: FPModule,
}

/// A task with every module built and every reference resolved.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub ring: RingRef,
    pub rees: ReesRingDesc,
    pub modules: BTreeMap<String, ModuleEntry>,
    /// Declaration order of the modules.
    pub order: Vec<String>,
    pub graded_probes: Vec<Probe>,
    pub ungraded_probes: Vec<Probe>,
    pub checks: Vec<(CheckDirective, usize, usize)>,
}

impl Workspace {
    pub fn module(&self, name: &str) -> Result<&ModuleEntry> {
        self.modules.get(name).ok_or_else(|| Error::UnknownIdentifier(name.to_string()))
    }

    /// A module over the base ring.
    pub fn base_module(&self, name: &str) -> Result<&FPModule> {
        let e = self.module(name)?;
        if e.over_rees {
            return Err(Error::Usage(format!(
                "`{name}` is a module over the Rees ring, expected one over the base ring"
            )));
        }
        Ok(&e.module)
    }

    /// A module over the Rees ring.
    pub fn rees_module(&self, name: &str) -> Result<&FPModule> {
        let e = self.module(name)?;
        if !e.over_rees {
            return Err(Error::Usage(format!("`{name}` is a module over the base ring, expected an rmodule")));
        }
        Ok(&e.module)
    }

    /// True iff the base ring is `k[t]` with `deg t = 1`.
    pub fn is_univariate(&self) -> bool {
        self.ring.nvars() == 1 && self.ring.weight(0) == 1
    }
}

fn build_coker(
    ring: &RingRef,
    rows: &[Vec<Polynomial>],
    twists: &Option<Vec<i64>>,
    sources: &Option<Vec<i64>>,
    mode: Mode,
) -> Result<FPModule> {
    let rank = twists.as_ref().map_or(rows.len(), |t| t.len());
    if !rows.is_empty() && rows.len() != rank {
        return Err(Error::AmbientMismatch(format!("{} rows for {rank} twists", rows.len())));
    }
    let target = FreeModuleDesc::new(ring, twists.clone().unwrap_or_else(|| vec![0; rank]));
    let ncols = rows.first().map_or(0, |r| r.len());
    let pres = match sources {
        Some(s) => {
            if s.len() != ncols {
                return Err(Error::AmbientMismatch(format!("{} source twists for {ncols} columns", s.len())));
            }
            let src = FreeModuleDesc::new(ring, s.clone());
            if rows.is_empty() {
                GradedMatrix::zero_map(src, target)
            } else {
                GradedMatrix::from_entries(src, target, rows)?
            }
        }
        None => {
            let cols = (0..ncols)
                .map(|j| {
                    let col: Vec<Polynomial> = rows.iter().map(|r| r[j].clone()).collect();
                    ModuleElement::from_components(&target, &col)
                })
                .collect::<Result<Vec<_>>>()?;
            GradedMatrix::from_columns(target, cols)
        }
    };
    FPModule::new(pres, mode)
}

impl TaskFile {
    /// Builds every module and resolves names, attributing errors to the
    /// statement that caused them.
    pub fn instantiate(&self) -> Result<Workspace> {
        let mut ws = Workspace {
            ring: self.ring.clone(),
            rees: self.rees.clone(),
            modules: BTreeMap::new(),
            order: Vec::new(),
            graded_probes: Vec::new(),
            ungraded_probes: Vec::new(),
            checks: Vec::new(),
        };
        for st in &self.stmts {
            self.apply(&mut ws, st).map_err(|e| e.at(st.line, st.column))?;
        }
        for (chk, line, column) in &ws.checks {
            validate_check(&ws, chk).map_err(|e| e.at(*line, *column))?;
        }
        Ok(ws)
    }

    fn apply(&self, ws: &mut Workspace, st: &Stmt) -> Result<()> {
        match &st.kind {
            StmtKind::Module { name, over_rees, ungraded, def } => {
                if ws.modules.contains_key(name) {
                    return Err(Error::Usage(format!("module `{name}` is defined twice")));
                }
                let ring = if *over_rees { self.rees.total().clone() } else { self.ring.clone() };
                let mode = if *ungraded { Mode::Ungraded } else { Mode::Graded };
                let module = match def {
                    ModuleDef::Coker { rows, twists, sources } => build_coker(&ring, rows, twists, sources, mode)?,
                    ModuleDef::Free(t) => FPModule::free(FreeModuleDesc::new(&ring, t.clone()), mode),
                    ModuleDef::Quotient(gens) => FPModule::cyclic(&ring, gens, mode)?,
                    ModuleDef::Rees { of, filtration } => {
                        let base = ws.base_module(of)?;
                        let filt = match filtration {
                            None => Filtration::CanonicalGraded,
                            Some(d) => Filtration::Good(FiltrationDesc { generator_degrees: d.clone() }),
                        };
                        rees::rees_module(&self.rees, base, &filt)?.tilde
                    }
                };
                ws.order.push(name.clone());
                ws.modules.insert(name.clone(), ModuleEntry { over_rees: *over_rees, module });
            }
            StmtKind::Probes { graded, ideals } => {
                for gens in ideals {
                    if *graded {
                        if let Some(p) = gens.iter().find(|p| !p.is_homogeneous()) {
                            return Err(Error::Ungraded(format!("graded probe generator `{p}` is not homogeneous")));
                        }
                        ws.graded_probes.push(Probe::new(gens.clone()));
                    } else {
                        ws.ungraded_probes.push(Probe::new(gens.clone()));
                    }
                }
            }
            StmtKind::Check(chk) => ws.checks.push((chk.clone(), st.line, st.column)),
        }
        Ok(())
    }
}

fn validate_check(ws: &Workspace, chk: &CheckDirective) -> Result<()> {
    match chk {
        CheckDirective::Lemma3(m) => {
            ws.rees_module(m)?;
        }
        CheckDirective::Lemma1(m, n) => {
            ws.rees_module(m)?;
            if ws.base_module(n)?.mode() != Mode::Graded {
                return Err(Error::Ungraded(format!("`{n}` must be graded")));
            }
        }
        CheckDirective::Lemma2(m, n) => {
            ws.rees_module(m)?;
            ws.rees_module(n)?;
        }
        CheckDirective::Jump(n) => {
            if reserved_model(n).is_some() {
                if !ws.is_univariate() {
                    return Err(Error::Usage(format!("`{n}` is only available over k[t]")));
                }
            } else if ws.base_module(n)?.mode() != Mode::Graded {
                return Err(Error::Ungraded(format!("`{n}` must be graded")));
            }
        }
        CheckDirective::Example15 => {}
        CheckDirective::Baer(n) => {
            if reserved_model(n).is_none() {
                return Err(Error::UnknownIdentifier(n.clone()));
            }
        }
    }
    Ok(())
}

fn write_list<T: fmt::Display>(out: &mut String, open: &str, items: &[T], close: &str) {
    out.push_str(open);
    for (k, x) in items.iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{x}");
    }
    out.push_str(close);
}

/// Prints a task in a form [`parse_task`] reads back to an equal task.
pub fn print_task(task: &TaskFile) -> String {
    let mut out = String::new();
    let ring = &task.ring;
    let _ = write!(out, "ring {}[", ring.field());
    for (k, v) in ring.vars().iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{}:{}", v.name, v.weight);
    }
    out.push(']');
    if ring.order() == BaseOrder::Lex {
        out.push_str(" order lex");
    }
    out.push('\n');
    for st in &task.stmts {
        match &st.kind {
            StmtKind::Module { name, over_rees, ungraded, def } => {
                out.push_str(if *over_rees { "rmodule " } else { "module " });
                out.push_str(name);
                if *ungraded {
                    out.push_str(" ungraded");
                }
                out.push_str(" = ");
                match def {
                    ModuleDef::Coker { rows, twists, sources } => {
                        out.push_str("coker [");
                        for (k, row) in rows.iter().enumerate() {
                            if k > 0 {
                                out.push_str(", ");
                            }
                            write_list(&mut out, "[", row, "]");
                        }
                        out.push(']');
                        if let Some(t) = twists {
                            write_list(&mut out, " twists [", t, "]");
                        }
                        if let Some(s) = sources {
                            write_list(&mut out, " sources [", s, "]");
                        }
                    }
                    ModuleDef::Free(t) => write_list(&mut out, "free [", t, "]"),
                    ModuleDef::Quotient(g) => write_list(&mut out, "quotient (", g, ")"),
                    ModuleDef::Rees { of, filtration } => {
                        let _ = write!(out, "rees {of}");
                        if let Some(f) = filtration {
                            write_list(&mut out, " filtration [", f, "]");
                        }
                    }
                }
            }
            StmtKind::Probes { graded, ideals } => {
                out.push_str(if *graded { "probes graded " } else { "probes ungraded " });
                for (k, i) in ideals.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    write_list(&mut out, "(", i, ")");
                }
            }
            StmtKind::Check(chk) => {
                out.push_str("check ");
                match chk {
                    CheckDirective::Lemma3(m) => {
                        let _ = write!(out, "lemma3 {m}");
                    }
                    CheckDirective::Lemma1(m, n) => {
                        let _ = write!(out, "lemma1 {m} {n}");
                    }
                    CheckDirective::Lemma2(m, n) => {
                        let _ = write!(out, "lemma2 {m} {n}");
                    }
                    CheckDirective::Jump(n) => {
                        let _ = write!(out, "jump {n}");
                    }
                    CheckDirective::Example15 => out.push_str("example15"),
                    CheckDirective::Baer(n) => {
                        let _ = write!(out, "baer {n}");
                    }
                }
            }
        }
        out.push('\n');
    }
    out
}

/// Builds the module `A/I` of a graded or ungraded probe; exposed for the
/// command-line `ext` helpers.
pub fn probe_module(ring: &RingRef, probe: &Probe, mode: Mode) -> Result<FPModule> {
    FPModule::cyclic(ring, &probe.ideal, mode)
}

/// Default evaluation window for text output of profiles.
pub const PROFILE_WINDOW: (i64, i64) = homalg::DEFAULT_WINDOW;
