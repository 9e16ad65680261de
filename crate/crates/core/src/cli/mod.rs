//! Command-line front end. Every command loads one JSON document, runs the
//! relevant checks and prints a report; `--report` also writes it as JSON.
//!
//! Exit codes: 0 when every law holds, 1 when a law fails, 2 when the input
//! cannot be read or does not match the schema.

pub mod schema;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::category::{
    check_ea, check_hf, check_hf_functor, check_hf_iso, check_hom_identities, check_identity_transport_lemmas,
    hf_roundtrip, hf_to_ea, roundtrip_checks, EaCategory,
};
use crate::constructions::{
    build_c, build_s, check_example_iso, check_full_image, check_iso, check_s_arrow, family_as_efunctor, full_image,
};
use crate::error::{Error, Result};
use crate::family::{check_cocone, check_down_family, check_family, check_injection_property, sigma, sum_relation, Family};
use crate::harness::{run_suite, SuiteConfig};
use crate::report::{Entry, Report, Status};
use crate::setoid::check_setoid;

use schema::{Document, LoadOptions};

#[derive(Parser, Debug)]
#[command(name = "setoidcat", version, about = "Check finite setoids, families and the categories built from them")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the laws of any input document.
    Validate(InputArgs),
    /// Build the setoid sum of a family.
    Sum(InputArgs),
    /// Build the function category of a family.
    BuildC(InputArgs),
    /// Build the relation category of a family.
    BuildS(InputArgs),
    /// Check that the function and relation categories are isomorphic.
    CheckIso(InputArgs),
    /// Build the full image of a family viewed as a functor into setoids.
    FullImage(InputArgs),
    /// Translate between presentations and check the round trips.
    Roundtrip(InputArgs),
    /// Run the property suite on generated families.
    Suite(SuiteArgs),
}

#[derive(Args, Debug)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Write the JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Treat every equality list as already closed.
    #[arg(long)]
    pub strict_closure: bool,
    /// Fill in omitted transports.
    #[arg(long)]
    pub autocomplete_transports: bool,
}

#[derive(Args, Debug)]
pub struct SuiteArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 4)]
    pub max_index: usize,
    #[arg(long, default_value_t = 3)]
    pub max_fiber: usize,
    /// Also run the presentation round trips on every family.
    #[arg(long)]
    pub roundtrips: bool,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// Machine-readable result of one command.
#[derive(Debug, Serialize)]
pub struct CommandReport {
    pub command: String,
    pub status: &'static str,
    pub message: Option<String>,
    pub laws: Vec<Entry>,
}

impl CommandReport {
    /// 0, 1 or 2, from the status alone.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            "ok" => 0,
            "fail" => 1,
            _ => 2,
        }
    }
}

struct Outcome {
    text: String,
    report: Report,
}

fn options(args: &InputArgs) -> LoadOptions {
    LoadOptions { strict_closure: args.strict_closure, autocomplete: args.autocomplete_transports }
}

fn read(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Malformed(format!("cannot read {}: {e}", path.display())))?;
    Document::parse(&text).map_err(|e| match e {
        Error::Malformed(m) => Error::Malformed(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn load_family(doc: &Document, opts: LoadOptions) -> Result<Family> {
    match doc {
        Document::Family(f) => f.load(opts),
        other => Err(Error::Malformed(format!("expected a family document, found {:?}", other.kind()))),
    }
}

fn require_ok(report: Report) -> Result<()> {
    if report.is_ok() {
        Ok(())
    } else {
        Err(Error::Law(report))
    }
}

fn validate(doc: &Document, opts: LoadOptions) -> Result<Outcome> {
    let mut text = String::new();
    let report = match doc {
        Document::Setoid(s) => {
            let raw = s.to_raw("setoid")?;
            let mut report = check_setoid(&raw)?;
            if s.closure(opts) == crate::setoid::Closure::Generate {
                report = Report::new();
                report.structural("equivalence");
            }
            if report.is_ok() {
                let set = s.load("setoid", opts)?;
                let _ = writeln!(text, "{} elements in {} classes", set.len(), set.class_count());
            }
            report
        }
        Document::Family(f) => {
            let f = f.load(opts)?;
            let report = check_family(&f);
            let _ = writeln!(text, "{}", report.summary());
            report
        }
        Document::EaCategory(c) => check_ea(&c.load(opts)?),
        Document::HfCategory(c) => {
            let c = c.load(opts)?;
            let mut report = check_hf(&c);
            if report.is_ok() {
                report.merge(None, check_identity_transport_lemmas(&c));
                report.merge(None, check_hom_identities(&c));
            }
            report
        }
        Document::SArrow(a) => {
            let input = a.load(opts)?;
            check_s_arrow(&input.family, &input.sum, input.from, input.to, &input.pairs)?
        }
        Document::Cocone(c) => {
            let (family, target, legs) = c.load(opts)?;
            require_ok(check_family(&family))?;
            check_cocone(&family, &target, &legs)?
        }
        Document::HfFunctor(f) => {
            let f = f.load(opts)?;
            let mut report = Report::new();
            report.merge(Some("source"), check_hf(&f.source));
            report.merge(Some("target"), check_hf(&f.target));
            report.merge(None, check_hf_functor(&f));
            report
        }
    };
    Ok(Outcome { text, report })
}

fn sum(doc: &Document, opts: LoadOptions) -> Result<Outcome> {
    let f = load_family(doc, opts)?;
    require_ok(check_family(&f))?;
    let mut report = Report::new();
    report.merge(Some("sum relation"), check_setoid(&sum_relation(&f))?);
    let s = sigma(&f)?;
    report.merge(None, check_injection_property(&f, &s));
    check_down_family(&f, &s)?;
    let set = s.setoid();
    let mut text = format!("{} elements in {} classes\n", set.len(), set.class_count());
    for class in set.classes() {
        let names: Vec<String> = class.into_iter().map(|u| set.name(u)).collect();
        let _ = writeln!(text, "  {{{}}}", names.join(", "));
    }
    Ok(Outcome { text, report })
}

fn describe_category(c: &EaCategory) -> String {
    let mut text = format!(
        "{} object classes, {} arrow classes ({} arrows), {} composable pairs\n",
        c.object_classes(),
        c.arrow_classes(),
        c.arrows.len(),
        c.composable.len()
    );
    for &e in c.arrows.class_reps() {
        let _ = writeln!(text, "  {}", c.arrows.name(e));
    }
    text
}

fn build(doc: &Document, opts: LoadOptions, relations: bool) -> Result<Outcome> {
    let f = load_family(doc, opts)?;
    let c = if relations { build_s(&f)?.category } else { build_c(&f)?.category };
    Ok(Outcome { text: describe_category(&c), report: check_ea(&c) })
}

fn iso(doc: &Document, opts: LoadOptions) -> Result<Outcome> {
    let f = load_family(doc, opts)?;
    let iso = check_iso(&f)?;
    let (kc, ks) = (iso.c.category.arrow_classes(), iso.s.category.arrow_classes());
    let text = if iso.report.is_ok() {
        let classes = if kc == ks { format!("{kc} arrow classes") } else { format!("{kc} and {ks} arrow classes") };
        format!("{classes}; M∘N = Id, N∘M = Id\n")
    } else {
        String::from("not isomorphic\n")
    };
    Ok(Outcome { text, report: iso.report })
}

fn image(doc: &Document, opts: LoadOptions) -> Result<Outcome> {
    let f = load_family(doc, opts)?;
    let fam = family_as_efunctor(&f)?;
    let image = full_image(&fam.source, &fam.functor)?;
    let mut report = check_full_image(&image);
    report.merge(None, check_example_iso(&f)?);
    let s = &image.category;
    let ob = s.ob();
    let mut text = String::from("hom sizes:\n");
    for &a in ob.class_reps() {
        for &b in ob.class_reps() {
            let _ = writeln!(text, "  S({},{}) = {}", ob.name(a), ob.name(b), s.hom(a, b).len());
        }
    }
    Ok(Outcome { text, report })
}

fn roundtrip(doc: &Document, opts: LoadOptions) -> Result<Outcome> {
    let mut report = Report::new();
    match doc {
        Document::EaCategory(c) => {
            let c = c.load(opts)?;
            require_ok(check_ea(&c))?;
            report.merge(None, roundtrip_checks(&c)?);
        }
        Document::HfCategory(c) => {
            let c = c.load(opts)?;
            require_ok(check_hf(&c))?;
            let (back, homs) = hf_roundtrip(&c)?;
            report.merge(Some("HF→EA→HF"), check_hf_iso(&c, &back, &homs));
            report.merge(Some("hom identities"), check_hom_identities(&c));
            report.merge(Some("translated"), roundtrip_checks(&hf_to_ea(&c)?.category)?);
        }
        Document::Family(_) => {
            let f = load_family(doc, opts)?;
            report.merge(Some("C"), roundtrip_checks(&build_c(&f)?.category)?);
            report.merge(Some("S"), roundtrip_checks(&build_s(&f)?.category)?);
        }
        other => {
            return Err(Error::Malformed(format!("cannot translate a {:?} document", other.kind())));
        }
    }
    let text = if report.is_ok() { "round trips are isomorphisms\n".to_string() } else { String::new() };
    Ok(Outcome { text, report })
}

fn write_report(path: &Path, json: &str) -> std::io::Result<()> {
    std::fs::write(path, json)
}

fn print_report(out: &mut dyn Write, report: &Report) {
    for law in report.laws() {
        let status = match law.status {
            Status::Ok => "ok",
            Status::Fail => "FAIL",
            Status::Structural => "structural",
        };
        let _ = writeln!(out, "{status:>10}  {}", law.law);
        for w in &law.witnesses {
            let _ = writeln!(out, "            {w}");
        }
        if law.violations > law.witnesses.len() {
            let _ = writeln!(out, "            ... {} violations in total", law.violations);
        }
    }
}

fn run_input(name: &str, args: &InputArgs, out: &mut dyn Write) -> i32 {
    let opts = options(args);
    let result = read(&args.input).and_then(|doc| match name {
        "validate" => validate(&doc, opts),
        "sum" => sum(&doc, opts),
        "build-c" => build(&doc, opts, false),
        "build-s" => build(&doc, opts, true),
        "check-iso" => iso(&doc, opts),
        "full-image" => image(&doc, opts),
        _ => roundtrip(&doc, opts),
    });
    let summary = match result {
        Ok(outcome) => {
            let _ = write!(out, "{}", outcome.text);
            print_report(out, &outcome.report);
            let status = if outcome.report.is_ok() { "ok" } else { "fail" };
            CommandReport { command: name.into(), status, message: None, laws: outcome.report.entries() }
        }
        Err(Error::Law(report)) => {
            let _ = writeln!(out, "input violates a law: {}", report.summary());
            print_report(out, &report);
            CommandReport { command: name.into(), status: "fail", message: None, laws: report.entries() }
        }
        Err(e) => {
            let law = e.is_law_failure() || matches!(e, Error::Precondition(_));
            let _ = writeln!(out, "error: {e}");
            let status = if law { "fail" } else { "malformed" };
            CommandReport { command: name.into(), status, message: Some(e.to_string()), laws: Vec::new() }
        }
    };
    if let Some(path) = &args.report {
        let json = serde_json::to_string_pretty(&summary).expect("reports serialize");
        if let Err(e) = write_report(path, &json) {
            let _ = writeln!(out, "error: cannot write {}: {e}", path.display());
            return 2;
        }
    }
    summary.exit_code()
}

fn run_suite_command(args: &SuiteArgs, out: &mut dyn Write) -> i32 {
    let config = SuiteConfig {
        seed: args.seed,
        samples: args.samples,
        max_index: args.max_index,
        max_fiber: args.max_fiber,
        roundtrips: args.roundtrips,
    };
    let report = match run_suite(&config) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            return 1;
        }
    };
    let _ = writeln!(out, "{} families, {} failing", report.families, report.failing_families);
    for o in report.outcomes.iter().filter(|o| !o.report.is_ok()) {
        let _ = writeln!(out, "seed {}:", o.seed);
        print_report(out, &o.report);
    }
    if let Some(path) = &args.report {
        if let Err(e) = write_report(path, &report.to_json()) {
            let _ = writeln!(out, "error: cannot write {}: {e}", path.display());
            return 2;
        }
    }
    if report.is_ok() {
        0
    } else {
        1
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(out, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match &cli.command {
        Command::Validate(a) => run_input("validate", a, out),
        Command::Sum(a) => run_input("sum", a, out),
        Command::BuildC(a) => run_input("build-c", a, out),
        Command::BuildS(a) => run_input("build-s", a, out),
        Command::CheckIso(a) => run_input("check-iso", a, out),
        Command::FullImage(a) => run_input("full-image", a, out),
        Command::Roundtrip(a) => run_input("roundtrip", a, out),
        Command::Suite(a) => run_suite_command(a, out),
    }
}
