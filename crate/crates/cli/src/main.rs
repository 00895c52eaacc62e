// SPDX-License-Identifier: MIT OR Apache-2.0

//! `cluster-ty`: validate Cartan matrices, build quivers and schedules, and
//! check T/Y-relations along mutation runs.
//!
//! Exit status is 0 when every requested check passes, 1 on a verification
//! failure (including a matrix that is not tamely laced) and 2 on invalid
//! input. Results go to stdout, diagnostics to stderr.

use clap::{Args, Parser, Subcommand, ValueEnum};
use cluster_ty::builder::{build, prepare, Built, EmbedKind, Embedding, Prepared};
use cluster_ty::cartan::{validate_cartan, CartanData, CartanError, CartanInput, SignColoring};
use cluster_ty::verify::{
    periodicity_of, run_with, verify_t, verify_y, Report, RunConfig, RunMode, RunTrace, Window,
};
use serde_json::{json, Value};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "cluster-ty", version, about = "T/Y-system periodicity via cluster mutation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a Cartan matrix and report its symmetrizer.
    CheckCartan(Common),
    /// Build the annotated quiver at the given level.
    BuildQuiver(Common),
    /// Print the composite mutation batches of one period.
    Schedule(Common),
    /// Run the schedule over the window and print the labelled variables.
    Run(Common),
    /// Check every T-relation in the window.
    VerifyT(Common),
    /// Check every Y-relation in the window.
    VerifyY(Common),
    /// Check that one period of batches returns the quiver to itself.
    VerifyPeriodicity(Common),
    /// Quiver, schedule and index labels of one period in one document.
    Export(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Cartan matrix as inline JSON, e.g. "[[2,-1],[-5,2]]", or an object
    /// {"cartan": ..., "signs": ..., "colors": ...}.
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    matrix: Option<String>,
    /// Path to a JSON file with the same content as --matrix.
    #[arg(long)]
    input: Option<std::path::PathBuf>,
    /// Level ℓ ≥ 2.
    #[arg(long, default_value_t = 2)]
    level: i64,
    /// Time window in units of 1/t: "R" for |n| ≤ R or "LO:HI". Defaults to
    /// one period each way.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Largest allowed size of one variable, in polynomial terms.
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ModeArg {
    Trivial,
    Semifield,
    WithCoefficients,
}

impl From<ModeArg> for RunMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Trivial => RunMode::Trivial,
            ModeArg::Semifield => RunMode::Semifield,
            ModeArg::WithCoefficients => RunMode::WithCoefficients,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Dot,
    Text,
}

/// Outcome of a command, mapped to the exit status.
enum Failure {
    Invalid(String),
    Check(String),
}

type Outcome = Result<String, (Failure, Option<String>)>;

fn invalid<E: std::fmt::Display>(e: E) -> (Failure, Option<String>) {
    (Failure::Invalid(e.to_string()), None)
}

fn render(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON values serialise")
}

struct Input {
    parsed: CartanInput,
    cd: CartanData,
}

impl Input {
    fn load(c: &Common) -> Result<Result<Self, CartanError>, String> {
        let text = match (&c.matrix, &c.input) {
            (Some(m), _) => m.clone(),
            (None, Some(p)) => std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?,
            (None, None) => return Err("one of --matrix or --input is required".into()),
        };
        let parsed = CartanInput::parse(&text).map_err(|e| e.to_string())?;
        Ok(validate_cartan(&parsed.cartan).map(|cd| Input { parsed, cd }))
    }

    fn has_overrides(&self) -> bool {
        self.parsed.signs.is_some() || self.parsed.colors.is_some()
    }

    /// The quiver data: explicit sign/colour overrides are honoured,
    /// otherwise the default assignment or the extended diagram is used.
    fn prepare(&self, level: i64) -> Result<Prepared, (Failure, Option<String>)> {
        if self.has_overrides() {
            let sc = self.parsed.coloring_for(&self.cd).map_err(invalid)?;
            let built = build(&self.cd, &sc, level).map_err(invalid)?;
            return Ok(Prepared { data: self.cd.clone(), coloring: sc, extension: None, built });
        }
        prepare(&self.cd, level).map_err(invalid)
    }
}

fn load_valid(c: &Common) -> Result<Input, (Failure, Option<String>)> {
    match Input::load(c).map_err(|e| (Failure::Invalid(e), None))? {
        Ok(i) if i.cd.is_tamely_laced() => Ok(i),
        Ok(_) => Err(invalid("Cartan matrix is not tamely laced")),
        Err(e) => Err(invalid(e)),
    }
}

fn diag(cd: &CartanData) -> String {
    let d: Vec<String> = cd.ds().iter().map(i64::to_string).collect();
    format!("D=diag({})", d.join(","))
}

fn check_cartan(c: &Common) -> Outcome {
    let input = Input::load(c).map_err(|e| (Failure::Invalid(e), None))?;
    let cd = match input {
        Ok(i) => i.cd,
        Err(e @ (CartanError::NotCartan(_) | CartanError::InvalidInput(_))) => return Err(invalid(e)),
        Err(e) => {
            let summary = format!("not {}", e.to_string().trim_start_matches("matrix is not "));
            let doc = json!({ "valid": false, "summary": summary, "reason": e.to_string() });
            return Err((Failure::Check(summary.clone()), Some(text_or_json(c.format, &summary, &doc))));
        }
    };
    let tame = cd.is_tamely_laced();
    let summary = if tame {
        format!("tamely laced, {}, t={}", diag(&cd), cd.t())
    } else {
        "not tamely laced".to_string()
    };
    let doc = json!({
        "valid": true,
        "tamely_laced": tame,
        "d": cd.ds(),
        "t": cd.t(),
        "rank": cd.rank(),
        "indecomposable": cd.is_indecomposable(),
        "summary": summary,
    });
    let out = text_or_json(c.format, &summary, &doc);
    if tame {
        Ok(out)
    } else {
        Err((Failure::Check(summary), Some(out)))
    }
}

fn text_or_json(format: Format, text: &str, doc: &Value) -> String {
    match format {
        Format::Text => format!("{text}\n"),
        _ => render(doc) + "\n",
    }
}

fn vertex_names(p: &Prepared) -> Option<Vec<String>> {
    p.extension.as_ref().map(|e| (0..e.data.rank()).map(|i| e.vertex_name(i)).collect())
}

fn build_quiver_cmd(c: &Common) -> Outcome {
    let input = load_valid(c)?;
    let p = input.prepare(c.level)?;
    let q = &p.built.quiver;
    Ok(match c.format {
        Format::Dot => q.to_dot(),
        Format::Json => {
            let mut doc = json!({ "level": c.level, "d": p.data.ds(), "t": p.data.t(), "quiver": q.to_json() });
            if let Some(names) = vertex_names(&p) {
                doc["extended_vertices"] = json!(names);
            }
            render(&doc) + "\n"
        }
        Format::Text => {
            let mut s = format!("{} vertices, {} arrows\n", q.len(), q.arrows().len());
            for (i, l) in q.labels().iter().enumerate() {
                s.push_str(&format!("{l} {} {}\n", q.sign(i).symbol(), q.ctype(i).symbol()));
            }
            for (i, j, m) in q.arrows() {
                s.push_str(&format!("{} -> {} x{m}\n", q.label(i), q.label(j)));
            }
            s
        }
    })
}

fn schedule_json(built: &Built) -> Value {
    let batches: Vec<Vec<String>> =
        built.schedule.batches().iter().map(|b| b.iter().map(ToString::to_string).collect()).collect();
    json!({ "t": built.schedule.t(), "period": built.schedule.period(), "batches": batches })
}

fn schedule_cmd(c: &Common) -> Outcome {
    let input = load_valid(c)?;
    let p = input.prepare(c.level)?;
    Ok(match c.format {
        Format::Text => {
            let mut s = String::new();
            for (n, b) in p.built.schedule.batches().iter().enumerate() {
                let names: Vec<String> = b.iter().map(ToString::to_string).collect();
                s.push_str(&format!("n={n}: {}\n", names.join(" ")));
            }
            s
        }
        _ => render(&schedule_json(&p.built)) + "\n",
    })
}

fn parse_window(c: &Common, t: i64) -> Result<Window, (Failure, Option<String>)> {
    let Some(w) = &c.window else { return Ok(Window::default_for(t)) };
    let bad = || invalid(format!("bad window {w:?}: expected R or LO:HI"));
    match w.split_once(':') {
        Some((lo, hi)) => {
            let lo = lo.trim().parse().map_err(|_| bad())?;
            let hi = hi.trim().parse().map_err(|_| bad())?;
            Ok(Window::new(lo, hi))
        }
        None => {
            let r: i64 = w.trim().parse().map_err(|_| bad())?;
            if r < 0 {
                return Err(bad());
            }
            Ok(Window::symmetric(r))
        }
    }
}

fn labelled_data(input: &Input, c: &Common) -> Result<(CartanData, SignColoring), (Failure, Option<String>)> {
    let p = input.prepare(c.level)?;
    if p.is_halved() {
        return Err(invalid("T/Y labels are not available for extended diagrams with halved columns"));
    }
    Ok((p.data, p.coloring))
}

fn trace(c: &Common, default_mode: RunMode) -> Result<RunTrace, (Failure, Option<String>)> {
    let input = load_valid(c)?;
    let (cd, sc) = labelled_data(&input, c)?;
    let window = parse_window(c, cd.t())?;
    let mode = c.mode.map_or(default_mode, RunMode::from);
    run_with(&cd, &sc, c.level, RunConfig { window, mode, budget: c.budget }).map_err(invalid)
}

fn run_cmd(c: &Common) -> Outcome {
    let tr = trace(c, RunMode::Trivial)?;
    let u = &tr.universe;
    let x: serde_json::Map<String, Value> =
        tr.labeled_x.iter().map(|(k, v)| (k.to_string(), json!(v.to_text(u)))).collect();
    let y: serde_json::Map<String, Value> =
        tr.labeled_y.iter().map(|(k, v)| (k.to_string(), json!(v.factored_text(u)))).collect();
    Ok(match c.format {
        Format::Text => {
            let mut s = format!(
                "window [{}, {}], {} x labels, {} y labels{}\n",
                tr.window.lo,
                tr.window.hi,
                x.len(),
                y.len(),
                if tr.budget_hit { ", budget exceeded" } else { "" }
            );
            for (k, v) in x.iter().chain(y.iter().map(|(k, v)| (k, v))) {
                s.push_str(&format!("{k} = {}\n", v.as_str().unwrap_or_default()));
            }
            s
        }
        _ => {
            let doc = json!({
                "mode": tr.mode,
                "window": [tr.window.lo, tr.window.hi],
                "budget_exceeded": tr.budget_hit,
                "x": x,
                "y": y,
            });
            render(&doc) + "\n"
        }
    })
}

fn report_out(format: Format, report: &Report) -> Outcome {
    let out = match format {
        Format::Text => report.to_text(),
        _ => render(&report.to_json()) + "\n",
    };
    if report.passed() {
        Ok(out)
    } else {
        Err((Failure::Check(format!("{} failed", report.check)), Some(out)))
    }
}

fn verify_t_cmd(c: &Common) -> Outcome {
    if c.mode == Some(ModeArg::Semifield) {
        return Err(invalid("verify-t needs cluster variables: use --mode trivial or with-coefficients"));
    }
    let tr = trace(c, RunMode::Trivial)?;
    report_out(c.format, &verify_t(&tr))
}

fn verify_y_cmd(c: &Common) -> Outcome {
    if c.mode == Some(ModeArg::Trivial) {
        return Err(invalid("verify-y needs coefficients: use --mode semifield or with-coefficients"));
    }
    let tr = trace(c, RunMode::Semifield)?;
    report_out(c.format, &verify_y(&tr))
}

fn verify_periodicity_cmd(c: &Common) -> Outcome {
    let input = load_valid(c)?;
    let p = input.prepare(c.level)?;
    let report = periodicity_of(&p.built, p.data.t(), c.level).map_err(invalid)?;
    report_out(c.format, &report)
}

fn export_cmd(c: &Common) -> Outcome {
    let input = load_valid(c)?;
    let p = input.prepare(c.level)?;
    if c.format == Format::Dot {
        return Ok(p.built.quiver.to_dot());
    }
    let mut doc = json!({
        "cartan": p.data.matrix(),
        "d": p.data.ds(),
        "t": p.data.t(),
        "level": c.level,
        "quiver": p.built.quiver.to_json(),
        "schedule": schedule_json(&p.built),
    });
    if let Some(names) = vertex_names(&p) {
        doc["extended_vertices"] = json!(names);
    }
    if !p.is_halved() {
        let mut labels = serde_json::Map::new();
        for (key, kind) in [("g", EmbedKind::G), ("g_prime", EmbedKind::GPrime)] {
            let e = Embedding::new(p.data.clone(), p.coloring.clone(), c.level, kind, p.built.schedule.clone());
            let mut rows = Vec::new();
            for n in 0..p.built.schedule.period() as i64 {
                for l in p.built.schedule.batch(n) {
                    if let Ok(idx) = e.inverse(l, n) {
                        rows.push(json!({ "step": n, "vertex": l.to_string(), "index": idx.to_string() }));
                    }
                }
            }
            labels.insert(key.into(), Value::Array(rows));
        }
        doc["labels"] = Value::Object(labels);
    }
    Ok(match c.format {
        Format::Text => {
            format!(
                "{} vertices, {} arrows, period {} batches\n",
                p.built.quiver.len(),
                p.built.quiver.arrows().len(),
                p.built.schedule.period()
            )
        }
        _ => render(&doc) + "\n",
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::CheckCartan(c)
        | Command::BuildQuiver(c)
        | Command::Schedule(c)
        | Command::Run(c)
        | Command::VerifyT(c)
        | Command::VerifyY(c)
        | Command::VerifyPeriodicity(c)
        | Command::Export(c) => c,
    };
    if common.level < 2 {
        eprintln!("error: level must be at least 2, got {}", common.level);
        return ExitCode::from(2);
    }
    let outcome = match &cli.command {
        Command::CheckCartan(c) => check_cartan(c),
        Command::BuildQuiver(c) => build_quiver_cmd(c),
        Command::Schedule(c) => schedule_cmd(c),
        Command::Run(c) => run_cmd(c),
        Command::VerifyT(c) => verify_t_cmd(c),
        Command::VerifyY(c) => verify_y_cmd(c),
        Command::VerifyPeriodicity(c) => verify_periodicity_cmd(c),
        Command::Export(c) => export_cmd(c),
    };
    match outcome {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err((failure, out)) => {
            let printed = out.is_some();
            if let Some(out) = out {
                print!("{out}");
            }
            match failure {
                Failure::Invalid(msg) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(2)
                }
                Failure::Check(msg) => {
                    if !printed {
                        eprintln!("{msg}");
                    }
                    ExitCode::from(1)
                }
            }
        }
    }
}
