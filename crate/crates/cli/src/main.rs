mod report;

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use lpa_core::classify::sign_question_instance;
use lpa_core::moves::apply_move_with_report;
use lpa_core::verify::{run_suite, SuiteOptions, DEFAULT_SEED};
use lpa_core::{
    builtin, compare, invariants, k0_presentation, parse_expression, parse_graph, render_graph, CohnAlgebra, Graph,
    Move,
};
use serde_json::{json, Value};

use report::Report;

/// Invariants, moves and algebra for Leavitt path algebras of finite graphs.
///
/// GRAPH arguments are paths to graph files or `builtin:NAME`.
#[derive(Parser)]
#[command(name = "lpa", version)]
struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// K0, determinant and SPI status of a graph.
    Info { graph: String },
    /// Whether the graph is SPI, with the reasons when it is not.
    Spi { graph: String },
    /// Pointed K0 group and the class of every vertex.
    K0 { graph: String },
    /// det(I - A^t), or the presentation shape when the graph has sinks.
    Det { graph: String },
    /// Apply a graph move and check its effect on the invariants.
    Move {
        #[arg(value_enum)]
        kind: MoveKind,
        graph: String,
        /// Vertex for cuntz-splice, double-cuntz-splice and add-source.
        #[arg(long)]
        at: Option<String>,
        /// Comma-separated completion set V for cohn (may be empty).
        #[arg(long)]
        complete_at: Option<String>,
        /// Write the resulting graph here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the invariants of two graphs.
    Classify { first: String, second: String },
    /// Normal form of an expression in L(E), or in C(E, V) with --complete-at.
    Algebra {
        graph: String,
        expression: String,
        /// Comma-separated completion set V (may be empty).
        #[arg(long)]
        complete_at: Option<String>,
    },
    /// Run the built-in verification suite.
    VerifyPaper {
        /// Run only this block.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Negate every determinant; the suite must then fail.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MoveKind {
    CuntzSplice,
    DoubleCuntzSplice,
    Cohn,
    AddSource,
}

fn load_graph(arg: &str) -> Result<Graph> {
    if let Some(name) = arg.strip_prefix("builtin:") {
        return Ok(builtin(name)?);
    }
    let text = fs::read_to_string(arg).with_context(|| format!("cannot read {arg}"))?;
    parse_graph(&text).with_context(|| format!("cannot parse {arg}"))
}

fn vertex_list(text: &str) -> Vec<String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

fn info(arg: &str) -> Result<Report> {
    let g = load_graph(arg)?;
    let inv = invariants(&g);
    let mut r = Report::new("info", json!({ "graph": arg }));
    r.line(inv.to_string());
    for failure in &inv.spi.failures {
        r.line(format!("  {failure}"));
    }
    r.outputs = inv.to_json();
    Ok(r)
}

fn spi(arg: &str) -> Result<Report> {
    let g = load_graph(arg)?;
    let report = lpa_core::graph::is_spi(&g);
    let failures: Vec<String> = report.failures.iter().map(ToString::to_string).collect();
    let mut r = Report::new("spi", json!({ "graph": arg }));
    r.line(format!("SPI={}", if report.is_spi { "yes" } else { "no" }));
    for f in &failures {
        r.line(format!("  {f}"));
    }
    r.outputs = json!({ "is_spi": report.is_spi, "failures": failures });
    Ok(r)
}

fn k0(arg: &str) -> Result<Report> {
    let g = load_graph(arg)?;
    let p = k0_presentation(&g);
    let mut r = Report::new("k0", json!({ "graph": arg }));
    r.line(p.group.to_string());
    let mut classes = serde_json::Map::new();
    for (v, c) in p.vertices.iter().zip(&p.vertex_classes) {
        r.line(format!("  [{v}] = {c}"));
        classes.insert(v.clone(), Value::String(c.to_string()));
    }
    r.outputs = json!({
        "group": p.group.render_group(),
        "unit": p.group.unit_class.to_string(),
        "rendered": p.group.to_string(),
        "vertex_classes": classes,
    });
    Ok(r)
}

fn det(arg: &str) -> Result<Report> {
    let g = load_graph(arg)?;
    let inv = invariants(&g);
    let mut r = Report::new("det", json!({ "graph": arg }));
    r.line(format!("det={}", inv.determinant_text()));
    r.outputs = json!({
        "determinant": inv.determinant.as_ref().map(ToString::to_string),
        "presentation_shape": [inv.shape.0, inv.shape.1],
    });
    Ok(r)
}

fn apply_move(
    kind: MoveKind,
    arg: &str,
    at: Option<String>,
    complete_at: Option<String>,
    out: Option<PathBuf>,
) -> Result<Report> {
    let g = load_graph(arg)?;
    let need_at = |name: &str| at.clone().with_context(|| format!("{name} needs --at <vertex>"));
    let m = match kind {
        MoveKind::CuntzSplice => Move::CuntzSplice {
            at: need_at("cuntz-splice")?,
        },
        MoveKind::DoubleCuntzSplice => Move::DoubleCuntzSplice {
            at: need_at("double-cuntz-splice")?,
        },
        MoveKind::AddSource => Move::AddSource {
            at: need_at("add-source")?,
        },
        MoveKind::Cohn => match complete_at {
            Some(list) => Move::Cohn {
                complete_at: vertex_list(&list),
            },
            None => bail!("cohn needs --complete-at <v1,v2,...>"),
        },
    };
    let report = apply_move_with_report(&g, &m)?;
    let rendered = render_graph(&report.output);
    let mut inputs = json!({ "graph": arg, "move": m.name(), "parameters": m.parameters() });
    if let Some(path) = &out {
        fs::write(path, &rendered).with_context(|| format!("cannot write {}", path.display()))?;
        inputs["out"] = json!(path.display().to_string());
    }
    let mut r = Report::new("move", inputs);
    r.line(m.to_string());
    r.line(format!("before: {}", report.before));
    r.line(format!("after:  {}", report.after));
    match &out {
        Some(path) => r.line(format!("wrote {}", path.display())),
        None => r.line(rendered.trim_end()),
    }
    r.outputs = report.to_json();
    r.checks = report.checks;
    Ok(r)
}

fn classify(first: &str, second: &str) -> Result<Report> {
    let (g, h) = (load_graph(first)?, load_graph(second)?);
    let verdict = compare(&g, &h);
    let mut r = Report::new("classify", json!({ "first": first, "second": second }));
    r.line(format!("verdict: {}", verdict.tag));
    r.line(verdict.justification.clone());
    r.line(format!("first:  {}", verdict.left));
    r.line(format!("second: {}", verdict.right));
    let mut outputs = verdict.to_json();
    if let Ok(signs) = sign_question_instance(&g, &h) {
        r.line(signs.to_string());
        outputs["signs"] = json!(signs.to_string());
    }
    r.outputs = outputs;
    Ok(r)
}

fn algebra(arg: &str, expression: &str, complete_at: Option<String>) -> Result<Report> {
    let g = load_graph(arg)?;
    let ctx = match &complete_at {
        Some(list) => {
            let ids = vertex_list(list);
            let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
            CohnAlgebra::new(g, &refs)?
        }
        None => CohnAlgebra::leavitt(g),
    };
    let x = parse_expression(&ctx, expression)?;
    let mut r = Report::new(
        "algebra",
        json!({ "graph": arg, "expression": expression, "complete_at": complete_at.as_deref().map(vertex_list) }),
    );
    r.line(x.to_string());
    r.outputs = json!({ "normal_form": x.to_string(), "terms": x.len() });
    Ok(r)
}

fn verify_paper(filter: Option<String>, seed: u64, inject_fault: bool) -> Result<Report> {
    let options = SuiteOptions {
        filter: filter.clone(),
        inject_sign_fault: inject_fault,
        seed,
    };
    let blocks = run_suite(&options)?;
    let mut r = Report::new("verify-paper", json!({ "filter": filter, "seed": seed }));
    let mut summary = Vec::new();
    for block in blocks {
        let status = if block.passed() { "pass" } else { "fail" };
        r.line(format!("{}: {status} ({} checks)", block.name, block.checks.len()));
        summary.push(json!({ "block": block.name, "status": status, "checks": block.checks.len() }));
        r.checks.extend(block.checks.into_iter().map(|mut c| {
            c.name = format!("{}: {}", block.name, c.name);
            c
        }));
    }
    r.outputs = json!({ "blocks": summary });
    Ok(r)
}

fn run(cli: Cli) -> Result<Report> {
    match cli.command {
        Command::Info { graph } => info(&graph),
        Command::Spi { graph } => spi(&graph),
        Command::K0 { graph } => k0(&graph),
        Command::Det { graph } => det(&graph),
        Command::Move {
            kind,
            graph,
            at,
            complete_at,
            out,
        } => apply_move(kind, &graph, at, complete_at, out),
        Command::Classify { first, second } => classify(&first, &second),
        Command::Algebra {
            graph,
            expression,
            complete_at,
        } => algebra(&graph, &expression, complete_at),
        Command::VerifyPaper {
            filter,
            seed,
            inject_fault,
        } => verify_paper(filter, seed, inject_fault),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(report) => {
            let text = if json {
                format!("{:#}\n", report.to_json())
            } else {
                report.render_text()
            };
            let mut stdout = std::io::stdout().lock();
            // A closed pipe is not worth a panic.
            let _ = stdout.write_all(text.as_bytes());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
