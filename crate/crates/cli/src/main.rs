use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use extremal::algebra::realize;
use extremal::modules::{build_module, cg_su2, highest_weight_space, parse_spin, project_partial, ModuleKind};
use extremal::ordering::{canonical, enumerate, InversionGraph, NormalOrdering};
use extremal::projector::{build, classical_engine, report_text, verify, ProjectorReport, RhoMode};
use extremal::quantum::{limit_report, q_build, q_cartan_weyl};
use extremal::rational::fmt_q;
use extremal::rootsys::{build_root_system, AlgebraSpec, RootSystem};

#[derive(Parser)]
#[command(name = "projector", version, about = "Extremal projectors for Lie (super)algebras and their q-deformations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the positive roots with colors, norms and ρ values.
    Roots(Common),
    /// Normal orderings and the inversion graph.
    Orderings(Common),
    /// Build the projector truncated at a grade.
    Build(BuildArgs),
    /// Check the extremal equations of a built or stored projector.
    Verify(VerifyArgs),
    /// `projector build` and `projector verify`.
    #[command(subcommand)]
    Projector(ProjectorCommand),
    /// Matrix of the projector on a module, its image and singular columns.
    Project(ModuleArgs),
    /// Clebsch–Gordan table of su(2).
    Cg(CgArgs),
    /// Compare the quantum projector at q = 1 with the classical one on a module.
    Limit(ModuleArgs),
}

#[derive(Subcommand)]
enum ProjectorCommand {
    Build(BuildArgs),
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
    Csv,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    algebra: String,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    algebra: String,
    /// `canonical`, an index into the enumeration, or roots as `1,0;1,1;0,1`.
    #[arg(long, default_value = "canonical")]
    ordering: String,
    #[arg(long)]
    grade: u32,
    /// Build in U_q(g) with symbolic q.
    #[arg(long)]
    quantum: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print elapsed time on standard error.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// A projector written by `build`; otherwise one is built from the flags.
    file: Option<PathBuf>,
    #[arg(long)]
    algebra: Option<String>,
    #[arg(long, default_value = "canonical")]
    ordering: String,
    #[arg(long)]
    grade: Option<u32>,
    #[arg(long)]
    quantum: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct ModuleArgs {
    #[arg(long)]
    algebra: String,
    /// `defining`, `adjoint`, `spin:3/2`, or a product such as `spin:1/2*spin:1`.
    #[arg(long)]
    module: String,
    #[arg(long)]
    grade: u32,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CgArgs {
    #[arg(long)]
    j1: String,
    #[arg(long)]
    j2: String,
    /// Total spin; all allowed values when omitted.
    #[arg(long)]
    j: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<extremal::Error> for Failure {
    fn from(e: extremal::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Run = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = threads().and_then(|_| run(cli.command));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Validates `PROJECTOR_THREADS`; the library itself runs on one thread.
fn threads() -> Result<usize, Failure> {
    match std::env::var("PROJECTOR_THREADS") {
        Err(_) => Ok(1),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(Failure::Usage(format!("PROJECTOR_THREADS must be a positive integer, got {s:?}"))),
        },
    }
}

fn run(cmd: Command) -> Run {
    match cmd {
        Command::Roots(a) => roots(a),
        Command::Orderings(a) => orderings(a),
        Command::Build(a) | Command::Projector(ProjectorCommand::Build(a)) => build_cmd(a),
        Command::Verify(a) | Command::Projector(ProjectorCommand::Verify(a)) => verify_cmd(a),
        Command::Project(a) => project_cmd(a),
        Command::Cg(a) => cg_cmd(a),
        Command::Limit(a) => limit_cmd(a),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Run {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Usage(e.to_string()))
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn allow(format: Format, allowed: &[Format], what: &str) -> Run {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(Failure::Usage(format!("format not available for {what}")))
    }
}

fn spec_of(s: &str) -> Result<AlgebraSpec, Failure> {
    Ok(s.parse()?)
}

fn select_ordering(rs: &RootSystem, sel: &str) -> Result<NormalOrdering, Failure> {
    let sel = sel.trim();
    if sel == "canonical" {
        return Ok(canonical(rs)?);
    }
    if let Ok(k) = sel.parse::<usize>() {
        let all = enumerate(rs)?;
        let n = all.len();
        return all
            .into_iter()
            .nth(k)
            .ok_or_else(|| Failure::Usage(format!("ordering index {k} out of range (0..{n})")));
    }
    let coords = sel
        .split(';')
        .map(|root| {
            root.split(',')
                .map(|c| c.trim().parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| Failure::Usage(format!("bad root {root:?} in ordering")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(NormalOrdering::from_coords(&coords, rs)?)
}

fn roots(a: Common) -> Run {
    allow(a.format, &[Format::Json, Format::Text], "roots")?;
    let rs = build_root_system(&spec_of(&a.algebra)?)?;
    let text = match a.format {
        Format::Json => pretty(&rs.to_json()),
        _ => rs
            .positive
            .iter()
            .map(|r| format!("{}\t{:?}\tnorm {}\trho {}\n", r, r.color, r.norm, rs.rho_of(&r.coords)))
            .collect(),
    };
    emit(&a.out, &text)
}

fn orderings(a: Common) -> Run {
    allow(a.format, &[Format::Json, Format::Text, Format::Dot], "orderings")?;
    let rs = build_root_system(&spec_of(&a.algebra)?)?;
    let g = InversionGraph::build(&rs)?;
    let text = match a.format {
        Format::Json => pretty(&g.to_json(&rs)),
        Format::Dot => g.to_dot(&rs),
        _ => {
            let mut s: String = g
                .orderings
                .iter()
                .enumerate()
                .map(|(i, o)| format!("{i}: {}\n", o.labels(&rs).join(", ")))
                .collect();
            s.push_str(&format!("{} edges, connected: {}\n", g.edges.len(), g.is_connected()));
            s
        }
    };
    emit(&a.out, &text)
}

/// The element as JSON with a `quantum` flag, or as text.
fn built(spec: &AlgebraSpec, ordering: &str, grade: u32, quantum: bool, format: Format) -> Result<String, Failure> {
    if grade < 1 {
        return Err(Failure::Usage("grade must be at least 1".into()));
    }
    let rs = build_root_system(spec)?;
    let o = select_ordering(&rs, ordering)?;
    let (mut v, text) = if quantum {
        let e = q_cartan_weyl(spec, Some(o))?;
        let p = q_build(&e, grade)?;
        (e.to_json(&p), e.to_text(&p))
    } else {
        let e = classical_engine(spec, Some(o), RhoMode::Standard)?;
        let p = build(&e, grade, RhoMode::Standard)?;
        (e.to_json(&p), e.to_text(&p))
    };
    v["quantum"] = json!(quantum);
    Ok(match format {
        Format::Json => pretty(&v),
        _ => text,
    })
}

fn build_cmd(a: BuildArgs) -> Run {
    allow(a.format, &[Format::Json, Format::Text], "build")?;
    let start = Instant::now();
    let text = built(&spec_of(&a.algebra)?, &a.ordering, a.grade, a.quantum, a.format)?;
    if a.timing {
        eprintln!("built in {:.3}s", start.elapsed().as_secs_f64());
    }
    emit(&a.out, &text)
}

fn report_json(r: &ProjectorReport, quantum: bool) -> Value {
    let mut v = serde_json::to_value(r).expect("report serializes");
    if let Value::Object(map) = &mut v {
        map.remove("elapsed_ms");
        map.insert("quantum".into(), json!(quantum));
    }
    v
}

fn verify_element(v: &Value) -> Result<(ProjectorReport, bool), Failure> {
    let bad = |what: &str| Failure::Usage(format!("projector file lacks {what}"));
    let spec = spec_of(v.get("algebra").and_then(Value::as_str).ok_or_else(|| bad("algebra"))?)?;
    let quantum = v.get("quantum").and_then(Value::as_bool).unwrap_or(false);
    let coords: Vec<Vec<i64>> = serde_json::from_value(v.get("ordering").cloned().ok_or_else(|| bad("ordering"))?)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let rs = build_root_system(&spec)?;
    let o = NormalOrdering::from_coords(&coords, &rs)?;
    let report = if quantum {
        let e = q_cartan_weyl(&spec, Some(o))?;
        verify(&e, &e.from_json(v)?)?
    } else {
        let e = classical_engine(&spec, Some(o), RhoMode::Standard)?;
        verify(&e, &e.from_json(v)?)?
    };
    Ok((report, quantum))
}

fn verify_cmd(a: VerifyArgs) -> Run {
    allow(a.format, &[Format::Json, Format::Text], "verify")?;
    let start = Instant::now();
    let element: Value = match (&a.file, &a.algebra, a.grade) {
        (Some(path), None, None) => {
            let raw = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&raw).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        }
        (None, Some(alg), Some(grade)) => {
            let text = built(&spec_of(alg)?, &a.ordering, grade, a.quantum, Format::Json)?;
            serde_json::from_str(&text).expect("own output parses")
        }
        _ => return Err(Failure::Usage("give either a projector file or --algebra with --grade".into())),
    };
    let (report, quantum) = verify_element(&element)?;
    if a.timing {
        eprintln!("verified in {:.3}s", start.elapsed().as_secs_f64());
    }
    let text = match a.format {
        Format::Json => pretty(&report_json(&report, quantum)),
        _ => report_text(&report),
    };
    emit(&a.out, &text)?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{} residual equations", report.residuals.len())))
    }
}

fn parse_module(s: &str) -> Result<ModuleKind, Failure> {
    let parts: Vec<&str> = s.split('*').map(str::trim).collect();
    let one = |p: &str| -> Result<ModuleKind, Failure> {
        match p {
            "defining" => Ok(ModuleKind::Defining),
            "adjoint" => Ok(ModuleKind::Adjoint),
            _ => match p.strip_prefix("spin:") {
                Some(j) => Ok(ModuleKind::Spin(parse_spin(j)?)),
                None => Err(Failure::Usage(format!("unknown module {p:?}"))),
            },
        }
    };
    let mut kind = one(parts[0])?;
    for p in &parts[1..] {
        kind = ModuleKind::Tensor(Box::new(kind), Box::new(one(p)?));
    }
    Ok(kind)
}

fn rows_json(m: &extremal::linalg::Matrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| fmt_q(&m[(i, j)])).collect())
        .collect()
}

fn project_cmd(a: ModuleArgs) -> Run {
    allow(a.format, &[Format::Json, Format::Text], "project")?;
    let spec = spec_of(&a.algebra)?;
    let kind = parse_module(&a.module)?;
    let e = classical_engine(&spec, None, RhoMode::Standard)?;
    let p = build(&e, a.grade.max(1), RhoMode::Standard)?;
    let t = realize(&spec)?;
    let m = build_module(&t, &kind)?;
    let (proj, singular) = project_partial(&e, &p, &m)?;
    let hw = highest_weight_space(&t, &m);
    let agrees = proj.image == hw;
    let v = json!({
        "schema": 1,
        "algebra": spec.to_string(),
        "module": a.module,
        "grade": p.grade,
        "labels": m.labels,
        "weights": m.weights.iter().map(|w| w.iter().map(fmt_q).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "matrix": rows_json(&proj.matrix),
        "image": rows_json(&proj.image),
        "singular_columns": singular,
        "highest_weight_space": rows_json(&hw),
        "image_is_highest_weight_space": agrees,
    });
    let text = match a.format {
        Format::Json => pretty(&v),
        _ => {
            let mut s = format!("{} on {} (dimension {}), grade {}\n", spec, a.module, m.dim(), p.grade);
            for (i, row) in rows_json(&proj.matrix).iter().enumerate() {
                s.push_str(&format!("{:>12}  {}\n", m.labels[i], row.join(" ")));
            }
            s.push_str(&format!("image rank {}, singular columns {:?}, image is the highest weight space: {agrees}\n", proj.image.rows(), singular));
            s
        }
    };
    emit(&a.out, &text)
}

fn cg_cmd(a: CgArgs) -> Run {
    allow(a.format, &[Format::Json, Format::Csv], "cg")?;
    let (tj1, tj2) = (parse_spin(&a.j1)?, parse_spin(&a.j2)?);
    let totals: Vec<u32> = match &a.j {
        Some(j) => vec![parse_spin(j)?],
        None => (tj1.abs_diff(tj2)..=tj1 + tj2).step_by(2).collect(),
    };
    let e = classical_engine(&"A1".parse()?, None, RhoMode::Standard)?;
    let p = build(&e, (tj1 + tj2).max(1), RhoMode::Standard)?;
    let tables = totals
        .iter()
        .map(|tj| cg_su2(&e, &p, tj1, tj2, *tj))
        .collect::<Result<Vec<_>, _>>()?;
    let text = match a.format {
        Format::Csv => {
            let mut s = String::new();
            for (k, t) in tables.iter().enumerate() {
                let csv = t.to_csv();
                let body = if k == 0 { csv.as_str() } else { csv.split_once('\n').map_or("", |x| x.1) };
                s.push_str(body);
            }
            s
        }
        _ => pretty(&json!({
            "schema": 1,
            "convention": "Condon-Shortley",
            "tables": tables.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
        })),
    };
    emit(&a.out, &text)
}

fn limit_cmd(a: ModuleArgs) -> Run {
    allow(a.format, &[Format::Json, Format::Text], "limit")?;
    let spec = spec_of(&a.algebra)?;
    let kind = parse_module(&a.module)?;
    let r = limit_report(&spec, &kind, a.grade.max(1))?;
    let text = match a.format {
        Format::Json => pretty(&serde_json::to_value(&r).expect("report serializes")),
        _ => format!(
            "{} on {} (dimension {}), grade {}: {} columns compared, {} singular, {} poles at q = 1, {} mismatches; {}\n",
            r.algebra,
            a.module,
            r.dim,
            r.grade,
            r.compared.len(),
            r.singular_columns.len(),
            r.poles_at_one.len(),
            r.mismatches.len(),
            if r.passed { "passed" } else { "failed" }
        ),
    };
    emit(&a.out, &text)?;
    if r.passed {
        Ok(())
    } else {
        Err(Failure::Verification("limit differs from the classical projector".into()))
    }
}
