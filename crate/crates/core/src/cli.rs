//! Command-line front end.
//!
//! Exit codes: 0 success, 1 internal error, 2 parse or validation error,
//! 3 when `analyze --strict` finds a function without a feasible choice.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analysis::{analyze_program, bound_report, AnalysisResult};
use crate::depfission::{build_dep_graph, invariance_degrees, LoopInfo};
use crate::frontend::{emit, parse, walk_block, Program, Stmt};
use crate::interp::{parse_array, parse_scalars, random_store, run, Store};
use crate::transform::{apply_all, check_equivalence, Equivalence, Options};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "mwp",
    version,
    about = "Polynomial growth bounds and loop rewrites for a C subset"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute flow matrices and feasible choices.
    Analyze(Common),
    /// Print the bound on every variable under the first feasible choice.
    Bound(Common),
    /// Peel quasi-invariant statements out of loops.
    Hoist(Common),
    /// Split loops into independent loops.
    Fission(Common),
    /// Run a function on the given inputs.
    Interp(Common),
    /// Print loop dependence graphs.
    Depgraph(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Input files.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Restrict to one function (the entry function for `interp`).
    #[arg(long)]
    pub function: Option<String>,
    /// Wrap independent fissioned loops in OpenMP parallel sections.
    #[arg(long)]
    pub pragma: bool,
    /// Exit with code 3 when some function has no feasible choice.
    #[arg(long)]
    pub strict: bool,
    #[arg(long, default_value_t = 1_000_000)]
    pub fuel: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Scalar inputs, e.g. `x=3,y=4`.
    #[arg(long)]
    pub input: Option<String>,
    /// Array contents, e.g. `a=0,0,0`; repeatable.
    #[arg(long)]
    pub array: Vec<String>,
    /// Also print dependence graphs of rewritten loops on standard error.
    #[arg(long)]
    pub dump_depgraph: bool,
    /// Check rewrites on this many random inputs.
    #[arg(long, default_value_t = 0)]
    pub verify: usize,
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn main_with_args<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let out = run_cli(args);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}

pub fn run_cli<I: IntoIterator<Item = OsString>>(args: I) -> Output {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Output {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let (cmd, common) = match &cli.command {
        Command::Analyze(c) => (Cmd::Analyze, c),
        Command::Bound(c) => (Cmd::Bound, c),
        Command::Hoist(c) => (Cmd::Hoist, c),
        Command::Fission(c) => (Cmd::Fission, c),
        Command::Interp(c) => (Cmd::Interp, c),
        Command::Depgraph(c) => (Cmd::Depgraph, c),
    };
    if common.format == Format::Dot && cmd != Cmd::Depgraph {
        return Output {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: "error: --format dot is only valid for depgraph\n".into(),
        };
    }
    let results: Vec<Output> = common
        .files
        .par_iter()
        .map(|path| run_file(cmd, common, path))
        .collect();
    let mut out = Output {
        code: EXIT_OK,
        stdout: String::new(),
        stderr: String::new(),
    };
    for r in results {
        out.code = out.code.max(r.code);
        out.stdout.push_str(&r.stdout);
        out.stderr.push_str(&r.stderr);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cmd {
    Analyze,
    Bound,
    Hoist,
    Fission,
    Interp,
    Depgraph,
}

struct FileOut {
    stdout: String,
    stderr: String,
    code: i32,
}

impl FileOut {
    fn fail(code: i32, msg: String) -> FileOut {
        FileOut {
            stdout: String::new(),
            stderr: msg,
            code,
        }
    }
}

fn run_file(cmd: Cmd, c: &Common, path: &PathBuf) -> Output {
    let name = path.display().to_string();
    let r = match std::fs::read_to_string(path) {
        Err(e) => FileOut::fail(EXIT_INPUT, format!("{name}: {e}\n")),
        Ok(src) => match parse(&src) {
            Err(e) => FileOut::fail(EXIT_INPUT, format!("{name}:{e}\n")),
            Ok(p) => match cmd {
                Cmd::Analyze | Cmd::Bound => analyze_cmd(cmd, c, &name, &p),
                Cmd::Hoist | Cmd::Fission => transform_cmd(cmd, c, &name, &p),
                Cmd::Interp => interp_cmd(c, &name, &p),
                Cmd::Depgraph => depgraph_cmd(c, &name, &p),
            },
        },
    };
    Output {
        code: r.code,
        stdout: r.stdout,
        stderr: r.stderr,
    }
}

fn selected<'a>(
    c: &Common,
    name: &str,
    results: &'a [AnalysisResult],
) -> Result<Vec<&'a AnalysisResult>, FileOut> {
    match &c.function {
        None => Ok(results.iter().collect()),
        Some(f) => match results.iter().find(|r| &r.function == f) {
            Some(r) => Ok(vec![r]),
            None => Err(FileOut::fail(
                EXIT_INPUT,
                format!("{name}: no function `{f}`\n"),
            )),
        },
    }
}

fn analyze_cmd(cmd: Cmd, c: &Common, name: &str, p: &Program) -> FileOut {
    let analysis = match analyze_program(p) {
        Ok(a) => a,
        Err(e) => return FileOut::fail(EXIT_INTERNAL, format!("{name}: {e}\n")),
    };
    let results = match selected(c, name, &analysis.results) {
        Ok(r) => r,
        Err(e) => return e,
    };
    let infeasible = results.iter().any(|r| !r.is_feasible());
    let mut out = String::new();
    match (cmd, c.format) {
        (Cmd::Analyze, Format::Json) => {
            let v = serde_json::json!({
                "file": name,
                "polynomial": !infeasible,
                "functions": results.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            });
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"));
        }
        (Cmd::Analyze, _) => {
            for r in &results {
                let k = r.choice_points.len();
                match r.feasible.witness() {
                    Some(sigma) => {
                        let _ = writeln!(
                            out,
                            "{name}: {}: polynomial ({k} choice point(s), witness {:?})",
                            r.function,
                            sigma.values()
                        );
                        if let Ok(rep) = bound_report(r, &sigma) {
                            for b in &rep.vars {
                                let _ = writeln!(out, "    {b}");
                            }
                        }
                    }
                    None => {
                        let _ = writeln!(
                            out,
                            "{name}: {}: no polynomial bound ({k} choice point(s), none feasible)",
                            r.function
                        );
                    }
                }
            }
        }
        (Cmd::Bound, fmt) => {
            let mut reports = serde_json::Map::new();
            for r in &results {
                match r.feasible.witness().map(|s| bound_report(r, &s)) {
                    Some(Ok(rep)) => {
                        if fmt == Format::Json {
                            reports.insert(
                                r.function.clone(),
                                serde_json::to_value(&rep).expect("json"),
                            );
                        } else {
                            let _ = writeln!(out, "{name}: {}:", r.function);
                            for b in &rep.vars {
                                let _ = writeln!(out, "    {b}");
                            }
                        }
                    }
                    _ => {
                        if fmt == Format::Json {
                            reports.insert(r.function.clone(), serde_json::Value::Null);
                        } else {
                            let _ = writeln!(out, "{name}: {}: no feasible choice", r.function);
                        }
                    }
                }
            }
            if fmt == Format::Json {
                let v = serde_json::json!({ "file": name, "bounds": reports });
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"));
            }
        }
        _ => unreachable!(),
    }
    FileOut {
        stdout: out,
        stderr: String::new(),
        code: if c.strict && infeasible {
            EXIT_INFEASIBLE
        } else {
            EXIT_OK
        },
    }
}

fn transform_cmd(cmd: Cmd, c: &Common, name: &str, p: &Program) -> FileOut {
    let opts = Options {
        hoist: cmd == Cmd::Hoist,
        fission: cmd == Cmd::Fission,
        pragmas: c.pragma,
    };
    let (rewritten, rewrites) = match apply_all(p, opts) {
        Ok(r) => r,
        Err(e) => return FileOut::fail(EXIT_INTERNAL, format!("{name}: {e}\n")),
    };
    let mut stderr = String::new();
    if c.dump_depgraph {
        for r in &rewrites {
            if let Ok(info) = LoopInfo::of(&r.original) {
                stderr.push_str(&build_dep_graph(info.body).to_dot(&format!(
                    "{}@{}",
                    r.function,
                    r.loop_span()
                )));
            }
        }
    }
    let mut code = EXIT_OK;
    if c.verify > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
        let entry = match c
            .function
            .as_deref()
            .or(p.entry_function().map(|f| f.name.as_str()))
        {
            Some(e) => e.to_string(),
            None => String::new(),
        };
        if let Some(f) = p.function(&entry) {
            let mut bad = 0;
            for _ in 0..c.verify {
                let inputs = random_store(f, &mut rng, -4, 12);
                let eq = check_equivalence(p, &rewritten, &entry, &inputs, c.fuel);
                if !eq.holds() {
                    bad += 1;
                    if bad == 1 {
                        let _ = writeln!(
                            stderr,
                            "{name}: rewrite diverges on {:?}: {:?}",
                            inputs,
                            summarize(&eq)
                        );
                    }
                }
            }
            let _ = writeln!(
                stderr,
                "{name}: verified {} input(s), {bad} divergence(s)",
                c.verify
            );
            if bad > 0 {
                code = EXIT_INTERNAL;
            }
        }
    }
    let text = emit(&rewritten);
    let stdout = match c.format {
        Format::Json => {
            let v = serde_json::json!({
                "file": name,
                "program": text,
                "rewrites": rewrites.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
        _ => {
            for r in &rewrites {
                let _ = writeln!(stderr, "{name}:{}: {}", r.loop_span(), r.report);
            }
            text
        }
    };
    FileOut {
        stdout,
        stderr,
        code,
    }
}

fn summarize(eq: &Equivalence) -> String {
    match eq {
        Equivalence::Differ {
            original,
            rewritten,
        } => {
            format!("original {:?} vs rewritten {:?}", original, rewritten)
        }
        other => format!("{other:?}"),
    }
}

fn interp_cmd(c: &Common, name: &str, p: &Program) -> FileOut {
    let entry = match c
        .function
        .clone()
        .or_else(|| p.entry_function().map(|f| f.name.clone()))
    {
        Some(e) => e,
        None => return FileOut::fail(EXIT_INPUT, format!("{name}: no function to run\n")),
    };
    let mut inputs = Store::new();
    if let Some(s) = &c.input {
        if let Err(e) = parse_scalars(s, &mut inputs) {
            return FileOut::fail(EXIT_INPUT, format!("{name}: --input: {e}\n"));
        }
    }
    for a in &c.array {
        if let Err(e) = parse_array(a, &mut inputs) {
            return FileOut::fail(EXIT_INPUT, format!("{name}: --array: {e}\n"));
        }
    }
    match run(p, &entry, &inputs, c.fuel) {
        Ok(r) => {
            let mut v = serde_json::to_value(&r.final_store).expect("json");
            v["steps"] = serde_json::json!(r.steps);
            FileOut {
                stdout: format!("{}\n", serde_json::to_string_pretty(&v).expect("json")),
                stderr: String::new(),
                code: EXIT_OK,
            }
        }
        Err(e) => FileOut::fail(EXIT_INPUT, format!("{name}: {e}\n")),
    }
}

fn loops_of(block: &[Stmt]) -> Vec<&Stmt> {
    let mut out = Vec::new();
    walk_block(block, &mut |s| {
        if s.is_loop() {
            out.push(s);
        }
    });
    out
}

fn depgraph_cmd(c: &Common, name: &str, p: &Program) -> FileOut {
    let mut out = String::new();
    let mut json = Vec::new();
    for f in &p.functions {
        if c.function.as_ref().is_some_and(|n| n != &f.name) {
            continue;
        }
        for lp in loops_of(&f.body) {
            let info = LoopInfo::of(lp).expect("loop");
            let g = build_dep_graph(info.body);
            let label = format!("{}@{}", f.name, lp.span);
            match c.format {
                Format::Json => {
                    let d = invariance_degrees(&g, &info);
                    json.push(serde_json::json!({
                        "function": f.name,
                        "loop_span": lp.span.to_string(),
                        "nodes": g.nodes.iter().map(|n| n.0).collect::<Vec<_>>(),
                        "edges": g.edges.iter().map(|e| serde_json::json!({
                            "src": g.nodes[e.src].0,
                            "dst": g.nodes[e.dst].0,
                            "kind": e.kind,
                            "carried": e.carried,
                        })).collect::<Vec<_>>(),
                        "degrees": d.nodes.iter().zip(&d.degrees)
                            .map(|(n, x)| (n.to_string(), serde_json::json!(x)))
                            .collect::<serde_json::Map<_, _>>(),
                    }));
                }
                _ => out.push_str(&g.to_dot(&label)),
            }
        }
    }
    if c.format == Format::Json {
        let v = serde_json::json!({ "file": name, "loops": json });
        out = format!("{}\n", serde_json::to_string_pretty(&v).expect("json"));
    }
    FileOut {
        stdout: out,
        stderr: String::new(),
        code: EXIT_OK,
    }
}
