#![allow(dead_code)]

pub mod naive;

use std::path::{Path, PathBuf};

use mwp_core::frontend::{parse, Program};
use rand::Rng;

pub fn corpus_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

/// `(file stem, source, program)` for every `.c` file of a corpus folder,
/// sorted by name. Expected-output files are skipped.
pub fn corpus(dir: &str) -> Vec<(String, String, Program)> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus_root().join(dir))
        .unwrap_or_else(|e| panic!("corpus/{dir}: {e}"))
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "c"))
        .filter(|p| !p.to_string_lossy().contains(".expected."))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let src = std::fs::read_to_string(&p).unwrap();
            let prog = parse(&src).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
            let stem = p.file_stem().unwrap().to_string_lossy().to_string();
            (format!("{dir}/{stem}"), src, prog)
        })
        .collect()
}

pub fn all_corpus() -> Vec<(String, String, Program)> {
    ["poly", "exp", "transform", "golden", "misc", "oracle"]
        .iter()
        .flat_map(|d| corpus(d))
        .collect()
}

/// A program of roughly `target` statements: straight-line arithmetic over
/// a pool of variables interleaved with counted and while loops.
pub fn generated_program(target: usize, rng: &mut impl Rng) -> String {
    let nv = 24;
    let v = |k: usize| format!("v{k}");
    let params: Vec<String> = (0..nv).map(v).collect();
    let mut body = String::new();
    let mut count = 0;
    let mut loop_id = 0;
    let assign = |rng: &mut dyn rand::RngCore| -> String {
        let t = rng.gen_range(0..nv);
        let a = rng.gen_range(0..nv);
        let b = rng.gen_range(0..nv);
        match rng.gen_range(0..4) {
            0 => format!("{} = {} + {};", v(t), v(a), v(b)),
            1 => format!("{} = {} * 3;", v(t), v(a)),
            2 => format!("{} = {} - {};", v(t), v(a), v(b)),
            _ => format!("{} = {};", v(t), v(a)),
        }
    };
    while count < target {
        match rng.gen_range(0..10) {
            0 => {
                let n = rng.gen_range(2..5);
                body.push_str(&format!(
                    "    for (int i{loop_id} = 0; i{loop_id} < n; i{loop_id}++) {{\n"
                ));
                for _ in 0..n {
                    body.push_str(&format!("        {}\n", assign(rng)));
                }
                body.push_str("    }\n");
                loop_id += 1;
                count += n + 1;
            }
            1 => {
                body.push_str("    while (w > 0) {\n        w = w - 1;\n");
                let n = rng.gen_range(1..4);
                for _ in 0..n {
                    let t = rng.gen_range(0..nv);
                    let a = rng.gen_range(0..nv);
                    body.push_str(&format!("        {} = {};\n", v(t), v(a)));
                }
                body.push_str("    }\n");
                count += n + 2;
            }
            _ => {
                body.push_str(&format!("    {}\n", assign(rng)));
                count += 1;
            }
        }
    }
    let decls: Vec<String> = params.iter().map(|p| format!("int {p}")).collect();
    format!(
        "void big(int n, int w, {}) {{\n{body}}}\n",
        decls.join(", ")
    )
}

/// Checks the delta analysis of every function of `prog` against the
/// branch-committing oracle at every assignment. Returns the number of
/// (function, assignment) pairs compared, or `None` when the program is
/// recursive or has a function above `max_points` choices.
pub fn oracle_agrees(prog: &Program, max_points: usize) -> Result<Option<usize>, String> {
    use mwp_core::algebra::all_assignments;
    use mwp_core::analysis::analyze_program;

    // Point counts do not depend on summary values.
    let placeholder = prog
        .functions
        .iter()
        .map(|f| {
            (
                f.name.clone(),
                vec![mwp_core::algebra::MwpScalar::O; f.params.len()],
            )
        })
        .collect();
    if prog
        .functions
        .iter()
        .any(|f| naive::choice_points(f, &placeholder) > max_points)
    {
        return Ok(None);
    }
    let Some(sums) = naive::summaries(prog) else {
        return Ok(None);
    };
    let analysis = analyze_program(prog).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for f in &prog.functions {
        let r = analysis.result(&f.name).unwrap();
        let k = naive::choice_points(f, &sums);
        if r.choice_points.len() != k {
            return Err(format!(
                "{}: {} choice points, oracle has {k}",
                f.name,
                r.choice_points.len()
            ));
        }
        let got = &analysis.summaries[&f.name].result;
        if *got != sums[&f.name] {
            return Err(format!(
                "{}: summary {got:?}, oracle {:?}",
                f.name, sums[&f.name]
            ));
        }
        for sigma in all_assignments(k as u32) {
            let o = naive::analyze(f, &sigma.values(), &sums);
            let m = r.matrix.eval(&sigma).map_err(|e| e.to_string())?;
            if m != o.matrix {
                return Err(format!(
                    "{}: matrix differs at {:?}",
                    f.name,
                    sigma.values()
                ));
            }
            if r.feasible.contains(&sigma) != o.feasible() {
                return Err(format!(
                    "{}: feasibility differs at {:?} (oracle {})",
                    f.name,
                    sigma.values(),
                    o.feasible()
                ));
            }
            checked += 1;
        }
    }
    Ok(Some(checked))
}

pub mod gen {
    use mwp_core::algebra::{Delta, DeltaPoly, Monomial, MwpMatrix, MwpScalar, ALL_SCALARS};
    use rand::Rng;

    pub fn scalar(rng: &mut impl Rng) -> MwpScalar {
        ALL_SCALARS[rng.gen_range(0..5)]
    }

    /// Polynomial over choice points `0..k` with up to four monomials.
    pub fn poly(rng: &mut impl Rng, k: u32) -> DeltaPoly {
        let n = rng.gen_range(0..=4);
        DeltaPoly::from_monomials((0..n).filter_map(|_| {
            let deltas: Vec<Delta> = (0..k)
                .filter_map(|i| {
                    rng.gen_bool(0.4)
                        .then(|| Delta::new(rng.gen_range(0..3), i))
                })
                .collect();
            Monomial::new(scalar(rng), deltas)
        }))
    }

    /// Sparse-ish matrix: each entry is zero with probability one half.
    pub fn matrix(rng: &mut impl Rng, n: usize, k: u32) -> MwpMatrix {
        let vars = (0..n).map(|i| format!("x{i}")).collect();
        let mut m = MwpMatrix::zero(vars);
        for i in 0..n {
            for j in 0..n {
                if rng.gen_bool(0.5) {
                    m.set(i, j, poly(rng, k));
                }
            }
        }
        m
    }
}

/// A small random function over `x, y, z` and a loop bound `n`, mixing
/// assignments, branches, while loops and counted loops.
pub fn random_function(rng: &mut impl Rng) -> String {
    fn expr(rng: &mut dyn rand::RngCore, depth: u32) -> String {
        let leaf = |rng: &mut dyn rand::RngCore| match rng.gen_range(0..5) {
            0 => "1".to_string(),
            1 => "n".to_string(),
            k => ["x", "y", "z"][k - 2].to_string(),
        };
        if depth == 0 || rng.gen_bool(0.4) {
            return leaf(rng);
        }
        let op = ["+", "-", "*", "+"][rng.gen_range(0..4)];
        format!("({} {op} {})", expr(rng, depth - 1), expr(rng, depth - 1))
    }
    fn block(
        rng: &mut dyn rand::RngCore,
        depth: u32,
        loops: &mut u32,
        out: &mut String,
        pad: &str,
    ) {
        for _ in 0..rng.gen_range(1..=3) {
            let t = ["x", "y", "z"][rng.gen_range(0..3)];
            match if depth == 0 { 0 } else { rng.gen_range(0..6) } {
                3 => {
                    out.push_str(&format!("{pad}if (x < y) {{\n"));
                    block(rng, depth - 1, loops, out, &format!("{pad}    "));
                    out.push_str(&format!("{pad}}} else {{\n"));
                    block(rng, depth - 1, loops, out, &format!("{pad}    "));
                    out.push_str(&format!("{pad}}}\n"));
                }
                4 => {
                    out.push_str(&format!("{pad}while ({t} > 0) {{\n"));
                    block(rng, depth - 1, loops, out, &format!("{pad}    "));
                    out.push_str(&format!("{pad}}}\n"));
                }
                5 => {
                    let i = format!("i{loops}");
                    *loops += 1;
                    out.push_str(&format!("{pad}for (int {i} = 0; {i} < n; {i}++) {{\n"));
                    block(rng, depth - 1, loops, out, &format!("{pad}    "));
                    out.push_str(&format!("{pad}}}\n"));
                }
                _ => out.push_str(&format!("{pad}{t} = {};\n", expr(rng, 2))),
            }
        }
    }
    let mut body = String::new();
    let mut loops = 0;
    block(rng, 2, &mut loops, &mut body, "    ");
    format!("void f(int n, int x, int y, int z) {{\n{body}}}\n")
}
