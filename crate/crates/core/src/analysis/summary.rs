use std::collections::{BTreeMap, BTreeSet};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::Serialize;

use super::{AnalysisError, AnalysisResult, Analyzer, FeasibleSet, MwpVector};
use crate::algebra::{DeltaPoly, MwpScalar};
use crate::frontend::{walk_block, FunctionDef, LValue, Program, StmtKind};

/// How each parameter flows into a function's returned value, with choices
/// erased by the least upper bound over feasible assignments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunctionSummary {
    pub params: Vec<String>,
    /// One flow class per parameter, aligned with `params`.
    pub result: Vec<MwpScalar>,
    /// Always true: the subset has no globals and no by-reference parameters.
    pub side_effect_free: bool,
}

impl FunctionSummary {
    pub fn uniform(params: &[String], c: MwpScalar) -> FunctionSummary {
        FunctionSummary {
            params: params.to_vec(),
            result: vec![c; params.len()],
            side_effect_free: true,
        }
    }

    pub fn result_vector(&self) -> MwpVector {
        MwpVector {
            vars: self.params.clone(),
            entries: self
                .result
                .iter()
                .map(|c| DeltaPoly::constant(*c))
                .collect(),
        }
    }

    pub fn get(&self, param: &str) -> Option<MwpScalar> {
        self.params
            .iter()
            .position(|p| p == param)
            .map(|k| self.result[k])
    }

    fn join(&self, other: &FunctionSummary) -> FunctionSummary {
        FunctionSummary {
            params: self.params.clone(),
            result: self
                .result
                .iter()
                .zip(&other.result)
                .map(|(a, b)| *a + *b)
                .collect(),
            side_effect_free: true,
        }
    }
}

/// Analyzes `f`'s body given summaries for the functions it calls.
pub fn analyze_function(
    f: &FunctionDef,
    summaries: &BTreeMap<String, FunctionSummary>,
) -> Result<(AnalysisResult, FunctionSummary), AnalysisError> {
    let mut a = Analyzer::new(f.variables(), summaries);
    let matrix = a.block(&f.body)?;
    let (points, failures) = a.into_parts();
    let feasible = FeasibleSet::from_matrix(&matrix, points.len() as u32, &failures);
    let summary = summarize(f, &matrix, &feasible);
    Ok((
        AnalysisResult {
            function: f.name.clone(),
            matrix,
            choice_points: points,
            failures,
            feasible,
        },
        summary,
    ))
}

fn summarize(
    f: &FunctionDef,
    matrix: &crate::algebra::MwpMatrix,
    feasible: &FeasibleSet,
) -> FunctionSummary {
    if feasible.is_empty() {
        return FunctionSummary::uniform(&f.params, MwpScalar::Inf);
    }
    let Some(r) = f.ret.as_ref().and_then(|r| matrix.index_of(r)) else {
        return FunctionSummary::uniform(&f.params, MwpScalar::O);
    };
    let result = f
        .params
        .iter()
        .map(|p| {
            let i = matrix.index_of(p).expect("parameter in variable order");
            matrix
                .get(i, r)
                .monomials()
                .iter()
                .filter(|m| feasible.extends(&m.deltas))
                .map(|m| m.coeff)
                .max()
                .unwrap_or(MwpScalar::O)
        })
        .collect();
    FunctionSummary {
        params: f.params.clone(),
        result,
        side_effect_free: true,
    }
}

/// Per-function results for a whole program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgramAnalysis {
    /// In program order.
    pub results: Vec<AnalysisResult>,
    pub summaries: BTreeMap<String, FunctionSummary>,
}

impl ProgramAnalysis {
    pub fn result(&self, function: &str) -> Option<&AnalysisResult> {
        self.results.iter().find(|r| r.function == function)
    }

    /// Every function admits a feasible choice.
    pub fn is_polynomial(&self) -> bool {
        self.results.iter().all(|r| r.is_feasible())
    }
}

/// Analyzes every function, callees first. Mutually recursive groups are
/// solved by iterating their summaries upwards from all-`O`.
pub fn analyze_program(program: &Program) -> Result<ProgramAnalysis, AnalysisError> {
    let mut graph: DiGraph<usize, ()> = DiGraph::new();
    let nodes: Vec<NodeIndex> = (0..program.functions.len())
        .map(|k| graph.add_node(k))
        .collect();
    let pos: BTreeMap<&str, usize> = program
        .functions
        .iter()
        .enumerate()
        .map(|(k, f)| (f.name.as_str(), k))
        .collect();
    let mut self_calls = BTreeSet::new();
    for (k, f) in program.functions.iter().enumerate() {
        for callee in callees(f) {
            let Some(&c) = pos.get(callee.as_str()) else {
                return Err(AnalysisError::UnknownCallee(callee));
            };
            if c == k {
                self_calls.insert(k);
            }
            graph.update_edge(nodes[k], nodes[c], ());
        }
    }
    let mut summaries = BTreeMap::new();
    let mut results: Vec<Option<AnalysisResult>> = vec![None; program.functions.len()];
    for scc in tarjan_scc(&graph) {
        let mut members: Vec<usize> = scc.iter().map(|n| graph[*n]).collect();
        members.sort();
        let recursive = members.len() > 1 || self_calls.contains(&members[0]);
        if !recursive {
            let f = &program.functions[members[0]];
            let (r, s) = analyze_function(f, &summaries)?;
            summaries.insert(f.name.clone(), s);
            results[members[0]] = Some(r);
            continue;
        }
        let group: BTreeSet<String> = members
            .iter()
            .map(|&k| program.functions[k].name.clone())
            .collect();
        for &k in &members {
            let f = &program.functions[k];
            summaries.insert(
                f.name.clone(),
                FunctionSummary::uniform(&f.params, MwpScalar::O),
            );
        }
        let tainted: BTreeMap<usize, BTreeSet<String>> = members
            .iter()
            .map(|&k| (k, reaching_recursive_args(&program.functions[k], &group)))
            .collect();
        loop {
            let mut changed = false;
            let mut round = Vec::new();
            for &k in &members {
                let f = &program.functions[k];
                let (r, mut s) = analyze_function(f, &summaries)?;
                for (p, c) in s.params.iter().zip(s.result.iter_mut()) {
                    if *c >= MwpScalar::P && tainted[&k].contains(p) {
                        *c = MwpScalar::Inf;
                    }
                }
                round.push((k, r, s));
            }
            for (k, r, s) in round {
                let name = &program.functions[k].name;
                let joined = summaries[name].join(&s);
                if joined != summaries[name] {
                    changed = true;
                    summaries.insert(name.clone(), joined);
                }
                results[k] = Some(r);
            }
            if !changed {
                break;
            }
        }
    }
    Ok(ProgramAnalysis {
        results: results
            .into_iter()
            .map(|r| r.expect("every function analyzed"))
            .collect(),
        summaries,
    })
}

fn callees(f: &FunctionDef) -> Vec<String> {
    let mut out = Vec::new();
    walk_block(&f.body, &mut |s| {
        if let StmtKind::Call { callee, .. } = &s.kind {
            out.push(callee.clone());
        }
    });
    out
}

/// Parameters whose value can reach, through any chain of assignments in
/// any order, an argument of a call into `group`.
fn reaching_recursive_args(f: &FunctionDef, group: &BTreeSet<String>) -> BTreeSet<String> {
    let mut edges: Vec<(BTreeSet<String>, String)> = Vec::new();
    let mut sinks: Vec<BTreeSet<String>> = Vec::new();
    walk_block(&f.body, &mut |s| match &s.kind {
        StmtKind::Assign { target, expr } => {
            let mut uses = expr.vars();
            if let LValue::Index(_, idx) = target {
                idx.collect_vars(&mut uses);
            }
            edges.push((uses, target.name().to_string()));
        }
        StmtKind::Call {
            target,
            callee,
            args,
        } => {
            let mut uses = BTreeSet::new();
            for a in args {
                a.collect_vars(&mut uses);
            }
            if group.contains(callee) {
                sinks.push(uses.clone());
            }
            edges.push((uses, target.clone()));
        }
        StmtKind::For { counter, init, .. } => {
            if let Some(e) = init {
                edges.push((e.vars(), counter.clone()));
            }
        }
        _ => {}
    });
    f.params
        .iter()
        .filter(|p| {
            let mut reach: BTreeSet<String> = BTreeSet::from([(*p).clone()]);
            loop {
                let before = reach.len();
                for (uses, def) in &edges {
                    if !reach.contains(def) && uses.iter().any(|u| reach.contains(u)) {
                        reach.insert(def.clone());
                    }
                }
                if reach.len() == before {
                    break;
                }
            }
            sinks.iter().any(|s| s.iter().any(|u| reach.contains(u)))
        })
        .cloned()
        .collect()
}
