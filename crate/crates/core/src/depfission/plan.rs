use std::collections::BTreeSet;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use super::{build_dep_graph, DepError, DepGraph, DepKind};
use crate::frontend::{Cond, Stmt, StmtId, StmtKind};

/// The parts of a loop the dependence analyses need.
#[derive(Debug, Clone)]
pub struct LoopInfo<'a> {
    pub cond: Option<&'a Cond>,
    pub cond_vars: BTreeSet<String>,
    /// Counter of a counted loop.
    pub counter: Option<String>,
    pub body: &'a [Stmt],
}

impl<'a> LoopInfo<'a> {
    pub fn of(s: &'a Stmt) -> Result<LoopInfo<'a>, DepError> {
        match &s.kind {
            StmtKind::While { cond, body } => Ok(LoopInfo {
                cond: Some(cond),
                cond_vars: cond.vars(),
                counter: None,
                body,
            }),
            StmtKind::For {
                counter,
                bound,
                body,
                ..
            } => Ok(LoopInfo {
                cond: None,
                cond_vars: [counter.clone(), bound.clone()].into(),
                counter: Some(counter.clone()),
                body,
            }),
            _ => Err(DepError::NotALoop),
        }
    }
}

/// Body positions of the statements that (transitively) feed the loop
/// condition.
pub fn control_kernel(g: &DepGraph, cond_vars: &BTreeSet<String>) -> BTreeSet<usize> {
    let mut kernel: BTreeSet<usize> = (0..g.len())
        .filter(|&s| !g.usedefs[s].defs.is_disjoint(cond_vars))
        .collect();
    loop {
        let add: Vec<usize> = g
            .edges_of(DepKind::Flow)
            .filter(|e| kernel.contains(&e.dst) && !kernel.contains(&e.src))
            .map(|e| e.src)
            .collect();
        if add.is_empty() {
            return kernel;
        }
        kernel.extend(add);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FissionPlan {
    pub kernel: Vec<StmtId>,
    pub groups: Vec<Vec<StmtId>>,
    /// No dependence of any kind crosses between groups.
    pub independent: bool,
}

/// Splits the non-kernel statements into dependence-closed groups in an
/// order every edge respects.
pub fn fission_plan(lp: &Stmt) -> Result<FissionPlan, DepError> {
    let info = LoopInfo::of(lp)?;
    let g = build_dep_graph(info.body);
    let kernel = control_kernel(&g, &info.cond_vars);
    let rest: Vec<usize> = (0..g.len()).filter(|s| !kernel.contains(s)).collect();
    for e in g.edges_of(DepKind::Output) {
        if kernel.contains(&e.src) != kernel.contains(&e.dst) {
            return Err(DepError::NoSplit(
                "a variable is written both by the loop control and by the body".into(),
            ));
        }
    }
    let mut dg: DiGraph<usize, ()> = DiGraph::new();
    let nodes: Vec<_> = rest.iter().map(|&s| dg.add_node(s)).collect();
    let local = |s: usize| rest.iter().position(|&r| r == s);
    for e in &g.edges {
        if let (Some(a), Some(b)) = (local(e.src), local(e.dst)) {
            if a != b {
                dg.update_edge(nodes[a], nodes[b], ());
            }
        }
    }
    let sccs = tarjan_scc(&dg);
    let comp_of: Vec<usize> = {
        let mut c = vec![0; rest.len()];
        for (k, scc) in sccs.iter().enumerate() {
            for n in scc {
                c[n.index()] = k;
            }
        }
        c
    };
    // Kahn's algorithm on the condensation, preferring the textually first
    // component among the ready ones.
    let m = sccs.len();
    let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m];
    let mut indeg = vec![0usize; m];
    for e in dg.raw_edges() {
        let (a, b) = (comp_of[e.source().index()], comp_of[e.target().index()]);
        if a != b && succ[a].insert(b) {
            indeg[b] += 1;
        }
    }
    let first_pos: Vec<usize> = sccs
        .iter()
        .map(|scc| scc.iter().map(|n| dg[*n]).min().unwrap_or(0))
        .collect();
    let mut ready: BTreeSet<(usize, usize)> = (0..m)
        .filter(|&c| indeg[c] == 0)
        .map(|c| (first_pos[c], c))
        .collect();
    let mut order = Vec::with_capacity(m);
    while let Some(&(p, c)) = ready.iter().next() {
        ready.remove(&(p, c));
        order.push(c);
        for &d in &succ[c] {
            indeg[d] -= 1;
            if indeg[d] == 0 {
                ready.insert((first_pos[d], d));
            }
        }
    }
    let groups: Vec<Vec<usize>> = order
        .iter()
        .map(|&c| {
            let mut members: Vec<usize> = sccs[c].iter().map(|n| dg[*n]).collect();
            members.sort();
            members
        })
        .collect();
    if groups.len() < 2 {
        return Err(DepError::NoSplit(format!(
            "{} independent group(s)",
            groups.len()
        )));
    }
    let group_of = |s: usize| groups.iter().position(|gr| gr.contains(&s));
    let independent = g
        .edges
        .iter()
        .all(|e| match (group_of(e.src), group_of(e.dst)) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        });
    let ids = |v: &[usize]| v.iter().map(|&s| g.nodes[s]).collect::<Vec<_>>();
    Ok(FissionPlan {
        kernel: ids(&kernel.iter().copied().collect::<Vec<_>>()),
        groups: groups.iter().map(|gr| ids(gr)).collect(),
        independent,
    })
}
