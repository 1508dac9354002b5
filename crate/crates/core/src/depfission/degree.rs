use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::{control_kernel, DepError, DepGraph, DepKind, LoopInfo};
use crate::frontend::{Stmt, StmtId};

/// Number of iterations after which a statement's effect is stable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    Finite(u32),
    Infinite,
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Degree::Finite(_))
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Finite(d) => write!(f, "{d}"),
            Degree::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Degree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Degree::Finite(d) => s.serialize_u32(*d),
            Degree::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Degree per body statement, aligned with the graph's nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceDegree {
    pub nodes: Vec<StmtId>,
    pub degrees: Vec<Degree>,
    pub kernel: BTreeSet<usize>,
}

impl InvarianceDegree {
    pub fn get(&self, id: StmtId) -> Option<Degree> {
        self.nodes
            .iter()
            .position(|n| *n == id)
            .map(|k| self.degrees[k])
    }

    /// Largest finite degree, if any statement has one.
    pub fn max_finite(&self) -> Option<u32> {
        self.degrees.iter().filter_map(|d| d.finite()).max()
    }

    pub fn as_map(&self) -> BTreeMap<StmtId, Degree> {
        self.nodes
            .iter()
            .copied()
            .zip(self.degrees.iter().copied())
            .collect()
    }
}

/// Invariance degrees of a loop body's statements.
///
/// Kernel statements, statements reading what the kernel (or the counter of
/// a counted loop) writes, statements on or downstream of a flow cycle, and
/// statements sharing a written variable with another statement get `∞`.
/// Otherwise a statement's degree is the maximum over its incoming flow
/// edges of the source degree, plus one when the edge is loop-carried.
pub fn invariance_degrees(g: &DepGraph, info: &LoopInfo) -> InvarianceDegree {
    let n = g.len();
    let kernel = control_kernel(g, &info.cond_vars);
    let mut kernel_defs: BTreeSet<String> = kernel
        .iter()
        .flat_map(|&k| g.usedefs[k].defs.iter().cloned())
        .collect();
    if let Some(c) = &info.counter {
        kernel_defs.insert(c.clone());
    }
    let mut inf = vec![false; n];
    for s in 0..n {
        let ud = &g.usedefs[s];
        if kernel.contains(&s) || !ud.uses.is_disjoint(&kernel_defs) {
            inf[s] = true;
        }
    }
    for e in g.edges_of(DepKind::Output) {
        if e.src != e.dst {
            inf[e.src] = true;
            inf[e.dst] = true;
        }
    }
    // Nodes on a flow cycle reach themselves.
    let flow: Vec<Vec<usize>> = (0..n)
        .map(|s| {
            g.edges_of(DepKind::Flow)
                .filter(|e| e.src == s)
                .map(|e| e.dst)
                .collect()
        })
        .collect();
    for s in 0..n {
        if reaches(&flow, s, s) {
            inf[s] = true;
        }
    }
    let cap = n as u32;
    let mut deg = vec![1u32; n];
    loop {
        let mut changed = false;
        for e in g.edges_of(DepKind::Flow) {
            if inf[e.src] && !inf[e.dst] {
                inf[e.dst] = true;
                changed = true;
            }
            if inf[e.dst] {
                continue;
            }
            let cand = deg[e.src] + u32::from(e.carried);
            if cand > deg[e.dst] {
                deg[e.dst] = cand;
                changed = true;
                if cand > cap {
                    inf[e.dst] = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    InvarianceDegree {
        nodes: g.nodes.clone(),
        degrees: (0..n)
            .map(|s| {
                if inf[s] {
                    Degree::Infinite
                } else {
                    Degree::Finite(deg[s])
                }
            })
            .collect(),
        kernel,
    }
}

fn reaches(adj: &[Vec<usize>], from: usize, to: usize) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack: Vec<usize> = adj[from].clone();
    while let Some(x) = stack.pop() {
        if x == to {
            return true;
        }
        if !seen[x] {
            seen[x] = true;
            stack.extend(&adj[x]);
        }
    }
    false
}

/// The largest degree in the body when every statement has a finite one.
pub fn quasi_invariant_block(lp: &Stmt) -> Result<Option<u32>, DepError> {
    let info = LoopInfo::of(lp)?;
    let g = super::build_dep_graph(info.body);
    let d = invariance_degrees(&g, &info);
    if d.degrees.iter().all(|x| x.is_finite()) {
        Ok(Some(d.max_finite().unwrap_or(0)))
    } else {
        Ok(None)
    }
}
