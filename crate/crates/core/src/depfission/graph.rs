use std::collections::BTreeSet;
use std::fmt::Write;

use serde::Serialize;

use crate::frontend::{LValue, Span, Stmt, StmtId, StmtKind};

/// Syntactic uses and definitions; arrays count as single aggregates.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UseDef {
    pub uses: BTreeSet<String>,
    pub defs: BTreeSet<String>,
}

pub fn use_def(s: &Stmt) -> UseDef {
    let mut ud = UseDef::default();
    match &s.kind {
        StmtKind::Assign { target, expr } => {
            expr.collect_vars(&mut ud.uses);
            if let LValue::Index(a, idx) = target {
                idx.collect_vars(&mut ud.uses);
                ud.uses.insert(a.clone());
            }
            ud.defs.insert(target.name().to_string());
        }
        StmtKind::Call { target, args, .. } => {
            for a in args {
                a.collect_vars(&mut ud.uses);
            }
            ud.defs.insert(target.clone());
        }
        StmtKind::If {
            cond,
            then_branch,
            else_branch,
        } => {
            cond.collect_vars(&mut ud.uses);
            for b in [then_branch, else_branch] {
                union_block(&mut ud, b);
            }
        }
        StmtKind::While { cond, body } => {
            cond.collect_vars(&mut ud.uses);
            union_block(&mut ud, body);
        }
        StmtKind::For {
            counter,
            init,
            bound,
            body,
        } => {
            union_block(&mut ud, body);
            ud.uses.insert(bound.clone());
            // The counter's incoming value is dead unless the loop resumes
            // from it or the initializer reads it.
            let mut init_uses = BTreeSet::new();
            match init {
                Some(e) => e.collect_vars(&mut init_uses),
                None => {
                    init_uses.insert(counter.clone());
                }
            }
            if !init_uses.contains(counter) {
                ud.uses.remove(counter);
            }
            ud.uses.extend(init_uses);
            ud.defs.insert(counter.clone());
        }
        StmtKind::Sections(secs) => {
            for b in secs {
                union_block(&mut ud, b);
            }
        }
    }
    ud
}

fn union_block(ud: &mut UseDef, block: &[Stmt]) {
    for s in block {
        let inner = use_def(s);
        ud.uses.extend(inner.uses);
        ud.defs.extend(inner.defs);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DepKind {
    Flow,
    Anti,
    Output,
}

impl DepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DepKind::Flow => "flow",
            DepKind::Anti => "anti",
            DepKind::Output => "output",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DepEdge {
    /// Positions in the body, not statement ids.
    pub src: usize,
    pub dst: usize,
    pub kind: DepKind,
    /// Realizable only across iterations: `src` is at or after `dst`.
    pub carried: bool,
}

/// Dependences between the top-level statements of a loop body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepGraph {
    pub nodes: Vec<StmtId>,
    pub spans: Vec<Span>,
    pub usedefs: Vec<UseDef>,
    pub edges: Vec<DepEdge>,
}

pub fn build_dep_graph(body: &[Stmt]) -> DepGraph {
    let usedefs: Vec<UseDef> = body.iter().map(use_def).collect();
    let mut edges = Vec::new();
    for (s, a) in usedefs.iter().enumerate() {
        for (t, b) in usedefs.iter().enumerate() {
            let carried = s >= t;
            let kinds = [
                (DepKind::Flow, &a.defs, &b.uses),
                (DepKind::Anti, &a.uses, &b.defs),
                (DepKind::Output, &a.defs, &b.defs),
            ];
            for (kind, x, y) in kinds {
                if !x.is_disjoint(y) {
                    edges.push(DepEdge {
                        src: s,
                        dst: t,
                        kind,
                        carried,
                    });
                }
            }
        }
    }
    DepGraph {
        nodes: body.iter().map(|s| s.id).collect(),
        spans: body.iter().map(|s| s.span).collect(),
        usedefs,
        edges,
    }
}

impl DepGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn position(&self, id: StmtId) -> Option<usize> {
        self.nodes.iter().position(|n| *n == id)
    }

    pub fn edges_of(&self, kind: DepKind) -> impl Iterator<Item = &DepEdge> {
        self.edges.iter().filter(move |e| e.kind == kind)
    }

    pub fn has_edge(&self, src: usize, dst: usize, kind: DepKind) -> bool {
        self.edges
            .iter()
            .any(|e| e.src == src && e.dst == dst && e.kind == kind)
    }

    /// Graphviz rendering with nodes labeled by source position.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{name}\" {{");
        for (id, span) in self.nodes.iter().zip(&self.spans) {
            let _ = writeln!(out, "    {id} [label=\"{id} @ {span}\"];");
        }
        for e in &self.edges {
            let style = if e.carried { "dashed" } else { "solid" };
            let _ = writeln!(
                out,
                "    {} -> {} [label=\"{}\", carried={}, style={style}];",
                self.nodes[e.src],
                self.nodes[e.dst],
                e.kind.as_str(),
                e.carried
            );
        }
        out.push_str("}\n");
        out
    }
}
