//! Loop rewrites: peeling quasi-invariant statements out of loops and
//! splitting loops into independent pieces.

mod fission;
mod hoist;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::depfission::{fission_plan, Degree, DepError};
use crate::frontend::{
    normalize_function, validate, FrontendError, FunctionDef, Program, Span, Stmt, StmtId, StmtKind,
};
use crate::interp::{run, InterpError, RunResult, Store};

pub use fission::fission;
pub use hoist::hoist;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("no statement of the loop has a finite invariance degree")]
    NothingToHoist,
    #[error(transparent)]
    Dep(#[from] DepError),
    #[error("rewritten program is invalid: {0}")]
    Invalid(#[from] FrontendError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RewriteKind {
    Hoist,
    Fission,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rewrite {
    pub kind: RewriteKind,
    pub function: String,
    pub original: Stmt,
    pub replacement: Vec<Stmt>,
    /// Human-readable justification.
    pub report: String,
    /// Invariance degree per body statement (hoisting).
    pub degrees: BTreeMap<StmtId, Degree>,
    /// Statement groups, one per emitted loop (fission).
    pub groups: Vec<Vec<StmtId>>,
    pub pragma: bool,
}

impl Rewrite {
    pub fn loop_span(&self) -> Span {
        self.original.span
    }

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        match self.kind {
            RewriteKind::Fission => json!({
                "kind": "fission",
                "function": self.function,
                "loop_span": self.loop_span().to_string(),
                "groups": self.groups.iter()
                    .map(|g| g.iter().map(|s| s.0).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "pragma": self.pragma,
            }),
            RewriteKind::Hoist => json!({
                "kind": "hoist",
                "function": self.function,
                "loop_span": self.loop_span().to_string(),
                "degrees": self.degrees.iter()
                    .map(|(k, v)| (k.to_string(), json!(v)))
                    .collect::<serde_json::Map<_, _>>(),
                "peels": self.degrees.values().filter_map(|d| d.finite()).max().unwrap_or(0),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Options {
    pub hoist: bool,
    pub fission: bool,
    pub pragmas: bool,
}

/// Hands out statement ids above every id already in use.
#[derive(Debug, Clone)]
pub struct IdGen {
    next: u32,
}

impl IdGen {
    pub fn for_program(p: &Program) -> IdGen {
        IdGen {
            next: p.max_stmt_id() + 1,
        }
    }

    pub fn fresh(&mut self) -> StmtId {
        let id = StmtId(self.next);
        self.next += 1;
        id
    }

    /// Deep copy with fresh ids throughout.
    pub fn copy(&mut self, s: &Stmt) -> Stmt {
        let mut c = s.clone();
        self.renew(&mut c);
        c
    }

    fn renew(&mut self, s: &mut Stmt) {
        s.id = self.fresh();
        for b in s.blocks_mut() {
            for t in b.iter_mut() {
                self.renew(t);
            }
        }
    }

    pub fn stmt(&mut self, kind: StmtKind, span: Span) -> Stmt {
        Stmt {
            id: self.fresh(),
            span,
            kind,
        }
    }
}

/// Rewrites every loop of the program and re-validates the result.
pub fn apply_all(
    program: &Program,
    opts: Options,
) -> Result<(Program, Vec<Rewrite>), TransformError> {
    let mut out = program.clone();
    let mut ids = IdGen::for_program(program);
    let mut rewrites = Vec::new();
    for k in 0..out.functions.len() {
        let mut f = out.functions[k].clone();
        let body = std::mem::take(&mut f.body);
        f.body = rewrite_block(body, &mut f, opts, &mut ids, &mut rewrites)?;
        normalize_function(&mut f);
        out.functions[k] = f;
        validate(&out)?;
    }
    Ok((out, rewrites))
}

fn rewrite_block(
    block: Vec<Stmt>,
    f: &mut FunctionDef,
    opts: Options,
    ids: &mut IdGen,
    log: &mut Vec<Rewrite>,
) -> Result<Vec<Stmt>, TransformError> {
    let mut out = Vec::with_capacity(block.len());
    for s in block {
        out.extend(rewrite_stmt(s, f, opts, ids, log)?);
    }
    Ok(out)
}

/// Hoisting works outside-in, so a quasi-invariant inner loop is still a
/// single chunk when its enclosing loop is peeled; the peeled copies are
/// then rewritten in turn. Fission works inside-out.
fn rewrite_stmt(
    mut s: Stmt,
    f: &mut FunctionDef,
    opts: Options,
    ids: &mut IdGen,
    log: &mut Vec<Rewrite>,
) -> Result<Vec<Stmt>, TransformError> {
    if !s.is_loop() {
        for b in s.blocks_mut() {
            *b = rewrite_block(std::mem::take(b), f, opts, ids, log)?;
        }
        return Ok(vec![s]);
    }
    if opts.hoist {
        match hoist(&s, f, ids) {
            Ok(r) => {
                let replacement = r.replacement.clone();
                log.push(r);
                let mut out = Vec::new();
                for t in replacement {
                    if t.id == s.id {
                        out.extend(finish_loop(t, f, opts, ids, log)?);
                    } else {
                        out.extend(rewrite_stmt(t, f, opts, ids, log)?);
                    }
                }
                return Ok(out);
            }
            Err(TransformError::NothingToHoist) => {}
            Err(e) => return Err(e),
        }
    }
    finish_loop(s, f, opts, ids, log)
}

/// Rewrites the loop's body, then splits the loop itself.
fn finish_loop(
    mut lp: Stmt,
    f: &mut FunctionDef,
    opts: Options,
    ids: &mut IdGen,
    log: &mut Vec<Rewrite>,
) -> Result<Vec<Stmt>, TransformError> {
    for b in lp.blocks_mut() {
        *b = rewrite_block(std::mem::take(b), f, opts, ids, log)?;
    }
    if opts.fission {
        match fission_plan(&lp) {
            Ok(plan) => {
                let r = fission(&lp, &plan, opts.pragmas, f, ids)?;
                let replacement = r.replacement.clone();
                log.push(r);
                return Ok(replacement);
            }
            Err(DepError::NoSplit(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(vec![lp])
}

/// Outcome of running a program and its rewrite on the same inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Same {
        original: RunResult,
        rewritten: RunResult,
    },
    Differ {
        original: Store,
        rewritten: Store,
    },
    /// Both runs failed the same way (e.g. out of fuel).
    BothFailed(InterpError),
    OneFailed {
        original: Result<Store, InterpError>,
        rewritten: Result<Store, InterpError>,
    },
}

impl Equivalence {
    pub fn holds(&self) -> bool {
        matches!(self, Equivalence::Same { .. } | Equivalence::BothFailed(_))
    }
}

/// Runs both programs and compares final stores on the original's variables.
pub fn check_equivalence(
    original: &Program,
    rewritten: &Program,
    entry: &str,
    inputs: &Store,
    fuel: u64,
) -> Equivalence {
    let names = original
        .function(entry)
        .map(|f| f.variables())
        .unwrap_or_default();
    let a = run(original, entry, inputs, fuel);
    // Rewrites may add intermediate steps; give them headroom.
    let b = run(rewritten, entry, inputs, fuel.saturating_mul(2));
    match (a, b) {
        (Ok(x), Ok(y)) => {
            let (sx, sy) = (
                x.final_store.restricted_to(&names),
                y.final_store.restricted_to(&names),
            );
            if sx == sy {
                Equivalence::Same {
                    original: x,
                    rewritten: y,
                }
            } else {
                Equivalence::Differ {
                    original: sx,
                    rewritten: sy,
                }
            }
        }
        (Err(InterpError::FuelExhausted(_)), Err(InterpError::FuelExhausted(n))) => {
            Equivalence::BothFailed(InterpError::FuelExhausted(n))
        }
        (Err(e1), Err(e2)) if std::mem::discriminant(&e1) == std::mem::discriminant(&e2) => {
            Equivalence::BothFailed(e1)
        }
        (a, b) => Equivalence::OneFailed {
            original: a.map(|r| r.final_store),
            rewritten: b.map(|r| r.final_store),
        },
    }
}
