use super::{IdGen, Rewrite, RewriteKind, TransformError};
use crate::depfission::{build_dep_graph, invariance_degrees, Degree, LoopInfo};
use crate::frontend::{BinOp, CmpOp, Cond, Expr, FunctionDef, LValue, Stmt, StmtKind};

/// Peels the loop `D` times, `D` being the largest finite invariance
/// degree; the `k`-th peel keeps the statements of degree at least `k`
/// (and the control kernel). The remaining loop keeps only what never
/// stabilizes.
pub fn hoist(lp: &Stmt, f: &FunctionDef, ids: &mut IdGen) -> Result<Rewrite, TransformError> {
    let info = LoopInfo::of(lp)?;
    let g = build_dep_graph(info.body);
    let deg = invariance_degrees(&g, &info);
    let d = deg
        .degrees
        .iter()
        .enumerate()
        .filter(|(k, _)| !deg.kernel.contains(k))
        .filter_map(|(_, x)| x.finite())
        .max()
        .ok_or(TransformError::NothingToHoist)?;
    let keep = |k: usize, level: Degree| deg.kernel.contains(&k) || deg.degrees[k] >= level;

    let mut out = Vec::new();
    let (guard, step) = match &lp.kind {
        StmtKind::While { cond, .. } => (cond.clone(), None),
        StmtKind::For {
            counter,
            init,
            bound,
            ..
        } => {
            if let Some(e) = init {
                out.push(ids.stmt(
                    StmtKind::Assign {
                        target: LValue::Var(counter.clone()),
                        expr: e.clone(),
                    },
                    lp.span,
                ));
            }
            let step = Expr::bin(BinOp::Add, Expr::var(counter), Expr::Const(1));
            (
                Cond::Cmp(CmpOp::Lt, Expr::var(counter), bound_expr(f, bound)),
                Some((counter.clone(), step)),
            )
        }
        _ => unreachable!("LoopInfo accepted a loop"),
    };
    for level in 1..=d {
        let mut body: Vec<Stmt> = info
            .body
            .iter()
            .enumerate()
            .filter(|(k, _)| keep(*k, Degree::Finite(level)))
            .map(|(_, s)| ids.copy(s))
            .collect();
        if let Some((c, e)) = &step {
            body.push(ids.stmt(
                StmtKind::Assign {
                    target: LValue::Var(c.clone()),
                    expr: e.clone(),
                },
                lp.span,
            ));
        }
        out.push(ids.stmt(
            StmtKind::If {
                cond: guard.clone(),
                then_branch: body,
                else_branch: Vec::new(),
            },
            lp.span,
        ));
    }
    let residual: Vec<Stmt> = info
        .body
        .iter()
        .enumerate()
        .filter(|(k, _)| keep(*k, Degree::Infinite))
        .map(|(_, s)| s.clone())
        .collect();
    match &lp.kind {
        StmtKind::For { counter, bound, .. } if residual.is_empty() => {
            let finish = ids.stmt(
                StmtKind::Assign {
                    target: LValue::Var(counter.clone()),
                    expr: bound_expr(f, bound),
                },
                lp.span,
            );
            out.push(ids.stmt(
                StmtKind::If {
                    cond: guard,
                    then_branch: vec![finish],
                    else_branch: Vec::new(),
                },
                lp.span,
            ));
        }
        StmtKind::For { counter, bound, .. } => out.push(Stmt {
            id: lp.id,
            span: lp.span,
            kind: StmtKind::For {
                counter: counter.clone(),
                init: None,
                bound: bound.clone(),
                body: residual,
            },
        }),
        StmtKind::While { cond, .. } => out.push(Stmt {
            id: lp.id,
            span: lp.span,
            kind: StmtKind::While {
                cond: cond.clone(),
                body: residual,
            },
        }),
        _ => unreachable!(),
    }
    let summary: Vec<String> = deg
        .nodes
        .iter()
        .zip(&deg.degrees)
        .map(|(id, x)| format!("{id}:{x}"))
        .collect();
    Ok(Rewrite {
        kind: RewriteKind::Hoist,
        function: f.name.clone(),
        original: lp.clone(),
        replacement: out,
        report: format!("peeled {d} iteration(s); degrees {}", summary.join(" ")),
        degrees: deg.as_map(),
        groups: Vec::new(),
        pragma: false,
    })
}

fn bound_expr(f: &FunctionDef, bound: &str) -> Expr {
    match f.const_value(bound) {
        Some(v) => Expr::Const(v),
        None => Expr::var(bound),
    }
}
