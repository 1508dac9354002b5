use std::collections::BTreeSet;

use super::{IdGen, Rewrite, RewriteKind, TransformError};
use crate::depfission::{use_def, DepError, FissionPlan, LoopInfo};
use crate::frontend::{
    block_defs, Expr, FunctionDef, LValue, Local, LocalKind, Stmt, StmtId, StmtKind,
};

/// One loop per plan group, each carrying its own copy of the control
/// kernel. Control state is saved before the first loop and restored
/// before each later one so every copy takes the same trips.
pub fn fission(
    lp: &Stmt,
    plan: &FissionPlan,
    pragmas: bool,
    f: &mut FunctionDef,
    ids: &mut IdGen,
) -> Result<Rewrite, TransformError> {
    if plan.groups.len() < 2 {
        return Err(DepError::NoSplit(format!("{} group(s)", plan.groups.len())).into());
    }
    let info = LoopInfo::of(lp)?;
    let kernel: BTreeSet<StmtId> = plan.kernel.iter().copied().collect();
    let kernel_stmts: Vec<&Stmt> = info
        .body
        .iter()
        .filter(|s| kernel.contains(&s.id))
        .collect();

    let mut prologue = Vec::new();
    let mut restore = Vec::new();
    // Kernel variables whose value on loop entry matters.
    let mut saved: Vec<String> = Vec::new();
    if !kernel_stmts.is_empty() {
        let mut kdefs = BTreeSet::new();
        for s in &kernel_stmts {
            kdefs.extend(use_def(s).defs);
        }
        let exposed = exposed_uses(&info.cond_vars, info.body);
        saved = kdefs.intersection(&exposed).cloned().collect();
    }
    for v in &saved {
        let tmp = declare_temp(f, &format!("{v}_saved"));
        prologue.push(assign(ids, &tmp, Expr::var(v), lp));
        restore.push((v.clone(), tmp));
    }

    let mut init_expr = None;
    if let StmtKind::For {
        counter,
        init,
        body,
        ..
    } = &lp.kind
    {
        let defs = block_defs(body);
        let reuse = match init {
            Some(e) => {
                let vs = e.vars();
                !vs.contains(counter) && vs.is_disjoint(&defs)
            }
            None => false,
        };
        init_expr = Some(if reuse {
            init.clone().expect("checked above")
        } else {
            let tmp = declare_temp(f, &format!("{counter}_start"));
            let src = init.clone().unwrap_or_else(|| Expr::var(counter));
            prologue.push(assign(ids, &tmp, src, lp));
            Expr::var(&tmp)
        });
    }

    let mut loops = Vec::new();
    for (k, group) in plan.groups.iter().enumerate() {
        let members: BTreeSet<StmtId> = group.iter().copied().collect();
        let first = k == 0;
        let body: Vec<Stmt> = info
            .body
            .iter()
            .filter_map(|s| {
                if members.contains(&s.id) || (first && kernel.contains(&s.id)) {
                    Some(s.clone())
                } else if kernel.contains(&s.id) {
                    Some(ids.copy(s))
                } else {
                    None
                }
            })
            .collect();
        let kind = match &lp.kind {
            StmtKind::While { cond, .. } => StmtKind::While {
                cond: cond.clone(),
                body,
            },
            StmtKind::For { counter, bound, .. } => StmtKind::For {
                counter: counter.clone(),
                init: init_expr.clone(),
                bound: bound.clone(),
                body,
            },
            _ => unreachable!("LoopInfo accepted a loop"),
        };
        let mut piece = Vec::new();
        if !first {
            for (v, tmp) in &restore {
                piece.push(assign(ids, v, Expr::var(tmp), lp));
            }
        }
        piece.push(if first {
            Stmt {
                id: lp.id,
                span: lp.span,
                kind,
            }
        } else {
            ids.stmt(kind, lp.span)
        });
        loops.push(piece);
    }

    // Parallel sections need each loop to own its control state.
    let private_control = match &lp.kind {
        StmtKind::For { counter, .. } => {
            prologue.is_empty()
                && matches!(
                    f.local(counter).map(|l| &l.kind),
                    Some(LocalKind::Scalar { for_scoped: true })
                )
        }
        _ => kernel_stmts.is_empty(),
    };
    let pragma = pragmas && plan.independent && private_control;
    let mut replacement = prologue;
    if pragma {
        replacement.push(ids.stmt(StmtKind::Sections(loops), lp.span));
    } else {
        replacement.extend(loops.into_iter().flatten());
    }
    let groups_text: Vec<String> = plan
        .groups
        .iter()
        .map(|g| {
            let v: Vec<String> = g.iter().map(|s| s.to_string()).collect();
            format!("{{{}}}", v.join(", "))
        })
        .collect();
    Ok(Rewrite {
        kind: RewriteKind::Fission,
        function: f.name.clone(),
        original: lp.clone(),
        replacement,
        report: format!(
            "split into {} loops: {}{}",
            plan.groups.len(),
            groups_text.join(" "),
            if pragma { " (parallel sections)" } else { "" }
        ),
        degrees: Default::default(),
        groups: plan.groups.clone(),
        pragma,
    })
}

fn declare_temp(f: &mut FunctionDef, base: &str) -> String {
    let name = f.fresh_name(base);
    f.locals.push(Local {
        name: name.clone(),
        kind: LocalKind::Scalar { for_scoped: false },
    });
    name
}

fn assign(ids: &mut IdGen, target: &str, expr: Expr, lp: &Stmt) -> Stmt {
    ids.stmt(
        StmtKind::Assign {
            target: LValue::Var(target.to_string()),
            expr,
        },
        lp.span,
    )
}

/// Variables the loop may read before writing them in the same iteration.
fn exposed_uses(cond_vars: &BTreeSet<String>, body: &[Stmt]) -> BTreeSet<String> {
    let mut exposed = cond_vars.clone();
    let mut defined: BTreeSet<String> = BTreeSet::new();
    for s in body {
        let ud = use_def(s);
        exposed.extend(ud.uses.difference(&defined).cloned());
        if let StmtKind::Assign {
            target: LValue::Var(x),
            ..
        }
        | StmtKind::Call { target: x, .. } = &s.kind
        {
            defined.insert(x.clone());
        }
    }
    exposed
}
