//! Subset-membership checks and AST normalization.

use std::collections::BTreeSet;

use super::ast::*;
use super::FrontendError;

/// Every variable written anywhere inside the block.
pub fn block_defs(block: &[Stmt]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    walk_block(block, &mut |s| match &s.kind {
        StmtKind::Assign { target, .. } => {
            out.insert(target.name().to_string());
        }
        StmtKind::Call { target, .. } => {
            out.insert(target.clone());
        }
        StmtKind::For { counter, .. } => {
            out.insert(counter.clone());
        }
        _ => {}
    });
    out
}

/// Downgrades counted loops that break their invariants and fixes up the
/// scoping of header-declared counters.
pub fn normalize_function(f: &mut FunctionDef) {
    let consts: Vec<(String, i64)> = f
        .locals
        .iter()
        .filter_map(|l| match l.kind {
            LocalKind::Const(v) => Some((l.name.clone(), v)),
            _ => None,
        })
        .collect();
    let arrays: BTreeSet<String> = f
        .locals
        .iter()
        .filter(|l| matches!(l.kind, LocalKind::Array(_)))
        .map(|l| l.name.clone())
        .collect();
    downgrade_block(&mut f.body, &consts, &arrays);

    let mut escaped = BTreeSet::new();
    scope_block(&f.body, &BTreeSet::new(), &mut escaped);
    if let Some(r) = &f.ret {
        escaped.insert(r.clone());
    }
    for l in &mut f.locals {
        if let LocalKind::Scalar { for_scoped: true } = l.kind {
            if escaped.contains(&l.name) {
                l.kind = LocalKind::Scalar { for_scoped: false };
            }
        }
    }
    // Constants no longer named by any counted loop are dropped.
    let mut bounds = BTreeSet::new();
    walk_block(&f.body, &mut |s| {
        if let StmtKind::For { bound, .. } = &s.kind {
            bounds.insert(bound.clone());
        }
    });
    let mut used = super::parser::referenced(&f.body);
    used.extend(bounds);
    f.locals
        .retain(|l| !matches!(l.kind, LocalKind::Const(_)) || used.contains(&l.name));
}

fn downgrade_block(block: &mut Vec<Stmt>, consts: &[(String, i64)], arrays: &BTreeSet<String>) {
    let mut out = Vec::with_capacity(block.len());
    for mut s in std::mem::take(block) {
        for b in s.blocks_mut() {
            downgrade_block(b, consts, arrays);
        }
        let broken = match &s.kind {
            StmtKind::For {
                counter,
                bound,
                body,
                ..
            } => {
                let defs = block_defs(body);
                counter == bound
                    || defs.contains(counter)
                    || defs.contains(bound)
                    || arrays.contains(counter)
                    || arrays.contains(bound)
            }
            _ => false,
        };
        if !broken {
            out.push(s);
            continue;
        }
        let StmtKind::For {
            counter,
            init,
            bound,
            mut body,
        } = s.kind
        else {
            unreachable!()
        };
        let bound_expr = match consts.iter().find(|(n, _)| *n == bound) {
            Some((_, v)) => Expr::Const(*v),
            None => Expr::Var(bound),
        };
        if let Some(e) = init {
            out.push(Stmt {
                id: StmtId::default(),
                span: s.span,
                kind: StmtKind::Assign {
                    target: LValue::Var(counter.clone()),
                    expr: e,
                },
            });
        }
        body.push(Stmt {
            id: StmtId::default(),
            span: s.span,
            kind: StmtKind::Assign {
                target: LValue::Var(counter.clone()),
                expr: Expr::bin(BinOp::Add, Expr::Var(counter.clone()), Expr::Const(1)),
            },
        });
        out.push(Stmt {
            id: s.id,
            span: s.span,
            kind: StmtKind::While {
                cond: Cond::Cmp(CmpOp::Lt, Expr::Var(counter), bound_expr),
                body,
            },
        });
    }
    *block = out;
}

fn scope_block(block: &[Stmt], inside: &BTreeSet<String>, escaped: &mut BTreeSet<String>) {
    for s in block {
        let mut own = BTreeSet::new();
        match &s.kind {
            StmtKind::For {
                counter,
                init,
                bound,
                body,
            } => {
                match init {
                    Some(e) => e.collect_vars(&mut own),
                    None => {
                        own.insert(counter.clone());
                    }
                }
                own.insert(bound.clone());
                let mut inner = inside.clone();
                inner.insert(counter.clone());
                scope_block(body, &inner, escaped);
            }
            StmtKind::If { cond, .. } | StmtKind::While { cond, .. } => {
                cond.collect_vars(&mut own);
                for b in s.blocks() {
                    scope_block(b, inside, escaped);
                }
            }
            StmtKind::Sections(secs) => {
                for b in secs {
                    scope_block(b, inside, escaped);
                }
            }
            StmtKind::Assign { .. } | StmtKind::Call { .. } => {
                own = super::parser::referenced(std::slice::from_ref(s));
            }
        }
        for v in own {
            if !inside.contains(&v) {
                escaped.insert(v);
            }
        }
    }
}

/// Checks that the program stays inside the supported subset.
pub fn validate(program: &Program) -> Result<(), FrontendError> {
    let mut names = BTreeSet::new();
    for f in &program.functions {
        if !names.insert(f.name.as_str()) {
            return Err(FrontendError::invalid(
                f.span,
                format!("function `{}` defined twice", f.name),
            ));
        }
    }
    for f in &program.functions {
        validate_function(program, f)?;
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Scalar,
    Array,
    Const,
}

fn kind_of(f: &FunctionDef, name: &str) -> Option<Kind> {
    if f.is_param(name) {
        return Some(Kind::Scalar);
    }
    f.local(name).map(|l| match l.kind {
        LocalKind::Scalar { .. } => Kind::Scalar,
        LocalKind::Array(_) => Kind::Array,
        LocalKind::Const(_) => Kind::Const,
    })
}

fn validate_function(program: &Program, f: &FunctionDef) -> Result<(), FrontendError> {
    for l in &f.locals {
        if f.is_param(&l.name) {
            return Err(FrontendError::invalid(
                f.span,
                format!("`{}` is both a parameter and a local", l.name),
            ));
        }
        if let LocalKind::Array(ArrayLen::Symbolic(n)) = &l.kind {
            if !matches!(kind_of(f, n), Some(Kind::Scalar | Kind::Const)) {
                return Err(FrontendError::invalid(
                    f.span,
                    format!("array length `{n}` is not a declared scalar"),
                ));
            }
        }
    }
    if let Some(r) = &f.ret {
        if !matches!(kind_of(f, r), Some(Kind::Scalar | Kind::Const)) {
            return Err(FrontendError::invalid(
                f.span,
                format!("returned variable `{r}` is not a declared scalar"),
            ));
        }
    }
    let mut err = None;
    walk_block(&f.body, &mut |s| {
        if err.is_none() {
            if let Err(e) = validate_stmt(program, f, s) {
                err = Some(e);
            }
        }
    });
    err.map_or(Ok(()), Err)
}

fn check_expr(f: &FunctionDef, e: &Expr, span: Span) -> Result<(), FrontendError> {
    match e {
        Expr::Var(v) => match kind_of(f, v) {
            Some(Kind::Scalar | Kind::Const) => Ok(()),
            Some(Kind::Array) => Err(FrontendError::invalid(
                span,
                format!("array `{v}` used as a scalar"),
            )),
            None => Err(FrontendError::invalid(
                span,
                format!("`{v}` is not declared"),
            )),
        },
        Expr::Const(_) => Ok(()),
        Expr::Bin(_, l, r) => {
            check_expr(f, l, span)?;
            check_expr(f, r, span)
        }
        Expr::Index(a, idx) => {
            match kind_of(f, a) {
                Some(Kind::Array) => {}
                Some(_) => {
                    return Err(FrontendError::invalid(
                        span,
                        format!("`{a}` is not an array"),
                    ))
                }
                None => {
                    return Err(FrontendError::invalid(
                        span,
                        format!("`{a}` is not declared"),
                    ))
                }
            }
            check_expr(f, idx, span)
        }
    }
}

fn check_cond(f: &FunctionDef, c: &Cond, span: Span) -> Result<(), FrontendError> {
    match c {
        Cond::Cmp(_, l, r) => {
            check_expr(f, l, span)?;
            check_expr(f, r, span)
        }
        Cond::And(a, b) | Cond::Or(a, b) => {
            check_cond(f, a, span)?;
            check_cond(f, b, span)
        }
        Cond::Not(c) => check_cond(f, c, span),
    }
}

fn check_writable(f: &FunctionDef, v: &str, span: Span) -> Result<(), FrontendError> {
    match kind_of(f, v) {
        Some(Kind::Scalar) => Ok(()),
        Some(Kind::Const) => Err(FrontendError::invalid(span, format!("`{v}` is read-only"))),
        Some(Kind::Array) => Err(FrontendError::invalid(
            span,
            format!("array `{v}` assigned as a scalar"),
        )),
        None => Err(FrontendError::invalid(
            span,
            format!("`{v}` is not declared"),
        )),
    }
}

fn validate_stmt(program: &Program, f: &FunctionDef, s: &Stmt) -> Result<(), FrontendError> {
    let span = s.span;
    match &s.kind {
        StmtKind::Assign { target, expr } => {
            match target {
                LValue::Var(v) => check_writable(f, v, span)?,
                LValue::Index(a, idx) => {
                    if kind_of(f, a) != Some(Kind::Array) {
                        return Err(FrontendError::invalid(
                            span,
                            format!("`{a}` is not an array"),
                        ));
                    }
                    check_expr(f, idx, span)?;
                }
            }
            check_expr(f, expr, span)
        }
        StmtKind::If { cond, .. } | StmtKind::While { cond, .. } => check_cond(f, cond, span),
        StmtKind::For {
            counter,
            init,
            bound,
            body,
        } => {
            check_writable(f, counter, span)?;
            if !matches!(kind_of(f, bound), Some(Kind::Scalar | Kind::Const)) {
                return Err(FrontendError::invalid(
                    span,
                    format!("loop bound `{bound}` is not a declared scalar"),
                ));
            }
            if let Some(e) = init {
                check_expr(f, e, span)?;
            }
            let defs = block_defs(body);
            if counter == bound || defs.contains(counter) || defs.contains(bound) {
                return Err(FrontendError::invalid(
                    span,
                    format!("counted loop modifies `{counter}` or `{bound}` in its body"),
                ));
            }
            Ok(())
        }
        StmtKind::Call {
            target,
            callee,
            args,
        } => {
            check_writable(f, target, span)?;
            let Some(g) = program.function(callee) else {
                return Err(FrontendError::invalid(
                    span,
                    format!("call to undefined function `{callee}`"),
                ));
            };
            if g.params.len() != args.len() {
                return Err(FrontendError::invalid(
                    span,
                    format!(
                        "`{callee}` takes {} argument(s), {} given",
                        g.params.len(),
                        args.len()
                    ),
                ));
            }
            if g.ret.is_none() {
                return Err(FrontendError::invalid(
                    span,
                    format!("`{callee}` returns no value"),
                ));
            }
            for a in args {
                check_expr(f, a, span)?;
            }
            Ok(())
        }
        StmtKind::Sections(_) => Ok(()),
    }
}
