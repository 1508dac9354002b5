//! Pretty-printer back to compilable C text.

use std::fmt::Write;

use super::ast::*;

const INDENT: &str = "    ";

pub fn emit(program: &Program) -> String {
    let mut out = String::new();
    for (k, f) in program.functions.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        emit_function(f, &mut out);
    }
    out
}

fn emit_function(f: &FunctionDef, out: &mut String) {
    let ty = if f.ret.is_some() { "int" } else { "void" };
    let params: Vec<String> = f.params.iter().map(|p| format!("int {p}")).collect();
    let _ = write!(out, "{ty} {}({})", f.name, params.join(", "));
    let decls: Vec<String> = f
        .locals
        .iter()
        .filter_map(|l| match &l.kind {
            LocalKind::Scalar { for_scoped: false } => Some(format!("int {};", l.name)),
            LocalKind::Array(ArrayLen::Literal(n)) => Some(format!("int {}[{n}];", l.name)),
            LocalKind::Array(ArrayLen::Symbolic(n)) => Some(format!("int {}[{n}];", l.name)),
            LocalKind::Scalar { for_scoped: true } | LocalKind::Const(_) => None,
        })
        .collect();
    if decls.is_empty() && f.body.is_empty() && f.ret.is_none() {
        out.push_str(" { }\n");
        return;
    }
    out.push_str(" {\n");
    for d in decls {
        let _ = writeln!(out, "{INDENT}{d}");
    }
    let p = Printer { f };
    p.block_items(&f.body, 1, out);
    if let Some(r) = &f.ret {
        let _ = writeln!(out, "{INDENT}return {r};");
    }
    out.push_str("}\n");
}

struct Printer<'a> {
    f: &'a FunctionDef,
}

impl Printer<'_> {
    fn block_items(&self, block: &[Stmt], depth: usize, out: &mut String) {
        for s in block {
            self.stmt(s, depth, out);
        }
    }

    /// Writes `{ ... }` starting at the current position, closing at `depth`.
    fn braced(&self, block: &[Stmt], depth: usize, out: &mut String) {
        if block.is_empty() {
            out.push_str("{ }");
            return;
        }
        out.push_str("{\n");
        self.block_items(block, depth + 1, out);
        out.push_str(&INDENT.repeat(depth));
        out.push('}');
    }

    fn stmt(&self, s: &Stmt, depth: usize, out: &mut String) {
        let pad = INDENT.repeat(depth);
        out.push_str(&pad);
        match &s.kind {
            StmtKind::Assign { target, expr } => {
                let lhs = match target {
                    LValue::Var(v) => v.clone(),
                    LValue::Index(a, i) => format!("{a}[{}]", self.expr(i)),
                };
                let _ = writeln!(out, "{lhs} = {};", self.expr(expr));
            }
            StmtKind::Call {
                target,
                callee,
                args,
            } => {
                let args: Vec<String> = args.iter().map(|a| self.expr(a)).collect();
                let _ = writeln!(out, "{target} = {callee}({});", args.join(", "));
            }
            StmtKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                let _ = write!(out, "if ({}) ", self.cond(cond));
                self.braced(then_branch, depth, out);
                if !else_branch.is_empty() {
                    out.push_str(" else ");
                    self.braced(else_branch, depth, out);
                }
                out.push('\n');
            }
            StmtKind::While { cond, body } => {
                let _ = write!(out, "while ({}) ", self.cond(cond));
                self.braced(body, depth, out);
                out.push('\n');
            }
            StmtKind::For {
                counter,
                init,
                bound,
                body,
            } => {
                let scoped = matches!(
                    self.f.local(counter),
                    Some(Local {
                        kind: LocalKind::Scalar { for_scoped: true },
                        ..
                    })
                );
                let init = match init {
                    Some(e) if scoped => format!("int {counter} = {}", self.expr(e)),
                    Some(e) => format!("{counter} = {}", self.expr(e)),
                    None => String::new(),
                };
                let _ = write!(
                    out,
                    "for ({init}; {counter} < {}; {counter}++) ",
                    self.var(bound)
                );
                self.braced(body, depth, out);
                out.push('\n');
            }
            StmtKind::Sections(sections) => {
                out.push_str("#pragma omp parallel sections\n");
                let _ = writeln!(out, "{pad}{{");
                let inner = INDENT.repeat(depth + 1);
                for sec in sections {
                    let _ = writeln!(out, "{inner}#pragma omp section");
                    out.push_str(&inner);
                    self.braced(sec, depth + 1, out);
                    out.push('\n');
                }
                let _ = writeln!(out, "{pad}}}");
            }
        }
    }

    fn var(&self, name: &str) -> String {
        match self.f.const_value(name) {
            Some(v) => v.to_string(),
            None => name.to_string(),
        }
    }

    fn expr(&self, e: &Expr) -> String {
        fn prec(e: &Expr) -> u8 {
            match e {
                Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
                Expr::Bin(BinOp::Mul, ..) => 2,
                _ => 3,
            }
        }
        match e {
            Expr::Var(v) => self.var(v),
            Expr::Const(c) => c.to_string(),
            Expr::Index(a, i) => format!("{a}[{}]", self.expr(i)),
            Expr::Bin(op, l, r) => {
                let p = prec(e);
                let ls = if prec(l) < p {
                    format!("({})", self.expr(l))
                } else {
                    self.expr(l)
                };
                let rs = if prec(r) <= p {
                    format!("({})", self.expr(r))
                } else {
                    self.expr(r)
                };
                format!("{ls} {} {rs}", op.symbol())
            }
        }
    }

    fn cond(&self, c: &Cond) -> String {
        fn prec(c: &Cond) -> u8 {
            match c {
                Cond::Or(..) => 1,
                Cond::And(..) => 2,
                _ => 3,
            }
        }
        let side = |sub: &Cond, parent: u8, right: bool| {
            let needs = if right {
                prec(sub) <= parent
            } else {
                prec(sub) < parent
            };
            if needs {
                format!("({})", self.cond(sub))
            } else {
                self.cond(sub)
            }
        };
        match c {
            Cond::Cmp(op, l, r) => format!("{} {} {}", self.expr(l), op.symbol(), self.expr(r)),
            Cond::And(a, b) => format!("{} && {}", side(a, 2, false), side(b, 2, true)),
            Cond::Or(a, b) => format!("{} || {}", side(a, 1, false), side(b, 1, true)),
            Cond::Not(inner) => format!("!({})", self.cond(inner)),
        }
    }
}
