use std::collections::BTreeSet;

use super::ast::*;
use super::lexer::{tokenize, Kw, Tok, Token};
use super::validate;
use super::FrontendError;

type PResult<T> = Result<T, FrontendError>;

/// Parses C-subset source text into a validated, renumbered program.
pub fn parse(src: &str) -> PResult<Program> {
    let toks = tokenize(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        locals: Vec::new(),
        params: Vec::new(),
        header_names: BTreeSet::new(),
    };
    let mut program = Program::default();
    while p.peek() != &Tok::Eof {
        let f = p.function()?;
        if program.function(&f.name).is_some() {
            return Err(FrontendError::invalid(
                f.span,
                format!("function `{}` defined twice", f.name),
            ));
        }
        program.functions.push(f);
    }
    if program.function("main").is_some() {
        program.entry = Some("main".to_string());
    }
    for f in &mut program.functions {
        validate::normalize_function(f);
    }
    program.renumber();
    validate::validate(&program)?;
    Ok(program)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    locals: Vec<Local>,
    params: Vec<String>,
    header_names: BTreeSet<String>,
}

fn increments(s: &Stmt, var: &str) -> bool {
    match &s.kind {
        StmtKind::Assign {
            target: LValue::Var(t),
            expr: Expr::Bin(BinOp::Add, l, r),
        } => t == var && **l == Expr::Var(var.to_string()) && **r == Expr::Const(1),
        _ => false,
    }
}

fn literal_bound_name(v: i64) -> String {
    if v < 0 {
        format!("__bound_m{}", v.unsigned_abs())
    } else {
        format!("__bound_{v}")
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &str) -> PResult<()> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{p}`")))
        }
    }

    fn expect_kw(&mut self, kw: Kw) -> PResult<()> {
        if self.peek() == &Tok::Kw(kw) {
            self.next();
            Ok(())
        } else {
            Err(self.unexpected(&format!("{kw:?}").to_lowercase()))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    fn unexpected(&self, wanted: &str) -> FrontendError {
        let found = match self.peek() {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(v) => format!("`{v}`"),
            Tok::Kw(k) => format!("`{}`", format!("{k:?}").to_lowercase()),
            Tok::Punct(p) => format!("`{p}`"),
            Tok::PragmaSections | Tok::PragmaSection => "pragma".to_string(),
            Tok::Eof => "end of input".to_string(),
        };
        FrontendError::syntax(self.span(), format!("expected {wanted}, found {found}"))
    }

    fn declared(&self, name: &str) -> bool {
        self.params.iter().any(|p| p == name) || self.locals.iter().any(|l| l.name == name)
    }

    fn declare(&mut self, span: Span, name: String, kind: LocalKind) -> PResult<()> {
        let header = matches!(kind, LocalKind::Scalar { for_scoped: true });
        if header && self.header_names.contains(&name) {
            return Ok(());
        }
        if self.declared(&name) {
            return Err(FrontendError::invalid(
                span,
                format!("`{name}` declared twice"),
            ));
        }
        if header {
            self.header_names.insert(name.clone());
        }
        self.locals.push(Local { name, kind });
        Ok(())
    }

    fn function(&mut self) -> PResult<FunctionDef> {
        let span = self.span();
        match self.peek() {
            Tok::Kw(Kw::Int) | Tok::Kw(Kw::Void) => {
                self.next();
            }
            _ => return Err(self.unexpected("function definition")),
        }
        if self.is_punct("*") {
            return Err(FrontendError::unsupported(self.span(), "pointer"));
        }
        let name = self.ident()?;
        self.params.clear();
        self.locals.clear();
        self.header_names.clear();
        self.expect_punct("(")?;
        if self.peek() == &Tok::Kw(Kw::Void) && matches!(self.peek_at(1), Tok::Punct(")")) {
            self.next();
        }
        if !self.is_punct(")") {
            loop {
                let pspan = self.span();
                self.expect_kw(Kw::Int)?;
                if self.is_punct("*") {
                    return Err(FrontendError::unsupported(self.span(), "pointer"));
                }
                let p = self.ident()?;
                if self.is_punct("[") {
                    return Err(FrontendError::unsupported(self.span(), "array parameter"));
                }
                if self.params.contains(&p) {
                    return Err(FrontendError::invalid(
                        pspan,
                        format!("parameter `{p}` repeated"),
                    ));
                }
                self.params.push(p);
                if !self.eat_punct(",") {
                    break;
                }
            }
        }
        self.expect_punct(")")?;
        if self.is_punct(";") {
            return Err(FrontendError::unsupported(
                self.span(),
                "function prototype",
            ));
        }
        self.expect_punct("{")?;
        let mut body = Vec::new();
        let mut ret = None;
        while !self.is_punct("}") {
            if ret.is_some() {
                return Err(FrontendError::unsupported(
                    self.span(),
                    "statement after return",
                ));
            }
            if self.peek() == &Tok::Kw(Kw::Return) {
                self.next();
                if self.is_punct(";") {
                    return Err(FrontendError::unsupported(self.span(), "bare return"));
                }
                let rspan = self.span();
                let v = match self.peek().clone() {
                    Tok::Ident(v) if matches!(self.peek_at(1), Tok::Punct(";")) => {
                        self.next();
                        v
                    }
                    _ => {
                        return Err(FrontendError::unsupported(
                            rspan,
                            "return of a non-variable expression",
                        ))
                    }
                };
                self.expect_punct(";")?;
                ret = Some(v);
                continue;
            }
            self.item(&mut body)?;
        }
        self.expect_punct("}")?;
        Ok(FunctionDef {
            name,
            params: std::mem::take(&mut self.params),
            locals: std::mem::take(&mut self.locals),
            body,
            ret,
            span,
        })
    }

    /// One declaration or statement, appended to `out`.
    fn item(&mut self, out: &mut Vec<Stmt>) -> PResult<()> {
        if self.peek() == &Tok::Kw(Kw::Int) {
            return self.declaration(out);
        }
        self.statement(out)
    }

    fn declaration(&mut self, out: &mut Vec<Stmt>) -> PResult<()> {
        self.expect_kw(Kw::Int)?;
        loop {
            let span = self.span();
            if self.is_punct("*") {
                return Err(FrontendError::unsupported(span, "pointer"));
            }
            let name = self.ident()?;
            if self.eat_punct("[") {
                let len = match self.next().tok {
                    Tok::Int(v) if v >= 0 => ArrayLen::Literal(v as u64),
                    Tok::Ident(n) => ArrayLen::Symbolic(n),
                    _ => return Err(FrontendError::syntax(span, "bad array length")),
                };
                self.expect_punct("]")?;
                if self.is_punct("[") {
                    return Err(FrontendError::unsupported(span, "multi-dimensional array"));
                }
                if self.is_punct("=") {
                    return Err(FrontendError::unsupported(span, "array initializer"));
                }
                self.declare(span, name, LocalKind::Array(len))?;
            } else {
                self.declare(span, name.clone(), LocalKind::Scalar { for_scoped: false })?;
                if self.eat_punct("=") {
                    let expr = self.expr()?;
                    out.push(Stmt {
                        id: StmtId::default(),
                        span,
                        kind: StmtKind::Assign {
                            target: LValue::Var(name),
                            expr,
                        },
                    });
                }
            }
            if !self.eat_punct(",") {
                break;
            }
        }
        self.expect_punct(";")
    }

    fn block_or_stmt(&mut self) -> PResult<Vec<Stmt>> {
        let mut out = Vec::new();
        if self.peek() == &Tok::Kw(Kw::Int) {
            return Err(FrontendError::syntax(
                self.span(),
                "declaration must be inside a block",
            ));
        }
        self.statement(&mut out)?;
        Ok(out)
    }

    fn statement(&mut self, out: &mut Vec<Stmt>) -> PResult<()> {
        let span = self.span();
        let mk = |kind| Stmt {
            id: StmtId::default(),
            span,
            kind,
        };
        match self.peek().clone() {
            Tok::Punct(";") => {
                self.next();
                Ok(())
            }
            Tok::Punct("{") => {
                self.next();
                while !self.is_punct("}") {
                    if self.peek() == &Tok::Eof {
                        return Err(self.unexpected("`}`"));
                    }
                    if self.peek() == &Tok::Kw(Kw::Return) {
                        return Err(FrontendError::unsupported(
                            self.span(),
                            "return outside tail position",
                        ));
                    }
                    self.item(out)?;
                }
                self.next();
                Ok(())
            }
            Tok::Kw(Kw::If) => {
                self.next();
                self.expect_punct("(")?;
                let cond = self.cond()?;
                self.expect_punct(")")?;
                let then_branch = self.block_or_stmt()?;
                let else_branch = if self.peek() == &Tok::Kw(Kw::Else) {
                    self.next();
                    self.block_or_stmt()?
                } else {
                    Vec::new()
                };
                out.push(mk(StmtKind::If {
                    cond,
                    then_branch,
                    else_branch,
                }));
                Ok(())
            }
            Tok::Kw(Kw::While) => {
                self.next();
                self.expect_punct("(")?;
                let cond = self.cond()?;
                self.expect_punct(")")?;
                let body = self.block_or_stmt()?;
                out.push(mk(StmtKind::While { cond, body }));
                Ok(())
            }
            Tok::Kw(Kw::For) => self.for_loop(out),
            Tok::Kw(Kw::Return) => Err(FrontendError::unsupported(
                span,
                "return outside tail position",
            )),
            Tok::PragmaSections => {
                self.next();
                self.expect_punct("{")?;
                let mut sections = Vec::new();
                while self.peek() == &Tok::PragmaSection {
                    self.next();
                    sections.push(self.block_or_stmt()?);
                }
                self.expect_punct("}")?;
                out.push(mk(StmtKind::Sections(sections)));
                Ok(())
            }
            Tok::PragmaSection => Err(FrontendError::syntax(
                span,
                "`#pragma omp section` outside parallel sections",
            )),
            _ => {
                let s = self.simple_statement()?;
                self.expect_punct(";")?;
                out.push(s);
                Ok(())
            }
        }
    }

    /// Assignment, increment or call, without the trailing `;`.
    fn simple_statement(&mut self) -> PResult<Stmt> {
        let span = self.span();
        let mk = |kind| Stmt {
            id: StmtId::default(),
            span,
            kind,
        };
        if self.is_punct("++") || self.is_punct("--") {
            let op = if self.is_punct("++") {
                BinOp::Add
            } else {
                BinOp::Sub
            };
            self.next();
            let v = self.ident()?;
            return Ok(mk(StmtKind::Assign {
                target: LValue::Var(v.clone()),
                expr: Expr::bin(op, Expr::Var(v), Expr::Const(1)),
            }));
        }
        if self.is_punct("*") {
            return Err(FrontendError::unsupported(span, "pointer"));
        }
        let name = self.ident()?;
        if self.is_punct("(") {
            return Err(FrontendError::unsupported(
                span,
                "call whose result is discarded",
            ));
        }
        let target = if self.eat_punct("[") {
            let idx = self.expr()?;
            self.expect_punct("]")?;
            LValue::Index(name, idx)
        } else {
            LValue::Var(name)
        };
        let current = || match &target {
            LValue::Var(v) => Expr::Var(v.clone()),
            LValue::Index(a, i) => Expr::Index(a.clone(), Box::new(i.clone())),
        };
        let expr = match self.next().tok {
            Tok::Punct("=") => {
                if let (Tok::Ident(callee), Tok::Punct("(")) =
                    (self.peek().clone(), self.peek_at(1).clone())
                {
                    let LValue::Var(t) = target else {
                        return Err(FrontendError::unsupported(
                            span,
                            "call result stored into an array element",
                        ));
                    };
                    self.next();
                    self.next();
                    let mut args = Vec::new();
                    if !self.is_punct(")") {
                        loop {
                            args.push(self.expr()?);
                            if !self.eat_punct(",") {
                                break;
                            }
                        }
                    }
                    self.expect_punct(")")?;
                    return Ok(mk(StmtKind::Call {
                        target: t,
                        callee,
                        args,
                    }));
                }
                self.expr()?
            }
            Tok::Punct("+=") => Expr::bin(BinOp::Add, current(), self.expr()?),
            Tok::Punct("-=") => Expr::bin(BinOp::Sub, current(), self.expr()?),
            Tok::Punct("*=") => Expr::bin(BinOp::Mul, current(), self.expr()?),
            Tok::Punct("++") => Expr::bin(BinOp::Add, current(), Expr::Const(1)),
            Tok::Punct("--") => Expr::bin(BinOp::Sub, current(), Expr::Const(1)),
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("assignment operator"));
            }
        };
        Ok(mk(StmtKind::Assign { target, expr }))
    }

    fn for_loop(&mut self, out: &mut Vec<Stmt>) -> PResult<()> {
        let span = self.span();
        self.expect_kw(Kw::For)?;
        self.expect_punct("(")?;
        let mut header_counter = None;
        let init = if self.is_punct(";") {
            None
        } else if self.peek() == &Tok::Kw(Kw::Int) {
            self.next();
            let ispan = self.span();
            let name = self.ident()?;
            self.expect_punct("=")?;
            let e = self.expr()?;
            if self.is_punct(",") {
                return Err(FrontendError::unsupported(
                    ispan,
                    "multiple for-loop declarations",
                ));
            }
            self.declare(ispan, name.clone(), LocalKind::Scalar { for_scoped: true })?;
            header_counter = Some(name.clone());
            Some(Stmt {
                id: StmtId::default(),
                span: ispan,
                kind: StmtKind::Assign {
                    target: LValue::Var(name),
                    expr: e,
                },
            })
        } else {
            Some(self.simple_statement()?)
        };
        self.expect_punct(";")?;
        let cond = if self.is_punct(";") {
            Cond::Cmp(CmpOp::Ne, Expr::Const(1), Expr::Const(0))
        } else {
            self.cond()?
        };
        self.expect_punct(";")?;
        let step = if self.is_punct(")") {
            None
        } else {
            Some(self.simple_statement()?)
        };
        self.expect_punct(")")?;
        let body = self.block_or_stmt()?;

        // Recognize `for (i = e; i < x; i++)` with i and x untouched by the body.
        let counted = match (&init, &cond, &step) {
            (init, Cond::Cmp(CmpOp::Lt, Expr::Var(i), bound), Some(step))
                if increments(step, i)
                    && matches!(bound, Expr::Var(_) | Expr::Const(_))
                    && match init {
                        None => true,
                        Some(Stmt {
                            kind:
                                StmtKind::Assign {
                                    target: LValue::Var(t),
                                    ..
                                },
                            ..
                        }) => t == i,
                        Some(_) => false,
                    } =>
            {
                let defs = validate::block_defs(&body);
                let bound_ok = match bound {
                    Expr::Var(x) => x != i && !defs.contains(x) && !self.is_array_local(x),
                    _ => true,
                };
                (bound_ok && !defs.contains(i) && !self.is_array_local(i))
                    .then(|| (i.clone(), bound.clone()))
            }
            _ => None,
        };

        match counted {
            Some((counter, bound)) => {
                let bound = match bound {
                    Expr::Var(x) => x,
                    Expr::Const(v) => {
                        let name = literal_bound_name(v);
                        if !self.locals.iter().any(|l| l.name == name) {
                            self.declare(span, name.clone(), LocalKind::Const(v))?;
                        }
                        name
                    }
                    _ => unreachable!(),
                };
                let init = init.map(|s| match s.kind {
                    StmtKind::Assign { expr, .. } => expr,
                    _ => unreachable!(),
                });
                out.push(Stmt {
                    id: StmtId::default(),
                    span,
                    kind: StmtKind::For {
                        counter,
                        init,
                        bound,
                        body,
                    },
                });
            }
            None => {
                if let Some(c) = header_counter {
                    self.unscope(&c);
                }
                out.extend(init);
                let mut body = body;
                body.extend(step);
                out.push(Stmt {
                    id: StmtId::default(),
                    span,
                    kind: StmtKind::While { cond, body },
                });
            }
        }
        Ok(())
    }

    fn is_array_local(&self, name: &str) -> bool {
        self.locals
            .iter()
            .any(|l| l.name == name && matches!(l.kind, LocalKind::Array(_)))
    }

    fn unscope(&mut self, name: &str) {
        for l in &mut self.locals {
            if l.name == name {
                l.kind = LocalKind::Scalar { for_scoped: false };
            }
        }
    }

    fn cond(&mut self) -> PResult<Cond> {
        let mut lhs = self.cond_and()?;
        while self.eat_punct("||") {
            let rhs = self.cond_and()?;
            lhs = Cond::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn cond_and(&mut self) -> PResult<Cond> {
        let mut lhs = self.cond_unary()?;
        while self.eat_punct("&&") {
            let rhs = self.cond_unary()?;
            lhs = Cond::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn cond_unary(&mut self) -> PResult<Cond> {
        if self.eat_punct("!") {
            return Ok(Cond::Not(Box::new(self.cond_unary()?)));
        }
        if self.is_punct("(") {
            let save = self.pos;
            self.next();
            if let Ok(c) = self.cond() {
                if self.eat_punct(")") && !self.continues_expression() {
                    return Ok(c);
                }
            }
            self.pos = save;
        }
        self.comparison()
    }

    fn continues_expression(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Punct("<" | "<=" | ">" | ">=" | "==" | "!=" | "+" | "-" | "*")
        )
    }

    fn comparison(&mut self) -> PResult<Cond> {
        let lhs = self.expr()?;
        let op = match self.peek() {
            Tok::Punct("<") => CmpOp::Lt,
            Tok::Punct("<=") => CmpOp::Le,
            Tok::Punct(">") => CmpOp::Gt,
            Tok::Punct(">=") => CmpOp::Ge,
            Tok::Punct("==") => CmpOp::Eq,
            Tok::Punct("!=") => CmpOp::Ne,
            _ => return Ok(Cond::Cmp(CmpOp::Ne, lhs, Expr::Const(0))),
        };
        self.next();
        let rhs = self.expr()?;
        Ok(Cond::Cmp(op, lhs, rhs))
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Punct("+") => BinOp::Add,
                Tok::Punct("-") => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.term()?;
            lhs = Expr::bin(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while self.eat_punct("*") {
            let rhs = self.unary()?;
            lhs = Expr::bin(BinOp::Mul, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.eat_punct("-") {
            return Ok(match self.unary()? {
                Expr::Const(v) => Expr::Const(-v),
                e => Expr::bin(BinOp::Sub, Expr::Const(0), e),
            });
        }
        if self.eat_punct("+") {
            return self.unary();
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Expr> {
        let span = self.span();
        match self.next().tok {
            Tok::Int(v) => Ok(Expr::Const(v)),
            Tok::Ident(name) => {
                if self.is_punct("(") {
                    return Err(FrontendError::unsupported(span, "nested call"));
                }
                if self.eat_punct("[") {
                    let idx = self.expr()?;
                    self.expect_punct("]")?;
                    Ok(Expr::Index(name, Box::new(idx)))
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Tok::Punct("(") => {
                let e = self.expr()?;
                self.expect_punct(")")?;
                Ok(e)
            }
            Tok::Punct("*") => Err(FrontendError::unsupported(span, "pointer")),
            _ => {
                self.pos -= 1;
                Err(self.unexpected("expression"))
            }
        }
    }
}

/// Identifiers referenced anywhere in a block, for diagnostics and scoping.
pub(crate) fn referenced(block: &[Stmt]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    walk_block(block, &mut |s| match &s.kind {
        StmtKind::Assign { target, expr } => {
            out.insert(target.name().to_string());
            if let LValue::Index(_, i) = target {
                i.collect_vars(&mut out);
            }
            expr.collect_vars(&mut out);
        }
        StmtKind::If { cond, .. } | StmtKind::While { cond, .. } => cond.collect_vars(&mut out),
        StmtKind::For {
            counter,
            init,
            bound,
            ..
        } => {
            out.insert(counter.clone());
            out.insert(bound.clone());
            if let Some(e) = init {
                e.collect_vars(&mut out);
            }
        }
        StmtKind::Call { target, args, .. } => {
            out.insert(target.clone());
            for a in args {
                a.collect_vars(&mut out);
            }
        }
        StmtKind::Sections(_) => {}
    });
    out
}
