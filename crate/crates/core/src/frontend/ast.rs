//! Abstract syntax for the analyzed C subset.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

/// Source position of a node (1-based line and column).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Self {
        Span { line, col }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Pre-order statement number, unique within a program.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct StmtId(pub u32);

impl fmt::Display for StmtId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Program {
    pub functions: Vec<FunctionDef>,
    pub entry: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionDef {
    pub name: String,
    pub params: Vec<String>,
    pub locals: Vec<Local>,
    pub body: Vec<Stmt>,
    /// Variable named by the tail `return`; `None` for `void` functions.
    pub ret: Option<String>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Local {
    pub name: String,
    pub kind: LocalKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalKind {
    Scalar {
        /// Declared in a `for (int i = ...)` header and only ever used as that
        /// loop's counter, so the emitter re-declares it in each header.
        for_scoped: bool,
    },
    Array(ArrayLen),
    /// Read-only variable standing for a literal loop bound.
    Const(i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArrayLen {
    Literal(u64),
    Symbolic(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stmt {
    pub id: StmtId,
    pub span: Span,
    pub kind: StmtKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    Assign {
        target: LValue,
        expr: Expr,
    },
    If {
        cond: Cond,
        then_branch: Vec<Stmt>,
        else_branch: Vec<Stmt>,
    },
    While {
        cond: Cond,
        body: Vec<Stmt>,
    },
    /// `for (counter = init; counter < bound; counter++) body`.
    ///
    /// `init` is `None` for a loop that resumes from the counter's current
    /// value (`for (; i < n; i++)`).
    For {
        counter: String,
        init: Option<Expr>,
        bound: String,
        body: Vec<Stmt>,
    },
    Call {
        target: String,
        callee: String,
        args: Vec<Expr>,
    },
    /// `#pragma omp parallel sections`, one block per `#pragma omp section`.
    Sections(Vec<Vec<Stmt>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LValue {
    Var(String),
    Index(String, Expr),
}

impl LValue {
    pub fn name(&self) -> &str {
        match self {
            LValue::Var(n) | LValue::Index(n, _) => n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Var(String),
    Const(i64),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Index(String, Box<Expr>),
}

impl Expr {
    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn bin(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr::Bin(op, Box::new(l), Box::new(r))
    }

    /// Every identifier read by the expression, arrays included.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Const(_) => {}
            Expr::Bin(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Expr::Index(a, idx) => {
                out.insert(a.clone());
                idx.collect_vars(out);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cond {
    Cmp(CmpOp, Expr, Expr),
    And(Box<Cond>, Box<Cond>),
    Or(Box<Cond>, Box<Cond>),
    Not(Box<Cond>),
}

impl Cond {
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Cond::Cmp(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Cond::And(a, b) | Cond::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Cond::Not(c) => c.collect_vars(out),
        }
    }
}

impl Stmt {
    pub fn new(kind: StmtKind) -> Stmt {
        Stmt {
            id: StmtId::default(),
            span: Span::default(),
            kind,
        }
    }

    pub fn assign(target: &str, expr: Expr) -> Stmt {
        Stmt::new(StmtKind::Assign {
            target: LValue::Var(target.to_string()),
            expr,
        })
    }

    pub fn is_loop(&self) -> bool {
        matches!(self.kind, StmtKind::While { .. } | StmtKind::For { .. })
    }

    /// Immediate child statement blocks.
    pub fn blocks(&self) -> Vec<&Vec<Stmt>> {
        match &self.kind {
            StmtKind::If {
                then_branch,
                else_branch,
                ..
            } => vec![then_branch, else_branch],
            StmtKind::While { body, .. } | StmtKind::For { body, .. } => vec![body],
            StmtKind::Sections(secs) => secs.iter().collect(),
            StmtKind::Assign { .. } | StmtKind::Call { .. } => vec![],
        }
    }

    pub fn blocks_mut(&mut self) -> Vec<&mut Vec<Stmt>> {
        match &mut self.kind {
            StmtKind::If {
                then_branch,
                else_branch,
                ..
            } => vec![then_branch, else_branch],
            StmtKind::While { body, .. } | StmtKind::For { body, .. } => vec![body],
            StmtKind::Sections(secs) => secs.iter_mut().collect(),
            StmtKind::Assign { .. } | StmtKind::Call { .. } => vec![],
        }
    }

    /// Pre-order walk over this statement and everything nested in it.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Stmt)) {
        f(self);
        for block in self.blocks() {
            for s in block {
                s.walk(f);
            }
        }
    }
}

pub fn walk_block<'a>(block: &'a [Stmt], f: &mut impl FnMut(&'a Stmt)) {
    for s in block {
        s.walk(f);
    }
}

fn walk_block_mut(block: &mut [Stmt], f: &mut impl FnMut(&mut Stmt)) {
    for s in block {
        f(s);
        for b in s.blocks_mut() {
            walk_block_mut(b, f);
        }
    }
}

impl FunctionDef {
    pub fn local(&self, name: &str) -> Option<&Local> {
        self.locals.iter().find(|l| l.name == name)
    }

    pub fn is_param(&self, name: &str) -> bool {
        self.params.iter().any(|p| p == name)
    }

    pub fn is_array(&self, name: &str) -> bool {
        matches!(
            self.local(name),
            Some(Local {
                kind: LocalKind::Array(_),
                ..
            })
        )
    }

    /// Literal value of a synthetic bound variable, if `name` is one.
    pub fn const_value(&self, name: &str) -> Option<i64> {
        match self.local(name) {
            Some(Local {
                kind: LocalKind::Const(v),
                ..
            }) => Some(*v),
            _ => None,
        }
    }

    /// All variables: parameters first, then locals in declaration order.
    pub fn variables(&self) -> Vec<String> {
        self.params
            .iter()
            .cloned()
            .chain(self.locals.iter().map(|l| l.name.clone()))
            .collect()
    }

    pub fn declares(&self, name: &str) -> bool {
        self.is_param(name) || self.local(name).is_some()
    }

    /// Returns a name not yet declared in this function, derived from `base`.
    pub fn fresh_name(&self, base: &str) -> String {
        let mut k = 0;
        loop {
            let cand = format!("{base}_{k}");
            if !self.declares(&cand) {
                return cand;
            }
            k += 1;
        }
    }
}

impl Program {
    pub fn function(&self, name: &str) -> Option<&FunctionDef> {
        self.functions.iter().find(|f| f.name == name)
    }

    pub fn function_mut(&mut self, name: &str) -> Option<&mut FunctionDef> {
        self.functions.iter_mut().find(|f| f.name == name)
    }

    /// The function executed by default: `entry` if set, else the last one.
    pub fn entry_function(&self) -> Option<&FunctionDef> {
        match &self.entry {
            Some(e) => self.function(e),
            None => self.functions.last(),
        }
    }

    pub fn max_stmt_id(&self) -> u32 {
        let mut max = 0;
        for f in &self.functions {
            walk_block(&f.body, &mut |s| max = max.max(s.id.0));
        }
        max
    }

    /// Renumbers every statement in pre-order starting from 1.
    pub fn renumber(&mut self) {
        let mut next = 1;
        for f in &mut self.functions {
            walk_block_mut(&mut f.body, &mut |s| {
                s.id = StmtId(next);
                next += 1;
            });
        }
    }

    /// Copy with every span reset, for structural comparison.
    pub fn without_spans(&self) -> Program {
        let mut p = self.clone();
        for f in &mut p.functions {
            f.span = Span::default();
            walk_block_mut(&mut f.body, &mut |s| s.span = Span::default());
        }
        p
    }

    pub fn stmt_count(&self) -> usize {
        let mut n = 0;
        for f in &self.functions {
            walk_block(&f.body, &mut |_| n += 1);
        }
        n
    }
}

/// Finds a statement by id anywhere in the block.
pub fn find_stmt(block: &[Stmt], id: StmtId) -> Option<&Stmt> {
    let mut found = None;
    walk_block(block, &mut |s| {
        if s.id == id && found.is_none() {
            found = Some(s);
        }
    });
    found
}
