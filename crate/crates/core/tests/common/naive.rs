//! Branch-committing reference analysis: every choice point is resolved by
//! a fixed assignment up front and only plain scalar matrices are built.

use std::collections::BTreeMap;

use mwp_core::algebra::MwpScalar::{self, *};
use mwp_core::frontend::{BinOp, Expr, FunctionDef, LValue, Program, Stmt, StmtKind};

pub type Mat = Vec<Vec<MwpScalar>>;

pub fn id(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { M } else { O }).collect())
        .collect()
}

pub fn add(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| *x + *y).collect())
        .collect()
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(O, |acc, k| acc + a[i][k] * b[k][j]))
                .collect()
        })
        .collect()
}

pub fn star(a: &Mat) -> Mat {
    let n = a.len();
    let mut x = id(n);
    loop {
        let next = add(&id(n), &mul(a, &x));
        if next == x {
            return x;
        }
        x = next;
    }
}

/// Scalar result of a function: matrix, choice-point count, and whether a
/// side condition failed somewhere along the way.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub matrix: Mat,
    pub points: usize,
    pub failed: bool,
}

impl Outcome {
    pub fn feasible(&self) -> bool {
        !self.failed && self.matrix.iter().flatten().all(|c| *c != Inf)
    }
}

pub struct Naive<'a> {
    vars: Vec<String>,
    sigma: &'a [u8],
    next: usize,
    failed: bool,
    summaries: &'a BTreeMap<String, Vec<MwpScalar>>,
}

impl<'a> Naive<'a> {
    fn ix(&self, v: &str) -> usize {
        self.vars.iter().position(|x| x == v).unwrap()
    }

    fn choice(&mut self) -> u8 {
        let c = self.sigma.get(self.next).copied().unwrap_or(0);
        self.next += 1;
        c
    }

    fn expr(&mut self, e: &Expr) -> Vec<MwpScalar> {
        let n = self.vars.len();
        match e {
            Expr::Var(x) => {
                let mut v = vec![O; n];
                v[self.ix(x)] = M;
                v
            }
            Expr::Const(_) => vec![O; n],
            Expr::Index(a, idx) => {
                let mut v = vec![O; n];
                v[self.ix(a)] = M;
                for x in idx.vars() {
                    let k = self.ix(&x);
                    v[k] = v[k] + W;
                }
                v
            }
            Expr::Bin(BinOp::Mul, l, r) => {
                let (a, b) = (self.expr(l), self.expr(r));
                a.iter().zip(&b).map(|(x, y)| W * *x + W * *y).collect()
            }
            Expr::Bin(_, l, r) => {
                let (a, b) = (self.expr(l), self.expr(r));
                let (ca, cb) = match self.choice() {
                    0 => (M, P),
                    1 => (P, M),
                    _ => (W, W),
                };
                a.iter().zip(&b).map(|(x, y)| ca * *x + cb * *y).collect()
            }
        }
    }

    fn with_column(&self, j: usize, col: Vec<MwpScalar>) -> Mat {
        let mut m = id(self.vars.len());
        for (i, c) in col.into_iter().enumerate() {
            m[i][j] = c;
        }
        m
    }

    fn block(&mut self, b: &[Stmt]) -> Mat {
        let mut acc = id(self.vars.len());
        for s in b {
            let m = self.stmt(s);
            acc = mul(&acc, &m);
        }
        acc
    }

    fn stmt(&mut self, s: &Stmt) -> Mat {
        let n = self.vars.len();
        match &s.kind {
            StmtKind::Assign { target, expr } => {
                let mut col = self.expr(expr);
                let j = self.ix(target.name());
                if let LValue::Index(..) = target {
                    col[j] = col[j] + M;
                }
                self.with_column(j, col)
            }
            StmtKind::Call {
                target,
                callee,
                args,
            } => {
                let summary = &self.summaries[callee];
                if summary.contains(&Inf) {
                    self.failed = true;
                }
                let mut col = vec![O; n];
                for (k, a) in args.iter().enumerate() {
                    let v = self.expr(a);
                    for i in 0..n {
                        col[i] = col[i] + summary[k] * v[i];
                    }
                }
                self.with_column(self.ix(target), col)
            }
            StmtKind::If {
                then_branch,
                else_branch,
                ..
            } => {
                let t = self.block(then_branch);
                let e = self.block(else_branch);
                add(&t, &e)
            }
            StmtKind::While { body, .. } => {
                let mut x = star(&self.block(body));
                for i in 0..n {
                    for j in 0..n {
                        let bad = (i == j && x[i][j] > M) || x[i][j] == P;
                        if bad {
                            x[i][j] = Inf;
                            self.failed = true;
                        }
                    }
                }
                x
            }
            StmtKind::For {
                counter,
                init,
                bound,
                body,
            } => {
                let init_col = init.as_ref().map(|e| self.expr(e));
                let mut x = star(&self.block(body));
                for k in 0..n {
                    if x[k][k] > M {
                        if x[k][k] != Inf {
                            self.failed = true;
                        }
                        x[k][k] = Inf;
                    }
                }
                let (ci, li) = (self.ix(counter), self.ix(bound));
                for j in 0..n {
                    if (0..n).any(|i| x[i][j] >= P) {
                        x[li][j] = x[li][j] + P;
                    }
                }
                let mut jm = id(n);
                jm[li][ci] = M;
                let lp = mul(&mul(&jm, &x), &jm);
                match init_col {
                    Some(col) => mul(&self.with_column(ci, col), &lp),
                    None => lp,
                }
            }
            StmtKind::Sections(secs) => {
                let mut acc = id(n);
                for sec in secs {
                    acc = mul(&acc, &self.block(sec));
                }
                acc
            }
        }
    }
}

pub fn analyze(
    f: &FunctionDef,
    sigma: &[u8],
    summaries: &BTreeMap<String, Vec<MwpScalar>>,
) -> Outcome {
    let mut a = Naive {
        vars: f.variables(),
        sigma,
        next: 0,
        failed: false,
        summaries,
    };
    let matrix = a.block(&f.body);
    Outcome {
        matrix,
        points: a.next,
        failed: a.failed,
    }
}

/// Number of choice points, by a dry run.
pub fn choice_points(f: &FunctionDef, summaries: &BTreeMap<String, Vec<MwpScalar>>) -> usize {
    analyze(f, &[], summaries).points
}

pub fn assignments(k: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..3u8).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

/// Summary by enumerating every assignment of the function's choices.
pub fn summary(f: &FunctionDef, summaries: &BTreeMap<String, Vec<MwpScalar>>) -> Vec<MwpScalar> {
    let k = choice_points(f, summaries);
    let vars = f.variables();
    let feasible: Vec<Outcome> = assignments(k)
        .into_iter()
        .map(|s| analyze(f, &s, summaries))
        .filter(|o| o.feasible())
        .collect();
    if feasible.is_empty() {
        return vec![Inf; f.params.len()];
    }
    let Some(r) = f
        .ret
        .as_ref()
        .map(|r| vars.iter().position(|v| v == r).unwrap())
    else {
        return vec![O; f.params.len()];
    };
    f.params
        .iter()
        .map(|p| {
            let i = vars.iter().position(|v| v == p).unwrap();
            feasible.iter().map(|o| o.matrix[i][r]).max().unwrap()
        })
        .collect()
}

/// Summaries for a program without recursion, callees first; `None` if the
/// call graph has a cycle.
pub fn summaries(p: &Program) -> Option<BTreeMap<String, Vec<MwpScalar>>> {
    let mut done: BTreeMap<String, Vec<MwpScalar>> = BTreeMap::new();
    for _ in 0..=p.functions.len() {
        for f in &p.functions {
            if done.contains_key(&f.name) {
                continue;
            }
            let mut callees = Vec::new();
            mwp_core::frontend::walk_block(&f.body, &mut |s| {
                if let StmtKind::Call { callee, .. } = &s.kind {
                    callees.push(callee.clone());
                }
            });
            if callees.iter().all(|c| done.contains_key(c)) {
                let s = summary(f, &done);
                done.insert(f.name.clone(), s);
            }
        }
    }
    (done.len() == p.functions.len()).then_some(done)
}
