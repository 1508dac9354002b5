use std::collections::{BTreeMap, HashMap};

use super::{inject, AnalysisError, FunctionSummary, MwpVector};
use crate::algebra::{Delta, DeltaPoly, MwpMatrix, MwpScalar};
use crate::frontend::{BinOp, Expr, LValue, Span, Stmt, StmtKind};

use MwpScalar::{M, P, W};

/// Per-function analysis state: the variable order, the choice-point
/// allocator and the callee summaries in scope.
#[derive(Debug, Clone)]
pub struct Analyzer<'a> {
    vars: Vec<String>,
    index: HashMap<String, usize>,
    points: Vec<Span>,
    failures: Vec<Vec<Delta>>,
    summaries: &'a BTreeMap<String, FunctionSummary>,
}

impl<'a> Analyzer<'a> {
    pub fn new(vars: Vec<String>, summaries: &'a BTreeMap<String, FunctionSummary>) -> Self {
        let index = vars
            .iter()
            .enumerate()
            .map(|(k, v)| (v.clone(), k))
            .collect();
        Analyzer {
            vars,
            index,
            points: Vec::new(),
            failures: Vec::new(),
            summaries,
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Spans of the choice points allocated so far.
    pub fn choice_points(&self) -> &[Span] {
        &self.points
    }

    /// Delta sets under which a side condition failed so far.
    pub fn failures(&self) -> &[Vec<Delta>] {
        &self.failures
    }

    pub fn into_parts(self) -> (Vec<Span>, Vec<Vec<Delta>>) {
        (self.points, self.failures)
    }

    fn record(&mut self, added: DeltaPoly) {
        for m in added.monomials() {
            if !self.failures.iter().any(|f| f[..] == m.deltas[..]) {
                self.failures.push(m.deltas.to_vec());
            }
        }
    }

    fn idx(&self, v: &str) -> usize {
        *self
            .index
            .get(v)
            .unwrap_or_else(|| panic!("variable `{v}` missing from the analysis order"))
    }

    fn unit(&self, v: &str) -> Vec<DeltaPoly> {
        let mut col = vec![DeltaPoly::zero(); self.vars.len()];
        col[self.idx(v)] = DeltaPoly::constant(M);
        col
    }

    /// Column contributed by `e`. Choice points are numbered in post-order.
    pub fn expr(&mut self, e: &Expr, span: Span) -> Vec<DeltaPoly> {
        let n = self.vars.len();
        match e {
            Expr::Var(v) => self.unit(v),
            Expr::Const(_) => vec![DeltaPoly::zero(); n],
            Expr::Index(a, idx) => {
                let mut col = self.unit(a);
                let w = DeltaPoly::constant(W);
                for v in idx.vars() {
                    col[self.idx(&v)].add_assign(&w);
                }
                col
            }
            Expr::Bin(BinOp::Mul, l, r) => {
                let v1 = self.expr(l, span);
                let v2 = self.expr(r, span);
                v1.iter()
                    .zip(&v2)
                    .map(|(a, b)| a.scale(W).add(&b.scale(W)))
                    .collect()
            }
            Expr::Bin(BinOp::Add | BinOp::Sub, l, r) => {
                let v1 = self.expr(l, span);
                let v2 = self.expr(r, span);
                let j = self.points.len() as u32;
                self.points.push(span);
                let options = [(M, P), (P, M), (W, W)];
                v1.iter()
                    .zip(&v2)
                    .map(|(a, b)| {
                        let mut acc = DeltaPoly::zero();
                        if a.is_zero() && b.is_zero() {
                            return acc;
                        }
                        for (c, (ca, cb)) in options.iter().enumerate() {
                            let branch = a.scale(*ca).add(&b.scale(*cb));
                            acc.add_assign(&branch.guard(Delta::new(c as u8, j)));
                        }
                        acc
                    })
                    .collect()
            }
        }
    }

    /// Matrix of a statement sequence; the empty sequence is the identity.
    pub fn block(&mut self, block: &[Stmt]) -> Result<MwpMatrix, AnalysisError> {
        let mut acc = MwpMatrix::identity(self.vars.clone());
        for s in block {
            self.append(&mut acc, s)?;
        }
        Ok(acc)
    }

    /// `acc ← acc · ⟦s⟧`, replacing a single column for assignments.
    fn append(&mut self, acc: &mut MwpMatrix, s: &Stmt) -> Result<(), AnalysisError> {
        if let Some((target, col)) = self.column_stmt(s)? {
            let j = self.idx(&target);
            let new = acc.apply_to_column(&col);
            acc.set_column(j, new);
            return Ok(());
        }
        let m = self.compound(s)?;
        *acc = acc.mul(&m)?;
        Ok(())
    }

    /// For statements that rewrite a single column: the target and column.
    fn column_stmt(&mut self, s: &Stmt) -> Result<Option<(String, Vec<DeltaPoly>)>, AnalysisError> {
        Ok(match &s.kind {
            StmtKind::Assign {
                target: LValue::Var(x),
                expr,
            } => Some((x.clone(), self.expr(expr, s.span))),
            StmtKind::Assign {
                target: LValue::Index(a, _),
                expr,
            } => {
                let mut col = self.expr(expr, s.span);
                col[self.idx(a)].add_assign(&DeltaPoly::constant(M));
                Some((a.clone(), col))
            }
            StmtKind::Call {
                target,
                callee,
                args,
            } => {
                let summary = self
                    .summaries
                    .get(callee)
                    .ok_or_else(|| AnalysisError::UnknownCallee(callee.clone()))?;
                if summary.params.len() != args.len() {
                    return Err(AnalysisError::ArityMismatch {
                        callee: callee.clone(),
                        expected: summary.params.len(),
                        got: args.len(),
                    });
                }
                if summary.result.contains(&MwpScalar::Inf) && !self.failures.contains(&Vec::new())
                {
                    self.failures.push(Vec::new());
                }
                let mut col = vec![DeltaPoly::zero(); self.vars.len()];
                for (k, a) in args.iter().enumerate() {
                    let v = self.expr(a, s.span);
                    let c = summary.result[k];
                    for (acc, e) in col.iter_mut().zip(&v) {
                        acc.add_assign(&e.scale(c));
                    }
                }
                Some((target.clone(), col))
            }
            _ => None,
        })
    }

    /// Matrix of a single statement.
    pub fn stmt(&mut self, s: &Stmt) -> Result<MwpMatrix, AnalysisError> {
        let mut acc = MwpMatrix::identity(self.vars.clone());
        self.append(&mut acc, s)?;
        Ok(acc)
    }

    fn compound(&mut self, s: &Stmt) -> Result<MwpMatrix, AnalysisError> {
        match &s.kind {
            StmtKind::If {
                then_branch,
                else_branch,
                ..
            } => {
                let t = self.block(then_branch)?;
                let e = self.block(else_branch)?;
                Ok(t.add(&e)?)
            }
            StmtKind::While { body, .. } => {
                let b = self.block(body)?;
                let mut s = b.star_sparse()?;
                for k in 0..s.dim() {
                    let added = inject(&mut s, k, k, |c| c > M);
                    self.record(added);
                }
                for i in 0..s.dim() {
                    for j in 0..s.dim() {
                        let added = inject(&mut s, i, j, |c| c == P);
                        self.record(added);
                    }
                }
                Ok(s)
            }
            StmtKind::For {
                counter,
                init,
                bound,
                body,
            } => {
                let init_col = init.as_ref().map(|e| self.expr(e, s.span));
                let b = self.block(body)?;
                let mut st = b.star_sparse()?;
                let n = st.dim();
                for k in 0..n {
                    let added = inject(&mut st, k, k, |c| c > M);
                    self.record(added);
                }
                let (ci, li) = (self.idx(counter), self.idx(bound));
                for j in 0..n {
                    let mut extra = DeltaPoly::zero();
                    for i in 0..n {
                        for mono in st.get(i, j).monomials() {
                            if mono.coeff >= P {
                                extra.add_assign(&DeltaPoly::monomial(P, mono.deltas.clone()));
                            }
                        }
                    }
                    if !extra.is_zero() {
                        st.get_mut(li, j).add_assign(&extra);
                    }
                }
                // The counter's values stay within max(|initial|, |bound|):
                // what flows from it is also charged to the bound, and its
                // final value is bounded by both.
                let mut jm = MwpMatrix::identity(self.vars.clone());
                jm.set(li, ci, DeltaPoly::constant(M));
                let lp = jm.mul(&st)?.mul(&jm)?;
                match init_col {
                    Some(col) => {
                        let mut pre = MwpMatrix::identity(self.vars.clone());
                        pre.set_column(ci, col);
                        Ok(pre.mul(&lp)?)
                    }
                    None => Ok(lp),
                }
            }
            StmtKind::Sections(secs) => {
                let mut acc = MwpMatrix::identity(self.vars.clone());
                for sec in secs {
                    for st in sec {
                        self.append(&mut acc, st)?;
                    }
                }
                Ok(acc)
            }
            StmtKind::Assign { .. } | StmtKind::Call { .. } => unreachable!("column statement"),
        }
    }
}

/// Column contributed by `e` over `vars`; `counter` is the next choice-point
/// id and is advanced past the points this expression allocates.
pub fn analyze_expr(e: &Expr, vars: &[String], counter: &mut u32) -> MwpVector {
    let none = BTreeMap::new();
    let mut a = Analyzer::new(vars.to_vec(), &none);
    a.points = vec![Span::default(); *counter as usize];
    let entries = a.expr(e, Span::default());
    *counter = a.points.len() as u32;
    MwpVector {
        vars: vars.to_vec(),
        entries,
    }
}

/// Matrix of one statement, numbering choice points from 0.
pub fn analyze_stmt(
    s: &Stmt,
    vars: &[String],
    summaries: &BTreeMap<String, FunctionSummary>,
) -> Result<MwpMatrix, AnalysisError> {
    Analyzer::new(vars.to_vec(), summaries).stmt(s)
}

/// Matrix of a statement sequence, numbering choice points from 0.
pub fn analyze_block(
    block: &[Stmt],
    vars: &[String],
    summaries: &BTreeMap<String, FunctionSummary>,
) -> Result<MwpMatrix, AnalysisError> {
    Analyzer::new(vars.to_vec(), summaries).block(block)
}
