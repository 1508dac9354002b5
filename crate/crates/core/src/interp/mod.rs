//! Reference big-step interpreter over arbitrary-precision integers.
//!
//! Step accounting: assignments, calls and `if` cost one step each; every
//! loop-condition evaluation costs one step; a counted loop additionally pays
//! one step for its initializer and one per counter increment. A call also
//! pays for the callee's statements.

mod growth;
mod inputs;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::frontend::{
    ArrayLen, BinOp, CmpOp, Cond, Expr, FunctionDef, LValue, LocalKind, Program, Span, Stmt,
    StmtId, StmtKind,
};

pub use growth::{classify_growth, growth_probe, log2_abs, GrowthClass, GrowthTable};
pub use inputs::{parse_array, parse_scalars, random_store};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Store {
    #[serde(serialize_with = "ser_scalars")]
    pub scalars: BTreeMap<String, BigInt>,
    #[serde(serialize_with = "ser_arrays")]
    pub arrays: BTreeMap<String, Vec<BigInt>>,
}

fn ser_scalars<S: serde::Serializer>(
    m: &BTreeMap<String, BigInt>,
    s: S,
) -> Result<S::Ok, S::Error> {
    let as_str: BTreeMap<&String, String> = m.iter().map(|(k, v)| (k, v.to_string())).collect();
    as_str.serialize(s)
}

fn ser_arrays<S: serde::Serializer>(
    m: &BTreeMap<String, Vec<BigInt>>,
    s: S,
) -> Result<S::Ok, S::Error> {
    let as_str: BTreeMap<&String, Vec<String>> = m
        .iter()
        .map(|(k, v)| (k, v.iter().map(|x| x.to_string()).collect()))
        .collect();
    as_str.serialize(s)
}

impl Store {
    pub fn new() -> Store {
        Store::default()
    }

    pub fn with_scalar(mut self, name: &str, v: impl Into<BigInt>) -> Store {
        self.scalars.insert(name.to_string(), v.into());
        self
    }

    pub fn with_array(mut self, name: &str, values: impl IntoIterator<Item = i64>) -> Store {
        self.arrays.insert(
            name.to_string(),
            values.into_iter().map(BigInt::from).collect(),
        );
        self
    }

    pub fn scalar(&self, name: &str) -> Option<&BigInt> {
        self.scalars.get(name)
    }

    /// Copy keeping only the named variables.
    pub fn restricted_to(&self, names: &[String]) -> Store {
        Store {
            scalars: self
                .scalars
                .iter()
                .filter(|(k, _)| names.contains(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
            arrays: self
                .arrays
                .iter()
                .filter(|(k, _)| names.contains(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub final_store: Store,
    pub steps: u64,
    /// Largest absolute value each entry-function variable ever held.
    pub max_abs: BTreeMap<String, BigInt>,
    /// How many times each statement started executing.
    pub stmt_counts: BTreeMap<StmtId, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("fuel exhausted after {0} steps")]
    FuelExhausted(u64),
    #[error("{span}: index {index} out of bounds for `{array}` of length {len}")]
    IndexOutOfBounds {
        span: Span,
        array: String,
        index: BigInt,
        len: usize,
    },
    #[error("{span}: `{var}` read before being assigned")]
    UninitializedRead { span: Span, var: String },
    #[error("no input given for parameter `{0}`")]
    MissingInput(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

struct Frame {
    scalars: BTreeMap<String, BigInt>,
    arrays: BTreeMap<String, Vec<BigInt>>,
    track: bool,
}

struct Machine<'a> {
    program: &'a Program,
    fuel: u64,
    steps: u64,
    max_abs: BTreeMap<String, BigInt>,
    counts: BTreeMap<StmtId, u64>,
}

/// Runs `entry` on `inputs` with at most `fuel` steps.
///
/// `inputs` must bind every parameter; it may also pre-set other scalar
/// locals and the contents of local arrays (unlisted arrays start zeroed).
pub fn run(
    program: &Program,
    entry: &str,
    inputs: &Store,
    fuel: u64,
) -> Result<RunResult, InterpError> {
    let f = program
        .function(entry)
        .ok_or_else(|| InterpError::UnknownFunction(entry.to_string()))?;
    for name in inputs.scalars.keys() {
        let ok = f.is_param(name)
            || matches!(
                f.local(name).map(|l| &l.kind),
                Some(LocalKind::Scalar { .. })
            );
        if !ok {
            return Err(InterpError::InvalidInput(format!(
                "`{name}` is not a scalar of `{entry}`"
            )));
        }
    }
    for name in inputs.arrays.keys() {
        if !f.is_array(name) {
            return Err(InterpError::InvalidInput(format!(
                "`{name}` is not an array of `{entry}`"
            )));
        }
    }
    let mut m = Machine {
        program,
        fuel,
        steps: 0,
        max_abs: BTreeMap::new(),
        counts: BTreeMap::new(),
    };
    let mut frame = m.enter(f, inputs, true)?;
    m.block(f, &mut frame, &f.body)?;
    Ok(RunResult {
        final_store: Store {
            scalars: frame.scalars,
            arrays: frame.arrays,
        },
        steps: m.steps,
        max_abs: m.max_abs,
        stmt_counts: m.counts,
    })
}

impl<'a> Machine<'a> {
    fn enter(
        &mut self,
        f: &FunctionDef,
        inputs: &Store,
        track: bool,
    ) -> Result<Frame, InterpError> {
        let mut frame = Frame {
            scalars: BTreeMap::new(),
            arrays: BTreeMap::new(),
            track,
        };
        for p in &f.params {
            let v = inputs
                .scalars
                .get(p)
                .ok_or_else(|| InterpError::MissingInput(p.clone()))?;
            self.write_scalar(&mut frame, p, v.clone());
        }
        for l in &f.locals {
            match &l.kind {
                LocalKind::Scalar { .. } => {
                    if let Some(v) = inputs.scalars.get(&l.name) {
                        self.write_scalar(&mut frame, &l.name, v.clone());
                    }
                }
                LocalKind::Const(v) => {
                    frame.scalars.insert(l.name.clone(), BigInt::from(*v));
                }
                LocalKind::Array(_) => {}
            }
        }
        for l in &f.locals {
            let LocalKind::Array(len) = &l.kind else {
                continue;
            };
            let len = match len {
                ArrayLen::Literal(n) => *n as usize,
                ArrayLen::Symbolic(n) => {
                    let v = frame.scalars.get(n).ok_or_else(|| {
                        InterpError::InvalidInput(format!("length `{n}` of `{}` unset", l.name))
                    })?;
                    v.to_usize().ok_or_else(|| {
                        InterpError::InvalidInput(format!("bad length {v} for `{}`", l.name))
                    })?
                }
            };
            let data = match inputs.arrays.get(&l.name) {
                Some(given) if given.len() == len => given.clone(),
                Some(given) => {
                    return Err(InterpError::InvalidInput(format!(
                        "`{}` has length {len}, {} values given",
                        l.name,
                        given.len()
                    )))
                }
                None => vec![BigInt::zero(); len],
            };
            if track {
                let m = data.iter().map(|v| v.abs()).max().unwrap_or_default();
                self.bump_max(&l.name, m);
            }
            frame.arrays.insert(l.name.clone(), data);
        }
        Ok(frame)
    }

    fn tick(&mut self) -> Result<(), InterpError> {
        if self.steps >= self.fuel {
            return Err(InterpError::FuelExhausted(self.steps));
        }
        self.steps += 1;
        Ok(())
    }

    fn bump_max(&mut self, name: &str, v: BigInt) {
        match self.max_abs.get_mut(name) {
            Some(cur) => {
                if v > *cur {
                    *cur = v;
                }
            }
            None => {
                self.max_abs.insert(name.to_string(), v);
            }
        }
    }

    fn write_scalar(&mut self, frame: &mut Frame, name: &str, v: BigInt) {
        if frame.track {
            self.bump_max(name, v.abs());
        }
        frame.scalars.insert(name.to_string(), v);
    }

    fn block(
        &mut self,
        f: &FunctionDef,
        frame: &mut Frame,
        block: &[Stmt],
    ) -> Result<(), InterpError> {
        for s in block {
            self.stmt(f, frame, s)?;
        }
        Ok(())
    }

    fn stmt(&mut self, f: &FunctionDef, frame: &mut Frame, s: &Stmt) -> Result<(), InterpError> {
        *self.counts.entry(s.id).or_insert(0) += 1;
        match &s.kind {
            StmtKind::Assign { target, expr } => {
                self.tick()?;
                let v = eval(frame, expr, s.span)?;
                match target {
                    LValue::Var(x) => self.write_scalar(frame, x, v),
                    LValue::Index(a, idx) => {
                        let i = eval(frame, idx, s.span)?;
                        let arr = frame.arrays.get_mut(a).expect("validated array");
                        let len = arr.len();
                        let slot = i.to_usize().filter(|&k| k < len).ok_or_else(|| {
                            InterpError::IndexOutOfBounds {
                                span: s.span,
                                array: a.clone(),
                                index: i.clone(),
                                len,
                            }
                        })?;
                        arr[slot] = v.clone();
                        if frame.track {
                            self.bump_max(a, v.abs());
                        }
                    }
                }
            }
            StmtKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                self.tick()?;
                if eval_cond(frame, cond, s.span)? {
                    self.block(f, frame, then_branch)?;
                } else {
                    self.block(f, frame, else_branch)?;
                }
            }
            StmtKind::While { cond, body } => loop {
                self.tick()?;
                if !eval_cond(frame, cond, s.span)? {
                    break;
                }
                self.block(f, frame, body)?;
            },
            StmtKind::For {
                counter,
                init,
                bound,
                body,
            } => {
                if let Some(e) = init {
                    self.tick()?;
                    let v = eval(frame, e, s.span)?;
                    self.write_scalar(frame, counter, v);
                }
                loop {
                    self.tick()?;
                    let i = read(frame, counter, s.span)?;
                    let n = read(frame, bound, s.span)?;
                    if i >= n {
                        break;
                    }
                    self.block(f, frame, body)?;
                    self.tick()?;
                    let next = read(frame, counter, s.span)? + 1;
                    self.write_scalar(frame, counter, next);
                }
            }
            StmtKind::Call {
                target,
                callee,
                args,
            } => {
                self.tick()?;
                let g = self
                    .program
                    .function(callee)
                    .ok_or_else(|| InterpError::UnknownFunction(callee.clone()))?;
                let mut inputs = Store::new();
                for (p, a) in g.params.iter().zip(args) {
                    inputs.scalars.insert(p.clone(), eval(frame, a, s.span)?);
                }
                let mut callee_frame = self.enter(g, &inputs, false)?;
                self.block(g, &mut callee_frame, &g.body)?;
                let ret = g.ret.as_ref().expect("validated call to int function");
                let v = read(&callee_frame, ret, g.span)?;
                self.write_scalar(frame, target, v);
            }
            StmtKind::Sections(sections) => {
                self.tick()?;
                for sec in sections {
                    self.block(f, frame, sec)?;
                }
            }
        }
        Ok(())
    }
}

fn read(frame: &Frame, name: &str, span: Span) -> Result<BigInt, InterpError> {
    frame
        .scalars
        .get(name)
        .cloned()
        .ok_or_else(|| InterpError::UninitializedRead {
            span,
            var: name.to_string(),
        })
}

fn eval(frame: &Frame, e: &Expr, span: Span) -> Result<BigInt, InterpError> {
    Ok(match e {
        Expr::Var(v) => read(frame, v, span)?,
        Expr::Const(c) => BigInt::from(*c),
        Expr::Bin(op, l, r) => {
            let (a, b) = (eval(frame, l, span)?, eval(frame, r, span)?);
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
            }
        }
        Expr::Index(a, idx) => {
            let i = eval(frame, idx, span)?;
            let arr = &frame.arrays[a];
            i.to_usize()
                .and_then(|k| arr.get(k))
                .cloned()
                .ok_or_else(|| InterpError::IndexOutOfBounds {
                    span,
                    array: a.clone(),
                    index: i.clone(),
                    len: arr.len(),
                })?
        }
    })
}

fn eval_cond(frame: &Frame, c: &Cond, span: Span) -> Result<bool, InterpError> {
    Ok(match c {
        Cond::Cmp(op, l, r) => {
            let (a, b) = (eval(frame, l, span)?, eval(frame, r, span)?);
            match op {
                CmpOp::Lt => a < b,
                CmpOp::Le => a <= b,
                CmpOp::Gt => a > b,
                CmpOp::Ge => a >= b,
                CmpOp::Eq => a == b,
                CmpOp::Ne => a != b,
            }
        }
        Cond::And(a, b) => eval_cond(frame, a, span)? && eval_cond(frame, b, span)?,
        Cond::Or(a, b) => eval_cond(frame, a, span)? || eval_cond(frame, b, span)?,
        Cond::Not(inner) => !eval_cond(frame, inner, span)?,
    })
}
