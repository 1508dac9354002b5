//! The mwp flow calculus: matrices for statements and functions, loop side
//! conditions, feasibility of choices and function summaries.

mod bound;
mod feasible;
mod rules;
mod summary;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, DeltaPoly, MwpMatrix, MwpScalar};
use crate::frontend::Span;

pub use bound::{bound_report, BoundReport, VarBound};
pub use feasible::FeasibleSet;
pub use rules::{analyze_block, analyze_expr, analyze_stmt, Analyzer};
pub use summary::{analyze_function, analyze_program, FunctionSummary, ProgramAnalysis};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("call to unknown function `{0}`")]
    UnknownCallee(String),
    #[error("`{callee}` expects {expected} argument(s), got {got}")]
    ArityMismatch {
        callee: String,
        expected: usize,
        got: usize,
    },
    #[error("choice assignment is not feasible")]
    InfeasibleChoice,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// The column an expression contributes to the variable it is assigned to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MwpVector {
    pub vars: Vec<String>,
    pub entries: Vec<DeltaPoly>,
}

impl MwpVector {
    pub fn zero(vars: Vec<String>) -> MwpVector {
        let n = vars.len();
        MwpVector {
            vars,
            entries: vec![DeltaPoly::zero(); n],
        }
    }

    pub fn get(&self, var: &str) -> Option<&DeltaPoly> {
        self.vars
            .iter()
            .position(|v| v == var)
            .map(|k| &self.entries[k])
    }
}

/// Result of analyzing one function body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisResult {
    pub function: String,
    pub matrix: MwpMatrix,
    /// Source span of each choice point, indexed by choice-point id.
    pub choice_points: Vec<Span>,
    /// Choice combinations under which some loop side condition fails or a
    /// failing function is called. These stay infeasible even when a later
    /// zero flow erases the `INF` from the matrix.
    pub failures: Vec<Vec<crate::algebra::Delta>>,
    pub feasible: FeasibleSet,
}

/// At most this many feasible assignments are listed in JSON output.
pub const FEASIBLE_LISTING_LIMIT: usize = 100;

impl AnalysisResult {
    pub fn vars(&self) -> &[String] {
        self.matrix.vars()
    }

    pub fn is_feasible(&self) -> bool {
        !self.feasible.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        let listed: Vec<Vec<u8>> = self
            .feasible
            .iter()
            .take(FEASIBLE_LISTING_LIMIT + 1)
            .map(|s| s.values())
            .collect();
        let complete = listed.len() <= FEASIBLE_LISTING_LIMIT;
        let feasible = if listed.is_empty() {
            json!("none")
        } else {
            json!(listed[..listed.len().min(FEASIBLE_LISTING_LIMIT)])
        };
        let bounds: BTreeMap<String, String> = match self.feasible.witness() {
            Some(sigma) => bound_report(self, &sigma)
                .map(|r| {
                    r.vars
                        .iter()
                        .map(|b| (b.var.clone(), b.to_string()))
                        .collect()
                })
                .unwrap_or_default(),
            None => BTreeMap::new(),
        };
        json!({
            "function": self.function,
            "vars": self.vars(),
            "matrix": self.matrix,
            "choice_points": self.choice_points.len(),
            "feasible": feasible,
            "feasible_complete": complete,
            "bounds": bounds,
        })
    }
}

/// Adds `INF·deltas(μ)` at `(i, j)` for every monomial μ of entry `(i, j)`
/// satisfying `hit`, and returns what was added.
fn inject(m: &mut MwpMatrix, i: usize, j: usize, hit: impl Fn(MwpScalar) -> bool) -> DeltaPoly {
    let extra = DeltaPoly::from_monomials(
        m.get(i, j)
            .monomials()
            .iter()
            .filter(|mono| hit(mono.coeff) && mono.coeff != MwpScalar::Inf)
            .filter_map(|mono| crate::algebra::Monomial::new(MwpScalar::Inf, mono.deltas.clone())),
    );
    if !extra.is_zero() {
        m.get_mut(i, j).add_assign(&extra);
    }
    extra
}
