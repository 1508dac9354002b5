use std::fmt;

use serde::Serialize;

use super::{AnalysisError, AnalysisResult};
use crate::algebra::{ChoiceAssignment, MwpScalar};

/// Bound on one variable's final value under a fixed choice assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VarBound {
    pub var: String,
    pub m: Vec<String>,
    pub w: Vec<String>,
    pub p: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub sigma: Vec<u8>,
    pub vars: Vec<VarBound>,
}

impl BoundReport {
    pub fn get(&self, var: &str) -> Option<&VarBound> {
        self.vars.iter().find(|b| b.var == var)
    }
}

pub fn bound_report(
    result: &AnalysisResult,
    sigma: &ChoiceAssignment,
) -> Result<BoundReport, AnalysisError> {
    if !result.feasible.contains(sigma) {
        return Err(AnalysisError::InfeasibleChoice);
    }
    let rows = result.matrix.eval(sigma)?;
    let vars = result.vars();
    let bounds = vars
        .iter()
        .enumerate()
        .map(|(j, x)| {
            let mut b = VarBound {
                var: x.clone(),
                m: Vec::new(),
                w: Vec::new(),
                p: Vec::new(),
            };
            for (i, src) in vars.iter().enumerate() {
                match rows[i][j] {
                    MwpScalar::M => b.m.push(src.clone()),
                    MwpScalar::W => b.w.push(src.clone()),
                    MwpScalar::P => b.p.push(src.clone()),
                    MwpScalar::O => {}
                    MwpScalar::Inf => return Err(AnalysisError::InfeasibleChoice),
                }
            }
            Ok(b)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BoundReport {
        sigma: sigma.values(),
        vars: bounds,
    })
}

impl fmt::Display for VarBound {
    /// `x' ≤ max(m… , poly(w…)) + poly(p…)`, omitting empty parts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}' ≤ ", self.var)?;
        let mut inner: Vec<String> = self.m.clone();
        if !self.w.is_empty() {
            inner.push(format!("poly({})", self.w.join(", ")));
        }
        let has_max = !inner.is_empty();
        if has_max {
            write!(f, "max({})", inner.join(", "))?;
        }
        if !self.p.is_empty() {
            if has_max {
                f.write_str(" + ")?;
            }
            write!(f, "poly({})", self.p.join(", "))?;
        }
        if !has_max && self.p.is_empty() {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.vars {
            writeln!(f, "{b}")?;
        }
        Ok(())
    }
}
