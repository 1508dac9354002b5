//! Empirical growth classification by running at increasing input scales.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::{run, InterpError, Store};
use crate::frontend::Program;

/// `maxAbs` per variable, one row per input scale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthTable {
    pub rows: Vec<(i64, BTreeMap<String, BigInt>)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthClass {
    Polynomial,
    SuperPolynomial,
}

/// Base-2 logarithm of `|v|`, accurate for values far beyond `f64` range.
pub fn log2_abs(v: &BigInt) -> f64 {
    let a = v.abs();
    let bits = a.bits();
    if bits <= 60 {
        return a.to_f64().unwrap_or(0.0).log2();
    }
    let shift = bits - 60;
    let top: BigInt = &a >> shift;
    top.to_f64().unwrap_or(1.0).log2() + shift as f64
}

/// Runs `entry` with every parameter set to each scale in turn.
pub fn growth_probe(
    program: &Program,
    entry: &str,
    scales: &[i64],
    fuel: u64,
) -> Result<GrowthTable, InterpError> {
    let f = program
        .function(entry)
        .ok_or_else(|| InterpError::UnknownFunction(entry.to_string()))?;
    let mut rows = Vec::new();
    for &s in scales {
        let mut inputs = Store::new();
        for p in &f.params {
            inputs.scalars.insert(p.clone(), BigInt::from(s));
        }
        let r = run(program, entry, &inputs, fuel)?;
        rows.push((s, r.max_abs));
    }
    Ok(GrowthTable { rows })
}

impl GrowthTable {
    /// Log-log slopes of the largest value, between consecutive scales.
    pub fn slopes(&self) -> Vec<f64> {
        let peak: Vec<(f64, f64)> = self
            .rows
            .iter()
            .map(|(s, m)| {
                let top = m.values().map(log2_abs).fold(1.0f64, f64::max);
                ((*s as f64).log2(), top)
            })
            .collect();
        peak.windows(2)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect()
    }
}

/// A polynomial has bounded log-log slope; an exponential's slope keeps
/// climbing (roughly doubling with each doubling of the scale).
pub fn classify_growth(table: &GrowthTable) -> GrowthClass {
    let slopes = table.slopes();
    let (Some(first), Some(last)) = (slopes.first(), slopes.last()) else {
        return GrowthClass::Polynomial;
    };
    let increasing = slopes.windows(2).all(|w| w[1] > w[0]);
    if increasing && *last > 2.0 * first + 1.0 && *last > 4.0 {
        GrowthClass::SuperPolynomial
    } else {
        GrowthClass::Polynomial
    }
}
