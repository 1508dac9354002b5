//! Input stores: parsing from the command line and random generation.

use num_bigint::BigInt;
use rand::Rng;

use super::Store;
use crate::frontend::{ArrayLen, FunctionDef, LocalKind};

/// Parses `x=3,y=-4` into scalar bindings.
pub fn parse_scalars(spec: &str, into: &mut Store) -> Result<(), String> {
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| format!("expected NAME=VALUE, got `{part}`"))?;
        let v: BigInt = value
            .trim()
            .parse()
            .map_err(|_| format!("`{value}` is not an integer"))?;
        into.scalars.insert(name.trim().to_string(), v);
    }
    Ok(())
}

/// Parses `a=1,2,3` into an array binding.
pub fn parse_array(spec: &str, into: &mut Store) -> Result<(), String> {
    let (name, values) = spec
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=V1,V2,..., got `{spec}`"))?;
    let vals = values
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| {
            v.parse::<BigInt>()
                .map_err(|_| format!("`{v}` is not an integer"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    into.arrays.insert(name.trim().to_string(), vals);
    Ok(())
}

/// Random parameters in `lo..=hi` and random contents for literal-length
/// arrays. Parameters used as array lengths are kept non-negative.
pub fn random_store(f: &FunctionDef, rng: &mut impl Rng, lo: i64, hi: i64) -> Store {
    let mut s = Store::new();
    let lengths: Vec<&str> = f
        .locals
        .iter()
        .filter_map(|l| match &l.kind {
            LocalKind::Array(ArrayLen::Symbolic(n)) => Some(n.as_str()),
            _ => None,
        })
        .collect();
    for p in &f.params {
        let low = if lengths.contains(&p.as_str()) {
            lo.max(0)
        } else {
            lo
        };
        s.scalars
            .insert(p.clone(), BigInt::from(rng.gen_range(low..=hi.max(low))));
    }
    for l in &f.locals {
        if let LocalKind::Array(ArrayLen::Literal(n)) = l.kind {
            let vals = (0..n)
                .map(|_| BigInt::from(rng.gen_range(lo..=hi)))
                .collect();
            s.arrays.insert(l.name.clone(), vals);
        }
    }
    s
}
