//! Choice-indexed polynomials over the flow semiring.
//!
//! A [`DeltaPoly`] represents a function from choice assignments to
//! [`MwpScalar`]: under an assignment it evaluates to the join of the
//! coefficients of every monomial whose deltas all agree with it. Keeping one
//! polynomial per matrix entry replaces enumerating one scalar matrix per
//! combination of choices.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use super::{AlgebraError, MwpScalar};

/// `δ(choice, index)`: valid only when choice point `index` takes `choice`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Delta {
    pub choice: u8,
    pub index: u32,
}

impl Delta {
    pub fn new(choice: u8, index: u32) -> Delta {
        debug_assert!(choice < 3);
        Delta { choice, index }
    }
}

impl Ord for Delta {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.index, self.choice).cmp(&(other.index, other.choice))
    }
}

impl PartialOrd for Delta {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for Delta {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (self.choice, self.index).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Delta {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (choice, index) = <(u8, u32)>::deserialize(d)?;
        if choice > 2 {
            return Err(serde::de::Error::custom("choice must be 0, 1 or 2"));
        }
        Ok(Delta { choice, index })
    }
}

/// Total map from choice-point index to the option taken there.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChoiceAssignment(pub BTreeMap<u32, u8>);

impl ChoiceAssignment {
    /// Assignment `0 ↦ values[0], 1 ↦ values[1], ...`.
    pub fn from_slice(values: &[u8]) -> Self {
        ChoiceAssignment(
            values
                .iter()
                .enumerate()
                .map(|(i, &c)| (i as u32, c))
                .collect(),
        )
    }

    pub fn get(&self, index: u32) -> Option<u8> {
        self.0.get(&index).copied()
    }

    pub fn satisfies(&self, d: Delta) -> Result<bool, AlgebraError> {
        match self.get(d.index) {
            Some(c) => Ok(c == d.choice),
            None => Err(AlgebraError::MissingChoice(d.index)),
        }
    }

    /// Choices in index order, for compact display.
    pub fn values(&self) -> Vec<u8> {
        self.0.values().copied().collect()
    }
}

/// Enumerates all `3^k` assignments of choice points `0..k`.
pub fn all_assignments(k: u32) -> impl Iterator<Item = ChoiceAssignment> {
    let total = 3u64.pow(k);
    (0..total).map(move |mut code| {
        let mut m = BTreeMap::new();
        for i in 0..k {
            m.insert(i, (code % 3) as u8);
            code /= 3;
        }
        ChoiceAssignment(m)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub coeff: MwpScalar,
    /// Sorted by index, at most one delta per index.
    pub deltas: DeltaSet,
}

/// Delta list of a monomial; short lists stay inline.
pub type DeltaSet = SmallVec<[Delta; 2]>;

impl Monomial {
    /// Builds a monomial; `None` when it is zero or its deltas contradict.
    pub fn new(coeff: MwpScalar, deltas: impl Into<DeltaSet>) -> Option<Monomial> {
        if coeff.is_zero() {
            return None;
        }
        let mut deltas = deltas.into();
        deltas.sort();
        deltas.dedup();
        if deltas.windows(2).any(|w| w[0].index == w[1].index) {
            return None;
        }
        Some(Monomial { coeff, deltas })
    }

    pub fn constant(coeff: MwpScalar) -> Option<Monomial> {
        Monomial::new(coeff, DeltaSet::new())
    }

    /// Product, or `None` when the delta sets disagree at some index.
    pub fn product(&self, other: &Monomial) -> Option<Monomial> {
        let coeff = self.coeff * other.coeff;
        if coeff.is_zero() {
            return None;
        }
        let (a, b) = (&self.deltas, &other.deltas);
        let mut deltas = DeltaSet::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].index.cmp(&b[j].index) {
                Ordering::Less => {
                    deltas.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    deltas.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    if a[i].choice != b[j].choice {
                        return None;
                    }
                    deltas.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        deltas.extend_from_slice(&a[i..]);
        deltas.extend_from_slice(&b[j..]);
        Some(Monomial { coeff, deltas })
    }

    /// True when `self`'s deltas are a subset of `other`'s.
    fn deltas_subset_of(&self, other: &[Delta]) -> bool {
        subset(&self.deltas, other)
    }

    /// `other` makes `self` redundant: fewer constraints, no smaller coefficient.
    pub fn dominated_by(&self, other: &Monomial) -> bool {
        other.coeff >= self.coeff && other.deltas_subset_of(&self.deltas)
    }

    pub fn matches(&self, sigma: &ChoiceAssignment) -> Result<bool, AlgebraError> {
        let mut all = true;
        for &d in &self.deltas {
            if !sigma.satisfies(d)? {
                all = false;
            }
        }
        Ok(all)
    }
}

fn subset(small: &[Delta], big: &[Delta]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut j = 0;
    for d in small {
        while j < big.len() && big[j].index < d.index {
            j += 1;
        }
        if j == big.len() || big[j] != *d {
            return false;
        }
        j += 1;
    }
    true
}

/// Canonical choice-indexed polynomial; the empty polynomial is `O`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct DeltaPoly {
    monos: Vec<Monomial>,
}

impl DeltaPoly {
    pub fn zero() -> DeltaPoly {
        DeltaPoly::default()
    }

    pub fn constant(c: MwpScalar) -> DeltaPoly {
        DeltaPoly {
            monos: Monomial::constant(c).into_iter().collect(),
        }
    }

    pub fn monomial(coeff: MwpScalar, deltas: impl Into<DeltaSet>) -> DeltaPoly {
        DeltaPoly::from_monomials(Monomial::new(coeff, deltas))
    }

    pub fn from_monomials(monos: impl IntoIterator<Item = Monomial>) -> DeltaPoly {
        let mut p = DeltaPoly {
            monos: monos.into_iter().collect(),
        };
        p.canonicalize();
        p
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monos
    }

    pub fn is_zero(&self) -> bool {
        self.monos.is_empty()
    }

    /// Exactly the constant `c`.
    pub fn is_constant(&self, c: MwpScalar) -> bool {
        match self.monos.as_slice() {
            [] => c.is_zero(),
            [m] => m.deltas.is_empty() && m.coeff == c,
            _ => false,
        }
    }

    /// Largest coefficient, i.e. the join over every assignment.
    pub fn max_coeff(&self) -> MwpScalar {
        self.monos
            .iter()
            .map(|m| m.coeff)
            .max()
            .unwrap_or(MwpScalar::O)
    }

    pub fn indices(&self) -> BTreeSet<u32> {
        self.monos
            .iter()
            .flat_map(|m| m.deltas.iter().map(|d| d.index))
            .collect()
    }

    pub fn add(&self, other: &DeltaPoly) -> DeltaPoly {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        DeltaPoly::from_monomials(self.monos.iter().chain(other.monos.iter()).cloned())
    }

    /// Sum of many polynomials, canonicalized once.
    pub fn sum(terms: impl IntoIterator<Item = DeltaPoly>) -> DeltaPoly {
        let mut terms = terms.into_iter().filter(|t| !t.is_zero());
        let Some(first) = terms.next() else {
            return DeltaPoly::zero();
        };
        let mut monos = first.monos;
        let mut merged = false;
        for t in terms {
            monos.extend(t.monos);
            merged = true;
        }
        if !merged {
            return DeltaPoly { monos };
        }
        DeltaPoly::from_monomials(monos)
    }

    pub fn add_assign(&mut self, other: &DeltaPoly) {
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = other.clone();
            return;
        }
        self.monos.extend(other.monos.iter().cloned());
        self.canonicalize();
    }

    pub fn mul(&self, other: &DeltaPoly) -> DeltaPoly {
        if self.is_zero() || other.is_zero() {
            return DeltaPoly::zero();
        }
        if other.is_constant(MwpScalar::M) {
            return self.clone();
        }
        if self.is_constant(MwpScalar::M) {
            return other.clone();
        }
        let mut out = Vec::with_capacity(self.monos.len() * other.monos.len());
        for a in &self.monos {
            for b in &other.monos {
                if let Some(m) = a.product(b) {
                    out.push(m);
                }
            }
        }
        DeltaPoly::from_monomials(out)
    }

    /// Multiplies every coefficient by the scalar `c`.
    pub fn scale(&self, c: MwpScalar) -> DeltaPoly {
        if c.is_zero() {
            return DeltaPoly::zero();
        }
        if c == MwpScalar::M {
            return self.clone();
        }
        DeltaPoly::from_monomials(self.monos.iter().map(|m| Monomial {
            coeff: m.coeff * c,
            deltas: m.deltas.clone(),
        }))
    }

    /// Restricts the polynomial to assignments extending `d`.
    pub fn guard(&self, d: Delta) -> DeltaPoly {
        let g = DeltaPoly::monomial(MwpScalar::M, vec![d]);
        self.mul(&g)
    }

    pub fn eval(&self, sigma: &ChoiceAssignment) -> Result<MwpScalar, AlgebraError> {
        let mut acc = MwpScalar::O;
        for m in &self.monos {
            if m.matches(sigma)? {
                acc = acc + m.coeff;
            }
        }
        Ok(acc)
    }

    /// Restores the canonical form: no zero or contradictory monomials, no
    /// monomial dominated by another, and no monomial whose delta at some
    /// index can be dropped because the other two options at that index are
    /// already covered with at least its coefficient.
    fn canonicalize(&mut self) {
        if self.monos.len() <= 1 {
            return;
        }
        self.remove_dominated();
        if self.monos.iter().all(|m| m.deltas.is_empty()) {
            return;
        }
        while self.lift_once() {
            self.remove_dominated();
        }
    }

    fn remove_dominated(&mut self) {
        let mut monos = std::mem::take(&mut self.monos);
        // Fewer deltas and larger coefficients first, so dominators precede.
        monos.sort_by(|a, b| {
            a.deltas
                .len()
                .cmp(&b.deltas.len())
                .then(b.coeff.cmp(&a.coeff))
                .then(a.deltas.cmp(&b.deltas))
        });
        let mut kept: Vec<Monomial> = Vec::with_capacity(monos.len());
        // A dominator's smallest delta is one of the dominated monomial's.
        let mut by_first: BTreeMap<Delta, Vec<usize>> = BTreeMap::new();
        let mut constant = MwpScalar::O;
        for m in monos {
            let dominated = m.coeff <= constant
                || m.deltas.iter().any(|d| {
                    by_first
                        .get(d)
                        .is_some_and(|ks| ks.iter().any(|&k| m.dominated_by(&kept[k])))
                });
            if dominated {
                continue;
            }
            match m.deltas.first() {
                None => constant = constant.max(m.coeff),
                Some(d) => by_first.entry(*d).or_default().push(kept.len()),
            }
            kept.push(m);
        }
        kept.sort_by(|a, b| a.deltas.cmp(&b.deltas).then(a.coeff.cmp(&b.coeff)));
        self.monos = kept;
    }

    /// One pass of delta elimination. Returns whether anything changed.
    ///
    /// Runs on a domination-free list, so a monomial covering the
    /// alternative `(b, j)` for `μ` must itself contain `(b, j)`.
    fn lift_once(&mut self) -> bool {
        let mut containing: BTreeMap<Delta, Vec<usize>> = BTreeMap::new();
        for (k, m) in self.monos.iter().enumerate() {
            for d in &m.deltas {
                containing.entry(*d).or_default().push(k);
            }
        }
        let mut changed = false;
        for k in 0..self.monos.len() {
            let mut pos = 0;
            while pos < self.monos[k].deltas.len() {
                let mu = &self.monos[k];
                let d = mu.deltas[pos];
                let covered = (0..3u8).filter(|&b| b != d.choice).all(|b| {
                    let alt = Delta::new(b, d.index);
                    containing.get(&alt).is_some_and(|ns| {
                        ns.iter().any(|&n| {
                            let nu = &self.monos[n];
                            nu.coeff >= mu.coeff
                                && subset_replacing(&nu.deltas, &mu.deltas, pos, alt)
                        })
                    })
                });
                if covered {
                    self.monos[k].deltas.remove(pos);
                    changed = true;
                } else {
                    pos += 1;
                }
            }
        }
        changed
    }
}

/// Is `small ⊆ big` once `big[at]` is replaced by `swap` (same index)?
fn subset_replacing(small: &[Delta], big: &[Delta], at: usize, swap: Delta) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut j = 0;
    for d in small {
        while j < big.len() && big[j].index < d.index {
            j += 1;
        }
        let here = if j == at {
            swap
        } else {
            big.get(j).copied().unwrap_or(swap)
        };
        if j == big.len() || here != *d {
            return false;
        }
        j += 1;
    }
    true
}

impl Serialize for DeltaPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.monos.len()))?;
        for m in &self.monos {
            seq.serialize_element(m)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for DeltaPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<Monomial>::deserialize(d)?;
        let mut monos = Vec::with_capacity(raw.len());
        for m in raw {
            if let Some(m) = Monomial::new(m.coeff, m.deltas) {
                monos.push(m);
            }
        }
        Ok(DeltaPoly::from_monomials(monos))
    }
}

impl fmt::Display for DeltaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monos.is_empty() {
            return f.write_str("0");
        }
        for (k, m) in self.monos.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}", m.coeff)?;
            for d in &m.deltas {
                write!(f, ".d({},{})", d.choice, d.index)?;
            }
        }
        Ok(())
    }
}
